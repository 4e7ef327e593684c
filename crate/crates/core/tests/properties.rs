use nkcross::cross::{
    decompose, envelope_slice, member_cross, member_envelope, ClosedForm, CrossPoint, CrossSpec,
};
use nkcross::extend::{
    extend_nk, sample_cross_point, two_constants_bound, CrossFunction, ExtendOptions, HartogsExtension,
};
use nkcross::extremal::{h_closed_form, sublevel};
use nkcross::geometry::{CPoint, CompactSet, Condenser, Grid, Mask, PlanarDomain, Rect};
use nkcross::lemma_lab::{
    lemma2_upper_bound, lemma2_value, lemma2_witness, sub_mean_value_defect, WITNESS_TOL,
};
use nkcross::sampling::{random_in_disc, random_in_rect};
use nkcross::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const O: CPoint = CPoint::ORIGIN;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the polydisc of outer radius 1.05, so some coordinates fall outside D.
fn random_point(rng: &mut ChaCha8Rng, n: usize) -> CrossPoint {
    CrossPoint((0..n).map(|_| random_in_disc(rng, O, 1.05)).collect())
}

fn in_envelope(z: &CrossPoint, spec: &CrossSpec) -> bool {
    member_envelope(z, spec, &ClosedForm).unwrap_or(false)
}

fn condensers() -> Vec<Condenser> {
    let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 65, 65).unwrap();
    vec![
        Condenser::concentric_discs(O, 0.2, 1.0).unwrap(),
        Condenser::new(
            CompactSet::closed_annulus(O, 0.4, 0.5).unwrap(),
            PlanarDomain::annulus(O, 0.1, 1.0).unwrap(),
        )
        .unwrap(),
        Condenser::new(
            CompactSet::grid_mask(Mask::from_fn(g, |p| {
                p.dist(CPoint::new(0.4, 0.0)) <= 0.15 || p.dist(CPoint::new(-0.4, 0.0)) <= 0.15
            }))
            .unwrap(),
            PlanarDomain::disc(O, 1.0).unwrap(),
        )
        .unwrap(),
    ]
}

#[test]
fn compact_part_lies_in_domain() {
    let mut rng = rng(1);
    for c in condensers() {
        assert!(c.boundary_gap() > 0.0);
        let bbox = c.d().bbox();
        for _ in 0..10_000 {
            let z = random_in_rect(&mut rng, &bbox);
            assert!(!c.a().contains(z) || c.d().contains(z), "{z:?}");
        }
    }
}

#[test]
fn nesting_in_order() {
    let mut rng = rng(2);
    let spec = CrossSpec::uniform_discs(4, 1, 0.2, 1.0).unwrap();
    for _ in 0..10_000 {
        let z = random_point(&mut rng, 4);
        for k in 2..=4 {
            let lo = spec.with_order(k - 1).unwrap();
            let hi = spec.with_order(k).unwrap();
            if member_cross(&z, &lo).unwrap() {
                assert!(member_cross(&z, &hi).unwrap());
            }
            if in_envelope(&z, &lo) {
                assert!(in_envelope(&z, &hi));
            }
        }
    }
}

#[test]
fn product_cross_envelope_sandwich() {
    let mut rng = rng(3);
    for (n, k) in [(2, 1), (3, 2), (4, 2)] {
        let spec = CrossSpec::uniform_discs(n, k, 0.2, 1.0).unwrap();
        for i in 0..10_000 {
            // alternate between generic points and points of the cross itself
            let z = if i % 2 == 0 {
                random_point(&mut rng, n)
            } else {
                sample_cross_point(&mut rng, &spec).unwrap()
            };
            let in_product = z.coords().iter().all(|p| p.dist(O) <= 0.2);
            let in_cross = member_cross(&z, &spec).unwrap();
            if in_product {
                assert!(in_cross);
            }
            if in_cross {
                assert!(in_envelope(&z, &spec), "{z:?}");
            }
        }
    }
}

#[test]
fn decomposition_matches_direct_membership() {
    let mut rng = rng(4);
    for (n, k) in [(3, 2), (4, 2), (4, 3)] {
        let spec = CrossSpec::uniform_discs(n, k, 0.2, 1.0).unwrap();
        let dec = decompose(&spec).unwrap();
        for i in 0..10_000 {
            let z = if i % 2 == 0 {
                random_point(&mut rng, n)
            } else {
                sample_cross_point(&mut rng, &spec).unwrap()
            };
            assert_eq!(dec.contains(&z).unwrap(), member_cross(&z, &spec).unwrap(), "{z:?}");
        }
    }
}

#[test]
fn exhaustion_is_monotone() {
    let mut rng = rng(5);
    let specs: Vec<CrossSpec> = (0..5)
        .map(|i| {
            let t = i as f64 / 4.0;
            CrossSpec::uniform_discs(3, 2, 0.1 + 0.1 * t, 0.8 + 0.2 * t).unwrap()
        })
        .collect();
    for _ in 0..10_000 {
        let z = random_point(&mut rng, 3);
        let verdicts: Vec<bool> = specs.iter().map(|s| in_envelope(&z, s)).collect();
        assert!(verdicts.windows(2).all(|w| !w[0] || w[1]), "{z:?}: {verdicts:?}");
    }
}

#[test]
fn envelope_slices_are_connected() {
    let spec = CrossSpec::uniform_discs(2, 1, 0.2, 1.0).unwrap();
    let g = Grid::covering(Rect::square(O, 1.0).unwrap(), 129, 129).unwrap();
    for x in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9] {
        let mask = envelope_slice(&spec, &ClosedForm, 0, &[CPoint::new(x, 0.2)], &g).unwrap();
        assert!(mask.count() > 0);
        assert!(mask.is_connected(), "slice at {x}");
    }
}

#[test]
fn trivial_region_is_exactly_zero() {
    let mut rng = rng(6);
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(2..=n);
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let sum: f64 = h.iter().sum();
        match lemma2_value(&h, k) {
            Ok(v) => assert_eq!(v == 0.0, sum <= k as f64 - 1.0, "{h:?} {k}"),
            Err(e) => assert!(matches!(e, Error::OutsideEnvelope { .. })),
        }
    }
}

#[test]
fn envelope_formula_is_sub_mean_valued() {
    let mut rng = rng(7);
    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0).unwrap();
    let mut checked = 0;
    while checked < 1000 {
        let z = CrossPoint((0..3).map(|_| random_in_disc(&mut rng, O, 0.9)).collect());
        let j = rng.gen_range(0..3);
        let room = 1.0 - z.coords()[j].dist(O);
        let radius = rng.gen_range(0.01..room.min(0.3));
        let d = sub_mean_value_defect(&spec, &z, j, radius, 64).unwrap();
        assert!(d <= 1e-6, "{z:?} j={j} rho={radius}: {d}");
        checked += 1;
    }
}

#[test]
fn extension_restricts_to_input_and_covers_envelope() {
    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0).unwrap();
    let g = |z: &[Complex64]| 1.0 / (Complex64::new(4.0, 0.0) - z.iter().sum::<Complex64>());
    let f = CrossFunction::new(spec.clone(), g).unwrap();
    let ext = extend_nk(&f, &ExtendOptions::default()).unwrap();
    let mut rng = rng(8);
    for _ in 0..200 {
        let z = sample_cross_point(&mut rng, &spec).unwrap();
        assert!((ext.eval(&z).unwrap() - f.eval(&z).unwrap()).norm() < 1e-10);
    }
    for _ in 0..500 {
        let z = random_point(&mut rng, 3);
        let accepted = match ext.eval(&z) {
            Ok(_) => true,
            Err(Error::OutsideEnvelope { .. } | Error::OutsideDomain(_)) => false,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(accepted, in_envelope(&z, &spec), "{z:?}");
    }
}

#[test]
fn coefficients_obey_growth_bound() {
    let spec = CrossSpec::uniform_discs(3, 2, 0.2, 1.0).unwrap();
    let f = CrossFunction::new(spec, |z: &[Complex64]| {
        1.0 / (Complex64::new(4.0, 0.0) - z.iter().sum::<Complex64>())
    })
    .unwrap();
    let hx = HartogsExtension::new(&f, &ExtendOptions::default()).unwrap();
    let mut rng = rng(9);
    let bases: Vec<Vec<CPoint>> = (0..40)
        .map(|_| (0..2).map(|_| random_in_disc(&mut rng, O, 0.99)).collect())
        .collect();
    let rep = two_constants_bound(&hx, &bases).unwrap();
    assert!(rep.worst_log_excess <= 0.0);
    assert!(rep.coefficients > 40);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn witness_invariants(
        raw in proptest::collection::vec(0.001f64..0.999, 2..=5),
        k_pick in 0usize..8,
        t in 0.001f64..0.999,
    ) {
        let n = raw.len();
        let k = 2 + k_pick % (n - 1);
        // rescale so that Σh = k - 1 + t while keeping every entry in (0, 1)
        let sum: f64 = raw.iter().sum();
        let target = k as f64 - 1.0 + t;
        let h: Vec<f64> = raw.iter().map(|x| x * target / sum).collect();
        prop_assume!(h.iter().all(|&x| x > 0.0 && x < 1.0));
        let w = lemma2_witness(&h, k).unwrap();
        prop_assert!(w.validate(WITNESS_TOL).is_ok(), "{:?}", w.validate(WITNESS_TOL));
        let bound = lemma2_upper_bound(&h, k, Some(&w)).unwrap();
        prop_assert!((bound - lemma2_value(&h, k).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn sublevel_rescaling_exact(s in 0.05f64..=1.0, frac in 0.01f64..0.99, rho in 0.0f64..1.0, theta in 0.0f64..6.28) {
        let c = Condenser::concentric_discs(O, 0.2, 1.0).unwrap();
        let r = s * frac;
        let ds = sublevel(&c, s).unwrap();
        let pair = Condenser::new(sublevel(&c, r).unwrap().closure().unwrap(), ds.realization.clone()).unwrap();
        let big = match ds.realization { PlanarDomain::Disc { radius, .. } => radius, _ => unreachable!() };
        let z = CPoint::new(big * rho * theta.cos(), big * rho * theta.sin());
        let lhs = h_closed_form(&pair, z).unwrap();
        let rhs = ((h_closed_form(&c, z).unwrap() - r) / (s - r)).max(0.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_monotone_in_both_sets(r1 in 0.05f64..0.4, dr in 0.0f64..0.3, big in 0.6f64..1.0, dbig in 0.0f64..0.5, rho in 0.0f64..0.6) {
        let small = Condenser::concentric_discs(O, r1, big).unwrap();
        let bigger_a = Condenser::concentric_discs(O, (r1 + dr).min(0.55), big).unwrap();
        let bigger_d = Condenser::concentric_discs(O, r1, big + dbig).unwrap();
        let z = CPoint::new(rho, 0.0);
        let h = h_closed_form(&small, z).unwrap();
        prop_assert!(h_closed_form(&bigger_a, z).unwrap() <= h + 1e-8);
        prop_assert!(h_closed_form(&bigger_d, z).unwrap() <= h + 1e-8);
        prop_assert!((0.0..1.0).contains(&h));
    }

    #[test]
    fn constructible_condensers_have_positive_gap(a in 0.01f64..2.0, extra in 0.001f64..3.0, cx in -5.0f64..5.0, cy in -5.0f64..5.0) {
        let c = Condenser::concentric_discs(CPoint::new(cx, cy), a, a + extra).unwrap();
        prop_assert!(c.boundary_gap() > 0.0);
        prop_assert!((c.boundary_gap() - extra).abs() < 1e-9);
    }
}
