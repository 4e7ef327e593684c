//! Envelope formula max(0, Σh - k + 1) with its weight witness, including a
//! point with a vanishing factor.

use nkcross::lemma_lab::{lemma2_certify, lemma2_upper_bound, lemma2_witness};

fn main() -> nkcross::Result<()> {
    for (h, k) in [(vec![0.5, 0.6, 0.7], 2), (vec![0.0, 0.9, 0.95], 2), (vec![0.9, 0.8, 0.7, 0.45], 3), (vec![0.1, 0.2, 0.3], 2)] {
        let cert = lemma2_certify(&h, k)?;
        println!("h = {h:?}, k = {k}: value {:.6}, bound {:.6}", cert.value, cert.upper_bound);
        if let Some(w) = &cert.witness {
            println!("  r = {:?}\n  s = {:?}", w.r, w.s);
        }
    }
    let h = [0.5, 0.6, 0.7];
    let mut w = lemma2_witness(&h, 2)?;
    w.r[0] += 0.01;
    println!("perturbed witness: {:?}", lemma2_upper_bound(&h, 2, Some(&w)).unwrap_err());
    Ok(())
}
