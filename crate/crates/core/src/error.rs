use thiserror::Error;

use crate::geometry::CPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("compact set touches or leaves the domain (gap {gap})")]
    NonpositiveGap { gap: f64 },

    #[error("point {0:?} lies outside the domain")]
    OutsideDomain(CPoint),

    #[error("operation not supported for this geometry: {0}")]
    UnsupportedGeometry(&'static str),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("solver did not converge after {iterations} sweeps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("value out of range: {0}")]
    RangeError(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the envelope (h-sum {h_sum} >= {k})")]
    OutsideEnvelope { h_sum: f64, k: usize },

    #[error("degenerate witness request: h-sum {h_sum} is not in (k-1, k) for k = {k}")]
    Degenerate { h_sum: f64, k: usize },

    #[error("factor {0} has zero extremal value; reduce zero factors first")]
    ZeroFactor(usize),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("weight construction failed: sum of caps {caps_sum} does not exceed k = {k}")]
    CapSumTooSmall { caps_sum: f64, k: usize },

    #[error("aliasing suspected: top coefficient {top:e} exceeds {limit:e}")]
    AliasingSuspected { top: f64, limit: f64 },

    #[error("two-constants bound violated at base {point:?}, m = {m}, excess factor {excess}")]
    BoundViolated {
        point: Vec<CPoint>,
        m: usize,
        excess: f64,
    },

    #[error("series does not converge at query point (tail ratio {ratio})")]
    NotConverged { ratio: f64 },

    #[error("input is not separately holomorphic: {0}")]
    NotSeparatelyHolomorphic(String),

    #[error("recursion budget exceeded: N = {0} > 4")]
    RecursionBudget(usize),

    #[error("maximum principle violated at {point:?}: |f^| = {value} > {bound}")]
    MaxPrincipleViolated {
        point: Vec<CPoint>,
        value: f64,
        bound: f64,
    },

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::NonpositiveGap { .. } => "NonpositiveGap",
            Error::OutsideDomain(_) => "OutsideDomain",
            Error::UnsupportedGeometry(_) => "UnsupportedGeometry",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::EmptyInput => "EmptyInput",
            Error::RangeError(_) => "RangeError",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::OutsideEnvelope { .. } => "OutsideEnvelope",
            Error::Degenerate { .. } => "Degenerate",
            Error::ZeroFactor(_) => "ZeroFactor",
            Error::InconsistentInput(_) => "InconsistentInput",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::CapSumTooSmall { .. } => "CapSumTooSmall",
            Error::AliasingSuspected { .. } => "AliasingSuspected",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::NotConverged { .. } => "NotConverged",
            Error::NotSeparatelyHolomorphic(_) => "NotSeparatelyHolomorphic",
            Error::RecursionBudget(_) => "RecursionBudget",
            Error::MaxPrincipleViolated { .. } => "MaxPrincipleViolated",
            Error::NonFinite(_) => "NonFinite",
        }
    }

    /// True for errors caused by the request itself rather than by a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGeometry(_)
                | Error::NonpositiveGap { .. }
                | Error::UnsupportedGeometry(_)
                | Error::GridTooCoarse(_)
                | Error::EmptyInput
                | Error::RangeError(_)
                | Error::DimensionMismatch { .. }
                | Error::OutsideEnvelope { .. }
                | Error::Degenerate { .. }
                | Error::ZeroFactor(_)
                | Error::InconsistentInput(_)
                | Error::RecursionBudget(_)
        )
    }
}
