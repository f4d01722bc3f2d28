use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("survival probability p = {0} outside [0, 1)")]
    PInvalid(f64),
    #[error("vertex count N = {0} too small")]
    NInvalid(usize),
    #[error("round cap of {cap} rounds exceeded")]
    RoundCapExceeded { cap: u64 },
    #[error("replica {replica}: round cap of {cap} rounds exceeded")]
    ReplicaRoundCapExceeded { replica: u64, cap: u64 },
    #[error("revisit band {band} / n = {n} exceeds the survival mass at p = {p}")]
    BandOverflow { p: f64, n: usize, band: f64 },
    #[error("revisit band {band} outside [0, {n}]")]
    BandInvalid { band: f64, n: usize },
    #[error("N = {n_vertices} above the exact-distribution feasibility bound {bound}")]
    FeasibilityExceeded { n_vertices: usize, bound: usize },
    #[error("offspring law ({0}, {1}, {2}) is not a probability vector")]
    LawInvalid(f64, f64, f64),
    #[error("fixed-point iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("no replicas requested")]
    EmptyRun,
    #[error("p = {0} is not supercritical (need 1/2 < p < 1)")]
    SubcriticalP(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("round index {k} outside [{lo}, {hi}]")]
    Range { k: u64, lo: f64, hi: f64 },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("invalid graph: {0}")]
    GraphInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
