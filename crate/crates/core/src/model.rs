//! Parameters, per-round outcomes and the deterministic random stream shared
//! by every stochastic module.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Survival probability, complete-graph size and master seed.
///
/// `n_vertices` is the total vertex count `N`; transition probabilities of the
/// auxiliary chain use the neighbour count `n = N - 1` as denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub p: f64,
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub seed: u64,
}

impl SimParams {
    /// Validates `p` and `N` and attaches `seed`.
    pub fn new(p: f64, n_vertices: usize, seed: u64) -> Result<Self> {
        let mut params = validate_params(p, n_vertices)?;
        params.seed = seed;
        Ok(params)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SimParams { seed, ..self }
    }

    /// Neighbour count `n = N - 1` of every vertex of `K_N`.
    pub fn n(&self) -> usize {
        self.n_vertices - 1
    }

    pub fn death_probability(&self) -> f64 {
        1.0 - self.p
    }
}

/// Checks `0 <= p < 1` and `N >= 2`. The returned parameters carry seed 0.
pub fn validate_params(p: f64, n_vertices: usize) -> Result<SimParams> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::PInvalid(p));
    }
    if n_vertices < 2 {
        return Err(Error::NInvalid(n_vertices));
    }
    Ok(SimParams {
        p,
        n_vertices,
        seed: 0,
    })
}

/// What the acting particle did in one round, coded as its number of
/// "descendants": it died (0), jumped to an already visited vertex (1), or
/// woke a new vertex (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RoundOutcome {
    Death = 0,
    Revisit = 1,
    NewVertex = 2,
}

impl RoundOutcome {
    pub fn code(self) -> u8 {
        self as u8
    }

    /// Change in the potentially-active count, `code - 1`.
    pub fn active_delta(self) -> i64 {
        self.code() as i64 - 1
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(RoundOutcome::Death),
            1 => Some(RoundOutcome::Revisit),
            2 => Some(RoundOutcome::NewVertex),
            _ => None,
        }
    }

    /// Threshold sampler shared by every round law on `{0, 1, 2}`.
    ///
    /// Death on `[0, death)`, Revisit on `[death, death + revisit)`,
    /// NewVertex above. All coupled processes use this layout with the same
    /// uniform, which is what makes their dominations hold pathwise.
    #[inline]
    pub fn from_uniform(u: f64, death: f64, revisit: f64) -> Self {
        if u < death {
            RoundOutcome::Death
        } else if u < death + revisit {
            RoundOutcome::Revisit
        } else {
            RoundOutcome::NewVertex
        }
    }
}

/// Deterministic pseudo-random stream of uniforms on `[0, 1)`.
///
/// Backed by ChaCha8. A stream is identified by `(master_seed, index)`: the
/// master seed is expanded into the 256-bit key and the index selects the
/// 64-bit ChaCha stream id, so distinct pairs give independent keystreams.
/// Streams are single-owner and never shared between replicas.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    index: u64,
}

/// Opens stream `replica_index` under `master_seed`.
pub fn substream(master_seed: u64, replica_index: u64) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replica_index);
    RngStream {
        rng,
        seed: master_seed,
        index: replica_index,
    }
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        substream(seed, 0)
    }

    /// Master seed this stream was opened under.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..len`. `len` must be positive.
    #[inline]
    pub fn below(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        // Lemire's multiply-shift; bias is below 2^-32 for any graph degree we handle.
        ((self.rng.next_u64() as u128 * len as u128) >> 64) as usize
    }

    /// Derives an independent seed, e.g. for a child stream family.
    pub fn next_seed(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
