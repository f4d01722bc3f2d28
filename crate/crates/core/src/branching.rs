//! Galton-Watson comparison processes with offspring on `{0, 1, 2}`.
//!
//! Individuals are processed one per round, exactly like particles in the
//! auxiliary chain: the alive count moves by `children - 1` and the process is
//! extinct at the first round where it reaches zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{wilson_interval, Interval};
use crate::model::{substream, RngStream, RoundOutcome};

/// Offspring law `P(0) = w0`, `P(1) = w1`, `P(2) = w2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffspringLaw {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
}

impl OffspringLaw {
    pub fn new(w0: f64, w1: f64, w2: f64) -> Result<Self> {
        let valid = [w0, w1, w2].iter().all(|w| (0.0..=1.0).contains(w))
            && (w0 + w1 + w2 - 1.0).abs() <= 1e-12;
        if !valid {
            return Err(Error::LawInvalid(w0, w1, w2));
        }
        Ok(OffspringLaw { w0, w1, w2 })
    }

    pub fn mean(&self) -> f64 {
        self.w1 + 2.0 * self.w2
    }

    /// Probability generating function `G(s) = w0 + w1 s + w2 s^2`.
    pub fn pgf(&self, s: f64) -> f64 {
        self.w0 + s * (self.w1 + s * self.w2)
    }

    #[inline]
    pub fn sample(&self, u: f64) -> RoundOutcome {
        RoundOutcome::from_uniform(u, self.w0, self.w1)
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::PInvalid(p))
    }
}

fn banded(p: f64, n_vertices: usize, band: f64) -> Result<OffspringLaw> {
    check_p(p)?;
    if n_vertices < 2 {
        return Err(Error::NInvalid(n_vertices));
    }
    let n = (n_vertices - 1) as f64;
    if !(0.0..=n).contains(&band) {
        return Err(Error::BandInvalid {
            band,
            n: n_vertices - 1,
        });
    }
    Ok(OffspringLaw {
        w0: 1.0 - p,
        w1: p * band / n,
        w2: p * (n - band) / n,
    })
}

/// Two children on survival, none on death.
pub fn law_xplus(p: f64) -> Result<OffspringLaw> {
    check_p(p)?;
    Ok(OffspringLaw {
        w0: 1.0 - p,
        w1: 0.0,
        w2: p,
    })
}

/// Revisit band fixed at `k_minus` out of `n = N - 1` neighbours.
pub fn law_xminus(p: f64, n_vertices: usize, k_minus: f64) -> Result<OffspringLaw> {
    banded(p, n_vertices, k_minus)
}

/// Revisit band fixed at `k_plus` out of `n = N - 1` neighbours.
pub fn law_y(p: f64, n_vertices: usize, k_plus: f64) -> Result<OffspringLaw> {
    banded(p, n_vertices, k_plus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingRun {
    /// Extinction round, `None` when the run was stopped by a cap.
    pub r_rounds: Option<u64>,
    /// `1 + #{two-child rounds}` over the simulated rounds.
    pub total_individuals: u64,
    pub capped: bool,
    pub rounds: u64,
    pub zero_child_rounds: u64,
    pub two_child_rounds: u64,
}

/// Stopping rules for a single branching run. A run that hits either cap is
/// classified as surviving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchingCaps {
    pub round_cap: u64,
    /// Stop once this many individuals are alive at the same time.
    pub population_cap: Option<u64>,
}

pub fn run_branching(law: &OffspringLaw, stream: &mut RngStream, round_cap: u64) -> BranchingRun {
    run_branching_with(
        law,
        stream,
        BranchingCaps {
            round_cap,
            population_cap: None,
        },
    )
}

pub fn run_branching_with(
    law: &OffspringLaw,
    stream: &mut RngStream,
    caps: BranchingCaps,
) -> BranchingRun {
    let mut alive: i64 = 1;
    let mut run = BranchingRun {
        r_rounds: None,
        total_individuals: 1,
        capped: false,
        rounds: 0,
        zero_child_rounds: 0,
        two_child_rounds: 0,
    };
    let population_cap = caps.population_cap.map_or(i64::MAX, |cap| cap as i64);
    while alive > 0 {
        if run.rounds >= caps.round_cap || alive >= population_cap {
            run.capped = true;
            return run;
        }
        let outcome = law.sample(stream.uniform());
        run.rounds += 1;
        alive += outcome.active_delta();
        match outcome {
            RoundOutcome::Death => run.zero_child_rounds += 1,
            RoundOutcome::NewVertex => {
                run.two_child_rounds += 1;
                run.total_individuals += 1;
            }
            RoundOutcome::Revisit => {}
        }
    }
    run.r_rounds = Some(run.rounds);
    run
}

/// Smallest root in `[0, 1]` of `s = w0 + w1 s + w2 s^2`.
///
/// The nontrivial root is `w0 / w2`; it is evaluated as
/// `2 w0 / ((1 - w1) + sqrt(disc))` so that small `w2` does not cancel.
pub fn extinction_closed_form(law: &OffspringLaw) -> f64 {
    if law.w2 == 0.0 || law.mean() <= 1.0 {
        return 1.0;
    }
    let b = 1.0 - law.w1;
    let disc = (b * b - 4.0 * law.w2 * law.w0).max(0.0);
    let root = 2.0 * law.w0 / (b + disc.sqrt());
    root.clamp(0.0, 1.0)
}

/// Iteration cap of [`extinction_fixed_point`].
pub const FIXED_POINT_MAX_ITERATIONS: usize = 10_000_000;

/// Iterates `s <- G(s)` from `s = 0`, which increases monotonically to the
/// smallest fixed point.
///
/// The iteration runs on `e = 1 - s`, where `1 - G(1 - e) = e (m - w2 e)`
/// keeps full relative precision near `s = 1`; in `s` itself rounding leaves
/// spurious fixed points about `ulp / (1 - m)` below 1 for near-critical
/// laws. Stops when the contraction estimate bounds the remaining error by
/// `tol` and `G(s + tol) <= s + tol` brackets the fixed point from above.
/// Exactly critical laws converge sublinearly and usually end in
/// `NoConvergence`.
pub fn extinction_fixed_point(law: &OffspringLaw, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let mean = law.mean();
    let complement = |e: f64| e * (mean - law.w2 * e);
    let mut e = 1.0f64;
    for _ in 0..FIXED_POINT_MAX_ITERATIONS {
        let next = complement(e);
        let step = e - next;
        e = next;
        let rate = mean - 2.0 * law.w2 * e;
        let remaining = if rate < 1.0 {
            step * rate / (1.0 - rate)
        } else {
            f64::INFINITY
        };
        if remaining <= 0.5 * tol {
            let lower = e - tol;
            if lower <= 0.0 || complement(lower) >= lower {
                return Ok((1.0 - e).clamp(0.0, 1.0));
            }
        }
    }
    Err(Error::NoConvergence(FIXED_POINT_MAX_ITERATIONS))
}

/// Monte Carlo estimate of `P(k- < R+ < inf)` for the `X+` process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BplusEstimate {
    pub estimate: f64,
    pub interval: Interval,
    pub replicas: u64,
    pub hits: u64,
    /// Runs stopped by a cap and counted as surviving.
    pub capped: u64,
    /// Upper bound on the probability that one capped run would still have
    /// died out.
    pub misclassification_bound: f64,
}

/// Alive count at which every supercritical run is stopped: from `a` alive
/// individuals the extinction probability is `s^a`, so stop once it is below
/// `1e-12`.
pub fn population_cap_for(law: &OffspringLaw) -> Option<u64> {
    let s = extinction_closed_form(law);
    if s >= 1.0 {
        None
    } else if s <= 0.0 {
        Some(1)
    } else {
        Some(((1e-12f64).ln() / s.ln()).ceil().max(1.0) as u64)
    }
}

/// Default round cap `max(10^6, 100 k-)`.
pub fn default_round_cap(k_minus: f64) -> u64 {
    (100.0 * k_minus).ceil().max(1e6) as u64
}

pub fn bplus_statistic(
    p: f64,
    k_minus: f64,
    replicas: u64,
    seed: u64,
) -> Result<BplusEstimate> {
    use rayon::prelude::*;
    if replicas == 0 {
        return Err(Error::EmptyRun);
    }
    let law = law_xplus(p)?;
    let caps = BranchingCaps {
        round_cap: default_round_cap(k_minus),
        population_cap: population_cap_for(&law),
    };
    let (hits, capped) = (0..replicas)
        .into_par_iter()
        .map(|replica| {
            let run = run_branching_with(&law, &mut substream(seed, replica), caps);
            let hit = run.r_rounds.is_some_and(|r| r as f64 > k_minus);
            (hit as u64, run.capped as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let misclassification_bound = caps
        .population_cap
        .map_or(0.0, |a| extinction_closed_form(&law).powi(a as i32));
    Ok(BplusEstimate {
        estimate: hits as f64 / replicas as f64,
        interval: wilson_interval(hits, replicas, 0.95)?,
        replicas,
        hits,
        capped,
        misclassification_bound,
    })
}
