//! The auxiliary round process on `K_N`.
//!
//! One particle acts per round. Its outcome law depends only on the number of
//! potentially visited vertices `v`, so the process is the two-dimensional
//! Markov chain `(A', V')`:
//!
//! ```text
//! P(Death)     = 1 - p
//! P(Revisit)   = p (v - 1) / n
//! P(NewVertex) = p (n - v + 1) / n        with n = N - 1
//! ```
//!
//! `A'` moves by `code - 1` and `V'` grows on NewVertex. The original frog
//! model dies out at `R`, the first round with `A' = 0`, and `V_inf = V'_R`.
//!
//! The comparison processes `X+` (no revisit band), `X-` (fixed band `k-`) and
//! `Y` (fixed band `k+`) reuse the same uniform as `X` in every round; see
//! [`Coupler`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{RngStream, RoundOutcome, SimParams};

/// Default safety cap on the number of rounds of a single run.
pub const DEFAULT_ROUND_CAP: u64 = 1_000_000_000;

/// Samples one round of the auxiliary chain from a single uniform.
///
/// `v_prev` is the potentially-visited count before the round.
#[inline]
pub fn sample_round(v_prev: usize, params: &SimParams, u: f64) -> RoundOutcome {
    let revisit = params.p * (v_prev - 1) as f64 / params.n() as f64;
    RoundOutcome::from_uniform(u, params.death_probability(), revisit)
}

/// `(A', V')` after `round` rounds, plus the absorption round once seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxState {
    pub round: u64,
    /// Potentially active particles; negative values occur after absorption
    /// when the bookkeeping particles keep dying.
    pub potentially_active: i64,
    pub potentially_visited: usize,
    pub absorbed_at: Option<u64>,
    /// `V'_R`, frozen at absorption.
    pub visited_at_absorption: Option<usize>,
}

impl Default for AuxState {
    fn default() -> Self {
        AuxState {
            round: 0,
            potentially_active: 1,
            potentially_visited: 1,
            absorbed_at: None,
            visited_at_absorption: None,
        }
    }
}

impl AuxState {
    pub fn apply(&mut self, outcome: RoundOutcome) {
        self.round += 1;
        self.potentially_active += outcome.active_delta();
        if outcome == RoundOutcome::NewVertex {
            self.potentially_visited += 1;
        }
        if self.absorbed_at.is_none() && self.potentially_active == 0 {
            self.absorbed_at = Some(self.round);
            self.visited_at_absorption = Some(self.potentially_visited);
        }
    }
}

/// Summary of one realization of the original process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub v_infinity: usize,
    pub r_rounds: u64,
    pub peak_active: u64,
    pub params: SimParams,
    /// Per-round outcomes up to and including `r_rounds`, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub history: Option<Vec<RoundOutcome>>,
}

#[derive(Debug, Clone, Copy)]
pub struct AuxOptions {
    pub round_cap: u64,
    pub record_history: bool,
}

impl Default for AuxOptions {
    fn default() -> Self {
        AuxOptions {
            round_cap: DEFAULT_ROUND_CAP,
            record_history: false,
        }
    }
}

/// Runs the auxiliary chain until the original process dies out.
///
/// The bookkeeping particles that keep the chain alive after `R` never change
/// `V_inf`, so the run stops at `R`.
pub fn run_auxiliary(params: &SimParams, stream: &mut RngStream) -> Result<Trajectory> {
    run_auxiliary_with(params, stream, AuxOptions::default())
}

pub fn run_auxiliary_with(
    params: &SimParams,
    stream: &mut RngStream,
    options: AuxOptions,
) -> Result<Trajectory> {
    let mut state = AuxState::default();
    let mut peak = 1i64;
    let mut history = options.record_history.then(Vec::new);
    while state.absorbed_at.is_none() {
        if state.round >= options.round_cap {
            return Err(Error::RoundCapExceeded {
                cap: options.round_cap,
            });
        }
        let outcome = sample_round(state.potentially_visited, params, stream.uniform());
        state.apply(outcome);
        peak = peak.max(state.potentially_active);
        if let Some(history) = history.as_mut() {
            history.push(outcome);
        }
    }
    Ok(Trajectory {
        v_infinity: state.potentially_visited,
        r_rounds: state.round,
        peak_active: peak as u64,
        params: *params,
        history,
    })
}

/// `(A'_k, V'_k)` after exactly `rounds` rounds of the renewing chain,
/// continuing through `R` with bookkeeping particles.
pub fn run_potential(params: &SimParams, stream: &mut RngStream, rounds: u64) -> AuxState {
    let mut state = AuxState::default();
    for _ in 0..rounds {
        let outcome = sample_round(state.potentially_visited, params, stream.uniform());
        state.apply(outcome);
    }
    state
}

/// The outcomes of all four coupled processes in one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledRound {
    pub u: f64,
    pub x: RoundOutcome,
    pub x_plus: RoundOutcome,
    pub x_minus: RoundOutcome,
    pub y: RoundOutcome,
}

/// State of the four tracks after a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledTracks {
    pub round: u64,
    pub active: i64,
    pub active_plus: i64,
    pub active_minus: i64,
    /// Potentially visited count of the actual process before this round's
    /// update, i.e. the `v` that drove its law.
    pub visited: usize,
    pub x_sum: i64,
    pub y_sum: i64,
}

/// Drives `X`, `X+`, `X-` and `Y` from one shared uniform per round.
///
/// Band layout per round: Death on `[0, 1-p)` for all four; the revisit band
/// has width `p (v-1)/n` for `X`, `p k-/n` for `X-`, `p k+/n` for `Y` and zero
/// for `X+`. Whenever `v - 1 <= k-` this gives `X- <= X <= X+`, and whenever
/// `v - 1 <= k+` it gives `Y <= X`.
#[derive(Debug, Clone)]
pub struct Coupler {
    params: SimParams,
    minus_band: f64,
    plus_band: f64,
    x: AuxState,
    plus: AuxState,
    minus: AuxState,
    x_sum: i64,
    y_sum: i64,
    plus_new_vertices: u64,
}

impl Coupler {
    pub fn new(params: SimParams, k_minus: f64, k_plus: f64) -> Result<Self> {
        let n = params.n() as f64;
        let mut bands = [0.0; 2];
        for (slot, band) in bands.iter_mut().zip([k_minus, k_plus]) {
            if !(band >= 0.0) {
                return Err(Error::BandInvalid {
                    band,
                    n: params.n(),
                });
            }
            let width = params.p * band / n;
            if width > params.p + 1e-12 {
                return Err(Error::BandOverflow {
                    p: params.p,
                    n: params.n(),
                    band,
                });
            }
            *slot = width;
        }
        Ok(Coupler {
            params,
            minus_band: bands[0],
            plus_band: bands[1],
            x: AuxState::default(),
            plus: AuxState::default(),
            minus: AuxState::default(),
            x_sum: 0,
            y_sum: 0,
            plus_new_vertices: 0,
        })
    }

    pub fn step(&mut self, u: f64) -> (CoupledRound, CoupledTracks) {
        let death = self.params.death_probability();
        let visited = self.x.potentially_visited;
        let round = CoupledRound {
            u,
            x: sample_round(visited, &self.params, u),
            x_plus: RoundOutcome::from_uniform(u, death, 0.0),
            x_minus: RoundOutcome::from_uniform(u, death, self.minus_band),
            y: RoundOutcome::from_uniform(u, death, self.plus_band),
        };
        self.x.apply(round.x);
        if self.plus.absorbed_at.is_none() && round.x_plus == RoundOutcome::NewVertex {
            self.plus_new_vertices += 1;
        }
        self.plus.apply(round.x_plus);
        self.minus.apply(round.x_minus);
        self.x_sum += round.x.code() as i64;
        self.y_sum += round.y.code() as i64;
        let tracks = CoupledTracks {
            round: self.x.round,
            active: self.x.potentially_active,
            active_plus: self.plus.potentially_active,
            active_minus: self.minus.potentially_active,
            visited,
            x_sum: self.x_sum,
            y_sum: self.y_sum,
        };
        (round, tracks)
    }

    pub fn all_absorbed(&self) -> bool {
        self.x.absorbed_at.is_some()
            && self.plus.absorbed_at.is_some()
            && self.minus.absorbed_at.is_some()
    }

    pub fn absorption(&self) -> [Option<u64>; 3] {
        [
            self.x.absorbed_at,
            self.plus.absorbed_at,
            self.minus.absorbed_at,
        ]
    }


    /// `V_inf` of the actual process once it has been absorbed.
    pub fn v_infinity(&self) -> Option<usize> {
        self.x.visited_at_absorption
    }

    /// `1 + #{X+ = 2}` over the rounds before `R+` (or all rounds so far when
    /// `X+` has not died out).
    pub fn v_infinity_plus(&self) -> u64 {
        1 + self.plus_new_vertices
    }

    pub fn round(&self) -> u64 {
        self.x.round
    }
}

/// All rounds of a coupled run with the tracks after each round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledRun {
    pub rounds: Vec<CoupledRound>,
    pub tracks: Vec<CoupledTracks>,
    pub r: Option<u64>,
    pub r_plus: Option<u64>,
    pub r_minus: Option<u64>,
    pub v_infinity: Option<usize>,
    pub v_infinity_plus: u64,
}

/// Runs the four coupled processes for `min(max_rounds, all absorbed)` rounds.
pub fn run_coupled(
    params: &SimParams,
    stream: &mut RngStream,
    k_minus: f64,
    k_plus: f64,
    max_rounds: u64,
) -> Result<CoupledRun> {
    if max_rounds == 0 {
        return Err(Error::Domain("max_rounds must be at least 1".into()));
    }
    let mut coupler = Coupler::new(*params, k_minus, k_plus)?;
    let mut rounds = Vec::new();
    let mut tracks = Vec::new();
    while coupler.round() < max_rounds && !coupler.all_absorbed() {
        let (round, track) = coupler.step(stream.uniform());
        rounds.push(round);
        tracks.push(track);
    }
    let [r, r_plus, r_minus] = coupler.absorption();
    Ok(CoupledRun {
        rounds,
        tracks,
        r,
        r_plus,
        r_minus,
        v_infinity: coupler.v_infinity(),
        v_infinity_plus: coupler.v_infinity_plus(),
    })
}

/// Violation counts of the pathwise orderings over many coupled replicas.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub replicas: u64,
    pub rounds_checked: u64,
    /// `code(X-) <= code(X) <= code(X+)` failed in a round `k <= k-`.
    pub outcome_violations: u64,
    /// `A'- <= A' <= A'+` failed in a round `k <= k-`.
    pub active_violations: u64,
    /// `Y <= X` or `sum Y <= sum X` failed in a round `k <= k+`.
    pub y_violations: u64,
    /// `V_inf+ >= V_inf` failed.
    pub visited_violations: u64,
    /// `R+ <= k- => R <= k- => R- <= k-` failed.
    pub absorption_violations: u64,
    /// Replicas whose actual process was still alive at `max_rounds`.
    pub unresolved: u64,
}

impl CouplingReport {
    pub fn violations(&self) -> u64 {
        self.outcome_violations
            + self.active_violations
            + self.y_violations
            + self.visited_violations
            + self.absorption_violations
    }

    fn merge(mut self, other: CouplingReport) -> CouplingReport {
        self.replicas += other.replicas;
        self.rounds_checked += other.rounds_checked;
        self.outcome_violations += other.outcome_violations;
        self.active_violations += other.active_violations;
        self.y_violations += other.y_violations;
        self.visited_violations += other.visited_violations;
        self.absorption_violations += other.absorption_violations;
        self.unresolved += other.unresolved;
        self
    }
}

/// Checks every pathwise ordering on one coupled replica without storing
/// the rounds. Stops once `R`, `k-` and `k+` have all been passed, or at
/// `max_rounds`.
pub fn check_coupled_replica(
    params: &SimParams,
    stream: &mut RngStream,
    k_minus: f64,
    k_plus: f64,
    max_rounds: u64,
) -> Result<CouplingReport> {
    let mut coupler = Coupler::new(*params, k_minus, k_plus)?;
    let horizon = k_minus.max(k_plus);
    let mut report = CouplingReport {
        replicas: 1,
        ..CouplingReport::default()
    };
    while coupler.round() < max_rounds
        && !(coupler.v_infinity().is_some() && coupler.round() as f64 > horizon)
    {
        let (round, track) = coupler.step(stream.uniform());
        let k = track.round as f64;
        report.rounds_checked += 1;
        if round.x > round.x_plus || (k <= k_minus && round.x_minus > round.x) {
            report.outcome_violations += 1;
        }
        if track.active > track.active_plus
            || (k <= k_minus && track.active_minus > track.active)
        {
            report.active_violations += 1;
        }
        if k <= k_plus && (round.y > round.x || track.y_sum > track.x_sum) {
            report.y_violations += 1;
        }
    }
    match coupler.v_infinity() {
        Some(v) if (v as u64) > coupler.v_infinity_plus() => report.visited_violations += 1,
        Some(_) => {}
        None => report.unresolved += 1,
    }
    if coupler.round() as f64 >= k_minus.floor() {
        let within = |r: Option<u64>| r.is_some_and(|r| r as f64 <= k_minus);
        let [r, r_plus, r_minus] = coupler.absorption();
        if (within(r_plus) && !within(r)) || (within(r) && !within(r_minus)) {
            report.absorption_violations += 1;
        }
    }
    Ok(report)
}

/// Runs `replicas` coupled replicas on substreams of `params.seed` and merges
/// their reports. The merged report does not depend on thread scheduling.
pub fn coupling_check(
    params: &SimParams,
    k_minus: f64,
    k_plus: f64,
    max_rounds: u64,
    replicas: u64,
) -> Result<CouplingReport> {
    use rayon::prelude::*;
    // Validate bands once up front so an error is not repeated per replica.
    Coupler::new(*params, k_minus, k_plus)?;
    (0..replicas)
        .into_par_iter()
        .map(|replica| {
            let mut stream = crate::model::substream(params.seed, replica);
            check_coupled_replica(params, &mut stream, k_minus, k_plus, max_rounds)
        })
        .try_reduce(CouplingReport::default, |a, b| Ok(a.merge(b)))
}
