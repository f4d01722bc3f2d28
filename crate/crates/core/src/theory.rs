//! Asymptotic constants of the supercritical regime and the bound chain that
//! controls `P(A'_k <= a_k + 1)`.
//!
//! With `d = (2p - 1) / (8p + 4)` and natural logarithms:
//!
//! ```text
//! k-  = 2 * 4p / ((1 + 2p) d^2) * ln n
//! k+  = (1 - 2 / (1 + 2p)) n
//! a_k = (2p / (1 + 2p) - 1/2) k
//! c'  = (k+ + a_{k+}) / (2n)
//! ```
//!
//! `k- <= k+` only once `n / ln n` is very large (about 4800 at `p = 0.75`),
//! which [`TheoryConstants::feasible`] reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::aux::sample_round;
use crate::error::{Error, Result};
use crate::experiments::{wilson_interval, Interval};
use crate::model::{substream, RoundOutcome, SimParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    pub p: f64,
    pub n: usize,
    pub k_minus: f64,
    pub k_plus: f64,
    pub a_coeff: f64,
    pub c_prime: f64,
    /// Coefficient of `ln n` in `k-`, used as the small-mode constant `c`.
    pub c: f64,
    pub limit_small: f64,
    pub limit_large: f64,
    /// Whether `k- <= k+` at this `n`.
    pub feasible: bool,
}

impl TheoryConstants {
    pub fn a_k(&self, k: f64) -> f64 {
        self.a_coeff * k
    }

    /// Per-round slack `(2p - 1) / (8p + 4)` in the Chernoff step.
    pub fn delta(&self) -> f64 {
        chernoff_delta(self.p)
    }
}

fn chernoff_delta(p: f64) -> f64 {
    (2.0 * p - 1.0) / (8.0 * p + 4.0)
}

/// `(1 - p) / p`, the small-mode limit.
pub fn limit_small(p: f64) -> f64 {
    (1.0 - p) / p
}

/// `(2p - 1) / p`, the linear-mode limit.
pub fn limit_large(p: f64) -> f64 {
    (2.0 * p - 1.0) / p
}

pub fn compute_constants(p: f64, n_vertices: usize) -> Result<TheoryConstants> {
    if !(p < 1.0) {
        return Err(Error::PInvalid(p));
    }
    if !(p > 0.5) {
        return Err(Error::SubcriticalP(p));
    }
    if n_vertices < 3 {
        return Err(Error::NInvalid(n_vertices));
    }
    let n = n_vertices - 1;
    let delta = chernoff_delta(p);
    let c = 8.0 * p / ((1.0 + 2.0 * p) * delta * delta);
    let k_minus = c * (n as f64).ln();
    let k_plus = (1.0 - 2.0 / (1.0 + 2.0 * p)) * n as f64;
    let a_coeff = 2.0 * p / (1.0 + 2.0 * p) - 0.5;
    let c_prime = (k_plus + a_coeff * k_plus) / (2.0 * n as f64);
    Ok(TheoryConstants {
        p,
        n,
        k_minus,
        k_plus,
        a_coeff,
        c_prime,
        c,
        limit_small: limit_small(p),
        limit_large: limit_large(p),
        feasible: k_minus <= k_plus,
    })
}

/// Lower-tail bound `P(X <= E X - t) <= exp(-t^2 / (2 E X))` for
/// `X ~ Bin(n_trials, q)`.
pub fn chernoff_lower_tail(n_trials: u64, q: f64, t: f64) -> Result<f64> {
    if n_trials == 0 || !(q > 0.0 && q <= 1.0) || !(t > 0.0) {
        return Err(Error::Domain(format!(
            "chernoff bound needs n >= 1, q in (0, 1], t > 0; got n = {n_trials}, q = {q}, t = {t}"
        )));
    }
    let mean = n_trials as f64 * q;
    Ok((-t * t / (2.0 * mean)).exp())
}

/// An empirical probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub sigma: f64,
    pub hits: u64,
    pub trials: u64,
    pub interval: Interval,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Result<Self> {
        let value = hits as f64 / trials as f64;
        Ok(Estimate {
            value,
            sigma: (value * (1.0 - value) / trials as f64).sqrt(),
            hits,
            trials,
            interval: wilson_interval(hits, trials, 0.95)?,
        })
    }
}

/// One evaluation of the chain
///
/// ```text
/// P(A'_k <= a_k + 1) <= P(sum Y <= k + a_k) <= P(#{Y = 2} <= (k + a_k) / 2)
///                     = P(Bin(k, p (1 - k+/n)) <= (k + a_k) / 2)
///                    <= exp(-k d^2 / (2p (1 - k+/n)))
///                    <= exp(-k- d^2 (1 + 2p) / (4p)) = n^-2
/// ```
///
/// The `X` and `Y` estimates come from the same replicas, with `Y` driven by
/// the same uniform as `X` in every round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundChain {
    pub k: u64,
    pub threshold_active: f64,
    pub empirical_x: Estimate,
    pub empirical_y: Estimate,
    pub empirical_y_new: Estimate,
    pub binomial_exact: f64,
    pub chernoff: f64,
    pub at_k_minus: f64,
    pub n_inverse_square: f64,
    /// Every step is at least the previous one, empirical steps up to `3 sigma`.
    pub holds: bool,
}

pub fn bound_chain_eval(
    p: f64,
    n_vertices: usize,
    k: u64,
    replicas: u64,
    seed: u64,
) -> Result<BoundChain> {
    let constants = compute_constants(p, n_vertices)?;
    let kf = k as f64;
    if kf < constants.k_minus || kf > constants.k_plus {
        return Err(Error::Range {
            k,
            lo: constants.k_minus,
            hi: constants.k_plus,
        });
    }
    if replicas == 0 {
        return Err(Error::EmptyRun);
    }
    let params = SimParams::new(p, n_vertices, seed)?;
    let n = constants.n as f64;
    let a_k = constants.a_k(kf);
    let sum_threshold = kf + a_k;
    let y_revisit = p * constants.k_plus / n;
    let death = 1.0 - p;

    let tallies = (0..replicas)
        .into_par_iter()
        .map(|replica| {
            let mut stream = substream(seed, replica);
            let mut visited = 1usize;
            let (mut x_sum, mut y_sum, mut y_new) = (0u64, 0u64, 0u64);
            for _ in 0..k {
                let u = stream.uniform();
                let x = sample_round(visited, &params, u);
                if x == RoundOutcome::NewVertex {
                    visited += 1;
                }
                let y = RoundOutcome::from_uniform(u, death, y_revisit);
                x_sum += x.code() as u64;
                y_sum += y.code() as u64;
                y_new += (y == RoundOutcome::NewVertex) as u64;
            }
            // A'_k = 1 + sum X - k, so A'_k <= a_k + 1 iff sum X <= k + a_k.
            [
                (x_sum as f64 <= sum_threshold) as u64,
                (y_sum as f64 <= sum_threshold) as u64,
                (y_new as f64 <= sum_threshold / 2.0) as u64,
            ]
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);

    let empirical_x = Estimate::from_counts(tallies[0], replicas)?;
    let empirical_y = Estimate::from_counts(tallies[1], replicas)?;
    let empirical_y_new = Estimate::from_counts(tallies[2], replicas)?;
    let success = p * (1.0 - constants.k_plus / n);
    let binomial = Binomial::new(success, k).map_err(|e| Error::Domain(e.to_string()))?;
    let binomial_exact = binomial.cdf((sum_threshold / 2.0).floor() as u64);
    let delta = constants.delta();
    let chernoff = chernoff_lower_tail(k, success, kf * delta)?;
    let at_k_minus = (-constants.k_minus * delta * delta * (1.0 + 2.0 * p) / (4.0 * p)).exp();
    let n_inverse_square = n.powi(-2);

    let slack = |e: &Estimate| e.value - 3.0 * e.sigma;
    let rel = 1e-9;
    let holds = empirical_y.value >= slack(&empirical_x)
        && empirical_y_new.value >= slack(&empirical_y)
        && binomial_exact >= slack(&empirical_y_new)
        && chernoff * (1.0 + rel) >= binomial_exact
        && at_k_minus * (1.0 + rel) >= chernoff
        && (at_k_minus - n_inverse_square).abs() <= rel * n_inverse_square;

    Ok(BoundChain {
        k,
        threshold_active: a_k + 1.0,
        empirical_x,
        empirical_y,
        empirical_y_new,
        binomial_exact,
        chernoff,
        at_k_minus,
        n_inverse_square,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_three_quarters() {
        let c = compute_constants(0.75, 10_001).unwrap();
        let n = 10_000.0f64;
        assert!((c.k_plus - 0.2 * n).abs() < 1e-9);
        assert!((c.a_coeff - 0.1).abs() < 1e-15);
        assert!((c.c_prime - 0.11).abs() < 1e-15);
        assert!((c.c - 960.0).abs() < 1e-9);
        assert!((c.k_minus - 960.0 * n.ln()).abs() < 1e-9);
        assert!((c.limit_small - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.limit_large - 2.0 / 3.0).abs() < 1e-15);
        assert!(!c.feasible);
    }

    #[test]
    fn c_prime_matches_closed_polynomial() {
        // (k+ + a_{k+}) / 2 = n (12p^2 - 4p - 1) / (4 (1 + 2p)^2)
        for p in [0.55, 0.75, 0.95] {
            let c = compute_constants(p, 1001).unwrap();
            let poly = (12.0 * p * p - 4.0 * p - 1.0) / (4.0 * (1.0 + 2.0 * p) * (1.0 + 2.0 * p));
            assert!((c.c_prime - poly).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_subcritical_and_small() {
        assert_eq!(compute_constants(0.5, 100), Err(Error::SubcriticalP(0.5)));
        assert_eq!(compute_constants(0.3, 100), Err(Error::SubcriticalP(0.3)));
        assert!(matches!(compute_constants(1.0, 100), Err(Error::PInvalid(_))));
        assert_eq!(compute_constants(0.75, 2), Err(Error::NInvalid(2)));
    }

    #[test]
    fn feasibility_boundary() {
        // n / ln n >= 4800 at p = 0.75
        assert!(!compute_constants(0.75, 50_001).unwrap().feasible);
        assert!(compute_constants(0.75, 60_001).unwrap().feasible);
    }

    #[test]
    fn chernoff_values() {
        assert!((chernoff_lower_tail(100, 0.5, 10.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(chernoff_lower_tail(100, 0.5, 1e-9).unwrap() > 1.0 - 1e-15);
        assert!(chernoff_lower_tail(0, 0.5, 1.0).is_err());
        assert!(chernoff_lower_tail(10, 0.0, 1.0).is_err());
        assert!(chernoff_lower_tail(10, 0.5, 0.0).is_err());
    }

    #[test]
    fn chain_range_errors() {
        let c = compute_constants(0.75, 60_001).unwrap();
        let below = c.k_minus.floor() as u64 - 1;
        assert!(matches!(
            bound_chain_eval(0.75, 60_001, below, 10, 1),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            bound_chain_eval(0.75, 10_001, 9000, 10, 1),
            Err(Error::Range { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn ranges_and_partition(p in 0.5001f64..0.9999, big_n in 3usize..1_000_000) {
            let c = compute_constants(p, big_n).unwrap();
            proptest::prop_assert!(c.a_coeff > 0.0 && c.a_coeff < 1.0);
            let ratio = c.k_plus / c.n as f64;
            proptest::prop_assert!(ratio > 0.0 && ratio < 1.0);
            proptest::prop_assert!(c.c_prime > 0.0 && c.c_prime < 1.0);
            proptest::prop_assert!((c.limit_small + c.limit_large - 1.0).abs() <= 1e-15);
        }
    }
}
