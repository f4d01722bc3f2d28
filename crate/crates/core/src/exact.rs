//! Exact law of `V_inf` on `K_N`.
//!
//! A Revisit round changes neither `A'` nor `V'`, so the self-loop at each
//! state can be summed out. From visited count `v` the collapsed chain dies
//! with probability
//!
//! ```text
//! q(v) = (1 - p) / (1 - p (v - 1) / n)
//! ```
//!
//! and otherwise moves `(a, v) -> (a + 1, v + 1)`. With `F(a, v)` the law of
//! the final visited count from `(a, v)`:
//!
//! ```text
//! F(0, v) = delta_v
//! F(a, N) = delta_N                                   a >= 1
//! F(a, v) = q(v) F(a - 1, v) + (1 - q(v)) F(a + 1, v + 1)
//! ```
//!
//! Layers are filled for `v = N, ..., 1` keeping only two of them; the answer
//! is `F(1, 1)`. Reachable states satisfy `a <= v`. Cost is `O(N^3)` time and
//! `O(N^2)` memory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SimParams;

/// Largest `N` accepted by [`exact_pmf`].
pub const DEFAULT_FEASIBILITY_BOUND: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub p: f64,
    /// `mass[v - 1] = P(V_inf = v)` for `v = 1..=N`.
    pub mass: Vec<f64>,
}

impl PmfTable {
    pub fn mass_at(&self, v: usize) -> f64 {
        if v == 0 || v > self.n_vertices {
            0.0
        } else {
            self.mass[v - 1]
        }
    }

    /// `P(V_inf <= threshold)`, compensated-summed.
    pub fn tail(&self, threshold: usize) -> f64 {
        kahan_sum(self.mass.iter().take(threshold).copied())
    }

    pub fn total(&self) -> f64 {
        kahan_sum(self.mass.iter().copied())
    }

    /// CSV with header `v,mass` and one row per `v = 1..=N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,mass\n");
        for (i, m) in self.mass.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, m));
        }
        out
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for value in values {
        let y = value - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

pub fn exact_pmf(params: &SimParams) -> Result<PmfTable> {
    exact_pmf_bounded(params, DEFAULT_FEASIBILITY_BOUND)
}

pub fn exact_pmf_bounded(params: &SimParams, bound: usize) -> Result<PmfTable> {
    let big_n = params.n_vertices;
    if big_n > bound {
        return Err(Error::FeasibilityExceeded {
            n_vertices: big_n,
            bound,
        });
    }
    let n = params.n() as f64;
    let p = params.p;
    // layer[a] holds F(a, v) as a dense vector indexed by final count - 1.
    let mut next: Vec<Vec<f64>> = Vec::new();
    for v in (1..=big_n).rev() {
        let mut layer = vec![vec![0.0; big_n]; v + 1];
        layer[0][v - 1] = 1.0;
        if v == big_n {
            for row in layer.iter_mut().skip(1) {
                row[big_n - 1] = 1.0;
            }
        } else {
            let q = (1.0 - p) / (1.0 - p * (v - 1) as f64 / n);
            for a in 1..=v {
                let (done, rest) = layer.split_at_mut(a);
                let below = &done[a - 1];
                let up = &next[a + 1];
                for (slot, (b, u)) in rest[0].iter_mut().zip(below.iter().zip(up)).skip(v - 1) {
                    *slot = q * b + (1.0 - q) * u;
                }
            }
        }
        next = layer;
    }
    Ok(PmfTable {
        n_vertices: big_n,
        p,
        mass: next.swap_remove(1),
    })
}

/// `P(V_inf <= threshold)` on `K_N`.
pub fn exact_tail(params: &SimParams, threshold: usize) -> Result<f64> {
    if threshold == 0 || threshold > params.n_vertices {
        return Err(Error::Domain(format!(
            "threshold {threshold} outside [1, {}]",
            params.n_vertices
        )));
    }
    Ok(exact_pmf(params)?.tail(threshold))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, n_vertices: usize) -> SimParams {
        SimParams::new(p, n_vertices, 0).unwrap()
    }

    /// Forward evolution of the uncollapsed `(A', V')` chain, self-loops
    /// included, accumulating the mass absorbed at `A' = 0`.
    fn forward_oracle(p: f64, big_n: usize, steps: usize) -> Vec<f64> {
        let n = (big_n - 1) as f64;
        let mut dist = vec![vec![0.0; big_n + 1]; big_n + 2];
        dist[1][1] = 1.0;
        let mut absorbed = vec![0.0; big_n];
        for _ in 0..steps {
            let mut next = vec![vec![0.0; big_n + 1]; big_n + 2];
            for a in 1..=big_n {
                for v in 1..=big_n {
                    let mass = dist[a][v];
                    if mass == 0.0 {
                        continue;
                    }
                    let revisit = p * (v - 1) as f64 / n;
                    let new = p - revisit;
                    if a == 1 {
                        absorbed[v - 1] += mass * (1.0 - p);
                    } else {
                        next[a - 1][v] += mass * (1.0 - p);
                    }
                    next[a][v] += mass * revisit;
                    if new > 0.0 {
                        next[a + 1][v + 1] += mass * new;
                    }
                }
            }
            dist = next;
        }
        absorbed
    }

    #[test]
    fn two_vertices() {
        for i in 1..=9 {
            let p = i as f64 / 10.0;
            let pmf = exact_pmf(&params(p, 2)).unwrap();
            assert!((pmf.mass[0] - (1.0 - p)).abs() < 1e-12);
            assert!((pmf.mass[1] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn three_vertices_half() {
        // q(1) = 1/2, q(2) = 2/3; F(1,1) = 1/2 d1 + 1/2 (4/9 d2 + 5/9 d3)
        let pmf = exact_pmf(&params(0.5, 3)).unwrap();
        let expected = [0.5, 2.0 / 9.0, 5.0 / 18.0];
        for (got, want) in pmf.mass.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((exact_tail(&params(0.5, 3), 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn p_zero_is_point_mass() {
        let pmf = exact_pmf(&params(0.0, 10)).unwrap();
        assert_eq!(pmf.mass[0], 1.0);
        assert!(pmf.mass[1..].iter().all(|&m| m == 0.0));
        assert_eq!(exact_tail(&params(0.0, 10), 1).unwrap(), 1.0);
    }

    #[test]
    fn matches_forward_oracle() {
        for big_n in [2, 3, 5, 8] {
            for p in [0.1, 0.5, 0.9] {
                let pmf = exact_pmf(&params(p, big_n)).unwrap();
                let oracle = forward_oracle(p, big_n, 3000);
                for (got, want) in pmf.mass.iter().zip(&oracle) {
                    assert!((got - want).abs() < 1e-10, "N={big_n} p={p}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn root_mass_is_death_probability() {
        for p in [0.0, 0.25, 0.6, 0.99] {
            let pmf = exact_pmf(&params(p, 40)).unwrap();
            assert_eq!(pmf.mass[0], 1.0 - p);
        }
    }

    #[test]
    fn full_tail_is_one() {
        let pmf = exact_pmf(&params(0.8, 60)).unwrap();
        assert!((pmf.tail(60) - 1.0).abs() < 1e-12);
        assert!((exact_tail(&params(0.8, 60), 60).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn feasibility_and_threshold_errors() {
        assert!(matches!(
            exact_pmf(&params(0.5, 501)),
            Err(Error::FeasibilityExceeded { bound: 500, .. })
        ));
        assert!(exact_pmf_bounded(&params(0.5, 501), 600).is_ok());
        assert!(exact_tail(&params(0.5, 5), 0).is_err());
        assert!(exact_tail(&params(0.5, 5), 6).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = exact_pmf(&params(0.5, 2)).unwrap().to_csv();
        assert_eq!(csv, "v,mass\n1,0.5\n2,0.5\n");
    }

    #[test]
    fn dichotomy_trend() {
        let distance = |big_n: usize| {
            let threshold = (big_n as f64).sqrt().ceil() as usize;
            (exact_tail(&params(0.75, big_n), threshold).unwrap() - 1.0 / 3.0).abs()
        };
        assert!(distance(400) < distance(50));
    }

    proptest::proptest! {
        #[test]
        fn normalized(p in 0.0f64..0.999, big_n in 2usize..80) {
            let pmf = exact_pmf(&params(p, big_n)).unwrap();
            proptest::prop_assert!((pmf.total() - 1.0).abs() < 1e-12);
            proptest::prop_assert!(pmf.mass.iter().all(|&m| m >= 0.0));
        }
    }
}
