#![allow(dead_code)]

use frogsim::aux::run_auxiliary;
use frogsim::frog::{run_frog, Graph};
use frogsim::{substream, SimParams};
use rayon::prelude::*;

/// Histogram of `V_inf` over `1..=N` from `replicas` auxiliary runs.
pub fn aux_histogram(params: &SimParams, replicas: u64) -> Vec<u64> {
    let n = params.n_vertices;
    (0..replicas)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, r| {
                let t = run_auxiliary(params, &mut substream(params.seed, r)).unwrap();
                acc[t.v_infinity - 1] += 1;
                acc
            },
        )
        .reduce(|| vec![0u64; n], add)
}

pub fn frog_histogram(graph: &Graph, p: f64, seed: u64, replicas: u64) -> Vec<u64> {
    let n = graph.vertex_count();
    (0..replicas)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, r| {
                let t = run_frog(graph, p, &mut substream(seed, r)).unwrap();
                acc[t.v_infinity - 1] += 1;
                acc
            },
        )
        .reduce(|| vec![0u64; n], add)
}

fn add(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Largest per-bin deviation in units of the binomial standard error.
pub fn max_z(counts: &[u64], mass: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let total = total as f64;
    counts
        .iter()
        .zip(mass)
        .map(|(&c, &m)| {
            let sigma = (total * m * (1.0 - m)).sqrt();
            let diff = (c as f64 - total * m).abs();
            if sigma == 0.0 {
                if diff == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                diff / sigma
            }
        })
        .fold(0.0, f64::max)
}
