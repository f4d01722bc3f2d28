use frogsim::substream;
use frogsim::theory::{bound_chain_eval, chernoff_lower_tail, compute_constants};
use statrs::distribution::{Binomial, DiscreteCDF};

fn binomial_draw(n_trials: u64, q: f64, stream: &mut frogsim::RngStream) -> u64 {
    (0..n_trials).filter(|_| stream.uniform() < q).count() as u64
}

#[test]
fn chernoff_dominates_empirical_lower_tail() {
    let samples = 100_000;
    for (n_trials, q) in [(100u64, 0.5), (1000, 0.2)] {
        let mean = n_trials as f64 * q;
        let sd = (mean * (1.0 - q)).sqrt();
        let mut stream = substream(12, n_trials);
        let draws: Vec<u64> = (0..samples).map(|_| binomial_draw(n_trials, q, &mut stream)).collect();
        for t in [0.5 * sd, sd, 2.0 * sd, 10.0] {
            let freq = draws.iter().filter(|&&x| (x as f64) <= mean - t).count() as f64 / samples as f64;
            let bound = chernoff_lower_tail(n_trials, q, t).unwrap();
            let exact = Binomial::new(q, n_trials).unwrap().cdf((mean - t).floor() as u64);
            assert!(exact <= bound, "exact tail above bound at n = {n_trials}, t = {t}");
            assert!(freq <= bound, "n = {n_trials}, q = {q}, t = {t}: {freq} > {bound}");
        }
    }
}

#[test]
fn bound_chain_is_ordered_at_feasible_size() {
    let constants = compute_constants(0.75, 60_001).unwrap();
    assert!(constants.feasible);
    let k = constants.k_minus.ceil() as u64;
    let chain = bound_chain_eval(0.75, 60_001, k, 10_000, 4).unwrap();
    assert!(chain.holds, "{chain:?}");
    assert!((chain.at_k_minus / chain.n_inverse_square - 1.0).abs() <= 1e-9);
}

#[test]
fn desk_scale_is_infeasible() {
    for n_vertices in [1001, 10_001, 50_001] {
        assert!(!compute_constants(0.75, n_vertices).unwrap().feasible);
    }
}
