//! Replica orchestration and tail-probability reports.
//!
//! Every cell `(p, N)` runs independent auxiliary-chain replicas on
//! substreams of the cell seed and sorts each `V_inf` into one of three
//! disjoint bands:
//!
//! * small: `V_inf <= f(n)`
//! * large: `V_inf >= c' n` (and not small)
//! * middle: everything else
//!
//! Tallies are merged by addition, so results do not depend on how replicas
//! are spread across threads.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::aux::run_auxiliary;
use crate::error::{Error, Result};
use crate::model::{substream, SimParams};
use crate::theory::{compute_constants, limit_large, limit_small};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<Interval> {
    if trials == 0 || successes > trials || !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "wilson interval needs 0 <= successes <= trials, trials >= 1, confidence in (0, 1); \
             got {successes}/{trials} at {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, phat) };
    let hi = if successes == trials { 1.0 } else { (center + half).clamp(phat, 1.0) };
    Ok(Interval { lo, hi })
}

/// Threshold function `f(n)` separating the small mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "c", rename_all = "lowercase")]
pub enum ThresholdFn {
    Sqrt,
    /// `c ln n`
    Log(f64),
    /// `c (ln n)^2`
    Log2(f64),
}

impl ThresholdFn {
    pub fn eval(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            ThresholdFn::Sqrt => n.sqrt(),
            ThresholdFn::Log(c) => c * n.ln(),
            ThresholdFn::Log2(c) => c * n.ln().powi(2),
        }
    }
}

impl fmt::Display for ThresholdFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdFn::Sqrt => write!(f, "sqrt"),
            ThresholdFn::Log(c) => write!(f, "log:{c}"),
            ThresholdFn::Log2(c) => write!(f, "log2:{c}"),
        }
    }
}

impl FromStr for ThresholdFn {
    type Err = Error;

    /// `sqrt`, `log[:c]` or `log2[:c]`; `c` defaults to 1.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, constant) = match s.split_once(':') {
            Some((kind, c)) => {
                let c: f64 = c
                    .parse()
                    .map_err(|_| Error::ConfigInvalid(format!("bad threshold constant in {s:?}")))?;
                if !(c > 0.0) {
                    return Err(Error::ConfigInvalid(format!("threshold constant must be positive in {s:?}")));
                }
                (kind, Some(c))
            }
            None => (s, None),
        };
        match (kind, constant) {
            ("sqrt", None) | ("sqrt", Some(1.0)) => Ok(ThresholdFn::Sqrt),
            ("log", c) => Ok(ThresholdFn::Log(c.unwrap_or(1.0))),
            ("log2", c) => Ok(ThresholdFn::Log2(c.unwrap_or(1.0))),
            _ => Err(Error::ConfigInvalid(format!("unknown threshold {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p_grid: Vec<f64>,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<usize>,
    pub replicas: u64,
    pub threshold: ThresholdFn,
    /// Linear-mode fraction; `None` takes `c'` from the theory constants when
    /// `p > 1/2` and [`FALLBACK_C_PRIME`] otherwise.
    pub c_prime: Option<f64>,
    pub master_seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub parallelism: usize,
}

/// `c'` used for `p <= 1/2`, where the theory constants are undefined.
pub const FALLBACK_C_PRIME: f64 = 0.11;

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p_grid: vec![0.75],
            n_grid: vec![10_001],
            replicas: 10_000,
            threshold: ThresholdFn::Sqrt,
            c_prime: None,
            master_seed: 0,
            parallelism: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() || self.n_grid.is_empty() {
            return Err(Error::ConfigInvalid("empty p or N grid".into()));
        }
        if self.replicas == 0 {
            return Err(Error::ConfigInvalid("replicas must be at least 1".into()));
        }
        if let Some(c) = self.c_prime {
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::ConfigInvalid(format!("c' = {c} outside (0, 1)")));
            }
        }
        Ok(())
    }

    pub fn c_prime_for(&self, p: f64, n_vertices: usize) -> f64 {
        self.c_prime.unwrap_or_else(|| {
            compute_constants(p, n_vertices)
                .map(|c| c.c_prime)
                .unwrap_or(FALLBACK_C_PRIME)
        })
    }
}

/// Statistics of one `(p, N)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub p: f64,
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub seed: u64,
    pub replicas: u64,
    pub threshold_small: f64,
    pub threshold_large: f64,
    pub count_small: u64,
    pub count_middle: u64,
    pub count_large: u64,
    pub p_small: f64,
    pub ci_small: Interval,
    pub p_large: f64,
    pub ci_large: Interval,
    pub p_middle: f64,
    pub ci_middle: Interval,
    pub limit_small: f64,
    pub limit_large: f64,
    pub wall_ms: u64,
}

/// Theorem limits: `((1-p)/p, (2p-1)/p)` above `1/2`, `(1, 0)` otherwise.
pub fn theoretical_limits(p: f64) -> (f64, f64) {
    if p > 0.5 {
        (limit_small(p), limit_large(p))
    } else {
        (1.0, 0.0)
    }
}

/// Runs `f` inside a pool of `threads` workers (global pool when 0).
pub fn with_parallelism<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ConfigInvalid(e.to_string()))?;
    Ok(pool.install(f))
}

/// Band tallies `[small, middle, large]` of `replicas` auxiliary runs on
/// substreams of `params.seed`.
pub fn tally_bands(
    params: &SimParams,
    replicas: u64,
    threshold_small: f64,
    threshold_large: f64,
) -> Result<[u64; 3]> {
    (0..replicas)
        .into_par_iter()
        .map(|replica| {
            let traj = run_auxiliary(params, &mut substream(params.seed, replica)).map_err(
                |err| match err {
                    Error::RoundCapExceeded { cap } => Error::ReplicaRoundCapExceeded { replica, cap },
                    other => other,
                },
            )?;
            let v = traj.v_infinity as f64;
            let band = if v <= threshold_small {
                0
            } else if v >= threshold_large {
                2
            } else {
                1
            };
            let mut tally = [0u64; 3];
            tally[band] = 1;
            Ok(tally)
        })
        .try_reduce(|| [0; 3], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]))
}

/// Runs one cell; deterministic in `(params.seed, config)`.
pub fn run_cell(params: &SimParams, config: &ExperimentConfig) -> Result<CellStats> {
    config.validate()?;
    let n = params.n();
    let threshold_small = config.threshold.eval(n);
    if !(threshold_small >= 1.0) {
        return Err(Error::ConfigInvalid(format!(
            "small threshold {} = {threshold_small} below 1 at n = {n}",
            config.threshold
        )));
    }
    let threshold_large = config.c_prime_for(params.p, params.n_vertices) * n as f64;
    let start = Instant::now();
    let tally = with_parallelism(config.parallelism, || {
        tally_bands(params, config.replicas, threshold_small, threshold_large)
    })??;
    let wall_ms = start.elapsed().as_millis() as u64;
    let replicas = config.replicas;
    let [small, middle, large] = tally;
    let (limit_small, limit_large) = theoretical_limits(params.p);
    Ok(CellStats {
        p: params.p,
        n_vertices: params.n_vertices,
        seed: params.seed,
        replicas,
        threshold_small,
        threshold_large,
        count_small: small,
        count_middle: middle,
        count_large: large,
        p_small: small as f64 / replicas as f64,
        ci_small: wilson_interval(small, replicas, 0.95)?,
        p_large: large as f64 / replicas as f64,
        ci_large: wilson_interval(large, replicas, 0.95)?,
        p_middle: middle as f64 / replicas as f64,
        ci_middle: wilson_interval(middle, replicas, 0.95)?,
        limit_small,
        limit_large,
        wall_ms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub p: f64,
    pub n_vertices: usize,
    pub stats: Option<CellStats>,
    pub error: Option<String>,
}

/// Flat export record; CSV and JSON carry the same fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub p: f64,
    #[serde(rename = "N")]
    pub n_vertices: usize,
    pub replicas: Option<u64>,
    pub threshold_small: Option<f64>,
    pub threshold_large: Option<f64>,
    pub p_small: Option<f64>,
    pub lo_small: Option<f64>,
    pub hi_small: Option<f64>,
    pub p_large: Option<f64>,
    pub lo_large: Option<f64>,
    pub hi_large: Option<f64>,
    pub p_middle: Option<f64>,
    pub limit_small: Option<f64>,
    pub limit_large: Option<f64>,
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl ReportRow {
    pub fn record(&self) -> ReportRecord {
        let s = self.stats.as_ref();
        ReportRecord {
            p: self.p,
            n_vertices: self.n_vertices,
            replicas: s.map(|s| s.replicas),
            threshold_small: s.map(|s| s.threshold_small),
            threshold_large: s.map(|s| s.threshold_large),
            p_small: s.map(|s| s.p_small),
            lo_small: s.map(|s| s.ci_small.lo),
            hi_small: s.map(|s| s.ci_small.hi),
            p_large: s.map(|s| s.p_large),
            lo_large: s.map(|s| s.ci_large.lo),
            hi_large: s.map(|s| s.ci_large.hi),
            p_middle: s.map(|s| s.p_middle),
            limit_small: s.map(|s| s.limit_small),
            limit_large: s.map(|s| s.limit_large),
            wall_ms: s.map(|s| s.wall_ms),
            error: self.error.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
}

pub const REPORT_CSV_HEADER: &str = "p,N,replicas,threshold_small,threshold_large,p_small,lo_small,hi_small,p_large,lo_large,hi_large,p_middle,limit_small,limit_large,wall_ms";

fn cell<T: fmt::Display>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    /// One row per cell; failed cells keep `p,N` and leave the rest empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_CSV_HEADER);
        out.push('\n');
        for r in self.rows.iter().map(ReportRow::record) {
            let fields = [
                r.p.to_string(),
                r.n_vertices.to_string(),
                cell(r.replicas),
                cell(r.threshold_small),
                cell(r.threshold_large),
                cell(r.p_small),
                cell(r.lo_small),
                cell(r.hi_small),
                cell(r.p_large),
                cell(r.lo_large),
                cell(r.hi_large),
                cell(r.p_middle),
                cell(r.limit_small),
                cell(r.limit_large),
                cell(r.wall_ms),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Exact asymptotic constants of every supercritical cell, printed next to
    /// the desk-scale thresholds actually used.
    pub fn theory(&self) -> Vec<crate::theory::TheoryConstants> {
        self.rows
            .iter()
            .filter_map(|row| compute_constants(row.p, row.n_vertices).ok())
            .collect()
    }

    /// `{"version", "config", "rows": [record, ...], "theory": [...]}`.
    pub fn to_json(&self) -> String {
        let rows: Vec<ReportRecord> = self.rows.iter().map(ReportRow::record).collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "version": self.version,
            "config": self.config,
            "rows": rows,
            "theory": self.theory(),
        }))
        .expect("report serializes")
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Seed of cell `index` under `master_seed`.
pub fn cell_seed(master_seed: u64, index: u64) -> u64 {
    substream(master_seed, index).next_seed()
}

/// Runs every cell of the grid, rows sorted by `(p, N)`. A failing cell is
/// recorded in its row and the sweep continues.
pub fn run_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut cells: Vec<(f64, usize)> = config
        .p_grid
        .iter()
        .flat_map(|&p| config.n_grid.iter().map(move |&n| (p, n)))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    cells.dedup();
    let rows = cells
        .iter()
        .enumerate()
        .map(|(index, &(p, n_vertices))| {
            let outcome = SimParams::new(p, n_vertices, cell_seed(config.master_seed, index as u64))
                .and_then(|params| run_cell(&params, config));
            match outcome {
                Ok(stats) => ReportRow {
                    p,
                    n_vertices,
                    stats: Some(stats),
                    error: None,
                },
                Err(err) => ReportRow {
                    p,
                    n_vertices,
                    stats: None,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();
    Ok(ExperimentReport {
        version: crate::VERSION.to_string(),
        config: config.clone(),
        rows,
    })
}

/// Histogram of `values` over `1..=max` (index `v - 1`).
pub fn histogram(values: impl IntoIterator<Item = usize>, max: usize) -> Vec<u64> {
    let mut counts = vec![0u64; max];
    for v in values {
        counts[v - 1] += 1;
    }
    counts
}

/// Pearson goodness-of-fit of `observed` against probabilities `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Bins whose expected count is below 5 are pooled into their neighbour.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::Domain("observed and expected lengths differ".into()));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::EmptyRun);
    }
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        acc.0 += o as f64;
        acc.1 += e * total as f64;
        if acc.1 >= 5.0 {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => pooled.push(acc),
        }
    }
    let statistic: f64 = pooled
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else { f64::INFINITY })
        .sum();
    let dof = pooled.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
        1.0 - dist.cdf(statistic)
    };
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value,
    })
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|` of integer
/// samples given as histograms over the same support.
pub fn ks_two_sample(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let (mut ca, mut cb, mut sup) = (0u64, 0u64, 0.0f64);
    let len = a.len().max(b.len());
    for i in 0..len {
        ca += a.get(i).copied().unwrap_or(0);
        cb += b.get(i).copied().unwrap_or(0);
        sup = sup.max((ca as f64 / na - cb as f64 / nb).abs());
    }
    sup
}

/// Asymptotic KS critical value at level `alpha` for sample sizes `na`, `nb`.
pub fn ks_critical(alpha: f64, na: u64, nb: u64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((na + nb) as f64 / (na as f64 * nb as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        assert_eq!(wilson_interval(0, 100, 0.95).unwrap().lo, 0.0);
        assert_eq!(wilson_interval(100, 100, 0.95).unwrap().hi, 1.0);
        let mid = wilson_interval(50, 100, 0.95).unwrap();
        assert!(((0.5 - mid.lo) - (mid.hi - 0.5)).abs() < 1e-12);
        assert!(wilson_interval(333, 1000, 0.95).unwrap().contains(1.0 / 3.0));
        assert!(wilson_interval(1, 0, 0.95).is_err());
        assert!(wilson_interval(5, 4, 0.95).is_err());
        assert!(wilson_interval(1, 4, 1.0).is_err());
    }

    #[test]
    fn wilson_reference_value() {
        // 333/1000 at z = 1.959964: hand-evaluated score interval.
        let z: f64 = 1.959963984540054;
        let (n, ph) = (1000.0f64, 0.333f64);
        let denom = 1.0 + z * z / n;
        let center = (ph + z * z / (2.0 * n)) / denom;
        let half = z / denom * (ph * (1.0 - ph) / n + z * z / (4.0 * n * n)).sqrt();
        let ci = wilson_interval(333, 1000, 0.95).unwrap();
        assert!((ci.lo - (center - half)).abs() < 1e-9);
        assert!((ci.hi - (center + half)).abs() < 1e-9);
        assert!((ci.lo - 0.30446).abs() < 1e-4 && (ci.hi - 0.36285).abs() < 1e-4);
    }

    #[test]
    fn threshold_parsing() {
        assert_eq!("sqrt".parse::<ThresholdFn>().unwrap(), ThresholdFn::Sqrt);
        assert_eq!("log:2.5".parse::<ThresholdFn>().unwrap(), ThresholdFn::Log(2.5));
        assert_eq!("log2".parse::<ThresholdFn>().unwrap(), ThresholdFn::Log2(1.0));
        assert!("cube".parse::<ThresholdFn>().is_err());
        assert!("log:-1".parse::<ThresholdFn>().is_err());
        assert!("log:x".parse::<ThresholdFn>().is_err());
        assert!((ThresholdFn::Log2(1.0).eval(1000) - 1000f64.ln().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn p_zero_cell_is_all_small() {
        let config = ExperimentConfig {
            replicas: 500,
            ..ExperimentConfig::default()
        };
        let stats = run_cell(&SimParams::new(0.0, 50, 3).unwrap(), &config).unwrap();
        assert_eq!(stats.count_small, 500);
        assert_eq!(stats.p_small, 1.0);
        assert_eq!((stats.limit_small, stats.limit_large), (1.0, 0.0));
    }

    #[test]
    fn small_threshold_below_one_is_rejected() {
        let config = ExperimentConfig {
            threshold: ThresholdFn::Log(0.1),
            replicas: 10,
            ..ExperimentConfig::default()
        };
        let params = SimParams::new(0.6, 3, 0).unwrap();
        assert!(matches!(run_cell(&params, &config), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn empty_grid_is_invalid() {
        let config = ExperimentConfig {
            n_grid: vec![],
            ..ExperimentConfig::default()
        };
        assert!(matches!(run_sweep(&config), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn sweep_rows_sorted_and_failures_flagged() {
        let config = ExperimentConfig {
            p_grid: vec![0.75, 0.3, 1.5],
            n_grid: vec![200, 50],
            replicas: 200,
            ..ExperimentConfig::default()
        };
        let report = run_sweep(&config).unwrap();
        let keys: Vec<(f64, usize)> = report.rows.iter().map(|r| (r.p, r.n_vertices)).collect();
        assert_eq!(keys, vec![(0.3, 50), (0.3, 200), (0.75, 50), (0.75, 200), (1.5, 50), (1.5, 200)]);
        assert_eq!(report.failed_rows(), 2);
        let csv = report.to_csv();
        assert!(csv.starts_with(REPORT_CSV_HEADER));
        assert!(csv.lines().all(|l| l.split(',').count() == 15));
        for row in report.rows.iter().filter_map(|r| r.stats.as_ref()) {
            assert_eq!(row.count_small + row.count_middle + row.count_large, row.replicas);
            assert!((row.p_small + row.p_middle + row.p_large - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_is_deterministic_across_thread_counts() {
        let base = ExperimentConfig {
            p_grid: vec![0.8],
            n_grid: vec![300],
            replicas: 2000,
            master_seed: 99,
            ..ExperimentConfig::default()
        };
        let one = run_sweep(&ExperimentConfig { parallelism: 1, ..base.clone() }).unwrap();
        let three = run_sweep(&ExperimentConfig { parallelism: 3, ..base }).unwrap();
        let strip = |r: &ExperimentReport| {
            r.rows
                .iter()
                .map(|row| {
                    let mut s = row.stats.clone().unwrap();
                    s.wall_ms = 0;
                    s
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&one), strip(&three));
    }

    #[test]
    fn chi_square_and_ks_basics() {
        let exact = chi_square_gof(&[500, 500], &[0.5, 0.5]).unwrap();
        assert_eq!(exact.statistic, 0.0);
        assert_eq!(exact.dof, 1);
        assert!((exact.p_value - 1.0).abs() < 1e-12);
        let off = chi_square_gof(&[900, 100], &[0.5, 0.5]).unwrap();
        assert!(off.p_value < 1e-10);
        assert_eq!(ks_two_sample(&[5, 5], &[5, 5]), 0.0);
        assert_eq!(ks_two_sample(&[10, 0], &[0, 10]), 1.0);
        assert!((ks_critical(0.05, 1000, 1000) - 1.358 * (2.0f64 / 1000.0).sqrt()).abs() < 1e-3);
    }
}
