use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use frogsim::aux::{self, AuxOptions, Trajectory};
use frogsim::branching::{self, BranchingCaps};
use frogsim::exact;
use frogsim::experiments::{self, wilson_interval, with_parallelism, ExperimentConfig, ThresholdFn};
use frogsim::frog::{self, FrogOptions, Graph, Scheduling};
use frogsim::theory;
use frogsim::{substream, SimParams, VERSION};

use crate::{Cli, Command, Common, Format, GraphKind, LawKind, SchedulingArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

/// A result rendered in every supported format.
struct Output {
    default: Format,
    /// Effective configuration, embedded in JSON and human output and echoed
    /// on stderr for CSV.
    config: Value,
    human: String,
    json: Value,
    csv: Option<String>,
}

impl Output {
    fn emit(self, common: &Common) -> Result<()> {
        let format = common.format.unwrap_or(self.default);
        let text = match format {
            Format::Json => {
                let mut body = self.json;
                body["config"] = self.config;
                serde_json::to_string_pretty(&body)? + "\n"
            }
            Format::Human => format!("# {}\n{}", config_line(&self.config), self.human),
            Format::Csv => {
                let Some(csv) = self.csv else {
                    bail!("this subcommand has no CSV output; use --format json or human");
                };
                eprintln!("# {}", config_line(&self.config));
                csv
            }
        };
        match &common.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn config_line(config: &Value) -> String {
    match config.as_object() {
        Some(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"')))
            .collect::<Vec<_>>()
            .join(" "),
        None => config.to_string(),
    }
}

fn base_config(command: &str, common: &Common) -> Value {
    json!({
        "version": VERSION,
        "command": command,
        "seed": common.seed,
        "parallel": common.parallel,
    })
}

fn extend(mut config: Value, extra: Value) -> Value {
    if let (Some(map), Some(extra)) = (config.as_object_mut(), extra.as_object()) {
        for (k, v) in extra {
            map.insert(k.clone(), v.clone());
        }
    }
    config
}

pub fn run(cli: Cli) -> Result<Status> {
    let common = cli.common;
    let (output, status) = with_parallelism(common.parallel, || dispatch(cli.command, &common))??;
    output.emit(&common)?;
    Ok(status)
}

fn dispatch(command: Command, common: &Common) -> Result<(Output, Status)> {
    let ok = |output| Ok((output, Status::Ok));
    match command {
        Command::Simulate {
            p,
            n,
            replicas,
            history,
        } => ok(simulate(common, p, n, replicas, history)?),
        Command::Frog {
            p,
            n,
            graph,
            graph_file,
            scheduling,
            replicas,
        } => ok(frog_cmd(common, p, n, graph, graph_file, scheduling, replicas)?),
        Command::Exact { p, n, tail, max_n } => ok(exact_cmd(common, p, n, tail, max_n)?),
        Command::Branching {
            law,
            p,
            n,
            band,
            replicas,
            bplus,
        } => ok(branching_cmd(common, law, p, n, band, replicas, bplus)?),
        Command::Constants { p, n } => ok(constants_cmd(common, p, n)?),
        Command::Chain { p, n, k, replicas } => chain_cmd(common, p, n, k, replicas),
        Command::Sweep {
            p,
            n,
            replicas,
            threshold,
            cprime,
        } => sweep_cmd(common, p, n, replicas, &threshold, cprime),
        Command::CoupleCheck {
            p,
            n,
            replicas,
            max_rounds,
            k_minus,
            k_plus,
        } => couple_check(common, p, n, replicas, max_rounds, k_minus, k_plus),
    }
}

fn trajectories_output(config: Value, trajectories: &[Trajectory]) -> Output {
    let mut human = String::new();
    let mut csv = String::from("replica,v_infinity,r_rounds,peak_active\n");
    for (i, t) in trajectories.iter().enumerate() {
        let _ = writeln!(
            human,
            "replica {i}: v_infinity = {}, r_rounds = {}, peak_active = {}",
            t.v_infinity, t.r_rounds, t.peak_active
        );
        let _ = writeln!(csv, "{i},{},{},{}", t.v_infinity, t.r_rounds, t.peak_active);
    }
    Output {
        default: Format::Human,
        config,
        human,
        json: json!({ "trajectories": trajectories }),
        csv: Some(csv),
    }
}

/// Runs replicas in order; the first failure aborts with its replica index.
fn collect_replicas(
    replicas: u64,
    run: impl Fn(u64) -> frogsim::Result<Trajectory>,
) -> Result<Vec<Trajectory>> {
    (0..replicas)
        .map(|replica| run(replica).with_context(|| format!("replica {replica}")))
        .collect()
}

fn simulate(common: &Common, p: f64, n: usize, replicas: u64, history: bool) -> Result<Output> {
    let params = SimParams::new(p, n, common.seed)?;
    if replicas == 0 {
        bail!("--replicas must be at least 1");
    }
    let options = AuxOptions {
        record_history: history && replicas == 1,
        ..AuxOptions::default()
    };
    let trajectories = collect_replicas(replicas, |replica| {
        aux::run_auxiliary_with(&params, &mut substream(params.seed, replica), options)
    })?;
    let config = extend(
        base_config("simulate", common),
        json!({ "p": p, "N": n, "replicas": replicas }),
    );
    Ok(trajectories_output(config, &trajectories))
}

#[allow(clippy::too_many_arguments)]
fn frog_cmd(
    common: &Common,
    p: f64,
    n: Option<usize>,
    kind: GraphKind,
    graph_file: Option<std::path::PathBuf>,
    scheduling: SchedulingArg,
    replicas: u64,
) -> Result<Output> {
    let (graph, label) = match &graph_file {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            (Graph::from_edge_list(&text)?, path.display().to_string())
        }
        None => {
            let Some(n) = n else {
                bail!("--N is required unless --graph-file is given");
            };
            let graph = match kind {
                GraphKind::Complete => frog::make_complete(n)?,
                GraphKind::Cycle => frog::make_cycle(n)?,
                GraphKind::Path => frog::make_path(n)?,
            };
            (graph, format!("{kind:?}").to_lowercase())
        }
    };
    if replicas == 0 {
        bail!("--replicas must be at least 1");
    }
    let options = FrogOptions {
        scheduling: match scheduling {
            SchedulingArg::Queue => Scheduling::Queue,
            SchedulingArg::Simultaneous => Scheduling::Simultaneous,
        },
        ..FrogOptions::default()
    };
    let trajectories = collect_replicas(replicas, |replica| {
        frog::run_frog_with(&graph, p, &mut substream(common.seed, replica), options)
    })?;
    let config = extend(
        base_config("frog", common),
        json!({
            "p": p,
            "N": graph.vertex_count(),
            "graph": label,
            "scheduling": format!("{scheduling:?}").to_lowercase(),
            "replicas": replicas,
        }),
    );
    Ok(trajectories_output(config, &trajectories))
}

fn exact_cmd(common: &Common, p: f64, n: usize, tail: Option<usize>, max_n: usize) -> Result<Output> {
    let params = SimParams::new(p, n, common.seed)?;
    let pmf = exact::exact_pmf_bounded(&params, max_n)?;
    let tail_value = match tail {
        Some(t) if t == 0 || t > n => bail!("--tail must lie in [1, {n}]"),
        Some(t) => Some(pmf.tail(t)),
        None => None,
    };
    let mut human = String::from("v      P(V_inf = v)\n");
    for (i, m) in pmf.mass.iter().enumerate() {
        let _ = writeln!(human, "{:<6} {m:.12}", i + 1);
    }
    if let (Some(t), Some(value)) = (tail, tail_value) {
        let _ = writeln!(human, "P(V_inf <= {t}) = {value:.12}");
    }
    Ok(Output {
        default: Format::Csv,
        config: extend(base_config("exact", common), json!({ "p": p, "N": n, "tail": tail })),
        human,
        json: json!({ "mass": pmf.mass, "tail": tail_value }),
        csv: Some(pmf.to_csv()),
    })
}

#[allow(clippy::too_many_arguments)]
fn branching_cmd(
    common: &Common,
    law_kind: LawKind,
    p: f64,
    n: Option<usize>,
    band: Option<f64>,
    replicas: u64,
    bplus: bool,
) -> Result<Output> {
    let constants = match n {
        Some(n) if p > 0.5 => Some(theory::compute_constants(p, n)?),
        _ => None,
    };
    let need_n = || n.context("--N is required for this law");
    let (law, band) = match law_kind {
        LawKind::Xplus => (branching::law_xplus(p)?, None),
        LawKind::Xminus | LawKind::Y => {
            let n = need_n()?;
            let band = match (band, &constants) {
                (Some(b), _) => b,
                (None, Some(c)) if law_kind == LawKind::Xminus => c.k_minus,
                (None, Some(c)) => c.k_plus,
                (None, None) => bail!("--band is required when p <= 1/2"),
            };
            let law = if law_kind == LawKind::Xminus {
                branching::law_xminus(p, n, band)?
            } else {
                branching::law_y(p, n, band)?
            };
            (law, Some(band))
        }
    };
    let closed = branching::extinction_closed_form(&law);
    let fixed = branching::extinction_fixed_point(&law, 1e-12).ok();
    if replicas == 0 {
        bail!("--replicas must be at least 1");
    }
    let caps = BranchingCaps {
        round_cap: branching::default_round_cap(constants.map_or(0.0, |c| c.k_minus)),
        population_cap: branching::population_cap_for(&law),
    };
    let extinct = (0..replicas)
        .filter(|&r| {
            branching::run_branching_with(&law, &mut substream(common.seed, r), caps)
                .r_rounds
                .is_some()
        })
        .count() as u64;
    let fraction = extinct as f64 / replicas as f64;
    let ci = wilson_interval(extinct, replicas, 0.95)?;
    let bplus_estimate = if bplus {
        let c = constants.context("--bplus needs --N and p > 1/2")?;
        Some(branching::bplus_statistic(p, c.k_minus, replicas, common.seed)?)
    } else {
        None
    };
    let mut human = format!(
        "law (w0, w1, w2) = ({}, {}, {}), mean = {}\n\
         extinction (closed form)  = {closed}\n\
         extinction (fixed point)  = {}\n\
         extinction (empirical)    = {fraction} [{}, {}] over {replicas} replicas\n",
        law.w0,
        law.w1,
        law.w2,
        law.mean(),
        fixed.map_or("no convergence".to_string(), |f| f.to_string()),
        ci.lo,
        ci.hi,
    );
    if let Some(b) = &bplus_estimate {
        let _ = writeln!(
            human,
            "P(k- < R+ < inf) ~ {} [{}, {}]",
            b.estimate, b.interval.lo, b.interval.hi
        );
    }
    Ok(Output {
        default: Format::Json,
        config: extend(
            base_config("branching", common),
            json!({
                "law": format!("{law_kind:?}").to_lowercase(),
                "p": p,
                "N": n,
                "band": band,
                "replicas": replicas,
            }),
        ),
        human,
        json: json!({
            "law": law,
            "mean": law.mean(),
            "extinction_closed_form": closed,
            "extinction_fixed_point": fixed,
            "extinction_empirical": { "fraction": fraction, "interval": ci, "extinct": extinct },
            "population_cap": caps.population_cap,
            "bplus": bplus_estimate,
        }),
        csv: None,
    })
}

fn constants_cmd(common: &Common, p: f64, n: usize) -> Result<Output> {
    let c = theory::compute_constants(p, n)?;
    let human = format!(
        "n = {}\nk- = {} (= {} ln n)\nk+ = {}\na_k = {} k\nc' = {}\n\
         limit_small = {}\nlimit_large = {}\nk- <= k+: {}\n",
        c.n, c.k_minus, c.c, c.k_plus, c.a_coeff, c.c_prime, c.limit_small, c.limit_large, c.feasible
    );
    Ok(Output {
        default: Format::Json,
        config: extend(base_config("constants", common), json!({ "p": p, "N": n })),
        human,
        json: serde_json::to_value(c)?,
        csv: None,
    })
}

fn chain_cmd(common: &Common, p: f64, n: usize, k: Option<u64>, replicas: u64) -> Result<(Output, Status)> {
    let c = theory::compute_constants(p, n)?;
    let k = k.unwrap_or(c.k_minus.ceil() as u64);
    let chain = theory::bound_chain_eval(p, n, k, replicas, common.seed)?;
    let human = format!(
        "k = {k}, threshold a_k + 1 = {}\n\
         P(A'_k <= a_k+1)        ~ {} (sigma {})\n\
         P(sum Y <= k+a_k)       ~ {} (sigma {})\n\
         P(#Y=2 <= (k+a_k)/2)    ~ {} (sigma {})\n\
         binomial cdf            = {}\n\
         chernoff                = {}\n\
         bound at k-             = {}\n\
         n^-2                    = {}\n\
         chain holds: {}\n",
        chain.threshold_active,
        chain.empirical_x.value,
        chain.empirical_x.sigma,
        chain.empirical_y.value,
        chain.empirical_y.sigma,
        chain.empirical_y_new.value,
        chain.empirical_y_new.sigma,
        chain.binomial_exact,
        chain.chernoff,
        chain.at_k_minus,
        chain.n_inverse_square,
        chain.holds,
    );
    let status = if chain.holds { Status::Ok } else { Status::VerificationFailed };
    Ok((
        Output {
            default: Format::Json,
            config: extend(
                base_config("chain", common),
                json!({ "p": p, "N": n, "k": k, "replicas": replicas }),
            ),
            human,
            json: serde_json::to_value(chain)?,
            csv: None,
        },
        status,
    ))
}

fn sweep_cmd(
    common: &Common,
    p_grid: Vec<f64>,
    n_grid: Vec<usize>,
    replicas: u64,
    threshold: &str,
    c_prime: Option<f64>,
) -> Result<(Output, Status)> {
    let threshold: ThresholdFn = threshold.parse()?;
    let config = ExperimentConfig {
        p_grid,
        n_grid,
        replicas,
        threshold,
        c_prime,
        master_seed: common.seed,
        parallelism: common.parallel,
    };
    let report = experiments::run_sweep(&config)?;
    let mut human = String::from("p      N          P(small) [95% CI]              P(large) [95% CI]              P(middle)  limits\n");
    for row in &report.rows {
        match (&row.stats, &row.error) {
            (Some(s), _) => {
                let _ = writeln!(
                    human,
                    "{:<6} {:<10} {:.4} [{:.4}, {:.4}]  {:.4} [{:.4}, {:.4}]  {:.4}     {:.4} / {:.4}",
                    s.p,
                    s.n_vertices,
                    s.p_small,
                    s.ci_small.lo,
                    s.ci_small.hi,
                    s.p_large,
                    s.ci_large.lo,
                    s.ci_large.hi,
                    s.p_middle,
                    s.limit_small,
                    s.limit_large
                );
            }
            (None, error) => {
                let _ = writeln!(human, "{:<6} {:<10} failed: {}", row.p, row.n_vertices, error.as_deref().unwrap_or("?"));
            }
        }
    }
    for c in report.theory() {
        let _ = writeln!(
            human,
            "exact constants p = {}, n = {}: k- = {:.1}, k+ = {:.1}, c' = {}, k- <= k+: {}",
            c.p, c.n, c.k_minus, c.k_plus, c.c_prime, c.feasible
        );
    }
    let failed = report.failed_rows();
    if failed > 0 {
        eprintln!("warning: {failed} sweep cell(s) failed");
    }
    let json: Value = serde_json::from_str(&report.to_json())?;
    let output = Output {
        default: Format::Csv,
        config: extend(
            base_config("sweep", common),
            json!({
                "p": config.p_grid,
                "N": config.n_grid,
                "replicas": replicas,
                "threshold": threshold.to_string(),
                "cprime": c_prime,
            }),
        ),
        human,
        json,
        csv: Some(report.to_csv()),
    };
    if failed > 0 {
        // Rows are still written; the failure shows in the exit code.
        output.emit(common)?;
        bail!("{failed} sweep cell(s) failed");
    }
    Ok((output, Status::Ok))
}

/// Any ordering violation fails verification; unresolved replicas do not.
fn coupling_status(report: &aux::CouplingReport) -> Status {
    if report.violations() == 0 {
        Status::Ok
    } else {
        Status::VerificationFailed
    }
}

fn couple_check(
    common: &Common,
    p: f64,
    n: usize,
    replicas: u64,
    max_rounds: u64,
    k_minus: Option<f64>,
    k_plus: Option<f64>,
) -> Result<(Output, Status)> {
    let params = SimParams::new(p, n, common.seed)?;
    let constants = if k_minus.is_none() || k_plus.is_none() {
        Some(theory::compute_constants(p, n).context("k- and k+ default to the theory values, which need 1/2 < p < 1 and N >= 3")?)
    } else {
        None
    };
    let k_minus = k_minus.or(constants.map(|c| c.k_minus)).expect("set above");
    let k_plus = k_plus.or(constants.map(|c| c.k_plus)).expect("set above");
    let report = aux::coupling_check(&params, k_minus, k_plus, max_rounds, replicas)?;
    let human = format!(
        "replicas = {}, rounds checked = {}\n\
         outcome order violations   = {}\n\
         active order violations    = {}\n\
         Y order violations         = {}\n\
         V_inf+ >= V_inf violations = {}\n\
         absorption violations      = {}\n\
         unresolved replicas        = {}\n",
        report.replicas,
        report.rounds_checked,
        report.outcome_violations,
        report.active_violations,
        report.y_violations,
        report.visited_violations,
        report.absorption_violations,
        report.unresolved,
    );
    let status = coupling_status(&report);
    Ok((
        Output {
            default: Format::Human,
            config: extend(
                base_config("couple-check", common),
                json!({
                    "p": p,
                    "N": n,
                    "replicas": replicas,
                    "max_rounds": max_rounds,
                    "k_minus": k_minus,
                    "k_plus": k_plus,
                }),
            ),
            human,
            json: serde_json::to_value(report)?,
            csv: None,
        },
        status,
    ))
}
