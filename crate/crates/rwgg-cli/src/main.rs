//! Command-line runner: wires families, walks and schedules to the exact,
//! Monte Carlo and theorem engines and writes CSV results.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rwgg::analysis::AnalysisReport;
use rwgg::error::Error as RwggError;
use rwgg::exact::{exact_expected_unvisited, exact_trajectory, ExactOptions, StartState};
use rwgg::graph::{custom_family_from_edge_list, Family};
use rwgg::kernel::{TransitionKernel, WalkKind};
use rwgg::montecarlo::{estimate_unvisited, per_trial_unvisited, SimulationPlan};
use rwgg::report;
use rwgg::schedule::{DurationFn, GrowthSchedule};
use rwgg::theorems::{run_case, EngineChoice, TheoremCase, TheoremId, Verdict};

#[derive(Parser)]
#[command(name = "rwgg", about = "Random walks on growing graphs", version)]
struct Cli {
    /// Cap the worker-thread count used by the engines.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// complete | path | lollipop | expander[:d=5,seed=17] | custom:PATH
    #[arg(long, default_value = "complete")]
    family: String,
    /// uniform | simple | metropolis | chain:p=0.5,q=0.25
    #[arg(long, default_value = "uniform")]
    walk: String,
    /// constant:c=K | linear:C=K | power:C=K,gamma=G[,exp=E] | table:PATH
    #[arg(long, default_value = "linear:C=1")]
    schedule: String,
    /// Final graph order.
    #[arg(long)]
    n: u32,
    /// Initial clique size.
    #[arg(long, default_value_t = 1)]
    n0: u32,
    /// Start state: auto | point | uniform
    #[arg(long, default_value = "auto")]
    start: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exact E[U(n)] and per-vertex miss probabilities.
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full E[U_t] trajectory to this path.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Raise or lower the dense-propagation guard.
        #[arg(long, default_value_t = 400)]
        dense_cap: u32,
    },
    /// Monte Carlo estimate of E[U(n)].
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one row per trial to this path.
        #[arg(long)]
        per_trial: Option<PathBuf>,
    },
    /// Hitting/mixing/spectral ladder over orders.
    Analyze {
        /// complete | path | lollipop | expander[:d,seed] | custom:PATH
        #[arg(long, default_value = "path")]
        family: String,
        #[arg(long, default_value = "simple")]
        walk: String,
        /// Comma-separated orders, e.g. 4,8,16,32.
        #[arg(long, value_delimiter = ',')]
        n_ladder: Vec<u32>,
        /// Mixing-time search cap.
        #[arg(long, default_value_t = 1 << 30)]
        t_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dump the largest-order kernel (dense, row-major) to this path.
        #[arg(long)]
        dump_kernel: Option<PathBuf>,
    },
    /// Run one theorem case to a certificate.
    Theorem {
        /// T1.1-1..T1.1-4, T1.2-1, T1.2-2, T1.3, T1.3-gen, T1.4, T1.5,
        /// T-moderate, T1.6, C1.7, C-simpleKn, C-expander, C-lollipop,
        /// C-Metro, A-initial
        id: String,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Constant duration for the constant-schedule theorems.
        #[arg(long)]
        constant: Option<u64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        n0: Option<u32>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Single n (shorthand for a one-point ladder).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        n_ladder: Option<Vec<u32>>,
        /// auto | exact | mc
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Walk override where the theorem admits several.
        #[arg(long)]
        walk: Option<String>,
        /// Family override where the theorem admits several.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 400)]
        dense_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaling table: fitted growth exponent of E[U] over a γ grid.
    Sweep {
        #[arg(long, default_value = "path")]
        family: String,
        #[arg(long, default_value = "simple")]
        walk: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0])]
        gammas: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        n_ladder: Vec<u32>,
        /// Duration coefficient C in f(i) = ceil(C·i^{base-γ}).
        #[arg(long, default_value_t = 1.0)]
        coeff: f64,
        /// Exponent base; defaults to the family convention (1 on complete
        /// graphs, 2 otherwise).
        #[arg(long)]
        exp_base: Option<f64>,
        #[arg(long, default_value_t = 400)]
        dense_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_kv(spec: &str) -> Vec<(String, String)> {
    spec.split(',')
        .filter(|s| !s.is_empty())
        .filter_map(|pair| {
            pair.split_once('=')
                .map(|(k, v)| (k.trim().to_lowercase(), v.trim().to_string()))
        })
        .collect()
}

fn kv_f64(kvs: &[(String, String)], key: &str) -> Option<Result<f64>> {
    kvs.iter().find(|(k, _)| k == key).map(|(_, v)| {
        v.parse::<f64>()
            .with_context(|| format!("`{key}` must be a number, got `{v}`"))
    })
}

fn parse_family(spec: &str) -> Result<Family> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "complete" => Ok(Family::Complete),
        "path" => Ok(Family::Path),
        "lollipop" => Ok(Family::Lollipop),
        "expander" => {
            let kvs = parse_kv(rest);
            let degree = match kv_f64(&kvs, "d") {
                Some(v) => v? as usize,
                None => 5,
            };
            let seed = match kv_f64(&kvs, "seed") {
                Some(v) => v? as u64,
                None => 17,
            };
            Ok(Family::ExpanderLike { degree, seed })
        }
        "custom" => {
            if rest.is_empty() {
                bail!("family `custom` needs a path: custom:PATH");
            }
            Ok(custom_family_from_edge_list(Path::new(rest))?)
        }
        other => bail!("unknown family `{other}`"),
    }
}

fn parse_walk(spec: &str) -> Result<WalkKind> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "uniform" => Ok(WalkKind::UniformComplete),
        "simple" => Ok(WalkKind::LazySimple),
        "metropolis" => Ok(WalkKind::LazyMetropolis),
        "chain" => {
            let kvs = parse_kv(rest);
            let p = kv_f64(&kvs, "p").ok_or_else(|| anyhow!("chain walk needs p="))??;
            let q = kv_f64(&kvs, "q").ok_or_else(|| anyhow!("chain walk needs q="))??;
            Ok(WalkKind::PathChain { p, q })
        }
        other => bail!("unknown walk `{other}`"),
    }
}

fn parse_schedule(
    spec: &str,
    family: &Family,
    n0: u32,
    n: u32,
) -> Result<GrowthSchedule> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let durations = match name {
        "constant" => {
            let kvs = parse_kv(rest);
            let c = kv_f64(&kvs, "c").ok_or_else(|| anyhow!("constant schedule needs c="))??;
            if c < 1.0 || c.fract() != 0.0 {
                bail!("constant schedule needs integer c >= 1, got {c}");
            }
            DurationFn::Constant(c as u64)
        }
        "linear" => {
            let kvs = parse_kv(rest);
            let c = kv_f64(&kvs, "c").ok_or_else(|| anyhow!("linear schedule needs C="))??;
            DurationFn::Linear { coeff: c }
        }
        "power" => {
            let kvs = parse_kv(rest);
            let c = kv_f64(&kvs, "c").ok_or_else(|| anyhow!("power schedule needs C="))??;
            let gamma = match kv_f64(&kvs, "gamma") {
                Some(v) => v?,
                None => 0.0,
            };
            let exponent = match kvs.iter().find(|(k, _)| k == "exp") {
                Some((_, v)) => match v.as_str() {
                    "1-gamma" => 1.0 - gamma,
                    "2-gamma" => 2.0 - gamma,
                    other => other
                        .parse::<f64>()
                        .with_context(|| format!("bad exp `{other}`"))?,
                },
                // family convention: complete graphs use 1-γ, the rest 2-γ
                None => match family {
                    Family::Complete => 1.0 - gamma,
                    _ => 2.0 - gamma,
                },
            };
            DurationFn::Power { coeff: c, exponent }
        }
        "table" => {
            if rest.is_empty() {
                bail!("table schedule needs a path: table:PATH");
            }
            return Ok(GrowthSchedule::from_table_file(Path::new(rest), n0, n)?);
        }
        other => bail!("unknown schedule kind `{other}`"),
    };
    Ok(GrowthSchedule::with_initial_order(durations, n0, n)?)
}

fn parse_start(spec: &str) -> Result<StartState> {
    match spec {
        "auto" => Ok(StartState::Auto),
        "point" => Ok(StartState::PointMassFirst),
        "uniform" => Ok(StartState::UniformInitial),
        other => bail!("unknown start state `{other}`"),
    }
}

/// Resolve the output path: explicit flag, else `$RWGG_OUT_DIR`, else cwd.
fn out_path(explicit: Option<PathBuf>, name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let file = format!("rwgg_{name}.csv");
        match std::env::var_os("RWGG_OUT_DIR") {
            Some(dir) => PathBuf::from(dir).join(file),
            None => PathBuf::from(file),
        }
    })
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn validate_model(model: &ModelArgs) -> Result<(Family, WalkKind, GrowthSchedule, StartState)> {
    let family = parse_family(&model.family)?;
    let walk = parse_walk(&model.walk)?;
    let schedule = parse_schedule(&model.schedule, &family, model.n0, model.n)?;
    let start = parse_start(&model.start)?;
    // reject incompatible walk/family pairs before any computation
    let probe = family.snapshot(model.n.min(3).max(2))?;
    TransitionKernel::for_snapshot(walk, &probe)?;
    Ok((family, walk, schedule, start))
}

fn model_config(prefix: &str, model: &ModelArgs, extra: &str) -> String {
    format!(
        "{prefix} family={} walk={} schedule={} n={} n0={} start={}{}",
        model.family, model.walk, model.schedule, model.n, model.n0, model.start, extra
    )
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Exact {
            model,
            out,
            trajectory,
            dense_cap,
        } => {
            let (family, walk, schedule, start) = validate_model(&model)?;
            let opts = ExactOptions {
                dense_cap,
                start,
                ..Default::default()
            };
            let config = model_config("exact", &model, &format!(" dense_cap={dense_cap}"));
            if let Some(traj_path) = trajectory {
                let (result, points) = exact_trajectory(&schedule, &family, walk, &opts)?;
                write_out(&traj_path, &report::trajectory_csv(&config, &points))?;
                let path = out_path(out, "exact");
                write_out(&path, &report::unvisited_csv(&config, &result))?;
                println!("E[U] = {}", result.expected);
            } else {
                let result = exact_expected_unvisited(&schedule, &family, walk, &opts)?;
                let path = out_path(out, "exact");
                write_out(&path, &report::unvisited_csv(&config, &result))?;
                println!("E[U] = {}", result.expected);
            }
            Ok(0)
        }
        Command::Simulate {
            model,
            trials,
            seed,
            out,
            per_trial,
        } => {
            let (family, walk, schedule, start) = validate_model(&model)?;
            let mut plan = SimulationPlan::new(schedule, family, walk, trials, seed)?;
            plan.start = start;
            let config = model_config("simulate", &model, &format!(" trials={trials} seed={seed}"));
            let record = estimate_unvisited(&plan)?;
            if let Some(pt_path) = per_trial {
                let samples = per_trial_unvisited(&plan)?;
                write_out(&pt_path, &report::per_trial_csv(&config, &samples))?;
            }
            let path = out_path(out, "simulate");
            write_out(&path, &report::estimate_csv(&config, &record))?;
            match (record.sd, record.halfwidth) {
                (Some(sd), Some(hw)) => println!(
                    "U mean = {} +- {} (sd {}, {} trials, seed {})",
                    record.estimate, hw, sd, record.trials, record.master_seed
                ),
                _ => println!(
                    "U = {} (single trial, seed {})",
                    record.estimate, record.master_seed
                ),
            }
            Ok(0)
        }
        Command::Analyze {
            family,
            walk,
            n_ladder,
            t_cap,
            out,
            dump_kernel,
        } => {
            if n_ladder.is_empty() {
                bail!("--n-ladder needs at least one order");
            }
            let fam = parse_family(&family)?;
            let wk = parse_walk(&walk)?;
            let config = format!(
                "analyze family={family} walk={walk} n_ladder={} t_cap={t_cap}",
                n_ladder
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("/")
            );
            let mut reports = Vec::new();
            for &n in &n_ladder {
                let g = fam.snapshot(n)?;
                let kernel = TransitionKernel::for_snapshot(wk, &g)?;
                reports.push(AnalysisReport::compute(&kernel, t_cap)?);
            }
            if let Some(dump) = dump_kernel {
                let n = *n_ladder.iter().max().unwrap();
                let g = fam.snapshot(n)?;
                let kernel = TransitionKernel::for_snapshot(wk, &g)?;
                write_out(&dump, &report::kernel_csv(&config, &kernel))?;
            }
            let path = out_path(out, "analyze");
            write_out(&path, &report::analysis_csv(&config, &reports))?;
            for r in &reports {
                println!(
                    "n = {}: t_hit = {:.4}, t_mix = {:?}, lambda2 = {:.6}",
                    r.order, r.t_hit, r.t_mix, r.lambda2
                );
            }
            Ok(0)
        }
        Command::Theorem {
            id,
            c,
            gamma,
            constant,
            delta,
            n0,
            degree,
            trials,
            seed,
            n,
            n_ladder,
            engine,
            walk,
            family,
            dense_cap,
            out,
        } => {
            let theorem = TheoremId::parse(&id)?;
            let mut case = TheoremCase::default_for(theorem);
            let p = &mut case.params;
            if let Some(v) = c {
                p.c = v;
            }
            if let Some(v) = gamma {
                p.gamma = v;
            }
            if let Some(v) = constant {
                p.constant = v;
            }
            if let Some(v) = delta {
                p.delta = v;
            }
            if let Some(v) = n0 {
                p.initial_order = v;
            }
            if let Some(v) = degree {
                p.degree = v;
            }
            if let Some(v) = trials {
                p.trials = v;
            }
            if let Some(v) = seed {
                p.seed = v;
            }
            if let Some(w) = walk.as_deref() {
                p.walk = Some(parse_walk(w)?);
            }
            if let Some(f) = family.as_deref() {
                p.family = Some(parse_family(f)?);
            }
            if let Some(ladder) = n_ladder {
                case = TheoremCase::new(theorem, case.params, ladder)?;
            } else if let Some(single) = n {
                case = TheoremCase::new(theorem, case.params, vec![single])?;
            }
            case.exact.dense_cap = dense_cap;
            case.engine = match engine.as_str() {
                "auto" => EngineChoice::Auto,
                "exact" => EngineChoice::Exact,
                "mc" => EngineChoice::MonteCarlo,
                other => bail!("unknown engine `{other}` (auto | exact | mc)"),
            };
            let config = format!(
                "theorem id={id} c={} gamma={} constant={} delta={} n0={} degree={} trials={} seed={} engine={engine} ladder={}",
                case.params.c,
                case.params.gamma,
                case.params.constant,
                case.params.delta,
                case.params.initial_order,
                case.params.degree,
                case.params.trials,
                case.params.seed,
                case.ladder
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("/")
            );
            let cert = run_case(&case)?;
            let path = out_path(out, "theorem");
            write_out(&path, &report::certificate_csv(&config, &cert))?;
            println!("{}", report::certificate_summary(&cert));
            match cert.verdict {
                Verdict::Pass => Ok(0),
                Verdict::Fail => Ok(1),
                Verdict::Inapplicable => {
                    eprintln!(
                        "hypothesis violated: {}",
                        cert.violated.as_deref().unwrap_or("unknown")
                    );
                    Ok(2)
                }
            }
        }
        Command::Sweep {
            family,
            walk,
            gammas,
            n_ladder,
            coeff,
            exp_base,
            dense_cap,
            out,
        } => {
            let fam = parse_family(&family)?;
            let wk = parse_walk(&walk)?;
            let base = exp_base.unwrap_or(match fam {
                Family::Complete => 1.0,
                _ => 2.0,
            });
            let opts = ExactOptions {
                dense_cap,
                ..Default::default()
            };
            let config = format!(
                "sweep family={family} walk={walk} gammas={} n_ladder={} coeff={coeff} base={base}",
                gammas
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("/"),
                n_ladder
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("/")
            );
            let table =
                rwgg::theorems::scaling_table(&fam, wk, &gammas, &n_ladder, base, coeff, &opts)?;
            let path = out_path(out, "sweep");
            write_out(&path, &report::scaling_csv(&config, &table))?;
            for fit in &table.fits {
                println!(
                    "gamma = {}: fitted exponent {:.4} (max residual {:.4})",
                    fit.gamma, fit.slope, fit.max_residual
                );
            }
            Ok(0)
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<RwggError>() {
        Some(RwggError::Config { .. } | RwggError::Range { .. } | RwggError::Parse { .. }) => 2,
        Some(_) => 1,
        // parse failures of CLI specs are configuration errors
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
