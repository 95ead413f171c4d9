//! Seeded Monte Carlo simulation of walks on growing graphs: estimates of
//! `E[U]`, trajectory traces, cover times on static kernels, and the
//! growing-path lower-bound construction.
//!
//! Trials draw from per-trial ChaCha streams derived from the master seed,
//! so runs are reproducible bit-for-bit and embarrassingly parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::StartState;
use crate::graph::{Family, GraphSnapshot};
use crate::kernel::{TransitionKernel, WalkKind};
use crate::schedule::{DurationFn, GrowthSchedule};

/// Everything one estimation run needs.
#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub schedule: GrowthSchedule,
    pub family: Family,
    pub walk: WalkKind,
    pub trials: u64,
    pub master_seed: u64,
    pub record_trajectory: bool,
    pub start: StartState,
}

impl SimulationPlan {
    pub fn new(
        schedule: GrowthSchedule,
        family: Family,
        walk: WalkKind,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        if trials < 1 {
            return Err(Error::config("trials", "must be >= 1"));
        }
        Ok(SimulationPlan {
            schedule,
            family,
            walk,
            trials,
            master_seed,
            record_trajectory: false,
            start: StartState::Auto,
        })
    }

    fn trial_rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial_index.wrapping_add(1));
        rng
    }
}

/// A point estimate with its normal-approximation interval.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    pub estimate: f64,
    /// Sample standard deviation; `None` for a single trial.
    pub sd: Option<f64>,
    pub trials: u64,
    /// `1.96·sd/√trials`; `None` when `sd` is.
    pub halfwidth: Option<f64>,
    /// Normal approximation needs a healthy sample; flagged from 30 trials.
    pub interval_valid: bool,
    pub master_seed: u64,
    /// Some trial hit a step cap, so the estimate is biased low.
    pub capped: bool,
}

fn summarize(values: &[f64], master_seed: u64, capped: bool) -> EstimateRecord {
    let trials = values.len() as u64;
    let mut mean = 0.0;
    let mut c = 0.0;
    for &v in values {
        let y = v - c;
        let t = mean + y;
        c = (t - mean) - y;
        mean = t;
    }
    mean /= trials as f64;
    let sd = if trials >= 2 {
        let var: f64 =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
        Some(var.sqrt())
    } else {
        None
    };
    let halfwidth = sd.map(|s| 1.96 * s / (trials as f64).sqrt());
    EstimateRecord {
        estimate: mean,
        sd,
        trials,
        halfwidth,
        interval_valid: trials >= 30,
        master_seed,
        capped,
    }
}

/// Sample the next position from the kernel's row at `u`. The common walks
/// use O(1) branch sampling; irregular Metropolis rows fall back to an O(d)
/// scan of the neighbor list.
fn sample_step(
    walk: WalkKind,
    graph: &GraphSnapshot,
    u: u32,
    rng: &mut ChaCha8Rng,
) -> u32 {
    let m = graph.order();
    if m == 1 {
        return 0;
    }
    match walk {
        WalkKind::UniformComplete => rng.gen_range(0..m),
        WalkKind::LazySimple => {
            if rng.gen_bool(0.5) {
                u
            } else {
                let nbrs = graph.neighbors(u);
                nbrs[rng.gen_range(0..nbrs.len())]
            }
        }
        WalkKind::LazyMetropolis => {
            let mut x: f64 = rng.gen();
            let du = graph.degree(u);
            for &v in graph.neighbors(u) {
                let p = 0.5 / du.max(graph.degree(v)) as f64;
                if x < p {
                    return v;
                }
                x -= p;
            }
            u
        }
        WalkKind::PathChain { p, q } => {
            let x: f64 = rng.gen();
            if u == 0 {
                if x < p {
                    u
                } else {
                    1
                }
            } else if u == m - 1 {
                if x < p {
                    u
                } else {
                    u - 1
                }
            } else if x < q {
                u - 1
            } else if x < 2.0 * q {
                u + 1
            } else {
                u
            }
        }
    }
}

fn sample_start(start: StartState, n0: u32, rng: &mut ChaCha8Rng) -> u32 {
    match start {
        StartState::PointMassFirst => 0,
        StartState::UniformInitial => rng.gen_range(0..n0),
        StartState::Auto => {
            if n0 == 1 {
                0
            } else {
                rng.gen_range(0..n0)
            }
        }
    }
}

/// Everything observed in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// `U(n)`: vertices never visited by the end of the final round.
    pub unvisited: u64,
    /// Existing-and-unvisited count after every global step, when requested.
    pub trace: Option<Vec<u64>>,
    /// Walker position at the start of each round (0-based vertex index).
    pub round_start_positions: Vec<u32>,
}

/// Walk one full trial of the plan.
pub fn simulate_once(plan: &SimulationPlan, trial_index: u64) -> Result<TrialOutcome> {
    let mut rng = plan.trial_rng(trial_index);
    let schedule = &plan.schedule;
    let n0 = schedule.initial_order();
    let n = schedule.final_order();
    let mut graph = plan.family.snapshot(n0)?;
    let mut visited = vec![false; n0 as usize];
    let mut position = sample_start(plan.start, n0, &mut rng);
    visited[position as usize] = true;
    let mut unvisited_now = n0 as u64 - 1;
    let mut trace = plan.record_trajectory.then(|| vec![unvisited_now]);
    let mut round_start_positions = Vec::with_capacity(schedule.rounds() as usize);

    for round in 1..=schedule.rounds() {
        if round > 1 {
            plan.family.extend(&mut graph)?;
            visited.push(false);
            unvisited_now += 1;
        }
        round_start_positions.push(position);
        // kernel sampling is per walk tag; the snapshot carries the topology
        for _ in 0..schedule.duration(round)? {
            position = sample_step(plan.walk, &graph, position, &mut rng);
            if !visited[position as usize] {
                visited[position as usize] = true;
                unvisited_now -= 1;
            }
            if let Some(tr) = trace.as_mut() {
                tr.push(unvisited_now);
            }
        }
    }
    debug_assert_eq!(visited.len(), n as usize);
    let unvisited = visited.iter().filter(|v| !**v).count() as u64;
    debug_assert_eq!(unvisited, unvisited_now);
    Ok(TrialOutcome {
        unvisited,
        trace,
        round_start_positions,
    })
}

/// Mean `U(n)` across trials with its interval.
pub fn estimate_unvisited(plan: &SimulationPlan) -> Result<EstimateRecord> {
    let per_trial = per_trial_unvisited(plan)?;
    Ok(summarize(&per_trial, plan.master_seed, false))
}

/// The per-trial samples behind `estimate_unvisited`, in trial order.
pub fn per_trial_unvisited(plan: &SimulationPlan) -> Result<Vec<f64>> {
    (0..plan.trials)
        .into_par_iter()
        .map(|t| simulate_once(plan, t).map(|o| o.unvisited as f64))
        .collect()
}

/// Cover time of a static kernel: per-start mean of the first time every
/// vertex is visited, reported for the worst start. Individual trials cap at
/// `step_cap` and flag the estimate.
pub fn estimate_cover_time(
    graph: &GraphSnapshot,
    walk: WalkKind,
    trials: u64,
    master_seed: u64,
    step_cap: u64,
) -> Result<EstimateRecord> {
    let n = graph.order();
    if trials < 1 {
        return Err(Error::config("trials", "must be >= 1"));
    }
    if n == 1 {
        let zeros = vec![0.0; trials as usize];
        return Ok(summarize(&zeros, master_seed, false));
    }
    // sanity: the walk must be able to leave every vertex
    TransitionKernel::for_snapshot(walk, graph)?;
    let mut worst: Option<EstimateRecord> = None;
    for start in 0..n {
        let results: Vec<(f64, bool)> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
                rng.set_stream(((start as u64) << 32) | (trial + 1));
                let mut visited = vec![false; n as usize];
                visited[start as usize] = true;
                let mut remaining = n - 1;
                let mut position = start;
                let mut steps: u64 = 0;
                while remaining > 0 && steps < step_cap {
                    position = sample_step(walk, graph, position, &mut rng);
                    steps += 1;
                    if !visited[position as usize] {
                        visited[position as usize] = true;
                        remaining -= 1;
                    }
                }
                (steps as f64, remaining > 0)
            })
            .collect();
        let capped = results.iter().any(|(_, c)| *c);
        let values: Vec<f64> = results.into_iter().map(|(s, _)| s).collect();
        let rec = summarize(&values, master_seed, capped);
        if worst.as_ref().map_or(true, |w| rec.estimate > w.estimate) {
            worst = Some(rec);
        }
    }
    Ok(worst.unwrap())
}

/// Outputs of the growing-path lower-bound construction.
#[derive(Debug, Clone)]
pub struct PathLowerBound {
    /// Full-walk Monte Carlo estimate of `E[U]`.
    pub estimate: EstimateRecord,
    /// `0.18·ε·n^γ`.
    pub lower_bound: f64,
    pub epsilon: f64,
    /// 1-based labels of the construction's landmark vertices.
    pub r_label: u32,
    pub l_label: u32,
    /// Empirical `Pr[v_R never visited | X^(R)_0 = v_L]` and its bound
    /// `1 - T/(4(R-L)²)` with `T = Σ_{i=R}^n f(i)`.
    pub escape_empirical: f64,
    pub escape_bound: f64,
    /// Worst-over-rounds empirical `Pr[X^(k)_0 ⪯ v_L]` for `k ≥ R`, and the
    /// bound `1 - L/n`.
    pub stay_left_empirical: f64,
    pub stay_left_bound: f64,
}

/// Run the lower-bound experiment: `f(i) = ⌈C·i^{2-γ}⌉`, landmarks
/// `R = n - ⌈ε n^γ⌉` and `L = R - ⌈0.6 n⌉` with `ε` fixed just under
/// `min{1/C, 0.1}`.
pub fn path_lowerbound_experiment(
    c: f64,
    gamma: f64,
    n: u32,
    walk: WalkKind,
    trials: u64,
    master_seed: u64,
) -> Result<PathLowerBound> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::config("gamma", "must lie in [0, 1]"));
    }
    if c <= 0.0 {
        return Err(Error::config("C", "must be positive"));
    }
    match walk {
        WalkKind::LazySimple | WalkKind::LazyMetropolis | WalkKind::PathChain { .. } => {}
        WalkKind::UniformComplete => {
            return Err(Error::config("walk", "the construction runs on the path family"))
        }
    }
    let epsilon = 0.9 * (1.0 / c).min(0.1);
    let nf = n as f64;
    let shift = (epsilon * nf.powf(gamma)).ceil() as i64;
    let r = n as i64 - shift;
    let l = r - (0.6 * nf).ceil() as i64;
    if r <= 0 || r > n as i64 {
        return Err(Error::config(
            "n",
            format!("R = n - ⌈εn^γ⌉ = {r} falls outside [1, {n}]"),
        ));
    }
    if (l as f64) < 0.3 * nf - 1.0 || (l as f64) > 0.4 * nf {
        return Err(Error::config(
            "n",
            format!("L = {l} violates L ∈ [0.3n, 0.4n] = [{}, {}]", 0.3 * nf, 0.4 * nf),
        ));
    }
    let (r, l) = (r as u32, l as u32);

    let schedule = GrowthSchedule::new(
        DurationFn::Power {
            coeff: c,
            exponent: 2.0 - gamma,
        },
        n,
    )?;
    let t_tail: u64 = (r..=n).map(|i| schedule.duration(i).unwrap()).sum();
    let escape_bound = 1.0 - t_tail as f64 / (4.0 * ((r - l) as f64).powi(2));
    let stay_left_bound = 1.0 - l as f64 / nf;
    let lower_bound = 0.18 * epsilon * nf.powf(gamma);

    // full-walk estimate plus per-round start positions
    let plan = SimulationPlan::new(schedule.clone(), Family::Path, walk, trials, master_seed)?;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| simulate_once(&plan, t))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = outcomes.iter().map(|o| o.unvisited as f64).collect();
    let estimate = summarize(&values, master_seed, false);

    // component (ii): min over rounds k >= R of Pr[X^(k)_0 ⪯ v_L]
    let mut stay_left_empirical = f64::INFINITY;
    for k in r..=n {
        let hits = outcomes
            .iter()
            .filter(|o| o.round_start_positions[(k - 1) as usize] < l)
            .count();
        stay_left_empirical = stay_left_empirical.min(hits as f64 / trials as f64);
    }

    // component (i): conditional walks over rounds R..n started at v_L
    let escapes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed ^ 0x9e37_79b9_7f4a_7c15);
            rng.set_stream(trial + 1);
            let mut graph = Family::Path.snapshot(r).unwrap();
            let mut position = l - 1; // 0-based index of v_L
            let target = r - 1; // 0-based index of v_R
            let mut hit = false;
            for i in r..=n {
                if i > r {
                    Family::Path.extend(&mut graph).unwrap();
                }
                for _ in 0..schedule.duration(i).unwrap() {
                    position = sample_step(walk, &graph, position, &mut rng);
                    if position == target {
                        hit = true;
                        break;
                    }
                }
                if hit {
                    break;
                }
            }
            u64::from(!hit)
        })
        .sum();
    let escape_empirical = escapes as f64 / trials as f64;

    Ok(PathLowerBound {
        estimate,
        lower_bound,
        epsilon,
        r_label: r,
        l_label: l,
        escape_empirical,
        escape_bound,
        stay_left_empirical,
        stay_left_bound,
    })
}
