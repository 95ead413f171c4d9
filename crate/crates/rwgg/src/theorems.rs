//! Parameterized experiment drivers: each case instantiates one theorem's
//! hypotheses, synthesizes the duration function from measured hitting and
//! mixing times where the hypothesis references them, runs the exact or
//! Monte Carlo engines over a ladder of `n`, and certifies the displayed
//! bound with the measured inputs. Hypothesis violations yield an
//! `Inapplicable` verdict naming the failed inequality; they never run
//! silently.

use crate::analysis::{hitting_time, lambda2, mixing_time, pi_ratio, MixingOutcome};
use crate::error::{Error, Result};
use crate::exact::{complete_closed_form, exact_expected_unvisited, ExactOptions};
use crate::graph::Family;
use crate::kernel::{TransitionKernel, WalkKind};
use crate::montecarlo::{estimate_unvisited, path_lowerbound_experiment, SimulationPlan};
use crate::schedule::{DurationFn, GrowthSchedule};

/// Identifiers for the supported theorem experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// Complete graph, `f(i) ≥ Ci`: `E[U]` stays bounded.
    T1_1_1,
    /// Complete graph, `f(i)/i → ∞`: `E[U] → 0` (finite-ladder proxy).
    T1_1_2,
    /// Complete graph, unbounded monotone `f` with `f(i)/i` nonincreasing:
    /// sandwich `n/(f(n)+1)·(1-1/n)^{f(n)} ≤ E[U] ≤ n/f(n)`.
    T1_1_3,
    /// Complete graph, constant `f = c`: `E[U]/(n/(c+1)) ∈ [(1-1/n)^c, 1]`.
    T1_1_4,
    /// Any walk, `f(i) ≥ C·t_hit(i)`, `C > 1`: `E[U] ≤ 1/(C-1)`.
    T1_2_1,
    /// Any walk, `f(i)/t_hit(i) → ∞`: `E[U] → 0` (finite-ladder proxy).
    T1_2_2,
    /// Lazy reversible, `t_hit/t_mix ≥ i^γ/C`, `f(i) ≥ 3C·t_hit(i)/i^γ`:
    /// `E[U] ≤ 8n^γ/C + 32`.
    T1_3,
    /// Lazy reversible, `f(i) ≥ t_hit(i)/Δ + 2t_mix(i)`: `E[U] ≤ 8Δ + 32`.
    T1_3Gen,
    /// Lazy simple with measured edge growth `L`:
    /// `f(i) ≥ (C/i^γ + (L+1)/(2i))·t_hit(i)` gives `E[U] ≤ √(L+1)·n^γ/C`.
    T1_4,
    /// Lazy symmetric: `f(i) ≥ (C/i^γ + 2/i)·t_hit(i)` gives
    /// `E[U] ≤ √3·n^γ/C`.
    T1_5,
    /// Lazy reversible with measured `r_i`:
    /// `f(i) ≥ (1/Δ + (i(r_i-1)+1)/(2i))·t_hit(i)` gives
    /// `E[U] ≤ Δ·√(max i(r_i-1) + 1)`.
    TModerate,
    /// Growing-path lower bound: `f(i) ≤ C·i^{2-γ}` gives
    /// `E[U] ≥ 0.18·ε·n^γ`.
    T1_6,
    /// Growing-path two-sided scaling: fitted log-log exponent of `E[U]`
    /// tracks γ under `f(i) = ⌈i^{2-γ}⌉`.
    C1_7,
    /// Complete-graph two-sided scaling with `f(i) ≈ C·i^{1-γ}`.
    CSimpleKn,
    /// Random-attachment family with measured `t_hit ≤ K₁·i`,
    /// `t_mix ≤ K₂·log i`: `E[U] ≤ 8n^γ/C + 32`.
    CExpander,
    /// Growing lollipop under the lazy simple walk with `f(i) = ⌈C₁·i^{3-γ}⌉`.
    CLollipop,
    /// Lazy Metropolis walk: `E[U] ≤ √3·n^γ/C`.
    CMetro,
    /// Complete graph on top of an initial clique of `n₀` vertices,
    /// `f(i) ≥ 2i/Δ`: `E[U(n)] ≤ 2n₀ + Δ`.
    AInitial,
}

impl TheoremId {
    pub fn parse(s: &str) -> Result<Self> {
        let id = match s {
            "T1.1-1" => TheoremId::T1_1_1,
            "T1.1-2" => TheoremId::T1_1_2,
            "T1.1-3" => TheoremId::T1_1_3,
            "T1.1-4" => TheoremId::T1_1_4,
            "T1.2-1" => TheoremId::T1_2_1,
            "T1.2-2" => TheoremId::T1_2_2,
            "T1.3" => TheoremId::T1_3,
            "T1.3-gen" => TheoremId::T1_3Gen,
            "T1.4" => TheoremId::T1_4,
            "T1.5" => TheoremId::T1_5,
            "T-moderate" => TheoremId::TModerate,
            "T1.6" => TheoremId::T1_6,
            "C1.7" => TheoremId::C1_7,
            "C-simpleKn" => TheoremId::CSimpleKn,
            "C-expander" => TheoremId::CExpander,
            "C-lollipop" => TheoremId::CLollipop,
            "C-Metro" => TheoremId::CMetro,
            "A-initial" => TheoremId::AInitial,
            other => {
                return Err(Error::config(
                    "theorem",
                    format!("unknown theorem id `{other}`"),
                ))
            }
        };
        Ok(id)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T1_1_1 => "T1.1-1",
            TheoremId::T1_1_2 => "T1.1-2",
            TheoremId::T1_1_3 => "T1.1-3",
            TheoremId::T1_1_4 => "T1.1-4",
            TheoremId::T1_2_1 => "T1.2-1",
            TheoremId::T1_2_2 => "T1.2-2",
            TheoremId::T1_3 => "T1.3",
            TheoremId::T1_3Gen => "T1.3-gen",
            TheoremId::T1_4 => "T1.4",
            TheoremId::T1_5 => "T1.5",
            TheoremId::TModerate => "T-moderate",
            TheoremId::T1_6 => "T1.6",
            TheoremId::C1_7 => "C1.7",
            TheoremId::CSimpleKn => "C-simpleKn",
            TheoremId::CExpander => "C-expander",
            TheoremId::CLollipop => "C-lollipop",
            TheoremId::CMetro => "C-Metro",
            TheoremId::AInitial => "A-initial",
        }
    }
}

/// Free parameters a case may bind; each theorem reads the ones it needs.
#[derive(Debug, Clone)]
pub struct CaseParams {
    /// The paper's `C`.
    pub c: f64,
    pub gamma: f64,
    /// Constant duration `c` for the constant-schedule theorems.
    pub constant: u64,
    /// The paper's `Δ`.
    pub delta: f64,
    /// Initial clique size `n₀`.
    pub initial_order: u32,
    /// Attachment degree of the random family.
    pub degree: usize,
    pub seed: u64,
    pub trials: u64,
    /// Walk override where a theorem admits several.
    pub walk: Option<WalkKind>,
    /// Family override where a theorem admits several.
    pub family: Option<Family>,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams {
            c: 1.0,
            gamma: 1.0,
            constant: 1,
            delta: 1.0,
            initial_order: 5,
            degree: 5,
            seed: 17,
            trials: 2000,
            walk: None,
            family: None,
        }
    }
}

/// Which engine produces the measured `E[U]` column of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    /// Each case's natural engine (closed form or dense propagation;
    /// Monte Carlo for the lower-bound construction).
    #[default]
    Auto,
    Exact,
    /// Monte Carlo with the case's `trials` and `seed`.
    MonteCarlo,
}

/// One theorem experiment: id, bindings and the ladder of final orders.
#[derive(Debug, Clone)]
pub struct TheoremCase {
    pub id: TheoremId,
    pub params: CaseParams,
    pub ladder: Vec<u32>,
    pub exact: ExactOptions,
    pub engine: EngineChoice,
}

impl TheoremCase {
    pub fn new(id: TheoremId, params: CaseParams, ladder: Vec<u32>) -> Result<Self> {
        if ladder.is_empty() {
            return Err(Error::config("ladder", "must name at least one n"));
        }
        let mut sorted = ladder.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ladder.len() {
            return Err(Error::config("ladder", "entries must be distinct"));
        }
        Ok(TheoremCase {
            id,
            params,
            ladder: sorted,
            exact: ExactOptions::default(),
            engine: EngineChoice::Auto,
        })
    }

    /// A runnable default configuration for every theorem id.
    pub fn default_for(id: TheoremId) -> Self {
        let p = CaseParams::default();
        let (params, ladder) = match id {
            TheoremId::T1_1_1 => (CaseParams { c: 1.0, ..p }, vec![50, 100, 200, 400]),
            TheoremId::T1_1_2 => (p, vec![25, 50, 100, 200]),
            TheoremId::T1_1_3 => (p, vec![50, 100, 200, 400]),
            TheoremId::T1_1_4 => (CaseParams { constant: 1, ..p }, vec![500, 1000, 2000]),
            TheoremId::T1_2_1 => (CaseParams { c: 2.0, ..p }, vec![8, 16, 32, 64]),
            TheoremId::T1_2_2 => (p, vec![8, 16, 32, 64]),
            TheoremId::T1_3 => (CaseParams { c: 2.0, gamma: 1.0, ..p }, vec![8, 16, 32]),
            TheoremId::T1_3Gen => (CaseParams { delta: 2.0, ..p }, vec![8, 16, 32]),
            TheoremId::T1_4 => (CaseParams { c: 1.0, gamma: 0.5, ..p }, vec![8, 16, 32]),
            TheoremId::T1_5 => (CaseParams { c: 1.0, gamma: 0.5, ..p }, vec![8, 16, 32]),
            TheoremId::TModerate => (CaseParams { delta: 2.0, ..p }, vec![8, 16, 32]),
            TheoremId::T1_6 => (CaseParams { c: 1.0, gamma: 1.0, trials: 4000, ..p }, vec![100]),
            TheoremId::C1_7 => (p, vec![25, 50, 100, 200]),
            TheoremId::CSimpleKn => (CaseParams { c: 1.0, gamma: 0.5, ..p }, vec![25, 50, 100, 200]),
            TheoremId::CExpander => (CaseParams { c: 3.0, gamma: 0.5, ..p }, vec![12, 24, 48]),
            TheoremId::CLollipop => (CaseParams { c: 3.0, gamma: 0.5, ..p }, vec![8, 12, 16, 24]),
            TheoremId::CMetro => (CaseParams { c: 1.0, gamma: 0.5, ..p }, vec![8, 16, 32]),
            TheoremId::AInitial => (CaseParams { initial_order: 5, delta: 1.0, ..p }, vec![50, 200]),
        };
        TheoremCase::new(id, params, ladder).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A hypothesis audit failed; the case never ran.
    Inapplicable,
}

/// One ladder point of a certificate.
#[derive(Debug, Clone)]
pub struct CertificateRow {
    pub n: u32,
    pub measured: f64,
    pub bound: f64,
    /// Slack in the bound's favor (nonnegative iff the row passes).
    pub margin: f64,
    pub pass: bool,
}

/// The outcome of one theorem case.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub id: TheoremId,
    pub rows: Vec<CertificateRow>,
    /// Human-readable audit of every hypothesis that was checked.
    pub audit: Vec<String>,
    pub verdict: Verdict,
    /// The violated inequality, when `Inapplicable`.
    pub violated: Option<String>,
}

impl Certificate {
    fn from_rows(id: TheoremId, rows: Vec<CertificateRow>, audit: Vec<String>) -> Self {
        let verdict = if rows.iter().all(|r| r.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Certificate {
            id,
            rows,
            audit,
            verdict,
            violated: None,
        }
    }

    fn inapplicable(id: TheoremId, audit: Vec<String>, violated: String) -> Self {
        Certificate {
            id,
            rows: Vec::new(),
            audit,
            verdict: Verdict::Inapplicable,
            violated: Some(violated),
        }
    }
}

fn upper_row(n: u32, measured: f64, bound: f64) -> CertificateRow {
    CertificateRow {
        n,
        measured,
        bound,
        margin: bound - measured,
        pass: measured <= bound,
    }
}

fn lower_row(n: u32, measured: f64, bound: f64) -> CertificateRow {
    CertificateRow {
        n,
        measured,
        bound,
        margin: measured - bound,
        pass: measured >= bound,
    }
}

/// Hitting times of the per-round kernels, indexed by order `1..=n`.
fn hitting_ladder(family: &Family, walk: WalkKind, n: u32) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n as usize + 1];
    let mut g = family.initial_snapshot()?;
    for i in 1..=n {
        if i > 1 {
            family.extend(&mut g)?;
        }
        if i >= 2 {
            let kernel = TransitionKernel::for_snapshot(walk, &g)?;
            out[i as usize] = hitting_time(&kernel)?.t_hit;
        }
    }
    Ok(out)
}

/// Worst-start mixing times of the per-round kernels, indexed by order.
fn mixing_ladder(family: &Family, walk: WalkKind, n: u32) -> Result<Vec<u64>> {
    let mut out = vec![1u64; n as usize + 1];
    let mut g = family.initial_snapshot()?;
    for i in 1..=n {
        if i > 1 {
            family.extend(&mut g)?;
        }
        if i >= 2 {
            let kernel = TransitionKernel::for_snapshot(walk, &g)?;
            match mixing_time(&kernel, 1 << 40) {
                MixingOutcome::Mixed(t) => out[i as usize] = t,
                MixingOutcome::Exceeded { t_cap } => {
                    return Err(Error::Numerical {
                        what: "mixing-time search",
                        iterations: t_cap,
                        residual: f64::NAN,
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Largest `i·(|E^(i)|/|E^(i-1)| - 1)` over `2 < i ≤ n`.
fn measured_edge_growth(family: &Family, n: u32) -> Result<f64> {
    let mut g = family.snapshot(2)?;
    let mut prev = g.edge_count() as f64;
    let mut l: f64 = 0.0;
    for i in 3..=n {
        family.extend(&mut g)?;
        let cur = g.edge_count() as f64;
        l = l.max((cur / prev - 1.0) * i as f64);
        prev = cur;
    }
    Ok(l)
}

/// `max_{1<i≤n} i·(r_i - 1)` from the per-round stationary distributions.
fn measured_pi_ratio_blowup(family: &Family, walk: WalkKind, n: u32) -> Result<f64> {
    let mut g = family.initial_snapshot()?;
    let mut prev_kernel = TransitionKernel::for_snapshot(walk, &g)?;
    let mut worst: f64 = 0.0;
    for i in 2..=n {
        family.extend(&mut g)?;
        let kernel = TransitionKernel::for_snapshot(walk, &g)?;
        let r = pi_ratio(&prev_kernel, &kernel)?;
        worst = worst.max(i as f64 * (r - 1.0));
        prev_kernel = kernel;
    }
    Ok(worst)
}

fn table_schedule(durations: Vec<u64>, n: u32) -> Result<GrowthSchedule> {
    GrowthSchedule::new(DurationFn::Table(durations), n)
}

/// Measured `E[U]` for a case, honoring its engine override.
fn measured_value(
    case: &TheoremCase,
    schedule: &GrowthSchedule,
    family: &Family,
    walk: WalkKind,
) -> Result<f64> {
    match case.engine {
        EngineChoice::MonteCarlo => {
            let plan = SimulationPlan::new(
                schedule.clone(),
                family.clone(),
                walk,
                case.params.trials,
                case.params.seed,
            )?;
            Ok(estimate_unvisited(&plan)?.estimate)
        }
        EngineChoice::Auto | EngineChoice::Exact => {
            Ok(exact_expected_unvisited(schedule, family, walk, &case.exact)?.expected)
        }
    }
}

/// Measured `E[U]` on growing complete graphs; the closed form is the
/// natural engine, the overrides force the generic ones.
fn complete_value(case: &TheoremCase, schedule: &GrowthSchedule) -> Result<f64> {
    match case.engine {
        EngineChoice::Auto => Ok(complete_closed_form(schedule).expected),
        EngineChoice::Exact => Ok(exact_expected_unvisited(
            schedule,
            &Family::Complete,
            WalkKind::UniformComplete,
            &case.exact,
        )?
        .expected),
        EngineChoice::MonteCarlo => {
            let plan = SimulationPlan::new(
                schedule.clone(),
                Family::Complete,
                WalkKind::UniformComplete,
                case.params.trials,
                case.params.seed,
            )?;
            Ok(estimate_unvisited(&plan)?.estimate)
        }
    }
}

/// Least-squares fit of `ln y` against `ln x`: slope, intercept and the
/// largest absolute residual in log space.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::config("fit", "need at least two points"));
    }
    if ys.iter().any(|&y| y <= 0.0) {
        return Err(Error::config("fit", "all values must be positive for a log fit"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::config("fit", "degenerate ladder: all n equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0f64, f64::max);
    Ok((slope, intercept, resid))
}

/// One `(γ, n, E[U])` observation of a scaling sweep.
#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub gamma: f64,
    pub n: u32,
    pub expected: f64,
}

/// Fitted exponent per γ.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub gamma: f64,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    pub fits: Vec<ScalingFit>,
}

/// Sweep `γ` over a ladder of `n` with `f(i) = ⌈coeff·i^{base-γ}⌉` and fit
/// the growth exponent of `E[U]`. `base` is the family convention (1 on
/// complete graphs, 2 on paths).
pub fn scaling_table(
    family: &Family,
    walk: WalkKind,
    gammas: &[f64],
    ladder: &[u32],
    base: f64,
    coeff: f64,
    opts: &ExactOptions,
) -> Result<ScalingTable> {
    if ladder.len() < 4 {
        return Err(Error::config("ladder", "scaling fits need at least 4 ladder points"));
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &gamma in gammas {
        let mut ys = Vec::new();
        for &n in ladder {
            let schedule = GrowthSchedule::new(
                DurationFn::Power {
                    coeff,
                    exponent: base - gamma,
                },
                n,
            )?;
            let expected = if matches!(walk, WalkKind::UniformComplete) {
                complete_closed_form(&schedule).expected
            } else {
                exact_expected_unvisited(&schedule, family, walk, opts)?.expected
            };
            rows.push(ScalingRow { gamma, n, expected });
            ys.push(expected);
        }
        let xs: Vec<f64> = ladder.iter().map(|&n| n as f64).collect();
        let (slope, intercept, max_residual) = fit_loglog(&xs, &ys)?;
        fits.push(ScalingFit {
            gamma,
            slope,
            intercept,
            max_residual,
        });
    }
    Ok(ScalingTable { rows, fits })
}

/// Run one theorem case to a certificate.
pub fn run_case(case: &TheoremCase) -> Result<Certificate> {
    match case.id {
        TheoremId::T1_1_1 => complete_bounded(case),
        TheoremId::T1_1_2 => complete_vanishing(case),
        TheoremId::T1_1_3 => complete_sandwich(case),
        TheoremId::T1_1_4 => complete_constant(case),
        TheoremId::T1_2_1 => hitting_margin(case),
        TheoremId::T1_2_2 => hitting_vanishing(case),
        TheoremId::T1_3 => mix_hit(case),
        TheoremId::T1_3Gen => mix_hit_gen(case),
        TheoremId::T1_4 => simple_lazy(case),
        TheoremId::T1_5 | TheoremId::CMetro => symmetric_walk(case),
        TheoremId::TModerate => moderate(case),
        TheoremId::T1_6 => path_lower(case),
        TheoremId::C1_7 => path_scaling(case),
        TheoremId::CSimpleKn => simple_kn(case),
        TheoremId::CExpander => expander(case),
        TheoremId::CLollipop => lollipop(case),
        TheoremId::AInitial => initial_clique(case),
    }
}

fn complete_bounded(case: &TheoremCase) -> Result<Certificate> {
    let c = case.params.c;
    let mut audit = vec![format!("C = {c} > 0: {}", c > 0.0)];
    if c <= 0.0 {
        return Ok(Certificate::inapplicable(case.id, audit, "C > 0".into()));
    }
    // O(1) is certified as a flatness proxy: the ladder values stop moving.
    let mut values = Vec::new();
    for &n in &case.ladder {
        let s = GrowthSchedule::new(DurationFn::Linear { coeff: c }, n)?;
        values.push(complete_value(case, &s)?);
    }
    let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    audit.push(format!("max over ladder = {sup:.6}"));
    let mut rows = Vec::new();
    for (i, (&n, &v)) in case.ladder.iter().zip(&values).enumerate() {
        // every value sits at or below the ladder sup; the last two ladder
        // points must also agree to 1% for the flatness claim
        let flat = if i + 1 == values.len() && values.len() >= 2 {
            (v - values[i - 1]).abs() <= 0.01 * v.abs().max(1.0)
        } else {
            true
        };
        let mut row = upper_row(n, v, sup);
        row.pass = row.pass && flat;
        rows.push(row);
    }
    audit.push(format!(
        "flatness of final step: |{:.6} - {:.6}| within 1%",
        values[values.len() - 1],
        values[values.len().saturating_sub(2)]
    ));
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn complete_vanishing(case: &TheoremCase) -> Result<Certificate> {
    // f(i)/i → ∞ realized as f(i) = ⌈i^{3/2}⌉; proxy: monotone to below 0.1
    let delta = 0.1;
    let mut values = Vec::new();
    for &n in &case.ladder {
        let s = GrowthSchedule::new(DurationFn::Power { coeff: 1.0, exponent: 1.5 }, n)?;
        values.push(complete_value(case, &s)?);
    }
    let audit = vec![
        "f(i) = ceil(i^1.5), so f(i)/i -> infinity".into(),
        format!("limit proxy: nonincreasing ladder, final < {delta}"),
    ];
    let mut rows = Vec::new();
    for (i, (&n, &v)) in case.ladder.iter().zip(&values).enumerate() {
        let monotone = i == 0 || v <= values[i - 1] + 1e-9;
        let final_ok = i + 1 < values.len() || v < delta;
        let mut row = upper_row(n, v, delta);
        row.pass = monotone && final_ok;
        rows.push(row);
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

/// Integer staircase close to `√i` that keeps `f` nondecreasing and `f(i)/i`
/// nonincreasing exactly, as the sandwich hypotheses require.
fn sqrt_staircase(n: u32) -> Vec<u64> {
    let mut f = Vec::with_capacity(n as usize);
    f.push(1u64);
    for i in 2..=n as u64 {
        let prev = *f.last().unwrap();
        let want = (i as f64).sqrt().round() as u64;
        let cap = prev * i / (i - 1); // keeps f(i)/i <= f(i-1)/(i-1)
        f.push(want.clamp(prev, cap));
    }
    f
}

fn complete_sandwich(case: &TheoremCase) -> Result<Certificate> {
    let mut audit = Vec::new();
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations = sqrt_staircase(n);
        // audit the exact integer hypotheses
        for i in 1..durations.len() {
            if durations[i] < durations[i - 1] {
                return Ok(Certificate::inapplicable(
                    case.id,
                    audit,
                    format!("f({}) < f({})", i + 1, i),
                ));
            }
            let lhs = durations[i] as f64 / (i + 1) as f64;
            let rhs = durations[i - 1] as f64 / i as f64;
            if lhs > rhs + 1e-12 {
                return Ok(Certificate::inapplicable(
                    case.id,
                    audit,
                    format!("f(i)/i increases at i = {}", i + 1),
                ));
            }
        }
        let fn_last = *durations.last().unwrap() as f64;
        let s = table_schedule(durations, n)?;
        let v = complete_value(case, &s)?;
        let upper = n as f64 / fn_last;
        let lower = n as f64 / (fn_last + 1.0) * (1.0 - 1.0 / n as f64).powf(fn_last);
        rows.push(lower_row(n, v, lower));
        rows.push(upper_row(n, v, upper));
        audit.push(format!(
            "n = {n}: f(n) = {fn_last}, sandwich [{lower:.4}, {upper:.4}], measured {v:.4}"
        ));
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn complete_constant(case: &TheoremCase) -> Result<Certificate> {
    let c = case.params.constant;
    let mut rows = Vec::new();
    let mut audit = vec![format!("constant schedule c = {c}")];
    for &n in &case.ladder {
        let s = GrowthSchedule::new(DurationFn::Constant(c), n)?;
        let v = complete_value(case, &s)?;
        let scale = n as f64 / (c as f64 + 1.0);
        let ratio = v / scale;
        let lower = (1.0 - 1.0 / n as f64).powi(c as i32);
        rows.push(lower_row(n, ratio, lower));
        rows.push(upper_row(n, ratio, 1.0));
        audit.push(format!(
            "n = {n}: E[U]/(n/(c+1)) = {ratio:.8} in [{lower:.8}, 1]"
        ));
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn case_family_walk(case: &TheoremCase, default_family: Family, default_walk: WalkKind) -> (Family, WalkKind) {
    let family = case.params.family.clone().unwrap_or(default_family);
    let walk = case.params.walk.unwrap_or(default_walk);
    (family, walk)
}

fn hitting_margin(case: &TheoremCase) -> Result<Certificate> {
    let c = case.params.c;
    let mut audit = vec![format!("C = {c} > 1: {}", c > 1.0)];
    if c <= 1.0 {
        return Ok(Certificate::inapplicable(case.id, audit, "C > 1".into()));
    }
    let (family, walk) = case_family_walk(case, Family::Path, WalkKind::LazySimple);
    let n_max = *case.ladder.last().unwrap();
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let bound = 1.0 / (c - 1.0);
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| (c * t_hit[i as usize]).ceil().max(1.0) as u64)
            .collect();
        // f(i) >= C·t_hit(i) holds by construction; audit it anyway
        for i in 1..=n {
            if (durations[i as usize - 1] as f64) < c * t_hit[i as usize] {
                return Ok(Certificate::inapplicable(
                    case.id,
                    audit,
                    format!("f({i}) < C·t_hit({i})"),
                ));
            }
        }
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        rows.push(upper_row(n, v, bound));
    }
    audit.push(format!("f(i) = ceil(C·t_hit(i)); bound 1/(C-1) = {bound}"));
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn hitting_vanishing(case: &TheoremCase) -> Result<Certificate> {
    let (family, walk) = case_family_walk(case, Family::Path, WalkKind::LazySimple);
    let n_max = *case.ladder.last().unwrap();
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let delta = 0.1;
    let mut values = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                let grow = 1.0 + (i as f64).ln();
                (grow * t_hit[i as usize]).ceil().max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        values.push(measured_value(case, &s, &family, walk)?);
    }
    let audit = vec![
        "f(i) = ceil((1 + ln i)·t_hit(i)), so f/t_hit -> infinity".into(),
        format!("limit proxy: nonincreasing ladder, final < {delta}"),
    ];
    let mut rows = Vec::new();
    for (i, (&n, &v)) in case.ladder.iter().zip(&values).enumerate() {
        let monotone = i == 0 || v <= values[i - 1] + 1e-9;
        let final_ok = i + 1 < values.len() || v < delta;
        let mut row = upper_row(n, v, delta);
        row.pass = monotone && final_ok;
        rows.push(row);
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn mix_hit(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let (family, walk) = case_family_walk(case, Family::Complete, WalkKind::LazySimple);
    let n_max = *case.ladder.last().unwrap();
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let t_mix = mixing_ladder(&family, walk, n_max)?;
    let mut audit = Vec::new();
    // hypothesis: t_hit(i)/t_mix(i) >= i^γ/C for 1 < i <= n
    let mut worst_margin = f64::INFINITY;
    let mut worst_i = 0;
    for i in 2..=n_max {
        let ratio = t_hit[i as usize] / t_mix[i as usize] as f64;
        let required = (i as f64).powf(gamma) / c;
        let margin = ratio - required;
        if margin < worst_margin {
            worst_margin = margin;
            worst_i = i;
        }
    }
    audit.push(format!(
        "t_hit(i)/t_mix(i) >= i^gamma/C: worst margin {worst_margin:.4} at i = {worst_i}"
    ));
    if worst_margin < 0.0 {
        return Ok(Certificate::inapplicable(
            case.id,
            audit,
            format!("t_hit({worst_i})/t_mix({worst_i}) < {worst_i}^gamma/C"),
        ));
    }
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                (3.0 * c * t_hit[i as usize] / (i as f64).powf(gamma))
                    .ceil()
                    .max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        let bound = 8.0 * (n as f64).powf(gamma) / c + 32.0;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("f(i) = ceil(3C·t_hit(i)/i^gamma); bound 8n^gamma/C + 32".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn mix_hit_gen(case: &TheoremCase) -> Result<Certificate> {
    let delta = case.params.delta;
    let (family, walk) = case_family_walk(case, Family::Complete, WalkKind::LazySimple);
    let n_max = *case.ladder.last().unwrap();
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let t_mix = mixing_ladder(&family, walk, n_max)?;
    let mut audit = vec![format!("Δ = {delta}")];
    let bound = 8.0 * delta + 32.0;
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                (t_hit[i as usize] / delta + 2.0 * t_mix[i as usize] as f64)
                    .ceil()
                    .max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("f(i) = ceil(t_hit(i)/Δ + 2·t_mix(i)); bound 8Δ + 32".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn simple_lazy(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let (family, walk) = case_family_walk(case, Family::Lollipop, WalkKind::LazySimple);
    let mut audit = Vec::new();
    if !matches!(walk, WalkKind::LazySimple) {
        return Ok(Certificate::inapplicable(
            case.id,
            audit,
            "walk must be lazy simple".into(),
        ));
    }
    let n_max = *case.ladder.last().unwrap();
    let l = measured_edge_growth(&family, n_max)?;
    audit.push(format!("measured edge-growth constant L = {l:.4}"));
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                let need = (c / (i as f64).powf(gamma) + (l + 1.0) / (2.0 * i as f64))
                    * t_hit[i as usize];
                need.ceil().max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        let bound = (l + 1.0).sqrt() * (n as f64).powf(gamma) / c;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("f(i) = ceil((C/i^gamma + (L+1)/(2i))·t_hit(i)); bound sqrt(L+1)·n^gamma/C".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn symmetric_walk(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let (family, walk) = case_family_walk(case, Family::Path, WalkKind::LazyMetropolis);
    let mut audit = Vec::new();
    // symmetry and laziness audited on the largest kernel
    let n_max = *case.ladder.last().unwrap();
    let g = family.snapshot(n_max)?;
    let kernel = TransitionKernel::for_snapshot(walk, &g)?;
    let flags = kernel.flags();
    audit.push(format!(
        "kernel flags at n = {n_max}: lazy = {}, symmetric = {}",
        flags.lazy, flags.symmetric
    ));
    if !flags.lazy || !flags.symmetric {
        return Ok(Certificate::inapplicable(
            case.id,
            audit,
            "walk must be lazy and symmetric".into(),
        ));
    }
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                let need =
                    (c / (i as f64).powf(gamma) + 2.0 / i as f64) * t_hit[i as usize];
                need.ceil().max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        let bound = 3.0f64.sqrt() * (n as f64).powf(gamma) / c;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("f(i) = ceil((C/i^gamma + 2/i)·t_hit(i)); bound sqrt(3)·n^gamma/C".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn moderate(case: &TheoremCase) -> Result<Certificate> {
    let delta = case.params.delta;
    let (family, walk) = case_family_walk(case, Family::Lollipop, WalkKind::LazySimple);
    let n_max = *case.ladder.last().unwrap();
    let blowup = measured_pi_ratio_blowup(&family, walk, n_max)?;
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let mut audit = vec![format!("measured max i(r_i - 1) = {blowup:.4}")];
    // per-round r_i for the duration rule
    let mut g = family.initial_snapshot()?;
    let mut prev_kernel = TransitionKernel::for_snapshot(walk, &g)?;
    let mut r = vec![1.0f64; n_max as usize + 1];
    for i in 2..=n_max {
        family.extend(&mut g)?;
        let kernel = TransitionKernel::for_snapshot(walk, &g)?;
        r[i as usize] = pi_ratio(&prev_kernel, &kernel)?;
        prev_kernel = kernel;
    }
    let bound = delta * (blowup + 1.0).sqrt();
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                let fi = i as f64;
                let need = (1.0 / delta + (fi * (r[i as usize] - 1.0) + 1.0) / (2.0 * fi))
                    * t_hit[i as usize];
                need.ceil().max(1.0) as u64
            })
            .collect();
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        rows.push(upper_row(n, v, bound));
    }
    audit.push(
        "f(i) = ceil((1/Δ + (i(r_i-1)+1)/(2i))·t_hit(i)); bound Δ·sqrt(max i(r_i-1)+1)".into(),
    );
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn path_lower(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let walk = case.params.walk.unwrap_or(WalkKind::LazySimple);
    let mut rows = Vec::new();
    let mut audit = Vec::new();
    for &n in &case.ladder {
        let res = path_lowerbound_experiment(c, gamma, n, walk, case.params.trials, case.params.seed)?;
        audit.push(format!(
            "n = {n}: R = v_{}, L = v_{}, escape {:.3} (bound {:.3}), stay-left {:.3} (displayed bound {:.3})",
            res.r_label,
            res.l_label,
            res.escape_empirical,
            res.escape_bound,
            res.stay_left_empirical,
            res.stay_left_bound
        ));
        rows.push(lower_row(n, res.estimate.estimate, res.lower_bound));
    }
    audit.push("bound 0.18·ε·n^gamma from the R/L/ε construction".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn path_scaling(case: &TheoremCase) -> Result<Certificate> {
    let walk = case.params.walk.unwrap_or(WalkKind::LazySimple);
    let gammas = [0.0, 0.5, 1.0];
    let table = scaling_table(
        &Family::Path,
        walk,
        &gammas,
        &case.ladder,
        2.0,
        case.params.c,
        &case.exact,
    )?;
    let mut rows = Vec::new();
    let mut audit = Vec::new();
    for fit in &table.fits {
        audit.push(format!(
            "gamma = {}: fitted exponent {:.3} (max log-residual {:.3})",
            fit.gamma, fit.slope, fit.max_residual
        ));
        let err = (fit.slope - fit.gamma).abs();
        rows.push(CertificateRow {
            n: *case.ladder.last().unwrap(),
            measured: fit.slope,
            bound: fit.gamma,
            margin: 0.15 - err,
            pass: err <= 0.15,
        });
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn simple_kn(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let mut audit = Vec::new();
    if c < 1.0 {
        // the floor-schedule lower branch needs C·i^{1-γ} >= 1
        return Ok(Certificate::inapplicable(
            case.id,
            audit,
            "C >= 1 so that floor(C·i^{1-gamma}) >= 1".into(),
        ));
    }
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let nf = n as f64;
        // upper branch: f(i) = ceil(C·i^{1-γ}) >= C·i^{1-γ}
        let up = GrowthSchedule::new(
            DurationFn::Power { coeff: c, exponent: 1.0 - gamma },
            n,
        )?;
        let v_up = complete_value(case, &up)?;
        rows.push(upper_row(n, v_up, nf.powf(gamma) / c));
        // lower branch: f(i) = floor(C·i^{1-γ}) <= C·i^{1-γ}
        let durations: Vec<u64> = (1..=n)
            .map(|i| (c * (i as f64).powf(1.0 - gamma)).floor().max(1.0) as u64)
            .collect();
        for (i, &f) in durations.iter().enumerate() {
            if (f as f64) > c * ((i + 1) as f64).powf(1.0 - gamma) {
                return Ok(Certificate::inapplicable(
                    case.id,
                    audit,
                    format!("f({}) > C·i^(1-gamma)", i + 1),
                ));
            }
        }
        let low = table_schedule(durations.clone(), n)?;
        let v_low = complete_value(case, &low)?;
        let tight = nf.powf(gamma) / (c + nf.powf(gamma - 1.0))
            * (1.0 - 1.0 / nf).powf(c * nf.powf(1.0 - gamma));
        let weak = nf.powf(gamma) / c - 1.0;
        rows.push(lower_row(n, v_low, tight.max(weak)));
        audit.push(format!(
            "n = {n}: upper {v_up:.4} <= {:.4}; lower {v_low:.4} >= {:.4}",
            nf.powf(gamma) / c,
            tight.max(weak)
        ));
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn expander(case: &TheoremCase) -> Result<Certificate> {
    let (c, gamma) = (case.params.c, case.params.gamma);
    let family = Family::ExpanderLike {
        degree: case.params.degree,
        seed: case.params.seed,
    };
    let walk = WalkKind::LazySimple;
    let n_max = *case.ladder.last().unwrap();
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let t_mix = mixing_ladder(&family, walk, n_max)?;
    let mut audit = Vec::new();
    // record the measured expansion profile instead of assuming it
    let mut k1: f64 = 0.0;
    let mut k2: f64 = 0.0;
    let mut worst_gap = f64::INFINITY;
    let mut worst_degree_ratio: f64 = 0.0;
    let mut g = family.initial_snapshot()?;
    for i in 2..=n_max {
        family.extend(&mut g)?;
        let kernel = TransitionKernel::for_snapshot(walk, &g)?;
        let lam = lambda2(&kernel)?;
        worst_gap = worst_gap.min(1.0 - lam);
        worst_degree_ratio = worst_degree_ratio.max(g.average_degree() / g.min_degree() as f64);
        k1 = k1.max(t_hit[i as usize] / i as f64);
        k2 = k2.max(t_mix[i as usize] as f64 / (i as f64).ln().max(1.0));
    }
    audit.push(format!(
        "measured: K1 = max t_hit(i)/i = {k1:.3}, K2 = max t_mix(i)/ln i = {k2:.3}"
    ));
    audit.push(format!(
        "measured: min spectral gap 1-λ₂ = {worst_gap:.4}, max d_ave/d_min = {worst_degree_ratio:.3}"
    ));
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let delta = (n as f64).powf(gamma) / c;
        let durations: Vec<u64> = (1..=n)
            .map(|i| {
                let fi = i as f64;
                (c * k1 * fi.powf(1.0 - gamma) + 2.0 * k2 * fi.ln().max(1.0))
                    .ceil()
                    .max(1.0) as u64
            })
            .collect();
        // audit the general mix-hit hypothesis these durations must imply
        for i in 2..=n {
            let need = t_hit[i as usize] / delta + 2.0 * t_mix[i as usize] as f64;
            if (durations[i as usize - 1] as f64) < need {
                return Ok(Certificate::inapplicable(
                    case.id,
                    audit,
                    format!("f({i}) < t_hit({i})/Δ + 2·t_mix({i})"),
                ));
            }
        }
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        let bound = 8.0 * (n as f64).powf(gamma) / c + 32.0;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("f(i) = ceil(C·K1·i^(1-gamma) + 2·K2·ln i); bound 8n^gamma/C + 32".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn lollipop(case: &TheoremCase) -> Result<Certificate> {
    let (c1, gamma) = (case.params.c, case.params.gamma);
    let family = Family::Lollipop;
    let walk = WalkKind::LazySimple;
    let n_max = *case.ladder.last().unwrap();
    let l = measured_edge_growth(&family, n_max)?;
    let t_hit = hitting_ladder(&family, walk, n_max)?;
    let mut audit = vec![format!("measured edge-growth constant L = {l:.4}")];
    let mut rows = Vec::new();
    for &n in &case.ladder {
        let durations: Vec<u64> = (1..=n)
            .map(|i| (c1 * (i as f64).powf(3.0 - gamma)).ceil().max(1.0) as u64)
            .collect();
        // the largest C for which the simple-lazy hypothesis holds
        let mut c_eff = f64::INFINITY;
        for i in 2..=n {
            let fi = i as f64;
            let slack = durations[i as usize - 1] as f64
                - (l + 1.0) / (2.0 * fi) * t_hit[i as usize];
            c_eff = c_eff.min(slack * fi.powf(gamma) / t_hit[i as usize]);
        }
        audit.push(format!("n = {n}: effective C = {c_eff:.4}"));
        if c_eff <= 0.0 {
            return Ok(Certificate::inapplicable(
                case.id,
                audit,
                format!("f(i) = ceil({c1}·i^(3-gamma)) too small for the hypothesis at n = {n}"),
            ));
        }
        let s = table_schedule(durations, n)?;
        let v = measured_value(case, &s, &family, walk)?;
        let bound = (l + 1.0).sqrt() * (n as f64).powf(gamma) / c_eff;
        rows.push(upper_row(n, v, bound));
    }
    audit.push("bound sqrt(L+1)·n^gamma/C_eff with C_eff from the duration audit".into());
    Ok(Certificate::from_rows(case.id, rows, audit))
}

fn initial_clique(case: &TheoremCase) -> Result<Certificate> {
    let n0 = case.params.initial_order;
    let delta = case.params.delta;
    let mut audit = vec![format!("n0 = {n0}, Δ = {delta}")];
    let mut rows = Vec::new();
    for &n in &case.ladder {
        if n <= n0 {
            return Ok(Certificate::inapplicable(
                case.id,
                audit,
                format!("final order {n} <= n0 = {n0}"),
            ));
        }
        let durations: Vec<u64> = (1..=(n - n0 + 1))
            .map(|i| (2.0 * i as f64 / delta).ceil().max(1.0) as u64)
            .collect();
        let s = GrowthSchedule::with_initial_order(DurationFn::Table(durations), n0, n)?;
        let v = exact_expected_unvisited(
            &s,
            &Family::Complete,
            WalkKind::UniformComplete,
            &case.exact,
        )?
        .expected;
        let bound = 2.0 * n0 as f64 + delta;
        rows.push(upper_row(n, v, bound));
        audit.push(format!("n = {n}: E[U] = {v:.4} <= {bound}"));
    }
    Ok(Certificate::from_rows(case.id, rows, audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_default(id: TheoremId) -> Certificate {
        run_case(&TheoremCase::default_for(id)).unwrap()
    }

    #[test]
    fn theorem_id_round_trips() {
        for id in [
            TheoremId::T1_1_1,
            TheoremId::T1_1_2,
            TheoremId::T1_1_3,
            TheoremId::T1_1_4,
            TheoremId::T1_2_1,
            TheoremId::T1_2_2,
            TheoremId::T1_3,
            TheoremId::T1_3Gen,
            TheoremId::T1_4,
            TheoremId::T1_5,
            TheoremId::TModerate,
            TheoremId::T1_6,
            TheoremId::C1_7,
            TheoremId::CSimpleKn,
            TheoremId::CExpander,
            TheoremId::CLollipop,
            TheoremId::CMetro,
            TheoremId::AInitial,
        ] {
            assert_eq!(TheoremId::parse(id.as_str()).unwrap(), id);
        }
        assert!(TheoremId::parse("T9.9").is_err());
    }

    #[test]
    fn complete_constant_certificate_passes() {
        let case = TheoremCase::new(
            TheoremId::T1_1_4,
            CaseParams { constant: 1, ..Default::default() },
            vec![100, 500, 2000],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        // ratio at n = 2000 sits inside [1 - 3/n, 1]
        let last = cert.rows.last().unwrap();
        assert!(last.measured >= 1.0 - 3.0 / 2000.0 && last.measured <= 1.0);
    }

    #[test]
    fn complete_bounded_and_vanishing_pass() {
        assert_eq!(run_default(TheoremId::T1_1_1).verdict, Verdict::Pass);
        assert_eq!(run_default(TheoremId::T1_1_2).verdict, Verdict::Pass);
        assert_eq!(run_default(TheoremId::T1_1_3).verdict, Verdict::Pass);
    }

    #[test]
    fn hitting_margin_certificate_on_small_path() {
        let case = TheoremCase::new(
            TheoremId::T1_2_1,
            CaseParams { c: 2.0, ..Default::default() },
            vec![4, 8, 16],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        for row in &cert.rows {
            assert!(row.measured <= 1.0, "E[U] = {} at n = {}", row.measured, row.n);
        }
    }

    #[test]
    fn hitting_margin_requires_c_above_one() {
        let case = TheoremCase::new(
            TheoremId::T1_2_1,
            CaseParams { c: 0.5, ..Default::default() },
            vec![4, 8],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Inapplicable);
        assert!(cert.violated.unwrap().contains("C > 1"));
    }

    #[test]
    fn mix_hit_cases_pass_on_complete_family() {
        let case = TheoremCase::new(
            TheoremId::T1_3,
            CaseParams { c: 2.0, gamma: 1.0, ..Default::default() },
            vec![8, 16],
        )
        .unwrap();
        assert_eq!(run_case(&case).unwrap().verdict, Verdict::Pass);
        let gen = TheoremCase::new(
            TheoremId::T1_3Gen,
            CaseParams { delta: 2.0, ..Default::default() },
            vec![8, 16],
        )
        .unwrap();
        assert_eq!(run_case(&gen).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn simple_lazy_and_symmetric_pass_on_small_ladders() {
        let t14 = TheoremCase::new(
            TheoremId::T1_4,
            CaseParams { c: 1.0, gamma: 0.5, ..Default::default() },
            vec![6, 10, 14],
        )
        .unwrap();
        assert_eq!(run_case(&t14).unwrap().verdict, Verdict::Pass);
        let t15 = TheoremCase::new(
            TheoremId::T1_5,
            CaseParams { c: 1.0, gamma: 0.5, ..Default::default() },
            vec![6, 10, 14],
        )
        .unwrap();
        assert_eq!(run_case(&t15).unwrap().verdict, Verdict::Pass);
        let tm = TheoremCase::new(
            TheoremId::TModerate,
            CaseParams { delta: 2.0, ..Default::default() },
            vec![6, 10, 14],
        )
        .unwrap();
        assert_eq!(run_case(&tm).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn lower_bound_case_passes() {
        let case = TheoremCase::new(
            TheoremId::T1_6,
            CaseParams { c: 1.0, gamma: 1.0, trials: 1500, ..Default::default() },
            vec![100],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn initial_clique_bound_holds() {
        let case = TheoremCase::new(
            TheoremId::AInitial,
            CaseParams { initial_order: 5, delta: 1.0, ..Default::default() },
            vec![50],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn simple_kn_two_sided_bounds() {
        let case = TheoremCase::new(
            TheoremId::CSimpleKn,
            CaseParams { c: 1.0, gamma: 0.5, ..Default::default() },
            vec![25, 100],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn fit_recovers_known_exponent() {
        let xs = [10.0f64, 20.0, 40.0, 80.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.7)).collect();
        let (slope, _, resid) = fit_loglog(&xs, &ys).unwrap();
        assert!((slope - 0.7).abs() < 1e-12);
        assert!(resid < 1e-12);
    }

    #[test]
    fn scaling_table_needs_four_points() {
        let err = scaling_table(
            &Family::Path,
            WalkKind::LazySimple,
            &[0.5],
            &[10, 20],
            2.0,
            1.0,
            &ExactOptions::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn lollipop_certificate_with_generous_coefficient() {
        let case = TheoremCase::new(
            TheoremId::CLollipop,
            CaseParams { c: 3.0, gamma: 0.5, ..Default::default() },
            vec![6, 10, 14],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "audit: {:?}", cert.audit);
    }

    #[test]
    fn expander_certificate_runs() {
        let case = TheoremCase::new(
            TheoremId::CExpander,
            CaseParams { c: 3.0, gamma: 0.5, degree: 5, seed: 17, ..Default::default() },
            vec![10, 16, 24],
        )
        .unwrap();
        let cert = run_case(&case).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "audit: {:?}", cert.audit);
    }
}
