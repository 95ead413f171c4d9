//! CSV emission. Every document starts with a comment row recording the
//! full configuration (and seed, where one exists) followed by a header
//! row. Comma separators, `.` decimals, LF line endings; identical inputs
//! render byte-identical output.

use crate::analysis::{AnalysisReport, MixingOutcome};
use crate::exact::{ExpectedUnvisited, TrajectoryPoint};
use crate::kernel::TransitionKernel;
use crate::montecarlo::EstimateRecord;
use crate::theorems::{Certificate, ScalingTable, Verdict};

fn document(config: &str, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(config);
    out.push('\n');
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), |v| v.to_string())
}

/// Per-vertex miss probabilities, 1-based labels, then a summary row.
pub fn unvisited_csv(config: &str, result: &ExpectedUnvisited) -> String {
    let rows = result
        .miss
        .iter()
        .enumerate()
        .map(|(k, p)| format!("{},{}", k + 1, p))
        .chain(std::iter::once(format!("total,{}", result.expected)));
    document(config, "k,miss_probability", rows)
}

/// `(t, round, E[U_t])` rows; boundaries carry a closing and an opening row.
pub fn trajectory_csv(config: &str, points: &[TrajectoryPoint]) -> String {
    let rows = points
        .iter()
        .map(|p| format!("{},{},{}", p.t, p.round, p.expected_unvisited));
    document(config, "t,round,expected_unvisited", rows)
}

/// One row per analyzed order.
pub fn analysis_csv(config: &str, reports: &[AnalysisReport]) -> String {
    let rows = reports.iter().map(|r| {
        let t_mix = match r.t_mix {
            MixingOutcome::Mixed(t) => t.to_string(),
            MixingOutcome::Exceeded { t_cap } => format!("exceeded:{t_cap}"),
        };
        format!(
            "{},{},{},{},{},{}",
            r.order,
            r.t_hit,
            t_mix,
            r.lambda2,
            r.pi_min,
            r.max_survival_radius()
        )
    });
    document(config, "n,t_hit,t_mix,lambda2,pi_min,max_survival_radius", rows)
}

/// Estimate summary row.
pub fn estimate_csv(config: &str, rec: &EstimateRecord) -> String {
    let row = format!(
        "{},{},{},{},{},{}",
        rec.estimate,
        opt(rec.sd),
        opt(rec.halfwidth),
        rec.trials,
        rec.master_seed,
        rec.capped
    );
    document(
        config,
        "mean,sd,ci95_halfwidth,trials,seed,capped",
        std::iter::once(row),
    )
}

/// Optional per-trial samples.
pub fn per_trial_csv(config: &str, samples: &[f64]) -> String {
    let rows = samples
        .iter()
        .enumerate()
        .map(|(i, u)| format!("{i},{u}"));
    document(config, "trial,unvisited", rows)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inapplicable => "inapplicable",
    }
}

/// Certificate ladder rows plus audit lines as trailing comments.
pub fn certificate_csv(config: &str, cert: &Certificate) -> String {
    let rows = cert.rows.iter().map(|r| {
        format!(
            "{},{},{},{},{},{}",
            cert.id.as_str(),
            r.n,
            r.measured,
            r.bound,
            r.margin,
            if r.pass { "pass" } else { "fail" }
        )
    });
    let mut out = document(config, "theorem,n,measured,bound,margin,row_verdict", rows);
    for line in &cert.audit {
        out.push_str("# audit: ");
        out.push_str(line);
        out.push('\n');
    }
    if let Some(violated) = &cert.violated {
        out.push_str("# violated: ");
        out.push_str(violated);
        out.push('\n');
    }
    out.push_str(&format!("# verdict: {}\n", verdict_str(cert.verdict)));
    out
}

/// Human-readable one-paragraph summary of a certificate.
pub fn certificate_summary(cert: &Certificate) -> String {
    let mut s = format!("{}: {}", cert.id.as_str(), verdict_str(cert.verdict));
    if let Some(v) = &cert.violated {
        s.push_str(&format!(" ({v})"));
    }
    for r in &cert.rows {
        s.push_str(&format!(
            "\n  n = {:>5}: measured {:.6} vs bound {:.6} ({})",
            r.n,
            r.measured,
            r.bound,
            if r.pass { "ok" } else { "VIOLATED" }
        ));
    }
    s
}

/// `(γ, n, E[U], fitted exponent)` rows.
pub fn scaling_csv(config: &str, table: &ScalingTable) -> String {
    let rows = table.rows.iter().map(|r| {
        let fit = table
            .fits
            .iter()
            .find(|f| f.gamma == r.gamma)
            .expect("fit exists for every gamma");
        format!("{},{},{},{},{}", r.gamma, r.n, r.expected, fit.slope, fit.max_residual)
    });
    document(config, "gamma,n,expected_unvisited,fit_exponent,fit_max_residual", rows)
}

/// Dense row-major dump of a kernel, for debugging.
pub fn kernel_csv(config: &str, kernel: &TransitionKernel) -> String {
    let n = kernel.order();
    let rows = (0..n).map(|u| {
        (0..n)
            .map(|v| kernel.entry(u, v).to_string())
            .collect::<Vec<_>>()
            .join(",")
    });
    document(config, &format!("order,{n}"), rows)
}
