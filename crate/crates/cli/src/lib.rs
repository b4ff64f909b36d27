//! Command-line front end: every subcommand returns a JSON result plus an
//! optional table, rendered as an aligned table, CSV or a
//! `{command, params, result}` JSON envelope.

// `!(x > 0)` style guards are intended: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use raysearch::evaluator::{evaluate_sequence, prefix_ratio, simulate, worst_case_cr};
use raysearch::strategies::{mray_threshold, optimal_line_ratio, theorem6, Branch, StepOracle};
use raysearch::transforms::{make_monotonic, make_periodic_fully_monotonic};
use raysearch::verify::{
    gal_line_bound, gamma_star, lemma2_delta_check, lp_dual_check, lp_primal_check, phi,
    recurrences, roots, thm4_opt_solve,
};
use raysearch::{CostModel, StepSequence, StrategyHandle, StrategySpec, Target};
use serde::Serialize;
use serde_json::{json, Value};

/// Exit status of a verification failure.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit status of usage and domain errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "raysearch", version, about = "Search on rays with turn costs")]
pub struct Cli {
    /// Emit `{command, params, result}` JSON (same as `--format json`).
    #[arg(long, global = true)]
    pub json: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first steps of a strategy and its claimed cost.
    Strategy(StrategyArgs),
    /// Worst-case competitive ratio over a finite horizon.
    Evaluate(EvaluateArgs),
    /// Total cost of finding one target.
    Simulate(SimulateArgs),
    /// Prune and/or sort a strategy prefix.
    Transform(TransformArgs),
    /// Curve of phi(gamma) / t.
    Tradeoff(TradeoffArgs),
    /// Optimal line ratio against t / 2 lambda.
    Optcost(OptcostArgs),
    /// Run numerical certificate checks.
    Verify(VerifyArgs),
    /// m-ray ratio over a grid of t / 2 lambda.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpecArg {
    /// Strategy spec as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct CostArgs {
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Shorthand for (1, 0, 1, t).
    #[arg(long, conflicts_with_all = ["alpha1", "beta1", "alpha2", "beta2", "plain"])]
    pub turn_cost: Option<f64>,
    /// Shorthand for (1, 0, 1, 0).
    #[arg(long, conflicts_with_all = ["alpha1", "beta1", "alpha2", "beta2"])]
    pub plain: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StrategyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArg,
    #[arg(short, long, default_value_t = 10)]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value_t = 60)]
    pub horizon: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[arg(long)]
    pub ray: usize,
    #[arg(long)]
    pub distance: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    /// Drop dominated sweeps.
    Monotonic,
    /// Sort distances and visit rays cyclically.
    Periodic,
    /// Both, in that order.
    Normalize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[arg(long, value_enum, default_value_t = TransformMode::Normalize)]
    pub mode: TransformMode,
    /// Number of rays of the periodic output (defaults to the input's).
    #[arg(long)]
    pub m: Option<usize>,
    /// Prefix length taken from infinite strategies.
    #[arg(short, long, default_value_t = 20)]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TradeoffArgs {
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 9.0)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 92)]
    pub points: usize,
    /// Space gamma logarithmically instead of linearly.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptcostArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.05)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Lp,
    Dual,
    Recurrence,
    GammaStar,
    Gal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Lowers phi by this multiple of t in the primal checks.
    #[arg(long, default_value_t = 0.0)]
    pub phi_offset: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.05)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Steps evaluated per grid point.
    #[arg(long, default_value_t = 60)]
    pub horizon: usize,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A table of already formatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].len())
                    .chain([self.header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

struct Outcome {
    params: Value,
    result: Value,
    table: Option<Table>,
    summary: Vec<String>,
    failed: bool,
}

/// Formats with 12 significant digits, fixed or exponent notation like `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    trim_zeros(&format!("{:.*}", (11 - exp).max(0) as usize, x))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn load_spec(arg: &SpecArg) -> anyhow::Result<StrategySpec<f64>> {
    let text = if arg.spec.trim_start().starts_with('{') {
        arg.spec.clone()
    } else {
        std::fs::read_to_string(&arg.spec)
            .with_context(|| format!("cannot read spec file `{}`", arg.spec))?
    };
    Ok(StrategySpec::from_json(&text)?)
}

/// The cost model a spec is stated for: its turn cost, its own affine model, or plain.
fn native_cost(spec: &StrategySpec<f64>) -> anyhow::Result<CostModel<f64>> {
    Ok(match spec {
        StrategySpec::DemaineTurnCost { t }
        | StrategySpec::Theorem2 { t, .. }
        | StrategySpec::MinTotalCost { t, .. }
        | StrategySpec::Lemma1 { t, .. }
        | StrategySpec::Theorem4 { t, .. }
        | StrategySpec::Theorem6 { t, .. } => CostModel::turn(*t)?,
        StrategySpec::Theorem5 { cost, .. } => *cost,
        StrategySpec::Doubling { .. } | StrategySpec::Explicit(_) => CostModel::plain(),
    })
}

fn resolve_cost(args: &CostArgs, spec: &StrategySpec<f64>) -> anyhow::Result<CostModel<f64>> {
    if args.plain {
        return Ok(CostModel::plain());
    }
    if let Some(t) = args.turn_cost {
        return Ok(CostModel::turn(t)?);
    }
    if args.alpha1.is_none()
        && args.beta1.is_none()
        && args.alpha2.is_none()
        && args.beta2.is_none()
    {
        return native_cost(spec);
    }
    Ok(CostModel::new(
        args.alpha1.unwrap_or(1.0),
        args.beta1.unwrap_or(0.0),
        args.alpha2.unwrap_or(1.0),
        args.beta2.unwrap_or(0.0),
    )?)
}

fn cost_json(c: &CostModel<f64>) -> Value {
    json!({"alpha1": c.alpha1(), "beta1": c.beta1(), "alpha2": c.alpha2(), "beta2": c.beta2()})
}

fn steps_table(seq: &StepSequence<f64>) -> Table {
    let mut table = Table::new(&["i", "x", "ray"]);
    for (k, s) in seq.steps().iter().enumerate() {
        table.push(vec![
            (k + 1).to_string(),
            fmt_num(s.distance),
            s.ray.to_string(),
        ]);
    }
    table
}

fn steps_json(seq: &StepSequence<f64>) -> Value {
    Value::Array(
        seq.steps()
            .iter()
            .enumerate()
            .map(|(k, s)| json!({"i": k + 1, "x": s.distance, "ray": s.ray}))
            .collect(),
    )
}

fn claim_line(h: &StrategyHandle<f64>) -> String {
    match h.claimed_cost() {
        Some(c) => match (c.ratio(), c.affine()) {
            (Some(r), _) => format!("claimed competitive ratio: {}", fmt_num(r)),
            (_, Some((g, p))) => format!("claimed total cost: {} D + {}", fmt_num(g), fmt_num(p)),
            _ => String::new(),
        },
        None => "no claimed cost".into(),
    }
}

fn cmd_strategy(a: &StrategyArgs) -> anyhow::Result<Outcome> {
    let spec = load_spec(&a.spec)?;
    let h = spec.build()?;
    let seq = h.materialize(a.n)?;
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: json!({
            "spec": serde_json::to_value(&spec)?,
            "claimed_cost": h.claimed_cost(),
            "branch": h.branch(),
            "rays": h.rays(),
            "origin_distance": h.origin_distance(),
            "steps": steps_json(&seq),
        }),
        table: Some(steps_table(&seq)),
        summary: vec![claim_line(&h)],
        failed: false,
    })
}

fn cmd_evaluate(a: &EvaluateArgs) -> anyhow::Result<Outcome> {
    let spec = load_spec(&a.spec)?;
    let h = spec.build()?;
    let cost = resolve_cost(&a.cost, &spec)?;
    let report = worst_case_cr(&h, &cost, a.horizon, a.tol)?;
    let mut table = Table::new(&["j", "feasible", "prev", "cr_j"]);
    for r in &report.per_step {
        table.push(vec![
            r.j.to_string(),
            r.feasible.to_string(),
            r.prev_index.to_string(),
            r.cr_j.map(fmt_num).unwrap_or_default(),
        ]);
    }
    let summary = vec![
        format!(
            "supremum: {} (step {})",
            fmt_num(report.supremum),
            report.supremum_step
        ),
        format!("converged: {}", report.converged),
        report.convergence_note.clone(),
        claim_line(&h),
    ];
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: json!({"cost": cost_json(&cost), "report": report}),
        table: Some(table),
        summary,
        failed: false,
    })
}

fn cmd_simulate(a: &SimulateArgs) -> anyhow::Result<Outcome> {
    let spec = load_spec(&a.spec)?;
    let h = spec.build()?;
    let cost = resolve_cost(&a.cost, &spec)?;
    let target = Target {
        ray: a.ray,
        distance: a.distance,
    };
    let total = simulate(&h, &target, &cost, a.max_steps)?;
    let mut table = Table::new(&["ray", "distance", "total_cost", "ratio"]);
    table.push(vec![
        a.ray.to_string(),
        fmt_num(a.distance),
        fmt_num(total),
        fmt_num(total / a.distance),
    ]);
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: json!({"cost": cost_json(&cost), "total_cost": total, "ratio": total / a.distance}),
        table: Some(table),
        summary: Vec::new(),
        failed: false,
    })
}

fn cmd_transform(a: &TransformArgs) -> anyhow::Result<Outcome> {
    let spec = load_spec(&a.spec)?;
    let h = spec.build()?;
    let cost = resolve_cost(&a.cost, &spec)?;
    let input = h.materialize(a.n)?;
    if input.is_empty() {
        bail!("strategy has no steps");
    }
    let m = a.m.unwrap_or(input.rays());
    if m < 2 {
        bail!("--m must be at least 2");
    }
    let output = match a.mode {
        TransformMode::Monotonic => make_monotonic(&input),
        TransformMode::Periodic => make_periodic_fully_monotonic(&input, m),
        TransformMode::Normalize => make_periodic_fully_monotonic(&make_monotonic(&input), m),
    };
    let sup = |s: &StepSequence<f64>| -> anyhow::Result<f64> {
        Ok(evaluate_sequence(s, &cost, 1e-9)?.supremum)
    };
    let before = (sup(&input)?, prefix_ratio(&input, &cost));
    let after = (sup(&output)?, prefix_ratio(&output, &cost));
    let out_spec = StrategySpec::Explicit(output.clone());
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: json!({
            "cost": cost_json(&cost),
            "input": steps_json(&input),
            "output": serde_json::to_value(&out_spec)?,
            "feasible_sup_before": before.0,
            "feasible_sup_after": after.0,
            "prefix_ratio_before": before.1,
            "prefix_ratio_after": after.1,
        }),
        table: Some(steps_table(&output)),
        summary: vec![
            format!(
                "prefix ratio: {} -> {}",
                fmt_num(before.1),
                fmt_num(after.1)
            ),
            format!(
                "feasible-step supremum: {} -> {}",
                fmt_num(before.0),
                fmt_num(after.0)
            ),
            format!("output spec: {}", out_spec.to_json()),
        ],
        failed: false,
    })
}

fn grid(lo: f64, hi: f64, n: usize, log: bool) -> anyhow::Result<Vec<f64>> {
    if n == 0 {
        bail!("--points must be positive");
    }
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        bail!("invalid range [{lo}, {hi}]");
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else if log {
                lo * (hi / lo).powf(k as f64 / last)
            } else {
                lo + (hi - lo) * k as f64 / last
            }
        })
        .collect())
}

fn cmd_tradeoff(a: &TradeoffArgs) -> anyhow::Result<Outcome> {
    if !(a.gamma_min >= 9.0) {
        bail!("--gamma-min must be >= 9, got {}", a.gamma_min);
    }
    if !(a.t > 0.0) {
        bail!("--t must be > 0");
    }
    let mut table = Table::new(&["gamma", "phi_over_t"]);
    let mut rows = Vec::new();
    for g in grid(a.gamma_min, a.gamma_max, a.points, a.log)? {
        let v = phi(g, a.t)? / a.t;
        table.push(vec![fmt_num(g), fmt_num(v)]);
        rows.push(json!({"gamma": g, "phi_over_t": v}));
    }
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: Value::Array(rows),
        table: Some(table),
        summary: Vec::new(),
        failed: false,
    })
}

fn cmd_optcost(a: &OptcostArgs) -> anyhow::Result<Outcome> {
    if !(a.ratio_min > 0.0) || !(a.lambda > 0.0) {
        bail!("ratio range and lambda must be positive");
    }
    let mut table = Table::new(&["t_over_2lambda", "cr"]);
    let mut rows = Vec::new();
    for rho in grid(a.ratio_min, a.ratio_max, a.points, false)? {
        let cr = optimal_line_ratio(rho);
        table.push(vec![fmt_num(rho), fmt_num(cr)]);
        rows.push(json!({"t_over_2lambda": rho, "t": 2.0 * a.lambda * rho, "cr": cr}));
    }
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: Value::Array(rows),
        table: Some(table),
        summary: Vec::new(),
        failed: false,
    })
}

struct Check {
    name: String,
    passed: bool,
    report: Value,
}

fn check(name: impl Into<String>, passed: bool, report: impl Serialize) -> anyhow::Result<Check> {
    Ok(Check {
        name: name.into(),
        passed,
        report: serde_json::to_value(report)?,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn run_checks(suite: Suite, phi_offset: f64) -> anyhow::Result<Vec<Check>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    if wants(Suite::Lp) {
        for (gamma, t) in [(9.0, 2.0), (10.0, 1.0), (25.0, 1.0)] {
            let phi_value = roots(gamma)?.r2 * t - phi_offset * t;
            let r = lp_primal_check(gamma, t, phi_value, 30)?;
            out.push(check(
                format!("lp_primal gamma={gamma} t={t}"),
                r.verdict.passed(),
                r,
            )?);
        }
    }
    if wants(Suite::Dual) {
        for gamma in [10.0, 25.0] {
            let r = lp_dual_check(gamma, 200, 20)?;
            out.push(check(
                format!("lp_dual gamma={gamma}"),
                r.verdict.passed(),
                r,
            )?);
        }
    }
    if wants(Suite::Recurrence) {
        for (gamma, t) in [(9.0, 2.0), (10.0, 1.0), (25.0, 1.0)] {
            let r = recurrences(gamma, t, 30)?;
            out.push(check(
                format!("recurrence gamma={gamma}"),
                r.agrees(1e-9),
                r,
            )?);
        }
        let d = lemma2_delta_check(2.0, 1.0, 3.0, 20)?;
        out.push(check(
            "delta_increment",
            d.verdict.passed() && d.requirement_holds,
            d,
        )?);
    }
    if wants(Suite::GammaStar) {
        for (d, t) in [(1.0, 2.0), (0.1, 100.0), (100.0, 0.1), (3.0, 3.0)] {
            let g = gamma_star(d, t)?;
            let ok = rel(g.gamma, g.closed_gamma) <= 1e-6
                && rel(g.total, g.closed_total) <= 1e-6
                && g.total < 9.0 * d + 2.0 * t;
            out.push(check(format!("gamma_star D={d} t={t}"), ok, g)?);
        }
        let o = thm4_opt_solve(1.0, 4.0)?;
        let ok = rel(o.gamma, o.closed_gamma) <= 1e-6 && rel(o.x1, o.closed_x1) <= 1e-6;
        out.push(check("large_turn_optimum lambda=1 t=4", ok, o)?);
    }
    if wants(Suite::Gal) {
        let g = gal_line_bound::<f64>();
        let ok = (g.value - 9.0).abs() <= 1e-9 && (g.argmin - 2.0).abs() <= 1e-9;
        out.push(check("gal_line_bound", ok, g)?);
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<Outcome> {
    let checks = run_checks(a.suite, a.phi_offset)?;
    let mut table = Table::new(&["check", "status"]);
    for c in &checks {
        table.push(vec![
            c.name.clone(),
            if c.passed { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: Value::Array(
            checks
                .iter()
                .map(|c| json!({"check": c.name, "passed": c.passed, "report": c.report}))
                .collect(),
        ),
        table: Some(table),
        summary: vec![format!(
            "{} of {} checks passed",
            checks.len() - failed,
            checks.len()
        )],
        failed: failed > 0,
    })
}

fn cmd_sweep(a: &SweepArgs) -> anyhow::Result<Outcome> {
    if a.m < 2 {
        bail!("--m must be at least 2");
    }
    if !(a.lambda > 0.0) || !(a.ratio_min >= 0.0) {
        bail!("lambda must be positive and the ratio range non-negative");
    }
    let threshold: f64 = mray_threshold(a.m);
    let mut table = Table::new(&["t_over_2lambda", "branch", "claimed_cr", "evaluated_cr"]);
    let mut rows = Vec::new();
    for rho in grid(a.ratio_min, a.ratio_max, a.points, false)? {
        let t = 2.0 * a.lambda * rho;
        let h = theorem6(a.m, a.lambda, t)?;
        let claimed = h
            .claimed_cost()
            .and_then(|c| c.ratio())
            .ok_or_else(|| anyhow!("strategy carries no ratio claim"))?;
        let evaluated = worst_case_cr(&h, &CostModel::turn(t)?, a.horizon, 1e-9)?.supremum;
        let branch = match h.branch() {
            Some(Branch::First) => "first",
            _ => "second",
        };
        table.push(vec![
            fmt_num(rho),
            branch.into(),
            fmt_num(claimed),
            fmt_num(evaluated),
        ]);
        rows.push(json!({
            "t_over_2lambda": rho,
            "branch": branch,
            "claimed_cr": claimed,
            "evaluated_cr": evaluated,
            "status": h.claimed_cost().map(|c| serde_json::to_value(c).unwrap_or(Value::Null)),
        }));
    }
    Ok(Outcome {
        params: serde_json::to_value(a)?,
        result: json!({"threshold": threshold, "rows": rows}),
        table: Some(table),
        summary: vec![format!(
            "regime threshold t/2lambda = {}",
            fmt_num(threshold)
        )],
        failed: false,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Strategy(_) => "strategy",
        Command::Evaluate(_) => "evaluate",
        Command::Simulate(_) => "simulate",
        Command::Transform(_) => "transform",
        Command::Tradeoff(_) => "tradeoff",
        Command::Optcost(_) => "optcost",
        Command::Verify(_) => "verify",
        Command::Sweep(_) => "sweep",
    }
}

fn dispatch(c: &Command) -> anyhow::Result<Outcome> {
    match c {
        Command::Strategy(a) => cmd_strategy(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Tradeoff(a) => cmd_tradeoff(a),
        Command::Optcost(a) => cmd_optcost(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn render(cli: &Cli, o: &Outcome) -> String {
    let format = if cli.json { Format::Json } else { cli.format };
    match format {
        Format::Json => {
            let envelope = json!({
                "command": command_name(&cli.command),
                "params": o.params,
                "result": o.result,
            });
            serde_json::to_string_pretty(&envelope).expect("json value serializes") + "\n"
        }
        Format::Csv => match &o.table {
            Some(t) => t.to_csv(),
            None => serde_json::to_string_pretty(&o.result).expect("json value serializes") + "\n",
        },
        Format::Table => {
            let mut out = String::new();
            for line in &o.summary {
                let _ = writeln!(out, "{line}");
            }
            if let Some(t) = &o.table {
                if !o.summary.is_empty() {
                    out.push('\n');
                }
                out.push_str(&t.to_text());
            }
            out
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I) -> Execution
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Execution {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => Execution {
            code: if o.failed { EXIT_VERIFY_FAILED } else { 0 },
            stdout: render(&cli, &o),
            stderr: String::new(),
        },
        Err(e) => Execution {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}
