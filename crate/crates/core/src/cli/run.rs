//! Executes a validated configuration and renders its outputs.

use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64 as C;
use serde_json::{json, Value};

use super::config::{validate, AuditPair, ExperimentConfig, OutputFormat, SolveKind, Spacing, Task};
use super::output::{metadata, num, opt_num, render_json, Table};
use crate::error::{Error, Result};
use crate::model::{effective_equation_k2, ChannelParams, PotentialModel};
use crate::radial::{integrate_irregular_test_mode, integrate_jost, solve_regular, RadialGrid, RadialSolution};
use crate::scattering::{
    audit_jost_pair, audit_phi_pair, log_derivative_interior, low_k_phase_asymptotic, phase_shift_curve,
    PhaseShiftOptions, WronskianReport,
};
use crate::specfun::{bessel_i_k, bessel_j, bessel_y, gamma, BesselEval};
use crate::spectral::{
    find_bound_states, levinson_verify, sturm_liouville_check, threshold_energy, BoundStateOptions,
    LevinsonOptions,
};

pub const SPECIAL_FUNCTIONS: &[&str] = &["gamma", "bessel-j", "bessel-y", "bessel-i", "bessel-k"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides `[output] format`.
    pub format: Option<OutputFormat>,
    /// Set to drop the metadata block (also `[output] metadata = false`).
    pub no_metadata: bool,
    pub threads: usize,
    /// Overrides `[output] staircase`.
    pub staircase: Option<PathBuf>,
}

/// Rendered results. `verified` is `Some(false)` when a verification task
/// ran to completion and its check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub primary: String,
    pub extra: Vec<(PathBuf, String)>,
    pub verified: Option<bool>,
}

/// Result of one task before rendering.
struct Outcome {
    json: Value,
    table: Table,
    extra: Vec<(PathBuf, Table)>,
    verified: Option<bool>,
    default_format: OutputFormat,
}

/// Validates `cfg`, runs its task and renders the outputs.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput> {
    let diags = validate(cfg);
    if !diags.is_empty() {
        return Err(Error::Config(diags.join("; ")));
    }
    let outcome = match cfg.task {
        Task::EvalSpecial => eval_special(cfg)?,
        Task::Solve => solve(cfg)?,
        Task::PhaseShift => phase_shift(cfg)?,
        Task::WronskianAudit => wronskian_audit(cfg)?,
        Task::BoundStates => bound_states(cfg)?,
        Task::Levinson => levinson(cfg, opts)?,
        Task::SturmCheck => sturm_check(cfg)?,
    };
    let with_meta = !opts.no_metadata && cfg.output.metadata.unwrap_or(true);
    let meta = with_meta.then(|| metadata(cfg.task, opts.threads));
    let format = opts.format.or(cfg.output.format).unwrap_or(outcome.default_format);
    let primary = match format {
        OutputFormat::Csv => outcome.table.to_csv(meta.as_ref()),
        OutputFormat::Json => render_json(outcome.json, meta.clone()),
    };
    let extra = outcome.extra.into_iter().map(|(p, t)| (p, t.to_csv(meta.as_ref()))).collect();
    Ok(RunOutput { primary, extra, verified: outcome.verified })
}

fn channel(cfg: &ExperimentConfig) -> ChannelParams {
    cfg.channel_params().expect("validated")
}

fn eval_special(cfg: &ExperimentConfig) -> Result<Outcome> {
    let s = &cfg.special;
    let function = s.function.as_deref().expect("validated");
    let x = s.x.expect("validated");
    let nu = s.nu.unwrap_or(f64::NAN);
    let e = evaluate_special(function, nu, x)?;
    let mut table = Table::new(&["function", "nu", "x", "value", "derivative", "est_error", "method"]);
    let method = e.method.map(|m| format!("{m:?}")).unwrap_or_else(|| "lanczos".into());
    table.push(vec![
        function.into(),
        nu.into(),
        x.into(),
        e.value.into(),
        e.derivative.map_or(f64::NAN, |d| d).into(),
        e.est_error.into(),
        method.as_str().into(),
    ]);
    let json = json!({
        "function": function,
        "nu": opt_num(s.nu),
        "x": num(x),
        "value": num(e.value),
        "derivative": opt_num(e.derivative),
        "est_error": num(e.est_error),
        "method": method,
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: None, default_format: OutputFormat::Json })
}

pub(crate) struct SpecialValue {
    pub value: f64,
    pub derivative: Option<f64>,
    pub est_error: f64,
    pub method: Option<crate::specfun::Method>,
}

impl From<BesselEval> for SpecialValue {
    fn from(b: BesselEval) -> Self {
        Self { value: b.value, derivative: Some(b.derivative), est_error: b.est_error, method: Some(b.method) }
    }
}

pub(crate) fn evaluate_special(function: &str, nu: f64, x: f64) -> Result<SpecialValue> {
    Ok(match function {
        "gamma" => {
            let v = gamma(x)?;
            SpecialValue { value: v, derivative: None, est_error: v.abs() * 1e-15, method: None }
        }
        "bessel-j" => bessel_j(nu, x)?.into(),
        "bessel-y" => bessel_y(nu, x)?.into(),
        "bessel-i" => bessel_i_k(nu, x)?.i.unscaled()?.into(),
        "bessel-k" => bessel_i_k(nu, x)?.k.unscaled()?.into(),
        other => return Err(Error::Config(format!("unknown special function '{other}'"))),
    })
}

fn solve(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot = cfg.potential_model()?;
    let v = &cfg.solve;
    let r0 = pot.r0;
    let grid = Arc::new(RadialGrid::new(
        r0,
        v.r_max.unwrap_or(2.0 * r0),
        v.inner.unwrap_or(400),
        v.outer.unwrap_or(100),
    )?);
    let tol = cfg.tolerances.ode;
    let kind = v.kind.expect("validated");
    let k = C::new(v.k.unwrap_or(0.0), v.k_im.unwrap_or(0.0));
    let k2 = match v.energy {
        Some(e) => C::new(e, 0.0),
        None => k * k,
    };
    let eq = effective_equation_k2(&ch, &pot, k2)?;
    let sol: RadialSolution = match kind {
        SolveKind::Regular => solve_regular(&eq, &grid, tol)?,
        SolveKind::Irregular => integrate_irregular_test_mode(&eq, &grid, tol)?,
        SolveKind::Jost => integrate_jost(&eq, &grid, k, tol)?,
    };
    let mut table = Table::new(&["r", "y_re", "y_im", "dy_re", "dy_im"]);
    for (i, &r) in grid.nodes().iter().enumerate() {
        table.push(vec![r.into(), sol.y[i].re.into(), sol.y[i].im.into(), sol.dy[i].re.into(), sol.dy[i].im.into()]);
    }
    let json = json!({
        "kind": format!("{kind:?}").to_lowercase(),
        "lambda": [num(sol.lambda.re), num(sol.lambda.im)],
        "k2": [num(k2.re), num(k2.im)],
        "mu": num(pot.mu),
        "r0": num(r0),
        "normalization": format!("{:?}", sol.normalization),
        "samples": table.to_json(),
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: None, default_format: OutputFormat::Csv })
}

fn k_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    let s = &cfg.scan;
    let (a, b, n) = (s.k_min.expect("validated"), s.k_max.expect("validated"), s.k_count.expect("validated"));
    let t = |i: usize| i as f64 / (n - 1) as f64;
    match s.k_spacing.unwrap_or(Spacing::Linear) {
        Spacing::Linear => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * t(i) }).collect(),
        Spacing::Log => (0..n).map(|i| if i + 1 == n { b } else { a * (b / a).powf(t(i)) }).collect(),
    }
}

fn phase_shift(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot = cfg.potential_model()?;
    let ks = k_grid(cfg);
    let popts = PhaseShiftOptions {
        tol: cfg.tolerances.ode,
        mu_steps: cfg.scan.mu_steps.unwrap_or(200),
        ..Default::default()
    };
    let curve = phase_shift_curve(&ch, &pot, &ks, &popts)?;
    // zero-energy log-derivative for the small-k column
    let a0 = log_derivative_interior(&ch, &pot, threshold_energy(&pot), cfg.tolerances.ode).ok().map(|l| l.a);
    let mut table =
        Table::new(&["k", "mu", "eta_raw", "eta_unwrapped", "A", "tan_eta_match", "tan_eta_low_k"]);
    let mut jumps = Vec::new();
    for s in &curve.samples {
        let low_k = a0.and_then(|a0| low_k_phase_asymptotic(curve.lambda, a0, s.k, pot.r0).ok());
        table.push(vec![
            s.k.into(),
            s.mu.into(),
            s.matched.eta_raw.into(),
            s.eta.into(),
            s.matched.log_derivative.unwrap_or(f64::NAN).into(),
            s.matched.tan_eta.into(),
            low_k.unwrap_or(f64::NAN).into(),
        ]);
        for j in &s.jumps {
            jumps.push(json!({"k": num(s.k), "mu": num(j.mu), "delta": num(j.delta)}));
        }
    }
    let json = json!({
        "lambda": num(curve.lambda),
        "mu": num(curve.mu),
        "r0": num(pot.r0),
        "a0": opt_num(a0),
        "samples": table.to_json(),
        "jumps": jumps,
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: None, default_format: OutputFormat::Csv })
}

fn wronskian_audit(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot = cfg.potential_model()?;
    let a = &cfg.audit;
    let k = a.k.expect("validated");
    let tolerance = a.tolerance.unwrap_or(1e-8);
    let r0 = pot.r0;
    let v = &cfg.solve;
    let grid = Arc::new(RadialGrid::new(
        r0,
        v.r_max.unwrap_or(2.0 * r0),
        v.inner.unwrap_or(400),
        v.outer.unwrap_or(100),
    )?);
    let eq = effective_equation_k2(&ch, &pot, C::new(k * k, 0.0))?;
    let report: WronskianReport = match a.pair.expect("validated") {
        AuditPair::Phi => audit_phi_pair(&eq, &grid, cfg.tolerances.ode, tolerance)?,
        AuditPair::Jost => audit_jost_pair(&eq, &grid, C::new(k, 0.0), cfg.tolerances.ode, tolerance)?,
    };
    let mut table = Table::new(&["r", "w_re", "w_im", "deviation"]);
    for (r, w) in report.r.iter().zip(&report.values) {
        table.push(vec![(*r).into(), w.re.into(), w.im.into(), (w - report.expected).norm().into()]);
    }
    let json = json!({
        "pair": report.pair.tag(),
        "expected": [num(report.expected.re), num(report.expected.im)],
        "max_deviation": num(report.max_deviation),
        "relative_deviation": num(report.relative_deviation()),
        "std_deviation": num(report.std_deviation),
        "excluded": report.excluded,
        "tolerance": num(report.tolerance),
        "passed": report.passed,
        "samples": table.to_json(),
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: Some(report.passed), default_format: OutputFormat::Json })
}

fn bound_states(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot = cfg.potential_model()?;
    let opts = BoundStateOptions {
        e_floor: cfg.scan.e_floor,
        e_count: cfg.scan.e_count.unwrap_or(400),
        tol: cfg.tolerances.root,
        ode_tol: cfg.tolerances.ode,
    };
    let search = find_bound_states(&ch, &pot, &opts)?;
    let mut table = Table::new(&["index", "energy", "kappa", "residual"]);
    for (i, s) in search.states.iter().enumerate() {
        table.push(vec![i.into(), s.energy.into(), s.kappa.into(), s.residual.into()]);
    }
    let json = json!({
        "lambda": num(ch.spectral_lambda()?),
        "mu": num(pot.mu),
        "count": search.states.len(),
        "e_floor": num(search.e_floor),
        "e_ceiling": num(search.e_ceiling),
        "e_count": search.e_count,
        "node_count": search.node_count,
        "states": table.to_json(),
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: None, default_format: OutputFormat::Json })
}

fn levinson(cfg: &ExperimentConfig, run_opts: &RunOptions) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot = cfg.potential_model()?;
    let opts = LevinsonOptions {
        tol_eta: cfg.tolerances.eta,
        ode_tol: cfg.tolerances.ode,
        mu_steps: cfg.scan.mu_steps.unwrap_or(200),
        e_count: cfg.scan.e_count.unwrap_or(400),
        e_floor: cfg.scan.e_floor,
    };
    let r = levinson_verify(&ch, &pot, &opts)?;
    let c = &r.continuation;
    let mut staircase = Table::new(&["mu", "A", "staircase"]);
    for (i, &mu) in c.mu_grid.iter().enumerate() {
        let a = c.a_samples[i].unwrap_or(f64::NAN);
        staircase.push(vec![mu.into(), a.into(), c.staircase[i].1.into()]);
    }
    let events: Vec<Value> = c
        .events
        .iter()
        .map(|e| json!({"mu": num(e.mu), "bracket": [num(e.bracket.0), num(e.bracket.1)], "direction": e.direction.as_str()}))
        .collect();
    let steps: Vec<Value> = r
        .phase_steps
        .iter()
        .map(|s| json!({"mu": num(s.mu), "bracket": [num(s.bracket.0), num(s.bracket.1)], "direction": s.direction.as_str()}))
        .collect();
    let json = json!({
        "lambda": num(r.lambda),
        "mu": num(pot.mu),
        "eta0": num(r.eta0),
        "eta0_over_pi": num(r.eta0 / std::f64::consts::PI),
        "eta_small": r.eta_small.iter().map(|(k, e)| json!({"k": num(*k), "eta": num(*e)})).collect::<Vec<_>>(),
        "n_direct": r.n_direct,
        "n_continuation": r.n_continuation,
        "n_down": c.n_down,
        "n_up": c.n_up,
        "rho": num(c.rho),
        "bound_energies": r.bound_energies.iter().map(|&e| num(e)).collect::<Vec<_>>(),
        "crossings": events,
        "phase_steps": steps,
        "staircase_consistent": r.staircase_consistent,
        "tol_eta": num(r.tol_eta),
        "pass": r.pass,
    });
    let mut extra = Vec::new();
    if let Some(path) = run_opts.staircase.clone().or_else(|| cfg.output.staircase.clone()) {
        extra.push((path, staircase.clone()));
    }
    Ok(Outcome { json, table: staircase, extra, verified: Some(r.pass), default_format: OutputFormat::Json })
}

fn sturm_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ch = channel(cfg);
    let pot: PotentialModel = cfg.potential_model()?;
    let s = &cfg.scan;
    let (a, b, n) = (s.e_min.expect("validated"), s.e_max.expect("validated"), s.e_count.expect("validated"));
    let mut table = Table::new(&[
        "energy",
        "de",
        "interior_fd",
        "interior_quadrature",
        "exterior_fd",
        "exterior_quadrature",
        "signs_hold",
        "max_relative_gap",
        "status",
    ]);
    let mut all_hold = true;
    for i in 0..n {
        let e = if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 };
        let de = s.de.unwrap_or(1e-6 * e.abs().max(1e-3));
        match sturm_liouville_check(&ch, &pot, e, de, cfg.tolerances.ode) {
            Ok(sl) => {
                all_hold &= sl.signs_hold();
                table.push(vec![
                    e.into(),
                    de.into(),
                    sl.interior_fd.into(),
                    sl.interior_quadrature.into(),
                    sl.exterior_fd.into(),
                    sl.exterior_quadrature.into(),
                    sl.signs_hold().into(),
                    sl.max_relative_gap().into(),
                    "ok".into(),
                ]);
            }
            Err(err @ (Error::BranchChange | Error::NodeAtCutoff { .. })) => {
                let tag = if err == Error::BranchChange { "branch-change" } else { "node-at-cutoff" };
                let nan = f64::NAN;
                table.push(vec![
                    e.into(),
                    de.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    nan.into(),
                    false.into(),
                    nan.into(),
                    tag.into(),
                ]);
            }
            Err(other) => return Err(other),
        }
    }
    let json = json!({
        "lambda": num(ch.spectral_lambda()?),
        "mu": num(pot.mu),
        "all_signs_hold": all_hold,
        "samples": table.to_json(),
    });
    Ok(Outcome { json, table, extra: Vec::new(), verified: Some(all_hold), default_format: OutputFormat::Csv })
}

/// `{"error": {...}}` line written to stderr on failure.
pub fn error_trailer(e: &Error) -> String {
    let cat = e.category();
    json!({"error": {"category": cat.as_str(), "exit_code": cat.exit_code(), "message": e.to_string()}}).to_string()
}
