//! Implementations of the six subcommands.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::json;

use spincone::calabi::{
    self, holonomy_evidence, residuals, sample, smoothness_limits, verify_f_identity,
};
use spincone::coframe::{etaspace, BasisElement, Form, HorizontalSymbol};
use spincone::flows::{
    integrate as flow_integrate, integrate_with_stop, monitor, seed, SeedSpec, State, StopWhen,
    Trajectory,
};
use spincone::structures::{derive_ode, dphi, reduce_ansatz, verify_annihilates_dphi, Deriv, OdeSystem};
use spincone::symexpr::{rewrite_ratfunc, Poly, RewriteRule, Symbol};

use crate::config::RunConfig;
use crate::output::{write_plot_script, CsvSink};
use crate::{
    CheckHolonomyArgs, DeriveArgs, ExploreAlcArgs, FamilyArgs, IntegrateArgs, VerifyArgs,
};

/// Residual threshold for the family sweep verdict.
const FAMILY_RES_TOL: f64 = 1e-10;

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SPIN7_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                builder = builder.num_threads(n);
            }
        }
    }
    builder.build().expect("rayon pool")
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

fn bc_specialize(sys: &OdeSystem) -> Result<[(Deriv, spincone::symexpr::RatFunc); 4]> {
    let rules = vec![RewriteRule::bare(Symbol::C, Poly::symbol(Symbol::B))];
    let mut out = Vec::new();
    for d in [Deriv::A1, Deriv::A2, Deriv::A3, Deriv::B] {
        out.push((d, rewrite_ratfunc(sys.rhs(d), &rules)?));
    }
    Ok(out.try_into().expect("four equations"))
}

pub fn derive(args: &DeriveArgs, _cfg: &RunConfig) -> Result<i32> {
    if args.show_dphi {
        println!("# nonzero degree-5 components of dPhi (equation = 0 each):");
        for (be, coeff) in dphi().components() {
            println!("[{}]  {}", be.label(), coeff);
        }
        println!();
    }

    let derived = match derive_ode() {
        Ok(sys) => sys,
        Err(err) => {
            eprintln!("derivation failed: {err}");
            return Ok(2);
        }
    };

    let mut entries: Vec<(String, String)> = Vec::new();
    if args.bc_equal {
        for (d, rhs) in bc_specialize(&derived)? {
            entries.push((d.name().to_string(), rhs.to_string()));
        }
    } else {
        for d in Deriv::ALL {
            entries.push((d.name().to_string(), derived.rhs(d).to_string()));
        }
    }

    match args.format {
        Some(crate::config::Format::Json) => {
            let map: serde_json::Map<String, serde_json::Value> = entries
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            println!("{}", serde_json::to_string_pretty(&map)?);
        }
        _ => {
            for (name, rhs) in &entries {
                println!("{name} = {rhs}");
            }
        }
    }

    if args.check {
        let ok = if args.bc_equal {
            let specialized = bc_specialize(&derived)?;
            let reference = bc_specialize(OdeSystem::governing_bc_equal())?;
            specialized
                .iter()
                .zip(reference.iter())
                .all(|((_, a), (_, b))| a == b)
        } else {
            let reference = OdeSystem::governing();
            Deriv::ALL.into_iter().all(|d| derived.rhs(d) == reference.rhs(d))
                && verify_annihilates_dphi(&derived)
                && verify_annihilates_dphi(reference)
        };
        if ok {
            println!("# check: derived system matches the reference exactly");
            return Ok(0);
        }
        println!("# check: MISMATCH between derived and reference system");
        return Ok(1);
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct SuiteResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn suite_derivation() -> SuiteResult {
    match derive_ode() {
        Ok(derived) => {
            let reference = OdeSystem::governing();
            let matches =
                Deriv::ALL.into_iter().all(|d| derived.rhs(d) == reference.rhs(d));
            let annihilates = verify_annihilates_dphi(&derived) && verify_annihilates_dphi(reference);
            SuiteResult {
                name: "derivation",
                pass: matches && annihilates,
                detail: format!(
                    "derived == reference: {matches}; substitution annihilates dPhi: {annihilates}"
                ),
            }
        }
        Err(err) => SuiteResult {
            name: "derivation",
            pass: false,
            detail: format!("derivation failed: {err}"),
        },
    }
}

fn suite_ansatz() -> SuiteResult {
    match reduce_ansatz(OdeSystem::governing()) {
        Ok(red) => SuiteResult {
            name: "ansatz",
            pass: true,
            detail: format!(
                "constraint source {}; reduced A1' {}; (A2^2)' {}",
                red.constraint_source, red.reduced_a1, red.reduced_a2_sq
            ),
        },
        Err(err) => SuiteResult {
            name: "ansatz",
            pass: false,
            detail: err.to_string(),
        },
    }
}

fn suite_f_identity() -> SuiteResult {
    let holds = verify_f_identity();
    let normalized = calabi::f_vanishes_at_normalized_root();
    let detail = if holds && normalized {
        "dF/drho + F G = 4 identically; F(1) = 0 at beta = 2 alpha^4 - 1".to_string()
    } else {
        format!(
            "identity residual: {}",
            calabi::f_identity_residual(false)
        )
    };
    SuiteResult { name: "f-identity", pass: holds && normalized, detail }
}

fn suite_d_squared() -> SuiteResult {
    let mut failures = Vec::new();
    for i in 1..=3usize {
        let eta = Form::basis(BasisElement::new(spincone::coframe::eta(i), HorizontalSymbol::Unit));
        match eta.ext_d().and_then(|d| d.ext_d()) {
            Ok(dd) if dd.is_zero() => {}
            Ok(dd) => failures.push(format!("d² eta{i} = {dd}")),
            Err(err) => failures.push(format!("d² eta{i}: {err}")),
        }
        let w = Form::basis(BasisElement::new(0, [HorizontalSymbol::W1, HorizontalSymbol::W2, HorizontalSymbol::W3][i - 1]));
        match w.ext_d().and_then(|d| d.ext_d()) {
            Ok(dd) if dd.is_zero() => {}
            Ok(dd) => failures.push(format!("d² w{i} = {dd}")),
            Err(err) => failures.push(format!("d² w{i}: {err}")),
        }
    }
    SuiteResult {
        name: "d-squared",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "d² = 0 on eta1..3 and w1..3, exactly".to_string()
        } else {
            failures.join("; ")
        },
    }
}

fn suite_horizontal_table() -> SuiteResult {
    // Fault-injection hook: with SPIN7_TEST_CORRUPT_TABLE set, one hardcoded
    // entry is deliberately flipped before the comparison, so the suite must
    // report the mismatch.
    let corrupt = std::env::var("SPIN7_TEST_CORRUPT_TABLE").is_ok();
    const SYMS: [HorizontalSymbol; 5] = [
        HorizontalSymbol::Unit,
        HorizontalSymbol::W1,
        HorizontalSymbol::W2,
        HorizontalSymbol::W3,
        HorizontalSymbol::W,
    ];
    let oracle = etaspace::oracle_table();
    let mut mismatches = Vec::new();
    for (i, &a) in SYMS.iter().enumerate() {
        for (j, &b) in SYMS.iter().enumerate() {
            let mut hardcoded = a.product(b);
            if corrupt && a == HorizontalSymbol::W2 && b == HorizontalSymbol::W2 {
                hardcoded = Some((8, HorizontalSymbol::Vol));
            }
            if oracle[i][j] != hardcoded {
                mismatches.push(format!(
                    "({}, {}): oracle {:?} vs table {:?}",
                    a.label(),
                    b.label(),
                    oracle[i][j],
                    hardcoded
                ));
            }
        }
    }
    SuiteResult {
        name: "horizontal-table",
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "hardcoded horizontal table equals the brute-force oracle on all 25 entries".to_string()
        } else {
            format!("horizontal table mismatch: {}", mismatches.join("; "))
        },
    }
}

type Suite = (&'static str, fn() -> SuiteResult);

pub fn verify(args: &VerifyArgs) -> Result<i32> {
    let all: [Suite; 5] = [
        ("derivation", suite_derivation),
        ("ansatz", suite_ansatz),
        ("f-identity", suite_f_identity),
        ("d-squared", suite_d_squared),
        ("horizontal-table", suite_horizontal_table),
    ];
    let selected: Vec<&Suite> = match &args.suite {
        Some(name) => {
            let hit: Vec<_> = all.iter().filter(|(n, _)| n == name).collect();
            if hit.is_empty() {
                bail!(
                    "unknown suite '{name}'; expected one of: {}",
                    all.map(|(n, _)| n).join(", ")
                );
            }
            hit
        }
        None => all.iter().collect(),
    };

    let results: Vec<SuiteResult> = selected.iter().map(|(_, f)| f()).collect();
    let all_pass = results.iter().all(|r| r.pass);
    let payload = json!({
        "suites": results
            .iter()
            .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
            .collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    println!("{}", serde_json::to_string_pretty(&payload)?);
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

pub fn family(args: &FamilyArgs, cfg: &RunConfig) -> Result<i32> {
    let mut cfg = cfg.clone();
    if args.alpha.is_some() {
        cfg.alpha = args.alpha;
    }
    if let Some(v) = args.r_min {
        cfg.r_min = v;
    }
    if let Some(v) = args.r_max {
        cfg.r_max = v;
    }
    if let Some(v) = args.r_samples {
        cfg.r_samples = v;
    }
    if let Some(v) = args.r_spacing {
        cfg.r_spacing = v;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }

    let alphas = cfg.alphas();
    let r_grid = cfg.r_grid();
    let cells: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| r_grid.iter().map(move |&r| (a, r)))
        .collect();

    // Deterministic order: rayon's indexed collect preserves input order.
    let rows: Vec<spincone::Result<[f64; 13]>> = thread_pool().install(|| {
        cells
            .par_iter()
            .map(|&(alpha, r)| {
                let s = sample(alpha, r)?;
                let res = residuals(alpha, r)?;
                Ok([
                    alpha,
                    r,
                    s.t_of_r_derivative,
                    s.a1,
                    s.a2,
                    s.a3,
                    s.b,
                    s.c,
                    res[0],
                    res[1],
                    res[2],
                    res[3],
                    res[4],
                ])
            })
            .collect()
    });

    let mut sink = CsvSink::create(cfg.output.as_deref())?;
    sink.header(&[
        "alpha", "r", "t_deriv", "A1", "A2", "A3", "B", "C", "res1", "res2", "res3", "res4",
        "res5",
    ])?;
    let mut max_res = 0.0f64;
    for row in &rows {
        match row {
            Ok(values) => {
                for res in &values[8..13] {
                    max_res = max_res.max(res.abs());
                }
                sink.row(values)?;
            }
            Err(err) => {
                sink.error_trailer(&err.to_string())?;
                eprintln!("family sweep aborted: {err}");
                return Ok(2);
            }
        }
    }
    sink.finish()?;

    if let Some(script) = &args.plot_script {
        let Some(csv_path) = cfg.output.as_deref() else {
            bail!("--plot-script requires --output so the script can reference the CSV");
        };
        write_plot_script(
            script,
            csv_path,
            (2, "r"),
            &[(4, "A1"), (5, "A2"), (6, "A3"), (7, "B"), (8, "C")],
            "metric functions along the family",
        )?;
    }

    if args.summary {
        let mut limits = Vec::new();
        let mut evidence = Vec::new();
        for &alpha in &alphas {
            let lim = if alpha < 1.0 {
                let rep = smoothness_limits(alpha)?;
                json!({
                    "a1": rep.a1,
                    "abs_da1_dt": rep.abs_da1_dt,
                    "db_dt": rep.db_dt,
                    "dc_dt": rep.dc_dt,
                    "a2_plus_a3": rep.a2_plus_a3,
                    "da2_minus_da3_dt": rep.da2_minus_da3_dt,
                    "a2_at_1": rep.a2_at_1,
                    "a3_at_1": rep.a3_at_1,
                })
            } else {
                serde_json::Value::Null
            };
            limits.push(json!({"alpha": alpha, "limits": lim}));
            let ev = holonomy_evidence(alpha)?;
            evidence.push(evidence_json(&ev));
        }
        let payload = json!({
            "max_residual": max_res,
            "residual_ok": max_res < FAMILY_RES_TOL,
            "smoothness_limits": limits,
            "holonomy_evidence": evidence,
        });
        println!("{}", serde_json::to_string_pretty(&payload)?);
    }

    Ok(if max_res < FAMILY_RES_TOL { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

fn parse_state(text: &str) -> Result<State> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    if parts.len() != 6 {
        bail!("--state expects 6 comma-separated values t,A1,A2,A3,B,C");
    }
    Ok(State::new(parts[0], [parts[1], parts[2], parts[3], parts[4], parts[5]]))
}

fn initial_state(args: &IntegrateArgs, cfg: &RunConfig) -> Result<State> {
    if let Some(text) = &args.state {
        return parse_state(text);
    }
    if let Some(r0) = args.from_family_r {
        let alpha = args
            .alpha
            .or(cfg.alpha)
            .ok_or_else(|| anyhow::anyhow!("--from-family-r requires --alpha"))?;
        let s = sample(alpha, r0)?;
        return Ok(State::new(0.0, s.funcs()));
    }
    let eps = args.epsilon.unwrap_or(cfg.epsilon);
    match args.seed.as_deref() {
        Some("symmetric") => {
            let alpha = args
                .alpha
                .or(cfg.alpha)
                .ok_or_else(|| anyhow::anyhow!("symmetric seed requires --alpha"))?;
            Ok(seed(&SeedSpec::symmetric(alpha, eps))?)
        }
        Some("bc-equal") => {
            let a = args.a.ok_or_else(|| anyhow::anyhow!("bc-equal seed requires --a"))?;
            let b = args.b.ok_or_else(|| anyhow::anyhow!("bc-equal seed requires --b"))?;
            Ok(seed(&SeedSpec::bc_equal(a, b, eps))?)
        }
        Some(other) => bail!("unknown seed kind '{other}'; expected 'symmetric' or 'bc-equal'"),
        None => bail!("specify an initial condition: --seed, --from-family-r, or --state"),
    }
}

fn chosen_system(name: Option<&str>) -> Result<&'static OdeSystem> {
    match name.unwrap_or("full") {
        "full" => Ok(OdeSystem::governing()),
        "bc-equal" => Ok(OdeSystem::governing_bc_equal()),
        other => bail!("unknown system '{other}'; expected 'full' or 'bc-equal'"),
    }
}

fn write_trajectory(sink: &mut CsvSink, traj: &Trajectory) -> Result<()> {
    sink.header(&["t", "A1", "A2", "A3", "B", "C"])?;
    for s in &traj.samples {
        sink.row(&[s.t, s.a1, s.a2, s.a3, s.b, s.c])?;
    }
    Ok(())
}

fn drift_json(traj: &Trajectory) -> serde_json::Value {
    let drift = monitor(traj);
    json!({
        "b2_minus_c2": drift.b2_minus_c2,
        "ansatz_constraint": drift.ansatz_constraint,
        "ansatz_constraint_rel": drift.ansatz_constraint_rel,
        "ansatz_applicable": drift.ansatz_applicable,
    })
}

fn state_json(s: &State) -> serde_json::Value {
    json!({
        "t": s.t, "A1": s.a1, "A2": s.a2, "A3": s.a3, "B": s.b, "C": s.c,
    })
}

pub fn integrate(args: &IntegrateArgs, cfg: &RunConfig) -> Result<i32> {
    let initial = match initial_state(args, cfg) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("error: {err:#}");
            return Ok(2);
        }
    };
    let sys = chosen_system(args.system.as_deref())?;
    let rel_tol = args.rel_tol.unwrap_or(cfg.rel_tol);
    let stop = match (args.until_a2, args.t_end) {
        (Some(a2), _) => StopWhen::A2AbsReaches(a2),
        (None, Some(t)) => StopWhen::TimeReached(t),
        (None, None) => StopWhen::TimeReached(cfg.t_end),
    };

    let result = integrate_with_stop(&initial, sys, stop, rel_tol);
    let output = args.output.clone().or_else(|| cfg.output.clone());
    match result {
        Ok(traj) => {
            let mut sink = CsvSink::create(output.as_deref())?;
            write_trajectory(&mut sink, &traj)?;
            sink.finish()?;
            if let Some(script) = &args.plot_script {
                let Some(csv_path) = output.as_deref() else {
                    bail!("--plot-script requires --output so the script can reference the CSV");
                };
                write_plot_script(
                    script,
                    csv_path,
                    (1, "t"),
                    &[(2, "A1"), (3, "A2"), (4, "A3"), (5, "B"), (6, "C")],
                    "integrated metric functions",
                )?;
            }
            let payload = json!({
                "samples": traj.samples.len(),
                "accepted": traj.accepted,
                "rejected": traj.rejected,
                "final_state": state_json(traj.last()),
                "drift": drift_json(&traj),
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(0)
        }
        Err(err) => {
            let mut sink = CsvSink::create(output.as_deref())?;
            sink.header(&["t", "A1", "A2", "A3", "B", "C"])?;
            sink.error_trailer(&err.to_string())?;
            eprintln!("integration failed: {err}");
            Ok(2)
        }
    }
}

// ---------------------------------------------------------------------------
// check-holonomy
// ---------------------------------------------------------------------------

fn evidence_json(ev: &calabi::HolonomyEvidence) -> serde_json::Value {
    json!({
        "alpha": ev.alpha,
        "max_dphi": ev.max_dphi,
        "max_domega1": ev.max_domega[0],
        "max_domega2": ev.max_domega[1],
        "max_domega3": ev.max_domega[2],
        "label": ev.label.as_str(),
    })
}

pub fn check_holonomy(args: &CheckHolonomyArgs, cfg: &RunConfig) -> Result<i32> {
    let mut cfg = cfg.clone();
    if args.alpha.is_some() {
        cfg.alpha = args.alpha;
    }
    let mut records = Vec::new();
    for alpha in cfg.alphas() {
        match holonomy_evidence(alpha) {
            Ok(ev) => records.push(evidence_json(&ev)),
            Err(err) => {
                eprintln!("closure sweep failed at alpha = {alpha}: {err}");
                return Ok(2);
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&json!(records))?);
    Ok(0)
}

// ---------------------------------------------------------------------------
// explore-alc
// ---------------------------------------------------------------------------

pub fn explore_alc(args: &ExploreAlcArgs, cfg: &RunConfig) -> Result<i32> {
    let a = args.a.unwrap_or(0.5);
    let b = args.b.unwrap_or(1.0);
    let eps = args.epsilon.unwrap_or(cfg.epsilon);
    let t_end = args.t_end.unwrap_or(cfg.t_end);
    let rel_tol = args.rel_tol.unwrap_or(cfg.rel_tol);

    let initial = match seed(&SeedSpec::bc_equal(a, b, eps)) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("error: {err}");
            return Ok(2);
        }
    };
    let sys = OdeSystem::governing_bc_equal();
    let t_half = 0.5 * t_end;

    let run = || -> spincone::Result<(Trajectory, State)> {
        let first = flow_integrate(&initial, sys, t_half, rel_tol)?;
        let half_state = *first.last();
        let second = flow_integrate(&half_state, sys, t_end, rel_tol)?;
        let mut samples = first.samples;
        samples.extend_from_slice(&second.samples[1..]);
        Ok((
            Trajectory {
                samples,
                accepted: first.accepted + second.accepted,
                rejected: first.rejected + second.rejected,
                max_error_estimate: first.max_error_estimate.max(second.max_error_estimate),
            },
            half_state,
        ))
    };

    match run() {
        Ok((traj, half_state)) => {
            if let Some(path) = args.output.as_deref().or(cfg.output.as_deref()) {
                let mut sink = CsvSink::create(Some(path))?;
                write_trajectory(&mut sink, &traj)?;
                sink.finish()?;
            }
            let end = traj.last();
            let max_abs_a1 =
                traj.samples.iter().map(|s| s.a1.abs()).fold(0.0f64, f64::max);
            let rel_change_a1 = (end.a1 - half_state.a1).abs() / end.a1.abs();
            let rel_change_a3 = (end.a3 - half_state.a3).abs() / end.a3.abs();
            // Which function settles: the one with the smallest relative
            // change over the second half of the run.
            let rel_changes = [
                ("A1", rel_change_a1),
                ("A2", (end.a2 - half_state.a2).abs() / end.a2.abs()),
                ("A3", rel_change_a3),
                ("B", (end.b - half_state.b).abs() / end.b.abs()),
            ];
            let stable = rel_changes
                .iter()
                .min_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
                .expect("nonempty");
            let payload = json!({
                "seed": {"a": a, "b": b, "epsilon": eps},
                "t_half": half_state.t,
                "t_end": end.t,
                "a1_at_half": half_state.a1,
                "a1_at_end": end.a1,
                "a1_rel_change_second_half": rel_change_a1,
                "a3_at_half": half_state.a3,
                "a3_at_end": end.a3,
                "a3_rel_change_second_half": rel_change_a3,
                "max_abs_a1": max_abs_a1,
                "stable_function": stable.0,
                "stable_rel_change": stable.1,
                "min_of_other_functions_at_end": match stable.0 {
                    "A3" => end.a1.abs().min(end.a2.abs()).min(end.b),
                    "A2" => end.a1.abs().min(end.a3).min(end.b),
                    _ => end.a2.abs().min(end.a3).min(end.b),
                },
                "final_state": state_json(end),
                "drift": drift_json(&traj),
            });
            println!("{}", serde_json::to_string_pretty(&payload)?);
            Ok(0)
        }
        Err(err) => {
            eprintln!("exploration failed: {err}");
            Ok(2)
        }
    }
}

