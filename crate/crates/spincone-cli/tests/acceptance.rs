//! Acceptance suite: one test per criterion, printing a PASS line with the
//! measured figures (run with `--nocapture` to see them).
//!
//! Criterion 11 appears twice: once in its originally drafted form — which fails,
//! because no solution from that boundary data can keep A1 bounded while A2
//! and A3 both grow (the A1 equation pins A1' near −4 in that regime) — and
//! once with the bounded/growing roles assigned the way the flow actually
//! realizes the asymptotic product structure. See the companion test's
//! comment for the full argument.

use std::process::Command;
use std::time::Instant;

use spincone::calabi::{self, sample, smoothness_limits};
use spincone::coframe::{BasisElement, Form, HorizontalSymbol, DT};
use spincone::flows::{
    integrate, integrate_until_a2, monitor, seed, SeedSpec, State,
};
use spincone::structures::{
    closure_report, derive_ode, reduce_ansatz, verify_annihilates_dphi, Deriv, OdeSystem,
};
use spincone::symexpr::{rat, rewrite_ratfunc, Poly, RatFunc, RewriteRule, Symbol};

const ALPHA_GRID: [f64; 6] = [0.0, 0.3, 0.6, 0.9, 0.99, 1.0];
const RESIDUAL_ALPHAS: [f64; 5] = [0.0, 0.3, 0.6, 0.9, 0.99];

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spincone")
}

fn log_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (min.ln() + (max.ln() - min.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn criterion_01_system_derivation() {
    let start = Instant::now();
    let status = Command::new(bin())
        .args(["derive", "--check"])
        .output()
        .expect("spawn spincone");
    assert!(status.status.success(), "derive --check exited nonzero");

    let derived = derive_ode().expect("unique solution");
    let reference = OdeSystem::governing();
    for d in Deriv::ALL {
        assert_eq!(derived.rhs(d), reference.rhs(d), "cross-multiplication mismatch in {}", d.name());
    }
    assert!(verify_annihilates_dphi(&derived));
    assert!(verify_annihilates_dphi(reference));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 01 (system derivation): PASS in {elapsed:?}");
}

#[test]
fn criterion_02_structure_equation_consistency() {
    for i in 1..=3usize {
        let eta = Form::basis(BasisElement::new(spincone::coframe::eta(i), HorizontalSymbol::Unit));
        assert!(eta.ext_d().unwrap().ext_d().unwrap().is_zero(), "d² η{i} ≠ 0");
        let w = [HorizontalSymbol::W1, HorizontalSymbol::W2, HorizontalSymbol::W3][i - 1];
        let wf = Form::basis(BasisElement::new(0, w));
        assert!(wf.ext_d().unwrap().ext_d().unwrap().is_zero(), "d² ω{i} ≠ 0");
    }
    assert!(spincone::coframe::etaspace::table_matches_hardcoded());
    println!("criterion 02 (structure equations, d²=0 and 25-entry table): PASS");
}

#[test]
fn criterion_03_bc_specialization() {
    let derived = derive_ode().unwrap();
    let rules = vec![RewriteRule::bare(Symbol::C, Poly::symbol(Symbol::B))];
    let prime = OdeSystem::governing_bc_equal();
    for d in [Deriv::A1, Deriv::A2, Deriv::A3, Deriv::B] {
        let specialized = rewrite_ratfunc(derived.rhs(d), &rules).unwrap();
        let expected = rewrite_ratfunc(prime.rhs(d), &rules).unwrap();
        assert_eq!(specialized, expected, "B=C specialization differs in {}", d.name());
    }
    println!("criterion 03 (B=C specialization equals the reduced system): PASS");
}

#[test]
fn criterion_04_ansatz_reduction() {
    let red = reduce_ansatz(OdeSystem::governing()).expect("reduction verifies");
    // The reduced A1 equation, rebuilt independently here.
    let a1 = RatFunc::from_symbol(Symbol::A1);
    let a2 = RatFunc::from_symbol(Symbol::A2);
    let alpha4 = RatFunc::from_poly(Poly::symbol_pow(Symbol::Alpha, 4));
    let a2_4 = RatFunc::from_poly(Poly::symbol_pow(Symbol::A2, 4));
    let expected = &(&RatFunc::int(-4) + &(&(&a1 * &a1) / &(&a2 * &a2)))
        + &(&(&RatFunc::int(2) * &(&(&a1 * &a1) * &(&a2 * &a2))) / &(&a2_4 - &alpha4));
    assert_eq!(red.reduced_a1, expected);
    println!("criterion 04 (ansatz reduction, exact): PASS");
}

#[test]
fn criterion_05_f_identity() {
    assert!(calabi::verify_f_identity());
    assert!(!calabi::f_identity_residual(true).is_zero());
    println!("criterion 05 (dF/dρ + F·G = 4 exactly in (ρ, α², β)): PASS");
}

#[test]
fn criterion_06_family_residuals() {
    let start = Instant::now();
    let grid = log_grid(1.001, 50.0, 200);
    let mut max_res = 0.0f64;
    for &alpha in &RESIDUAL_ALPHAS {
        for &r in &grid {
            let res = calabi::residuals(alpha, r).unwrap();
            for v in res {
                max_res = max_res.max(v.abs());
            }
        }
    }
    assert!(max_res < 1e-10, "max residual {max_res:e}");

    // The α = 0 identity dA1/dt = −1 − 3/r⁸ = rhs(dA1), in exact rationals.
    for r_int in [2i64, 3, 5] {
        let r = rat(r_int);
        let expect = -rat(1) - rat(3) / spincone::symexpr::rat_pow(&r, 8);
        assert_eq!(calabi::exact::da1_dt(&rat(0), &r), expect);
        let f_const = calabi::exact::f_of(&rat(0), &r);
        let rules = vec![
            RewriteRule::even(Symbol::A1, Poly::constant(f_const)),
            RewriteRule::bare(Symbol::A2, Poly::constant(-r.clone())),
            RewriteRule::bare(Symbol::A3, Poly::constant(r.clone())),
            RewriteRule::even(Symbol::B, Poly::constant(&r * &r)),
            RewriteRule::even(Symbol::C, Poly::constant(&r * &r)),
        ];
        let reduced = rewrite_ratfunc(OdeSystem::governing().rhs(Deriv::A1), &rules).unwrap();
        assert_eq!(reduced, RatFunc::constant(expect));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 06 (family residuals < 1e-10 over 5x200 grid, α=0 identity exact): PASS, max |res| = {max_res:.3e}, {elapsed:?}"
    );
}

#[test]
fn criterion_07_smoothness_limits() {
    for &alpha in &RESIDUAL_ALPHAS {
        let rep = smoothness_limits(alpha).unwrap();
        assert!(
            (rep.abs_da1_dt - 4.0).abs() < 1e-6,
            "α={alpha}: |dA1/dt| → {}",
            rep.abs_da1_dt
        );
        assert!(rep.db_dt.abs() < 1e-8, "α={alpha}: dB/dt → {:e}", rep.db_dt);
        assert!(rep.dc_dt.abs() < 1e-8, "α={alpha}: dC/dt → {:e}", rep.dc_dt);
        assert_eq!(rep.a2_at_1, -1.0);
        assert_eq!(rep.a3_at_1, 1.0);
    }
    println!("criterion 07 (collapse limits |A1'|→4, B'→0, C'→0, A2(1)=−1, A3(1)=1): PASS");
}

#[test]
fn criterion_08_closure_sweep() {
    let sys = OdeSystem::governing();
    for &alpha in &ALPHA_GRID {
        for r in calabi::EVIDENCE_R_SWEEP {
            let s = sample(alpha, r).unwrap();
            let rep = closure_report(s.funcs(), sys).unwrap();
            assert!(rep.phi.max_abs < 1e-10, "α={alpha}, r={r}: dΦ = {:e}", rep.phi.max_abs);
            assert!(
                rep.omega(1).max_abs < 1e-10,
                "α={alpha}, r={r}: dΩ̄1 = {:e}",
                rep.omega(1).max_abs
            );
            if alpha == 1.0 {
                assert!(rep.omega(2).max_abs < 1e-10, "r={r}: dΩ̄2 = {:e}", rep.omega(2).max_abs);
                assert!(rep.omega(3).max_abs < 1e-10, "r={r}: dΩ̄3 = {:e}", rep.omega(3).max_abs);
            }
        }
    }
    // α = 0.5, r = 1.05: the (dt, ω2) component of dΩ̄2 is macroscopic.
    let s = sample(0.5, 1.05).unwrap();
    let rep = closure_report(s.funcs(), sys).unwrap();
    let comp = rep.omega(2).components[&BasisElement::new(DT, HorizontalSymbol::W2)];
    assert!(comp.abs() >= 0.3, "(dt, ω2) component of dΩ̄2 = {comp}");
    println!(
        "criterion 08 (closure sweep; hyperkähler closure at α=1; dΩ̄2 (dt,ω2) = {:.4} ≥ 0.3 at α=0.5, r=1.05): PASS",
        comp.abs()
    );
}

#[test]
fn criterion_09_trajectory_matching() {
    let start_state = State::new(0.0, sample(0.3, 1.1).unwrap().funcs());
    let traj = integrate_until_a2(&start_state, OdeSystem::governing(), 5.0, 1e-10).unwrap();
    let end = traj.last();
    let oracle = sample(0.3, 5.0).unwrap();
    let mut worst = 0.0f64;
    for (got, want) in end.funcs().iter().zip(oracle.funcs()) {
        worst = worst.max(((got - want) / want).abs());
    }
    assert!(worst < 1e-6, "endpoint relative error {worst:e}");
    let drift = monitor(&traj);
    assert!(drift.b2_minus_c2 < 1e-8, "Δ(B²−C²) = {:e}", drift.b2_minus_c2);
    assert!(drift.ansatz_constraint < 1e-8, "Δ(B²+C²−2A2²) = {:e}", drift.ansatz_constraint);
    println!(
        "criterion 09 (trajectory matches closed form, rel {worst:.2e}; drifts {:.2e}/{:.2e} < 1e-8): PASS",
        drift.b2_minus_c2, drift.ansatz_constraint
    );
}

#[test]
fn criterion_10_singular_seed_consistency() {
    let from_seed = integrate_until_a2(
        &seed(&SeedSpec::symmetric(0.3, 1e-4)).unwrap(),
        OdeSystem::governing(),
        2.0,
        1e-10,
    )
    .unwrap();
    let from_family = integrate_until_a2(
        &State::new(0.0, sample(0.3, 1.01).unwrap().funcs()),
        OdeSystem::governing(),
        2.0,
        1e-10,
    )
    .unwrap();
    let mut worst = 0.0f64;
    for (a, b) in from_seed.last().funcs().iter().zip(from_family.last().funcs()) {
        worst = worst.max(((a - b) / b).abs());
    }
    assert!(worst < 1e-5, "states diverge by rel {worst:e} at r = 2");
    println!("criterion 10 (singular seed meets the family at r = 2, rel {worst:.2e} < 1e-5): PASS");
}

fn alc_run() -> (State, State) {
    let initial = seed(&SeedSpec::bc_equal(0.5, 1.0, 1e-4)).unwrap();
    let sys = OdeSystem::governing_bc_equal();
    let first = integrate(&initial, sys, 50.0, 1e-10).unwrap();
    let half = *first.last();
    let second = integrate(&half, sys, 100.0, 1e-10).unwrap();
    (half, *second.last())
}

#[test]
fn criterion_11_alc_behavior_a1_bounded_expectation() {
    // The original expectation: A1 bounded while the rest grow. It cannot pass: with
    // A2 A3 < 0 the A1 equation gives A1' = 2A1²/B² + (A1²−(|A2|+A3)²)/(|A2|A3),
    // and if A2 and A3 both grew unbounded with A1 bounded the second term
    // tends below −4, pinning A1' near −4 — so A1 cannot stay < 10 while
    // min(|A2|, A3, B) exceeds 20. The flow instead stabilizes A3 (the
    // asymptotic circle) while A1, |A2|, B grow conically; the companion
    // test asserts that realized structure.
    let (half, end) = alc_run();
    let max_abs_a1 = end.a1.abs().max(half.a1.abs());
    let min_growth = end.a2.abs().min(end.a3).min(end.b);
    let rel_change = (end.a1 - half.a1).abs() / end.a1.abs();
    assert!(
        max_abs_a1 < 10.0 && min_growth > 20.0 && rel_change < 0.05,
        "the A1-bounded expectation fails: |A1| reaches {max_abs_a1:.1} (bound 10), \
         min(|A2|, A3, B) = {min_growth:.3} (bound 20), A1 rel change {rel_change:.3} \
         (bound 0.05); the bounded function is A3 = {:.4}, not A1 — see the \
         corrected companion criterion",
        end.a3
    );
    println!("criterion 11 (ALC behavior, A1-bounded expectation): PASS");
}

#[test]
fn criterion_11_alc_behavior_stable_circle_corrected() {
    // The same plausibility probe with the bounded/growing roles assigned as
    // the flow realizes them: integration reaches t = 100 without
    // singularity; the circle function A3 stays bounded and stabilizes to
    // within 5% over [50, 100]; the cone directions A1, A2, B all exceed 20.
    let (half, end) = alc_run();
    assert!((end.t - 100.0).abs() < 1e-9, "integration fell short: t = {}", end.t);
    assert!(end.a3.abs() < 10.0, "A3 = {}", end.a3);
    let rel_change = (end.a3 - half.a3).abs() / end.a3.abs();
    assert!(rel_change < 0.05, "A3 rel change {rel_change}");
    let min_growth = end.a1.abs().min(end.a2.abs()).min(end.b);
    assert!(min_growth > 20.0, "min(|A1|, |A2|, B) = {min_growth}");
    println!(
        "criterion 11 (ALC behavior, corrected roles): PASS — A3 → {:.4} (rel change {:.2e}), min(|A1|,|A2|,B) = {:.1} at t = 100",
        end.a3, rel_change, min_growth
    );
}
