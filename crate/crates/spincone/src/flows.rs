//! Numeric integration of the governing system with series seeds at the
//! singular boundary t = 0.
//!
//! The boundary data of a smooth collapse fixes A1(0) = 0, |A1'(0)| = 4,
//! A2(0) = −A3(0) ≠ 0 and B'(0) = C'(0) = 0, so integration starts at a small
//! offset t = ε with second-order series values. Two seed families are
//! provided: the symmetric one (A2 = −A3 with B² − C² = const = 2α²,
//! normalized to A2(0)² = 1), which lies on the closed-form metric family,
//! and the B = C seed with −A2(0) = A3(0) < B(0), the regime that flows to
//! the asymptotically locally conical metrics.

use crate::error::{Error, Result};
use crate::structures::{function_point, Deriv, OdeSystem};
use crate::symexpr::NUM_SYMBOLS;
use num_traits::ToPrimitive;

/// One sample of the metric functions along the cone parameter.
///
/// Sign convention on (0, ∞): A1 ≤ 0, A2 ≤ 0, A3 ≥ 0, B > 0, C > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub t: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b: f64,
    pub c: f64,
}

impl State {
    pub fn new(t: f64, funcs: [f64; 5]) -> Self {
        State { t, a1: funcs[0], a2: funcs[1], a3: funcs[2], b: funcs[3], c: funcs[4] }
    }

    pub fn funcs(&self) -> [f64; 5] {
        [self.a1, self.a2, self.a3, self.b, self.c]
    }

    fn check_signs(&self) -> Result<()> {
        let ok = self.a1 <= 0.0 && self.a2 < 0.0 && self.a3 > 0.0 && self.b > 0.0 && self.c > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::SignConvention {
                t: self.t,
                detail: format!(
                    "A1={:e} A2={:e} A3={:e} B={:e} C={:e}",
                    self.a1, self.a2, self.a3, self.b, self.c
                ),
            })
        }
    }
}

/// Which seed family to start from, and how far from the singular point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSpec {
    pub kind: SeedKind,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedKind {
    /// A2 = −A3, B² = A2² + α², C² = A2² − α², normalized to A2(0) = −1.
    Symmetric { alpha: f64 },
    /// −A2(0) = A3(0) = a < B(0) = C(0) = b.
    BcEqual { a: f64, b: f64 },
}

impl SeedSpec {
    pub fn symmetric(alpha: f64, epsilon: f64) -> Self {
        SeedSpec { kind: SeedKind::Symmetric { alpha }, epsilon }
    }

    pub fn bc_equal(a: f64, b: f64, epsilon: f64) -> Self {
        SeedSpec { kind: SeedKind::BcEqual { a, b }, epsilon }
    }
}

/// Second-order series state at t = ε.
///
/// Symmetric: A2² = 1 + 4t² + O(t⁴) along the closed-form family, and
/// A1 = −4t + O(t³). BcEqual: A2'(0) = A3'(0) = 2a²/b² − 2 by the boundary
/// limit of the B = C system, with B'(0) = 0.
pub fn seed(spec: &SeedSpec) -> Result<State> {
    let eps = spec.epsilon;
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(Error::InvalidSpec(format!(
            "epsilon must lie in (0, 1e-2], got {eps:e}"
        )));
    }
    match spec.kind {
        SeedKind::Symmetric { alpha } => {
            if !(0.0..1.0).contains(&alpha) {
                return Err(Error::InvalidSpec(format!(
                    "symmetric seed needs 0 <= alpha < 1, got {alpha}"
                )));
            }
            let rho = 1.0 + 4.0 * eps * eps;
            Ok(State {
                t: eps,
                a1: -4.0 * eps,
                a2: -rho.sqrt(),
                a3: rho.sqrt(),
                b: (rho + alpha * alpha).sqrt(),
                c: (rho - alpha * alpha).sqrt(),
            })
        }
        SeedKind::BcEqual { a, b } => {
            if !(a > 0.0 && a < b) {
                return Err(Error::InvalidSpec(format!(
                    "bc_equal seed needs 0 < a < b, got a={a}, b={b}"
                )));
            }
            // The boundary limit of dA2 depends on the slope σ itself:
            // dA2(0⁺) = 2a²/b² − (σ + 2), so a smooth start forces the
            // self-consistent σ = a²/b² − 1.
            let slope = a * a / (b * b) - 1.0;
            Ok(State {
                t: eps,
                a1: -4.0 * eps,
                a2: -a + slope * eps,
                a3: a + slope * eps,
                b,
                c: b,
            })
        }
    }
}

/// Evaluate the right-hand sides at a state, in double precision.
pub fn rhs_eval(s: &State, sys: &OdeSystem) -> Result<[f64; 5]> {
    check_singular(&s.funcs())?;
    sys.eval(s.funcs())
}

fn check_singular(funcs: &[f64; 5]) -> Result<()> {
    const NAMES: [&str; 5] = ["A1", "A2", "A3", "B", "C"];
    for (i, v) in funcs.iter().enumerate() {
        if v.abs() < 1e-14 {
            return Err(Error::SingularDenominator { symbol: NAMES[i], value: *v });
        }
    }
    Ok(())
}

/// A right-hand-side set flattened to f64 coefficients; same values as
/// `rhs_eval`, but without per-step bignum traffic.
pub struct CompiledRhs {
    rhs: [CompiledRatFunc; 5],
}

struct CompiledRatFunc {
    num: Vec<(f64, [u8; NUM_SYMBOLS])>,
    den: Vec<(f64, [u8; NUM_SYMBOLS])>,
}

fn compile_terms(p: &crate::symexpr::Poly) -> Vec<(f64, [u8; NUM_SYMBOLS])> {
    p.terms()
        .map(|(e, c)| (c.to_f64().expect("finite coefficient"), *e))
        .collect()
}

fn eval_terms(terms: &[(f64, [u8; NUM_SYMBOLS])], point: &[f64; NUM_SYMBOLS]) -> f64 {
    let mut acc = 0.0;
    for (c, exps) in terms {
        let mut v = *c;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                v *= point[i].powi(e as i32);
            }
        }
        acc += v;
    }
    acc
}

impl CompiledRhs {
    pub fn new(sys: &OdeSystem) -> Self {
        CompiledRhs {
            rhs: Deriv::ALL.map(|d| CompiledRatFunc {
                num: compile_terms(sys.rhs(d).num()),
                den: compile_terms(sys.rhs(d).den()),
            }),
        }
    }

    pub fn eval(&self, funcs: [f64; 5]) -> Result<[f64; 5]> {
        check_singular(&funcs)?;
        let point = function_point(funcs);
        let mut out = [0.0; 5];
        for (i, rf) in self.rhs.iter().enumerate() {
            let den = eval_terms(&rf.den, &point);
            if den.abs() < 1e-300 {
                return Err(Error::DivisionByZero);
            }
            out[i] = eval_terms(&rf.num, &point) / den;
        }
        Ok(out)
    }
}

/// Time-ordered samples with integrator diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub accepted: usize,
    pub rejected: usize,
    pub max_error_estimate: f64,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.samples.last().expect("trajectory holds at least the initial state")
    }

    /// The sample state nearest to a given time.
    pub fn nearest(&self, t: f64) -> &State {
        self.samples
            .iter()
            .min_by(|x, y| {
                (x.t - t).abs().partial_cmp(&(y.t - t).abs()).expect("finite times")
            })
            .expect("nonempty trajectory")
    }
}

/// Termination condition for the integration loop.
#[derive(Debug, Clone, Copy)]
pub enum StopWhen {
    TimeReached(f64),
    /// Stop when |A2| grows to the given value, landing on it.
    A2AbsReaches(f64),
}

/// Drift of the conserved combinations along a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct DriftReport {
    /// max over samples of |(B²−C²) − (B²−C²)(t0)|.
    pub b2_minus_c2: f64,
    /// max over samples of |B² + C² − 2A2²|.
    pub ansatz_constraint: f64,
    /// max over samples of |B² + C² − 2A2²| / max(1, B² + C²). The absolute
    /// figure scales with B² on long runs; this one does not.
    pub ansatz_constraint_rel: f64,
    /// Whether the initial state satisfies B² + C² = 2A2² to begin with;
    /// the constraint drifts are only meaningful when set.
    pub ansatz_applicable: bool,
}

/// Max-norm drift of the two conserved combinations.
pub fn monitor(traj: &Trajectory) -> DriftReport {
    let first = traj.samples.first().expect("nonempty trajectory");
    let inv0 = first.b * first.b - first.c * first.c;
    let constraint =
        |s: &State| s.b * s.b + s.c * s.c - 2.0 * s.a2 * s.a2;
    let applicable = constraint(first).abs() < 1e-9;
    let mut d1 = 0.0f64;
    let mut d2 = 0.0f64;
    let mut d2_rel = 0.0f64;
    for s in &traj.samples {
        d1 = d1.max((s.b * s.b - s.c * s.c - inv0).abs());
        let v = constraint(s).abs();
        d2 = d2.max(v);
        d2_rel = d2_rel.max(v / (s.b * s.b + s.c * s.c).max(1.0));
    }
    DriftReport {
        b2_minus_c2: d1,
        ansatz_constraint: d2,
        ansatz_constraint_rel: d2_rel,
        ansatz_applicable: applicable,
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// b5 - b4: error-estimate weights of the embedded pair.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type Vec5 = [f64; 5];

fn axpy(y: &Vec5, h: f64, coeffs: &[f64], ks: &[Vec5]) -> Vec5 {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks.iter()) {
        if *c != 0.0 {
            for i in 0..5 {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

struct StepResult {
    y_new: Vec5,
    k_last: Vec5,
    err: f64,
}

/// One Dormand-Prince step from y with k1 already evaluated. The system is
/// autonomous, so stage times never enter the right-hand sides.
fn dopri5_step(
    rhs: &CompiledRhs,
    y: &Vec5,
    k1: &Vec5,
    h: f64,
    rel_tol: f64,
) -> Result<StepResult> {
    let mut ks: Vec<Vec5> = Vec::with_capacity(7);
    ks.push(*k1);
    for stage in 1..6 {
        let y_stage = axpy(y, h, &A[stage][..stage], &ks);
        ks.push(rhs.eval(y_stage)?);
    }
    let y_new = axpy(y, h, &A[6][..6], &ks);
    let k_last = rhs.eval(y_new)?;
    ks.push(k_last);

    let mut err_sq = 0.0;
    for i in 0..5 {
        let mut e = 0.0;
        for (j, k) in ks.iter().enumerate() {
            if E[j] != 0.0 {
                e += E[j] * k[i];
            }
        }
        e *= h;
        let scale = rel_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        err_sq += (e / scale) * (e / scale);
    }
    Ok(StepResult { y_new, k_last, err: (err_sq / 5.0).sqrt() })
}

fn initial_step(rhs: &CompiledRhs, y: &Vec5, f0: &Vec5, rel_tol: f64) -> f64 {
    let norm = |v: &Vec5, w: &Vec5| {
        let mut s = 0.0;
        for i in 0..5 {
            let sc = rel_tol + rel_tol * w[i].abs();
            s += (v[i] / sc) * (v[i] / sc);
        }
        (s / 5.0).sqrt()
    };
    let d0 = norm(y, y);
    let d1 = norm(f0, y);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    // One explicit Euler probe to bound the second derivative.
    let mut y1 = *y;
    for i in 0..5 {
        y1[i] += h0 * f0[i];
    }
    if let Ok(f1) = rhs.eval(y1) {
        let mut diff = [0.0; 5];
        for i in 0..5 {
            diff[i] = f1[i] - f0[i];
        }
        let d2 = norm(&diff, y) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        h0 = (100.0 * h0).min(h1);
    }
    h0
}

/// Adaptive integration with the explicit Dormand-Prince 5(4) pair.
///
/// Accepted samples are appended to the trajectory; the sign convention is
/// asserted on every accepted state. The `A2AbsReaches` stop condition lands
/// on its target by bisecting the final step.
pub fn integrate_with_stop(
    initial: &State,
    sys: &OdeSystem,
    stop: StopWhen,
    rel_tol: f64,
) -> Result<Trajectory> {
    if !(1e-13..=1e-6).contains(&rel_tol) {
        return Err(Error::InvalidSpec(format!(
            "rel_tol must lie in [1e-13, 1e-6], got {rel_tol:e}"
        )));
    }
    initial.check_signs()?;

    let rhs = CompiledRhs::new(sys);
    let mut traj = Trajectory {
        samples: vec![*initial],
        accepted: 0,
        rejected: 0,
        max_error_estimate: 0.0,
    };

    let mut t = initial.t;
    let mut y = initial.funcs();

    let reached = |t: f64, y: &Vec5| match stop {
        StopWhen::TimeReached(t_end) => t >= t_end,
        StopWhen::A2AbsReaches(target) => y[1].abs() >= target,
    };
    if reached(t, &y) {
        return Ok(traj);
    }

    let mut k1 = rhs.eval(y)?;
    let mut h = initial_step(&rhs, &y, &k1, rel_tol);
    if let StopWhen::TimeReached(t_end) = stop {
        h = h.min(t_end - t);
    }

    const MAX_STEPS: usize = 50_000_000;
    for _ in 0..MAX_STEPS {
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }
        let step = dopri5_step(&rhs, &y, &k1, h, rel_tol)?;
        traj.max_error_estimate = traj.max_error_estimate.max(step.err);

        if step.err <= 1.0 {
            // Accept.
            t += h;
            y = step.y_new;
            k1 = step.k_last;
            let state = State::new(t, y);
            state.check_signs()?;
            traj.samples.push(state);
            traj.accepted += 1;

            match stop {
                StopWhen::TimeReached(t_end) => {
                    if t >= t_end * (1.0 - 1e-14) {
                        return Ok(traj);
                    }
                }
                StopWhen::A2AbsReaches(target) => {
                    if y[1].abs() >= target {
                        let prev = traj.samples[traj.samples.len() - 2];
                        let landed = land_on_a2(&rhs, &prev, target, h, rel_tol)?;
                        *traj.samples.last_mut().expect("nonempty") = landed;
                        return Ok(traj);
                    }
                }
            }

            let fac = (0.9 * step.err.powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
            if let StopWhen::TimeReached(t_end) = stop {
                h = h.min(t_end - t);
            }
        } else {
            traj.rejected += 1;
            h *= (0.9 * step.err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Err(Error::StepUnderflow { t, h })
}

/// Bisect the step length from `prev` so that |A2| lands on `target`.
fn land_on_a2(
    rhs: &CompiledRhs,
    prev: &State,
    target: f64,
    h_hit: f64,
    rel_tol: f64,
) -> Result<State> {
    let y0 = prev.funcs();
    let k1 = rhs.eval(y0)?;
    let overshoot = |h: f64| -> Result<f64> {
        let step = dopri5_step(rhs, &y0, &k1, h, rel_tol)?;
        Ok(step.y_new[1].abs() - target)
    };
    let mut lo = 0.0f64;
    let mut hi = h_hit;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if overshoot(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let step = dopri5_step(rhs, &y0, &k1, hi, rel_tol)?;
    let state = State::new(prev.t + hi, step.y_new);
    state.check_signs()?;
    Ok(state)
}

/// Integrate up to `t_end`.
pub fn integrate(
    initial: &State,
    sys: &OdeSystem,
    t_end: f64,
    rel_tol: f64,
) -> Result<Trajectory> {
    integrate_with_stop(initial, sys, StopWhen::TimeReached(t_end), rel_tol)
}

/// Integrate until |A2| reaches the given magnitude.
pub fn integrate_until_a2(
    initial: &State,
    sys: &OdeSystem,
    a2_abs: f64,
    rel_tol: f64,
) -> Result<Trajectory> {
    integrate_with_stop(initial, sys, StopWhen::A2AbsReaches(a2_abs), rel_tol)
}
