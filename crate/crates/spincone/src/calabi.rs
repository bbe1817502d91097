//! The explicit one-parameter metric family ḡ_α, 0 ≤ α ≤ 1.
//!
//! With the maximal root of the radial polynomial normalized to r0 = 1, the
//! family reads
//!
//! ```text
//! ḡ_α = (r⁴(r⁴−α⁴)/N) dr² + (N/(r²(r⁴−α⁴))) η1²
//!       + r²(η2²+η3²) + (r²+α²)(η4²+η5²) + (r²−α²)(η6²+η7²),
//! N(r) = r⁸ − 2α⁴(r⁴−1) − 1,  β = 2α⁴ − 1.
//! ```
//!
//! In the cone parametrization the signed metric functions are A1 = −√F,
//! A2 = −r, A3 = r, B = √(r²+α²), C = √(r²−α²) with F = N/(r²(r⁴−α⁴)) and
//! dt/dr = r/√F. Near r = 1, N is evaluated through u = r⁴−1 expanded in
//! δ = r−1, which avoids the cancellation that would otherwise dominate the
//! collapse limits.

use crate::error::{Error, Result};
use crate::structures::{closure_report, OdeSystem};
use crate::symexpr::{rewrite_ratfunc, Poly, RatFunc, RewriteRule, Symbol};

/// Parameters of one family member; `beta` is derived, not free.
#[derive(Debug, Clone, Copy)]
pub struct FamilyParams {
    pub alpha: f64,
    /// β = 2α⁴ − 1, the integrating constant that places the maximal root
    /// of r⁸ − 2α⁴r⁴ + β at r0 = 1.
    pub beta: f64,
}

impl FamilyParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::DomainError(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(FamilyParams { alpha, beta: 2.0 * alpha.powi(4) - 1.0 })
    }
}

/// One closed-form evaluation of the family at (α, r).
#[derive(Debug, Clone, Copy)]
pub struct MetricSample {
    pub alpha: f64,
    pub r: f64,
    /// dt/dr = √(g_rr) = r²√((r⁴−α⁴)/N); +∞ at the collapse r = 1.
    pub t_of_r_derivative: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b: f64,
    pub c: f64,
    /// Set at r = 1, where the η1-circle collapses and dt/dr diverges.
    pub coordinate_singularity: bool,
}

impl MetricSample {
    pub fn funcs(&self) -> [f64; 5] {
        [self.a1, self.a2, self.a3, self.b, self.c]
    }
}

/// u = r⁴ − 1 through δ = r − 1; exact subtraction for r ∈ [1, 2] and free
/// of cancellation everywhere.
fn u_of(r: f64) -> f64 {
    let d = r - 1.0;
    d * (((d + 4.0) * d + 6.0) * d + 4.0)
}

/// N(r) = r⁸ − 2α⁴(r⁴−1) − 1 = u(u + 2(1−α⁴)).
pub fn n_of(alpha: f64, r: f64) -> f64 {
    let u = u_of(r);
    u * (u + 2.0 * (1.0 - alpha.powi(4)))
}

/// F = N/(r²(r⁴−α⁴)). Defined for r > α; vanishes at r = 1.
pub fn f_of_r(alpha: f64, r: f64) -> Result<f64> {
    if r == 1.0 && alpha <= 1.0 {
        // N(1) = 0 for every member; at α = 1 the zero of the denominator
        // is removable and the limit is still 0.
        return Ok(0.0);
    }
    if r <= alpha {
        return Err(Error::DomainError(format!(
            "F(α, r) needs r > α, got r = {r}, α = {alpha}"
        )));
    }
    let u = u_of(r);
    let w = 1.0 - alpha.powi(4);
    Ok(u * (u + 2.0 * w) / (r * r * (u + w)))
}

/// F' by the quotient rule on N/D with D = r⁶ − α⁴r².
pub fn f_prime(alpha: f64, r: f64) -> f64 {
    let a4 = alpha.powi(4);
    let n = n_of(alpha, r);
    let n_p = 8.0 * r.powi(7) - 8.0 * a4 * r.powi(3);
    let d = r * r * (u_of(r) + (1.0 - a4));
    let d_p = 6.0 * r.powi(5) - 2.0 * a4 * r;
    (n_p * d - n * d_p) / (d * d)
}

/// Evaluate the family at (α, r ≥ 1) with the fixed sign convention
/// A1 = −√F, A2 = −r, A3 = +r.
pub fn sample(alpha: f64, r: f64) -> Result<MetricSample> {
    let params = FamilyParams::new(alpha)?;
    if r < 1.0 {
        return Err(Error::DomainError(format!(
            "the family lives on r >= 1, got r = {r}"
        )));
    }
    let f = f_of_r(alpha, r)?;
    let singular = r == 1.0;
    let t_deriv = if singular {
        f64::INFINITY
    } else {
        r * r * ((u_of(r) + (1.0 - alpha.powi(4))) / n_of(alpha, r)).sqrt()
    };
    Ok(MetricSample {
        alpha: params.alpha,
        r,
        t_of_r_derivative: t_deriv,
        a1: -f.sqrt(),
        a2: -r,
        a3: r,
        b: (r * r + alpha * alpha).sqrt(),
        c: (r * r - alpha * alpha).sqrt(),
        coordinate_singularity: singular,
    })
}

/// Closed-form d/dt of the five metric functions at (α, r): the r-derivative
/// divided by dt/dr = r/√F.
pub fn family_derivatives(alpha: f64, r: f64) -> Result<[f64; 5]> {
    if r <= 1.0 {
        return Err(Error::DomainError(format!(
            "closed-form derivatives need r > 1, got r = {r}"
        )));
    }
    let f = f_of_r(alpha, r)?;
    let sqrt_f = f.sqrt();
    let dr_dt = sqrt_f / r;
    let b = (r * r + alpha * alpha).sqrt();
    let c = (r * r - alpha * alpha).sqrt();
    Ok([
        -f_prime(alpha, r) / (2.0 * r), // d(−√F)/dt = −F'/(2√F) · √F/r
        -dr_dt,
        dr_dt,
        (r / b) * dr_dt,
        (r / c) * dr_dt,
    ])
}

/// residual_k = (closed-form d/dt of the k-th function) − rhs_k(sample).
pub fn residuals(alpha: f64, r: f64) -> Result<[f64; 5]> {
    let s = sample(alpha, r)?;
    let closed = family_derivatives(alpha, r)?;
    let rhs = OdeSystem::governing().eval(s.funcs())?;
    Ok(std::array::from_fn(|i| closed[i] - rhs[i]))
}

// ---------------------------------------------------------------------------
// The linear first-order identity behind F
// ---------------------------------------------------------------------------

/// Residual of dF/dρ + F·G − 4 as an exact rational function in (ρ, α, β),
/// with F(ρ) = (ρ⁴ − 2α⁴ρ² + β)/(ρ(ρ²−α⁴)) and
/// G = 1/ρ + 1/(ρ−α²) + 1/(ρ+α²). Dropping G's middle term (the test
/// mutation) must leave a nonzero residual.
pub fn f_identity_residual(drop_middle_term: bool) -> RatFunc {
    let rho = RatFunc::from_symbol(Symbol::Rho);
    let alpha2 = RatFunc::from_poly(Poly::symbol_pow(Symbol::Alpha, 2));
    let alpha4 = RatFunc::from_poly(Poly::symbol_pow(Symbol::Alpha, 4));
    let beta = RatFunc::from_symbol(Symbol::Beta);
    let one = RatFunc::one();

    let num = &(&(&(&rho * &rho) * &(&rho * &rho))
        - &(&(&RatFunc::int(2) * &alpha4) * &(&rho * &rho)))
        + &beta;
    let den = &rho * &(&(&rho * &rho) - &alpha4);
    let f = &num / &den;

    let mut g = &one / &rho;
    if !drop_middle_term {
        g = &g + &(&one / &(&rho - &alpha2));
    }
    g = &g + &(&one / &(&rho + &alpha2));

    let df = f.partial_derivative(Symbol::Rho);
    &(&df + &(&f * &g)) - &RatFunc::int(4)
}

/// dF/dρ + F·G = 4 exactly, identically in β.
pub fn verify_f_identity() -> bool {
    f_identity_residual(false).is_zero()
}

/// With β = 2α⁴ − 1, F vanishes at ρ = 1 (the normalized maximal root).
pub fn f_vanishes_at_normalized_root() -> bool {
    let num = &(&Poly::symbol_pow(Symbol::Rho, 4)
        - &(&Poly::symbol_pow(Symbol::Alpha, 4).scale(&crate::symexpr::rat(2))
            * &Poly::symbol_pow(Symbol::Rho, 2)))
        + &Poly::symbol(Symbol::Beta);
    let rules = vec![
        RewriteRule::bare(Symbol::Rho, Poly::one()),
        RewriteRule::bare(
            Symbol::Beta,
            &Poly::symbol_pow(Symbol::Alpha, 4).scale(&crate::symexpr::rat(2)) - &Poly::one(),
        ),
    ];
    rewrite_ratfunc(&RatFunc::from_poly(num), &rules)
        .map(|f| f.is_zero())
        .unwrap_or(false)
}

// ---------------------------------------------------------------------------
// Collapse limits at r → 1⁺
// ---------------------------------------------------------------------------

/// Limits of the smooth-collapse quantities at the boundary.
#[derive(Debug, Clone, Copy)]
pub struct LimitReport {
    pub alpha: f64,
    /// lim A1 (expect 0).
    pub a1: f64,
    /// lim |dA1/dt| (expect 4).
    pub abs_da1_dt: f64,
    /// lim dB/dt (expect 0).
    pub db_dt: f64,
    /// lim dC/dt (expect 0).
    pub dc_dt: f64,
    /// lim A2 + A3 (identically 0).
    pub a2_plus_a3: f64,
    /// lim dA2/dt − dA3/dt (expect 0).
    pub da2_minus_da3_dt: f64,
    /// A2 and A3 evaluated at r = 1 exactly.
    pub a2_at_1: f64,
    pub a3_at_1: f64,
}

/// Richardson extrapolation on nodes q(h·2^{-k}) for a quantity analytic in
/// υ = √δ, eliminating υ¹..υ^orders. The collapse quantities are analytic in
/// t, and t ∝ √(r−1) near the boundary, which fixes the υ model.
fn richardson_sqrt2(values: &[f64], orders: usize) -> f64 {
    let mut table = values.to_vec();
    for m in 1..=orders {
        let c = 2f64.powf(m as f64 / 2.0);
        table = table
            .windows(2)
            .map(|w| (c * w[1] - w[0]) / (c - 1.0))
            .collect();
    }
    *table.last().expect("enough Richardson nodes")
}

/// Collapse limits at r → 1⁺ by Richardson extrapolation over r = 1 + 2^{-k}h.
pub fn smoothness_limits(alpha: f64) -> Result<LimitReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::DomainError(format!(
            "smoothness limits need 0 <= alpha < 1, got {alpha}"
        )));
    }
    const H: f64 = 1e-2;
    const K: usize = 16;
    const ORDERS: usize = 4;

    let mut q_a1 = [0.0; K];
    let mut q_da1 = [0.0; K];
    let mut q_db = [0.0; K];
    let mut q_dc = [0.0; K];
    let mut q_diff = [0.0; K];
    for (k, delta) in (0..K).map(|k| (k, H * 2f64.powi(-(k as i32)))) {
        let r = 1.0 + delta;
        let f = f_of_r(alpha, r)?;
        let sqrt_f = f.sqrt();
        q_a1[k] = -sqrt_f;
        q_da1[k] = (f_prime(alpha, r) / (2.0 * r)).abs();
        q_db[k] = sqrt_f / (r * r + alpha * alpha).sqrt();
        q_dc[k] = sqrt_f / (r * r - alpha * alpha).sqrt();
        q_diff[k] = -2.0 * sqrt_f / r;
    }

    Ok(LimitReport {
        alpha,
        a1: richardson_sqrt2(&q_a1, ORDERS),
        abs_da1_dt: richardson_sqrt2(&q_da1, ORDERS),
        db_dt: richardson_sqrt2(&q_db, ORDERS),
        dc_dt: richardson_sqrt2(&q_dc, ORDERS),
        a2_plus_a3: 0.0,
        da2_minus_da3_dt: richardson_sqrt2(&q_diff, ORDERS),
        a2_at_1: -1.0,
        a3_at_1: 1.0,
    })
}

// ---------------------------------------------------------------------------
// Holonomy evidence from closure sweeps
// ---------------------------------------------------------------------------

/// The r-values swept for closure evidence.
pub const EVIDENCE_R_SWEEP: [f64; 5] = [1.05, 1.5, 2.0, 5.0, 20.0];

/// Closure threshold below which a form counts as numerically closed.
pub const CLOSED_TOL: f64 = 1e-10;
/// Threshold above which dΩ̄2 counts as decisively non-closed.
pub const NONCLOSED_TOL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvidenceLabel {
    /// dΦ, dΩ̄1, dΩ̄2, dΩ̄3 all below `CLOSED_TOL`: the full Kähler triple
    /// closes, pointing at holonomy Sp(2).
    Sp2,
    /// dΦ and dΩ̄1 close while dΩ̄2 is decisively nonzero: one Kähler form,
    /// pointing at holonomy SU(4).
    Su4,
    /// Neither pattern at the swept points.
    Inconclusive,
}

impl EvidenceLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvidenceLabel::Sp2 => "Sp(2) evidence",
            EvidenceLabel::Su4 => "SU(4) evidence",
            EvidenceLabel::Inconclusive => "inconclusive",
        }
    }
}

/// Maximum closure defect of each form over the r sweep, plus the label.
/// These are closure measurements in this coframe, not holonomy proofs.
#[derive(Debug, Clone, Copy)]
pub struct HolonomyEvidence {
    pub alpha: f64,
    pub max_dphi: f64,
    pub max_domega: [f64; 3],
    pub label: EvidenceLabel,
}

pub fn holonomy_evidence(alpha: f64) -> Result<HolonomyEvidence> {
    FamilyParams::new(alpha)?;
    let sys = OdeSystem::governing();
    let mut max_dphi = 0.0f64;
    let mut max_domega = [0.0f64; 3];
    for r in EVIDENCE_R_SWEEP {
        let s = sample(alpha, r)?;
        let rep = closure_report(s.funcs(), sys)?;
        max_dphi = max_dphi.max(rep.phi.max_abs);
        for (acc, form) in max_domega.iter_mut().zip(&rep.omega_bar) {
            *acc = acc.max(form.max_abs);
        }
    }
    let label = if max_dphi < CLOSED_TOL && max_domega.iter().all(|&m| m < CLOSED_TOL) {
        EvidenceLabel::Sp2
    } else if max_dphi < CLOSED_TOL
        && max_domega[0] < CLOSED_TOL
        && max_domega[1] >= NONCLOSED_TOL
    {
        EvidenceLabel::Su4
    } else {
        EvidenceLabel::Inconclusive
    };
    Ok(HolonomyEvidence { alpha, max_dphi, max_domega, label })
}

// ---------------------------------------------------------------------------
// Exact-arithmetic mirrors
// ---------------------------------------------------------------------------

/// Exact rational mirrors of N, F, F' and the family identities, taking α²
/// as a rational (α itself may be irrational at rational sample points).
pub mod exact {
    use crate::symexpr::{rat, rat_pow, Rational};

    pub fn n_of(alpha2: &Rational, r: &Rational) -> Rational {
        let r4 = rat_pow(r, 4);
        let a4 = alpha2 * alpha2;
        rat_pow(r, 8) - rat(2) * &a4 * (r4 - rat(1)) - rat(1)
    }

    /// F = N/(r²(r⁴−α⁴)).
    pub fn f_of(alpha2: &Rational, r: &Rational) -> Rational {
        let a4 = alpha2 * alpha2;
        n_of(alpha2, r) / (r * r * (rat_pow(r, 4) - a4))
    }

    /// F' by the quotient rule with D = r⁶ − α⁴r².
    pub fn f_prime(alpha2: &Rational, r: &Rational) -> Rational {
        let a4 = alpha2 * alpha2;
        let n = n_of(alpha2, r);
        let n_p = rat(8) * rat_pow(r, 7) - rat(8) * &a4 * rat_pow(r, 3);
        let d = rat_pow(r, 6) - &a4 * r * r;
        let d_p = rat(6) * rat_pow(r, 5) - rat(2) * &a4 * r;
        (n_p * &d - n * d_p) / (&d * &d)
    }

    /// dA1/dt = −F'/(2r), exactly.
    pub fn da1_dt(alpha2: &Rational, r: &Rational) -> Rational {
        -f_prime(alpha2, r) / (rat(2) * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{rat, rat_pow, ratio};

    #[test]
    fn f_vanishes_at_the_normalized_root_for_every_alpha() {
        for alpha in [0.0, 0.3, 0.6, 0.9, 0.99, 1.0] {
            assert_eq!(f_of_r(alpha, 1.0).unwrap(), 0.0);
        }
        assert!(f_vanishes_at_normalized_root());
    }

    #[test]
    fn f_matches_exact_rational_values() {
        // F(0, 2) = 255/64.
        assert_eq!(f_of_r(0.0, 2.0).unwrap(), 255.0 / 64.0);
        let exact = exact::f_of(&rat(0), &rat(2));
        assert_eq!(exact, ratio(255, 64));
        // F(1, r) = (r⁴−1)/r², the fully degenerate case.
        for r in [1.5f64, 2.0, 3.0] {
            let f = f_of_r(1.0, r).unwrap();
            let expect = (r.powi(4) - 1.0) / (r * r);
            assert!((f - expect).abs() < 1e-14 * expect);
        }
        assert_eq!(
            exact::f_of(&rat(1), &rat(2)),
            ratio(15, 4)
        );
    }

    #[test]
    fn f_domain_error_below_alpha() {
        assert!(matches!(f_of_r(0.5, 0.4), Err(Error::DomainError(_))));
        assert!(matches!(sample(0.5, 0.99), Err(Error::DomainError(_))));
        assert!(matches!(sample(1.5, 2.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn sample_values_and_the_collapse_flag() {
        let s = sample(0.0, 2.0).unwrap();
        assert!((s.a1 + 255.0f64.sqrt() / 8.0).abs() < 1e-15);
        assert_eq!(s.a2, -2.0);
        assert_eq!(s.a3, 2.0);
        assert_eq!(s.b, 2.0);
        assert_eq!(s.c, 2.0);
        assert!(!s.coordinate_singularity);

        let s = sample(1.0, 2.0).unwrap();
        assert!((s.b - 5.0f64.sqrt()).abs() < 1e-15);
        assert!((s.c - 3.0f64.sqrt()).abs() < 1e-15);
        assert!((s.a1 + 15.0f64.sqrt() / 2.0).abs() < 1e-14);

        let s = sample(0.5, 1.0).unwrap();
        assert!(s.coordinate_singularity);
        assert_eq!(s.a1, 0.0);
        assert!(s.t_of_r_derivative.is_infinite());
    }

    #[test]
    fn asymptotically_conical_scaling() {
        let r = 1e6;
        for alpha in [0.0, 0.7, 1.0] {
            let s = sample(alpha, r).unwrap();
            assert!((s.a1.abs() / r - 1.0).abs() < 1e-9);
            assert!((s.a2.abs() / r - 1.0).abs() < 1e-12);
            assert!((s.b / r - 1.0).abs() < 1e-9);
            assert!((s.c / r - 1.0).abs() < 1e-9);
            assert!((s.t_of_r_derivative - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn residuals_vanish_on_the_family() {
        let res = residuals(0.0, 2.0).unwrap();
        assert!(res.iter().all(|v| v.abs() < 1e-12), "{res:?}");
        let res = residuals(0.5, 1.5).unwrap();
        assert!(res.iter().all(|v| v.abs() < 1e-10), "{res:?}");
    }

    #[test]
    fn flipped_branch_fails_loudly() {
        // Wrong sign on A3 must leave an O(1) residual in some equation.
        let s = sample(0.3, 2.0).unwrap();
        let closed = family_derivatives(0.3, 2.0).unwrap();
        let mut funcs = s.funcs();
        funcs[2] = -funcs[2];
        let rhs = OdeSystem::governing().eval(funcs).unwrap();
        let max = closed
            .iter()
            .zip(rhs)
            .map(|(c, r)| (c - r).abs())
            .fold(0.0f64, f64::max);
        assert!(max >= 0.1, "flipped-branch residual only {max:e}");
    }

    #[test]
    fn alpha0_residual_identity_is_exact_in_rationals() {
        // dA1/dt = −1 − 3/r⁸ on the α = 0 family, as exact rationals.
        for r_int in [2i64, 3, 5] {
            let r = rat(r_int);
            let lhs = exact::da1_dt(&rat(0), &r);
            let expect = -rat(1) - rat(3) / rat_pow(&r, 8);
            assert_eq!(lhs, expect);
        }
    }

    #[test]
    fn f_identity_holds_and_mutations_fail() {
        assert!(verify_f_identity());
        assert!(!f_identity_residual(true).is_zero());
    }

    #[test]
    fn smoothness_limits_match_collapse_conditions() {
        for alpha in [0.0, 0.3, 0.6, 0.9, 0.99] {
            let rep = smoothness_limits(alpha).unwrap();
            assert!((rep.abs_da1_dt - 4.0).abs() < 1e-6, "α={alpha}: |dA1/dt| → {}", rep.abs_da1_dt);
            assert!(rep.db_dt.abs() < 1e-8, "α={alpha}: dB/dt → {:e}", rep.db_dt);
            assert!(rep.dc_dt.abs() < 1e-8, "α={alpha}: dC/dt → {:e}", rep.dc_dt);
            assert!(rep.a1.abs() < 1e-7, "α={alpha}: A1 → {:e}", rep.a1);
            assert!(rep.da2_minus_da3_dt.abs() < 1e-7);
            assert_eq!(rep.a2_at_1, -1.0);
            assert_eq!(rep.a3_at_1, 1.0);
        }
    }

    #[test]
    fn holonomy_evidence_labels() {
        assert_eq!(holonomy_evidence(1.0).unwrap().label, EvidenceLabel::Sp2);
        assert_eq!(holonomy_evidence(0.5).unwrap().label, EvidenceLabel::Su4);
        assert_eq!(holonomy_evidence(0.0).unwrap().label, EvidenceLabel::Su4);
        // Near the hyperkähler end the defect of dΩ̄2 shrinks below the
        // decisive threshold without reaching closure: no label fires.
        let e = holonomy_evidence(0.99).unwrap();
        assert_eq!(e.label, EvidenceLabel::Inconclusive);
        assert!(e.max_domega[1] > CLOSED_TOL && e.max_domega[1] < NONCLOSED_TOL);
    }

    #[test]
    fn radial_polynomial_positive_beyond_the_root() {
        for alpha in [0.0, 0.3, 0.6, 0.9, 0.99] {
            for k in 0..200 {
                let r = 1.001 * 1.032f64.powi(k); // up to ~r = 550
                assert!(n_of(alpha, r) > 0.0);
                assert!(f_of_r(alpha, r).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn family_members_are_coefficient_distinct() {
        // For fixed r, B grows and C shrinks strictly in α.
        let r = 1.7;
        let alphas = [0.0, 0.2, 0.4, 0.6, 0.8, 0.99];
        for w in alphas.windows(2) {
            let lo = sample(w[0], r).unwrap();
            let hi = sample(w[1], r).unwrap();
            assert!(hi.b > lo.b);
            assert!(hi.c < lo.c);
        }
    }

    #[test]
    fn signed_square_identities() {
        // B² − C² = 2α² and B² + C² = 2A2², exactly as algebra; in floating
        // point, to rounding.
        for (alpha, r) in [(0.3f64, 1.2f64), (0.9, 7.0), (0.99, 1.001)] {
            let s = sample(alpha, r).unwrap();
            let b2 = s.b * s.b;
            let c2 = s.c * s.c;
            assert!((b2 - c2 - 2.0 * alpha * alpha).abs() < 1e-13 * b2.max(1.0));
            assert!((b2 + c2 - 2.0 * s.a2 * s.a2).abs() < 1e-13 * b2.max(1.0));
            // A1²·r²(r⁴−α⁴) = N.
            let lhs = s.a1 * s.a1 * r * r * (r.powi(4) - alpha.powi(4));
            assert!((lhs - n_of(alpha, r)).abs() < 1e-12 * n_of(alpha, r).max(1.0));
        }
    }
}
