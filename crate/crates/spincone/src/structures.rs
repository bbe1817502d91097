//! The Cayley 4-form Φ, the Kähler triple Ω̄1, Ω̄2, Ω̄3, and the first-order
//! system extracted from dΦ = 0.
//!
//! dΦ is affine in the five derivative symbols, one linear equation per
//! nonzero degree-5 component. Solving that system over the rational-function
//! field (fraction-free, Bareiss) yields the right-hand sides of the metric
//! functions' derivatives; substituting them back must annihilate dΦ exactly,
//! which `verify_annihilates_dphi` checks by cross-multiplication.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::coframe::{eta, BasisElement, Form, HorizontalSymbol, DT};
use crate::error::{Error, Result};
use crate::symexpr::{
    ratio, rewrite_ratfunc, Poly, RatFunc, RewriteRule, Symbol, NUM_SYMBOLS,
};

/// The five derivative slots of the system, in fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Deriv {
    A1,
    A2,
    A3,
    B,
    C,
}

impl Deriv {
    pub const ALL: [Deriv; 5] = [Deriv::A1, Deriv::A2, Deriv::A3, Deriv::B, Deriv::C];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The derivative symbol this slot solves for.
    pub fn symbol(self) -> Symbol {
        Symbol::DERIVATIVES[self.index()]
    }

    /// The function symbol being differentiated.
    pub fn function(self) -> Symbol {
        Symbol::FUNCTIONS[self.index()]
    }

    pub fn name(self) -> &'static str {
        self.symbol().name()
    }
}

/// Right-hand sides of the five metric-function derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSystem {
    rhs: [RatFunc; 5],
}

impl OdeSystem {
    pub fn new(rhs: [RatFunc; 5]) -> Self {
        OdeSystem { rhs }
    }

    pub fn rhs(&self, d: Deriv) -> &RatFunc {
        &self.rhs[d.index()]
    }

    pub fn rhs_all(&self) -> &[RatFunc; 5] {
        &self.rhs
    }

    /// A copy with one right-hand side replaced.
    pub fn with_rhs(&self, d: Deriv, f: RatFunc) -> OdeSystem {
        let mut rhs = self.rhs.clone();
        rhs[d.index()] = f;
        OdeSystem { rhs }
    }

    /// Evaluate all five right-hand sides at a function point (A1, A2, A3, B, C).
    pub fn eval(&self, funcs: [f64; 5]) -> Result<[f64; 5]> {
        let point = function_point(funcs);
        let mut out = [0.0; 5];
        for d in Deriv::ALL {
            out[d.index()] = self.rhs(d).eval_f64(&point)?;
        }
        Ok(out)
    }

    /// The hardcoded system governing parallelness of Φ.
    pub fn governing() -> &'static OdeSystem {
        static SYS: OnceLock<OdeSystem> = OnceLock::new();
        SYS.get_or_init(|| {
            let [a1, a2, a3, b, c] = function_ratfuncs();
            let two = RatFunc::int(2);

            // A1' = ((A2-A3)^2 - A1^2)/(A2 A3) + A1^2 (B^2+C^2)/(B^2 C^2)
            let da1 = &(&(&sq(&(&a2 - &a3)) - &sq(&a1)) / &(&a2 * &a3))
                + &(&(&sq(&a1) * &(&sq(&b) + &sq(&c))) / &(&sq(&b) * &sq(&c)));

            // A2' = (A1^2 - A2^2 + A3^2)/(A1 A3) - (B^2 + C^2 - 2 A2^2)/(B C)
            let da2 = &(&(&(&sq(&a1) - &sq(&a2)) + &sq(&a3)) / &(&a1 * &a3))
                - &(&(&(&sq(&b) + &sq(&c)) - &(&two * &sq(&a2))) / &(&b * &c));

            // A3' = (A1^2 + A2^2 - A3^2)/(A1 A2) - (B^2 + C^2 - 2 A3^2)/(B C)
            let da3 = &(&(&(&sq(&a1) + &sq(&a2)) - &sq(&a3)) / &(&a1 * &a2))
                - &(&(&(&sq(&b) + &sq(&c)) - &(&two * &sq(&a3))) / &(&b * &c));

            // B' = -(C A1 + B A2 + B A3)/(B C) - (C^2 - B^2)(A2 + A3)/(2 A2 A3 C)
            let db_first = &(-&(&(&(&c * &a1) + &(&b * &a2)) + &(&b * &a3))) / &(&b * &c);
            let db = &db_first
                - &(&(&(&sq(&c) - &sq(&b)) * &(&a2 + &a3))
                    / &(&(&two * &(&a2 * &a3)) * &c));

            // C' = -(B A1 + C A2 + C A3)/(B C) - (B^2 - C^2)(A2 + A3)/(2 A2 A3 B)
            let dc_first = &(-&(&(&(&b * &a1) + &(&c * &a2)) + &(&c * &a3))) / &(&b * &c);
            let dc = &dc_first
                - &(&(&(&sq(&b) - &sq(&c)) * &(&a2 + &a3))
                    / &(&(&two * &(&a2 * &a3)) * &b));

            OdeSystem::new([da1, da2, da3, db, dc])
        })
    }

    /// The hardcoded B = C specialization. The dC slot mirrors the dB
    /// equation so that 5-component states can be integrated directly; the
    /// B = C locus is invariant under it.
    pub fn governing_bc_equal() -> &'static OdeSystem {
        static SYS: OnceLock<OdeSystem> = OnceLock::new();
        SYS.get_or_init(|| {
            let [a1, a2, a3, b, c] = function_ratfuncs();
            let two = RatFunc::int(2);

            // A1' = 2 A1^2/B^2 + ((A2-A3)^2 - A1^2)/(A2 A3)
            let da1 = &(&(&two * &sq(&a1)) / &sq(&b))
                + &(&(&sq(&(&a2 - &a3)) - &sq(&a1)) / &(&a2 * &a3));
            // A2' = 2 A2^2/B^2 + ((A3-A1)^2 - A2^2)/(A1 A3)
            let da2 = &(&(&two * &sq(&a2)) / &sq(&b))
                + &(&(&sq(&(&a3 - &a1)) - &sq(&a2)) / &(&a1 * &a3));
            // A3' = 2 A3^2/B^2 + ((A1-A2)^2 - A3^2)/(A1 A2)
            let da3 = &(&(&two * &sq(&a3)) / &sq(&b))
                + &(&(&sq(&(&a1 - &a2)) - &sq(&a3)) / &(&a1 * &a2));
            // B' = -(A1 + A2 + A3)/B
            let db = &(-&(&(&a1 + &a2) + &a3)) / &b;
            // C' mirrors B' on the B = C locus.
            let dc = &(-&(&(&a1 + &a2) + &a3)) / &c;

            OdeSystem::new([da1, da2, da3, db, dc])
        })
    }
}

fn sq(f: &RatFunc) -> RatFunc {
    f * f
}

fn function_ratfuncs() -> [RatFunc; 5] {
    Symbol::FUNCTIONS.map(RatFunc::from_symbol)
}

/// Symbol-indexed point with the five function values filled in.
pub fn function_point(funcs: [f64; 5]) -> [f64; NUM_SYMBOLS] {
    let mut p = [0.0; NUM_SYMBOLS];
    for (i, s) in Symbol::FUNCTIONS.iter().enumerate() {
        p[s.index()] = funcs[i];
    }
    p
}

// ---------------------------------------------------------------------------
// Form construction
// ---------------------------------------------------------------------------

/// The scaled coframe 1-form e^i: e^0 = dt, e^i = A_i η_i.
fn e_form(i: usize) -> Form {
    if i == 0 {
        Form::basis(BasisElement::new(DT, HorizontalSymbol::Unit))
    } else {
        Form::basis(BasisElement::new(eta(i), HorizontalSymbol::Unit))
            .scale(&RatFunc::from_symbol(Symbol::FUNCTIONS[i - 1]))
    }
}

fn w_form(h: HorizontalSymbol) -> Form {
    Form::basis(BasisElement::new(0, h))
}

fn wedge(a: &Form, b: &Form) -> Form {
    a.wedge(b).expect("degree bounded by construction")
}

/// The Cayley 4-form of the cone structure:
///
/// Φ = e0∧e1∧e2∧e3 + B²C² vol
///   + (B²+C²)/4 (e0∧e1 − e2∧e3) ∧ ω1 + (B²−C²)/4 (e0∧e1 − e2∧e3) ∧ ω
///   + BC/2 (e0∧e2 − e3∧e1) ∧ ω2 + BC/2 (e0∧e3 − e1∧e2) ∧ ω3
pub fn build_phi() -> Form {
    let e0 = e_form(0);
    let e1 = e_form(1);
    let e2 = e_form(2);
    let e3 = e_form(3);

    let b = RatFunc::from_symbol(Symbol::B);
    let c = RatFunc::from_symbol(Symbol::C);
    let b2_plus_c2 = &(&b * &b) + &(&c * &c);
    let b2_minus_c2 = &(&b * &b) - &(&c * &c);
    let bc = &b * &c;
    let quarter = RatFunc::constant(ratio(1, 4));
    let half = RatFunc::constant(ratio(1, 2));

    let e01_m_e23 = wedge(&e0, &e1).sub(&wedge(&e2, &e3));
    let e02_m_e31 = wedge(&e0, &e2).sub(&wedge(&e3, &e1));
    let e03_m_e12 = wedge(&e0, &e3).sub(&wedge(&e1, &e2));

    let mut phi = wedge(&wedge(&e0, &e1), &wedge(&e2, &e3));
    phi = phi.add(&w_form(HorizontalSymbol::Vol).scale(&(&(&b * &b) * &(&c * &c))));
    phi = phi.add(
        &wedge(&e01_m_e23, &w_form(HorizontalSymbol::W1)).scale(&(&b2_plus_c2 * &quarter)),
    );
    phi = phi.add(
        &wedge(&e01_m_e23, &w_form(HorizontalSymbol::W)).scale(&(&b2_minus_c2 * &quarter)),
    );
    phi = phi.add(&wedge(&e02_m_e31, &w_form(HorizontalSymbol::W2)).scale(&(&bc * &half)));
    phi = phi.add(&wedge(&e03_m_e12, &w_form(HorizontalSymbol::W3)).scale(&(&bc * &half)));
    phi
}

/// The Kähler 2-forms compatible with the metric:
///
/// Ω̄1 = −e0∧e1 + e2∧e3 + (B²+C²)/4 ω1 + (B²−C²)/4 ω
/// Ω̄2 =  e0∧e2 + e1∧e3 − BC/2 ω2
/// Ω̄3 = −e0∧e3 + e1∧e2 − BC/2 ω3
///
/// Ω̄1's horizontal part is e4∧e5 − e6∧e7 expressed through ω1 and ω, the
/// only representation available in this subalgebra.
pub fn build_omega_bar(k: usize) -> Form {
    let e0 = e_form(0);
    let e1 = e_form(1);
    let e2 = e_form(2);
    let e3 = e_form(3);
    let b = RatFunc::from_symbol(Symbol::B);
    let c = RatFunc::from_symbol(Symbol::C);
    let minus_half_bc = &(&b * &c) * &RatFunc::constant(ratio(-1, 2));

    match k {
        1 => {
            let b2_plus_c2 = &(&b * &b) + &(&c * &c);
            let b2_minus_c2 = &(&b * &b) - &(&c * &c);
            let quarter = RatFunc::constant(ratio(1, 4));
            wedge(&e0, &e1)
                .scale(&RatFunc::int(-1))
                .add(&wedge(&e2, &e3))
                .add(&w_form(HorizontalSymbol::W1).scale(&(&b2_plus_c2 * &quarter)))
                .add(&w_form(HorizontalSymbol::W).scale(&(&b2_minus_c2 * &quarter)))
        }
        2 => wedge(&e0, &e2)
            .add(&wedge(&e1, &e3))
            .add(&w_form(HorizontalSymbol::W2).scale(&minus_half_bc)),
        3 => wedge(&e0, &e3)
            .scale(&RatFunc::int(-1))
            .add(&wedge(&e1, &e2))
            .add(&w_form(HorizontalSymbol::W3).scale(&minus_half_bc)),
        _ => panic!("omega bar index {k} out of range"),
    }
}

/// dΦ, computed once.
pub fn dphi() -> &'static Form {
    static DPHI: OnceLock<Form> = OnceLock::new();
    DPHI.get_or_init(|| build_phi().ext_d().expect("phi coefficients are derivative-free"))
}

/// dΩ̄k, computed once.
pub fn domega_bar(k: usize) -> &'static Form {
    static D: [OnceLock<Form>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    D[k - 1].get_or_init(|| {
        build_omega_bar(k)
            .ext_d()
            .expect("omega bar coefficients are derivative-free")
    })
}

// ---------------------------------------------------------------------------
// Linear extraction of the system
// ---------------------------------------------------------------------------

/// dΦ coefficients are polynomials over Q; normalization may leave a
/// constant denominator, which this folds back into the numerator.
fn as_polynomial(f: &RatFunc) -> Poly {
    let c = f
        .den()
        .as_constant()
        .expect("structure-equation coefficients are polynomial");
    f.num().scale(&c.recip())
}

/// Split a polynomial affine in the derivative symbols into per-derivative
/// coefficients and a derivative-free part.
fn decompose_affine(p: &Poly) -> Result<([Poly; 5], Poly)> {
    let mut coeffs: [Poly; 5] = std::array::from_fn(|_| Poly::zero());
    let mut constant = Poly::zero();
    for (exps, c) in p.terms() {
        let dtotal: u32 = Symbol::DERIVATIVES
            .iter()
            .map(|s| exps[s.index()] as u32)
            .sum();
        match dtotal {
            0 => constant = &constant + &Poly::monomial(c.clone(), *exps),
            1 => {
                let d = Deriv::ALL
                    .into_iter()
                    .find(|d| exps[d.symbol().index()] == 1)
                    .expect("one derivative symbol");
                let mut stripped = *exps;
                stripped[d.symbol().index()] = 0;
                coeffs[d.index()] =
                    &coeffs[d.index()] + &Poly::monomial(c.clone(), stripped);
            }
            _ => {
                return Err(Error::SingularSystem(
                    "component nonlinear in the derivative symbols".into(),
                ))
            }
        }
    }
    Ok((coeffs, constant))
}

/// Fraction-free (Bareiss) elimination on an augmented polynomial matrix,
/// followed by back-substitution over the rational-function field.
fn bareiss_solve(mut m: Vec<[Poly; 6]>) -> Result<[RatFunc; 5]> {
    let n = 5;
    if m.len() < n {
        return Err(Error::SingularSystem(format!(
            "only {} equations for {} unknowns",
            m.len(),
            n
        )));
    }
    let mut prev = Poly::one();
    for col in 0..n {
        let pivot = (col..m.len())
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {col}")))?;
        m.swap(col, pivot);
        for r in col + 1..m.len() {
            for c2 in col + 1..=n {
                let t = &(&m[col][col] * &m[r][c2]) - &(&m[r][col] * &m[col][c2]);
                m[r][c2] = t
                    .div_exact(&prev)
                    .expect("Bareiss divisibility by the previous pivot");
            }
            m[r][col] = Poly::zero();
        }
        prev = m[col][col].clone();
    }
    // Extra rows must have been eliminated to zero = zero.
    for row in m.iter().skip(n) {
        if row.iter().any(|p| !p.is_zero()) {
            return Err(Error::SingularSystem("overdetermined and inconsistent".into()));
        }
    }
    let mut xs: [RatFunc; 5] = std::array::from_fn(|_| RatFunc::zero());
    for i in (0..n).rev() {
        let mut acc = RatFunc::from_poly(m[i][n].clone());
        for j in i + 1..n {
            acc = &acc - &(&RatFunc::from_poly(m[i][j].clone()) * &xs[j]);
        }
        xs[i] = &acc / &RatFunc::from_poly(m[i][i].clone());
    }
    Ok(xs)
}

/// Derive the governing system from dΦ = 0.
///
/// Collects every nonzero degree-5 component of dΦ, reads each as a linear
/// equation in the derivative symbols, and solves. The solution is
/// canonicalized to monomial denominators where possible.
pub fn derive_ode() -> Result<OdeSystem> {
    let mut rows = Vec::new();
    for (_, coeff) in dphi().components() {
        let (coeffs, constant) = decompose_affine(&as_polynomial(coeff))?;
        let mut row: [Poly; 6] = std::array::from_fn(|_| Poly::zero());
        let mut nontrivial = false;
        for (i, c) in coeffs.into_iter().enumerate() {
            nontrivial |= !c.is_zero();
            row[i] = c;
        }
        row[5] = -&constant;
        if nontrivial || !row[5].is_zero() {
            rows.push(row);
        }
    }
    let xs = bareiss_solve(rows)?;
    Ok(OdeSystem::new(xs.map(|f| f.reduce_monomial_den())))
}

/// Check that substituting the system's right-hand sides for the derivative
/// symbols annihilates every component of dΦ, exactly.
pub fn verify_annihilates_dphi(sys: &OdeSystem) -> bool {
    for (_, coeff) in dphi().components() {
        let (coeffs, constant) = match decompose_affine(&as_polynomial(coeff)) {
            Ok(x) => x,
            Err(_) => return false,
        };
        let mut acc = RatFunc::from_poly(constant);
        for d in Deriv::ALL {
            acc = &acc + &(&RatFunc::from_poly(coeffs[d.index()].clone()) * sys.rhs(d));
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Ansatz reduction A2 = -A3, B² = A2² + α², C² = A2² − α²
// ---------------------------------------------------------------------------

/// The bare substitution A3 → −A2.
pub fn ansatz_rule_a3() -> Vec<RewriteRule> {
    vec![RewriteRule::bare(Symbol::A3, -&Poly::symbol(Symbol::A2))]
}

/// The full rule set of the ansatz.
pub fn ansatz_rules() -> Vec<RewriteRule> {
    let a2sq = Poly::symbol_pow(Symbol::A2, 2);
    let al2 = Poly::symbol_pow(Symbol::Alpha, 2);
    vec![
        RewriteRule::bare(Symbol::A3, -&Poly::symbol(Symbol::A2)),
        RewriteRule::even(Symbol::B, &a2sq + &al2),
        RewriteRule::even(Symbol::C, &a2sq - &al2),
    ]
}

/// The exactly verified pieces of the ansatz reduction.
#[derive(Debug, Clone)]
pub struct AnsatzReduction {
    /// rhs(dA2) + rhs(dA3) under A3 → −A2; equals −2(B²+C²−2A2²)/(BC), so the
    /// ansatz forces B² + C² = 2 A2².
    pub constraint_source: RatFunc,
    /// rhs(dA1) under the full rule set: −4 + A1²/A2² + 2A1²A2²/(A2⁴−α⁴).
    pub reduced_a1: RatFunc,
    /// 2 A2 · rhs(dA2) under the full rule set: −2 A1, i.e. (A2²)' = −2 A1.
    pub reduced_a2_sq: RatFunc,
}

/// Verify the ansatz reduction of the system, exactly.
///
/// (i) rhs(dA2) + rhs(dA3) rewrites under A3 → −A2 to −2(B²+C²−2A2²)/(BC);
/// (ii) 2B·rhs(dB) − 2C·rhs(dC) rewrites under A3 → −A2 to zero, so
/// (B²−C²)' vanishes on the ansatz;
/// (iii) under the full rules, rhs(dA1) = −4 + A1²/A2² + 2A1²A2²/(A2⁴−α⁴)
/// and 2A2·rhs(dA2) = −2A1.
pub fn reduce_ansatz(sys: &OdeSystem) -> Result<AnsatzReduction> {
    let fail = |context: &str, residual: &RatFunc| Error::ReductionFailure {
        context: context.into(),
        residual: residual.to_string(),
    };

    // (i)
    let sum = sys.rhs(Deriv::A2) + sys.rhs(Deriv::A3);
    let constraint_source = rewrite_ratfunc(&sum, &ansatz_rule_a3())?;
    let b = RatFunc::from_symbol(Symbol::B);
    let c = RatFunc::from_symbol(Symbol::C);
    let a2 = RatFunc::from_symbol(Symbol::A2);
    let target_i = &RatFunc::int(-2)
        * &(&(&(&sq(&b) + &sq(&c)) - &(&RatFunc::int(2) * &sq(&a2))) / &(&b * &c));
    if constraint_source != target_i {
        let residual = &constraint_source - &target_i;
        return Err(fail("rhs(dA2) + rhs(dA3) under A3 -> -A2", &residual));
    }

    // (ii)
    let even = &(&(&RatFunc::int(2) * &b) * sys.rhs(Deriv::B))
        - &(&(&RatFunc::int(2) * &c) * sys.rhs(Deriv::C));
    let even_reduced = rewrite_ratfunc(&even, &ansatz_rule_a3())?;
    if !even_reduced.is_zero() {
        return Err(fail("(B² − C²)' under A3 -> -A2", &even_reduced));
    }

    // (iii)
    let rules = ansatz_rules();
    let reduced_a1 = rewrite_ratfunc(sys.rhs(Deriv::A1), &rules)?;
    let a1 = RatFunc::from_symbol(Symbol::A1);
    let alpha4 = RatFunc::from_poly(Poly::symbol_pow(Symbol::Alpha, 4));
    let a2_4 = RatFunc::from_poly(Poly::symbol_pow(Symbol::A2, 4));
    let target_a1 = &(&RatFunc::int(-4) + &(&sq(&a1) / &sq(&a2)))
        + &(&(&RatFunc::int(2) * &(&sq(&a1) * &sq(&a2))) / &(&a2_4 - &alpha4));
    if reduced_a1 != target_a1 {
        let residual = &reduced_a1 - &target_a1;
        return Err(fail("reduced A1 equation", &residual));
    }

    let reduced_a2_sq = rewrite_ratfunc(
        &(&(&RatFunc::int(2) * &a2) * sys.rhs(Deriv::A2)),
        &rules,
    )?;
    let target_a2 = &RatFunc::int(-2) * &a1;
    if reduced_a2_sq != target_a2 {
        let residual = &reduced_a2_sq - &target_a2;
        return Err(fail("reduced (A2²)' equation", &residual));
    }

    Ok(AnsatzReduction { constraint_source, reduced_a1, reduced_a2_sq })
}

// ---------------------------------------------------------------------------
// Numeric closure evidence
// ---------------------------------------------------------------------------

/// Numeric size of one form's exterior derivative at a point.
#[derive(Debug, Clone)]
pub struct FormClosure {
    pub max_abs: f64,
    pub components: BTreeMap<BasisElement, f64>,
}

/// Closure evidence for Φ and the Kähler triple at one evaluation point.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub phi: FormClosure,
    pub omega_bar: [FormClosure; 3],
}

impl ClosureReport {
    pub fn omega(&self, k: usize) -> &FormClosure {
        &self.omega_bar[k - 1]
    }
}

fn eval_closure(form: &Form, point: &[f64; NUM_SYMBOLS]) -> Result<FormClosure> {
    let components = form.eval_f64(point)?;
    let max_abs = components.values().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(FormClosure { max_abs, components })
}

/// Evaluate dΦ and dΩ̄k at the point (A1, A2, A3, B, C), substituting the
/// system's right-hand sides for the derivative symbols numerically.
pub fn closure_report(funcs: [f64; 5], sys: &OdeSystem) -> Result<ClosureReport> {
    let derivs = sys.eval(funcs)?;
    let mut point = function_point(funcs);
    for d in Deriv::ALL {
        point[d.symbol().index()] = derivs[d.index()];
    }
    Ok(ClosureReport {
        phi: eval_closure(dphi(), &point)?,
        omega_bar: [
            eval_closure(domega_bar(1), &point)?,
            eval_closure(domega_bar(2), &point)?,
            eval_closure(domega_bar(3), &point)?,
        ],
    })
}
