//! The graded exterior algebra of the cone coframe.
//!
//! Vertical generators are dt, η1, η2, η3. The horizontal directions η4..η7
//! never appear individually: every form in play lives in the closed
//! subalgebra spanned by the unit, the three characteristic 2-forms ω1, ω2,
//! ω3, the Kähler form ω of the base, and the horizontal volume vol. That
//! gives 16 vertical masks x 6 horizontal symbols = 96 basis elements.
//!
//! Structure equations:
//!   d(dt)  = 0
//!   d(ηi)  = ωi - 2 η(i+1) ∧ η(i+2)        (cyclic)
//!   d(ωi)  = 2 ω(i+1) ∧ η(i+2) - 2 η(i+1) ∧ ω(i+2)
//!   d(ω)   = 0                              (the base is Kähler)
//!   d(vol) = 0
//!
//! Within coefficients, the exterior derivative applies the chain rule once:
//! each function symbol X contributes (∂c/∂X) dX · dt ∧ β.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symexpr::{rat, RatFunc, Rational, Symbol, NUM_SYMBOLS};

/// Bit of the vertical generator dt in a vertical mask.
pub const DT: u8 = 1 << 0;
/// Bit of η1.
pub const ETA1: u8 = 1 << 1;
/// Bit of η2.
pub const ETA2: u8 = 1 << 2;
/// Bit of η3.
pub const ETA3: u8 = 1 << 3;

/// Bit of ηi for i in 1..=3.
pub fn eta(i: usize) -> u8 {
    match i {
        1 => ETA1,
        2 => ETA2,
        3 => ETA3,
        _ => panic!("eta index {i} out of range"),
    }
}

/// Abstract horizontal symbols, closed under wedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HorizontalSymbol {
    Unit,
    W1,
    W2,
    W3,
    W,
    Vol,
}

impl HorizontalSymbol {
    pub const ALL: [HorizontalSymbol; 6] = [
        HorizontalSymbol::Unit,
        HorizontalSymbol::W1,
        HorizontalSymbol::W2,
        HorizontalSymbol::W3,
        HorizontalSymbol::W,
        HorizontalSymbol::Vol,
    ];

    pub fn degree(self) -> usize {
        match self {
            HorizontalSymbol::Unit => 0,
            HorizontalSymbol::Vol => 4,
            _ => 2,
        }
    }

    /// Hardcoded multiplication table. `None` means the product vanishes.
    ///
    /// unit·X = X; ωi·ωj = -8 vol if i = j else 0; ω·ω = +8 vol; ωi·ω = 0;
    /// any product of degree > 4 is 0.
    pub fn product(self, other: HorizontalSymbol) -> Option<(i64, HorizontalSymbol)> {
        use HorizontalSymbol::*;
        match (self, other) {
            (Unit, x) | (x, Unit) => Some((1, x)),
            (W1, W1) | (W2, W2) | (W3, W3) => Some((-8, Vol)),
            (W, W) => Some((8, Vol)),
            (W1, W2) | (W2, W1) | (W1, W3) | (W3, W1) | (W2, W3) | (W3, W2) => None,
            (W, W1) | (W1, W) | (W, W2) | (W2, W) | (W, W3) | (W3, W) => None,
            (Vol, _) | (_, Vol) => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            HorizontalSymbol::Unit => "1",
            HorizontalSymbol::W1 => "w1",
            HorizontalSymbol::W2 => "w2",
            HorizontalSymbol::W3 => "w3",
            HorizontalSymbol::W => "w",
            HorizontalSymbol::Vol => "vol",
        }
    }

    fn w(i: usize) -> HorizontalSymbol {
        match i {
            1 => HorizontalSymbol::W1,
            2 => HorizontalSymbol::W2,
            3 => HorizontalSymbol::W3,
            _ => panic!("omega index {i} out of range"),
        }
    }
}

/// One basis element: a vertical mask wedged with a horizontal symbol.
/// Vertical generators are ordered dt < η1 < η2 < η3; the horizontal symbol
/// sits last and, being of even degree, carries no sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub vertical: u8,
    pub horizontal: HorizontalSymbol,
}

impl BasisElement {
    pub fn new(vertical: u8, horizontal: HorizontalSymbol) -> Self {
        debug_assert!(vertical < 16);
        BasisElement { vertical, horizontal }
    }

    pub fn degree(&self) -> usize {
        self.vertical.count_ones() as usize + self.horizontal.degree()
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<&str> = Vec::new();
        if self.vertical & DT != 0 {
            parts.push("dt");
        }
        if self.vertical & ETA1 != 0 {
            parts.push("e1");
        }
        if self.vertical & ETA2 != 0 {
            parts.push("e2");
        }
        if self.vertical & ETA3 != 0 {
            parts.push("e3");
        }
        if self.horizontal != HorizontalSymbol::Unit || parts.is_empty() {
            parts.push(self.horizontal.label());
        }
        parts.join("^")
    }
}

/// Sign and mask of the wedge of two vertical masks. `None` if a generator
/// repeats. The sign counts the transpositions needed to interleave the two
/// ascending sequences.
pub fn vertical_wedge(a: u8, b: u8) -> Option<(i64, u8)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for i in 0..4 {
        if b & (1 << i) != 0 {
            inversions += (a >> (i + 1)).count_ones();
        }
    }
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((sign, a | b))
}

fn basis_wedge(a: &BasisElement, b: &BasisElement) -> Option<(Rational, BasisElement)> {
    let (vsign, v) = vertical_wedge(a.vertical, b.vertical)?;
    let (hcoeff, h) = a.horizontal.product(b.horizontal)?;
    Some((rat(vsign * hcoeff), BasisElement::new(v, h)))
}

/// A homogeneous element of the coframe algebra: finitely many basis
/// elements with rational-function coefficients. Zero coefficients are
/// never stored, so the zero form is the empty map.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    coeffs: BTreeMap<BasisElement, RatFunc>,
}

impl Form {
    pub fn zero() -> Self {
        Form { coeffs: BTreeMap::new() }
    }

    pub fn from_component(be: BasisElement, coeff: RatFunc) -> Self {
        let mut f = Form::zero();
        f.add_term(be, coeff);
        f
    }

    /// A single basis element with coefficient one.
    pub fn basis(be: BasisElement) -> Self {
        Form::from_component(be, RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the (homogeneous) form; `None` for the zero form.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next().map(|be| be.degree())
    }

    pub fn components(&self) -> impl Iterator<Item = (&BasisElement, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn num_components(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, be: &BasisElement) -> Option<&RatFunc> {
        self.coeffs.get(be)
    }

    pub fn add_term(&mut self, be: BasisElement, coeff: RatFunc) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(
            self.coeffs.keys().next().is_none_or(|k| k.degree() == be.degree()),
            "inhomogeneous form"
        );
        match self.coeffs.entry(be) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (be, c) in &other.coeffs {
            out.add_term(*be, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (be, c) in &other.coeffs {
            out.add_term(*be, -c);
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Form {
        let mut out = Form::zero();
        for (be, v) in &self.coeffs {
            out.add_term(*be, v * c);
        }
        out
    }

    /// Wedge product. Bilinear; the sign comes entirely from interleaving
    /// the vertical generators.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        let (da, db) = match (self.degree(), other.degree()) {
            (Some(da), Some(db)) => (da, db),
            _ => return Ok(Form::zero()),
        };
        if da + db > 8 {
            return Err(Error::DegreeOverflow { lhs: da, rhs: db });
        }
        let mut out = Form::zero();
        for (ba, ca) in &self.coeffs {
            for (bb, cb) in &other.coeffs {
                if let Some((sign, be)) = basis_wedge(ba, bb) {
                    out.add_term(be, &(ca * cb) * &RatFunc::constant(sign));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    ///
    /// Coefficients must be free of derivative symbols: d is applied once,
    /// and the chain rule maps each function symbol X to its derivative
    /// symbol dX on the dt-component.
    pub fn ext_d(&self) -> Result<Form> {
        let mut out = Form::zero();
        for (be, coeff) in &self.coeffs {
            if coeff.has_derivative_symbols() {
                return Err(Error::DerivativeSymbolPresent);
            }
            // Chain rule: Σ_X (∂c/∂X) dX · dt ∧ β, which dies if dt ∈ β.
            if be.vertical & DT == 0 {
                let target = BasisElement::new(be.vertical | DT, be.horizontal);
                for x in Symbol::FUNCTIONS {
                    let dc = coeff.partial_derivative(x);
                    if dc.is_zero() {
                        continue;
                    }
                    let dx = x.derivative().expect("function symbol");
                    out.add_term(target, &dc * &RatFunc::from_symbol(dx));
                }
            }
            // Structure part: c · dβ.
            let db = d_basis(be)?;
            for (b, c) in &db.coeffs {
                out.add_term(*b, coeff * c);
            }
        }
        Ok(out)
    }

    /// Componentwise floating-point evaluation.
    pub fn eval_f64(&self, point: &[f64; NUM_SYMBOLS]) -> Result<BTreeMap<BasisElement, f64>> {
        let mut out = BTreeMap::new();
        for (be, c) in &self.coeffs {
            out.insert(*be, c.eval_f64(point)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (be, c) in &self.coeffs {
            if !first {
                f.write_str("  +  ")?;
            }
            first = false;
            write!(f, "({}) {}", c, be.label())?;
        }
        Ok(())
    }
}

/// dηi as a form: ωi - 2 η(i+1) ∧ η(i+2), indices cyclic in {1,2,3}.
pub fn d_eta(i: usize) -> Form {
    let j = i % 3 + 1;
    let k = j % 3 + 1;
    let mut f = Form::basis(BasisElement::new(0, HorizontalSymbol::w(i)));
    let (sign, mask) = vertical_wedge(eta(j), eta(k)).expect("distinct generators");
    f.add_term(
        BasisElement::new(mask, HorizontalSymbol::Unit),
        RatFunc::constant(rat(-2 * sign)),
    );
    f
}

/// dωi as a form: 2 ω(i+1) ∧ η(i+2) - 2 η(i+1) ∧ ω(i+2).
pub fn d_omega(i: usize) -> Form {
    let j = i % 3 + 1;
    let k = j % 3 + 1;
    let mut f = Form::zero();
    f.add_term(
        BasisElement::new(eta(k), HorizontalSymbol::w(j)),
        RatFunc::int(2),
    );
    f.add_term(
        BasisElement::new(eta(j), HorizontalSymbol::w(k)),
        RatFunc::int(-2),
    );
    f
}

/// d of a single basis element, from the structure equations alone.
fn d_basis(be: &BasisElement) -> Result<Form> {
    let mut out = Form::zero();

    // d over the vertical factors: Σ (−1)^pos (V \ ηi) ∧ dηi. The 2-form dηi
    // moves to the back of the word for free.
    let mut pos = 0u32;
    for bit in 0..4u8 {
        let mask = 1 << bit;
        if be.vertical & mask == 0 {
            continue;
        }
        if mask != DT {
            let rest = Form::from_component(
                BasisElement::new(be.vertical & !mask, be.horizontal),
                RatFunc::constant(rat(if pos.is_multiple_of(2) { 1 } else { -1 })),
            );
            out = out.add(&rest.wedge(&d_eta(bit as usize))?);
        }
        pos += 1;
    }

    // d over the horizontal symbol: (−1)^{|V|} V ∧ dh. Only the ωi move.
    let dh = match be.horizontal {
        HorizontalSymbol::W1 => Some(d_omega(1)),
        HorizontalSymbol::W2 => Some(d_omega(2)),
        HorizontalSymbol::W3 => Some(d_omega(3)),
        _ => None,
    };
    if let Some(dh) = dh {
        let v = Form::from_component(
            BasisElement::new(be.vertical, HorizontalSymbol::Unit),
            RatFunc::constant(rat(if be.vertical.count_ones().is_multiple_of(2) { 1 } else { -1 })),
        );
        out = out.add(&v.wedge(&dh)?);
    }
    Ok(out)
}

/// The brute-force oracle over the raw η4..η7 exterior algebra.
///
/// Expands ω1, ω2, ω3, ω in the four-generator algebra and multiplies out
/// all pairs, giving the table that `HorizontalSymbol::product` hardcodes.
pub mod etaspace {
    use super::HorizontalSymbol;
    use std::collections::BTreeMap;

    /// An integer-coefficient element of Λ(η4..η7); keys are 4-bit masks.
    pub type RawElement = BTreeMap<u8, i64>;

    fn raw_wedge_masks(a: u8, b: u8) -> Option<(i64, u8)> {
        if a & b != 0 {
            return None;
        }
        let mut inv = 0u32;
        for i in 0..4 {
            if b & (1 << i) != 0 {
                inv += (a >> (i + 1)).count_ones();
            }
        }
        Some((if inv.is_multiple_of(2) { 1 } else { -1 }, a | b))
    }

    pub fn raw_wedge(a: &RawElement, b: &RawElement) -> RawElement {
        let mut out = RawElement::new();
        for (&ma, &ca) in a {
            for (&mb, &cb) in b {
                if let Some((s, m)) = raw_wedge_masks(ma, mb) {
                    let e = out.entry(m).or_insert(0);
                    *e += s * ca * cb;
                    if *e == 0 {
                        out.remove(&m);
                    }
                }
            }
        }
        out
    }

    /// Expansion of a horizontal symbol over η4..η7 (η4 = bit 0, .., η7 = bit 3).
    pub fn expansion(h: HorizontalSymbol) -> RawElement {
        let mut e = RawElement::new();
        match h {
            HorizontalSymbol::Unit => {
                e.insert(0b0000, 1);
            }
            // ω1 = 2(η4∧η5 − η6∧η7)
            HorizontalSymbol::W1 => {
                e.insert(0b0011, 2);
                e.insert(0b1100, -2);
            }
            // ω2 = 2(η4∧η6 − η7∧η5) = 2(η4∧η6 + η5∧η7)
            HorizontalSymbol::W2 => {
                e.insert(0b0101, 2);
                e.insert(0b1010, 2);
            }
            // ω3 = 2(η4∧η7 − η5∧η6)
            HorizontalSymbol::W3 => {
                e.insert(0b1001, 2);
                e.insert(0b0110, -2);
            }
            // ω = 2(η4∧η5 + η6∧η7)
            HorizontalSymbol::W => {
                e.insert(0b0011, 2);
                e.insert(0b1100, 2);
            }
            HorizontalSymbol::Vol => {
                e.insert(0b1111, 1);
            }
        }
        e
    }

    /// Identify a raw element as an integer multiple of one symbol expansion.
    pub fn identify(r: &RawElement) -> Option<(i64, HorizontalSymbol)> {
        if r.is_empty() {
            return None;
        }
        for h in HorizontalSymbol::ALL {
            let exp = expansion(h);
            let (&mask, &lead) = exp.iter().next().expect("nonempty expansion");
            if let Some(&c) = r.get(&mask) {
                if c % lead == 0 {
                    let k = c / lead;
                    let scaled: RawElement =
                        exp.iter().map(|(&m, &v)| (m, v * k)).collect();
                    if &scaled == r {
                        return Some((k, h));
                    }
                }
            }
        }
        panic!("raw element is not a multiple of a single horizontal symbol: {r:?}");
    }

    /// The 5x5 product table over {unit, ω1, ω2, ω3, ω}, by brute force.
    pub fn oracle_table() -> [[Option<(i64, HorizontalSymbol)>; 5]; 5] {
        const SYMS: [HorizontalSymbol; 5] = [
            HorizontalSymbol::Unit,
            HorizontalSymbol::W1,
            HorizontalSymbol::W2,
            HorizontalSymbol::W3,
            HorizontalSymbol::W,
        ];
        let mut table = [[None; 5]; 5];
        for (i, &a) in SYMS.iter().enumerate() {
            for (j, &b) in SYMS.iter().enumerate() {
                let prod = raw_wedge(&expansion(a), &expansion(b));
                table[i][j] = identify(&prod);
            }
        }
        table
    }

    /// Compare the hardcoded table against the oracle on all 25 entries.
    pub fn table_matches_hardcoded() -> bool {
        const SYMS: [HorizontalSymbol; 5] = [
            HorizontalSymbol::Unit,
            HorizontalSymbol::W1,
            HorizontalSymbol::W2,
            HorizontalSymbol::W3,
            HorizontalSymbol::W,
        ];
        let oracle = oracle_table();
        for (i, &a) in SYMS.iter().enumerate() {
            for (j, &b) in SYMS.iter().enumerate() {
                if oracle[i][j] != a.product(b) {
                    return false;
                }
            }
        }
        true
    }
}
