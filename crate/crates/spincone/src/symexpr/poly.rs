//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, rat_pow, Rational, Symbol, NUM_SYMBOLS};

/// Exponent vector, one entry per symbol in index order. The derived `Ord`
/// is the lexicographic monomial order with `A1` as the highest-priority
/// symbol; it is admissible, which the exact-division routine relies on.
pub type Exponents = [u8; NUM_SYMBOLS];

/// A sparse multivariate polynomial.
///
/// Invariant: no stored zero coefficients. The `BTreeMap` keeps terms in
/// canonical monomial order, so printing is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert([0; NUM_SYMBOLS], c);
        }
        p
    }

    pub fn symbol(s: Symbol) -> Self {
        Poly::symbol_pow(s, 1)
    }

    pub fn symbol_pow(s: Symbol, e: u8) -> Self {
        let mut exps = [0u8; NUM_SYMBOLS];
        exps[s.index()] = e;
        Poly::monomial(rat(1), exps)
    }

    pub fn monomial(c: Rational, exps: Exponents) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Integer-constant convenience constructor.
    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(rat(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree (max over terms), or 0 for the zero polynomial.
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of `s` over all terms.
    pub fn degree_of(&self, s: Symbol) -> u8 {
        self.terms.keys().map(|e| e[s.index()]).max().unwrap_or(0)
    }

    /// Smallest exponent of `s` over all terms (0 for the zero polynomial).
    pub fn min_degree_of(&self, s: Symbol) -> u8 {
        self.terms.keys().map(|e| e[s.index()]).min().unwrap_or(0)
    }

    /// True if any derivative symbol occurs.
    pub fn has_derivative_symbols(&self) -> bool {
        self.terms
            .keys()
            .any(|e| Symbol::DERIVATIVES.iter().any(|s| e[s.index()] > 0))
    }

    fn insert_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn pow(&self, e: u8) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `s`.
    pub fn partial_derivative(&self, s: Symbol) -> Poly {
        let i = s.index();
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            let mut d = *exps;
            d[i] = e - 1;
            out.insert_term(d, c * rat(e as i64));
        }
        out
    }

    /// Evaluate at a point given as one double per symbol.
    pub fn eval_f64(&self, point: &[f64; NUM_SYMBOLS]) -> f64 {
        let mut acc = 0.0;
        for (exps, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v *= point[i].powi(e as i32);
                }
            }
            acc += v;
        }
        acc
    }

    /// Evaluate exactly at a rational point.
    pub fn eval_rational(&self, point: &[Rational; NUM_SYMBOLS]) -> Rational {
        let mut acc = rat(0);
        for (exps, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v *= rat_pow(&point[i], e);
                }
            }
            acc += v;
        }
        acc
    }

    /// Leading (lex-maximal) term.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Content: gcd of the numerators over lcm of the denominators, as a
    /// positive rational. Dividing by it leaves coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut g = num_bigint::BigInt::zero();
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(&c.numer().abs());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            rat(1)
        } else {
            Rational::new(g, l)
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Divide every term by the given monomial. Panics if some term has a
    /// smaller exponent; callers must strip only common monomial factors.
    pub fn div_monomial(&self, exps: &Exponents) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    let mut d = *e;
                    for i in 0..NUM_SYMBOLS {
                        assert!(d[i] >= exps[i], "monomial division with remainder");
                        d[i] -= exps[i];
                    }
                    (d, v.clone())
                })
                .collect(),
        }
    }

    /// Exact division: `Some(q)` with `self = q * d` if the division leaves
    /// no remainder, `None` otherwise. Leading-term elimination under the
    /// lex order; sound because the order is admissible.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (d_exps, d_coeff) = d.leading_term().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (r_exps, r_coeff) = rem.leading_term().expect("nonzero remainder");
            let mut q_exps = [0u8; NUM_SYMBOLS];
            for i in 0..NUM_SYMBOLS {
                if r_exps[i] < d_exps[i] {
                    return None;
                }
                q_exps[i] = r_exps[i] - d_exps[i];
            }
            let q_coeff = r_coeff / d_coeff;
            let t = Poly::monomial(q_coeff, q_exps);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for i in 0..NUM_SYMBOLS {
                    e[i] = e[i].checked_add(eb[i]).expect("exponent overflow");
                }
                out.insert_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Leading term first.
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = Symbol::ALL
                .iter()
                .filter(|s| exps[s.index()] > 0)
                .map(|s| {
                    let e = exps[s.index()];
                    if e == 1 {
                        s.name().to_string()
                    } else {
                        format!("{}^{}", s.name(), e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}
