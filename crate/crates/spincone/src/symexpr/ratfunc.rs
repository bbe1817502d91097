//! Rational functions num/den over the fixed symbol universe.
//!
//! Equality is decided by cross-multiplication, which is exact and needs no
//! multivariate GCD. Normalization only strips content and common monomial
//! factors; two equal values may therefore have different representations,
//! and `==` accounts for that.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Signed;

use super::{rat, Poly, Rational, Symbol, NUM_SYMBOLS};
use crate::error::{Error, Result};

/// A rational function with polynomial numerator and nonzero denominator.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Build and normalize. Panics if `den` is the zero polynomial; the
    /// symbol universe is closed, so a vanishing denominator is a programming
    /// error rather than a data error.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut rf = RatFunc { num, den };
        rf.normalize();
        rf
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn from_symbol(s: Symbol) -> Self {
        RatFunc::from_poly(Poly::symbol(s))
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RatFunc::from_poly(Poly::int(n))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn has_derivative_symbols(&self) -> bool {
        self.num.has_derivative_symbols() || self.den.has_derivative_symbols()
    }

    /// Quotient-rule partial derivative.
    pub fn partial_derivative(&self, s: Symbol) -> RatFunc {
        let dn = self.num.partial_derivative(s);
        let dd = self.den.partial_derivative(s);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        RatFunc::new(num, den)
    }

    /// Floating-point evaluation. Denominator magnitudes below 1e-300 are
    /// treated as vanishing.
    pub fn eval_f64(&self, point: &[f64; NUM_SYMBOLS]) -> Result<f64> {
        let d = self.den.eval_f64(point);
        if d.abs() < 1e-300 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_f64(point) / d)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[Rational; NUM_SYMBOLS]) -> Result<Rational> {
        use num_traits::Zero;
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_rational(point) / d)
    }

    pub fn reciprocal(&self) -> RatFunc {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Try to rewrite the fraction with a monomial denominator.
    ///
    /// If the fully reduced form of the fraction has a monomial denominator D
    /// then D divides the current denominator Q, so Q divides num * M for
    /// M = prod(v^deg_v(Q)); exact division then recovers the reduced form up
    /// to common monomial content, which normalization strips. Returns self
    /// unchanged when the reduced denominator is not a monomial.
    pub fn reduce_monomial_den(&self) -> RatFunc {
        if self.den.num_terms() <= 1 {
            return self.clone();
        }
        let mut m = [0u8; NUM_SYMBOLS];
        for s in Symbol::ALL {
            m[s.index()] = self.den.degree_of(s);
        }
        let scaled = &self.num * &Poly::monomial(rat(1), m);
        match scaled.div_exact(&self.den) {
            Some(q) => RatFunc::new(q, Poly::monomial(rat(1), m)),
            None => self.clone(),
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        // Common monomial factor.
        let mut g = [0u8; NUM_SYMBOLS];
        let mut nontrivial = false;
        for s in Symbol::ALL {
            g[s.index()] = self.num.min_degree_of(s).min(self.den.min_degree_of(s));
            nontrivial |= g[s.index()] > 0;
        }
        if nontrivial {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        // Content: leave both parts with coprime integer coefficients, the
        // leftover p/q of the content ratio split across num and den.
        let cn = self.num.content();
        let cd = self.den.content();
        let r = &cn / &cd;
        let p = Rational::from_integer(r.numer().clone());
        let q = Rational::from_integer(r.denom().clone());
        self.num = self.num.scale(&(p / cn));
        self.den = self.den.scale(&(q / cd));
        // Positive leading coefficient on the denominator.
        if self
            .den
            .leading_term()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            self.num = -&self.num;
            self.den = -&self.den;
        }
    }
}

impl PartialEq for RatFunc {
    /// Exact equality by cross-multiplication.
    fn eq(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }
}

impl Eq for RatFunc {}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else if self.num.num_terms() <= 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
