//! Exact arithmetic substrate: arbitrary-precision rationals, sparse
//! multivariate polynomials over a fixed 13-symbol universe, rational
//! functions, and rewrite-rule substitution.
//!
//! The symbol set is closed by design: the five metric functions, their five
//! derivative symbols, and the three family parameters are everything the
//! structure equations ever produce. No dynamic symbols exist.

mod poly;
mod ratfunc;
mod rewrite;

pub use poly::{Exponents, Poly};
pub use ratfunc::RatFunc;
pub use rewrite::{rewrite_poly, rewrite_ratfunc, RewriteRule};

use num_bigint::BigInt;

/// Arbitrary-precision rational. The representation is always reduced and
/// the denominator always positive.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponentiation with a small non-negative exponent.
pub fn rat_pow(base: &Rational, exp: u8) -> Rational {
    let mut acc = rat(1);
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// The closed indeterminate universe.
///
/// `A1..C` are the metric functions, `DA1..DC` their first-derivative
/// symbols produced by the chain rule in the exterior derivative, and
/// `Alpha`, `Beta`, `Rho` the parameters of the closed-form family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A1,
    A2,
    A3,
    B,
    C,
    DA1,
    DA2,
    DA3,
    DB,
    DC,
    Alpha,
    Beta,
    Rho,
}

/// Number of symbols in the fixed universe.
pub const NUM_SYMBOLS: usize = 13;

impl Symbol {
    /// All symbols, in index order.
    pub const ALL: [Symbol; NUM_SYMBOLS] = [
        Symbol::A1,
        Symbol::A2,
        Symbol::A3,
        Symbol::B,
        Symbol::C,
        Symbol::DA1,
        Symbol::DA2,
        Symbol::DA3,
        Symbol::DB,
        Symbol::DC,
        Symbol::Alpha,
        Symbol::Beta,
        Symbol::Rho,
    ];

    /// The five function symbols, in index order.
    pub const FUNCTIONS: [Symbol; 5] = [Symbol::A1, Symbol::A2, Symbol::A3, Symbol::B, Symbol::C];

    /// The five derivative symbols, in index order.
    pub const DERIVATIVES: [Symbol; 5] =
        [Symbol::DA1, Symbol::DA2, Symbol::DA3, Symbol::DB, Symbol::DC];

    /// Position in the exponent vector.
    pub fn index(self) -> usize {
        self as usize
    }

    /// The derivative symbol paired with a function symbol, if any.
    pub fn derivative(self) -> Option<Symbol> {
        match self {
            Symbol::A1 => Some(Symbol::DA1),
            Symbol::A2 => Some(Symbol::DA2),
            Symbol::A3 => Some(Symbol::DA3),
            Symbol::B => Some(Symbol::DB),
            Symbol::C => Some(Symbol::DC),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::A1 => "A1",
            Symbol::A2 => "A2",
            Symbol::A3 => "A3",
            Symbol::B => "B",
            Symbol::C => "C",
            Symbol::DA1 => "dA1",
            Symbol::DA2 => "dA2",
            Symbol::DA3 => "dA3",
            Symbol::DB => "dB",
            Symbol::DC => "dC",
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::Rho => "rho",
        }
    }
}

impl std::fmt::Display for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
