//! Substitution by rewrite rules of the form `s -> p` or `s^2 -> p`.
//!
//! Even-power rules reduce `s^(2q+r)` to `p^q * s^r`, so after rewriting the
//! target symbol survives only in first power. Rules are applied to numerator
//! and denominator until a fixpoint, with a degree bound guarding against
//! cyclic rule sets.

use super::{Poly, RatFunc, Symbol, NUM_SYMBOLS};
use crate::error::{Error, Result};

/// One substitution rule: a bare symbol or an even power of it, replaced by
/// a polynomial.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub symbol: Symbol,
    /// 1 for a bare-symbol rule, 2 for an even-power rule.
    pub power: u8,
    pub replacement: Poly,
}

impl RewriteRule {
    pub fn bare(symbol: Symbol, replacement: Poly) -> Self {
        RewriteRule { symbol, power: 1, replacement }
    }

    pub fn even(symbol: Symbol, replacement: Poly) -> Self {
        RewriteRule { symbol, power: 2, replacement }
    }

    /// A term is reducible when the symbol's exponent reaches the pattern power.
    fn applies(&self, exps: &[u8; NUM_SYMBOLS]) -> bool {
        exps[self.symbol.index()] >= self.power
    }
}

const DEGREE_BOUND: usize = 64;

fn apply_rule(p: &Poly, rule: &RewriteRule) -> Poly {
    let idx = rule.symbol.index();
    let mut out = Poly::zero();
    for (exps, coeff) in p.terms() {
        let e = exps[idx];
        if e < rule.power {
            out = &out + &Poly::monomial(coeff.clone(), *exps);
            continue;
        }
        let (quot, rem) = (e / rule.power, e % rule.power);
        let mut reduced = *exps;
        reduced[idx] = rem;
        let term = &Poly::monomial(coeff.clone(), reduced) * &rule.replacement.pow(quot);
        out = &out + &term;
    }
    out
}

/// Apply the ordered rule list to a polynomial until no rule matches.
pub fn rewrite_poly(p: &Poly, rules: &[RewriteRule]) -> Result<Poly> {
    let mut cur = p.clone();
    loop {
        let mut changed = false;
        for rule in rules {
            if cur.terms().any(|(e, _)| rule.applies(e)) {
                cur = apply_rule(&cur, rule);
                changed = true;
            }
        }
        if !changed {
            return Ok(cur);
        }
        if cur.total_degree() > DEGREE_BOUND {
            return Err(Error::NonTerminating { bound: DEGREE_BOUND });
        }
    }
}

/// Apply the rules to numerator and denominator of a rational function.
pub fn rewrite_ratfunc(f: &RatFunc, rules: &[RewriteRule]) -> Result<RatFunc> {
    let num = rewrite_poly(f.num(), rules)?;
    let den = rewrite_poly(f.den(), rules)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(RatFunc::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::rat;

    fn ansatz_rules() -> Vec<RewriteRule> {
        // A3 -> -A2, B^2 -> A2^2 + alpha^2, C^2 -> A2^2 - alpha^2
        let a2sq = Poly::symbol_pow(Symbol::A2, 2);
        let al2 = Poly::symbol_pow(Symbol::Alpha, 2);
        vec![
            RewriteRule::bare(Symbol::A3, -&Poly::symbol(Symbol::A2)),
            RewriteRule::even(Symbol::B, &a2sq + &al2),
            RewriteRule::even(Symbol::C, &a2sq - &al2),
        ]
    }

    #[test]
    fn bare_rule_cancels_sum() {
        let p = &Poly::symbol(Symbol::A2) + &Poly::symbol(Symbol::A3);
        let r = rewrite_poly(&p, &ansatz_rules()).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn even_rules_kill_constraint_polynomial() {
        // B^2 + C^2 - 2 A2^2 -> 0
        let p = &(&Poly::symbol_pow(Symbol::B, 2) + &Poly::symbol_pow(Symbol::C, 2))
            - &Poly::symbol_pow(Symbol::A2, 2).scale(&rat(2));
        let r = rewrite_poly(&p, &ansatz_rules()).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn ratfunc_rewrite_matches_reduced_fraction() {
        // A1^2 (B^2+C^2) / (B^2 C^2)  ->  2 A1^2 A2^2 / (A2^4 - alpha^4)
        let a1sq = Poly::symbol_pow(Symbol::A1, 2);
        let num = &a1sq * &(&Poly::symbol_pow(Symbol::B, 2) + &Poly::symbol_pow(Symbol::C, 2));
        let den = &Poly::symbol_pow(Symbol::B, 2) * &Poly::symbol_pow(Symbol::C, 2);
        let f = RatFunc::new(num, den);
        let r = rewrite_ratfunc(&f, &ansatz_rules()).unwrap();
        let expected = RatFunc::new(
            (&a1sq * &Poly::symbol_pow(Symbol::A2, 2)).scale(&rat(2)),
            &Poly::symbol_pow(Symbol::A2, 4) - &Poly::symbol_pow(Symbol::Alpha, 4),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn rewrite_is_idempotent() {
        let rules = ansatz_rules();
        let f = RatFunc::new(
            &(&Poly::symbol_pow(Symbol::B, 3) * &Poly::symbol(Symbol::A3))
                + &Poly::symbol_pow(Symbol::C, 2),
            &Poly::symbol(Symbol::B) * &Poly::symbol(Symbol::C),
        );
        let once = rewrite_ratfunc(&f, &rules).unwrap();
        let twice = rewrite_ratfunc(&once, &rules).unwrap();
        assert_eq!(once, twice);
        // No reducible occurrence survives: B and C at most to the first power.
        assert!(once.num().degree_of(Symbol::B) <= 1);
        assert!(once.num().degree_of(Symbol::C) <= 1);
        assert_eq!(once.num().degree_of(Symbol::A3), 0);
    }

    #[test]
    fn cyclic_rule_set_is_caught() {
        // A1 -> A1^2 + 1 grows without bound.
        let rules = vec![RewriteRule::bare(
            Symbol::A1,
            &Poly::symbol_pow(Symbol::A1, 2) + &Poly::one(),
        )];
        let p = Poly::symbol(Symbol::A1);
        assert!(matches!(
            rewrite_poly(&p, &rules),
            Err(Error::NonTerminating { .. })
        ));
    }
}
