//! Multivariate polynomial gcd over the integers by recursive primitive
//! remainder sequences. Inputs must have nonnegative exponents.

use std::collections::{BTreeMap, BTreeSet};

use super::poly::{Coeff, Monomial, Poly};
use super::symbol::Symbol;

/// Greatest common divisor, normalized to a positive leading coefficient.
pub fn gcd<C: Coeff>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    debug_assert!(!a.has_negative_exponents() && !b.has_negative_exponents());
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    if let (Some(ca), Some(cb)) = (a.as_constant(), b.as_constant()) {
        return Poly::constant(ca.gcd(&cb));
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::constant(a.content().gcd(&b.content()));
    }
    if a == b {
        return normalize_sign(a.clone());
    }
    let sa = a.symbols();
    let sb = b.symbols();
    if !sa.is_subset(&sb) {
        return gcd_with_parts(b, a, &sb);
    }
    if !sb.is_subset(&sa) {
        return gcd_with_parts(a, b, &sa);
    }
    let x = *sa.iter().next().expect("nonconstant polynomial has a symbol");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, x);
    normalize_sign(c.mul(&g))
}

/// gcd(a, b) where `a` only involves `keep`: fold a against the
/// coefficients of b taken with respect to every other symbol at once.
fn gcd_with_parts<C: Coeff>(a: &Poly<C>, b: &Poly<C>, keep: &BTreeSet<Symbol>) -> Poly<C> {
    let mut parts: BTreeMap<Monomial, Vec<(Monomial, C)>> = BTreeMap::new();
    for (m, c) in b.terms() {
        let (inner, outer): (Vec<_>, Vec<_>) = m.pairs().iter().partition(|(s, _)| keep.contains(s));
        parts
            .entry(Monomial::from_pairs(outer))
            .or_default()
            .push((Monomial::from_pairs(inner), c.clone()));
    }
    let mut g = a.clone();
    for ts in parts.into_values() {
        g = gcd(&g, &Poly::from_terms(ts));
        if g.is_one() {
            break;
        }
    }
    g
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in<C: Coeff>(p: &Poly<C>, x: Symbol) -> Poly<C> {
    let mut g = Poly::zero();
    for c in p.coefficients_in(x).into_values() {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in<C: Coeff>(p: &Poly<C>, x: Symbol) -> Poly<C> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides")
}

fn leading_in<C: Coeff>(p: &Poly<C>, x: Symbol) -> (i32, Poly<C>) {
    let mut parts = p.coefficients_in(x);
    let (d, c) = parts.pop_last().expect("nonzero polynomial");
    (d, c)
}

/// Sparse pseudo-remainder of `a` by `b` in `x`.
fn pseudo_rem<C: Coeff>(a: &Poly<C>, b: &Poly<C>, x: Symbol) -> Poly<C> {
    let (db, lb) = leading_in(b, x);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_in(&r, x);
        if dr < db {
            break;
        }
        let shift = Monomial::var(x, dr - db);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_term(&shift, &C::one()));
    }
    r
}

fn primitive_prs<C: Coeff>(a: Poly<C>, b: Poly<C>, x: Symbol) -> Poly<C> {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return primitive_part_in(&a, x);
        }
        if b.degree_in(x) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&a, &b, x);
        a = b;
        b = primitive_part_in(&r, x);
    }
}

/// Makes the lexicographically leading coefficient positive.
pub fn normalize_sign<C: Coeff>(p: Poly<C>) -> Poly<C> {
    match p.lex_leading() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Splits a Laurent polynomial into a monomial and a polynomial with no
/// monomial factor: `p = m · rest`.
pub fn split_monomial<C: Coeff>(p: &Poly<C>) -> (Monomial, Poly<C>) {
    if p.is_zero() {
        return (Monomial::one(), p.clone());
    }
    let m = p.min_exponents();
    if m.is_one() {
        return (m, p.clone());
    }
    let rest = p.mul_term(&m.inverse(), &C::one());
    (m, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Poly<BigInt>;

    fn v(s: Symbol) -> P {
        P::var(s)
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let q = v(Symbol::Qh);
        let z = v(Symbol::Z);
        let l = v(Symbol::Lh);
        let f = q.mul(&l).sub(&P::one());
        let a = f.mul(&z.add(&q)).mul(&P::from_i64(6));
        let b = f.mul(&z.sub(&l)).mul(&P::from_i64(4));
        assert_eq!(gcd(&a, &b), f.scale(&BigInt::from(2)));
    }

    #[test]
    fn coprime_gives_constant() {
        let q = v(Symbol::Qh);
        let a = q.pow(2).sub(&P::one());
        let b = q.pow(2).add(&P::one());
        assert_eq!(gcd(&a, &b), P::one());
    }

    #[test]
    fn content_in_variable() {
        let q = v(Symbol::Qh);
        let z = v(Symbol::Z);
        let p = q.add(&P::one()).mul(&z.pow(2)).add(&q.add(&P::one()).mul(&z));
        assert_eq!(content_in(&p, Symbol::Z), q.add(&P::one()));
    }

    #[test]
    fn split_monomial_factor() {
        let q = v(Symbol::Qh);
        let p = q.pow(3).add(&q.mul_term(&Monomial::var(Symbol::Z, -1), &BigInt::from(1)));
        let (m, rest) = split_monomial(&p);
        assert_eq!(m, Monomial::from_pairs([(Symbol::Qh, 1), (Symbol::Z, -1)]));
        assert!(!rest.has_negative_exponents());
        assert_eq!(rest.mul_term(&m, &BigInt::from(1)), p);
    }

    #[test]
    fn zero_and_constant_cases() {
        let q = v(Symbol::Qh);
        assert_eq!(gcd(&P::zero(), &q.neg()), q);
        assert_eq!(gcd(&P::from_i64(6), &q.scale(&BigInt::from(4))), P::from_i64(2));
    }
}
