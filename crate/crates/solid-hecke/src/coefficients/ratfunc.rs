use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::gcd::{gcd, split_monomial};
use super::poly::{Coeff, Monomial, Poly};
use super::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution makes a denominator vanish")]
    ZeroDenominator,
}

/// Quotient of two Laurent polynomials.
///
/// Monomial factors of the denominator are always folded into the
/// numerator, so every Laurent polynomial has denominator one. Common
/// polynomial factors are removed only by [`RatFunc::reduced`].
#[derive(Clone, Debug)]
pub struct RatFunc<C> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coeff> RatFunc<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::from_parts(num, den))
    }

    fn from_parts(num: Poly<C>, den: Poly<C>) -> Self {
        if den.is_one() || num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let (m, rest) = split_monomial(&den);
        let mut num = if m.is_one() { num } else { num.mul_term(&m.inverse(), &C::one()) };
        let mut den = rest;
        if den
            .display_leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            den = den.neg();
            num = num.neg();
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(Poly::from_i64(c))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Self, ScalarError> {
        Self::new(Poly::from_i64(n), Poly::from_i64(d))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_poly(Poly::var(s))
    }

    pub fn monomial(pairs: impl IntoIterator<Item = (Symbol, i32)>, c: i64) -> Self {
        Self::from_poly(Poly::term(
            Monomial::from_pairs(pairs),
            C::from_i64(c).expect("coefficient out of range"),
        ))
    }

    /// √q
    pub fn qh() -> Self {
        Self::symbol(Symbol::Qh)
    }

    /// q = √q²
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::from_poly(Poly::var_pow(Symbol::Qh, 2 * k))
    }

    /// √λ
    pub fn lh() -> Self {
        Self::symbol(Symbol::Lh)
    }

    pub fn z() -> Self {
        Self::symbol(Symbol::Z)
    }

    /// s_k with s_0 = 1.
    pub fn s(k: i32) -> Self {
        if k == 0 {
            Self::one()
        } else {
            Self::symbol(Symbol::S(k))
        }
    }

    pub fn a(j: u32) -> Self {
        Self::symbol(Symbol::A(j))
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    /// The numerator when the denominator is one.
    pub fn as_laurent(&self) -> Option<&Poly<C>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if num.is_zero() {
                return Self::zero();
            }
            return RatFunc { num, den: self.den.clone() };
        }
        Self::from_parts(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num), den: Poly::one() };
        }
        Self::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &Poly<C>) -> Self {
        RatFunc { num: self.num.mul(p), den: self.den.clone() }.renormalized_zero()
    }

    fn renormalized_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.num.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::from_parts(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFunc::from_parts(base.num.pow(e), base.den.pow(e)))
    }

    /// Gcd-reduced form; idempotent, and equal values give identical parts.
    pub fn reduced(&self) -> Self {
        if self.den.is_one() || self.num.is_zero() {
            return Self::from_parts(self.num.clone(), self.den.clone());
        }
        let (m, rest) = split_monomial(&self.num);
        let g = gcd(&rest, &self.den);
        if g.is_one() {
            return self.clone();
        }
        let num = rest.div_exact(&g).expect("gcd divides").mul_term(&m, &C::one());
        let den = self.den.div_exact(&g).expect("gcd divides");
        Self::from_parts(num, den)
    }

    /// Numerator and denominator as ordinary polynomials, as printed.
    pub fn printed_parts(&self) -> (Poly<C>, Poly<C>) {
        let r = self.reduced();
        if r.num.is_zero() {
            return (Poly::zero(), Poly::one());
        }
        let (m, rest) = split_monomial(&r.num);
        let pos = Monomial::from_pairs(m.pairs().iter().copied().filter(|&(_, e)| e > 0));
        let neg = Monomial::from_pairs(m.pairs().iter().filter(|&&(_, e)| e < 0).map(|&(s, e)| (s, -e)));
        (rest.mul_term(&pos, &C::one()), r.den.mul_term(&neg, &C::one()))
    }

    pub fn substitute(&self, bindings: &BTreeMap<Symbol, RatFunc<C>>) -> Result<Self, ScalarError> {
        let num = eval_poly(&self.num, bindings)?;
        let den = eval_poly(&self.den, bindings)?;
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        num.div(&den).map_err(|_| ScalarError::ZeroDenominator)
    }

    /// Residue modulo the prime `p` at `point`; `ZeroDenominator` asks the
    /// caller to retry with another point.
    pub fn eval_mod_p(&self, point: &dyn Fn(Symbol) -> u64, p: u64) -> Result<u64, ScalarError> {
        let n = self.num.eval_mod_p(point, p).ok_or(ScalarError::ZeroDenominator)?;
        let d = self.den.eval_mod_p(point, p).ok_or(ScalarError::ZeroDenominator)?;
        if d == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(super::poly::mul_mod(n, super::poly::mod_pow(d, p - 2, p), p))
    }

    pub fn mentions(&self, s: Symbol) -> bool {
        self.num.mentions(s) || self.den.mentions(s)
    }
}

fn eval_poly<C: Coeff>(
    p: &Poly<C>,
    bindings: &BTreeMap<Symbol, RatFunc<C>>,
) -> Result<RatFunc<C>, ScalarError> {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut term = RatFunc::from_poly(Poly::constant(c.clone()));
        for &(s, e) in m.pairs() {
            match bindings.get(&s) {
                Some(v) => {
                    term = term.mul(&v.pow(e).map_err(|_| ScalarError::ZeroDenominator)?);
                }
                None => kept.push((s, e)),
            }
        }
        if !kept.is_empty() {
            term = term.mul_poly(&Poly::term(Monomial::from_pairs(kept), C::one()));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl<C: Coeff> PartialEq for RatFunc<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<C: Coeff> Eq for RatFunc<C> {}

impl<C: Coeff> Default for RatFunc<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> From<Poly<C>> for RatFunc<C> {
    fn from(p: Poly<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: Coeff> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.printed_parts();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({d})")
        }
    }
}

impl<C: Coeff> RatFunc<C> {
    /// Integer value when the scalar is a constant integer.
    pub fn as_integer(&self) -> Option<C> {
        if !self.den.is_one() {
            let r = self.reduced();
            if !r.den.is_one() {
                return None;
            }
            return r.num.as_constant();
        }
        self.num.as_constant()
    }

    pub fn is_integer_one(&self) -> bool {
        matches!(self.as_integer(), Some(c) if c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type S = RatFunc<BigInt>;

    #[test]
    fn field_examples() {
        let q = S::q();
        assert_eq!(q.sub(&S::one()).add(&S::one()), q);
        assert!(q.mul(&q.inv().unwrap()).is_one());
        assert_eq!(S::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn z_substitution_value() {
        let q = S::q();
        let lam = S::lh().pow(2).unwrap();
        let z = S::one().sub(&q).mul(&q.mul(&lam).sub(&S::one()).inv().unwrap());
        assert_eq!(z.to_string(), "(-qh^2 + 1)/(qh^2*lh^2 - 1)");
        let mut b = BTreeMap::new();
        b.insert(Symbol::Z, z.clone());
        assert_eq!(S::z().substitute(&b).unwrap(), z);
    }

    #[test]
    fn printing_monomial_denominators() {
        let x = S::q().inv().unwrap().mul(&S::s(1));
        assert_eq!(x.to_string(), "(s1)/(qh^2)");
        let y = S::q_pow(-1).sub(&S::one());
        assert_eq!(y.to_string(), "(-qh^2 + 1)/(qh^2)");
    }

    #[test]
    fn reduction_cancels_common_factor() {
        let q = S::q();
        let a = q.sub(&S::one()).mul(&S::z());
        let b = q.sub(&S::one());
        let r = a.div(&b).unwrap();
        assert_eq!(r.to_string(), "z");
        assert_eq!(r.reduced().reduced().to_string(), "z");
    }

    #[test]
    fn substitution_examples() {
        let mut b = BTreeMap::new();
        b.insert(Symbol::S(3), S::one());
        b.insert(Symbol::Z, S::one());
        let x = S::s(3).mul(&S::z().pow(2).unwrap());
        assert!(x.substitute(&b).unwrap().is_one());
        assert_eq!(S::q().substitute(&BTreeMap::new()).unwrap(), S::q());
        let mut c = BTreeMap::new();
        c.insert(Symbol::Qh, S::one());
        let bad = S::one().div(&S::q().sub(&S::one())).unwrap();
        assert_eq!(bad.substitute(&c), Err(ScalarError::ZeroDenominator));
    }

    #[test]
    fn modular_evaluation() {
        let x = S::q().sub(&S::one());
        let pt = |s: Symbol| if s == Symbol::Qh { 2 } else { 0 };
        assert_eq!(x.eval_mod_p(&pt, 101), Ok(3));
        assert_eq!(S::zero().eval_mod_p(&pt, 101), Ok(0));
        let y = S::one().div(&S::z()).unwrap();
        assert_eq!(y.eval_mod_p(&pt, 101), Err(ScalarError::ZeroDenominator));
    }
}
