use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use super::symbol::Symbol;

/// Integer-like coefficient ring usable by [`Poly`].
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Signed
    + Integer
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

impl<T> Coeff for T
where
    T: Clone
        + Eq
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Signed
        + Integer
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// A Laurent monomial: symbols sorted ascending, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(SmallVec<[(Symbol, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol, e: i32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(s, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, i32)>) -> Self {
        let mut map: BTreeMap<Symbol, i32> = BTreeMap::new();
        for (s, e) in pairs {
            *map.entry(s).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Symbol, i32)] {
        &self.0
    }

    pub fn exp(&self, s: Symbol) -> i32 {
        self.0
            .iter()
            .find(|(t, _)| *t == s)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(s, e)| (s, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    /// `self / other`, defined when every exponent stays nonnegative.
    fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let q = self.mul(&other.inverse());
        if q.0.iter().all(|&(_, e)| e > 0) {
            Some(q)
        } else {
            None
        }
    }

    /// Lexicographic comparison of exponent vectors in symbol order.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(s, e)), Some(&(t, f))) => match s.cmp(&t) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    /// Display order: higher total degree first, then lexicographically larger.
    pub fn display_cmp(&self, other: &Monomial) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.lex_cmp(self))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (n, &(s, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate Laurent polynomial with coefficients in `C`.
///
/// Terms are kept sorted by monomial with no zero coefficients, so
/// structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(C::from_i64(c).expect("coefficient out of range"))
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Monomial::var(s, 1), C::one())
    }

    pub fn var_pow(s: Symbol, e: i32) -> Self {
        Self::term(Monomial::var(s, e), C::one())
    }

    /// Builds from unsorted terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut v: Vec<(Monomial, C)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add_ref(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &C)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|&(s, _)| s))
            .collect()
    }

    pub fn mentions(&self, s: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(s) != 0)
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].1.sub_ref(&b[j].1)
                    } else {
                        a[i].1.add_ref(&b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_term(m, c);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.push((ma.mul(mb), ca.mul_ref(cb)));
            }
        }
        Self::from_terms(acc)
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms: Vec<(Monomial, C)> = self
            .terms
            .iter()
            .map(|(ma, ca)| (ma.mul(m), ca.mul_ref(c)))
            .collect();
        if m.is_one() {
            Poly { terms }
        } else {
            // multiplying by a monomial preserves distinctness but not order
            let mut terms = terms;
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            Poly { terms }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Componentwise minimum of exponents over all terms (zero for absent symbols).
    pub fn min_exponents(&self) -> Monomial {
        let mut mins: BTreeMap<Symbol, i32> = BTreeMap::new();
        let syms = self.symbols();
        for s in &syms {
            mins.insert(*s, i32::MAX);
        }
        for (m, _) in &self.terms {
            for s in &syms {
                let e = m.exp(*s);
                let v = mins.get_mut(s).unwrap();
                *v = (*v).min(e);
            }
        }
        Monomial::from_pairs(mins)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.pairs().iter().any(|&(_, e)| e < 0))
    }

    pub fn content(&self) -> C {
        let mut g = C::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Term with the lexicographically largest monomial.
    pub fn lex_leading(&self) -> Option<&(Monomial, C)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(&b.0))
    }

    /// First term in display order.
    pub fn display_leading(&self) -> Option<&(Monomial, C)> {
        self.terms.iter().min_by(|a, b| a.0.display_cmp(&b.0))
    }

    pub fn degree_in(&self, s: Symbol) -> i32 {
        self.terms.iter().map(|(m, _)| m.exp(s)).max().unwrap_or(0)
    }

    /// Total degree (maximum over terms).
    pub fn total_degree(&self) -> i64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Splits into coefficients of powers of `s`.
    pub fn coefficients_in(&self, s: Symbol) -> BTreeMap<i32, Poly<C>> {
        let mut parts: BTreeMap<i32, Vec<(Monomial, C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(s);
            let rest = m.mul(&Monomial::var(s, -e));
            parts.entry(e).or_default().push((rest, c.clone()));
        }
        parts
            .into_iter()
            .map(|(e, v)| (e, Poly::from_terms(v)))
            .collect()
    }

    /// Exact quotient `self / other` for polynomials with nonnegative
    /// exponents; `None` when the division leaves a remainder.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = other.as_monomial() {
            let mut out = Vec::with_capacity(self.terms.len());
            for (ma, ca) in &self.terms {
                let (q, r) = ca.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                let mq = ma.mul(&m.inverse());
                if mq.pairs().iter().any(|&(_, e)| e < 0) {
                    return None;
                }
                out.push((mq, q));
            }
            return Some(Self::from_terms(out));
        }
        let (lm, lc) = other.lex_leading().cloned().unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.lex_leading().cloned().unwrap();
            let mq = if rm == lm {
                Monomial::one()
            } else {
                rm.divide(&lm)?
            };
            let (cq, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&other.mul_term(&mq, &cq));
            quot.push((mq, cq));
        }
        Some(Self::from_terms(quot))
    }

    /// Evaluates at residues modulo `p`; `None` when a symbol with a
    /// negative exponent evaluates to zero.
    pub fn eval_mod_p(&self, point: &dyn Fn(Symbol) -> u64, p: u64) -> Option<u64> {
        let pc = C::from_u64(p).expect("modulus out of range");
        let mut acc: u64 = 0;
        for (m, c) in &self.terms {
            let cr = c.mod_floor(&pc).to_u64().unwrap();
            let mut v = cr % p;
            for &(s, e) in m.pairs() {
                let x = point(s) % p;
                let base = if e < 0 {
                    if x == 0 {
                        return None;
                    }
                    mod_pow(x, p - 2, p)
                } else {
                    x
                };
                v = mul_mod(v, mod_pow(base, e.unsigned_abs() as u64, p), p);
            }
            acc = (acc + v) % p;
        }
        Some(acc)
    }

    /// Terms listed in display order.
    pub fn display_terms(&self) -> Vec<&(Monomial, C)> {
        let mut v: Vec<&(Monomial, C)> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(&b.0));
        v
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Poly<BigInt>;

    fn qh() -> P {
        P::var(Symbol::Qh)
    }

    #[test]
    fn display_order() {
        let z = P::var(Symbol::Z);
        let s3 = P::var(Symbol::S(3));
        let p = qh().pow(2).mul(&z).mul(&s3)
            .sub(&qh().pow(2).mul(&s3))
            .add(&z.pow(2).mul(&s3));
        assert_eq!(p.to_string(), "qh^2*z*s3 - qh^2*s3 + z^2*s3");
    }

    #[test]
    fn exact_division() {
        let a = qh().add(&P::one());
        let b = qh().sub(&P::one());
        let prod = a.mul(&b).mul(&P::var(Symbol::Z));
        assert_eq!(prod.div_exact(&a).unwrap(), b.mul(&P::var(Symbol::Z)));
        assert!(prod.div_exact(&qh().add(&P::from_i64(2))).is_none());
    }

    #[test]
    fn generic_over_machine_integers() {
        let a: Poly<i64> = Poly::var(Symbol::Z).add(&Poly::from_i64(3));
        let b = a.mul(&a);
        assert_eq!(b.to_string(), "z^2 + 6*z + 9");
    }
}
