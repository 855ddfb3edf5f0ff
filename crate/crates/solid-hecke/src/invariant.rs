//! The normalized invariant X of closed mixed braids, and executable forms of
//! the two skein rules.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::Mode;
use crate::braid::{Letter, MixedBraidWord};
use crate::coefficients::{Scalar, Symbol};
use crate::oracle;
use crate::trace::Tracer;

/// Value of X: a rational function in qh, lh, s_k and a_j.
pub type InvariantValue = Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("position {pos} does not hold a positive crossing (word length {len})")]
    NotPositiveCrossing { pos: usize, len: usize },
    #[error("loop index {index} out of range for {strands} strands")]
    LoopIndex { index: usize, strands: usize },
    #[error("word contains loop letters")]
    NotLoopFree,
    #[error("mode {0} has no cyclotomic relation")]
    NotCyclotomic(Mode),
}

/// λ in terms of the base symbols.
pub fn lambda() -> Scalar {
    Scalar::lh().mul(&Scalar::lh())
}

/// z expressed through q and λ.
pub fn z_in_lambda() -> Scalar {
    let q = Scalar::q();
    Scalar::one().sub(&q).div(&q.mul(&lambda()).sub(&Scalar::one())).expect("qλ-1 is nonzero")
}

/// Applies the normalization to a trace value of an n-strand word with
/// exponent sum e. Works termwise in z: the trace of an n-strand braid has
/// z-degree at most n-1, so every term becomes a polynomial over (1-q)^{n-1}.
pub fn normalize(tr: &Scalar, n: usize, e: i64) -> InvariantValue {
    let m = n as i32 - 1;
    let q = Scalar::q();
    let one_minus_q = Scalar::one().sub(&q);
    let ql_minus_1 = q.mul(&lambda()).sub(&Scalar::one());
    let lh_pow = Scalar::lh().pow(e as i32 - m).expect("monomial");
    if tr.den().mentions(Symbol::Z) {
        return generic_normalize(tr, n, e);
    }
    let mut num = Scalar::zero();
    for (j, c) in tr.num().coefficients_in(Symbol::Z) {
        if j < 0 || j > m {
            return generic_normalize(tr, n, e);
        }
        let part = Scalar::from_poly(c)
            .mul(&one_minus_q.pow(j).unwrap())
            .mul(&ql_minus_1.pow(m - j).unwrap());
        num = num.add(&part);
    }
    let den = Scalar::from_poly(tr.den().clone()).mul(&one_minus_q.pow(m).unwrap());
    num.mul(&lh_pow).div(&den).expect("1-q is nonzero").reduced()
}

fn generic_normalize(tr: &Scalar, n: usize, e: i64) -> InvariantValue {
    let q = Scalar::q();
    let factor = Scalar::one()
        .sub(&lambda().mul(&q))
        .neg()
        .div(&Scalar::lh().mul(&Scalar::one().sub(&q)))
        .unwrap();
    let mut b = BTreeMap::new();
    b.insert(Symbol::Z, z_in_lambda());
    tr.substitute(&b)
        .expect("z substitution has no poles")
        .mul(&factor.pow(n as i32 - 1).unwrap())
        .mul(&Scalar::lh().pow(e as i32).unwrap())
        .reduced()
}

/// Evaluator for X, reusing one trace memo across calls.
pub struct Invariant {
    tracer: Tracer,
}

impl Invariant {
    pub fn new(mode: Mode) -> Invariant {
        Invariant { tracer: Tracer::new(mode) }
    }

    pub fn mode(&self) -> Mode {
        self.tracer.mode()
    }

    pub fn tracer(&self) -> &Tracer {
        &self.tracer
    }

    pub fn value(&self, w: &MixedBraidWord) -> InvariantValue {
        let tr = self.tracer.trace_braid(w);
        normalize(&tr, w.strands(), w.exponent_sum())
    }
}

pub fn invariant_x(w: &MixedBraidWord, mode: Mode) -> InvariantValue {
    Invariant::new(mode).value(w)
}

/// (L₊, L₋, L₀) at a positive crossing letter.
pub fn skein_triple(
    w: &MixedBraidWord,
    pos: usize,
) -> Result<(MixedBraidWord, MixedBraidWord, MixedBraidWord), InvariantError> {
    let letters = w.letters();
    let Some(&Letter::Sigma(i, 1)) = letters.get(pos) else {
        return Err(InvariantError::NotPositiveCrossing { pos, len: letters.len() });
    };
    let mut minus = letters.to_vec();
    minus[pos] = Letter::Sigma(i, -1);
    let mut zero = letters.to_vec();
    zero.remove(pos);
    let n = w.strands();
    let mk = |v: Vec<Letter>| MixedBraidWord::new(n, v).expect("same strands");
    Ok((w.clone(), mk(minus), mk(zero)))
}

/// Outcome of a skein check; `witness` is lhs − rhs.
#[derive(Clone, Debug, PartialEq)]
pub struct SkeinCheck {
    pub holds: bool,
    pub witness: Scalar,
}

impl SkeinCheck {
    fn from_difference(d: Scalar) -> SkeinCheck {
        let d = d.reduced();
        SkeinCheck { holds: d.is_zero(), witness: d }
    }
}

/// X₊/(√q√λ) − √q√λ·X₋ = (√q − 1/√q)·X₀
pub fn verify_skein_homfly(
    inv: &Invariant,
    plus: &MixedBraidWord,
    minus: &MixedBraidWord,
    zero: &MixedBraidWord,
) -> SkeinCheck {
    let ql = Scalar::qh().mul(&Scalar::lh());
    let lhs = inv
        .value(plus)
        .div(&ql)
        .unwrap()
        .sub(&ql.mul(&inv.value(minus)));
    let qh = Scalar::qh();
    let rhs = qh.sub(&qh.inv().unwrap()).mul(&inv.value(zero));
    SkeinCheck::from_difference(lhs.sub(&rhs))
}

/// α·t'_i^j as a braid word.
pub fn with_loop_power(alpha: &MixedBraidWord, i: usize, k: i32) -> Result<MixedBraidWord, InvariantError> {
    let n = alpha.strands();
    if i >= n {
        return Err(InvariantError::LoopIndex { index: i, strands: n });
    }
    let mut v = alpha.letters().to_vec();
    if k != 0 {
        v.extend((1..=i).rev().map(|j| Letter::Sigma(j, 1)));
        let e = if k < 0 { -1 } else { 1 };
        v.extend(std::iter::repeat_n(Letter::T(e), k.unsigned_abs() as usize));
        v.extend((1..=i).map(|j| Letter::Sigma(j, -1)));
    }
    Ok(MixedBraidWord::new(n, v).expect("indices checked"))
}

/// X(α t'_i^d) = Σ_{j<d} a_j X(α t'_i^j), evaluated in the given cyclotomic mode.
pub fn verify_skein_cyclotomic(inv: &Invariant, alpha: &MixedBraidWord, i: usize) -> Result<SkeinCheck, InvariantError> {
    let Mode::Cyclotomic(d) = inv.mode() else {
        return Err(InvariantError::NotCyclotomic(inv.mode()));
    };
    let lhs = inv.value(&with_loop_power(alpha, i, d as i32)?);
    let mut rhs = Scalar::zero();
    for j in 0..d {
        rhs = rhs.add(&Scalar::a(j).mul(&inv.value(&with_loop_power(alpha, i, j as i32)?)));
    }
    Ok(SkeinCheck::from_difference(lhs.sub(&rhs)))
}

/// X of a loop-free word next to the independent A-type computation.
#[derive(Clone, Debug, PartialEq)]
pub struct HomflyComparison {
    pub equal: bool,
    pub engine: Scalar,
    pub oracle: Scalar,
}

pub fn homfly_compare(inv: &Invariant, w: &MixedBraidWord) -> Result<HomflyComparison, InvariantError> {
    if !w.is_loop_free() {
        return Err(InvariantError::NotLoopFree);
    }
    let engine = inv.value(w);
    let oracle = oracle::homfly_a(w);
    let equal = engine.sub(&oracle).reduced().is_zero();
    Ok(HomflyComparison { equal, engine, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse;

    #[test]
    fn initial_conditions() {
        let inv = Invariant::new(Mode::Infinity);
        assert!(inv.value(&parse("", Some(1)).unwrap()).is_one());
        for k in -5..=5i32 {
            let w = parse(&format!("t^{k}"), Some(1)).unwrap();
            assert_eq!(inv.value(&w), Scalar::s(k));
        }
        assert!(inv.value(&parse("s1", Some(2)).unwrap()).is_one());
        assert!(inv.value(&parse("s1^-1 s2", Some(3)).unwrap()).is_one());
    }

    #[test]
    fn loop_monomials_evaluate_to_products() {
        let inv = Invariant::new(Mode::Infinity);
        let w = parse("t^2 t'1^-1", Some(2)).unwrap();
        let want = Scalar::s(2).mul(&Scalar::s(-1));
        // the closure of two separate loops picks up one unlink factor
        let x = inv.value(&w);
        let unlink = inv.value(&parse("", Some(2)).unwrap());
        assert_eq!(x, want.mul(&unlink).reduced());
    }

    #[test]
    fn triples() {
        let w = parse("t s1 t s1", None).unwrap();
        let (p, m, z) = skein_triple(&w, 1).unwrap();
        assert_eq!(p, w);
        assert_eq!(m, parse("t s1^-1 t s1", None).unwrap());
        assert_eq!(z, parse("t t s1", None).unwrap());
        let (_, m, z) = skein_triple(&parse("s1", None).unwrap(), 0).unwrap();
        assert_eq!(m, parse("s1^-1", None).unwrap());
        assert!(z.is_empty() && z.strands() == 2);
        assert!(skein_triple(&w, 0).is_err());
    }

    #[test]
    fn skein_small_cases() {
        let inv = Invariant::new(Mode::Infinity);
        for text in ["s1", "s1 s1 s1", "t s1 t s1", "s2 s1 t^2 s1^-1 s2"] {
            let w = parse(text, None).unwrap();
            let pos = w.letters().iter().position(|l| *l == Letter::Sigma(1, 1)).unwrap();
            let (p, m, z) = skein_triple(&w, pos).unwrap();
            assert!(verify_skein_homfly(&inv, &p, &m, &z).holds, "{text}");
        }
        let c2 = Invariant::new(Mode::Cyclotomic(2));
        assert!(verify_skein_cyclotomic(&c2, &parse("", Some(1)).unwrap(), 0).unwrap().holds);
        let c3 = Invariant::new(Mode::Cyclotomic(3));
        assert!(verify_skein_cyclotomic(&c3, &parse("s1", None).unwrap(), 1).unwrap().holds);
        assert!(verify_skein_cyclotomic(&inv, &parse("s1", None).unwrap(), 1).is_err());
    }

    #[test]
    fn knots_agree_with_oracle() {
        let inv = Invariant::new(Mode::Infinity);
        for text in ["s1", "s1^3", "s1 s2^-1 s1 s2^-1"] {
            let c = homfly_compare(&inv, &parse(text, None).unwrap()).unwrap();
            assert!(c.equal, "{text}: {} vs {}", c.engine, c.oracle);
        }
    }
}
