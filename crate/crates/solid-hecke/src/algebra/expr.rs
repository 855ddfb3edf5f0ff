//! Unnormalized linear combinations of products of named factors, as they
//! appear on either side of the rewriting identities.

use std::fmt;

use super::engine::Gen;
use super::{acc_all, single, Algebra, AlgebraError, BasisWord, Element, Flavor, Terms};
use crate::coefficients::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// t^k
    T(i32),
    /// g_i^k
    G(usize, i32),
    /// t_i^k, with t_i = g_i…g_1 t g_1…g_i
    Commuting(usize, i32),
    /// t'_i^k, with t'_i = g_i…g_1 t g_1^{-1}…g_i^{-1}
    Looping(usize, i32),
    /// g_i…g_1 t^k g_1…g_i
    Symmetric(usize, i32),
}

impl Factor {
    fn max_index(self) -> usize {
        match self {
            Factor::T(_) => 0,
            Factor::G(i, _)
            | Factor::Commuting(i, _)
            | Factor::Looping(i, _)
            | Factor::Symmetric(i, _) => i,
        }
    }

    pub(crate) fn letters(self) -> Vec<Gen> {
        let mut out = Vec::new();
        let pow = |out: &mut Vec<Gen>, g: Gen, k: i32| {
            let g = match (g, k < 0) {
                (Gen::T(_), true) => Gen::T(-1),
                (Gen::G(i, _), true) => Gen::G(i, -1),
                _ => g,
            };
            out.extend(std::iter::repeat_n(g, k.unsigned_abs() as usize));
        };
        match self {
            Factor::T(k) => pow(&mut out, Gen::T(1), k),
            Factor::G(i, k) => pow(&mut out, Gen::G(i, 1), k),
            Factor::Commuting(i, k) => {
                let s = k.signum() as i8;
                for _ in 0..k.unsigned_abs() {
                    out.extend((1..=i).rev().map(|j| Gen::G(j, s)));
                    out.push(Gen::T(s));
                    out.extend((1..=i).map(|j| Gen::G(j, s)));
                }
            }
            Factor::Looping(i, k) | Factor::Symmetric(i, k) => {
                let after = if matches!(self, Factor::Looping(..)) { -1 } else { 1 };
                out.extend((1..=i).rev().map(|j| Gen::G(j, 1)));
                pow(&mut out, Gen::T(1), k);
                out.extend((1..=i).map(|j| Gen::G(j, after)));
            }
        }
        out
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, k) = match *self {
            Factor::T(k) => ("t".to_string(), k),
            Factor::G(i, k) => (format!("g{i}"), k),
            Factor::Commuting(i, k) => (format!("t{i}"), k),
            Factor::Looping(i, k) => (format!("t'{i}"), k),
            Factor::Symmetric(i, k) => (format!("T{i}"), k),
        };
        if k == 1 {
            write!(f, "{name}")
        } else {
            write!(f, "{name}^{k}")
        }
    }
}

/// Σ coefficient · (product of factors) at a fixed level.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    level: usize,
    terms: Vec<(Scalar, Vec<Factor>)>,
}

impl Expr {
    pub fn new(level: usize) -> Expr {
        Expr { level, terms: Vec::new() }
    }

    pub fn product(level: usize, factors: Vec<Factor>) -> Expr {
        let mut e = Expr::new(level);
        e.push(Scalar::one(), factors);
        e
    }

    pub fn push(&mut self, coef: Scalar, factors: Vec<Factor>) {
        assert!(
            factors.iter().all(|f| f.max_index() < self.level.max(1)),
            "factor index exceeds level {}",
            self.level
        );
        if !coef.is_zero() {
            self.terms.push((coef, factors));
        }
    }

    pub fn with(mut self, coef: Scalar, factors: Vec<Factor>) -> Expr {
        self.push(coef, factors);
        self
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> &[(Scalar, Vec<Factor>)] {
        &self.terms
    }

    /// Multiplies everything out in the given basis.
    pub fn evaluate(&self, alg: &Algebra, flavor: Flavor) -> Result<Element, AlgebraError> {
        let id = alg.word_element(self.level, &[], flavor)?;
        let mut out = Terms::new();
        for (c, factors) in &self.terms {
            let mut cur = single(BasisWord::identity(self.level));
            for f in factors {
                cur = alg.fold(flavor, cur, &f.letters());
            }
            acc_all(&mut out, &cur, c);
        }
        Ok(Element::raw(self.level, id.mode(), flavor, out))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (c, fs)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let body: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
            let body = if body.is_empty() { "1".to_string() } else { body.join(" ") };
            write!(f, "({}) * {body}", c.reduced())?;
        }
        Ok(())
    }
}
