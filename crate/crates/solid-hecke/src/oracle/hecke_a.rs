//! Type-A Hecke algebra on permutations in one-line notation. Written
//! without reference to the type-B engine so the two can catch each other.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::braid::{Letter, MixedBraidWord};
use crate::coefficients::{Scalar, Symbol};

type Perm = Vec<u8>;

/// Σ c_w T_w over S_n.
#[derive(Clone, Debug, PartialEq)]
pub struct AElement {
    n: usize,
    terms: BTreeMap<Perm, Scalar>,
}

impl AElement {
    pub fn one(n: usize) -> AElement {
        let mut terms = BTreeMap::new();
        terms.insert((0..n as u8).collect(), Scalar::one());
        AElement { n, terms }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Right multiplication by g_i^{±1}.
    pub fn times_g(&self, i: usize, inverse: bool) -> AElement {
        let q = Scalar::q();
        let mut out: BTreeMap<Perm, Scalar> = BTreeMap::new();
        let mut add = |p: Perm, c: Scalar| {
            let slot = out.entry(p).or_insert_with(Scalar::zero);
            *slot = slot.add(&c);
        };
        for (w, c) in &self.terms {
            let mut ws = w.clone();
            ws.swap(i - 1, i);
            let up = w[i - 1] < w[i];
            if !inverse {
                if up {
                    add(ws, c.clone());
                } else {
                    add(w.clone(), c.mul(&q.sub(&Scalar::one())));
                    add(ws, c.mul(&q));
                }
            } else {
                // T_s^{-1} = q^{-1} T_s + (q^{-1} - 1)
                let qi = q.inv().unwrap();
                if up {
                    add(ws, c.mul(&qi));
                    add(w.clone(), c.mul(&qi.sub(&Scalar::one())));
                } else {
                    // T_w T_s^{-1} = T_{ws} when ws < w
                    add(ws, c.clone());
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        AElement { n: self.n, terms: out }
    }

    pub fn from_braid(w: &MixedBraidWord) -> AElement {
        let mut e = AElement::one(w.strands());
        for l in w.letters() {
            match *l {
                Letter::Sigma(i, s) => e = e.times_g(i, s < 0),
                Letter::T(_) => panic!("type-A oracle takes loop-free words"),
            }
        }
        e
    }
}

thread_local! {
    static TRACE_MEMO: RefCell<HashMap<Perm, Scalar>> = RefCell::new(HashMap::new());
}

fn trace_perm(w: &[u8]) -> Scalar {
    let n = w.len();
    if n <= 1 {
        return Scalar::one();
    }
    if let Some(v) = TRACE_MEMO.with(|m| m.borrow().get(w).cloned()) {
        return v;
    }
    let top = (n - 1) as u8;
    let p = w.iter().position(|&x| x == top).unwrap();
    let v = if p == n - 1 {
        trace_perm(&w[..n - 1])
    } else {
        // w = x · s_{n-1} s_{n-2} … s_{p+1} with x fixing the last point,
        // and tr(T_x g_{n-1} T_u) = z tr(T_x T_u), u = s_{n-2} … s_{p+1}
        let mut x = w.to_vec();
        for j in p..n - 1 {
            x.swap(j, j + 1);
        }
        x.pop();
        let mut e = AElement { n: n - 1, terms: BTreeMap::from([(x, Scalar::one())]) };
        for j in (p + 1..n - 1).rev() {
            e = e.times_g(j, false);
        }
        ocneanu_trace_a(&e).mul(&Scalar::z())
    };
    TRACE_MEMO.with(|m| m.borrow_mut().insert(w.to_vec(), v.clone()));
    v
}

/// The trace with tr(1) = 1 and tr(a g_{n-1}) = z tr(a).
pub fn ocneanu_trace_a(e: &AElement) -> Scalar {
    let mut acc = Scalar::zero();
    for (w, c) in &e.terms {
        acc = acc.add(&c.mul(&trace_perm(w)));
    }
    acc
}

/// HOMFLY-PT of the closure in the same variables as the engine's X.
pub fn homfly_a(w: &MixedBraidWord) -> Scalar {
    let n = w.strands() as i32;
    let q = Scalar::q();
    let lam = Scalar::lh().pow(2).unwrap();
    let one = Scalar::one();
    let z = one.sub(&q).div(&q.mul(&lam).sub(&one)).unwrap();
    let pre = one
        .sub(&lam.mul(&q))
        .neg()
        .div(&Scalar::lh().mul(&one.sub(&q)))
        .unwrap()
        .pow(n - 1)
        .unwrap();
    let mut b = BTreeMap::new();
    b.insert(Symbol::Z, z);
    let tr = ocneanu_trace_a(&AElement::from_braid(w)).substitute(&b).unwrap();
    pre.mul(&Scalar::lh().pow(w.exponent_sum() as i32).unwrap()).mul(&tr).reduced()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse;

    fn tr(text: &str, n: usize) -> Scalar {
        ocneanu_trace_a(&AElement::from_braid(&parse(text, Some(n)).unwrap()))
    }

    #[test]
    fn small_traces() {
        let q = Scalar::q();
        assert!(tr("", 3).is_one());
        assert_eq!(tr("s1", 2), Scalar::z());
        assert_eq!(tr("s1^2", 2), q.sub(&Scalar::one()).mul(&Scalar::z()).add(&q));
        assert_eq!(tr("s1 s2", 3), Scalar::z().mul(&Scalar::z()));
        // conjugation symmetry on a permutation that is not a coset tail
        assert_eq!(tr("s2 s1 s2 s1^-1", 3), tr("s1 s2 s1^-1 s2", 3));
    }

    #[test]
    fn inverse_really_inverts() {
        let w = parse("s1 s2 s1^-1 s2^-1 s2 s1 s2^-1 s1^-1", None).unwrap();
        let e = AElement::from_braid(&w);
        // s2 s1 s2^-1 s1^-1 · (its inverse prefix) collapses to the identity
        let id = AElement::from_braid(&parse("s1 s2 s1^-1 s1 s2^-1 s1^-1", None).unwrap());
        assert_eq!(id, AElement::one(3));
        assert!(!e.is_empty());
    }

    #[test]
    fn unknot_normalizations() {
        assert!(homfly_a(&parse("s1", None).unwrap()).is_one());
        assert!(homfly_a(&parse("s1^-1", None).unwrap()).is_one());
        assert!(homfly_a(&parse("s1 s2", None).unwrap()).is_one());
        let trefoil = homfly_a(&parse("s1^3", None).unwrap());
        assert_eq!(trefoil, homfly_a(&parse("s1^3 s2^-1", None).unwrap()));
        assert_eq!(trefoil, homfly_a(&parse("s2^-1 s1^3", None).unwrap()));
        assert_ne!(trefoil, homfly_a(&parse("s1^-3", None).unwrap()));
    }
}
