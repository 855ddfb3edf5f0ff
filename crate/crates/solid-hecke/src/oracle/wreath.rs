use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Report;
use crate::algebra::{basis_enumerate, Algebra, AlgebraError, BasisWord, Element, Flavor, Mode};
use crate::coefficients::{Scalar, Symbol};

/// (v, π) in ℤ_d^n ⋊ S_n; π in one-line notation on 0..n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    pub v: Vec<u32>,
    pub perm: Vec<usize>,
    pub d: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WreathError {
    #[error("size mismatch: (n={0}, d={1}) vs (n={2}, d={3})")]
    SizeMismatch(usize, u32, usize, u32),
}

impl WreathElement {
    pub fn identity(n: usize, d: u32) -> WreathElement {
        WreathElement { v: vec![0; n], perm: (0..n).collect(), d }
    }

    /// The loop around coordinate m.
    pub fn unit(n: usize, d: u32, m: usize, k: i64) -> WreathElement {
        let mut e = Self::identity(n, d);
        e.v[m] = k.rem_euclid(d as i64) as u32;
        e
    }

    /// Transposition of coordinates i-1 and i.
    pub fn transposition(n: usize, d: u32, i: usize) -> WreathElement {
        let mut e = Self::identity(n, d);
        e.perm.swap(i - 1, i);
        e
    }

    pub fn mul(&self, other: &WreathElement) -> Result<WreathElement, WreathError> {
        let n = self.v.len();
        if n != other.v.len() || self.d != other.d {
            return Err(WreathError::SizeMismatch(n, self.d, other.v.len(), other.d));
        }
        let mut v = self.v.clone();
        for j in 0..n {
            let i = self.perm[j];
            v[i] = (v[i] + other.v[j]) % self.d;
        }
        let perm = (0..n).map(|j| self.perm[other.perm[j]]).collect();
        Ok(WreathElement { v, perm, d: self.d })
    }
}

/// Image of a looping-basis word: t'_m ↦ loop at m, g_j ↦ transposition.
pub fn wreath_image(w: &BasisWord, d: u32) -> WreathElement {
    let n = w.level();
    let mut acc = WreathElement::identity(n, d);
    for (m, c) in w.cells().iter().enumerate() {
        acc = acc.mul(&WreathElement::unit(n, d, m, c.exp as i64)).unwrap();
        for j in (m + 1 - c.glen as usize..=m).rev() {
            acc = acc.mul(&WreathElement::transposition(n, d, j)).unwrap();
        }
    }
    acc
}

/// Coefficient at q = 1, a_0 = 1, a_{j>0} = 0.
pub fn specialize(c: &Scalar, d: u32) -> Scalar {
    let mut b = BTreeMap::new();
    b.insert(Symbol::Qh, Scalar::one());
    for j in 0..d {
        b.insert(Symbol::A(j), if j == 0 { Scalar::one() } else { Scalar::zero() });
    }
    c.substitute(&b).expect("no poles at q = 1").reduced()
}

fn specialized_image(e: &Element, d: u32) -> BTreeMap<WreathElement, Scalar> {
    let mut out: BTreeMap<WreathElement, Scalar> = BTreeMap::new();
    for (w, c) in e.iter() {
        let s = specialize(c, d);
        if s.is_zero() {
            continue;
        }
        let slot = out.entry(wreath_image(w, d)).or_insert_with(Scalar::zero);
        *slot = slot.add(&s);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn show(m: &BTreeMap<WreathElement, Scalar>) -> String {
    let parts: Vec<String> = m.iter().map(|(g, c)| format!("({c})*{:?}|{:?}", g.v, g.perm)).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Checks engine products against group multiplication. With `sample` set,
/// only that many random pairs are drawn; otherwise all pairs are used.
pub fn specialize_check(n: usize, d: u32, sample: Option<(usize, u64)>) -> Result<Report, AlgebraError> {
    let alg = Algebra::new(Mode::Cyclotomic(d));
    let basis = basis_enumerate(n, d)?;
    let pairs: Vec<(usize, usize)> = match sample {
        None => (0..basis.len()).flat_map(|i| (0..basis.len()).map(move |j| (i, j))).collect(),
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()))).collect()
        }
    };
    let mut report = Report::default();
    for (i, j) in pairs {
        let (a, b) = (&basis[i], &basis[j]);
        let ea = Element::word(a.clone(), alg.mode(), Flavor::Looping);
        let eb = Element::word(b.clone(), alg.mode(), Flavor::Looping);
        let got = specialized_image(&alg.mul(&ea, &eb)?, d);
        let want = wreath_image(a, d).mul(&wreath_image(b, d)).expect("same size");
        let mut expected = BTreeMap::new();
        expected.insert(want, Scalar::one());
        report.push(format!("{a} * {b}"), show(&expected), show(&got));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn group_law() {
        let id = WreathElement::identity(3, 2);
        let s1 = WreathElement::transposition(3, 2, 1);
        let t = WreathElement::unit(3, 2, 0, 1);
        assert_eq!(id.mul(&s1).unwrap(), s1);
        assert_eq!(s1.mul(&s1).unwrap(), id);
        let ts = t.mul(&s1).unwrap();
        assert_eq!(ts.v, vec![1, 0, 0]);
        assert_eq!(ts.perm, vec![1, 0, 2]);
        // conjugating the loop moves it to the next coordinate
        let moved = s1.mul(&t).unwrap().mul(&s1).unwrap();
        assert_eq!(moved, WreathElement::unit(3, 2, 1, 1));
        assert!(id.mul(&WreathElement::identity(2, 2)).is_err());
    }

    #[test]
    fn image_is_a_bijection() {
        for (n, d) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let basis = basis_enumerate(n, d).unwrap();
            let imgs: HashSet<_> = basis.iter().map(|w| wreath_image(w, d)).collect();
            assert_eq!(imgs.len(), basis.len());
        }
    }

    #[test]
    fn exhaustive_small() {
        let r = specialize_check(2, 2, None).unwrap();
        assert_eq!(r.len(), 64);
        assert_eq!(r.failures(), 0, "{}", r.to_json());
    }
}
