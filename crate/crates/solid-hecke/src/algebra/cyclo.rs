//! Powers of t modulo t^d = a_{d-1} t^{d-1} + … + a_0.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::coefficients::Scalar;

/// Coefficient vectors of x^k in the basis 1, x, …, x^{d-1}, memoized.
pub struct PowerReduction {
    d: usize,
    a: Vec<Scalar>,
    a0_inv: Scalar,
    cache: RefCell<HashMap<i32, Rc<Vec<Scalar>>>>,
}

impl PowerReduction {
    /// Reduction with symbolic parameters a_0 … a_{d-1}.
    pub fn symbolic(d: u32) -> PowerReduction {
        PowerReduction::with_parameters((0..d).map(Scalar::a).collect())
    }

    /// Reduction with given parameters; `a[0]` must be nonzero.
    pub fn with_parameters(a: Vec<Scalar>) -> PowerReduction {
        assert!(!a.is_empty(), "degree must be positive");
        let a0_inv = a[0].inv().expect("a_0 must be invertible");
        PowerReduction { d: a.len(), a, a0_inv, cache: RefCell::new(HashMap::new()) }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self, k: i32) -> Rc<Vec<Scalar>> {
        if let Some(v) = self.cache.borrow().get(&k) {
            return v.clone();
        }
        let d = self.d;
        let v: Vec<Scalar> = if k >= 0 && (k as usize) < d {
            (0..d).map(|j| if j == k as usize { Scalar::one() } else { Scalar::zero() }).collect()
        } else if k >= d as i32 {
            let prev = self.coeffs(k - 1);
            // x · Σ c_j x^j, with x^d replaced by Σ a_j x^j
            let top = prev[d - 1].clone();
            (0..d)
                .map(|j| {
                    let shifted = if j == 0 { Scalar::zero() } else { prev[j - 1].clone() };
                    shifted.add(&top.mul(&self.a[j]))
                })
                .collect()
        } else {
            let next = self.coeffs(k + 1);
            // x^{-1} = a_0^{-1} (x^{d-1} - a_{d-1} x^{d-2} - … - a_1)
            let low = next[0].mul(&self.a0_inv);
            (0..d)
                .map(|j| {
                    let shifted = if j + 1 < d { next[j + 1].clone() } else { Scalar::zero() };
                    let inv_part =
                        if j == d - 1 { low.clone() } else { low.mul(&self.a[j + 1]).neg() };
                    shifted.add(&inv_part)
                })
                .collect()
        };
        let v = Rc::new(v);
        self.cache.borrow_mut().insert(k, v.clone());
        v
    }

    /// Nonzero `(exponent, coefficient)` pairs of the reduced x^k.
    pub fn expand(&self, k: i32) -> Vec<(i32, Scalar)> {
        self.coeffs(k)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as i32, c.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_relation() {
        let r = PowerReduction::symbolic(3);
        let v = r.coeffs(3);
        assert_eq!(v[0], Scalar::a(0));
        assert_eq!(v[1], Scalar::a(1));
        assert_eq!(v[2], Scalar::a(2));
    }

    #[test]
    fn inverse_times_t_is_one() {
        for d in 1..=4u32 {
            let r = PowerReduction::symbolic(d);
            for k in -4..=6 {
                // x^k · x must equal x^{k+1}
                let v = r.coeffs(k);
                let mut shifted = vec![Scalar::zero(); d as usize];
                for (j, c) in v.iter().enumerate() {
                    for (i, e) in r.coeffs(j as i32 + 1).iter().enumerate() {
                        shifted[i] = shifted[i].add(&c.mul(e));
                    }
                }
                assert_eq!(shifted, *r.coeffs(k + 1), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn degree_one_is_scalar() {
        let r = PowerReduction::symbolic(1);
        assert_eq!(r.coeffs(3)[0], Scalar::a(0).pow(3).unwrap());
        assert_eq!(r.coeffs(-2)[0], Scalar::a(0).pow(-2).unwrap());
    }
}
