//! Randomized equality testing by evaluation at points modulo a prime.

use rand::Rng;

use super::gcd::split_monomial;
use super::{Coeff, RatFunc};

/// Prime used by [`probably_equal`]: 2^61 − 1.
pub const IDENTITY_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityTest {
    /// No evaluated point told the two values apart.
    pub equal: bool,
    pub points: usize,
    /// Upper bound on the chance that unequal values all agreed:
    /// (degree / p)^points.
    pub error_bound: f64,
}

/// Compares `a` and `b` at `points` random points mod [`IDENTITY_PRIME`].
/// Points where a denominator vanishes are redrawn.
pub fn probably_equal<C: Coeff, R: Rng>(a: &RatFunc<C>, b: &RatFunc<C>, points: usize, rng: &mut R) -> IdentityTest {
    let p = IDENTITY_PRIME;
    let cross = a.num().mul(b.den()).sub(&b.num().mul(a.den()));
    let (_, shifted) = split_monomial(&cross);
    let degree = shifted.total_degree().max(1) as f64;
    let symbols: Vec<_> = a
        .num()
        .symbols()
        .into_iter()
        .chain(a.den().symbols())
        .chain(b.num().symbols())
        .chain(b.den().symbols())
        .collect();
    let mut equal = true;
    let mut done = 0;
    while done < points {
        let vals: Vec<(super::Symbol, u64)> = symbols.iter().map(|&s| (s, rng.gen_range(1..p))).collect();
        let point = |s| vals.iter().find(|(t, _)| *t == s).map_or(0, |&(_, v)| v);
        let (Ok(x), Ok(y)) = (a.eval_mod_p(&point, p), b.eval_mod_p(&point, p)) else {
            continue;
        };
        done += 1;
        if x != y {
            equal = false;
            break;
        }
    }
    IdentityTest { equal, points: done, error_bound: (degree / p as f64).powi(points as i32) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Scalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_and_identifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = Scalar::q();
        let one = Scalar::one();
        let lhs = q.mul(&q).sub(&one).div(&q.sub(&one)).unwrap();
        let t = probably_equal(&lhs, &q.add(&one), 20, &mut rng);
        assert!(t.equal && t.points == 20 && t.error_bound < 1e-300);
        assert!(!probably_equal(&q, &q.add(&Scalar::z()), 20, &mut rng).equal);
    }
}
