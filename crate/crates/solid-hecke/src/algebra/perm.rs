//! Permutations and the canonical reduced words of the symmetric group,
//! written as blocks g_m g_{m-1} … g_{m-ℓ+1} with increasing heads m.

use smallvec::SmallVec;

pub(crate) type Perm = SmallVec<[u8; 8]>;

pub(crate) fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// Right multiplication by s_i swaps positions i-1 and i.
pub(crate) fn swap(p: &mut Perm, i: usize) {
    p.swap(i - 1, i);
}

/// Whether ℓ(p·s_i) > ℓ(p).
pub(crate) fn ascends(p: &Perm, i: usize) -> bool {
    p[i - 1] < p[i]
}

/// `glens[m]` is the block length at head m; `glens[0]` is always 0.
pub(crate) fn from_glens(glens: impl Iterator<Item = u8>, n: usize) -> Perm {
    let mut p = identity(n);
    for (m, l) in glens.enumerate() {
        for j in ((m + 1 - l as usize)..=m).rev() {
            if j >= 1 {
                swap(&mut p, j);
            }
        }
    }
    p
}

pub(crate) fn to_glens(p: &Perm) -> SmallVec<[u8; 8]> {
    let n = p.len();
    let mut w = p.clone();
    let mut out: SmallVec<[u8; 8]> = smallvec::smallvec![0; n];
    for m in (1..n).rev() {
        let pos = w.iter().position(|&v| v as usize == m).unwrap();
        let l = m - pos;
        out[m] = l as u8;
        for j in (pos + 1)..=m {
            swap(&mut w, j);
        }
    }
    out
}

/// Letters of the canonical reduced word, left to right.
pub(crate) fn letters(glens: impl Iterator<Item = u8>) -> SmallVec<[usize; 16]> {
    let mut out = SmallVec::new();
    for (m, l) in glens.enumerate() {
        for j in ((m + 1 - l as usize)..=m).rev() {
            out.push(j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(n: usize) -> Vec<Perm> {
        let mut out = vec![];
        let mut p: Vec<u8> = (0..n as u8).collect();
        fn rec(k: usize, p: &mut Vec<u8>, out: &mut Vec<Perm>) {
            if k == p.len() {
                out.push(p.iter().copied().collect());
                return;
            }
            for i in k..p.len() {
                p.swap(k, i);
                rec(k + 1, p, out);
                p.swap(k, i);
            }
        }
        rec(0, &mut p, &mut out);
        out
    }

    #[test]
    fn glens_bijection() {
        for n in 1..=5 {
            for p in all_perms(n) {
                let g = to_glens(&p);
                assert_eq!(from_glens(g.iter().copied(), n), p);
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let len: usize = g.iter().map(|&l| l as usize).sum();
                assert_eq!(len, inversions, "canonical word must be reduced");
            }
        }
    }

    #[test]
    fn braid_relation_example() {
        // g_2 g_1 · g_2 = g_1 · g_2 g_1
        let mut p = from_glens([0u8, 0, 2].into_iter(), 3);
        assert!(ascends(&p, 2));
        swap(&mut p, 2);
        assert_eq!(to_glens(&p).as_slice(), &[0, 1, 2]);
    }
}
