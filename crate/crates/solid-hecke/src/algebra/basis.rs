use super::{AlgebraError, BasisWord, Cell};

/// Largest level [`basis_enumerate`] accepts.
pub const BASIS_LEVEL_LIMIT: usize = 6;

/// All looping-basis words of H_n(q,d): loop exponents in 0..d, one block
/// per level. There are d^n · n! of them.
pub fn basis_enumerate(n: usize, d: u32) -> Result<Vec<BasisWord>, AlgebraError> {
    if n > BASIS_LEVEL_LIMIT {
        return Err(AlgebraError::ResourceLimit(n));
    }
    if n == 0 || d == 0 {
        return Err(AlgebraError::Malformed("need n ≥ 1 and d ≥ 1".into()));
    }
    let mut words = vec![Vec::<Cell>::new()];
    for m in 0..n {
        let mut next = Vec::with_capacity(words.len() * d as usize * (m + 1));
        for w in &words {
            for exp in 0..d as i32 {
                for glen in 0..=m as u8 {
                    let mut v = w.clone();
                    v.push(Cell::new(exp, glen));
                    next.push(v);
                }
            }
        }
        words = next;
    }
    words.iter().map(|c| BasisWord::from_cells(c)).collect()
}
