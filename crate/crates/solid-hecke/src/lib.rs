//! Type-B Hecke algebras H_n(q,∞) and H_n(q,d), their Markov trace, and the
//! normalized link invariant of closed mixed braids in the solid torus.

pub mod coefficients;
pub mod braid;
pub mod algebra;
pub mod trace;
pub mod invariant;
pub mod oracle;
pub mod checks;
