//! Exact coefficient arithmetic: Laurent polynomials and rational functions
//! over the integers in the symbols `qh`, `lh`, `z`, `s_k`, `a_j`.

mod collect;
mod gcd;
mod identity;
mod poly;
mod ratfunc;
mod symbol;

use num_bigint::BigInt;

pub use collect::collect_in;
pub use identity::{probably_equal, IdentityTest, IDENTITY_PRIME};
pub use gcd::{content_in, gcd, normalize_sign, split_monomial};
pub use poly::{Coeff, Monomial, Poly};
pub use ratfunc::{RatFunc, ScalarError};
pub use symbol::{Symbol, SymbolParseError};

/// Integer polynomial used throughout the engine.
pub type IntPoly = Poly<BigInt>;

/// The coefficient field of every algebra element.
pub type Scalar = RatFunc<BigInt>;
