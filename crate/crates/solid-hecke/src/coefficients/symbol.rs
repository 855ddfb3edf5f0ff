use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A generator of the coefficient ring.
///
/// `Qh` and `Lh` are the square roots of q and λ; q and λ themselves are
/// never stored as separate symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    Qh,
    Lh,
    Z,
    /// Trace parameter attached to the k-th power of a loop, k ≠ 0.
    S(i32),
    /// Coefficient of t^j in the cyclotomic relation.
    A(u32),
}

impl Symbol {
    fn key(self) -> (u8, u64) {
        match self {
            Symbol::Qh => (0, 0),
            Symbol::Lh => (1, 0),
            Symbol::Z => (2, 0),
            Symbol::S(k) => (3, 2 * (k.unsigned_abs() as u64 - 1) + u64::from(k < 0)),
            Symbol::A(j) => (4, j as u64),
        }
    }

    /// `S(k)` with the convention `s_0 = 1` handled by the caller.
    pub fn s(k: i32) -> Symbol {
        assert!(k != 0, "s_0 is the constant 1, not a symbol");
        Symbol::S(k)
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Qh => write!(f, "qh"),
            Symbol::Lh => write!(f, "lh"),
            Symbol::Z => write!(f, "z"),
            Symbol::S(k) => write!(f, "s{k}"),
            Symbol::A(j) => write!(f, "a{j}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown symbol `{0}`")]
pub struct SymbolParseError(pub String);

impl FromStr for Symbol {
    type Err = SymbolParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SymbolParseError(s.to_string());
        match s {
            "qh" => Ok(Symbol::Qh),
            "lh" => Ok(Symbol::Lh),
            "z" => Ok(Symbol::Z),
            _ => {
                if let Some(rest) = s.strip_prefix('s') {
                    let k: i32 = rest.parse().map_err(|_| err())?;
                    if k == 0 {
                        return Err(err());
                    }
                    Ok(Symbol::S(k))
                } else if let Some(rest) = s.strip_prefix('a') {
                    if rest.starts_with('+') || rest.starts_with('-') {
                        return Err(err());
                    }
                    Ok(Symbol::A(rest.parse().map_err(|_| err())?))
                } else {
                    Err(err())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matches_print_convention() {
        let mut v = [
            Symbol::A(1),
            Symbol::S(-1),
            Symbol::A(0),
            Symbol::S(2),
            Symbol::Z,
            Symbol::S(1),
            Symbol::Lh,
            Symbol::Qh,
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["qh", "lh", "z", "s1", "s-1", "s2", "a0", "a1"]);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["qh", "lh", "z", "s3", "s-2", "a0", "a12"] {
            assert_eq!(s.parse::<Symbol>().unwrap().to_string(), s);
        }
        assert!("s0".parse::<Symbol>().is_err());
        assert!("q".parse::<Symbol>().is_err());
    }
}
