//! Mixed braid words in B_{1,n}: the loop generator `t` around the fixed
//! strand and the ordinary crossings `σ_1 … σ_{n-1}`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    T(i8),
    Sigma(usize, i8),
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::T(e) => Letter::T(-e),
            Letter::Sigma(i, e) => Letter::Sigma(i, -e),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MixedBraidWord {
    n: usize,
    letters: Vec<Letter>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator s{index} needs at least {} strands, word has {strands}", index + 1)]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("strand count must be at least 1")]
    NoStrands,
}

impl MixedBraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if n == 0 {
            return Err(BraidError::NoStrands);
        }
        for l in &letters {
            if let Letter::Sigma(i, _) = *l {
                if i == 0 || i >= n {
                    return Err(BraidError::IndexOutOfRange { index: i, strands: n });
                }
            }
        }
        Ok(MixedBraidWord { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n >= 1);
        MixedBraidWord { n, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of the σ exponents; loops contribute nothing.
    pub fn exponent_sum(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::T(_) => 0,
                Letter::Sigma(_, e) => *e as i64,
            })
            .sum()
    }

    pub fn inverse(&self) -> Self {
        MixedBraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self, BraidError> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(MixedBraidWord { n: self.n, letters })
    }

    /// `g⁻¹ · self · g`
    pub fn conjugate(&self, g: &Self) -> Result<Self, BraidError> {
        g.inverse().concat(self)?.concat(g)
    }

    /// `self · σ_n^{±1}` on one more strand.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        letters.push(Letter::Sigma(self.n, if positive { 1 } else { -1 }));
        MixedBraidWord { n: self.n + 1, letters }
    }

    /// The same letters read on `n ≥ self.strands()` strands.
    pub fn embed(&self, n: usize) -> Result<Self, BraidError> {
        if n < self.n {
            return Err(BraidError::StrandMismatch(self.n, n));
        }
        Ok(MixedBraidWord { n, letters: self.letters.clone() })
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        MixedBraidWord { n: self.n, letters: out }
    }

    /// Uniform letters over `t^{±1}, σ_i^{±1}`, never more than
    /// `max_t_run` consecutive loop letters (no limit when n = 1).
    pub fn random(n: usize, length: usize, max_t_run: usize, seed: u64) -> Self {
        assert!(n >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng, n, length, max_t_run)
    }

    pub fn random_with<R: Rng>(rng: &mut R, n: usize, length: usize, max_t_run: usize) -> Self {
        let choices = 2 * n;
        let mut letters = Vec::with_capacity(length);
        let mut run = 0;
        while letters.len() < length {
            let c = rng.gen_range(0..choices);
            let e = if c % 2 == 0 { 1 } else { -1 };
            let l = if c < 2 {
                Letter::T(e)
            } else {
                Letter::Sigma(c / 2, e)
            };
            if let Letter::T(_) = l {
                if run >= max_t_run && n > 1 {
                    continue;
                }
                run += 1;
            } else {
                run = 0;
            }
            letters.push(l);
        }
        MixedBraidWord { n, letters }
    }

    pub fn is_loop_free(&self) -> bool {
        self.letters.iter().all(|l| matches!(l, Letter::Sigma(..)))
    }
}

/// Deterministic random word; see [`MixedBraidWord::random`].
pub fn random_word(n: usize, length: usize, max_t_run: usize, seed: u64) -> MixedBraidWord {
    MixedBraidWord::random(n, length, max_t_run, seed)
}

impl fmt::Display for MixedBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let (name, e) = match l {
                Letter::T(e) => ("t".to_string(), e as i64),
                Letter::Sigma(k, e) => (format!("s{k}"), e as i64),
            };
            let power = e * (j - i) as i64;
            if !first {
                write!(f, " . ")?;
            }
            first = false;
            if power == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{power}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Parses the word grammar; `strands` fixes n, otherwise n = 1 + max σ index.
pub fn parse(text: &str, strands: Option<usize>) -> Result<MixedBraidWord, BraidError> {
    let letters = Parser { src: text.as_bytes(), pos: 0 }.word()?;
    let max_index = letters
        .iter()
        .filter_map(|l| match l {
            Letter::Sigma(i, _) => Some(*i),
            Letter::T(_) => None,
        })
        .max()
        .unwrap_or(0);
    match strands {
        Some(n) => MixedBraidWord::new(n, letters),
        None => MixedBraidWord::new(max_index + 1, letters),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, BraidError> {
        Err(BraidError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn word(mut self) -> Result<Vec<Letter>, BraidError> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Ok(out);
        }
        self.item(&mut out)?;
        loop {
            let had_ws = self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'.') => {
                    self.pos += 1;
                    self.skip_ws();
                }
                Some(_) if had_ws => {}
                Some(_) => return self.err("expected '.' or whitespace between items"),
            }
            self.item(&mut out)?;
        }
    }

    fn uint(&mut self) -> Result<usize, BraidError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a generator index");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("index too large"))
    }

    fn sint(&mut self) -> Result<i64, BraidError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            return self.err("expected an exponent");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("exponent too large"))
    }

    fn item(&mut self, out: &mut Vec<Letter>) -> Result<(), BraidError> {
        enum Gen {
            T,
            S(usize),
            Loop(usize),
        }
        let gen = match self.peek() {
            Some(b't') => {
                self.pos += 1;
                if self.peek() == Some(b'\'') {
                    self.pos += 1;
                    Gen::Loop(self.uint()?)
                } else {
                    Gen::T
                }
            }
            Some(b's') => {
                self.pos += 1;
                let i = self.uint()?;
                if i == 0 {
                    return self.err("crossing generators start at s1");
                }
                Gen::S(i)
            }
            _ => return self.err("expected 't', 's<i>' or \"t'<i>\""),
        };
        let k = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.sint()?
        } else {
            1
        };
        let e: i8 = if k < 0 { -1 } else { 1 };
        let reps = k.unsigned_abs() as usize;
        match gen {
            Gen::T => out.extend(std::iter::repeat_n(Letter::T(e), reps)),
            Gen::S(i) => out.extend(std::iter::repeat_n(Letter::Sigma(i, e), reps)),
            Gen::Loop(i) => {
                if reps > 0 {
                    out.extend((1..=i).rev().map(|j| Letter::Sigma(j, 1)));
                    out.extend(std::iter::repeat_n(Letter::T(e), reps));
                    out.extend((1..=i).map(|j| Letter::Sigma(j, -1)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_powers() {
        let w = parse("t^3 . s1^-1 . s2", None).unwrap();
        assert_eq!(w.strands(), 3);
        assert_eq!(
            w.letters(),
            &[
                Letter::T(1),
                Letter::T(1),
                Letter::T(1),
                Letter::Sigma(1, -1),
                Letter::Sigma(2, 1)
            ]
        );
        assert_eq!(w.to_string(), "t^3 . s1^-1 . s2");
    }

    #[test]
    fn loop_sugar_expands() {
        let w = parse("t'2^3", None).unwrap();
        let expect = parse("s2 s1 t t t s1^-1 s2^-1", None).unwrap();
        assert_eq!(w, expect);
        assert_eq!(w.exponent_sum(), 0);
        assert_eq!(parse("t'0^2", None).unwrap(), parse("t^2", None).unwrap());
    }

    #[test]
    fn empty_and_errors() {
        let w = parse("", Some(1)).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.strands(), 1);
        assert_eq!(parse("   ", None).unwrap().strands(), 1);
        assert!(matches!(parse("s2", Some(2)), Err(BraidError::IndexOutOfRange { .. })));
        assert!(matches!(parse("t^", None), Err(BraidError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("x", None), Err(BraidError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("s0", None), Err(BraidError::Syntax { .. })));
        assert!(matches!(parse("s1s2", None), Err(BraidError::Syntax { .. })));
    }

    #[test]
    fn markov_move_generators() {
        let t = parse("t", Some(2)).unwrap();
        let s = parse("s1", None).unwrap();
        assert_eq!(t.conjugate(&s).unwrap(), parse("s1^-1 t s1", None).unwrap());
        assert_eq!(MixedBraidWord::empty(1).stabilize(true), parse("s1", None).unwrap());
        let t3 = parse("t^3", None).unwrap().stabilize(false);
        assert_eq!(t3, parse("t^3 s1^-1", None).unwrap());
        assert!(t.conjugate(&parse("s2", None).unwrap()).is_err());
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(parse("s1^3", None).unwrap().exponent_sum(), 3);
        assert_eq!(parse("t^3 s1^-1 s2", None).unwrap().exponent_sum(), 0);
    }

    #[test]
    fn random_words_are_deterministic() {
        let a = random_word(1, 4, 4, 0);
        assert_eq!(a.len(), 4);
        assert!(a.letters().iter().all(|l| matches!(l, Letter::T(_))));
        assert_eq!(random_word(3, 10, 3, 7), random_word(3, 10, 3, 7));
        assert_ne!(random_word(3, 10, 3, 7), random_word(3, 10, 3, 8));
    }

    #[test]
    fn free_reduction() {
        let w = parse("t s1 s1^-1 t^-1 s2", None).unwrap();
        assert_eq!(w.free_reduce(), parse("s2", None).unwrap());
    }
}
