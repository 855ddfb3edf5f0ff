//! The algebras H_n(q,∞) and H_n(q,d): elements on the two canonical bases,
//! the quotient map from mixed braids, products, and basis conversions.
//!
//! Both bases share one word shape. A word at level n is a tower of n cells;
//! cell m holds a loop exponent k_m and a block length ℓ_m ≤ m, standing for
//! `L_m^{k_m} · g_m g_{m-1} … g_{m-ℓ_m+1}`, multiplied left to right for
//! m = 0, 1, …, n-1. In the commuting basis L_m is t_m = g_m…g_1 t g_1…g_m;
//! in the looping basis it is t'_m = g_m…g_1 t g_1^{-1}…g_m^{-1}. Because
//! both loops commute with g_j for j < m, the tower equals the sorted loop
//! monomial followed by the canonical reduced word of the symmetric group.

mod basis;
mod cyclo;
mod engine;
mod expr;
mod identities;
pub(crate) mod perm;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

use crate::coefficients::{Scalar, ScalarError, Symbol};

pub use basis::{basis_enumerate, BASIS_LEVEL_LIMIT};
pub use cyclo::PowerReduction;
pub use engine::Algebra;
pub use expr::{Expr, Factor};
pub use identities::{
    fl_reorder, fl_reorder_lhs, lemma2_slide, lemma3_expand, InductiveForm, InductiveTail,
};

#[cfg(test)]
mod tests_engine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Infinity,
    /// t^d = a_{d-1} t^{d-1} + … + a_0
    Cyclotomic(u32),
}

impl Mode {
    pub fn degree(self) -> Option<u32> {
        match self {
            Mode::Infinity => None,
            Mode::Cyclotomic(d) => Some(d),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Infinity => write!(f, "infinity"),
            Mode::Cyclotomic(d) => write!(f, "cyclo:{d}"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "infinity" || s == "inf" {
            return Ok(Mode::Infinity);
        }
        let rest = s
            .strip_prefix("cyclo:")
            .ok_or_else(|| format!("unknown mode `{s}` (expected infinity or cyclo:<d>)"))?;
        match rest.parse::<u32>() {
            Ok(d) if d >= 1 => Ok(Mode::Cyclotomic(d)),
            _ => Err(format!("cyclotomic degree must be a positive integer, got `{rest}`")),
        }
    }
}

/// Which loops the t-part of a word is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// t_i = g_i…g_1 t g_1…g_i, pairwise commuting.
    Commuting,
    /// t'_i = g_i…g_1 t g_1^{-1}…g_i^{-1}.
    Looping,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Commuting => "sigma2",
            Flavor::Looping => "sigma",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell {
    pub exp: i32,
    pub glen: u8,
}

impl Cell {
    pub const fn new(exp: i32, glen: u8) -> Cell {
        Cell { exp, glen }
    }
}

/// One canonical basis word. The flavor lives on the enclosing [`Element`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisWord(SmallVec<[Cell; 6]>);

impl BasisWord {
    pub fn identity(n: usize) -> BasisWord {
        BasisWord(smallvec::smallvec![Cell::default(); n])
    }

    pub fn from_cells(cells: &[Cell]) -> Result<BasisWord, AlgebraError> {
        for (m, c) in cells.iter().enumerate() {
            if c.glen as usize > m {
                return Err(AlgebraError::Malformed(format!(
                    "block length {} exceeds head {m}",
                    c.glen
                )));
            }
        }
        Ok(BasisWord(cells.iter().copied().collect()))
    }

    /// Builds a word from sorted `(index, exponent)` pairs and blocks
    /// `(head, r)` denoting g_head g_{head-1} … g_{head-r}.
    pub fn from_parts(
        n: usize,
        tvec: &[(usize, i32)],
        aword: &[(usize, usize)],
    ) -> Result<BasisWord, AlgebraError> {
        let mut w = BasisWord::identity(n);
        let mut last = None;
        for &(i, k) in tvec {
            if i >= n || last.is_some_and(|l| l >= i) || k == 0 {
                return Err(AlgebraError::Malformed(format!("bad loop entry ({i},{k})")));
            }
            last = Some(i);
            w.0[i].exp = k;
        }
        let mut last = 0;
        for &(h, r) in aword {
            if h <= last || h >= n || r >= h {
                return Err(AlgebraError::Malformed(format!("bad block ({h}:{r})")));
            }
            last = h;
            w.0[h].glen = (r + 1) as u8;
        }
        Ok(w)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    pub fn cell(&self, m: usize) -> Cell {
        self.0[m]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|c| *c == Cell::default())
    }

    pub fn top(&self) -> Cell {
        *self.0.last().expect("word of level zero")
    }

    pub fn prefix(&self) -> BasisWord {
        BasisWord(self.0[..self.0.len() - 1].iter().copied().collect())
    }

    pub fn with_top(&self, c: Cell) -> BasisWord {
        let mut v = self.0.clone();
        v.push(c);
        BasisWord(v)
    }

    pub fn with_cell(&self, m: usize, c: Cell) -> BasisWord {
        let mut v = self.0.clone();
        v[m] = c;
        BasisWord(v)
    }

    /// The same word one level up (a trailing identity cell).
    pub fn embed(&self) -> BasisWord {
        self.with_top(Cell::default())
    }

    pub(crate) fn glens(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().map(|c| c.glen)
    }

    pub(crate) fn with_glens(&self, glens: &[u8]) -> BasisWord {
        let mut v = self.0.clone();
        for (c, &g) in v.iter_mut().zip(glens) {
            c.glen = g;
        }
        BasisWord(v)
    }

    pub fn tvec(&self) -> Vec<(usize, i32)> {
        self.0.iter().enumerate().filter(|(_, c)| c.exp != 0).map(|(i, c)| (i, c.exp)).collect()
    }

    pub fn aword(&self) -> Vec<(usize, usize)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| c.glen > 0)
            .map(|(i, c)| (i, c.glen as usize - 1))
            .collect()
    }

    pub fn g_length(&self) -> usize {
        self.0.iter().map(|c| c.glen as usize).sum()
    }

    fn sort_key(&self) -> SortKey {
        (self.tvec(), self.aword())
    }
}

type SortKey = (Vec<(usize, i32)>, Vec<(usize, usize)>);

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.tvec().iter().map(|(i, k)| format!("t{i}^{k}")).collect();
        write!(f, "[{}][", t.join(" "))?;
        for (h, r) in self.aword() {
            write!(f, "({h}:{r})")?;
        }
        write!(f, "]")
    }
}

pub(crate) type Terms = BTreeMap<BasisWord, Scalar>;

pub(crate) fn acc(terms: &mut Terms, w: BasisWord, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&w) {
        Some(v) => {
            let s = v.add(&c);
            if s.is_zero() {
                terms.remove(&w);
            } else {
                *v = s;
            }
        }
        None => {
            terms.insert(w, c);
        }
    }
}

pub(crate) fn acc_all(terms: &mut Terms, other: &Terms, c: &Scalar) {
    for (w, v) in other {
        acc(terms, w.clone(), v.mul(c));
    }
}

pub(crate) fn single(w: BasisWord) -> Terms {
    let mut t = Terms::new();
    t.insert(w, Scalar::one());
    t
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),
    #[error("basis flavor mismatch")]
    FlavorMismatch,
    #[error("generator index {index} out of range at level {level}")]
    IndexOutOfRange { index: usize, level: usize },
    #[error("operation needs cyclotomic mode")]
    NotCyclotomic,
    #[error("operation needs the generic (infinity) mode")]
    NotGeneric,
    #[error("level {0} exceeds the enumeration bound")]
    ResourceLimit(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A finite linear combination of basis words at a fixed level, mode and
/// flavor, merged and free of zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    level: usize,
    mode: Mode,
    flavor: Flavor,
    terms: Terms,
}

impl Element {
    pub fn zero(level: usize, mode: Mode, flavor: Flavor) -> Element {
        Element { level, mode, flavor, terms: Terms::new() }
    }

    pub fn one(level: usize, mode: Mode, flavor: Flavor) -> Element {
        Element::word(BasisWord::identity(level), mode, flavor)
    }

    pub fn word(w: BasisWord, mode: Mode, flavor: Flavor) -> Element {
        Element { level: w.level(), mode, flavor, terms: single(w) }
    }

    pub fn from_terms(
        level: usize,
        mode: Mode,
        flavor: Flavor,
        terms: impl IntoIterator<Item = (BasisWord, Scalar)>,
    ) -> Element {
        let mut t = Terms::new();
        for (w, c) in terms {
            assert_eq!(w.level(), level, "word level differs from element level");
            acc(&mut t, w, c);
        }
        Element { level, mode, flavor, terms: t }
    }

    pub(crate) fn raw(level: usize, mode: Mode, flavor: Flavor, terms: Terms) -> Element {
        Element { level, mode, flavor, terms }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub(crate) fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &BasisWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.level != other.level {
            return Err(AlgebraError::LevelMismatch(self.level, other.level));
        }
        if self.mode != other.mode {
            return Err(AlgebraError::ModeMismatch(self.mode, other.mode));
        }
        if self.flavor != other.flavor {
            return Err(AlgebraError::FlavorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check(other)?;
        let mut t = self.terms.clone();
        acc_all(&mut t, &other.terms, &Scalar::one());
        Ok(Element { terms: t, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut t = Terms::new();
        acc_all(&mut t, &self.terms, c);
        Element { terms: t, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Element {
        Element { level: self.level, mode: self.mode, flavor: self.flavor, terms: Terms::new() }
    }

    pub fn map_coefficients(
        &self,
        f: impl Fn(&Scalar) -> Result<Scalar, ScalarError>,
    ) -> Result<Element, ScalarError> {
        let mut t = Terms::new();
        for (w, c) in &self.terms {
            acc(&mut t, w.clone(), f(c)?);
        }
        Ok(Element { terms: t, ..self.clone_shape() })
    }

    /// The same element one level up.
    pub fn embed(&self) -> Element {
        let terms = self.terms.iter().map(|(w, c)| (w.embed(), c.clone())).collect();
        Element { level: self.level + 1, terms, ..self.clone_shape() }
    }

    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Scalar>) -> Result<Element, ScalarError> {
        self.map_coefficients(|c| c.substitute(bindings))
    }

    /// Terms in print order: lexicographic in (loop vector, blocks).
    pub fn sorted_terms(&self) -> Vec<(&BasisWord, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(w, _)| w.sort_key());
        v
    }

    pub fn header(&self) -> String {
        format!("{} level={} mode={}", self.flavor.name(), self.level, self.mode)
    }

    pub fn body(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.sorted_terms()
            .iter()
            .map(|(w, c)| format!("({}) * {w}", c.reduced()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        write!(f, "{}", self.body())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_parsing() {
        assert_eq!("infinity".parse::<Mode>(), Ok(Mode::Infinity));
        assert_eq!("cyclo:3".parse::<Mode>(), Ok(Mode::Cyclotomic(3)));
        assert!("cyclo:0".parse::<Mode>().is_err());
        assert_eq!(Mode::Cyclotomic(2).to_string(), "cyclo:2");
    }

    #[test]
    fn word_parts_round_trip() {
        let w = BasisWord::from_parts(4, &[(0, 2), (2, -1)], &[(1, 0), (3, 2)]).unwrap();
        assert_eq!(w.tvec(), vec![(0, 2), (2, -1)]);
        assert_eq!(w.aword(), vec![(1, 0), (3, 2)]);
        assert_eq!(w.to_string(), "[t0^2 t2^-1][(1:0)(3:2)]");
        assert!(BasisWord::from_parts(3, &[], &[(2, 2)]).is_err());
        assert!(BasisWord::from_parts(3, &[(1, 1), (1, 2)], &[]).is_err());
    }

    #[test]
    fn element_text_form() {
        let w = BasisWord::from_parts(2, &[(1, 1)], &[(1, 0)]).unwrap();
        let e = Element::from_terms(
            2,
            Mode::Infinity,
            Flavor::Commuting,
            [(w, Scalar::q().sub(&Scalar::one())), (BasisWord::identity(2), Scalar::q())],
        );
        assert_eq!(
            e.to_string(),
            "sigma2 level=2 mode=infinity\n(qh^2) * [][] + (qh^2 - 1) * [t1^1][(1:0)]"
        );
    }
}
