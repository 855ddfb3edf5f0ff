//! Product engines for the two bases.
//!
//! Right multiplication by g_j only touches the symmetric-group part of a
//! word and is shared. Right multiplication by t differs: in the commuting
//! basis the letter is pushed left through the reduced word, one letter at
//! a time; in the looping basis it is absorbed by the top cell of the tower
//! through memoized tail rules.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use smallvec::SmallVec;

use super::{
    acc, acc_all, perm, single, AlgebraError, BasisWord, Cell, Element, Flavor, Mode,
    PowerReduction, Terms,
};
use crate::braid::{Letter, MixedBraidWord};
use crate::coefficients::Scalar;

/// A letter of the algebra: t^{±1} or g_j^{±1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Gen {
    T(i8),
    G(usize, i8),
}

type Kept = SmallVec<[usize; 16]>;

#[derive(Default)]
struct Memo {
    tprime: HashMap<(usize, i32, i8), Rc<Terms>>,
    tail: HashMap<(usize, i32, u8, i8), Rc<Terms>>,
    products: HashMap<(BasisWord, BasisWord), Rc<Terms>>,
    conj_loops: HashMap<(i32, bool), Rc<Terms>>,
    looping_of: HashMap<BasisWord, Rc<Terms>>,
    tpowers: HashMap<(usize, i32), Rc<Terms>>,
}

/// Arithmetic context for one mode. Holds per-session caches; not `Sync`,
/// so parallel callers build one per worker.
pub struct Algebra {
    mode: Mode,
    powers: Option<PowerReduction>,
    q: Scalar,
    qi: Scalar,
    qm1: Scalar,
    qim1: Scalar,
    memo: RefCell<Memo>,
}

impl Algebra {
    pub fn new(mode: Mode) -> Algebra {
        let q = Scalar::q();
        let qi = Scalar::q_pow(-1);
        Algebra {
            mode,
            powers: mode.degree().map(PowerReduction::symbolic),
            qm1: q.sub(&Scalar::one()),
            qim1: qi.sub(&Scalar::one()),
            q,
            qi,
            memo: RefCell::new(Memo::default()),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn powers(&self) -> Option<&PowerReduction> {
        self.powers.as_ref()
    }

    pub fn clear_caches(&self) {
        *self.memo.borrow_mut() = Memo::default();
    }

    /// The basis products are carried out in for this mode.
    pub fn working_flavor(&self) -> Flavor {
        match self.mode {
            Mode::Infinity => Flavor::Commuting,
            Mode::Cyclotomic(_) => Flavor::Looping,
        }
    }

    // ---- constructors -------------------------------------------------

    pub fn one(&self, n: usize, flavor: Flavor) -> Element {
        Element::one(n, self.mode, flavor)
    }

    pub fn generator(&self, n: usize, i: usize, flavor: Flavor) -> Result<Element, AlgebraError> {
        if i == 0 || i >= n {
            return Err(AlgebraError::IndexOutOfRange { index: i, level: n });
        }
        let w = BasisWord::identity(n).with_cell(i, Cell::new(0, 1));
        Ok(Element::word(w, self.mode, flavor))
    }

    pub fn loop_generator(&self, n: usize, flavor: Flavor) -> Element {
        self.word_element(n, &[Gen::T(1)], flavor).expect("t exists at every level")
    }

    pub(crate) fn word_element(
        &self,
        n: usize,
        gens: &[Gen],
        flavor: Flavor,
    ) -> Result<Element, AlgebraError> {
        self.check_flavor(flavor)?;
        for g in gens {
            if let Gen::G(j, _) = *g {
                if j == 0 || j >= n {
                    return Err(AlgebraError::IndexOutOfRange { index: j, level: n });
                }
            }
        }
        let t = self.fold(flavor, single(BasisWord::identity(n)), gens);
        Ok(Element::raw(n, self.mode, flavor, t))
    }

    /// Image of a mixed braid: commuting basis in the generic mode, looping
    /// basis in cyclotomic modes (the only one whose loop exponents reduce).
    pub fn from_braid(&self, w: &MixedBraidWord) -> Element {
        self.from_braid_in(w, self.working_flavor()).expect("working flavor is valid")
    }

    pub fn from_braid_in(&self, w: &MixedBraidWord, flavor: Flavor) -> Result<Element, AlgebraError> {
        let gens: Vec<Gen> = w
            .letters()
            .iter()
            .map(|l| match *l {
                Letter::T(e) => Gen::T(e),
                Letter::Sigma(i, e) => Gen::G(i, e),
            })
            .collect();
        self.word_element(w.strands(), &gens, flavor)
    }

    fn check_flavor(&self, flavor: Flavor) -> Result<(), AlgebraError> {
        if flavor == Flavor::Commuting && self.mode != Mode::Infinity {
            return Err(AlgebraError::NotGeneric);
        }
        Ok(())
    }

    fn check_element(&self, e: &Element) -> Result<(), AlgebraError> {
        if e.mode() != self.mode {
            return Err(AlgebraError::ModeMismatch(e.mode(), self.mode));
        }
        self.check_flavor(e.flavor())
    }

    // ---- public products ----------------------------------------------

    /// e · t^eps in the commuting basis.
    pub fn push_t_left(&self, e: &Element, eps: i8) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        if e.flavor() != Flavor::Commuting {
            return Err(AlgebraError::FlavorMismatch);
        }
        let t = self.c_rmul_t(e.terms(), 0, eps);
        Ok(Element::raw(e.level(), self.mode, e.flavor(), t))
    }

    /// e · g_i^eps in either basis.
    pub fn a_rightmul(&self, e: &Element, i: usize, eps: i8) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        if i == 0 || i >= e.level() {
            return Err(AlgebraError::IndexOutOfRange { index: i, level: e.level() });
        }
        let t = self.rmul_g(e.terms(), i, eps);
        Ok(Element::raw(e.level(), self.mode, e.flavor(), t))
    }

    /// e · t^eps in either basis.
    pub fn rmul_t(&self, e: &Element, eps: i8) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        let t = self.fold(e.flavor(), e.terms().clone(), &[Gen::T(eps)]);
        Ok(Element::raw(e.level(), self.mode, e.flavor(), t))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        if a.level() != b.level() {
            return Err(AlgebraError::LevelMismatch(a.level(), b.level()));
        }
        if a.flavor() != b.flavor() {
            return Err(AlgebraError::FlavorMismatch);
        }
        let mut out = Terms::new();
        match a.flavor() {
            Flavor::Commuting => {
                for (bw, bc) in b.terms() {
                    let part = self.fold(Flavor::Commuting, a.terms().clone(), &commuting_letters(bw));
                    acc_all(&mut out, &part, bc);
                }
            }
            Flavor::Looping => {
                for (aw, ac) in a.terms() {
                    for (bw, bc) in b.terms() {
                        let part = self.l_mul_words(aw, bw);
                        acc_all(&mut out, &part, &ac.mul(bc));
                    }
                }
            }
        }
        Ok(Element::raw(a.level(), self.mode, a.flavor(), out))
    }

    // ---- conversions ----------------------------------------------------

    pub fn convert(&self, e: &Element, flavor: Flavor) -> Result<Element, AlgebraError> {
        self.check_element(e)?;
        self.check_flavor(flavor)?;
        if e.flavor() == flavor {
            return Ok(e.clone());
        }
        let mut out = Terms::new();
        for (w, c) in e.terms() {
            let part = match flavor {
                Flavor::Looping => self.looping_of(w),
                Flavor::Commuting => Rc::new(self.fold(
                    Flavor::Commuting,
                    single(BasisWord::identity(w.level())),
                    &looping_letters(w),
                )),
            };
            acc_all(&mut out, &part, c);
        }
        Ok(Element::raw(e.level(), self.mode, flavor, out))
    }

    pub fn to_looping(&self, e: &Element) -> Result<Element, AlgebraError> {
        self.convert(e, Flavor::Looping)
    }

    pub fn to_commuting(&self, e: &Element) -> Result<Element, AlgebraError> {
        self.convert(e, Flavor::Commuting)
    }

    /// Equality of two elements of this algebra, possibly in different bases.
    pub fn equal(&self, a: &Element, b: &Element) -> Result<bool, AlgebraError> {
        if a.flavor() == b.flavor() {
            return Ok(a == b);
        }
        Ok(self.to_looping(a)? == self.to_looping(b)?)
    }

    /// Rewrites an element computed without the cyclotomic relation (any
    /// mode, any basis) into the reduced looping basis of this algebra.
    pub fn cyclotomic_reduce(&self, e: &Element) -> Result<Element, AlgebraError> {
        if self.powers.is_none() {
            return Err(AlgebraError::NotCyclotomic);
        }
        let mut out = Terms::new();
        for (w, c) in e.terms() {
            let letters = match e.flavor() {
                Flavor::Commuting => commuting_letters(w),
                Flavor::Looping => looping_letters(w),
            };
            let part = self.fold(Flavor::Looping, single(BasisWord::identity(w.level())), &letters);
            acc_all(&mut out, &part, c);
        }
        Ok(Element::raw(e.level(), self.mode, Flavor::Looping, out))
    }

    /// Product of two looping-basis words, memoized.
    pub fn looping_product(&self, p: &BasisWord, h: &BasisWord) -> Rc<Terms> {
        self.l_mul_words(p, h)
    }

    pub(super) fn cached_tpower(&self, key: (usize, i32)) -> Option<Rc<Terms>> {
        self.memo.borrow().tpowers.get(&key).cloned()
    }

    pub(super) fn store_tpower(&self, key: (usize, i32), t: Rc<Terms>) {
        self.memo.borrow_mut().tpowers.insert(key, t);
    }

    pub(super) fn q_consts(&self) -> (&Scalar, &Scalar, &Scalar, &Scalar) {
        (&self.q, &self.qi, &self.qm1, &self.qim1)
    }

    pub(super) fn rmul_g_terms(&self, terms: &Terms, j: usize, eps: i8) -> Terms {
        self.rmul_g(terms, j, eps)
    }

    pub(super) fn reduce_word(&self, w: BasisWord) -> Terms {
        let mut out = Terms::new();
        self.reduce_word_into(&mut out, w, Scalar::one());
        out
    }

    fn looping_of(&self, w: &BasisWord) -> Rc<Terms> {
        if let Some(r) = self.memo.borrow().looping_of.get(w) {
            return r.clone();
        }
        let r = Rc::new(self.fold(
            Flavor::Looping,
            single(BasisWord::identity(w.level())),
            &commuting_letters(w),
        ));
        self.memo.borrow_mut().looping_of.insert(w.clone(), r.clone());
        r
    }

    // ---- letter folding -------------------------------------------------

    pub(crate) fn fold(&self, flavor: Flavor, mut terms: Terms, gens: &[Gen]) -> Terms {
        for g in gens {
            terms = match (*g, flavor) {
                (Gen::G(j, e), _) => self.rmul_g(&terms, j, e),
                (Gen::T(e), Flavor::Commuting) => self.c_rmul_t(&terms, 0, e),
                (Gen::T(e), Flavor::Looping) => self.l_rmul_t(&terms, e),
            };
        }
        terms
    }

    /// Right multiplication by g_j^eps; only the reduced word changes.
    fn rmul_g(&self, terms: &Terms, j: usize, eps: i8) -> Terms {
        if eps < 0 {
            let up = self.rmul_g(terms, j, 1);
            let mut out = Terms::new();
            acc_all(&mut out, &up, &self.qi);
            acc_all(&mut out, terms, &self.qim1);
            return out;
        }
        let mut out = Terms::new();
        for (w, c) in terms {
            let mut p = perm::from_glens(w.glens(), w.level());
            if perm::ascends(&p, j) {
                perm::swap(&mut p, j);
                acc(&mut out, w.with_glens(&perm::to_glens(&p)), c.clone());
            } else {
                acc(&mut out, w.clone(), c.mul(&self.qm1));
                perm::swap(&mut p, j);
                acc(&mut out, w.with_glens(&perm::to_glens(&p)), c.mul(&self.q));
            }
        }
        out
    }

    // ---- commuting basis ------------------------------------------------

    /// Right multiplication by t_idx^eps, pushing the loop leftwards through
    /// each reduced word.
    fn c_rmul_t(&self, terms: &Terms, idx: usize, eps: i8) -> Terms {
        let mut out = Terms::new();
        for (w, c) in terms {
            let letters = perm::letters(w.glens());
            let mut branches = Vec::new();
            self.push_branches(&letters, letters.len(), idx, eps, c.clone(), Kept::new(), &mut branches);
            let zeros = vec![0u8; w.level()];
            for (coef, fin, kept) in branches {
                let base = w.with_glens(&zeros);
                let cell = base.cell(fin);
                let base = base.with_cell(fin, Cell::new(cell.exp + eps as i32, 0));
                let mut a = single(base);
                for &l in kept.iter().rev() {
                    a = self.rmul_g(&a, l, 1);
                }
                acc_all(&mut out, &a, &coef);
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn push_branches(
        &self,
        letters: &[usize],
        pos: usize,
        idx: usize,
        eps: i8,
        coef: Scalar,
        mut kept: Kept,
        out: &mut Vec<(Scalar, usize, Kept)>,
    ) {
        if pos == 0 {
            out.push((coef, idx, kept));
            return;
        }
        let a = letters[pos - 1];
        // (coefficient, new index) for keeping and for dropping g_a
        let rule = if eps > 0 {
            if idx == a {
                Some(((&self.q, a - 1), (&self.qm1, a)))
            } else if idx + 1 == a {
                Some(((&self.qi, a), (&self.qim1, a)))
            } else {
                None
            }
        } else if idx + 1 == a {
            Some(((&self.q, a), (&self.qm1, a - 1)))
        } else if idx == a {
            Some(((&self.qi, a - 1), (&self.qim1, a - 1)))
        } else {
            None
        };
        match rule {
            None => {
                kept.push(a);
                self.push_branches(letters, pos - 1, idx, eps, coef, kept, out);
            }
            Some(((kc, ki), (dc, di))) => {
                let mut k2 = kept.clone();
                k2.push(a);
                self.push_branches(letters, pos - 1, ki, eps, coef.mul(kc), k2, out);
                self.push_branches(letters, pos - 1, di, eps, coef.mul(dc), kept, out);
            }
        }
    }

    // ---- looping basis ----------------------------------------------------

    fn reduce_exp(&self, k: i32) -> Vec<(i32, Scalar)> {
        match &self.powers {
            Some(p) if k < 0 || k as usize >= p.degree() => p.expand(k),
            _ => vec![(k, Scalar::one())],
        }
    }

    /// Reduces every loop exponent of `w` and accumulates `c · w`.
    fn reduce_word_into(&self, out: &mut Terms, w: BasisWord, c: Scalar) {
        let mut words = vec![(w, c)];
        for m in 0..words[0].0.level() {
            let mut next = Vec::with_capacity(words.len());
            for (w, c) in words {
                let cell = w.cell(m);
                for (r, rc) in self.reduce_exp(cell.exp) {
                    next.push((w.with_cell(m, Cell::new(r, cell.glen)), c.mul(&rc)));
                }
            }
            words = next;
        }
        for (w, c) in words {
            acc(out, w, c);
        }
    }

    fn l_rmul_t(&self, terms: &Terms, eps: i8) -> Terms {
        if eps < 0 {
            if let Some(p) = &self.powers {
                let coeffs = p.coeffs(-1);
                let mut out = Terms::new();
                let mut cur = terms.clone();
                for (j, cj) in coeffs.iter().enumerate() {
                    if j > 0 {
                        cur = self.l_rmul_t(&cur, 1);
                    }
                    acc_all(&mut out, &cur, cj);
                }
                return out;
            }
        }
        let mut out = Terms::new();
        for (w, c) in terms {
            let part = self.l_rmul_t_word(w, eps);
            acc_all(&mut out, &part, c);
        }
        out
    }

    fn l_rmul_t_word(&self, w: &BasisWord, eps: i8) -> Terms {
        let top = w.top();
        let m = w.level() - 1;
        let mut out = Terms::new();
        if top.glen as usize == m {
            // the block g_m … g_1 turns t into t'_m
            let p = w.prefix();
            for (r, rc) in self.reduce_exp(top.exp + eps as i32) {
                acc(&mut out, p.with_top(Cell::new(r, top.glen)), rc);
            }
            return out;
        }
        let rule = self.tail_rule(m, top.exp, top.glen, eps);
        let p = w.prefix();
        for (rw, rc) in rule.iter() {
            let t = rw.top();
            let prod = self.l_mul_words(&p, &rw.prefix());
            for (pw, pc) in prod.iter() {
                acc(&mut out, pw.with_top(t), pc.mul(rc));
            }
        }
        out
    }

    /// t'_m^k G_{m,l} · t^eps as a sum of (level-m word)·(new top cell).
    fn tail_rule(&self, m: usize, k: i32, l: u8, eps: i8) -> Rc<Terms> {
        let key = (m, k, l, eps);
        if let Some(r) = self.memo.borrow().tail.get(&key) {
            return r.clone();
        }
        // G_{m,l} commutes with t when l < m
        let mut u = (*self.tprime_times_t(m, k, eps)).clone();
        for j in ((m + 1 - l as usize)..=m).rev() {
            u = self.rmul_g(&u, j, 1);
        }
        let r = Rc::new(u);
        self.memo.borrow_mut().tail.insert(key, r.clone());
        r
    }

    /// t'_m^k · t^eps at level m+1.
    fn tprime_times_t(&self, m: usize, k: i32, eps: i8) -> Rc<Terms> {
        let key = (m, k, eps);
        if let Some(r) = self.memo.borrow().tprime.get(&key) {
            return r.clone();
        }
        let mut out = Terms::new();
        if k == 0 {
            let w = BasisWord::identity(m + 1).with_cell(0, Cell::new(eps as i32, 0));
            self.reduce_word_into(&mut out, w, Scalar::one());
        } else if m == 1 {
            for (w, c) in self.conj_loop_times_t(k, eps) {
                self.reduce_word_into(&mut out, w, c);
            }
        } else {
            // t'_m^k t = g_m (t'_{m-1}^k t) g_m^{-1}
            let v = self.tprime_times_t(m - 1, k, eps);
            let mut lifted = Terms::new();
            for (vw, vc) in v.iter() {
                let t = vw.top();
                let nw = vw.prefix().embed().with_top(Cell::new(t.exp, t.glen + 1));
                acc(&mut lifted, nw, vc.clone());
            }
            out = self.rmul_g(&lifted, m, -1);
        }
        let r = Rc::new(out);
        self.memo.borrow_mut().tprime.insert(key, r.clone());
        r
    }

    /// (g_1 t^k g_1^{-1}) t^eps at level 2 in the looping basis, without the
    /// cyclotomic relation. Computed in the commuting basis, then rewritten
    /// by eliminating the highest t_1-degree against g_1 t^b g_1^{-1} and
    /// g_1 t^b, whose top blocks form an invertible 2×2 system.
    fn conj_loop_times_t(&self, k: i32, eps: i8) -> Terms {
        let mut y = (*self.commuting_conj_loop(k, true)).clone();
        y = self.c_rmul_t(&y, 0, eps);
        let word = |a: i32, b: i32, f: u8| {
            BasisWord::identity(2).with_cell(0, Cell::new(a, 0)).with_cell(1, Cell::new(b, f))
        };
        let get = |e: &Terms, w: &BasisWord| e.get(w).cloned().unwrap_or_else(Scalar::zero);
        let mut out = Terms::new();
        loop {
            let top = y
                .keys()
                .map(|w| w.cell(1).exp)
                .filter(|&b| b != 0)
                .max_by_key(|&b| (b.abs(), b));
            let Some(b) = top else {
                // remaining words t^a g_1^f read the same in both bases
                for (w, c) in y {
                    acc(&mut out, w, c);
                }
                return out;
            };
            let p = self.commuting_conj_loop(b, true);
            let r = self.commuting_conj_loop(b, false);
            let (p0, p1) = (get(&p, &word(0, b, 0)), get(&p, &word(0, b, 1)));
            let (r0, r1) = (get(&r, &word(0, b, 0)), get(&r, &word(0, b, 1)));
            let det = p0.mul(&r1).sub(&r0.mul(&p1));
            assert!(
                det.as_laurent().is_some_and(|d| d.as_monomial().is_some()),
                "leading block must be unimodular"
            );
            let avals: BTreeSet<i32> =
                y.keys().filter(|w| w.cell(1).exp == b).map(|w| w.cell(0).exp).collect();
            for a in avals {
                let al = get(&y, &word(a, b, 0));
                let be = get(&y, &word(a, b, 1));
                let x = al.mul(&r1).sub(&be.mul(&r0)).div(&det).expect("unit determinant");
                let z = be.mul(&p0).sub(&al.mul(&p1)).div(&det).expect("unit determinant");
                acc(&mut out, word(a, b, 0), x.clone());
                acc(&mut out, word(a, b, 1), z.clone());
                for (src, coef) in [(&p, x.neg()), (&r, z.neg())] {
                    for (w, c) in src.iter() {
                        let shifted = w.with_cell(0, Cell::new(w.cell(0).exp + a, 0));
                        acc(&mut y, shifted, c.mul(&coef));
                    }
                }
            }
            assert!(
                y.keys().all(|w| w.cell(1).exp != b),
                "elimination must clear the leading degree"
            );
        }
    }

    /// g_1 t^b g_1^{-1} (with_inverse) or g_1 t^b, in the commuting basis.
    fn commuting_conj_loop(&self, b: i32, with_inverse: bool) -> Rc<Terms> {
        let key = (b, with_inverse);
        if let Some(r) = self.memo.borrow().conj_loops.get(&key) {
            return r.clone();
        }
        let mut gens = vec![Gen::G(1, 1)];
        gens.extend(std::iter::repeat_n(Gen::T(b.signum() as i8), b.unsigned_abs() as usize));
        if with_inverse {
            gens.push(Gen::G(1, -1));
        }
        let r = Rc::new(self.fold(Flavor::Commuting, single(BasisWord::identity(2)), &gens));
        self.memo.borrow_mut().conj_loops.insert(key, r.clone());
        r
    }

    fn l_mul_words(&self, p: &BasisWord, h: &BasisWord) -> Rc<Terms> {
        if h.is_identity() {
            return Rc::new(single(p.clone()));
        }
        let key = (p.clone(), h.clone());
        if let Some(r) = self.memo.borrow().products.get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.fold(Flavor::Looping, single(p.clone()), &looping_letters(h)));
        self.memo.borrow_mut().products.insert(key, r.clone());
        r
    }
}

fn push_power(out: &mut Vec<Gen>, k: i32) {
    out.extend(std::iter::repeat_n(Gen::T(k.signum() as i8), k.unsigned_abs() as usize));
}

fn push_block(out: &mut Vec<Gen>, m: usize, glen: u8) {
    for j in ((m + 1 - glen as usize)..=m).rev() {
        out.push(Gen::G(j, 1));
    }
}

/// Letters of a looping-basis word.
pub(crate) fn looping_letters(w: &BasisWord) -> Vec<Gen> {
    let mut out = Vec::new();
    for (m, c) in w.cells().iter().enumerate() {
        if c.exp != 0 {
            out.extend((1..=m).rev().map(|j| Gen::G(j, 1)));
            push_power(&mut out, c.exp);
            out.extend((1..=m).map(|j| Gen::G(j, -1)));
        }
        push_block(&mut out, m, c.glen);
    }
    out
}

/// Letters of a commuting-basis word; t_m^{±1} = g_m^{±1}…g_1^{±1} t^{±1} g_1^{±1}…g_m^{±1}.
pub(crate) fn commuting_letters(w: &BasisWord) -> Vec<Gen> {
    let mut out = Vec::new();
    for (m, c) in w.cells().iter().enumerate() {
        let s = c.exp.signum() as i8;
        for _ in 0..c.exp.unsigned_abs() {
            out.extend((1..=m).rev().map(|j| Gen::G(j, s)));
            out.push(Gen::T(s));
            out.extend((1..=m).map(|j| Gen::G(j, s)));
        }
        push_block(&mut out, m, c.glen);
    }
    out
}
