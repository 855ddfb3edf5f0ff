//! Rewriting identities for loop powers and the passage from powers of the
//! commuting loops to the looping basis through the inductive coset forms.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use super::engine::Gen;
use super::expr::{Expr, Factor};
use super::{acc, acc_all, single, Algebra, AlgebraError, BasisWord, Cell, Element, Flavor, Terms};
use crate::coefficients::Scalar;

fn qpow(k: i32) -> Scalar {
    Scalar::q_pow(k)
}

fn q_minus_one(eps: i32) -> Scalar {
    qpow(eps).sub(&Scalar::one())
}

/// t_n^k g_n as a sum of words with g_n appearing at most once, at level n+1.
pub fn lemma2_slide(n: usize, k: i32) -> Expr {
    assert!(n >= 1 && k != 0, "needs n ≥ 1 and k ≠ 0");
    let mut e = Expr::new(n + 1);
    if k > 0 {
        let qm1 = q_minus_one(1);
        for j in 0..k {
            e.push(qm1.mul(&qpow(j)), vec![Factor::Commuting(n - 1, j), Factor::Commuting(n, k - j)]);
        }
    } else {
        let one_minus_q = Scalar::one().sub(&qpow(1));
        for j in (k..=-1).rev() {
            e.push(
                one_minus_q.mul(&qpow(j)),
                vec![Factor::Commuting(n - 1, j), Factor::Commuting(n, k - j)],
            );
        }
    }
    e.push(qpow(k), vec![Factor::G(n, 1), Factor::Commuting(n - 1, k)]);
    strip_trivial(e)
}

/// Left-hand side t^{sign·eps·i} g_1^eps t^{eps·k} g_1^eps of the reordering rule.
pub fn fl_reorder_lhs(i: i32, k: i32, eps: i32, sign: i32) -> Expr {
    Expr::product(
        2,
        vec![Factor::T(sign * eps * i), Factor::G(1, eps), Factor::T(eps * k), Factor::G(1, eps)],
    )
}

/// Moves t^{±eps·i} from the left of g_1^eps t^{eps·k} g_1^eps to its right.
pub fn fl_reorder(i: i32, k: i32, eps: i32, sign: i32) -> Expr {
    assert!(i >= 1 && k >= 1 && eps.abs() == 1 && sign.abs() == 1);
    let g = Factor::G(1, eps);
    let t = |x: i32| Factor::T(eps * x);
    let up = q_minus_one(eps);
    let down = up.neg();
    let mut e = Expr::new(2);
    if sign > 0 {
        e.push(Scalar::one(), vec![g, t(k), g, t(i)]);
        for j in 1..=i {
            e.push(up.clone(), vec![t(j), g, t(k + i - j)]);
        }
        for j in 0..i {
            e.push(down.clone(), vec![t(k + j), g, t(i - j)]);
        }
    } else {
        e.push(Scalar::one(), vec![g, t(k), g, t(-i)]);
        for j in 1..=i {
            e.push(up.clone(), vec![t(k - j), g, t(-(i - j))]);
        }
        for j in 1..=i {
            e.push(down.clone(), vec![t(-(i - j)), g, t(k - j)]);
        }
    }
    strip_trivial(e)
}

/// t_n^{eps(k+1)} as a sum of words symmetric about the middle loop:
/// g_n…g_1 t (B_{r_1}) t … (B_{r_k}) t g_1…g_n with B_r = g_1…g_{n-r}…g_1.
pub fn lemma3_expand(n: usize, k: u32, eps: i32) -> Expr {
    assert!(k >= 1 && eps.abs() == 1);
    let mut e = Expr::new(n + 1);
    let up = q_minus_one(eps);
    let mut choice = vec![0usize; k as usize];
    loop {
        let short = choice.iter().filter(|&&r| r < n).count() as u32;
        let total: usize = choice.iter().sum();
        let coef = up
            .pow(short as i32)
            .expect("nonzero")
            .mul(&qpow(eps * total as i32));
        let mut fs: Vec<Factor> = (1..=n).rev().map(|j| Factor::G(j, eps)).collect();
        fs.push(Factor::T(eps));
        for &r in &choice {
            let top = n - r;
            fs.extend((1..top).map(|j| Factor::G(j, eps)));
            if top > 0 {
                fs.push(Factor::G(top, eps));
            }
            fs.extend((1..top).rev().map(|j| Factor::G(j, eps)));
            fs.push(Factor::T(eps));
        }
        fs.extend((1..=n).map(|j| Factor::G(j, eps)));
        e.push(coef, fs);
        // next tuple in {0..n}^k
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return e;
            }
            choice[pos] += 1;
            if choice[pos] <= n {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn strip_trivial(e: Expr) -> Expr {
    let mut out = Expr::new(e.level());
    for (c, fs) in e.terms() {
        let fs: Vec<Factor> = fs
            .iter()
            .copied()
            .filter(|f| {
                !matches!(f, Factor::T(0) | Factor::G(_, 0) | Factor::Commuting(_, 0)
                    | Factor::Looping(_, 0) | Factor::Symmetric(_, 0))
            })
            .collect();
        out.push(c.clone(), fs);
    }
    out
}

/// The tail of a word in inductive form at level n+1, to the right of a
/// level-n looping-basis word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InductiveTail {
    /// nothing
    Plain,
    /// g_n g_{n-1} … g_i
    Block(usize),
    /// g_n … g_i · g_{i-1}…g_1 t^k g_1…g_{i-1}; `from = n+1` is the bare symmetric loop
    Loop { from: usize, k: i32 },
}

impl InductiveTail {
    fn letters(self, n: usize) -> Vec<Gen> {
        let mut out = Vec::new();
        match self {
            InductiveTail::Plain => {}
            InductiveTail::Block(i) => out.extend((i..=n).rev().map(|j| Gen::G(j, 1))),
            InductiveTail::Loop { from, k } => {
                out.extend((from..=n).rev().map(|j| Gen::G(j, 1)));
                for f in Factor::Symmetric(from - 1, k).letters() {
                    out.push(f);
                }
            }
        }
        out
    }
}

impl fmt::Display for InductiveTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InductiveTail::Plain => write!(f, "1"),
            InductiveTail::Block(i) => write!(f, "G[n..{i}]"),
            InductiveTail::Loop { from, k } => write!(f, "G[n..{from}] T{}^{k}", from - 1),
        }
    }
}

/// Σ coef · prefix · tail, with prefixes in the level-n looping basis.
#[derive(Clone, Debug, PartialEq)]
pub struct InductiveForm {
    level: usize,
    terms: BTreeMap<(BasisWord, InductiveTail), Scalar>,
}

impl InductiveForm {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisWord, &InductiveTail, &Scalar)> {
        self.terms.iter().map(|((w, t), c)| (w, t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, w: BasisWord, t: InductiveTail, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (w, t);
        let v = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Multiplies the form out in the looping basis.
    pub fn evaluate(&self, alg: &Algebra) -> Result<Element, AlgebraError> {
        let n = self.level - 1;
        let mut out = Terms::new();
        for ((w, t), c) in &self.terms {
            let part = alg.fold(Flavor::Looping, single(w.embed()), &t.letters(n));
            acc_all(&mut out, &part, c);
        }
        Ok(Element::raw(self.level, alg.mode(), Flavor::Looping, out))
    }
}

impl Algebra {
    /// Rewrites an expression at level n+1 into words w·(tail) with w in
    /// H_n and the tail holding g_n at most once. Each looping-basis tail
    /// g_n…g_{i+1} t'_i^k is rewritten as g_n…g_{i+1} T_i^k times the
    /// correction g_i^{-1}…g_1^{-1} g_1^{-1}…g_i^{-1}, which is then
    /// absorbed letter by letter.
    pub fn prop3_reduce(&self, e: &Expr) -> Result<InductiveForm, AlgebraError> {
        let level = e.level();
        if level < 2 {
            return Err(AlgebraError::Malformed("inductive form needs level ≥ 2".into()));
        }
        let n = level - 1;
        let s = e.evaluate(self, Flavor::Looping)?;
        let mut form = InductiveForm { level, terms: BTreeMap::new() };
        for (w, c) in s.terms() {
            let p = w.prefix();
            let top = w.top();
            let l = top.glen as usize;
            if top.exp == 0 {
                let t = if l == 0 { InductiveTail::Plain } else { InductiveTail::Block(n - l + 1) };
                form.add(p, t, c.clone());
                continue;
            }
            let i = n - l;
            let mut cur = InductiveForm { level, terms: BTreeMap::new() };
            cur.add(p, InductiveTail::Loop { from: i + 1, k: top.exp }, c.clone());
            let correction = (1..=i).rev().chain(1..=i);
            for j in correction {
                cur = self.tail_rmul_inverse(&cur, j);
            }
            for ((w, t), c) in cur.terms {
                form.add(w, t, c);
            }
        }
        Ok(form)
    }

    fn tail_rmul_inverse(&self, f: &InductiveForm, j: usize) -> InductiveForm {
        let (_, qi, _, qim1) = self.q_consts();
        let mut out = InductiveForm { level: f.level, terms: BTreeMap::new() };
        let up = self.tail_rmul(f, j);
        for ((w, t), c) in up.terms {
            out.add(w, t, c.mul(qi));
        }
        for ((w, t), c) in &f.terms {
            out.add(w.clone(), *t, c.mul(qim1));
        }
        out
    }

    fn tail_rmul(&self, f: &InductiveForm, j: usize) -> InductiveForm {
        let (q, _, qm1, _) = self.q_consts();
        let mut out = InductiveForm { level: f.level, terms: BTreeMap::new() };
        for ((w, t), c) in &f.terms {
            let InductiveTail::Loop { from, k } = *t else {
                unreachable!("only loop tails are corrected");
            };
            let into_prefix = |out: &mut InductiveForm, letter: usize| {
                for (pw, pc) in self.rmul_g_terms(&single(w.clone()), letter, 1) {
                    out.add(pw, *t, pc.mul(c));
                }
            };
            if j + 1 < from {
                into_prefix(&mut out, j);
            } else if j + 1 == from {
                out.add(w.clone(), *t, c.mul(qm1));
                out.add(w.clone(), InductiveTail::Loop { from: from - 1, k }, c.mul(q));
            } else if j == from {
                out.add(w.clone(), InductiveTail::Loop { from: from + 1, k }, c.clone());
            } else {
                into_prefix(&mut out, j - 1);
            }
        }
        out
    }

    /// Converts an inductive form to the looping basis by expanding the
    /// trailing g_1…g_{i-1} of each loop tail with g_r = q g_r^{-1} + (q-1)
    /// and regrouping at the gap closest to the loop.
    pub fn thm4_convert(&self, f: &InductiveForm) -> Result<Element, AlgebraError> {
        let n = f.level - 1;
        let (q, _, qm1, _) = self.q_consts();
        let mut out = Terms::new();
        for ((w, t), c) in &f.terms {
            match *t {
                InductiveTail::Plain => acc(&mut out, w.embed(), c.clone()),
                InductiveTail::Block(i) => {
                    acc(&mut out, w.with_top(Cell::new(0, (n - i + 1) as u8)), c.clone())
                }
                InductiveTail::Loop { from, k } => {
                    let tail_len = from - 1;
                    for mask in 0u32..(1 << tail_len) {
                        // bit r-1 set: g_r^{-1} chosen, otherwise the (q-1) summand
                        let inv = |r: usize| mask >> (r - 1) & 1 == 1;
                        let chosen = mask.count_ones() as i32;
                        let coef = q
                            .pow(chosen)?
                            .mul(&qm1.pow(tail_len as i32 - chosen)?)
                            .mul(c);
                        let gap = (1..=tail_len).find(|&r| !inv(r)).unwrap_or(from);
                        let moved: Vec<Gen> =
                            (gap + 1..=tail_len).filter(|&r| inv(r)).map(|r| Gen::G(r - 1, -1)).collect();
                        let prefix = self.fold(Flavor::Looping, single(w.clone()), &moved);
                        let cell = Cell::new(k, (n + 1 - gap) as u8);
                        for (pw, pc) in prefix {
                            for (rw, rc) in self.reduce_word(pw.with_top(cell)) {
                                acc(&mut out, rw, rc.mul(&pc).mul(&coef));
                            }
                        }
                    }
                }
            }
        }
        Ok(Element::raw(f.level, self.mode(), Flavor::Looping, out))
    }

    /// t_n^k in the looping basis at level n+1, via the symmetric expansion,
    /// the inductive form and the gap regrouping. Memoized per session.
    pub fn tpower_coset_expand(&self, n: usize, k: i32) -> Result<Element, AlgebraError> {
        if k == 0 {
            return Ok(self.one(n + 1, Flavor::Looping));
        }
        if let Some(t) = self.cached_tpower((n, k)) {
            return Ok(Element::raw(n + 1, self.mode(), Flavor::Looping, (*t).clone()));
        }
        let e = if n == 0 {
            let t = self.reduce_word(BasisWord::identity(1).with_cell(0, Cell::new(k, 0)));
            Element::raw(1, self.mode(), Flavor::Looping, t)
        } else {
            let eps = k.signum();
            let sym = if k.abs() == 1 {
                Expr::product(n + 1, vec![Factor::Commuting(n, eps)])
            } else {
                lemma3_expand(n, k.unsigned_abs() - 1, eps)
            };
            let form = self.prop3_reduce(&sym)?;
            self.thm4_convert(&form)?
        };
        self.store_tpower((n, k), Rc::new(e.terms().clone()));
        Ok(e)
    }
}
