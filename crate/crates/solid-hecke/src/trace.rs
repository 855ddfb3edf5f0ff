//! The Markov trace on the tower of algebras, evaluated on the looping
//! basis: the top cell of a word either is a pure loop power t'_n^k, which
//! contributes s_k, or contains g_n exactly once, which contributes z and
//! glues the two sides together one level down.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Algebra, AlgebraError, BasisWord, Cell, Element, Expr, Factor, Flavor, Mode, PowerReduction};
use crate::braid::MixedBraidWord;
use crate::coefficients::Scalar;

/// Trace evaluator with a per-word memo. Owns its algebra context.
pub struct Tracer {
    alg: Algebra,
    memo: RefCell<HashMap<BasisWord, Scalar>>,
}

impl Tracer {
    pub fn new(mode: Mode) -> Tracer {
        Tracer { alg: Algebra::new(mode), memo: RefCell::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn mode(&self) -> Mode {
        self.alg.mode()
    }

    pub fn trace(&self, e: &Element) -> Result<Scalar, AlgebraError> {
        let e = self.alg.to_looping(e)?;
        let mut total = Scalar::zero();
        for (w, c) in e.iter() {
            total = total.add(&c.mul(&self.trace_word(w)));
        }
        Ok(total)
    }

    pub fn trace_braid(&self, w: &MixedBraidWord) -> Scalar {
        let e = self
            .alg
            .from_braid_in(w, Flavor::Looping)
            .expect("looping basis exists in every mode");
        self.trace(&e).expect("element built by this algebra")
    }

    /// Trace of one looping-basis word.
    pub fn trace_word(&self, w: &BasisWord) -> Scalar {
        if let Some(v) = self.memo.borrow().get(w) {
            return v.clone();
        }
        let top = w.top();
        let v = if w.level() == 1 {
            Scalar::s(top.exp)
        } else if top.glen == 0 {
            Scalar::s(top.exp).mul(&self.trace_word(&w.prefix()))
        } else {
            // t'_m^k g_m G = g_m t'_{m-1}^k G: peel off g_m
            let m = w.level() - 1;
            let y = BasisWord::identity(m).with_cell(m - 1, Cell::new(top.exp, top.glen - 1));
            let prod = self.alg.looping_product(&w.prefix(), &y);
            let mut acc = Scalar::zero();
            for (pw, pc) in prod.iter() {
                acc = acc.add(&pc.mul(&self.trace_word(pw)));
            }
            acc.mul(&Scalar::z())
        };
        self.memo.borrow_mut().insert(w.clone(), v.clone());
        v
    }
}

/// One-shot trace with a fresh evaluator.
pub fn markov_trace(e: &Element) -> Result<Scalar, AlgebraError> {
    Tracer::new(e.mode()).trace(e)
}

/// Splitting of an element of level n+1 along the bimodule decomposition:
/// Σ coef · a g_n b + Σ_k diag[k] · t'_n^k, with a, b at level n.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub pairs: Vec<(Element, Element, Scalar)>,
    pub diag: BTreeMap<i32, Element>,
}

impl Decomposition {
    /// Multiplies the pieces back together in the looping basis.
    pub fn recombine(&self, alg: &Algebra, level: usize) -> Result<Element, AlgebraError> {
        let n = level - 1;
        let mut out = Element::zero(level, alg.mode(), Flavor::Looping);
        for (a, b, c) in &self.pairs {
            let g = alg.generator(level, n, Flavor::Looping)?;
            let ag = alg.mul(&a.embed(), &g)?;
            out = out.add(&alg.mul(&ag, &b.embed())?.scale(c))?;
        }
        for (&k, e) in &self.diag {
            let loop_k = Expr::product(level, vec![Factor::Looping(n, k)]).evaluate(alg, Flavor::Looping)?;
            out = out.add(&alg.mul(&e.embed(), &loop_k)?)?;
        }
        Ok(out)
    }
}

pub fn lemma6_decompose(alg: &Algebra, e: &Element) -> Result<Decomposition, AlgebraError> {
    if e.level() < 2 {
        return Err(AlgebraError::Malformed("decomposition needs level ≥ 2".into()));
    }
    let e = alg.to_looping(e)?;
    let n = e.level() - 1;
    let mode = alg.mode();
    let mut pairs = Vec::new();
    let mut diag: BTreeMap<i32, Element> = BTreeMap::new();
    for (w, c) in e.iter() {
        let p = w.prefix();
        let top = w.top();
        if top.glen == 0 {
            let slot = diag.entry(top.exp).or_insert_with(|| Element::zero(n, mode, Flavor::Looping));
            *slot = slot.add(&Element::word(p, mode, Flavor::Looping).scale(c))?;
        } else {
            let y = BasisWord::identity(n).with_cell(n - 1, Cell::new(top.exp, top.glen - 1));
            pairs.push((
                Element::word(p, mode, Flavor::Looping),
                Element::word(y, mode, Flavor::Looping),
                c.clone(),
            ));
        }
    }
    diag.retain(|_, v| !v.is_zero());
    Ok(Decomposition { pairs, diag })
}

/// s_k rewritten in s_1 … s_{d-1} (s_0 = 1) under t^d = Σ a_j t^j.
pub fn reduce_s(k: i32, d: u32) -> Scalar {
    reduce_s_with(&PowerReduction::symbolic(d), k)
}

pub fn reduce_s_with(r: &PowerReduction, k: i32) -> Scalar {
    let mut out = Scalar::zero();
    for (j, c) in r.coeffs(k).iter().enumerate() {
        out = out.add(&c.mul(&Scalar::s(j as i32)));
    }
    out
}

/// Rewrites every s_k of a generic-mode trace value through [`reduce_s`].
pub fn reduce_trace_value(v: &Scalar, d: u32) -> Result<Scalar, AlgebraError> {
    let r = PowerReduction::symbolic(d);
    let mut bindings = BTreeMap::new();
    let mut syms = v.num().symbols();
    syms.extend(v.den().symbols());
    for s in syms {
        if let crate::coefficients::Symbol::S(k) = s {
            bindings.insert(s, reduce_s_with(&r, k));
        }
    }
    Ok(v.substitute(&bindings)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse;

    fn q() -> Scalar {
        Scalar::q()
    }

    #[test]
    fn small_traces() {
        let tr = Tracer::new(Mode::Infinity);
        assert_eq!(tr.trace_braid(&parse("", Some(1)).unwrap()), Scalar::one());
        assert_eq!(tr.trace_braid(&parse("s1", Some(2)).unwrap()), Scalar::z());
        // tr(t_1) = (q-1) z s_1 + q s_1
        let t1 = tr.trace_braid(&parse("s1 t s1", Some(2)).unwrap());
        let want = q().sub(&Scalar::one()).mul(&Scalar::z()).mul(&Scalar::s(1)).add(&q().mul(&Scalar::s(1)));
        assert_eq!(t1, want);
    }

    #[test]
    fn worked_example() {
        let tr = Tracer::new(Mode::Infinity);
        let w = parse("s2 s1 t^3 s1^-1 s3 s2 s3", Some(4)).unwrap();
        let z = Scalar::z();
        let s3 = Scalar::s(3);
        let want = q()
            .mul(&q().sub(&Scalar::one()))
            .mul(&z)
            .mul(&s3)
            .add(&q().mul(&q()).sub(&q()).add(&Scalar::one()).mul(&z).mul(&z).mul(&s3));
        assert_eq!(tr.trace_braid(&w), want);
    }

    #[test]
    fn decomposition_examples() {
        let alg = Algebra::new(Mode::Infinity);
        let g1 = alg.generator(2, 1, Flavor::Looping).unwrap();
        let d = lemma6_decompose(&alg, &g1).unwrap();
        assert_eq!(d.pairs.len(), 1);
        assert!(d.diag.is_empty());
        let t1 = alg.from_braid_in(&parse("s1 t s1", Some(2)).unwrap(), Flavor::Looping).unwrap();
        let d = lemma6_decompose(&alg, &t1).unwrap();
        assert_eq!(d.pairs.len(), 1);
        let (a, b, c) = &d.pairs[0];
        assert_eq!(*a, alg.one(1, Flavor::Looping));
        assert_eq!(*b, alg.loop_generator(1, Flavor::Looping));
        assert_eq!(*c, q().sub(&Scalar::one()));
        assert_eq!(d.diag[&1], alg.one(1, Flavor::Looping).scale(&q()));
        assert_eq!(d.recombine(&alg, 2).unwrap(), t1);
    }

    #[test]
    fn remark_reductions() {
        let a = Scalar::a;
        let s = Scalar::s;
        let d5: Scalar = (0..5).fold(Scalar::zero(), |acc, j| acc.add(&a(j).mul(&s(j as i32))));
        assert_eq!(reduce_s(5, 5), d5);
        let want = a(2)
            .pow(3)
            .unwrap()
            .add(&a(1).mul(&a(2)).mul(&Scalar::from_i64(2)))
            .add(&a(0))
            .mul(&s(2))
            .add(&a(1).pow(2).unwrap().add(&a(1).mul(&a(2).pow(2).unwrap())).add(&a(0).mul(&a(2))).mul(&s(1)))
            .add(&a(0).mul(&a(1)).add(&a(0).mul(&a(2).pow(2).unwrap())));
        assert_eq!(reduce_s(5, 3), want);
        assert_eq!(reduce_s(7, 8), s(7));
    }

    #[test]
    fn cyclotomic_trace_of_power() {
        let tr = Tracer::new(Mode::Cyclotomic(3));
        assert_eq!(tr.trace_braid(&parse("t^5", Some(1)).unwrap()), reduce_s(5, 3));
        let tr = Tracer::new(Mode::Cyclotomic(2));
        assert_eq!(tr.trace_braid(&parse("t^-1", Some(1)).unwrap()), reduce_s(-1, 2));
    }
}
