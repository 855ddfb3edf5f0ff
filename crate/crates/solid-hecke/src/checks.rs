//! Randomized and exhaustive verification suites shared by the CLI and the
//! acceptance run. Each trial draws from its own ChaCha stream, so results
//! depend only on (seed, suite, index) and not on how trials are split
//! across workers.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    fl_reorder, fl_reorder_lhs, lemma2_slide, lemma3_expand, Algebra, AlgebraError, Element, Expr, Factor, Flavor,
    Mode,
};
use crate::braid::{Letter, MixedBraidWord};
use crate::coefficients::Scalar;
use crate::invariant::{skein_triple, verify_skein_cyclotomic, verify_skein_homfly, homfly_compare, Invariant};
use crate::trace::{lemma6_decompose, reduce_s_with, reduce_trace_value, Tracer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Conjugation,
    Stabilization,
    SkeinHomfly,
    SkeinCyclotomic,
    Homfly,
    Associativity,
    TraceSymmetry,
    GeneratorRule,
    LoopRule,
    SwapSymmetry,
    ModeConsistency,
    Decomposition,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Conjugation,
        Suite::Stabilization,
        Suite::SkeinHomfly,
        Suite::SkeinCyclotomic,
        Suite::Homfly,
        Suite::Associativity,
        Suite::TraceSymmetry,
        Suite::GeneratorRule,
        Suite::LoopRule,
        Suite::SwapSymmetry,
        Suite::ModeConsistency,
        Suite::Decomposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Conjugation => "conjugation",
            Suite::Stabilization => "stabilization",
            Suite::SkeinHomfly => "skein-homfly",
            Suite::SkeinCyclotomic => "skein-cyclotomic",
            Suite::Homfly => "homfly",
            Suite::Associativity => "associativity",
            Suite::TraceSymmetry => "trace-symmetry",
            Suite::GeneratorRule => "generator-rule",
            Suite::LoopRule => "loop-rule",
            Suite::SwapSymmetry => "swap-symmetry",
            Suite::ModeConsistency => "mode-consistency",
            Suite::Decomposition => "decomposition",
        }
    }

    /// Whether the suite makes sense in `mode`.
    pub fn applies(self, mode: Mode) -> bool {
        match self {
            Suite::SkeinCyclotomic | Suite::ModeConsistency => matches!(mode, Mode::Cyclotomic(_)),
            _ => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Pass count for one suite; `failures` holds a line per failed trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub suite: Suite,
    pub mode: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    /// Concatenates outcomes of disjoint index ranges, in order.
    pub fn merge(parts: Vec<Outcome>) -> Outcome {
        let mut it = parts.into_iter();
        let mut acc = it.next().expect("at least one part");
        for p in it {
            acc.passed += p.passed;
            acc.total += p.total;
            acc.failures.extend(p.failures);
        }
        acc
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} {}", self.passed, self.total, self.suite)
    }
}

/// Per-thread evaluation state. Not shareable; build one per worker.
pub struct Worker {
    inv: Invariant,
    generic: Option<Tracer>,
}

fn trial_rng(seed: u64, suite: Suite, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = Suite::ALL.iter().position(|&s| s == suite).unwrap() as u64;
    rng.set_stream((tag << 40) | index as u64);
    rng
}

fn word<R: Rng>(rng: &mut R, n: usize, max_len: usize, max_t_run: usize) -> MixedBraidWord {
    let len = rng.gen_range(0..=max_len);
    MixedBraidWord::random_with(rng, n, len, max_t_run)
}

impl Worker {
    pub fn new(mode: Mode) -> Worker {
        let generic = matches!(mode, Mode::Cyclotomic(_)).then(|| Tracer::new(Mode::Infinity));
        Worker { inv: Invariant::new(mode), generic }
    }

    pub fn mode(&self) -> Mode {
        self.inv.mode()
    }

    fn alg(&self) -> &Algebra {
        self.inv.tracer().algebra()
    }

    fn tr(&self, e: &Element) -> Result<Scalar, String> {
        self.inv.tracer().trace(e).map_err(err)
    }

    /// A word image plus a scaled second word, so coefficients are not all 1.
    fn element<R: Rng>(&self, rng: &mut R, n: usize, max_len: usize) -> Result<Element, String> {
        self.element_in(rng, n, max_len, self.alg().working_flavor())
    }

    fn element_in<R: Rng>(&self, rng: &mut R, n: usize, max_len: usize, fl: Flavor) -> Result<Element, String> {
        let a = self.alg().from_braid_in(&word(rng, n, max_len, 2), fl).map_err(err)?;
        let b = self.alg().from_braid_in(&word(rng, n, max_len, 2), fl).map_err(err)?;
        let c = [Scalar::q(), Scalar::from_i64(-2), Scalar::z(), Scalar::one()][rng.gen_range(0..4)].clone();
        a.add(&b.scale(&c)).map_err(err)
    }

    fn at(&self, e: &Element, level: usize) -> Element {
        let mut e = e.clone();
        while e.level() < level {
            e = e.embed();
        }
        e
    }

    fn mul3(&self, a: &Element, b: &Element, c: &Element) -> Result<Element, String> {
        let ab = self.alg().mul(a, b).map_err(err)?;
        self.alg().mul(&ab, c).map_err(err)
    }

    /// Runs one trial; `Err` carries a description of the failure.
    pub fn trial(&self, suite: Suite, seed: u64, index: usize) -> Result<(), String> {
        let mut rng = trial_rng(seed, suite, index);
        let rng = &mut rng;
        let alg = self.alg();
        let flavor = alg.working_flavor();
        match suite {
            Suite::Conjugation | Suite::Stabilization => {
                let n = rng.gen_range(1..=4);
                let w = word(rng, n, 10, 3);
                let x = self.inv.value(&w);
                let others = if suite == Suite::Conjugation {
                    let g = word(rng, n, 4, 2);
                    vec![w.conjugate(&g).expect("same strands")]
                } else {
                    vec![w.stabilize(true), w.stabilize(false)]
                };
                for o in others {
                    let y = self.inv.value(&o);
                    if y != x {
                        return Err(format!("X({w}) = {x} but X({o}) = {y}"));
                    }
                }
                Ok(())
            }
            Suite::SkeinHomfly => {
                let n = rng.gen_range(2..=3);
                let w = word(rng, n, 8, 3);
                let positives: Vec<usize> = w
                    .letters()
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| matches!(l, Letter::Sigma(_, 1)))
                    .map(|(p, _)| p)
                    .collect();
                let (w, pos) = if positives.is_empty() {
                    let pos = rng.gen_range(0..=w.len());
                    let mut v = w.letters().to_vec();
                    v.insert(pos, Letter::Sigma(rng.gen_range(1..n), 1));
                    (MixedBraidWord::new(n, v).expect("valid index"), pos)
                } else {
                    let p = positives[rng.gen_range(0..positives.len())];
                    (w, p)
                };
                let (p, m, z) = skein_triple(&w, pos).expect("positive crossing");
                let c = verify_skein_homfly(&self.inv, &p, &m, &z);
                check(c.holds, || format!("{w} at {pos}: residue {}", c.witness))
            }
            Suite::SkeinCyclotomic => {
                let n = rng.gen_range(1..=3);
                let w = word(rng, n, 6, 2);
                let i = rng.gen_range(0..n);
                let c = verify_skein_cyclotomic(&self.inv, &w, i).map_err(|e| e.to_string())?;
                check(c.holds, || format!("{w}, loop {i}: residue {}", c.witness))
            }
            Suite::Homfly => {
                let n = rng.gen_range(2..=4);
                let w = word(rng, n, 8, 0);
                let c = homfly_compare(&self.inv, &w).map_err(|e| e.to_string())?;
                check(c.equal, || format!("{w}: engine {} oracle {}", c.engine, c.oracle))
            }
            Suite::Associativity => {
                let n = rng.gen_range(1..=3);
                let a = self.element(rng, n, 4)?;
                let b = self.element(rng, n, 4)?;
                let c = self.element(rng, n, 4)?;
                let left = self.mul3(&a, &b, &c)?;
                let bc = alg.mul(&b, &c).map_err(err)?;
                let right = alg.mul(&a, &bc).map_err(err)?;
                check(left == right, || format!("(ab)c ≠ a(bc) for a={a}, b={b}, c={c}"))
            }
            Suite::TraceSymmetry => {
                let a = self.element(rng, 3, 6)?;
                let b = self.element(rng, 3, 6)?;
                let ab = self.tr(&alg.mul(&a, &b).map_err(err)?)?;
                let ba = self.tr(&alg.mul(&b, &a).map_err(err)?)?;
                check(ab == ba, || format!("tr(ab) = {ab}, tr(ba) = {ba}"))
            }
            Suite::GeneratorRule => {
                let n = rng.gen_range(1..=3);
                let a = self.element(rng, n, 5)?;
                let b = self.element(rng, n, 5)?;
                let g = alg.generator(n + 1, n, flavor).map_err(err)?;
                let lhs = self.tr(&self.mul3(&self.at(&a, n + 1), &g, &self.at(&b, n + 1))?)?;
                let rhs = self.tr(&alg.mul(&a, &b).map_err(err)?)?.mul(&Scalar::z());
                check(lhs == rhs, || format!("tr(a g b) = {lhs}, z tr(ab) = {rhs}"))
            }
            Suite::LoopRule => {
                let n = rng.gen_range(1..=3);
                let k = [1, -1, 2, -2, 3][rng.gen_range(0..5)];
                // the loop factor is native to the looping basis; stay there
                let x = self.element_in(rng, n, 5, Flavor::Looping)?;
                let y = self.element_in(rng, n, 5, Flavor::Looping)?;
                let l = Expr::product(n + 1, vec![Factor::Looping(n, k)])
                    .evaluate(alg, Flavor::Looping)
                    .map_err(err)?;
                let lhs = self.tr(&self.mul3(&self.at(&x, n + 1), &l, &self.at(&y, n + 1))?)?;
                let sk = match alg.powers() {
                    Some(p) => reduce_s_with(p, k),
                    None => Scalar::s(k),
                };
                let rhs = self.tr(&alg.mul(&x, &y).map_err(err)?)?.mul(&sk);
                check(lhs == rhs, || format!("k={k}: tr(x t' y) = {lhs}, s_k tr(xy) = {rhs}"))
            }
            Suite::SwapSymmetry => {
                let n = rng.gen_range(1..=3);
                let x = self.at(&self.element(rng, n, 5)?, n + 1);
                let y = self.at(&self.element(rng, n, 5)?, n + 1);
                let g = alg.generator(n + 1, n, flavor).map_err(err)?;
                let lhs = self.tr(&self.mul3(&self.mul3(&x, &g, &y)?, &g, &alg.one(n + 1, flavor))?)?;
                let rhs = self.tr(&self.mul3(&self.mul3(&g, &x, &g)?, &y, &alg.one(n + 1, flavor))?)?;
                check(lhs == rhs, || format!("tr(x g y g) = {lhs}, tr(g x g y) = {rhs}"))
            }
            Suite::ModeConsistency => {
                let Mode::Cyclotomic(d) = self.mode() else {
                    return Err("mode consistency needs a cyclotomic mode".into());
                };
                let n = rng.gen_range(1..=3);
                let w = word(rng, n, 8, 3);
                let generic = self.generic.as_ref().expect("built for cyclotomic modes").trace_braid(&w);
                let lhs = reduce_trace_value(&generic, d).map_err(err)?.reduced();
                let rhs = self.inv.tracer().trace_braid(&w).reduced();
                check(lhs == rhs, || format!("{w}: reduced generic {lhs}, direct {rhs}"))
            }
            Suite::Decomposition => {
                let n = rng.gen_range(2..=3);
                let e = self.element(rng, n, 6)?;
                let d = lemma6_decompose(alg, &e).map_err(err)?;
                let back = d.recombine(alg, n).map_err(err)?;
                let want = alg.to_looping(&e).map_err(err)?;
                check(back == want, || format!("recombined {back} from {want}"))
            }
        }
    }
}

fn err(e: AlgebraError) -> String {
    e.to_string()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs trials `range` of `suite` in one worker.
pub fn run(suite: Suite, mode: Mode, seed: u64, range: Range<usize>) -> Outcome {
    let worker = Worker::new(mode);
    let mut out = Outcome { suite, mode: mode.to_string(), passed: 0, total: 0, failures: Vec::new() };
    for i in range {
        out.total += 1;
        match worker.trial(suite, seed, i) {
            Ok(()) => out.passed += 1,
            Err(msg) => out.failures.push(format!("trial {i}: {msg}")),
        }
    }
    out
}

/// Splits `0..trials` into `jobs` contiguous chunks.
pub fn chunks(trials: usize, jobs: usize) -> Vec<Range<usize>> {
    let jobs = jobs.clamp(1, trials.max(1));
    let size = trials.div_ceil(jobs);
    (0..jobs).map(|j| (j * size).min(trials)..((j + 1) * size).min(trials)).filter(|r| !r.is_empty()).collect()
}

/// Result of one exhaustive identity family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub name: &'static str,
    pub mode: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl RoundTrip {
    fn new(name: &'static str, mode: Mode) -> RoundTrip {
        RoundTrip { name, mode: mode.to_string(), passed: 0, total: 0, failures: Vec::new() }
    }

    fn record(&mut self, case: String, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(case);
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Every rewriting identity and basis conversion, multiplied back out and
/// compared with direct evaluation, for n ≤ 3 and |k| ≤ 4. The first three
/// families are statements in the generic algebra and are only run there.
pub fn round_trips(mode: Mode) -> Result<Vec<RoundTrip>, AlgebraError> {
    let alg = Algebra::new(mode);
    let mut out = Vec::new();
    if mode == Mode::Infinity {
        let eval = |e: &Expr| e.evaluate(&alg, Flavor::Commuting);
        let mut slide = RoundTrip::new("lemma2_slide", mode);
        for n in 1..=3usize {
            for k in (-4..=4).filter(|&k| k != 0) {
                let lhs = Expr::product(n + 1, vec![Factor::Commuting(n, k), Factor::G(n, 1)]);
                slide.record(format!("n={n} k={k}"), eval(&lhs)? == eval(&lemma2_slide(n, k))?);
            }
        }
        out.push(slide);
        let mut fl = RoundTrip::new("fl_reorder", mode);
        for i in 1..=3 {
            for k in 1..=4 {
                for eps in [1, -1] {
                    for sign in [1, -1] {
                        let ok = eval(&fl_reorder_lhs(i, k, eps, sign))? == eval(&fl_reorder(i, k, eps, sign))?;
                        fl.record(format!("i={i} k={k} eps={eps} sign={sign}"), ok);
                    }
                }
            }
        }
        out.push(fl);
        let mut l3 = RoundTrip::new("lemma3_expand", mode);
        for n in 0..=3usize {
            for k in 1..=3u32 {
                for eps in [1, -1] {
                    let lhs = Expr::product(n + 1, vec![Factor::Commuting(n, eps * (k as i32 + 1))]);
                    l3.record(format!("n={n} k={k} eps={eps}"), eval(&lhs)? == eval(&lemma3_expand(n, k, eps))?);
                }
            }
        }
        out.push(l3);
    }
    let mut p3 = RoundTrip::new("prop3_reduce", mode);
    let mut t4 = RoundTrip::new("thm4_convert", mode);
    let mut tp = RoundTrip::new("tpower_coset_expand", mode);
    for n in 1..=3usize {
        for k in (-4i32..=4).filter(|&k| k != 0) {
            let sym = if k.abs() == 1 {
                Expr::product(n + 1, vec![Factor::Commuting(n, k.signum())])
            } else {
                lemma3_expand(n, k.unsigned_abs() - 1, k.signum())
            };
            let direct = sym.evaluate(&alg, Flavor::Looping)?;
            let form = alg.prop3_reduce(&sym)?;
            p3.record(format!("n={n} k={k}"), form.evaluate(&alg)? == direct);
            t4.record(format!("n={n} k={k}"), alg.thm4_convert(&form)? == direct);
            let want = Expr::product(n + 1, vec![Factor::Commuting(n, k)]).evaluate(&alg, Flavor::Looping)?;
            tp.record(format!("n={n} k={k}"), alg.tpower_coset_expand(n, k)? == want);
        }
    }
    out.extend([p3, t4, tp]);
    Ok(out)
}

/// A fixed input with its known value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Golden {
    pub name: String,
    pub expected: String,
    pub got: String,
}

impl Golden {
    fn new(name: impl Into<String>, expected: &Scalar, got: &Scalar) -> Golden {
        Golden { name: name.into(), expected: expected.reduced().to_string(), got: got.reduced().to_string() }
    }

    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

fn braid(text: &str, n: usize) -> MixedBraidWord {
    crate::braid::parse(text, Some(n)).expect("fixed input parses")
}

/// Reference values for traces, s-reductions and the invariant.
pub fn golden_vectors() -> Vec<Golden> {
    let q = Scalar::q();
    let one = Scalar::one();
    let z = Scalar::z();
    let (s, a) = (Scalar::s, Scalar::a);
    let mut out = Vec::new();
    let inf = Tracer::new(Mode::Infinity);
    out.push(Golden::new("tr(1)", &one, &inf.trace_braid(&braid("", 3))));
    out.push(Golden::new("tr(g1)", &z, &inf.trace_braid(&braid("s1", 2))));
    out.push(Golden::new("tr(t)", &s(1), &inf.trace_braid(&braid("t", 1))));
    let t1 = q.sub(&one).mul(&z).mul(&s(1)).add(&q.mul(&s(1)));
    out.push(Golden::new("tr(t_1)", &t1, &inf.trace_braid(&braid("s1 t s1", 2))));
    let example = q
        .mul(&q.sub(&one))
        .mul(&z)
        .mul(&s(3))
        .add(&q.mul(&q).sub(&q).add(&one).mul(&z).mul(&z).mul(&s(3)));
    out.push(Golden::new(
        "tr(g2 g1 t^3 g1^-1 g3 g2 g3)",
        &example,
        &inf.trace_braid(&braid("s2 s1 t^3 s1^-1 s3 s2 s3", 4)),
    ));
    let t5 = braid("t^5", 1);
    out.push(Golden::new("tr(t^5) infinity", &s(5), &inf.trace_braid(&t5)));
    for d in [6, 7] {
        out.push(Golden::new(format!("tr(t^5) cyclo:{d}"), &s(5), &Tracer::new(Mode::Cyclotomic(d)).trace_braid(&t5)));
    }
    let d5 = (0..5).fold(Scalar::zero(), |acc, j| acc.add(&a(j).mul(&s(j as i32))));
    out.push(Golden::new("tr(t^5) cyclo:5", &d5, &Tracer::new(Mode::Cyclotomic(5)).trace_braid(&t5)));
    let d3 = a(2)
        .pow(3)
        .unwrap()
        .add(&a(1).mul(&a(2)).mul(&Scalar::from_i64(2)))
        .add(&a(0))
        .mul(&s(2))
        .add(&a(1).mul(&a(1)).add(&a(1).mul(&a(2)).mul(&a(2))).add(&a(0).mul(&a(2))).mul(&s(1)))
        .add(&a(0).mul(&a(1)).add(&a(0).mul(&a(2)).mul(&a(2))));
    out.push(Golden::new("tr(t^5) cyclo:3", &d3, &Tracer::new(Mode::Cyclotomic(3)).trace_braid(&t5)));
    // t^2 = (Q-1) t + Q at Q = 3
    let c2 = Tracer::new(Mode::Cyclotomic(2));
    let mut b = std::collections::BTreeMap::new();
    b.insert(crate::coefficients::Symbol::A(1), Scalar::from_i64(2));
    b.insert(crate::coefficients::Symbol::A(0), Scalar::from_i64(3));
    let got = c2.trace_braid(&braid("t^-1", 1)).substitute(&b).expect("a0 = 3 is invertible");
    let want = s(1).sub(&Scalar::from_i64(2)).mul(&Scalar::ratio(1, 3).unwrap());
    out.push(Golden::new("tr(t^-1) cyclo:2, Q=3", &want, &got));
    let x = Invariant::new(Mode::Infinity);
    out.push(Golden::new("X(unknot)", &one, &x.value(&braid("", 1))));
    for k in (-5..=5).filter(|&k| k != 0) {
        out.push(Golden::new(format!("X(t^{k})"), &s(k), &x.value(&braid(&format!("t^{k}"), 1))));
    }
    out.push(Golden::new("X(s1)", &one, &x.value(&braid("s1", 2))));
    out.push(Golden::new("X(t^2 t'1^-1) / X(2-strand unlink)", &s(2).mul(&s(-1)), &x
        .value(&braid("t^2 t'1^-1", 2))
        .div(&x.value(&braid("", 2)))
        .expect("unlink value is nonzero")));
    for (name, w) in [("trefoil", braid("s1^3", 2)), ("figure-eight", braid("s1 s2^-1 s1 s2^-1", 3))] {
        let c = homfly_compare(&x, &w).expect("loop-free");
        out.push(Golden::new(format!("X({name}) vs type-A oracle"), &c.oracle, &c.engine));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_vectors_hold() {
        for g in golden_vectors() {
            assert!(g.ok(), "{}: expected {}, got {}", g.name, g.expected, g.got);
        }
    }

    #[test]
    fn chunking_covers_range() {
        assert_eq!(chunks(10, 3), vec![0..4, 4..8, 8..10]);
        assert_eq!(chunks(2, 8), vec![0..1, 1..2]);
        assert_eq!(chunks(0, 4), Vec::<Range<usize>>::new());
    }

    #[test]
    fn split_runs_match_single_run() {
        let whole = run(Suite::SkeinHomfly, Mode::Infinity, 7, 0..6);
        let parts = Outcome::merge(chunks(6, 4).into_iter().map(|r| run(Suite::SkeinHomfly, Mode::Infinity, 7, r)).collect());
        assert_eq!(whole, parts);
        assert!(whole.ok(), "{:?}", whole.failures);
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for mode in [Mode::Infinity, Mode::Cyclotomic(2)] {
            for s in Suite::ALL.into_iter().filter(|s| s.applies(mode)) {
                let o = run(s, mode, 1, 0..3);
                assert!(o.ok(), "{mode} {s}: {:?}", o.failures);
            }
        }
    }
}
