//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact; the only tolerances are the wall-clock budgets below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solid_hecke::algebra::{basis_enumerate, Mode};
use solid_hecke::braid::{parse, MixedBraidWord};
use solid_hecke::checks::{round_trips, run, Outcome, Suite};
use solid_hecke::coefficients::Scalar;
use solid_hecke::invariant::{homfly_compare, Invariant};
use solid_hecke::oracle::specialize_check;
use solid_hecke::trace::Tracer;

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const MARKOV_BUDGET: Duration = Duration::from_secs(300);
const SEED: u64 = 20240601;

struct Line {
    id: u8,
    ok: bool,
    detail: String,
}

fn word(s: &str, n: usize) -> MixedBraidWord {
    parse(s, Some(n)).expect("fixed input")
}

fn summarize(outs: &[Outcome]) -> (bool, String) {
    let ok = outs.iter().all(Outcome::ok);
    let text = outs.iter().map(|o| format!("{o} [{}]", o.mode)).collect::<Vec<_>>().join(", ");
    for o in outs {
        for f in o.failures.iter().take(3) {
            eprintln!("  {} {}: {f}", o.suite, o.mode);
        }
    }
    (ok, text)
}

fn golden_trace() -> Line {
    let q = Scalar::q();
    let one = Scalar::one();
    let z = Scalar::z();
    let s3 = Scalar::s(3);
    let want = q.mul(&q.sub(&one)).mul(&z).mul(&s3).add(&q.mul(&q).sub(&q).add(&one).mul(&z).mul(&z).mul(&s3));
    let start = Instant::now();
    let got = Tracer::new(Mode::Infinity).trace_braid(&word("s2 s1 t^3 s1^-1 s3 s2 s3", 4));
    let took = start.elapsed();
    Line {
        id: 1,
        ok: got == want && took < GOLDEN_BUDGET,
        detail: format!("tr = {got}; {took:.3?} (budget {GOLDEN_BUDGET:?})"),
    }
}

fn power_reductions() -> Line {
    let (s, a) = (Scalar::s, Scalar::a);
    let t5 = word("t^5", 1);
    let mut ok = Tracer::new(Mode::Infinity).trace_braid(&t5) == s(5);
    for d in 6..=8 {
        ok &= Tracer::new(Mode::Cyclotomic(d)).trace_braid(&t5) == s(5);
    }
    let d5 = (0..5).fold(Scalar::zero(), |acc, j| acc.add(&a(j).mul(&s(j as i32))));
    ok &= Tracer::new(Mode::Cyclotomic(5)).trace_braid(&t5) == d5;
    let a2sq = a(2).mul(&a(2));
    let d3 = a2sq
        .mul(&a(2))
        .add(&a(1).mul(&a(2)).mul(&Scalar::from_i64(2)))
        .add(&a(0))
        .mul(&s(2))
        .add(&a(1).mul(&a(1)).add(&a(1).mul(&a2sq)).add(&a(0).mul(&a(2))).mul(&s(1)))
        .add(&a(0).mul(&a(1)).add(&a(0).mul(&a2sq)));
    let got3 = Tracer::new(Mode::Cyclotomic(3)).trace_braid(&t5);
    ok &= got3 == d3;
    Line { id: 2, ok, detail: format!("infinity, d=5..8 and d=3; d=3 gives {got3}") }
}

fn initial_conditions() -> Line {
    let inv = Invariant::new(Mode::Infinity);
    let mut ok = inv.value(&word("", 1)).is_one();
    for k in -5..=5i32 {
        let want = if k == 0 { Scalar::one() } else { Scalar::s(k) };
        ok &= inv.value(&word(&format!("t^{k}"), 1)) == want;
    }
    Line { id: 3, ok, detail: "X(unknot) = 1, X(t^k) = s_k for |k| <= 5".into() }
}

fn markov() -> Line {
    let start = Instant::now();
    let mut outs = Vec::new();
    for mode in [Mode::Infinity, Mode::Cyclotomic(2), Mode::Cyclotomic(3)] {
        for suite in [Suite::Conjugation, Suite::Stabilization] {
            outs.push(run(suite, mode, SEED, 0..200));
        }
    }
    let took = start.elapsed();
    let (ok, text) = summarize(&outs);
    Line { id: 4, ok: ok && took < MARKOV_BUDGET, detail: format!("{text}; {took:.1?} (budget {MARKOV_BUDGET:?})") }
}

fn skein() -> Line {
    let outs = vec![
        run(Suite::SkeinHomfly, Mode::Infinity, SEED, 0..500),
        run(Suite::SkeinCyclotomic, Mode::Cyclotomic(2), SEED, 0..100),
        run(Suite::SkeinCyclotomic, Mode::Cyclotomic(3), SEED, 0..100),
    ];
    let (ok, text) = summarize(&outs);
    Line { id: 5, ok, detail: text }
}

fn homfly() -> Line {
    let inv = Invariant::new(Mode::Infinity);
    let mut ok = true;
    for w in [word("s1^3", 2), word("s1 s2^-1 s1 s2^-1", 3)] {
        ok &= homfly_compare(&inv, &w).expect("loop-free").equal;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=8);
        let w = MixedBraidWord::random_with(&mut rng, n, len, 0);
        let c = homfly_compare(&inv, &w).expect("loop-free");
        if c.equal {
            agree += 1;
        } else {
            eprintln!("  {w}: engine {} oracle {}", c.engine, c.oracle);
        }
    }
    ok &= agree == 50;
    Line { id: 6, ok, detail: format!("trefoil, figure-eight, {agree}/50 random loop-free words") }
}

fn structure() -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 1..=3usize {
        for d in 1..=3u32 {
            let fact: usize = (1..=n).product();
            ok &= basis_enumerate(n, d).map(|b| b.len()).ok() == Some((d as usize).pow(n as u32) * fact);
        }
    }
    notes.push("rank d^n n! for n,d <= 3".to_string());
    for (n, d) in [(2, 2), (2, 3), (3, 2)] {
        let r = specialize_check(n, d, None).expect("small sizes");
        ok &= r.failures() == 0;
        notes.push(format!("{}/{} q=1 products at ({n},{d})", r.len() - r.failures(), r.len()));
    }
    let outs = vec![
        run(Suite::Associativity, Mode::Infinity, SEED, 0..200),
        run(Suite::TraceSymmetry, Mode::Infinity, SEED, 0..100),
        run(Suite::GeneratorRule, Mode::Infinity, SEED, 0..100),
        run(Suite::LoopRule, Mode::Infinity, SEED, 0..100),
    ];
    let (good, text) = summarize(&outs);
    notes.push(text);
    Line { id: 7, ok: ok && good, detail: notes.join("; ") }
}

fn conversions() -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    for mode in [Mode::Infinity, Mode::Cyclotomic(2), Mode::Cyclotomic(3)] {
        match round_trips(mode) {
            Ok(rts) => {
                for r in rts {
                    ok &= r.ok();
                    for f in &r.failures {
                        eprintln!("  {} {}: {f}", r.name, r.mode);
                    }
                    notes.push(format!("{} {}/{} [{}]", r.name, r.passed, r.total, r.mode));
                }
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{mode}: {e}"));
            }
        }
    }
    Line { id: 8, ok, detail: notes.join(", ") }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Line; 8] =
        [golden_trace, power_reductions, initial_conditions, markov, skein, homfly, structure, conversions];
    let mut all = true;
    for c in criteria {
        let line = c();
        all &= line.ok;
        println!("criterion {}: {} ({})", line.id, if line.ok { "PASS" } else { "FAIL" }, line.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
