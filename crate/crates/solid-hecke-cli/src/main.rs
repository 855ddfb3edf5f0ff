//! `solid-hecke`: traces, invariants and verification suites for mixed braids.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use solid_hecke::algebra::Mode;
use solid_hecke::braid::{parse, MixedBraidWord};
use solid_hecke::checks::{self, Outcome, Suite};
use solid_hecke::coefficients::{Scalar, Symbol};
use solid_hecke::invariant::{skein_triple, verify_skein_cyclotomic, verify_skein_homfly, Invariant};
use solid_hecke::oracle::specialize_check;
use solid_hecke::trace::Tracer;

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "solid-hecke", version, about = "Markov traces and solid-torus link invariants from mixed braid words")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Markov trace of a braid word
    Trace(EvalArgs),
    /// Normalized invariant X of the closure
    Invariant(EvalArgs),
    /// Checks a skein rule on one word
    Skein(SkeinArgs),
    /// Randomized conjugation and stabilization invariance
    MarkovTest(SuiteArgs),
    /// Golden vectors, round trips and every property suite
    Selftest(SuiteArgs),
}

#[derive(Args)]
struct Common {
    /// infinity or cyclo:<d>
    #[arg(long, default_value = "infinity", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    /// Word such as "s2 . s1 . t^3 . s1^-1", with t'i^k as loop sugar
    word: String,
    #[arg(long)]
    strands: Option<usize>,
    #[command(flatten)]
    common: Common,
    /// Rational values for symbols, e.g. qh=2,a0=1/3
    #[arg(long, value_parser = parse_subst)]
    subst: Option<Subst>,
    #[arg(long, value_enum, default_value = "raw")]
    style: Style,
}

#[derive(Args)]
struct SkeinArgs {
    word: String,
    #[arg(long)]
    strands: Option<usize>,
    #[command(flatten)]
    common: Common,
    /// Letter position of a positive crossing (quadratic rule)
    #[arg(long, conflicts_with = "loop_index", required_unless_present = "loop_index")]
    pos: Option<usize>,
    /// Loop index i for the cyclotomic rule in α·t'_i^j
    #[arg(long = "loop")]
    loop_index: Option<usize>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads for independent trials
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    /// One term per monomial
    Raw,
    /// Coefficients grouped as polynomials in qh
    Collected,
}

#[derive(Clone)]
struct Subst(BTreeMap<Symbol, Scalar>);

fn parse_mode(s: &str) -> Result<Mode, String> {
    let m = s.parse::<Mode>().map_err(|e| e.to_string())?;
    if m == Mode::Cyclotomic(0) {
        return Err("cyclo needs d ≥ 1".into());
    }
    Ok(m)
}

fn parse_rational(v: &str) -> Result<Scalar, String> {
    let bad = || format!("`{v}` is not a rational number");
    let (n, d) = match v.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (v.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    Scalar::ratio(n, d).map_err(|_| format!("`{v}` has a zero denominator"))
}

fn parse_subst(s: &str) -> Result<Subst, String> {
    let mut map = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected symbol=value, got `{part}`"))?;
        let sym = k.trim().parse::<Symbol>().map_err(|e| e.to_string())?;
        map.insert(sym, parse_rational(v)?);
    }
    Ok(Subst(map))
}

/// Failure categories mapped to exit codes.
enum Fail {
    Property(String),
    Parse(String),
    Eval(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Property(_) => 1,
            Fail::Parse(_) => 2,
            Fail::Eval(_) => 3,
        }
    }
}

fn word(text: &str, strands: Option<usize>) -> Result<MixedBraidWord, Fail> {
    parse(text, strands).map_err(|e| Fail::Parse(format!("cannot parse `{text}`: {e}")))
}

impl Subst {
    /// Rejects values that make the normalization singular.
    fn check(&self, for_invariant: bool) -> Result<(), Fail> {
        let mut probe = BTreeMap::new();
        probe.insert(Symbol::Qh, Scalar::qh());
        probe.insert(Symbol::Lh, Scalar::lh());
        probe.extend(self.0.iter().map(|(k, v)| (*k, v.clone())));
        let sub = |x: &Scalar| x.substitute(&probe).map(|v| v.reduced()).unwrap_or_else(|_| Scalar::zero());
        let q = sub(&Scalar::q());
        if q.is_one() {
            return Err(Fail::Eval("substitution sets q = 1".into()));
        }
        if for_invariant && sub(&Scalar::q().mul(&Scalar::lh()).mul(&Scalar::lh())).is_one() {
            return Err(Fail::Eval("substitution sets λq = 1".into()));
        }
        Ok(())
    }

    fn apply(&self, v: &Scalar) -> Result<Scalar, Fail> {
        v.substitute(&self.0).map(|r| r.reduced()).map_err(|e| Fail::Eval(format!("substitution failed: {e}")))
    }
}

fn render(v: &Scalar, style: Style) -> String {
    match style {
        Style::Raw => v.reduced().to_string(),
        Style::Collected => v.collected(Symbol::Qh),
    }
}

fn emit(common: &Common, strands: usize, input: &str, result: Value, text: String) {
    match common.format {
        Format::Text => println!("{text}"),
        Format::Json => {
            let doc = json!({
                "mode": common.mode.to_string(),
                "strands": strands,
                "input": input,
                "result": result,
                "format_version": FORMAT_VERSION,
            });
            println!("{}", serde_json::to_string(&doc).expect("plain data"));
        }
    }
}

fn cmd_eval(args: &EvalArgs, invariant: bool) -> Result<(), Fail> {
    let w = word(&args.word, args.strands)?;
    if let Some(s) = &args.subst {
        s.check(invariant)?;
    }
    let mut v = if invariant {
        Invariant::new(args.common.mode).value(&w)
    } else {
        Tracer::new(args.common.mode).trace_braid(&w)
    };
    if let Some(s) = &args.subst {
        v = s.apply(&v)?;
    }
    let text = render(&v, args.style);
    emit(&args.common, w.strands(), &args.word, Value::String(text.clone()), text);
    Ok(())
}

fn cmd_skein(args: &SkeinArgs) -> Result<(), Fail> {
    let w = word(&args.word, args.strands)?;
    let inv = Invariant::new(args.common.mode);
    let check = match (args.pos, args.loop_index) {
        (Some(pos), _) => {
            let (p, m, z) = skein_triple(&w, pos).map_err(|e| Fail::Eval(e.to_string()))?;
            verify_skein_homfly(&inv, &p, &m, &z)
        }
        (None, Some(i)) => verify_skein_cyclotomic(&inv, &w, i).map_err(|e| Fail::Eval(e.to_string()))?,
        (None, None) => unreachable!("clap requires one of --pos/--loop"),
    };
    let text = if check.holds { "holds".to_string() } else { format!("fails: residue {}", check.witness) };
    let result = json!({"holds": check.holds, "residue": check.witness.to_string()});
    emit(&args.common, w.strands(), &args.word, result, text);
    if check.holds {
        Ok(())
    } else {
        Err(Fail::Property("skein rule does not hold".into()))
    }
}

fn run_suite(pool: &rayon::ThreadPool, suite: Suite, mode: Mode, trials: usize, seed: u64, jobs: usize) -> Outcome {
    let ranges = checks::chunks(trials, jobs);
    if ranges.is_empty() {
        return checks::run(suite, mode, seed, 0..0);
    }
    let parts = pool.install(|| ranges.into_par_iter().map(|r| checks::run(suite, mode, seed, r)).collect());
    Outcome::merge(parts)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Fail> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Fail::Eval(format!("thread pool: {e}")))
}

fn report_failures(outs: &[Outcome]) {
    for o in outs {
        for f in o.failures.iter().take(5) {
            eprintln!("{} ({}): {f}", o.suite, o.mode);
        }
    }
}

fn cmd_markov(args: &SuiteArgs) -> Result<(), Fail> {
    let pool = pool(args.jobs)?;
    let mode = args.common.mode;
    let outs: Vec<Outcome> = [Suite::Conjugation, Suite::Stabilization]
        .into_iter()
        .map(|s| run_suite(&pool, s, mode, args.trials, args.seed, args.jobs))
        .collect();
    let text = outs.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ");
    let result = serde_json::to_value(&outs).expect("plain data");
    emit(&args.common, 0, "markov-test", result, text);
    report_failures(&outs);
    if outs.iter().all(Outcome::ok) {
        Ok(())
    } else {
        Err(Fail::Property("invariance failed".into()))
    }
}

fn cmd_selftest(args: &SuiteArgs) -> Result<(), Fail> {
    let pool = pool(args.jobs)?;
    let mut lines = Vec::new();
    let mut ok = true;
    let mut line = |good: bool, msg: String, ok: &mut bool| {
        *ok &= good;
        lines.push(format!("{} {msg}", if good { "ok  " } else { "FAIL" }));
    };
    for g in checks::golden_vectors() {
        let msg = if g.ok() { g.name.clone() } else { format!("{}: expected {}, got {}", g.name, g.expected, g.got) };
        line(g.ok(), msg, &mut ok);
    }
    let modes = [Mode::Infinity, Mode::Cyclotomic(2), Mode::Cyclotomic(3)];
    for mode in modes {
        let rts = checks::round_trips(mode).map_err(|e| Fail::Eval(e.to_string()))?;
        for r in rts {
            line(r.ok(), format!("{}/{} {} ({mode})", r.passed, r.total, r.name), &mut ok);
        }
    }
    for (n, d) in [(2, 2), (2, 3), (3, 2)] {
        let r = specialize_check(n, d, None).map_err(|e| Fail::Eval(e.to_string()))?;
        let good = r.failures() == 0;
        line(good, format!("{}/{} q=1 specialization n={n} d={d}", r.len() - r.failures(), r.len()), &mut ok);
    }
    let mut outs = Vec::new();
    for mode in modes {
        for s in Suite::ALL.into_iter().filter(|s| s.applies(mode)) {
            let o = run_suite(&pool, s, mode, args.trials, args.seed, args.jobs);
            line(o.ok(), format!("{o} ({mode})"), &mut ok);
            outs.push(o);
        }
    }
    report_failures(&outs);
    let text = lines.join("\n");
    emit(&args.common, 0, "selftest", Value::Array(lines.iter().cloned().map(Value::String).collect()), text);
    if ok {
        Ok(())
    } else {
        Err(Fail::Property("selftest failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Trace(a) => cmd_eval(a, false),
        Cmd::Invariant(a) => cmd_eval(a, true),
        Cmd::Skein(a) => cmd_skein(a),
        Cmd::MarkovTest(a) => cmd_markov(a),
        Cmd::Selftest(a) => cmd_selftest(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Fail::Property(m) | Fail::Parse(m) | Fail::Eval(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
