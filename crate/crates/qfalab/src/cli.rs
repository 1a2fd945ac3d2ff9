//! Subcommands, dispatch and exit codes.

use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qfalab_core::harness::{
    end_to_end, enumerate_uniqueness, freeness_enumeration, verify_lemma_identities, Verdict,
};
use qfalab_core::kronpoly::{build_dense, eval_lazy, KronPlan, PlanPolynomial};
use qfalab_core::mmpcp::brute_search;
use qfalab_core::polypack::{
    cantor_pair, complete_square, f2, fk_scale_exponent, four_squares, injectivity_scan, ScanReport,
};
use qfalab_core::qfa::{accept_rational, accept_signature, accept_signature_exact, validate};
use qfalab_core::reduction::{claus_trim, compile_ambiguity, compile_injectivity};
use qfalab_core::Rational;

use crate::formats::{self, AnyQfa, FormatError, ReportValue};
use crate::search::{budget_from_env, parallel_collision_search};

pub const EXIT_OK: i32 = 0;
/// A collision was found where injectivity was being certified.
pub const EXIT_COLLISION: i32 = 2;
/// Solver and automaton disagree, or a property check failed.
pub const EXIT_INCONSISTENT: i32 = 3;
/// Command line or input file does not parse.
pub const EXIT_USAGE: i32 = 64;
/// Input parsed but the operation rejected it.
pub const EXIT_DOMAIN: i32 = 65;
/// A file could not be read or written.
pub const EXIT_IO: i32 = 66;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Parse(e.0)
    }
}

fn domain(e: impl fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qfalab", version, about = "Exact experiments with quaternion-encoded quantum finite automata")]
pub struct Cli {
    /// Add decimal approximations with this many digits next to exact values.
    #[arg(long, global = true, value_name = "DIGITS")]
    pub float: Option<u32>,
    /// Threads for collision searches.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile an instance into the 8-state injectivity automaton.
    Compile(CompileArgs),
    /// Compile an instance into the 9-state ambiguity automaton.
    CompileAmbiguity(CompileArgs),
    /// Compile a Claus instance with one generator folded into the start vector.
    Trim(CompileArgs),
    /// Exact acceptance value of one word.
    Accept {
        #[arg(long)]
        qfa: PathBuf,
        /// Word as "x1 x2", generator names, or "" for the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// All collisions among words up to a length.
    Collide {
        #[arg(long)]
        qfa: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Bounded search for a mixed solution.
    MmpcpSolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Solver and collision search on the compiled automaton, cross-checked.
    EndToEnd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Grid scan of the packing polynomial (or Cantor pairing).
    Polycheck {
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        cantor: bool,
    },
    /// Four-square split of N, or with --complete the least square completion.
    Foursquares {
        n: u64,
        #[arg(long)]
        complete: bool,
    },
    /// Evaluate a Kronecker plan on a word over the generators of an automaton.
    KronDemo {
        /// Plan JSON; defaults to the nested six-entry plan.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Automaton whose generator matrices are the bases.
        #[arg(long)]
        qfa: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Also build the dense automaton and compare.
        #[arg(long)]
        dense: bool,
    },
    /// Quaternion sign identities, key uniqueness and semigroup freeness.
    VerifyLemmas {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        max_syllables: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct CompileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// JSON to print and the exit code to return.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome { output, code: EXIT_OK }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    Ok(formats::parse_text(&read_input(path)?)?)
}

fn read_automaton(path: &Path) -> Result<AnyQfa, CliError> {
    let q = formats::any_qfa_from_json(&read_json(path)?)?;
    if let AnyQfa::Rational(r) = &q {
        validate(r).map_err(|v| {
            CliError::Domain(format!("invalid automaton: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
        })?;
    }
    Ok(q)
}

fn add_float(out: &mut Value, key: &str, v: &impl ReportValue, float: Option<u32>) {
    if let Some(d) = float {
        out[key] = json!(v.decimal(d));
    }
}

fn scan_to_json(r: &ScanReport, range_bound: Option<i64>) -> Value {
    let collision = r.collisions.first().map(|c| {
        json!({
            "value": formats::rational_to_json(&c.value),
            "first": [formats::rational_to_json(&c.first.0), formats::rational_to_json(&c.first.1)],
            "second": [formats::rational_to_json(&c.second.0), formats::rational_to_json(&c.second.1)],
        })
    });
    let mut out = json!({
        "status": if r.collisions.is_empty() { "injective" } else { "collision" },
        "k_max": r.k_max,
        "pairs": r.pairs,
        "collisions": r.collisions.len(),
        "colliding_values": r.colliding_values(),
        "collision": collision,
        "max_abs": formats::rational_to_json(&r.max_abs),
    });
    if let Some(b) = range_bound {
        out["range_ok"] = json!(r.max_abs <= Rational::from(b));
    }
    out
}

fn write_or_return(value: Value, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    match out {
        None => Ok(Outcome::ok(value)),
        Some(path) => {
            std::fs::write(path, formats::to_text(&value)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Outcome::ok(json!({ "status": "written", "path": path.display().to_string() })))
        }
    }
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let float = cli.float;
    match &cli.command {
        Command::Compile(a) | Command::CompileAmbiguity(a) | Command::Trim(a) => {
            let inst = formats::instance_from_json(&read_json(&a.input)?)?;
            let q = match &cli.command {
                Command::Compile(_) => compile_injectivity(&inst),
                Command::CompileAmbiguity(_) => compile_ambiguity(&inst),
                _ => claus_trim(&inst),
            }
            .map_err(domain)?;
            write_or_return(formats::radical_to_json(&q), &a.out)
        }
        Command::Accept { qfa, word } => {
            let q = read_automaton(qfa)?;
            let w = formats::parse_word(word, &q.letter_names())?;
            let mut out = json!({ "word": w.to_string() });
            match &q {
                AnyQfa::Rational(r) => {
                    let v = accept_rational(r, &w).map_err(domain)?;
                    out["value"] = formats::rational_to_json(&v);
                    add_float(&mut out, "float", &v, float);
                }
                AnyQfa::Radical(r) => {
                    let s = accept_signature(r, &w).map_err(domain)?;
                    out["signature"] = formats::signature_to_json(&s);
                    out["exact_signature"] = formats::signature_to_json(&accept_signature_exact(r, &w).map_err(domain)?);
                    add_float(&mut out, "float", &s, float);
                }
            }
            Ok(Outcome::ok(out))
        }
        Command::Collide { qfa, max_len } => {
            let budget = budget_from_env().map_err(CliError::Parse)?;
            let report = match read_automaton(qfa)? {
                AnyQfa::Rational(q) => {
                    let r = parallel_collision_search(&q, *max_len, budget, cli.jobs).map_err(domain)?;
                    (r.is_injective(), formats::collision_report_to_json(&r, float))
                }
                AnyQfa::Radical(q) => {
                    let r = parallel_collision_search(&q, *max_len, budget, cli.jobs).map_err(domain)?;
                    (r.is_injective(), formats::collision_report_to_json(&r, float))
                }
            };
            Ok(Outcome { code: if report.0 { EXIT_OK } else { EXIT_COLLISION }, output: report.1 })
        }
        Command::MmpcpSolve { input, max_len } => {
            let inst = formats::instance_from_json(&read_json(input)?)?;
            let sol = brute_search(&inst, *max_len).map_err(domain)?;
            Ok(Outcome::ok(json!({
                "status": if sol.is_some() { "solution" } else { "none" },
                "max_len": max_len,
                "solution": sol.as_ref().map(|s| formats::solution_to_json(&inst, s)),
            })))
        }
        Command::EndToEnd { input, max_len } => {
            let inst = formats::instance_from_json(&read_json(input)?)?;
            let budget = budget_from_env().map_err(CliError::Parse)?;
            let r = end_to_end(&inst, *max_len, budget).map_err(domain)?;
            let code = if r.verdict == Verdict::Consistent { EXIT_OK } else { EXIT_INCONSISTENT };
            Ok(Outcome { output: formats::end_to_end_to_json(&inst, &r, float), code })
        }
        Command::Polycheck { kmax, cantor } => {
            let (report, bound) = if *cantor {
                (injectivity_scan(cantor_pair, *kmax).map_err(domain)?, None)
            } else {
                (injectivity_scan(f2, *kmax).map_err(domain)?, Some(9))
            };
            let code = if report.is_injective() { EXIT_OK } else { EXIT_COLLISION };
            Ok(Outcome { output: scan_to_json(&report, bound), code })
        }
        Command::Foursquares { n, complete } => {
            if *complete {
                let delta = complete_square(&(*n).into());
                let split = u64::try_from(&delta).ok().and_then(|d| four_squares(d).ok());
                Ok(Outcome::ok(json!({ "s": n.to_string(), "delta": delta.to_string(), "split": split })))
            } else {
                let sq = four_squares(*n).map_err(domain)?;
                Ok(Outcome::ok(json!({ "n": n.to_string(), "squares": sq })))
            }
        }
        Command::KronDemo { plan, qfa, word, dense } => {
            let plan = match plan {
                Some(p) => formats::plan_from_json(&read_json(p)?)?,
                None => KronPlan::f6(),
            };
            let q = read_automaton(qfa)?;
            let bases = q.bases();
            let w = formats::parse_word(word, &q.letter_names())?;
            let lazy = eval_lazy(&bases, &plan, &w).map_err(domain)?;
            let mut out = json!({
                "word": w.to_string(),
                "value": formats::rational_to_json(&lazy.value),
                "normalizer": lazy.normalizer.to_string(),
            });
            match plan.polynomial() {
                PlanPolynomial::Nested { arity } => {
                    out["scale"] = json!(format!("25^{}", fk_scale_exponent(*arity).map_err(domain)?));
                }
                PlanPolynomial::Terms(_) => {
                    let p = lazy.probability();
                    out["probability"] = formats::rational_to_json(&p);
                    add_float(&mut out, "float", &p, float);
                }
            }
            if *dense {
                let d = build_dense(&bases, &plan).map_err(domain)?;
                let v = accept_rational(&d, &w).map_err(domain)?;
                out["dense"] = formats::rational_to_json(&v);
                out["dimension"] = json!(d.dimension());
                let agree = v == lazy.probability();
                out["agree"] = json!(agree);
                if !agree {
                    return Ok(Outcome { output: out, code: EXIT_INCONSISTENT });
                }
            }
            Ok(Outcome::ok(out))
        }
        Command::VerifyLemmas { samples, max_syllables, seed } => {
            let lemma = verify_lemma_identities(*samples, *max_syllables, *seed);
            let unique = enumerate_uniqueness(3, 4);
            let (distinct, words) = freeness_enumeration(10);
            let pass = lemma.is_ok() && unique.is_ok() && distinct == words;
            let out = json!({
                "status": if pass { "pass" } else { "fail" },
                "sign_identities": match &lemma {
                    Ok(n) => json!({ "checked": n }),
                    Err(c) => json!({ "counterexample": c.word.to_string(), "transform": format!("{:?}", c.transform) }),
                },
                "uniqueness": match &unique {
                    Ok(n) => json!({ "checked": n }),
                    Err(e) => json!({ "failure": e.to_string() }),
                },
                "freeness": { "words": words, "distinct": distinct },
            });
            Ok(Outcome { output: out, code: if pass { EXIT_OK } else { EXIT_INCONSISTENT } })
        }
    }
}

/// Parses `args`, runs, prints JSON to stdout and diagnostics to stderr, and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(formats::to_text(&o.output).as_bytes()).is_err() {
                return EXIT_IO;
            }
            o.code
        }
        Err(e) => {
            eprintln!("qfalab: {e}");
            e.exit_code()
        }
    }
}
