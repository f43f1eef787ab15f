//! Argument parsing, dispatch and report rendering for the `mms` binary.
//!
//! [`run`] never touches the process: it returns what to print and the exit
//! code, so the whole front end can be tested in-process.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mms_core::combinatorics::{binomial, KSubset};
use mms_core::counting::{count_nonnegative, Restriction};
use mms_core::lemmas::{self, LemmaReport};
use mms_core::report::Verdict;
use mms_core::scheme::{self, MatrixKind, DEFAULT_DENSE_BUDGET};
use mms_core::search::{self, SearchSpace};
use mms_core::weights::{self, WeightVector};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mms", version, about = "Exact checks for nonnegative k-subset sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores). Never changes the output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Master seed for generators and simulations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time in `runtime_ms` (otherwise null, for reproducible output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count nonnegative k-subsets, optionally restricted.
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(short)]
        k: usize,
        /// contains:i, intersects:i,j,... or disjoint:i,j,... (0-based sorted positions)
        #[arg(long)]
        restrict: Vec<String>,
    },
    /// Check one lemma or identity on a weight vector.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        j: Option<usize>,
        /// The negative set T as 0-based sorted positions (default: the k smallest).
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Dense matrix entry budget for the wilson checks.
        #[arg(long, default_value_t = DEFAULT_DENSE_BUDGET as u64)]
        budget: u64,
    },
    /// Dump inclusion, Kneser or Bose-Mesner matrices.
    Spectrum {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(short)]
        j: usize,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_DENSE_BUDGET as u64)]
        budget: u64,
    },
    /// Minimize the nonnegative count over few-valued zero-sum patterns.
    Search {
        #[arg(long, required_unless_present = "counterexample")]
        n: Option<usize>,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        max_distinct: usize,
        #[arg(long, default_value_t = 10, allow_negative_numbers = false)]
        value_range: i64,
        /// Search n = 3k + r with at most three values.
        #[arg(long, conflicts_with_all = ["n", "max_distinct"], requires = "r")]
        counterexample: bool,
        #[arg(short)]
        r: Option<usize>,
        #[arg(long, default_value_t = search::DEFAULT_SEARCH_BUDGET as u64)]
        budget: u64,
    },
    /// Write a weight file (star or seeded random).
    Gen {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        star: bool,
        #[arg(long)]
        random: bool,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        magnitude: u64,
        /// Write the weight file here and print a report instead of the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Weight file: {"weights": [...], "mode": ...}
    #[arg(long, conflicts_with_all = ["star", "random"])]
    weights: Option<PathBuf>,
    #[arg(long, conflicts_with = "random")]
    star: bool,
    #[arg(long)]
    random: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 10)]
    magnitude: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    Eigenvector,
    Wilson,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Lotson1,
    #[value(name = "4")]
    Four,
    Partition,
    Scalar,
    Theorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Inclusion,
    Kneser,
    BoseMesner,
}

/// What the binary should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { stdout: String::new(), stderr: message, code: EXIT_USAGE }
    }
}

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Verified => EXIT_VERIFIED,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::PreconditionsNotMet => EXIT_USAGE,
    }
}

/// Parses `argv` without running anything; the error is the rendered usage message.
pub fn check_args<I, T>(argv: I) -> Result<(), String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map(|_| ()).map_err(|e| e.render().to_string())
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    let started = Instant::now();
    let result = match cli.threads {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(usize::from(w)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(format!("cannot start {w} worker threads: {e}")),
        },
        None => dispatch(&cli),
    };
    let done = match result {
        Ok(done) => done,
        Err(message) => return Outcome::usage(format!("error: {message}\n")),
    };
    let Done { command, inputs, report, verdict, raw } = done;
    if let Some(raw) = raw {
        return Outcome { stdout: raw, stderr: String::new(), code: EXIT_VERIFIED };
    }
    let runtime = cli.timing.then(|| started.elapsed().as_millis() as u64);
    let doc = json!({
        "command": command,
        "inputs": inputs,
        "report": report,
        "verdict": verdict,
        "runtime_ms": runtime,
    });
    let stdout = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("json values always serialize") + "\n",
        Format::Text => render_text(&doc),
    };
    Outcome { stdout, stderr: String::new(), code: exit_code(verdict) }
}

struct Done {
    command: &'static str,
    inputs: Value,
    report: Value,
    verdict: Verdict,
    /// Printed verbatim instead of a report (gen without --out).
    raw: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports always serialize")
}

fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    verdicts.into_iter().fold(Verdict::Verified, |acc, v| match (acc, v) {
        (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
        (Verdict::PreconditionsNotMet, _) | (_, Verdict::PreconditionsNotMet) => Verdict::PreconditionsNotMet,
        _ => Verdict::Verified,
    })
}

fn load(source: &Source, seed: u64) -> Result<WeightVector, String> {
    let chosen = [source.weights.is_some(), source.star, source.random].iter().filter(|&&b| b).count();
    if chosen != 1 {
        return Err("give exactly one of --weights PATH, --star --n N, --random --n N".into());
    }
    if let Some(path) = &source.weights {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let wv = weights::load_weights(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(wv.with_source(path.display().to_string()));
    }
    let n = source.n.ok_or("--star and --random need --n")?;
    let wv = if source.star {
        weights::gen_star(n)
    } else {
        weights::gen_random_zero_sum(n, source.magnitude, seed)
    };
    wv.map_err(|e| e.to_string())
}

fn source_inputs(source: &Source, x: &WeightVector, seed: u64) -> Value {
    let generator = if source.star {
        json!({ "kind": "star", "n": x.n() })
    } else if source.random {
        json!({ "kind": "random", "n": x.n(), "magnitude": source.magnitude, "seed": seed.to_string() })
    } else {
        json!({ "kind": "file" })
    };
    json!({ "generator": generator, "vector": to_value(x) })
}

fn parse_subset(text: &str, n: usize) -> Result<KSubset, String> {
    let indices = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad index {t:?} in --subset")))
        .collect::<Result<Vec<_>, _>>()?;
    KSubset::new(n, indices).map_err(|e| e.to_string())
}

fn negative_set(x: &WeightVector, k: usize, subset: Option<&str>) -> Result<KSubset, String> {
    let n = x.n();
    match subset {
        Some(text) => parse_subset(text, n),
        None if k >= 1 && k <= n => KSubset::new(n, (n - k..n).collect()).map_err(|e| e.to_string()),
        None => Err(format!("need 1 <= k <= n, got k = {k}, n = {n}")),
    }
}

fn lemma_done(inputs: Value, reports: &[LemmaReport]) -> Done {
    let verdict = combine(reports.iter().map(|r| r.verdict));
    let report = if reports.len() == 1 { to_value(&reports[0]) } else { to_value(&reports) };
    Done { command: "verify", inputs, report, verdict, raw: None }
}

fn dispatch(cli: &Cli) -> Result<Done, String> {
    let seed = cli.seed;
    let e = |err: mms_core::Error| err.to_string();
    match &cli.command {
        Command::Count { source, k, restrict } => {
            let x = load(source, seed)?;
            let restriction = Restriction::parse_all(restrict).map_err(e)?;
            let report = count_nonnegative(&x, *k, &restriction).map_err(e)?;
            let (n, k) = (x.n(), *k);
            // Only an unrestricted count with n >= 8k² can contradict anything.
            let in_regime = restriction.is_empty() && n >= 8 * k * k;
            let below = num_bigint::BigInt::from(report.nonnegative_count) < binomial(n as i64 - 1, k as i64 - 1);
            let verdict = Verdict::from_checks(!(in_regime && below));
            let inputs = json!({
                "weights": source_inputs(source, &x, seed),
                "k": k,
                "restrict": restrict,
            });
            Ok(Done { command: "count", inputs, report: to_value(&report), verdict, raw: None })
        }
        Command::Verify { source, lemma, k, j, subset, trials, budget } => {
            let k = *k;
            if *lemma == Lemma::Scalar && source.weights.is_none() && !source.star && !source.random {
                let n = source.n.ok_or("--lemma scalar needs --n (or a weight vector)")?;
                let r = lemmas::verify_scalar_inequalities(n, k).map_err(e)?;
                let inputs = json!({ "lemma": "scalar", "n": n, "k": k });
                return Ok(lemma_done(inputs, &[r]));
            }
            let x = load(source, seed)?;
            let mut inputs = json!({
                "weights": source_inputs(source, &x, seed),
                "lemma": lemma.to_possible_value().expect("no skipped variants").get_name(),
                "k": k,
            });
            let js: Vec<usize> = match j {
                Some(j) => vec![*j],
                None => (0..=k).collect(),
            };
            match lemma {
                Lemma::Eigenvector => {
                    inputs["j"] = to_value(&js);
                    let reports = js
                        .iter()
                        .map(|&j| scheme::verify_eigenvector(&x, j, k))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(e)?;
                    let verdict = combine(reports.iter().map(|r| r.verdict));
                    Ok(Done { command: "verify", inputs, report: to_value(&reports), verdict, raw: None })
                }
                Lemma::Wilson => {
                    inputs["j"] = to_value(&js);
                    let reports = js
                        .iter()
                        .filter(|&&j| j >= 1)
                        .map(|&j| scheme::verify_wilson_identities(&x, j, k, u128::from(*budget)))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(e)?;
                    if reports.is_empty() {
                        return Err("wilson identities need j >= 1".into());
                    }
                    let verdict = combine(reports.iter().map(|r| r.verdict));
                    Ok(Done { command: "verify", inputs, report: to_value(&reports), verdict, raw: None })
                }
                Lemma::Two => Ok(lemma_done(inputs, &[lemmas::verify_lemma2(&x, k).map_err(e)?])),
                Lemma::Three => Ok(lemma_done(inputs, &[lemmas::verify_lemma3(&x, k).map_err(e)?])),
                Lemma::Lotson1 => Ok(lemma_done(inputs, &[lemmas::verify_lemma_lotson1(&x, k).map_err(e)?])),
                Lemma::Four => {
                    let t = negative_set(&x, k, subset.as_deref())?;
                    inputs["subset"] = to_value(&t.indices());
                    Ok(lemma_done(inputs, &[lemmas::verify_lemma4(&x, k, &t).map_err(e)?]))
                }
                Lemma::Partition => {
                    let t = negative_set(&x, k, subset.as_deref())?;
                    inputs["subset"] = to_value(&t.indices());
                    inputs["trials"] = json!(trials.to_string());
                    inputs["seed"] = json!(seed.to_string());
                    let r = lemmas::simulate_partition(&x, k, &t, *trials, seed).map_err(e)?;
                    let verdict = r.verdict;
                    Ok(Done { command: "verify", inputs, report: to_value(&r), verdict, raw: None })
                }
                Lemma::Scalar => Ok(lemma_done(inputs, &[lemmas::verify_scalar_inequalities(x.n(), k).map_err(e)?])),
                Lemma::Theorem => Ok(lemma_done(inputs, &[lemmas::verify_theorem(&x, k).map_err(e)?])),
            }
        }
        Command::Spectrum { kind, n, j, k, budget } => {
            let (n, j, k, budget) = (*n, *j, *k, u128::from(*budget));
            let labels = |size: usize| -> Result<Vec<String>, String> {
                Ok(scheme::subset_masks(n, size).map_err(e)?.into_iter().map(mask_label).collect())
            };
            let inputs = json!({
                "kind": kind.to_possible_value().expect("no skipped variants").get_name(),
                "n": n,
                "j": j,
                "k": k,
            });
            let (report, verdict) = match kind {
                Kind::Inclusion | Kind::Kneser => {
                    let mk = if *kind == Kind::Inclusion { MatrixKind::Inclusion } else { MatrixKind::Kneser };
                    let m = scheme::build_structure_matrix(mk, n, j, k, budget).map_err(e)?;
                    let report = json!({
                        "rows": labels(j)?,
                        "columns": labels(k)?,
                        "entries": m.row_strings(),
                        "row_sums": m.row_sums(),
                        "column_sums": m.column_sums(),
                    });
                    (report, Verdict::Verified)
                }
                Kind::BoseMesner => {
                    let op = scheme::BoseMesnerOperator::new(n, j, k).map_err(e)?;
                    let dense = op.materialize(budget).map_err(e)?;
                    let factorization = scheme::verify_factorization(n, j, k, budget).map_err(e)?;
                    let entries: Vec<Vec<String>> =
                        dense.rows().into_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                    let report = json!({
                        "labels": labels(k)?,
                        "entries": entries,
                        "eigenvalue_on_zero_sum_sums": scheme::eigenvalue(n, j, k).to_string(),
                        "factorization": to_value(&factorization),
                    });
                    (report, factorization.verdict)
                }
            };
            Ok(Done { command: "spectrum", inputs, report, verdict, raw: None })
        }
        Command::Search { n, k, max_distinct, value_range, counterexample, r, budget } => {
            let report = if *counterexample {
                let r = r.ok_or("--counterexample needs -r")?;
                search::find_counterexample(*k, r, *value_range).map_err(e)?
            } else {
                let n = n.ok_or("search needs --n")?;
                let space = SearchSpace::new(n, *k, *max_distinct, *value_range).map_err(e)?;
                search::sweep_patterns_with_budget(&space, u128::from(*budget)).map_err(e)?
            };
            // A sweep result contradicts nothing below 8k²; engines must agree everywhere.
            let in_regime = report.n >= 8 * report.k * report.k;
            let verdict = Verdict::from_checks(report.reverified && !(in_regime && report.violation));
            let inputs = json!({
                "n": report.n,
                "k": report.k,
                "max_distinct": report.space.max_distinct,
                "value_range": value_range,
                "counterexample": counterexample,
                "r": r,
            });
            Ok(Done { command: "search", inputs, report: to_value(&report), verdict, raw: None })
        }
        Command::Gen { star, random: _, n, magnitude, out } => {
            let x = if *star { weights::gen_star(*n) } else { weights::gen_random_zero_sum(*n, *magnitude, seed) }
                .map_err(e)?;
            let document = serde_json::to_string_pretty(&weights::weight_document(&x))
                .expect("json values always serialize")
                + "\n";
            let inputs = if *star {
                json!({ "kind": "star", "n": n })
            } else {
                json!({ "kind": "random", "n": n, "magnitude": magnitude, "seed": seed.to_string() })
            };
            match out {
                None => Ok(Done { command: "gen", inputs, report: Value::Null, verdict: Verdict::Verified, raw: Some(document) }),
                Some(path) => {
                    std::fs::write(path, &document).map_err(|err| format!("cannot write {}: {err}", path.display()))?;
                    let report = json!({ "path": path.display().to_string(), "n": x.n() });
                    Ok(Done { command: "gen", inputs, report, verdict: Verdict::Verified, raw: None })
                }
            }
        }
    }
}

fn mask_label(mask: u128) -> String {
    let items: Vec<String> = (0..128).filter(|i| mask >> i & 1 == 1).map(|i: u32| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Indented `key: value` rendering of a json document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, doc, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(format!("[{}]", items.iter().map(|i| scalar(i).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        write_value(out, val, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, item, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
