//! `laver`: command-line access to tables, words, probes and embedding
//! candidates. One verdict per line on stdout, diagnostics on stderr.
//!
//! Exit codes: 0 verdict produced, 1 refuted or counterexample found,
//! 2 undecided or out of fuel, 3 usage or format error.

use std::fmt;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laver_core::embed::{
    build_two_sorted, check_candidate, check_two_sorted, composition_critical_sequence, AxiomReport, AxiomStatus,
    Candidate, CheckOptions, CriticalSequence, EmbedError, FnPrefix, TwoSortedBounds, DEFAULT_MAX_BFS,
};
use laver_core::fuel::DEFAULT_FUEL;
use laver_core::laver::{
    verify_law, write_products_csv, write_table, BuildLimits, LaverTable, Law, SampleBudget, TableCache, TableError,
    ABSOLUTE_MAX_LEVEL, DEFAULT_MEMORY_CAP,
};
use laver_core::limit::{
    eval_level, eval_profile, freeness_probe, herringbone_probe, signature, LimitError, SignatureResult, DEFAULT_CAP,
};
use laver_core::term::{parse_term, ParseError, Term};
use laver_core::word::{compare_detailed, normalize_composition, CompareOptions, CompareResult, WordError};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "laver",
    version,
    about = "Laver tables, LD words, limit probes and embedding candidates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Zero,
    One,
}

#[derive(Args, Clone, Copy)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Show 0 as 2^n (`one`) or as 0 (`zero`); element arguments follow it too.
    #[arg(long, value_enum, default_value = "zero")]
    convention: Convention,
    /// Byte budget for building tables.
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    memory_cap: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every product of A_n.
    Table {
        #[arg(long)]
        n: u32,
        /// Also write the period-compressed cache file here.
        #[arg(long)]
        file: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Periods of one element, or of all of them.
    Period {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// The value [t]_n.
    Eval {
        #[arg(long)]
        term: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// [t]_0 .. [t]_cap as `n,value` lines.
    Profile {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Largest level where t is zero.
    Signature {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Least level where 1·k is nonzero.
    Probe {
        #[arg(long)]
        k: u128,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Signature of the herringbone word u_k.
    Hprobe {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Order of two words in 1 and *: less, equiv or greater.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Rewrites a word in 1, * and o as a composition of plain words.
    Normalize {
        #[arg(long)]
        term: String,
        #[command(flatten)]
        common: Common,
    },
    /// Checks LD, Sigma, Hom and Periods at level n.
    CheckLaws {
        #[arg(long)]
        n: u32,
        /// One of ld, sigma, hom, periods; all when absent.
        #[arg(long)]
        law: Option<Law>,
        /// Draw this many random tuples instead of checking all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Single-sorted axioms of a candidate file.
    EmbedCheck {
        #[arg(long)]
        file: String,
        #[arg(long)]
        no_coherence: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Critical sequence of a function or of a composition `f o g`.
    EmbedCritseq {
        #[arg(long)]
        file: String,
        #[arg(long)]
        name: String,
        /// Number of terms.
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Bounded checks of the two-sorted structure built from a candidate.
    EmbedTwoSorted {
        #[arg(long)]
        file: String,
        #[arg(long, default_value_t = 3)]
        max_parts: usize,
        #[arg(long, default_value_t = 3)]
        ctx_len: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_BFS)]
        max_bfs: usize,
        #[command(flatten)]
        common: Common,
    },
}

const REFUTED: u8 = 1;
const UNDECIDED: u8 = 2;
const USAGE: u8 = 3;

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl fmt::Display) -> Self {
        Failure {
            code: USAGE,
            msg: msg.to_string(),
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        let code = match e {
            TableError::MemoryCap { .. } => UNDECIDED,
            _ => USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<LimitError> for Failure {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::Table(t) => t.into(),
            LimitError::Incoherent { .. } => Failure {
                code: REFUTED,
                msg: e.to_string(),
            },
            _ => Failure::usage(e),
        }
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        let code = match e {
            WordError::OutOfFuel(_) => UNDECIDED,
            _ => USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::usage(e)
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        let code = match e {
            EmbedError::CandidateRefuted { .. } => REFUTED,
            _ => USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

/// Collected stdout plus the exit code of a successful run.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn new(text: String) -> Self {
        Output { text, code: 0 }
    }

    fn with_code(text: String, code: u8) -> Self {
        Output { text, code }
    }

    fn json(v: Value, code: u8) -> Self {
        Output {
            text: format!("{v}\n"),
            code,
        }
    }
}

fn cache(common: &Common) -> TableCache {
    TableCache::new(BuildLimits {
        memory_cap: common.memory_cap,
        max_level: ABSOLUTE_MAX_LEVEL,
    })
}

fn show(common: &Common, level: u32, x: u32) -> u64 {
    match common.convention {
        Convention::One if x == 0 => 1u64 << level,
        _ => x as u64,
    }
}

/// An element argument in the chosen convention, as a raw table element.
fn element(common: &Common, t: &LaverTable, a: u64) -> Result<u32, Failure> {
    let size = t.size();
    let raw = match common.convention {
        Convention::Zero if a < size => a,
        Convention::One if (1..=size).contains(&a) => a % size,
        _ => {
            return Err(Failure::usage(format!(
                "element {a} is out of range for level {}",
                t.level()
            )))
        }
    };
    Ok(raw as u32)
}

fn term(s: &str) -> Result<Term, Failure> {
    Ok(parse_term(s)?)
}

fn read_candidate(path: &str) -> Result<Candidate, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    Ok(text.parse::<Candidate>()?)
}

fn signature_output(common: &Common, r: SignatureResult) -> Output {
    let code = match r {
        SignatureResult::Known(_) => 0,
        SignatureResult::Undecided(_) => UNDECIDED,
    };
    match common.format {
        Format::Json => {
            let v = match r {
                SignatureResult::Known(n) => json!({"status": "known", "level": n}),
                SignatureResult::Undecided(cap) => json!({"status": "undecided", "cap": cap}),
            };
            Output::json(v, code)
        }
        _ => Output::with_code(format!("{r}\n"), code),
    }
}

fn status_json(status: &AxiomStatus) -> Value {
    match status {
        AxiomStatus::Verified(n) => json!({"status": "verified", "instances": n}),
        AxiomStatus::Refuted(i) => json!({"status": "refuted", "instance": i.to_string()}),
        AxiomStatus::Unchecked(r) => json!({"status": "unchecked", "reason": r.to_string()}),
    }
}

fn report_output(common: &Common, report: &AxiomReport) -> Output {
    let code = if report.any_refuted() { REFUTED } else { 0 };
    match common.format {
        Format::Json => {
            let entries: Vec<Value> = report
                .entries
                .iter()
                .map(|e| {
                    let mut v = status_json(&e.status);
                    v["axiom"] = json!(e.axiom.to_string());
                    v["skipped"] = json!(e.skipped);
                    v
                })
                .collect();
            Output::json(json!({ "axioms": entries }), code)
        }
        Format::Csv => {
            let mut text = String::from("axiom,status,detail,skipped\n");
            for e in &report.entries {
                let (status, detail) = match &e.status {
                    AxiomStatus::Verified(n) => ("verified", n.to_string()),
                    AxiomStatus::Refuted(i) => ("refuted", format!("\"{i}\"")),
                    AxiomStatus::Unchecked(r) => ("unchecked", r.to_string()),
                };
                text.push_str(&format!("{},{status},{detail},{}\n", e.axiom, e.skipped));
            }
            Output::with_code(text, code)
        }
        Format::Text => Output::with_code(report.to_string(), code),
    }
}

fn critseq_output(common: &Common, s: &CriticalSequence) -> Output {
    match common.format {
        Format::Json => Output::json(json!({"values": s.values, "complete": s.complete}), 0),
        _ => Output::new(format!("{s}\n")),
    }
}

fn run(cmd: Cmd) -> Result<Output, Failure> {
    match cmd {
        Cmd::Table { n, file, common } => {
            let t = cache(&common).get(n)?;
            if let Some(path) = file {
                let mut f = fs::File::create(&path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
                write_table(&t, &mut f)?;
            }
            let one = common.convention == Convention::One;
            let elems: Vec<u32> = if one {
                (1..=t.size()).map(|x| (x % t.size()) as u32).collect()
            } else {
                (0..t.size() as u32).collect()
            };
            let text = match common.format {
                Format::Csv => {
                    let mut out = Vec::new();
                    write_products_csv(&t, one, &mut out)?;
                    String::from_utf8(out).expect("ascii")
                }
                Format::Json => {
                    let rows: Vec<Vec<u64>> = elems
                        .iter()
                        .map(|&a| elems.iter().map(|&b| show(&common, n, t.apply_raw(a, b))).collect())
                        .collect();
                    let elements: Vec<u64> = elems.iter().map(|&a| show(&common, n, a)).collect();
                    format!("{}\n", json!({"n": n, "elements": elements, "products": rows}))
                }
                Format::Text => {
                    let mut s = String::new();
                    for &a in &elems {
                        let row: Vec<String> = elems
                            .iter()
                            .map(|&b| show(&common, n, t.apply_raw(a, b)).to_string())
                            .collect();
                        s.push_str(&format!("{}: {}\n", show(&common, n, a), row.join(" ")));
                    }
                    s
                }
            };
            Ok(Output::new(text))
        }
        Cmd::Period { n, a, common } => {
            let t = cache(&common).get(n)?;
            let elems: Vec<u32> = match a {
                Some(a) => vec![element(&common, &t, a)?],
                None => (0..t.size() as u32).collect(),
            };
            let rows: Vec<(u64, u64)> = elems.iter().map(|&a| (show(&common, n, a), t.period_raw(a))).collect();
            let text = match common.format {
                Format::Json => {
                    let v: Vec<Value> = rows.iter().map(|(a, p)| json!({"a": a, "period": p})).collect();
                    format!("{}\n", json!({"n": n, "periods": v}))
                }
                Format::Csv => {
                    let mut s = String::from("a,period\n");
                    for (a, p) in rows {
                        s.push_str(&format!("{a},{p}\n"));
                    }
                    s
                }
                Format::Text if a.is_some() => format!("{}\n", rows[0].1),
                Format::Text => rows.iter().map(|(a, p)| format!("{a} {p}\n")).collect(),
            };
            Ok(Output::new(text))
        }
        Cmd::Eval { term: s, n, common } => {
            let t = term(&s)?;
            let v = show(&common, n, eval_level(&t, n, &cache(&common))?);
            Ok(match common.format {
                Format::Json => Output::json(json!({"term": t.to_string(), "n": n, "value": v}), 0),
                Format::Csv => Output::new(format!("n,value\n{n},{v}\n")),
                Format::Text => Output::new(format!("{v}\n")),
            })
        }
        Cmd::Profile { term: s, cap, common } => {
            let t = term(&s)?;
            let p = eval_profile(&t, cap, &cache(&common))?;
            let values: Vec<u64> = p
                .values
                .iter()
                .enumerate()
                .map(|(n, &v)| show(&common, n as u32, v))
                .collect();
            Ok(match common.format {
                Format::Json => Output::json(json!({"term": t.to_string(), "cap": cap, "values": values}), 0),
                _ => {
                    let mut s = String::from("n,value\n");
                    for (n, v) in values.iter().enumerate() {
                        s.push_str(&format!("{n},{v}\n"));
                    }
                    Output::new(s)
                }
            })
        }
        Cmd::Signature { term: s, cap, common } => {
            let t = term(&s)?;
            Ok(signature_output(&common, signature(&t, cap, &cache(&common))?))
        }
        Cmd::Probe { k, cap, common } => Ok(signature_output(&common, freeness_probe(k, cap, &cache(&common))?)),
        Cmd::Hprobe { k, cap, common } => Ok(signature_output(&common, herringbone_probe(k, cap, &cache(&common))?)),
        Cmd::Compare { a, b, fuel, common } => {
            let (ta, tb) = (term(&a)?, term(&b)?);
            let out = compare_detailed(&ta, &tb, &CompareOptions::with_fuel(fuel))?;
            let code = match out.result {
                CompareResult::OutOfFuel(_) => UNDECIDED,
                _ => 0,
            };
            Ok(match common.format {
                Format::Json => Output::json(
                    json!({
                        "a": ta.to_string(),
                        "b": tb.to_string(),
                        "result": out.result.to_string(),
                        "stage": out.stage.to_string(),
                    }),
                    code,
                ),
                _ => Output::with_code(format!("{}\n", out.result), code),
            })
        }
        Cmd::Normalize { term: s, common } => {
            let form = normalize_composition(&term(&s)?)?;
            Ok(match common.format {
                Format::Json => {
                    let parts: Vec<String> = form.parts().iter().map(Term::to_string).collect();
                    Output::json(json!({ "parts": parts }), 0)
                }
                _ => Output::new(format!("{form}\n")),
            })
        }
        Cmd::CheckLaws {
            n,
            law,
            samples,
            seed,
            common,
        } => {
            let c = cache(&common);
            let t = c.get(n)?;
            let next = c.get(n + 1)?;
            let laws: Vec<Law> = law.map_or(Law::ALL.to_vec(), |l| vec![l]);
            let budget = samples.map_or(SampleBudget::Exhaustive, |count| SampleBudget::Samples { count, seed });
            let mut code = 0;
            let mut lines = Vec::new();
            let mut values = Vec::new();
            for law in laws {
                let r = verify_law(&t, Some(&next), law, budget)?;
                // Hom tuples live one level up.
                let level = if law == Law::Hom { n + 1 } else { n };
                let cex: Option<Vec<u64>> = r
                    .counterexample
                    .as_ref()
                    .map(|v| v.iter().map(|e| show(&common, level, e.0)).collect());
                if !r.holds {
                    code = REFUTED;
                }
                match &cex {
                    None => lines.push(format!("{law} n={n} holds checked {}", r.checked)),
                    Some(v) => {
                        let v: Vec<String> = v.iter().map(u64::to_string).collect();
                        lines.push(format!(
                            "{law} n={n} fails ({}) {}",
                            v.join(", "),
                            r.clause.unwrap_or("")
                        ));
                    }
                }
                values.push(json!({
                    "law": law.to_string(),
                    "n": n,
                    "holds": r.holds,
                    "checked": r.checked,
                    "counterexample": cex,
                    "clause": r.clause,
                }));
            }
            Ok(match common.format {
                Format::Json => Output::json(Value::Array(values), code),
                Format::Csv => {
                    let mut s = String::from("law,n,holds,checked\n");
                    for v in &values {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            v["law"].as_str().unwrap(),
                            n,
                            v["holds"],
                            v["checked"]
                        ));
                    }
                    Output::with_code(s, code)
                }
                Format::Text => Output::with_code(lines.iter().map(|l| format!("{l}\n")).collect(), code),
            })
        }
        Cmd::EmbedCheck {
            file,
            no_coherence,
            common,
        } => {
            let c = read_candidate(&file)?;
            let opts = CheckOptions {
                coherence: !no_coherence,
                ..CheckOptions::default()
            };
            Ok(report_output(&common, &check_candidate(&c, &opts)))
        }
        Cmd::EmbedCritseq { file, name, k, common } => {
            let c = read_candidate(&file)?;
            let names: Vec<&str> = name.split(" o ").map(str::trim).collect();
            let parts: Vec<&FnPrefix> = names
                .iter()
                .map(|n| {
                    c.function(n)
                        .ok_or_else(|| Failure::usage(format!("unknown function `{n}`")))
                })
                .collect::<Result<_, _>>()?;
            let s = composition_critical_sequence(&parts, k)?;
            Ok(critseq_output(&common, &s))
        }
        Cmd::EmbedTwoSorted {
            file,
            max_parts,
            ctx_len,
            max_bfs,
            common,
        } => {
            let c = read_candidate(&file)?;
            let bounds = TwoSortedBounds {
                max_parts,
                ctx_len,
                ..TwoSortedBounds::default()
            };
            let ts = build_two_sorted(&c, max_parts, max_bfs)?;
            Ok(report_output(&common, &check_two_sorted(&ts, &bounds)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("laver: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
