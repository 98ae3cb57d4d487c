//! circ16: membership, witnesses and norms for order-16 integer circulant
//! determinants.
//!
//! Every invocation prints one JSON document on stdout. Exit status: 0 on
//! success or membership, 1 on non-membership / refusal / failed check,
//! 2 on bad input or an indeterminate result, 3 if the two determinant
//! routes disagree.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use circ16_core::circulant::{det_bareiss, det_via_norms, norms, CoeffVector};
use circ16_core::classifier::{classify, verify_verdict};
use circ16_core::document::{
    certificate_json, envelope, norms_json, spectrum_json, verdict_json, verify_document,
};
use circ16_core::error::{ClassifyError, DocumentError, WitnessError};
use circ16_core::number_theory::{FactorConfig, DEFAULT_SEED};
use circ16_core::search::{find_value, in_known_set, spectrum, SearchBox, SearchConfig, DEFAULT_MAX_WORK};
use circ16_core::selftest::{self, Level};
use circ16_core::witness::{base128_witness, build_witness};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

const MAX_WORK_VAR: &str = "CIRC16_MAX_WORK";

#[derive(Parser)]
#[command(name = "circ16", version, about = "Order-16 integer circulant determinants: membership, witnesses, norms")]
struct Cli {
    /// Indent the output document
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized primality rounds, factoring and self-test sampling
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an integer is an order-16 circulant determinant
    #[command(allow_negative_numbers = true)]
    Classify { value: String },
    /// Build and verify a 16-entry vector with the given determinant
    #[command(allow_negative_numbers = true)]
    Witness { value: String },
    /// Determinant of a 16-entry vector by elimination and by the norm product
    #[command(allow_negative_numbers = true)]
    Det {
        #[arg(num_args = 16, required = true)]
        entries: Vec<String>,
    },
    /// Enumerate a box of vectors, or search it for a target determinant
    #[command(allow_negative_numbers = true)]
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
        /// Stop at the first vector with this determinant
        #[arg(long)]
        find: Option<String>,
        /// Worker threads (1 = sequential)
        #[arg(long)]
        jobs: Option<usize>,
        /// Allow order-16 entries outside [-2, 2]
        #[arg(long)]
        allow_large_entries: bool,
    },
    /// Run the built-in checks
    Selftest {
        /// Include the [-1, 1]^16 enumeration and larger samples
        #[arg(long)]
        full: bool,
    },
    /// Re-check a classify or witness document (path, or - for stdin)
    Verify { file: PathBuf },
}

struct Outcome {
    doc: Value,
    code: u8,
}

fn error_doc(command: &str, inputs: Value, kind: &str, message: String) -> Outcome {
    eprintln!("error: {message}");
    Outcome { doc: envelope(command, inputs, json!({ "error": kind, "message": message }), None), code: 2 }
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|_| format!("cannot parse `{s}` as an integer"))
}

fn max_work() -> Result<u128, String> {
    match std::env::var(MAX_WORK_VAR) {
        Ok(s) => {
            let parsed = s.trim().parse::<u128>().or_else(|_| s.trim().parse::<f64>().map(|f| f as u128));
            parsed.map_err(|_| format!("{MAX_WORK_VAR}={s} is not a vector count"))
        }
        Err(_) => Ok(DEFAULT_MAX_WORK),
    }
}

fn cmd_classify(value: &str, cfg: &FactorConfig) -> Outcome {
    let inputs = json!({ "value": value });
    let v = match parse_int(value) {
        Ok(v) => v,
        Err(e) => return error_doc("classify", inputs, "parse", e),
    };
    match classify(&v, cfg) {
        Ok(verdict) => {
            let verified = verify_verdict(&verdict).is_ok();
            let code = if !verified {
                2
            } else if verdict.member {
                0
            } else {
                1
            };
            Outcome { doc: envelope("classify", inputs, verdict_json(&verdict), Some(verified)), code }
        }
        Err(ClassifyError::IndeterminateFactorization(e)) => error_doc("classify", inputs, "indeterminate", e.to_string()),
    }
}

fn cmd_witness(value: &str, cfg: &FactorConfig) -> Outcome {
    let inputs = json!({ "value": value });
    let v = match parse_int(value) {
        Ok(v) => v,
        Err(e) => return error_doc("witness", inputs, "parse", e),
    };
    let verdict = match classify(&v, cfg) {
        Ok(verdict) => verdict,
        Err(e) => return error_doc("witness", inputs, "indeterminate", e.to_string()),
    };
    match build_witness(&verdict) {
        Ok(w) => {
            let result = json!({ "verdict": verdict_json(&verdict), "certificate": certificate_json(&w) });
            Outcome { doc: envelope("witness", inputs, result, Some(true)), code: 0 }
        }
        Err(WitnessError::NotMember(_)) => {
            let result = json!({ "verdict": verdict_json(&verdict), "refusal": format!("{v} is not a member; no witness exists") });
            Outcome { doc: envelope("witness", inputs, result, Some(false)), code: 1 }
        }
        Err(e) => error_doc("witness", inputs, "construction", e.to_string()),
    }
}

fn cmd_det(entries: &[String]) -> Outcome {
    let inputs = json!({ "entries": entries });
    let parsed: Result<Vec<BigInt>, String> = entries.iter().map(|s| parse_int(s)).collect();
    let v = match parsed.and_then(|e| CoeffVector::new(e).map_err(|e| e.to_string())) {
        Ok(v) => v,
        Err(e) => return error_doc("det", inputs, "parse", e),
    };
    let bareiss = det_bareiss(&v);
    let (nf, via_norms) = match norms(&v).and_then(|nf| Ok((nf, det_via_norms(&v)?))) {
        Ok(x) => x,
        Err(e) => return error_doc("det", inputs, "parse", e.to_string()),
    };
    let agree = bareiss == via_norms;
    let result = json!({
        "det_bareiss": bareiss.to_string(),
        "det_via_norms": via_norms.to_string(),
        "norms": norms_json(&nf),
    });
    if !agree {
        eprintln!("error: internal invariant violated: determinant routes disagree ({bareiss} vs {via_norms})");
    }
    Outcome { doc: envelope("det", inputs, result, Some(agree)), code: if agree { 0 } else { 3 } }
}

fn cmd_enumerate(
    n: usize,
    lo: i64,
    hi: i64,
    find: Option<&str>,
    jobs: Option<usize>,
    allow_large_entries: bool,
    fcfg: &FactorConfig,
) -> Outcome {
    let mut inputs = json!({ "n": n.to_string(), "lo": lo.to_string(), "hi": hi.to_string() });
    if let Some(t) = find {
        inputs["find"] = json!(t);
    }
    if let Some(j) = jobs {
        inputs["jobs"] = json!(j.to_string());
    }
    let max_work = match max_work() {
        Ok(w) => w,
        Err(e) => return error_doc("enumerate", inputs, "parse", e),
    };
    inputs["max_work"] = json!(max_work.to_string());
    let cfg = SearchConfig { max_work, allow_large_entries, jobs, ..SearchConfig::default() };
    let bx = match SearchBox::new(n, lo, hi) {
        Ok(bx) => bx,
        Err(e) => return error_doc("enumerate", inputs, "search", e.to_string()),
    };
    if let Some(t) = find {
        let target = match parse_int(t) {
            Ok(t) => t,
            Err(e) => return error_doc("enumerate", inputs, "parse", e),
        };
        return match find_value(&target, &bx, &cfg) {
            Ok(Some(vector)) => {
                let det = det_bareiss(&CoeffVector::from_i64s(&vector));
                let verified = det == target;
                let result = json!({
                    "target": target.to_string(),
                    "found": true,
                    "vector": vector.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                });
                Outcome { doc: envelope("enumerate", inputs, result, Some(verified)), code: if verified { 0 } else { 3 } }
            }
            Ok(None) => {
                let result = json!({ "target": target.to_string(), "found": false });
                Outcome { doc: envelope("enumerate", inputs, result, None), code: 1 }
            }
            Err(e) => error_doc("enumerate", inputs, "search", e.to_string()),
        };
    }
    let report = match spectrum(&bx, &cfg) {
        Ok(r) => r,
        Err(e) => return error_doc("enumerate", inputs, "search", e.to_string()),
    };
    let mut result = spectrum_json(&report);
    // known value sets for orders 2, 4, 8; the classifier for order 16
    let mut outside = Vec::new();
    for v in report.values() {
        let inside = match in_known_set(n, v) {
            Some(b) => b,
            None => match classify(&BigInt::from(v), fcfg) {
                Ok(verdict) => verdict.member,
                Err(e) => return error_doc("enumerate", inputs, "indeterminate", e.to_string()),
            },
        };
        if !inside {
            outside.push(json!(v.to_string()));
        }
    }
    let subset = outside.is_empty();
    result["subset_check"] = json!(subset);
    result["outside"] = Value::Array(outside);
    Outcome { doc: envelope("enumerate", inputs, result, Some(subset)), code: if subset { 0 } else { 1 } }
}

fn cmd_selftest(full: bool, seed: u64) -> Outcome {
    let level = if full { Level::Full } else { Level::Quick };
    let report = selftest::run(level, seed, &base128_witness());
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    let inputs = json!({ "level": if full { "full" } else { "quick" }, "seed": seed.to_string() });
    let passed = report.passed();
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("failed: {}: {}", c.name, c.detail);
    }
    Outcome { doc: envelope("selftest", inputs, json!({ "checks": checks }), Some(passed)), code: if passed { 0 } else { 1 } }
}

fn cmd_verify(file: &PathBuf) -> Outcome {
    let inputs = json!({ "file": file.display().to_string() });
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(file)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return error_doc("verify", inputs, "io", e.to_string()),
    };
    let doc: Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return error_doc("verify", inputs, "parse", e.to_string()),
    };
    match verify_document(&doc) {
        Ok(what) => Outcome { doc: envelope("verify", inputs, json!({ "checked": what }), Some(true)), code: 0 },
        Err(DocumentError::Rejected(why)) => {
            eprintln!("rejected: {why}");
            Outcome { doc: envelope("verify", inputs, json!({ "rejected": why }), Some(false)), code: 1 }
        }
        Err(e @ DocumentError::Malformed(_)) => error_doc("verify", inputs, "malformed", e.to_string()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let fcfg = FactorConfig::with_seed(cli.seed);
    let out = match &cli.command {
        Command::Classify { value } => cmd_classify(value, &fcfg),
        Command::Witness { value } => cmd_witness(value, &fcfg),
        Command::Det { entries } => cmd_det(entries),
        Command::Enumerate { n, lo, hi, find, jobs, allow_large_entries } => {
            cmd_enumerate(*n, *lo, *hi, find.as_deref(), *jobs, *allow_large_entries, &fcfg)
        }
        Command::Selftest { full } => cmd_selftest(*full, cli.seed),
        Command::Verify { file } => cmd_verify(file),
    };
    let text = if cli.pretty { serde_json::to_string_pretty(&out.doc) } else { serde_json::to_string(&out.doc) };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe on the reading side is not an error of ours
    let _ = writeln!(stdout, "{}", text.expect("documents are plain JSON"));
    ExitCode::from(out.code)
}
