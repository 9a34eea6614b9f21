//! `tlogic`: evaluate formulas on traces, decide satisfiability and
//! validity, check proofs and run soundness campaigns.
//!
//! Exit codes: 0 positive answer, 1 negative answer, 2 usage error,
//! 3 input error, 4 internal invariant violation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tlogic::fuzz::{Campaign, CampaignReport, GenConfig, TraceKind};
use tlogic::proof::{check_proof, list_axioms, parse_proof, SystemId, Verdict};
use tlogic::semantics::eval;
use tlogic::tableau::{decide_sat_with, StructureClass, TableauConfig, DEFAULT_CLOSURE_CAP};
use tlogic::trace::{parse_trace, Trace};
use tlogic::{parse_formula, Formula, Logic};

#[derive(Parser)]
#[command(
    name = "tlogic",
    version,
    about = "LTL and CaRet: evaluation, tableau, proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a position of a trace file.
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 0)]
        pos: usize,
        #[arg(long, value_enum, default_value_t = Mode::Ltl)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Decide satisfiability over a structure class and print a witness.
    Sat(Decide),
    /// Decide validity over a structure class and print a countermodel.
    Valid(Decide),
    /// Check a proof script.
    CheckProof {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run an axiom soundness campaign.
    Fuzz {
        #[arg(long, value_parser = parse_system)]
        system: SystemId,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        /// Instances for the C5/C6 families (defaults to --instances).
        #[arg(long)]
        family_instances: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Evaluate on this trace kind instead of the system's own class.
        #[arg(long, value_enum)]
        traces: Option<Kind>,
        #[arg(long)]
        json: bool,
    },
    /// Print the axioms and rules of a system.
    Axioms {
        #[arg(long, value_parser = parse_system)]
        system: SystemId,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Decide {
    #[arg(long)]
    formula: String,
    #[arg(long, value_parser = parse_class)]
    class: StructureClass,
    /// Largest closure, counted up to negation.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ltl,
    Caret,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Finite,
    Lasso,
    Mixed,
    Structured,
}

fn parse_system(s: &str) -> Result<SystemId, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<StructureClass, String> {
    s.parse()
}

/// Failure modes that end a run early.
enum Fail {
    Input(String),
    Internal(String),
}

/// What a successful run prints.
struct Outcome {
    positive: bool,
    text: String,
    json: Output,
}

#[derive(Serialize)]
struct Output {
    command: &'static str,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Value>,
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn formula(text: &str, logic: Logic) -> Result<Formula, Fail> {
    parse_formula(text, logic).map_err(|e| Fail::Input(format!("formula: {e}")))
}

fn run_eval(formula_text: &str, trace: &Path, pos: usize, mode: Mode) -> Result<Outcome, Fail> {
    let logic = match mode {
        Mode::Ltl => Logic::Ltl,
        Mode::Caret => Logic::Caret,
    };
    let f = formula(formula_text, logic)?;
    let t = parse_trace(&read(trace)?).map_err(|e| Fail::Input(format!("{}: {e}", trace.display())))?;
    let value = eval(&t, pos, &f).map_err(|e| Fail::Input(e.to_string()))?;
    Ok(Outcome {
        positive: value,
        text: format!("{value}\n"),
        json: Output {
            command: "eval",
            verdict: value.to_string(),
            witness: None,
            report: None,
        },
    })
}

/// Satisfiability of `target`; the witness is re-evaluated before it is
/// printed.
fn witness_for(target: &Formula, args: &Decide) -> Result<Option<Trace>, Fail> {
    let config = TableauConfig {
        closure_cap: args.closure_cap,
    };
    let result = decide_sat_with(target, args.class, &config).map_err(|e| Fail::Input(e.to_string()))?;
    let Some(w) = result.witness else {
        return Ok(None);
    };
    if eval(&w.trace, 0, target) != Ok(true) {
        return Err(Fail::Internal(format!(
            "witness for `{target}` does not satisfy it:\n{}",
            w.trace
        )));
    }
    Ok(Some(w.trace))
}

fn run_decide(args: &Decide, validity: bool) -> Result<Outcome, Fail> {
    let f = formula(&args.formula, Logic::Ltl)?;
    let target = if validity { Formula::not(f) } else { f };
    let witness = witness_for(&target, args)?;
    let (command, verdict) = match (validity, witness.is_some()) {
        (false, true) => ("sat", "SAT"),
        (false, false) => ("sat", "UNSAT"),
        (true, true) => ("valid", "INVALID"),
        (true, false) => ("valid", "VALID"),
    };
    let witness = witness.map(|t| t.to_string());
    let mut text = format!("{verdict}\n");
    if let Some(w) = &witness {
        text.push_str(w);
    }
    Ok(Outcome {
        positive: witness.is_some() != validity,
        text,
        json: Output {
            command,
            verdict: verdict.to_lowercase(),
            witness,
            report: None,
        },
    })
}

fn run_check_proof(file: &Path) -> Result<Outcome, Fail> {
    let script = parse_proof(&read(file)?).map_err(|e| Fail::Input(format!("{}: {e}", file.display())))?;
    let verdict = check_proof(&script);
    let report = match &verdict {
        Verdict::Ok => None,
        Verdict::Failure { step, reason } => Some(json!({ "step": step, "reason": reason.to_string() })),
    };
    Ok(Outcome {
        positive: verdict.is_ok(),
        text: format!("{verdict}\n"),
        json: Output {
            command: "check-proof",
            verdict: if verdict.is_ok() { "ok" } else { "fail" }.into(),
            witness: None,
            report,
        },
    })
}

fn render_report(r: &CampaignReport) -> String {
    let mut out = format!("{} (seed {})\n", r.campaign, r.seed);
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{:<6} {:>7} instances {:>5} failures",
            c.check, c.instances, c.failures
        );
    }
    let _ = writeln!(out, "total failures: {}", r.failures);
    if let Some(cex) = &r.counterexample {
        let _ = writeln!(
            out,
            "first counterexample ({}):\n  formula: {}",
            cex.check, cex.formula
        );
        if let Some(pos) = cex.position {
            let _ = writeln!(out, "  position: {pos}");
        }
        if let Some(trace) = &cex.trace {
            out.push_str("  trace:\n");
            for line in trace.lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
    }
    out
}

fn run_fuzz(
    system: SystemId,
    instances: usize,
    family_instances: Option<usize>,
    seed: u64,
    traces: Option<Kind>,
) -> Result<Outcome, Fail> {
    let cfg = GenConfig {
        seed,
        ..GenConfig::default()
    };
    let mut campaign = Campaign::new(system, instances);
    if let Some(n) = family_instances {
        campaign = campaign.family_instances(n);
    }
    if let Some(kind) = traces {
        campaign = campaign.trace_kind(match kind {
            Kind::Finite => TraceKind::Finite,
            Kind::Lasso => TraceKind::Lasso,
            Kind::Mixed => TraceKind::Mixed,
            Kind::Structured => TraceKind::Structured,
        });
    }
    let report = campaign.run(&cfg);
    if (report.failures == 0) != report.counterexample.is_none() {
        return Err(Fail::Internal(
            "report failure count and counterexample disagree".into(),
        ));
    }
    Ok(Outcome {
        positive: report.is_clean(),
        text: render_report(&report),
        json: Output {
            command: "fuzz",
            verdict: if report.is_clean() { "clean" } else { "failures" }.into(),
            witness: None,
            report: Some(serde_json::to_value(&report).map_err(|e| Fail::Internal(e.to_string()))?),
        },
    })
}

fn run_axioms(system: SystemId) -> Outcome {
    let listed = list_axioms(system);
    let width = listed.iter().map(|a| a.id.chars().count()).max().unwrap_or(0);
    let mut text = String::new();
    for a in &listed {
        let pad = width - a.id.chars().count();
        let _ = writeln!(text, "{}{}  {}", a.id, " ".repeat(pad), a.text);
    }
    let rows: Vec<Value> = listed
        .iter()
        .map(|a| json!({ "id": a.id, "text": a.text }))
        .collect();
    Outcome {
        positive: true,
        text,
        json: Output {
            command: "axioms",
            verdict: system.to_string(),
            witness: None,
            report: Some(Value::Array(rows)),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, as_json) = match &cli.command {
        Command::Eval {
            formula,
            trace,
            pos,
            mode,
            json,
        } => (run_eval(formula, trace, *pos, *mode), *json),
        Command::Sat(args) => (run_decide(args, false), args.json),
        Command::Valid(args) => (run_decide(args, true), args.json),
        Command::CheckProof { file, json } => (run_check_proof(file), *json),
        Command::Fuzz {
            system,
            instances,
            family_instances,
            seed,
            traces,
            json,
        } => (
            run_fuzz(*system, *instances, *family_instances, *seed, *traces),
            *json,
        ),
        Command::Axioms { system, json } => (Ok(run_axioms(*system)), *json),
    };
    match result {
        Ok(outcome) => {
            if as_json {
                let line = serde_json::to_string(&outcome.json).expect("plain data serializes");
                println!("{line}");
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Fail::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
