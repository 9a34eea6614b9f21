//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach the
//! terminal: `cargo test -p tlogic-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use tlogic::fuzz::{
    all_formulas, cross_check_formulas, Campaign, CampaignReport, GenConfig, Generator, TraceKind,
};
use tlogic::proof::{check_proof, instantiate, parse_proof, Bindings, Params, Schema, SystemId, Verdict};
use tlogic::semantics::{eval, eval_caret};
use tlogic::tableau::{decide_sat, decide_valid, decide_valid_with, StructureClass, TableauConfig};
use tlogic::trace::{
    abstract_successor, brute_matching_return, matching_return, parse_trace, AbsPosition, Periodic,
    ScanOutcome, StateTag,
};
use tlogic::{parse_formula, Formula, Logic};

const SOUNDNESS_INSTANCES: usize = 10_000;
const FAMILY_INSTANCES: usize = 2_000;
const VALIDITY_INSTANCES: usize = 500;
const MATCHING_SAMPLES: usize = 10_000;
const ROUND_TRIP_FORMULAS: usize = 10_000;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn ltl(text: &str) -> Formula {
    parse_formula(text, Logic::Ltl).unwrap()
}

/// Outcome of one criterion: problems found, plus a short summary.
struct Check {
    problems: Vec<String>,
    summary: String,
}

impl Check {
    fn new() -> Self {
        Check {
            problems: Vec::new(),
            summary: String::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }

    fn clean(&mut self, report: &CampaignReport) {
        let total: usize = report.checks.iter().map(|c| c.instances).sum();
        self.require(report.is_clean(), || {
            format!(
                "{}: {} failures, first {:?}",
                report.campaign, report.failures, report.counterexample
            )
        });
        self.summary.push_str(&format!(
            "{}: {total} instances, {} failures; ",
            report.campaign, report.failures
        ));
    }
}

fn criterion_1() -> Check {
    let mut c = Check::new();
    let m1 = parse_trace(&std::fs::read_to_string(fixture("m1.trace")).unwrap()).unwrap();
    for name in ["t2_finite_counterexample.ltl", "t3_finite_counterexample.ltl"] {
        let f = ltl(std::fs::read_to_string(fixture(name)).unwrap().trim());
        let value = eval(&m1, 0, &f).unwrap();
        c.require(!value, || format!("{name} holds on M1"));
    }
    c.summary = "both instances false at position 0 of [{p}]".into();
    c
}

fn criterion_2() -> Check {
    let mut c = Check::new();
    let cfg = GenConfig::default();
    for (system, kind) in [
        (SystemId::AxGen, TraceKind::Mixed),
        (SystemId::AxInf, TraceKind::Lasso),
        (SystemId::AxFin, TraceKind::Finite),
        (SystemId::Ax, TraceKind::Lasso),
    ] {
        let report = Campaign::new(system, SOUNDNESS_INSTANCES)
            .trace_kind(kind)
            .run(&cfg);
        c.require(
            report.checks.iter().all(|k| k.instances == SOUNDNESS_INSTANCES),
            || format!("{system}: wrong instance counts"),
        );
        c.clean(&report);
    }
    let control = Campaign::new(SystemId::Ax, SOUNDNESS_INSTANCES)
        .trace_kind(TraceKind::Finite)
        .schemas(&[Schema::T2, Schema::T3])
        .run(&cfg);
    for schema in ["T2", "T3"] {
        let failures = control.check(schema).map_or(0, |k| k.failures);
        c.require(failures >= 1, || {
            format!("negative control: {schema} never failed on finite traces")
        });
        c.summary
            .push_str(&format!("control {schema}: {failures} failures; "));
    }
    c
}

fn criterion_3() -> Check {
    let mut c = Check::new();
    let report = Campaign::new(SystemId::AxCr, SOUNDNESS_INSTANCES)
        .family_instances(FAMILY_INSTANCES)
        .run(&GenConfig::default());
    for k in &report.checks {
        let want = if k.check == "C5" || k.check == "C6" {
            FAMILY_INSTANCES
        } else {
            SOUNDNESS_INSTANCES
        };
        c.require(k.instances == want, || {
            format!("{}: {} instances", k.check, k.instances)
        });
    }
    c.require(report.checks.len() == 13, || {
        format!("{} schemas exercised", report.checks.len())
    });
    c.clean(&report);
    c
}

fn criterion_4() -> Check {
    let mut c = Check::new();
    let formulas = all_formulas(7, &["p", "q"]);
    let reports: Vec<CampaignReport> = formulas
        .par_chunks(256)
        .map(|chunk| cross_check_formulas(chunk, 0))
        .collect();
    let mut totals = std::collections::BTreeMap::<String, (usize, usize)>::new();
    for r in &reports {
        for k in &r.checks {
            let e = totals.entry(k.check.clone()).or_default();
            e.0 += k.instances;
            e.1 += k.failures;
        }
        if let Some(cex) = &r.counterexample {
            c.problems.push(format!("{cex:?}"));
        }
    }
    let (decomposed, _) = totals.get("decomposition").copied().unwrap_or_default();
    c.require(decomposed == formulas.len(), || {
        format!(
            "only {decomposed} of {} formulas decided in all classes",
            formulas.len()
        )
    });
    c.problems.truncate(3);
    c.summary = format!(
        "{} formulas; {}",
        formulas.len(),
        totals
            .iter()
            .map(|(k, (n, f))| format!("{k}: {n} checked, {f} failed"))
            .collect::<Vec<_>>()
            .join("; ")
    );
    c
}

fn criterion_5() -> Check {
    let mut c = Check::new();
    let fixed = [
        ("F X false", StructureClass::Fin, true),
        ("!X false", StructureClass::Inf, true),
        ("X !p -> !X p", StructureClass::Inf, true),
        ("X !p -> !X p", StructureClass::Fin, false),
    ];
    for (text, class, want) in fixed {
        let got = decide_valid(&ltl(text), class).unwrap();
        c.require(got == want, || format!("valid({text}, {class}) = {got}"));
    }
    let config = TableauConfig { closure_cap: 48 };
    let cfg = GenConfig {
        seed: 5,
        max_formula_size: 8,
        ..GenConfig::default()
    };
    let mut summary = Vec::new();
    for (system, class) in [
        (SystemId::AxGen, StructureClass::Gen),
        (SystemId::AxInf, StructureClass::Inf),
        (SystemId::AxFin, StructureClass::Fin),
        (SystemId::Ax, StructureClass::Inf),
    ] {
        let schemas = system.schemas();
        let outcomes: Vec<Result<bool, String>> = (0..VALIDITY_INSTANCES)
            .into_par_iter()
            .map(|k| {
                let schema = schemas[k % schemas.len()];
                let mut g = Generator::with_stream(&cfg, k as u64);
                let bindings: Bindings = schema.metavariables().iter().map(|&v| (v, g.formula())).collect();
                let f = instantiate(schema, &Params::new(), &bindings).unwrap();
                decide_valid_with(&f, class, &config)
                    .map_err(|e| format!("{f}: {e}"))
                    .and_then(|valid| {
                        if valid {
                            Ok(true)
                        } else {
                            Err(format!("{schema} instance {f} not valid over {class}"))
                        }
                    })
            })
            .collect();
        let bad: Vec<&String> = outcomes.iter().filter_map(|o| o.as_ref().err()).collect();
        c.require(bad.is_empty(), || {
            format!("{system}: {} instances failed, first {}", bad.len(), bad[0])
        });
        summary.push(format!(
            "{system}/{class}: {}/{VALIDITY_INSTANCES} valid",
            VALIDITY_INSTANCES - bad.len()
        ));
    }
    c.summary = format!("4 fixed verdicts; {}", summary.join(", "));
    c
}

fn criterion_6() -> Check {
    let mut c = Check::new();
    let text = std::fs::read_to_string(fixture("derivation_caret.prf")).unwrap();
    let script = parse_proof(&text).unwrap();
    c.require(check_proof(&script) == Verdict::Ok, || "fixture rejected".into());

    let mutations: &[(usize, &str)] = &[
        (1, "!call & X !ret -> (X true <-> !Xa false) ; axiom C2 bind φ=p"),
        (1, "!call & X !ret -> (X true <-> !Xa false) ; axiom C3"),
        (1, "!call & X ret -> (X true <-> !Xa false) ; axiom C2 bind φ=true"),
        (2, "(!call & X !ret -> (X true <-> !Xa false)) -> (!call -> (X !ret -> (X true -> Xa false))) ; taut"),
        (3, "!call -> (X !ret -> (X true -> !Xa false)) ; mp 1 4"),
        (3, "!call -> (X !ret -> (X true -> !Xa false)) ; mp 2 1"),
        (7, "!call -> (X true -> (Xa false -> !X !ret)) ; mp 6 3"),
        (10, "false ; taut"),
        (11, "X false ; gen-x 10"),
        (11, "Xa true ; gen-x 10"),
        (11, "X true ; ind-u 10"),
        (15, "X ret <-> X false | !X !ret ; axiom G3 bind φ=call"),
        (18, "!X true ; axiom G4"),
        (18, "!X false ; axiom Fin"),
        (18, "!X false ; axiom G3 bind φ=false"),
        (19, "!X !ret -> X ret ; mp 17 18"),
        (22, "!call & Xa false -> X call ; mp 14 21"),
        (22, "!call & Xa false -> X ret ; mp 14 23"),
    ];
    let mut caught = 0;
    for &(step, line) in mutations {
        let mutated: String = text
            .lines()
            .map(|l| {
                if l.starts_with(&format!("{step}. ")) {
                    format!("{step}. {line}\n")
                } else {
                    format!("{l}\n")
                }
            })
            .collect();
        match parse_proof(&mutated).map(|s| check_proof(&s)) {
            Ok(Verdict::Failure { step: at, .. }) if at == step => caught += 1,
            other => c.problems.push(format!("mutation at step {step} gave {other:?}")),
        }
    }

    let derived = parse_formula("!call & Xa false -> X ret", Logic::Caret).unwrap();
    c.require(script.steps.last().map(|s| &s.formula) == Some(&derived), || {
        "wrong conclusion".into()
    });
    let mut g = Generator::new(&GenConfig {
        seed: 6,
        mode: Logic::Caret,
        ..GenConfig::default()
    });
    let mut positions = 0;
    for _ in 0..1000 {
        let t = g.structured_trace();
        for i in 0..t.canonical_len() {
            positions += 1;
            c.require(eval_caret(&t, i, &derived), || {
                format!("conclusion false at {i} of\n{t}")
            });
        }
    }
    c.summary = format!(
        "fixture OK; {caught}/{} mutations caught at the mutated step; conclusion true at {positions} positions",
        mutations.len()
    );
    c
}

fn criterion_7() -> Check {
    let mut c = Check::new();
    let mut g = Generator::new(&GenConfig {
        seed: 7,
        mode: Logic::Caret,
        ..GenConfig::default()
    });
    let (mut found, mut undefined) = (0, 0);
    for _ in 0..MATCHING_SAMPLES {
        let t = g.structured_trace();
        let i = g.gen_range(0..t.canonical_len() + t.loop_len());
        let main = matching_return(&t, i);
        match (main, brute_matching_return(&t, i, 1000)) {
            (AbsPosition::At(j), ScanOutcome::Found(k)) if j == k => found += 1,
            (AbsPosition::Undefined, ScanOutcome::Inconclusive) => undefined += 1,
            (m, s) => c
                .problems
                .push(format!("matching_return({i}) = {m:?}, scan {s:?} on\n{t}")),
        }
        let succ = abstract_successor(&t, i);
        let expected = match t.tag(i) {
            StateTag::Call => main,
            _ if t.tag(i + 1) == StateTag::Ret => AbsPosition::Undefined,
            _ => AbsPosition::At(i + 1),
        };
        c.require(succ == expected, || {
            format!("abstract_successor({i}) = {succ:?} on\n{t}")
        });
        let per = t.loop_len();
        let k = t.canonical_position(i);
        let shift = |p: AbsPosition, d: usize| p.position().map(|j| j + d);
        for map in [matching_return, abstract_successor] {
            c.require(shift(map(&t, i), 0) == shift(map(&t, k), i - k), || {
                format!("periodicity at {i}")
            });
            if i >= t.prefix_len() {
                c.require(shift(map(&t, i + per), 0) == shift(map(&t, i), per), || {
                    format!("periodicity at {i}")
                });
            }
        }
    }
    c.problems.truncate(3);
    c.summary = format!("{MATCHING_SAMPLES} samples: {found} defined and equal, {undefined} undefined with the scan inconclusive");
    c
}

fn tlogic(args: &[&str]) -> Vec<u8> {
    Command::new(env!("CARGO_BIN_EXE_tlogic"))
        .args(args)
        .output()
        .unwrap()
        .stdout
}

fn criterion_8() -> Check {
    let mut c = Check::new();
    let mut g = Generator::new(&GenConfig {
        seed: 8,
        max_formula_size: 16,
        mode: Logic::Caret,
        ..GenConfig::default()
    });
    for _ in 0..ROUND_TRIP_FORMULAS {
        let f = g.formula();
        let back = parse_formula(&f.to_string(), Logic::Caret);
        c.require(back.as_ref() == Ok(&f), || {
            format!("round trip of {f} gave {back:?}")
        });
    }

    let mut g = Generator::new(&GenConfig {
        seed: 8,
        max_formula_size: 7,
        ..GenConfig::default()
    });
    let mut witnesses = 0;
    for _ in 0..500 {
        let f = g.formula();
        for class in StructureClass::ALL {
            let Some(w) = decide_sat(&f, class).unwrap().witness else {
                continue;
            };
            witnesses += 1;
            let reread = parse_trace(&w.trace.to_string()).unwrap();
            c.require(eval(&reread, 0, &f) == Ok(true), || {
                format!("witness for {f} over {class} re-reads false")
            });
        }
    }

    let runs = [
        vec![
            "fuzz",
            "--system",
            "ax-gen",
            "--instances",
            "200",
            "--seed",
            "17",
            "--json",
        ],
        vec![
            "fuzz",
            "--system",
            "ax",
            "--instances",
            "200",
            "--seed",
            "17",
            "--traces",
            "finite",
            "--json",
        ],
        vec!["sat", "--class", "inf", "--formula", "G F p & G F !p", "--json"],
        vec!["valid", "--class", "fin", "--formula", "X !p -> !X p", "--json"],
    ];
    for args in &runs {
        let (a, b) = (tlogic(args), tlogic(args));
        c.require(!a.is_empty() && a == b, || {
            format!("`{}` output differs between runs", args.join(" "))
        });
        c.require(serde_json::from_slice::<serde_json::Value>(&a).is_ok(), || {
            "unparseable JSON".into()
        });
    }
    c.summary = format!(
        "{ROUND_TRIP_FORMULAS} formulas round-trip; {witnesses} witnesses re-read true; {} JSON invocations byte-stable",
        runs.len()
    );
    c
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check, Duration);
    let criteria: [Criterion; 8] = [
        ("counterexample regression", criterion_1, Duration::from_secs(1)),
        (
            "LTL axiom soundness campaigns",
            criterion_2,
            Duration::from_secs(120),
        ),
        (
            "CaRet axiom soundness campaign",
            criterion_3,
            Duration::from_secs(180),
        ),
        (
            "tableau / brute-force equivalence",
            criterion_4,
            Duration::from_secs(600),
        ),
        (
            "class-separating validities",
            criterion_5,
            Duration::from_secs(120),
        ),
        ("proof checker", criterion_6, Duration::from_secs(60)),
        ("abstract successor oracle", criterion_7, Duration::from_secs(60)),
        (
            "round trip and format stability",
            criterion_8,
            Duration::from_secs(600),
        ),
    ];
    let mut all_pass = true;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let check = run();
        let elapsed = start.elapsed();
        let pass = check.problems.is_empty() && elapsed <= limit;
        all_pass &= pass;
        println!(
            "{} criterion {}: {name} ({:.2}s, limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            check.summary.trim_end_matches("; ")
        );
        if elapsed > limit {
            println!("    over the time limit");
        }
        for p in &check.problems {
            println!("    {p}");
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
