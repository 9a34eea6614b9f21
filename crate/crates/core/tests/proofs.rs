use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tlogic::fuzz::{GenConfig, Generator, TraceKind};
use tlogic::proof::{
    check_proof, instantiate, parse_proof, Bindings, Failure, Justification, Params, ProofScript, RuleKind,
    Schema, Step, SystemId, Verdict,
};
use tlogic::semantics::{eval_caret, first_failure};
use tlogic::tableau::{decide_valid, StructureClass, TableauError};
use tlogic::trace::Periodic;
use tlogic::{parse_formula, Formula, Logic};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn bundled_derivation_checks() {
    let script = parse_proof(&fixture("derivation_caret.prf")).unwrap();
    assert_eq!(script.system, SystemId::AxCr);
    assert_eq!(check_proof(&script), Verdict::Ok);
    let last = &script.steps.last().unwrap().formula;
    assert_eq!(
        *last,
        parse_formula("!call & Xa false -> X ret", Logic::Caret).unwrap()
    );
}

#[test]
fn other_fixtures_check() {
    for name in ["never_false.prf", "weak_is_strong_inf.prf", "final_state_fin.prf"] {
        let script = parse_proof(&fixture(name)).unwrap();
        assert_eq!(check_proof(&script), Verdict::Ok, "{name}");
    }
}

/// Replaces one step line of the fixture.
fn mutate(step: usize, line: &str) -> String {
    fixture("derivation_caret.prf")
        .lines()
        .map(|l| {
            if l.starts_with(&format!("{step}. ")) {
                format!("{step}. {line}")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn single_step_mutations_are_caught_at_the_mutated_step() {
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
    assert!(mutations.len() >= 14);
    for &(step, line) in mutations {
        let script = parse_proof(&mutate(step, line)).unwrap();
        match check_proof(&script) {
            Verdict::Failure { step: at, .. } => assert_eq!(at, step, "mutation `{line}`"),
            Verdict::Ok => panic!("mutation `{line}` accepted"),
        }
    }
}

#[test]
fn derived_formula_holds_on_structured_lassos() {
    let f = parse_formula("!call & Xa false -> X ret", Logic::Caret).unwrap();
    let mut g = Generator::new(&GenConfig {
        seed: 5,
        mode: Logic::Caret,
        ..GenConfig::default()
    });
    for _ in 0..1000 {
        let t = g.structured_trace();
        for i in 0..t.canonical_len() + 3 {
            assert!(eval_caret(&t, i, &f), "position {i} of\n{t}");
        }
    }
}

#[test]
fn schemas_not_in_the_system_are_rejected() {
    let script = parse_proof("system: ax-inf\n1. F X false ; axiom Fin\n").unwrap();
    assert!(matches!(
        check_proof(&script),
        Verdict::Failure {
            step: 1,
            reason: Failure::Instance(_)
        }
    ));
    let script =
        parse_proof("system: ax\n1. p U q <-> q | (p & N (p U q)) ; axiom T2' bind φ=p bind ψ=q\n").unwrap();
    assert!(!check_proof(&script).is_ok());
}

/// Builds a random accepted derivation: axiom instances, tautologies of a
/// few fixed shapes over earlier steps, modus ponens and the rules.
fn random_derivation(system: SystemId, seed: u64) -> ProofScript {
    let caret = system.is_caret();
    let cfg = GenConfig {
        seed,
        max_formula_size: 3,
        mode: if caret { Logic::Caret } else { Logic::Ltl },
        ..GenConfig::default()
    };
    let mut g = Generator::new(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps: Vec<Step> = Vec::new();
    let schemas: Vec<Schema> = system
        .schemas()
        .iter()
        .copied()
        .filter(|s| !matches!(s, Schema::C5 | Schema::C6))
        .collect();
    let push = |steps: &mut Vec<Step>, formula: Formula, justification: Justification| {
        steps.push(Step {
            formula,
            justification,
        })
    };
    while steps.len() < 12 {
        let n = steps.len();
        match rng.gen_range(0..6) {
            0 | 1 => {
                let schema = schemas[rng.gen_range(0..schemas.len())];
                let mut bindings = Bindings::new();
                for &v in schema.metavariables() {
                    bindings.insert(v, g.formula());
                }
                let f = instantiate(schema, &Params::new(), &bindings).unwrap();
                push(
                    &mut steps,
                    f,
                    Justification::Axiom {
                        schema,
                        params: Params::new(),
                        bindings,
                    },
                );
            }
            2 if n > 0 => {
                // A, A -> (B -> A), B -> A
                let i = rng.gen_range(0..n);
                let a = steps[i].formula.clone();
                let b = g.formula();
                let weakening = Formula::implies(a.clone(), Formula::implies(b.clone(), a.clone()));
                push(&mut steps, weakening, Justification::Taut);
                push(
                    &mut steps,
                    Formula::implies(b, a),
                    Justification::Mp(i + 1, n + 1),
                );
            }
            3 if n > 0 => {
                let i = rng.gen_range(0..n);
                let (op, rule): (fn(Formula) -> Formula, _) = if caret && rng.gen_bool(0.5) {
                    (Formula::abs_next, RuleKind::GenAbsNext)
                } else {
                    (Formula::next, RuleKind::GenNext)
                };
                let f = op(steps[i].formula.clone());
                push(&mut steps, f, Justification::Rule(rule, i + 1));
            }
            4 => {
                // invariant `false` discharges any until
                let (a, b) = (g.formula(), g.formula());
                let premise = Formula::implies(
                    Formula::ff(),
                    Formula::and(Formula::not(b.clone()), Formula::next(Formula::ff())),
                );
                push(&mut steps, premise, Justification::Taut);
                let conclusion = Formula::implies(Formula::ff(), Formula::not(Formula::until(a, b)));
                push(
                    &mut steps,
                    conclusion,
                    Justification::Rule(RuleKind::IndUntil, n + 1),
                );
            }
            _ => {
                let a = g.formula();
                push(
                    &mut steps,
                    Formula::or(a.clone(), Formula::not(a)),
                    Justification::Taut,
                );
            }
        }
    }
    ProofScript { system, steps }
}

fn class_of(system: SystemId) -> (StructureClass, TraceKind) {
    match system {
        SystemId::AxGen => (StructureClass::Gen, TraceKind::Mixed),
        SystemId::AxInf | SystemId::Ax => (StructureClass::Inf, TraceKind::Lasso),
        SystemId::AxFin => (StructureClass::Fin, TraceKind::Finite),
        SystemId::AxCr => (StructureClass::Inf, TraceKind::Structured),
    }
}

#[test]
fn accepted_derivations_are_sound() {
    for system in [SystemId::AxGen, SystemId::AxInf, SystemId::AxFin, SystemId::AxCr] {
        let (class, kind) = class_of(system);
        let mut traces = Generator::new(&GenConfig {
            seed: 77,
            mode: if system.is_caret() {
                Logic::Caret
            } else {
                Logic::Ltl
            },
            trace_kind: kind,
            ..GenConfig::default()
        });
        let mut decided = 0;
        for seed in 0..40 {
            let script = random_derivation(system, seed);
            assert_eq!(check_proof(&script), Verdict::Ok, "{script}");
            assert_eq!(parse_proof(&script.to_string()).unwrap(), script);
            for step in &script.steps {
                for _ in 0..5 {
                    let t = traces.trace();
                    assert_eq!(
                        first_failure(&t, &step.formula),
                        Ok(None),
                        "{system}: {}\n{t}",
                        step.formula
                    );
                }
                if system.is_caret() {
                    continue;
                }
                match decide_valid(&step.formula, class) {
                    Ok(valid) => {
                        decided += 1;
                        assert!(valid, "{system}: {}", step.formula);
                    }
                    Err(TableauError::ClosureTooLarge { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(
            system.is_caret() || decided > 100,
            "{system}: only {decided} steps decided"
        );
    }
}
