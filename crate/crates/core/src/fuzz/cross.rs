use crate::semantics::eval;
use crate::syntax::{Formula, Logic};
use crate::tableau::{brute_force_sat, decide_sat, BruteVerdict, StructureClass, MAX_BRUTE_ALPHABET};
use crate::trace::Trace;

use super::campaign::{CampaignReport, Counterexample};
use super::{GenConfig, Generator};

/// Largest total trace length searched when the tableau answers UNSAT.
pub const CROSS_CHECK_BOUND: usize = 8;

fn in_class(trace: &Trace, class: StructureClass) -> bool {
    match class {
        StructureClass::Gen => !matches!(trace, Trace::Structured(_)),
        StructureClass::Fin => matches!(trace, Trace::Finite(_)),
        StructureClass::Inf => matches!(trace, Trace::Lasso(_)),
    }
}

/// Checks each formula against the tableau in every class:
/// a SAT witness must satisfy the formula at 0 and lie in the class,
/// an UNSAT answer must survive bounded brute force, and gen SAT must equal
/// fin SAT or inf SAT. Formulas whose closure is over the cap are skipped.
pub fn cross_check_formulas<'f>(
    formulas: impl IntoIterator<Item = &'f Formula>,
    seed: u64,
) -> CampaignReport {
    let mut report = CampaignReport::new("tableau cross-check", seed);
    for f in formulas {
        let mut sat = [false; 3];
        let mut decided = true;
        for (k, class) in StructureClass::ALL.into_iter().enumerate() {
            let Ok(result) = decide_sat(f, class) else {
                decided = false;
                continue;
            };
            sat[k] = result.is_satisfiable();
            match result.witness {
                Some(w) => {
                    let ok = in_class(&w.trace, class) && eval(&w.trace, 0, f) == Ok(true);
                    report.record(
                        "witness",
                        (!ok).then(|| Counterexample {
                            check: format!("witness {class}"),
                            formula: f.to_string(),
                            trace: Some(w.trace.to_string()),
                            position: Some(0),
                        }),
                    );
                }
                None if f.props().len() <= MAX_BRUTE_ALPHABET => {
                    let found = brute_force_sat(f, class, CROSS_CHECK_BOUND);
                    let cex = match found {
                        BruteVerdict::Satisfiable(t) => Some(Counterexample {
                            check: format!("unsat {class}"),
                            formula: f.to_string(),
                            trace: Some(t.to_string()),
                            position: Some(0),
                        }),
                        BruteVerdict::UnsatisfiableUpToBound => None,
                    };
                    report.record("unsat", cex);
                }
                None => {}
            }
        }
        if decided {
            let ok = sat[0] == (sat[1] || sat[2]);
            report.record(
                "decomposition",
                (!ok).then(|| Counterexample {
                    check: "decomposition".into(),
                    formula: f.to_string(),
                    trace: None,
                    position: None,
                }),
            );
        }
    }
    report
}

/// Cross-checks `samples` random LTL formulas drawn from `cfg`.
pub fn cross_check_campaign(samples: usize, cfg: &GenConfig) -> CampaignReport {
    let cfg = GenConfig {
        mode: Logic::Ltl,
        ..cfg.clone()
    };
    let formulas: Vec<Formula> = (0..samples)
        .map(|i| Generator::with_stream(&cfg, i as u64).formula())
        .collect();
    cross_check_formulas(&formulas, cfg.seed)
}
