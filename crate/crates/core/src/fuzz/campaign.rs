use serde::Serialize;

use crate::proof::{instantiate, Bindings, Params, Schema, SystemId};
use crate::semantics::first_failure;
use crate::syntax::Logic;

use super::{GenConfig, Generator, TraceKind};

/// Instances and failures of one check (an axiom schema, or a cross-check
/// property).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub check: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub formula: String,
    /// In the trace text format.
    pub trace: Option<String>,
    pub position: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub seed: u64,
    pub checks: Vec<CheckCount>,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

impl CampaignReport {
    pub(crate) fn new(campaign: impl Into<String>, seed: u64) -> Self {
        CampaignReport {
            campaign: campaign.into(),
            seed,
            checks: Vec::new(),
            failures: 0,
            counterexample: None,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.failures == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckCount> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub(crate) fn record(&mut self, check: &str, failure: Option<Counterexample>) {
        let entry = match self.checks.iter().position(|c| c.check == check) {
            Some(k) => &mut self.checks[k],
            None => {
                self.checks.push(CheckCount {
                    check: check.to_string(),
                    instances: 0,
                    failures: 0,
                });
                self.checks.last_mut().expect("just pushed")
            }
        };
        entry.instances += 1;
        if let Some(cex) = failure {
            entry.failures += 1;
            self.failures += 1;
            self.counterexample.get_or_insert(cex);
        }
    }
}

/// The trace class on which a system's axioms are sound.
pub fn default_trace_kind(system: SystemId) -> TraceKind {
    match system {
        SystemId::Ax | SystemId::AxInf => TraceKind::Lasso,
        SystemId::AxGen => TraceKind::Mixed,
        SystemId::AxFin => TraceKind::Finite,
        SystemId::AxCr => TraceKind::Structured,
    }
}

/// Parameter choices cycled through by the CR families.
fn family_params(schema: Schema, index: usize) -> Params {
    let p = |pairs: &[(&str, u32)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    match schema {
        Schema::C5 => p(&[("n", (index % 3) as u32)]),
        Schema::C6 => {
            let (m, n) = [(1, 0), (2, 0), (2, 1)][index % 3];
            p(&[("m", m), ("n", n)])
        }
        _ => Params::new(),
    }
}

/// A soundness campaign: random instances of each axiom schema of a system,
/// each evaluated at every position of a fresh random trace.
#[derive(Clone, Debug)]
pub struct Campaign {
    system: SystemId,
    instances: usize,
    family_instances: Option<usize>,
    trace_kind: Option<TraceKind>,
    schemas: Option<Vec<Schema>>,
}

impl Campaign {
    pub fn new(system: SystemId, instances: usize) -> Self {
        Campaign {
            system,
            instances,
            family_instances: None,
            trace_kind: None,
            schemas: None,
        }
    }

    /// Instance count for the parameterized families C5 and C6.
    pub fn family_instances(mut self, n: usize) -> Self {
        self.family_instances = Some(n);
        self
    }

    /// Evaluate on this kind of trace instead of the system's own class.
    pub fn trace_kind(mut self, kind: TraceKind) -> Self {
        self.trace_kind = Some(kind);
        self
    }

    /// Restrict to these schemas (they need not belong to the system).
    pub fn schemas(mut self, schemas: &[Schema]) -> Self {
        self.schemas = Some(schemas.to_vec());
        self
    }

    pub fn run(&self, cfg: &GenConfig) -> CampaignReport {
        let kind = self.trace_kind.unwrap_or_else(|| default_trace_kind(self.system));
        let cfg = GenConfig {
            mode: if self.system.is_caret() {
                Logic::Caret
            } else {
                Logic::Ltl
            },
            trace_kind: kind,
            ..cfg.clone()
        };
        let schemas = self
            .schemas
            .clone()
            .unwrap_or_else(|| self.system.schemas().to_vec());
        let mut report = CampaignReport::new(format!("soundness {}", self.system), cfg.seed);
        for schema in schemas {
            let count = match schema {
                Schema::C5 | Schema::C6 => self.family_instances.unwrap_or(self.instances),
                _ => self.instances,
            };
            let ordinal = Schema::ALL.iter().position(|&s| s == schema).expect("listed") as u64;
            for index in 0..count {
                let mut g = Generator::with_stream(&cfg, ordinal << 32 | index as u64);
                let mut bindings = Bindings::new();
                for &var in schema.metavariables() {
                    bindings.insert(var, g.formula());
                }
                let params = family_params(schema, index);
                let f = instantiate(schema, &params, &bindings).expect("well-formed instance");
                let trace = g.trace();
                let failure = first_failure(&trace, &f)
                    .expect("instances of the system's logic evaluate on its traces")
                    .map(|position| Counterexample {
                        check: schema.name().to_string(),
                        formula: f.to_string(),
                        trace: Some(trace.to_string()),
                        position: Some(position),
                    });
                report.record(schema.name(), failure);
            }
        }
        report
    }
}

/// Runs `instances` random instances of every schema of `system` on traces
/// of its class.
pub fn soundness_campaign(system: SystemId, instances: usize, cfg: &GenConfig) -> CampaignReport {
    Campaign::new(system, instances).run(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaigns_are_clean() {
        let cfg = GenConfig::default();
        for system in SystemId::ALL {
            let report = soundness_campaign(system, 200, &cfg);
            assert!(report.is_clean(), "{system}: {:?}", report.counterexample);
            assert_eq!(report.checks.len(), system.schemas().len());
            assert!(report.checks.iter().all(|c| c.instances == 200));
        }
    }

    #[test]
    fn negative_control_finds_finite_counterexamples() {
        let report = Campaign::new(SystemId::Ax, 300)
            .trace_kind(TraceKind::Finite)
            .schemas(&[Schema::T2, Schema::T3])
            .run(&GenConfig::default());
        assert!(report.check("T2").unwrap().failures > 0);
        assert!(report.check("T3").unwrap().failures > 0);
        let cex = report.counterexample.unwrap();
        assert!(cex.trace.is_some() && cex.position.is_some());
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = GenConfig {
            seed: 9,
            ..GenConfig::default()
        };
        let a = Campaign::new(SystemId::Ax, 100)
            .trace_kind(TraceKind::Finite)
            .run(&cfg);
        let b = Campaign::new(SystemId::Ax, 100)
            .trace_kind(TraceKind::Finite)
            .run(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.failures == 0, a.counterexample.is_none());
    }
}
