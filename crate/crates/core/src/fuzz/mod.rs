//! Seeded generation of formulas and traces, and the campaigns built on it.
//!
//! Every random stream is a ChaCha8 stream keyed by the configured seed and
//! a stream number, so a campaign instance can be reproduced from
//! `(seed, stream)` alone.

mod campaign;
mod cross;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Formula, Logic};
use crate::trace::{FiniteTrace, Label, LassoTrace, StateTag, StructuredLassoTrace, StructuredState, Trace};

pub use campaign::{soundness_campaign, Campaign, CampaignReport, CheckCount, Counterexample};
pub use cross::{cross_check_campaign, cross_check_formulas, CROSS_CHECK_BOUND};

/// Which kind of trace [`Generator::trace`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    Finite,
    Lasso,
    /// Finite or lasso with equal probability.
    Mixed,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Largest core size of a generated formula.
    pub max_formula_size: usize,
    pub props: Vec<String>,
    /// Largest finite trace length, or prefix plus loop length.
    pub max_trace_len: usize,
    /// `Caret` adds abstract operators and the tag propositions.
    pub mode: Logic,
    pub trace_kind: TraceKind,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_formula_size: 8,
            props: vec!["p".into(), "q".into()],
            max_trace_len: 12,
            mode: Logic::Ltl,
            trace_kind: TraceKind::Mixed,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_formula_size == 0 {
            return Err("formula size bound must be positive".into());
        }
        if self.max_trace_len == 0 {
            return Err("trace length bound must be positive".into());
        }
        if let Some(p) = self
            .props
            .iter()
            .find(|p| StateTag::ALL.iter().any(|t| t.name() == p.as_str()))
        {
            return Err(format!("`{p}` is reserved for state tags"));
        }
        Ok(())
    }
}

/// A deterministic stream of random formulas and traces.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
    leaves: Vec<String>,
}

impl Generator {
    pub fn new(cfg: &GenConfig) -> Self {
        Self::with_stream(cfg, 0)
    }

    /// Independent stream number `stream` under the same seed.
    pub fn with_stream(cfg: &GenConfig, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        let mut leaves = cfg.props.clone();
        if cfg.mode == Logic::Caret {
            leaves.extend(StateTag::ALL.iter().map(|t| t.name().to_string()));
        }
        Generator {
            cfg: cfg.clone(),
            rng,
            leaves,
        }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    /// A formula of size uniform in `1..=max_formula_size`.
    pub fn formula(&mut self) -> Formula {
        let size = self.rng.gen_range(1..=self.cfg.max_formula_size);
        self.formula_of_size(size)
    }

    /// A formula of exactly this core size.
    pub fn formula_of_size(&mut self, size: usize) -> Formula {
        let caret = self.cfg.mode == Logic::Caret;
        if size <= 1 {
            let k = self.rng.gen_range(0..=self.leaves.len());
            return match self.leaves.get(k) {
                Some(p) => Formula::prop(p.clone()),
                None => Formula::tt(),
            };
        }
        if size == 2 || self.rng.gen_bool(0.5) {
            let inner = self.formula_of_size(size - 1);
            let ops: &[fn(Formula) -> Formula] = if caret {
                &[Formula::not, Formula::next, Formula::abs_next]
            } else {
                &[Formula::not, Formula::next]
            };
            return ops.choose(&mut self.rng).expect("nonempty")(inner);
        }
        let left = self.rng.gen_range(1..=size - 2);
        let a = self.formula_of_size(left);
        let b = self.formula_of_size(size - 1 - left);
        let ops: &[fn(Formula, Formula) -> Formula] = if caret {
            &[Formula::and, Formula::until, Formula::abs_until]
        } else {
            &[Formula::and, Formula::until]
        };
        ops.choose(&mut self.rng).expect("nonempty")(a, b)
    }

    fn label(&mut self) -> Label {
        let props = self.cfg.props.clone();
        props.into_iter().filter(|_| self.rng.gen_bool(0.5)).collect()
    }

    pub fn finite_trace(&mut self) -> FiniteTrace {
        let n = self.rng.gen_range(1..=self.cfg.max_trace_len);
        FiniteTrace::new((0..n).map(|_| self.label()).collect()).expect("nonempty")
    }

    fn lasso_shape(&mut self) -> (usize, usize) {
        let total = self.rng.gen_range(1..=self.cfg.max_trace_len);
        let prefix = self.rng.gen_range(0..total);
        (prefix, total - prefix)
    }

    pub fn lasso_trace(&mut self) -> LassoTrace {
        let (prefix, cycle) = self.lasso_shape();
        let prefix = (0..prefix).map(|_| self.label()).collect();
        let cycle = (0..cycle).map(|_| self.label()).collect();
        LassoTrace::new(prefix, cycle).expect("nonempty loop")
    }

    /// One tag per state; tag names never appear among the propositions.
    pub fn structured_trace(&mut self) -> StructuredLassoTrace {
        let (prefix, cycle) = self.lasso_shape();
        let state = |g: &mut Self| {
            let tag = *StateTag::ALL.choose(&mut g.rng).expect("three tags");
            StructuredState::new(tag, g.label())
        };
        let prefix = (0..prefix).map(|_| state(self)).collect();
        let cycle = (0..cycle).map(|_| state(self)).collect();
        StructuredLassoTrace::new(prefix, cycle).expect("nonempty loop")
    }

    pub fn trace(&mut self) -> Trace {
        self.trace_of(self.cfg.trace_kind)
    }

    pub fn trace_of(&mut self, kind: TraceKind) -> Trace {
        match kind {
            TraceKind::Finite => self.finite_trace().into(),
            TraceKind::Lasso => self.lasso_trace().into(),
            TraceKind::Mixed if self.rng.gen_bool(0.5) => self.finite_trace().into(),
            TraceKind::Mixed => self.lasso_trace().into(),
            TraceKind::Structured => self.structured_trace().into(),
        }
    }

    pub fn gen_range(&mut self, range: std::ops::Range<usize>) -> usize {
        self.rng.gen_range(range)
    }
}

/// First formula of the configured stream.
pub fn gen_formula(cfg: &GenConfig) -> Formula {
    Generator::new(cfg).formula()
}

/// First trace of the configured stream.
pub fn gen_trace(cfg: &GenConfig) -> Trace {
    Generator::new(cfg).trace()
}

/// Every LTL formula over `props` of core size at most `max_size`, in
/// order of size.
pub fn all_formulas(max_size: usize, props: &[&str]) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1].push(Formula::tt());
    by_size[1].extend(props.iter().map(|p| Formula::prop(*p)));
    for size in 2..=max_size {
        let mut level = Vec::new();
        for a in &by_size[size - 1] {
            level.push(Formula::not(a.clone()));
            level.push(Formula::next(a.clone()));
        }
        for left in 1..size.saturating_sub(1) {
            for a in &by_size[left] {
                for b in &by_size[size - 1 - left] {
                    level.push(Formula::and(a.clone(), b.clone()));
                    level.push(Formula::until(a.clone(), b.clone()));
                }
            }
        }
        by_size[size] = level;
    }
    by_size.into_iter().flatten().collect()
}
