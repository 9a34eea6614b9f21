//! Satisfiability and validity of LTL over finite traces, infinite traces
//! and both together, decided on the graph of atoms of a formula's closure.
//!
//! An atom assigns a truth value to every closure formula subject to local
//! rules (conjunction, the until unfolding, saturation of `X` formulas at
//! the final state). An edge `V -> W` means `W` can be the next state after
//! `V`. A formula is satisfiable iff some atom containing it starts a path
//! to a final atom (finite traces) or a reachable cycle in which every until
//! is fulfilled (infinite traces).

mod atoms;
mod brute;
mod graph;

use std::fmt;

use thiserror::Error;

use crate::syntax::Formula;
use crate::trace::{FiniteTrace, LassoTrace, Trace};

pub use atoms::{enumerate_atoms, Atom, AtomSpace, DEFAULT_CLOSURE_CAP};
pub use brute::{brute_force_sat, BruteVerdict, MAX_BRUTE_ALPHABET, MAX_BRUTE_TOTAL};
pub use graph::{AtomGraph, ChainWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureClass {
    /// Finite and infinite traces.
    Gen,
    Fin,
    Inf,
}

impl StructureClass {
    pub const ALL: [StructureClass; 3] = [StructureClass::Gen, StructureClass::Fin, StructureClass::Inf];

    pub fn name(self) -> &'static str {
        match self {
            StructureClass::Gen => "gen",
            StructureClass::Fin => "fin",
            StructureClass::Inf => "inf",
        }
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for StructureClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gen" => Ok(StructureClass::Gen),
            "fin" => Ok(StructureClass::Fin),
            "inf" => Ok(StructureClass::Inf),
            other => Err(format!(
                "unknown structure class `{other}` (expected gen, fin or inf)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("`{0}` uses abstract operators; the tableau decides LTL only")]
    NotLtl(String),
    #[error("closure has {size} formulas up to negation, above the cap of {cap}")]
    ClosureTooLarge { size: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableauConfig {
    /// Maximum number of closure formulas counted up to negation (at most
    /// 64, the width of an atom).
    pub closure_cap: usize,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig {
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub chain: ChainWitness,
    pub trace: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub witness: Option<Witness>,
}

impl SatResult {
    pub fn is_satisfiable(&self) -> bool {
        self.witness.is_some()
    }
}

/// The atom space and graph of one formula for one class.
pub struct Tableau {
    formula: Formula,
    space: AtomSpace,
    graph: AtomGraph,
}

impl Tableau {
    pub fn new(f: &Formula, class: StructureClass, config: &TableauConfig) -> Result<Self, TableauError> {
        let space = AtomSpace::new(f, config.closure_cap)?;
        let graph = AtomGraph::new(&space, class);
        Ok(Tableau {
            formula: f.clone(),
            space,
            graph,
        })
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn graph(&self) -> &AtomGraph {
        &self.graph
    }

    /// Looks for an acceptable chain starting in an atom that contains the
    /// formula, trying atoms in bit order.
    pub fn decide(&self) -> SatResult {
        let search = graph::Search::new(&self.space, &self.graph);
        let root = self.space.lit(&self.formula).expect("the seed is in its closure");
        let class = self.graph.class();
        for (v, &atom) in self.graph.atoms().iter().enumerate() {
            if !self.space.holds(atom, root) {
                continue;
            }
            let chain = if search.fin_good(v) {
                search.terminal_path(v)
            } else if search.inf_good(v) {
                search.lasso(v)
            } else {
                continue;
            };
            debug_assert!(class != StructureClass::Fin || matches!(chain, ChainWitness::TerminalPath(_)));
            let trace = self.extract_model(&chain);
            return SatResult {
                witness: Some(Witness { chain, trace }),
            };
        }
        SatResult { witness: None }
    }

    pub fn extract_model(&self, chain: &ChainWitness) -> Trace {
        extract_model(&self.space, chain)
    }
}

/// One state per chain atom, labeled with the propositions it contains.
pub fn extract_model(space: &AtomSpace, chain: &ChainWitness) -> Trace {
    let label = |a: &Atom| space.props(*a).map(str::to_string).collect();
    match chain {
        ChainWitness::TerminalPath(atoms) => {
            Trace::Finite(FiniteTrace::new(atoms.iter().map(label).collect()).expect("chains are nonempty"))
        }
        ChainWitness::LassoChain { prefix, cycle } => Trace::Lasso(
            LassoTrace::new(
                prefix.iter().map(label).collect(),
                cycle.iter().map(label).collect(),
            )
            .expect("loops are nonempty"),
        ),
    }
}

pub fn decide_sat(f: &Formula, class: StructureClass) -> Result<SatResult, TableauError> {
    decide_sat_with(f, class, &TableauConfig::default())
}

pub fn decide_sat_with(
    f: &Formula,
    class: StructureClass,
    config: &TableauConfig,
) -> Result<SatResult, TableauError> {
    Ok(Tableau::new(f, class, config)?.decide())
}

/// Validity: the negation has no model in the class.
pub fn decide_valid(f: &Formula, class: StructureClass) -> Result<bool, TableauError> {
    decide_valid_with(f, class, &TableauConfig::default())
}

pub fn decide_valid_with(
    f: &Formula,
    class: StructureClass,
    config: &TableauConfig,
) -> Result<bool, TableauError> {
    Ok(!decide_sat_with(&Formula::not(f.clone()), class, config)?.is_satisfiable())
}
