//! Linear temporal logic over finite, infinite and mixed traces, and the
//! call/return logic CaRet.
//!
//! The crate covers the whole pipeline from concrete syntax to decision
//! procedures:
//!
//! * [`syntax`] parses, prints and desugars formulas and computes closures;
//! * [`trace`] holds finite traces, lassos and structured (call/return
//!   tagged) lassos, with the matching-return machinery;
//! * [`semantics`] evaluates formulas on traces;
//! * [`tableau`] decides satisfiability and validity of LTL over the
//!   finite, infinite and mixed classes and extracts witness models;
//! * [`proof`] checks Hilbert-style derivations in the five axiom systems;
//! * [`fuzz`] generates random formulas and traces and runs the soundness
//!   and cross-check campaigns.

pub mod syntax;

pub use syntax::{parse_formula, Formula, Logic};
pub mod fuzz;
pub mod proof;
pub mod semantics;
pub mod tableau;
pub mod trace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/tableau.md")]
    mod tableau {}
    #[doc = include_str!("../../../book/src/proofs.md")]
    mod proofs {}
    #[doc = include_str!("../../../book/src/fuzzing.md")]
    mod fuzzing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
