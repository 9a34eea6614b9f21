//! Formulas: the core tree, concrete syntax and closure sets.

mod closure;
mod formula;
mod parse;

pub use closure::{closure, finite_horizon, ClosureSet};
pub use formula::{formula_size, print_formula, Formula, Logic};
pub use parse::{parse_formula, ParseError};

pub(crate) use parse::parse_template;
