use thiserror::Error;

use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("CR^{c}_{m},{n} needs c + m >= n")]
pub struct CrError {
    pub c: u32,
    pub m: u32,
    pub n: u32,
}

/// `CR^c_{m,n}(f)`: up to the first state where `f` holds there are exactly
/// `m` call and `n` return states, internal states in between, with the
/// running excess of returns over calls bounded by `c`.
pub fn expand_cr(c: u32, m: u32, n: u32, f: &Formula) -> Result<Formula, CrError> {
    if c + m < n {
        return Err(CrError { c, m, n });
    }
    Ok(expand(c, m, n, f))
}

fn expand(c: u32, m: u32, n: u32, f: &Formula) -> Formula {
    let int = || Formula::prop("int");
    let step = |tag: &str, rest: Formula| {
        Formula::until(int(), Formula::and(Formula::prop(tag), Formula::next(rest)))
    };
    let on_call = || step("call", expand(c + 1, m - 1, n, f));
    let on_ret = || step("ret", expand(c - 1, m, n - 1, f));
    match (m, n, c) {
        (0, 0, _) => Formula::until(int(), f.clone()),
        (_, 0, _) => on_call(),
        (0, _, _) => on_ret(),
        (_, _, 0) => on_call(),
        _ => Formula::or(on_call(), on_ret()),
    }
}
