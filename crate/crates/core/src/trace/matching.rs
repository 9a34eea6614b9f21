use super::{AbsPosition, Periodic, StateTag, StructuredLassoTrace};

/// Outcome of the bounded literal scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    Found(usize),
    Inconclusive,
}

/// The first unmatched return after `i`: the least `j > i` such that `j` is
/// a ret state and the states strictly between `i` and `j` contain as many
/// calls as rets.
///
/// The scan keeps the running balance (calls minus rets since `i`). It never
/// goes negative, because a ret at balance zero is the answer. Once the scan
/// has crossed a whole loop period without answering and the balance did not
/// drop over that period, every later period replays it at a balance at least
/// as high, so no answer can follow. If the balance drops, it drops each
/// period and must eventually reach a ret at balance zero.
pub fn matching_return(t: &StructuredLassoTrace, i: usize) -> AbsPosition {
    let prefix = t.prefix_len();
    let period = t.loop_len();
    let mut balance: usize = 0;
    let mut last_boundary: Option<usize> = None;
    let mut j = i + 1;
    loop {
        if j >= prefix && (j - prefix).is_multiple_of(period) {
            if let Some(previous) = last_boundary {
                if balance >= previous {
                    return AbsPosition::Undefined;
                }
            }
            last_boundary = Some(balance);
        }
        match t.tag(j) {
            StateTag::Ret if balance == 0 => return AbsPosition::At(j),
            StateTag::Ret => balance -= 1,
            StateTag::Call => balance += 1,
            StateTag::Int => {}
        }
        j += 1;
    }
}

/// The next position in the same procedure context.
///
/// For a call this is its matching return; for any other state it is
/// undefined when the next state is a ret and `i + 1` otherwise.
pub fn abstract_successor(t: &StructuredLassoTrace, i: usize) -> AbsPosition {
    if t.tag(i) == StateTag::Call {
        matching_return(t, i)
    } else if t.tag(i + 1) == StateTag::Ret {
        AbsPosition::Undefined
    } else {
        AbsPosition::At(i + 1)
    }
}

/// Literal left-to-right check of the matching-return definition on the
/// window `i+1 ..= i+bound`, counting calls and rets from scratch for every
/// candidate.
pub fn brute_matching_return(t: &StructuredLassoTrace, i: usize, bound: usize) -> ScanOutcome {
    for j in i + 1..=i + bound {
        if t.tag(j) != StateTag::Ret {
            continue;
        }
        let between = i + 1..j;
        let calls = between.clone().filter(|&k| t.tag(k) == StateTag::Call).count();
        let rets = between.filter(|&k| t.tag(k) == StateTag::Ret).count();
        if calls == rets {
            return ScanOutcome::Found(j);
        }
    }
    ScanOutcome::Inconclusive
}
