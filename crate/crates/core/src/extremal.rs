//! Extremal checks: how many sequence terms can `B·B` hold?
//!
//! [`max_fib_count`] searches every `B ⊆ {1..N}` of a given size in
//! lexicographic order and keeps the first maximiser. The search splits by
//! smallest element ([`max_fib_count_from`]) so callers can farm prefixes out
//! to workers and recombine with [`merge_best`]; the merged witness is the
//! same regardless of scheduling.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::arith::Natural;
use crate::productset::{build_product_set, sequence_members, BaseSet, Element, ProductError};
use crate::sequences::{fib, Sequence, SequenceError, TermTable};

/// Largest universe `{1..N}` the exhaustive search accepts.
pub const MAX_UNIVERSE: u64 = 40;
/// Largest subset size the exhaustive search accepts.
pub const MAX_SET_SIZE: usize = 6;
/// Terms with index at least this are the "large index" terms.
pub const HIGH_INDEX: u64 = 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("search over subsets of size {set_size} from {{1..{universe_max}}} exceeds the desk-scale limit (N <= {MAX_UNIVERSE}, 1 <= k <= {MAX_SET_SIZE})")]
    SearchSpace { universe_max: u64, set_size: usize },
    #[error("no subset of size {set_size} exists in {{1..{universe_max}}}")]
    NoSubsets { universe_max: u64, set_size: usize },
    #[error("set size must be at least 1")]
    ZeroSize,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Product(#[from] ProductError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub universe_max: u64,
    pub set_size: usize,
    pub max_count: usize,
    pub witness: Vec<u64>,
}

/// Fibonacci numbers up to `limit` as a membership bitmap.
fn fibonacci_bitmap(limit: u64) -> Vec<bool> {
    let mut map = vec![false; limit as usize + 1];
    let (mut a, mut b) = (1u64, 1u64);
    while a <= limit {
        map[a as usize] = true;
        let next = a + b;
        a = b;
        b = next;
    }
    map
}

fn check_bounds(universe_max: u64, set_size: usize) -> Result<(), ExtremalError> {
    if set_size == 0 {
        return Err(ExtremalError::ZeroSize);
    }
    if universe_max > MAX_UNIVERSE || set_size > MAX_SET_SIZE {
        return Err(ExtremalError::SearchSpace {
            universe_max,
            set_size,
        });
    }
    if set_size as u64 > universe_max {
        return Err(ExtremalError::NoSubsets {
            universe_max,
            set_size,
        });
    }
    Ok(())
}

/// Number of distinct Fibonacci values among pairwise products of `set`.
fn fib_product_count(set: &[u64], is_fib: &[bool], scratch: &mut Vec<u64>) -> usize {
    scratch.clear();
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i..] {
            let v = a * b;
            if is_fib[v as usize] {
                scratch.push(v);
            }
        }
    }
    scratch.sort_unstable();
    scratch.dedup();
    scratch.len()
}

/// Larger count wins; ties go to the lexicographically smaller witness.
pub fn merge_best(a: Option<ExtremalResult>, b: Option<ExtremalResult>) -> Option<ExtremalResult> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.max_count > a.max_count || (b.max_count == a.max_count && b.witness < a.witness) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// Best subset among those whose smallest element is `first`; `None` if no
/// such subset exists.
pub fn max_fib_count_from(
    universe_max: u64,
    set_size: usize,
    first: u64,
) -> Result<Option<ExtremalResult>, ExtremalError> {
    check_bounds(universe_max, set_size)?;
    if first == 0 || first + set_size as u64 - 1 > universe_max {
        return Ok(None);
    }
    let is_fib = fibonacci_bitmap(universe_max * universe_max);
    let mut scratch = Vec::new();
    let rest = set_size - 1;
    // combination over {first+1..universe_max} of size `rest`, lexicographic
    let pool: Vec<u64> = (first + 1..=universe_max).collect();
    let mut idx: Vec<usize> = (0..rest).collect();
    let mut set = vec![first; set_size];
    let mut best: Option<ExtremalResult> = None;
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            set[slot + 1] = pool[i];
        }
        let count = fib_product_count(&set, &is_fib, &mut scratch);
        if best.as_ref().is_none_or(|b| count > b.max_count) {
            best = Some(ExtremalResult {
                universe_max,
                set_size,
                max_count: count,
                witness: set.clone(),
            });
        }
        // advance
        let mut k = rest;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            if idx[k] < pool.len() - rest + k {
                idx[k] += 1;
                for m in k + 1..rest {
                    idx[m] = idx[m - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Maximum of `|Fibonacci ∩ B·B|` over `B ⊆ {1..universe_max}`, `|B| = set_size`,
/// with the lexicographically first maximiser.
pub fn max_fib_count(universe_max: u64, set_size: usize) -> Result<ExtremalResult, ExtremalError> {
    check_bounds(universe_max, set_size)?;
    let mut best = None;
    for first in 1..=universe_max {
        best = merge_best(best, max_fib_count_from(universe_max, set_size, first)?);
    }
    Ok(best.expect("check_bounds guarantees a subset"))
}

/// `{1, F_3, …, F_{k+1}}`: `1·1` and `1·F_i` give `k` Fibonacci products.
pub fn sharp_example(k: usize) -> Result<BaseSet<Natural>, ExtremalError> {
    if k == 0 {
        return Err(ExtremalError::ZeroSize);
    }
    let mut elements = vec![fib(1)?];
    for i in 3..=k as u64 + 1 {
        elements.push(fib(i)?);
    }
    Ok(BaseSet::new(elements)?)
}

/// Count of sequence terms in `B·B` against `2|B| + 30`, and of terms with
/// index `>= 31` against `2|B| - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasCountReport {
    pub set_size: usize,
    pub count: usize,
    pub bound: usize,
    pub ok: bool,
    pub high_index_count: usize,
    pub high_index_bound: usize,
    pub high_index_ok: bool,
    /// `(value, smallest index)` of every member, ascending by value.
    pub members: Vec<(Natural, u64)>,
}

/// Needs a monotone sequence so the term table can be cut off at the largest
/// product; see [`lucas_count_check_with`] otherwise.
pub fn lucas_count_check<T: Element>(
    base: &BaseSet<T>,
    sequence: Sequence,
) -> Result<LucasCountReport, ExtremalError> {
    let ps = build_product_set(base)?;
    let bound = ps.max_natural().unwrap_or_default();
    let table = TermTable::covering(sequence, &bound)?;
    lucas_count_check_with(base, &table)
}

pub fn lucas_count_check_with<T: Element>(
    base: &BaseSet<T>,
    table: &TermTable,
) -> Result<LucasCountReport, ExtremalError> {
    let ps = build_product_set(base)?;
    let members = sequence_members(&ps, |n| table.index_of(n));
    let n = base.len();
    let count = members.len();
    let high_index_count = members.iter().filter(|m| m.index >= HIGH_INDEX).count();
    let bound = 2 * n + 30;
    let high_index_bound = 2 * n - 1;
    Ok(LucasCountReport {
        set_size: n,
        count,
        bound,
        ok: count < bound,
        high_index_count,
        high_index_bound,
        high_index_ok: high_index_count <= high_index_bound,
        members: members
            .into_iter()
            .filter_map(|m| m.value.to_natural().map(|v| (v, m.index)))
            .collect(),
    })
}
