//! Cover sequences in bipartite graphs.
//!
//! Given a bipartite graph `(A, B, E)` where every `a` has degree at most `n`
//! and every `b` has degree at least one, there is a sequence `b₁, …, b_k` of
//! distinct `B` vertices with `k >= |B| / n` such that each `b_i` has a
//! neighbour outside `V(b₁) ∪ … ∪ V(b_{i-1})`.
//!
//! [`cover_sequence`] follows the inductive construction: one pass keeps the
//! vertices that contribute a fresh neighbour (`K`); if `|K| >= |B| / n` it is
//! the answer, otherwise every non-isolated `a` already has a neighbour in `K`,
//! so on `B \ K` the degree bound drops to `n - 1` and we recurse.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("b-vertex {0} has no neighbours")]
    IsolatedB(usize),
    #[error("b-vertex {b} lists a-vertex {a}, but there are only {a_count}")]
    UnknownA { b: usize, a: usize, a_count: usize },
    #[error("a-vertex {a} has degree {degree}, above the bound {bound}")]
    DegreeAboveBound { a: usize, degree: usize, bound: usize },
}

/// Bipartite graph stored as the neighbour lists of the `B` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    a_count: usize,
    adjacency: Vec<Vec<usize>>,
    degree_bound: usize,
}

impl Bipartite {
    /// `adjacency[b]` lists the `A` neighbours of `b`. The degree bound is the
    /// largest `A` degree (at least 1).
    pub fn new(a_count: usize, adjacency: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        let degrees = Self::validate(a_count, &adjacency)?;
        let degree_bound = degrees.into_iter().max().unwrap_or(0).max(1);
        Ok(Bipartite {
            a_count,
            adjacency,
            degree_bound,
        })
    }

    /// Like [`Bipartite::new`] with an explicit bound `n` on `A` degrees.
    pub fn with_degree_bound(
        a_count: usize,
        adjacency: Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<Self, CoverError> {
        let degrees = Self::validate(a_count, &adjacency)?;
        if let Some((a, &degree)) = degrees.iter().enumerate().find(|(_, &d)| d > bound) {
            return Err(CoverError::DegreeAboveBound { a, degree, bound });
        }
        Ok(Bipartite {
            a_count,
            adjacency,
            degree_bound: bound.max(1),
        })
    }

    fn validate(a_count: usize, adjacency: &[Vec<usize>]) -> Result<Vec<usize>, CoverError> {
        let mut degrees = vec![0usize; a_count];
        for (b, neighbours) in adjacency.iter().enumerate() {
            if neighbours.is_empty() {
                return Err(CoverError::IsolatedB(b));
            }
            let mut sorted = neighbours.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for &a in &sorted {
                if a >= a_count {
                    return Err(CoverError::UnknownA { b, a, a_count });
                }
                degrees[a] += 1;
            }
        }
        Ok(degrees)
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn neighbours(&self, b: usize) -> &[usize] {
        &self.adjacency[b]
    }
}

/// Keeps each `b` (in the given order) that has a neighbour not yet covered.
fn fresh_pass(g: &Bipartite, order: &[usize]) -> Vec<usize> {
    let mut covered = vec![false; g.a_count];
    let mut kept = Vec::new();
    for &b in order {
        let mut fresh = false;
        for &a in &g.adjacency[b] {
            if !covered[a] {
                covered[a] = true;
                fresh = true;
            }
        }
        if fresh {
            kept.push(b);
        }
    }
    kept
}

/// Cover sequence of length `k` with `k · n >= |B|`, scanning `B` in index order.
pub fn cover_sequence(g: &Bipartite) -> Vec<usize> {
    let order: Vec<usize> = (0..g.b_count()).collect();
    cover_from(g, order, g.degree_bound)
}

fn cover_from(g: &Bipartite, order: Vec<usize>, bound: usize) -> Vec<usize> {
    let kept = fresh_pass(g, &order);
    if bound <= 1 || kept.len() * bound >= order.len() {
        return kept;
    }
    let rest: Vec<usize> = order.into_iter().filter(|b| !kept.contains(b)).collect();
    cover_from(g, rest, bound - 1)
}

/// `true` iff `seq` is non-empty, repeat-free, in range, and every element
/// brings a neighbour outside the union of the earlier neighbourhoods.
pub fn verify_cover(g: &Bipartite, seq: &[usize]) -> bool {
    if seq.is_empty() {
        return false;
    }
    let mut seen_b = vec![false; g.b_count()];
    let mut covered = vec![false; g.a_count];
    for &b in seq {
        if b >= g.b_count() || seen_b[b] {
            return false;
        }
        seen_b[b] = true;
        let fresh = g.adjacency[b].iter().any(|&a| !covered[a]);
        if !fresh {
            return false;
        }
        for &a in &g.adjacency[b] {
            covered[a] = true;
        }
    }
    true
}
