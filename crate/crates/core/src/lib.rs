//! Exact arithmetic for counting integer-sequence terms inside product sets.
//!
//! For a finite set `B` the product set is `B·B = {ab : a, b ∈ B}`. This crate
//! provides the pieces needed to measure how many Fibonacci numbers, Lucas
//! sequence terms, or consecutive polynomial values such a set can hold:
//!
//! * [`arith`]: primality, factorization, smooth parts, CRT.
//! * [`sequences`]: Fibonacci / Lucas pairs `U_n(P,Q)`, `V_n(P,Q)`, membership
//!   and primitive divisors.
//! * [`productset`]: `B·B` with factor-pair provenance.
//! * [`auxgraph`]: representation graphs over one or two copies of `B`, cycle
//!   detection and the forest edge bound.
//! * [`extremal`]: exhaustive and constructive checks of the Fibonacci and
//!   Lucas-term bounds.
//! * [`polyseq`]: polynomial windows `P(r+1), …, P(r+R)`, the admissible
//!   residue class, smooth-part statistics and the window witness.
//! * [`coverlemma`]: fresh-neighbour cover sequences in bipartite graphs.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod auxgraph;
pub mod coverlemma;
pub mod extremal;
pub mod polyseq;
pub mod productset;
pub mod sequences;

pub use arith::{Integer, Natural};
