//! Fibonacci numbers, Lucas numbers and general Lucas pairs.
//!
//! Indexing starts at 1: `F_1 = F_2 = 1`, `U_1 = 1`, `U_2 = P`, `V_1 = P`,
//! `V_2 = P^2 - 2Q`. There is no index 0 anywhere in the public API.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{factorize, is_perfect_square, ArithError, Integer, Natural};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence indices start at 1")]
    ZeroIndex,
    #[error("index {0} is below the minimum of 2")]
    IndexTooSmall(u64),
    #[error("gcd(P, Q) = gcd({p}, {q}) is not 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("discriminant P^2 - 4Q vanishes for ({p}, {q})")]
    ZeroDiscriminant { p: i64, q: i64 },
    #[error("term {index} of the sequence is zero")]
    ZeroTerm { index: u64 },
    #[error("{0} is not monotone; build a term table by index instead")]
    NotMonotone(Sequence),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Parameters `(P, Q)` of the recurrences `U_n`, `V_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LucasSpec {
    p: i64,
    q: i64,
}

impl LucasSpec {
    /// `(1, -1)`: `U_n` are the Fibonacci numbers, `V_n` the Lucas numbers.
    pub const FIBONACCI: LucasSpec = LucasSpec { p: 1, q: -1 };

    pub fn new(p: i64, q: i64) -> Result<Self, SequenceError> {
        if num_integer::gcd(p, q) != 1 {
            return Err(SequenceError::NotCoprime { p, q });
        }
        let spec = LucasSpec { p, q };
        if spec.discriminant().is_zero() {
            return Err(SequenceError::ZeroDiscriminant { p, q });
        }
        Ok(spec)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `P^2 - 4Q`.
    pub fn discriminant(&self) -> Integer {
        let p = Integer::from(self.p);
        &p * &p - Integer::from(self.q) * 4
    }

    /// `U_1, …, U_n`.
    pub fn u_terms(&self, n: u64) -> Vec<Integer> {
        self.recurrence(Integer::one(), Integer::from(self.p), n)
    }

    /// `V_1, …, V_n`.
    pub fn v_terms(&self, n: u64) -> Vec<Integer> {
        let p = Integer::from(self.p);
        let v2 = &p * &p - Integer::from(self.q) * 2;
        self.recurrence(p, v2, n)
    }

    pub fn u(&self, n: u64) -> Result<Integer, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        Ok(self.u_terms(n).pop().expect("n >= 1 terms"))
    }

    pub fn v(&self, n: u64) -> Result<Integer, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        Ok(self.v_terms(n).pop().expect("n >= 1 terms"))
    }

    /// Terms with the given first two values and `x_k = P x_{k-1} - Q x_{k-2}`.
    fn recurrence(&self, first: Integer, second: Integer, n: u64) -> Vec<Integer> {
        let p = Integer::from(self.p);
        let q = Integer::from(self.q);
        let mut out = Vec::with_capacity(n as usize);
        if n >= 1 {
            out.push(first);
        }
        if n >= 2 {
            out.push(second);
        }
        for k in 2..n as usize {
            let next = &p * &out[k - 1] - &q * &out[k - 2];
            out.push(next);
        }
        out
    }

    /// Positive discriminant and `P > 0`: every term is positive and the
    /// terms never decrease.
    pub fn is_monotone(&self) -> bool {
        self.p > 0 && self.discriminant().is_positive()
    }
}

impl fmt::Display for LucasSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

/// A concrete integer sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// `F_n = U_n(1, -1)`.
    Fibonacci,
    /// The Lucas numbers `V_n(1, -1)`: 1, 3, 4, 7, 11, …
    LucasNumbers,
    U(LucasSpec),
    V(LucasSpec),
}

impl Sequence {
    pub fn spec(&self) -> LucasSpec {
        match self {
            Sequence::Fibonacci | Sequence::LucasNumbers => LucasSpec::FIBONACCI,
            Sequence::U(s) | Sequence::V(s) => *s,
        }
    }

    fn is_u(&self) -> bool {
        matches!(self, Sequence::Fibonacci | Sequence::U(_))
    }

    /// Terms with indices `1..=n`.
    pub fn terms(&self, n: u64) -> Vec<Integer> {
        if self.is_u() {
            self.spec().u_terms(n)
        } else {
            self.spec().v_terms(n)
        }
    }

    pub fn term(&self, n: u64) -> Result<Integer, SequenceError> {
        if self.is_u() {
            self.spec().u(n)
        } else {
            self.spec().v(n)
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.spec().is_monotone()
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Fibonacci => write!(f, "fib"),
            Sequence::LucasNumbers => write!(f, "lucasV"),
            Sequence::U(s) => write!(f, "lucasU:{s}"),
            Sequence::V(s) => write!(f, "lucasV:{s}"),
        }
    }
}

/// One term of a sequence; `value` is recomputable from `sequence` and `index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTerm {
    pub sequence: Sequence,
    pub index: u64,
    pub value: Integer,
}

impl SequenceTerm {
    pub fn new(sequence: Sequence, index: u64) -> Result<Self, SequenceError> {
        let value = sequence.term(index)?;
        Ok(SequenceTerm {
            sequence,
            index,
            value,
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.sequence
            .term(self.index)
            .map(|v| v == self.value)
            .unwrap_or(false)
    }
}

/// Lookup from positive term values to their smallest index.
#[derive(Debug, Clone)]
pub struct TermTable {
    sequence: Sequence,
    max_index: u64,
    by_value: BTreeMap<Natural, u64>,
}

impl TermTable {
    /// All positive terms with index `1..=max_index`.
    pub fn up_to_index(sequence: Sequence, max_index: u64) -> Self {
        let mut by_value = BTreeMap::new();
        for (k, t) in sequence.terms(max_index).into_iter().enumerate() {
            if let Some(v) = t.to_biguint().filter(|v| !v.is_zero()) {
                by_value.entry(v).or_insert(k as u64 + 1);
            }
        }
        TermTable {
            sequence,
            max_index,
            by_value,
        }
    }

    /// Every term `<= bound`. Only monotone sequences can be cut off by value.
    pub fn covering(sequence: Sequence, bound: &Natural) -> Result<Self, SequenceError> {
        if !sequence.is_monotone() {
            return Err(SequenceError::NotMonotone(sequence));
        }
        let spec = sequence.spec();
        let p = Integer::from(spec.p());
        let q = Integer::from(spec.q());
        let (mut prev, mut cur) = if sequence.is_u() {
            (Integer::one(), p.clone())
        } else {
            (p.clone(), &p * &p - &q * 2)
        };
        let mut by_value = BTreeMap::new();
        let mut index = 1u64;
        let bound = Integer::from(bound.clone());
        while prev <= bound {
            let v = prev.to_biguint().expect("monotone sequences are positive");
            by_value.entry(v).or_insert(index);
            let next = &p * &cur - &q * &prev;
            prev = core::mem::replace(&mut cur, next);
            index += 1;
        }
        Ok(TermTable {
            sequence,
            max_index: index - 1,
            by_value,
        })
    }

    pub fn sequence(&self) -> Sequence {
        self.sequence
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    pub fn index_of(&self, value: &Natural) -> Option<u64> {
        self.by_value.get(value).copied()
    }

    pub fn len(&self) -> usize {
        self.by_value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_value.is_empty()
    }
}

/// `F_n`, with `F_1 = F_2 = 1`. Fast doubling.
pub fn fib(n: u64) -> Result<Natural, SequenceError> {
    if n == 0 {
        return Err(SequenceError::ZeroIndex);
    }
    Ok(fib_pair(n).0)
}

/// `(F_n, F_{n+1})` with `F_0 = 0` internally.
fn fib_pair(n: u64) -> (Natural, Natural) {
    if n == 0 {
        return (Natural::zero(), Natural::one());
    }
    let (a, b) = fib_pair(n / 2);
    // F_2k = F_k (2F_{k+1} - F_k),  F_2k+1 = F_k^2 + F_{k+1}^2
    let c = &a * (&b * 2u32 - &a);
    let d = &a * &a + &b * &b;
    if n % 2 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// Smallest `n` with `F_n = m`, using the `5m^2 ± 4` square test.
pub fn is_fibonacci(m: &Natural) -> Option<u64> {
    if m.is_zero() {
        return None;
    }
    let five_m2 = m * m * 5u32;
    let plus = &five_m2 + 4u32;
    let minus = &five_m2 - 4u32;
    if !is_perfect_square(&plus) && !is_perfect_square(&minus) {
        return None;
    }
    let (mut a, mut b) = (Natural::one(), Natural::one());
    let mut index = 1u64;
    while a < *m {
        let next = &a + &b;
        a = core::mem::replace(&mut b, next);
        index += 1;
    }
    debug_assert!(a == *m);
    Some(index)
}

/// `gcd(F_m, F_n)`, computed from the two values.
pub fn fib_gcd(m: u64, n: u64) -> Result<Natural, SequenceError> {
    Ok(fib(m)?.gcd(&fib(n)?))
}

/// Which primes count as primitive divisors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisorRule {
    /// `p | U_n` and `p ∤ U_k` for `1 <= k < n` (Carmichael).
    #[default]
    NewPrime,
    /// Additionally `p ∤ P^2 - 4Q`.
    ExcludeDiscriminant,
}

/// Smallest prime dividing `|U_n|` and no earlier term.
///
/// Fibonacci has none exactly at `n ∈ {1, 2, 6, 12}`.
pub fn primitive_divisor(spec: LucasSpec, n: u64) -> Result<Option<Natural>, SequenceError> {
    primitive_divisor_with(spec, n, DivisorRule::NewPrime)
}

/// Like [`primitive_divisor`] but also rejecting primes of the discriminant.
/// Fibonacci then also loses `n = 5` (`F_5 = 5`).
pub fn primitive_divisor_strict(
    spec: LucasSpec,
    n: u64,
) -> Result<Option<Natural>, SequenceError> {
    primitive_divisor_with(spec, n, DivisorRule::ExcludeDiscriminant)
}

pub fn primitive_divisor_with(
    spec: LucasSpec,
    n: u64,
    rule: DivisorRule,
) -> Result<Option<Natural>, SequenceError> {
    if n < 2 {
        return Err(SequenceError::IndexTooSmall(n));
    }
    let terms: Vec<Natural> = spec.u_terms(n).iter().map(|t| t.magnitude().clone()).collect();
    if let Some(k) = terms.iter().position(|t| t.is_zero()) {
        return Err(SequenceError::ZeroTerm { index: k as u64 + 1 });
    }
    let disc = spec.discriminant().magnitude().clone();
    let (last, earlier) = terms.split_last().expect("n >= 2");
    let found = factorize(last)?.primes().find(|p| {
        let in_disc = rule == DivisorRule::ExcludeDiscriminant && (&disc % *p).is_zero();
        !in_disc && earlier.iter().all(|t| !(t % *p).is_zero())
    }).cloned();
    Ok(found)
}

/// Indices `n <= limit_index` with `F_n` a perfect square.
pub fn square_fibonacci_indices(limit_index: u64) -> Result<Vec<u64>, SequenceError> {
    if limit_index == 0 {
        return Err(SequenceError::ZeroIndex);
    }
    Ok(LucasSpec::FIBONACCI
        .u_terms(limit_index)
        .iter()
        .enumerate()
        .filter(|(_, t)| is_perfect_square(t.magnitude()))
        .map(|(k, _)| k as u64 + 1)
        .collect())
}

/// Fibonacci numbers of the form `factor * b` with `1 <= b < cofactor_below`,
/// as `(index, value)`.
pub fn fibonacci_multiples(factor: u64, cofactor_below: u64) -> Vec<(u64, Natural)> {
    let limit = Natural::from(factor) * cofactor_below.saturating_sub(1);
    let table = TermTable::covering(Sequence::Fibonacci, &limit).expect("Fibonacci is monotone");
    table
        .by_value
        .iter()
        .filter(|(v, _)| (*v % factor).is_zero())
        .map(|(v, &i)| (i, v.clone()))
        .collect()
}
