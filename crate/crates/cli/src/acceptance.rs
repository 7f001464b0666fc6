//! The acceptance checks, one function per criterion. Each returns an
//! [`Outcome`] instead of panicking so `selftest` can report every line.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use prodset_core::arith::{primes_in_range, Natural};
use prodset_core::auxgraph::{
    build_aux_graph, build_aux_graph_with, representation_count, Assignments, GraphMode,
};
use prodset_core::coverlemma::{cover_sequence, verify_cover, Bipartite};
use prodset_core::extremal::{lucas_count_check, sharp_example};
use prodset_core::polyseq::{
    admissible_residue, window_stats, window_witness, FactoredPolynomial, Gamma, PolynomialZ,
    PrimeFilter,
};
use prodset_core::productset::{build_product_set, sequence_members, BaseSet, Member};
use prodset_core::sequences::{
    fib, fib_gcd, is_fibonacci, primitive_divisor, LucasSpec, Sequence,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, title: &'static str, passed: bool, detail: String) -> Self {
        Outcome {
            id,
            title,
            passed,
            detail,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

/// All subsets of `{1..n}` with `1 <= |B| <= k`, each ascending.
pub fn small_subsets(n: u64, k: usize) -> Vec<Vec<u64>> {
    fn go(n: u64, k: usize, next: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for x in next..=n {
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 1, &mut Vec::new(), &mut out);
    out
}

const CORPUS_UNIVERSE: u64 = 30;
const CORPUS_MAX_SIZE: usize = 5;
const CORPUS_SIZE: usize = 174_436;

fn fibonacci_members(b: &[u64]) -> (BaseSet<u64>, Vec<Member<u64>>) {
    let base = BaseSet::from_u64s(b).expect("distinct positive corpus set");
    let ps = build_product_set(&base).expect("non-empty corpus set");
    let members = sequence_members(&ps, is_fibonacci);
    (base, members)
}

/// Distinct Fibonacci products by plain iteration, sharing no code with the
/// product-set route.
fn fibonacci_count_direct(b: &[u64], fibs: &HashSet<u64>) -> usize {
    let mut found = BTreeSet::new();
    for (i, &x) in b.iter().enumerate() {
        for &y in &b[i..] {
            if fibs.contains(&(x * y)) {
                found.insert(x * y);
            }
        }
    }
    found.len()
}

fn fibonacci_u64_up_to(limit: u64) -> HashSet<u64> {
    let mut out = HashSet::new();
    let (mut a, mut b) = (1u64, 1u64);
    while a <= limit {
        out.insert(a);
        (a, b) = (b, a + b);
    }
    out
}

pub fn criterion_1() -> Outcome {
    let title = "Fibonacci numbers in B·B never exceed |B| for B ⊆ {1..30}, |B| <= 5";
    let sets = small_subsets(CORPUS_UNIVERSE, CORPUS_MAX_SIZE);
    let fibs = fibonacci_u64_up_to(CORPUS_UNIVERSE * CORPUS_UNIVERSE);
    let failures: Vec<String> = sets
        .par_iter()
        .filter_map(|b| {
            let lib = fibonacci_members(b).1.len();
            let direct = fibonacci_count_direct(b, &fibs);
            (lib != direct || lib > b.len()).then(|| format!("{b:?}: library {lib}, direct {direct}"))
        })
        .collect();
    let best = sets
        .par_iter()
        .map(|b| fibonacci_members(b).1.len() as isize - b.len() as isize)
        .max()
        .unwrap_or(0);
    let passed = sets.len() == CORPUS_SIZE && failures.is_empty();
    Outcome::new(
        1,
        title,
        passed,
        format!(
            "{} sets, max(count - |B|) = {best}, {} failures{}",
            sets.len(),
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

pub fn criterion_2() -> Outcome {
    let title = "sharp example {1, F_3..F_(k+1)} has exactly k Fibonacci products, 1 <= k <= 8";
    let mut counts = Vec::new();
    let mut passed = true;
    for k in 1..=8usize {
        let b = match sharp_example(k) {
            Ok(b) => b,
            Err(e) => return Outcome::new(2, title, false, e.to_string()),
        };
        let ps = build_product_set(&b).expect("non-empty");
        let count = sequence_members(&ps, is_fibonacci).len();
        passed &= b.len() == k && count == k;
        counts.push(count);
    }
    let top = sharp_example(8).map(|b| b.to_string()).unwrap_or_default();
    passed &= top == "{1,2,3,5,8,13,21,34}";
    Outcome::new(2, title, passed, format!("counts {counts:?}, k = 8 set {top}"))
}

pub fn criterion_3() -> Outcome {
    let title = "gcd(F_n, F_m)^2 < F_n for 1 <= m < n <= 60, n > 2";
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 3..=60u64 {
        let f_n = fib(n).expect("n >= 1");
        for m in 1..n {
            let g = fib_gcd(n, m).expect("indices >= 1");
            checked += 1;
            if &g * &g >= f_n {
                bad.push((n, m));
            }
        }
    }
    Outcome::new(3, title, bad.is_empty(), format!("{checked} pairs, violations {bad:?}"))
}

pub fn criterion_4() -> Outcome {
    let title = "gcd(F_m, F_n) = F_gcd(m,n) for m, n <= 100";
    let terms: Vec<BigUint> = (1..=100).map(|n| fib(n).expect("n >= 1")).collect();
    let mut bad = Vec::new();
    for m in 1..=100u64 {
        for n in 1..=100u64 {
            // route 1: gcd of the numbers; route 2: term at the gcd of indices
            let lhs = terms[m as usize - 1].gcd(&terms[n as usize - 1]);
            if lhs != terms[m.gcd(&n) as usize - 1] || fib_gcd(m, n).ok() != Some(lhs) {
                bad.push((m, n));
            }
        }
    }
    Outcome::new(4, title, bad.is_empty(), format!("10000 pairs, violations {bad:?}"))
}

/// Indices `n` in `2..=max` where `U_n(spec)` has no prime factor missing
/// from `U_1..U_{n-1}`, by trial division on `u128` values.
pub fn primitive_exceptions_by_trial(spec: LucasSpec, max: u64) -> Vec<u64> {
    let terms: Vec<u128> = spec
        .u_terms(max)
        .iter()
        .map(|t| t.magnitude().to_u128().expect("desk-scale term"))
        .collect();
    let prime_factors = |mut m: u128| {
        let mut ps = Vec::new();
        let mut d = 2u128;
        while d * d <= m {
            if m % d == 0 {
                ps.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            ps.push(m);
        }
        ps
    };
    (2..=max)
        .filter(|&n| {
            let earlier = &terms[..n as usize - 1];
            !prime_factors(terms[n as usize - 1])
                .into_iter()
                .any(|p| earlier.iter().all(|t| t % p != 0))
        })
        .collect()
}

fn library_exceptions(spec: LucasSpec, max: u64) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for n in 2..=max {
        match primitive_divisor(spec, n) {
            Ok(None) => out.push(n),
            Ok(Some(_)) => {}
            Err(e) => return Err(format!("n = {n}: {e}")),
        }
    }
    Ok(out)
}

/// Exceptions of `U_n(3,2) = 2^n - 1` in `2..=20`, as pinned from the
/// trial-division oracle.
pub const MERSENNE_EXCEPTIONS: [u64; 1] = [6];
pub const FIBONACCI_EXCEPTIONS: [u64; 3] = [2, 6, 12];

pub fn criterion_5() -> Outcome {
    let title = "primitive divisors: Fibonacci exceptions {2,6,12} in 2..60, U(3,2) exceptions {6} in 2..20";
    let fibs = LucasSpec::FIBONACCI;
    let mersenne = LucasSpec::new(3, 2).expect("valid pair");
    let (fib_lib, mer_lib) = match (library_exceptions(fibs, 60), library_exceptions(mersenne, 20)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(5, title, false, e),
    };
    let fib_oracle = primitive_exceptions_by_trial(fibs, 60);
    let mer_oracle = primitive_exceptions_by_trial(mersenne, 20);
    let passed = fib_lib == FIBONACCI_EXCEPTIONS
        && fib_oracle == FIBONACCI_EXCEPTIONS
        && mer_lib == mer_oracle
        && mer_oracle == MERSENNE_EXCEPTIONS;
    Outcome::new(
        5,
        title,
        passed,
        format!(
            "Fibonacci library {fib_lib:?} oracle {fib_oracle:?}; U(3,2) library {mer_lib:?} oracle {mer_oracle:?}"
        ),
    )
}

fn random_set(rng: &mut ChaCha8Rng, max: u64, size: usize) -> Vec<u64> {
    let mut s = BTreeSet::new();
    while s.len() < size {
        s.insert(rng.random_range(1..=max));
    }
    s.into_iter().collect()
}

fn lucas_numbers_u64_up_to(limit: u64) -> HashSet<u64> {
    let mut out = HashSet::new();
    let (mut a, mut b) = (1u64, 3u64);
    while a <= limit {
        out.insert(a);
        (a, b) = (b, a + b);
    }
    out
}

pub const LUCAS_SEED: u64 = 0x5eed_0006;

pub fn criterion_6() -> Outcome {
    let title = "Lucas numbers in B·B stay below 2|B| + 30; index >= 31 terms at most 2|B| - 1";
    let mut rng = ChaCha8Rng::seed_from_u64(LUCAS_SEED);
    let lucas = lucas_numbers_u64_up_to(10_000 * 10_000);
    let mut worst_margin = i64::MAX;
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let size = rng.random_range(1..=20usize);
        let b = random_set(&mut rng, 10_000, size);
        let base = BaseSet::from_u64s(&b).expect("distinct positive");
        let report = match lucas_count_check(&base, Sequence::LucasNumbers) {
            Ok(r) => r,
            Err(e) => return Outcome::new(6, title, false, e.to_string()),
        };
        let mut direct = BTreeSet::new();
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i..] {
                if lucas.contains(&(x * y)) {
                    direct.insert(x * y);
                }
            }
        }
        worst_margin = worst_margin.min(report.bound as i64 - report.count as i64);
        if !report.ok || direct.len() != report.count {
            bad.push(b);
        }
    }
    // constructed sets carrying high-index terms
    let mut constructed = 0;
    let mut high_bad = Vec::new();
    for seq in [
        Sequence::LucasNumbers,
        Sequence::Fibonacci,
        Sequence::U(LucasSpec::new(3, 2).expect("valid")),
    ] {
        for m in 1..=8u64 {
            let mut elements = vec![Natural::from(1u32)];
            for i in 31..31 + m {
                elements.push(seq.term(i).expect("i >= 1").magnitude().clone());
            }
            if m % 2 == 0 {
                elements.push(Natural::from(2u32));
            }
            let base = BaseSet::new(elements).expect("distinct");
            constructed += 1;
            match lucas_count_check(&base, seq) {
                Ok(r) if r.high_index_ok && r.ok && r.high_index_count >= m as usize => {}
                Ok(r) => high_bad.push(format!("{seq} m={m}: {}", r.high_index_count)),
                Err(e) => high_bad.push(e.to_string()),
            }
        }
    }
    Outcome::new(
        6,
        title,
        bad.is_empty() && high_bad.is_empty(),
        format!(
            "1000 random sets (seed {LUCAS_SEED:#x}), smallest bound - count = {worst_margin}, {} failures; {constructed} constructed sets, {} failures",
            bad.len(),
            high_bad.len()
        ),
    )
}

pub const ASSIGNMENT_LIMIT: u128 = 10_000;

pub fn criterion_7() -> Outcome {
    let title = "Fibonacci graph G′ minus self-loops is acyclic for every representation; loops <= 2 with values in {1, 144}";
    let sets = small_subsets(CORPUS_UNIVERSE, CORPUS_MAX_SIZE);
    let results: Vec<(u64, bool, Option<String>)> = sets
        .par_iter()
        .map(|b| {
            let (base, members) = fibonacci_members(b);
            let exhaustive = representation_count(&members) <= ASSIGNMENT_LIMIT;
            let choices: Box<dyn Iterator<Item = Vec<usize>>> = if exhaustive {
                Box::new(Assignments::new(&members))
            } else {
                Box::new(std::iter::once(vec![0; members.len()]))
            };
            let mut graphs = 0u64;
            for choice in choices {
                graphs += 1;
                let g = match build_aux_graph_with(&base, &members, GraphMode::OneClass, &choice) {
                    Ok(g) => g,
                    Err(e) => return (graphs, exhaustive, Some(format!("{b:?}: {e}"))),
                };
                let loops = g.self_loop_values();
                if g.find_cycle().is_some() {
                    return (graphs, exhaustive, Some(format!("{b:?} {choice:?}: cycle")));
                }
                if loops.len() > 2 || loops.iter().any(|v| **v != 1 && **v != 144) {
                    return (graphs, exhaustive, Some(format!("{b:?}: loops {loops:?}")));
                }
            }
            (graphs, exhaustive, None)
        })
        .collect();
    let graphs: u64 = results.iter().map(|r| r.0).sum();
    let canonical_only = results.iter().filter(|r| !r.1).count();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.2.as_ref()).collect();
    Outcome::new(
        7,
        title,
        sets.len() == CORPUS_SIZE && failures.is_empty(),
        format!(
            "{} sets, {graphs} graphs, {canonical_only} sets canonical-only, {} failures{}",
            sets.len(),
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    )
}

/// Random bipartite graph with `|B| <= 50` and every A-degree at most `n`.
pub fn random_bipartite(rng: &mut ChaCha8Rng) -> (Bipartite, usize) {
    let n = rng.random_range(1..=5usize);
    let b_count = rng.random_range(1..=50usize);
    let a_count = rng.random_range(1..=60usize);
    let mut degree = vec![0usize; a_count];
    let mut adjacency = Vec::with_capacity(b_count);
    for _ in 0..b_count {
        let want = rng.random_range(1..=4usize);
        let mut nbrs: Vec<usize> = Vec::new();
        for _ in 0..want * 3 {
            if nbrs.len() == want {
                break;
            }
            let a = rng.random_range(0..a_count);
            if degree[a] < n && !nbrs.contains(&a) {
                degree[a] += 1;
                nbrs.push(a);
            }
        }
        if nbrs.is_empty() {
            let a = (0..degree.len()).find(|&a| degree[a] < n).unwrap_or_else(|| {
                degree.push(0);
                degree.len() - 1
            });
            degree[a] += 1;
            nbrs.push(a);
        }
        adjacency.push(nbrs);
    }
    let g = Bipartite::with_degree_bound(degree.len(), adjacency, n).expect("degrees capped at n");
    (g, n)
}

pub const COVER_SEED: u64 = 0x5eed_0008;

pub fn criterion_8() -> Outcome {
    let title = "cover sequences on 500 random graphs verify and satisfy k·n >= |B|";
    let mut rng = ChaCha8Rng::seed_from_u64(COVER_SEED);
    let mut bad = 0;
    let mut min_slack = usize::MAX;
    for _ in 0..500 {
        let (g, n) = random_bipartite(&mut rng);
        let seq = cover_sequence(&g);
        if !verify_cover(&g, &seq) || seq.len() * n < g.b_count() {
            bad += 1;
        } else {
            min_slack = min_slack.min(seq.len() * n - g.b_count());
        }
    }
    Outcome::new(
        8,
        title,
        bad == 0,
        format!("seed {COVER_SEED:#x}, {bad} failures, smallest k·n - |B| = {min_slack}"),
    )
}

fn x_squared_plus_one() -> PolynomialZ {
    PolynomialZ::from_i64(&[1, 0, 1]).expect("non-zero")
}

/// `(R, residue-filtered terms, count above R)` for `x² + 1`, `r = 0`.
pub fn large_factor_count(window: u64) -> Result<(u64, usize, usize, u64), String> {
    let f = x_squared_plus_one();
    let adm = admissible_residue(&f).map_err(|e| e.to_string())?;
    let m = adm.modulus.to_u64().ok_or("modulus too large")?;
    let s = window_stats(&f, 0, window, PrimeFilter::AboveWindow, Some(&(&adm).into()))
        .map_err(|e| e.to_string())?;
    Ok((window, s.records.len(), s.above_count, m))
}

pub fn criterion_9() -> Outcome {
    let title = "x² + 1, residue 0 mod 4, R = 1000: terms with a prime factor > R number at least R/(3M)";
    let f = x_squared_plus_one();
    let adm = match admissible_residue(&f) {
        Ok(a) => a,
        Err(e) => return Outcome::new(9, title, false, e.to_string()),
    };
    let setup_ok = adm.modulus == Natural::from(4u32) && adm.residue.is_zero();
    let mut recorded = Vec::new();
    for r in [100u64, 300] {
        match large_factor_count(r) {
            Ok((r, _, c, m)) => recorded.push(format!("R={r}: {c} (R/(3M) = {:.1})", r as f64 / (3 * m) as f64)),
            Err(e) => recorded.push(format!("R={r}: {e}")),
        }
    }
    match large_factor_count(1000) {
        Ok((r, terms, count, m)) => {
            // count >= R / (3M), compared exactly
            let passed = setup_ok && count as u64 * 3 * m >= r;
            Outcome::new(
                9,
                title,
                passed,
                format!(
                    "M = {m}, a = {}, {terms} terms, count {count} vs R/(3M) = {:.2}; recorded {}",
                    adm.residue,
                    r as f64 / (3 * m) as f64,
                    recorded.join(", ")
                ),
            )
        }
        Err(e) => Outcome::new(9, title, false, e),
    }
}

pub fn criterion_10() -> Outcome {
    let title = "f = x, r = 0: terms with a prime in (R/2, R] at least the number of such primes, R in {100, 200, 400}";
    let f = PolynomialZ::from_i64(&[0, 1]).expect("non-zero");
    let mut rows = Vec::new();
    let mut passed = true;
    for r in [100u64, 200, 400] {
        let s = match window_stats(&f, 0, r, PrimeFilter::MidRange, None) {
            Ok(s) => s,
            Err(e) => return Outcome::new(10, title, false, e.to_string()),
        };
        let primes = primes_in_range(r / 2, r).len();
        passed &= s.qualifying_count() >= primes;
        rows.push(format!("R={r}: {} vs {primes}", s.qualifying_count()));
    }
    Outcome::new(10, title, passed, rows.join(", "))
}

pub fn criterion_11() -> Outcome {
    let title = "x² + 1, r = 0, R = 50: each cover element brings a fresh prime and ⌈(k+1)/2⌉ <= |{1} ∪ P(1..50)|";
    let f = x_squared_plus_one();
    let p = match FactoredPolynomial::single(f.clone()) {
        Ok(p) => p,
        Err(e) => return Outcome::new(11, title, false, e.to_string()),
    };
    let w = match window_witness(&p, 0, 50, Gamma::TWO) {
        Ok(w) => w,
        Err(e) => return Outcome::new(11, title, false, e.to_string()),
    };
    let fresh = w.first_stale_cover_element();
    let mut elements = vec![Natural::from(1u32)];
    elements.extend((1..=50u64).map(|i| f.eval_u64(i).magnitude().clone()));
    let base = BaseSet::new(elements).expect("distinct values");
    let bound_ok = w.b_lower_bound <= base.len() && w.b_lower_bound == (w.k + 2) / 2;

    // G(C′, B·B) for every representation choice
    let ps = build_product_set(&base).expect("non-empty");
    let cover_values: HashSet<Natural> = w.cover_terms().map(|t| t.value.clone()).collect();
    let members = sequence_members(&ps, |v| cover_values.contains(v).then_some(0));
    let all_present = members.len() == w.k;
    let assignments = representation_count(&members);
    let mut acyclic = true;
    if assignments <= ASSIGNMENT_LIMIT {
        for choice in Assignments::new(&members) {
            let g = build_aux_graph_with(&base, &members, GraphMode::TwoClass, &choice)
                .expect("members come from B·B");
            acyclic &= g.find_cycle().is_none();
        }
    } else {
        acyclic = build_aux_graph(&base, &members, GraphMode::TwoClass)
            .map(|g| g.find_cycle().is_none())
            .unwrap_or(false);
    }
    Outcome::new(
        11,
        title,
        fresh.is_none() && bound_ok && all_present && acyclic,
        format!(
            "case {}, |C| = {}, k = {}, bound {} <= |B| = {}, fresh primes {}, G(C′, B·B) acyclic over {assignments} representations: {acyclic}",
            w.case.number(),
            w.terms.len(),
            w.k,
            w.b_lower_bound,
            base.len(),
            fresh.map_or("ok".to_string(), |i| format!("fail at {i}")),
        ),
    )
}

pub fn all_criteria() -> [fn() -> Outcome; 11] {
    [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ]
}

pub fn run_all() -> Vec<Outcome> {
    all_criteria().iter().map(|c| c()).collect()
}
