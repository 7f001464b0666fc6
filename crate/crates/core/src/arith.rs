//! Exact integer utilities: primality, factorization, smooth parts, CRT.
//!
//! Primality is deterministic Miller-Rabin below 2^64 and below 3.3·10^24
//! (first thirteen prime bases), and Baillie-PSW above that. Factorization
//! trial-divides up to 10^6 and hands any composite cofactor to Brent's
//! variant of Pollard rho.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer as _, Roots};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;
/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Trial division stops here; larger cofactors go to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_BASES_BIG: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is undefined for zero")]
    Zero(&'static str),
    #[error("{0} has no prime factor")]
    NoPrimeFactor(Natural),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(Natural, Natural),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {residue} is not reduced modulo {modulus}")]
    UnreducedResidue { residue: Natural, modulus: Natural },
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    subject: Natural,
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    pub fn subject(&self) -> &Natural {
        &self.subject
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn largest_prime(&self) -> Option<&Natural> {
        self.factors.last().map(|(p, _)| p)
    }

    /// Multiplies the prime powers back together.
    pub fn product(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Product of the prime powers with `p <= bound`.
    pub fn smooth_part(&self, bound: &Natural) -> Natural {
        self.factors
            .iter()
            .filter(|(p, _)| p <= bound)
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of `Π part^multiplicity`.
    pub fn combine(parts: &[(&Factorization, u32)]) -> Self {
        let mut subject = Natural::one();
        let mut primes = Vec::new();
        for (f, m) in parts {
            subject *= f.subject.pow(*m);
            for (p, e) in &f.factors {
                for _ in 0..e * m {
                    primes.push(p.clone());
                }
            }
        }
        Factorization::from_primes(subject, primes)
    }

    fn from_primes(subject: Natural, mut primes: Vec<Natural>) -> Self {
        primes.sort();
        let mut factors: Vec<(Natural, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { subject, factors }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (p, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in MR_BASES_U64 {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &Natural, base: &Natural) -> bool {
    let one = Natural::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: &Integer, n: &Natural) -> i32 {
    let n_int = Integer::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("reduced residue is non-negative");
    let mut n = n.clone();
    let mut result = 1;
    let three = Natural::from(3u32);
    let five = Natural::from(5u32);
    let eight = Natural::from(8u32);
    let four = Natural::from(4u32);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = &n % &eight;
            if r == three || r == five {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if &a % &four == three && &n % &four == three {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas_big(n: &Natural) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d = Integer::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                let g = Integer::from(n.clone()).gcd(&d);
                if g != Integer::from(n.clone()) {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.sign() == Sign::Plus {
            -(d + Integer::from(2))
        } else {
            -(d - Integer::from(2))
        };
    }
    let m = Integer::from(n.clone());
    let p = Integer::one();
    let q: Integer = (Integer::one() - &d) / Integer::from(4);
    let reduce = |x: Integer| x.mod_floor(&m);
    let half = |x: Integer| {
        let x = if x.is_odd() { x + &m } else { x };
        (x / Integer::from(2)).mod_floor(&m)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;
    let bits = k.bits();

    let mut u = Integer::one();
    let mut v = p.clone();
    let mut qk = reduce(q.clone());
    for i in (0..bits - 1).rev() {
        u = reduce(&u * &v);
        v = reduce(&v * &v - &qk * Integer::from(2));
        qk = reduce(&qk * &qk);
        if k.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&d * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - &qk * Integer::from(2));
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk);
    }
    false
}

fn is_prime_big(n: &Natural) -> bool {
    for p in MR_BASES_BIG {
        if (n % p).is_zero() {
            return *n == Natural::from(p);
        }
    }
    if !MR_BASES_BIG
        .iter()
        .all(|&a| miller_rabin_big(n, &Natural::from(a)))
    {
        return false;
    }
    // The first 13 prime bases are deterministic below 3.317e24.
    let deterministic_limit = Natural::from(3_317_044_064_679_887_385_961_981u128);
    if *n < deterministic_limit {
        return true;
    }
    strong_lucas_big(n)
}

/// Returns `true` iff `n` is prime. `0` and `1` are not prime.
pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(n),
    }
}

fn pollard_brent_u64(n: u64) -> u64 {
    debug_assert!(n > 3 && n % 2 == 1);
    let f = |x: u64, c: u64| (mul_mod_u64(x, x, n) + c) % n;
    for c in 1u64.. {
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        let batch = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..batch.min(r - k) {
                    y = f(y, c);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += batch;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys, c);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("some increment c splits every odd composite")
}

fn pollard_brent_big(n: &Natural) -> Natural {
    let one = Natural::one();
    let abs_diff = |a: &Natural, b: &Natural| if a > b { a - b } else { b - a };
    let mut c = Natural::one();
    loop {
        let f = |x: &Natural| (x * x + &c) % n;
        let mut y = Natural::from(2u32);
        let mut r = 1u64;
        let mut q = Natural::one();
        let mut g = Natural::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let batch = 64u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = f(&y);
                    q = (&q * abs_diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

/// Splits a composite with no prime factor below the trial limit.
fn split_composite(n: Natural, out: &mut Vec<Natural>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    if let Some(root) = exact_root_square(&n) {
        split_composite(root.clone(), out);
        split_composite(root, out);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => Natural::from(pollard_brent_u64(small)),
        None => pollard_brent_big(&n),
    };
    let cofactor = &n / &d;
    split_composite(d, out);
    split_composite(cofactor, out);
}

fn exact_root_square(n: &Natural) -> Option<Natural> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn trial_divide_u64(mut n: u64, out: &mut Vec<Natural>) -> u64 {
    for p in [2u64, 3] {
        while n % p == 0 {
            out.push(Natural::from(p));
            n /= p;
        }
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= n {
        if n % d == 0 {
            while n % d == 0 {
                out.push(Natural::from(d));
                n /= d;
            }
            if is_prime_u64(n) {
                break;
            }
        }
        d += step;
        step = 6 - step;
    }
    n
}

fn trial_divide_big(mut n: Natural, out: &mut Vec<Natural>) -> Natural {
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if let Some(small) = n.to_u64() {
            return Natural::from(trial_divide_u64_from(small, d, out));
        }
        if (&n % d).is_zero() {
            while (&n % d).is_zero() {
                out.push(Natural::from(d));
                n /= d;
            }
            if is_prime(&n) {
                return n;
            }
        }
        d = if d < 5 { d + 1 } else { next_wheel(d) };
    }
    n
}

fn next_wheel(d: u64) -> u64 {
    if d % 6 == 5 {
        d + 2
    } else {
        d + 4
    }
}

/// Trial division resumed at `start`; small primes below it were already removed.
fn trial_divide_u64_from(n: u64, start: u64, out: &mut Vec<Natural>) -> u64 {
    if start <= 5 {
        return trial_divide_u64(n, out);
    }
    let mut n = n;
    let mut d = start;
    while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= n {
        if n % d == 0 {
            while n % d == 0 {
                out.push(Natural::from(d));
                n /= d;
            }
            if is_prime_u64(n) {
                break;
            }
        }
        d = next_wheel(d);
    }
    n
}

/// Prime factorization of `n >= 1`; `1` has an empty factor list.
pub fn factorize(n: &Natural) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero("factorize"));
    }
    let mut primes = Vec::new();
    let rest = if is_prime(n) {
        primes.push(n.clone());
        Natural::one()
    } else {
        match n.to_u64() {
            Some(small) => Natural::from(trial_divide_u64(small, &mut primes)),
            None => trial_divide_big(n.clone(), &mut primes),
        }
    };
    split_composite(rest, &mut primes);
    Ok(Factorization::from_primes(n.clone(), primes))
}

/// Largest divisor of `n` whose prime factors are all `<= bound`.
pub fn smooth_part(n: &Natural, bound: &Natural) -> Result<Natural, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero("smooth_part"));
    }
    Ok(factorize(n)?.smooth_part(bound))
}

pub fn largest_prime_factor(n: &Natural) -> Result<Natural, ArithError> {
    let f = factorize(n).map_err(|_| ArithError::NoPrimeFactor(n.clone()))?;
    f.largest_prime()
        .cloned()
        .ok_or_else(|| ArithError::NoPrimeFactor(n.clone()))
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

const SEGMENT: u64 = 1 << 16;

/// All primes `p` with `lo_exclusive < p <= hi_inclusive`, ascending.
///
/// Segmented sieve; base primes go up to `sqrt(hi_inclusive)`.
pub fn primes_in_range(lo_exclusive: u64, hi_inclusive: u64) -> Vec<u64> {
    if hi_inclusive <= lo_exclusive || hi_inclusive < 2 {
        return Vec::new();
    }
    let base = primes_up_to(hi_inclusive.sqrt());
    let mut out = Vec::new();
    let mut seg_lo = lo_exclusive.saturating_add(1).max(2);
    while seg_lo <= hi_inclusive {
        let seg_hi = seg_lo.saturating_add(SEGMENT - 1).min(hi_inclusive);
        let mut composite = vec![false; (seg_hi - seg_lo + 1) as usize];
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let first = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut m = first;
            while m <= seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(k, _)| seg_lo + k as u64),
        );
        if seg_hi == hi_inclusive {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// `floor(sqrt(n))`.
pub fn integer_sqrt(n: &Natural) -> Natural {
    n.sqrt()
}

pub fn is_perfect_square(n: &Natural) -> bool {
    let r = integer_sqrt(n);
    &r * &r == *n
}

/// Solves `x ≡ residue (mod modulus)` for every pair; the result lies in
/// `[0, Π moduli)`. An empty system has solution `0` modulo `1`.
pub fn crt_solve(congruences: &[(Natural, Natural)]) -> Result<Natural, ArithError> {
    for (residue, modulus) in congruences {
        if modulus.is_zero() {
            return Err(ArithError::ZeroModulus);
        }
        if residue >= modulus {
            return Err(ArithError::UnreducedResidue {
                residue: residue.clone(),
                modulus: modulus.clone(),
            });
        }
    }
    for (i, (_, mi)) in congruences.iter().enumerate() {
        for (_, mj) in &congruences[i + 1..] {
            if !mi.gcd(mj).is_one() {
                return Err(ArithError::NotCoprime(mi.clone(), mj.clone()));
            }
        }
    }
    let mut x = Integer::zero();
    let mut m = Integer::one();
    for (residue, modulus) in congruences {
        let r = Integer::from(residue.clone());
        let n = Integer::from(modulus.clone());
        // x + m*t ≡ r (mod n)  =>  t ≡ (r - x) * m^{-1} (mod n)
        let inv = m.extended_gcd(&n).x;
        let t = ((&r - &x) * inv).mod_floor(&n);
        x += &m * t;
        m *= n;
        x = x.mod_floor(&m);
    }
    Ok(x.to_biguint().expect("reduced CRT solution is non-negative"))
}

/// Natural logarithm of a positive integer, accurate to f64 precision.
pub fn ln_natural(n: &Natural) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 64 {
        return libm::log(n.to_u64().expect("fits in u64") as f64);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("top 64 bits");
    libm::log(top as f64) + shift as f64 * core::f64::consts::LN_2
}
