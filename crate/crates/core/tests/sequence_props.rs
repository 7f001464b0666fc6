use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use prodset_core::arith::{integer_sqrt, Natural};
use prodset_core::sequences::{
    fib, fib_gcd, fibonacci_multiples, is_fibonacci, primitive_divisor, primitive_divisor_strict,
    square_fibonacci_indices, LucasSpec, Sequence,
};

/// Iterated recurrence, independent of the fast-doubling route.
fn fib_table(n: usize) -> Vec<Natural> {
    let mut t = vec![Natural::from(0u32), Natural::from(1u32)];
    while t.len() <= n {
        let next = &t[t.len() - 1] + &t[t.len() - 2];
        t.push(next);
    }
    t
}

#[test]
fn fib_matches_recurrence() {
    let t = fib_table(300);
    for n in 1..=300u64 {
        assert_eq!(fib(n).unwrap(), t[n as usize]);
    }
    assert_eq!(fib(12).unwrap(), Natural::from(144u32));
    assert!(fib(0).is_err());
}

#[test]
fn membership_agrees_with_generation() {
    let t = fib_table(120);
    for n in 1..=80u64 {
        let expected = if n == 2 { 1 } else { n };
        assert_eq!(is_fibonacci(&t[n as usize]), Some(expected));
    }
    let limit = 100_000u64;
    for m in 1..=limit {
        let generated = t.iter().skip(1).position(|v| *v == Natural::from(m)).map(|i| i as u64 + 1);
        assert_eq!(is_fibonacci(&Natural::from(m)), generated, "{m}");
    }
}

#[test]
fn strong_divisibility_and_gcd_bound() {
    for m in 1..=100u64 {
        for n in 1..=100u64 {
            assert_eq!(fib_gcd(m, n).unwrap(), fib(m.gcd(&n)).unwrap());
        }
    }
    for n in 3..=60u64 {
        let f_n = fib(n).unwrap();
        for m in 1..n {
            let g = fib_gcd(n, m).unwrap();
            assert!(&g * &g < f_n);
            assert!(g < integer_sqrt(&f_n) + 1u32);
        }
    }
}

#[test]
fn lucas_recurrences() {
    for (p, q) in [(1i64, -1i64), (3, 2), (2, -1), (1, 2), (5, 3), (-3, 7)] {
        let spec = LucasSpec::new(p, q).unwrap();
        let u = spec.u_terms(200);
        let v = spec.v_terms(200);
        assert_eq!(u[0], BigInt::from(1));
        assert_eq!(u[1], BigInt::from(p));
        assert_eq!(v[0], BigInt::from(p));
        assert_eq!(v[1], BigInt::from(p * p - 2 * q));
        for k in 2..200 {
            assert_eq!(u[k], &u[k - 1] * p - &u[k - 2] * q);
            assert_eq!(v[k], &v[k - 1] * p - &v[k - 2] * q);
        }
    }
    let fibs = LucasSpec::FIBONACCI;
    for n in 1..=90 {
        assert_eq!(fibs.u(n).unwrap().to_biguint().unwrap(), fib(n).unwrap());
    }
    assert_eq!(Sequence::LucasNumbers.term(4).unwrap(), BigInt::from(7));
    assert_eq!(LucasSpec::new(3, 2).unwrap().u(5).unwrap(), BigInt::from(31));
    assert!(LucasSpec::new(2, 2).is_err());
    assert!(LucasSpec::new(2, 1).is_err());
}

/// Smallest primitive prime of |U_n| by trial division, sharing no code with
/// the library beyond term generation.
fn primitive_by_trial(terms: &[BigInt], n: usize, disc: Option<i64>) -> Option<u64> {
    let target = terms[n - 1].abs().to_u128()?;
    let mut m = target;
    let mut primes = Vec::new();
    let mut d = 2u128;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes.into_iter().find_map(|p| {
        let earlier = terms[..n - 1].iter().any(|t| (t.abs().to_u128().unwrap() % p) == 0);
        let in_disc = disc.is_some_and(|d| (d.unsigned_abs() as u128) % p == 0);
        (!earlier && !in_disc).then_some(p as u64)
    })
}

#[test]
fn primitive_divisors_match_trial_division() {
    let fibs = LucasSpec::FIBONACCI;
    let terms = fibs.u_terms(60);
    for n in 2..=60usize {
        let lib = primitive_divisor(fibs, n as u64).unwrap().map(|p| p.to_u64().unwrap());
        assert_eq!(lib, primitive_by_trial(&terms, n, None), "n={n}");
        let strict = primitive_divisor_strict(fibs, n as u64).unwrap().map(|p| p.to_u64().unwrap());
        assert_eq!(strict, primitive_by_trial(&terms, n, Some(5)), "strict n={n}");
    }
    let mersenne = LucasSpec::new(3, 2).unwrap();
    let terms = mersenne.u_terms(20);
    for n in 2..=20usize {
        let lib = primitive_divisor(mersenne, n as u64).unwrap().map(|p| p.to_u64().unwrap());
        assert_eq!(lib, primitive_by_trial(&terms, n, None), "n={n}");
    }
}

#[test]
fn squares_and_twelve_multiples() {
    assert_eq!(square_fibonacci_indices(60).unwrap(), [1, 2, 12]);
    assert_eq!(square_fibonacci_indices(11).unwrap(), [1, 2]);
    assert_eq!(square_fibonacci_indices(1).unwrap(), [1]);
    // no Fibonacci number equals 12b with 1 <= b < 12
    assert!(fibonacci_multiples(12, 12).is_empty());
    let t = fib_table(20);
    assert!((1..12u32).all(|b| !t.contains(&Natural::from(12 * b))));
    assert_eq!(fibonacci_multiples(12, 13), [(12, Natural::from(144u32))]);
}

proptest! {
    #[test]
    fn fib_gcd_is_strong(m in 1u64..400, n in 1u64..400) {
        prop_assert_eq!(fib_gcd(m, n).unwrap(), fib(m.gcd(&n)).unwrap());
    }

    #[test]
    fn non_fibonacci_neighbours(n in 5u64..200) {
        let f = fib(n).unwrap();
        prop_assert_eq!(is_fibonacci(&(&f + 1u32)), None);
        prop_assert_eq!(is_fibonacci(&(&f - 1u32)), None);
    }
}
