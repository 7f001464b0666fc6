//! Windows of consecutive polynomial values `P(r+1), …, P(r+R)`.
//!
//! For an irreducible `f` with content `d = gcd{f(n)}` and discriminant `D`,
//! put `M = |D|·d²`. There is a residue `a` with `gcd(f(x)/d, M) = 1` for all
//! `x ≡ a (mod M)`; [`admissible_residue`] finds the smallest one. Window
//! statistics count terms with a prime factor above `R` or in `(R/2, R]` and
//! the logarithm of the `R`-smooth part of the window product.
//!
//! [`window_witness`] turns a window into a lower bound on `|B|` for any `B`
//! with the window inside `B·B`: terms carrying a large prime form a
//! prime–term bipartite graph, its cover sequence `C′` has every element
//! bringing a prime no earlier element has, so `G(C′, B·B)` is a forest on
//! `2|B|` vertices and `|C′| <= 2|B| - 1`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{
    crt_solve, factorize, is_prime_u64, ln_natural, primes_up_to, ArithError,
    Factorization, Integer, Natural,
};
use crate::coverlemma::{cover_sequence, Bipartite, CoverError};

/// Largest prime accepted by [`root_count_mod_p`].
pub const MAX_ROOT_COUNT_PRIME: u64 = 1_000_000;
/// Largest Cauchy root bound [`positivity_shift`] will scan up to.
pub const MAX_SHIFT_SCAN: u64 = 10_000_000;
/// Default factorization budget for window terms, in bits.
pub const DEFAULT_TERM_BITS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the zero polynomial is not allowed")]
    ZeroPolynomial,
    #[error("{0} needs a polynomial of degree >= 1")]
    Constant(&'static str),
    #[error("leading coefficient must be positive")]
    NonPositiveLeading,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} exceeds the root-count limit {MAX_ROOT_COUNT_PRIME}")]
    PrimeTooLarge { p: u64 },
    #[error("no residue modulo {p}^{e} keeps f/d coprime to {p}")]
    NoAdmissibleResidue { p: Natural, e: u32 },
    #[error("root bound {bound} exceeds the shift scan limit {MAX_SHIFT_SCAN}")]
    ShiftSearch { bound: Natural },
    #[error("term {i} of the window is {value}, not positive")]
    NonPositiveTerm { i: u64, value: Integer },
    #[error("term {i} has {bits} bits, above the factorization budget of {max_bits}")]
    FactorBudget { i: u64, bits: u64, max_bits: u64 },
    #[error("factor {0} has a rational root")]
    Reducible(String),
    #[error("a factored polynomial needs at least one factor of degree >= 1")]
    NoFactors,
    #[error("factor multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("gamma = {num}/{den} must exceed 1")]
    BadGamma { num: u64, den: u64 },
    #[error("window length must be at least 1")]
    EmptyWindow,
    #[error("residue {residue} is not reduced modulo {modulus}")]
    BadResidue { residue: Natural, modulus: Natural },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Non-zero polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialZ {
    coeffs: Vec<Integer>,
}

impl PolynomialZ {
    pub fn new(mut coeffs: Vec<Integer>) -> Result<Self, PolyError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(PolynomialZ { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Integer {
        self.coeffs.last().expect("non-zero polynomial")
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_u64(&self, x: u64) -> Integer {
        self.eval(&Integer::from(x))
    }

    /// `None` for constants, whose derivative is the zero polynomial.
    pub fn derivative(&self) -> Option<PolynomialZ> {
        if self.degree() == 0 {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Integer::from(k))
            .collect();
        PolynomialZ::new(coeffs).ok()
    }

    fn mod_p(&self, p: u64) -> Vec<u64> {
        let m = Integer::from(p);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue below p"))
            .collect()
    }

    /// Coefficients joined by commas, constant term first.
    pub fn to_coefficient_string(&self) -> String {
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&alloc::format!("{c}"));
        }
        s
    }
}

impl Mul for &PolynomialZ {
    type Output = PolynomialZ;

    fn mul(self, rhs: &PolynomialZ) -> PolynomialZ {
        let mut out = vec![Integer::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialZ { coeffs: out }
    }
}

impl fmt::Display for PolynomialZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let coeff_shown = !mag.is_one() || k == 0;
            if coeff_shown {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Product of the polynomials; the empty product is `1`.
pub fn poly_product(fs: &[PolynomialZ]) -> PolynomialZ {
    let one = PolynomialZ {
        coeffs: vec![Integer::one()],
    };
    fs.iter().fold(one, |acc, f| &acc * f)
}

/// Fraction-free Gaussian elimination.
fn bareiss_determinant(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::one();
    }
    let mut negate = false;
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n): `n` shifted rows
/// of `f` then `m` shifted rows of `g`, leading coefficients first.
pub fn sylvester_matrix(f: &PolynomialZ, g: &PolynomialZ) -> Vec<Vec<Integer>> {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (shift, poly, count) in [(0usize, f, n), (0, g, m)] {
        for r in 0..count {
            let mut row = vec![Integer::zero(); size];
            for (k, c) in poly.coeffs.iter().rev().enumerate() {
                row[shift + r + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// `Res(f, g)` as the Sylvester determinant.
pub fn resultant(f: &PolynomialZ, g: &PolynomialZ) -> Integer {
    bareiss_determinant(sylvester_matrix(f, g))
}

/// `disc(f) = (-1)^{n(n-1)/2} Res(f, f′) / lead(f)`.
pub fn discriminant(f: &PolynomialZ) -> Result<Integer, PolyError> {
    let df = f.derivative().ok_or(PolyError::Constant("discriminant"))?;
    let n = f.degree();
    let res = resultant(f, &df) / f.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -res } else { res })
}

/// `gcd{f(n) : n ∈ ℕ}`, computed as `gcd(f(0), …, f(deg f))`.
pub fn content_d(f: &PolynomialZ) -> Natural {
    (0..=f.degree() as u64)
        .map(|x| f.eval_u64(x).magnitude().clone())
        .fold(Natural::zero(), |acc, v| acc.gcd(&v))
}

/// Number of roots of `f` modulo the prime `p`, by direct scan.
pub fn root_count_mod_p(f: &PolynomialZ, p: u64) -> Result<u64, PolyError> {
    if p > MAX_ROOT_COUNT_PRIME {
        return Err(PolyError::PrimeTooLarge { p });
    }
    if !is_prime_u64(p) {
        return Err(PolyError::NotPrime(p));
    }
    let c = f.mod_p(p);
    let count = (0..p)
        .filter(|&x| {
            c.iter()
                .rev()
                .fold(0u64, |acc, &a| ((acc as u128 * x as u128 + a as u128) % p as u128) as u64)
                == 0
        })
        .count();
    Ok(count as u64)
}

/// `f(x) / d`, exact.
pub fn reduced_value(f: &PolynomialZ, d: &Natural, x: &Integer) -> Integer {
    f.eval(x) / Integer::from(d.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleResidue {
    pub discriminant: Integer,
    pub content: Natural,
    /// `M = |D| · d²`.
    pub modulus: Natural,
    /// Smallest `a ∈ [0, M)` with `gcd(f(x)/d, M) = 1` whenever `x ≡ a (mod M)`.
    pub residue: Natural,
}

/// For each `p^e ∥ M` finds the least residue mod `p^e` where `p ∤ f/d`, then
/// combines them by CRT.
pub fn admissible_residue(f: &PolynomialZ) -> Result<AdmissibleResidue, PolyError> {
    let discriminant = discriminant(f)?;
    let content = content_d(f);
    let modulus = discriminant.magnitude() * &content * &content;
    let mut congruences = Vec::new();
    for (p, e) in factorize(&modulus)?.factors() {
        let pe = p.pow(*e);
        let p_int = Integer::from(p.clone());
        let mut x = Natural::zero();
        let found = loop {
            if x >= pe {
                break None;
            }
            let v = reduced_value(f, &content, &Integer::from(x.clone()));
            if !v.mod_floor(&p_int).is_zero() {
                break Some(x);
            }
            x += 1u32;
        };
        let a_p = found.ok_or_else(|| PolyError::NoAdmissibleResidue {
            p: p.clone(),
            e: *e,
        })?;
        congruences.push((a_p, pe));
    }
    let residue = crt_solve(&congruences)?;
    Ok(AdmissibleResidue {
        discriminant,
        content,
        modulus,
        residue,
    })
}

/// Upper bound on the real roots: `1 + ceil(max |a_i| / |a_n|)`.
fn cauchy_bound(f: &PolynomialZ) -> Natural {
    let lead = f.leading().magnitude().clone();
    let max = f.coeffs[..f.degree()]
        .iter()
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap_or_default();
    Natural::one() + max.div_ceil(&lead)
}

/// Smallest `l >= 0` with `P(x + l) > 0` and `P′(x + l) > 0` for every
/// integer `x >= 1`.
pub fn positivity_shift(p: &PolynomialZ) -> Result<u64, PolyError> {
    if !p.leading().is_positive() {
        return Err(PolyError::NonPositiveLeading);
    }
    let dp = p.derivative().ok_or(PolyError::Constant("positivity_shift"))?;
    if p.degree() == 1 {
        // P(n) = a n + b <= 0  iff  n <= -b / a
        let (b, a) = (&p.coeffs[0], &p.coeffs[1]);
        let last_bad = (-b).div_floor(a);
        return Ok(last_bad.to_u64().unwrap_or(0));
    }
    let bound = cauchy_bound(p).max(cauchy_bound(&dp));
    let scan = bound
        .to_u64()
        .filter(|&b| b <= MAX_SHIFT_SCAN)
        .ok_or(PolyError::ShiftSearch { bound })?;
    let mut last_bad = 0u64;
    for n in 1..=scan {
        let x = Integer::from(n);
        if !p.eval(&x).is_positive() || !dp.eval(&x).is_positive() {
            last_bad = n;
        }
    }
    Ok(last_bad)
}

/// The constants attached to one irreducible factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSetup {
    pub f: PolynomialZ,
    pub content: Natural,
    pub discriminant: Integer,
    pub modulus: Natural,
    pub residue: Natural,
    pub shift: u64,
    /// `ρ(p)` for every prime `p` up to the requested limit.
    pub rho: BTreeMap<u64, u64>,
}

impl WindowSetup {
    pub fn new(f: &PolynomialZ, rho_limit: u64) -> Result<Self, PolyError> {
        let adm = admissible_residue(f)?;
        let shift = positivity_shift(f)?;
        let mut rho = BTreeMap::new();
        for p in primes_up_to(rho_limit.min(MAX_ROOT_COUNT_PRIME)) {
            rho.insert(p, root_count_mod_p(f, p)?);
        }
        Ok(WindowSetup {
            f: f.clone(),
            content: adm.content,
            discriminant: adm.discriminant,
            modulus: adm.modulus,
            residue: adm.residue,
            shift,
            rho,
        })
    }

    /// `f(x) / d`.
    pub fn reduced(&self, x: &Integer) -> Integer {
        reduced_value(&self.f, &self.content, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimeFilter {
    /// Some prime factor `> R`.
    AboveWindow,
    /// Some prime factor in `(R/2, R]`.
    MidRange,
}

/// Keep only `x ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFilter {
    pub residue: Natural,
    pub modulus: Natural,
}

impl ResidueFilter {
    pub fn new(residue: Natural, modulus: Natural) -> Result<Self, PolyError> {
        if modulus.is_zero() || residue >= modulus {
            return Err(PolyError::BadResidue { residue, modulus });
        }
        Ok(ResidueFilter { residue, modulus })
    }
}

impl From<&AdmissibleResidue> for ResidueFilter {
    fn from(a: &AdmissibleResidue) -> Self {
        ResidueFilter {
            residue: a.residue.clone(),
            modulus: a.modulus.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRecord {
    pub i: u64,
    pub value: Natural,
    /// `None` for the value 1.
    pub largest_prime_factor: Option<Natural>,
    /// Largest divisor of `value` with every prime factor `<= R`.
    pub smooth_part: Natural,
    pub above: bool,
    pub mid: bool,
    /// Per the filter the window was computed with.
    pub qualifies: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowStats {
    pub r: u64,
    pub window: u64,
    pub filter: PrimeFilter,
    /// `d` when terms were divided by the content (residue-filtered windows),
    /// else 1.
    pub content: Natural,
    pub records: Vec<TermRecord>,
    pub above_count: usize,
    pub mid_count: usize,
    /// `Σ ln(smooth part)` over the recorded terms.
    pub log_smooth: f64,
}

impl WindowStats {
    pub fn qualifying_count(&self) -> usize {
        match self.filter {
            PrimeFilter::AboveWindow => self.above_count,
            PrimeFilter::MidRange => self.mid_count,
        }
    }

    /// `above_count / R`.
    pub fn above_ratio(&self) -> f64 {
        self.above_count as f64 / self.window as f64
    }
}

fn check_budget(i: u64, value: &Natural, max_bits: u64) -> Result<(), PolyError> {
    let bits = value.bits();
    if bits > max_bits {
        return Err(PolyError::FactorBudget { i, bits, max_bits });
    }
    Ok(())
}

fn in_mid_range(p: &Natural, window: u64) -> bool {
    let w = Natural::from(window);
    p * 2u32 > w && *p <= w
}

/// Factors every window term and collects the counts.
///
/// Without a residue filter the terms are `f(r+i)`, `1 <= i <= R`. With one,
/// only `r+i ≡ a (mod M)` is kept and terms are `f(r+i)/d`.
pub fn window_stats(
    f: &PolynomialZ,
    r: u64,
    window: u64,
    filter: PrimeFilter,
    residue: Option<&ResidueFilter>,
) -> Result<WindowStats, PolyError> {
    window_stats_with_budget(f, r, window, filter, residue, DEFAULT_TERM_BITS)
}

pub fn window_stats_with_budget(
    f: &PolynomialZ,
    r: u64,
    window: u64,
    filter: PrimeFilter,
    residue: Option<&ResidueFilter>,
    max_bits: u64,
) -> Result<WindowStats, PolyError> {
    if window == 0 {
        return Err(PolyError::EmptyWindow);
    }
    let content = if residue.is_some() {
        content_d(f)
    } else {
        Natural::one()
    };
    let bound = Natural::from(window);
    let mut records = Vec::new();
    let mut log_smooth = 0.0;
    for i in 1..=window {
        let x = Natural::from(r) + i;
        if let Some(rf) = residue {
            if &x % &rf.modulus != rf.residue {
                continue;
            }
        }
        let v = reduced_value(f, &content, &Integer::from(x));
        let value = v
            .to_biguint()
            .filter(|v| !v.is_zero())
            .ok_or(PolyError::NonPositiveTerm { i, value: v })?;
        check_budget(i, &value, max_bits)?;
        let fac = factorize(&value)?;
        let largest = fac.largest_prime().cloned();
        let above = largest.as_ref().is_some_and(|p| *p > bound);
        let mid = fac.primes().any(|p| in_mid_range(p, window));
        let smooth_part = fac.smooth_part(&bound);
        log_smooth += ln_natural(&smooth_part);
        let qualifies = match filter {
            PrimeFilter::AboveWindow => above,
            PrimeFilter::MidRange => mid,
        };
        records.push(TermRecord {
            i,
            value,
            largest_prime_factor: largest,
            smooth_part,
            above,
            mid,
            qualifies,
        });
    }
    Ok(WindowStats {
        r,
        window,
        filter,
        content,
        above_count: records.iter().filter(|t| t.above).count(),
        mid_count: records.iter().filter(|t| t.mid).count(),
        records,
        log_smooth,
    })
}

/// `γ = num / den > 1`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gamma {
    num: u64,
    den: u64,
}

impl Gamma {
    pub const TWO: Gamma = Gamma { num: 2, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, PolyError> {
        if den == 0 || num <= den {
            return Err(PolyError::BadGamma { num, den });
        }
        let g = num_integer::gcd(num, den);
        Ok(Gamma {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `r > R^γ`, decided exactly as `r^den > R^num`.
    pub fn below(&self, window: u64, r: u64) -> bool {
        let lhs = Natural::from(r).pow(self.den as u32);
        let rhs = Natural::from(window).pow(self.num as u32);
        lhs > rhs
    }

    /// `(γ - 1) / (2γ)`, the proportion of large-prime terms expected for
    /// linear polynomials far from the origin.
    pub fn linear_far_target(&self) -> f64 {
        let g = self.as_f64();
        (g - 1.0) / (2.0 * g)
    }
}

impl Default for Gamma {
    fn default() -> Self {
        Gamma::TWO
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Divisors of `n > 0`.
fn divisors(n: &Natural) -> Result<Vec<Natural>, PolyError> {
    let mut out = vec![Natural::one()];
    for (p, e) in factorize(n)?.factors() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = Natural::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Whether `f` has a rational root, by the rational root test.
pub fn has_rational_root(f: &PolynomialZ) -> Result<bool, PolyError> {
    if f.coeffs[0].is_zero() {
        return Ok(true);
    }
    let n = f.degree();
    let nums = divisors(f.coeffs[0].magnitude())?;
    let dens = divisors(f.leading().magnitude())?;
    for q in &dens {
        for p in &nums {
            if !p.gcd(q).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let p = Integer::from(p.clone()) * sign;
                let q = Integer::from(q.clone());
                // Σ a_k p^k q^{n-k}
                let mut total = Integer::zero();
                for (k, a) in f.coeffs.iter().enumerate() {
                    total += a * p.pow(k as u32) * q.pow((n - k) as u32);
                }
                if total.is_zero() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// `P = Π f_j^{m_j}` with each `f_j` of degree >= 1. Factors of degree 2 and
/// 3 are checked for irreducibility over ℚ; higher degrees are trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPolynomial {
    factors: Vec<(PolynomialZ, u32)>,
}

impl FactoredPolynomial {
    pub fn new(factors: Vec<(PolynomialZ, u32)>) -> Result<Self, PolyError> {
        if factors.is_empty() {
            return Err(PolyError::NoFactors);
        }
        for (f, m) in &factors {
            if *m == 0 {
                return Err(PolyError::ZeroMultiplicity);
            }
            if f.degree() == 0 {
                return Err(PolyError::NoFactors);
            }
            if (2..=3).contains(&f.degree()) && has_rational_root(f)? {
                return Err(PolyError::Reducible(alloc::format!("{f}")));
            }
        }
        let fp = FactoredPolynomial { factors };
        if !fp.expand().leading().is_positive() {
            return Err(PolyError::NonPositiveLeading);
        }
        Ok(fp)
    }

    pub fn single(f: PolynomialZ) -> Result<Self, PolyError> {
        Self::new(vec![(f, 1)])
    }

    pub fn factors(&self) -> &[(PolynomialZ, u32)] {
        &self.factors
    }

    pub fn expand(&self) -> PolynomialZ {
        self.factors.iter().fold(poly_product(&[]), |acc, (f, m)| {
            (0..*m).fold(acc, |acc, _| &acc * f)
        })
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| f.degree() * *m as usize)
            .sum()
    }

    pub fn has_nonlinear_factor(&self) -> bool {
        self.factors.iter().any(|(f, _)| f.degree() >= 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessCase {
    /// Some irreducible factor of degree >= 2; primes above `R`.
    Nonlinear,
    /// Linear factors only and `r > R^γ`; primes above `R`.
    LinearFar,
    /// Linear factors only and `r <= R^γ`; primes in `(R/2, R]`.
    LinearNear,
}

impl WitnessCase {
    pub fn number(&self) -> u8 {
        match self {
            WitnessCase::Nonlinear => 1,
            WitnessCase::LinearFar => 2,
            WitnessCase::LinearNear => 3,
        }
    }

    pub fn filter(&self) -> PrimeFilter {
        match self {
            WitnessCase::Nonlinear | WitnessCase::LinearFar => PrimeFilter::AboveWindow,
            WitnessCase::LinearNear => PrimeFilter::MidRange,
        }
    }
}

/// A window term carrying at least one qualifying prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    pub i: u64,
    pub value: Natural,
    pub factorization: Factorization,
    /// Qualifying primes dividing the term, ascending.
    pub qualifying_primes: Vec<Natural>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub case: WitnessCase,
    pub r: u64,
    pub window: u64,
    pub gamma: Gamma,
    pub degree: usize,
    /// The set `C`, ascending by `i`.
    pub terms: Vec<WitnessTerm>,
    /// The set `A` of qualifying primes, ascending.
    pub primes: Vec<Natural>,
    /// Largest number of `C` terms one prime of `A` divides.
    pub max_prime_degree: usize,
    /// `C′` as indices into `terms`, in cover order.
    pub cover: Vec<usize>,
    pub k: usize,
    /// `ceil((k + 1) / 2)`, from `k <= 2|B| - 1`.
    pub b_lower_bound: usize,
}

impl Witness {
    pub fn cover_terms(&self) -> impl Iterator<Item = &WitnessTerm> + '_ {
        self.cover.iter().map(|&c| &self.terms[c])
    }

    /// Position in `C′` of the first element with no prime factor missing
    /// from every earlier element, checked from the full factorizations.
    pub fn first_stale_cover_element(&self) -> Option<usize> {
        let chosen: Vec<&WitnessTerm> = self.cover_terms().collect();
        (0..chosen.len()).find(|&pos| {
            let earlier = &chosen[..pos];
            !chosen[pos]
                .factorization
                .primes()
                .any(|p| earlier.iter().all(|e| !(&e.value % p).is_zero()))
        })
    }

    pub fn has_fresh_primes(&self) -> bool {
        self.first_stale_cover_element().is_none()
    }
}

/// Builds `C`, `A`, the prime–term graph and its cover `C′` for the window
/// `P(r+1), …, P(r+R)`, with term factorizations capped at [`DEFAULT_TERM_BITS`]
/// per irreducible factor value.
pub fn window_witness(
    p: &FactoredPolynomial,
    r: u64,
    window: u64,
    gamma: Gamma,
) -> Result<Witness, PolyError> {
    window_witness_with_budget(p, r, window, gamma, DEFAULT_TERM_BITS)
}

pub fn window_witness_with_budget(
    p: &FactoredPolynomial,
    r: u64,
    window: u64,
    gamma: Gamma,
    max_bits: u64,
) -> Result<Witness, PolyError> {
    if window == 0 {
        return Err(PolyError::EmptyWindow);
    }
    let case = if p.has_nonlinear_factor() {
        WitnessCase::Nonlinear
    } else if gamma.below(window, r) {
        WitnessCase::LinearFar
    } else {
        WitnessCase::LinearNear
    };
    let bound = Natural::from(window);
    let qualifies = |q: &Natural| match case.filter() {
        PrimeFilter::AboveWindow => *q > bound,
        PrimeFilter::MidRange => in_mid_range(q, window),
    };

    let mut terms = Vec::new();
    for i in 1..=window {
        let x = Integer::from(r) + i;
        let mut sign_negative = false;
        let mut parts = Vec::with_capacity(p.factors().len());
        for (f, m) in p.factors() {
            let v = f.eval(&x);
            if v.is_zero() {
                return Err(PolyError::NonPositiveTerm {
                    i,
                    value: Integer::zero(),
                });
            }
            if v.is_negative() && m % 2 == 1 {
                sign_negative = !sign_negative;
            }
            let mag = v.magnitude().clone();
            check_budget(i, &mag, max_bits)?;
            parts.push((factorize(&mag)?, *m));
        }
        if sign_negative {
            return Err(PolyError::NonPositiveTerm {
                i,
                value: p.expand().eval(&x),
            });
        }
        let refs: Vec<(&Factorization, u32)> = parts.iter().map(|(f, m)| (f, *m)).collect();
        let factorization = Factorization::combine(&refs);
        let qualifying_primes: Vec<Natural> =
            factorization.primes().filter(|q| qualifies(q)).cloned().collect();
        if qualifying_primes.is_empty() {
            continue;
        }
        terms.push(WitnessTerm {
            i,
            value: factorization.subject().clone(),
            factorization,
            qualifying_primes,
        });
    }

    let mut primes: Vec<Natural> = terms
        .iter()
        .flat_map(|t| t.qualifying_primes.iter().cloned())
        .collect();
    primes.sort();
    primes.dedup();
    let adjacency: Vec<Vec<usize>> = terms
        .iter()
        .map(|t| {
            t.qualifying_primes
                .iter()
                .map(|q| primes.binary_search(q).expect("prime collected above"))
                .collect()
        })
        .collect();
    let graph = Bipartite::new(primes.len(), adjacency)?;
    let mut prime_degree = vec![0usize; primes.len()];
    for b in 0..graph.b_count() {
        for &a in graph.neighbours(b) {
            prime_degree[a] += 1;
        }
    }
    let cover = cover_sequence(&graph);
    let k = cover.len();
    Ok(Witness {
        case,
        r,
        window,
        gamma,
        degree: p.degree(),
        terms,
        primes,
        max_prime_degree: prime_degree.into_iter().max().unwrap_or(0),
        cover,
        k,
        b_lower_bound: (k + 2) / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> PolynomialZ {
        PolynomialZ::from_i64(c).unwrap()
    }

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    /// Leibniz expansion: sum over permutations.
    fn leibniz_det(m: &[Vec<Integer>]) -> Integer {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let term = (0..n).fold(Integer::one(), |acc, i| acc * &m[i][p[i]]);
                if inversions % 2 == 1 {
                    -term
                } else {
                    term
                }
            })
            .sum()
    }

    #[test]
    fn basic_arithmetic() {
        let f = poly(&[1, 0, 1]);
        assert_eq!(f.eval(&int(3)), int(10));
        assert_eq!(f.derivative().unwrap(), poly(&[0, 2]));
        assert_eq!(poly_product(&[poly(&[0, 1]), poly(&[1, 1])]), poly(&[0, 1, 1]));
        assert_eq!(poly(&[5]).derivative(), None);
        assert_eq!(PolynomialZ::from_i64(&[0, 0]), Err(PolyError::ZeroPolynomial));
        assert_eq!(poly(&[1, 0, 0]).degree(), 0);
        assert_eq!(alloc::format!("{}", poly(&[1, 0, 1])), "x^2 + 1");
        assert_eq!(alloc::format!("{}", poly(&[0, -6, 1])), "x^2 - 6x");
        assert_eq!(alloc::format!("{}", poly(&[-10, 1])), "x - 10");
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&poly(&[1, 0, 1])).unwrap(), int(-4));
        assert_eq!(discriminant(&poly(&[6, -5, 1])).unwrap(), int(1));
        let cubic = poly(&[0, -1, 0, 1]);
        let oracle = leibniz_det(&sylvester_matrix(&cubic, &cubic.derivative().unwrap()));
        assert_eq!(oracle, int(-4));
        assert_eq!(discriminant(&cubic).unwrap(), int(4));
        assert_eq!(discriminant(&poly(&[3, 2])).unwrap(), int(1));
        assert_eq!(discriminant(&poly(&[3])), Err(PolyError::Constant("discriminant")));
    }

    #[test]
    fn discriminant_matches_root_differences() {
        // monic with integer roots: disc = Π_{i<j} (r_i - r_j)^2
        for roots in [vec![1i64, 2, 3], vec![-2, 0, 5, 7], vec![3, -1], vec![0, 1, 4, 9, -3]] {
            let f = poly_product(
                &roots.iter().map(|&r| poly(&[-r, 1])).collect::<Vec<_>>(),
            );
            let mut expected = Integer::one();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    expected *= int((roots[i] - roots[j]).pow(2));
                }
            }
            assert_eq!(discriminant(&f).unwrap(), expected, "roots {roots:?}");
        }
        // quadratics against b^2 - 4ac
        for (a, b, c) in [(2i64, 3, 5), (-3, 7, 1), (5, 0, -2), (1, 1, 1)] {
            assert_eq!(discriminant(&poly(&[c, b, a])).unwrap(), int(b * b - 4 * a * c));
        }
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let f = poly(&[3, -2, 0, 5, 1]);
        let g = poly(&[-1, 4, 2]);
        let s = sylvester_matrix(&f, &g);
        assert_eq!(bareiss_determinant(s.clone()), leibniz_det(&s));
        let s = sylvester_matrix(&g, &f.derivative().unwrap());
        assert_eq!(bareiss_determinant(s.clone()), leibniz_det(&s));
    }

    #[test]
    fn contents() {
        assert_eq!(content_d(&poly(&[0, 1, 1])), Natural::from(2u32));
        assert_eq!(content_d(&poly(&[1, 0, 1])), Natural::one());
        assert_eq!(content_d(&poly(&[4, 2])), Natural::from(2u32));
        for f in [poly(&[0, 1, 1]), poly(&[0, -1, 0, 1]), poly(&[6, 11, 6, 1]), poly(&[2, 0, 6])] {
            let over_values = (1..=1000u64)
                .map(|x| f.eval_u64(x).magnitude().clone())
                .fold(Natural::zero(), |a, v| a.gcd(&v));
            assert_eq!(content_d(&f), over_values);
        }
    }

    #[test]
    fn root_counts() {
        let f = poly(&[1, 0, 1]);
        assert_eq!(root_count_mod_p(&f, 5).unwrap(), 2);
        assert_eq!(root_count_mod_p(&f, 3).unwrap(), 0);
        assert_eq!(root_count_mod_p(&f, 2).unwrap(), 1);
        assert_eq!(root_count_mod_p(&f, 4), Err(PolyError::NotPrime(4)));
        assert!(matches!(
            root_count_mod_p(&f, 1_000_003),
            Err(PolyError::PrimeTooLarge { .. })
        ));
    }

    fn full_period_ok(f: &PolynomialZ, adm: &AdmissibleResidue) -> bool {
        let m = adm.modulus.to_u64().unwrap();
        let a = adm.residue.to_u64().unwrap();
        (0..m.min(10_000)).all(|t| {
            let x = Integer::from(a + t * m);
            reduced_value(f, &adm.content, &x)
                .magnitude()
                .gcd(&adm.modulus)
                .is_one()
        })
    }

    #[test]
    fn admissible_residues() {
        let f = poly(&[1, 0, 1]);
        let adm = admissible_residue(&f).unwrap();
        assert_eq!(adm.modulus, Natural::from(4u32));
        assert_eq!(adm.residue, Natural::zero());
        assert!(full_period_ok(&f, &adm));

        let f = poly(&[1, 1, 1]);
        let adm = admissible_residue(&f).unwrap();
        assert_eq!(adm.modulus, Natural::from(3u32));
        // oracle: full scan of residues mod 3
        let smallest = (0..3u64)
            .find(|&a| f.eval_u64(a).mod_floor(&int(3)) != int(0))
            .unwrap();
        assert_eq!(adm.residue, Natural::from(smallest));

        // x^2 + x + 2: d = 2, D = -7, M = 28
        let f = poly(&[2, 1, 1]);
        let adm = admissible_residue(&f).unwrap();
        assert_eq!(adm.content, Natural::from(2u32));
        assert_eq!(adm.modulus, Natural::from(28u32));
        assert!(full_period_ok(&f, &adm));

        for f in [poly(&[3, 0, 2, 1]), poly(&[-5, 0, 3]), poly(&[1, 1, 0, 0, 1]), poly(&[6, 0, 6])] {
            let adm = admissible_residue(&f).unwrap();
            assert!(full_period_ok(&f, &adm), "{f}");
        }
    }

    #[test]
    fn shifts() {
        assert_eq!(positivity_shift(&poly(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(positivity_shift(&poly(&[-10, 1])).unwrap(), 10);
        assert_eq!(positivity_shift(&poly(&[0, -6, 1])).unwrap(), 6);
        assert_eq!(positivity_shift(&poly(&[1, -1])), Err(PolyError::NonPositiveLeading));
        assert_eq!(positivity_shift(&poly(&[4])), Err(PolyError::Constant("positivity_shift")));
        // integer-scan oracle over a generous range
        for f in [poly(&[0, -6, 1]), poly(&[30, -31, 1]), poly(&[5, -20, 0, 1]), poly(&[-7, 3]), poly(&[100, -3, -4, 1])] {
            let df = f.derivative().unwrap();
            let l = positivity_shift(&f).unwrap();
            let good = |l: u64| {
                (1..2000u64).all(|x| {
                    f.eval_u64(x + l).is_positive() && df.eval_u64(x + l).is_positive()
                })
            };
            assert!(good(l), "{f}");
            assert!(l == 0 || !good(l - 1), "{f}");
        }
    }

    #[test]
    fn window_examples() {
        let x = poly(&[0, 1]);
        let s = window_stats(&x, 0, 10, PrimeFilter::AboveWindow, None).unwrap();
        assert_eq!(s.qualifying_count(), 0);
        let s = window_stats(&x, 0, 10, PrimeFilter::MidRange, None).unwrap();
        assert_eq!(s.qualifying_count(), 1);
        let q: Vec<u64> = s.records.iter().filter(|t| t.qualifies).map(|t| t.i).collect();
        assert_eq!(q, [7]);
        assert_eq!(s.records[0].largest_prime_factor, None);

        let f = poly(&[1, 0, 1]);
        let adm = admissible_residue(&f).unwrap();
        let s = window_stats(&f, 0, 50, PrimeFilter::AboveWindow, Some(&(&adm).into())).unwrap();
        assert_eq!(s.records.len(), 12);
        assert!(s.records.iter().all(|t| t.i % 4 == 0));
        // direct oracle: count x = 4,8,...,48 with x^2+1 having a prime > 50
        let oracle = (1..=12u64)
            .filter(|t| {
                let v = 16 * t * t + 1;
                let mut n = v;
                let mut largest = 1;
                let mut d = 2;
                while d * d <= n {
                    while n % d == 0 {
                        largest = d;
                        n /= d;
                    }
                    d += 1;
                }
                if n > 1 {
                    largest = n;
                }
                largest > 50
            })
            .count();
        assert_eq!(s.above_count, oracle);
    }

    #[test]
    fn smooth_and_rough_parts_rebuild_the_window() {
        let f = poly(&[1, 1, 1]);
        let s = window_stats(&f, 17, 60, PrimeFilter::AboveWindow, None).unwrap();
        let mut product = Natural::one();
        let mut smooth = Natural::one();
        let mut rough = Natural::one();
        let mut log_sum = 0.0;
        for t in &s.records {
            assert!((&t.value % &t.smooth_part).is_zero());
            let rough_part = &t.value / &t.smooth_part;
            assert!(factorize(&rough_part).unwrap().primes().all(|p| *p > Natural::from(60u32)));
            product *= &t.value;
            smooth *= &t.smooth_part;
            rough *= rough_part;
            log_sum += ln_natural(&t.smooth_part);
        }
        assert_eq!(smooth * rough, product);
        assert!((s.log_smooth - log_sum).abs() < 1e-9);
    }

    #[test]
    fn window_errors() {
        let f = poly(&[-10, 1]);
        assert!(matches!(
            window_stats(&f, 0, 20, PrimeFilter::AboveWindow, None),
            Err(PolyError::NonPositiveTerm { i: 1, .. })
        ));
        assert_eq!(
            window_stats(&f, 0, 0, PrimeFilter::AboveWindow, None).unwrap_err(),
            PolyError::EmptyWindow
        );
        let big = poly(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(
            window_stats(&big, 100_000, 3, PrimeFilter::AboveWindow, None),
            Err(PolyError::FactorBudget { .. })
        ));
        assert!(ResidueFilter::new(Natural::from(4u32), Natural::from(4u32)).is_err());
    }

    #[test]
    fn gamma_split() {
        let g = Gamma::TWO;
        assert!(g.below(20, 1_000_000));
        assert!(!g.below(20, 400));
        assert!(g.below(20, 401));
        let g = Gamma::new(3, 2).unwrap();
        assert!(!g.below(4, 8));
        assert!(g.below(4, 9));
        assert!(Gamma::new(1, 1).is_err());
        assert!(Gamma::new(3, 0).is_err());
        assert!((Gamma::TWO.linear_far_target() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn factored_polynomials() {
        assert!(FactoredPolynomial::single(poly(&[1, 0, 1])).is_ok());
        assert!(matches!(
            FactoredPolynomial::single(poly(&[-1, 0, 1])),
            Err(PolyError::Reducible(_))
        ));
        assert!(matches!(
            FactoredPolynomial::single(poly(&[-2, 1, 3])),
            Err(PolyError::Reducible(_))
        ));
        assert!(matches!(
            FactoredPolynomial::single(poly(&[-2, 0, 0, 1])),
            Ok(_)
        ));
        assert!(matches!(
            FactoredPolynomial::single(poly(&[-8, 0, 0, 1])),
            Err(PolyError::Reducible(_))
        ));
        let p = FactoredPolynomial::new(vec![(poly(&[0, 1]), 2), (poly(&[1, 1]), 1)]).unwrap();
        assert_eq!(p.expand(), poly(&[0, 0, 1, 1]));
        assert_eq!(p.degree(), 3);
        assert!(!p.has_nonlinear_factor());
        assert_eq!(
            FactoredPolynomial::new(vec![(poly(&[0, -1]), 1)]),
            Err(PolyError::NonPositiveLeading)
        );
        assert_eq!(FactoredPolynomial::new(vec![]), Err(PolyError::NoFactors));
        assert_eq!(
            FactoredPolynomial::new(vec![(poly(&[0, 1]), 0)]),
            Err(PolyError::ZeroMultiplicity)
        );
    }

    #[test]
    fn witness_cases() {
        let x = FactoredPolynomial::single(poly(&[0, 1])).unwrap();
        let w = window_witness(&x, 0, 10, Gamma::TWO).unwrap();
        assert_eq!(w.case, WitnessCase::LinearNear);
        assert_eq!(w.terms.len(), 1);
        assert_eq!(w.terms[0].value, Natural::from(7u32));
        assert_eq!((w.k, w.b_lower_bound), (1, 1));
        assert!(w.has_fresh_primes());

        let f = FactoredPolynomial::single(poly(&[1, 0, 1])).unwrap();
        let w = window_witness(&f, 0, 30, Gamma::TWO).unwrap();
        assert_eq!(w.case, WitnessCase::Nonlinear);
        assert!(w.k >= 1 && w.has_fresh_primes());
        assert!(w.k * w.max_prime_degree >= w.terms.len());
        assert_eq!(w.b_lower_bound, (w.k + 2) / 2);

        let w = window_witness(&x, 1_000_000, 20, Gamma::TWO).unwrap();
        assert_eq!(w.case, WitnessCase::LinearFar);
        // linear: each prime > 20 divides at most one of 20 consecutive terms
        assert_eq!(w.max_prime_degree, 1);
        assert_eq!(w.k, w.terms.len());
    }

    #[test]
    fn non_positive_witness_window() {
        let p = FactoredPolynomial::single(poly(&[-5, 1])).unwrap();
        assert!(matches!(
            window_witness(&p, 0, 10, Gamma::TWO),
            Err(PolyError::NonPositiveTerm { .. })
        ));
        // a square of a negative factor is fine
        let p = FactoredPolynomial::new(vec![(poly(&[-50, 1]), 2)]).unwrap();
        assert!(window_witness(&p, 0, 10, Gamma::TWO).is_ok());
    }

    #[test]
    fn setup_bundle() {
        let s = WindowSetup::new(&poly(&[1, 0, 1]), 30).unwrap();
        assert_eq!(s.modulus, Natural::from(4u32));
        assert_eq!(s.shift, 0);
        assert_eq!(s.rho[&5], 2);
        assert_eq!(s.rho[&13], 2);
        assert_eq!(s.rho[&7], 0);
        assert_eq!(s.reduced(&int(3)), int(10));
    }
}
