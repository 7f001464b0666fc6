//! Flag value parsers.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use prodset_core::polyseq::{FactoredPolynomial, Gamma, PolynomialZ};
use prodset_core::productset::BaseSet;
use prodset_core::sequences::{LucasSpec, Sequence};
use prodset_core::Natural;

use crate::error::CliError;
use num_rational::BigRational;

/// A base set given on the command line: plain integers unless some element
/// is written as a fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberSet {
    Integers(BaseSet<Natural>),
    Rationals(BaseSet<BigRational>),
}

impl NumberSet {
    pub fn len(&self) -> usize {
        match self {
            NumberSet::Integers(b) => b.len(),
            NumberSet::Rationals(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn bad(what: &str, s: &str) -> CliError {
    CliError::Input(format!("cannot parse {what} from {s:?}"))
}

fn items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// `"1,3,4,7"` or `"1/2,2,16"`.
pub fn parse_set(s: &str) -> Result<NumberSet, CliError> {
    let parts: Vec<&str> = items(s).collect();
    if parts.is_empty() {
        return Err(CliError::Input("the set is empty".into()));
    }
    if parts.iter().any(|p| p.contains('/')) {
        let mut values = Vec::with_capacity(parts.len());
        for p in parts {
            let (n, d) = p.split_once('/').unwrap_or((p, "1"));
            let n = BigInt::from_str(n.trim()).map_err(|_| bad("a rational", p))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad("a rational", p))?;
            if d.is_zero() {
                return Err(bad("a rational", p));
            }
            values.push(BigRational::new(n, d));
        }
        Ok(NumberSet::Rationals(BaseSet::new(values)?))
    } else {
        let values = parts
            .into_iter()
            .map(|p| BigUint::from_str(p).map_err(|_| bad("a positive integer", p)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NumberSet::Integers(BaseSet::new(values)?))
    }
}

fn parse_pair(s: &str) -> Result<LucasSpec, CliError> {
    let (p, q) = s.split_once(',').ok_or_else(|| bad("a Lucas pair P,Q", s))?;
    let p = p.trim().parse().map_err(|_| bad("a Lucas pair P,Q", s))?;
    let q = q.trim().parse().map_err(|_| bad("a Lucas pair P,Q", s))?;
    Ok(LucasSpec::new(p, q)?)
}

/// `fib`, `lucasV`, `lucasU:P,Q` or `lucasV:P,Q`.
pub fn parse_sequence(s: &str) -> Result<Sequence, CliError> {
    match s.trim() {
        "fib" => Ok(Sequence::Fibonacci),
        "lucasV" => Ok(Sequence::LucasNumbers),
        t => {
            if let Some(pair) = t.strip_prefix("lucasU:") {
                Ok(Sequence::U(parse_pair(pair)?))
            } else if let Some(pair) = t.strip_prefix("lucasV:") {
                Ok(Sequence::V(parse_pair(pair)?))
            } else {
                Err(bad("a sequence (fib, lucasV, lucasU:P,Q, lucasV:P,Q)", s))
            }
        }
    }
}

/// Comma-separated coefficients, constant term first.
pub fn parse_poly(s: &str) -> Result<PolynomialZ, CliError> {
    let coeffs = items(s)
        .map(|c| BigInt::from_str(c).map_err(|_| bad("a coefficient", c)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolynomialZ::new(coeffs)?)
}

/// Factors separated by `;`, each optionally raised with `^m`:
/// `"1,0,1;0,1^2"` is `(x² + 1)·x²`.
pub fn parse_poly_factors(s: &str) -> Result<FactoredPolynomial, CliError> {
    let mut factors = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (coeffs, mult) = match part.split_once('^') {
            Some((c, m)) => (c, m.trim().parse().map_err(|_| bad("a multiplicity", part))?),
            None => (part, 1),
        };
        factors.push((parse_poly(coeffs)?, mult));
    }
    Ok(FactoredPolynomial::new(factors)?)
}

/// `2` or `3/2`.
pub fn parse_gamma(s: &str) -> Result<Gamma, CliError> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n = n.trim().parse().map_err(|_| bad("gamma", s))?;
    let d = d.trim().parse().map_err(|_| bad("gamma", s))?;
    Ok(Gamma::new(n, d)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueArg {
    Auto,
    /// `a:M`
    Fixed(Natural, Natural),
}

pub fn parse_residue(s: &str) -> Result<ResidueArg, CliError> {
    if s.trim() == "auto" {
        return Ok(ResidueArg::Auto);
    }
    let (a, m) = s.split_once(':').ok_or_else(|| bad("a residue (auto or a:M)", s))?;
    let a = BigUint::from_str(a.trim()).map_err(|_| bad("a residue", s))?;
    let m = BigUint::from_str(m.trim()).map_err(|_| bad("a modulus", s))?;
    Ok(ResidueArg::Fixed(a, m))
}
