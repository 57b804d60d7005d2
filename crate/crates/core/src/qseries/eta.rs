//! Dedekind eta function and eta products.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::qexp::{series_pow, QExp};
use crate::{Error, Result};

/// `prod_{m>=1} (1 - q^(delta m))` on the 1/24 grid, `len` slots from `q^0`,
/// expanded with the pentagonal number theorem.
fn euler_product(delta: u64, len: usize) -> Vec<BigRational> {
    pentagonal(24 * delta as i64, len)
}

fn pentagonal(step: i64, len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for k in 0i64.. {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let g = kk * (3 * kk - 1) / 2;
            let pos = g * step;
            if (pos as usize) < len {
                any = true;
                out[pos as usize] = if kk.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
            }
        }
        if !any {
            break;
        }
    }
    out
}

/// Integer coefficients of `prod_{m>=1} (1 - q^m)^e` at `q^0 .. q^(terms-1)`.
pub fn euler_power(e: i64, terms: usize) -> Vec<BigInt> {
    series_pow(&pentagonal(1, terms), e, terms).into_iter().map(|c| c.to_integer()).collect()
}

/// `eta(delta z) = q^(delta/24) prod (1 - q^(delta m))`, known below
/// `q^(prec24/24)`.
pub fn eta(delta: u64, prec24: i64) -> Result<QExp> {
    if delta == 0 {
        return Err(Error::InvalidArgument("eta needs delta >= 1".into()));
    }
    let offset = delta as i64;
    if prec24 <= offset {
        return Err(Error::InvalidArgument(format!(
            "precision {prec24}/24 does not exceed the leading exponent {offset}/24"
        )));
    }
    let len = (prec24 - offset) as usize;
    QExp::new(offset, prec24, euler_product(delta, len))
}

/// `prod_{delta | N} eta(delta z)^{r_delta}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotientSpec {
    level: u64,
    factors: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(level: u64, factors: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidEtaQuotient("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (d, r) in factors {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::InvalidEtaQuotient(format!("{d} does not divide the level {level}")));
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        if map.is_empty() {
            return Err(Error::InvalidEtaQuotient("all exponents are zero".into()));
        }
        Ok(EtaQuotientSpec { level, factors: map })
    }

    /// Uses the least common multiple of the deltas as level.
    pub fn with_minimal_level(factors: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let factors: Vec<_> = factors.into_iter().collect();
        let level = factors.iter().fold(1u64, |l, &(d, _)| num_integer::lcm(l, d.max(1)));
        Self::new(level, factors)
    }

    /// Parses `"3^8"`, `"2^15,1^-7"`; the level defaults to the lcm of deltas.
    pub fn parse(spec: &str, level: Option<u64>) -> Result<Self> {
        let mut factors = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, r) = part
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected delta^r, got `{part}`")))?;
            let d: u64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad delta in `{part}`")))?;
            let r: i64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?;
            factors.push((d, r));
        }
        if factors.is_empty() {
            return Err(Error::Parse("empty eta quotient".into()));
        }
        match level {
            Some(n) => Self::new(n, factors),
            None => Self::with_minimal_level(factors),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    /// `sum delta * r_delta`, the leading exponent times 24.
    pub fn offset24(&self) -> i64 {
        self.factors.iter().map(|(&d, &r)| d as i64 * r).sum()
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

/// Expands an eta quotient, known below `q^(prec24/24)`.
pub fn eta_product(spec: &EtaQuotientSpec, prec24: i64) -> Result<QExp> {
    let offset = spec.offset24();
    if prec24 <= offset {
        return Err(Error::InvalidArgument(format!(
            "precision {prec24}/24 does not exceed the leading exponent {offset}/24"
        )));
    }
    let rel = (prec24 - offset) as usize;
    let mut acc = QExp::one(rel as i64);
    for (&d, &r) in spec.factors() {
        let base = euler_product(d, rel);
        let factor = QExp::from_raw(0, rel as i64, series_pow(&base, r, rel));
        acc = acc.mul(&factor);
    }
    Ok(acc.shift(offset))
}
