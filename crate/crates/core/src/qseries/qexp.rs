//! Truncated formal q-expansions on the `q^(1/24)` grid.

use std::fmt;
use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::par::{self, Parallelism};
use crate::rational::{parse_rational, to_fraction_string};
use crate::{Error, Result};

/// A truncated series `sum_i c_i q^((offset24 + i)/24)`, trusted for
/// exponents strictly below `prec24/24`.
///
/// Values are kept in canonical form: the first stored coefficient is
/// nonzero, or the series is zero up to precision, in which case
/// `offset24 == prec24` and nothing is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExp {
    offset24: i64,
    prec24: i64,
    coeffs: Vec<BigRational>,
}

impl QExp {
    /// Builds a series from its stored coefficients. The coefficient count
    /// must be `prec24 - offset24` (or zero when `prec24 <= offset24`).
    pub fn new(offset24: i64, prec24: i64, coeffs: Vec<BigRational>) -> Result<Self> {
        let expected = (prec24 - offset24).max(0) as usize;
        if coeffs.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "series with offset {offset24} and precision {prec24} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self::from_raw(offset24, prec24, coeffs))
    }

    /// Coefficients starting at `offset24`, precision ending right after them.
    pub fn from_coeffs(offset24: i64, coeffs: Vec<BigRational>) -> Self {
        let prec24 = offset24 + coeffs.len() as i64;
        Self::from_raw(offset24, prec24, coeffs)
    }

    pub fn from_integers(offset24: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            offset24,
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub(crate) fn from_raw(offset24: i64, prec24: i64, mut coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len() as i64, (prec24 - offset24).max(0));
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) => QExp { offset24, prec24, coeffs },
            Some(k) => {
                coeffs.drain(..k);
                QExp { offset24: offset24 + k as i64, prec24, coeffs }
            }
            None => QExp::zero(prec24),
        }
    }

    /// The zero series known below `q^(prec24/24)`.
    pub fn zero(prec24: i64) -> Self {
        QExp { offset24: prec24, prec24, coeffs: Vec::new() }
    }

    pub fn one(prec24: i64) -> Self {
        Self::monomial(0, BigRational::one(), prec24)
    }

    /// `c q^(num24/24)` known below `q^(prec24/24)`.
    pub fn monomial(num24: i64, c: BigRational, prec24: i64) -> Self {
        if num24 >= prec24 || c.is_zero() {
            return Self::zero(prec24);
        }
        let mut coeffs = vec![BigRational::zero(); (prec24 - num24) as usize];
        coeffs[0] = c;
        QExp { offset24: num24, prec24, coeffs }
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    pub fn prec24(&self) -> i64 {
        self.prec24
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Exponent (times 24) of the first nonzero coefficient.
    pub fn valuation24(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.offset24)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficient of `q^(num24/24)`.
    pub fn coefficient(&self, num24: i64) -> Result<BigRational> {
        if num24 >= self.prec24 {
            return Err(Error::InsufficientPrecision { num24, prec24: self.prec24 });
        }
        if num24 < self.offset24 {
            return Ok(BigRational::zero());
        }
        Ok(self.coeffs[(num24 - self.offset24) as usize].clone())
    }

    /// Nonzero terms as `(num24, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset24 + i as i64, c))
    }

    /// Lowers the precision to `prec24` (no-op if already lower).
    pub fn truncate(&self, prec24: i64) -> Self {
        if prec24 >= self.prec24 {
            return self.clone();
        }
        if prec24 <= self.offset24 {
            return Self::zero(prec24);
        }
        let keep = (prec24 - self.offset24) as usize;
        QExp { offset24: self.offset24, prec24, coeffs: self.coeffs[..keep].to_vec() }
    }

    /// Multiplies by `q^(k24/24)`.
    pub fn shift(&self, k24: i64) -> Self {
        QExp {
            offset24: self.offset24 + k24,
            prec24: self.prec24 + k24,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec24);
        }
        QExp {
            offset24: self.offset24,
            prec24: self.prec24,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn add(&self, other: &QExp) -> QExp {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QExp) -> QExp {
        self.combine(other, true)
    }

    fn combine(&self, other: &QExp, subtract: bool) -> QExp {
        let prec = self.prec24.min(other.prec24);
        let start = self.offset24.min(other.offset24).min(prec);
        let mut out = vec![BigRational::zero(); (prec - start) as usize];
        for (e, c) in self.terms() {
            if e < prec {
                out[(e - start) as usize] += c;
            }
        }
        for (e, c) in other.terms() {
            if e < prec {
                if subtract {
                    out[(e - start) as usize] -= c;
                } else {
                    out[(e - start) as usize] += c;
                }
            }
        }
        Self::from_raw(start, prec, out)
    }

    pub fn mul(&self, other: &QExp) -> QExp {
        self.mul_with(other, Parallelism::default())
    }

    /// Cauchy product. The result is known below
    /// `min(prec(a) + val(b), prec(b) + val(a))`.
    pub fn mul_with(&self, other: &QExp, mode: Parallelism) -> QExp {
        let prec = (self.prec24 + other.offset24).min(other.prec24 + self.offset24);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let offset = self.offset24 + other.offset24;
        let len = (prec - offset) as usize;
        let out = if self.is_integral() && other.is_integral() {
            let a = to_integers(&self.coeffs);
            let b = to_integers(&other.coeffs);
            convolve(&a, &b, len, mode)
                .into_iter()
                .map(BigRational::from_integer)
                .collect()
        } else {
            convolve(&self.coeffs, &other.coeffs, len, mode)
        };
        Self::from_raw(offset, prec, out)
    }

    /// Multiplicative inverse; the offset negates.
    pub fn invert(&self) -> Result<QExp> {
        self.pow(-1)
    }

    /// Integer power. Negative exponents need a nonzero leading coefficient.
    pub fn pow(&self, e: i64) -> Result<QExp> {
        if e == 0 {
            let rel = if self.is_zero() { 1 } else { self.prec24 - self.offset24 };
            return Ok(Self::one(rel));
        }
        if self.is_zero() {
            if e < 0 {
                return Err(Error::NotInvertible);
            }
            return Ok(Self::zero(self.prec24 * e));
        }
        let rel = (self.prec24 - self.offset24) as usize;
        let coeffs = series_pow(&self.coeffs, e, rel);
        let offset = self.offset24 * e;
        Ok(Self::from_raw(offset, offset + rel as i64, coeffs))
    }

    /// Dense coefficients of `q^(n + shift24/24)` for `n` in `start..end`.
    pub fn grid_coeffs(&self, shift24: i64, start: i64, end: i64) -> Result<Vec<BigRational>> {
        (start..end).map(|n| self.coefficient(24 * n + shift24)).collect()
    }
}

fn to_integers(v: &[BigRational]) -> Vec<BigInt> {
    v.iter().map(|c| c.to_integer()).collect()
}

/// Truncated sparse Cauchy product of `a` and `b` into `len` slots.
///
/// The output range is cut into blocks; each block is filled independently,
/// which keeps the per-slot summation order fixed regardless of threads.
fn convolve<T>(a: &[T], b: &[T], len: usize, mode: Parallelism) -> Vec<T>
where
    T: Clone + Zero + Send + Sync + for<'x> AddAssign<&'x T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let a_nz: Vec<(usize, &T)> = a.iter().enumerate().take(len).filter(|(_, c)| !c.is_zero()).collect();
    let b_nz: Vec<(usize, &T)> = b.iter().enumerate().take(len).filter(|(_, c)| !c.is_zero()).collect();
    let work = a_nz.len().saturating_mul(b_nz.len());
    let blocks = if mode.is_parallel() && work > 20_000 {
        (par::current_threads() * 4).clamp(1, len.max(1))
    } else {
        1
    };
    let block = len.div_ceil(blocks).max(1);
    let starts: Vec<usize> = (0..len).step_by(block).collect();
    let chunks = par::map(mode, &starts, |&lo| {
        let hi = (lo + block).min(len);
        let mut out = vec![T::zero(); hi - lo];
        for &(i, ai) in &a_nz {
            if i >= hi {
                break;
            }
            let from = b_nz.partition_point(|&(j, _)| i + j < lo);
            for &(j, bj) in &b_nz[from..] {
                let k = i + j;
                if k >= hi {
                    break;
                }
                out[k - lo] += &(ai * bj);
            }
        }
        out
    });
    chunks.into_iter().flatten().collect()
}

/// `a^e` truncated to `len` terms, for `a[0] != 0`, via the power-series
/// recurrence `n a_0 g_n = sum_{k>=1} ((e+1)k - n) a_k g_{n-k}`.
///
/// Runs on the subgrid generated by the support of `a`, so the cost is
/// `len / stride * nnz(a)`.
pub(crate) fn series_pow(a: &[BigRational], e: i64, len: usize) -> Vec<BigRational> {
    assert!(!a[0].is_zero(), "series_pow needs a nonzero constant term");
    let mut stride = 0usize;
    for (i, c) in a.iter().enumerate().take(len).skip(1) {
        if !c.is_zero() {
            stride = stride.gcd(&i);
        }
    }
    let a0 = &a[0];
    let mut out = vec![BigRational::zero(); len];
    if len == 0 {
        return out;
    }
    let lead = a0.pow(e as i32);
    if stride == 0 {
        out[0] = lead;
        return out;
    }
    let clen = len.div_ceil(stride);
    let nz: Vec<(i64, &BigRational)> = (1..clen)
        .filter(|&k| k * stride < a.len() && !a[k * stride].is_zero())
        .map(|k| (k as i64, &a[k * stride]))
        .collect();

    let unit = a0.is_integer() && a0.numer().abs().is_one();
    let compressed: Vec<BigRational> = if unit && a.iter().all(|c| c.is_integer()) {
        let a0i = a0.to_integer();
        let nzi: Vec<(i64, BigInt)> = nz.iter().map(|(k, c)| (*k, c.to_integer())).collect();
        let mut g: Vec<BigInt> = Vec::with_capacity(clen);
        g.push(lead.to_integer());
        for n in 1..clen as i64 {
            let mut acc = BigInt::zero();
            for (k, ak) in &nzi {
                if *k > n {
                    break;
                }
                let gk = &g[(n - k) as usize];
                if gk.is_zero() {
                    continue;
                }
                let w = (e as i128 + 1) * *k as i128 - n as i128;
                if w != 0 {
                    acc += BigInt::from(w) * ak * gk;
                }
            }
            let d = &a0i * BigInt::from(n);
            debug_assert!((&acc % &d).is_zero());
            g.push(acc / d);
        }
        g.into_iter().map(BigRational::from_integer).collect()
    } else {
        let mut g: Vec<BigRational> = Vec::with_capacity(clen);
        g.push(lead);
        for n in 1..clen as i64 {
            let mut acc = BigRational::zero();
            for (k, ak) in &nz {
                if *k > n {
                    break;
                }
                let gk = &g[(n - k) as usize];
                if gk.is_zero() {
                    continue;
                }
                let w = (e as i128 + 1) * *k as i128 - n as i128;
                if w != 0 {
                    acc += BigRational::from_integer(BigInt::from(w)) * *ak * gk;
                }
            }
            g.push(acc / (a0 * BigRational::from_integer(BigInt::from(n))));
        }
        g
    };
    for (j, c) in compressed.into_iter().enumerate() {
        out[j * stride] = c;
    }
    out
}

impl fmt::Display for QExp {
    /// Human-readable form, e.g. `q - 8q^4 + 20q^7 + O(q^10)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = exponent_str(e);
            match (mag.is_one(), var.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{var}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}{var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", {
            let v = exponent_str(self.prec24);
            if v.is_empty() { "1".to_string() } else { v }
        })
    }
}

fn exponent_str(num24: i64) -> String {
    let g = num24.gcd(&24);
    let (n, d) = if num24 == 0 { (0, 1) } else { (num24 / g, 24 / g) };
    match (n, d) {
        (0, _) => String::new(),
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

#[derive(Serialize, Deserialize)]
struct QExpJson {
    offset24: i64,
    prec24: i64,
    coeffs: Vec<String>,
}

impl Serialize for QExp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QExpJson {
            offset24: self.offset24,
            prec24: self.prec24,
            coeffs: self.coeffs.iter().map(to_fraction_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QExpJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QExp::new(raw.offset24, raw.prec24, coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn poly(offset: i64, c: &[i64]) -> QExp {
        QExp::from_integers(offset, c)
    }

    #[test]
    fn canonical_form_strips_leading_zeros() {
        let a = poly(0, &[0, 0, 3, 1]);
        assert_eq!(a.offset24(), 2);
        assert_eq!(a.prec24(), 4);
        assert_eq!(a.coeffs().len(), 2);
        let z = poly(5, &[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.prec24(), 7);
    }

    #[test]
    fn add_identity_and_inverse() {
        let a = poly(1, &[1, 0, -2, 5]);
        assert_eq!(a.add(&QExp::zero(100)), a);
        let m = QExp::monomial(1, int(1), 30);
        assert!(m.add(&m.neg()).is_zero());
    }

    #[test]
    fn add_uses_min_precision() {
        let a = poly(0, &[1, 1, 1, 1]);
        let b = poly(0, &[1, 1]);
        let s = a.add(&b);
        assert_eq!(s.prec24(), 2);
        assert_eq!(s.coeffs(), &[int(2), int(2)]);
    }

    #[test]
    fn mul_identity_and_precision() {
        let a = poly(3, &[2, -1, 0, 7]);
        assert_eq!(a.mul(&QExp::one(100)), a);
        let b = poly(1, &[1, 1]);
        let c = a.mul(&b);
        // min(7 + 1, 3 + 3)
        assert_eq!(c.prec24(), 6);
        assert_eq!(c.offset24(), 4);
        assert_eq!(c.coeffs(), &[int(2), int(1)]);
    }

    #[test]
    fn coefficient_errors_beyond_precision() {
        let one = QExp::one(24);
        assert_eq!(one.coefficient(1).unwrap(), int(0));
        assert!(matches!(one.coefficient(24), Err(Error::InsufficientPrecision { .. })));
        assert_eq!(one.coefficient(-5).unwrap(), int(0));
    }

    #[test]
    fn invert_geometric() {
        // 1/(1 - x) = 1 + x + x^2 + ...
        let a = poly(0, &[1, -1, 0, 0, 0, 0]);
        let inv = a.invert().unwrap();
        assert_eq!(inv, poly(0, &[1, 1, 1, 1, 1, 1]));
        assert!(matches!(QExp::zero(10).invert(), Err(Error::NotInvertible)));
    }

    #[test]
    fn invert_rational_leading_coefficient() {
        let a = poly(2, &[3, 1, 4, 1, 5, 9]);
        let inv = a.invert().unwrap();
        assert_eq!(inv.offset24(), -2);
        let prod = a.mul(&inv);
        assert_eq!(prod, QExp::one(6));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let a = poly(1, &[1, -2, 0, 3, 0, 0, 1, 0]);
        let mut acc = QExp::one(100);
        for e in 1..=5 {
            acc = acc.mul(&a);
            assert_eq!(a.pow(e).unwrap(), acc, "e = {e}");
        }
        assert_eq!(a.pow(1).unwrap(), a);
        assert_eq!(a.pow(0).unwrap(), QExp::one(8));
    }

    #[test]
    fn pow_of_zero_series() {
        let z = QExp::zero(5);
        assert_eq!(z.pow(3).unwrap(), QExp::zero(15));
        assert!(z.pow(-2).is_err());
    }

    #[test]
    fn display_readable() {
        let a = QExp::monomial(24, int(1), 200)
            .add(&QExp::monomial(96, int(-8), 200))
            .add(&QExp::monomial(168, int(20), 200));
        assert_eq!(a.to_string(), "q - 8q^4 + 20q^7 + O(q^(25/3))");
        assert_eq!(QExp::monomial(1, int(1), 24).to_string(), "q^(1/24) + O(q)");
    }

    #[test]
    fn json_roundtrip() {
        let a = poly(8, &[1, 0, -8]).scale(&crate::rational::frac(1, 3));
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"1/3\""));
        let back: QExp = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        let bad = r#"{"offset24":0,"prec24":3,"coeffs":["1"]}"#;
        assert!(serde_json::from_str::<QExp>(bad).is_err());
    }

    #[test]
    fn sequential_and_parallel_products_agree() {
        let a = QExp::from_integers(0, &(0..400).map(|i| (i * 7 % 13) - 6).collect::<Vec<_>>());
        let b = QExp::from_integers(3, &(0..380).map(|i| (i * 5 % 11) - 5).collect::<Vec<_>>());
        assert_eq!(a.mul_with(&b, Parallelism::Sequential), a.mul_with(&b, Parallelism::Parallel));
    }
}
