//! Bernoulli numbers, divisor sums, Eisenstein series and the discriminant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::eta::{eta_product, EtaQuotientSpec};
use super::qexp::QExp;
use crate::arith::factorize;
use crate::{Error, Result};

/// Exact Bernoulli number `B_n` from `sum_{j<=n} C(n+1, j) B_j = 0`
/// (so `B_1 = -1/2`; odd `n > 1` give zero).
pub fn bernoulli(n: u32) -> BigRational {
    if n > 1 && n % 2 == 1 {
        return BigRational::zero();
    }
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n as usize {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // binom(m+1, j) for j = 0..m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * bj;
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().unwrap()
}

/// `sigma_k(m) = sum_{d | m} d^k`.
pub fn sigma(k: u32, m: u64) -> BigInt {
    assert!(m >= 1, "sigma needs m >= 1");
    let mut acc = BigInt::one();
    for (p, e) in factorize(m) {
        let pk = Pow::pow(BigInt::from(p), k);
        let mut term = BigInt::one();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= &pk;
            term += &power;
        }
        acc *= term;
    }
    acc
}

/// Eisenstein series with constant term 1:
/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein(k: u32, prec24: i64) -> Result<QExp> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    if prec24 <= 0 {
        return Ok(QExp::zero(prec24));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k);
    let mut coeffs = vec![BigRational::zero(); prec24 as usize];
    coeffs[0] = BigRational::one();
    let mut n = 1u64;
    while ((24 * n) as i64) < prec24 {
        coeffs[24 * n as usize] = &factor * BigRational::from_integer(sigma(k - 1, n));
        n += 1;
    }
    QExp::new(0, prec24, coeffs)
}

/// `Delta = eta^24`.
pub fn delta(prec24: i64) -> Result<QExp> {
    let spec = EtaQuotientSpec::new(1, [(1, 24)])?;
    eta_product(&spec, prec24)
}

/// Ramanujan's `tau(m)`, the `q^m` coefficient of `Delta`.
pub fn tau(m: u64) -> Result<BigInt> {
    Ok(tau_table(m)?.pop().unwrap())
}

/// `[tau(1), ..., tau(limit)]`.
pub fn tau_table(limit: u64) -> Result<Vec<BigInt>> {
    if limit == 0 {
        return Err(Error::InvalidArgument("tau needs m >= 1".into()));
    }
    let d = delta(24 * (limit as i64 + 1))?;
    (1..=limit as i64).map(|m| Ok(d.coefficient(24 * m)?.to_integer())).collect()
}
