//! Closed-form coefficients of the CM eigenform `η(3z)^8` (weight 4, level 9).
//!
//! For a prime `p ≡ 1 (mod 3)` write `p = x² + 3y²` with `x ≡ 1 (mod 3)`;
//! then `b′(p) = α³ + ᾱ³ = 2x³ - 18xy²` with `α = x + y√-3`. Primes
//! `p ≡ 2 (mod 3)` and `p = 3` give `b′(p) = 0`, and prime powers follow the
//! Hecke recurrence with trivial character.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, is_prime, sqrt_mod_prime};
use crate::{Error, Result};

pub use crate::qseries::{tau, tau_table};

/// `p = x² + 3y²` with `x ≡ 1 (mod 3)` and `y ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmRepresentation {
    pub p: u64,
    pub x: i64,
    pub y: i64,
}

/// Cornacchia's algorithm for `x² + 3y² = p`.
pub fn cornacchia_x2_3y2(p: u64) -> Result<CmRepresentation> {
    if p % 3 != 1 || !is_prime(p) {
        return Err(Error::NoRepresentation(p));
    }
    let r = sqrt_mod_prime(p - 3, p).ok_or(Error::NoRepresentation(p))?;
    let (x, y) = [r, p - r].into_iter().find_map(|r0| descend(p, r0)).ok_or(Error::NoRepresentation(p))?;
    let x = if x.rem_euclid(3) == 1 { x } else { -x };
    Ok(CmRepresentation { p, x, y: y.abs() })
}

fn descend(p: u64, r0: u64) -> Option<(i64, i64)> {
    let limit = p.isqrt();
    let (mut a, mut b) = (p, r0);
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p.checked_sub(b * b)?;
    if rest % 3 != 0 {
        return None;
    }
    let c = rest / 3;
    let y = c.isqrt();
    (y * y == c).then_some((b as i64, y as i64))
}

/// `b′(p)` for a prime `p`.
pub fn bprime_prime(p: u64) -> Result<BigInt> {
    if p % 3 != 1 {
        return Ok(BigInt::zero());
    }
    let CmRepresentation { x, y, .. } = cornacchia_x2_3y2(p)?;
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    Ok(BigInt::from(2) * x.pow(3) - BigInt::from(18) * x * y.pow(2))
}

/// `b′(p^n)`.
pub fn bprime_prime_power(p: u64, n: u32) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::one());
    }
    let p3 = BigInt::from(p).pow(3);
    match p % 3 {
        0 => Ok(BigInt::zero()),
        2 => Ok(if n % 2 == 1 { BigInt::zero() } else { (-p3).pow(n / 2) }),
        _ => {
            let ap = bprime_prime(p)?;
            let (mut prev, mut cur) = (BigInt::one(), ap.clone());
            for _ in 1..n {
                let next = &ap * &cur - &p3 * &prev;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

/// `b′(m)`, the coefficient of `q^m` in `η(3z)^8`.
pub fn bprime(m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidArgument("b′ is defined for m ≥ 1".into()));
    }
    factorize(m).into_iter().try_fold(BigInt::one(), |acc, (p, e)| Ok(acc * bprime_prime_power(p, e)?))
}

/// `b(m) = b′(3m - 2)`, the coefficient of `q^(m-1)` in `∏(1-q^n)^8`.
pub fn b_of(m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidArgument("b is defined for m ≥ 1".into()));
    }
    bprime(3 * m - 2)
}

/// `b′(p)² < 4p³`.
pub fn ramanujan_bound_check(p: u64) -> Result<bool> {
    let a = bprime_prime(p)?;
    Ok(&a * &a < BigInt::from(4) * BigInt::from(p).pow(3))
}

/// Compares `b′(p^α)` with `p^{3α/2} sin((α+1)θ)/sin θ`, `2cos θ = b′(p)p^{-3/2}`,
/// for `α ≤ alpha_max`. True iff every relative error is below `tol`.
pub fn sin_formula_check(p: u64, alpha_max: u32, tol: f64) -> Result<bool> {
    Ok(sin_formula_errors(p, alpha_max)?.into_iter().all(|e| e < tol))
}

/// Relative errors of the sine formula for `α = 0..=alpha_max`.
pub fn sin_formula_errors(p: u64, alpha_max: u32) -> Result<Vec<f64>> {
    let ap = bprime_prime(p)?;
    if ap.is_zero() {
        return Err(Error::InvalidArgument(format!("b′({p}) = 0, the angle is undefined")));
    }
    let pf = p as f64;
    let theta = (ap.to_f64().expect("finite") / (2.0 * pf.powf(1.5))).acos();
    (0..=alpha_max)
        .map(|alpha| {
            let exact = bprime_prime_power(p, alpha)?.to_f64().expect("finite");
            let approx = pf.powf(1.5 * alpha as f64) * ((alpha + 1) as f64 * theta).sin() / theta.sin();
            let scale = if exact == 0.0 { 1.0 } else { exact.abs() };
            Ok((exact - approx).abs() / scale)
        })
        .collect()
}

/// Least `α ≤ alpha_max` with `b′(p^α) = 0`, if any.
pub fn lehmer_alpha0(p: u64, alpha_max: u32) -> Result<Option<u32>> {
    for alpha in 1..=alpha_max {
        if bprime_prime_power(p, alpha)?.is_zero() {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

/// Coefficient map `m ↦ b′(m)` with a shared cache of prime-power values.
#[derive(Debug, Default)]
pub struct HeckeCoeff {
    cache: RwLock<HashMap<(u64, u32), BigInt>>,
}

impl HeckeCoeff {
    pub const WEIGHT: u32 = 4;
    pub const LEVEL: u64 = 9;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, m: u64) -> Result<BigInt> {
        if m == 0 {
            return Err(Error::InvalidArgument("b′ is defined for m ≥ 1".into()));
        }
        let mut acc = BigInt::one();
        for (p, e) in factorize(m) {
            let hit = self.cache.read().expect("cache lock").get(&(p, e)).cloned();
            let v = match hit {
                Some(v) => v,
                None => {
                    let v = bprime_prime_power(p, e)?;
                    self.cache.write().expect("cache lock").insert((p, e), v.clone());
                    v
                }
            };
            acc *= v;
        }
        Ok(acc)
    }

    /// `|b′(p)| < 2p^{3/2}`.
    pub fn satisfies_bound(&self, p: u64) -> Result<bool> {
        let a = self.get(p)?.abs();
        Ok(&a * &a < BigInt::from(4) * BigInt::from(p).pow(3))
    }
}
