//! Weight, mod-24 conditions and cusp orders of eta quotients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::{Deserialize, Serialize};

use super::eta::EtaQuotientSpec;
use crate::arith::divisors;
use crate::rational::to_fraction_string;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub level: u64,
    /// `(1/2) sum r_delta`.
    pub weight: String,
    pub weight_is_integral: bool,
    /// `sum delta r_delta == 0 (mod 24)`.
    pub cond24a: bool,
    /// `sum (N/delta) r_delta == 0 (mod 24)`.
    pub cond24b: bool,
    /// `s = prod delta^{r_delta}`.
    pub character_s: String,
    /// Order of vanishing at the cusp `c/d`, keyed by `d | N`.
    pub cusp_orders: BTreeMap<u64, String>,
    /// All cusp orders are nonnegative.
    pub holomorphic_at_cusps: bool,
    /// All cusp orders are positive.
    pub cuspidal: bool,
}

impl ModularityReport {
    /// The cusp orders as exact rationals.
    pub fn cusp_order_values(&self) -> BTreeMap<u64, BigRational> {
        self.cusp_orders
            .iter()
            .map(|(d, s)| (*d, crate::rational::parse_rational(s).expect("stored by this module")))
            .collect()
    }

    /// Both congruences hold and the weight is integral.
    pub fn is_modular(&self) -> bool {
        self.cond24a && self.cond24b && self.weight_is_integral
    }
}

/// Order of vanishing at the cusp with denominator `d`:
/// `(N/24) sum gcd(d, delta)^2 r_delta / (gcd(d, N/d) d delta)`.
pub fn cusp_order(spec: &EtaQuotientSpec, d: u64) -> BigRational {
    let n = spec.level();
    let mut acc = BigRational::from_integer(0.into());
    for (&delta, &r) in spec.factors() {
        let g = d.gcd(&delta);
        let num = BigInt::from(g * g) * BigInt::from(r);
        let den = BigInt::from(d.gcd(&(n / d)) * d * delta);
        acc += BigRational::new(num, den);
    }
    acc * BigRational::new(BigInt::from(n), BigInt::from(24))
}

pub fn validate_eta_quotient(spec: &EtaQuotientSpec) -> ModularityReport {
    let n = spec.level();
    let sum_r: i64 = spec.factors().values().sum();
    let sum_a: i64 = spec.factors().iter().map(|(&d, &r)| d as i64 * r).sum();
    let sum_b: i64 = spec.factors().iter().map(|(&d, &r)| (n / d) as i64 * r).sum();
    let weight = BigRational::new(BigInt::from(sum_r), BigInt::from(2));
    let mut s = BigRational::one();
    for (&d, &r) in spec.factors() {
        let base = BigRational::from_integer(BigInt::from(d));
        s *= Pow::pow(base, r as i32);
    }
    let orders: BTreeMap<u64, BigRational> = divisors(n).into_iter().map(|d| (d, cusp_order(spec, d))).collect();
    let holomorphic_at_cusps = orders.values().all(|o| !o.is_negative());
    let cuspidal = orders.values().all(|o| o.is_positive());
    ModularityReport {
        level: n,
        weight_is_integral: weight.is_integer(),
        weight: weight.to_string(),
        cond24a: sum_a.rem_euclid(24) == 0,
        cond24b: sum_b.rem_euclid(24) == 0,
        character_s: s.to_string(),
        cusp_orders: orders.iter().map(|(d, o)| (*d, to_fraction_string(o))).collect(),
        holomorphic_at_cusps,
        cuspidal,
    }
}
