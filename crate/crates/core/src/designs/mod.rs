//! Conformal design verdicts decided from exact q-series coefficients.
//!
//! Each structure's design strength at level `m` is tied to one coefficient:
//!
//! | structure | witness | guaranteed | decided |
//! |---|---|---|---|
//! | moonshine | `τ(m)` | 11 | 12-design iff `τ(m) = 0` |
//! | free boson, rank `d` | `[q^{m-d/24}] (E2²-E4)/(48η^d)` | 3 | never 4 |
//! | rank 8 lattice | `[q^{m-1}] ∏(1-q^n)^16` | 7 | 8-design iff zero |
//! | rank 16 lattice | `b(m) = b′(3m-2)` | 3 | 7-design iff zero, else not 4 |
//! | rank 24 lattice | `σ3(m)` | 3 | never 4 |
//! | `V_L^+`, `L = A1` | `[q^m] q^{1/24}η(2z)^15/η(z)^7` | 3 | not 4 if nonzero |

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::factorize;
use crate::modforms::bprime;
use crate::par::{self, Parallelism};
use crate::qseries::{eisenstein, eta_product, euler_power, sigma, tau_table, EtaQuotientSpec};
use crate::rational::int;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Moonshine,
    FreeBoson(u32),
    Rank8,
    Rank16,
    Rank24,
    A1Plus,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Moonshine => write!(f, "Moonshine"),
            Structure::FreeBoson(d) => write!(f, "FreeBoson({d})"),
            Structure::Rank8 => write!(f, "LatticeVOA(rank8)"),
            Structure::Rank16 => write!(f, "LatticeVOA(rank16)"),
            Structure::Rank24 => write!(f, "LatticeVOA(rank24)"),
            Structure::A1Plus => write!(f, "A1Plus"),
        }
    }
}

impl FromStr for Structure {
    type Err = Error;

    /// `moonshine`, `freeboson:3` (or `freeboson(3)`), `rank8`, `rank16`,
    /// `rank24`, `a1plus`; case-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || Error::Parse(format!("unknown structure {s:?}"));
        if let Some(rest) = lower.strip_prefix("freeboson") {
            let d = rest.trim_start_matches([':', '(']).trim_end_matches(')');
            let d: u32 = d.parse().map_err(|_| Error::Parse(format!("free boson needs a rank, e.g. freeboson:1 (got {s:?})")))?;
            if d == 0 {
                return Err(Error::Parse("free boson rank must be positive".into()));
            }
            return Ok(Structure::FreeBoson(d));
        }
        Ok(match lower.as_str() {
            "moonshine" => Structure::Moonshine,
            "rank8" | "latticevoa(rank8)" => Structure::Rank8,
            "rank16" | "latticevoa(rank16)" => Structure::Rank16,
            "rank24" | "latticevoa(rank24)" => Structure::Rank24,
            "a1plus" => Structure::A1Plus,
            _ => return Err(bad()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conditional {
    pub t: u32,
    pub holds: bool,
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotT {
    pub t: u32,
    #[serde(serialize_with = "as_string")]
    pub witness: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConformalDesignReport {
    pub structure: String,
    pub m: u64,
    pub guaranteed_t: u32,
    pub conditional: Option<Conditional>,
    pub not_t: Option<NotT>,
    pub provenance: String,
}

impl ConformalDesignReport {
    /// Strongest design property established for this level.
    pub fn design_strength(&self) -> u32 {
        match &self.conditional {
            Some(c) if c.holds => c.t.max(self.guaranteed_t),
            _ => self.guaranteed_t,
        }
    }

    /// One-line human summary, e.g. `7-design (by theorem); b(4)=0`.
    pub fn summary(&self) -> String {
        let name = witness_name(&self.structure);
        let m = self.m;
        if let Some(c) = self.conditional.as_ref().filter(|c| c.holds) {
            return format!("{}-design (by theorem); {name}({m})={}", c.t, c.witness);
        }
        match &self.not_t {
            Some(n) => format!("{}-design, not {}-design; witness {name}({m})={}", self.guaranteed_t, n.t, n.witness),
            None => format!("{}-design (by theorem)", self.guaranteed_t),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

fn witness_name(structure: &str) -> &'static str {
    match structure {
        "Moonshine" => "tau",
        "LatticeVOA(rank8)" => "a",
        "LatticeVOA(rank16)" => "b",
        "LatticeVOA(rank24)" => "sigma3",
        "A1Plus" => "z",
        _ => "tr",
    }
}

fn report(structure: Structure, m: u64, guaranteed_t: u32, conditional: Option<Conditional>, not_t: Option<NotT>) -> ConformalDesignReport {
    ConformalDesignReport {
        structure: structure.to_string(),
        m,
        guaranteed_t,
        conditional,
        not_t,
        provenance: "theorem".into(),
    }
}

/// `12`-design iff `τ(m) = 0`; homogeneous spaces are always 11-designs.
pub fn moonshine_verdict(m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    let t = tau_table(m)?.pop().expect("nonempty");
    Ok(moonshine_report(m, t))
}

fn moonshine_report(m: u64, tau: BigInt) -> ConformalDesignReport {
    let holds = tau.is_zero();
    let not_t = (!holds).then(|| NotT { t: 12, witness: tau.clone() });
    report(Structure::Moonshine, m, 11, Some(Conditional { t: 12, holds, witness: tau }), not_t)
}

/// `[q^{m-d/24}] (E2² - E4)/(48 η^d)`: the trace of `o(v4)` on the weight-`m` space.
pub fn m1_trace_v4(d: u32, m: u64) -> Result<BigInt> {
    check_level(m)?;
    Ok(freeboson_witnesses(d, m)?.pop().expect("nonempty"))
}

/// Free-boson witnesses for levels `1..=limit`.
pub fn freeboson_witnesses(d: u32, limit: u64) -> Result<Vec<BigInt>> {
    if d == 0 {
        return Err(Error::InvalidArgument("free boson rank must be positive".into()));
    }
    let prec24 = 24 * (limit as i64 + 1);
    let e2 = eisenstein(2, prec24)?;
    let f = e2.mul(&e2).sub(&eisenstein(4, prec24)?).scale(&(int(1) / int(48)));
    let inv_eta = eta_product(&EtaQuotientSpec::new(1, [(1, -(d as i64))])?, prec24)?;
    let z = f.mul(&inv_eta);
    (1..=limit as i64).map(|m| Ok(z.coefficient(24 * m - d as i64)?.to_integer())).collect()
}

/// Always a 3-design and never a 4-design; the witness is strictly negative.
pub fn freeboson_verdict(d: u32, m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    freeboson_report(d, m, m1_trace_v4(d, m)?)
}

fn freeboson_report(d: u32, m: u64, w: BigInt) -> Result<ConformalDesignReport> {
    if !w.is_negative() {
        return Err(Error::Invariant(format!("free boson witness at d={d}, m={m} is {w}, expected negative")));
    }
    Ok(report(Structure::FreeBoson(d), m, 3, None, Some(NotT { t: 4, witness: w })))
}

/// `a(m) = [q^{m-1}] ∏(1-q^n)^16`; an 8-design iff it vanishes.
pub fn rank8_verdict(m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    let a = euler_power(16, m as usize).pop().expect("nonempty");
    Ok(rank8_report(m, a))
}

fn rank8_report(m: u64, a: BigInt) -> ConformalDesignReport {
    let holds = a.is_zero();
    let not_t = (!holds).then(|| NotT { t: 8, witness: a.clone() });
    report(Structure::Rank8, m, 7, Some(Conditional { t: 8, holds, witness: a }), not_t)
}

/// True iff some prime `p ≡ 2 (mod 3)` divides `3m - 2` to an odd power.
pub fn rank16_criterion(m: u64) -> bool {
    factorize(3 * m - 2).into_iter().any(|(p, e)| p % 3 == 2 && e % 2 == 1)
}

/// A 7-design when [`rank16_criterion`] holds, otherwise not a 4-design
/// with witness `b(m) = b′(3m-2) ≠ 0`.
pub fn rank16_verdict(m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    let b = bprime(3 * m - 2)?;
    let criterion = rank16_criterion(m);
    if criterion != b.is_zero() {
        return Err(Error::Invariant(format!("rank 16 criterion and b({m}) = {b} disagree")));
    }
    let not_t = (!criterion).then(|| NotT { t: 4, witness: b.clone() });
    Ok(report(Structure::Rank16, m, 3, Some(Conditional { t: 7, holds: criterion, witness: b }), not_t))
}

/// Always a 3-design, never a 4-design: the witness `σ3(m)` is positive.
pub fn rank24_verdict(m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    let s = sigma(3, m);
    if !s.is_positive() {
        return Err(Error::Invariant(format!("sigma3({m}) = {s}")));
    }
    Ok(report(Structure::Rank24, m, 3, None, Some(NotT { t: 4, witness: s })))
}

/// Coefficients of `q^1 .. q^limit` in `q^{1/24} η(2z)^15 / η(z)^7`.
pub fn a1plus_coefficients(limit: u64) -> Result<Vec<BigInt>> {
    let spec = EtaQuotientSpec::new(2, [(2, 15), (1, -7)])?;
    let z = eta_product(&spec, 24 * (limit as i64 + 1) - 1)?.shift(1);
    (1..=limit as i64).map(|m| Ok(z.coefficient(24 * m)?.to_integer())).collect()
}

pub fn a1plus_verdict(m: u64) -> Result<ConformalDesignReport> {
    check_level(m)?;
    let z = a1plus_coefficients(m)?.pop().expect("nonempty");
    Ok(a1plus_report(m, z))
}

fn a1plus_report(m: u64, z: BigInt) -> ConformalDesignReport {
    let not_t = (!z.is_zero()).then_some(NotT { t: 4, witness: z });
    report(Structure::A1Plus, m, 3, None, not_t)
}

pub fn verdict(structure: Structure, m: u64) -> Result<ConformalDesignReport> {
    match structure {
        Structure::Moonshine => moonshine_verdict(m),
        Structure::FreeBoson(d) => freeboson_verdict(d, m),
        Structure::Rank8 => rank8_verdict(m),
        Structure::Rank16 => rank16_verdict(m),
        Structure::Rank24 => rank24_verdict(m),
        Structure::A1Plus => a1plus_verdict(m),
    }
}

/// Verdicts for every level `1..=limit`, sharing one series expansion.
pub fn verdicts_up_to(structure: Structure, limit: u64, mode: Parallelism) -> Result<Vec<ConformalDesignReport>> {
    check_level(limit)?;
    let levels: Vec<u64> = (1..=limit).collect();
    let pair = |w: Vec<BigInt>| -> Vec<(u64, BigInt)> { levels.iter().copied().zip(w).collect() };
    match structure {
        Structure::Moonshine => {
            let w = pair(tau_table(limit)?);
            Ok(par::map(mode, &w, |(m, t)| moonshine_report(*m, t.clone())))
        }
        Structure::FreeBoson(d) => {
            let w = pair(freeboson_witnesses(d, limit)?);
            par::map(mode, &w, |(m, t)| freeboson_report(d, *m, t.clone())).into_iter().collect()
        }
        Structure::Rank8 => {
            let w = pair(euler_power(16, limit as usize));
            Ok(par::map(mode, &w, |(m, a)| rank8_report(*m, a.clone())))
        }
        Structure::A1Plus => {
            let w = pair(a1plus_coefficients(limit)?);
            Ok(par::map(mode, &w, |(m, z)| a1plus_report(*m, z.clone())))
        }
        Structure::Rank16 | Structure::Rank24 => par::map(mode, &levels, |&m| verdict(structure, m)).into_iter().collect(),
    }
}

fn check_level(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("level m must be at least 1".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesId {
    /// `τ(m)`, `m ≥ 1`.
    Tau,
    /// `a(m) = [q^{m-1}] ∏(1-q^n)^16`.
    Eta16,
    /// `b(m) = [q^{m-1}] ∏(1-q^n)^8`.
    Eta8,
    /// `d(m) = [q^{m-1}] E4 ∏(1-q^n)^8`.
    E4Eta8,
    /// `[q^m] q^{1/24} η(2z)^15/η(z)^7`.
    A1Plus,
}

impl SeriesId {
    pub const ALL: [SeriesId; 5] = [SeriesId::Tau, SeriesId::Eta16, SeriesId::Eta8, SeriesId::E4Eta8, SeriesId::A1Plus];

    pub fn name(self) -> &'static str {
        match self {
            SeriesId::Tau => "tau",
            SeriesId::Eta16 => "eta16",
            SeriesId::Eta8 => "eta8",
            SeriesId::E4Eta8 => "e4eta8",
            SeriesId::A1Plus => "a1plus",
        }
    }
}

impl FromStr for SeriesId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        SeriesId::ALL
            .into_iter()
            .find(|id| id.name() == lower)
            .ok_or_else(|| Error::Parse(format!("unknown series {s:?}; expected one of tau, eta16, eta8, e4eta8, a1plus")))
    }
}

/// Coefficients `c(1), ..., c(limit)` of a scan series.
pub fn series_coefficients(id: SeriesId, limit: u64) -> Result<Vec<BigInt>> {
    check_level(limit)?;
    let n = limit as usize;
    Ok(match id {
        SeriesId::Tau => tau_table(limit)?,
        SeriesId::Eta16 => euler_power(16, n),
        SeriesId::Eta8 => euler_power(8, n),
        SeriesId::E4Eta8 => {
            let p = euler_power(8, n);
            let e4: Vec<BigInt> =
                (0..n as u64).map(|k| if k == 0 { BigInt::from(1) } else { sigma(3, k) * 240 }).collect();
            (0..n).map(|i| (0..=i).map(|k| &e4[k] * &p[i - k]).sum()).collect()
        }
        SeriesId::A1Plus => a1plus_coefficients(limit)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub series: String,
    pub limit: u64,
    pub zeros: Vec<u64>,
    /// `c(1), ..., c(k)` for a short prefix.
    pub first_values: Vec<String>,
    pub provenance: String,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Every `m ≤ limit` at which the series coefficient vanishes.
pub fn vanishing_scan(id: SeriesId, limit: u64) -> Result<ScanReport> {
    let c = series_coefficients(id, limit)?;
    let zeros = (1..=limit).zip(&c).filter(|(_, v)| v.is_zero()).map(|(m, _)| m).collect();
    Ok(ScanReport {
        series: id.name().into(),
        limit,
        zeros,
        first_values: c.iter().take(10).map(ToString::to_string).collect(),
        provenance: format!("scan({limit})"),
    })
}

/// Zero coefficients of the `A1Plus` series up to `limit`, with a prefix.
pub fn a1plus_scan(limit: u64) -> Result<ScanReport> {
    vanishing_scan(SeriesId::A1Plus, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn examples() {
        assert_eq!(m1_trace_v4(1, 1).unwrap(), b(-6));
        assert_eq!(m1_trace_v4(1, 2).unwrap(), b(-42));
        assert_eq!(m1_trace_v4(1, 3).unwrap(), b(-120));
        assert_eq!(m1_trace_v4(2, 1).unwrap(), b(-6));
        assert_eq!(m1_trace_v4(24, 1).unwrap(), b(-6));
        assert_eq!(rank8_verdict(2).unwrap().not_t.unwrap().witness, b(-16));
        let r = rank16_verdict(4).unwrap();
        assert!(r.conditional.as_ref().unwrap().holds);
        assert_eq!(r.summary(), "7-design (by theorem); b(4)=0");
        let r = rank16_verdict(3).unwrap();
        assert_eq!(r.not_t.clone().unwrap().witness, b(20));
        assert_eq!(rank24_verdict(12).unwrap().not_t.unwrap().witness, b(2044));
        assert_eq!(rank24_verdict(2).unwrap().summary(), "3-design, not 4-design; witness sigma3(2)=9");
        assert_eq!(moonshine_verdict(2).unwrap().not_t.unwrap().witness, b(-24));
        assert_eq!(a1plus_coefficients(3).unwrap()[0], b(1));
    }

    #[test]
    fn ranges_match_single_levels() {
        for s in [Structure::Moonshine, Structure::FreeBoson(3), Structure::Rank8, Structure::Rank16, Structure::Rank24, Structure::A1Plus] {
            let all = verdicts_up_to(s, 12, Parallelism::Parallel).unwrap();
            for (i, r) in all.iter().enumerate() {
                assert_eq!(r, &verdict(s, i as u64 + 1).unwrap(), "{s} m={}", i + 1);
            }
        }
    }

    #[test]
    fn eta8_scan_matches_criterion() {
        let scan = vanishing_scan(SeriesId::Eta8, 100).unwrap();
        let expected: Vec<u64> = (1..=100).filter(|&m| rank16_criterion(m)).collect();
        assert_eq!(scan.zeros, expected);
        assert_eq!(&scan.zeros[..5], &[4, 8, 12, 14, 16]);
    }

    #[test]
    fn parsing() {
        assert_eq!("freeboson:2".parse::<Structure>().unwrap(), Structure::FreeBoson(2));
        assert_eq!("FreeBoson(24)".parse::<Structure>().unwrap(), Structure::FreeBoson(24));
        assert_eq!("RANK16".parse::<Structure>().unwrap(), Structure::Rank16);
        assert!("rank12".parse::<Structure>().is_err());
        assert!("freeboson".parse::<Structure>().is_err());
        assert_eq!("e4eta8".parse::<SeriesId>().unwrap(), SeriesId::E4Eta8);
    }
}
