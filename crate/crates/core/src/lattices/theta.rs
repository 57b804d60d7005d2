//! Theta series, plain and weighted by a polynomial.
//!
//! Exponents follow `Θ_L = Σ_x q^{w·|x|²}` with `w = 1/2` for even lattices
//! and `w = 1` otherwise, so `Θ_E8 = E4` and `Θ_Z = 1 + 2q + 2q^4 + ...`.
//!
//! Besides plain enumeration, lattices with a square integral embedding `Y`
//! are summed coset by coset over a scaled copy `a·D_n ⊂ L`. Each coset sum
//! factors into one-dimensional series, which reaches orders where the
//! vectors themselves are far too many to list.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enumerate::{enumerate, norm_counts};
use super::lattice::{rational_sqrt, Lattice};
use super::matrix;
use super::polynomial::Polynomial;
use super::Acc;
use crate::par::{self, Parallelism};
use crate::qseries::QExp;
use crate::{Error, Result};

const MAX_COSETS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThetaMethod {
    /// Orthogonal blocks first, then cosets where available, else enumeration.
    #[default]
    Auto,
    Enumeration,
    Cosets,
}

pub fn theta(l: &Lattice, prec24: i64) -> Result<QExp> {
    theta_with(l, prec24, ThetaMethod::Auto, Parallelism::default())
}

pub fn theta_by_enumeration(l: &Lattice, prec24: i64, mode: Parallelism) -> Result<QExp> {
    theta_with(l, prec24, ThetaMethod::Enumeration, mode)
}

pub fn theta_with(l: &Lattice, prec24: i64, method: ThetaMethod, mode: Parallelism) -> Result<QExp> {
    if prec24 <= 0 {
        return Ok(QExp::zero(prec24));
    }
    let w = l.theta_weight();
    match method {
        ThetaMethod::Enumeration => enumeration_theta(l, &w, prec24, mode),
        ThetaMethod::Cosets => coset_theta(l, &w, prec24, mode)?
            .ok_or_else(|| Error::InvalidArgument(format!("{}: no square embedding with few cosets", l.name()))),
        ThetaMethod::Auto => {
            let blocks = l.orthogonal_blocks();
            if blocks.len() > 1 {
                let mut acc = QExp::one(prec24);
                for b in blocks {
                    acc = acc.mul_with(&block_theta(&l.sublattice(&b), &w, prec24, mode)?, mode);
                }
                Ok(acc)
            } else {
                block_theta(l, &w, prec24, mode)
            }
        }
    }
}

fn block_theta(l: &Lattice, w: &BigRational, prec24: i64, mode: Parallelism) -> Result<QExp> {
    match coset_theta(l, w, prec24, mode)? {
        Some(t) => Ok(t),
        None => enumeration_theta(l, w, prec24, mode),
    }
}

/// Largest norm whose exponent stays below `prec24`.
fn norm_bound(w: &BigRational, prec24: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(prec24 - 1)) / (w * BigRational::from_integer(BigInt::from(24)))
}

fn grid_index(norm: &BigRational, w: &BigRational, name: &str) -> Result<i64> {
    let e = norm * w * BigRational::from_integer(BigInt::from(24));
    if !e.is_integer() {
        return Err(Error::InvalidLattice(format!("{name}: norm {norm} is off the q^(1/24) grid")));
    }
    Ok(e.to_integer().to_i64().expect("small exponent"))
}

fn enumeration_theta(l: &Lattice, w: &BigRational, prec24: i64, mode: Parallelism) -> Result<QExp> {
    let mut coeffs = vec![BigRational::zero(); prec24 as usize];
    coeffs[0] = BigRational::one();
    for (norm, count) in norm_counts(l, &norm_bound(w, prec24), mode)? {
        let e = grid_index(&norm, w, l.name())?;
        coeffs[e as usize] += BigRational::from_integer(BigInt::from(count));
    }
    QExp::new(0, prec24, coeffs)
}

/// Coset summation; `None` when the lattice has no usable embedding.
fn coset_theta(l: &Lattice, w: &BigRational, prec24: i64, mode: Parallelism) -> Result<Option<QExp>> {
    let Some(y) = l.embedding() else { return Ok(None) };
    let n = l.rank();
    if y[0].len() != n {
        return Ok(None);
    }
    let Some(cosets) = coset_representatives(y) else { return Ok(None) };
    let (a, reps) = cosets;
    // exponent24 = kappa · |y|² for raw integer squared lengths.
    let kappa = w * BigRational::from_integer(BigInt::from(24)) / l.scale2();
    let umax = (BigRational::from_integer(BigInt::from(prec24 - 1)) / &kappa).floor().to_integer();
    let umax = umax.to_usize().expect("small bound");
    let raw = coset_sum(a, &reps, umax, mode);
    let mut coeffs = vec![BigRational::zero(); prec24 as usize];
    for (u, c) in raw.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = &kappa * BigRational::from_integer(BigInt::from(u));
        if !e.is_integer() {
            return Err(Error::InvalidLattice(format!("{}: norm off the q^(1/24) grid", l.name())));
        }
        coeffs[e.to_integer().to_usize().expect("small")] += BigRational::from_integer(c);
    }
    Ok(Some(QExp::new(0, prec24, coeffs)?))
}

/// Smallest `a` with `a·D_n ⊂ L` and one representative per coset of it.
fn coset_representatives(y: &[Vec<i64>]) -> Option<(i64, Vec<Vec<i64>>)> {
    let n = y.len();
    let rat: matrix::RatMatrix =
        y.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let inv = matrix::inverse(&rat)?;
    let det = matrix::det(&rat).abs().to_integer();
    let member = |v: &[i64]| {
        (0..n).all(|j| {
            let s: BigRational = (0..n).map(|i| &inv[i][j] * BigRational::from_integer(BigInt::from(v[i]))).sum();
            s.is_integer()
        })
    };
    let dn = |a: i64| -> Vec<Vec<i64>> {
        if n == 1 {
            return vec![vec![2 * a]];
        }
        let mut g = Vec::new();
        for i in 0..n - 1 {
            let mut v = vec![0; n];
            v[i] = a;
            v[i + 1] = -a;
            g.push(v);
        }
        let mut v = vec![0; n];
        v[0] = a;
        v[1] = a;
        g.push(v);
        g
    };
    let a = (1..=64).find(|&a| dn(a).iter().all(|g| member(g)))?;
    let count = BigInt::from(2) * BigInt::from(a).pow(n as u32) / &det;
    if count > BigInt::from(MAX_COSETS) {
        return None;
    }
    let canon = |v: &[i64]| -> (Vec<i64>, bool) {
        let r: Vec<i64> = v.iter().map(|x| x.rem_euclid(a)).collect();
        let k: i64 = v.iter().zip(&r).map(|(x, ri)| (x - ri) / a).sum();
        (r, k.rem_euclid(2) == 1)
    };
    let rep = |(r, p): &(Vec<i64>, bool)| -> Vec<i64> {
        let mut v = r.clone();
        if *p {
            v[0] += a;
        }
        v
    };
    let start = canon(&vec![0; n]);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut reps = vec![rep(&start)];
    while let Some(key) = queue.pop_front() {
        let base = rep(&key);
        for g in y {
            let v: Vec<i64> = base.iter().zip(g).map(|(b, c)| b + c).collect();
            let k = canon(&v);
            if seen.insert(k.clone()) {
                reps.push(rep(&k));
                queue.push_back(k);
            }
        }
    }
    debug_assert_eq!(BigInt::from(reps.len()), count);
    Some((a, reps))
}

/// Truncated dense series in the raw variable `u = |y|²`.
type Raw = Vec<BigInt>;

fn raw_mul(a: &Raw, b: &Raw) -> Raw {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b[..len - i].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum over all cosets of `½(Π A_{c_i} + Π B_{c_i})`, grouped by the
/// multiset of residue classes.
fn coset_sum(a: i64, reps: &[Vec<i64>], umax: usize, mode: Parallelism) -> Raw {
    let half = (a / 2) as usize;
    // histogram of classes -> (weight of A-product, signed weight of B-product)
    let mut groups: BTreeMap<Vec<u32>, (i64, i64)> = BTreeMap::new();
    for c in reps {
        let mut hist = vec![0u32; half + 1];
        let mut sign = 1i64;
        for (i, &ci) in c.iter().enumerate() {
            let r = ci.rem_euclid(a);
            if i == 0 && ci >= a {
                sign = -sign;
            }
            let cls = if 2 * r > a {
                sign = -sign;
                a - r
            } else {
                r
            };
            if a % 2 == 0 && 2 * r == a {
                sign = 0;
            }
            hist[cls as usize] += 1;
        }
        let e = groups.entry(hist).or_default();
        e.0 += 1;
        e.1 += sign;
    }

    let len = umax + 1;
    let one_dim = |k: i64, alternating: bool| -> Raw {
        let mut s = vec![BigInt::zero(); len];
        let zmax = (len as f64).sqrt() as i64 / a.max(1) + 2;
        for z in -zmax..=zmax {
            let v = k + a * z;
            let u = (v * v) as usize;
            if u < len {
                let sign = if alternating && z.rem_euclid(2) == 1 { -1 } else { 1 };
                s[u] += sign;
            }
        }
        s
    };
    let series_a: Vec<Raw> = (0..=half as i64).map(|k| one_dim(k, false)).collect();
    let series_b: Vec<Raw> = (0..=half as i64).map(|k| one_dim(k, true)).collect();

    let groups: Vec<(Vec<u32>, (i64, i64))> = groups.into_iter().collect();
    let powers = |base: &Raw, e: u32| -> Raw {
        let mut acc = vec![BigInt::zero(); len];
        acc[0] = BigInt::one();
        let mut b = base.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = raw_mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = raw_mul(&b, &b);
            }
        }
        acc
    };
    let parts = par::map(mode, &groups, |(hist, (wa, wb))| {
        let mut total = vec![BigInt::zero(); len];
        let mut add_product = |series: &[Raw], weight: i64| {
            if weight == 0 {
                return;
            }
            let mut acc: Option<Raw> = None;
            for (k, &h) in hist.iter().enumerate() {
                if h > 0 {
                    let p = powers(&series[k], h);
                    acc = Some(match acc {
                        Some(x) => raw_mul(&x, &p),
                        None => p,
                    });
                }
            }
            for (t, x) in total.iter_mut().zip(acc.expect("rank ≥ 1")) {
                *t += x * weight;
            }
        };
        add_product(&series_a, *wa);
        add_product(&series_b, *wb);
        total
    });
    let mut out = vec![BigInt::zero(); len];
    for p in parts {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    for o in &mut out {
        debug_assert!((&*o % 2u32).is_zero());
        *o /= 2;
    }
    out
}

/// `Σ_x P(x) q^{w|x|²}` with `P` evaluated in Euclidean coordinates.
/// Requires an embedding and a homogeneous `P` in as many variables as the
/// embedding has columns.
pub fn weighted_theta(l: &Lattice, p: &Polynomial, prec24: i64) -> Result<QExp> {
    weighted_theta_with(l, p, prec24, Parallelism::default())
}

pub fn weighted_theta_with(l: &Lattice, p: &Polynomial, prec24: i64, mode: Parallelism) -> Result<QExp> {
    let y = l
        .embedding()
        .ok_or_else(|| Error::InvalidArgument(format!("{}: weighted theta needs Euclidean coordinates", l.name())))?;
    let dim = y[0].len();
    if p.nvars() != dim {
        return Err(Error::InvalidArgument(format!(
            "polynomial has {} variables but {} lives in dimension {dim}",
            p.nvars(),
            l.name()
        )));
    }
    let deg = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    // P(x) = s^{-deg} P(xY) with s² = scale2.
    let inv_s2 = BigRational::one() / l.scale2();
    let factor = if deg % 2 == 0 {
        num_traits::pow(inv_s2, (deg / 2) as usize)
    } else {
        let s = rational_sqrt(l.scale2()).ok_or_else(|| {
            Error::IrrationalEvaluation(format!("odd degree {deg} with scale {} not a square", l.scale2()))
        })?;
        num_traits::pow(BigRational::one() / s, deg as usize)
    };
    if prec24 <= 0 {
        return Ok(QExp::zero(prec24));
    }
    let w = l.theta_weight();
    let monos: Vec<(Vec<u32>, BigRational)> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();

    let (den, parts) = enumerate(l, &norm_bound(&w, prec24), mode, HashMap::<u64, Vec<Acc>>::new, |acc, x, q| {
        let yv = l.embed(x).expect("embedding present");
        let slot = acc.entry(q).or_insert_with(|| vec![Acc::default(); monos.len()]);
        for ((e, _), a) in monos.iter().zip(slot.iter_mut()) {
            a.add_monomial(&yv, e);
        }
    })?;
    let mut sums: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for part in parts {
        for (q, accs) in part {
            let slot = sums.entry(q).or_insert_with(|| vec![BigInt::zero(); monos.len()]);
            for (s, a) in slot.iter_mut().zip(accs) {
                *s += a.total();
            }
        }
    }
    let mut coeffs = vec![BigRational::zero(); prec24 as usize];
    if deg == 0 {
        coeffs[0] = p.coefficient(&vec![0; dim]);
    }
    for (q, s) in sums {
        let norm = BigRational::new(BigInt::from(q), den.clone());
        let e = grid_index(&norm, &w, l.name())? as usize;
        let v: BigRational = monos.iter().zip(s).map(|((_, c), si)| c * BigRational::from_integer(si)).sum();
        coeffs[e] += v * &factor;
    }
    QExp::new(0, prec24, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::catalog;
    use crate::qseries::{eisenstein, orders_to_prec24};
    use crate::rational::int;

    #[test]
    fn e8_is_e4_both_ways() {
        let p = orders_to_prec24(6);
        let e4 = eisenstein(4, p).unwrap();
        let l = catalog::e8();
        assert_eq!(theta(&l, p).unwrap(), e4);
        assert_eq!(theta_by_enumeration(&l, p, Parallelism::Parallel).unwrap(), e4);
    }

    #[test]
    fn cosets_match_enumeration() {
        for l in [catalog::zn(3), catalog::a2(), catalog::sqrt2_zn(2), catalog::a1(), catalog::d16plus()] {
            let p = orders_to_prec24(3);
            let a = theta_with(&l, p, ThetaMethod::Auto, Parallelism::Sequential).unwrap();
            let b = theta_by_enumeration(&l, p, Parallelism::Sequential).unwrap();
            assert_eq!(a, b, "{}", l.name());
        }
    }

    #[test]
    fn z2_counts() {
        let t = theta(&catalog::zn(2), orders_to_prec24(6)).unwrap();
        let c: Vec<i64> = (0..6).map(|m| t.coefficient(24 * m).unwrap().to_integer().to_i64().unwrap()).collect();
        assert_eq!(c, vec![1, 4, 4, 0, 4, 8]);
    }

    #[test]
    fn weighted_by_constant_and_norm() {
        let l = catalog::zn(2);
        let p = orders_to_prec24(5);
        let one = Polynomial::constant(2, int(1));
        assert_eq!(weighted_theta(&l, &one, p).unwrap(), theta(&l, p).unwrap());
        let r2 = Polynomial::parse("x1^2 + x2^2", 2).unwrap();
        let t = weighted_theta(&l, &r2, p).unwrap();
        assert_eq!(t.coefficient(24).unwrap(), int(4));
        assert_eq!(t.coefficient(48).unwrap(), int(8));
        let harmonic = Polynomial::parse("x1^4 - 6*x1^2*x2^2 + x2^4", 2).unwrap();
        let h = weighted_theta(&l, &harmonic, p).unwrap();
        assert_eq!(h.coefficient(24).unwrap(), int(4));
        assert!(matches!(
            weighted_theta(&l, &Polynomial::parse("x1 + 1", 2).unwrap(), p),
            Err(Error::NotHomogeneous)
        ));
        assert!(matches!(
            weighted_theta(&catalog::a1(), &Polynomial::var(1, 0), p),
            Err(Error::IrrationalEvaluation(_))
        ));
    }
}
