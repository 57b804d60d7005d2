//! Exact short-vector enumeration.
//!
//! Fincke–Pohst over the fraction-free (Bareiss) factorisation of the
//! integral Gram matrix `G' = D·G`. With leading minors `D_k` and Bareiss rows
//! `A`, the norm splits as `x^T G' x = Σ_k u_k² / (D_{k-1} D_k)` where
//! `u_k = Σ_{j≥k} A_kj x_j`, and every partial sum scaled by `D_{k-1}` is an
//! integer. No floating point is involved.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::Lattice;
use super::matrix;
use crate::par::{self, Parallelism};
use crate::rational::serde_rational;
use crate::{Error, Result};

trait Int: Clone + Send + Sync + PartialOrd {
    fn from_big(x: &BigInt) -> Self;
    fn nil() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn mul_i64(&self, o: i64) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn floor_div(&self, o: &Self) -> i64;
    fn ceil_div(&self, o: &Self) -> i64;
    fn negative(&self) -> bool;
    fn as_u64(&self) -> u64;
}

impl Int for i128 {
    fn from_big(x: &BigInt) -> Self {
        x.to_i128().expect("bound checked")
    }
    fn nil() -> Self {
        0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_i64(&self, o: i64) -> Self {
        self * o as i128
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn isqrt(&self) -> Self {
        i128::isqrt(*self)
    }
    fn floor_div(&self, o: &Self) -> i64 {
        self.div_euclid(*o) as i64
    }
    fn ceil_div(&self, o: &Self) -> i64 {
        -((-self).div_euclid(*o)) as i64
    }
    fn negative(&self) -> bool {
        *self < 0
    }
    fn as_u64(&self) -> u64 {
        *self as u64
    }
}

impl Int for BigInt {
    fn from_big(x: &BigInt) -> Self {
        x.clone()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_i64(&self, o: i64) -> Self {
        self * o
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn isqrt(&self) -> Self {
        self.sqrt()
    }
    fn floor_div(&self, o: &Self) -> i64 {
        self.div_floor(o).to_i64().expect("coordinate fits i64")
    }
    fn ceil_div(&self, o: &Self) -> i64 {
        (-(-self).div_floor(o)).to_i64().expect("coordinate fits i64")
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn as_u64(&self) -> u64 {
        ToPrimitive::to_u64(self).expect("norm fits u64")
    }
}

struct Enumerator<T> {
    n: usize,
    a: Vec<Vec<T>>,
    d: Vec<T>,
    dprev: Vec<T>,
    bound: T,
}

#[derive(Clone)]
struct Node<T> {
    /// Number of coordinates still free; `x[level..]` are fixed.
    level: usize,
    x: Vec<i64>,
    partial: T,
}

impl<T: Int> Enumerator<T> {
    fn new(f: &Factorisation) -> Self {
        let conv = |v: &Vec<BigInt>| v.iter().map(T::from_big).collect::<Vec<_>>();
        Enumerator {
            n: f.a.len(),
            a: f.a.iter().map(conv).collect(),
            d: conv(&f.d),
            dprev: conv(&f.dprev),
            bound: T::from_big(&f.bound),
        }
    }

    /// Admissible range for `x_k` given the fixed coordinates above it.
    fn range(&self, k: usize, x: &[i64], partial: &T) -> Option<(i64, i64, T)> {
        let mut t = T::nil();
        for j in k + 1..self.n {
            if x[j] != 0 {
                t = t.add(&self.a[k][j].mul_i64(x[j]));
            }
        }
        let cap = self.dprev[k].mul(&self.d[k].mul(&self.bound).sub(partial));
        if cap.negative() {
            return None;
        }
        let u = cap.isqrt();
        let lo = T::nil().sub(&u).sub(&t).ceil_div(&self.d[k]);
        let hi = u.sub(&t).floor_div(&self.d[k]);
        (lo <= hi).then_some((lo, hi, t))
    }

    fn next_partial(&self, k: usize, xk: i64, t: &T, partial: &T) -> T {
        let u = self.d[k].mul_i64(xk).add(t);
        self.dprev[k].mul(partial).add(&u.mul(&u)).div_exact(&self.d[k])
    }

    fn children(&self, node: &Node<T>) -> Vec<Node<T>> {
        let k = node.level - 1;
        let Some((lo, hi, t)) = self.range(k, &node.x, &node.partial) else {
            return Vec::new();
        };
        (lo..=hi)
            .map(|v| {
                let mut x = node.x.clone();
                x[k] = v;
                Node { level: k, partial: self.next_partial(k, v, &t, &node.partial), x }
            })
            .collect()
    }

    fn walk<F: FnMut(&[i64], &T)>(&self, level: usize, x: &mut [i64], partial: &T, f: &mut F) {
        if level == 0 {
            f(x, partial);
            return;
        }
        let k = level - 1;
        let Some((lo, hi, t)) = self.range(k, x, partial) else {
            return;
        };
        for v in lo..=hi {
            x[k] = v;
            let p = self.next_partial(k, v, &t, partial);
            self.walk(k, x, &p, f);
        }
        x[k] = 0;
    }

    fn run<R, I, V>(&self, mode: Parallelism, init: &I, visit: &V) -> Vec<R>
    where
        R: Send,
        I: Fn() -> R + Sync,
        V: Fn(&mut R, &[i64], u64) + Sync,
    {
        let root = Node { level: self.n, x: vec![0; self.n], partial: T::nil() };
        let mut frontier = vec![root];
        if mode.is_parallel() {
            let target = 64 * par::current_threads().max(1);
            while frontier.len() < target && frontier.iter().all(|nd| nd.level > 0) {
                frontier = frontier.iter().flat_map(|nd| self.children(nd)).collect();
                if frontier.is_empty() {
                    break;
                }
            }
        }
        par::map(mode, &frontier, |node| {
            let mut acc = init();
            let mut x = node.x.clone();
            self.walk(node.level, &mut x, &node.partial, &mut |v: &[i64], p: &T| visit(&mut acc, v, p.as_u64()));
            acc
        })
    }
}

struct Factorisation {
    a: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    dprev: Vec<BigInt>,
    bound: BigInt,
    fits_i128: bool,
}

fn factorise(gram: &[Vec<BigInt>], bound: BigInt) -> Factorisation {
    let n = gram.len();
    let mut m: Vec<Vec<BigInt>> = gram.to_vec();
    let mut a = vec![vec![BigInt::zero(); n]; n];
    let mut prev = BigInt::one();
    for k in 0..n {
        a[k][k..].clone_from_slice(&m[k][k..]);
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d: Vec<BigInt> = (0..n).map(|k| a[k][k].clone()).collect();
    let dprev: Vec<BigInt> = (0..n).map(|k| if k == 0 { BigInt::one() } else { d[k - 1].clone() }).collect();

    // Magnitude check for the machine-integer path.
    let rat: matrix::RatMatrix =
        gram.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let inv = matrix::inverse(&rat).expect("definite");
    let xmax: Vec<BigInt> = (0..n)
        .map(|j| (&inv[j][j] * BigRational::from_integer(bound.clone())).to_integer().sqrt() + 1)
        .collect();
    let limit = BigInt::one() << 120;
    let fits_i128 = (0..n).all(|k| {
        let cap = &dprev[k] * &d[k] * &bound;
        let t: BigInt = (k..n).map(|j| a[k][j].abs() * &xmax[j]).sum();
        cap < limit && &t * &t < limit && &dprev[k] * &d[k] * &bound * &d[k] < limit
    });
    Factorisation { a, d, dprev, bound, fits_i128 }
}

/// Enumerate every `x` with `0 < |x|² ≤ bound`, in parallel over top-level
/// prefixes. `visit` receives the scaled norm `D·|x|²`; one accumulator is
/// produced per prefix, in a fixed order. Returns `D` and the accumulators.
pub(crate) fn enumerate<R, I, V>(
    l: &Lattice,
    bound: &BigRational,
    mode: Parallelism,
    init: I,
    visit: V,
) -> Result<(BigInt, Vec<R>)>
where
    R: Send,
    I: Fn() -> R + Sync,
    V: Fn(&mut R, &[i64], u64) + Sync,
{
    let (den, gram) = l.integral_gram();
    if bound.is_negative() {
        return Ok((den, Vec::new()));
    }
    let scaled = (bound * BigRational::from_integer(den.clone())).floor().to_integer();
    if scaled.to_u64().is_none() {
        return Err(Error::CostGuard(format!("norm bound {bound} is too large to enumerate")));
    }
    let f = factorise(&gram, scaled);
    let skip_zero = |acc: &mut R, x: &[i64], q: u64| {
        if q != 0 {
            visit(acc, x, q)
        }
    };
    let out = if f.fits_i128 {
        Enumerator::<i128>::new(&f).run(mode, &init, &skip_zero)
    } else {
        Enumerator::<BigInt>::new(&f).run(mode, &init, &skip_zero)
    };
    Ok((den, out))
}

/// All vectors of one norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Shell {
    pub lattice: String,
    #[serde(with = "serde_rational")]
    pub norm: BigRational,
    pub rank: usize,
    pub count: usize,
    pub vectors: Vec<Vec<i64>>,
}

impl Shell {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_antipodal(&self) -> bool {
        self.vectors.iter().all(|v| {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            self.vectors.binary_search(&neg).is_ok()
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shell serialises")
    }
}

/// The vectors of norm `m`, in lexicographic order of coordinates.
pub fn shell(l: &Lattice, m: &BigRational) -> Result<Shell> {
    shell_with(l, m, Parallelism::default())
}

pub fn shell_with(l: &Lattice, m: &BigRational, mode: Parallelism) -> Result<Shell> {
    let den = l.gram_denominator();
    let target = m * BigRational::from_integer(den.clone());
    let mut vectors = Vec::new();
    if target.is_integer() && target.is_positive() {
        let t = target.to_integer().to_u64().unwrap_or(u64::MAX);
        let (_, parts) = enumerate(l, m, mode, Vec::new, |acc: &mut Vec<Vec<i64>>, x, q| {
            if q == t {
                acc.push(x.to_vec());
            }
        })?;
        vectors = parts.into_iter().flatten().collect();
        vectors.sort_unstable();
    }
    Ok(Shell { lattice: l.name().to_string(), norm: m.clone(), rank: l.rank(), count: vectors.len(), vectors })
}

/// Size of the norm-`m` shell without storing it.
pub fn shell_count(l: &Lattice, m: &BigRational, mode: Parallelism) -> Result<u64> {
    let target = m * BigRational::from_integer(l.gram_denominator());
    if !target.is_integer() || !target.is_positive() {
        return Ok(0);
    }
    let t = target.to_integer().to_u64().unwrap_or(u64::MAX);
    let (_, parts) = enumerate(l, m, mode, || 0u64, |acc, _, q| {
        if q == t {
            *acc += 1
        }
    })?;
    Ok(parts.into_iter().sum())
}

/// Number of vectors of each nonzero norm up to `max_norm`, ascending.
pub fn norm_counts(l: &Lattice, max_norm: &BigRational, mode: Parallelism) -> Result<Vec<(BigRational, u64)>> {
    let (den, parts) = enumerate(l, max_norm, mode, BTreeMap::<u64, u64>::new, |acc, _, q| {
        *acc.entry(q).or_default() += 1
    })?;
    let mut total = BTreeMap::<u64, u64>::new();
    for part in parts {
        for (q, c) in part {
            *total.entry(q).or_default() += c;
        }
    }
    Ok(total
        .into_iter()
        .map(|(q, c)| (BigRational::new(BigInt::from(q), den.clone()), c))
        .collect())
}
