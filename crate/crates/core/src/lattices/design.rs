//! Spherical design tests for lattice shells.
//!
//! A shell `X` of norm `m` in rank `n` is a `t`-design iff for every
//! `j ≤ t` and every `α`
//!
//! `Σ_{x∈X} (x·α)^j = |X| m^{j/2} (j-1)!! / (n(n+2)…(n+j-2)) · |α|^j`
//!
//! for even `j`, with the left side vanishing for odd `j`. Writing
//! `β_i = b_i·α` in the Gram-dual coordinates, `x·α = Σ x_i β_i` and
//! `|α|² = β^T G^{-1} β`, so both sides are exact polynomials in `β` and no
//! Euclidean embedding is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::enumerate::Shell;
use super::lattice::Lattice;
use super::polynomial::Polynomial;
use super::Acc;
use crate::par::{self, Parallelism};
use crate::rational::{serde_rational, to_fraction_string};
use crate::{Error, Result};

/// Above this rank, degrees past 8 need explicit opt-in.
pub const COSTLY_RANK: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Deviation {
    pub monomial: Vec<u32>,
    pub moment: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeResult {
    pub degree: u32,
    pub passed: bool,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_deviation: Option<Deviation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphericalDesignReport {
    pub lattice: String,
    #[serde(with = "serde_rational")]
    pub norm: BigRational,
    pub size: usize,
    pub rank: usize,
    pub t: u32,
    /// Largest `t' ≤ t` with every degree up to `t'` passing.
    pub strength: u32,
    pub is_design: bool,
    pub degrees: Vec<DegreeResult>,
}

impl SphericalDesignReport {
    pub fn degree(&self, j: u32) -> Option<&DegreeResult> {
        self.degrees.iter().find(|d| d.degree == j)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

fn check_cost(rank: usize, j: u32, allow_costly: bool) -> Result<()> {
    if rank > COSTLY_RANK && j > 8 && !allow_costly {
        return Err(Error::CostGuard(format!("degree {j} moments in rank {rank}")));
    }
    Ok(())
}

/// Monomials of degree `d` in `r` variables, for each `r ≤ n`, `d ≤ j`.
fn monomial_counts(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut c = vec![vec![0usize; j + 1]; n + 1];
    c[0][0] = 1;
    for r in 1..=n {
        for d in 0..=j {
            c[r][d] = (0..=d).map(|e| c[r - 1][d - e]).sum();
        }
    }
    c
}

/// Exponent vectors of degree `j` in descending lexicographic order.
fn monomials(n: usize, j: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = d;
            out.push(cur.clone());
            return;
        }
        for e in (0..=d).rev() {
            cur[i] = e;
            rec(i + 1, d - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, j, &mut vec![0; n], &mut out);
    }
    out
}

/// `Σ_x Π x_i^{e_i}` for every monomial, in the order of [`monomials`].
fn power_sums(vectors: &[Vec<i64>], n: usize, j: u32, mode: Parallelism) -> Vec<BigInt> {
    let counts = monomial_counts(n, j as usize);
    let total = counts[n][j as usize];
    let chunk = 64;
    let parts = par::map_range(mode, 0..vectors.len().div_ceil(chunk), |c| {
        let mut acc = vec![Acc::default(); total];
        for x in &vectors[c * chunk..((c + 1) * chunk).min(vectors.len())] {
            walk(x, 0, j, Some(1), &mut vec![0; n], &mut 0, &counts, &mut acc);
        }
        acc
    });
    let mut acc = vec![Acc::default(); total];
    for part in parts {
        for (a, p) in acc.iter_mut().zip(part) {
            a.merge(p);
        }
    }
    acc.into_iter().map(Acc::total).collect()
}

fn walk(x: &[i64], i: usize, d: u32, prod: Option<i128>, cur: &mut [u32], idx: &mut usize, counts: &[Vec<usize>], acc: &mut [Acc]) {
    let n = x.len();
    if i + 1 == n {
        if x[i] != 0 || d == 0 {
            cur[i] = d;
            match prod.and_then(|p| (x[i] as i128).checked_pow(d).and_then(|v| p.checked_mul(v))) {
                Some(v) => acc[*idx].add(v),
                None => acc[*idx].add_big(exact_monomial(x, cur)),
            }
        }
        *idx += 1;
        return;
    }
    for e in (0..=d).rev() {
        let rest = counts[n - i - 1][(d - e) as usize];
        if x[i] == 0 && e > 0 {
            *idx += rest;
            continue;
        }
        cur[i] = e;
        let p = prod.and_then(|p| (x[i] as i128).checked_pow(e).and_then(|v| p.checked_mul(v)));
        walk(x, i + 1, d - e, p, cur, idx, counts, acc);
    }
}

fn exact_monomial(x: &[i64], e: &[u32]) -> BigInt {
    x.iter().zip(e).map(|(v, &k)| BigInt::from(*v).pow(k)).product()
}

fn multinomial(e: &[u32]) -> BigInt {
    let mut r = BigInt::one();
    let mut k = 0u32;
    for &ei in e {
        for i in 1..=ei {
            k += 1;
            r = r * k / i;
        }
    }
    r
}

/// `Σ_{x∈X} (Σ_i x_i β_i)^j` as a polynomial in `β`.
pub fn moment_polynomial(shell: &Shell, j: u32, allow_costly: bool, mode: Parallelism) -> Result<Polynomial> {
    let n = shell.rank;
    check_cost(n, j, allow_costly)?;
    let sums = power_sums(&shell.vectors, n, j, mode);
    let monos = monomials(n, j);
    Ok(Polynomial::from_terms(
        n,
        monos.into_iter().zip(sums).map(|(e, s)| {
            let c = BigRational::from_integer(multinomial(&e) * s);
            (e, c)
        }),
    ))
}

/// `|X| m^{j/2} (j-1)!! / (n(n+2)…(n+j-2))` for even `j`.
fn lambda(size: usize, m: &BigRational, n: usize, j: u32) -> BigRational {
    let mut r = BigRational::from_integer(BigInt::from(size)) * num_traits::pow(m.clone(), (j / 2) as usize);
    let mut k = 1;
    while k < j {
        r *= BigRational::from_integer(BigInt::from(k));
        k += 2;
    }
    for i in 0..j / 2 {
        r /= BigRational::from_integer(BigInt::from(n as u32 + 2 * i));
    }
    r
}

pub fn spherical_design_test(l: &Lattice, shell: &Shell, t: u32) -> Result<SphericalDesignReport> {
    spherical_design_test_with(l, shell, t, false, Parallelism::default())
}

pub fn spherical_design_test_with(
    l: &Lattice,
    shell: &Shell,
    t: u32,
    allow_costly: bool,
    mode: Parallelism,
) -> Result<SphericalDesignReport> {
    if shell.is_empty() {
        return Err(Error::InvalidArgument(format!("shell of norm {} is empty", shell.norm)));
    }
    if shell.rank != l.rank() {
        return Err(Error::InvalidArgument("shell and lattice ranks differ".into()));
    }
    let n = l.rank();
    check_cost(n, t, allow_costly)?;
    let antipodal = shell.is_antipodal();
    let ginv = l.gram_inverse();
    let quad = Polynomial::from_terms(
        n,
        (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| {
            let mut e = vec![0; n];
            e[i] += 1;
            e[k] += 1;
            (e, ginv[i][k].clone())
        }),
    );
    let mut degrees = Vec::new();
    let mut strength = 0;
    let mut ok_so_far = true;
    for j in 1..=t {
        let result = if j % 2 == 1 && antipodal {
            DegreeResult { degree: j, passed: true, method: "antipodal", first_deviation: None }
        } else {
            let moment = moment_polynomial(shell, j, allow_costly, mode)?;
            let expected = if j % 2 == 1 {
                Polynomial::zero(n)
            } else {
                quad.pow(j / 2).scale(&lambda(shell.len(), &shell.norm, n, j))
            };
            let diff = moment.sub(&expected);
            let first_deviation = diff.terms().next().map(|(e, _)| Deviation {
                monomial: e.clone(),
                moment: to_fraction_string(&moment.coefficient(e)),
                expected: to_fraction_string(&expected.coefficient(e)),
            });
            DegreeResult { degree: j, passed: first_deviation.is_none(), method: "moments", first_deviation }
        };
        ok_so_far &= result.passed;
        if ok_so_far {
            strength = j;
        }
        degrees.push(result);
    }
    Ok(SphericalDesignReport {
        lattice: l.name().to_string(),
        norm: shell.norm.clone(),
        size: shell.len(),
        rank: n,
        t,
        strength,
        is_design: strength == t,
        degrees,
    })
}
