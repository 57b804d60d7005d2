//! Named lattices.

use num_rational::BigRational;
use num_traits::One;

use super::lattice::Lattice;
use super::matrix::hermite_basis;
use crate::rational::{frac, int};
use crate::{Error, Result};

const GOLAY: &str = include_str!("../../data/golay24.txt");

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["Zn", "sqrt2Zn", "A1", "A2", "E8", "E8E8", "D16plus", "Leech"];

/// `Z^n` with the standard inner product.
pub fn zn(n: usize) -> Lattice {
    Lattice::from_embedding(format!("Z{n}"), unit_rows(n, 1), BigRational::one()).expect("valid")
}

/// `√2 Z^n`, the even rescaling of `Z^n`.
pub fn sqrt2_zn(n: usize) -> Lattice {
    Lattice::from_embedding(format!("sqrt2Z{n}"), unit_rows(n, 1), frac(1, 2)).expect("valid")
}

/// The root lattice `A1 = √2 Z`.
pub fn a1() -> Lattice {
    Lattice::from_embedding("A1", vec![vec![1]], frac(1, 2)).expect("valid")
}

/// The hexagonal lattice with minimal vectors of norm 1.
pub fn a2() -> Lattice {
    Lattice::from_embedding("A2", vec![vec![1, -1, 0], vec![1, 0, -1]], int(2)).expect("valid")
}

/// `E8` in the basis of simple roots.
pub fn e8() -> Lattice {
    Lattice::from_embedding("E8", e8_rows(), int(4)).expect("valid")
}

/// `E8 ⊕ E8`.
pub fn e8e8() -> Lattice {
    let rows = e8_rows();
    let mut out = Vec::new();
    for half in 0..2 {
        for r in &rows {
            let mut v = vec![0; 16];
            v[8 * half..8 * half + 8].copy_from_slice(r);
            out.push(v);
        }
    }
    Lattice::from_embedding("E8E8", out, int(4)).expect("valid")
}

/// `D16⁺`: the vectors of `D16` together with the glue class `(½)^16`.
pub fn d16plus() -> Lattice {
    let mut gens = dn_roots(16, 2);
    gens.push(vec![1; 16]);
    Lattice::from_embedding("D16plus", hermite_basis(&gens), int(4)).expect("valid")
}

/// The Leech lattice, built from the extended binary Golay code: in
/// coordinates scaled by `√8` it is generated by twice the codewords, the
/// vectors `4(e_i ± e_j)` and `(-3, 1^23)`.
pub fn leech() -> Lattice {
    let mut gens: Vec<Vec<i64>> = golay_rows().into_iter().map(|r| r.into_iter().map(|b| 2 * b).collect()).collect();
    gens.extend(dn_roots(24, 4));
    let mut v = vec![1; 24];
    v[0] = -3;
    gens.push(v);
    Lattice::from_embedding("Leech", hermite_basis(&gens), int(8)).expect("valid")
}

/// Generator rows of the extended binary Golay code.
pub fn golay_rows() -> Vec<Vec<i64>> {
    GOLAY
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.bytes().map(|b| i64::from(b == b'1')).collect())
        .collect()
}

/// Look up a catalog lattice: `Z3`, `sqrt2Z2`, `A2`, `E8`, `Leech`, ...
/// Matching ignores case.
pub fn by_name(name: &str) -> Result<Lattice> {
    let lower = name.trim().to_ascii_lowercase();
    let dim = |prefix: &str| -> Option<usize> {
        lower.strip_prefix(prefix).and_then(|d| d.parse().ok()).filter(|&n| (1..=64).contains(&n))
    };
    if let Some(n) = dim("sqrt2z") {
        return Ok(sqrt2_zn(n));
    }
    if let Some(n) = dim("z") {
        return Ok(zn(n));
    }
    Ok(match lower.as_str() {
        "a1" => a1(),
        "a2" => a2(),
        "e8" => e8(),
        "e8e8" | "e8+e8" | "e8^2" => e8e8(),
        "d16plus" | "d16+" => d16plus(),
        "leech" => leech(),
        _ => return Err(Error::UnknownLattice(name.to_string())),
    })
}

fn unit_rows(n: usize, scale: i64) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = scale;
            v
        })
        .collect()
}

/// `c(e_i - e_{i+1})` and `c(e_{n-2} + e_{n-1})`: a basis of `c·D_n`.
fn dn_roots(n: usize, c: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let mut v = vec![0; n];
        v[i] = c;
        v[i + 1] = -c;
        out.push(v);
    }
    let mut v = vec![0; n];
    v[n - 2] = c;
    v[n - 1] = c;
    out.push(v);
    out
}

/// Simple roots of `E8`, doubled to integer coordinates.
fn e8_rows() -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
        let mut v = vec![0; 8];
        v[0] = 2;
        v[1] = 2;
        v
    }];
    for i in 0..6 {
        let mut v = vec![0; 8];
        v[i] = -2;
        v[i + 1] = 2;
        rows.push(v);
    }
    rows
}
