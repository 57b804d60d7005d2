use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{self, RatMatrix};
use crate::rational::{parse_rational, to_fraction_string};
use crate::{Error, Result};

/// A positive-definite lattice given by its Gram matrix.
///
/// `embedding`, when present, holds integer rows `Y` with `Y Y^T / scale2`
/// equal to the Gram matrix, so that `x Y / sqrt(scale2)` gives Euclidean
/// coordinates. It may have more columns than the rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    name: String,
    gram: RatMatrix,
    scale2: BigRational,
    embedding: Option<Vec<Vec<i64>>>,
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: RatMatrix) -> Result<Self> {
        let name = name.into();
        if gram.is_empty() {
            return Err(Error::InvalidLattice(format!("{name}: empty Gram matrix")));
        }
        if !matrix::is_symmetric(&gram) {
            return Err(Error::InvalidLattice(format!("{name}: Gram matrix is not symmetric")));
        }
        if !matrix::is_positive_definite(&gram) {
            return Err(Error::InvalidLattice(format!("{name}: Gram matrix is not positive definite")));
        }
        Ok(Lattice { name, gram, scale2: BigRational::one(), embedding: None })
    }

    /// Lattice spanned by the rows of `rows / sqrt(scale2)`.
    pub fn from_embedding(name: impl Into<String>, rows: Vec<Vec<i64>>, scale2: BigRational) -> Result<Self> {
        let name = name.into();
        if !scale2.is_positive() {
            return Err(Error::InvalidLattice(format!("{name}: scale2 must be positive")));
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Error::InvalidLattice(format!("{name}: ragged embedding")));
        }
        let gram = matrix::gram_from_rows(&rows, &scale2);
        let mut l = Lattice::new(name, gram)?;
        l.scale2 = scale2;
        l.embedding = Some(rows);
        Ok(l)
    }

    /// Attach an embedding after checking that it reproduces the Gram matrix.
    pub fn with_embedding(mut self, rows: Vec<Vec<i64>>, scale2: BigRational) -> Result<Self> {
        if rows.len() != self.rank() || !scale2.is_positive() {
            return Err(Error::InvalidLattice(format!("{}: embedding has wrong shape", self.name)));
        }
        if matrix::gram_from_rows(&rows, &scale2) != self.gram {
            return Err(Error::InvalidLattice(format!("{}: embedding does not match Gram matrix", self.name)));
        }
        self.scale2 = scale2;
        self.embedding = Some(rows);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn scale2(&self) -> &BigRational {
        &self.scale2
    }

    pub fn embedding(&self) -> Option<&[Vec<i64>]> {
        self.embedding.as_deref()
    }

    pub fn det(&self) -> BigRational {
        matrix::det(&self.gram)
    }

    pub fn gram_inverse(&self) -> RatMatrix {
        matrix::inverse(&self.gram).expect("Gram matrix is nonsingular")
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && self.gram.iter().enumerate().all(|(i, r)| r[i].to_integer().is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().abs().is_one()
    }

    /// Multiplier `w` in `Θ = Σ q^{w·|x|²}`: 1/2 for even lattices, 1 otherwise.
    pub fn theta_weight(&self) -> BigRational {
        if self.is_even() {
            BigRational::new(BigInt::one(), BigInt::from(2))
        } else {
            BigRational::one()
        }
    }

    /// Lcm of the Gram denominators, so that `denominator · G` is integral.
    pub fn gram_denominator(&self) -> BigInt {
        self.gram.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `denominator · G` as an integer matrix.
    pub fn integral_gram(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let d = self.gram_denominator();
        let g = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect())
            .collect();
        (d, g)
    }

    pub fn norm(&self, x: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, xj) in x.iter().enumerate() {
                if *xj != 0 {
                    acc += &self.gram[i][j] * BigRational::from_integer(BigInt::from(*xi as i128 * *xj as i128));
                }
            }
        }
        acc
    }

    /// `x Y`, the Euclidean coordinates scaled by `sqrt(scale2)`.
    pub fn embed(&self, x: &[i64]) -> Option<Vec<i64>> {
        let y = self.embedding.as_ref()?;
        let dim = y.first().map_or(0, Vec::len);
        let mut out = vec![0i64; dim];
        for (xi, row) in x.iter().zip(y) {
            if *xi != 0 {
                for (o, r) in out.iter_mut().zip(row) {
                    *o += xi * r;
                }
            }
        }
        Some(out)
    }

    /// Minimum nonzero norm, found by enumeration.
    pub fn minimum(&self) -> Result<BigRational> {
        let diag_min = self.gram.iter().enumerate().map(|(i, r)| r[i].clone()).min().expect("rank ≥ 1");
        let hist = super::enumerate::norm_counts(self, &diag_min, crate::par::Parallelism::Sequential)?;
        Ok(hist.into_iter().next().map(|(n, _)| n).unwrap_or(diag_min))
    }

    /// Restriction to a subset of basis vectors.
    pub(crate) fn sublattice(&self, idx: &[usize]) -> Lattice {
        let gram = idx.iter().map(|&i| idx.iter().map(|&j| self.gram[i][j].clone()).collect()).collect();
        let embedding = self.embedding.as_ref().and_then(|y| {
            // Keep the embedding only if the selected rows use columns nobody else touches.
            let cols: Vec<usize> = (0..y[0].len()).filter(|&c| idx.iter().any(|&i| y[i][c] != 0)).collect();
            let others = (0..y.len()).filter(|i| !idx.contains(i));
            let disjoint = others.into_iter().all(|i| cols.iter().all(|&c| y[i][c] == 0));
            disjoint.then(|| idx.iter().map(|&i| cols.iter().map(|&c| y[i][c]).collect()).collect())
        });
        Lattice {
            name: format!("{}[{}]", self.name, idx.len()),
            gram,
            scale2: if embedding.is_some() { self.scale2.clone() } else { BigRational::one() },
            embedding,
        }
    }

    /// Connected components of the Gram matrix's off-diagonal support.
    pub(crate) fn orthogonal_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            seen[s] = true;
            let mut block = Vec::new();
            while let Some(i) = stack.pop() {
                block.push(i);
                for j in 0..n {
                    if !seen[j] && !self.gram[i][j].is_zero() {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LatticeFile::from(self)).expect("lattice serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LatticeFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Lattice::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    name: String,
    rank: usize,
    gram: Vec<Vec<String>>,
    #[serde(default = "one_string")]
    scale2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    embedding: Option<Vec<Vec<i64>>>,
}

fn one_string() -> String {
    "1".into()
}

impl From<&Lattice> for LatticeFile {
    fn from(l: &Lattice) -> Self {
        LatticeFile {
            name: l.name.clone(),
            rank: l.rank(),
            gram: l.gram.iter().map(|r| r.iter().map(to_fraction_string).collect()).collect(),
            scale2: to_fraction_string(&l.scale2),
            embedding: l.embedding.clone(),
        }
    }
}

impl TryFrom<LatticeFile> for Lattice {
    type Error = Error;

    fn try_from(f: LatticeFile) -> Result<Lattice> {
        if f.gram.len() != f.rank || f.gram.iter().any(|r| r.len() != f.rank) {
            return Err(Error::InvalidLattice(format!("{}: Gram matrix is not {}x{}", f.name, f.rank, f.rank)));
        }
        let gram = f
            .gram
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let l = Lattice::new(f.name, gram)?;
        match f.embedding {
            Some(rows) => l.with_embedding(rows, parse_rational(&f.scale2)?),
            None => Ok(l),
        }
    }
}

/// `floor(sqrt(n))` for nonnegative `n`.
pub(crate) fn isqrt_big(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Exact square root of a nonnegative rational, if it exists.
pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = isqrt_big(r.numer());
    let d = isqrt_big(r.denom());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn a2_from_gram_and_embedding() {
        let g = vec![vec![int(1), frac(1, 2)], vec![frac(1, 2), int(1)]];
        let l = Lattice::new("A2", g.clone()).unwrap();
        assert_eq!(l.det(), frac(3, 4));
        assert!(!l.is_integral());
        assert_eq!(l.gram_denominator(), BigInt::from(2));
        let e = l.with_embedding(vec![vec![1, -1, 0], vec![1, 0, -1]], int(2)).unwrap();
        assert_eq!(e.embed(&[1, 1]), Some(vec![2, -1, -1]));
        assert_eq!(e.norm(&[1, 1]), int(3));
        assert!(Lattice::new("bad", vec![vec![int(1), int(2)], vec![int(2), int(1)]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let l = Lattice::from_embedding("A2", vec![vec![1, -1, 0], vec![1, 0, -1]], int(2)).unwrap();
        let back = Lattice::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        let bare = r#"{"name":"Z1","rank":1,"gram":[["1"]]}"#;
        assert_eq!(Lattice::from_json(bare).unwrap().det(), int(1));
    }

    #[test]
    fn blocks() {
        let g = vec![
            vec![int(2), int(0), int(1)],
            vec![int(0), int(1), int(0)],
            vec![int(1), int(0), int(2)],
        ];
        let l = Lattice::new("x", g).unwrap();
        assert_eq!(l.orthogonal_blocks(), vec![vec![0, 2], vec![1]]);
        assert_eq!(rational_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
    }
}
