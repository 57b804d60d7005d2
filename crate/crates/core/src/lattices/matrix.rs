//! Exact matrix helpers over the rationals and the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan; `None` for singular input.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        inv.swap(p, k);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
                let t = &f * &inv[k][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Diagonal of the `L D L^T` factorisation; `None` if a pivot vanishes.
pub fn ldl_diagonal(m: &RatMatrix) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            return None;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        d.push(pivot);
    }
    Some(d)
}

pub fn is_symmetric(m: &RatMatrix) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

pub fn is_positive_definite(m: &RatMatrix) -> bool {
    ldl_diagonal(m).is_some_and(|d| d.iter().all(|x| x.is_positive()))
}

/// `Y Y^T / scale2`.
pub fn gram_from_rows(rows: &[Vec<i64>], scale2: &BigRational) -> RatMatrix {
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| {
                    let dot: i128 = a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum();
                    BigRational::from_integer(BigInt::from(dot)) / scale2
                })
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form of the lattice generated by `gens`: an
/// upper-triangular basis with positive pivots and off-diagonal entries
/// reduced into `(-p/2, p/2]` against the pivot below them.
pub fn hermite_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(n) = gens.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    rows.swap(r, i);
                    if rows[r][col] < 0 {
                        rows[r].iter_mut().for_each(|x| *x = -*x);
                    }
                }
                break;
            }
            let &best = nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pivot_row = rows[best].clone();
            for &i in &nz {
                if i == best {
                    continue;
                }
                let q = rows[i][col].div_euclid(pivot_row[col]);
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= q * p;
                }
            }
        }
        if r < rows.len() && rows[r][col] != 0 {
            let pivot_row = rows[r].clone();
            let p = pivot_row[col];
            for i in 0..r {
                let x = rows[i][col];
                let mut q = x.div_euclid(p);
                if 2 * (x - q * p) > p {
                    q += 1;
                }
                if q != 0 {
                    for (y, pv) in rows[i].iter_mut().zip(&pivot_row) {
                        *y -= q * pv;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.into_iter()
        .map(|row| row.into_iter().map(|x| i64::try_from(x).expect("basis entry fits i64")).collect())
        .collect()
}
