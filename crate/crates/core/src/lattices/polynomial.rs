//! Multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Sparse polynomial in `nvars` variables, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Polynomial::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial::from_terms(nvars, [(e, BigRational::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common total degree, if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next().unwrap_or(0);
        degs.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * BigRational::from_integer(BigInt::from(e[i])));
            }
        }
        p
    }

    /// `Σ ∂²/∂x_i²`. Only defined for homogeneous input.
    pub fn laplacian(&self) -> Result<Polynomial> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok((0..self.nvars).fold(Polynomial::zero(self.nvars), |acc, i| acc.add(&self.derivative(i).derivative(i))))
    }

    pub fn is_harmonic(&self) -> Result<bool> {
        Ok(self.laplacian()?.is_zero())
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).filter(|(k, _)| **k > 0).fold(c.clone(), |acc, (k, v)| acc * num_traits::pow(v.clone(), *k as usize))
            })
            .sum()
    }

    pub fn eval_int(&self, x: &[i64]) -> BigRational {
        let xs: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        self.eval(&xs)
    }

    /// Substitute `x_i ↦ Σ_j m[i][j] y_j`, giving a polynomial in `m[0].len()` variables.
    pub fn substitute_linear(&self, m: &[Vec<BigRational>]) -> Polynomial {
        let k = m.first().map_or(0, Vec::len);
        let lin: Vec<Polynomial> = m
            .iter()
            .map(|row| Polynomial::from_terms(k, row.iter().enumerate().map(|(j, c)| {
                let mut e = vec![0; k];
                e[j] = 1;
                (e, c.clone())
            })))
            .collect();
        let mut out = Polynomial::zero(k);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(k, c.clone());
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = t.mul(&lin[i].pow(p));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Parse expressions like `x1^4 - 6*x1^2*x2^2 + x2^4` (variables are 1-based).
    pub fn parse(s: &str, nvars: usize) -> Result<Polynomial> {
        let bad = |m: &str| Error::Parse(format!("polynomial {s:?}: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut p = Polynomial::zero(nvars);
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            rest = tail;
            let mut coeff = BigRational::from_integer(BigInt::from(sign));
            let mut e = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(v) = factor.strip_prefix('x') {
                    let (idx, pow) = match v.split_once('^') {
                        Some((i, k)) => (i, k.parse::<u32>().map_err(|_| bad("exponent"))?),
                        None => (v, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad("variable index"))?;
                    if i == 0 || i > nvars {
                        return Err(bad("variable out of range"));
                    }
                    e[i - 1] += pow;
                } else {
                    coeff *= crate::rational::parse_rational(factor).map_err(|_| bad("coefficient"))?;
                }
            }
            p.add_term(e, coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| if *p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                .collect();
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn harmonic_examples() {
        let p = Polynomial::parse("x1^4 - 6*x1^2*x2^2 + x2^4", 2).unwrap();
        assert!(p.is_harmonic().unwrap());
        let q = Polynomial::parse("x1^2 + x2^2", 2).unwrap();
        assert_eq!(q.laplacian().unwrap(), Polynomial::constant(2, int(4)));
        assert!(matches!(Polynomial::parse("x1^2 + x2", 2).unwrap().laplacian(), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn arithmetic_and_display() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(p.eval_int(&[2, 3]), int(25));
        assert_eq!(p.sub(&p), Polynomial::zero(2));
        assert_eq!(Polynomial::parse("-1/2*x2 + 3", 2).unwrap().to_string(), "-1/2*x2 + 3");
        let sub = x.substitute_linear(&[vec![int(1), int(1)], vec![int(0), int(1)]]);
        assert_eq!(sub, x.add(&y));
    }
}
