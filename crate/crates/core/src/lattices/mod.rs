//! Lattices, exact short-vector enumeration, theta series and spherical
//! design tests.

pub mod catalog;
mod design;
mod enumerate;
mod lattice;
pub mod matrix;
mod polynomial;
mod theta;

use num_bigint::BigInt;

pub use design::{
    moment_polynomial, spherical_design_test, spherical_design_test_with, DegreeResult, Deviation,
    SphericalDesignReport, COSTLY_RANK,
};
pub use enumerate::{norm_counts, shell, shell_count, shell_with, Shell};
pub use lattice::Lattice;
pub use polynomial::Polynomial;
pub use theta::{theta, theta_by_enumeration, theta_with, weighted_theta, weighted_theta_with, ThetaMethod};

/// Running integer sum kept in `i128` and spilled to a big integer on overflow.
#[derive(Clone, Debug, Default)]
pub(crate) struct Acc {
    small: i128,
    big: BigInt,
}

impl Acc {
    pub(crate) fn add(&mut self, v: i128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = v;
            }
        }
    }

    pub(crate) fn add_big(&mut self, v: BigInt) {
        self.big += v;
    }

    /// Adds `Π y_i^{e_i}`.
    pub(crate) fn add_monomial(&mut self, y: &[i64], e: &[u32]) {
        let mut v: Option<i128> = Some(1);
        for (yi, &k) in y.iter().zip(e) {
            if k > 0 {
                v = v.and_then(|v| (*yi as i128).checked_pow(k).and_then(|p| v.checked_mul(p)));
            }
        }
        match v {
            Some(v) => self.add(v),
            None => self.add_big(y.iter().zip(e).map(|(yi, &k)| BigInt::from(*yi).pow(k)).product()),
        }
    }

    pub(crate) fn merge(&mut self, o: Acc) {
        self.big += o.big;
        self.add(o.small);
    }

    pub(crate) fn total(self) -> BigInt {
        self.big + self.small
    }
}
