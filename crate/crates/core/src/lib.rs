//! Exact q-series arithmetic, lattice theta series and design-strength
//! verdicts.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: formal q-expansions on the `q^(1/24)` grid with exact
//!   rational coefficients, eta products, Eisenstein series and the
//!   eta-quotient modularity checks.
//! - [`lattices`]: Gram-matrix lattices, exact short-vector enumeration,
//!   theta series (plain and weighted) and spherical design tests.
//! - [`modforms`]: the closed-form Hecke coefficients of `eta(3z)^8` and
//!   the bound/non-vanishing checks built on them.
//! - [`designs`]: conformal design verdicts and vanishing-coefficient scans.
//! - [`cli`]: the command surface used by the `qdesign` binary.

pub mod arith;
pub mod cli;
pub mod designs;
mod error;
pub mod lattices;
pub mod modforms;
pub mod par;
pub mod qseries;
pub mod rational;

pub use error::{Error, Result};
