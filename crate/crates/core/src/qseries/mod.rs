//! Exact formal q-expansions and the classical series built from them.

mod eisenstein;
mod eta;
mod modularity;
mod qexp;

pub use eisenstein::{bernoulli, delta, eisenstein, sigma, tau, tau_table};
pub use eta::{eta, eta_product, euler_power, EtaQuotientSpec};
pub use modularity::{cusp_order, validate_eta_quotient, ModularityReport};
pub use qexp::QExp;

/// Converts an exponent in whole q-orders to the internal 1/24 grid.
pub fn orders_to_prec24(orders: i64) -> i64 {
    24 * orders
}
