//! Satisfaction equilibria of power-control games on the Gaussian
//! interference channel.
//!
//! Each transmitter–receiver pair wants a rate of at least `Γ_i` and pays
//! its own transmit power. The crate decides whether every pair can be
//! satisfied at once, computes the efficient satisfaction equilibrium (each
//! player at its least satisfying power), checks it against the valued
//! equilibrium (least `p_i / u_i`), and measures the price of efficiency and
//! the max price of satisfaction. [`oracle`] is a brute-force grid check for
//! all of it.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod scenario;

pub use analysis::{
    analyze, build_system, ese_two_player, exists_two_player, is_efficient_se,
    is_satisfaction_equilibrium, is_valued_se, satisfaction_response_dynamics, solve_ese,
    DynamicsOutcome, EquilibriumReport, EseSolution, SeRegionSystem,
};
pub use error::{Error, Result};
pub use metrics::{max_price_of_satisfaction, price_of_efficiency, MetricsReport};
pub use model::{normalize, GameSpec, PowerProfile, RawChannel};
pub use oracle::{enumerate, OracleResult};
pub use scenario::Scenario;
