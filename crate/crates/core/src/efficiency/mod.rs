//! SD comparisons, SD-efficiency (trading cycles and an independent LP
//! check), Pareto optimality of discrete assignments and ex post efficiency.

mod cycle;
mod expost;
mod oracle;
mod pareto;
mod sd;

pub use cycle::{find_trading_cycle, is_sd_efficient};
pub use expost::{decompose_ex_post, decompose_ex_post_with_cap, is_ex_post_efficient, ExPostCertificate};
pub use oracle::{sd_improvement, sd_improvement_oracle};
pub use pareto::{
    enumerate_pareto_optimal, enumerate_pareto_optimal_with_cap, is_pareto_optimal,
    uniform_po_mixture, uniform_po_mixture_with_cap,
};
pub use sd::{sd_compare, SdComparison};
