//! Baseline miners that extend patterns by explicit set intersection.

pub mod apriori;
pub mod cmc;

pub use apriori::mine_apriori;
pub use cmc::mine_cmc;
