//! Game and graph algorithms.

pub mod buchi;
pub mod dsum;
pub mod karp;
pub mod lassos;
pub mod mean;

pub use buchi::{attractor, solve_buchi_game, solve_buchi_subgame, BuchiGameResult, Subgame};
pub use dsum::{min_dsum_single, solve_dsum_game, solve_dsum_subgame, ValueMap};
pub use karp::{karp_min_mean_cycle, CycleResult};
pub use lassos::{min_limsup_cycle, minimax_lasso_sup, prune_to_accepting_lassos, LassoThreshold};
pub use mean::{solve_energy, solve_mean_game, solve_mean_subgame, EnergyResult};
