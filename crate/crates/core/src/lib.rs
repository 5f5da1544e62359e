//! Bilinear assignment problem: instances, constructive heuristics, local
//! searches over exchange and shift neighbourhoods, and multistart drivers.

pub mod brute;
pub mod caches;
pub mod construct;
pub mod error;
pub mod exec;
pub mod instance;
pub mod instgen;
pub mod lap;
pub mod matrix;
pub mod meta;
pub mod neighborhoods;
pub mod objective;
pub mod report;
pub mod rng;
pub mod shift;
pub mod solution;

pub use brute::{brute_force_solve, brute_force_solve_with_limit};
pub use caches::DeltaCaches;
pub use construct::Constructor;
pub use error::{BapError, Result};
pub use exec::Exec;
pub use instance::{BapInstance, PointSets};
pub use lap::{lap_exact, lap_greedy, LapResult};
pub use matrix::SquareMatrix;
pub use meta::{h_start_vns, multistart, vns, Algorithm, Budget, MetaReport, Search, VnsVariant};
pub use neighborhoods::{certify_local_optimum, local_search, Family, LapMode, Move, Rule, SearchVariant};
pub use objective::{average_value, evaluate, optimized_two_exchange_bound, two_exchange_bound, Rational};
pub use report::SearchReport;
pub use solution::Solution;
