//! The algebra of `S_k^n`, table-backed functions, oracles and brute-force ground truth.

pub mod brute;
pub mod kvector;
pub mod oracle;
pub mod table;
pub mod value;

pub use brute::{brute_minimizer_set, is_closed_set, maximal_elements, minimum_of};
pub use kvector::{all_points, partial_leq, sq_join, sq_meet, support, KVector};
pub use oracle::{Fixing, MinimizingOracle, TableOracle, TieBreak};
pub use table::TableFunction;
pub use value::{parse_rat, rat_to_string, value_from_json, value_to_json, Rat, Value};
