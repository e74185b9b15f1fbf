//! Subsets of the positive integers and the number-theoretic searches
//! the constructions depend on.

mod error;
mod parse;
pub mod primes;
mod search;
mod set;

pub use error::LsetError;
pub use parse::parse_set_spec;
pub use search::{
    far_from_l_extend, far_from_l_set, find_lonely, find_x, find_x_with_g_at_least, g_of,
    g_value, gap_witness, lonely_sequence, lower_density_prefix, perturb, DensityEstimate,
    GValue,
};
pub use set::{removal_window, IntSet, SetKind};
