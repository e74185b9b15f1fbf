//! Builders for the two witness graph families.

mod gadget;
mod graph;
mod grid;
mod subdivide;
mod wall;

use thiserror::Error;

use crate::lset::LsetError;

pub use gadget::{construct_gadget_witness, ell_window, g_threshold, GadgetWitness, MAX_GADGET_VERTICES};
pub use graph::{Edge, EdgeId, EdgeTag, GraphError, GridPos, VertexId, WeightedMultigraph};
pub use grid::{build_grid, build_theta_gadget_graph, grid_vertex};
pub use subdivide::subdivide_to_unit;
pub use wall::{
    construct_wall_witness, path_end, path_start, path_weight, route_half_integral_paths, Chord,
    WallWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Lset(#[from] LsetError),

    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "no feasible x <= {x_bound}: need g(x) > {threshold}, best exact g seen {best_g:?}, \
         {capped} candidates had g above a_max"
    )]
    NoFeasibleX {
        x_bound: u128,
        threshold: u128,
        best_g: Option<u128>,
        capped: u128,
    },

    #[error("ell-window empty at every one of the {candidates} candidates with large enough g (x <= {x_bound})")]
    WindowEmpty { x_bound: u128, candidates: u128 },

    #[error("internal error: chord e_{index} would get a nonpositive weight")]
    NonpositiveChordWeight { index: usize },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("refusing to build {what}")]
    TooLarge { what: String },
}

impl ConstructError {
    pub fn is_bound_exhausted(&self) -> bool {
        match self {
            ConstructError::Lset(e) => e.is_bound_exhausted(),
            ConstructError::NoFeasibleX { .. }
            | ConstructError::WindowEmpty { .. }
            | ConstructError::Overflow(_) => true,
            _ => false,
        }
    }
}
