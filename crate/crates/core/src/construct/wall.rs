use serde::{Deserialize, Serialize};

use crate::lset::{far_from_l_set, lonely_sequence, IntSet};

use super::graph::{EdgeId, EdgeTag, GridPos, VertexId, WeightedMultigraph};
use super::grid::{build_grid, grid_vertex};
use super::ConstructError;

/// The extra edge `e_i` joining `a_i = (1, i)` to `b_i = (6ℓ, 6ℓ + 1 - i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    /// 1-based.
    pub index: usize,
    pub a: VertexId,
    pub b: VertexId,
    pub weight: u128,
    /// Id of the chord in [`WallWitness::graph`].
    pub edge: EdgeId,
}

/// A weighted `6ℓ × 6ℓ` grid plus `3ℓ` chords with no two vertex-disjoint
/// L-cycles, yet `ℓ` deleted vertices always leave `ℓ` L-cycle lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallWitness {
    pub set: IntSet,
    pub ell: usize,
    /// The weighted grid `W`; edge `i` (canonical order) carries `far_set[i]`.
    pub grid: WeightedMultigraph,
    /// Far-from-L weights, ascending.
    pub far_set: Vec<u128>,
    /// Sum of `far_set`.
    pub alpha: u128,
    /// `Q_1 … Q_{3ℓ}` as grid vertex sequences from `a_i` to `b_i`.
    pub paths: Vec<Vec<VertexId>>,
    /// `w(Q_i)`.
    pub path_weights: Vec<u128>,
    /// `p_1 … p_{3ℓ}`.
    pub lonely: Vec<u128>,
    pub chords: Vec<Chord>,
    /// `W` plus the chords; grid edge ids are shared with `grid`.
    pub graph: WeightedMultigraph,
}

impl WallWitness {
    pub fn side(&self) -> usize {
        6 * self.ell
    }
}

pub fn path_start(i: usize) -> GridPos {
    GridPos::new(1, i as u32)
}

pub fn path_end(ell: usize, i: usize) -> GridPos {
    let side = 6 * ell;
    GridPos::new(side as u32, (side + 1 - i) as u32)
}

/// Routes `Q_1 … Q_{3ℓ}` through the `6ℓ × 6ℓ` grid so that no vertex lies on
/// more than two of them.
///
/// `Q_i` goes down column `i` to row `2i`, right along row `2i` to column
/// `6ℓ + 1 - i`, then down to the last row. The vertical columns are pairwise
/// distinct and so are the horizontal rows, so a vertex meets at most one
/// vertical and one horizontal segment.
pub fn route_half_integral_paths(ell: usize) -> Vec<Vec<GridPos>> {
    let side = 6 * ell as u32;
    (1..=3 * ell as u32)
        .map(|i| {
            let turn_row = 2 * i;
            let far_col = side + 1 - i;
            let mut path = Vec::new();
            for row in 1..=turn_row {
                path.push(GridPos::new(row, i));
            }
            for col in i + 1..=far_col {
                path.push(GridPos::new(turn_row, col));
            }
            for row in turn_row + 1..=side {
                path.push(GridPos::new(row, far_col));
            }
            path
        })
        .collect()
}

/// Builds the weighted wall for `ell`.
///
/// The grid weights are the first `|E(W)|` greedy far-from-L elements in
/// canonical edge order, and `p` is the minimal lonely sequence for
/// `α = ΣA`.
pub fn construct_wall_witness(
    set: &IntSet,
    ell: usize,
    search_bound: u128,
) -> Result<WallWitness, ConstructError> {
    if ell == 0 {
        return Err(ConstructError::InvalidParameter("ell must be >= 1".into()));
    }
    let side = 6 * ell;
    let mut grid = build_grid(side)?;
    let far_set = far_from_l_set(set, grid.edge_count(), search_bound)?;
    for (id, &w) in far_set.iter().enumerate() {
        grid.set_weight(id, w);
    }
    let alpha = far_set
        .iter()
        .try_fold(0u128, |acc, &w| acc.checked_add(w))
        .ok_or(ConstructError::Overflow("alpha"))?;
    let lonely = lonely_sequence(set, 3 * ell, alpha, search_bound)?;

    let paths: Vec<Vec<VertexId>> = route_half_integral_paths(ell)
        .into_iter()
        .map(|p| p.into_iter().map(|pos| grid_vertex(side, pos)).collect())
        .collect();
    let path_weights = paths
        .iter()
        .map(|p| path_weight(&grid, p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut graph = grid.clone();
    let mut chords = Vec::with_capacity(3 * ell);
    for (k, (&p, &wq)) in lonely.iter().zip(&path_weights).enumerate() {
        let index = k + 1;
        let weight = p
            .checked_sub(wq)
            .filter(|&w| w > 0)
            .ok_or(ConstructError::NonpositiveChordWeight { index })?;
        let a = grid_vertex(side, path_start(index));
        let b = grid_vertex(side, path_end(ell, index));
        let edge = graph.add_edge(a, b, weight, EdgeTag::Chord { index })?;
        chords.push(Chord {
            index,
            a,
            b,
            weight,
            edge,
        });
    }
    Ok(WallWitness {
        set: set.clone(),
        ell,
        grid,
        far_set,
        alpha,
        paths,
        path_weights,
        lonely,
        chords,
        graph,
    })
}

/// Sum of weights along a vertex path of `g`.
pub fn path_weight(g: &WeightedMultigraph, path: &[VertexId]) -> Result<u128, ConstructError> {
    path.windows(2).try_fold(0u128, |acc, pair| {
        let id = g.edge_between(pair[0], pair[1]).ok_or_else(|| {
            ConstructError::InvalidParameter(format!("{} and {} are not adjacent", pair[0], pair[1]))
        })?;
        acc.checked_add(g.edge(id).weight)
            .ok_or(ConstructError::Overflow("path weight"))
    })
}
