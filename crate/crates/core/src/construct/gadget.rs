use serde::{Deserialize, Serialize};

use crate::lset::{g_value, GValue, IntSet};

use super::graph::WeightedMultigraph;
use super::grid::{build_grid, build_theta_gadget_graph};
use super::ConstructError;

/// Refuses to materialize gadget graphs beyond this many vertices.
pub const MAX_GADGET_VERTICES: u128 = 50_000_000;

/// A planar graph in which every `t` L-cycles share a vertex but no `s`
/// vertices hit all L-cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetWitness {
    pub set: IntSet,
    pub t: u128,
    pub s: u128,
    pub x: u128,
    /// `g(x)`.
    pub g: u128,
    pub ell: usize,
    /// The `ell × ell` grid.
    pub grid: WeightedMultigraph,
    /// The grid with every edge replaced by a theta gadget; unit weights.
    pub graph: WeightedMultigraph,
}

/// `g` must exceed this for `sqrt(g) / 4t > s` to hold.
pub fn g_threshold(t: u128, s: u128) -> Option<u128> {
    16u128.checked_mul(t)?.checked_mul(t)?.checked_mul(s)?.checked_mul(s)
}

/// Integer `ℓ` range with `2tg/(2t-1) <= ℓ² <= 3tg/(3t-2)`, or `None` if empty.
pub fn ell_window(t: u128, g: u128) -> Option<(u128, u128)> {
    if t == 0 {
        return None;
    }
    let low_sq = (2 * t).checked_mul(g)?.div_ceil(2 * t - 1);
    let high_sq = (3 * t).checked_mul(g)? / (3 * t - 2);
    let mut lo = low_sq.isqrt();
    if lo * lo < low_sq {
        lo += 1;
    }
    let hi = high_sq.isqrt();
    (lo <= hi).then_some((lo, hi))
}

/// Scans `x = 2, 3, …, x_bound` for the first `g(x) > 16t²s²` whose
/// `ℓ`-window is nonempty, then builds the theta-subdivided `ℓ × ℓ` grid
/// with the smallest admissible `ℓ`.
pub fn construct_gadget_witness(
    set: &IntSet,
    t: u128,
    s: u128,
    x_bound: u128,
    a_max: u128,
) -> Result<GadgetWitness, ConstructError> {
    if t == 0 {
        return Err(ConstructError::InvalidParameter("t must be >= 1".into()));
    }
    let threshold = g_threshold(t, s)
        .ok_or_else(|| ConstructError::InvalidParameter("16t²s² overflows".into()))?;
    let mut best_g: Option<u128> = None;
    let mut capped = 0u128;
    let mut window_misses = 0u128;
    for x in 2..=x_bound {
        let g = match g_value(set, x, a_max)? {
            GValue::Exact(g) => g,
            GValue::AboveCap(_) => {
                capped += 1;
                continue;
            }
        };
        best_g = best_g.max(Some(g));
        if g <= threshold {
            continue;
        }
        let Some((ell, _)) = ell_window(t, g) else {
            window_misses += 1;
            continue;
        };
        let grid_edges = 2 * ell * (ell - 1);
        let vertices = ell
            .checked_mul(ell)
            .and_then(|v| grid_edges.checked_mul(3 * x - 3)?.checked_add(v));
        if !vertices.is_some_and(|v| v <= MAX_GADGET_VERTICES) {
            return Err(ConstructError::TooLarge {
                what: format!("gadget graph for x = {x}, ell = {ell}"),
            });
        }
        let ell = ell as usize;
        return Ok(GadgetWitness {
            set: set.clone(),
            t,
            s,
            x,
            g,
            ell,
            grid: build_grid(ell)?,
            graph: build_theta_gadget_graph(ell, x)?,
        });
    }
    if window_misses > 0 {
        Err(ConstructError::WindowEmpty {
            x_bound,
            candidates: window_misses,
        })
    } else {
        Err(ConstructError::NoFeasibleX {
            x_bound,
            threshold,
            best_g,
            capped,
        })
    }
}
