use super::graph::{EdgeTag, GridPos, VertexId, WeightedMultigraph};
use super::ConstructError;

/// Id of grid vertex `(row, col)` (1-based) in a `side × side` grid.
pub fn grid_vertex(side: usize, pos: GridPos) -> VertexId {
    (pos.row as usize - 1) * side + (pos.col as usize - 1)
}

/// The `ell × ell` grid with unit weights.
///
/// Vertices are numbered row-major. Edges follow the canonical order: walk
/// the vertices row-major and emit the edge to the right, then the edge
/// below.
pub fn build_grid(ell: usize) -> Result<WeightedMultigraph, ConstructError> {
    if ell < 2 {
        return Err(ConstructError::InvalidParameter(format!(
            "grid side must be >= 2, got {ell}"
        )));
    }
    let mut g = WeightedMultigraph::new();
    for row in 1..=ell as u32 {
        for col in 1..=ell as u32 {
            g.add_vertex(Some(GridPos::new(row, col)));
        }
    }
    for row in 1..=ell as u32 {
        for col in 1..=ell as u32 {
            let here = grid_vertex(ell, GridPos::new(row, col));
            if (col as usize) < ell {
                let right = grid_vertex(ell, GridPos::new(row, col + 1));
                g.add_edge(here, right, 1, EdgeTag::Grid)?;
            }
            if (row as usize) < ell {
                let below = grid_vertex(ell, GridPos::new(row + 1, col));
                g.add_edge(here, below, 1, EdgeTag::Grid)?;
            }
        }
    }
    Ok(g)
}

/// Replaces every edge of the `ell × ell` grid by three internally
/// disjoint paths of lengths `x - 1`, `x`, `x + 1`.
///
/// Grid vertices keep their ids; each path's internal vertices are fresh.
/// Per grid edge the paths are emitted in variant order -1, 0, +1, each
/// from the lower-id endpoint to the higher one.
pub fn build_theta_gadget_graph(ell: usize, x: u128) -> Result<WeightedMultigraph, ConstructError> {
    if x < 2 {
        return Err(ConstructError::InvalidParameter(format!(
            "theta gadget needs x >= 2, got {x}"
        )));
    }
    let grid = build_grid(ell)?;
    let x = usize::try_from(x).map_err(|_| ConstructError::TooLarge {
        what: "theta gadget path length".into(),
    })?;
    let mut g = WeightedMultigraph::new();
    for v in 0..grid.vertex_count() {
        g.add_vertex(grid.label(v));
    }
    for (grid_edge, e) in grid.edges().iter().enumerate() {
        for variant in [-1i8, 0, 1] {
            let length = (x as i64 + variant as i64) as usize;
            let tag = EdgeTag::GadgetPath { grid_edge, variant };
            let mut prev = e.u;
            for _ in 1..length {
                let inner = g.add_vertex(None);
                g.add_edge(prev, inner, 1, tag)?;
                prev = inner;
            }
            g.add_edge(prev, e.v, 1, tag)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        for (ell, v, e) in [(2, 4, 4), (3, 9, 12), (6, 36, 60)] {
            let g = build_grid(ell).unwrap();
            assert_eq!((g.vertex_count(), g.edge_count()), (v, e));
            assert!(g.edges().iter().all(|e| e.weight == 1));
        }
        assert!(build_grid(1).is_err());
    }

    #[test]
    fn canonical_edge_order() {
        let g = build_grid(3).unwrap();
        let pairs: Vec<(GridPos, GridPos)> = g
            .edges()
            .iter()
            .take(3)
            .map(|e| (g.label(e.u).unwrap(), g.label(e.v).unwrap()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (GridPos::new(1, 1), GridPos::new(1, 2)),
                (GridPos::new(1, 1), GridPos::new(2, 1)),
                (GridPos::new(1, 2), GridPos::new(1, 3)),
            ]
        );
    }

    #[test]
    fn theta_counts_match_formula() {
        for (ell, x) in [(2usize, 3u128), (3, 5), (2, 2), (4, 7)] {
            let g = build_theta_gadget_graph(ell, x).unwrap();
            let grid_edges = 2 * ell * (ell - 1);
            let x = x as usize;
            assert_eq!(g.vertex_count(), ell * ell + grid_edges * (3 * x - 3));
            assert_eq!(g.edge_count(), grid_edges * 3 * x);
        }
        let g = build_theta_gadget_graph(2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (28, 36));
        let g = build_theta_gadget_graph(3, 5).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (153, 180));
    }

    #[test]
    fn minimal_x_gives_paths_of_length_one_two_three() {
        let g = build_theta_gadget_graph(2, 2).unwrap();
        let mut lengths = [0usize; 3];
        for e in g.edges() {
            if let EdgeTag::GadgetPath { grid_edge: 0, variant } = e.tag {
                lengths[(variant + 1) as usize] += 1;
            }
        }
        assert_eq!(lengths, [1, 2, 3]);
        assert!(build_theta_gadget_graph(2, 1).is_err());
    }
}
