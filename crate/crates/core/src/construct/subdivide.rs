use super::graph::WeightedMultigraph;
use super::ConstructError;

/// Replaces every weight-`w` edge by a path of `w` unit edges through
/// `w - 1` fresh vertices, so cycle lengths equal the original cycle
/// weights. Fails rather than allocate more than `max_vertices` vertices.
pub fn subdivide_to_unit(
    g: &WeightedMultigraph,
    max_vertices: usize,
) -> Result<WeightedMultigraph, ConstructError> {
    let extra = g
        .edges()
        .iter()
        .try_fold(0u128, |acc, e| acc.checked_add(e.weight - 1))
        .ok_or(ConstructError::Overflow("subdivision vertex count"))?;
    let total = extra.saturating_add(g.vertex_count() as u128);
    if total > max_vertices as u128 {
        return Err(ConstructError::TooLarge {
            what: format!("subdivision with {total} vertices (limit {max_vertices})"),
        });
    }
    let mut out = WeightedMultigraph::new();
    for v in 0..g.vertex_count() {
        out.add_vertex(g.label(v));
    }
    for e in g.edges() {
        let mut prev = e.u;
        for _ in 1..e.weight {
            let inner = out.add_vertex(None);
            out.add_edge(prev, inner, 1, e.tag)?;
            prev = inner;
        }
        out.add_edge(prev, e.v, 1, e.tag)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::EdgeTag;

    #[test]
    fn unit_triangle_is_unchanged() {
        let mut g = WeightedMultigraph::with_vertices(3);
        for (u, v) in [(0, 1), (1, 2), (2, 0)] {
            g.add_edge(u, v, 1, EdgeTag::Grid).unwrap();
        }
        assert_eq!(subdivide_to_unit(&g, 100).unwrap(), g);
    }

    #[test]
    fn weight_three_edge_becomes_path() {
        let mut g = WeightedMultigraph::with_vertices(2);
        g.add_edge(0, 1, 3, EdgeTag::Grid).unwrap();
        let s = subdivide_to_unit(&g, 100).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (4, 3));
        assert_eq!(s.adjacency()[0].len(), 1);
        assert_eq!(s.adjacency()[1].len(), 1);
    }

    #[test]
    fn refuses_huge_subdivisions() {
        let mut g = WeightedMultigraph::with_vertices(2);
        g.add_edge(0, 1, 10u128.pow(20), EdgeTag::Grid).unwrap();
        assert!(matches!(
            subdivide_to_unit(&g, 1_000_000),
            Err(ConstructError::TooLarge { .. })
        ));
    }
}
