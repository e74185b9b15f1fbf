use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// 1-based `(row, col)` position of a grid vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPos {
    pub row: u32,
    pub col: u32,
}

impl GridPos {
    pub const fn new(row: u32, col: u32) -> Self {
        GridPos { row, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeTag {
    Grid,
    /// One edge of the length-`x + variant` path replacing grid edge `grid_edge`.
    GadgetPath { grid_edge: EdgeId, variant: i8 },
    /// The chord `e_index` (1-based) of the wall.
    Chord { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: u128,
    pub tag: EdgeTag,
}

impl Edge {
    pub fn other(&self, from: VertexId) -> VertexId {
        if self.u == from {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {u}-{v} has weight 0; weights must be >= 1")]
    ZeroWeight { u: VertexId, v: VertexId },
    #[error("edge endpoint {vertex} is not a vertex (graph has {count})")]
    UnknownVertex { vertex: VertexId, count: usize },
}

/// Undirected multigraph with positive integer edge weights. Vertex ids
/// are dense indices `0..vertex_count()`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct WeightedMultigraph {
    labels: Vec<Option<GridPos>>,
    edges: Vec<Edge>,
}

impl WeightedMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(count: usize) -> Self {
        WeightedMultigraph {
            labels: vec![None; count],
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, label: Option<GridPos>) -> VertexId {
        self.labels.push(label);
        self.labels.len() - 1
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        weight: u128,
        tag: EdgeTag,
    ) -> Result<EdgeId, GraphError> {
        let count = self.labels.len();
        for vertex in [u, v] {
            if vertex >= count {
                return Err(GraphError::UnknownVertex { vertex, count });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if weight == 0 {
            return Err(GraphError::ZeroWeight { u, v });
        }
        self.edges.push(Edge { u, v, weight, tag });
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn label(&self, v: VertexId) -> Option<GridPos> {
        self.labels[v]
    }

    pub(crate) fn set_weight(&mut self, id: EdgeId, weight: u128) {
        debug_assert!(weight > 0);
        self.edges[id].weight = weight;
    }

    /// Neighbour lists of `(neighbour, edge id)`, in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        adj
    }

    /// First edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
    }

    pub fn total_weight(&self) -> Option<u128> {
        self.edges
            .iter()
            .try_fold(0u128, |acc, e| acc.checked_add(e.weight))
    }
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<Edge>,
}

impl From<WeightedMultigraph> for GraphDoc {
    fn from(g: WeightedMultigraph) -> Self {
        GraphDoc {
            vertices: g
                .labels
                .iter()
                .enumerate()
                .map(|(id, label)| VertexDoc {
                    id,
                    row: label.map(|p| p.row),
                    col: label.map(|p| p.col),
                })
                .collect(),
            edges: g.edges,
        }
    }
}

impl TryFrom<GraphDoc> for WeightedMultigraph {
    type Error = String;

    fn try_from(doc: GraphDoc) -> Result<Self, Self::Error> {
        let mut g = WeightedMultigraph::new();
        for (expected, v) in doc.vertices.iter().enumerate() {
            if v.id != expected {
                return Err(format!("vertex ids must be 0..n in order; found {} at {}", v.id, expected));
            }
            let label = match (v.row, v.col) {
                (Some(row), Some(col)) => Some(GridPos { row, col }),
                (None, None) => None,
                _ => return Err(format!("vertex {} has only half a grid label", v.id)),
            };
            g.add_vertex(label);
        }
        for e in doc.edges {
            g.add_edge(e.u, e.v, e.weight, e.tag).map_err(|err| err.to_string())?;
        }
        Ok(g)
    }
}
