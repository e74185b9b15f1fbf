//! Exhaustive enumeration of simple cycles by backtracking.
//!
//! Each cycle is found exactly once: from its smallest vertex, through
//! larger vertices only, and in the orientation whose first edge id is
//! smaller than its closing edge id. Parallel edges form 2-cycles.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{EdgeId, VertexId, WeightedMultigraph};

use super::VerifyError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decomposition {
    /// Lift of a grid cycle of length `grid_length`; `offsets_in_l` lists
    /// every `b ∈ [-a, a]` with `a·x + b ∈ L`.
    GridLift {
        grid_length: u64,
        offsets_in_l: Vec<i64>,
    },
    /// Two of the three paths replacing one grid edge.
    Theta { grid_edge: EdgeId, variants: [i8; 2] },
    /// 1-based chord indices used by a wall cycle.
    Chords { indices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRecord {
    /// Closed walk without the repeated start: starts at the smallest
    /// vertex, oriented so the second vertex is below the last.
    pub vertices: Vec<VertexId>,
    /// `edges[i]` joins `vertices[i]` and `vertices[(i + 1) % len]`.
    pub edges: Vec<EdgeId>,
    pub weight: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_l: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A cycle as seen during the search, before canonical reorientation.
#[derive(Debug, Clone, Copy)]
pub struct CycleView<'a> {
    pub vertices: &'a [VertexId],
    /// Path edges followed by the closing edge.
    pub edges: &'a [EdgeId],
    pub weight: u128,
}

impl CycleView<'_> {
    pub fn to_record(&self) -> CycleRecord {
        let mut vertices = self.vertices.to_vec();
        let mut edges = self.edges.to_vec();
        let n = vertices.len();
        if n >= 3 && vertices[1] > vertices[n - 1] {
            vertices[1..].reverse();
            edges.reverse();
        }
        CycleRecord {
            vertices,
            edges,
            weight: self.weight,
            in_l: None,
            decomposition: None,
        }
    }
}

pub struct CycleSearch<'g> {
    graph: &'g WeightedMultigraph,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    weight_cap: Option<u128>,
}

impl<'g> CycleSearch<'g> {
    pub fn new(graph: &'g WeightedMultigraph, weight_cap: Option<u128>) -> Self {
        CycleSearch {
            graph,
            adj: graph.adjacency(),
            weight_cap,
        }
    }

    /// Visits every cycle whose smallest vertex is `start`.
    pub fn from_start<F>(&self, start: VertexId, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(CycleView<'_>) -> ControlFlow<()>,
    {
        let n = self.graph.vertex_count();
        let mut on_path = vec![false; n];
        let mut vertices = vec![start];
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut weights = vec![0u128];
        let mut cursor = vec![0usize];
        on_path[start] = true;
        let cap = self.weight_cap.unwrap_or(u128::MAX);
        let mut reach = Reach::new(n);

        while let Some(&v) = vertices.last() {
            let depth = vertices.len() - 1;
            let idx = cursor[depth];
            if idx == self.adj[v].len() {
                on_path[v] = false;
                vertices.pop();
                edges.pop();
                weights.pop();
                cursor.pop();
                continue;
            }
            cursor[depth] += 1;
            let (w, e) = self.adj[v][idx];
            if edges.last() == Some(&e) {
                continue;
            }
            let Some(weight) = weights[depth]
                .checked_add(self.graph.edge(e).weight)
                .filter(|&wt| wt <= cap)
            else {
                continue;
            };
            if w == start {
                if depth >= 1 && edges[0] < e {
                    edges.push(e);
                    let flow = visit(CycleView {
                        vertices: &vertices,
                        edges: &edges,
                        weight,
                    });
                    edges.pop();
                    flow?;
                }
            } else if w > start && !on_path[w] && self.can_return(start, w, e, &on_path, &mut reach) {
                on_path[w] = true;
                vertices.push(w);
                edges.push(e);
                weights.push(weight);
                cursor.push(0);
            }
        }
        ControlFlow::Continue(())
    }

    /// Can `w`, entered by edge `via`, get back to `start` through larger
    /// vertices off the path? Pruning branches that cannot keeps the work
    /// proportional to the number of cycles found, so cycle caps bite.
    fn can_return(&self, start: VertexId, w: VertexId, via: EdgeId, on_path: &[bool], reach: &mut Reach) -> bool {
        reach.reset();
        reach.mark(w);
        reach.queue.push(w);
        let mut head = 0;
        while head < reach.queue.len() {
            let u = reach.queue[head];
            head += 1;
            for &(x, e) in &self.adj[u] {
                if x == start {
                    if e != via {
                        return true;
                    }
                } else if x > start && !on_path[x] && !reach.seen(x) {
                    reach.mark(x);
                    reach.queue.push(x);
                }
            }
        }
        false
    }

    /// Runs `fold` over every cycle, one accumulator per start vertex,
    /// partitioned across worker threads. Accumulators come back in start
    /// order, so merging them is deterministic.
    pub fn fold_parallel<A, I, F>(
        &self,
        cycle_cap: Option<u64>,
        init: I,
        fold: F,
    ) -> Result<Vec<A>, VerifyError>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, CycleView<'_>) + Sync,
    {
        let cap = cycle_cap.unwrap_or(u64::MAX);
        let (accs, capped) = self.fold_parallel_partial(cap, init, fold);
        if capped {
            return Err(VerifyError::CycleCapExceeded { cap });
        }
        Ok(accs)
    }

    /// Like [`fold_parallel`](Self::fold_parallel), but on reaching `cap`
    /// cycles returns what was folded so far and `true`. Which cycles made
    /// it in is then scheduling-dependent.
    pub fn fold_parallel_partial<A, I, F>(&self, cap: u64, init: I, fold: F) -> (Vec<A>, bool)
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, CycleView<'_>) + Sync,
    {
        let counter = AtomicU64::new(0);
        let overflow = AtomicBool::new(false);
        let accs: Vec<A> = (0..self.graph.vertex_count())
            .into_par_iter()
            .map(|start| {
                let mut acc = init();
                let _ = self.from_start(start, &mut |view| {
                    if overflow.load(Ordering::Relaxed) {
                        return ControlFlow::Break(());
                    }
                    if counter.fetch_add(1, Ordering::Relaxed) >= cap {
                        overflow.store(true, Ordering::Relaxed);
                        return ControlFlow::Break(());
                    }
                    fold(&mut acc, view);
                    ControlFlow::Continue(())
                });
                acc
            })
            .collect();
        (accs, overflow.load(Ordering::Relaxed))
    }
}

/// Reusable BFS scratch space; `stamp` avoids clearing `mark` per search.
struct Reach {
    mark: Vec<u32>,
    stamp: u32,
    queue: Vec<VertexId>,
}

impl Reach {
    fn new(n: usize) -> Self {
        Reach {
            mark: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.queue.clear();
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
    }

    fn mark(&mut self, v: VertexId) {
        self.mark[v] = self.stamp;
    }

    fn seen(&self, v: VertexId) -> bool {
        self.mark[v] == self.stamp
    }
}

/// Every simple cycle of weight at most `weight_cap`, each exactly once.
pub fn enumerate_cycles(
    g: &WeightedMultigraph,
    weight_cap: Option<u128>,
    cycle_cap: Option<u64>,
) -> Result<Vec<CycleRecord>, VerifyError> {
    let search = CycleSearch::new(g, weight_cap);
    let parts = search.fold_parallel(cycle_cap, Vec::new, |acc: &mut Vec<CycleRecord>, view| {
        acc.push(view.to_record())
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Number of simple cycles, without materializing them.
pub fn count_cycles(
    g: &WeightedMultigraph,
    weight_cap: Option<u128>,
    cycle_cap: Option<u64>,
) -> Result<u64, VerifyError> {
    let search = CycleSearch::new(g, weight_cap);
    let parts = search.fold_parallel(cycle_cap, || 0u64, |acc, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}
