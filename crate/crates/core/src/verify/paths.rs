//! Exact two-disjoint-paths search by backtracking.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::construct::{VertexId, WeightedMultigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSearch {
    /// Two vertex-disjoint paths, if any exist.
    pub found: Option<[Vec<VertexId>; 2]>,
    /// Complete paths for the enumerated pair.
    pub paths_explored: u64,
    /// Partial paths visited, including pruned ones.
    pub nodes: u64,
    /// False when the path cap stopped the search early.
    pub complete: bool,
}

type Prune<'a> = &'a dyn Fn(&Walker<'_>, VertexId) -> bool;

struct Walker<'a> {
    adj: Vec<Vec<VertexId>>,
    blocked: Vec<bool>,
    path: Vec<VertexId>,
    target: VertexId,
    explored: u64,
    nodes: u64,
    cap: u64,
    capped: bool,
    prune: Option<Prune<'a>>,
}

/// Path from `from` to `to` through vertices not `blocked`, by BFS.
fn bfs(
    adj: &[Vec<VertexId>],
    from: VertexId,
    to: VertexId,
    blocked: impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut out = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                out.push(cur);
            }
            out.reverse();
            return Some(out);
        }
        for &w in &adj[v] {
            if parent[w] == usize::MAX && !blocked(w) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

impl Walker<'_> {
    fn new(g: &WeightedMultigraph, target: VertexId, cap: u64) -> Self {
        let mut adj = vec![Vec::new(); g.vertex_count()];
        for e in g.edges() {
            if !adj[e.u].contains(&e.v) {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        Walker {
            adj,
            blocked: vec![false; g.vertex_count()],
            path: Vec::new(),
            target,
            explored: 0,
            nodes: 0,
            cap,
            capped: false,
            prune: None,
        }
    }

    fn walk<F>(&mut self, v: VertexId, on_complete: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Self) -> ControlFlow<()>,
    {
        self.path.push(v);
        self.blocked[v] = true;
        self.nodes += 1;
        let flow = if v == self.target {
            self.explored += 1;
            let flow = on_complete(self);
            if flow.is_continue() && self.explored >= self.cap {
                self.capped = true;
                ControlFlow::Break(())
            } else {
                flow
            }
        } else {
            let mut flow = ControlFlow::Continue(());
            for i in 0..self.adj[v].len() {
                let w = self.adj[v][i];
                if self.blocked[w] {
                    continue;
                }
                if let Some(prune) = self.prune {
                    if prune(self, w) {
                        continue;
                    }
                }
                flow = self.walk(w, on_complete);
                if flow.is_break() {
                    break;
                }
            }
            flow
        };
        self.blocked[v] = false;
        self.path.pop();
        flow
    }
}

/// Searches for vertex-disjoint `s1–t1` and `s2–t2` paths. Simple `s1–t1`
/// paths avoiding `s2, t2` are enumerated; for each, `s2–t2` connectivity is
/// tested in the rest of the graph.
///
/// With `prune`, a branch is cut as soon as `t1` becomes unreachable or
/// `s2, t2` become separated; both conditions only discard branches with
/// no solution, so the result is still exact.
pub fn find_two_disjoint_paths(
    g: &WeightedMultigraph,
    (s1, t1): (VertexId, VertexId),
    (s2, t2): (VertexId, VertexId),
    path_cap: u64,
    prune: bool,
) -> LinkageSearch {
    let terminals = [s1, t1, s2, t2];
    let distinct = terminals
        .iter()
        .enumerate()
        .all(|(i, a)| terminals[i + 1..].iter().all(|b| a != b));
    if !distinct {
        return LinkageSearch {
            found: None,
            paths_explored: 0,
            nodes: 0,
            complete: true,
        };
    }
    let prune_fn = |w: &Walker<'_>, next: VertexId| -> bool {
        // `blocked` holds the current path plus s2 and t2.
        if next != t1 && bfs(&w.adj, next, t1, |v| w.blocked[v]).is_none() {
            return true;
        }
        let on_path = |v: VertexId| v == next || (w.blocked[v] && v != s2 && v != t2);
        bfs(&w.adj, s2, t2, on_path).is_none()
    };
    let mut walker = Walker::new(g, t1, path_cap);
    walker.blocked[s2] = true;
    walker.blocked[t2] = true;
    if prune {
        walker.prune = Some(&prune_fn);
    }
    let mut found = None;
    let _ = walker.walk(s1, &mut |w: &Walker<'_>| {
        // t1 is on the path and still marked blocked here.
        let on_path = |v: VertexId| w.blocked[v] && v != s2 && v != t2;
        match bfs(&w.adj, s2, t2, on_path) {
            Some(p2) => {
                found = Some([w.path.clone(), p2]);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    LinkageSearch {
        complete: !walker.capped,
        paths_explored: walker.explored,
        nodes: walker.nodes,
        found,
    }
}

/// Number of simple `s–t` paths, up to `cap`.
pub fn count_simple_paths(g: &WeightedMultigraph, s: VertexId, t: VertexId, cap: u64) -> (u64, bool) {
    let mut walker = Walker::new(g, t, cap);
    let _ = walker.walk(s, &mut |_: &Walker<'_>| ControlFlow::Continue(()));
    (walker.explored, !walker.capped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_grid, grid_vertex, GridPos};

    fn v(side: usize, r: u32, c: u32) -> VertexId {
        grid_vertex(side, GridPos::new(r, c))
    }

    #[test]
    fn corner_to_corner_path_counts() {
        // OEIS A007764: 2, 12, 184, 8512 for 2x2 .. 5x5.
        for (side, expected) in [(2, 2), (3, 12), (4, 184), (5, 8512)] {
            let g = build_grid(side).unwrap();
            let (n, complete) = count_simple_paths(&g, 0, side * side - 1, u64::MAX);
            assert!(complete);
            assert_eq!(n, expected, "side {side}");
        }
    }

    #[test]
    fn parallel_terminals_link() {
        let g = build_grid(4).unwrap();
        let r = find_two_disjoint_paths(&g, (v(4, 1, 1), v(4, 4, 1)), (v(4, 1, 4), v(4, 4, 4)), u64::MAX, true);
        let [p1, p2] = r.found.expect("columns 1 and 4 are disjoint");
        assert!(p1.iter().all(|x| !p2.contains(x)));
    }

    #[test]
    fn crossing_terminals_do_not_link() {
        let g = build_grid(4).unwrap();
        for prune in [true, false] {
            let r = find_two_disjoint_paths(&g, (v(4, 1, 1), v(4, 4, 4)), (v(4, 1, 4), v(4, 4, 1)), u64::MAX, prune);
            assert!(r.found.is_none());
            assert!(r.complete);
        }
    }

    #[test]
    fn shared_terminal_never_links() {
        let g = build_grid(3).unwrap();
        let r = find_two_disjoint_paths(&g, (0, 8), (0, 2), 10, true);
        assert!(r.found.is_none() && r.complete);
    }
}
