use serde::{Deserialize, Serialize};

use crate::construct::{VertexId, WeightedMultigraph};
use crate::lset::IntSet;

use super::cycles::{CycleRecord, CycleSearch};
use super::VerifyError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    /// Largest `m <= k` found.
    pub size: usize,
    /// Indices into `ProbeResult::l_cycles`.
    pub cycles: Vec<usize>,
    /// False if the node cap stopped the search; `size` is then a lower bound.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSet {
    pub vertices: Vec<VertexId>,
    /// False if the node cap stopped the search; `vertices` is then a valid
    /// but possibly non-minimum hitting set.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub k: usize,
    pub t: usize,
    pub l_cycles: Vec<CycleRecord>,
    pub packing: Packing,
    pub hitting: HittingSet,
}

/// All L-cycles of `g`, canonical order.
pub fn l_cycles(g: &WeightedMultigraph, set: &IntSet, cycle_cap: u64) -> Result<Vec<CycleRecord>, VerifyError> {
    let search = CycleSearch::new(g, None);
    let parts = search.fold_parallel(
        Some(cycle_cap),
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<CycleRecord>, VerifyError>, view| {
            if let Ok(list) = acc {
                match set.contains(view.weight) {
                    Ok(true) => {
                        let mut rec = view.to_record();
                        rec.in_l = Some(true);
                        list.push(rec);
                    }
                    Ok(false) => {}
                    Err(e) => *acc = Err(e.into()),
                }
            }
        },
    )?;
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Largest family of at most `k` distinct L-cycles with every vertex in at
/// most `t` of them.
fn max_packing(cycles: &[CycleRecord], n: usize, k: usize, t: usize, node_cap: u64) -> Packing {
    struct State<'a> {
        cycles: &'a [CycleRecord],
        k: usize,
        t: usize,
        load: Vec<usize>,
        chosen: Vec<usize>,
        best: Vec<usize>,
        nodes: u64,
        cap: u64,
    }
    fn go(s: &mut State<'_>, from: usize) -> bool {
        if s.chosen.len() > s.best.len() {
            s.best = s.chosen.clone();
        }
        if s.best.len() == s.k {
            return true;
        }
        for i in from..s.cycles.len() {
            // Even taking every remaining cycle cannot beat the best.
            if s.chosen.len() + (s.cycles.len() - i) <= s.best.len() {
                break;
            }
            s.nodes += 1;
            if s.nodes > s.cap {
                return false;
            }
            let vs = &s.cycles[i].vertices;
            if vs.iter().any(|&v| s.load[v] >= s.t) {
                continue;
            }
            for &v in vs {
                s.load[v] += 1;
            }
            s.chosen.push(i);
            let done = go(s, i + 1);
            s.chosen.pop();
            for &v in vs {
                s.load[v] -= 1;
            }
            if done || s.nodes > s.cap {
                return done;
            }
        }
        false
    }
    let mut s = State {
        cycles,
        k,
        t,
        load: vec![0; n],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        cap: node_cap,
    };
    go(&mut s, 0);
    Packing {
        size: s.best.len(),
        complete: s.nodes <= s.cap,
        cycles: s.best,
    }
}

/// Minimum vertex set meeting every cycle, by iterative deepening: the
/// first cycle not yet hit must lose one of its vertices.
fn min_hitting_set(cycles: &[CycleRecord], n: usize, node_cap: u64) -> HittingSet {
    fn go(cycles: &[CycleRecord], hit: &mut Vec<bool>, chosen: &mut Vec<VertexId>, budget: usize, nodes: &mut u64, cap: u64) -> Option<bool> {
        let Some(open) = cycles.iter().find(|c| c.vertices.iter().all(|&v| !hit[v])) else {
            return Some(true);
        };
        if budget == 0 {
            return Some(false);
        }
        let mut options = open.vertices.clone();
        options.sort_unstable();
        for v in options {
            *nodes += 1;
            if *nodes > cap {
                return None;
            }
            hit[v] = true;
            chosen.push(v);
            let r = go(cycles, hit, chosen, budget - 1, nodes, cap);
            if r != Some(false) {
                return r;
            }
            chosen.pop();
            hit[v] = false;
        }
        Some(false)
    }
    let mut nodes = 0u64;
    for budget in 0..=n {
        let mut hit = vec![false; n];
        let mut chosen = Vec::new();
        match go(cycles, &mut hit, &mut chosen, budget, &mut nodes, node_cap) {
            Some(true) => {
                chosen.sort_unstable();
                return HittingSet {
                    vertices: chosen,
                    complete: true,
                };
            }
            Some(false) => {}
            None => break,
        }
    }
    // Greedy fallback: one vertex from every remaining cycle.
    let mut hit = vec![false; n];
    let mut chosen = Vec::new();
    for c in cycles {
        if c.vertices.iter().all(|&v| !hit[v]) {
            hit[c.vertices[0]] = true;
            chosen.push(c.vertices[0]);
        }
    }
    chosen.sort_unstable();
    HittingSet {
        vertices: chosen,
        complete: false,
    }
}

/// Packing number (up to `k`, vertex load at most `t`) and minimum hitting
/// set for the L-cycles of `g`.
pub fn probe_erdos_posa(
    g: &WeightedMultigraph,
    set: &IntSet,
    k: usize,
    t: usize,
    cycle_cap: u64,
    node_cap: u64,
) -> Result<ProbeResult, VerifyError> {
    if t == 0 {
        return Err(VerifyError::InvalidArgument("t must be >= 1".into()));
    }
    let cycles = l_cycles(g, set, cycle_cap)?;
    let n = g.vertex_count();
    Ok(ProbeResult {
        k,
        t,
        packing: max_packing(&cycles, n, k, t, node_cap),
        hitting: min_hitting_set(&cycles, n, node_cap),
        l_cycles: cycles,
    })
}
