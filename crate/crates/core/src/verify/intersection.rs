use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde_json::json;

use super::cycles::CycleRecord;
use super::report::{CheckRecord, Evidence};

/// Vertex sets as packed bit rows, one row per distinct set.
struct MaskTable {
    words: usize,
    data: Vec<u64>,
    /// Index into the input list of the first cycle with each set.
    origin: Vec<usize>,
}

impl MaskTable {
    fn build(cycles: &[CycleRecord], vertex_count: usize) -> Self {
        let words = vertex_count.div_ceil(64).max(1);
        let mut seen: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for (i, c) in cycles.iter().enumerate() {
            let mut row = vec![0u64; words];
            for &v in &c.vertices {
                row[v / 64] |= 1 << (v % 64);
            }
            seen.entry(row).or_insert(i);
        }
        // Ascending size, then input order, for a canonical search order.
        let mut rows: Vec<(Vec<u64>, usize)> = seen.into_iter().collect();
        rows.sort_by_key(|(row, origin)| (popcount(row), *origin));
        let mut table = MaskTable {
            words,
            data: Vec::with_capacity(rows.len() * words),
            origin: Vec::with_capacity(rows.len()),
        };
        for (row, origin) in rows {
            table.data.extend_from_slice(&row);
            table.origin.push(origin);
        }
        table
    }

    fn len(&self) -> usize {
        self.origin.len()
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }
}

fn popcount(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// `t · min_len > (t - 1) · vertex_count`: then any `t` cycles overlap by
/// pigeonhole.
pub fn intersection_certificate(t: u128, min_len: u128, vertex_count: u128) -> bool {
    match (t.checked_mul(min_len), (t.saturating_sub(1)).checked_mul(vertex_count)) {
        (Some(lhs), Some(rhs)) => lhs > rhs,
        (None, Some(_)) => true,
        _ => false,
    }
}

/// Outcome of the subset search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetSearch {
    /// Every subset was examined; none has empty intersection.
    Clear { nodes: u64 },
    /// Input indices of a subset with empty intersection.
    Violation { indices: Vec<usize>, nodes: u64 },
    CapExceeded { cap: u64 },
}

/// Looks for `min(t, n)` distinct vertex sets with empty common
/// intersection. Identical vertex sets are merged first; repeating a set
/// never empties an intersection, so this is exact.
pub fn search_disjoint_subset(
    cycles: &[CycleRecord],
    t: u128,
    vertex_count: usize,
    node_cap: u64,
) -> SubsetSearch {
    let table = MaskTable::build(cycles, vertex_count);
    let n = table.len();
    let r = usize::try_from(t).unwrap_or(usize::MAX).min(n);
    if r <= 1 {
        // A single cycle has at least two vertices.
        return SubsetSearch::Clear { nodes: n as u64 };
    }
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let found = (0..n).into_par_iter().find_map_first(|first| {
        if stop.load(Ordering::Relaxed) {
            return None;
        }
        let mut chosen = vec![first];
        let mut stack = vec![table.row(first).to_vec()];
        extend(&table, r, &mut chosen, &mut stack, &nodes, node_cap, &stop)
    });
    let nodes = nodes.into_inner();
    match found {
        Some(rows) => SubsetSearch::Violation {
            indices: rows.iter().map(|&i| table.origin[i]).collect(),
            nodes,
        },
        None if stop.load(Ordering::Relaxed) => SubsetSearch::CapExceeded { cap: node_cap },
        None => SubsetSearch::Clear { nodes },
    }
}

fn extend(
    table: &MaskTable,
    r: usize,
    chosen: &mut Vec<usize>,
    stack: &mut Vec<Vec<u64>>,
    nodes: &AtomicU64,
    cap: u64,
    stop: &AtomicBool,
) -> Option<Vec<usize>> {
    let n = table.len();
    let last = *chosen.last().expect("nonempty");
    let need = r - chosen.len();
    if last + need >= n {
        return None;
    }
    let current = stack.last().expect("nonempty").clone();
    if current.iter().all(|&w| w == 0) {
        // Any completion is a violation.
        let mut out = chosen.clone();
        out.extend(last + 1..=last + need);
        return Some(out);
    }
    let span = (n - last - 1) as u64;
    if nodes.fetch_add(span, Ordering::Relaxed) + span > cap {
        stop.store(true, Ordering::Relaxed);
        return None;
    }
    if need == 1 {
        if table.words == 1 {
            let c = current[0];
            return table.data[last + 1..].iter().position(|&row| row & c == 0).map(|off| {
                let mut out = chosen.clone();
                out.push(last + 1 + off);
                out
            });
        }
        return (last + 1..n).find(|&j| disjoint(&current, table.row(j))).map(|j| {
            let mut out = chosen.clone();
            out.push(j);
            out
        });
    }
    for j in last + 1..n {
        if stop.load(Ordering::Relaxed) {
            return None;
        }
        let next: Vec<u64> = current.iter().zip(table.row(j)).map(|(a, b)| a & b).collect();
        chosen.push(j);
        stack.push(next);
        let hit = extend(table, r, chosen, stack, nodes, cap, stop);
        chosen.pop();
        stack.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Checks that every `t` of `cycles` share a vertex.
///
/// With `exhaustive` the subset search runs (up to `node_cap` nodes); the
/// counting certificate is evaluated in every case and must agree when
/// both are available.
pub fn check_common_intersection(
    name: &str,
    cycles: &[CycleRecord],
    t: u128,
    vertex_count: usize,
    exhaustive: bool,
    node_cap: u64,
) -> CheckRecord {
    let min_len = cycles.iter().map(|c| c.len()).min();
    let certificate = min_len.map(|m| intersection_certificate(t, m as u128, vertex_count as u128));
    let distinct = MaskTable::build(cycles, vertex_count).len();
    let data = json!({
        "t": t,
        "l_cycles": cycles.len(),
        "distinct_vertex_sets": distinct,
        "min_length": min_len,
        "vertex_count": vertex_count,
        "certificate": certificate,
    });
    if cycles.is_empty() {
        return CheckRecord::pass(name, Evidence::Exhaustive, "no L-cycles; vacuous").with_data(data);
    }
    let cert_line = format!(
        "t·min|C| = {} {} (t-1)·|V| = {}",
        t.saturating_mul(min_len.unwrap_or(0) as u128),
        if certificate == Some(true) { ">" } else { "<=" },
        t.saturating_sub(1).saturating_mul(vertex_count as u128)
    );
    if !exhaustive {
        return CheckRecord::judged(
            name,
            certificate == Some(true),
            Evidence::Certificate,
            format!("{cert_line}; subset search not run"),
        )
        .with_data(data);
    }
    match search_disjoint_subset(cycles, t, vertex_count, node_cap) {
        SubsetSearch::Clear { nodes } => {
            let mut data = data;
            data["nodes"] = json!(nodes);
            CheckRecord::pass(
                name,
                Evidence::Exhaustive,
                format!(
                    "all {}-subsets of {distinct} distinct L-cycle vertex sets intersect ({nodes} nodes); {cert_line}",
                    (t as usize).min(distinct)
                ),
            )
            .with_data(data)
        }
        SubsetSearch::Violation { indices, nodes } => {
            let mut data = data;
            data["nodes"] = json!(nodes);
            let witness: Vec<_> = indices.iter().map(|&i| &cycles[i].vertices).collect();
            CheckRecord::fail(
                name,
                Evidence::Exhaustive,
                format!("{} L-cycles with empty common intersection", indices.len()),
            )
            .with_data(data)
            .with_witness(json!({ "cycle_indices": indices, "vertex_sets": witness }))
        }
        SubsetSearch::CapExceeded { cap } => CheckRecord::judged(
            name,
            certificate == Some(true),
            Evidence::Certificate,
            format!("subset search exceeded {cap} nodes; {cert_line}"),
        )
        .with_data(data),
    }
}
