use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::construct::{
    build_grid, build_theta_gadget_graph, ell_window, g_threshold, EdgeId, EdgeTag, GadgetWitness,
    VertexId,
};
use crate::lset::{g_value, GValue, IntSet};

use super::cycles::{CycleRecord, CycleSearch, Decomposition};
use super::report::{CheckRecord, Evidence};
use super::VerifyError;

/// Offsets `b ∈ [-a, a]` with `a·x + b ∈ L`.
pub fn lift_hits(set: &IntSet, x: u128, a: u64) -> Result<Vec<i64>, VerifyError> {
    let base = (a as u128)
        .checked_mul(x)
        .ok_or_else(|| VerifyError::InvalidArgument("a·x overflows".into()))?;
    let a = a as i64;
    let mut hits = Vec::new();
    for b in -a..=a {
        let value = base.checked_add_signed(b as i128).expect("a·x >= 2a");
        if set.contains(value)? {
            hits.push(b);
        }
    }
    Ok(hits)
}

/// Bit `v + 1` of each entry marks variant `v ∈ {-1, 0, 1}` as available.
pub type VariantMask = u8;
pub const ALL_VARIANTS: VariantMask = 0b111;

/// Offsets reachable by picking one available variant per edge, as a
/// membership table over `[-a, a]` (index `b + a`).
pub fn attainable_offsets(masks: &[VariantMask]) -> Vec<bool> {
    let a = masks.len();
    let mut reach = vec![false; 2 * a + 1];
    reach[a] = true;
    for &m in masks {
        let mut next = vec![false; 2 * a + 1];
        for (i, &on) in reach.iter().enumerate() {
            if !on {
                continue;
            }
            for v in -1i64..=1 {
                if m & (1 << (v + 1)) != 0 {
                    let j = i as i64 + v;
                    if (0..=2 * a as i64).contains(&j) {
                        next[j as usize] = true;
                    }
                }
            }
        }
        reach = next;
    }
    reach
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaLength {
    pub length: u128,
    pub in_l: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetClassification {
    pub grid_cycle_count: u64,
    /// Grid cycle count per length.
    pub length_histogram: BTreeMap<u64, u64>,
    /// Grid cycles some lift of which lies in L, plus theta cycles in L.
    /// Vertex ids are grid vertices.
    pub l_cycles: Vec<CycleRecord>,
    /// Grid cycles of length `< g` with a lift in L. Nonzero contradicts `g`.
    pub below_g: u64,
    pub min_l_grid_length: Option<u64>,
    pub theta: Vec<ThetaLength>,
}

/// Scans every grid cycle and records which lifts land in L.
pub fn classify_gadget_cycles(
    w: &GadgetWitness,
    cycle_cap: Option<u64>,
) -> Result<GadgetClassification, VerifyError> {
    let max_len = w.grid.vertex_count() as u64;
    let hits: Vec<Vec<i64>> = (0..=max_len)
        .map(|a| if a < 4 { Ok(Vec::new()) } else { lift_hits(&w.set, w.x, a) })
        .collect::<Result<_, _>>()?;

    struct Acc {
        count: u64,
        hist: BTreeMap<u64, u64>,
        l: Vec<CycleRecord>,
    }
    let search = CycleSearch::new(&w.grid, None);
    let parts = search.fold_parallel(
        cycle_cap,
        || Acc {
            count: 0,
            hist: BTreeMap::new(),
            l: Vec::new(),
        },
        |acc, view| {
            let a = view.edges.len() as u64;
            acc.count += 1;
            *acc.hist.entry(a).or_default() += 1;
            let offsets = &hits[a as usize];
            if let Some(&b) = offsets.first() {
                let mut rec = view.to_record();
                rec.weight = (a as u128 * w.x).checked_add_signed(b as i128).expect("positive");
                rec.in_l = Some(true);
                rec.decomposition = Some(Decomposition::GridLift {
                    grid_length: a,
                    offsets_in_l: offsets.clone(),
                });
                acc.l.push(rec);
            }
        },
    )?;

    let mut out = GadgetClassification {
        grid_cycle_count: 0,
        length_histogram: BTreeMap::new(),
        l_cycles: Vec::new(),
        below_g: 0,
        min_l_grid_length: None,
        theta: Vec::new(),
    };
    for part in parts {
        out.grid_cycle_count += part.count;
        for (a, c) in part.hist {
            *out.length_histogram.entry(a).or_default() += c;
        }
        out.l_cycles.extend(part.l);
    }
    for c in &out.l_cycles {
        if let Some(Decomposition::GridLift { grid_length, .. }) = c.decomposition {
            out.min_l_grid_length = Some(out.min_l_grid_length.map_or(grid_length, |m| m.min(grid_length)));
            if (grid_length as u128) < w.g {
                out.below_g += 1;
            }
        }
    }
    for variants in [[-1i8, 0], [-1, 1], [0, 1]] {
        let length = 2 * w.x - 1 + (variants[0] + variants[1] + 1) as u128;
        let in_l = w.set.contains(length)?;
        if !out.theta.iter().any(|t| t.length == length) {
            out.theta.push(ThetaLength { length, in_l });
        }
        if in_l {
            for (grid_edge, e) in w.grid.edges().iter().enumerate() {
                out.l_cycles.push(CycleRecord {
                    vertices: vec![e.u.min(e.v), e.u.max(e.v)],
                    edges: vec![grid_edge, grid_edge],
                    weight: length,
                    in_l: Some(true),
                    decomposition: Some(Decomposition::Theta { grid_edge, variants }),
                });
            }
        }
    }
    Ok(out)
}

/// Parameter recheck: `g(x)` recomputed, `g > 16t²s²`, `ℓ` inside the window,
/// and the scalar consequence `t·g > (t-1)·ℓ²`.
pub fn check_parameters(w: &GadgetWitness) -> Result<CheckRecord, VerifyError> {
    if w.ell < 2 || w.x < 2 || w.t == 0 {
        return Err(VerifyError::InvalidArgument("witness needs ell >= 2, x >= 2, t >= 1".into()));
    }
    let g_again = g_value(&w.set, w.x, w.g)?;
    let threshold = g_threshold(w.t, w.s);
    let window = ell_window(w.t, w.g);
    let ell = w.ell as u128;
    let in_window = window.is_some_and(|(lo, hi)| lo <= ell && ell <= hi);
    let scalar = w
        .t
        .checked_mul(w.g)
        .zip((w.t - 1).checked_mul(ell * ell))
        .is_some_and(|(lhs, rhs)| lhs > rhs);
    let shape = w.ell >= 2
        && w.grid == build_grid(w.ell)?
        && w.graph == build_theta_gadget_graph(w.ell, w.x)?;
    let ok = g_again == GValue::Exact(w.g)
        && threshold.is_some_and(|th| w.g > th)
        && in_window
        && scalar
        && shape;
    Ok(CheckRecord::judged(
        "gadget.parameters",
        ok,
        Evidence::Certificate,
        format!(
            "g({}) = {} (recomputed: {}), 16t²s² = {}, ell = {} in window {}, t·g > (t-1)·ell²: {}, graphs match the construction: {}",
            w.x,
            w.g,
            match g_again {
                GValue::Exact(g) => g.to_string(),
                GValue::AboveCap(c) => format!("> {c}"),
            },
            threshold.map_or("overflow".into(), |t| t.to_string()),
            w.ell,
            window.map_or("empty".into(), |(lo, hi)| format!("[{lo}, {hi}]")),
            scalar,
            shape
        ),
    ))
}

/// Every cycle of the gadget graph must be a theta cycle or a lift of a
/// grid cycle, and their number must be `Σ 3^|C| + 3·|E(grid)|`.
pub fn check_cycle_structure(w: &GadgetWitness, cycle_cap: u64) -> Result<CheckRecord, VerifyError> {
    let name = "gadget.cycle_structure";
    // Each unit square alone lifts to 3^4 cycles.
    let side = w.ell as u128 - 1;
    if 81 * side * side > cycle_cap as u128 {
        return Ok(CheckRecord::skipped(
            name,
            format!("gadget graph has at least {} cycles, above cap {cycle_cap}", 81 * side * side),
        ));
    }
    // Every grid cycle has length >= 4, so lifts to >= 81 cycles.
    let grid_cycles = match CycleSearch::new(&w.grid, None).fold_parallel(
        Some(cycle_cap / 81),
        || 0u128,
        |acc, view| *acc = acc.saturating_add(3u128.saturating_pow(view.edges.len() as u32)),
    ) {
        Ok(parts) => parts.into_iter().fold(0u128, u128::saturating_add),
        Err(VerifyError::CycleCapExceeded { .. }) => {
            return Ok(CheckRecord::skipped(
                name,
                format!("grid has more than {} cycles, so the gadget graph exceeds cap {cycle_cap}", cycle_cap / 81),
            ));
        }
        Err(e) => return Err(e),
    };
    let predicted = grid_cycles.saturating_add(3 * w.grid.edge_count() as u128);
    if predicted > cycle_cap as u128 {
        return Ok(CheckRecord::skipped(
            name,
            format!("gadget graph has {predicted} cycles, above cap {cycle_cap}"),
        ));
    }

    let g = &w.graph;
    let search = CycleSearch::new(g, None);
    let parts = search.fold_parallel(
        Some(cycle_cap),
        || (0u64, None::<Vec<VertexId>>),
        |acc, view| {
            acc.0 += 1;
            if acc.1.is_none() && !is_theta_or_lift(w, view.edges) {
                acc.1 = Some(view.vertices.to_vec());
            }
        },
    )?;
    let actual: u64 = parts.iter().map(|p| p.0).sum();
    let stray = parts.into_iter().find_map(|p| p.1);
    let ok = stray.is_none() && actual as u128 == predicted;
    let record = CheckRecord::judged(
        name,
        ok,
        Evidence::Exhaustive,
        format!("{actual} cycles enumerated, {predicted} predicted from grid cycles and thetas"),
    )
    .with_data(json!({ "enumerated": actual, "predicted": predicted }));
    Ok(match stray {
        Some(vs) => record.with_witness(json!({ "unclassified_cycle": vs })),
        None => record,
    })
}

fn is_theta_or_lift(w: &GadgetWitness, edges: &[EdgeId]) -> bool {
    let mut used: BTreeMap<EdgeId, VariantMask> = BTreeMap::new();
    for &e in edges {
        if let EdgeTag::GadgetPath { grid_edge, variant } = w.graph.edge(e).tag {
            *used.entry(grid_edge).or_default() |= 1 << (variant + 1);
        } else {
            return false;
        }
    }
    if used.len() == 1 {
        return used.values().next().unwrap().count_ones() == 2;
    }
    if used.values().any(|m| m.count_ones() != 1) {
        return false;
    }
    // One variant per grid edge: the grid edges must form a single cycle.
    let mut degree: BTreeMap<VertexId, u32> = BTreeMap::new();
    for &ge in used.keys() {
        let e = w.grid.edge(ge);
        *degree.entry(e.u).or_default() += 1;
        *degree.entry(e.v).or_default() += 1;
    }
    degree.values().all(|&d| d == 2) && degree.len() == used.len()
}

/// Lift/grid correspondence: no grid cycle shorter than `g` lifts into L,
/// and no theta cycle is an L-cycle unless `g <= 2`.
pub fn check_classification(w: &GadgetWitness, c: &GadgetClassification) -> CheckRecord {
    let theta_l = c.theta.iter().filter(|t| t.in_l).count();
    let ok = c.below_g == 0 && (theta_l == 0 || w.g <= 2);
    CheckRecord::judged(
        "gadget.classification",
        ok,
        Evidence::Exhaustive,
        format!(
            "{} grid cycles, {} lift into L, {} of them shorter than g = {}; shortest L grid length {:?}; theta lengths in L: {}",
            c.grid_cycle_count,
            c.l_cycles.len(),
            c.below_g,
            w.g,
            c.min_l_grid_length,
            theta_l
        ),
    )
    .with_data(json!({
        "grid_cycles": c.grid_cycle_count,
        "l_cycles": c.l_cycles.len(),
        "below_g": c.below_g,
        "min_l_grid_length": c.min_l_grid_length,
        "length_histogram": c.length_histogram,
        "theta": c.theta,
    }))
}

/// One reduced deletion: a grid vertex, or one variant path of one grid edge.
/// Deleting any internal vertex of a path is equivalent to removing that path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetDeletion {
    Vertex { vertex: VertexId },
    Variant { grid_edge: EdgeId, variant: i8 },
}

/// Does some L-cycle survive the deletions?
fn survives(
    w: &GadgetWitness,
    c: &GadgetClassification,
    hits: &[Vec<i64>],
    deleted: &[GadgetDeletion],
) -> bool {
    let mut gone = vec![false; w.grid.vertex_count()];
    let mut variants: BTreeMap<EdgeId, VariantMask> = BTreeMap::new();
    for d in deleted {
        match *d {
            GadgetDeletion::Vertex { vertex } => gone[vertex] = true,
            GadgetDeletion::Variant { grid_edge, variant } => {
                *variants.entry(grid_edge).or_insert(ALL_VARIANTS) &= !(1 << (variant + 1));
            }
        }
    }
    c.l_cycles.iter().any(|cyc| {
        if cyc.vertices.iter().any(|&v| gone[v]) {
            return false;
        }
        match &cyc.decomposition {
            Some(Decomposition::GridLift { grid_length, .. }) => {
                if !cyc.edges.iter().any(|e| variants.contains_key(e)) {
                    return true;
                }
                let masks: Vec<VariantMask> = cyc
                    .edges
                    .iter()
                    .map(|e| variants.get(e).copied().unwrap_or(ALL_VARIANTS))
                    .collect();
                let reach = attainable_offsets(&masks);
                let a = *grid_length as i64;
                hits[*grid_length as usize].iter().any(|&b| reach[(b + a) as usize])
            }
            Some(Decomposition::Theta { grid_edge, variants: pair }) => {
                let m = variants.get(grid_edge).copied().unwrap_or(ALL_VARIANTS);
                pair.iter().all(|&v| m & (1 << (v + 1)) != 0)
            }
            _ => false,
        }
    })
}

/// All reduced deletion sets of size at most `s`, checked for a surviving
/// L-cycle. Also asserts `(ℓ - s)² >= g`.
pub fn check_deletion_survival(
    w: &GadgetWitness,
    c: &GadgetClassification,
    s: u128,
    case_cap: u64,
) -> Result<CheckRecord, VerifyError> {
    let name = "gadget.deletion_survival";
    let ell = w.ell as u128;
    let certificate = ell >= s && (ell - s) * (ell - s) >= w.g;
    let cert_line = format!("(ell - s)² = {} vs g = {}", ell.saturating_sub(s).pow(2), w.g);

    let mut items: Vec<GadgetDeletion> = (0..w.grid.vertex_count())
        .map(|vertex| GadgetDeletion::Vertex { vertex })
        .collect();
    for grid_edge in 0..w.grid.edge_count() {
        for variant in [-1i8, 0, 1] {
            items.push(GadgetDeletion::Variant { grid_edge, variant });
        }
    }
    let cases = count_subsets(items.len() as u128, s);
    if cases.is_none_or(|n| n > case_cap as u128) {
        return Ok(CheckRecord::judged(
            name,
            certificate,
            Evidence::Certificate,
            format!("{} reduced cases exceed cap {case_cap}; {cert_line}", fmt_opt(cases)),
        ));
    }
    let max_len = w.grid.vertex_count() as u64;
    let hits: Vec<Vec<i64>> = (0..=max_len)
        .map(|a| if a < 4 { Ok(Vec::new()) } else { lift_hits(&w.set, w.x, a) })
        .collect::<Result<_, _>>()?;

    let s = s as usize;
    let subsets = subsets_up_to(items.len(), s);
    let failure = subsets.par_iter().find_map_first(|idx| {
        let deleted: Vec<GadgetDeletion> = idx.iter().map(|&i| items[i]).collect();
        (!survives(w, c, &hits, &deleted)).then_some(deleted)
    });
    let record = CheckRecord::judged(
        name,
        failure.is_none() && certificate,
        Evidence::Exhaustive,
        format!(
            "{} reduced cases over {} vertices + {} variant removals; {}; {cert_line}",
            subsets.len(),
            w.grid.vertex_count(),
            3 * w.grid.edge_count(),
            if failure.is_none() { "an L-cycle survives each" } else { "an L-cycle-free case exists" },
        ),
    )
    .with_data(json!({ "cases": subsets.len(), "certificate": certificate }));
    Ok(match failure {
        Some(deleted) => record.with_witness(json!({ "deleted": deleted })),
        None => record,
    })
}

fn fmt_opt(n: Option<u128>) -> String {
    n.map_or_else(|| "too many".into(), |n| n.to_string())
}

/// `Σ_{k <= s} C(n, k)`, or `None` on overflow.
pub(crate) fn count_subsets(n: u128, s: u128) -> Option<u128> {
    let mut total = 0u128;
    let mut term = 1u128;
    for k in 0..=s.min(n) {
        total = total.checked_add(term)?;
        term = term.checked_mul(n - k)? / (k + 1);
    }
    Some(total)
}

/// All index subsets of `0..n` with at most `s` elements, by size then
/// lexicographically.
pub(crate) fn subsets_up_to(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..s.min(n) {
        let mut next = Vec::new();
        for set in &layer {
            let from = set.last().map_or(0, |&l| l + 1);
            for i in from..n {
                let mut grown = set.clone();
                grown.push(i);
                next.push(grown);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_grid, build_theta_gadget_graph};

    fn toy(set: IntSet, ell: usize, x: u128, g: u128) -> GadgetWitness {
        GadgetWitness {
            set,
            t: 1,
            s: 1,
            x,
            g,
            ell,
            grid: build_grid(ell).unwrap(),
            graph: build_theta_gadget_graph(ell, x).unwrap(),
        }
    }

    #[test]
    fn full_variants_reach_every_offset() {
        for a in 1..12 {
            let reach = attainable_offsets(&vec![ALL_VARIANTS; a]);
            assert!(reach.iter().all(|&r| r));
        }
    }

    #[test]
    fn removed_variant_shrinks_range() {
        // Only +1 on one edge, all on three others: offsets [-2, 4].
        let reach = attainable_offsets(&[0b100, 7, 7, 7]);
        let got: Vec<i64> = (0..9).filter(|&i| reach[i]).map(|i| i as i64 - 4).collect();
        assert_eq!(got, vec![-2, -1, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn length_four_lift_range() {
        let hits = lift_hits(&IntSet::arithmetic(0, 1).unwrap(), 5, 4).unwrap();
        assert_eq!(hits, (-4..=4).collect::<Vec<_>>());
    }

    #[test]
    fn structure_on_small_gadgets() {
        for (ell, x) in [(2, 2), (2, 3), (3, 2)] {
            let w = toy(IntSet::squares(), ell, x, 1);
            let r = check_cycle_structure(&w, 1_000_000).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        // 2x2 grid with x = 2: 3^4 lifts + 3 thetas on each of 4 edges.
        let w = toy(IntSet::squares(), 2, 2, 1);
        let r = check_cycle_structure(&w, 1_000_000).unwrap();
        assert_eq!(r.data["enumerated"], json!(93));
    }

    #[test]
    fn thetas_and_lifts_classified() {
        // L = {9}: lifts of the 4-cycle with x = 2 span [4, 12] and hit 9,
        // and no theta (lengths 3, 4, 5) does.
        let w = toy(IntSet::explicit([9]).unwrap(), 2, 2, 3);
        let c = classify_gadget_cycles(&w, None).unwrap();
        assert_eq!(c.grid_cycle_count, 1);
        assert_eq!(c.l_cycles.len(), 1);
        assert!(matches!(
            c.l_cycles[0].decomposition,
            Some(Decomposition::GridLift { grid_length: 4, ref offsets_in_l }) if offsets_in_l == &vec![1]
        ));
        let lengths: Vec<u128> = c.theta.iter().map(|t| t.length).collect();
        assert_eq!(lengths, vec![3, 4, 5]);
        // L = {4} hits the middle theta on every edge
        let w = toy(IntSet::explicit([4]).unwrap(), 2, 2, 1);
        let c = classify_gadget_cycles(&w, None).unwrap();
        assert_eq!(c.l_cycles.len(), 1 + 4);
    }

    #[test]
    fn deletion_breaks_a_single_lift() {
        // Only the 4-cycle lift of length 12 (all +1) is in L; removing one
        // +1 variant kills it.
        let w = toy(IntSet::explicit([12]).unwrap(), 2, 2, 4);
        let c = classify_gadget_cycles(&w, None).unwrap();
        let r = check_deletion_survival(&w, &c, 1, 10_000).unwrap();
        assert!(r.failed());
        assert_eq!(r.witness["deleted"][0]["kind"], "vertex");
        // s = 0: the intact graph has an L-cycle
        let w0 = GadgetWitness { s: 0, ..w };
        let c0 = classify_gadget_cycles(&w0, None).unwrap();
        let r0 = check_deletion_survival(&w0, &c0, 0, 10_000).unwrap();
        assert_eq!(r0.data["cases"], json!(1));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets_up_to(4, 2).len(), 1 + 4 + 6);
        assert_eq!(count_subsets(216, 1), Some(217));
        assert_eq!(count_subsets(5, 9), Some(32));
    }
}
