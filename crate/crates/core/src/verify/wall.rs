use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::construct::{path_weight, route_half_integral_paths, EdgeTag, VertexId, WallWitness};
use crate::lset::IntSet;

use super::cycles::CycleSearch;
use super::gadget::{count_subsets, subsets_up_to};
use super::paths::find_two_disjoint_paths;
use super::report::{CheckRecord, Evidence};
use super::VerifyError;

/// Rejects witnesses whose lists or ids are inconsistent, so later checks can
/// index freely.
pub fn validate_wall(w: &WallWitness) -> Result<(), VerifyError> {
    let side = 6 * w.ell;
    let n = w.grid.vertex_count();
    let bad = |why: &str| Err(VerifyError::InvalidArgument(format!("malformed wall witness: {why}")));
    if w.ell == 0 || n != side * side || w.graph.vertex_count() != n {
        return bad("grid size does not match ell");
    }
    if (0..n).any(|v| w.grid.label(v).is_none()) {
        return bad("unlabelled grid vertex");
    }
    let m = 3 * w.ell;
    if [w.paths.len(), w.path_weights.len(), w.lonely.len(), w.chords.len()] != [m; 4] {
        return bad("expected 3·ell paths, path weights, lonely values and chords");
    }
    if w.paths.iter().flatten().any(|&v| v >= n) {
        return bad("path vertex out of range");
    }
    if w.chords.iter().any(|c| c.edge >= w.graph.edge_count() || c.a >= n || c.b >= n) {
        return bad("chord refers to a missing edge or vertex");
    }
    Ok(())
}

/// How many paths `Q_i` pass through each vertex, as `multiplicity -> count`.
pub fn multiplicity_histogram(w: &WallWitness) -> BTreeMap<usize, usize> {
    let mut per_vertex = vec![0usize; w.grid.vertex_count()];
    for p in &w.paths {
        for &v in p {
            per_vertex[v] += 1;
        }
    }
    let mut hist = BTreeMap::new();
    for m in per_vertex {
        *hist.entry(m).or_default() += 1;
    }
    hist
}

/// Paths are simple grid paths from `a_i` to `b_i`, matching the routing,
/// with no vertex on more than two.
pub fn check_routing(w: &WallWitness) -> CheckRecord {
    let hist = multiplicity_histogram(w);
    let max = hist.keys().copied().max().unwrap_or(0);
    let expected = route_half_integral_paths(w.ell);
    let side = w.side();
    let mut problems = Vec::new();
    for (k, (p, c)) in w.paths.iter().zip(&w.chords).enumerate() {
        let positions: Vec<_> = p.iter().map(|&v| w.grid.label(v)).collect();
        if positions.iter().map(|p| p.expect("grid vertex")).ne(expected[k].iter().copied()) {
            problems.push(format!("Q_{} differs from the routing", k + 1));
        }
        if p.first() != Some(&c.a) || p.last() != Some(&c.b) {
            problems.push(format!("Q_{} does not join the ends of e_{}", k + 1, k + 1));
        }
        if p.windows(2).any(|pair| w.grid.edge_between(pair[0], pair[1]).is_none()) {
            problems.push(format!("Q_{} leaves the grid", k + 1));
        }
    }
    if w.paths.len() != 3 * w.ell || w.grid.vertex_count() != side * side {
        problems.push("wrong number of paths or grid size".into());
    }
    let ok = max <= 2 && problems.is_empty();
    CheckRecord::judged(
        "wall.routing",
        ok,
        Evidence::Exhaustive,
        format!("multiplicity histogram {hist:?}, max {max}"),
    )
    .with_data(json!({ "multiplicity_histogram": hist, "max": max }))
    .with_witness(if problems.is_empty() { json!(null) } else { json!(problems) })
}

/// `w(Q_i) + w(e_i) = p_i ∈ L`, chord weights positive, `p` increasing,
/// and `p_i` lonely enough.
pub fn check_chords(w: &WallWitness) -> Result<CheckRecord, VerifyError> {
    if w.chords.len() != w.lonely.len() || w.chords.len() != w.paths.len() || w.paths.len() != w.path_weights.len() {
        return Err(VerifyError::InvalidArgument("chord, path and lonely lists differ in length".into()));
    }
    let mut problems = Vec::new();
    let mut prefix = 0u128;
    for (k, c) in w.chords.iter().enumerate() {
        let i = k + 1;
        let p = w.lonely[k];
        let q = path_weight(&w.grid, &w.paths[k])?;
        if q != w.path_weights[k] {
            problems.push(format!("w(Q_{i}) recomputes to {q}, stored {}", w.path_weights[k]));
        }
        if c.weight == 0 || q.checked_add(c.weight) != Some(p) {
            problems.push(format!("w(Q_{i}) + w(e_{i}) != p_{i}"));
        }
        if w.graph.edge(c.edge).weight != c.weight {
            problems.push(format!("graph weight of e_{i} differs"));
        }
        if !w.set.contains(p)? {
            problems.push(format!("p_{i} = {p} not in L"));
        }
        if k > 0 && p <= w.lonely[k - 1] {
            problems.push(format!("p_{i} not increasing"));
        }
        // p_1 >= 2α; p_k is (Σ_{i<k} p_i + α)-lonely.
        let need = if k == 0 { w.alpha } else { prefix + w.alpha };
        if k == 0 && p < 2 * w.alpha {
            problems.push("p_1 < 2α".into());
        }
        if !w.set.is_empty_between(p + 1, p + need - 1)? {
            problems.push(format!("p_{i} is not {need}-lonely"));
        }
        prefix += p;
    }
    let grid_ok = w.grid.edge_count() == w.far_set.len()
        && w.grid.edges().iter().zip(&w.far_set).all(|(e, &a)| e.weight == a)
        && w.graph.edge_count() == w.grid.edge_count() + w.chords.len()
        && w.graph.edges()[..w.grid.edge_count()] == *w.grid.edges()
        && w.chords.iter().all(|c| {
            let e = w.graph.edge(c.edge);
            (e.u, e.v) == (c.a, c.b) && e.tag == EdgeTag::Chord { index: c.index }
        });
    if !grid_ok {
        problems.push("graph does not match the grid weights and chords".into());
    }
    let total = w.grid.total_weight();
    if total != Some(w.alpha) || w.far_set.iter().sum::<u128>() != w.alpha {
        problems.push("α differs from the grid weight".into());
    }
    Ok(CheckRecord::judged(
        "wall.chords",
        problems.is_empty(),
        Evidence::Exhaustive,
        format!(
            "{} chords, weights {:?}, p = {:?}",
            w.chords.len(),
            w.chords.iter().map(|c| c.weight).collect::<Vec<_>>(),
            w.lonely
        ),
    )
    .with_witness(if problems.is_empty() { json!(null) } else { json!(problems) }))
}

/// Interval certificate: `A_k > Σ_{i<k} A_i` and `[A_k, A_k + Σ_{i<k} A_i]`
/// misses L for every `k`. Any subset sum with largest element `A_k` lies in
/// that interval, so all subset sums avoid L.
pub fn far_from_l_certificate(set: &IntSet, a: &[u128]) -> Result<Option<usize>, VerifyError> {
    let mut prefix = 0u128;
    for (k, &x) in a.iter().enumerate() {
        let hi = x
            .checked_add(prefix)
            .ok_or_else(|| VerifyError::InvalidArgument("far-from-L sum overflows".into()))?;
        if x <= prefix || !set.is_empty_between(x, hi)? {
            return Ok(Some(k));
        }
        prefix = hi;
    }
    Ok(None)
}

/// All `2^n - 1` nonempty subset sums of `a` (n <= 24), checked against L.
/// Returns the first subset (bitmask) whose sum is in L.
pub fn subset_sums_in_l(set: &IntSet, a: &[u128]) -> Result<Option<u32>, VerifyError> {
    if a.len() > 24 {
        return Err(VerifyError::InvalidArgument("at most 24 elements".into()));
    }
    let n = a.len();
    let mut sums = vec![0u128; 1 << n];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + a[low];
    }
    let hits: Vec<Option<u32>> = sums[1..]
        .par_iter()
        .enumerate()
        .map(|(i, &s)| set.contains(s).map(|inl| inl.then_some(i as u32 + 1)))
        .collect::<Result<_, _>>()?;
    Ok(hits.into_iter().flatten().next())
}

pub const SUBSET_SUM_PREFIX: usize = 20;

pub fn check_far_from_l(w: &WallWitness) -> Result<[CheckRecord; 2], VerifyError> {
    let cert = far_from_l_certificate(&w.set, &w.far_set)?;
    let first = CheckRecord::judged(
        "wall.far_from_l.certificate",
        cert.is_none(),
        Evidence::Certificate,
        match cert {
            None => format!("all {} interval gaps hold", w.far_set.len()),
            Some(k) => format!("gap condition fails at A_{}", k + 1),
        },
    );
    let m = w.far_set.len().min(SUBSET_SUM_PREFIX);
    let hit = subset_sums_in_l(&w.set, &w.far_set[..m])?;
    let mut second = CheckRecord::judged(
        "wall.far_from_l.subset_sums",
        hit.is_none(),
        Evidence::Exhaustive,
        format!("{} nonempty subset sums of A_1..A_{m} avoid L", (1u64 << m) - 1),
    );
    if let Some(mask) = hit {
        let subset: Vec<u128> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| w.far_set[i]).collect();
        second = second.with_witness(json!({ "subset": subset.iter().map(|x| x.to_string()).collect::<Vec<_>>() }));
        second.summary = "a subset sum lies in L".into();
    }
    Ok([first, second])
}

/// Every cycle of `W` (no chords) has weight outside L.
pub fn check_chordless_cycles(w: &WallWitness, cycle_cap: u64) -> Result<CheckRecord, VerifyError> {
    let search = CycleSearch::new(&w.grid, None);
    let (parts, capped) = search.fold_parallel_partial(
        cycle_cap,
        || (0u64, None::<(Vec<VertexId>, u128)>, None::<VerifyError>),
        |acc, view| {
            acc.0 += 1;
            if acc.1.is_some() || acc.2.is_some() {
                return;
            }
            match w.set.contains(view.weight) {
                Ok(true) => acc.1 = Some((view.to_record().vertices, view.weight)),
                Ok(false) => {}
                Err(e) => acc.2 = Some(e.into()),
            }
        },
    );
    let mut count = 0;
    let mut hit = None;
    for (c, h, err) in parts {
        if let Some(e) = err {
            return Err(e);
        }
        count += c;
        hit = hit.or(h);
    }
    let evidence = if capped { Evidence::Sampled } else { Evidence::Exhaustive };
    let record = CheckRecord::judged(
        "wall.chordless_cycles",
        hit.is_none(),
        evidence,
        if capped {
            format!("first {count} cycles of W avoid L; enumeration stopped at cap {cycle_cap}")
        } else {
            format!("all {count} cycles of W have weight outside L")
        },
    )
    .with_data(json!({ "cycles": count, "capped": capped }));
    Ok(match hit {
        Some((vs, weight)) => record.with_witness(json!({ "vertices": vs, "weight": weight.to_string() })),
        None => record,
    })
}

/// Any cycle whose highest chord is `e_k` and that uses another chord has
/// weight in `(p_k, U_k]` with `U_k = Σ_{i<=k} w(e_i) + α`; that interval
/// must miss L. Also `U_k < p_k + Σ_{i<k} p_i + α`.
pub fn check_single_chord(w: &WallWitness) -> Result<CheckRecord, VerifyError> {
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut chord_prefix = 0u128;
    let mut p_prefix = 0u128;
    for (k, c) in w.chords.iter().enumerate() {
        let p = w.lonely[k];
        chord_prefix += c.weight;
        if k > 0 {
            let upper = chord_prefix + w.alpha;
            let loneliness = p + p_prefix + w.alpha;
            let lower_ok = w.chords[..k].iter().all(|e| c.weight + e.weight > p);
            let empty = w.set.is_empty_between(p + 1, upper)?;
            if !lower_ok {
                problems.push(format!("w(e_{}) + w(e_j) <= p_{} for some j", k + 1, k + 1));
            }
            if upper >= loneliness {
                problems.push(format!("U_{} reaches the loneliness bound", k + 1));
            }
            if !empty {
                problems.push(format!("(p_{}, U_{}] meets L", k + 1, k + 1));
            }
            rows.push(json!({
                "k": k + 1,
                "p_k": p.to_string(),
                "upper": upper.to_string(),
                "loneliness_bound": loneliness.to_string(),
                "interval_empty": empty,
            }));
        }
        p_prefix += p;
    }
    let summary = if w.chords.len() < 2 {
        "fewer than two chords; vacuous".to_string()
    } else {
        format!("{} chord pairs bounded; every interval (p_k, U_k] misses L", w.chords.len() * (w.chords.len() - 1) / 2)
    };
    Ok(CheckRecord::judged("wall.single_chord", problems.is_empty(), Evidence::Certificate, summary)
        .with_data(json!(rows))
        .with_witness(if problems.is_empty() { json!(null) } else { json!(problems) }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingPair {
    pub i: usize,
    pub j: usize,
    pub paths_explored: u64,
    pub nodes: u64,
    pub complete: bool,
    pub disjoint: Option<[Vec<VertexId>; 2]>,
}

/// For every pair of chords, no vertex-disjoint `a_i–b_i` and `a_j–b_j`
/// paths exist in `W`.
pub fn crossing_pairs(w: &WallWitness, path_cap: u64) -> Vec<CrossingPair> {
    let m = w.chords.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ci, cj) = (&w.chords[i], &w.chords[j]);
            let r = find_two_disjoint_paths(&w.grid, (ci.a, ci.b), (cj.a, cj.b), path_cap, true);
            CrossingPair {
                i: i + 1,
                j: j + 1,
                paths_explored: r.paths_explored,
                nodes: r.nodes,
                complete: r.complete,
                disjoint: r.found,
            }
        })
        .collect()
}

pub fn check_crossing(w: &WallWitness, path_cap: u64) -> CheckRecord {
    let pairs = crossing_pairs(w, path_cap);
    let linked: Vec<&CrossingPair> = pairs.iter().filter(|p| p.disjoint.is_some()).collect();
    let complete = pairs.iter().all(|p| p.complete);
    let evidence = if complete { Evidence::Exhaustive } else { Evidence::Sampled };
    let explored: u64 = pairs.iter().map(|p| p.paths_explored).sum();
    let nodes: u64 = pairs.iter().map(|p| p.nodes).sum();
    let record = CheckRecord::judged(
        "wall.crossing",
        linked.is_empty(),
        evidence,
        if !linked.is_empty() {
            format!("{} chord pairs have vertex-disjoint paths", linked.len())
        } else if complete {
            format!(
                "no chord pair links disjointly ({} pairs, {explored} complete paths, {nodes} search nodes)",
                pairs.len()
            )
        } else {
            format!("no disjoint linkage found, but the search hit the cap of {path_cap} paths; unverified")
        },
    )
    .with_data(json!(pairs
        .iter()
        .map(|p| {
            json!({ "i": p.i, "j": p.j, "paths_explored": p.paths_explored, "nodes": p.nodes, "complete": p.complete })
        })
        .collect::<Vec<_>>()));
    match linked.first() {
        Some(p) => record.with_witness(json!(p)),
        None => record,
    }
}

/// One reduced deletion for the wall: a grid vertex, or chord `e_index`
/// (standing for any of its subdivision vertices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WallDeletion {
    Vertex { vertex: VertexId },
    Chord { index: usize },
}

/// `p_i` of the cycles `Q_i ∪ e_i` untouched by `deleted`.
pub fn surviving_lengths(w: &WallWitness, deleted: &[WallDeletion]) -> Vec<u128> {
    let mut out: Vec<u128> = (0..w.chords.len())
        .filter(|&k| {
            deleted.iter().all(|d| match *d {
                WallDeletion::Vertex { vertex } => !w.paths[k].contains(&vertex),
                WallDeletion::Chord { index } => index != k + 1,
            })
        })
        .map(|k| w.lonely[k])
        .collect();
    out.dedup();
    out
}

/// Every reduced deletion set of size at most `ell` leaves at least `ell`
/// distinct L-lengths among the `Q_i ∪ e_i`.
pub fn check_deletion(w: &WallWitness, ell: usize, case_cap: u64) -> Result<CheckRecord, VerifyError> {
    let name = "wall.deletion";
    let max_mult = multiplicity_histogram(w).keys().copied().max().unwrap_or(0);
    let certificate = 3 * w.ell >= ell + max_mult.max(1) * ell && max_mult <= 2;
    let cert_line = format!(
        "multiplicity {max_mult}: {} - {}·{ell} >= {ell} paths survive",
        3 * w.ell,
        max_mult.max(1)
    );
    let mut items: Vec<WallDeletion> = (0..w.grid.vertex_count())
        .map(|vertex| WallDeletion::Vertex { vertex })
        .collect();
    items.extend((1..=w.chords.len()).map(|index| WallDeletion::Chord { index }));
    let cases = count_subsets(items.len() as u128, ell as u128);
    if cases.is_none_or(|n| n > case_cap as u128) {
        return Ok(CheckRecord::judged(
            name,
            certificate,
            Evidence::Certificate,
            format!("reduced cases exceed cap {case_cap}; {cert_line}"),
        ));
    }
    let all_in_l = w
        .lonely
        .iter()
        .map(|&p| w.set.contains(p))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|b| b);
    let subsets = subsets_up_to(items.len(), ell);
    let worst = subsets
        .par_iter()
        .map(|idx| {
            let deleted: Vec<WallDeletion> = idx.iter().map(|&i| items[i]).collect();
            (surviving_lengths(w, &deleted).len(), deleted)
        })
        .min_by_key(|(n, _)| *n)
        .expect("the empty deletion is always a case");
    let ok = worst.0 >= ell && all_in_l && certificate;
    let record = CheckRecord::judged(
        name,
        ok,
        Evidence::Exhaustive,
        format!(
            "{} reduced cases ({} grid vertices + {} chord removals, up to {ell} at once); fewest surviving L-lengths {}; {cert_line}",
            subsets.len(),
            w.grid.vertex_count(),
            w.chords.len(),
            worst.0
        ),
    )
    .with_data(json!({ "cases": subsets.len(), "min_surviving": worst.0, "certificate": certificate }));
    Ok(if worst.0 < ell {
        record.with_witness(json!({ "deleted": worst.1 }))
    } else {
        record
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct_wall_witness, grid_vertex, GridPos};

    fn wall() -> WallWitness {
        construct_wall_witness(&IntSet::powers(10).unwrap(), 1, 10u128.pow(30)).unwrap()
    }

    #[test]
    fn interval_certificate_on_known_sets() {
        let squares = IntSet::squares();
        assert_eq!(far_from_l_certificate(&squares, &[2, 5, 17, 170]).unwrap(), None);
        // [7, 9] contains 9
        assert_eq!(far_from_l_certificate(&squares, &[2, 7]).unwrap(), Some(1));
        // not increasing fast enough
        assert_eq!(far_from_l_certificate(&squares, &[2, 2]).unwrap(), Some(1));
        assert_eq!(subset_sums_in_l(&squares, &[2, 5, 17, 170]).unwrap(), None);
        assert_eq!(subset_sums_in_l(&squares, &[2, 7]).unwrap(), Some(3));
    }

    #[test]
    fn crossing_vertex_deletion_leaves_third_path() {
        let w = wall();
        let v = grid_vertex(6, GridPos::new(2, 2));
        let hit: Vec<usize> = (0..3).filter(|&k| w.paths[k].contains(&v)).collect();
        assert_eq!(hit.len(), 2);
        let left = surviving_lengths(&w, &[WallDeletion::Vertex { vertex: v }]);
        assert_eq!(left.len(), 1);
        assert_eq!(surviving_lengths(&w, &[]).len(), 3);
    }

    #[test]
    fn pair_one_three_does_not_link() {
        let w = wall();
        let pairs = crossing_pairs(&w, 10_000_000);
        assert_eq!(pairs.len(), 3);
        let p13 = pairs.iter().find(|p| (p.i, p.j) == (1, 3)).unwrap();
        assert_eq!(
            (w.grid.label(w.chords[0].a), w.grid.label(w.chords[0].b)),
            (Some(GridPos::new(1, 1)), Some(GridPos::new(6, 6)))
        );
        assert_eq!(
            (w.grid.label(w.chords[2].a), w.grid.label(w.chords[2].b)),
            (Some(GridPos::new(1, 3)), Some(GridPos::new(6, 4)))
        );
        assert!(p13.complete && p13.disjoint.is_none());
    }

    #[test]
    fn single_chord_vacuous_for_one_chord() {
        let mut w = wall();
        w.chords.truncate(1);
        w.lonely.truncate(1);
        let r = check_single_chord(&w).unwrap();
        assert!(r.passed());
        assert!(r.summary.contains("vacuous"));
    }
}
