//! Invariants checked on generated inputs.

mod common;

use std::collections::BTreeMap;

use lcycle::construct::{
    build_grid, build_theta_gadget_graph, construct_gadget_witness, ell_window, g_threshold, grid_vertex,
    path_end, path_start, route_half_integral_paths,
};
use lcycle::io::{parse_edge_list, to_edge_list};
use lcycle::lset::{
    far_from_l_set, find_lonely, find_x, g_of, gap_witness, lonely_sequence, lower_density_prefix,
    perturb, IntSet, LsetError,
};
use lcycle::verify::{
    attainable_offsets, enumerate_cycles, lift_hits, probe_erdos_posa, CheckRecord, Evidence,
    VariantMask, VerificationReport, Verdict, ALL_VARIANTS,
};
use proptest::prelude::*;

use common::{arb_multigraph, cycles_by_edge_subsets};

fn arb_named_set() -> impl Strategy<Value = IntSet> {
    prop_oneof![
        Just(IntSet::squares()),
        Just(IntSet::primes()),
        Just(IntSet::factorials()),
        (2u128..12).prop_map(|b| IntSet::powers(b).unwrap()),
        (0u128..7, 7u128..20).prop_map(|(r, m)| IntSet::arithmetic(r, m).unwrap()),
    ]
}

/// Sparse explicit sets: a few members spread over `[1, 5000]`.
fn arb_sparse_set() -> impl Strategy<Value = IntSet> {
    prop::collection::btree_set(1u128..5000, 1..6).prop_map(|m| IntSet::explicit(m).unwrap())
}

fn arb_set() -> impl Strategy<Value = IntSet> {
    prop_oneof![arb_named_set(), arb_sparse_set()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ---- lset ----

    #[test]
    fn membership_enumeration_agrees(set in arb_set(), lo in 1u128..400, span in 0u128..400) {
        let hi = lo + span;
        let listed = set.members(lo, hi).unwrap();
        let scanned: Vec<u128> = (lo..=hi).filter(|&n| set.contains(n).unwrap()).collect();
        prop_assert_eq!(&listed, &scanned);
        prop_assert_eq!(set.next_member(lo, hi).unwrap(), scanned.first().copied());
        prop_assert!(!set.contains(0).unwrap());
    }

    #[test]
    fn membership_is_pure(set in arb_set(), n in 1u128..100_000) {
        prop_assert_eq!(set.contains(n).unwrap(), set.contains(n).unwrap());
    }

    #[test]
    fn density_counts_members(set in arb_set(), n in 1u128..2000) {
        let d = lower_density_prefix(&set, n).unwrap();
        let count = (1..=n).filter(|&k| set.contains(k).unwrap()).count() as u128;
        prop_assert_eq!(d.count, count);
        prop_assert!(d.count <= d.n);
        prop_assert_eq!(*d.ratio.numer() * n, count * *d.ratio.denom());
    }

    #[test]
    fn g_of_matches_its_definition(set in arb_set(), x in 2u128..80) {
        let in_window = |a: u128| (a * (x - 1)..=a * (x + 1)).any(|n| set.contains(n).unwrap());
        match g_of(&set, x, 60) {
            Ok(g) => {
                prop_assert!((1..g).all(|a| !in_window(a)));
                prop_assert!(in_window(g));
            }
            Err(LsetError::GExceedsCap { .. }) => prop_assert!((1..=60).all(|a| !in_window(a))),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn find_x_forces_g_above_t(set in arb_set(), t in 1u128..5) {
        if let Ok(x) = find_x(&set, t, 3000) {
            if x >= 2 {
                let is_cap = matches!(g_of(&set, x, t), Err(LsetError::GExceedsCap { .. }));
                prop_assert!(is_cap);
            }
        }
    }

    #[test]
    fn far_sets_avoid_l_on_every_subset_sum(set in arb_set(), count in 1usize..7) {
        let Ok(f) = far_from_l_set(&set, count, 10u128.pow(7)) else { return Ok(()) };
        prop_assert_eq!(f.len(), count);
        prop_assert!(f.windows(2).all(|w| w[0] < w[1]));
        for mask in 1u32..(1 << f.len()) {
            let sum: u128 = (0..f.len()).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).sum();
            prop_assert!(!set.contains(sum).unwrap(), "subset sum {} of {:?} is in L", sum, f);
        }
    }

    #[test]
    fn lonely_sequences_leave_the_promised_gap(set in arb_set(), alpha in 1u128..50, count in 1usize..4) {
        let Ok(p) = lonely_sequence(&set, count, alpha, 1_000_000) else { return Ok(()) };
        prop_assert!(p[0] >= 2 * alpha);
        let mut prefix = 0u128;
        for &pk in &p {
            prop_assert!(set.contains(pk).unwrap());
            // successor at least p_k + K: nothing in (p_k, p_k + K)
            prop_assert!(set.next_member(pk + 1, pk + prefix + alpha - 1).unwrap().is_none());
            prefix += pk;
        }
    }

    #[test]
    fn lonely_is_the_first_qualifying_member(set in arb_set(), k in 1u128..40, min_p in 1u128..300) {
        if let Ok(p) = find_lonely(&set, k, min_p, 100_000) {
            let lonely = |q: u128| set.contains(q).unwrap() && (q + 1..q + k).all(|n| !set.contains(n).unwrap());
            prop_assert!(lonely(p));
            prop_assert!((min_p..p).all(|q| !lonely(q)));
        }
    }

    #[test]
    fn perturbation_opens_every_window(set in arb_set(), t in 1u32..12) {
        let p = perturb(&set);
        let start = 3u128.pow(t);
        let y = gap_witness(&p, u128::from(t) + 1, start + 1).unwrap();
        prop_assert!(y.is_some_and(|y| y <= start));
        prop_assert!(p.members(start, start + u128::from(t)).unwrap().is_empty());
    }

    #[test]
    fn set_serde_round_trips(set in arb_set()) {
        let text = serde_json::to_string(&set).unwrap();
        let back: IntSet = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.spec(), set.spec());
        prop_assert_eq!(back.members(1, 500).unwrap(), set.members(1, 500).unwrap());
    }

    // ---- construct ----

    #[test]
    fn ell_window_brackets_the_pigeonhole_chain(t in 1u128..30, g in 1u128..100_000) {
        if let Some((lo, hi)) = ell_window(t, g) {
            for ell in lo..=hi {
                let sq = ell * ell;
                prop_assert!(sq * (2 * t - 1) >= 2 * t * g);
                prop_assert!(sq * (3 * t - 2) <= 3 * t * g);
                // 3tg/(3t-2) < tg/(t-1)
                prop_assert!(t * g > (t - 1) * sq);
            }
        }
    }

    #[test]
    fn theta_graph_has_the_stated_size(ell in 2usize..6, x in 2u128..12) {
        let grid = build_grid(ell).unwrap();
        let g = build_theta_gadget_graph(ell, x).unwrap();
        let e = grid.edge_count() as u128;
        prop_assert_eq!(g.vertex_count() as u128, (ell * ell) as u128 + e * (3 * x - 3));
        prop_assert_eq!(g.edge_count() as u128, e * 3 * x);
    }

    #[test]
    fn constructed_gadgets_meet_their_invariants(set in arb_sparse_set(), t in 1u128..3, s in 0u128..2) {
        let Ok(w) = construct_gadget_witness(&set, t, s, 60, 40) else { return Ok(()) };
        prop_assert_eq!(g_of(&set, w.x, 40).unwrap(), w.g);
        prop_assert!(w.g > g_threshold(t, s).unwrap());
        let (lo, hi) = ell_window(t, w.g).unwrap();
        prop_assert!(lo <= w.ell as u128 && w.ell as u128 <= hi);
        prop_assert!((w.ell as u128).pow(2) >= w.g);
        if w.g >= 3 {
            for len in [2 * w.x - 1, 2 * w.x, 2 * w.x + 1] {
                prop_assert!(!set.contains(len).unwrap(), "theta length {} in L", len);
            }
        }
    }

    #[test]
    fn routing_is_half_integral(ell in 1usize..5) {
        let side = 6 * ell;
        let paths = route_half_integral_paths(ell);
        prop_assert_eq!(paths.len(), 3 * ell);
        let mut load = vec![0u32; side * side];
        for (i, path) in paths.iter().enumerate() {
            prop_assert_eq!(path[0], path_start(i + 1));
            prop_assert_eq!(*path.last().unwrap(), path_end(ell, i + 1));
            let ids: Vec<usize> = path.iter().map(|&p| grid_vertex(side, p)).collect();
            let distinct: std::collections::BTreeSet<_> = ids.iter().collect();
            prop_assert_eq!(distinct.len(), ids.len(), "path {} is not simple", i + 1);
            for w in path.windows(2) {
                let d = w[0].row.abs_diff(w[1].row) + w[0].col.abs_diff(w[1].col);
                prop_assert_eq!(d, 1);
            }
            for id in ids {
                load[id] += 1;
            }
        }
        prop_assert!(load.iter().all(|&l| l <= 2));
    }

    // ---- verify ----

    #[test]
    fn full_variants_reach_every_offset(a in 1usize..40) {
        prop_assert!(attainable_offsets(&vec![ALL_VARIANTS; a]).iter().all(|&b| b));
    }

    #[test]
    fn offset_table_matches_brute_force(masks in prop::collection::vec(0u8..8, 1..7)) {
        let a = masks.len();
        let table = attainable_offsets(&masks);
        let mut brute = vec![false; 2 * a + 1];
        let choices: Vec<Vec<i64>> = masks
            .iter()
            .map(|&m: &VariantMask| (-1i64..=1).filter(|v| m & (1 << (v + 1)) != 0).collect())
            .collect();
        fn walk(choices: &[Vec<i64>], sum: i64, a: i64, out: &mut [bool]) {
            match choices.split_first() {
                None => out[(sum + a) as usize] = true,
                Some((first, rest)) => {
                    for &v in first {
                        walk(rest, sum + v, a, out);
                    }
                }
            }
        }
        walk(&choices, 0, a as i64, &mut brute);
        prop_assert_eq!(table, brute);
    }

    #[test]
    fn lift_hits_lists_members(set in arb_set(), x in 2u128..40, a in 1u64..30) {
        let hits = lift_hits(&set, x, a).unwrap();
        let expect: Vec<i64> = (-(a as i64)..=a as i64)
            .filter(|&b| set.contains((a as i128 * x as i128 + b as i128) as u128).unwrap())
            .collect();
        prop_assert_eq!(hits, expect);
    }

    #[test]
    fn cycles_match_the_edge_subset_oracle(g in arb_multigraph(7, 12, 5)) {
        let found = enumerate_cycles(&g, None, None).unwrap();
        let mut mine = BTreeMap::new();
        for c in &found {
            let mut ids = c.edges.clone();
            ids.sort_unstable();
            prop_assert!(mine.insert(ids, c.weight).is_none(), "cycle reported twice");
        }
        prop_assert_eq!(mine, cycles_by_edge_subsets(&g));
    }

    #[test]
    fn cycle_records_are_consistent(g in arb_multigraph(7, 12, 5)) {
        for c in enumerate_cycles(&g, None, None).unwrap() {
            let n = c.len();
            prop_assert_eq!(c.edges.len(), n);
            prop_assert_eq!(c.vertices[0], *c.vertices.iter().min().unwrap());
            if n >= 3 {
                prop_assert!(c.vertices[1] < c.vertices[n - 1]);
            }
            let mut weight = 0;
            for i in 0..n {
                let e = g.edge(c.edges[i]);
                let (a, b) = (c.vertices[i], c.vertices[(i + 1) % n]);
                prop_assert!((e.u, e.v) == (a, b) || (e.u, e.v) == (b, a));
                weight += e.weight;
            }
            prop_assert_eq!(weight, c.weight);
        }
    }

    #[test]
    fn weight_cap_filters_exactly(g in arb_multigraph(7, 12, 5), cap in 2u128..20) {
        let all = enumerate_cycles(&g, None, None).unwrap();
        let capped = enumerate_cycles(&g, Some(cap), None).unwrap();
        let expect: Vec<_> = all.iter().filter(|c| c.weight <= cap).cloned().collect();
        let key = |v: &[lcycle::verify::CycleRecord]| {
            let mut k: Vec<_> = v.iter().map(|c| c.edges.clone()).collect();
            k.sort();
            k
        };
        prop_assert_eq!(key(&capped), key(&expect));
    }

    #[test]
    fn enumeration_is_deterministic(g in arb_multigraph(7, 12, 5)) {
        prop_assert_eq!(enumerate_cycles(&g, None, None).unwrap(), enumerate_cycles(&g, None, None).unwrap());
    }

    #[test]
    fn hitting_never_below_packing(g in arb_multigraph(7, 11, 3), l in prop::collection::btree_set(2u128..12, 1..4)) {
        let set = IntSet::explicit(l.iter().copied()).unwrap();
        let r = probe_erdos_posa(&g, &set, 6, 1, 100_000, 10_000_000).unwrap();
        prop_assert!(r.packing.complete && r.hitting.complete);
        prop_assert!(r.hitting.vertices.len() >= r.packing.size);
        let sets = common::l_cycle_vertex_sets(&g, |w| l.contains(&w));
        prop_assert_eq!(r.packing.size, common::brute_packing(&sets).min(6));
        prop_assert_eq!(r.hitting.vertices.len(), common::brute_hitting(&sets, g.vertex_count()));
    }

    #[test]
    fn verdict_is_pass_iff_no_check_failed(statuses in prop::collection::vec(0u8..3, 0..12)) {
        let mut report = VerificationReport::new("generated");
        for (i, s) in statuses.iter().enumerate() {
            let name = format!("c{i}");
            report.push(match s {
                0 => CheckRecord::pass(name, Evidence::Exhaustive, ""),
                1 => CheckRecord::fail(name, Evidence::Certificate, ""),
                _ => CheckRecord::skipped(name, ""),
            });
        }
        let expect = if statuses.contains(&1) { Verdict::Fail } else { Verdict::Pass };
        prop_assert_eq!(report.verdict, expect);
        prop_assert_eq!(report.recomputed_verdict(), expect);
    }

    // ---- io ----

    #[test]
    fn edge_lists_round_trip(g in arb_multigraph(9, 15, 1_000_000)) {
        let back = parse_edge_list(&to_edge_list(&g), "generated").unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        let triples = |h: &lcycle::construct::WeightedMultigraph| -> Vec<_> {
            h.edges().iter().map(|e| (e.u, e.v, e.weight)).collect()
        };
        prop_assert_eq!(triples(&back), triples(&g));
    }
}
