//! Oracles and fixtures shared by the integration suites. Nothing here calls
//! into the search code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lcycle::construct::{EdgeTag, WeightedMultigraph};
use proptest::prelude::*;

/// Builds a graph from `(u, v, weight)` triples.
pub fn graph(n: usize, edges: &[(usize, usize, u128)]) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::with_vertices(n);
    for &(u, v, w) in edges {
        g.add_edge(u, v, w, EdgeTag::Grid).unwrap();
    }
    g
}

pub fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedMultigraph {
    let triples: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
    graph(n, &triples)
}

/// Every cycle as (sorted edge ids, weight), found by scanning all edge
/// subsets for connected 2-regular ones.
pub fn cycles_by_edge_subsets(g: &WeightedMultigraph) -> BTreeMap<Vec<usize>, u128> {
    let m = g.edge_count();
    assert!(m <= 20, "edge-subset oracle is exponential in the edge count");
    let n = g.vertex_count();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << m) {
        let ids: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mut degree = vec![0usize; n];
        for &i in &ids {
            let e = g.edge(i);
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        // connected: union-find over the chosen edges
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &i in &ids {
            let e = g.edge(i);
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
        let roots: std::collections::BTreeSet<usize> = (0..n)
            .filter(|&v| degree[v] > 0)
            .map(|v| find(&mut parent, v))
            .collect();
        if roots.len() == 1 {
            let weight = ids.iter().map(|&i| g.edge(i).weight).sum();
            out.insert(ids, weight);
        }
    }
    out
}

/// Vertex sets of the L-cycles, via the edge-subset oracle.
pub fn l_cycle_vertex_sets(g: &WeightedMultigraph, in_l: impl Fn(u128) -> bool) -> Vec<u64> {
    cycles_by_edge_subsets(g)
        .into_iter()
        .filter(|&(_, w)| in_l(w))
        .map(|(ids, _)| {
            ids.iter().fold(0u64, |acc, &i| {
                let e = g.edge(i);
                acc | 1 << e.u | 1 << e.v
            })
        })
        .collect()
}

/// Largest number of pairwise vertex-disjoint sets, by trying all subsets.
pub fn brute_packing(sets: &[u64]) -> usize {
    fn go(sets: &[u64], used: u64) -> usize {
        match sets.split_first() {
            None => 0,
            Some((&s, rest)) => {
                let skip = go(rest, used);
                if s & used == 0 {
                    skip.max(1 + go(rest, used | s))
                } else {
                    skip
                }
            }
        }
    }
    go(sets, 0)
}

/// Smallest vertex set meeting every set, by increasing size.
pub fn brute_hitting(sets: &[u64], n: usize) -> usize {
    for size in 0..=n {
        if subsets_of_size(n, size).any(|x| sets.iter().all(|&s| s & x != 0)) {
            return size;
        }
    }
    n
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    (0u64..(1 << n)).filter(move |m| m.count_ones() as usize == k)
}

/// Small named graphs used by the cycle and probe suites.
pub fn corpus() -> Vec<(&'static str, WeightedMultigraph)> {
    let cycle = |n: usize| -> Vec<(usize, usize)> { (0..n).map(|i| (i, (i + 1) % n)).collect() };
    let complete = |n: usize| -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    };
    let grid = |r: usize, c: usize| -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    e.push((v, v + 1));
                }
                if i + 1 < r {
                    e.push((v, v + c));
                }
            }
        }
        e
    };
    let mut wheel = cycle(5).iter().map(|&(u, v)| (u + 1, v + 1)).collect::<Vec<_>>();
    wheel.extend((1..=5).map(|i| (0, i)));
    let prism = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
    let cube: Vec<(usize, usize)> = (0..8usize)
        .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    let petersen = [
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
    ];
    let two_triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
    let bowtie = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
    let theta = [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 7), (7, 1)];
    let three_triangles_chain = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 4)];
    let mut k4_pendant = complete(4);
    k4_pendant.extend([(3, 4), (4, 5), (5, 3)]);

    vec![
        ("K4", unit(4, &complete(4))),
        ("two disjoint triangles", unit(6, &two_triangles)),
        ("C5", unit(5, &cycle(5))),
        ("C8", unit(8, &cycle(8))),
        ("K5", unit(5, &complete(5))),
        ("K3,3", unit(6, &k33)),
        ("3x3 grid", unit(9, &grid(3, 3))),
        ("3x4 grid", unit(12, &grid(3, 4))),
        ("wheel W5", unit(6, &wheel)),
        ("prism", unit(6, &prism)),
        ("cube Q3", unit(8, &cube)),
        ("Petersen", unit(10, &petersen)),
        ("bowtie", unit(5, &bowtie)),
        ("theta(2,3,4)", unit(8, &theta)),
        ("triangle chain", unit(7, &three_triangles_chain)),
        ("K4 + triangle", unit(6, &k4_pendant)),
        ("parallel pair + triangle", graph(4, &[(0, 1, 1), (0, 1, 2), (1, 2, 1), (2, 3, 1), (3, 1, 1)])),
        ("weighted K4", graph(4, &[(0, 1, 1), (0, 2, 2), (0, 3, 3), (1, 2, 4), (1, 3, 5), (2, 3, 6)])),
        ("triple edge", graph(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 4)])),
        ("forest", unit(7, &[(0, 1), (1, 2), (1, 3), (4, 5), (5, 6)])),
    ]
}

/// Random multigraphs: up to `max_n` vertices, up to `max_m` edges,
/// weights in `1..=max_w`, no self-loops.
pub fn arb_multigraph(max_n: usize, max_m: usize, max_w: u128) -> impl Strategy<Value = WeightedMultigraph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1..=max_w), 0..=max_m).prop_map(move |raw| {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v, _)| u != v).collect();
            graph(n, &edges)
        })
    })
}
