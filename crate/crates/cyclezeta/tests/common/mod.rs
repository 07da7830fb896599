//! Shared helpers for the integration and acceptance tests.

// not every test target uses every helper
#![allow(dead_code)]

use cyclezeta::codegraph::{parse_parity_check, MatrixFormat, NormalGraph, ParityCheckMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CODE_A_DENSE: &str = "1 1 1 0\n0 1 1 1\n";

pub const CODE_B_DENSE: &str = "\
1 1 0 0 0 0 0
0 1 1 1 0 0 0
1 0 1 0 0 0 0
0 0 0 1 1 0 1
0 0 0 0 1 1 0
0 0 0 0 0 1 1
";

pub fn code_a() -> ParityCheckMatrix {
    parse_parity_check(CODE_A_DENSE, MatrixFormat::Dense).unwrap()
}

pub fn code_b() -> ParityCheckMatrix {
    parse_parity_check(CODE_B_DENSE, MatrixFormat::Dense).unwrap()
}

/// The exponent vectors of the reference pseudo-codeword list (all entries
/// at most 2), in the order they are conventionally written.
pub fn reference_support_13() -> Vec<Vec<u32>> {
    vec![
        vec![0, 0, 0, 0, 0, 0, 0],
        vec![1, 1, 1, 0, 0, 0, 0],
        vec![2, 2, 2, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1, 1],
        vec![1, 1, 1, 0, 1, 1, 1],
        vec![2, 2, 2, 0, 1, 1, 1],
        vec![1, 1, 1, 2, 1, 1, 1],
        vec![2, 2, 2, 2, 1, 1, 1],
        vec![0, 0, 0, 0, 2, 2, 2],
        vec![1, 1, 1, 0, 2, 2, 2],
        vec![2, 2, 2, 0, 2, 2, 2],
        vec![1, 1, 1, 2, 2, 2, 2],
        vec![2, 2, 2, 2, 2, 2, 2],
    ]
}

/// A random connected simple graph with 4 to 6 vertices and at most
/// `max_edges` edges (at least one independent cycle), reproducible from
/// the seed. Simple and loop-free, so the girth is at least 3.
pub fn random_connected_graph(seed: u64, max_edges: usize) -> NormalGraph {
    random_connected_graph_on(seed, 4, 6, max_edges)
}

/// As `random_connected_graph` with an explicit vertex range; more
/// vertices at the same edge budget means a sparser graph, which keeps the
/// exact determinants small.
pub fn random_connected_graph_on(
    seed: u64,
    min_vertices: usize,
    max_vertices: usize,
    max_edges: usize,
) -> NormalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = rng.gen_range(min_vertices..=max_vertices);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for k in 1..v {
        let j = rng.gen_range(0..k);
        edges.push((j, k));
    }
    let mut spare: Vec<(usize, usize)> = (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .filter(|p| !edges.contains(p))
        .collect();
    spare.shuffle(&mut rng);
    let budget = max_edges.saturating_sub(edges.len()).min(spare.len());
    assert!(budget >= 1, "max_edges too small for a cycle");
    let extra = rng.gen_range(1..=budget);
    edges.extend(spare.into_iter().take(extra));
    NormalGraph::from_edges(v, edges)
}

/// The parity-check matrix of a random cycle code (see
/// `random_connected_graph`).
pub fn random_cycle_code(seed: u64, max_edges: usize) -> ParityCheckMatrix {
    random_connected_graph(seed, max_edges).to_parity_check()
}
