//! Cross-module property tests: ring axioms, serialization round trips,
//! structural graph identities and exactness of the cone arithmetic.

mod common;

use common::{code_b, random_connected_graph};

use cyclezeta::codegraph::{
    build_normal_graph, graph_stats, is_cycle_code, parse_parity_check, MatrixFormat,
    ParityCheckMatrix,
};
use cyclezeta::cone::{cone_system, parity_ok};
use cyclezeta::covers::{build_cover, pseudo_codeword, random_cover_spec, sample_codewords};
use cyclezeta::cycles::{codeword_from_cycles, enumerate_simple_cycles};
use cyclezeta::gf2::span_rank;
use cyclezeta::polyring::{poly_det, series_inverse, SparsePolynomial};
use cyclezeta::zeta::DirectedEdgeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_poly(
    num_vars: usize,
    max_terms: usize,
    max_exp: u32,
) -> impl Strategy<Value = SparsePolynomial> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0..=max_exp, num_vars),
            -20i64..=20,
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        SparsePolynomial::from_terms(num_vars, terms.into_iter().map(|(e, c)| (e, c.into())))
    })
}

fn poly_pair(max_terms: usize) -> impl Strategy<Value = (SparsePolynomial, SparsePolynomial)> {
    (1usize..=8).prop_flat_map(move |n| (arb_poly(n, max_terms, 3), arb_poly(n, max_terms, 3)))
}

fn poly_triple(max_terms: usize) -> impl Strategy<Value = [SparsePolynomial; 3]> {
    (1usize..=4).prop_flat_map(move |n| {
        [
            arb_poly(n, max_terms, 2),
            arb_poly(n, max_terms, 2),
            arb_poly(n, max_terms, 2),
        ]
    })
}

proptest! {
    #[test]
    fn addition_commutes((a, b) in poly_pair(50)) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
    }

    #[test]
    fn addition_associates([a, b, c] in poly_triple(50)) {
        let left = a.add(&b).unwrap().add(&c).unwrap();
        let right = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_commutes((a, b) in poly_pair(12)) {
        prop_assert_eq!(a.mul(&b, None).unwrap(), b.mul(&a, None).unwrap());
    }

    #[test]
    fn multiplication_associates([a, b, c] in poly_triple(6)) {
        let left = a.mul(&b, None).unwrap().mul(&c, None).unwrap();
        let right = a.mul(&b.mul(&c, None).unwrap(), None).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes([a, b, c] in poly_triple(10)) {
        let left = a.mul(&b.add(&c).unwrap(), None).unwrap();
        let right = a.mul(&b, None).unwrap().add(&a.mul(&c, None).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_inverse_cancels_up_to_bound(
        (n, tail) in (1usize..=5).prop_flat_map(|n| (Just(n), arb_poly(n, 8, 3))),
        bound in 0u32..=7,
    ) {
        // force constant term 1: start from 1 and strip any constant in the tail
        let one = SparsePolynomial::one(n);
        let adjust = SparsePolynomial::constant(n, tail.constant_term()).neg();
        let p = one.add(&tail).unwrap().add(&adjust).unwrap();
        let inv = series_inverse(&p, bound).unwrap();
        let product = p.mul(inv.as_poly(), Some(bound)).unwrap();
        prop_assert_eq!(product, SparsePolynomial::one(n));
    }

    #[test]
    fn determinant_is_multiplicative_3x3(
        entries in proptest::collection::vec(arb_poly(2, 2, 1), 18)
    ) {
        let take = |offset: usize| -> Vec<Vec<SparsePolynomial>> {
            (0..3)
                .map(|r| (0..3).map(|c| entries[offset + 3 * r + c].clone()).collect())
                .collect()
        };
        let a = take(0);
        let b = take(9);
        let mut ab = vec![vec![SparsePolynomial::zero(2); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                for k in 0..3 {
                    ab[r][c] = ab[r][c]
                        .add(&a[r][k].mul(&b[k][c], None).unwrap())
                        .unwrap();
                }
            }
        }
        let det_ab = poly_det(&ab).unwrap();
        let det_a_det_b = poly_det(&a).unwrap().mul(&poly_det(&b).unwrap(), None).unwrap();
        prop_assert_eq!(det_ab, det_a_det_b);
    }

    #[test]
    fn dense_parse_serialize_round_trip(
        rows in 1usize..=6,
        cols in 1usize..=8,
        bits in proptest::collection::vec(proptest::bool::ANY, 48),
    ) {
        let h = patched_matrix(rows, cols, &bits);
        let text = h.serialize_dense();
        prop_assert_eq!(parse_parity_check(&text, MatrixFormat::Dense).unwrap(), h);
    }

    #[test]
    fn alist_parse_serialize_round_trip(
        rows in 1usize..=6,
        cols in 1usize..=8,
        bits in proptest::collection::vec(proptest::bool::ANY, 48),
    ) {
        let h = patched_matrix(rows, cols, &bits);
        let text = h.serialize_alist();
        prop_assert_eq!(parse_parity_check(&text, MatrixFormat::Alist).unwrap(), h);
    }
}

/// Random 0/1 matrix with zero columns patched so construction succeeds.
fn patched_matrix(rows: usize, cols: usize, bits: &[bool]) -> ParityCheckMatrix {
    let mut entries: Vec<Vec<u8>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| u8::from(bits[(r * cols + c) % bits.len()]))
                .collect()
        })
        .collect();
    for c in 0..cols {
        if (0..rows).all(|r| entries[r][c] == 0) {
            entries[c % rows][c] = 1;
        }
    }
    ParityCheckMatrix::new(entries).unwrap()
}

#[test]
fn determinant_invariant_under_simultaneous_relabeling() {
    // the I - UM system of Code B under random simultaneous row/column
    // permutations: det must not move
    let n = build_normal_graph(&code_b(), false).unwrap();
    let d = DirectedEdgeSet::canonical(&n);
    let size = d.num_half_edges();
    let num_vars = d.num_edges();
    let mut matrix = vec![vec![SparsePolynomial::zero(num_vars); size]; size];
    for (k, row) in matrix.iter_mut().enumerate() {
        row[k] = SparsePolynomial::one(num_vars);
        for (l, entry) in row.iter_mut().enumerate() {
            if d.feeds_into(k, l) {
                *entry = entry
                    .sub(&SparsePolynomial::variable(num_vars, d.base_edge(k)))
                    .unwrap();
            }
        }
    }
    let baseline = poly_det(&matrix).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..5 {
        let mut perm: Vec<usize> = (0..size).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng);
        let permuted: Vec<Vec<SparsePolynomial>> = (0..size)
            .map(|r| {
                (0..size)
                    .map(|c| matrix[perm[r]][perm[c]].clone())
                    .collect()
            })
            .collect();
        assert_eq!(poly_det(&permuted).unwrap(), baseline);
    }
}

#[test]
fn cycle_rank_matches_kernel_dimension_on_random_codes() {
    for seed in 0..40 {
        let h = common::random_cycle_code(seed, 14);
        assert!(is_cycle_code(&h));
        let n = build_normal_graph(&h, false).unwrap();
        let stats = graph_stats(&n);
        assert_eq!(
            stats.cycle_rank,
            h.num_cols() - h.rank(),
            "seed {seed}: rank mismatch"
        );
    }
}

#[test]
fn girth_matches_minimum_codeword_weight_on_random_codes() {
    for seed in 0..40 {
        let h = common::random_cycle_code(seed, 12);
        let n = build_normal_graph(&h, false).unwrap();
        let d_min = h
            .enumerate_kernel()
            .into_iter()
            .map(|w| w.iter().map(|&b| b as usize).sum::<usize>())
            .filter(|&w| w > 0)
            .min();
        assert_eq!(graph_stats(&n).girth, d_min, "seed {seed}");
    }
}

#[test]
fn simple_cycles_span_the_kernel_on_random_codes() {
    for seed in 0..40 {
        let n = random_connected_graph(seed, 12);
        let h = n.to_parity_check();
        let vectors: Vec<Vec<u8>> = enumerate_simple_cycles(&n)
            .iter()
            .map(|c| codeword_from_cycles(&n, std::slice::from_ref(c)).unwrap())
            .collect();
        for v in &vectors {
            assert!(h.is_codeword(v), "seed {seed}: cycle outside kernel");
        }
        assert_eq!(
            span_rank(&vectors),
            h.num_cols() - h.rank(),
            "seed {seed}: span deficient"
        );
    }
}

#[test]
fn cone_membership_is_scale_invariant_on_random_points() {
    let h = code_b();
    let k = cone_system(&h);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let w: Vec<BigRational> = (0..7)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(0..6i64)), BigInt::from(1)))
            .collect();
        let lambda = BigRational::new(
            BigInt::from(rng.gen_range(1..20i64)),
            BigInt::from(rng.gen_range(1..20i64)),
        );
        let scaled: Vec<BigRational> = w.iter().map(|x| x * &lambda).collect();
        assert_eq!(k.contains(&w).unwrap(), k.contains(&scaled).unwrap());
    }
}

#[test]
fn oracle_matches_series_on_small_random_codes() {
    use cyclezeta::cycles::zeta_coefficient_oracle;
    use cyclezeta::polyring::ExponentVector;
    use cyclezeta::zeta::{zeta_inverse, zeta_series};
    let mut tested = 0;
    let mut seed = 300u64;
    while tested < 6 {
        let n_graph = random_connected_graph(seed, 8);
        seed += 1;
        let series = zeta_series(&zeta_inverse(&n_graph), 8).unwrap();
        let n = n_graph.num_edges();
        // sweep every monomial of total degree <= 8
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                let p = ExponentVector(prefix);
                let count = zeta_coefficient_oracle(&n_graph, &p, p.total_degree()).unwrap();
                assert_eq!(
                    series.coefficient(&p),
                    BigInt::from(count),
                    "seed {seed}, monomial {:?}",
                    p.0
                );
                continue;
            }
            let used: u32 = prefix.iter().sum();
            for v in 0..=(8 - used) {
                let mut next = prefix.clone();
                next.push(v);
                stack.push(next);
            }
        }
        tested += 1;
    }
}

#[test]
fn support_equals_cone_lattice_up_to_n_12() {
    use cyclezeta::cone::integer_points;
    use cyclezeta::zeta::{support_exponents, zeta_inverse, zeta_series};
    use std::collections::BTreeSet;
    for seed in 400..410u64 {
        // 6 to 8 vertices: up to 12 edges without the dense extremes whose
        // exact determinants run for minutes
        let graph = common::random_connected_graph_on(seed, 6, 8, 12);
        let h = graph.to_parity_check();
        let series = zeta_series(&zeta_inverse(&graph), 6).unwrap();
        let support: BTreeSet<Vec<u32>> = support_exponents(&series)
            .into_iter()
            .map(|e| e.0)
            .collect();
        let lattice: BTreeSet<Vec<u32>> = integer_points(&cone_system(&h), &h, 6)
            .unwrap()
            .into_iter()
            .filter(|p| p.is_pseudo_codeword())
            .map(|p| p.point)
            .collect();
        assert_eq!(support, lattice, "seed {seed}, n = {}", h.num_cols());
    }
}

#[test]
fn lifts_pass_audits_on_random_codes() {
    use cyclezeta::covers::lift_cycle;
    use cyclezeta::cycles::enumerate_btt_words;
    for seed in 200..212 {
        let n = random_connected_graph(seed, 9);
        let h = n.to_parity_check();
        let d = DirectedEdgeSet::canonical(&n);
        for walk in enumerate_btt_words(&d, 7) {
            let (spec, lifted) = lift_cycle(&n, &walk).unwrap();
            assert_eq!(lifted.projection(), walk.base_edges(&d), "seed {seed}");
            let mut verts = lifted.vertices().to_vec();
            verts.sort_unstable();
            let before = verts.len();
            verts.dedup();
            assert_eq!(verts.len(), before, "seed {seed}: lift not simple");
            let cover = build_cover(&h, &spec).unwrap();
            let chi = lifted.characteristic_vector(n.num_edges());
            assert!(cover.lifted().is_codeword(chi.bits()), "seed {seed}");
        }
    }
}

#[test]
fn sampled_pseudo_codewords_satisfy_parity_on_cycle_codes() {
    // unscaled pseudo-codewords of cycle codes have even dot product with
    // every check row
    for seed in 0..10 {
        let h = common::random_cycle_code(seed, 10);
        let spec = random_cover_spec(&h, 1 + (seed as usize % 4), seed ^ 0xABCD);
        let lifted = build_cover(&h, &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed * 17 + 1);
        for word in sample_codewords(&lifted, 16, &mut rng) {
            let pc = pseudo_codeword(&word);
            assert!(parity_ok(&h, pc.unscaled()), "seed {seed}");
        }
    }
}
