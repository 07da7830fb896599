//! The edge zeta function of a normal graph.
//!
//! Each undirected edge `e_i` splits into two directed half-edges `f_i` and
//! `f_{n+i}`. The directed edge matrix `M` records which half-edge can
//! follow which without backtracking, and the zeta inverse is the
//! polynomial `det(I - UM)` with `U = diag(u_1..u_n, u_1..u_n)`. Inverting
//! that polynomial as a truncated power series yields the zeta Taylor
//! coefficients, whose monomial support is what the cone and cover modules
//! cross-check.

use serde::Serialize;

use crate::codegraph::NormalGraph;
use crate::error::Result;
use crate::polyring::{
    poly_det, series_inverse, ExponentVector, SparsePolynomial, TruncatedSeries,
};

/// The `2n` directed half-edges of a normal graph.
///
/// Half-edge `k < n` carries the chosen orientation of edge `k`, and
/// `k + n` its reversal, so `base_edge` and `reversal` are index
/// arithmetic. The zeta inverse does not depend on the orientation choice;
/// the canonical constructor points each edge from its lower-numbered
/// endpoint to the higher one so runs are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedEdgeSet {
    num_edges: usize,
    tails: Vec<usize>,
    heads: Vec<usize>,
}

impl DirectedEdgeSet {
    /// Canonical orientation: `f_i` points from the lower-numbered endpoint
    /// to the higher one (parallel copies all point the same way).
    pub fn canonical(n: &NormalGraph) -> Self {
        Self::with_flips(n, &vec![false; n.num_edges()])
    }

    /// Orientation with edge `i` reversed wherever `flips[i]` is set.
    pub fn with_flips(n: &NormalGraph, flips: &[bool]) -> Self {
        assert_eq!(flips.len(), n.num_edges());
        let num_edges = n.num_edges();
        let mut tails = Vec::with_capacity(2 * num_edges);
        let mut heads = Vec::with_capacity(2 * num_edges);
        for (i, &(a, b)) in n.edges().iter().enumerate() {
            let (t, h) = if flips[i] { (b, a) } else { (a, b) };
            tails.push(t);
            heads.push(h);
        }
        for i in 0..num_edges {
            tails.push(heads[i]);
            heads.push(tails[i]);
        }
        DirectedEdgeSet {
            num_edges,
            tails,
            heads,
        }
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_half_edges(&self) -> usize {
        2 * self.num_edges
    }

    pub fn tail(&self, k: usize) -> usize {
        self.tails[k]
    }

    pub fn head(&self, k: usize) -> usize {
        self.heads[k]
    }

    /// Index of the undirected edge under half-edge `k`.
    pub fn base_edge(&self, k: usize) -> usize {
        k % self.num_edges
    }

    pub fn reversal(&self, k: usize) -> usize {
        (k + self.num_edges) % (2 * self.num_edges)
    }

    /// True iff `l` may follow `k` in a backtrackless path.
    pub fn feeds_into(&self, k: usize, l: usize) -> bool {
        self.heads[k] == self.tails[l] && l != self.reversal(k)
    }

    /// Half-edges leaving `vertex`.
    pub fn out_edges(&self, vertex: usize) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&k| self.tails[k] == vertex)
            .collect()
    }
}

/// The `2n x 2n` binary matrix of allowed half-edge transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedEdgeMatrix {
    size: usize,
    entries: Vec<Vec<u8>>,
}

impl DirectedEdgeMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, k: usize, l: usize) -> u8 {
        self.entries[k][l]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }
}

pub fn directed_edge_matrix(d: &DirectedEdgeSet) -> DirectedEdgeMatrix {
    let size = d.num_half_edges();
    let entries = (0..size)
        .map(|k| (0..size).map(|l| u8::from(d.feeds_into(k, l))).collect())
        .collect();
    DirectedEdgeMatrix { size, entries }
}

/// The polynomial `det(I - UM)`, the inverse of the edge zeta function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ZetaInverse {
    poly: SparsePolynomial,
}

impl ZetaInverse {
    pub fn poly(&self) -> &SparsePolynomial {
        &self.poly
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }
}

/// Computes the zeta inverse of a normal graph under its canonical
/// orientation.
pub fn zeta_inverse(n: &NormalGraph) -> ZetaInverse {
    zeta_inverse_for(&DirectedEdgeSet::canonical(n))
}

/// Zeta inverse for an explicit orientation. The result is the same for
/// every orientation; this entry point exists so tests can prove it.
pub fn zeta_inverse_for(d: &DirectedEdgeSet) -> ZetaInverse {
    let poly = poly_det(&i_minus_um(d)).expect("well-formed square system");
    ZetaInverse { poly }
}

/// `I - UM`: row `k` scales by the variable of half-edge `k`.
fn i_minus_um(d: &DirectedEdgeSet) -> Vec<Vec<SparsePolynomial>> {
    let n = d.num_edges();
    let size = d.num_half_edges();
    (0..size)
        .map(|k| {
            (0..size)
                .map(|l| {
                    let mut entry = if k == l {
                        SparsePolynomial::one(n)
                    } else {
                        SparsePolynomial::zero(n)
                    };
                    if d.feeds_into(k, l) {
                        entry = entry
                            .sub(&SparsePolynomial::variable(n, d.base_edge(k)))
                            .unwrap();
                    }
                    entry
                })
                .collect()
        })
        .collect()
}

/// `I - MU`: column `l` scales by the variable of half-edge `l`. Equal to
/// `det(I - UM)` as a determinant; computed separately for cross-checks.
pub fn zeta_inverse_mu(d: &DirectedEdgeSet) -> ZetaInverse {
    let n = d.num_edges();
    let size = d.num_half_edges();
    let matrix: Vec<Vec<SparsePolynomial>> = (0..size)
        .map(|k| {
            (0..size)
                .map(|l| {
                    let mut entry = if k == l {
                        SparsePolynomial::one(n)
                    } else {
                        SparsePolynomial::zero(n)
                    };
                    if d.feeds_into(k, l) {
                        entry = entry
                            .sub(&SparsePolynomial::variable(n, d.base_edge(l)))
                            .unwrap();
                    }
                    entry
                })
                .collect()
        })
        .collect();
    ZetaInverse {
        poly: poly_det(&matrix).expect("well-formed square system"),
    }
}

/// Taylor expansion of the zeta function up to a total-degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaSeries {
    max_total_degree: u32,
    terms: TruncatedSeries,
}

impl ZetaSeries {
    pub fn max_total_degree(&self) -> u32 {
        self.max_total_degree
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.terms
    }

    pub fn coefficient(&self, exps: &ExponentVector) -> num_bigint::BigInt {
        self.terms.coefficient(exps)
    }
}

pub fn zeta_series(z: &ZetaInverse, max_total_degree: u32) -> Result<ZetaSeries> {
    Ok(ZetaSeries {
        max_total_degree,
        terms: series_inverse(z.poly(), max_total_degree)?,
    })
}

/// Exponent vectors of the nonzero series terms, ascending graded-lex,
/// zero vector (the constant term) included.
pub fn support_exponents(s: &ZetaSeries) -> Vec<ExponentVector> {
    s.terms.as_poly().terms().map(|(e, _)| e.clone()).collect()
}
