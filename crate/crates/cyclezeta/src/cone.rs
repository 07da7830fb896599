//! The fundamental cone of a parity-check matrix.
//!
//! `K(H)` is cut out by nonnegativity of every coordinate and, for each
//! check `j` and each distinguished bit `i` of that check, the inequality
//! `sum_{i' in I_j \ {i}} w_{i'} >= w_i`. Everything here is exact
//! integer and rational arithmetic; there are no tolerances. Bounded
//! lattice-point enumeration plus the even-parity side condition gives the
//! set that the zeta support must reproduce.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::codegraph::ParityCheckMatrix;
use crate::error::{Error, Result};
use crate::polyring::ExponentVector;
use crate::zeta::{support_exponents, ZetaSeries};

/// Where an inequality of the cone system comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `w_i >= 0`.
    Nonnegativity { bit: usize },
    /// Check `j` with distinguished bit `i`.
    CheckRow { check: usize, bit: usize },
}

/// One homogeneous inequality `coeffs . w >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub coeffs: Vec<i64>,
    pub provenance: Provenance,
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}w{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}*w{}", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " >= 0")
    }
}

/// The full inequality system of `K(H)`: `n` nonnegativity rows followed
/// by one row per `(check, distinguished bit)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeSystem {
    dimension: usize,
    inequalities: Vec<Inequality>,
}

impl ConeSystem {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// First violated inequality for an exact rational point, if any.
    pub fn first_violation(&self, w: &[BigRational]) -> Result<Option<&Inequality>> {
        if w.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: w.len(),
            });
        }
        Ok(self.inequalities.iter().find(|ineq| {
            let value: BigRational = ineq
                .coeffs
                .iter()
                .zip(w)
                .map(|(&c, wi)| BigRational::from(BigInt::from(c)) * wi)
                .sum();
            value < BigRational::zero()
        }))
    }

    pub fn contains(&self, w: &[BigRational]) -> Result<bool> {
        Ok(self.first_violation(w)?.is_none())
    }

    /// Integer-vector variant, used for unscaled pseudo-codewords and
    /// lattice points (membership is scale-invariant).
    pub fn contains_integer(&self, p: &[u32]) -> Result<bool> {
        if p.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: p.len(),
            });
        }
        Ok(self.inequalities.iter().all(|ineq| {
            ineq.coeffs
                .iter()
                .zip(p)
                .map(|(&c, &pi)| c * pi as i64)
                .sum::<i64>()
                >= 0
        }))
    }
}

/// Builds the inequality system of the fundamental cone of `H`.
pub fn cone_system(h: &ParityCheckMatrix) -> ConeSystem {
    let n = h.num_cols();
    let mut inequalities = Vec::new();
    for i in 0..n {
        let mut coeffs = vec![0i64; n];
        coeffs[i] = 1;
        inequalities.push(Inequality {
            coeffs,
            provenance: Provenance::Nonnegativity { bit: i },
        });
    }
    for j in 0..h.num_rows() {
        for &i in h.row_support(j) {
            let mut coeffs = vec![0i64; n];
            for &ip in h.row_support(j) {
                coeffs[ip] = 1;
            }
            coeffs[i] = -1;
            inequalities.push(Inequality {
                coeffs,
                provenance: Provenance::CheckRow { check: j, bit: i },
            });
        }
    }
    ConeSystem {
        dimension: n,
        inequalities,
    }
}

/// True iff `H p = 0` over GF(2) for the integer vector `p`.
pub fn parity_ok(h: &ParityCheckMatrix, p: &[u32]) -> bool {
    (0..h.num_rows()).all(|j| {
        h.row_support(j)
            .iter()
            .map(|&i| u64::from(p[i]))
            .sum::<u64>()
            .is_multiple_of(2)
    })
}

/// A lattice point flagged with cone membership and the parity condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerConePoint {
    pub point: Vec<u32>,
    pub in_cone: bool,
    pub parity_ok: bool,
}

impl IntegerConePoint {
    /// In cone with even parity: an unscaled pseudo-codeword.
    pub fn is_pseudo_codeword(&self) -> bool {
        self.in_cone && self.parity_ok
    }
}

/// Number of lattice points of the simplex `{p >= 0, sum p <= bound}` in
/// dimension `n`, i.e. `C(bound + n, n)`, saturating.
fn simplex_point_count(n: usize, bound: u32) -> u128 {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc.saturating_mul(bound as u128 + k);
        acc /= k;
        if acc > u128::from(u64::MAX) {
            return u128::MAX;
        }
    }
    acc
}

const LATTICE_GUARD: u128 = 10_000_000;

/// Enumerates every nonnegative integer vector of total degree at most
/// `degree_bound` in ascending graded-lex order, flagged with cone
/// membership and parity.
pub fn integer_points(
    cone: &ConeSystem,
    h: &ParityCheckMatrix,
    degree_bound: u32,
) -> Result<Vec<IntegerConePoint>> {
    let n = cone.dimension();
    assert_eq!(n, h.num_cols(), "cone and matrix disagree on dimension");
    let count = simplex_point_count(n, degree_bound);
    if count > LATTICE_GUARD {
        return Err(Error::LatticeTooLarge {
            count,
            cap: LATTICE_GUARD,
        });
    }
    let mut points = Vec::new();
    let mut current = vec![0u32; n];
    for degree in 0..=degree_bound {
        compositions(&mut current, 0, degree, &mut |p| {
            let in_cone = cone.contains_integer(p).expect("dimension checked");
            points.push(IntegerConePoint {
                point: p.to_vec(),
                in_cone,
                parity_ok: parity_ok(h, p),
            });
        });
    }
    return Ok(points);

    // all ways to write `remaining` into slots `pos..`, lexicographically
    fn compositions(p: &mut Vec<u32>, pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
        if pos + 1 == p.len() {
            p[pos] = remaining;
            emit(p);
            p[pos] = 0;
            return;
        }
        for v in 0..=remaining {
            p[pos] = v;
            compositions(p, pos + 1, remaining - v, emit);
        }
        p[pos] = 0;
    }
}

/// Outcome of comparing the zeta support with the lattice points of the
/// cone. Both difference lists are empty exactly when the bounded
/// Newton-polyhedron equivalence holds.
#[derive(Debug, Clone, Serialize)]
pub struct NewtonReport {
    pub degree_bound: u32,
    pub support_count: usize,
    pub lattice_count: usize,
    /// In-cone, parity-valid lattice points missing from the support.
    pub missing_from_support: Vec<Vec<u32>>,
    /// Support exponents that violate the cone or the parity condition.
    pub outside_cone: Vec<Vec<u32>>,
}

impl NewtonReport {
    pub fn pass(&self) -> bool {
        self.missing_from_support.is_empty() && self.outside_cone.is_empty()
    }
}

/// Verifies both inclusions between the zeta support and the in-cone
/// parity-valid lattice points, up to the series degree bound.
pub fn check_newton_equivalence(
    cone: &ConeSystem,
    h: &ParityCheckMatrix,
    series: &ZetaSeries,
) -> Result<NewtonReport> {
    let degree_bound = series.max_total_degree();
    let support: Vec<ExponentVector> = support_exponents(series);
    let lattice = integer_points(cone, h, degree_bound)?;
    let pseudo: Vec<&IntegerConePoint> =
        lattice.iter().filter(|p| p.is_pseudo_codeword()).collect();

    let support_set: std::collections::BTreeSet<&[u32]> =
        support.iter().map(|e| e.0.as_slice()).collect();
    let missing_from_support = pseudo
        .iter()
        .filter(|p| !support_set.contains(p.point.as_slice()))
        .map(|p| p.point.clone())
        .collect();
    let outside_cone = support
        .iter()
        .filter(|e| !cone.contains_integer(&e.0).expect("dimensions agree") || !parity_ok(h, &e.0))
        .map(|e| e.0.clone())
        .collect();

    Ok(NewtonReport {
        degree_bound,
        support_count: support.len(),
        lattice_count: pseudo.len(),
        missing_from_support,
        outside_cone,
    })
}
