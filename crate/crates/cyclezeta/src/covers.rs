//! Finite covers of a Tanner graph and their pseudo-codewords.
//!
//! An `M`-cover is pinned down by one permutation of `{1..M}` per edge of
//! the Tanner graph: the `m`-th copy of check `j` sees the
//! `pi_{j,i}(m)`-th copy of bit `i`. Lifting the parity-check matrix,
//! enumerating cover codewords and averaging them down to pseudo-codewords
//! are all mechanical; the interesting construction is `lift_cycle`, which
//! turns a backtrackless tailless cycle of the normal graph into a simple
//! cycle of some finite cover projecting back onto it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::codegraph::{enumerate_combinations, NormalGraph, ParityCheckMatrix};
use crate::cycles::CycleWord;
use crate::error::{Error, Result};
use crate::polyring::ExponentVector;
use crate::zeta::DirectedEdgeSet;

/// Cap on the kernel dimension for exhaustive codeword enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Permutation data pinning down an `M`-cover of a Tanner graph.
///
/// Keys are `(check j, bit i)` pairs, exactly the support of `H`;
/// `perms[(j, i)][m] = m'` means the `m`-th copy of check `j` is wired to
/// the `m'`-th copy of bit `i` (0-based internally, 1-based in JSON).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    degree: usize,
    perms: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CoverSpec {
    pub fn new(degree: usize, perms: BTreeMap<(usize, usize), Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::CoverKeyMismatch {
                detail: "cover degree must be at least 1".into(),
            });
        }
        for (&(j, i), perm) in &perms {
            let mut seen = vec![false; degree];
            if perm.len() != degree || perm.iter().any(|&m| m >= degree) {
                return Err(Error::NotAPermutation {
                    check: j + 1,
                    bit: i + 1,
                    degree,
                });
            }
            for &m in perm {
                if seen[m] {
                    return Err(Error::NotAPermutation {
                        check: j + 1,
                        bit: i + 1,
                        degree,
                    });
                }
                seen[m] = true;
            }
        }
        Ok(CoverSpec { degree, perms })
    }

    /// The 1-cover (or, for `degree > 1`, the disjoint union of copies).
    pub fn identity(h: &ParityCheckMatrix, degree: usize) -> Self {
        assert!(degree >= 1, "cover degree must be at least 1");
        let perms = h
            .support()
            .into_iter()
            .map(|key| (key, (0..degree).collect()))
            .collect();
        CoverSpec { degree, perms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, check: usize, bit: usize) -> Option<&[usize]> {
        self.perms.get(&(check, bit)).map(Vec::as_slice)
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.perms.keys().copied()
    }

    fn require_matching_support(&self, h: &ParityCheckMatrix) -> Result<()> {
        let expected: BTreeMap<(usize, usize), ()> =
            h.support().into_iter().map(|k| (k, ())).collect();
        if self.perms.len() != expected.len()
            || !self.perms.keys().all(|k| expected.contains_key(k))
        {
            return Err(Error::CoverKeyMismatch {
                detail: format!(
                    "spec has {} permutations, H has {} support entries",
                    self.perms.len(),
                    expected.len()
                ),
            });
        }
        Ok(())
    }
}

impl Serialize for CoverSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            #[serde(rename = "M")]
            degree: usize,
            perms: BTreeMap<String, Vec<usize>>,
        }
        let perms = self
            .perms
            .iter()
            .map(|(&(j, i), perm)| {
                (
                    format!("{},{}", j + 1, i + 1),
                    perm.iter().map(|&m| m + 1).collect(),
                )
            })
            .collect();
        Wire {
            degree: self.degree,
            perms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoverSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(rename = "M")]
            degree: usize,
            perms: BTreeMap<String, Vec<usize>>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let mut perms = BTreeMap::new();
        for (key, images) in wire.perms {
            let (j, i) = key
                .split_once(',')
                .and_then(|(a, b)| {
                    Some((
                        a.trim().parse::<usize>().ok()?,
                        b.trim().parse::<usize>().ok()?,
                    ))
                })
                .ok_or_else(|| D::Error::custom(format!("bad perm key {key:?}, want \"j,i\"")))?;
            if j == 0 || i == 0 {
                return Err(D::Error::custom("perm keys are 1-based"));
            }
            let perm: Vec<usize> = images
                .into_iter()
                .map(|m| {
                    m.checked_sub(1)
                        .ok_or_else(|| D::Error::custom("perm images are 1-based"))
                })
                .collect::<std::result::Result<_, _>>()?;
            perms.insert((j - 1, i - 1), perm);
        }
        CoverSpec::new(wire.degree, perms).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Draws a uniformly random cover spec, reproducible from the seed.
pub fn random_cover_spec(h: &ParityCheckMatrix, degree: usize, seed: u64) -> CoverSpec {
    assert!(degree >= 1, "cover degree must be at least 1");
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let perms = h
        .support()
        .into_iter()
        .map(|key| {
            let mut perm: Vec<usize> = (0..degree).collect();
            perm.shuffle(&mut rng);
            (key, perm)
        })
        .collect();
    CoverSpec { degree, perms }
}

/// A lifted parity-check matrix together with its provenance.
///
/// Rows are indexed `(j, m)` as `j * M + m` and columns `(i, m')` as
/// `i * M + m'`, so copies of a base row or column sit in contiguous
/// blocks and the lifted matrix of a block-permutation example can be
/// compared entry by entry.
#[derive(Debug, Clone)]
pub struct LiftedParityCheck {
    base: ParityCheckMatrix,
    spec: CoverSpec,
    lifted: ParityCheckMatrix,
}

impl LiftedParityCheck {
    pub fn base(&self) -> &ParityCheckMatrix {
        &self.base
    }

    pub fn spec(&self) -> &CoverSpec {
        &self.spec
    }

    pub fn lifted(&self) -> &ParityCheckMatrix {
        &self.lifted
    }

    pub fn degree(&self) -> usize {
        self.spec.degree()
    }
}

/// Lifts `H` through a cover spec: `h_{(j,m),(i,m')} = 1` iff `i` is in
/// `I_j` and `m' = pi_{j,i}(m)`.
pub fn build_cover(h: &ParityCheckMatrix, spec: &CoverSpec) -> Result<LiftedParityCheck> {
    spec.require_matching_support(h)?;
    let m = spec.degree();
    let mut entries = vec![vec![0u8; h.num_cols() * m]; h.num_rows() * m];
    for (j, i) in h.support() {
        let perm = spec.perm(j, i).expect("support checked above");
        for (copy, &image) in perm.iter().enumerate() {
            entries[j * m + copy][i * m + image] = 1;
        }
    }
    let lifted = ParityCheckMatrix::new(entries)?;
    Ok(LiftedParityCheck {
        base: h.clone(),
        spec: spec.clone(),
        lifted,
    })
}

/// A codeword of the cover code, bits indexed `(i, m)` as `i * M + m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCodeword {
    degree: usize,
    bits: Vec<u8>,
}

impl CoverCodeword {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, i: usize, copy: usize) -> u8 {
        self.bits[i * self.degree + copy]
    }

    pub fn num_base_bits(&self) -> usize {
        self.bits.len() / self.degree
    }
}

/// Every codeword of the lifted code, all-zero word first.
pub fn enumerate_codewords(l: &LiftedParityCheck) -> Result<Vec<CoverCodeword>> {
    let basis = l.lifted.to_bit_matrix().kernel_basis();
    if basis.len() > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            dim: basis.len(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(enumerate_combinations(&basis, l.lifted.num_cols())
        .into_iter()
        .map(|bits| CoverCodeword {
            degree: l.degree(),
            bits,
        })
        .collect())
}

/// Draws `count` codewords as uniform random combinations of the kernel
/// basis (repeats possible).
pub fn sample_codewords(
    l: &LiftedParityCheck,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<CoverCodeword> {
    let basis = l.lifted.to_bit_matrix().kernel_basis();
    let cols = l.lifted.num_cols();
    (0..count)
        .map(|_| {
            let mut bits = vec![0u8; cols];
            for vec in &basis {
                if rng.gen::<bool>() {
                    for (b, &x) in bits.iter_mut().zip(vec) {
                        *b ^= x;
                    }
                }
            }
            CoverCodeword {
                degree: l.degree(),
                bits,
            }
        })
        .collect()
}

/// The per-bit average of a cover codeword over its `M` copies.
///
/// `omega_i = (1/M) * sum_m c_{i,m}` is kept as the exact integer pair
/// `(unscaled_i, M)`; nothing here ever rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCodeword {
    degree: usize,
    unscaled: Vec<u32>,
}

impl PseudoCodeword {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `M * omega`, entry-wise.
    pub fn unscaled(&self) -> &[u32] {
        &self.unscaled
    }

    /// The rational vector `omega` itself.
    pub fn omega(&self) -> Vec<BigRational> {
        self.unscaled
            .iter()
            .map(|&v| BigRational::new(BigInt::from(v), BigInt::from(self.degree as u64)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.unscaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unscaled.is_empty()
    }
}

pub fn pseudo_codeword(c: &CoverCodeword) -> PseudoCodeword {
    let n = c.num_base_bits();
    let unscaled = (0..n)
        .map(|i| (0..c.degree()).map(|m| u32::from(c.bit(i, m))).sum())
        .collect();
    PseudoCodeword {
        degree: c.degree(),
        unscaled,
    }
}

/// A simple cycle in the normal graph of a lifted code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedCycle {
    degree: usize,
    /// Lifted edge per step: `(base bit i, copy m')`.
    steps: Vec<(usize, usize)>,
    /// Lifted vertex at the tail of each step: `(base check j, sheet)`.
    vertices: Vec<(usize, usize)>,
}

impl LiftedCycle {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    /// Base edge indices in walk order: the projection of the cycle.
    pub fn projection(&self) -> Vec<usize> {
        self.steps.iter().map(|&(i, _)| i).collect()
    }

    /// Characteristic vector of the lifted cycle as a cover codeword.
    pub fn characteristic_vector(&self, num_base_bits: usize) -> CoverCodeword {
        let mut bits = vec![0u8; num_base_bits * self.degree];
        for &(i, copy) in &self.steps {
            bits[i * self.degree + copy] ^= 1;
        }
        CoverCodeword {
            degree: self.degree,
            bits,
        }
    }
}

/// Lifts a backtrackless tailless cycle to a simple cycle in a finite
/// cover, returning the cover spec and the lifted cycle.
///
/// Sheets are assigned by visit order: the `q`-th visit of a vertex runs
/// in sheet `q`, so the cover degree is the largest visit multiplicity.
/// Two traversals of one edge can only collide on a sheet if they are
/// consecutive and opposite, which is exactly a backtrack (or, across the
/// seam, a tail). For a backtrackless tailless input the per-edge partial
/// matchings therefore stay injective and extend greedily to permutations.
/// The returned degree is not required to be minimal.
pub fn lift_cycle(n: &NormalGraph, walk: &CycleWord) -> Result<(CoverSpec, LiftedCycle)> {
    let d = DirectedEdgeSet::canonical(n);
    walk.require_btt(&d)?;
    let verts = walk.vertices(&d);
    let len = walk.len();

    // sheet of each position: how often its vertex occurred before
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sheet = Vec::with_capacity(len);
    for &v in &verts {
        let q = seen.entry(v).or_insert(0);
        sheet.push(*q);
        *q += 1;
    }
    let degree = seen.values().copied().max().unwrap_or(1);

    // partial matchings lower-endpoint-sheet -> higher-endpoint-sheet
    let h = n.to_parity_check();
    let mut matchings: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut steps = Vec::with_capacity(len);
    for s in 0..len {
        let edge = d.base_edge(walk.steps()[s]);
        let (lo, _hi) = n.edge(edge);
        let (tail_sheet, head_sheet) = (sheet[s], sheet[(s + 1) % len]);
        let (lo_sheet, hi_sheet) = if verts[s] == lo {
            (tail_sheet, head_sheet)
        } else {
            (head_sheet, tail_sheet)
        };
        let matching = matchings.entry(edge).or_default();
        if let Some(&existing) = matching.get(&lo_sheet) {
            assert_eq!(existing, hi_sheet, "matching conflict on a BTT walk");
        } else {
            assert!(
                !matching.values().any(|&t| t == hi_sheet),
                "matching conflict on a BTT walk"
            );
            matching.insert(lo_sheet, hi_sheet);
        }
        // the lifted edge is the bit copy indexed by the higher-endpoint sheet
        steps.push((edge, hi_sheet));
    }

    // complete matchings to permutations; untouched edges stay identity
    let mut perms: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..n.num_edges() {
        let (lo, hi) = n.edge(i);
        let matching = matchings.remove(&i).unwrap_or_default();
        let mut images = vec![usize::MAX; degree];
        let mut used = vec![false; degree];
        for (&src, &dst) in &matching {
            images[src] = dst;
            used[dst] = true;
        }
        let mut free = (0..degree).filter(|&t| !used[t]);
        for img in images.iter_mut() {
            if *img == usize::MAX {
                *img = free.next().expect("matching is injective");
            }
        }
        // pi_{lo,i} carries the matching, pi_{hi,i} is the identity
        perms.insert((lo, i), images);
        perms.insert((hi, i), (0..degree).collect());
    }
    let spec = CoverSpec::new(degree, perms).expect("constructed permutations are bijective");
    let lifted = LiftedCycle {
        degree,
        steps,
        vertices: verts.iter().zip(&sheet).map(|(&v, &s)| (v, s)).collect(),
    };
    debug_assert_eq!(spec.require_matching_support(&h), Ok(()));
    Ok((spec, lifted))
}

/// Edge-usage vector of a walk, for comparing against unscaled
/// pseudo-codewords.
pub fn walk_edge_usage(n: &NormalGraph, walk: &CycleWord) -> ExponentVector {
    walk.edge_usage(&DirectedEdgeSet::canonical(n))
}
