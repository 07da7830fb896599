//! Cycle enumeration on the normal graph.
//!
//! Three families matter here: simple cycles (they span the code),
//! backtrackless tailless closed walks (they project from simple cycles in
//! covers), and rotation classes of primitive backtrackless tailless
//! cycles (they index the Euler product of the zeta function). The class
//! enumeration doubles as a brute-force oracle for zeta Taylor
//! coefficients that never touches the determinant path.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::codegraph::NormalGraph;
use crate::error::{Error, Result};
use crate::polyring::ExponentVector;
use crate::zeta::DirectedEdgeSet;

/// A closed walk written as directed half-edge indices.
///
/// Rotating the steps gives an equivalent cycle; reversal does not (a cycle
/// and its reverse are distinct classes, which is why a lone triangle
/// contributes two Euler factors).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleWord {
    steps: Vec<usize>,
}

impl CycleWord {
    /// Validates that `steps` is a closed walk on the directed edge set.
    pub fn new(d: &DirectedEdgeSet, steps: Vec<usize>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::NotAClosedWalk {
                detail: "empty edge sequence".into(),
            });
        }
        for (s, &k) in steps.iter().enumerate() {
            let next = steps[(s + 1) % steps.len()];
            if d.head(k) != d.tail(next) {
                return Err(Error::NotAClosedWalk {
                    detail: format!(
                        "step {} ends at vertex {} but step {} starts at vertex {}",
                        s + 1,
                        d.head(k) + 1,
                        (s + 1) % steps.len() + 1,
                        d.tail(next) + 1
                    ),
                });
            }
        }
        Ok(CycleWord { steps })
    }

    /// Directs an undirected edge sequence into a closed walk. For parallel
    /// edges several directions may chain; the first consistent one wins.
    pub fn from_edge_sequence(
        n: &NormalGraph,
        d: &DirectedEdgeSet,
        edges: &[usize],
    ) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::NotAClosedWalk {
                detail: "empty edge sequence".into(),
            });
        }
        let num = n.num_edges();
        fn search(
            d: &DirectedEdgeSet,
            edges: &[usize],
            num: usize,
            chosen: &mut Vec<usize>,
        ) -> bool {
            let s = chosen.len();
            if s == edges.len() {
                return d.head(chosen[s - 1]) == d.tail(chosen[0]);
            }
            let e = edges[s];
            for half in [e, e + num] {
                if s > 0 && d.head(chosen[s - 1]) != d.tail(half) {
                    continue;
                }
                chosen.push(half);
                if search(d, edges, num, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut chosen = Vec::with_capacity(edges.len());
        if !search(d, edges, num, &mut chosen) {
            return Err(Error::NotAClosedWalk {
                detail: format!(
                    "edge sequence {:?} cannot be directed into a closed walk",
                    edges.iter().map(|&e| e + 1).collect::<Vec<_>>()
                ),
            });
        }
        Ok(CycleWord { steps: chosen })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Undirected edge indices in walk order.
    pub fn base_edges(&self, d: &DirectedEdgeSet) -> Vec<usize> {
        self.steps.iter().map(|&k| d.base_edge(k)).collect()
    }

    /// How often each undirected edge is used.
    pub fn edge_usage(&self, d: &DirectedEdgeSet) -> ExponentVector {
        let mut usage = vec![0u32; d.num_edges()];
        for &k in &self.steps {
            usage[d.base_edge(k)] += 1;
        }
        ExponentVector(usage)
    }

    /// Vertices visited, one per step (the tail of each step).
    pub fn vertices(&self, d: &DirectedEdgeSet) -> Vec<usize> {
        self.steps.iter().map(|&k| d.tail(k)).collect()
    }

    pub fn is_backtrackless(&self, d: &DirectedEdgeSet) -> bool {
        self.steps.windows(2).all(|w| w[1] != d.reversal(w[0]))
    }

    pub fn is_tailless(&self, d: &DirectedEdgeSet) -> bool {
        self.steps.len() >= 2 && self.steps[0] != d.reversal(*self.steps.last().unwrap())
    }

    /// Errors unless the word is both backtrackless and tailless.
    pub fn require_btt(&self, d: &DirectedEdgeSet) -> Result<()> {
        for (s, w) in self.steps.windows(2).enumerate() {
            if w[1] == d.reversal(w[0]) {
                return Err(Error::Backtracking {
                    step: s + 1,
                    edge: d.base_edge(w[0]) + 1,
                });
            }
        }
        if !self.is_tailless(d) {
            return Err(Error::Tail {
                first: d.base_edge(self.steps[0]) + 1,
                last: d.base_edge(*self.steps.last().unwrap()) + 1,
            });
        }
        Ok(())
    }

    /// True iff the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let k = self.steps.len();
        for period in 1..k {
            if !k.is_multiple_of(period) {
                continue;
            }
            if (0..k).all(|s| self.steps[s] == self.steps[(s + period) % k]) {
                return false;
            }
        }
        true
    }

    /// Lexicographically least rotation of the step sequence.
    pub fn canonical_rotation(&self) -> Vec<usize> {
        let k = self.steps.len();
        let mut best = 0;
        for start in 1..k {
            for offset in 0..k {
                let a = self.steps[(start + offset) % k];
                let b = self.steps[(best + offset) % k];
                match a.cmp(&b) {
                    std::cmp::Ordering::Less => {
                        best = start;
                        break;
                    }
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        (0..k).map(|o| self.steps[(best + o) % k]).collect()
    }
}

/// A rotation class of primitive backtrackless tailless cycles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CycleClass {
    /// Canonical representative: lexicographically least rotation of the
    /// half-edge indices (serialized 1-based).
    #[serde(serialize_with = "serialize_one_based")]
    pub rep: Vec<usize>,
    pub length: usize,
    /// The exponent vector of `g(Gamma)`.
    pub monomial: ExponentVector,
}

fn serialize_one_based<S: serde::Serializer>(
    rep: &[usize],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    rep.iter().map(|&k| k + 1).collect::<Vec<_>>().serialize(s)
}

/// All simple cycles of a normal graph, as undirected edge-index sets.
///
/// A simple cycle touches every vertex in at most two of its edges, so the
/// cycles are exactly the connected 2-regular edge subsets. Enumeration
/// walks vertex paths rooted at each cycle's smallest vertex; a parallel
/// edge pair counts as a 2-cycle.
pub fn enumerate_simple_cycles(n: &NormalGraph) -> Vec<BTreeSet<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n.num_vertices()];
    for (i, &(a, b)) in n.edges().iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    // depth-first vertex paths from each root; only vertices above the root
    // may appear inside a path, so each cycle is discovered at its minimum
    let mut path_edges: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n.num_vertices()];
    fn dfs(
        adj: &[Vec<(usize, usize)>],
        root: usize,
        current: usize,
        on_path: &mut Vec<bool>,
        path_edges: &mut Vec<usize>,
        found: &mut BTreeSet<BTreeSet<usize>>,
    ) {
        for &(next, eid) in &adj[current] {
            if path_edges.contains(&eid) {
                continue;
            }
            if next == root && !path_edges.is_empty() {
                let mut cycle: BTreeSet<usize> = path_edges.iter().copied().collect();
                cycle.insert(eid);
                if cycle.len() >= 2 {
                    found.insert(cycle);
                }
                continue;
            }
            if next <= root || on_path[next] {
                continue;
            }
            on_path[next] = true;
            path_edges.push(eid);
            dfs(adj, root, next, on_path, path_edges, found);
            path_edges.pop();
            on_path[next] = false;
        }
    }
    for root in 0..n.num_vertices() {
        on_path[root] = true;
        dfs(&adj, root, root, &mut on_path, &mut path_edges, &mut found);
        on_path[root] = false;
    }
    found.into_iter().collect()
}

/// GF(2) sum of the characteristic vectors of simple cycles.
///
/// The result is always a codeword of the cycle code: every vertex meets an
/// even number of selected edges. That postcondition is asserted.
pub fn codeword_from_cycles(n: &NormalGraph, cycles: &[BTreeSet<usize>]) -> Result<Vec<u8>> {
    let simple: BTreeSet<BTreeSet<usize>> = enumerate_simple_cycles(n).into_iter().collect();
    for c in cycles {
        if !simple.contains(c) {
            return Err(Error::NotAClosedWalk {
                detail: format!(
                    "edge set {:?} is not a simple cycle",
                    c.iter().map(|&e| e + 1).collect::<Vec<_>>()
                ),
            });
        }
    }
    let mut word = vec![0u8; n.num_edges()];
    for c in cycles {
        for &e in c {
            word[e] ^= 1;
        }
    }
    for v in 0..n.num_vertices() {
        let incidences = n
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, &(a, b))| word[i] == 1 && (a == v || b == v))
            .count();
        assert_eq!(incidences % 2, 0, "vertex {v} has odd degree in the sum");
    }
    Ok(word)
}

/// Enumerates every rotation class of primitive backtrackless tailless
/// cycles of length at most `max_length`.
///
/// The walk is rooted at the least half-edge of the word: no smaller index
/// may appear later, which prunes rotated duplicates early. Words that
/// survive closure are canonicalized and checked for primitivity.
pub fn enumerate_btt_classes(d: &DirectedEdgeSet, max_length: usize) -> Vec<CycleClass> {
    let mut classes: BTreeMap<Vec<usize>, CycleClass> = BTreeMap::new();
    let total = d.num_half_edges();
    let mut word: Vec<usize> = Vec::new();
    for root in 0..total {
        word.push(root);
        extend(d, root, max_length, &mut word, &mut classes);
        word.pop();
    }
    return classes.into_values().collect();

    fn extend(
        d: &DirectedEdgeSet,
        root: usize,
        max_length: usize,
        word: &mut Vec<usize>,
        classes: &mut BTreeMap<Vec<usize>, CycleClass>,
    ) {
        let last = *word.last().unwrap();
        // close the word if it returns to the root tail
        if word.len() >= 2 && d.head(last) == d.tail(root) && root != d.reversal(last) {
            let cycle = CycleWord {
                steps: word.clone(),
            };
            debug_assert!(cycle.is_backtrackless(d) && cycle.is_tailless(d));
            if cycle.is_primitive() {
                let rep = cycle.canonical_rotation();
                if rep == *word {
                    classes.insert(
                        rep.clone(),
                        CycleClass {
                            length: rep.len(),
                            monomial: cycle.edge_usage(d),
                            rep,
                        },
                    );
                }
            }
        }
        if word.len() >= max_length {
            return;
        }
        for next in 0..d.num_half_edges() {
            if next < root || !d.feeds_into(last, next) {
                continue;
            }
            word.push(next);
            extend(d, root, max_length, word, classes);
            word.pop();
        }
    }
}

/// Coefficient of `u^p` in the zeta Taylor series, counted directly from
/// the Euler product: the number of multisets of cycle classes whose
/// monomials sum to `p`. Entirely independent of the determinant route.
pub fn zeta_coefficient_oracle(
    n: &NormalGraph,
    p: &ExponentVector,
    length_cap: u32,
) -> Result<u64> {
    const FEASIBLE: u32 = 24;
    if length_cap > FEASIBLE {
        return Err(Error::OracleBoundExceeded {
            requested: length_cap,
            cap: FEASIBLE,
        });
    }
    let d = DirectedEdgeSet::canonical(n);
    let cap = length_cap.min(p.total_degree());
    let classes: Vec<CycleClass> = enumerate_btt_classes(&d, cap as usize)
        .into_iter()
        .filter(|c| c.monomial.divides(p))
        .collect();
    let mut memo: HashMap<(usize, Vec<u32>), u64> = HashMap::new();
    return Ok(count(&classes, 0, p.clone(), &mut memo));

    // bounded knapsack over exponent vectors: each class may repeat, since
    // (1 - g)^{-1} contributes every power of g
    fn count(
        classes: &[CycleClass],
        idx: usize,
        remaining: ExponentVector,
        memo: &mut HashMap<(usize, Vec<u32>), u64>,
    ) -> u64 {
        if remaining.is_zero() {
            return 1;
        }
        if idx == classes.len() {
            return 0;
        }
        let key = (idx, remaining.0.clone());
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let mut total = 0u64;
        let mut rem = Some(remaining.clone());
        while let Some(r) = rem {
            total += count(classes, idx + 1, r.clone(), memo);
            rem = r.checked_sub(&classes[idx].monomial);
        }
        memo.insert(key, total);
        total
    }
}

/// Every edge-usage vector of total degree at most `max_degree` realized by
/// multisets of cycle classes (equivalently, by backtrackless tailless
/// cycles and products thereof). The origin is always included.
pub fn realizable_usage_vectors(n: &NormalGraph, max_degree: u32) -> BTreeSet<ExponentVector> {
    let d = DirectedEdgeSet::canonical(n);
    let classes = enumerate_btt_classes(&d, max_degree as usize);
    let mut reachable: BTreeSet<ExponentVector> = BTreeSet::new();
    reachable.insert(ExponentVector::zeros(n.num_edges()));
    for class in &classes {
        let mut next = reachable.clone();
        for base in &reachable {
            let mut sum = base.clone();
            loop {
                sum = ExponentVector(
                    sum.0
                        .iter()
                        .zip(&class.monomial.0)
                        .map(|(a, b)| a + b)
                        .collect(),
                );
                if sum.total_degree() > max_degree {
                    break;
                }
                next.insert(sum.clone());
            }
        }
        reachable = next;
    }
    reachable
}

/// Enumerates all backtrackless tailless closed walks (not just primitive
/// ones, and each rotation separately) up to `max_length`. Exhaustive
/// input for the lift audits.
pub fn enumerate_btt_words(d: &DirectedEdgeSet, max_length: usize) -> Vec<CycleWord> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    for root in 0..d.num_half_edges() {
        word.push(root);
        grow(d, root, max_length, &mut word, &mut out);
        word.pop();
    }
    return out;

    fn grow(
        d: &DirectedEdgeSet,
        root: usize,
        max_length: usize,
        word: &mut Vec<usize>,
        out: &mut Vec<CycleWord>,
    ) {
        let last = *word.last().unwrap();
        if word.len() >= 2 && d.head(last) == d.tail(root) && root != d.reversal(last) {
            out.push(CycleWord {
                steps: word.clone(),
            });
        }
        if word.len() >= max_length {
            return;
        }
        for next in 0..d.num_half_edges() {
            if d.feeds_into(last, next) {
                word.push(next);
                grow(d, root, max_length, word, out);
                word.pop();
            }
        }
    }
}
