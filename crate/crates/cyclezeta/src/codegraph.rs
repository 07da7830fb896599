//! Parity-check matrices and the graphs they induce.
//!
//! A binary code enters the crate as a `ParityCheckMatrix` (parsed from
//! dense text or alist). A cycle code, meaning every column has weight
//! exactly two, additionally has a `NormalGraph`: checks become vertices
//! and each bit contracts to a labeled edge. All cycle and zeta machinery
//! downstream operates on that graph.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Supported text formats for parity-check matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    /// Whitespace-separated 0/1 entries, one check row per line.
    Dense,
    /// The standard LDPC adjacency-list ("alist") layout.
    Alist,
}

/// A binary parity-check matrix `H` with its row and column supports.
///
/// `row_support[j]` lists the bits checked by row `j` and `col_support[i]`
/// the checks touching bit `i`; both are kept sorted and are rebuilt from
/// the entries at construction, so they can never drift out of sync.
/// Columns of weight zero are rejected: a bit attached to no check has no
/// home in any of the graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    num_rows: usize,
    num_cols: usize,
    entries: Vec<Vec<u8>>,
    row_support: Vec<Vec<usize>>,
    col_support: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds and validates a matrix from dense 0/1 rows.
    pub fn new(entries: Vec<Vec<u8>>) -> Result<Self> {
        let num_rows = entries.len();
        if num_rows == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "matrix has no rows".into(),
            });
        }
        let num_cols = entries[0].len();
        if num_cols == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "matrix has no columns".into(),
            });
        }
        for (j, row) in entries.iter().enumerate() {
            if row.len() != num_cols {
                return Err(Error::Parse {
                    line: j + 1,
                    message: format!("row has {} entries, expected {}", row.len(), num_cols),
                });
            }
            if let Some(bad) = row.iter().find(|&&b| b > 1) {
                return Err(Error::Parse {
                    line: j + 1,
                    message: format!("entry {bad} is not 0 or 1"),
                });
            }
        }
        let mut row_support = vec![Vec::new(); num_rows];
        let mut col_support = vec![Vec::new(); num_cols];
        for (j, row) in entries.iter().enumerate() {
            for (i, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    row_support[j].push(i);
                    col_support[i].push(j);
                }
            }
        }
        if let Some(i) = col_support.iter().position(Vec::is_empty) {
            return Err(Error::ZeroColumn { column: i + 1 });
        }
        Ok(ParityCheckMatrix {
            num_rows,
            num_cols,
            entries,
            row_support,
            col_support,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    /// Block length `n`.
    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row][col]
    }

    /// The set `I_j` of bits checked by row `j` (0-based, sorted).
    pub fn row_support(&self, row: usize) -> &[usize] {
        &self.row_support[row]
    }

    /// The set `J_i` of checks touching bit `i` (0-based, sorted).
    pub fn col_support(&self, col: usize) -> &[usize] {
        &self.col_support[col]
    }

    /// All `(j, i)` positions with `h_ji = 1`, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, sup) in self.row_support.iter().enumerate() {
            for &i in sup {
                out.push((j, i));
            }
        }
        out
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(&self.entries)
    }

    pub fn rank(&self) -> usize {
        self.to_bit_matrix().rank()
    }

    /// True iff `H x = 0` over GF(2).
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        x.len() == self.num_cols && self.to_bit_matrix().in_kernel(x)
    }

    /// All codewords of the kernel, all-zero word first. Caller is expected
    /// to keep the dimension small; see `covers::enumerate_codewords` for a
    /// guarded variant.
    pub fn enumerate_kernel(&self) -> Vec<Vec<u8>> {
        let basis = self.to_bit_matrix().kernel_basis();
        enumerate_combinations(&basis, self.num_cols)
    }

    pub fn serialize_dense(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Serializes in alist layout with 1-based indices and zero padding.
    pub fn serialize_alist(&self) -> String {
        let max_col = self.col_support.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.row_support.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_cols, self.num_rows);
        let _ = writeln!(out, "{max_col} {max_row}");
        let degrees = |sups: &[Vec<usize>]| {
            sups.iter()
                .map(|s| s.len().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "{}", degrees(&self.col_support));
        let _ = writeln!(out, "{}", degrees(&self.row_support));
        let padded = |sup: &[usize], width: usize| {
            let mut items: Vec<String> = sup.iter().map(|&k| (k + 1).to_string()).collect();
            items.resize(width, "0".into());
            items.join(" ")
        };
        for sup in &self.col_support {
            let _ = writeln!(out, "{}", padded(sup, max_col));
        }
        for sup in &self.row_support {
            let _ = writeln!(out, "{}", padded(sup, max_row));
        }
        out
    }
}

/// Parses a parity-check matrix from text in the given format.
pub fn parse_parity_check(text: &str, format: MatrixFormat) -> Result<ParityCheckMatrix> {
    match format {
        MatrixFormat::Dense => parse_dense(text),
        MatrixFormat::Alist => parse_alist(text),
    }
}

fn parse_dense(text: &str) -> Result<ParityCheckMatrix> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            match tok {
                "0" => row.push(0),
                "1" => row.push(1),
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("expected 0 or 1, found {other:?}"),
                    })
                }
            }
        }
        rows.push(row);
    }
    ParityCheckMatrix::new(rows)
}

fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    struct Lines<'a> {
        iter: std::iter::Enumerate<std::str::Lines<'a>>,
        last: usize,
    }
    impl<'a> Lines<'a> {
        fn next_numbers(&mut self) -> Result<(usize, Vec<usize>)> {
            for (idx, line) in self.iter.by_ref() {
                self.last = idx + 1;
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let nums = line
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<usize>().map_err(|_| Error::Parse {
                            line: idx + 1,
                            message: format!("expected an integer, found {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok((idx + 1, nums));
            }
            Err(Error::Parse {
                line: self.last + 1,
                message: "unexpected end of alist input".into(),
            })
        }
    }
    let mut lines = Lines {
        iter: text.lines().enumerate(),
        last: 0,
    };

    let (hline, header) = lines.next_numbers()?;
    if header.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            message: "alist header must be \"n m\"".into(),
        });
    }
    let (n, m) = (header[0], header[1]);
    if n == 0 || m == 0 {
        return Err(Error::Parse {
            line: hline,
            message: "alist dimensions must be positive".into(),
        });
    }
    let (_, _max_degrees) = lines.next_numbers()?;
    let (dline, col_degrees) = lines.next_numbers()?;
    if col_degrees.len() != n {
        return Err(Error::Parse {
            line: dline,
            message: format!("expected {n} column degrees, found {}", col_degrees.len()),
        });
    }
    let (dline, row_degrees) = lines.next_numbers()?;
    if row_degrees.len() != m {
        return Err(Error::Parse {
            line: dline,
            message: format!("expected {m} row degrees, found {}", row_degrees.len()),
        });
    }

    let read_support = |lines: &mut Lines,
                        degree: usize,
                        bound: usize,
                        what: &str|
     -> Result<(usize, Vec<usize>)> {
        let (lineno, nums) = lines.next_numbers()?;
        let nonzero: Vec<usize> = nums.iter().copied().filter(|&v| v != 0).collect();
        if nonzero.len() != degree {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {degree} {what} indices, found {}", nonzero.len()),
            });
        }
        if let Some(&bad) = nonzero.iter().find(|&&v| v > bound) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("{what} index {bad} out of range 1..={bound}"),
            });
        }
        Ok((lineno, nonzero.iter().map(|&v| v - 1).collect()))
    };

    let mut entries = vec![vec![0u8; n]; m];
    for (i, &deg) in col_degrees.iter().enumerate() {
        let (_, rows) = read_support(&mut lines, deg, m, "row")?;
        for j in rows {
            entries[j][i] = 1;
        }
    }
    for (j, &deg) in row_degrees.iter().enumerate() {
        let (lineno, cols) = read_support(&mut lines, deg, n, "column")?;
        for &i in &cols {
            if entries[j][i] != 1 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!(
                        "row list for check {} names bit {} absent from the column lists",
                        j + 1,
                        i + 1
                    ),
                });
            }
        }
        if cols.len() != entries[j].iter().filter(|&&b| b == 1).count() {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "row list for check {} disagrees with the column lists",
                    j + 1
                ),
            });
        }
    }
    ParityCheckMatrix::new(entries)
}

/// The bipartite bit/check graph of a parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    num_bits: usize,
    num_checks: usize,
    /// Edges `(check j, bit i)`, one per 1-entry of `H`.
    edges: Vec<(usize, usize)>,
}

impl TannerGraph {
    pub fn from_parity_check(h: &ParityCheckMatrix) -> Self {
        TannerGraph {
            num_bits: h.num_cols(),
            num_checks: h.num_rows(),
            edges: h.support(),
        }
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bit_degree(&self, bit: usize) -> usize {
        self.edges.iter().filter(|&&(_, i)| i == bit).count()
    }
}

/// True iff every column of `H` has weight exactly two.
pub fn is_cycle_code(h: &ParityCheckMatrix) -> bool {
    (0..h.num_cols()).all(|i| h.col_support(i).len() == 2)
}

/// The normal graph of a cycle code: one vertex per check, and bit `i`
/// contracted to the edge joining the two checks of `J_i`. Edge order is
/// the bit order, which fixes the variable order `u_1..u_n` downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalGraph {
    num_vertices: usize,
    /// `edges[i] = (j1, j2)` with `j1 < j2`, the support of column `i`.
    edges: Vec<(usize, usize)>,
}

impl NormalGraph {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.edges.iter().any(|&e| !seen.insert(e))
    }

    /// Edge indices incident to `vertex`.
    pub fn incident_edges(&self, vertex: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == vertex || b == vertex)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == vertex || b == vertex)
            .count()
    }

    /// Builds a normal graph directly from an edge list (test and tooling
    /// convenience; `build_normal_graph` is the checked path from `H`).
    /// Self-loops are never representable as weight-2 parity-check columns,
    /// so they are rejected here too.
    pub fn from_edges(num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(
            edges.iter().all(|&(a, b)| a != b),
            "self-loops are not supported"
        );
        let edges = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        NormalGraph {
            num_vertices,
            edges,
        }
    }

    /// The parity-check matrix whose normal graph this is (vertices as
    /// checks, edges as bits).
    pub fn to_parity_check(&self) -> ParityCheckMatrix {
        let mut entries = vec![vec![0u8; self.edges.len()]; self.num_vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            entries[a][i] = 1;
            entries[b][i] = 1;
        }
        ParityCheckMatrix::new(entries).expect("edge list yields a valid matrix")
    }
}

/// Contracts the degree-2 bits of a cycle code into labeled edges.
///
/// Strict mode (`allow_multigraph = false`) rejects repeated weight-2
/// columns, which would create parallel edges. Self-loops cannot occur: the
/// two ones of a weight-2 column always sit in distinct rows.
pub fn build_normal_graph(h: &ParityCheckMatrix, allow_multigraph: bool) -> Result<NormalGraph> {
    let mut edges = Vec::with_capacity(h.num_cols());
    for i in 0..h.num_cols() {
        let sup = h.col_support(i);
        if sup.len() != 2 {
            return Err(Error::NotCycleCode {
                column: i + 1,
                weight: sup.len(),
            });
        }
        edges.push((sup[0], sup[1]));
    }
    if !allow_multigraph {
        for i in 0..edges.len() {
            for k in i + 1..edges.len() {
                if edges[i] == edges[k] {
                    return Err(Error::ParallelEdges {
                        first: i + 1,
                        second: k + 1,
                    });
                }
            }
        }
    }
    Ok(NormalGraph {
        num_vertices: h.num_rows(),
        edges,
    })
}

/// Girth, cycle rank and Euler characteristic of a normal graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    /// Length of the shortest cycle; `None` for a forest.
    pub girth: Option<usize>,
    /// `|E| - |V| + c`, the dimension of the cycle space.
    pub cycle_rank: usize,
    /// `|V| - |E|`.
    pub euler_characteristic: i64,
    pub num_components: usize,
}

/// Computes girth by BFS from every vertex and cycle rank from the
/// component count.
pub fn graph_stats(n: &NormalGraph) -> GraphStats {
    let v = n.num_vertices();
    let e = n.num_edges();

    // component count via union-find
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in n.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..v).map(|x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    let num_components = roots.len();

    // adjacency with edge ids, for girth BFS on (multi)graphs
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v];
    for (i, &(a, b)) in n.edges().iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut girth: Option<usize> = None;
    for root in 0..v {
        let mut dist = vec![usize::MAX; v];
        let mut via_edge = vec![usize::MAX; v];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, eid) in &adj[x] {
                if eid == via_edge[x] {
                    continue; // do not walk back along the tree edge
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via_edge[y] = eid;
                    queue.push_back(y);
                } else {
                    let len = dist[x] + dist[y] + 1;
                    if girth.is_none_or(|g| len < g) {
                        girth = Some(len);
                    }
                }
            }
        }
    }

    GraphStats {
        girth,
        cycle_rank: e + num_components - v,
        euler_characteristic: v as i64 - e as i64,
        num_components,
    }
}

/// Expands a kernel basis into all `2^dim` combinations, zero word first.
pub(crate) fn enumerate_combinations(basis: &[Vec<u8>], len: usize) -> Vec<Vec<u8>> {
    let dim = basis.len();
    let mut out = Vec::with_capacity(1 << dim);
    for mask in 0u64..(1u64 << dim) {
        let mut word = vec![0u8; len];
        for (b, vec) in basis.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for (w, &x) in word.iter_mut().zip(vec) {
                    *w ^= x;
                }
            }
        }
        out.push(word);
    }
    out
}
