//! Preference matrices, their voting and unanimity graphs, and the matrix
//! file formats.
//!
//! Candidates are indexed from 0 inside the library. Every external format
//! (JSON, CSV, DOT) labels them from 1.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Most specific class a matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixClass {
    /// Every entry is 0 or 1.
    Integral,
    /// Every entry is 0, 1/2 or 1.
    HalfIntegral,
    General,
}

impl MatrixClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixClass::Integral => "integral",
            MatrixClass::HalfIntegral => "half-integral",
            MatrixClass::General => "general",
        }
    }

    /// Integral matrices are half-integral too.
    pub fn is_half_integral(&self) -> bool {
        matches!(self, MatrixClass::Integral | MatrixClass::HalfIntegral)
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Input format for [`parse_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Csv,
}

/// An `n x n` matrix of pairwise preference proportions with `p_ii = 0` and
/// `p_ij + p_ji = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PreferenceMatrix {
    n: usize,
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<Rational>>,
}

impl PreferenceMatrix {
    /// Validates `rows` exactly and builds the matrix.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Invariant("matrix has no candidates".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invariant(format!(
                    "not square: row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..n {
            if !rows[i][i].is_zero() {
                return Err(Error::Invariant(format!(
                    "diagonal entry p_{0}{0} = {1} is not 0",
                    i + 1,
                    rows[i][i]
                )));
            }
            for j in 0..n {
                let p = rows[i][j];
                if p < Rational::ZERO || p > Rational::ONE {
                    return Err(Error::Invariant(format!(
                        "entry p_{}{} = {p} is outside [0, 1]",
                        i + 1,
                        j + 1
                    )));
                }
                if i < j && p + rows[j][i] != Rational::ONE {
                    return Err(Error::Invariant(format!(
                        "p_{0}{1} + p_{1}{0} = {2}, expected 1",
                        i + 1,
                        j + 1,
                        p + rows[j][i]
                    )));
                }
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from the strictly upper triangle; `upper(i, j)` is
    /// queried for `i < j` and the lower triangle is filled by complement.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let mut rows = vec![vec![Rational::ZERO; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let p = upper(i, j);
                rows[i][j] = p;
                rows[j][i] = p.complement();
            }
        }
        Self::from_rows(rows)
    }

    /// The matrix with every off-diagonal entry 1/2.
    pub fn all_half(n: usize) -> Result<Self> {
        Self::from_upper(n, |_, _| Rational::HALF)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p_ij` for 0-based candidates.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn classify(&self) -> MatrixClass {
        if self.entries.iter().all(Rational::is_unanimous) {
            MatrixClass::Integral
        } else if self.entries.iter().all(|p| p.is_unanimous() || p.is_half()) {
            MatrixClass::HalfIntegral
        } else {
            MatrixClass::General
        }
    }

    /// Restriction to `candidates`, in the given order.
    pub fn submatrix(&self, candidates: &[usize]) -> Result<Self> {
        let rows = candidates
            .iter()
            .map(|&i| candidates.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Arc `i -> j` whenever `p_ij = 1`.
    pub fn voting_graph(&self) -> VotingGraph {
        let mut adj = vec![false; self.n * self.n];
        for (slot, p) in adj.iter_mut().zip(&self.entries) {
            *slot = p.is_one();
        }
        VotingGraph { n: self.n, adj }
    }

    /// Edge `{i, j}` whenever `p_ij` is 0 or 1.
    pub fn unanimity_graph(&self) -> UnanimityGraph {
        let n = self.n;
        let mut adj = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                adj[i * n + j] = i != j && self.get(i, j).is_unanimous();
            }
        }
        UnanimityGraph { n, adj }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.n != file.entries.len() {
            return Err(Error::Invariant(format!(
                "declared n = {} but {} rows given",
                file.n,
                file.entries.len()
            )));
        }
        Self::from_rows(file.entries)
    }

    pub fn to_json(&self) -> String {
        let file = MatrixFile {
            n: self.n,
            entries: self.rows(),
        };
        serde_json::to_string_pretty(&file).expect("matrix serializes")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .map(str::parse)
                .collect::<Result<Vec<Rational>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for PreferenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n)).finish()
    }
}

/// Parses and validates a matrix in the given format.
pub fn parse_matrix(text: &[u8], format: MatrixFormat) -> Result<PreferenceMatrix> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse(e.to_string()))?;
    match format {
        MatrixFormat::Json => PreferenceMatrix::from_json(text),
        MatrixFormat::Csv => PreferenceMatrix::from_csv(text),
    }
}

/// Directed graph with an arc `i -> j` for every unanimous preference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VotingGraph {
    n: usize,
    adj: Vec<bool>,
}

impl VotingGraph {
    /// Builds a graph from 0-based arcs. Self-loops and 2-cycles are rejected.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for &(i, j) in arcs {
            if i >= n || j >= n {
                return Err(Error::Parse(format!(
                    "arc ({}, {}) out of range 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::Parse(format!("self-loop at {}", i + 1)));
            }
            if adj[j * n + i] {
                return Err(Error::Parse(format!(
                    "both ({0}, {1}) and ({1}, {0}) present",
                    i + 1,
                    j + 1
                )));
            }
            adj[i * n + j] = true;
        }
        Ok(Self { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_arc(i, j))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().filter(|&&a| a).count()
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| self.has_arc(v, w))
    }

    /// Some directed cycle, as a vertex sequence `v_0 -> v_1 -> ... -> v_0`.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.n;
        let mut mark = vec![Mark::New; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // iterative DFS; the stack holds (vertex, next neighbour to try)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Active;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next == n {
                    mark[v] = Mark::Done;
                    stack.pop();
                    continue;
                }
                let w = *next;
                *next += 1;
                if !self.has_arc(v, w) {
                    continue;
                }
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    Mark::Active => {
                        let mut cycle = vec![v];
                        let mut u = v;
                        while u != w {
                            u = parent[u];
                            cycle.push(u);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph voting {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {};", v + 1);
        }
        for (i, j) in self.arcs() {
            let _ = writeln!(out, "  {} -> {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }
}

/// Undirected graph with an edge for every pair the voters cannot strongly
/// disagree on (`p_ij` is 0 or 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnanimityGraph {
    n: usize,
    adj: Vec<bool>,
}

impl UnanimityGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::Parse(format!("bad edge ({}, {})", i + 1, j + 1)));
            }
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        Ok(Self { n, adj })
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = vec![true; n * n];
        for v in 0..n {
            adj[v * n + v] = false;
        }
        Self { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| self.has_edge(v, w))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut component = Vec::new();
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph unanimity {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {};", v + 1);
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  {} -- {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }
}
