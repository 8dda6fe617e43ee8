//! Strict partial orders over candidates.
//!
//! A [`PartialOrder`] is stored as its transitively closed relation. Width and
//! a minimum chain decomposition come from one maximum matching in the
//! split comparability graph: every element has a left copy and a right copy,
//! and `x > y` contributes the edge `left(x) -- right(y)`. A matched edge
//! says "y follows x in its chain", so the number of chains is
//! `n - |matching|`. The Konig cover of the same matching yields a maximum
//! antichain of that size.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum antichain cardinality of a partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Width(pub usize);

impl Width {
    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for Width {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Disjoint chains covering every candidate, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainDecomposition {
    pub chains: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

/// A strict partial order `>` over candidates `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialOrder {
    n: usize,
    // rel[i * n + j] <=> i > j
    rel: Vec<bool>,
}

fn check_candidate(n: usize, c: usize) -> Result<()> {
    if c >= n {
        Err(Error::Parse(format!(
            "candidate {} out of range 1..={n}",
            c + 1
        )))
    } else {
        Ok(())
    }
}

impl PartialOrder {
    /// The empty relation: every pair incomparable.
    pub fn antichain(n: usize) -> Self {
        Self {
            n,
            rel: vec![false; n * n],
        }
    }

    /// The total order `order[0] > order[1] > ...`; `order` must be a
    /// permutation of `0..n`.
    pub fn total(order: &[usize]) -> Result<Self> {
        Self::from_chains(order.len(), &[order.to_vec()])
    }

    /// Transitive closure of `pairs` (each `(i, j)` meaning `i > j`).
    pub fn from_cover_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = vec![false; n * n];
        for &(i, j) in pairs {
            check_candidate(n, i)?;
            check_candidate(n, j)?;
            rel[i * n + j] = true;
        }
        close(n, &mut rel);
        if let Some(v) = (0..n).find(|&v| rel[v * n + v]) {
            return Err(Error::Cycle(format!(
                "candidate {} is preferred to itself through a cycle",
                v + 1
            )));
        }
        Ok(Self { n, rel })
    }

    /// `i > j` iff `i` precedes `j` in the same chain.
    pub fn from_chains(n: usize, chains: &[Vec<usize>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut rel = vec![false; n * n];
        for chain in chains {
            for (pos, &c) in chain.iter().enumerate() {
                if c >= n {
                    return Err(Error::Partition(format!(
                        "candidate {} out of range 1..={n}",
                        c + 1
                    )));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::Partition(format!(
                        "candidate {} appears twice",
                        c + 1
                    )));
                }
                for &later in &chain[pos + 1..] {
                    if later < n {
                        rel[c * n + later] = true;
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Partition(format!(
                "candidate {} is not covered",
                missing + 1
            )));
        }
        Ok(Self { n, rel })
    }

    /// Validates an explicit relation matrix (`rel[i * n + j]` meaning
    /// `i > j`) without closing it.
    pub fn from_relation(n: usize, rel: Vec<bool>) -> Result<Self> {
        if rel.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: rel.len(),
            });
        }
        let order = Self { n, rel };
        order.validate()?;
        Ok(order)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.prefers(i, i) {
                return Err(Error::Cycle(format!("{} > {}", i + 1, i + 1)));
            }
            for j in 0..n {
                if !self.prefers(i, j) {
                    continue;
                }
                if self.prefers(j, i) {
                    return Err(Error::Cycle(format!(
                        "both {0} > {1} and {1} > {0}",
                        i + 1,
                        j + 1
                    )));
                }
                for k in 0..n {
                    if self.prefers(j, k) && !self.prefers(i, k) {
                        return Err(Error::Cycle(format!(
                            "not transitive: {} > {} > {} but not {} > {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            i + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `i > j`.
    pub fn prefers(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.n + j]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.prefers(i, j) || self.prefers(j, i)
    }

    /// All related pairs `(i, j)` with `i > j`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.prefers(i, j))
            .collect()
    }

    /// Covering pairs of the Hasse diagram.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|&(i, j)| !(0..self.n).any(|z| self.prefers(i, z) && self.prefers(z, j)))
            .collect()
    }

    pub fn relation_size(&self) -> usize {
        self.rel.iter().filter(|&&r| r).count()
    }

    /// Candidates `y` with `x > y`, ascending.
    fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.prefers(x, y))
    }

    fn maximum_matching(&self) -> Matching {
        Matching::compute(self)
    }

    pub fn width(&self) -> Width {
        Width(self.n - self.maximum_matching().size())
    }

    /// Minimum chain decomposition. Chains start at elements without a
    /// matched predecessor, taken in ascending order, and follow matched
    /// successors.
    pub fn min_chain_decomposition(&self) -> ChainDecomposition {
        let matching = self.maximum_matching();
        let chains = (0..self.n)
            .filter(|&v| matching.predecessor[v].is_none())
            .map(|start| {
                let mut chain = vec![start];
                let mut cur = start;
                while let Some(next) = matching.successor[cur] {
                    chain.push(next);
                    cur = next;
                }
                chain
            })
            .collect();
        ChainDecomposition { chains }
    }

    /// An antichain of maximum cardinality, ascending.
    pub fn max_antichain(&self) -> Vec<usize> {
        let matching = self.maximum_matching();
        let n = self.n;
        // alternating reachability from unmatched left copies
        let mut left_reached = vec![false; n];
        let mut right_reached = vec![false; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&v| matching.successor[v].is_none())
            .collect();
        for &v in &stack {
            left_reached[v] = true;
        }
        while let Some(u) = stack.pop() {
            for y in self.successors(u) {
                if matching.successor[u] == Some(y) || right_reached[y] {
                    continue;
                }
                right_reached[y] = true;
                if let Some(x) = matching.predecessor[y] {
                    if !left_reached[x] {
                        left_reached[x] = true;
                        stack.push(x);
                    }
                }
            }
        }
        (0..n)
            .filter(|&v| left_reached[v] && !right_reached[v])
            .collect()
    }

    /// Makes the voter indifferent between `x` and `y`, removing only the
    /// pair `x > y`. Fails unless the remaining relation is still
    /// transitively closed, i.e. no `z` satisfies `x > z > y`.
    pub fn weaken(&self, x: usize, y: usize) -> Result<Self> {
        check_candidate(self.n, x)?;
        check_candidate(self.n, y)?;
        if !self.prefers(x, y) {
            return Err(Error::NotComparable { x: x + 1, y: y + 1 });
        }
        if let Some(z) = (0..self.n).find(|&z| self.prefers(x, z) && self.prefers(z, y)) {
            return Err(Error::NotRemovable {
                x: x + 1,
                y: y + 1,
                via: z + 1,
            });
        }
        let mut out = self.clone();
        out.rel[x * self.n + y] = false;
        Ok(out)
    }

    /// True when the order is a disjoint union of chains, i.e. it can be
    /// written in chain form without loss.
    pub fn is_chain_union(&self) -> bool {
        let decomposition = self.min_chain_decomposition();
        PartialOrder::from_chains(self.n, &decomposition.chains).as_ref() == Ok(self)
    }

    /// Restriction to `candidates`, relabelled `0..candidates.len()`.
    pub fn restrict(&self, candidates: &[usize]) -> Self {
        let m = candidates.len();
        let mut rel = vec![false; m * m];
        for (a, &i) in candidates.iter().enumerate() {
            for (b, &j) in candidates.iter().enumerate() {
                rel[a * m + b] = self.prefers(i, j);
            }
        }
        Self { n: m, rel }
    }

    /// Hasse diagram in DOT, vertices labelled `1..=n`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {};", v + 1);
        }
        for (i, j) in self.cover_pairs() {
            let _ = writeln!(out, "  {} -> {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_spec(&self) -> OrderSpec {
        let labelled = |v: &[usize]| v.iter().map(|c| c + 1).collect::<Vec<_>>();
        if self.is_chain_union() {
            OrderSpec::Chains {
                chains: self
                    .min_chain_decomposition()
                    .chains
                    .iter()
                    .map(|c| labelled(c))
                    .collect(),
            }
        } else {
            OrderSpec::Pairs {
                pairs: self
                    .cover_pairs()
                    .into_iter()
                    .map(|(i, j)| [i + 1, j + 1])
                    .collect(),
            }
        }
    }

    pub fn from_spec(n: usize, spec: &OrderSpec) -> Result<Self> {
        let unlabel = |c: usize| {
            c.checked_sub(1)
                .ok_or_else(|| Error::Parse("candidate labels start at 1".into()))
        };
        match spec {
            OrderSpec::Chains { chains } => {
                let chains = chains
                    .iter()
                    .map(|chain| {
                        chain
                            .iter()
                            .map(|&c| unlabel(c))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_chains(n, &chains)
            }
            OrderSpec::Pairs { pairs } => {
                let pairs = pairs
                    .iter()
                    .map(|&[i, j]| Ok((unlabel(i)?, unlabel(j)?)))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_cover_pairs(n, &pairs)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PosetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(file.n, &file.order)
    }

    pub fn to_json(&self) -> String {
        let file = PosetFile {
            n: self.n,
            order: self.to_spec(),
        };
        serde_json::to_string_pretty(&file).expect("poset serializes")
    }
}

impl std::fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs: Vec<_> = self
            .pairs()
            .into_iter()
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        f.debug_struct("PartialOrder")
            .field("n", &self.n)
            .field("pairs", &pairs)
            .finish()
    }
}

/// External (1-based) description of one order: either disjoint chains or
/// generating pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSpec {
    Chains { chains: Vec<Vec<usize>> },
    Pairs { pairs: Vec<[usize; 2]> },
}

#[derive(Serialize, Deserialize)]
struct PosetFile {
    n: usize,
    #[serde(flatten)]
    order: OrderSpec,
}

fn close(n: usize, rel: &mut [bool]) {
    for k in 0..n {
        for i in 0..n {
            if !rel[i * n + k] {
                continue;
            }
            for j in 0..n {
                if rel[k * n + j] {
                    rel[i * n + j] = true;
                }
            }
        }
    }
}

struct Matching {
    successor: Vec<Option<usize>>,
    predecessor: Vec<Option<usize>>,
}

impl Matching {
    /// First-fit matching in ascending order, completed by augmenting paths.
    fn compute(order: &PartialOrder) -> Self {
        let n = order.n;
        let mut m = Matching {
            successor: vec![None; n],
            predecessor: vec![None; n],
        };
        for x in 0..n {
            if let Some(y) = order.successors(x).find(|&y| m.predecessor[y].is_none()) {
                m.successor[x] = Some(y);
                m.predecessor[y] = Some(x);
            }
        }
        for x in 0..n {
            if m.successor[x].is_none() {
                let mut visited = vec![false; n];
                m.augment(order, x, &mut visited);
            }
        }
        m
    }

    fn augment(&mut self, order: &PartialOrder, x: usize, visited: &mut [bool]) -> bool {
        for y in order.successors(x) {
            if std::mem::replace(&mut visited[y], true) {
                continue;
            }
            let free = match self.predecessor[y] {
                None => true,
                Some(other) => self.augment(order, other, visited),
            };
            if free {
                self.successor[x] = Some(y);
                self.predecessor[y] = Some(x);
                return true;
            }
        }
        false
    }

    fn size(&self) -> usize {
        self.successor.iter().filter(|s| s.is_some()).count()
    }
}
