//! Constructions for half-integral matrices.
//!
//! * [`components`] splits a matrix along the connected components of its
//!   unanimity graph; every pair across components has entry 1/2.
//! * [`combine_component_profiles`] glues per-component witness profiles
//!   into one profile for the whole matrix: for each choice of one voter per
//!   component it emits a voter ranking components left to right and one
//!   ranking them right to left, so cross pairs split exactly in half.
//! * [`two_voter_construction`] turns a proper colouring of the unanimity
//!   graph into two voters with one chain per colour class, the second voter
//!   reversing every chain of the first.
//! * [`random_lower_bound_instance`] and [`verify_triangle_property`] build
//!   and check the random complete k-partite instances whose large subsets
//!   all contain a directed triangle.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::matrix::{PreferenceMatrix, UnanimityGraph, VotingGraph};
use crate::poset::PartialOrder;
use crate::profile::VoterProfile;
use crate::rational::Rational;
use crate::rng;

/// Subsets of size `s` are enumerated exhaustively when there are at most
/// this many of them; above it the check samples.
pub const ENUMERATION_THRESHOLD: u128 = 1_000_000;

/// Connected components of the unanimity graph with their submatrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Sorted candidate lists, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub submatrices: Vec<PreferenceMatrix>,
}

impl ComponentPartition {
    pub fn n(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }
}

/// A partition of candidates into colour classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperColoring {
    pub classes: Vec<Vec<usize>>,
}

impl ProperColoring {
    /// Number of nonempty classes.
    pub fn class_count(&self) -> usize {
        self.classes.iter().filter(|c| !c.is_empty()).count()
    }

    /// Checks that the classes partition `0..graph.n()` into independent sets.
    pub fn validate(&self, graph: &UnanimityGraph) -> Result<()> {
        let n = graph.n();
        let mut seen = vec![false; n];
        for class in &self.classes {
            for &v in class {
                if v >= n {
                    return Err(Error::ImproperColoring(format!(
                        "candidate {} out of range 1..={n}",
                        v + 1
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::ImproperColoring(format!(
                        "candidate {} coloured twice",
                        v + 1
                    )));
                }
            }
            for (a, &u) in class.iter().enumerate() {
                if let Some(&w) = class[a + 1..].iter().find(|&&w| graph.has_edge(u, w)) {
                    return Err(Error::ImproperColoring(format!(
                        "adjacent candidates {} and {} share a class",
                        u + 1,
                        w + 1
                    )));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::ImproperColoring(format!(
                "candidate {} is uncoloured",
                v + 1
            )));
        }
        Ok(())
    }
}

fn require_half_integral(matrix: &PreferenceMatrix) -> Result<()> {
    let class = matrix.classify();
    if class.is_half_integral() {
        Ok(())
    } else {
        Err(Error::Class {
            found: class.to_string(),
            needed: "half-integral",
        })
    }
}

pub fn components(matrix: &PreferenceMatrix) -> Result<ComponentPartition> {
    require_half_integral(matrix)?;
    let components = matrix.unanimity_graph().connected_components();
    let submatrices = components
        .iter()
        .map(|c| matrix.submatrix(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComponentPartition {
        components,
        submatrices,
    })
}

/// Product construction over per-component witness profiles. Voters are
/// emitted as `L, R` pairs, one pair per tuple of component voters, tuples in
/// lexicographic order (first component most significant).
///
/// `per_component[l]` is indexed locally: its candidate `a` is
/// `partition.components[l][a]`.
pub fn combine_component_profiles(
    partition: &ComponentPartition,
    per_component: &[VoterProfile],
) -> Result<VoterProfile> {
    if per_component.len() != partition.components.len() {
        return Err(Error::DimensionMismatch {
            expected: partition.components.len(),
            found: per_component.len(),
        });
    }
    for (l, (profile, sub)) in per_component.iter().zip(&partition.submatrices).enumerate() {
        if !profile.is_consistent_with(sub)? {
            return Err(Error::InconsistentInput { component: l + 1 });
        }
    }

    let n = partition.n();
    let mut place = vec![(0usize, 0usize); n];
    for (l, component) in partition.components.iter().enumerate() {
        for (a, &c) in component.iter().enumerate() {
            place[c] = (l, a);
        }
    }

    let radices: Vec<usize> = per_component.iter().map(VoterProfile::len).collect();
    let mut tuple = vec![0usize; radices.len()];
    let mut voters = Vec::new();
    loop {
        for left_to_right in [true, false] {
            let mut rel = vec![false; n * n];
            for i in 0..n {
                let (li, ai) = place[i];
                for j in 0..n {
                    let (lj, aj) = place[j];
                    rel[i * n + j] = if li == lj {
                        per_component[li].voters()[tuple[li]].prefers(ai, aj)
                    } else if left_to_right {
                        li < lj
                    } else {
                        li > lj
                    };
                }
            }
            voters.push(PartialOrder::from_relation(n, rel)?);
        }
        // mixed-radix increment, last component fastest
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return VoterProfile::new(n, voters);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < radices[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// DSATUR colouring. Picks the uncoloured vertex with the most distinct
/// neighbour colours, then the most uncoloured neighbours, then the lowest
/// label, and gives it the smallest free colour.
pub fn greedy_coloring(graph: &UnanimityGraph) -> ProperColoring {
    let n = graph.n();
    let mut color: Vec<Option<usize>> = vec![None; n];
    for _ in 0..n {
        let key = |v: usize| {
            let mut seen: Vec<usize> = graph.neighbors(v).filter_map(|w| color[w]).collect();
            seen.sort_unstable();
            seen.dedup();
            let open = graph.neighbors(v).filter(|&w| color[w].is_none()).count();
            (seen.len(), open)
        };
        let v = (0..n)
            .filter(|&v| color[v].is_none())
            .fold(None::<(usize, (usize, usize))>, |best, v| {
                let k = key(v);
                match best {
                    Some((_, bk)) if bk >= k => best,
                    _ => Some((v, k)),
                }
            })
            .map(|(v, _)| v)
            .expect("an uncoloured vertex remains");
        let used: Vec<usize> = graph.neighbors(v).filter_map(|w| color[w]).collect();
        let c = (0..)
            .find(|c| !used.contains(c))
            .expect("a free colour exists");
        color[v] = Some(c);
    }
    let count = color.iter().flatten().max().map_or(0, |&c| c + 1);
    let mut classes = vec![Vec::new(); count];
    for (v, c) in color.into_iter().enumerate() {
        classes[c.expect("all coloured")].push(v);
    }
    ProperColoring { classes }
}

/// Two voters with one chain per nonempty colour class: ascending labels for
/// the first voter, descending for the second.
pub fn two_voter_construction(
    matrix: &PreferenceMatrix,
    coloring: &ProperColoring,
) -> Result<VoterProfile> {
    require_half_integral(matrix)?;
    coloring.validate(&matrix.unanimity_graph())?;
    let n = matrix.n();
    let ascending: Vec<Vec<usize>> = coloring
        .classes
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let descending: Vec<Vec<usize>> = ascending
        .iter()
        .map(|c| c.iter().rev().copied().collect())
        .collect();
    VoterProfile::new(
        n,
        vec![
            PartialOrder::from_chains(n, &ascending)?,
            PartialOrder::from_chains(n, &descending)?,
        ],
    )
}

/// Part index of each candidate in the complete `k`-partite layout used by
/// [`random_lower_bound_instance`]: contiguous blocks of `n / k`.
pub fn kpartite_parts(n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::Divisibility { n, k });
    }
    let size = n / k;
    Ok((0..n).map(|c| c / size).collect())
}

/// Half-integral matrix whose unanimity graph is complete `k`-partite with
/// equal parts and whose voting graph orients every cross-part pair by a fair
/// coin (see [`crate::rng`] for the draw order).
pub fn random_lower_bound_instance(n: usize, k: usize, seed: u64) -> Result<PreferenceMatrix> {
    let parts = kpartite_parts(n, k)?;
    let mut rng = rng::seeded(seed);
    PreferenceMatrix::from_upper(n, |i, j| {
        if parts[i] == parts[j] {
            Rational::HALF
        } else if rng::coin(&mut rng) {
            Rational::ONE
        } else {
            Rational::ZERO
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangleOutcome {
    /// Every subset of the requested size contains a directed triangle.
    Proved,
    /// A subset of the requested size without a directed triangle.
    Refuted { witness: Vec<usize> },
    /// Every sampled subset contained a directed triangle.
    SampledOk,
}

impl TriangleOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            TriangleOutcome::Proved => "proved",
            TriangleOutcome::Refuted { .. } => "refuted",
            TriangleOutcome::SampledOk => "sampled_ok",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCheck {
    pub outcome: TriangleOutcome,
    /// Subsets examined before the outcome was decided.
    pub subsets_checked: u64,
    pub exhaustive: bool,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct BitGraph {
    words: usize,
    out: Vec<Vec<u64>>,
    inc: Vec<Vec<u64>>,
}

impl BitGraph {
    fn new(graph: &VotingGraph) -> Self {
        let n = graph.n();
        let words = n.div_ceil(64).max(1);
        let mut out = vec![vec![0u64; words]; n];
        let mut inc = vec![vec![0u64; words]; n];
        for (u, v) in graph.arcs() {
            out[u][v / 64] |= 1 << (v % 64);
            inc[v][u / 64] |= 1 << (u % 64);
        }
        Self { words, out, inc }
    }

    fn has_arc(&self, u: usize, v: usize) -> bool {
        (self.out[u][v / 64] >> (v % 64)) & 1 == 1
    }

    fn has_triangle(&self, subset: &[usize]) -> bool {
        let mut mask = vec![0u64; self.words];
        for &v in subset {
            mask[v / 64] |= 1 << (v % 64);
        }
        for &u in subset {
            for &v in subset {
                if self.has_arc(u, v)
                    && (0..self.words).any(|w| self.out[v][w] & self.inc[u][w] & mask[w] != 0)
                {
                    return true;
                }
            }
        }
        false
    }
}

/// Checks whether every `s`-subset of `graph` contains a directed triangle.
///
/// With at most [`ENUMERATION_THRESHOLD`] subsets the check is exhaustive
/// (lexicographic order, first failure is the witness). Otherwise `budget`
/// uniform subsets are drawn from the seeded generator. `s > n` holds
/// vacuously; `s < 3` is refuted by any subset.
pub fn verify_triangle_property(
    graph: &VotingGraph,
    s: usize,
    budget: u64,
    seed: u64,
) -> TriangleCheck {
    let n = graph.n();
    if s > n {
        return TriangleCheck {
            outcome: TriangleOutcome::Proved,
            subsets_checked: 0,
            exhaustive: true,
        };
    }
    let bits = BitGraph::new(graph);
    if binomial(n, s) <= ENUMERATION_THRESHOLD {
        let mut subset: Vec<usize> = (0..s).collect();
        let mut checked = 0u64;
        loop {
            checked += 1;
            if !bits.has_triangle(&subset) {
                return TriangleCheck {
                    outcome: TriangleOutcome::Refuted { witness: subset },
                    subsets_checked: checked,
                    exhaustive: true,
                };
            }
            // next combination in lexicographic order
            let Some(pos) = (0..s).rev().find(|&p| subset[p] < n - s + p) else {
                return TriangleCheck {
                    outcome: TriangleOutcome::Proved,
                    subsets_checked: checked,
                    exhaustive: true,
                };
            };
            subset[pos] += 1;
            for p in pos + 1..s {
                subset[p] = subset[p - 1] + 1;
            }
        }
    }
    let mut rng = rng::seeded(seed);
    for checked in 1..=budget {
        let mut subset = index::sample(&mut rng, n, s).into_vec();
        subset.sort_unstable();
        if !bits.has_triangle(&subset) {
            return TriangleCheck {
                outcome: TriangleOutcome::Refuted { witness: subset },
                subsets_checked: checked,
                exhaustive: false,
            };
        }
    }
    TriangleCheck {
        outcome: TriangleOutcome::SampledOk,
        subsets_checked: budget,
        exhaustive: false,
    }
}

/// True when the induced subgraph on `subset` has a directed triangle.
pub fn has_directed_triangle(graph: &VotingGraph, subset: &[usize]) -> bool {
    BitGraph::new(graph).has_triangle(subset)
}
