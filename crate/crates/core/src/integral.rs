//! Integral matrices: tournaments and their dichromatic number.
//!
//! For an integral matrix a single voter suffices, and the smallest width of
//! a consistent voter equals the dichromatic number of the voting
//! tournament. Each acyclic colour class of a tournament has exactly one
//! acyclic ordering, which becomes one chain of the voter.
//!
//! Ties are always broken towards the lowest label.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{self, ComponentPartition};
use crate::matrix::{MatrixClass, PreferenceMatrix, VotingGraph};
use crate::poset::PartialOrder;
use crate::profile::{antichain_profile, VoterProfile};
use crate::rational::Rational;
use crate::rng;

/// Largest tournament handed to the exact solver by default.
pub const DEFAULT_EXACT_LIMIT: usize = 20;

/// The exact searches keep vertex sets in a `u64`.
pub const MAX_BITSET_VERTICES: usize = 64;

/// An orientation of the complete graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    // beats[i * n + j] <=> i -> j
    beats: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct TournamentFile {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

impl Tournament {
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let graph = VotingGraph::from_arcs(n, arcs)?;
        Self::from_voting_graph(&graph)
    }

    pub fn from_voting_graph(graph: &VotingGraph) -> Result<Self> {
        let n = graph.n();
        for i in 0..n {
            for j in i + 1..n {
                if !graph.has_arc(i, j) && !graph.has_arc(j, i) {
                    return Err(Error::NotTournament(format!(
                        "pair ({}, {}) is not oriented",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut beats = vec![false; n * n];
        for (i, j) in graph.arcs() {
            beats[i * n + j] = true;
        }
        Ok(Self { n, beats })
    }

    /// The voting tournament of an integral matrix.
    pub fn from_matrix(matrix: &PreferenceMatrix) -> Result<Self> {
        let class = matrix.classify();
        if class != MatrixClass::Integral {
            return Err(Error::Class {
                found: class.to_string(),
                needed: "integral",
            });
        }
        Self::from_voting_graph(&matrix.voting_graph())
    }

    /// `order[0] -> order[1] -> ...` with every forward arc present.
    pub fn transitive(order: &[usize]) -> Result<Self> {
        let arcs: Vec<(usize, usize)> = order
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| order[a + 1..].iter().map(move |&j| (i, j)))
            .collect();
        Self::from_arcs(order.len(), &arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.n + j]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.beats(i, j))
            .collect()
    }

    pub fn voting_graph(&self) -> VotingGraph {
        VotingGraph::from_arcs(self.n, &self.arcs()).expect("tournament arcs are valid")
    }

    /// The integral matrix with `p_ij = 1` exactly on arcs.
    pub fn to_matrix(&self) -> PreferenceMatrix {
        PreferenceMatrix::from_upper(self.n, |i, j| {
            if self.beats(i, j) {
                Rational::ONE
            } else {
                Rational::ZERO
            }
        })
        .expect("tournament matrices are valid")
    }

    /// Out-degree of `v` inside `within`.
    pub fn out_degree_in(&self, v: usize, within: &[usize]) -> usize {
        within.iter().filter(|&&w| self.beats(v, w)).count()
    }

    /// Deletes vertex `v`, relabelling the rest in order.
    pub fn remove_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        let m = keep.len();
        let mut beats = vec![false; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                beats[a * m + b] = self.beats(i, j);
            }
        }
        Self { n: m, beats }
    }

    fn out_masks(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| self.beats(i, j))
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TournamentFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let arcs = file
            .arcs
            .iter()
            .map(|&[i, j]| {
                if i == 0 || j == 0 {
                    Err(Error::Parse("candidate labels start at 1".into()))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if arcs.len() != file.n * file.n.saturating_sub(1) / 2 {
            return Err(Error::NotTournament(format!(
                "{} arcs given, a tournament on {} vertices has {}",
                arcs.len(),
                file.n,
                file.n * file.n.saturating_sub(1) / 2
            )));
        }
        Self::from_arcs(file.n, &arcs)
    }

    pub fn to_json(&self) -> String {
        let file = TournamentFile {
            n: self.n,
            arcs: self
                .arcs()
                .into_iter()
                .map(|(i, j)| [i + 1, j + 1])
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("tournament serializes")
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let arcs: Vec<_> = self
            .arcs()
            .into_iter()
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        f.debug_struct("Tournament")
            .field("n", &self.n)
            .field("arcs", &arcs)
            .finish()
    }
}

/// Each pair is oriented `i -> j` (for `i < j`) by a fair coin, pairs drawn
/// in lexicographic order.
pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut rng = rng::seeded(seed);
    let mut beats = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            if rng::coin(&mut rng) {
                beats[i * n + j] = true;
            } else {
                beats[j * n + i] = true;
            }
        }
    }
    Tournament { n, beats }
}

/// A partition of the vertices into acyclic classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dicoloring {
    pub classes: Vec<Vec<usize>>,
}

impl Dicoloring {
    pub fn class_count(&self) -> usize {
        self.classes.iter().filter(|c| !c.is_empty()).count()
    }

    /// Checks the partition and, by repeatedly peeling off a source, that
    /// every class is acyclic.
    pub fn validate(&self, tournament: &Tournament) -> Result<()> {
        let n = tournament.n();
        let mut seen = vec![false; n];
        for class in &self.classes {
            for &v in class {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidDicoloring(format!(
                        "vertex {} out of range or repeated",
                        v + 1
                    )));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidDicoloring(format!(
                "vertex {} is uncoloured",
                v + 1
            )));
        }
        for class in &self.classes {
            if acyclic_order(tournament, class).is_none() {
                return Err(Error::InvalidDicoloring(format!(
                    "class {:?} contains a directed cycle",
                    class.iter().map(|v| v + 1).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    /// 1-based JSON `{"classes": [[...], ...]}`.
    pub fn to_json(&self) -> String {
        let labelled = Dicoloring {
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|v| v + 1).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&labelled).expect("dicoloring serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let labelled: Dicoloring =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let classes = labelled
            .classes
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::Parse("candidate labels start at 1".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dicoloring { classes })
    }
}

/// Topological order of the subtournament on `class` (Kahn's algorithm), or
/// `None` if it has a cycle.
pub fn acyclic_order(tournament: &Tournament, class: &[usize]) -> Option<Vec<usize>> {
    let mut indegree: Vec<usize> = class
        .iter()
        .map(|&v| class.iter().filter(|&&u| tournament.beats(u, v)).count())
        .collect();
    let mut done = vec![false; class.len()];
    let mut order = Vec::with_capacity(class.len());
    for _ in 0..class.len() {
        let a = (0..class.len()).find(|&a| !done[a] && indegree[a] == 0)?;
        done[a] = true;
        order.push(class[a]);
        for b in 0..class.len() {
            if !done[b] && tournament.beats(class[a], class[b]) {
                indegree[b] -= 1;
            }
        }
    }
    Some(order)
}

fn check_exact_size(n: usize, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_BITSET_VERTICES);
    if n > limit {
        Err(Error::SizeLimit { n, limit })
    } else {
        Ok(())
    }
}

/// Exact dichromatic number with a witness.
///
/// Tries `k = 1, 2, ...` below the greedy bound. For each `k`, vertices are
/// assigned in label order to an existing class or the next unopened one.
/// Each class keeps its unique acyclic order; a vertex fits iff the members
/// beating it form a prefix of that order, in which case it is inserted
/// right after them.
pub fn dichromatic_number_exact(
    tournament: &Tournament,
    limit: usize,
) -> Result<(usize, Dicoloring)> {
    let n = tournament.n();
    check_exact_size(n, limit)?;
    let greedy = greedy_dicoloring(tournament);
    let upper = greedy.class_count();
    if n == 0 {
        return Ok((0, greedy));
    }
    let out = tournament.out_masks();
    for k in 1..upper {
        let mut search = ExactSearch {
            out: &out,
            k,
            classes: Vec::with_capacity(k),
        };
        if search.assign(0, n) {
            let classes = search.classes.into_iter().map(|c| c.order).collect();
            return Ok((k, Dicoloring { classes }));
        }
    }
    Ok((upper, greedy))
}

struct ClassState {
    mask: u64,
    order: Vec<usize>,
}

struct ExactSearch<'a> {
    out: &'a [u64],
    k: usize,
    classes: Vec<ClassState>,
}

impl ExactSearch<'_> {
    fn insertion_point(&self, class: &ClassState, v: usize) -> Option<usize> {
        let beaten_by_v = self.out[v] & class.mask;
        let beat_v = class.mask & !beaten_by_v;
        let prefix = beat_v.count_ones() as usize;
        let fits = class.order[..prefix]
            .iter()
            .all(|&u| (beat_v >> u) & 1 == 1);
        fits.then_some(prefix)
    }

    fn assign(&mut self, v: usize, n: usize) -> bool {
        if v == n {
            return true;
        }
        for c in 0..self.classes.len() {
            if let Some(pos) = self.insertion_point(&self.classes[c], v) {
                self.classes[c].order.insert(pos, v);
                self.classes[c].mask |= 1 << v;
                if self.assign(v + 1, n) {
                    return true;
                }
                self.classes[c].order.remove(pos);
                self.classes[c].mask &= !(1 << v);
            }
        }
        if self.classes.len() < self.k {
            self.classes.push(ClassState {
                mask: 1 << v,
                order: vec![v],
            });
            if self.assign(v + 1, n) {
                return true;
            }
            self.classes.pop();
        }
        false
    }
}

/// Greedy dicolouring. Each class is grown by taking the vertex of largest
/// out-degree within the current candidate set and shrinking the candidates
/// to its out-neighbours; the class is then removed and the process repeats.
/// Classes list vertices in pick order, which is their acyclic order.
pub fn greedy_dicoloring(tournament: &Tournament) -> Dicoloring {
    let mut remaining: Vec<usize> = (0..tournament.n()).collect();
    let mut classes = Vec::new();
    while !remaining.is_empty() {
        let mut candidates = remaining.clone();
        let mut class = Vec::new();
        while !candidates.is_empty() {
            let v = *candidates
                .iter()
                .max_by_key(|&&v| {
                    (
                        tournament.out_degree_in(v, &candidates),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("nonempty");
            class.push(v);
            candidates.retain(|&w| tournament.beats(v, w));
        }
        remaining.retain(|v| !class.contains(v));
        classes.push(class);
    }
    Dicoloring { classes }
}

/// `3n / log2 n`, the greedy class-count bound (1 for `n < 2`).
pub fn greedy_bound(n: usize) -> f64 {
    if n < 2 {
        1.0
    } else {
        3.0 * n as f64 / (n as f64).log2()
    }
}

/// `n / (2 log2 n + 1)`, the random-tournament lower bound.
pub fn random_lower_bound(n: usize) -> f64 {
    if n < 2 {
        n as f64
    } else {
        n as f64 / (2.0 * (n as f64).log2() + 1.0)
    }
}

/// Single voter whose chains are the acyclic orders of the classes.
pub fn voter_from_dicoloring(
    tournament: &Tournament,
    coloring: &Dicoloring,
) -> Result<VoterProfile> {
    coloring.validate(tournament)?;
    let chains: Vec<Vec<usize>> = coloring
        .classes
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| acyclic_order(tournament, c).expect("validated"))
        .collect();
    Ok(VoterProfile::single(PartialOrder::from_chains(
        tournament.n(),
        &chains,
    )?))
}

/// Largest vertex set inducing an acyclic subtournament.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxAcyclic {
    pub size: usize,
    /// In acyclic order.
    pub witness: Vec<usize>,
    /// False when found heuristically; `size` is then only a lower bound.
    pub exact: bool,
}

/// Exact branch and bound when `n <= limit`, otherwise the best greedy
/// chain from every start vertex.
pub fn max_acyclic_subset(tournament: &Tournament, limit: usize) -> MaxAcyclic {
    let n = tournament.n();
    if check_exact_size(n, limit).is_ok() {
        let out = tournament.out_masks();
        let mut best = Vec::new();
        let mut chain = Vec::new();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        extend_chain(&out, all, &mut chain, &mut best);
        MaxAcyclic {
            size: best.len(),
            witness: best,
            exact: true,
        }
    } else {
        let best = (0..n)
            .map(|start| {
                let mut chain = vec![start];
                let mut candidates: Vec<usize> =
                    (0..n).filter(|&w| tournament.beats(start, w)).collect();
                while !candidates.is_empty() {
                    let v = *candidates
                        .iter()
                        .max_by_key(|&&v| {
                            (
                                tournament.out_degree_in(v, &candidates),
                                std::cmp::Reverse(v),
                            )
                        })
                        .expect("nonempty");
                    chain.push(v);
                    candidates.retain(|&w| tournament.beats(v, w));
                }
                chain
            })
            .fold(Vec::new(), |best, chain| {
                if chain.len() > best.len() {
                    chain
                } else {
                    best
                }
            });
        MaxAcyclic {
            size: best.len(),
            witness: best,
            exact: false,
        }
    }
}

// Grows a transitive chain top-down: every candidate is beaten by every
// chain member.
fn extend_chain(out: &[u64], candidates: u64, chain: &mut Vec<usize>, best: &mut Vec<usize>) {
    if chain.len() > best.len() {
        best.clone_from(chain);
    }
    let mut rest = candidates;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = candidates & out[v];
        if chain.len() + 1 + next.count_ones() as usize > best.len() {
            chain.push(v);
            extend_chain(out, next, chain, best);
            chain.pop();
        }
    }
}

/// Result of [`rationality_number`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rationality {
    /// `alpha(M) = k`, witnessed by `certificate`.
    Exact { k: usize, certificate: VoterProfile },
    /// `lo <= alpha(M) <= hi`. The certificate witnesses `hi`; `cycle`, when
    /// present, is a directed cycle of the voting graph witnessing `lo >= 2`.
    Bounds {
        lo: usize,
        hi: usize,
        certificate: VoterProfile,
        cycle: Option<Vec<usize>>,
    },
}

impl Rationality {
    pub fn lower(&self) -> usize {
        match self {
            Rationality::Exact { k, .. } => *k,
            Rationality::Bounds { lo, .. } => *lo,
        }
    }

    pub fn upper(&self) -> usize {
        match self {
            Rationality::Exact { k, .. } => *k,
            Rationality::Bounds { hi, .. } => *hi,
        }
    }

    pub fn certificate(&self) -> &VoterProfile {
        match self {
            Rationality::Exact { certificate, .. } | Rationality::Bounds { certificate, .. } => {
                certificate
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Rationality::Exact { .. })
    }
}

/// What is known about one tournament: exact value or greedy bounds.
struct TournamentAlpha {
    lo: usize,
    hi: usize,
    certificate: VoterProfile,
}

fn tournament_alpha(tournament: &Tournament, limit: usize) -> Result<TournamentAlpha> {
    let n = tournament.n();
    let coloring = if check_exact_size(n, limit).is_ok() {
        dichromatic_number_exact(tournament, limit)?.1
    } else {
        greedy_dicoloring(tournament)
    };
    let hi = coloring.class_count();
    let exact = check_exact_size(n, limit).is_ok() || hi == 1;
    let lo = if exact {
        hi
    } else {
        1 + usize::from(!tournament.voting_graph().is_acyclic())
    };
    Ok(TournamentAlpha {
        lo,
        hi,
        certificate: voter_from_dicoloring(tournament, &coloring)?,
    })
}

/// Decides or bounds the rationality number of `matrix`.
///
/// * integral: exact dichromatic number of the voting tournament when
///   `n <= exact_limit`, otherwise greedy upper and cycle-based lower bound;
///   single-voter certificate either way.
/// * half-integral: per unanimity component, integral components are solved
///   as tournaments and the others bounded by `min(colour classes, size)`;
///   the certificate combines per-component witnesses. The lower bound is
///   the largest exact component value, and at least 2 when the voting graph
///   has a directed cycle.
/// * general: between 1 (2 with a directed cycle) and `n`, witnessed by the
///   antichain voter.
pub fn rationality_number(matrix: &PreferenceMatrix, exact_limit: usize) -> Result<Rationality> {
    let n = matrix.n();
    let cycle = matrix.voting_graph().find_cycle();
    let cycle_lo = if cycle.is_some() { 2 } else { 1 };
    match matrix.classify() {
        MatrixClass::Integral => {
            let tournament = Tournament::from_matrix(matrix)?;
            let alpha = tournament_alpha(&tournament, exact_limit)?;
            if alpha.lo == alpha.hi {
                Ok(Rationality::Exact {
                    k: alpha.hi,
                    certificate: alpha.certificate,
                })
            } else {
                Ok(Rationality::Bounds {
                    lo: alpha.lo.max(cycle_lo),
                    hi: alpha.hi,
                    certificate: alpha.certificate,
                    cycle,
                })
            }
        }
        MatrixClass::HalfIntegral => {
            let partition = halfint::components(matrix)?;
            let (lo, hi, per_component) = half_integral_witnesses(&partition, exact_limit)?;
            let certificate = halfint::combine_component_profiles(&partition, &per_component)?;
            Ok(Rationality::Bounds {
                lo: lo.max(cycle_lo),
                hi,
                certificate,
                cycle,
            })
        }
        MatrixClass::General => Ok(Rationality::Bounds {
            lo: cycle_lo,
            hi: n,
            certificate: antichain_profile(n),
            cycle,
        }),
    }
}

fn half_integral_witnesses(
    partition: &ComponentPartition,
    exact_limit: usize,
) -> Result<(usize, usize, Vec<VoterProfile>)> {
    let mut lo = 1;
    let mut hi = 1;
    let mut profiles = Vec::with_capacity(partition.submatrices.len());
    for sub in &partition.submatrices {
        if sub.classify() == MatrixClass::Integral {
            let alpha = tournament_alpha(&Tournament::from_matrix(sub)?, exact_limit)?;
            lo = lo.max(alpha.lo);
            hi = hi.max(alpha.hi);
            profiles.push(alpha.certificate);
            continue;
        }
        let coloring = halfint::greedy_coloring(&sub.unanimity_graph());
        if coloring.class_count() < sub.n() {
            hi = hi.max(coloring.class_count());
            profiles.push(halfint::two_voter_construction(sub, &coloring)?);
        } else {
            hi = hi.max(sub.n());
            profiles.push(antichain_profile(sub.n()));
        }
    }
    Ok((lo, hi, profiles))
}
