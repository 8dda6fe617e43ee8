//! Voter profiles and the rationality constraints.
//!
//! A profile is consistent with a matrix when, for every ordered pair
//! `(i, j)`, the fraction of voters strictly preferring `i` to `j` is at most
//! `p_ij`, and `p_ij` is at most the fraction weakly preferring `i` to `j`
//! (strict preference or indifference).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PreferenceMatrix;
use crate::poset::{OrderSpec, PartialOrder, Width};
use crate::rational::Rational;

/// A nonempty multiset of voters over the same candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterProfile {
    n: usize,
    voters: Vec<PartialOrder>,
}

/// Which side of the constraint a pair breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Weak fraction falls below `p_ij`.
    Lower,
    /// Strong fraction exceeds `p_ij`.
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based candidate labels.
    pub i: usize,
    pub j: usize,
    pub strong_fraction: Rational,
    pub p_ij: Rational,
    pub weak_fraction: Rational,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    n: usize,
    voters: Vec<OrderSpec>,
}

impl VoterProfile {
    pub fn new(n: usize, voters: Vec<PartialOrder>) -> Result<Self> {
        if voters.is_empty() {
            return Err(Error::Parse("a profile needs at least one voter".into()));
        }
        if let Some(bad) = voters.iter().find(|v| v.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        Ok(Self { n, voters })
    }

    pub fn single(voter: PartialOrder) -> Self {
        Self {
            n: voter.n(),
            voters: vec![voter],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn voters(&self) -> &[PartialOrder] {
        &self.voters
    }

    pub fn len(&self) -> usize {
        self.voters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voters.is_empty()
    }

    fn fraction(&self, count: usize) -> Rational {
        Rational::new(count as i64, self.voters.len() as i64)
    }

    /// Fraction of voters with `i > j`.
    pub fn strong_fraction(&self, i: usize, j: usize) -> Rational {
        self.fraction(self.voters.iter().filter(|v| v.prefers(i, j)).count())
    }

    /// Fraction of voters with `i > j` or `i`, `j` incomparable.
    pub fn weak_fraction(&self, i: usize, j: usize) -> Rational {
        self.fraction(self.voters.iter().filter(|v| !v.prefers(j, i)).count())
    }

    pub fn check_consistency(&self, matrix: &PreferenceMatrix) -> Result<ConsistencyReport> {
        if matrix.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: matrix.n(),
                found: self.n,
            });
        }
        let mut violations = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let strong = self.strong_fraction(i, j);
                let weak = self.weak_fraction(i, j);
                let p = matrix.get(i, j);
                let side = if strong > p {
                    Side::Upper
                } else if p > weak {
                    Side::Lower
                } else {
                    continue;
                };
                violations.push(Violation {
                    i: i + 1,
                    j: j + 1,
                    strong_fraction: strong,
                    p_ij: p,
                    weak_fraction: weak,
                    side,
                });
            }
        }
        Ok(ConsistencyReport {
            consistent: violations.is_empty(),
            violations,
        })
    }

    /// Shorthand for `check_consistency(..)?.consistent`.
    pub fn is_consistent_with(&self, matrix: &PreferenceMatrix) -> Result<bool> {
        Ok(self.check_consistency(matrix)?.consistent)
    }

    /// Largest voter width.
    pub fn width(&self) -> Width {
        self.voters
            .iter()
            .map(PartialOrder::width)
            .max()
            .expect("profiles are nonempty")
    }

    /// Replaces every voter by a minimum chain decomposition of its order.
    /// Width is unchanged and, since only comparisons are dropped,
    /// consistency with any matrix is preserved.
    pub fn normalize_to_chains(&self) -> Self {
        let voters = self
            .voters
            .iter()
            .map(|v| {
                let chains = v.min_chain_decomposition().chains;
                PartialOrder::from_chains(self.n, &chains).expect("decomposition partitions")
            })
            .collect();
        Self { n: self.n, voters }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProfileFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let voters = file
            .voters
            .iter()
            .map(|spec| PartialOrder::from_spec(file.n, spec))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, voters)
    }

    pub fn to_json(&self) -> String {
        let file = ProfileFile {
            n: self.n,
            voters: self.voters.iter().map(PartialOrder::to_spec).collect(),
        };
        serde_json::to_string_pretty(&file).expect("profile serializes")
    }
}

/// A single voter indifferent between every pair; consistent with every
/// matrix on `n` candidates.
pub fn antichain_profile(n: usize) -> VoterProfile {
    VoterProfile::single(PartialOrder::antichain(n))
}
