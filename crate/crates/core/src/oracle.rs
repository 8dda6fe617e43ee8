//! Exhaustive reference implementations.
//!
//! Nothing here calls the matching, branch-and-bound or greedy code it is
//! meant to check. Everything is plain enumeration with hard size limits.

use crate::error::{Error, Result};
use crate::integral::Tournament;
use crate::matrix::{MatrixClass, PreferenceMatrix};
use crate::poset::{PartialOrder, Width};
use crate::profile::VoterProfile;

pub const BRUTE_WIDTH_LIMIT: usize = 16;
pub const BRUTE_DICHROMATIC_LIMIT: usize = 18;
pub const BRUTE_ALPHA_LIMIT: usize = 10;

fn limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeLimit { n, limit })
    } else {
        Ok(())
    }
}

/// Largest pairwise-incomparable subset, over all `2^n` subsets.
pub fn brute_width(order: &PartialOrder) -> Result<Width> {
    let n = order.n();
    limit(n, BRUTE_WIDTH_LIMIT)?;
    let mut best = 0;
    for mask in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| (mask >> v) & 1 == 1).collect();
        let antichain = members
            .iter()
            .enumerate()
            .all(|(a, &x)| members[a + 1..].iter().all(|&y| !order.comparable(x, y)));
        if antichain {
            best = best.max(members.len());
        }
    }
    Ok(Width(best))
}

/// Minimum number of acyclic sets covering the tournament, by subset DP.
pub fn brute_dichromatic(tournament: &Tournament) -> Result<usize> {
    let n = tournament.n();
    limit(n, BRUTE_DICHROMATIC_LIMIT)?;
    let full = (1u32 << n) - 1;
    let out: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| tournament.beats(i, j))
                .fold(0, |m, j| m | 1 << j)
        })
        .collect();
    let inc: Vec<u32> = (0..n).map(|v| full & !out[v] & !(1 << v)).collect();

    // A subtournament is acyclic iff it has no directed triangle. Adding the
    // top vertex v to an acyclic set creates one iff some out-neighbour of v
    // beats some in-neighbour of v.
    let mut acyclic = vec![false; 1 << n];
    acyclic[0] = true;
    for mask in 1..=full {
        let v = 31 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << v);
        if !acyclic[rest as usize] {
            continue;
        }
        let mut forward = out[v] & rest;
        let backward = inc[v] & rest;
        let mut ok = true;
        while forward != 0 {
            let u = forward.trailing_zeros() as usize;
            forward &= forward - 1;
            if out[u] & backward != 0 {
                ok = false;
                break;
            }
        }
        acyclic[mask as usize] = ok;
    }

    let mut cover = vec![usize::MAX; 1 << n];
    cover[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let others = mask & !low;
        let mut sub = others;
        loop {
            let part = sub | low;
            if acyclic[part as usize] {
                let rest = cover[(mask & !part) as usize];
                if rest != usize::MAX {
                    cover[mask as usize] = cover[mask as usize].min(rest + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
    }
    Ok(cover[full as usize])
}

/// Smallest width of a single chain-form voter consistent with an integral
/// matrix. Every set partition of the candidates is tried; each block is
/// ordered by its within-block wins and the resulting voter is run through
/// the consistency checker.
pub fn brute_alpha_integral(matrix: &PreferenceMatrix) -> Result<usize> {
    let class = matrix.classify();
    if class != MatrixClass::Integral {
        return Err(Error::Class {
            found: class.to_string(),
            needed: "integral",
        });
    }
    let n = matrix.n();
    limit(n, BRUTE_ALPHA_LIMIT)?;
    let mut best = usize::MAX;
    let mut labels = vec![0usize; n];
    for_each_partition(&mut labels, 0, 0, &mut |labels, blocks| {
        let mut chains: Vec<Vec<usize>> = vec![Vec::new(); blocks];
        for (c, &b) in labels.iter().enumerate() {
            chains[b].push(c);
        }
        for chain in &mut chains {
            let wins = |c: usize, chain: &[usize]| {
                chain.iter().filter(|&&d| matrix.get(c, d).is_one()).count()
            };
            let snapshot = chain.clone();
            chain.sort_by_key(|&c| std::cmp::Reverse(wins(c, &snapshot)));
        }
        let voter = PartialOrder::from_chains(n, &chains).expect("blocks partition");
        let consistent = VoterProfile::single(voter)
            .is_consistent_with(matrix)
            .expect("same size");
        if consistent {
            best = best.min(blocks);
        }
    });
    Ok(best)
}

// Restricted growth strings: labels[i] <= max(labels[..i]) + 1.
fn for_each_partition(
    labels: &mut [usize],
    pos: usize,
    blocks: usize,
    visit: &mut dyn FnMut(&[usize], usize),
) {
    if pos == labels.len() {
        visit(labels, blocks);
        return;
    }
    for b in 0..=blocks {
        labels[pos] = b;
        for_each_partition(labels, pos + 1, blocks.max(b + 1), visit);
    }
}
