//! Greedy exploratory search for disjoint orbit and anti-orbit prefixes.
//! Output is advisory only: nothing here certifies anything.

use std::collections::HashSet;

use serde::Serialize;

use crate::arithfun::{eval_small, value_table, FunctionId};
use crate::error::Result;
use crate::factorint::factor_u128;

pub const EXPERIMENTAL: &str = "EXPERIMENTAL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Starting points tried: `1..=max_start`.
    pub max_start: u64,
    /// Length of each reported prefix.
    pub max_depth: u64,
    pub max_families: u64,
    /// Anti-orbit preimages are looked up only in `1..=scan_bound`.
    pub scan_bound: u64,
    /// Forward steps taken while looking for a cycle.
    pub step_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_start: 100,
            max_depth: 10,
            max_families: 5,
            scan_bound: 100_000,
            step_cap: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CandidateKind {
    Orbit,
    AntiOrbit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub terms: Vec<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub label: &'static str,
    pub function: FunctionId,
    pub budget: SearchBudget,
    pub candidates: Vec<Candidate>,
}

/// Values past this are treated as having escaped to infinity.
const ESCAPE: u128 = 1 << 64;

fn step(f: FunctionId, x: u128) -> Option<u128> {
    let factors: Vec<(u64, u32)> = factor_u128(x)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect();
    eval_small(f, &factors)
}

/// Forward trajectory of `start` if it shows no cycle within the step cap;
/// `None` if it cycles.
fn open_trajectory(f: FunctionId, start: u128, cap: u64) -> Option<Vec<u128>> {
    let mut seen = HashSet::new();
    let mut traj = Vec::new();
    let mut x = start;
    for _ in 0..cap {
        if !seen.insert(x) {
            return None;
        }
        traj.push(x);
        match step(f, x) {
            Some(y) if y < ESCAPE => x = y,
            _ => return Some(traj),
        }
    }
    Some(traj)
}

fn orbit_candidates(f: FunctionId, b: &SearchBudget) -> Vec<Candidate> {
    let mut used: HashSet<u128> = HashSet::new();
    let mut out = Vec::new();
    for start in 1..=b.max_start as u128 {
        if out.len() as u64 >= b.max_families {
            break;
        }
        if used.contains(&start) {
            continue;
        }
        let Some(traj) = open_trajectory(f, start, b.step_cap) else {
            continue;
        };
        if traj.len() < b.max_depth as usize || traj.iter().any(|x| used.contains(x)) {
            continue;
        }
        used.extend(traj.iter().copied());
        out.push(Candidate {
            kind: CandidateKind::Orbit,
            terms: traj[..b.max_depth as usize].to_vec(),
        });
    }
    out
}

fn anti_orbit_candidates(f: FunctionId, b: &SearchBudget) -> Result<Vec<Candidate>> {
    let table = value_table(f, b.scan_bound)?;
    let mut fibres: Vec<Vec<u32>> = vec![Vec::new(); b.scan_bound as usize + 1];
    for (n, &v) in table.iter().enumerate().skip(1) {
        if v <= b.scan_bound as u128 {
            fibres[v as usize].push(n as u32);
        }
    }
    let node_cap = 100_000usize;
    let mut used = vec![false; b.scan_bound as usize + 1];
    let mut out = Vec::new();
    for start in 1..=b.max_start.min(b.scan_bound) as u32 {
        if out.len() as u64 >= b.max_families {
            break;
        }
        if used[start as usize] {
            continue;
        }
        // Depth-first with backtracking; `choice[i]` is the next fibre slot
        // to try below `chain[i]`.
        let mut chain = vec![start];
        let mut choice = vec![0usize];
        let mut on_chain = HashSet::from([start]);
        let mut nodes = 0;
        while (chain.len() as u64) < b.max_depth && !chain.is_empty() && nodes < node_cap {
            nodes += 1;
            let top = *chain.last().unwrap() as usize;
            let slot = choice.last_mut().unwrap();
            let next = fibres[top][*slot..]
                .iter()
                .position(|&x| !used[x as usize] && !on_chain.contains(&x));
            match next {
                Some(off) => {
                    let x = fibres[top][*slot + off];
                    *slot += off + 1;
                    chain.push(x);
                    choice.push(0);
                    on_chain.insert(x);
                }
                None => {
                    on_chain.remove(&chain.pop().unwrap());
                    choice.pop();
                }
            }
        }
        if chain.len() as u64 == b.max_depth {
            for &x in &chain {
                used[x as usize] = true;
            }
            out.push(Candidate {
                kind: CandidateKind::AntiOrbit,
                terms: chain.iter().map(|&x| x as u128).collect(),
            });
        }
    }
    Ok(out)
}

pub fn search_families(f: FunctionId, budget: SearchBudget) -> Result<SearchResult> {
    let mut candidates = orbit_candidates(f, &budget);
    candidates.extend(anti_orbit_candidates(f, &budget)?);
    Ok(SearchResult {
        label: EXPERIMENTAL,
        function: f,
        budget,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_has_no_orbit_candidates() {
        let r = search_families(FunctionId::phi(), SearchBudget::default()).unwrap();
        assert!(r
            .candidates
            .iter()
            .all(|c| c.kind == CandidateKind::AntiOrbit));
    }

    #[test]
    fn psi_orbit_found() {
        let r = search_families(FunctionId::psi(), SearchBudget::default()).unwrap();
        let orbit = r
            .candidates
            .iter()
            .find(|c| c.kind == CandidateKind::Orbit)
            .unwrap();
        assert!(orbit
            .terms
            .windows(2)
            .all(|w| step(FunctionId::psi(), w[0]) == Some(w[1])));
    }
}
