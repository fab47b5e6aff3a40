//! Partial values of the set-theoretical entropy limits at a finite horizon.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::arithfun::{apply, Family, FunctionId};
use crate::error::{Error, Result};
use crate::factorint::{factorize, FactoredNatural};
use crate::preimage::{inverse_phi, verify_expansive, PreimageIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Forward,
    Backward,
}

/// Whether a backward estimate counts all of `N` or only the surjective core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntropyMode {
    Ambient,
    Core,
}

/// `count / horizon`, where `count` is the size of the union of the first
/// `horizon` images (or preimages) of the seed set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntropyEstimate {
    pub function: FunctionId,
    pub seeds: Vec<u128>,
    pub horizon: u64,
    pub count: u64,
    pub direction: Direction,
    pub mode: Option<EntropyMode>,
}

impl EntropyEstimate {
    pub fn as_f64(&self) -> f64 {
        self.count as f64 / self.horizon as f64
    }

    /// `count/horizon` as a decimal with six places, computed exactly.
    pub fn decimal(&self) -> String {
        let scaled = (self.count as u128 * 1_000_000 * 2 + self.horizon as u128)
            / (2 * self.horizon as u128);
        format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
    }
}

impl fmt::Display for EntropyEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {}", self.count, self.horizon, self.decimal())
    }
}

fn check_inputs(seeds: &[u128], horizon: u64) -> Result<Vec<u128>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    if seeds.is_empty() || seeds.contains(&0) {
        return Err(Error::InvalidArgument(
            "seeds must be a non-empty set of naturals".into(),
        ));
    }
    let set: BTreeSet<u128> = seeds.iter().copied().collect();
    Ok(set.into_iter().collect())
}

/// `#(A u f(A) u ... u f^(horizon-1)(A)) / horizon`, iterating in factored
/// form. A trajectory stops as soon as it reaches a point already recorded at
/// an earlier or equal step, since its future is then already counted.
pub fn ent_set_estimate(f: FunctionId, seeds: &[u128], horizon: u64) -> Result<EntropyEstimate> {
    let seeds = check_inputs(seeds, horizon)?;
    let mut first_step: HashMap<FactoredNatural, u64> = HashMap::new();
    for &s in &seeds {
        let mut x = factorize(s);
        for step in 0..horizon {
            match first_step.get(&x) {
                Some(&at) if at <= step => break,
                _ => {
                    first_step.insert(x.clone(), step);
                }
            }
            if step + 1 == horizon {
                break;
            }
            x = apply(f, &x).map_err(|e| Error::HorizonBudget {
                reached: step + 1,
                detail: e.to_string(),
            })?;
        }
    }
    Ok(EntropyEstimate {
        function: f,
        seeds,
        horizon,
        count: first_step.len() as u64,
        direction: Direction::Forward,
        mode: None,
    })
}

enum Fibres {
    Phi,
    Index(PreimageIndex),
}

impl Fibres {
    fn new(f: FunctionId, max_seed: u128) -> Result<Fibres> {
        if f == FunctionId::phi() {
            return Ok(Fibres::Phi);
        }
        if matches!(
            f.family(),
            Family::BigOmega | Family::SmallOmega | Family::DivisorCount
        ) {
            return Err(Error::NotFiniteFibre {
                function: f.to_string(),
            });
        }
        let bound = u64::try_from(max_seed)
            .map_err(|_| Error::InvalidArgument(format!("seed {max_seed} too large")))?;
        match PreimageIndex::build(f, bound) {
            Ok(idx) => Ok(Fibres::Index(idx)),
            Err(Error::NotExpansive { .. }) => Err(Error::IncompletePreimage {
                function: f.to_string(),
                reason: "fibres are complete only for phi and expansive functions".into(),
            }),
            Err(e) => Err(e),
        }
    }

    fn fibre(&self, y: u128) -> Result<Vec<u128>> {
        match self {
            Fibres::Phi => Ok(inverse_phi(y)?.members),
            Fibres::Index(idx) => Ok(idx
                .fibre(y as u64)
                .expect("values never exceed the largest seed")
                .iter()
                .map(|&n| n as u128)
                .collect()),
        }
    }
}

/// `#(A u f^-1(A) u ... u f^-(horizon-1)(A)) / horizon` on ambient `N`.
pub fn ent_cset_estimate(f: FunctionId, seeds: &[u128], horizon: u64) -> Result<EntropyEstimate> {
    ent_cset_estimate_mode(f, seeds, horizon, EntropyMode::Ambient)
}

/// As [`ent_cset_estimate`]; `Core` counts only points of the surjective
/// core and needs `f` verified expansive.
pub fn ent_cset_estimate_mode(
    f: FunctionId,
    seeds: &[u128],
    horizon: u64,
    mode: EntropyMode,
) -> Result<EntropyEstimate> {
    let seeds = check_inputs(seeds, horizon)?;
    let max_seed = *seeds.last().expect("non-empty");
    if mode == EntropyMode::Core {
        verify_expansive(f, max_seed as u64)?;
    }
    let fibres = Fibres::new(f, max_seed)?;
    // Breadth-first by preimage depth; a point first met at depth i has its
    // preimages at depth i + 1, so first visits give the exact union.
    let mut seen: BTreeMap<u128, u64> = seeds.iter().map(|&s| (s, 0)).collect();
    let mut frontier = seeds.clone();
    for depth in 1..horizon {
        let mut next = Vec::new();
        for &y in &frontier {
            for x in fibres.fibre(y).map_err(|e| Error::HorizonBudget {
                reached: depth,
                detail: e.to_string(),
            })? {
                if let std::collections::btree_map::Entry::Vacant(v) = seen.entry(x) {
                    v.insert(depth);
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let count = match mode {
        EntropyMode::Ambient => seen.len() as u64,
        EntropyMode::Core => {
            let mut c = 0;
            for &x in seen.keys() {
                if super::surjective_core_membership(f, x)? == super::CoreMembership::InCore {
                    c += 1;
                }
            }
            c
        }
    };
    Ok(EntropyEstimate {
        function: f,
        seeds,
        horizon,
        count,
        direction: Direction::Backward,
        mode: Some(mode),
    })
}
