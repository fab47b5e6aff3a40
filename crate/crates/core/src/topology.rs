//! Minimal open sets of the functional Alexandroff topologies on `N`:
//! `tau_f` (preimage closures) and the forward topology `taubar_f` (forward
//! orbits), plus connectivity diagnostics on finite windows.
//!
//! Verdicts about the infinite space are always stated as a lemma's
//! conclusion, conditional on its hypothesis as verified up to `bound`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::{Serialize, Serializer};

use crate::arithfun::{eval_u128, first_violation, value_table, Family, FunctionId};
use crate::error::{Error, Result};
use crate::preimage::{inverse_phi, verify_expansive, PreimageIndex};
use crate::report::{Counterexample, VerificationReport};

/// Default cap on forward steps before an orbit is reported truncated.
pub const DEFAULT_ORBIT_STEP_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Topology {
    Tau,
    TauBar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetCompleteness {
    Complete,
    /// Stopped at this bound (steps for forward orbits, values for closures).
    Truncated(u128),
}

impl Serialize for SetCompleteness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SetCompleteness::Complete => s.serialize_str("COMPLETE"),
            SetCompleteness::Truncated(b) => s.collect_str(&format_args!("TRUNCATED({b})")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalOpenSet {
    pub point: u128,
    pub topology: Topology,
    pub members: BTreeSet<u128>,
    pub completeness: SetCompleteness,
}

impl MinimalOpenSet {
    pub fn is_complete(&self) -> bool {
        self.completeness == SetCompleteness::Complete
    }

    pub fn max(&self) -> u128 {
        *self.members.last().expect("point is a member")
    }
}

/// `V(x, taubar_f) = {f^n(x) : n >= 0}`, complete once a cycle closes.
pub fn min_open_forward(f: FunctionId, x: u128) -> Result<MinimalOpenSet> {
    min_open_forward_capped(f, x, DEFAULT_ORBIT_STEP_CAP)
}

pub fn min_open_forward_capped(f: FunctionId, x: u128, step_cap: u64) -> Result<MinimalOpenSet> {
    if x == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    let mut members = BTreeSet::new();
    let mut y = x;
    let mut completeness = SetCompleteness::Truncated(step_cap as u128);
    for step in 0..step_cap {
        if !members.insert(y) {
            completeness = SetCompleteness::Complete;
            break;
        }
        match eval_u128(f, y).ok().and_then(|v| v.to_u128()) {
            Some(next) => y = next,
            None => {
                completeness = SetCompleteness::Truncated(step as u128 + 1);
                break;
            }
        }
    }
    Ok(MinimalOpenSet {
        point: x,
        topology: Topology::TauBar,
        members,
        completeness,
    })
}

fn refuse_infinite_fibres(f: FunctionId) -> Result<()> {
    if matches!(
        f.family(),
        Family::BigOmega | Family::SmallOmega | Family::DivisorCount
    ) {
        return Err(Error::NotFiniteFibre {
            function: f.to_string(),
        });
    }
    Ok(())
}

/// The closure of `x` inside a prebuilt index (complete for expansive `f`).
pub fn min_open_backward_indexed(index: &PreimageIndex, x: u128) -> Result<MinimalOpenSet> {
    let fibre_of = |y: u128| {
        index
            .fibre(y as u64)
            .ok_or_else(|| Error::InvalidArgument(format!("{y} beyond the index bound")))
    };
    fibre_of(x)?;
    let mut members = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for &z in fibre_of(y)? {
            if members.insert(z as u128) {
                queue.push_back(z as u128);
            }
        }
    }
    Ok(MinimalOpenSet {
        point: x,
        topology: Topology::Tau,
        members,
        completeness: SetCompleteness::Complete,
    })
}

/// `V(x, tau_f) = union of f^-n(x)`.
///
/// Expansive `f` (verified on `1..=x`): complete, inside `1..=x`.
/// `phi`: closure through `inverse_phi`, complete only if it stabilizes below
/// `scan_bound`. Other functions with finite fibres: bounded search, always
/// truncated. `Omega`, `omega`, `d_l`: refused.
pub fn min_open_backward(f: FunctionId, x: u128, scan_bound: u64) -> Result<MinimalOpenSet> {
    if x == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    refuse_infinite_fibres(f)?;
    let xb = u64::try_from(x).map_err(|_| Error::InvalidArgument(format!("{x} too large")))?;
    match verify_expansive(f, xb) {
        Ok(()) => return min_open_backward_indexed(&PreimageIndex::build(f, xb)?, x),
        Err(Error::NotExpansive { .. }) => {}
        Err(e) => return Err(e),
    }
    let bound = scan_bound as u128;
    let mut members = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    let mut truncated = false;
    if f == FunctionId::phi() {
        while let Some(y) = queue.pop_front() {
            for z in inverse_phi(y)?.members {
                if z >= bound {
                    truncated = true;
                } else if members.insert(z) {
                    queue.push_back(z);
                }
            }
        }
    } else {
        let table = value_table(f, scan_bound)?;
        let mut fibres: Vec<Vec<u32>> = vec![Vec::new(); scan_bound as usize + 1];
        for (n, &v) in table.iter().enumerate().skip(1) {
            if v <= scan_bound as u128 {
                fibres[v as usize].push(n as u32);
            }
        }
        while let Some(y) = queue.pop_front() {
            if y > scan_bound as u128 {
                continue;
            }
            for &z in &fibres[y as usize] {
                if members.insert(z as u128) {
                    queue.push_back(z as u128);
                }
            }
        }
        truncated = true;
    }
    Ok(MinimalOpenSet {
        point: x,
        topology: Topology::Tau,
        members,
        completeness: if truncated {
            SetCompleteness::Truncated(bound)
        } else {
            SetCompleteness::Complete
        },
    })
}

fn conditional(bound: u64) -> String {
    format!("(conditional: hypothesis verified up to {bound} only)")
}

/// For `f(1) = 1` and `f(n) < n` (n > 1): `1` lies in every forward orbit,
/// so `(N, taubar_f)` is connected. Re-verifies the hypothesis on
/// `1..=bound`, then checks each orbit directly, including that the least
/// point of each orbit is a fixed point.
pub fn contains_one_forward(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    const ID: &str = "connected-forward";
    let table = value_table(f, bound)?;
    if bound >= 1 && table[1] != 1 {
        return Ok(VerificationReport::fail(
            ID,
            1,
            bound,
            Counterexample::witness(1, "f(1) = 1", table[1]),
        ));
    }
    if let Some(n) = (2..=bound as usize).find(|&n| table[n] >= n as u128) {
        return Ok(VerificationReport::fail(
            ID,
            1,
            bound,
            Counterexample::witness(n as u128, format!("f({n}) < {n}"), table[n]),
        ));
    }
    // Orbits strictly descend to 1, so reach[f(n)] is known before reach[n].
    let mut least = vec![0u32; bound as usize + 1];
    if bound >= 1 {
        least[1] = 1;
    }
    for n in 2..=bound as usize {
        least[n] = least[table[n] as usize].min(n as u32);
        let m = least[n] as usize;
        if m != 1 || table[m] != m as u128 {
            return Ok(VerificationReport::fail(
                ID,
                1,
                bound,
                Counterexample::witness(
                    n as u128,
                    "1 in the forward orbit",
                    format!("least point {m}"),
                ),
            ));
        }
    }
    Ok(
        VerificationReport::pass(ID, 1, bound).with_conclusion(format!(
            "(N, taubar_{f}) is connected {}",
            conditional(bound)
        )),
    )
}

/// For `f(1) = 1` and `f(n) >= n` (n > 1): `{1}, N \ {1}` separates both
/// topologies. Re-verifies the hypothesis on `1..=bound` and checks directly
/// that no `1 < n <= bound` reaches 1 and that the fibre of 1 is `{1}`.
pub fn separation_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    const ID: &str = "separation";
    let table = value_table(f, bound)?;
    if bound >= 1 && table[1] != 1 {
        return Ok(VerificationReport::fail(
            ID,
            1,
            bound,
            Counterexample::witness(1, "f(1) = 1", table[1]),
        ));
    }
    for (n, &v) in table.iter().enumerate().skip(2) {
        if v < n as u128 {
            return Ok(VerificationReport::fail(
                ID,
                1,
                bound,
                Counterexample::witness(n as u128, format!("f({n}) >= {n}"), v),
            ));
        }
        if v == 1 {
            return Ok(VerificationReport::fail(
                ID,
                1,
                bound,
                Counterexample::witness(n as u128, "fibre of 1 is {1}", format!("f({n}) = 1")),
            ));
        }
    }
    Ok(
        VerificationReport::pass(ID, 1, bound).with_conclusion(format!(
            "{{1}}, N\\{{1}} separates (N, tau_{f}) and (N, taubar_{f}): disconnected {}",
            conditional(bound)
        )),
    )
}

/// `V(k, tau_f) <= {1..k}` for every `k <= bound`, for `f` expansive on the range.
pub fn tau_subset_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    const ID: &str = "tau-subset";
    if let Some((n, v)) = first_violation(f, 1, bound, |n, v| v >= n as u128)? {
        return Ok(VerificationReport::fail(
            ID,
            1,
            bound,
            Counterexample::witness(n as u128, format!("f({n}) >= {n}"), v),
        ));
    }
    let index = PreimageIndex::build(f, bound)?;
    for k in 1..=bound as u128 {
        let v = min_open_backward_indexed(&index, k)?;
        if v.max() > k {
            return Ok(VerificationReport::fail(
                ID,
                1,
                bound,
                Counterexample::witness(k, format!("V({k}) within 1..{k}"), v.max()),
            ));
        }
    }
    Ok(VerificationReport::pass(ID, 1, bound)
        .with_conclusion(format!("V(k, tau_{f}) within 1..k for k <= {bound}")))
}

/// `V(k, taubar_f) <= {1..k}` for every `k <= bound`, for `f` decreasing on the range.
pub fn taubar_subset_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    const ID: &str = "taubar-subset";
    let table = value_table(f, bound)?;
    if let Some(n) = (1..=bound as usize).find(|&n| table[n] > n as u128) {
        return Ok(VerificationReport::fail(
            ID,
            1,
            bound,
            Counterexample::witness(n as u128, format!("f({n}) <= {n}"), table[n]),
        ));
    }
    for k in 1..=bound as usize {
        let mut seen = HashSet::new();
        let mut y = k;
        while seen.insert(y) {
            if y > k {
                return Ok(VerificationReport::fail(
                    ID,
                    1,
                    bound,
                    Counterexample::witness(k as u128, format!("V({k}) within 1..{k}"), y),
                ));
            }
            y = table[y] as usize;
        }
    }
    Ok(VerificationReport::pass(ID, 1, bound)
        .with_conclusion(format!("V(k, taubar_{f}) within 1..k for k <= {bound}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub bound: u64,
    /// Components of the window, each ascending, ordered by least element.
    pub components: Vec<Vec<u64>>,
    /// Points whose image leaves the window.
    pub boundary: Vec<u64>,
}

fn group(uf: &UnionFind<u32>, bound: u64) -> Vec<Vec<u64>> {
    let mut by_root: std::collections::BTreeMap<u32, Vec<u64>> = Default::default();
    for n in 1..=bound as u32 {
        by_root.entry(uf.find(n)).or_default().push(n as u64);
    }
    let mut comps: Vec<Vec<u64>> = by_root.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Weakly connected components of `n -- f(n)` restricted to `1..=bound`.
pub fn components(f: FunctionId, bound: u64) -> Result<ComponentReport> {
    let table = value_table(f, bound)?;
    let mut uf = UnionFind::new(bound as usize + 1);
    let mut boundary = Vec::new();
    for (n, &v) in table.iter().enumerate().skip(1) {
        if v <= bound as u128 {
            uf.union(n as u32, v as u32);
        } else {
            boundary.push(n as u64);
        }
    }
    Ok(ComponentReport {
        bound,
        components: group(&uf, bound),
        boundary,
    })
}

/// One block of a partition of `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockDescriptor {
    All,
    /// `{n : n = residue mod modulus}`.
    Residue {
        modulus: u64,
        residue: u64,
    },
    /// Whatever the other blocks leave uncovered.
    Rest,
    /// A strictly increasing list of members.
    Explicit(Vec<u64>),
}

impl fmt::Display for BlockDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockDescriptor::All => write!(f, "all"),
            BlockDescriptor::Residue { modulus, residue } => write!(f, "{residue}mod{modulus}"),
            BlockDescriptor::Rest => write!(f, "rest"),
            BlockDescriptor::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", s.join(","))
            }
        }
    }
}

impl Serialize for BlockDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `all`, `rest`, `odds`, `evens`, `<r>mod<m>` and `[a,b,c]`.
impl FromStr for BlockDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPartition(format!("cannot parse block {s:?}"));
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "all" | "n" => return Ok(BlockDescriptor::All),
            "rest" => return Ok(BlockDescriptor::Rest),
            "odd" | "odds" => {
                return Ok(BlockDescriptor::Residue {
                    modulus: 2,
                    residue: 1,
                })
            }
            "even" | "evens" => {
                return Ok(BlockDescriptor::Residue {
                    modulus: 2,
                    residue: 0,
                })
            }
            _ => {}
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let v = inner
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(BlockDescriptor::Explicit(v));
        }
        let (r, m) = t.split_once("mod").ok_or_else(bad)?;
        let residue = r.trim().parse().map_err(|_| bad())?;
        let modulus: u64 = m.trim().parse().map_err(|_| bad())?;
        if modulus == 0 || residue >= modulus {
            return Err(bad());
        }
        Ok(BlockDescriptor::Residue { modulus, residue })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub blocks: Vec<BlockDescriptor>,
    pub bound: u64,
    /// `successor[n - 1]`: image of `n`, or `None` at a window boundary.
    pub successor: Vec<Option<u64>>,
    pub components: Vec<Vec<u64>>,
    /// Block index of each component.
    pub component_blocks: Vec<usize>,
    /// Every component lies inside a single block.
    pub refines_partition: bool,
}

/// Builds `f` on `1..=bound` sending each element to the next element of its
/// block, and reports the components of that window.
pub fn partition_map(blocks: &[BlockDescriptor], bound: u64) -> Result<PartitionReport> {
    if blocks.is_empty() {
        return Err(Error::InvalidPartition("no blocks".into()));
    }
    if blocks
        .iter()
        .filter(|b| **b == BlockDescriptor::Rest)
        .count()
        > 1
    {
        return Err(Error::InvalidPartition("at most one rest block".into()));
    }
    let n = bound as usize;
    let mut owner: Vec<Option<usize>> = vec![None; n + 1];
    let mut claim = |x: u64, b: usize| -> Result<()> {
        if x == 0 {
            return Err(Error::InvalidPartition("0 is not a natural".into()));
        }
        if x > bound {
            return Ok(());
        }
        match owner[x as usize] {
            Some(a) if a != b => Err(Error::InvalidPartition(format!(
                "{x} lies in blocks {} and {}",
                blocks[a], blocks[b]
            ))),
            _ => {
                owner[x as usize] = Some(b);
                Ok(())
            }
        }
    };
    for (b, block) in blocks.iter().enumerate() {
        match block {
            BlockDescriptor::All => (1..=bound).try_for_each(|x| claim(x, b))?,
            BlockDescriptor::Residue { modulus, residue } => (1..=bound)
                .filter(|x| x % modulus == *residue)
                .try_for_each(|x| claim(x, b))?,
            BlockDescriptor::Explicit(list) => {
                if list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidPartition(format!(
                        "block {block} is not strictly increasing"
                    )));
                }
                list.iter().try_for_each(|&x| claim(x, b))?;
            }
            BlockDescriptor::Rest => {}
        }
    }
    if let Some(rest) = blocks.iter().position(|b| *b == BlockDescriptor::Rest) {
        for slot in owner.iter_mut().skip(1) {
            slot.get_or_insert(rest);
        }
    }
    if let Some(x) = (1..=n).find(|&x| owner[x].is_none()) {
        return Err(Error::InvalidPartition(format!("{x} is in no block")));
    }
    let mut last_in_block: Vec<Option<usize>> = vec![None; blocks.len()];
    let mut successor: Vec<Option<u64>> = vec![None; n];
    for (x, b) in owner.iter().enumerate().skip(1) {
        let b = b.expect("checked");
        if let Some(prev) = last_in_block[b] {
            successor[prev - 1] = Some(x as u64);
        }
        last_in_block[b] = Some(x);
    }
    let mut uf = UnionFind::new(n + 1);
    for (i, s) in successor.iter().enumerate() {
        if let Some(s) = s {
            uf.union(i as u32 + 1, *s as u32);
        }
    }
    let components = group(&uf, bound);
    let component_blocks: Vec<usize> = components
        .iter()
        .map(|c| owner[c[0] as usize].expect("checked"))
        .collect();
    let refines_partition = components
        .iter()
        .zip(&component_blocks)
        .all(|(c, &b)| c.iter().all(|&x| owner[x as usize] == Some(b)));
    Ok(PartitionReport {
        blocks: blocks.to_vec(),
        bound,
        successor,
        components,
        component_blocks,
        refines_partition,
    })
}

/// The successor-in-block map has exactly one component per nonempty block
/// inside `1..=bound`, and no component crosses two blocks.
pub fn partition_check(blocks: &[BlockDescriptor], bound: u64) -> Result<VerificationReport> {
    const ID: &str = "partition-example";
    let r = partition_map(blocks, bound)?;
    let families = blocks.len() as u64;
    if !r.refines_partition {
        return Ok(VerificationReport::fail(
            ID,
            families,
            bound,
            Counterexample::new(
                None,
                bound,
                "components inside single blocks",
                "a component crosses blocks",
            ),
        ));
    }
    let mut per_block = vec![0usize; blocks.len()];
    for &b in &r.component_blocks {
        per_block[b] += 1;
    }
    if let Some(b) = per_block.iter().position(|&c| c > 1) {
        let first = r.components[r.component_blocks.iter().rposition(|&x| x == b).unwrap()][0];
        return Ok(VerificationReport::fail(
            ID,
            families,
            bound,
            Counterexample::new(
                Some(blocks[b].to_string()),
                first,
                "one component per block",
                format!("{} components", per_block[b]),
            ),
        ));
    }
    Ok(
        VerificationReport::pass(ID, families, bound).with_conclusion(format!(
            "{} components on 1..{bound}, one per nonempty block",
            r.components.len()
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u128]) -> BTreeSet<u128> {
        v.iter().copied().collect()
    }

    #[test]
    fn forward_examples() {
        let v = min_open_forward(FunctionId::phi(), 6).unwrap();
        assert_eq!(v.members, set(&[1, 2, 6]));
        assert!(v.is_complete());
        assert_eq!(
            min_open_forward(FunctionId::phi(), 1).unwrap().members,
            set(&[1])
        );
        let v = min_open_forward(FunctionId::psi(), 6).unwrap();
        assert!(!v.is_complete());
        assert!(v.members.is_superset(&set(&[6, 12, 24])));
    }

    #[test]
    fn backward_examples() {
        let v = min_open_backward(FunctionId::psi(), 12, 0).unwrap();
        assert!(v.is_complete());
        assert_eq!(v.members, set(&[2, 3, 4, 5, 6, 7, 8, 9, 11, 12]));
        assert_eq!(
            min_open_backward(FunctionId::psi(), 1, 0).unwrap().members,
            set(&[1])
        );
        assert!(matches!(
            min_open_backward(FunctionId::big_omega(), 1, 100),
            Err(Error::NotFiniteFibre { .. })
        ));
        let v = min_open_backward(FunctionId::phi(), 7, 1000).unwrap();
        assert!(v.is_complete());
        assert_eq!(v.members, set(&[7]));
        assert!(!min_open_backward(FunctionId::phi(), 6, 1000)
            .unwrap()
            .is_complete());
    }

    #[test]
    fn connectivity_checks() {
        assert!(contains_one_forward(FunctionId::phi(), 10_000)
            .unwrap()
            .passed());
        let r = contains_one_forward(FunctionId::psi(), 100).unwrap();
        assert_eq!(r.counterexample.unwrap().position, 2);
        assert!(separation_check(FunctionId::psi(), 10_000)
            .unwrap()
            .passed());
        let r = separation_check(FunctionId::phi(), 100).unwrap();
        assert!(!r.passed());
        assert_eq!(r.counterexample.unwrap().position, 2);
    }

    #[test]
    fn partitions() {
        let r = partition_map(&["odds".parse().unwrap(), "evens".parse().unwrap()], 10).unwrap();
        assert_eq!(
            r.components,
            vec![vec![1, 3, 5, 7, 9], vec![2, 4, 6, 8, 10]]
        );
        assert_eq!(r.successor[0], Some(3));
        assert_eq!(r.successor[8], None);
        assert_eq!(
            partition_map(&[BlockDescriptor::All], 10)
                .unwrap()
                .components
                .len(),
            1
        );
        let r = partition_map(&["0mod3".parse().unwrap(), BlockDescriptor::Rest], 12).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!(r.refines_partition);
        assert!(partition_map(&["odds".parse().unwrap()], 10).is_err());
        assert!(partition_map(&[BlockDescriptor::All, "odds".parse().unwrap()], 10).is_err());
    }

    #[test]
    fn window_components() {
        let r = components(FunctionId::phi(), 100).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(r.boundary.is_empty());
        let r = components(FunctionId::psi(), 20).unwrap();
        assert!(r.boundary.contains(&20));
    }
}
