use serde::Serialize;

use crate::arithfun::FunctionId;
use crate::error::{Error, Result};
use crate::preimage::PreimageIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoreMembership {
    InCore,
    NotInCore,
}

/// Membership of `x` in the surjective core of an expansive `f`.
///
/// For expansive `f` the preimage tree of `x` is finite and lives in
/// `1..=x`; arbitrarily long backward chains exist exactly when the tree
/// contains a cycle, and a cycle of an expansive map is a fixed point.
pub fn surjective_core_membership(f: FunctionId, x: u128) -> Result<CoreMembership> {
    if x == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    let bound = u64::try_from(x).map_err(|_| Error::InvalidArgument(format!("{x} too large")))?;
    let idx = PreimageIndex::build(f, bound)?;
    let mut seen = vec![false; bound as usize + 1];
    let mut stack = vec![bound as u32];
    seen[bound as usize] = true;
    while let Some(y) = stack.pop() {
        let fibre = idx.fibre(y as u64).expect("within bound");
        if fibre.contains(&y) {
            return Ok(CoreMembership::InCore);
        }
        for &z in fibre {
            if !seen[z as usize] {
                seen[z as usize] = true;
                stack.push(z);
            }
        }
    }
    Ok(CoreMembership::NotInCore)
}
