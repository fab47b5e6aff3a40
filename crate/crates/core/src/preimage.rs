//! Fibres `f^{-1}(m)`: complete enumeration where the fibre is provably
//! finite and reachable, bounded search otherwise, and explicit witnesses for
//! the functions whose fibres are infinite.

use serde::{Serialize, Serializer};

use num_bigint::BigUint;

use crate::arithfun::{eval_small, first_violation, value_table, Family, FunctionId};
use crate::error::{Error, Result};
use crate::factorint::{
    factor_u128, is_prime, nth_prime, FactoredNatural, Natural, Sieve, DEFAULT_BIT_BUDGET,
};
use crate::report::{Counterexample, VerificationReport};

/// Default cap on `m` for [`inverse_phi`].
pub const DEFAULT_INVERSE_PHI_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    /// Only `1..=bound` was searched.
    BoundedSearch(u128),
}

impl Serialize for Completeness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Completeness::Complete => s.serialize_str("COMPLETE"),
            Completeness::BoundedSearch(b) => s.collect_str(&format_args!("BOUNDED_SEARCH({b})")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreimageResult {
    pub function: FunctionId,
    pub target: u128,
    pub members: Vec<u128>,
    pub completeness: Completeness,
}

impl PreimageResult {
    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Complete
    }
}

fn sweep_bound(m: u128) -> Result<u64> {
    if m > u32::MAX as u128 - 1 {
        return Err(Error::InvalidArgument(format!(
            "{m} exceeds the sweep range"
        )));
    }
    Ok(m as u64)
}

/// Checks `f(n) >= n` on `1..=bound`.
pub fn verify_expansive(f: FunctionId, bound: u64) -> Result<()> {
    match first_violation(f, 1, bound, |n, v| v >= n as u128)? {
        None => Ok(()),
        Some((n, _)) => Err(Error::NotExpansive {
            function: f.to_string(),
            bound: bound as u128,
            witness: n as u128,
        }),
    }
}

/// `f^{-1}(m)` for `f` verified expansive on `1..=m`, so the fibre lies in
/// `1..=m` and a scan is complete.
pub fn preimage_expansive(f: FunctionId, m: u128) -> Result<PreimageResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    let bound = sweep_bound(m)?;
    verify_expansive(f, bound)?;
    let table = value_table(f, bound)?;
    let members = (1..=bound as usize)
        .filter(|&n| table[n] == m)
        .map(|n| n as u128)
        .collect();
    Ok(PreimageResult {
        function: f,
        target: m,
        members,
        completeness: Completeness::Complete,
    })
}

/// `{x <= bound : f(x) = m}`, with no completeness claim.
pub fn preimage_bounded(f: FunctionId, m: u128, bound: u64) -> Result<PreimageResult> {
    let table = value_table(f, bound)?;
    let members = (1..=bound as usize)
        .filter(|&n| table[n] == m)
        .map(|n| n as u128)
        .collect();
    Ok(PreimageResult {
        function: f,
        target: m,
        members,
        completeness: Completeness::BoundedSearch(bound as u128),
    })
}

/// The containment bound `prod_{p <= m+1} p^(floor(log2 m) + 1)` for
/// `phi^{-1}(m)`.
pub fn phi_bound(m: u128) -> Result<FactoredNatural> {
    if m == 0 {
        return Err(Error::InvalidArgument("phi_bound needs m >= 1".into()));
    }
    let top = sweep_bound(m + 1)?;
    let e = (127 - m.leading_zeros()) as u64 + 1;
    let sieve = Sieve::shared(top as u32);
    let factors: Vec<(u128, Natural)> = sieve.primes()[..sieve.prime_count(top as u32)]
        .iter()
        .map(|&p| (p as u128, Natural::from(e)))
        .collect();
    FactoredNatural::from_prime_powers(factors)
}

fn divisors(m: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for (p, e) in factor_u128(m) {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Complete `phi^{-1}(m)`.
///
/// Candidate primes are those with `p - 1 | m`; a depth-first search over
/// them in increasing order picks each prime at most once with some exponent
/// `a`, dividing the remaining target by `(p - 1) p^(a-1)`.
pub fn inverse_phi(m: u128) -> Result<PreimageResult> {
    inverse_phi_with_budget(m, DEFAULT_INVERSE_PHI_BUDGET)
}

pub fn inverse_phi_with_budget(m: u128, budget: u128) -> Result<PreimageResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    if m > budget {
        return Err(Error::InversePhiBudget { m, budget });
    }
    let primes: Vec<u128> = divisors(m)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&p| is_prime(p))
        .collect();
    let mut members = Vec::new();
    search(&primes, 0, m, 1, &mut members);
    members.sort_unstable();
    Ok(PreimageResult {
        function: FunctionId::phi(),
        target: m,
        members,
        completeness: Completeness::Complete,
    })
}

fn search(primes: &[u128], from: usize, rest: u128, acc: u128, out: &mut Vec<u128>) {
    if rest == 1 {
        out.push(acc);
    }
    for (i, &p) in primes.iter().enumerate().skip(from) {
        if !rest.is_multiple_of(p - 1) {
            continue;
        }
        let mut r = rest / (p - 1);
        let mut pa = p;
        loop {
            search(primes, i + 1, r, acc * pa, out);
            if !r.is_multiple_of(p) {
                break;
            }
            r /= p;
            pa *= p;
        }
    }
}

/// The first `count` primes, all in `f^{-1}(target)` for `(Omega, 1)`,
/// `(omega, 1)` and `(d_l, l)`.
pub fn nonfinite_fibre_witness(f: FunctionId, target: u128, count: u64) -> Result<Vec<u128>> {
    let ok = match f.family() {
        Family::BigOmega | Family::SmallOmega => target == 1,
        Family::DivisorCount => f.param().map(u128::from) == Some(target),
        _ => false,
    };
    if !ok {
        return Err(Error::UnsupportedFibre(format!("{f}^-1({target})")));
    }
    (1..=count).map(|i| nth_prime(i).map(u128::from)).collect()
}

/// Checks, for every `m <= max_m`, that `inverse_phi(m)` lies inside the
/// containment bound `phi_bound(m)` whenever that bound fits the bit budget.
pub fn phi_finite_fibre_check(max_m: u128) -> Result<VerificationReport> {
    const ID: &str = "phi-finite-fibre";
    let mut compared = 0u64;
    for m in 1..=max_m {
        let fibre = inverse_phi(m)?;
        let Some(bound) = phi_bound(m)?.to_integer(DEFAULT_BIT_BUDGET) else {
            continue;
        };
        compared += 1;
        if let Some(&x) = fibre.members.iter().find(|&&x| BigUint::from(x) > bound) {
            return Ok(VerificationReport::fail(
                ID,
                1,
                max_m as u64,
                Counterexample::witness(m, format!("members of phi^-1({m}) <= {bound}"), x),
            ));
        }
    }
    Ok(VerificationReport::pass(ID, 1, max_m as u64).with_conclusion(format!(
        "phi^-1(m) is finite and inside the containment bound for m <= {max_m} ({compared} bounds compared)"
    )))
}

/// Checks that each of the first `count` primes lies in
/// `omega^-1(1)`, `Omega^-1(1)`, `d^-1(2)` and `d_3^-1(3)`.
pub fn nonfinite_fibre_check(count: u64) -> Result<VerificationReport> {
    const ID: &str = "nonfinite-fibre";
    let checks = [
        (FunctionId::small_omega(), 1u128),
        (FunctionId::big_omega(), 1),
        (FunctionId::d(), 2),
        (FunctionId::divisor_count(3)?, 3),
    ];
    for (f, target) in checks {
        for p in nonfinite_fibre_witness(f, target, count)? {
            let v = eval_small(f, &[(p as u64, 1)]);
            if v != Some(target) {
                return Ok(VerificationReport::fail(
                    ID,
                    checks.len() as u64,
                    count,
                    Counterexample::new(Some(f.to_string()), p as u64, target, format!("{v:?}")),
                ));
            }
        }
    }
    Ok(
        VerificationReport::pass(ID, checks.len() as u64, count).with_conclusion(format!(
            "the first {count} primes lie in omega^-1(1), Omega^-1(1), d^-1(2) and d3^-1(3)"
        )),
    )
}

/// Fibres of an expansive function for every value up to `bound`, built from
/// one sweep. Complete because `f^{-1}(v) <= v`.
#[derive(Clone, Debug)]
pub struct PreimageIndex {
    function: FunctionId,
    offsets: Vec<u32>,
    members: Vec<u32>,
}

impl PreimageIndex {
    pub fn build(f: FunctionId, bound: u64) -> Result<Self> {
        let bound = sweep_bound(bound as u128)?;
        verify_expansive(f, bound)?;
        let table = value_table(f, bound)?;
        let mut counts = vec![0u32; bound as usize + 2];
        for &v in &table[1..] {
            if v <= bound as u128 {
                counts[v as usize + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut members = vec![0u32; offsets[bound as usize + 1] as usize];
        for (n, &v) in table.iter().enumerate().skip(1) {
            if v <= bound as u128 {
                members[fill[v as usize] as usize] = n as u32;
                fill[v as usize] += 1;
            }
        }
        Ok(PreimageIndex {
            function: f,
            offsets,
            members,
        })
    }

    pub fn function(&self) -> FunctionId {
        self.function
    }

    pub fn bound(&self) -> u64 {
        (self.offsets.len() - 2) as u64
    }

    /// The complete fibre of `v`, ascending; `None` when `v` exceeds the bound.
    pub fn fibre(&self, v: u64) -> Option<&[u32]> {
        if v == 0 || v > self.bound() {
            return None;
        }
        let (a, b) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        Some(&self.members[a as usize..b as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansive_examples() {
        // psi(6) = psi(8) = psi(9) = psi(11) = 12
        assert_eq!(
            preimage_expansive(FunctionId::psi(), 12).unwrap().members,
            vec![6, 8, 9, 11]
        );
        assert_eq!(
            preimage_expansive(FunctionId::psi(), 1).unwrap().members,
            vec![1]
        );
        assert!(preimage_expansive(FunctionId::sigma(1).unwrap(), 2)
            .unwrap()
            .members
            .is_empty());
        assert!(matches!(
            preimage_expansive(FunctionId::phi(), 10),
            Err(Error::NotExpansive { witness: 2, .. })
        ));
    }

    #[test]
    fn phi_bound_examples() {
        assert_eq!(phi_bound(1).unwrap().to_u128(), Some(2));
        assert_eq!(phi_bound(2).unwrap().to_u128(), Some(36));
    }

    #[test]
    fn inverse_phi_examples() {
        assert_eq!(inverse_phi(1).unwrap().members, vec![1, 2]);
        assert_eq!(inverse_phi(4).unwrap().members, vec![5, 8, 10, 12]);
        assert!(inverse_phi(3).unwrap().members.is_empty());
        assert_eq!(inverse_phi(2).unwrap().members, vec![3, 4, 6]);
        assert!(matches!(
            inverse_phi(DEFAULT_INVERSE_PHI_BUDGET + 1),
            Err(Error::InversePhiBudget { .. })
        ));
    }

    #[test]
    fn witnesses() {
        assert_eq!(
            nonfinite_fibre_witness(FunctionId::big_omega(), 1, 4).unwrap(),
            vec![2, 3, 5, 7]
        );
        assert_eq!(
            nonfinite_fibre_witness(FunctionId::d(), 2, 3).unwrap(),
            vec![2, 3, 5]
        );
        assert_eq!(
            nonfinite_fibre_witness(FunctionId::small_omega(), 1, 1).unwrap(),
            vec![2]
        );
        assert!(nonfinite_fibre_witness(FunctionId::d(), 3, 1).is_err());
        assert!(nonfinite_fibre_witness(FunctionId::phi(), 1, 1).is_err());
    }

    #[test]
    fn fibre_checks() {
        assert!(phi_finite_fibre_check(50).unwrap().passed());
        assert!(nonfinite_fibre_check(100).unwrap().passed());
    }

    #[test]
    fn index_matches_scan() {
        let idx = PreimageIndex::build(FunctionId::psi(), 200).unwrap();
        for v in 1..=200u64 {
            let scan = preimage_expansive(FunctionId::psi(), v as u128)
                .unwrap()
                .members;
            let got: Vec<u128> = idx.fibre(v).unwrap().iter().map(|&n| n as u128).collect();
            assert_eq!(got, scan);
        }
        assert!(idx.fibre(201).is_none());
    }
}
