//! Orbit families of a multiplicative `f` with `f(p^n) = p^(g(p,n)) h(p)`,
//! where every `h(p_i)` is supported on a fixed prime set `p_1..p_m`.
//!
//! On `prod p_i^(x_i)` (all `x_i >= 1`) such an `f` acts on exponent vectors by
//! `x_j -> g(p_j, x_j) + sum_i ord_{p_j} h(p_i)`. Each seed vector starts one
//! family; term 1 is the seed itself.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use serde::Serialize;

use crate::arithfun::{eval, FunctionId};
use crate::error::{Error, Result};
use crate::factorint::{is_prime, FactoredNatural, Natural};
use crate::report::{CertifiedBound, Counterexample, Quantity, VerificationReport};

const LEMMA: &str = "generic-note";

/// `g(p, n) = slope * n + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    pub slope: i64,
    pub intercept: i64,
}

impl AffineMap {
    pub fn new(slope: i64, intercept: i64) -> Self {
        AffineMap { slope, intercept }
    }

    fn apply(&self, n: &BigInt) -> BigInt {
        BigInt::from(self.slope) * n + BigInt::from(self.intercept)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericFamilySpec {
    pub function: FunctionId,
    pub primes: Vec<u64>,
    pub exponent_maps: Vec<AffineMap>,
    pub cofactors: Vec<FactoredNatural>,
    /// One exponent vector per family, aligned with `primes`.
    pub seeds: Vec<Vec<u64>>,
    pub validation_depth: u64,
}

impl GenericFamilySpec {
    /// `psi` on `{2, 3}`: `g = n - 1`, `h(2) = 3`, `h(3) = 4`; seed `(1, k)`
    /// starts at `2 * 3^k`.
    pub fn psi_model(families: u64) -> Self {
        GenericFamilySpec {
            function: FunctionId::psi(),
            primes: vec![2, 3],
            exponent_maps: vec![AffineMap::new(1, -1); 2],
            cofactors: vec![
                FactoredNatural::from_small_factors(&[(3, 1)]),
                FactoredNatural::from_small_factors(&[(2, 2)]),
            ],
            seeds: (1..=families).map(|k| vec![1, k]).collect(),
            validation_depth: 50,
        }
    }

    /// `J_2` on `{2, 3}`: `g = 2n - 2`, `h(2) = 3`, `h(3) = 8`; seed
    /// `(4k + 1, 1)` starts at `2^(4k+1) * 3`.
    pub fn j2_model(families: u64) -> Self {
        GenericFamilySpec {
            function: FunctionId::jordan(2).expect("J_2 is valid"),
            primes: vec![2, 3],
            exponent_maps: vec![AffineMap::new(2, -2); 2],
            cofactors: vec![
                FactoredNatural::from_small_factors(&[(3, 1)]),
                FactoredNatural::from_small_factors(&[(2, 3)]),
            ],
            seeds: (1..=families).map(|k| vec![4 * k + 1, 1]).collect(),
            validation_depth: 50,
        }
    }

    /// Checks shapes, cofactor support, and `f(p_i^n) = p_i^(g(p_i,n)) h(p_i)`
    /// for `1 <= n <= validation_depth`.
    pub fn validate(&self) -> Result<()> {
        let m = self.primes.len();
        let bad = |msg: String| Err(Error::InvalidGenericSpec(msg));
        if m == 0 {
            return bad("no primes".into());
        }
        if self.exponent_maps.len() != m || self.cofactors.len() != m {
            return bad("one exponent map and one cofactor per prime".into());
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(p as u128) {
                return bad(format!("{p} is not prime"));
            }
            if self.primes[..i].contains(&p) {
                return bad(format!("prime {p} listed twice"));
            }
        }
        for (i, h) in self.cofactors.iter().enumerate() {
            if h.has_intervals()
                || h.explicit()
                    .iter()
                    .any(|(q, _)| !self.primes.iter().any(|&p| p as u128 == *q))
            {
                return bad(format!(
                    "cofactor h({}) = {h} is not supported on the prime set",
                    self.primes[i]
                ));
            }
        }
        for seed in &self.seeds {
            if seed.len() != m || seed.contains(&0) {
                return bad(format!("seed {seed:?} needs {m} exponents, all >= 1"));
            }
        }
        for (i, &p) in self.primes.iter().enumerate() {
            for n in 1..=self.validation_depth {
                let g = self.exponent_maps[i].apply(&BigInt::from(n));
                if g.is_negative() {
                    return bad(format!("g({p}, {n}) = {g} is negative"));
                }
                let model = FactoredNatural::from_prime_powers([(
                    p as u128,
                    Natural::Exact(g.to_biguint().expect("non-negative")),
                )])?
                .multiply(&self.cofactors[i])?;
                let x = FactoredNatural::prime_power(p as u128, Natural::from(n))?;
                let got = eval(self.function, &x)?;
                if !got.equals(&model)? {
                    return Err(Error::Consistency {
                        prime: p,
                        n,
                        detail: format!("{}({p}^{n}) = {got}, model gives {model}", self.function),
                    });
                }
            }
        }
        Ok(())
    }

    /// `sum_i ord_{p_j} h(p_i)` for each `j`.
    fn shifts(&self) -> Vec<BigInt> {
        self.primes
            .iter()
            .map(|&pj| {
                self.cofactors
                    .iter()
                    .flat_map(|h| h.explicit().iter())
                    .filter(|(q, _)| *q == pj as u128)
                    .map(|(_, e)| BigInt::from(e.exact().cloned().unwrap_or_default()))
                    .sum()
            })
            .collect()
    }

    fn exponent_vectors(&self, family: usize, depth: u64) -> Result<Vec<Vec<BigUint>>> {
        let shifts = self.shifts();
        let mut x: Vec<BigInt> = self.seeds[family]
            .iter()
            .map(|&e| BigInt::from(e))
            .collect();
        let mut out = Vec::with_capacity(depth as usize);
        for i in 1..=depth {
            if i > 1 {
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = self.exponent_maps[j].apply(xj) + &shifts[j];
                }
            }
            if let Some(j) = x.iter().position(|e| e.sign() != num_bigint::Sign::Plus) {
                return Err(Error::InvalidGenericSpec(format!(
                    "exponent of {} drops to {} at term {i} of family {}",
                    self.primes[j],
                    x[j],
                    family + 1
                )));
            }
            out.push(
                x.iter()
                    .map(|e| e.to_biguint().expect("positive"))
                    .collect(),
            );
        }
        Ok(out)
    }

    fn term(&self, v: &[BigUint]) -> Result<FactoredNatural> {
        FactoredNatural::from_prime_powers(
            self.primes
                .iter()
                .zip(v)
                .map(|(&p, e)| (p as u128, Natural::Exact(e.clone()))),
        )
    }
}

fn check_family(
    spec: &GenericFamilySpec,
    family: usize,
    terms: &[FactoredNatural],
    depth: u64,
    families: u64,
) -> Result<Option<VerificationReport>> {
    for i in 1..terms.len() {
        let got = eval(spec.function, &terms[i - 1])?;
        if !got.equals(&terms[i])? {
            return Ok(Some(VerificationReport::fail(
                LEMMA,
                families,
                depth,
                Counterexample::new(Some(format!("S_{}", family + 1)), i as u64, &terms[i], got),
            )));
        }
    }
    Ok(None)
}

/// Injectivity of `(i, j) -> exponent vector` over the window.
fn check_injective(
    vectors: &[Vec<Vec<BigUint>>],
    depth: u64,
    families: u64,
) -> Option<VerificationReport> {
    let mut seen = HashSet::new();
    for (j, fam) in vectors.iter().enumerate() {
        for (i, v) in fam.iter().enumerate() {
            if !seen.insert(v.clone()) {
                let shown: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                return Some(VerificationReport::fail(
                    LEMMA,
                    families,
                    depth,
                    Counterexample::new(
                        Some(format!("S_{}", j + 1)),
                        i as u64 + 1,
                        "an exponent vector not used before",
                        format!("({})", shown.join(", ")),
                    ),
                ));
            }
        }
    }
    None
}

/// Terms `1..=depth` of family `family` (1-based), with a report covering the
/// orbit relation of that family and injectivity across all seeds.
pub fn generic_family_terms(
    spec: &GenericFamilySpec,
    family: u64,
    depth: u64,
) -> Result<(Vec<FactoredNatural>, VerificationReport)> {
    spec.validate()?;
    if family == 0 || family as usize > spec.seeds.len() {
        return Err(Error::InvalidArgument(format!(
            "family {family} out of 1..={}",
            spec.seeds.len()
        )));
    }
    let idx = family as usize - 1;
    let vectors = (0..spec.seeds.len())
        .map(|j| spec.exponent_vectors(j, depth))
        .collect::<Result<Vec<_>>>()?;
    let terms = vectors[idx]
        .iter()
        .map(|v| spec.term(v))
        .collect::<Result<Vec<_>>>()?;
    let families = spec.seeds.len() as u64;
    let report = match check_family(spec, idx, &terms, depth, families)? {
        Some(r) => r,
        None => check_injective(&vectors, depth, families)
            .unwrap_or_else(|| VerificationReport::pass(LEMMA, families, depth)),
    };
    Ok((terms, report))
}

/// Checks every seed's family and the injectivity of the exponent map; on
/// success certifies `o(f) >= #seeds` at the given depth.
pub fn verify_generic(spec: &GenericFamilySpec, depth: u64) -> Result<VerificationReport> {
    spec.validate()?;
    let families = spec.seeds.len() as u64;
    let vectors = (0..spec.seeds.len())
        .map(|j| spec.exponent_vectors(j, depth))
        .collect::<Result<Vec<_>>>()?;
    for (j, fam) in vectors.iter().enumerate() {
        let terms = fam
            .iter()
            .map(|v| spec.term(v))
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = check_family(spec, j, &terms, depth, families)? {
            return Ok(r);
        }
    }
    if let Some(r) = check_injective(&vectors, depth, families) {
        return Ok(r);
    }
    let bound = CertifiedBound {
        quantity: Quantity::OrbitNumber,
        function: spec.function,
        families,
        depth,
    };
    let text = bound.to_string();
    Ok(VerificationReport::pass(LEMMA, families, depth)
        .with_bound(bound)
        .with_conclusion(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_model_terms() {
        let (terms, report) = generic_family_terms(&GenericFamilySpec::psi_model(3), 1, 4).unwrap();
        let vals: Vec<u128> = terms.iter().map(|t| t.to_u128().unwrap()).collect();
        assert_eq!(vals, vec![6, 12, 24, 48]);
        assert!(report.passed());
    }

    #[test]
    fn j2_model_terms() {
        let (terms, report) = generic_family_terms(&GenericFamilySpec::j2_model(2), 1, 3).unwrap();
        assert_eq!(terms[0].to_u128(), Some(96));
        assert_eq!(terms[2].to_string(), "2^23*3");
        assert!(report.passed());
        assert!(verify_generic(&GenericFamilySpec::j2_model(5), 20)
            .unwrap()
            .passed());
    }

    #[test]
    fn rejects_foreign_cofactor() {
        let mut spec = GenericFamilySpec::psi_model(1);
        spec.cofactors[0] = FactoredNatural::from_small_factors(&[(5, 1)]);
        assert!(matches!(spec.validate(), Err(Error::InvalidGenericSpec(_))));
    }

    #[test]
    fn rejects_wrong_model() {
        let mut spec = GenericFamilySpec::psi_model(1);
        spec.cofactors[1] = FactoredNatural::from_small_factors(&[(2, 1)]);
        assert!(matches!(
            spec.validate(),
            Err(Error::Consistency { prime: 3, n: 1, .. })
        ));
    }

    #[test]
    fn duplicate_seeds_break_injectivity() {
        let mut spec = GenericFamilySpec::psi_model(2);
        spec.seeds[1] = vec![2, 1];
        let r = verify_generic(&spec, 3).unwrap();
        assert!(!r.passed());
    }
}
