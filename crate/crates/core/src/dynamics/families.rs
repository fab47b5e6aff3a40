use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithfun::{eval, FunctionId};
use crate::error::{Error, Result};
use crate::factorint::{nth_prime, FactoredNatural, Natural};
use crate::report::{CertifiedBound, Counterexample, Quantity, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyScheme {
    /// `S_k = {2^k 3^n}`, anti-orbits of `phi`.
    PhiAnti,
    /// `x_1 = p`, `x_{n+1} = p^(x_n - 1)` for odd primes `p`, anti-orbits of `d`.
    DAnti,
    /// `x_1 = p`, `x_{n+1} = p^(x_n)`, anti-orbits of `Omega`.
    OmegaAnti,
    /// `p = q_j`, `x_1 = p`, `x_{n+1} = p q_{j+1} ... q_{j+x_n-1}`, anti-orbits of `omega`.
    SmallOmegaAnti,
    /// `S_k = {3^k 2^n}`, orbits of `psi`.
    PsiOrbit,
    /// `S_k = {2^(2^(n+1) k + 2^n - 1) 3}`, orbits of `J_2`.
    J2Orbit,
}

impl FamilyScheme {
    pub const ALL: [FamilyScheme; 6] = [
        FamilyScheme::PhiAnti,
        FamilyScheme::DAnti,
        FamilyScheme::OmegaAnti,
        FamilyScheme::SmallOmegaAnti,
        FamilyScheme::PsiOrbit,
        FamilyScheme::J2Orbit,
    ];

    /// The function whose (anti-)orbits the scheme builds.
    pub fn function(self) -> FunctionId {
        match self {
            FamilyScheme::PhiAnti => FunctionId::phi(),
            FamilyScheme::DAnti => FunctionId::d(),
            FamilyScheme::OmegaAnti => FunctionId::big_omega(),
            FamilyScheme::SmallOmegaAnti => FunctionId::small_omega(),
            FamilyScheme::PsiOrbit => FunctionId::psi(),
            FamilyScheme::J2Orbit => FunctionId::jordan(2).expect("J_2 is valid"),
        }
    }

    pub fn is_orbit(self) -> bool {
        matches!(self, FamilyScheme::PsiOrbit | FamilyScheme::J2Orbit)
    }

    fn prime_indexed(self) -> bool {
        matches!(
            self,
            FamilyScheme::DAnti | FamilyScheme::OmegaAnti | FamilyScheme::SmallOmegaAnti
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyScheme::PhiAnti => "PHI_ANTI",
            FamilyScheme::DAnti => "D_ANTI",
            FamilyScheme::OmegaAnti => "OMEGA_ANTI",
            FamilyScheme::SmallOmegaAnti => "SMALL_OMEGA_ANTI",
            FamilyScheme::PsiOrbit => "PSI_ORBIT",
            FamilyScheme::J2Orbit => "J2_ORBIT",
        }
    }
}

impl fmt::Display for FamilyScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_uppercase().replace('-', "_");
        FamilyScheme::ALL
            .into_iter()
            .find(|sch| sch.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s}")))
    }
}

impl Serialize for FamilyScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Per-scheme caps on the term index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DepthCaps {
    pub omega_anti: u64,
    pub d_anti: u64,
    pub small_omega_anti: u64,
    pub other: u64,
}

impl Default for DepthCaps {
    fn default() -> Self {
        DepthCaps {
            omega_anti: 5,
            d_anti: 5,
            small_omega_anti: 6,
            other: 10_000,
        }
    }
}

impl DepthCaps {
    pub fn cap(&self, scheme: FamilyScheme) -> u64 {
        match scheme {
            FamilyScheme::OmegaAnti => self.omega_anti,
            FamilyScheme::DAnti => self.d_anti,
            FamilyScheme::SmallOmegaAnti => self.small_omega_anti,
            _ => self.other,
        }
    }
}

/// One family of a scheme: `index` is the `k` of `S_k`, or picks the
/// `index`-th admissible prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilySpec {
    pub scheme: FamilyScheme,
    pub index: u64,
}

impl FamilySpec {
    pub fn new(scheme: FamilyScheme, index: u64) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidArgument("family index starts at 1".into()));
        }
        Ok(FamilySpec { scheme, index })
    }

    /// The first `count` families of `scheme`, in the order of the construction.
    pub fn first(scheme: FamilyScheme, count: u64) -> Vec<FamilySpec> {
        (1..=count)
            .map(|index| FamilySpec { scheme, index })
            .collect()
    }

    /// `(p, j)` with `p = q_j` for prime-indexed schemes.
    pub fn prime(&self) -> Result<Option<(u64, u64)>> {
        if !self.scheme.prime_indexed() {
            return Ok(None);
        }
        let j = match self.scheme {
            FamilyScheme::OmegaAnti => self.index,
            _ => self.index + 1,
        };
        Ok(Some((nth_prime(j)?, j)))
    }

    pub fn label(&self) -> String {
        match self.prime() {
            Ok(Some((p, _))) => format!("{}[p={p}]", self.scheme),
            _ => format!("{}[k={}]", self.scheme, self.index),
        }
    }
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// Terms `1..=depth` of a family.
pub fn family_terms(spec: &FamilySpec, depth: u64) -> Result<Vec<FactoredNatural>> {
    family_terms_with(spec, depth, &DepthCaps::default())
}

pub fn family_terms_with(
    spec: &FamilySpec,
    depth: u64,
    caps: &DepthCaps,
) -> Result<Vec<FactoredNatural>> {
    let cap = caps.cap(spec.scheme);
    if depth > cap {
        return Err(Error::DepthCap {
            scheme: spec.scheme.to_string(),
            depth,
            cap,
        });
    }
    let k = spec.index;
    let mut out = Vec::with_capacity(depth as usize);
    match spec.scheme {
        FamilyScheme::PhiAnti | FamilyScheme::PsiOrbit => {
            let (fixed, moving) = if spec.scheme == FamilyScheme::PhiAnti {
                (2, 3)
            } else {
                (3, 2)
            };
            for n in 1..=depth {
                out.push(FactoredNatural::from_prime_powers([
                    (fixed, Natural::from(k)),
                    (moving, Natural::from(n)),
                ])?);
            }
        }
        FamilyScheme::J2Orbit => {
            for n in 1..=depth {
                let e = pow2(n + 1) * BigUint::from(k) + pow2(n) - BigUint::one();
                out.push(FactoredNatural::from_prime_powers([
                    (2, Natural::Exact(e)),
                    (3, Natural::one()),
                ])?);
            }
        }
        FamilyScheme::DAnti | FamilyScheme::OmegaAnti | FamilyScheme::SmallOmegaAnti => {
            let (p, j) = spec.prime()?.expect("prime-indexed scheme");
            let p128 = p as u128;
            let mut x = FactoredNatural::prime_power(p128, Natural::one())?;
            for n in 1..=depth {
                if n > 1 {
                    let v = Natural::of(&x)?;
                    x = match spec.scheme {
                        FamilyScheme::DAnti => FactoredNatural::prime_power(p128, v.sub_u64(1)?)?,
                        FamilyScheme::OmegaAnti => FactoredNatural::prime_power(p128, v)?,
                        _ => {
                            let hi = v.add_u64(j - 1)?;
                            FactoredNatural::prime_power(p128, Natural::one())?
                                .multiply(&FactoredNatural::interval(j + 1, hi)?)?
                        }
                    };
                }
                out.push(x.clone());
            }
        }
    }
    Ok(out)
}

/// The `n`-th term of a family.
pub fn family_term(spec: &FamilySpec, n: u64) -> Result<FactoredNatural> {
    if n == 0 {
        return Err(Error::InvalidArgument("terms are indexed from 1".into()));
    }
    Ok(family_terms(spec, n)?.pop().expect("n >= 1 terms"))
}

fn lemma_id(scheme: FamilyScheme) -> &'static str {
    match scheme {
        FamilyScheme::PhiAnti => "phi-antiorbit",
        FamilyScheme::DAnti => "d-antiorbit",
        FamilyScheme::OmegaAnti => "omega-antiorbit",
        FamilyScheme::SmallOmegaAnti => "smallomega-antiorbit",
        FamilyScheme::PsiOrbit => "psi-orbit",
        FamilyScheme::J2Orbit => "j2-orbit",
    }
}

fn check_match(spec: &FamilySpec, f: FunctionId, orbit: bool) -> Result<()> {
    if spec.scheme.is_orbit() != orbit || spec.scheme.function() != f {
        return Err(Error::SchemeMismatch {
            scheme: spec.scheme.to_string(),
            function: f.to_string(),
        });
    }
    Ok(())
}

/// First pair of equal terms in one sequence.
fn first_repeat(terms: &[FactoredNatural]) -> Result<Option<(usize, usize)>> {
    for j in 0..terms.len() {
        for i in 0..j {
            if terms[i].equals(&terms[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn verify_chain(
    spec: &FamilySpec,
    f: FunctionId,
    depth: u64,
    orbit: bool,
    terms: &[FactoredNatural],
) -> Result<VerificationReport> {
    let id = lemma_id(spec.scheme);
    let label = spec.label();
    for n in 1..terms.len() {
        let (arg, expected) = if orbit {
            (&terms[n - 1], &terms[n])
        } else {
            (&terms[n], &terms[n - 1])
        };
        let got = eval(f, arg)?;
        if !got.equals(expected)? {
            return Ok(VerificationReport::fail(
                id,
                1,
                depth,
                Counterexample::new(Some(label), n as u64, expected, got),
            ));
        }
    }
    if let Some((i, j)) = first_repeat(terms)? {
        return Ok(VerificationReport::fail(
            id,
            1,
            depth,
            Counterexample::new(
                Some(label),
                j as u64 + 1,
                format!("a term distinct from position {}", i + 1),
                &terms[j],
            ),
        ));
    }
    Ok(VerificationReport::pass(id, 1, depth))
}

/// Checks `f(term(n+1)) = term(n)` for `1 <= n < depth` and that the terms
/// are pairwise distinct.
pub fn verify_antiorbit(
    spec: &FamilySpec,
    f: FunctionId,
    depth: u64,
) -> Result<VerificationReport> {
    check_match(spec, f, false)?;
    verify_chain(spec, f, depth, false, &family_terms(spec, depth)?)
}

/// Checks `f(term(n)) = term(n+1)` for `1 <= n < depth` and that the terms
/// are pairwise distinct.
pub fn verify_orbit(spec: &FamilySpec, f: FunctionId, depth: u64) -> Result<VerificationReport> {
    check_match(spec, f, true)?;
    verify_chain(spec, f, depth, true, &family_terms(spec, depth)?)
}

/// Checks the recurrence of every family and pairwise disjointness of their
/// depth-prefixes. On success certifies `o(f) >= #specs` or `a(f) >= #specs`
/// at that depth.
pub fn verify_disjoint(specs: &[FamilySpec], depth: u64) -> Result<VerificationReport> {
    verify_disjoint_with(specs, depth, &DepthCaps::default())
}

pub fn verify_disjoint_with(
    specs: &[FamilySpec],
    depth: u64,
    caps: &DepthCaps,
) -> Result<VerificationReport> {
    let Some(first) = specs.first() else {
        return Err(Error::InvalidArgument("no families given".into()));
    };
    let scheme = first.scheme;
    if let Some(other) = specs.iter().find(|s| s.scheme != scheme) {
        return Err(Error::MixedSchemes(
            scheme.to_string(),
            other.scheme.to_string(),
        ));
    }
    let f = scheme.function();
    let orbit = scheme.is_orbit();
    let id = lemma_id(scheme);
    let families = specs.len() as u64;

    let built: Vec<Result<(Vec<FactoredNatural>, VerificationReport)>> = specs
        .par_iter()
        .map(|spec| {
            let terms = family_terms_with(spec, depth, caps)?;
            let report = verify_chain(spec, f, depth, orbit, &terms)?;
            Ok((terms, report))
        })
        .collect();
    let mut all = Vec::with_capacity(specs.len());
    for r in built {
        let (terms, report) = r?;
        if !report.passed() {
            let mut report = report;
            report.families_checked = families;
            return Ok(report);
        }
        all.push(terms);
    }

    for b in 0..all.len() {
        for a in 0..b {
            for (j, tb) in all[b].iter().enumerate() {
                for ta in &all[a] {
                    if ta.equals(tb)? {
                        let label = format!("{} & {}", specs[a].label(), specs[b].label());
                        return Ok(VerificationReport::fail(
                            id,
                            families,
                            depth,
                            Counterexample::new(Some(label), j as u64 + 1, "disjoint prefixes", tb),
                        ));
                    }
                }
            }
        }
    }
    let quantity = if orbit {
        Quantity::OrbitNumber
    } else {
        Quantity::AntiOrbitNumber
    };
    let bound = CertifiedBound {
        quantity,
        function: f,
        families,
        depth,
    };
    let conclusion = bound.to_string();
    Ok(VerificationReport::pass(id, families, depth)
        .with_bound(bound)
        .with_conclusion(conclusion))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(scheme: FamilyScheme, index: u64, n: u64) -> FactoredNatural {
        family_term(&FamilySpec::new(scheme, index).unwrap(), n).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(term(FamilyScheme::PhiAnti, 1, 2).to_u128(), Some(18));
        assert_eq!(term(FamilyScheme::DAnti, 1, 3).to_u128(), Some(6561));
        assert_eq!(term(FamilyScheme::PsiOrbit, 1, 3).to_u128(), Some(24));
        assert_eq!(term(FamilyScheme::J2Orbit, 1, 1).to_u128(), Some(96));
        let w = term(FamilyScheme::SmallOmegaAnti, 1, 2);
        assert_eq!(w.to_u128(), Some(105));
        assert_eq!(w, "3*q[3..4]".parse().unwrap());
    }

    #[test]
    fn depth_caps() {
        let spec = FamilySpec::new(FamilyScheme::OmegaAnti, 1).unwrap();
        assert!(family_terms(&spec, 5).is_ok());
        assert!(matches!(
            family_terms(&spec, 6),
            Err(Error::DepthCap { cap: 5, .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let phi1 = FamilySpec::new(FamilyScheme::PhiAnti, 1).unwrap();
        assert!(verify_antiorbit(&phi1, FunctionId::phi(), 4)
            .unwrap()
            .passed());
        let om = FamilySpec::new(FamilyScheme::OmegaAnti, 1).unwrap();
        assert!(verify_antiorbit(&om, FunctionId::big_omega(), 5)
            .unwrap()
            .passed());
        assert!(matches!(
            verify_antiorbit(&phi1, FunctionId::psi(), 3),
            Err(Error::SchemeMismatch { .. })
        ));
        let psi1 = FamilySpec::new(FamilyScheme::PsiOrbit, 1).unwrap();
        assert!(verify_orbit(&psi1, FunctionId::psi(), 4).unwrap().passed());
        let j2 = FamilySpec::new(FamilyScheme::J2Orbit, 1).unwrap();
        let terms = family_terms(&j2, 3).unwrap();
        assert_eq!(terms[2].to_string(), "2^23*3");
        assert!(verify_orbit(&j2, FunctionId::jordan(2).unwrap(), 1)
            .unwrap()
            .passed());
    }

    #[test]
    fn capped_schemes_certify() {
        for (scheme, depth) in [
            (FamilyScheme::DAnti, 5),
            (FamilyScheme::OmegaAnti, 5),
            (FamilyScheme::SmallOmegaAnti, 6),
        ] {
            let r = verify_disjoint(&FamilySpec::first(scheme, 5), depth).unwrap();
            assert!(r.passed(), "{scheme}: {r:?}");
        }
    }

    #[test]
    fn disjointness() {
        let r = verify_disjoint(&FamilySpec::first(FamilyScheme::PhiAnti, 20), 30).unwrap();
        assert!(r.passed());
        assert_eq!(
            r.certified_bound.unwrap().to_string(),
            "a(phi) >= 20 certified at depth 30"
        );
        let same = [FamilySpec::new(FamilyScheme::PsiOrbit, 2).unwrap(); 2];
        let r = verify_disjoint(&same, 5).unwrap();
        assert!(!r.passed());
        assert_eq!(r.counterexample.unwrap().position, 1);
        let mixed = [
            FamilySpec::new(FamilyScheme::PsiOrbit, 1).unwrap(),
            FamilySpec::new(FamilyScheme::J2Orbit, 1).unwrap(),
        ];
        assert!(matches!(
            verify_disjoint(&mixed, 3),
            Err(Error::MixedSchemes(..))
        ));
    }
}
