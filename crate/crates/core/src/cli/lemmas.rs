//! `verify-lemma` ids and their default parameters.

use crate::arithfun::FunctionId;
use crate::config::Config;
use crate::dynamics::{
    monotone_a_zero_check, monotone_o_zero_check, strict_o_positive_check, verify_disjoint_with,
    verify_generic, FamilyScheme, FamilySpec, GenericFamilySpec,
};
use crate::error::{Error, Result};
use crate::preimage::{nonfinite_fibre_check, phi_finite_fibre_check};
use crate::report::VerificationReport;
use crate::topology::{
    contains_one_forward, partition_check, separation_check, tau_subset_check, taubar_subset_check,
    BlockDescriptor,
};

pub const LEMMA_IDS: [&str; 17] = [
    "phi-antiorbit",
    "d-antiorbit",
    "omega-antiorbit",
    "smallomega-antiorbit",
    "psi-orbit",
    "j2-orbit",
    "generic-note",
    "monotone-o-zero",
    "monotone-a-zero",
    "strict-o-positive",
    "phi-finite-fibre",
    "nonfinite-fibre",
    "tau-subset",
    "taubar-subset",
    "connected-forward",
    "separation",
    "partition-example",
];

/// One-line description per id, for `verify-lemma --list`.
pub fn describe(id: &str) -> &'static str {
    match id {
        "phi-antiorbit" => "disjoint phi anti-orbits 2^k*3^n",
        "d-antiorbit" => "disjoint d anti-orbits x -> p^(x-1)",
        "omega-antiorbit" => "disjoint Omega anti-orbits x -> p^x",
        "smallomega-antiorbit" => "disjoint omega anti-orbits through prime intervals",
        "psi-orbit" => "disjoint psi orbits 3^k*2^n",
        "j2-orbit" => "disjoint J2 orbits",
        "generic-note" => "exponent-vector model of the psi or J2 orbits",
        "monotone-o-zero" => "f(n) <= n implies no infinite orbit",
        "monotone-a-zero" => "f(n) >= n implies no infinite anti-orbit",
        "strict-o-positive" => "f(1) = 1 and f(n) > n above 1 implies an infinite orbit",
        "phi-finite-fibre" => "inverse totient sets are finite and bounded",
        "nonfinite-fibre" => "primes witness infinite fibres of omega, Omega and d",
        "tau-subset" => "backward minimal open sets stay below k",
        "taubar-subset" => "forward minimal open sets stay below k",
        "connected-forward" => "f(n) < n above 1: every forward orbit reaches 1",
        "separation" => "f(n) >= n above 1: {1} and its complement separate",
        "partition-example" => "successor-in-block map has one component per block",
        _ => "",
    }
}

/// Lemma parameters; `None` picks the lemma's default.
#[derive(Clone, Debug, Default)]
pub struct LemmaArgs {
    pub function: Option<FunctionId>,
    pub families: Option<u64>,
    pub depth: Option<u64>,
    pub bound: Option<u64>,
    pub blocks: Vec<BlockDescriptor>,
}

fn scheme_of(id: &str) -> Option<(FamilyScheme, u64, u64)> {
    Some(match id {
        "phi-antiorbit" => (FamilyScheme::PhiAnti, 20, 30),
        "d-antiorbit" => (FamilyScheme::DAnti, 5, 5),
        "omega-antiorbit" => (FamilyScheme::OmegaAnti, 5, 5),
        "smallomega-antiorbit" => (FamilyScheme::SmallOmegaAnti, 5, 6),
        "psi-orbit" => (FamilyScheme::PsiOrbit, 20, 30),
        "j2-orbit" => (FamilyScheme::J2Orbit, 20, 30),
        _ => return None,
    })
}

fn pointwise_defaults(id: &str) -> Option<(FunctionId, u64)> {
    Some(match id {
        "monotone-o-zero" => (FunctionId::phi(), 100_000),
        "monotone-a-zero" => (FunctionId::psi(), 100_000),
        "strict-o-positive" => (FunctionId::psi(), 100_000),
        "tau-subset" => (FunctionId::psi(), 10_000),
        "taubar-subset" => (FunctionId::phi(), 10_000),
        "connected-forward" => (FunctionId::phi(), 100_000),
        "separation" => (FunctionId::psi(), 100_000),
        _ => return None,
    })
}

pub fn verify_lemma(
    id: &str,
    args: &LemmaArgs,
    config: &Config,
) -> Result<(VerificationReport, LemmaArgs)> {
    // What actually ran, defaults included.
    let mut resolved = LemmaArgs::default();
    let check_bound = |b: u64| -> Result<u64> {
        if b == 0 || b > config.sieve_bound as u64 {
            return Err(Error::InvalidArgument(format!(
                "bound {b} outside 1..={}",
                config.sieve_bound
            )));
        }
        Ok(b)
    };

    if let Some((scheme, fam, depth)) = scheme_of(id) {
        if let Some(f) = args.function {
            if f != scheme.function() {
                return Err(Error::SchemeMismatch {
                    scheme: scheme.name().into(),
                    function: f.to_string(),
                });
            }
        }
        let families = args.families.unwrap_or(fam);
        let depth = args.depth.unwrap_or(depth);
        resolved.function = Some(scheme.function());
        resolved.families = Some(families);
        resolved.depth = Some(depth);
        let specs = FamilySpec::first(scheme, families);
        return Ok((
            verify_disjoint_with(&specs, depth, &config.depth_caps)?,
            resolved,
        ));
    }

    if let Some((f, bound)) = pointwise_defaults(id) {
        let f = args.function.unwrap_or(f);
        let bound = check_bound(args.bound.unwrap_or(bound))?;
        resolved.function = Some(f);
        resolved.bound = Some(bound);
        let report = match id {
            "monotone-o-zero" => monotone_o_zero_check(f, bound)?,
            "monotone-a-zero" => monotone_a_zero_check(f, bound)?,
            "strict-o-positive" => strict_o_positive_check(f, bound)?,
            "tau-subset" => tau_subset_check(f, bound)?,
            "taubar-subset" => taubar_subset_check(f, bound)?,
            "connected-forward" => contains_one_forward(f, bound)?,
            _ => separation_check(f, bound)?,
        };
        return Ok((report, resolved));
    }

    let report = match id {
        "generic-note" => {
            let f = args.function.unwrap_or(FunctionId::psi());
            let families = args.families.unwrap_or(5);
            let depth = args.depth.unwrap_or(20);
            let spec = if f == FunctionId::psi() {
                GenericFamilySpec::psi_model(families)
            } else if f == FunctionId::jordan(2)? {
                GenericFamilySpec::j2_model(families)
            } else {
                return Err(Error::InvalidArgument(format!(
                    "generic-note has built-in models for psi and J2 only, not {f}"
                )));
            };
            resolved.function = Some(f);
            resolved.families = Some(families);
            resolved.depth = Some(depth);
            verify_generic(&spec, depth)?
        }
        "phi-finite-fibre" => {
            let bound = args.bound.unwrap_or(2000);
            resolved.function = Some(FunctionId::phi());
            resolved.bound = Some(bound);
            phi_finite_fibre_check(bound as u128)?
        }
        "nonfinite-fibre" => {
            let bound = args.bound.unwrap_or(10_000);
            resolved.bound = Some(bound);
            nonfinite_fibre_check(bound)?
        }
        "partition-example" => {
            let bound = check_bound(args.bound.unwrap_or(1000))?;
            let blocks = if args.blocks.is_empty() {
                vec!["odds".parse()?, "evens".parse()?]
            } else {
                args.blocks.clone()
            };
            resolved.bound = Some(bound);
            resolved.blocks = blocks.clone();
            partition_check(&blocks, bound)?
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown lemma id {id:?}; see verify-lemma --list"
            )))
        }
    };
    Ok((report, resolved))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_is_dispatched() {
        let small = LemmaArgs {
            families: Some(2),
            depth: Some(3),
            bound: Some(200),
            ..Default::default()
        };
        for id in LEMMA_IDS {
            assert!(!describe(id).is_empty(), "{id}");
            let (r, _) = verify_lemma(id, &small, &Config::default()).unwrap();
            assert_eq!(r.lemma_id, id);
        }
        assert!(verify_lemma("nope", &small, &Config::default()).is_err());
    }
}
