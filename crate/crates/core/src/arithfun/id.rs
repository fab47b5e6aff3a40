use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Jordan,
    GeneralizedPsi,
    UnitaryTotient,
    BigOmega,
    SmallOmega,
    DivisorCount,
    SigmaPower,
}

impl Family {
    pub fn takes_param(self) -> bool {
        matches!(
            self,
            Family::Jordan | Family::GeneralizedPsi | Family::DivisorCount | Family::SigmaPower
        )
    }

    fn min_param(self) -> u32 {
        match self {
            Family::DivisorCount => 2,
            _ => 1,
        }
    }
}

/// One function of the catalogue with its parameter (`k` or `l`).
///
/// Aliases are canonical: `phi` is `J_1`, `psi` is `psi_1`, `d` is `d_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionId {
    family: Family,
    param: u32,
}

impl FunctionId {
    pub fn new(family: Family, param: Option<u32>) -> Result<Self> {
        if !family.takes_param() {
            return match param {
                None => Ok(FunctionId { family, param: 0 }),
                Some(p) => Err(Error::InvalidFunction(format!(
                    "{family:?} takes no parameter (got {p})"
                ))),
            };
        }
        let p =
            param.ok_or_else(|| Error::InvalidFunction(format!("{family:?} needs a parameter")))?;
        if p < family.min_param() {
            return Err(Error::InvalidFunction(format!(
                "{family:?} needs a parameter >= {} (got {p})",
                family.min_param()
            )));
        }
        Ok(FunctionId { family, param: p })
    }

    pub const fn phi() -> Self {
        FunctionId {
            family: Family::Jordan,
            param: 1,
        }
    }

    pub const fn psi() -> Self {
        FunctionId {
            family: Family::GeneralizedPsi,
            param: 1,
        }
    }

    pub const fn d() -> Self {
        FunctionId {
            family: Family::DivisorCount,
            param: 2,
        }
    }

    pub const fn unitary_totient() -> Self {
        FunctionId {
            family: Family::UnitaryTotient,
            param: 0,
        }
    }

    pub const fn big_omega() -> Self {
        FunctionId {
            family: Family::BigOmega,
            param: 0,
        }
    }

    pub const fn small_omega() -> Self {
        FunctionId {
            family: Family::SmallOmega,
            param: 0,
        }
    }

    pub fn jordan(k: u32) -> Result<Self> {
        FunctionId::new(Family::Jordan, Some(k))
    }

    pub fn psi_k(k: u32) -> Result<Self> {
        FunctionId::new(Family::GeneralizedPsi, Some(k))
    }

    pub fn sigma(l: u32) -> Result<Self> {
        FunctionId::new(Family::SigmaPower, Some(l))
    }

    pub fn divisor_count(l: u32) -> Result<Self> {
        FunctionId::new(Family::DivisorCount, Some(l))
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn param(self) -> Option<u32> {
        self.family.takes_param().then_some(self.param)
    }

    /// Every catalogue function with parameters up to `max_param`.
    pub fn catalogue(max_param: u32) -> Vec<FunctionId> {
        let mut out = Vec::new();
        for k in 1..=max_param {
            out.push(FunctionId::jordan(k).unwrap());
        }
        for k in 1..=max_param {
            out.push(FunctionId::psi_k(k).unwrap());
        }
        out.push(FunctionId::unitary_totient());
        out.push(FunctionId::big_omega());
        out.push(FunctionId::small_omega());
        for l in 2..=max_param.max(2) {
            out.push(FunctionId::divisor_count(l).unwrap());
        }
        for l in 1..=max_param {
            out.push(FunctionId::sigma(l).unwrap());
        }
        out
    }

    /// Parses a name, with an optional separate parameter as given by `--k`/`--l`.
    pub fn parse_with_param(name: &str, param: Option<u32>) -> Result<Self> {
        let bare = match name.to_ascii_lowercase().as_str() {
            "phi" | "totient" => Some(Family::Jordan),
            "psi" | "dedekind" => Some(Family::GeneralizedPsi),
            "j" | "jordan" => Some(Family::Jordan),
            "d" | "tau" => Some(Family::DivisorCount),
            "sigma" => Some(Family::SigmaPower),
            _ => None,
        };
        match (bare, param) {
            (Some(family), Some(p)) => FunctionId::new(family, Some(p)),
            (_, None) => name.parse(),
            (None, Some(p)) => {
                let f: FunctionId = name.parse()?;
                if f.param() == Some(p) {
                    Ok(f)
                } else {
                    Err(Error::InvalidFunction(format!(
                        "{name} does not take parameter {p}"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.param) {
            (Family::Jordan, 1) => write!(f, "phi"),
            (Family::Jordan, k) => write!(f, "J{k}"),
            (Family::GeneralizedPsi, 1) => write!(f, "psi"),
            (Family::GeneralizedPsi, k) => write!(f, "psi{k}"),
            (Family::UnitaryTotient, _) => write!(f, "phistar"),
            (Family::BigOmega, _) => write!(f, "Omega"),
            (Family::SmallOmega, _) => write!(f, "omega"),
            (Family::DivisorCount, 2) => write!(f, "d"),
            (Family::DivisorCount, l) => write!(f, "d{l}"),
            (Family::SigmaPower, l) => write!(f, "sigma{l}"),
        }
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFunction(s.to_string());
        match s {
            "Omega" | "bigomega" | "BigOmega" => return Ok(FunctionId::big_omega()),
            "omega" | "smallomega" | "SmallOmega" => return Ok(FunctionId::small_omega()),
            _ => {}
        }
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "phi" | "totient" => return Ok(FunctionId::phi()),
            "psi" | "dedekind" => return Ok(FunctionId::psi()),
            "d" | "tau" => return Ok(FunctionId::d()),
            "sigma" => return FunctionId::sigma(1),
            "phistar" | "phi*" | "unitary" => return Ok(FunctionId::unitary_totient()),
            _ => {}
        }
        let split = lower.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (head, digits) = lower.split_at(split);
        let param: u32 = digits.parse().map_err(|_| bad())?;
        let family = match head.trim_end_matches('_') {
            "j" | "jordan" => Family::Jordan,
            "psi" => Family::GeneralizedPsi,
            "d" => Family::DivisorCount,
            "sigma" => Family::SigmaPower,
            _ => return Err(bad()),
        };
        FunctionId::new(family, Some(param))
    }
}

impl Serialize for FunctionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in FunctionId::catalogue(4) {
            assert_eq!(f.to_string().parse::<FunctionId>().unwrap(), f);
        }
    }

    #[test]
    fn aliases_are_canonical() {
        assert_eq!("J1".parse::<FunctionId>().unwrap(), FunctionId::phi());
        assert_eq!("psi_1".parse::<FunctionId>().unwrap(), FunctionId::psi());
        assert_eq!("d2".parse::<FunctionId>().unwrap(), FunctionId::d());
        assert_eq!(
            FunctionId::parse_with_param("J", Some(2)).unwrap(),
            FunctionId::jordan(2).unwrap()
        );
        assert_eq!(
            FunctionId::parse_with_param("sigma", Some(3))
                .unwrap()
                .to_string(),
            "sigma3"
        );
    }

    #[test]
    fn parameter_ranges() {
        assert!(FunctionId::divisor_count(1).is_err());
        assert!(FunctionId::jordan(0).is_err());
        assert!(FunctionId::new(Family::BigOmega, Some(2)).is_err());
        assert!("J0".parse::<FunctionId>().is_err());
        assert!("zeta".parse::<FunctionId>().is_err());
    }
}
