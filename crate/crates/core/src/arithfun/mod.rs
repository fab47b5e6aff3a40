//! The special functions: Jordan totients `J_k` (with `phi = J_1`),
//! generalized Dedekind psi `psi_k`, the unitary totient `phi*`, `Omega`,
//! `omega`, the divisor functions `d_l` and the divisor power sums `sigma_l`.
//!
//! [`eval`] uses closed forms over factored inputs and works on symbolic
//! towers; [`eval_small`] is the checked machine-word path for bulk sweeps;
//! [`oracle`] recomputes everything from the counting definitions.

mod id;
pub mod oracle;
mod small;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

pub use id::{Family, FunctionId};
pub use oracle::{eval_oracle, eval_oracle_with, OracleBudget};
pub use small::eval_small;
pub use sweep::{
    first_violation, psi_jordan_identity_check, value_at, value_table, MAX_IDENTITY_K,
};

use crate::error::{Error, Result};
use crate::factorint::{factor_u128, factorize, FactoredNatural, Natural, DEFAULT_BIT_BUDGET};

/// Result of evaluating a catalogue function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    /// Output of a multiplicative-product family (`J_k`, `psi_k`, `phi*`).
    Factored(FactoredNatural),
    /// Output of a counting or summing family (`Omega`, `omega`, `d_l`, `sigma_l`).
    Count(Natural),
}

impl Value {
    pub fn to_natural(&self) -> Result<Natural> {
        match self {
            Value::Factored(f) => Natural::of(f),
            Value::Count(n) => Ok(n.clone()),
        }
    }

    /// The value as a factored natural, factoring plain counts when needed.
    pub fn into_factored(self) -> Result<FactoredNatural> {
        match self {
            Value::Factored(f) => Ok(f),
            Value::Count(Natural::Exact(v)) => match v.to_u128() {
                Some(0) => Err(Error::InvalidArgument("zero is not a natural".into())),
                Some(n) => Ok(factorize(n)),
                None => Err(Error::ValueTooLarge(format!(
                    "cannot factor a {}-bit value",
                    v.bits()
                ))),
            },
            Value::Count(Natural::Symbolic { base, offset }) if offset == 0.into() => Ok(*base),
            Value::Count(n) => Err(Error::ValueTooLarge(format!("cannot factor {n}"))),
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self {
            Value::Factored(f) => f.to_u128(),
            Value::Count(n) => n.to_u128(),
        }
    }

    /// Whether the value equals the number `term`; undecidable comparisons
    /// are errors.
    pub fn equals(&self, term: &FactoredNatural) -> Result<bool> {
        let undecided = || Error::Undecidable(format!("{self} = {term}"));
        match self {
            Value::Factored(f) => f.value_eq(term).ok_or_else(undecided),
            Value::Count(n) => n.value_eq(&Natural::of(term)?).ok_or_else(undecided),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Factored(v) => write!(f, "{v}"),
            Value::Count(n) => write!(f, "{n}"),
        }
    }
}

fn unit_value(f: FunctionId) -> Value {
    match f.family() {
        Family::Jordan | Family::GeneralizedPsi | Family::UnitaryTotient => {
            Value::Factored(FactoredNatural::one())
        }
        _ => Value::Count(Natural::one()),
    }
}

fn pow_u128(p: u128, e: u64) -> Option<u128> {
    let e = u32::try_from(e).ok()?;
    p.checked_pow(e)
}

/// Accumulates prime powers of a product being built.
#[derive(Default)]
struct Product(BTreeMap<u128, Natural>);

impl Product {
    fn mul_prime_power(&mut self, p: u128, e: Natural) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        match self.0.get_mut(&p) {
            Some(cur) => *cur = cur.add(&e)?,
            None => {
                self.0.insert(p, e);
            }
        }
        Ok(())
    }

    fn mul_integer(&mut self, n: u128) -> Result<()> {
        for (p, e) in factor_u128(n) {
            self.mul_prime_power(p, Natural::from(e as u64))?;
        }
        Ok(())
    }

    fn finish(self) -> Result<FactoredNatural> {
        FactoredNatural::from_prime_powers(self.0)
    }
}

/// `J_k` and `psi_k`: `prod p^(k(a-1)) (p^k -+ 1)`.
fn totient_like(n: &FactoredNatural, k: u32, plus: bool, name: &str) -> Result<Value> {
    let mut out = Product::default();
    for (p, a) in n.explicit() {
        let shift = a.sub_u64(1)?.mul_u64(k as u64)?;
        out.mul_prime_power(*p, shift)?;
        let pk = pow_u128(*p, k as u64)
            .ok_or_else(|| Error::ValueTooLarge(format!("{p}^{k} in {name}")))?;
        let cofactor = if plus {
            pk.checked_add(1)
                .ok_or_else(|| Error::ValueTooLarge(format!("{p}^{k}+1 in {name}")))?
        } else {
            pk - 1
        };
        out.mul_integer(cofactor)?;
    }
    Ok(Value::Factored(out.finish()?))
}

fn binomial(n: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Evaluates `f` at `n` exactly.
///
/// Interval factors are accepted only by `Omega` and `omega`. `d_l` and
/// `sigma_l` fail with `ValueTooLarge` when their value cannot be held.
pub fn eval(f: FunctionId, n: &FactoredNatural) -> Result<Value> {
    eval_with_budget(f, n, DEFAULT_BIT_BUDGET)
}

pub fn eval_with_budget(f: FunctionId, n: &FactoredNatural, bit_budget: u64) -> Result<Value> {
    if n.is_one() {
        return Ok(unit_value(f));
    }
    let family = f.family();
    if n.has_intervals() && !matches!(family, Family::BigOmega | Family::SmallOmega) {
        return Err(Error::IntervalUnsupported(f.to_string()));
    }
    let param = f.param().unwrap_or(0);
    match family {
        Family::Jordan => totient_like(n, param, false, "J"),
        Family::GeneralizedPsi => totient_like(n, param, true, "psi"),
        Family::UnitaryTotient => {
            let mut out = Product::default();
            for (p, a) in n.explicit() {
                let pa = a
                    .to_u64()
                    .and_then(|a| pow_u128(*p, a))
                    .ok_or_else(|| Error::ValueTooLarge(format!("{p}^{a} in phi*")))?;
                out.mul_integer(pa - 1)?;
            }
            Ok(Value::Factored(out.finish()?))
        }
        Family::BigOmega => {
            let mut total = Natural::zero();
            for (_, a) in n.explicit() {
                total = total.add(a)?;
            }
            for iv in n.intervals() {
                total = total.add(&iv.len()?)?;
            }
            Ok(Value::Count(total))
        }
        Family::SmallOmega => {
            let mut total = Natural::from(n.explicit().len() as u64);
            for iv in n.intervals() {
                total = total.add(&iv.len()?)?;
            }
            Ok(Value::Count(total))
        }
        Family::DivisorCount => {
            let mut total = Natural::one();
            for (_, a) in n.explicit() {
                let term = match a {
                    Natural::Exact(a) => {
                        Natural::Exact(binomial(&(a + BigUint::from(param - 1)), param - 1))
                    }
                    sym if param == 2 => sym.add_u64(1)?,
                    _ => {
                        return Err(Error::ValueTooLarge(format!(
                            "d_{param} of a symbolic exponent"
                        )))
                    }
                };
                total = total.mul(&term)?;
            }
            Ok(Value::Count(total))
        }
        Family::SigmaPower => {
            let l = param as u64;
            let mut bits = 0u64;
            for (p, a) in n.explicit() {
                let a = a
                    .to_u64()
                    .ok_or_else(|| Error::ValueTooLarge(format!("sigma_{l} of {n}")))?;
                let pb = 128 - p.leading_zeros() as u64;
                bits = bits.saturating_add(l.saturating_mul(a + 1).saturating_mul(pb));
            }
            if bits > bit_budget {
                return Err(Error::ValueTooLarge(format!(
                    "sigma_{l} of {n} needs about {bits} bits"
                )));
            }
            let mut total = BigUint::one();
            for (p, a) in n.explicit() {
                let p = BigUint::from(*p);
                let a = a.to_u64().expect("checked above") as u32;
                let pl = p.pow(l as u32);
                let num = pl.pow(a + 1) - BigUint::one();
                let den = &pl - BigUint::one();
                total *= num.div_floor(&den);
            }
            Ok(Value::Count(Natural::Exact(total)))
        }
    }
}

/// Evaluates `f` on a machine-word argument.
pub fn eval_u128(f: FunctionId, n: u128) -> Result<Value> {
    if n == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    eval(f, &factorize(n))
}

/// One step of the dynamics `x -> f(x)` on factored naturals.
pub fn apply(f: FunctionId, x: &FactoredNatural) -> Result<FactoredNatural> {
    eval(f, x)?.into_factored()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorint::PrimeInterval;

    fn ev(f: FunctionId, n: u128) -> u128 {
        eval_u128(f, n).unwrap().to_u128().unwrap()
    }

    #[test]
    fn catalogue_examples() {
        assert_eq!(ev(FunctionId::phi(), 18), 6);
        assert_eq!(ev(FunctionId::psi(), 6), 12);
        let j2 = FunctionId::jordan(2).unwrap();
        let v = eval_u128(j2, 96).unwrap();
        assert_eq!(v.to_u128(), Some(6144));
        assert_eq!(v.to_string(), "2^11*3");
        assert_eq!(ev(FunctionId::unitary_totient(), 12), 6);
        assert_eq!(ev(FunctionId::big_omega(), 16), 4);
        assert_eq!(ev(FunctionId::small_omega(), 105), 3);
        assert_eq!(ev(FunctionId::d(), 9), 3);
        assert_eq!(ev(FunctionId::sigma(2).unwrap(), 6), 50);
        assert_eq!(ev(FunctionId::divisor_count(3).unwrap(), 12), 18);
    }

    #[test]
    fn every_function_maps_one_to_one() {
        for f in FunctionId::catalogue(3) {
            assert_eq!(ev(f, 1), 1, "{f}");
        }
    }

    #[test]
    fn intervals_only_for_omegas() {
        let n = FactoredNatural::from_parts(
            vec![(3, Natural::one())],
            vec![PrimeInterval::new(3u32, Natural::from(5000u64)).unwrap()],
        )
        .unwrap();
        assert_eq!(
            eval(FunctionId::small_omega(), &n).unwrap().to_u128(),
            Some(1 + 4998)
        );
        assert_eq!(
            eval(FunctionId::big_omega(), &n).unwrap().to_u128(),
            Some(1 + 4998)
        );
        assert!(matches!(
            eval(FunctionId::phi(), &n),
            Err(Error::IntervalUnsupported(_))
        ));
    }

    #[test]
    fn sigma_respects_budget() {
        let n = FactoredNatural::prime_power(2, Natural::from(1u64 << 30)).unwrap();
        assert!(matches!(
            eval(FunctionId::sigma(1).unwrap(), &n),
            Err(Error::ValueTooLarge(_))
        ));
    }

    #[test]
    fn symbolic_exponents_flow_through_counts() {
        let tower = FactoredNatural::prime_power(3, Natural::from(7_625_597_484_987u64)).unwrap();
        let big = Natural::of(&tower).unwrap();
        let x = FactoredNatural::prime_power(3, big.clone()).unwrap();
        let omega = eval(FunctionId::big_omega(), &x).unwrap();
        assert!(omega.equals(&tower).unwrap());
        let y = FactoredNatural::prime_power(3, big.sub_u64(1).unwrap()).unwrap();
        assert!(eval(FunctionId::d(), &y).unwrap().equals(&tower).unwrap());
        assert!(matches!(
            eval(FunctionId::divisor_count(3).unwrap(), &y),
            Err(Error::ValueTooLarge(_))
        ));
    }
}
