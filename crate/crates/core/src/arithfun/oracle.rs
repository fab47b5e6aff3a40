//! Definitional evaluation, independent of the closed forms.
//!
//! `J_k` counts `k`-tuples in `1..=n` coprime to `n` as a whole, `d_l` counts
//! ordered factorizations, `sigma_l` sums over divisors, and the remaining
//! functions use their product/sum formulas over a trial-division
//! factorization written here.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Family, FunctionId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleBudget {
    /// Cap on the work of the Jordan tuple count.
    pub jordan_work: u64,
    /// Cap on `n` for the other families.
    pub max_n: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            jordan_work: 100_000_000,
            max_n: 10_000,
        }
    }
}

pub fn eval_oracle(f: FunctionId, n: u64) -> Result<BigUint> {
    eval_oracle_with(f, n, OracleBudget::default())
}

pub fn eval_oracle_with(f: FunctionId, n: u64, budget: OracleBudget) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("naturals start at 1".into()));
    }
    let over = || Error::OracleBudget {
        function: f.to_string(),
        n,
    };
    if n == 1 {
        return Ok(BigUint::one());
    }
    let param = f.param().unwrap_or(0);
    if f.family() == Family::Jordan {
        let divs = divisors(n);
        let work = (param as u64)
            .saturating_mul(n)
            .saturating_mul(divs.len() as u64);
        if work > budget.jordan_work {
            return Err(over());
        }
        return Ok(coprime_tuples(n, param, &divs));
    }
    if n > budget.max_n {
        return Err(over());
    }
    let out = match f.family() {
        Family::Jordan => unreachable!(),
        Family::DivisorCount => {
            let mut memo = HashMap::new();
            ordered_factorizations(n, param, &mut memo)
        }
        Family::SigmaPower => (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| BigUint::from(d).pow(param))
            .sum(),
        Family::GeneralizedPsi => {
            // n^k prod (1 + 1/p^k) as an exact rational.
            let mut num = BigUint::from(n).pow(param);
            let mut den = BigUint::one();
            for (p, _) in trial_factor(n) {
                let pk = BigUint::from(p).pow(param);
                num *= &pk + BigUint::one();
                den *= pk;
            }
            let (q, r) = num.div_rem(&den);
            debug_assert!(r.is_zero());
            q
        }
        Family::UnitaryTotient => trial_factor(n)
            .into_iter()
            .map(|(p, a)| BigUint::from(p).pow(a) - BigUint::one())
            .product(),
        Family::BigOmega => trial_factor(n).iter().map(|&(_, a)| BigUint::from(a)).sum(),
        Family::SmallOmega => BigUint::from(trial_factor(n).len()),
    };
    Ok(out)
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut a = 0;
        while n.is_multiple_of(p) {
            n /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `#{(s_1..s_k) in [1,n]^k : gcd(s_1,..,s_k,n) = 1}`, by dynamic programming
/// over the running gcd (always a divisor of `n`).
fn coprime_tuples(n: u64, k: u32, divs: &[u64]) -> BigUint {
    let index: HashMap<u64, usize> = divs.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    // step[g][s-1] = index of gcd(g, s)
    let step: Vec<Vec<usize>> = divs
        .iter()
        .map(|&g| (1..=n).map(|s| index[&g.gcd(&s)]).collect())
        .collect();
    // ways[g]: completions of the remaining picks ending at gcd 1.
    let mut ways: Vec<BigUint> = divs
        .iter()
        .map(|&g| {
            if g == 1 {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        })
        .collect();
    for _ in 0..k {
        ways = step
            .iter()
            .map(|row| row.iter().map(|&j| &ways[j]).sum())
            .collect();
    }
    ways[index[&n]].clone()
}

fn ordered_factorizations(n: u64, l: u32, memo: &mut HashMap<(u64, u32), BigUint>) -> BigUint {
    if l == 1 {
        return BigUint::one();
    }
    if let Some(v) = memo.get(&(n, l)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for s in divisors(n) {
        total += ordered_factorizations(n / s, l - 1, memo);
    }
    memo.insert((n, l), total.clone());
    total
}
