use super::{Family, FunctionId};

/// Checked machine-word evaluation from a factorization `[(p, a)]` (empty for
/// 1). `None` on overflow.
pub fn eval_small(f: FunctionId, factors: &[(u64, u32)]) -> Option<u128> {
    if factors.is_empty() {
        return Some(1);
    }
    let param = f.param().unwrap_or(0);
    match f.family() {
        Family::Jordan | Family::GeneralizedPsi => {
            let plus = f.family() == Family::GeneralizedPsi;
            let mut acc: u128 = 1;
            for &(p, a) in factors {
                let p = p as u128;
                let pk = p.checked_pow(param)?;
                let c = if plus { pk.checked_add(1)? } else { pk - 1 };
                let shift = pk.checked_pow(a - 1)?;
                acc = acc.checked_mul(shift)?.checked_mul(c)?;
            }
            Some(acc)
        }
        Family::UnitaryTotient => {
            let mut acc: u128 = 1;
            for &(p, a) in factors {
                acc = acc.checked_mul((p as u128).checked_pow(a)? - 1)?;
            }
            Some(acc)
        }
        Family::BigOmega => Some(factors.iter().map(|&(_, a)| a as u128).sum()),
        Family::SmallOmega => Some(factors.len() as u128),
        Family::DivisorCount => {
            let mut acc: u128 = 1;
            for &(_, a) in factors {
                // C(a + l - 1, l - 1), built as an exact running product.
                let mut c: u128 = 1;
                for i in 1..param as u128 {
                    c = c.checked_mul(a as u128 + i)? / i;
                }
                acc = acc.checked_mul(c)?;
            }
            Some(acc)
        }
        Family::SigmaPower => {
            let mut acc: u128 = 1;
            for &(p, a) in factors {
                let pl = (p as u128).checked_pow(param)?;
                let mut term: u128 = 1;
                let mut pw: u128 = 1;
                for _ in 0..a {
                    pw = pw.checked_mul(pl)?;
                    term = term.checked_add(pw)?;
                }
                acc = acc.checked_mul(term)?;
            }
            Some(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_path_examples() {
        assert_eq!(eval_small(FunctionId::phi(), &[(2, 1), (3, 2)]), Some(6));
        assert_eq!(eval_small(FunctionId::psi(), &[(2, 1), (3, 1)]), Some(12));
        assert_eq!(
            eval_small(FunctionId::divisor_count(3).unwrap(), &[(2, 2), (3, 1)]),
            Some(18)
        );
        assert_eq!(eval_small(FunctionId::big_omega(), &[]), Some(1));
        assert_eq!(
            eval_small(FunctionId::sigma(2).unwrap(), &[(2, 1), (3, 1)]),
            Some(50)
        );
        assert_eq!(
            eval_small(FunctionId::jordan(3).unwrap(), &[(2, 200)]),
            None
        );
    }
}
