//! Bulk pointwise sweeps over `1..=bound` on top of the shared sieve.

use rayon::prelude::*;

use super::{eval_small, eval_u128, FunctionId};
use crate::error::{Error, Result};
use crate::factorint::Sieve;
use crate::report::{Counterexample, VerificationReport};

const CHUNK: u64 = 1 << 14;

/// Largest `k` accepted by [`psi_jordan_identity_check`].
pub const MAX_IDENTITY_K: u32 = 3;

/// `f(n)` as a machine word, using `sieve` for the factorization.
pub fn value_at(f: FunctionId, sieve: &Sieve, n: u64, buf: &mut Vec<(u64, u32)>) -> Result<u128> {
    sieve.factor_into(n as u32, buf);
    eval_small(f, buf).ok_or_else(|| Error::ValueTooLarge(format!("{f}({n})")))
}

fn sieve_for(bound: u64) -> Result<std::sync::Arc<Sieve>> {
    let b = u32::try_from(bound)
        .map_err(|_| Error::InvalidArgument(format!("sweep bound {bound} exceeds 2^32")))?;
    Ok(Sieve::shared(b))
}

/// `table[n] = f(n)` for `1 <= n <= bound`; `table[0]` is 0.
pub fn value_table(f: FunctionId, bound: u64) -> Result<Vec<u128>> {
    let sieve = sieve_for(bound)?;
    let mut table = vec![0u128; bound as usize + 1];
    table[1..]
        .par_chunks_mut(CHUNK as usize)
        .enumerate()
        .try_for_each(|(c, chunk)| {
            let mut buf = Vec::new();
            let start = 1 + c as u64 * CHUNK;
            for (i, slot) in chunk.iter_mut().enumerate() {
                *slot = value_at(f, &sieve, start + i as u64, &mut buf)?;
            }
            Ok(())
        })?;
    Ok(table)
}

/// Least `n` in `lo..=hi` with `!holds(n, f(n))`, with the offending value.
pub fn first_violation<P>(f: FunctionId, lo: u64, hi: u64, holds: P) -> Result<Option<(u64, u128)>>
where
    P: Fn(u64, u128) -> bool + Sync,
{
    if lo > hi {
        return Ok(None);
    }
    let sieve = sieve_for(hi)?;
    let chunks = (hi - lo) / CHUNK + 1;
    let found: Vec<Result<Option<(u64, u128)>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut buf = Vec::new();
            let start = lo + c * CHUNK;
            let end = (start + CHUNK - 1).min(hi);
            for n in start..=end {
                let v = value_at(f, &sieve, n, &mut buf)?;
                if !holds(n, v) {
                    return Ok(Some((n, v)));
                }
            }
            Ok(None)
        })
        .collect();
    for r in found {
        if let Some(hit) = r? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

/// Checks `psi_k(n) * J_k(n) = J_2k(n)` for `1 <= n <= n_max`.
pub fn psi_jordan_identity_check(k: u32, n_max: u64) -> Result<VerificationReport> {
    if k == 0 || k > MAX_IDENTITY_K {
        return Err(Error::InvalidArgument(format!(
            "identity check supports 1 <= k <= {MAX_IDENTITY_K} (got {k})"
        )));
    }
    let psi = FunctionId::psi_k(k)?;
    let jk = FunctionId::jordan(k)?;
    let j2k = FunctionId::jordan(2 * k)?;
    let lemma = format!("psi-jordan-identity-k{k}");
    if n_max == 0 {
        return Ok(VerificationReport::pass(lemma, 1, 0));
    }
    let sieve = sieve_for(n_max)?;
    let chunks = (n_max - 1) / CHUNK + 1;
    let found: Vec<Result<Option<Counterexample>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut buf = Vec::new();
            let start = 1 + c * CHUNK;
            let end = (start + CHUNK - 1).min(n_max);
            for n in start..=end {
                sieve.factor_into(n as u32, &mut buf);
                let fast = (|| {
                    let lhs = eval_small(psi, &buf)?.checked_mul(eval_small(jk, &buf)?)?;
                    Some((lhs, eval_small(j2k, &buf)?))
                })();
                let (lhs, rhs) = match fast {
                    Some((l, r)) => (l.to_string(), r.to_string()),
                    None => {
                        let l = eval_u128(psi, n as u128)?.to_natural()?;
                        let j = eval_u128(jk, n as u128)?.to_natural()?;
                        let r = eval_u128(j2k, n as u128)?.to_natural()?;
                        (l.mul(&j)?.to_string(), r.to_string())
                    }
                };
                if lhs != rhs {
                    return Ok(Some(Counterexample::witness(n as u128, rhs, lhs)));
                }
            }
            Ok(None)
        })
        .collect();
    for r in found {
        if let Some(cx) = r? {
            return Ok(VerificationReport::fail(lemma, 1, n_max, cx));
        }
    }
    Ok(VerificationReport::pass(lemma, 1, n_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_small_cases() {
        assert!(psi_jordan_identity_check(2, 6).unwrap().passed());
        assert!(psi_jordan_identity_check(1, 1).unwrap().passed());
        assert!(psi_jordan_identity_check(4, 10).is_err());
    }

    #[test]
    fn table_and_violation() {
        let t = value_table(FunctionId::phi(), 20).unwrap();
        assert_eq!(&t[1..7], &[1, 1, 2, 2, 4, 2]);
        let hit = first_violation(FunctionId::psi(), 1, 1000, |n, v| v <= n as u128).unwrap();
        assert_eq!(hit, Some((2, 3)));
        assert_eq!(
            first_violation(FunctionId::phi(), 1, 100_000, |n, v| v <= n as u128).unwrap(),
            None
        );
    }
}
