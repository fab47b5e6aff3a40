//! Factorization backend and arithmetic over factored naturals.

mod natural;
mod primality;
mod sieve;

pub use natural::{FactoredNatural, Natural, PrimeInterval, EXPAND_LEN, SYMBOLIC_BITS};
pub use primality::{factor_u128, is_prime};
pub use sieve::{
    nth_prime, nth_prime_with_budget, prime_index, prime_index_with_budget, Sieve,
    DEFAULT_PRIME_INDEX_BUDGET, DEFAULT_SIEVE_BOUND,
};

/// Default bit budget for writing factored values out as explicit integers.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

/// Complete factorization of `n >= 1`.
///
/// Uses the shared sieve when one covering `n` has been built, otherwise
/// trial division, Miller-Rabin and Pollard rho.
///
/// # Panics
///
/// Panics on `n == 0`.
pub fn factorize(n: u128) -> FactoredNatural {
    assert!(n >= 1, "factorize is defined for n >= 1");
    if let Some(sieve) = Sieve::shared_covering(n) {
        return FactoredNatural::from_small_factors(&sieve.factor(n as u32));
    }
    FactoredNatural::from_prime_powers(
        factor_u128(n)
            .into_iter()
            .map(|(p, e)| (p, Natural::from(e as u64))),
    )
    .expect("prime powers from a complete factorization are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_one());
        assert_eq!(
            factorize(96),
            FactoredNatural::from_parts(
                vec![(2, Natural::from(5u64)), (3, Natural::from(1u64))],
                vec![]
            )
            .unwrap()
        );
        assert_eq!(
            factorize(6561),
            FactoredNatural::prime_power(3, Natural::from(8u64)).unwrap()
        );
    }

    #[test]
    fn factorize_beyond_u64() {
        let p = (1u128 << 89) - 1;
        let f = factorize(p * 6);
        assert_eq!(f.to_integer(256), Some(BigUint::from(p * 6)));
        assert_eq!(f.explicit().len(), 3);
    }
}
