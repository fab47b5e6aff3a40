//! Smallest-prime-factor sieve for bulk factorization, and the growable
//! table of primes behind `nth_prime` / `prime_index`.

use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Default sieve bound for bulk sweeps.
pub const DEFAULT_SIEVE_BOUND: u32 = 10_000_000;

/// Default budget for `nth_prime`: the 10^7-th prime.
pub const DEFAULT_PRIME_INDEX_BUDGET: u64 = 10_000_000;

/// Smallest prime factor of every integer in `0..=bound`.
///
/// Built once by a linear sieve, then read-only.
#[derive(Debug)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(bound: u32) -> Self {
        let n = bound.max(2) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    }

    /// A process-wide sieve covering at least `bound`. Rebuilt (larger) only
    /// when a caller asks for more than the cached one covers.
    pub fn shared(bound: u32) -> Arc<Sieve> {
        static SHARED: OnceLock<RwLock<Option<Arc<Sieve>>>> = OnceLock::new();
        let cell = SHARED.get_or_init(|| RwLock::new(None));
        if let Some(s) = cell.read().expect("sieve lock").as_ref() {
            if s.bound() >= bound {
                return Arc::clone(s);
            }
        }
        let mut guard = cell.write().expect("sieve lock");
        if let Some(s) = guard.as_ref() {
            if s.bound() >= bound {
                return Arc::clone(s);
            }
        }
        let sieve = Arc::new(Sieve::new(bound));
        *guard = Some(Arc::clone(&sieve));
        sieve
    }

    /// The cached shared sieve, if one covering `n` has already been built.
    pub fn shared_covering(n: u128) -> Option<Arc<Sieve>> {
        if n > u32::MAX as u128 {
            return None;
        }
        let s = Sieve::shared(0);
        (s.bound() as u128 >= n).then_some(s)
    }

    pub fn bound(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.spf[n as usize] == n
    }

    pub fn smallest_prime_factor(&self, n: u32) -> u32 {
        self.spf[n as usize]
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Number of primes `<= n`.
    pub fn prime_count(&self, n: u32) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    /// Writes the factorization of `n` (`1 <= n <= bound`) into `out`.
    pub fn factor_into(&self, mut n: u32, out: &mut Vec<(u64, u32)>) {
        out.clear();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
    }

    pub fn factor(&self, n: u32) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        self.factor_into(n, &mut out);
        out
    }
}

struct PrimeTable {
    primes: Vec<u32>,
    sieved_to: u64,
}

const SEGMENT: u64 = 1 << 20;

impl PrimeTable {
    fn new() -> Self {
        PrimeTable {
            primes: vec![2],
            sieved_to: 2,
        }
    }

    /// Sieves the next segment `(sieved_to, sieved_to + SEGMENT]`.
    fn extend_segment(&mut self) {
        let lo = self.sieved_to + 1;
        let hi = self.sieved_to + SEGMENT;
        let root = (hi as f64).sqrt() as u64 + 1;
        let base = Sieve::new(root as u32);
        let mut composite = vec![false; (hi - lo + 1) as usize];
        for &p in base.primes() {
            let p = p as u64;
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                self.primes.push((lo + i as u64) as u32);
            }
        }
        self.sieved_to = hi;
    }
}

fn table() -> &'static RwLock<PrimeTable> {
    static TABLE: OnceLock<RwLock<PrimeTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(PrimeTable::new()))
}

fn ensure_count(count: u64) {
    if table().read().expect("prime table lock").primes.len() as u64 >= count {
        return;
    }
    let mut t = table().write().expect("prime table lock");
    while (t.primes.len() as u64) < count {
        t.extend_segment();
    }
}

fn ensure_value(v: u64) {
    if table().read().expect("prime table lock").sieved_to >= v {
        return;
    }
    let mut t = table().write().expect("prime table lock");
    while t.sieved_to < v {
        t.extend_segment();
    }
}

/// The `i`-th prime, `q_1 = 2`, within the default index budget.
pub fn nth_prime(i: u64) -> Result<u64> {
    nth_prime_with_budget(i, DEFAULT_PRIME_INDEX_BUDGET)
}

pub fn nth_prime_with_budget(i: u64, budget: u64) -> Result<u64> {
    if i == 0 {
        return Err(Error::InvalidArgument("prime indices start at 1".into()));
    }
    if i > budget {
        return Err(Error::PrimeBudget {
            index: i.to_string(),
            budget,
        });
    }
    ensure_count(i);
    Ok(table().read().expect("prime table lock").primes[(i - 1) as usize] as u64)
}

/// Index of the prime `p` in the sequence 2, 3, 5, ... (so `prime_index(2) == 1`).
pub fn prime_index(p: u128) -> Result<u64> {
    prime_index_with_budget(p, DEFAULT_PRIME_INDEX_BUDGET)
}

pub fn prime_index_with_budget(p: u128, budget: u64) -> Result<u64> {
    if !super::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let over = || Error::PrimeBudget {
        index: format!("index of {p}"),
        budget,
    };
    if p > prime_upper_bound(budget) as u128 {
        return Err(over());
    }
    ensure_value(p as u64);
    let t = table().read().expect("prime table lock");
    let index = t.primes.partition_point(|&q| (q as u128) < p) as u64 + 1;
    if index > budget {
        return Err(over());
    }
    Ok(index)
}

/// Rosser-Schoenfeld style upper bound for the `n`-th prime.
fn prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64
}

/// Whether `nth_prime(i)` is within the default budget.
pub fn index_in_budget(i: u64) -> bool {
    (1..=DEFAULT_PRIME_INDEX_BUDGET).contains(&i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_factors_match_trial_division() {
        let s = Sieve::new(10_000);
        assert_eq!(s.factor(96), vec![(2, 5), (3, 1)]);
        assert_eq!(s.factor(6561), vec![(3, 8)]);
        assert!(s.factor(1).is_empty());
        for n in 2..=10_000u32 {
            let f = s.factor(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n as u64);
        }
        assert_eq!(s.prime_count(10_000), 1229);
    }

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(4).unwrap(), 7);
        assert_eq!(nth_prime(100_000).unwrap(), 1_299_709);
        assert_eq!(prime_index(3).unwrap(), 2);
        assert_eq!(prime_index(1_299_709).unwrap(), 100_000);
    }

    #[test]
    fn nth_prime_errors() {
        assert!(matches!(nth_prime(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            nth_prime(DEFAULT_PRIME_INDEX_BUDGET + 1),
            Err(Error::PrimeBudget { .. })
        ));
        assert!(matches!(prime_index(9), Err(Error::NotPrime(_))));
    }

    #[test]
    fn nth_prime_strictly_increasing_and_inverse() {
        let mut prev = 0;
        for i in 1..=100_000u64 {
            let p = nth_prime(i).unwrap();
            assert!(p > prev);
            prev = p;
        }
        for i in (1..=100_000u64).step_by(997) {
            assert_eq!(prime_index(nth_prime(i).unwrap() as u128).unwrap(), i);
        }
    }
}
