//! Primality testing and factorization of machine-word integers.
//!
//! Odd moduli are handled in Montgomery form with `R = 2^128`, so the same
//! code path serves every `u128`. Composite splitting uses Brent's variant of
//! Pollard rho after trial division by the primes below 1000.

use std::collections::BTreeMap;

const LOW_MASK: u128 = u64::MAX as u128;

/// Primes below 1000, used for trial division and as a fast primality filter.
pub(crate) const SMALL_PRIMES: [u64; 168] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421,
    431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541, 547,
    557, 563, 569, 571, 577, 587, 593, 599, 601, 607, 613, 617, 619, 631, 641, 643, 647, 653, 659,
    661, 673, 677, 683, 691, 701, 709, 719, 727, 733, 739, 743, 751, 757, 761, 769, 773, 787, 797,
    809, 811, 821, 823, 827, 829, 839, 853, 857, 859, 863, 877, 881, 883, 887, 907, 911, 919, 929,
    937, 941, 947, 953, 967, 971, 977, 983, 991, 997,
];

/// Bases making strong-pseudoprime tests deterministic below 2^64.
const BASES_64: [u128; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// The first 13 primes are a deterministic witness set below 3.3 * 10^24.
/// Above that bound, no composite passing all of them plus the extra bases is
/// known, but the result is a strong probable prime.
const BASES_128: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LOW_MASK);
    let (b1, b0) = (b >> 64, b & LOW_MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LOW_MASK) + (p10 & LOW_MASK);
    let lo = (p00 & LOW_MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= n {
        s.wrapping_sub(n)
    } else {
        s
    }
}

/// Montgomery arithmetic modulo an odd `n`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    n: u128,
    neg_inv: u128,
    r2: u128,
    one: u128,
}

impl Montgomery {
    pub(crate) fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let one = (u128::MAX % n + 1) % n;
        let mut r2 = one;
        for _ in 0..128 {
            r2 = add_mod(r2, r2, n);
        }
        Montgomery {
            n,
            neg_inv: inv.wrapping_neg(),
            r2,
            one,
        }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let (t, o1) = hi.overflowing_add(mh);
        let (t, o2) = t.overflowing_add(carry as u128);
        if o1 || o2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    pub(crate) fn enter(&self, a: u128) -> u128 {
        let (hi, lo) = mul_wide(a % self.n, self.r2);
        self.redc(hi, lo)
    }

    #[cfg(test)]
    pub(crate) fn leave(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    pub(crate) fn add(&self, a: u128, b: u128) -> u128 {
        add_mod(a, b, self.n)
    }

    fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut result = self.one;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }
}

fn strong_probable_prime(mont: &Montgomery, n: u128, base: u128) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let n_minus_1 = n - 1;
    let s = n_minus_1.trailing_zeros();
    let d = n_minus_1 >> s;
    let one = mont.one;
    let minus_one = mont.enter(n_minus_1);
    let mut x = mont.pow(mont.enter(base), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Miller-Rabin primality test, deterministic for every `n < 3.3 * 10^24`.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 1_000_000 {
        return true;
    }
    let mont = Montgomery::new(n);
    if n < (1u128 << 64) {
        BASES_64.iter().all(|&a| strong_probable_prime(&mont, n, a))
    } else {
        BASES_128
            .iter()
            .all(|&a| strong_probable_prime(&mont, n, a))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Finds a nontrivial factor of an odd composite `n` (Brent's cycle finding).
fn pollard_brent(n: u128) -> u128 {
    let mont = Montgomery::new(n);
    let batch = 128u64;
    for c in 1u128.. {
        let c_m = mont.enter(c);
        let step = |x: u128| mont.add(mont.mul(x, x), c_m);
        let mut y = mont.enter(2);
        let mut r = 1u64;
        let mut q = mont.one;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..batch.min(r - k) {
                    y = step(y);
                    let diff = x.abs_diff(y);
                    q = mont.mul(q, diff);
                }
                g = gcd(q, n);
                k += batch;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                let diff = x.abs_diff(ys);
                g = gcd(diff, n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("the constant sweep is unbounded")
}

fn split_into(n: u128, out: &mut BTreeMap<u128, u32>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    if let Some(r) = perfect_square_root(n) {
        split_into(r, out);
        split_into(r, out);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

fn perfect_square_root(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Complete factorization of `n >= 1` as ascending `(prime, exponent)` pairs.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    assert!(n >= 1, "factorization is defined for n >= 1");
    let mut out = BTreeMap::new();
    for &p in SMALL_PRIMES.iter() {
        let p = p as u128;
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.insert(p, e);
        }
    }
    if n > 1 {
        split_into(n, &mut out);
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u128) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn montgomery_matches_naive_product() {
        let n = (1u128 << 127) - 1;
        let mont = Montgomery::new(n);
        let a = 0x1234_5678_9abc_def0_1234_5678_9abc_def0u128 % n;
        let b = 0x0fed_cba9_8765_4321_0fed_cba9_8765_4321u128 % n;
        let got = mont.leave(mont.mul(mont.enter(a), mont.enter(b)));
        let expected = num_bigint::BigUint::from(a) * num_bigint::BigUint::from(b)
            % num_bigint::BigUint::from(n);
        assert_eq!(num_bigint::BigUint::from(got), expected);
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..20_000u128 {
            assert_eq!(is_prime(n), trial_is_prime(n), "n = {n}");
        }
        for n in 1_000_000_000u128..1_000_002_000 {
            assert_eq!(is_prime(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn known_large_primes_and_pseudoprimes() {
        assert!(is_prime((1u128 << 61) - 1));
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 127) - 1));
        // strong pseudoprime to bases 2..=37 is still rejected via larger bases
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(!is_prime(318_665_857_834_031_151_167_461));
        assert!(!is_prime(561));
    }

    #[test]
    fn factors_products_of_large_primes() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(factor_u128(p * q), vec![(q, 1), (p, 1)]);
        assert_eq!(factor_u128(p * p * 12), vec![(2, 2), (3, 1), (p, 2)]);
        let m61 = (1u128 << 61) - 1;
        assert_eq!(factor_u128(m61 * 65_537), vec![(65_537, 1), (m61, 1)]);
    }

    #[test]
    fn small_cases() {
        assert!(factor_u128(1).is_empty());
        assert_eq!(factor_u128(96), vec![(2, 5), (3, 1)]);
        assert_eq!(factor_u128(6561), vec![(3, 8)]);
    }
}
