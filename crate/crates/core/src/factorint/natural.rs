//! Naturals in factored form, including numbers far too large to write out.
//!
//! A [`FactoredNatural`] stores explicit prime powers plus runs of
//! consecutive primes addressed by index (`q_lo * ... * q_hi`). Exponents and
//! interval endpoints are [`Natural`]s, which are either exact big integers or
//! "the value of some `FactoredNatural`, shifted by a small offset". That is
//! enough to hold every tower the anti-orbit constructions produce, e.g.
//! `3^(3^(3^27))`, and to decide equality of such terms exactly.
//!
//! Every value is kept in canonical form, so derived `Eq`/`Hash` are
//! structural. Structural equality is exact whenever no symbolic component is
//! involved; [`FactoredNatural::value_eq`] is the sound three-valued test.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::is_prime;
use super::sieve::{index_in_budget, nth_prime, prime_index};
use crate::error::{Error, Result};

/// Values below `2^SYMBOLIC_BITS` are always held exactly; symbolic values
/// are at least that large. Fixed, so canonical forms never depend on config.
pub const SYMBOLIC_BITS: u64 = 1 << 18;

/// Runs of at most this many consecutive primes are written out explicitly.
pub const EXPAND_LEN: u64 = 1024;

/// Largest interval whose bit length is measured exactly.
const MEASURE_LEN: u64 = 1 << 22;

/// An arbitrary natural number: exact, or `value(base) + offset` where
/// `value(base) >= 2^SYMBOLIC_BITS` and `|offset| < 2^(SYMBOLIC_BITS - 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Natural {
    Exact(BigUint),
    Symbolic {
        base: Box<FactoredNatural>,
        offset: BigInt,
    },
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural::Exact(BigUint::from(v))
    }
}

impl From<u128> for Natural {
    fn from(v: u128) -> Self {
        Natural::Exact(BigUint::from(v))
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural::Exact(v)
    }
}

fn offset_fits(offset: &BigInt) -> bool {
    offset.bits() < SYMBOLIC_BITS - 2
}

impl Natural {
    pub fn zero() -> Self {
        Natural::Exact(BigUint::zero())
    }

    pub fn one() -> Self {
        Natural::Exact(BigUint::one())
    }

    /// The value of `f` as a natural: exact when below `2^SYMBOLIC_BITS`.
    pub fn of(f: &FactoredNatural) -> Result<Natural> {
        let bounds = f.log_bounds()?;
        if bounds.upper < SYMBOLIC_BITS {
            return Ok(Natural::Exact(f.compute_exact()?));
        }
        if bounds.lower >= SYMBOLIC_BITS {
            return Ok(Natural::Symbolic {
                base: Box::new(f.clone()),
                offset: BigInt::zero(),
            });
        }
        let v = f.compute_exact()?;
        if v.bits() <= SYMBOLIC_BITS {
            Ok(Natural::Exact(v))
        } else {
            Ok(Natural::Symbolic {
                base: Box::new(f.clone()),
                offset: BigInt::zero(),
            })
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Natural::Exact(v) => Some(v),
            Natural::Symbolic { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Natural::Exact(_))
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact().and_then(|v| v.to_u64())
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.exact().and_then(|v| v.to_u128())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Natural::Exact(v) if v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Natural::Exact(v) if v.is_one())
    }

    pub fn add_signed(&self, delta: &BigInt) -> Result<Natural> {
        match self {
            Natural::Exact(v) => {
                let r = BigInt::from(v.clone()) + delta;
                match r.to_biguint() {
                    Some(r) => Ok(Natural::Exact(r)),
                    None => Err(Error::InvalidArgument(format!(
                        "natural {self} + ({delta}) is negative"
                    ))),
                }
            }
            Natural::Symbolic { base, offset } => {
                let offset = offset + delta;
                if !offset_fits(&offset) {
                    return Err(Error::ValueTooLarge(
                        "offset of a symbolic natural exceeds its bound".into(),
                    ));
                }
                Ok(Natural::Symbolic {
                    base: base.clone(),
                    offset,
                })
            }
        }
    }

    pub fn add_u64(&self, d: u64) -> Result<Natural> {
        self.add_signed(&BigInt::from(d))
    }

    pub fn sub_u64(&self, d: u64) -> Result<Natural> {
        self.add_signed(&-BigInt::from(d))
    }

    pub fn add(&self, other: &Natural) -> Result<Natural> {
        match (self, other) {
            (Natural::Exact(a), Natural::Exact(b)) => Ok(Natural::Exact(a + b)),
            (Natural::Exact(e), s @ Natural::Symbolic { .. })
            | (s @ Natural::Symbolic { .. }, Natural::Exact(e)) => {
                s.add_signed(&BigInt::from(e.clone()))
            }
            _ => Err(Error::ValueTooLarge("sum of two symbolic naturals".into())),
        }
    }

    pub fn mul(&self, other: &Natural) -> Result<Natural> {
        match (self, other) {
            (Natural::Exact(a), Natural::Exact(b)) => Ok(Natural::Exact(a * b)),
            (Natural::Exact(e), s) | (s, Natural::Exact(e)) if e.is_one() => Ok(s.clone()),
            _ => Err(Error::ValueTooLarge(
                "product involving a symbolic natural".into(),
            )),
        }
    }

    pub fn mul_u64(&self, k: u64) -> Result<Natural> {
        self.mul(&Natural::from(k))
    }

    /// Sound three-valued equality: `None` when it cannot be decided.
    pub fn value_eq(&self, other: &Natural) -> Option<bool> {
        match (self, other) {
            (Natural::Exact(a), Natural::Exact(b)) => Some(a == b),
            (Natural::Exact(e), Natural::Symbolic { .. })
            | (Natural::Symbolic { .. }, Natural::Exact(e)) => {
                (e.bits() < SYMBOLIC_BITS).then_some(false)
            }
            (
                Natural::Symbolic { base: a, offset: c },
                Natural::Symbolic { base: b, offset: d },
            ) => {
                if c == d {
                    a.value_eq(b)
                } else if a.value_eq(b) == Some(true) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Sound numeric comparison: `None` when it cannot be decided.
    pub fn cmp_value(&self, other: &Natural) -> Option<Ordering> {
        match (self, other) {
            (Natural::Exact(a), Natural::Exact(b)) => Some(a.cmp(b)),
            (Natural::Exact(e), Natural::Symbolic { .. }) => {
                (e.bits() < SYMBOLIC_BITS).then_some(Ordering::Less)
            }
            (Natural::Symbolic { .. }, Natural::Exact(e)) => {
                (e.bits() < SYMBOLIC_BITS).then_some(Ordering::Greater)
            }
            (
                Natural::Symbolic { base: a, offset: c },
                Natural::Symbolic { base: b, offset: d },
            ) => (a.value_eq(b) == Some(true)).then(|| c.cmp(d)),
        }
    }

    pub fn cmp_biguint(&self, other: &BigUint) -> Option<Ordering> {
        self.cmp_value(&Natural::Exact(other.clone()))
    }
}

/// Writes large decimals as `leading...trailing (N digits)`.
fn fmt_decimal(v: &BigUint, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.bits() <= 200 {
        return write!(f, "{v}");
    }
    let s = v.to_str_radix(10);
    if s.len() <= 60 {
        write!(f, "{s}")
    } else {
        write!(
            f,
            "{}...{}({} digits)",
            &s[..12],
            &s[s.len() - 6..],
            s.len()
        )
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Natural::Exact(v) => fmt_decimal(v, f),
            Natural::Symbolic { base, offset } => {
                write!(f, "[{base}]")?;
                match offset.sign() {
                    Sign::Plus => write!(f, "+{offset}"),
                    Sign::Minus => write!(f, "{offset}"),
                    Sign::NoSign => Ok(()),
                }
            }
        }
    }
}

/// The run `q_lo * q_{lo+1} * ... * q_hi` of consecutive primes, by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeInterval {
    lo: BigUint,
    hi: Natural,
}

impl PrimeInterval {
    pub fn new(lo: impl Into<BigUint>, hi: Natural) -> Result<Self> {
        let lo = lo.into();
        if lo.is_zero() {
            return Err(Error::InvalidFactorization(
                "prime indices start at 1".into(),
            ));
        }
        match hi.cmp_biguint(&lo) {
            Some(Ordering::Less) => Err(Error::InvalidFactorization(format!(
                "empty prime interval [{lo}..{hi}]"
            ))),
            Some(_) => Ok(PrimeInterval { lo, hi }),
            None => Err(Error::Undecidable(format!(
                "interval endpoint {hi} against {lo}"
            ))),
        }
    }

    pub fn lo(&self) -> &BigUint {
        &self.lo
    }

    pub fn hi(&self) -> &Natural {
        &self.hi
    }

    /// Number of primes in the run, `hi - lo + 1`.
    pub fn len(&self) -> Result<Natural> {
        self.hi
            .add_signed(&(BigInt::one() - BigInt::from(self.lo.clone())))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn exact_bounds(&self) -> Option<(u64, u64)> {
        let lo = self.lo.to_u64()?;
        let hi = self.hi.to_u64()?;
        Some((lo, hi))
    }

    fn contains_index(&self, i: u64) -> bool {
        let i = BigUint::from(i);
        i >= self.lo && self.hi.cmp_biguint(&i) != Some(Ordering::Less)
    }
}

impl fmt::Display for PrimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q[{}..{}]", self.lo, self.hi)
    }
}

/// Saturating bounds `2^lower <= value < 2^(upper+1)` on `log2(value)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct LogBounds {
    pub lower: u64,
    pub upper: u64,
}

/// A positive integer in canonical factored form. The number 1 is the empty
/// factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredNatural {
    explicit: Vec<(u128, Natural)>,
    intervals: Vec<PrimeInterval>,
}

impl FactoredNatural {
    pub fn one() -> Self {
        FactoredNatural::default()
    }

    /// Builds and normalizes from explicit prime powers and prime intervals.
    /// Primes must be strictly increasing, prime, with exponents >= 1.
    pub fn from_parts(
        explicit: Vec<(u128, Natural)>,
        intervals: Vec<PrimeInterval>,
    ) -> Result<Self> {
        for w in explicit.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidFactorization(
                    "explicit primes must be strictly increasing".into(),
                ));
            }
        }
        let mut map = BTreeMap::new();
        for (p, e) in explicit {
            if e.is_zero() {
                return Err(Error::InvalidFactorization(format!(
                    "zero exponent on prime {p}"
                )));
            }
            map.insert(p, e);
        }
        normalize(map, intervals)
    }

    /// From `(prime, exponent)` pairs, accumulating repeated primes; zero
    /// exponents are dropped.
    pub fn from_prime_powers<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u128, Natural)>,
    {
        let mut map: BTreeMap<u128, Natural> = BTreeMap::new();
        for (p, e) in pairs {
            if e.is_zero() {
                continue;
            }
            match map.get_mut(&p) {
                Some(cur) => *cur = cur.add(&e)?,
                None => {
                    map.insert(p, e);
                }
            }
        }
        normalize(map, Vec::new())
    }

    pub fn from_small_factors(pairs: &[(u64, u32)]) -> Self {
        FactoredNatural {
            explicit: pairs
                .iter()
                .map(|&(p, e)| (p as u128, Natural::from(e as u64)))
                .collect(),
            intervals: Vec::new(),
        }
    }

    pub fn prime_power(p: u128, e: Natural) -> Result<Self> {
        FactoredNatural::from_parts(vec![(p, e)], Vec::new())
    }

    pub fn interval(lo: u64, hi: Natural) -> Result<Self> {
        FactoredNatural::from_parts(Vec::new(), vec![PrimeInterval::new(lo, hi)?])
    }

    pub fn explicit(&self) -> &[(u128, Natural)] {
        &self.explicit
    }

    pub fn intervals(&self) -> &[PrimeInterval] {
        &self.intervals
    }

    pub fn has_intervals(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.explicit.is_empty() && self.intervals.is_empty()
    }

    /// True when every exponent and endpoint is exact.
    pub fn is_concrete(&self) -> bool {
        self.explicit.iter().all(|(_, e)| e.is_exact())
            && self.intervals.iter().all(|iv| iv.hi.is_exact())
    }

    /// Explicit factors as `(prime, exponent)` with machine-word exponents,
    /// or `None` if intervals or huge exponents are present.
    pub fn small_factors(&self) -> Option<Vec<(u128, u64)>> {
        if self.has_intervals() {
            return None;
        }
        self.explicit
            .iter()
            .map(|(p, e)| e.to_u64().map(|e| (*p, e)))
            .collect()
    }

    pub fn multiply(&self, other: &FactoredNatural) -> Result<FactoredNatural> {
        if !self.has_intervals() && !other.has_intervals() {
            return FactoredNatural::from_prime_powers(
                self.explicit.iter().chain(other.explicit.iter()).cloned(),
            );
        }
        let mut map: BTreeMap<u128, Natural> = BTreeMap::new();
        for (p, e) in self.explicit.iter().chain(other.explicit.iter()) {
            match map.get_mut(p) {
                Some(cur) => *cur = cur.add(e)?,
                None => {
                    map.insert(*p, e.clone());
                }
            }
        }
        let mut intervals: Vec<PrimeInterval> = Vec::new();
        for iv in self.intervals.iter().chain(other.intervals.iter()) {
            // overlapping intervals are written out as explicit primes
            let overlaps = intervals
                .iter()
                .position(|o| intervals_overlap(o, iv) != Some(false));
            match overlaps {
                None => intervals.push(iv.clone()),
                Some(k) => {
                    let o = intervals.remove(k);
                    for run in [o, iv.clone()] {
                        for p in expand_interval(&run, 1 << 16)? {
                            let e = map.entry(p).or_insert_with(Natural::zero);
                            *e = e.add_u64(1)?;
                        }
                    }
                }
            }
        }
        // explicit primes inside an interval of the other operand: split the
        // interval and bump the exponent
        let mut split: Vec<PrimeInterval> = Vec::new();
        let mut bumped: Vec<u128> = Vec::new();
        if !intervals.is_empty() {
            let indexed: Vec<(u128, u64)> = map
                .keys()
                .map(|&p| Ok((p, prime_index(p)?)))
                .collect::<Result<_>>()?;
            for iv in intervals {
                let mut pieces = vec![iv];
                for &(p, i) in &indexed {
                    let mut next = Vec::with_capacity(pieces.len() + 1);
                    for piece in pieces {
                        if piece.contains_index(i) {
                            bumped.push(p);
                            next.extend(split_at(&piece, i)?);
                        } else {
                            next.push(piece);
                        }
                    }
                    pieces = next;
                }
                split.extend(pieces);
            }
        }
        for p in bumped {
            let e = map.get_mut(&p).expect("bumped prime is present");
            *e = e.add_u64(1)?;
        }
        normalize(map, split)
    }

    /// Sound three-valued equality of the represented numbers.
    pub fn value_eq(&self, other: &FactoredNatural) -> Option<bool> {
        if self.explicit.len() != other.explicit.len()
            || self.intervals.len() != other.intervals.len()
        {
            return Some(false);
        }
        let mut undecided = false;
        for ((p, e), (q, g)) in self.explicit.iter().zip(&other.explicit) {
            if p != q {
                return Some(false);
            }
            match e.value_eq(g) {
                Some(false) => return Some(false),
                None => undecided = true,
                Some(true) => {}
            }
        }
        for (a, b) in self.intervals.iter().zip(&other.intervals) {
            if a.lo != b.lo {
                return Some(false);
            }
            match a.hi.value_eq(&b.hi) {
                Some(false) => return Some(false),
                None => undecided = true,
                Some(true) => {}
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    /// Like `value_eq` but an undecidable comparison is an error.
    pub fn equals(&self, other: &FactoredNatural) -> Result<bool> {
        self.value_eq(other)
            .ok_or_else(|| Error::Undecidable(format!("{self} = {other}")))
    }

    pub(crate) fn log_bounds(&self) -> Result<LogBounds> {
        let mut lower = 0u64;
        let mut upper = 0u64;
        for (p, e) in &self.explicit {
            let pb = 128 - p.leading_zeros() as u64;
            match e.to_u64() {
                Some(e) => {
                    lower = lower.saturating_add(e.saturating_mul(pb - 1));
                    upper = upper.saturating_add(e.saturating_mul(pb));
                }
                None => {
                    // e >= 2^64 and p >= 2, so the value has at least 2^64 bits.
                    lower = u64::MAX;
                    upper = u64::MAX;
                }
            }
        }
        for iv in &self.intervals {
            let len = iv.len()?;
            match (len.to_u64(), iv.exact_bounds()) {
                (Some(n), Some((lo, hi))) if n <= MEASURE_LEN && index_in_budget(hi) => {
                    for i in lo..=hi {
                        let pb = 64 - nth_prime(i)?.leading_zeros() as u64;
                        lower = lower.saturating_add(pb - 1);
                        upper = upper.saturating_add(pb);
                    }
                }
                (Some(n), _) => {
                    lower = lower.saturating_add(n);
                    upper = u64::MAX;
                }
                (None, _) => {
                    lower = u64::MAX;
                    upper = u64::MAX;
                }
            }
        }
        Ok(LogBounds { lower, upper })
    }

    fn compute_exact(&self) -> Result<BigUint> {
        let mut acc = BigUint::one();
        for (p, e) in &self.explicit {
            let e = e
                .to_u64()
                .and_then(|e| u32::try_from(e).ok())
                .ok_or_else(|| Error::ValueTooLarge(format!("{p}^{e}")))?;
            acc *= BigUint::from(*p).pow(e);
        }
        for iv in &self.intervals {
            let (lo, hi) = iv
                .exact_bounds()
                .ok_or_else(|| Error::ValueTooLarge(iv.to_string()))?;
            if !index_in_budget(hi) {
                return Err(Error::PrimeBudget {
                    index: hi.to_string(),
                    budget: super::sieve::DEFAULT_PRIME_INDEX_BUDGET,
                });
            }
            for i in lo..=hi {
                acc *= nth_prime(i)?;
            }
        }
        Ok(acc)
    }

    /// The explicit integer, if it has at most `budget_bits` bits. `Ok(None)`
    /// is the overflow marker; it is never an approximation.
    pub fn try_to_integer(&self, budget_bits: u64) -> Result<Option<BigUint>> {
        let bounds = self.log_bounds()?;
        if bounds.lower >= budget_bits {
            return Ok(None);
        }
        if bounds.upper == u64::MAX {
            return Ok(None);
        }
        let v = self.compute_exact()?;
        Ok((v.bits() <= budget_bits).then_some(v))
    }

    pub fn to_integer(&self, budget_bits: u64) -> Option<BigUint> {
        self.try_to_integer(budget_bits).ok().flatten()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.to_integer(128).and_then(|v| v.to_u128())
    }
}

fn intervals_overlap(a: &PrimeInterval, b: &PrimeInterval) -> Option<bool> {
    let (first, second) = if a.lo <= b.lo { (a, b) } else { (b, a) };
    first
        .hi
        .cmp_biguint(&second.lo)
        .map(|o| o != Ordering::Less)
}

fn expand_interval(iv: &PrimeInterval, limit: u64) -> Result<Vec<u128>> {
    let (lo, hi) = iv
        .exact_bounds()
        .filter(|&(lo, hi)| hi - lo < limit && index_in_budget(hi))
        .ok_or_else(|| {
            Error::ValueTooLarge(format!(
                "overlapping prime interval {iv} cannot be expanded"
            ))
        })?;
    (lo..=hi).map(|i| nth_prime(i).map(|p| p as u128)).collect()
}

fn split_at(iv: &PrimeInterval, i: u64) -> Result<Vec<PrimeInterval>> {
    let mut out = Vec::new();
    let idx = BigUint::from(i);
    if idx > iv.lo {
        out.push(PrimeInterval::new(iv.lo.clone(), Natural::from(i - 1))?);
    }
    if iv.hi.cmp_biguint(&idx) == Some(Ordering::Greater) {
        out.push(PrimeInterval::new(i + 1, iv.hi.clone())?);
    }
    Ok(out)
}

/// Canonical form: maximal runs of consecutive exponent-1 primes longer than
/// `EXPAND_LEN` become intervals, shorter exact runs become explicit primes.
fn normalize(
    mut map: BTreeMap<u128, Natural>,
    intervals: Vec<PrimeInterval>,
) -> Result<FactoredNatural> {
    for (&p, e) in &map {
        if e.is_zero() {
            return Err(Error::InvalidFactorization(format!(
                "zero exponent on prime {p}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidFactorization(format!("{p} is not prime")));
        }
    }
    let unit_count = map.values().filter(|e| e.is_one()).count() as u64;
    if intervals.is_empty() && unit_count <= EXPAND_LEN {
        return Ok(FactoredNatural {
            explicit: map.into_iter().collect(),
            intervals: Vec::new(),
        });
    }

    // (lo, hi) runs of exponent-1 primes by index
    let mut runs: Vec<(BigUint, Natural)> = Vec::new();
    let has_intervals = !intervals.is_empty();
    let mut unit_primes = Vec::new();
    for (&p, e) in &map {
        let index = match prime_index(p) {
            Ok(i) => i,
            Err(err) if has_intervals => return Err(err),
            Err(_) => continue,
        };
        if has_intervals && !e.is_one() {
            if intervals.iter().any(|iv| iv.contains_index(index)) {
                return Err(Error::InvalidFactorization(format!(
                    "prime {p} lies inside a prime interval"
                )));
            }
            continue;
        }
        if e.is_one() {
            unit_primes.push(p);
            runs.push((BigUint::from(index), Natural::from(index)));
        }
    }
    for p in unit_primes {
        map.remove(&p);
    }
    runs.extend(intervals.into_iter().map(|iv| (iv.lo, iv.hi)));
    runs.sort_by(|a, b| a.0.cmp(&b.0));

    let mut merged: Vec<(BigUint, Natural)> = Vec::new();
    for (lo, hi) in runs {
        if let Some(last) = merged.last_mut() {
            match last.1.cmp_biguint(&lo) {
                Some(Ordering::Less) => {
                    let next_index = last.1.add_u64(1)?;
                    if next_index.cmp_biguint(&lo) == Some(Ordering::Equal) {
                        last.1 = hi;
                        continue;
                    }
                }
                Some(_) => {
                    return Err(Error::InvalidFactorization(format!(
                        "overlapping prime runs at index {lo}"
                    )))
                }
                None => return Err(Error::Undecidable(format!("run boundary at index {lo}"))),
            }
        }
        merged.push((lo, hi));
    }

    let mut out_intervals = Vec::new();
    for (lo, hi) in merged {
        let iv = PrimeInterval::new(lo, hi)?;
        let short = iv.len()?.to_u64().is_some_and(|n| n <= EXPAND_LEN);
        match iv.exact_bounds() {
            Some((lo, hi)) if short && index_in_budget(hi) => {
                for i in lo..=hi {
                    map.insert(nth_prime(i)? as u128, Natural::one());
                }
            }
            _ => out_intervals.push(iv),
        }
    }
    Ok(FactoredNatural {
        explicit: map.into_iter().collect(),
        intervals: out_intervals,
    })
}

impl fmt::Display for FactoredNatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.explicit {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else if e.is_exact() {
                write!(f, "{p}^{e}")?;
            } else {
                write!(f, "{p}^({e})")?;
            }
        }
        for iv in &self.intervals {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl Serialize for FactoredNatural {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `"96"`, `"2^5*3"`, or `"3*q[3..4]"`.
impl std::str::FromStr for FactoredNatural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse natural {s:?}"));
        if !s.contains(['^', '*', '[']) {
            let n: u128 = s.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(Error::InvalidArgument("naturals start at 1".into()));
            }
            return Ok(super::factorize(n));
        }
        let mut acc = FactoredNatural::one();
        for part in s.split('*') {
            let part = part.trim();
            let term = if let Some(rest) = part.strip_prefix("q[") {
                let body = rest.strip_suffix(']').ok_or_else(bad)?;
                let (lo, hi) = body.split_once("..").ok_or_else(bad)?;
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: BigUint = hi.trim().parse().map_err(|_| bad())?;
                FactoredNatural::interval(lo, Natural::Exact(hi))?
            } else {
                let (base, exp) = match part.split_once('^') {
                    Some((b, e)) => (b, e.trim().parse::<BigUint>().map_err(|_| bad())?),
                    None => (part, BigUint::one()),
                };
                let base: u128 = base.trim().parse().map_err(|_| bad())?;
                if base == 0 {
                    return Err(bad());
                }
                let mut t = FactoredNatural::one();
                if !exp.is_zero() {
                    for (p, e) in super::factor_u128(base) {
                        let pe = FactoredNatural::prime_power(
                            p,
                            Natural::Exact(&exp * BigUint::from(e)),
                        )?;
                        t = t.multiply(&pe)?;
                    }
                }
                t
            };
            acc = acc.multiply(&term)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorint::factorize;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn one_is_empty() {
        let one = FactoredNatural::one();
        assert!(one.is_one());
        assert_eq!(one.to_integer(64), Some(BigUint::one()));
        assert_eq!(one.to_string(), "1");
    }

    #[test]
    fn to_integer_examples() {
        let f = FactoredNatural::from_parts(vec![(2, nat(5)), (3, nat(1))], vec![]).unwrap();
        assert_eq!(f.to_integer(64), Some(BigUint::from(96u32)));
        let huge =
            FactoredNatural::prime_power(2, Natural::Exact(BigUint::one() << 65536u32)).unwrap();
        assert_eq!(huge.to_integer(1 << 20), None);
    }

    #[test]
    fn multiply_examples() {
        let two = FactoredNatural::prime_power(2, nat(1)).unwrap();
        assert_eq!(FactoredNatural::one().multiply(&two).unwrap(), two);
        let b = FactoredNatural::from_parts(vec![(2, nat(2)), (3, nat(1))], vec![]).unwrap();
        let expected = FactoredNatural::from_parts(vec![(2, nat(3)), (3, nat(1))], vec![]).unwrap();
        assert_eq!(two.multiply(&b).unwrap(), expected);

        let three = FactoredNatural::prime_power(3, nat(1)).unwrap();
        let q34 = FactoredNatural::interval(3, nat(4)).unwrap();
        let product = three.multiply(&q34).unwrap();
        assert_eq!(product.to_integer(64), Some(BigUint::from(105u32)));
        assert_eq!(product, factorize(105));
    }

    #[test]
    fn interval_overlapping_explicit_prime_bumps_exponent() {
        // 5 * q[2..5000] has 5^2 and a split run
        let five = FactoredNatural::prime_power(5, nat(1)).unwrap();
        let run = FactoredNatural::interval(2, nat(5000)).unwrap();
        let p = five.multiply(&run).unwrap();
        assert!(p.explicit().contains(&(5, nat(2))));
        assert!(p.explicit().contains(&(3, nat(1))));
        assert_eq!(p.intervals().len(), 1);
        assert_eq!(p.intervals()[0].lo(), &BigUint::from(4u32));
    }

    #[test]
    fn long_explicit_runs_and_intervals_share_a_canonical_form() {
        let run = FactoredNatural::interval(2, nat(3000)).unwrap();
        let mut built = FactoredNatural::one();
        for i in 2..=3000 {
            let p = nth_prime(i).unwrap() as u128;
            built = built
                .multiply(&FactoredNatural::prime_power(p, nat(1)).unwrap())
                .unwrap();
        }
        assert_eq!(built, run);
        // an adjacent explicit prime is absorbed into the run
        let two = FactoredNatural::prime_power(2, nat(1)).unwrap();
        let wider = FactoredNatural::interval(1, nat(3000)).unwrap();
        assert_eq!(two.multiply(&run).unwrap(), wider);
    }

    #[test]
    fn invalid_parts_are_rejected() {
        assert!(FactoredNatural::from_parts(vec![(4, nat(1))], vec![]).is_err());
        assert!(FactoredNatural::from_parts(vec![(2, nat(0))], vec![]).is_err());
        assert!(FactoredNatural::from_parts(vec![(3, nat(1)), (2, nat(1))], vec![]).is_err());
        assert!(PrimeInterval::new(5u32, nat(4)).is_err());
        assert!(PrimeInterval::new(0u32, nat(4)).is_err());
        let iv = PrimeInterval::new(2u32, nat(5000)).unwrap();
        assert!(FactoredNatural::from_parts(vec![(5, nat(2))], vec![iv]).is_err());
    }

    #[test]
    fn symbolic_naturals_compare_soundly() {
        let tower = FactoredNatural::prime_power(3, Natural::from(7_625_597_484_987u64)).unwrap();
        let sym = Natural::of(&tower).unwrap();
        assert!(!sym.is_exact());
        assert_eq!(sym.value_eq(&Natural::from(5u64)), Some(false));
        let shifted = sym.sub_u64(1).unwrap();
        assert_eq!(shifted.value_eq(&sym), Some(false));
        assert_eq!(shifted.add_u64(1).unwrap(), sym);
        assert_eq!(shifted.cmp_value(&sym), Some(Ordering::Less));
        let other = FactoredNatural::prime_power(5, Natural::from(7_625_597_484_987u64)).unwrap();
        let other = Natural::of(&other).unwrap();
        assert_eq!(other.value_eq(&sym), Some(false));
        assert_eq!(other.sub_u64(3).unwrap().value_eq(&sym), None);
        assert!(sym.add(&other).is_err());
    }

    #[test]
    fn natural_of_collapses_small_values() {
        let f = FactoredNatural::prime_power(3, nat(6560)).unwrap();
        let n = Natural::of(&f).unwrap();
        assert_eq!(n, Natural::Exact(BigUint::from(3u32).pow(6560)));
    }

    #[test]
    fn parse_forms() {
        let f: FactoredNatural = "2^5*3".parse().unwrap();
        assert_eq!(f, factorize(96));
        let g: FactoredNatural = "3*q[3..4]".parse().unwrap();
        assert_eq!(g, factorize(105));
        let h: FactoredNatural = "12^2".parse().unwrap();
        assert_eq!(h, factorize(144));
        assert!("0".parse::<FactoredNatural>().is_err());
        assert!("x".parse::<FactoredNatural>().is_err());
    }
}
