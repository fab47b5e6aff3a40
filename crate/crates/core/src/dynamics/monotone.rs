use serde::Serialize;

use crate::arithfun::{value_table, FunctionId};
use crate::error::{Error, Result};
use crate::report::{Counterexample, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Monotonicity {
    /// `f(n) <= n` throughout.
    DecreasingWeak,
    /// `f(n) >= n` throughout.
    IncreasingWeak,
    /// `f(1) = 1` and `f(n) > n` for `n >= 2`.
    IncreasingStrictAbove1,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub function: FunctionId,
    pub bound: u64,
    pub class: Monotonicity,
    /// Least `n` with `f(n) > n`, if any.
    pub above_witness: Option<u64>,
    /// Least `n` with `f(n) < n`, if any.
    pub below_witness: Option<u64>,
    pub conclusions: Vec<String>,
}

/// Checks the monotone hypotheses pointwise on `1..=bound` and states the
/// conclusions they imply, conditional on the range checked.
pub fn classify_monotonicity(f: FunctionId, bound: u64) -> Result<MonotonicityReport> {
    if bound < 2 {
        return Err(Error::InvalidArgument("bound must be >= 2".into()));
    }
    let table = value_table(f, bound)?;
    let mut above = None;
    let mut below = None;
    let mut equal_above_1 = None;
    for (n, &v) in table.iter().enumerate().skip(1) {
        let n128 = n as u128;
        if above.is_none() && v > n128 {
            above = Some(n as u64);
        }
        if below.is_none() && v < n128 {
            below = Some(n as u64);
        }
        if equal_above_1.is_none() && n > 1 && v == n128 {
            equal_above_1 = Some(n as u64);
        }
        if above.is_some() && below.is_some() {
            break;
        }
    }
    let class = match (above, below) {
        (_, None) if table[1] == 1 && equal_above_1.is_none() => {
            Monotonicity::IncreasingStrictAbove1
        }
        (_, None) => Monotonicity::IncreasingWeak,
        (None, Some(_)) => Monotonicity::DecreasingWeak,
        _ => Monotonicity::None,
    };
    let tag = format!("(conditional: hypothesis verified up to {bound} only)");
    let conclusions = match class {
        Monotonicity::DecreasingWeak => vec![format!("o({f})=0 {tag}")],
        Monotonicity::IncreasingWeak => vec![format!("a({f})=0 {tag}")],
        Monotonicity::IncreasingStrictAbove1 => {
            vec![format!("a({f})=0 {tag}"), format!("o({f})>0 {tag}")]
        }
        Monotonicity::None => Vec::new(),
    };
    Ok(MonotonicityReport {
        function: f,
        bound,
        class,
        above_witness: above,
        below_witness: below,
        conclusions,
    })
}

/// `f(n) <= n` on `1..=bound`, whence `o(f) = 0`.
pub fn monotone_o_zero_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    let r = classify_monotonicity(f, bound)?;
    Ok(match r.above_witness {
        None => with_conclusions(
            VerificationReport::pass("monotone-o-zero", 1, bound),
            &r,
            "o(",
        ),
        Some(n) => fail_at("monotone-o-zero", f, bound, n, format!("f({n}) <= {n}"))?,
    })
}

/// `f(n) >= n` on `1..=bound`, whence `a(f) = 0`.
pub fn monotone_a_zero_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    let r = classify_monotonicity(f, bound)?;
    Ok(match r.below_witness {
        None => with_conclusions(
            VerificationReport::pass("monotone-a-zero", 1, bound),
            &r,
            "a(",
        ),
        Some(n) => fail_at("monotone-a-zero", f, bound, n, format!("f({n}) >= {n}"))?,
    })
}

/// `f(1) = 1` and `f(n) > n` for `2 <= n <= bound`, whence `o(f) > 0`.
pub fn strict_o_positive_check(f: FunctionId, bound: u64) -> Result<VerificationReport> {
    const ID: &str = "strict-o-positive";
    let r = classify_monotonicity(f, bound)?;
    if r.class == Monotonicity::IncreasingStrictAbove1 {
        return Ok(with_conclusions(
            VerificationReport::pass(ID, 1, bound),
            &r,
            "o(",
        ));
    }
    let table = value_table(f, bound)?;
    if table[1] != 1 {
        return fail_at(ID, f, bound, 1, "f(1) = 1");
    }
    let n = (2..=bound as usize)
        .find(|&n| table[n] <= n as u128)
        .expect("class is not strict, so some n >= 2 has f(n) <= n");
    fail_at(ID, f, bound, n as u64, format!("f({n}) > {n}"))
}

fn with_conclusions(
    mut report: VerificationReport,
    r: &MonotonicityReport,
    prefix: &str,
) -> VerificationReport {
    report.conclusions = r
        .conclusions
        .iter()
        .filter(|c| c.starts_with(prefix))
        .cloned()
        .collect();
    report
}

fn fail_at(
    id: &str,
    f: FunctionId,
    bound: u64,
    n: u64,
    expected: impl Into<String>,
) -> Result<VerificationReport> {
    let v = value_table(f, n)?[n as usize];
    Ok(VerificationReport::fail(
        id,
        1,
        bound,
        Counterexample::witness(n as u128, expected.into(), v),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        let r = classify_monotonicity(FunctionId::phi(), 10_000).unwrap();
        assert_eq!(r.class, Monotonicity::DecreasingWeak);
        assert_eq!(r.conclusions.len(), 1);
        assert!(r.conclusions[0].starts_with("o(phi)=0"));
        let r = classify_monotonicity(FunctionId::psi(), 10_000).unwrap();
        assert_eq!(r.class, Monotonicity::IncreasingStrictAbove1);
        assert_eq!(
            classify_monotonicity(FunctionId::sigma(1).unwrap(), 10_000)
                .unwrap()
                .class,
            Monotonicity::IncreasingStrictAbove1
        );
        assert!(classify_monotonicity(FunctionId::phi(), 1).is_err());
    }

    #[test]
    fn lemma_checks() {
        let phi = FunctionId::phi();
        let psi = FunctionId::psi();
        let r = monotone_o_zero_check(phi, 1000).unwrap();
        assert!(r.passed());
        assert_eq!(r.conclusions.len(), 1);
        assert!(monotone_a_zero_check(psi, 1000).unwrap().passed());
        assert!(strict_o_positive_check(psi, 1000).unwrap().passed());
        let r = monotone_a_zero_check(phi, 1000).unwrap();
        assert_eq!(r.counterexample.unwrap().position, 2);
        let r = strict_o_positive_check(FunctionId::d(), 1000).unwrap();
        assert_eq!(r.counterexample.unwrap().position, 2);
        let r = monotone_o_zero_check(psi, 1000).unwrap();
        assert_eq!(r.counterexample.unwrap().position, 2);
    }
}
