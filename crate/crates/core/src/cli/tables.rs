//! Finite-evidence analogues of the orbit-number, entropy and connectivity
//! tables.

use serde_json::json;

use super::output::{Report, ReportStatus, Table};
use crate::arithfun::FunctionId;
use crate::config::Config;
use crate::dynamics::{
    ent_cset_estimate, ent_set_estimate, monotone_a_zero_check, monotone_o_zero_check,
    strict_o_positive_check, verify_disjoint_with, FamilyScheme, FamilySpec,
};
use crate::error::Result;
use crate::report::{Counterexample, VerificationReport};
use crate::topology::{contains_one_forward, separation_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableKind {
    OrbitNumbers,
    Entropies,
    Connectivity,
}

pub struct TableArgs {
    pub families: u64,
    pub depth: u64,
    pub bound: u64,
    pub horizon: u64,
    pub seeds: Vec<u128>,
}

fn j(k: u32) -> FunctionId {
    FunctionId::jordan(k).expect("valid parameter")
}

fn row4(shift: u32) -> Vec<FunctionId> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(FunctionId::sigma(k).expect("valid parameter"));
    }
    for k in 1..=3 {
        out.push(FunctionId::psi_k(k).expect("valid parameter"));
    }
    for k in 1..=3 {
        out.push(j(k + shift));
    }
    out
}

/// Collects check outcomes; the first failure becomes the table's
/// counterexample.
#[derive(Default)]
struct Outcomes {
    failure: Option<Counterexample>,
}

impl Outcomes {
    fn cell(&mut self, r: &VerificationReport, on_pass: String) -> String {
        if r.passed() {
            return on_pass;
        }
        let c = r
            .counterexample
            .clone()
            .expect("a failing report has a counterexample");
        let cell = format!(
            "FAIL at {}: expected {}, got {}",
            c.position, c.expected, c.actual
        );
        if self.failure.is_none() {
            self.failure = Some(Counterexample {
                family: Some(c.family.unwrap_or_else(|| r.lemma_id.clone())),
                ..c
            });
        }
        cell
    }

    fn finish(self, command: &str, results: serde_json::Value, table: Table) -> Report {
        let status = if self.failure.is_some() {
            ReportStatus::Fail
        } else {
            ReportStatus::Pass
        };
        let mut r = Report::new(command, status, results, table);
        r.counterexample = self.failure;
        r
    }
}

pub fn orbit_numbers(a: &TableArgs, config: &Config) -> Result<Report> {
    let mut out = Outcomes::default();
    let mut table = Table::new(&["row", "function", "o", "a"]);
    let mut rows = Vec::new();
    let zero = format!("0 (f(n) <= n on 1..{})", a.bound);
    let zero_a = format!("0 (f(n) >= n on 1..{})", a.bound);
    let positive = format!("> 0 (f(n) > n on 2..{})", a.bound);

    let certify =
        |scheme: FamilyScheme, out: &mut Outcomes| -> Result<(String, serde_json::Value)> {
            let cap = config.depth_caps.cap(scheme);
            let (families, depth) = if cap < a.depth {
                (a.families.min(5), cap)
            } else {
                (a.families, a.depth)
            };
            let r = verify_disjoint_with(
                &FamilySpec::first(scheme, families),
                depth,
                &config.depth_caps,
            )?;
            let cell = out.cell(&r, format!(">= {families} (depth {depth})"));
            Ok((cell, serde_json::to_value(&r).expect("report serializes")))
        };

    for (f, scheme) in [
        (FunctionId::phi(), FamilyScheme::PhiAnti),
        (FunctionId::d(), FamilyScheme::DAnti),
        (FunctionId::big_omega(), FamilyScheme::OmegaAnti),
        (FunctionId::small_omega(), FamilyScheme::SmallOmegaAnti),
    ] {
        let o = monotone_o_zero_check(f, a.bound)?;
        let o_cell = out.cell(&o, zero.clone());
        let (a_cell, a_json) = certify(scheme, &mut out)?;
        table.push(vec!["1".into(), f.to_string(), o_cell, a_cell]);
        rows.push(json!({"row": 1, "function": f, "o": o, "a": a_json}));
    }

    let f = FunctionId::unitary_totient();
    let o = monotone_o_zero_check(f, a.bound)?;
    table.push(vec![
        "2".into(),
        f.to_string(),
        out.cell(&o, zero.clone()),
        "open".into(),
    ]);
    rows.push(json!({"row": 2, "function": f, "o": o, "a": null}));

    for (f, scheme) in [
        (j(2), FamilyScheme::J2Orbit),
        (FunctionId::psi(), FamilyScheme::PsiOrbit),
    ] {
        let (o_cell, o_json) = certify(scheme, &mut out)?;
        let r = monotone_a_zero_check(f, a.bound)?;
        let a_cell = out.cell(&r, zero_a.clone());
        table.push(vec!["3".into(), f.to_string(), o_cell, a_cell]);
        rows.push(json!({"row": 3, "function": f, "o": o_json, "a": r}));
    }

    for f in row4(2) {
        let o = strict_o_positive_check(f, a.bound)?;
        let r = monotone_a_zero_check(f, a.bound)?;
        let o_cell = out.cell(&o, positive.clone());
        let a_cell = out.cell(&r, zero_a.clone());
        table.push(vec!["4".into(), f.to_string(), o_cell, a_cell]);
        rows.push(json!({"row": 4, "function": f, "o": o, "a": r}));
    }

    Ok(out.finish("table orbit-numbers", json!({ "rows": rows }), table))
}

pub fn entropies(a: &TableArgs) -> Result<Report> {
    let mut table = Table::new(&["function", "ent_set", "ent_cset"]);
    let mut rows = Vec::new();
    let mut functions = vec![
        FunctionId::phi(),
        FunctionId::big_omega(),
        FunctionId::small_omega(),
        j(2),
        FunctionId::psi(),
    ];
    functions.extend(row4(2).into_iter().filter(|f| *f != FunctionId::psi()));
    for f in functions {
        let fwd = ent_set_estimate(f, &a.seeds, a.horizon);
        let bwd = ent_cset_estimate(f, &a.seeds, a.horizon);
        let cell = |r: &Result<crate::dynamics::EntropyEstimate>| match r {
            Ok(e) => e.to_string(),
            Err(crate::Error::NotFiniteFibre { .. }) => "- (not finite fibre)".into(),
            Err(e) => format!("- ({e})"),
        };
        let js = |r: &Result<crate::dynamics::EntropyEstimate>| match r {
            Ok(e) => json!(e),
            Err(e) => json!({ "error": e.to_string() }),
        };
        table.push(vec![f.to_string(), cell(&fwd), cell(&bwd)]);
        rows.push(json!({"function": f, "ent_set": js(&fwd), "ent_cset": js(&bwd)}));
    }
    Ok(Report::new(
        "table entropies",
        ReportStatus::Info,
        json!({ "rows": rows }),
        table,
    ))
}

pub fn connectivity(a: &TableArgs) -> Result<Report> {
    let mut out = Outcomes::default();
    let mut table = Table::new(&["function", "check", "verdict"]);
    let mut rows = Vec::new();
    for f in [
        FunctionId::phi(),
        FunctionId::unitary_totient(),
        FunctionId::small_omega(),
        FunctionId::big_omega(),
        FunctionId::d(),
    ] {
        let r = contains_one_forward(f, a.bound)?;
        let verdict = out.cell(&r, format!("connected (conditional on 1..{})", a.bound));
        table.push(vec![f.to_string(), r.lemma_id.clone(), verdict]);
        rows.push(json!({"function": f, "check": r}));
    }
    for f in row4(1) {
        let r = separation_check(f, a.bound)?;
        let verdict = out.cell(&r, format!("disconnected (conditional on 1..{})", a.bound));
        table.push(vec![f.to_string(), r.lemma_id.clone(), verdict]);
        rows.push(json!({"function": f, "check": r}));
    }
    Ok(out.finish("table connectivity", json!({ "rows": rows }), table))
}
