//! The `arithdyn` command line.
//!
//! Every command emits one [`Report`]; exit status is 0 for PASS or INFO, 1
//! for FAIL and 2 for usage, configuration or budget errors.

mod lemmas;
mod output;
mod tables;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use lemmas::{describe, verify_lemma, LemmaArgs, LEMMA_IDS};
pub use output::{Format, Report, ReportStatus, Table, SCHEMA};
pub use tables::TableKind;

use crate::arithfun::{apply, eval_oracle_with, eval_with_budget, FunctionId};
use crate::config::Config;
use crate::dynamics::{
    ent_cset_estimate_mode, ent_set_estimate, family_terms_with, search_families, EntropyMode,
    FamilyScheme, FamilySpec, SearchBudget,
};
use crate::error::{Error, Result};
use crate::factorint::{factorize, FactoredNatural};
use crate::preimage::{
    inverse_phi_with_budget, phi_bound, preimage_bounded, preimage_expansive, PreimageResult,
};
use crate::report::Counterexample;
use crate::topology::{
    components, min_open_backward, min_open_forward_capped, partition_check, partition_map,
    separation_check, BlockDescriptor, MinimalOpenSet, Topology,
};

/// Values wider than this are shown in factored form only.
const DECIMAL_BITS: u64 = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "arithdyn",
    version,
    about = "Arithmetic dynamics of number-theoretic functions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Function id: phi, J2, psi, psi2, phistar, Omega, omega, d, d3, sigma1, ...
    #[arg(long = "fn", global = true)]
    function: Option<String>,
    /// Parameter of J_k, psi_k, d_l or sigma_l.
    #[arg(long, visible_alias = "l", global = true)]
    k: Option<u32>,
    /// Argument: an integer or a factored form such as 2^11*3.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Comma-separated seed set.
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Vec<u128>,
    /// Number of families to check
    #[arg(long, global = true)]
    families: Option<u64>,
    /// Terms per family or orbit
    #[arg(long, global = true)]
    depth: Option<u64>,
    /// Entropy horizon
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Scan bound
    #[arg(long, global = true)]
    bound: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// TOML file overriding budgets.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Omit the timestamp so reports are byte-reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f(n) from the closed form.
    Eval,
    /// Evaluate f(n) from the definition and compare with the closed form.
    OracleEval,
    /// f^-1(n): complete for phi and expansive f, bounded search with --bound.
    Preimage,
    /// phi^-1(n).
    InversePhi,
    /// Upper bound for the members of phi^-1(n).
    PhiBound,
    /// The first --depth terms of the forward orbit of n.
    Orbit,
    /// Terms of one orbit or anti-orbit family.
    Family {
        #[arg(long)]
        scheme: FamilyScheme,
        #[arg(long, default_value_t = 1)]
        index: u64,
    },
    /// Run a named check; --list shows the ids.
    VerifyLemma {
        id: Option<String>,
        #[arg(long)]
        list: bool,
        /// Partition block for partition-example (repeatable).
        #[arg(long = "block")]
        blocks: Vec<BlockDescriptor>,
    },
    /// Forward entropy estimate of a seed set.
    Entropy,
    /// Backward entropy estimate of a seed set.
    Centropy {
        #[arg(long, value_enum, default_value_t = ModeArg::Ambient)]
        mode: ModeArg,
    },
    /// Minimal open neighbourhood of n.
    MinOpen {
        #[arg(long, value_enum, default_value_t = TopologyArg::Tau)]
        topology: TopologyArg,
    },
    /// Components of n -- f(n) on 1..bound.
    Components,
    /// Check that {1} and its complement separate.
    Separation,
    /// Successor-in-block map of a partition and its components.
    PartitionDemo {
        /// Block: all, rest, odds, evens, <r>mod<m> or [a,b,...] (repeatable).
        #[arg(long = "block")]
        blocks: Vec<BlockDescriptor>,
    },
    /// Finite-evidence versions of the orbit-number, entropy and connectivity tables.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Exploratory search for orbit and anti-orbit prefixes.
    Search,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum ModeArg {
    Ambient,
    Core,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum TopologyArg {
    Tau,
    Taubar,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let config = match &cli.global.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        },
        None => Config::default(),
    };
    if let Command::VerifyLemma { list: true, .. } = cli.command {
        return list_lemmas(cli.global.format, out);
    }
    match dispatch(&cli, &config) {
        Ok(mut report) => {
            report.provenance.config = config;
            if !cli.global.no_timestamp {
                report.timestamp = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .ok()
                    .map(|d| d.as_secs());
            }
            if let Err(e) = report.render(cli.global.format, out) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            report.status.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn list_lemmas(format: Format, out: &mut dyn Write) -> i32 {
    let mut table = Table::new(&["id", "description"]);
    for id in LEMMA_IDS {
        table.push(vec![id.to_string(), describe(id).to_string()]);
    }
    let report = Report::new(
        "verify-lemma --list",
        ReportStatus::Info,
        json!({ "ids": LEMMA_IDS }),
        table,
    );
    match report.render(format, out) {
        Ok(()) => 0,
        Err(_) => 2,
    }
}

fn function(g: &Global) -> Result<FunctionId> {
    let name = g
        .function
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--fn is required".into()))?;
    FunctionId::parse_with_param(name, g.k)
}

fn function_or(g: &Global, default: FunctionId) -> Result<FunctionId> {
    match g.function {
        Some(_) => function(g),
        None => Ok(default),
    }
}

fn arg_n(g: &Global) -> Result<FactoredNatural> {
    let text =
        g.n.as_deref()
            .ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
    if let Ok(v) = text.trim().parse::<u128>() {
        if v == 0 {
            return Err(Error::InvalidArgument("--n must be >= 1".into()));
        }
        return Ok(factorize(v));
    }
    text.parse()
}

fn arg_n_u128(g: &Global) -> Result<u128> {
    arg_n(g)?
        .to_u128()
        .ok_or_else(|| Error::InvalidArgument("--n must fit in 128 bits here".into()))
}

fn arg_bound(g: &Global, default: u64, config: &Config) -> Result<u64> {
    let b = g.bound.unwrap_or(default);
    if b == 0 || b > config.sieve_bound as u64 {
        return Err(Error::InvalidArgument(format!(
            "--bound {b} outside 1..={}",
            config.sieve_bound
        )));
    }
    Ok(b)
}

fn seeds(g: &Global) -> Vec<u128> {
    if g.seeds.is_empty() {
        vec![6]
    } else {
        g.seeds.clone()
    }
}

/// Decimal form when it is at most [`DECIMAL_BITS`] wide.
fn decimal(x: &FactoredNatural) -> Option<String> {
    x.to_integer(DECIMAL_BITS).map(|v| v.to_string())
}

fn show(x: &FactoredNatural) -> String {
    decimal(x).unwrap_or_else(|| x.to_string())
}

fn preimage_report(command: &str, r: &PreimageResult) -> Report {
    let members: Vec<String> = r.members.iter().map(|m| m.to_string()).collect();
    let table = Table::pairs([
        ("function", r.function.to_string()),
        ("target", r.target.to_string()),
        ("members", members.join(",")),
        ("count", r.members.len().to_string()),
        (
            "completeness",
            serde_json::to_value(r.completeness)
                .unwrap()
                .as_str()
                .unwrap_or_default()
                .to_string(),
        ),
    ]);
    Report::new(command, ReportStatus::Info, json!(r), table)
        .param("fn", r.function)
        .param("n", r.target.to_string())
}

fn open_set_report(s: &MinimalOpenSet, f: FunctionId) -> Report {
    let members: Vec<String> = s.members.iter().map(|m| m.to_string()).collect();
    let table = Table::pairs([
        ("point", s.point.to_string()),
        ("members", members.join(",")),
        ("count", s.members.len().to_string()),
        ("complete", s.is_complete().to_string()),
    ]);
    Report::new("min-open", ReportStatus::Info, json!(s), table)
        .param("fn", f)
        .param("n", s.point.to_string())
        .param("topology", s.topology)
}

fn dispatch(cli: &Cli, config: &Config) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval => {
            let f = function(g)?;
            let n = arg_n(g)?;
            let v = eval_with_budget(f, &n, config.bit_budget)?;
            let value = match v.to_u128() {
                Some(x) => x.to_string(),
                None => v
                    .clone()
                    .into_factored()
                    .map(|x| show(&x))
                    .unwrap_or_else(|_| v.to_string()),
            };
            let table = Table::pairs([
                ("function", f.to_string()),
                ("n", show(&n)),
                ("value", value.clone()),
                (
                    "factored",
                    v.clone()
                        .into_factored()
                        .map(|x| x.to_string())
                        .unwrap_or_else(|_| v.to_string()),
                ),
            ]);
            Ok(Report::new(
                "eval",
                ReportStatus::Info,
                json!({ "function": f, "n": n, "value": value, "raw": v.to_string() }),
                table,
            )
            .param("fn", f)
            .param("n", n))
        }
        Command::OracleEval => {
            let f = function(g)?;
            let n = u64::try_from(arg_n_u128(g)?)
                .map_err(|_| Error::InvalidArgument("--n must fit in 64 bits".into()))?;
            let oracle = eval_oracle_with(f, n, config.oracle_budget)?;
            let closed = eval_with_budget(f, &factorize(n as u128), config.bit_budget)?;
            let closed_int = closed
                .to_natural()?
                .exact()
                .cloned()
                .ok_or_else(|| Error::ValueTooLarge(format!("{f}({n})")))?;
            let agree = closed_int == oracle;
            let table = Table::pairs([
                ("function", f.to_string()),
                ("n", n.to_string()),
                ("oracle", oracle.to_string()),
                ("closed_form", closed_int.to_string()),
            ]);
            let mut r = Report::new(
                "oracle-eval",
                if agree { ReportStatus::Pass } else { ReportStatus::Fail },
                json!({ "function": f, "n": n, "oracle": oracle.to_string(), "closed_form": closed_int.to_string(), "agree": agree }),
                table,
            )
            .param("fn", f)
            .param("n", n);
            if !agree {
                r.counterexample = Some(Counterexample::new(
                    Some(f.to_string()),
                    n,
                    oracle,
                    closed_int,
                ));
            }
            Ok(r)
        }
        Command::Preimage => {
            let f = function(g)?;
            let m = arg_n_u128(g)?;
            let r = if f == FunctionId::phi() {
                inverse_phi_with_budget(m, config.inverse_phi_budget as u128)?
            } else if let Some(b) = g.bound {
                preimage_bounded(f, m, arg_bound(g, b, config)?)?
            } else {
                preimage_expansive(f, m)?
            };
            let mut rep = preimage_report("preimage", &r);
            if let Some(b) = g.bound {
                rep = rep.param("bound", b);
            }
            Ok(rep)
        }
        Command::InversePhi => {
            let m = arg_n_u128(g)?;
            let r = inverse_phi_with_budget(m, config.inverse_phi_budget as u128)?;
            Ok(preimage_report("inverse-phi", &r))
        }
        Command::PhiBound => {
            let m = arg_n_u128(g)?;
            let b = phi_bound(m)?;
            let table = Table::pairs([
                ("n", m.to_string()),
                ("bound", b.to_string()),
                ("decimal", decimal(&b).unwrap_or_else(|| "-".into())),
            ]);
            Ok(Report::new(
                "phi-bound",
                ReportStatus::Info,
                json!({ "n": m.to_string(), "bound": b, "decimal": decimal(&b) }),
                table,
            )
            .param("n", m.to_string()))
        }
        Command::Orbit => {
            let f = function(g)?;
            let start = arg_n(g)?;
            let depth = g.depth.unwrap_or(10);
            let mut terms = vec![start.clone()];
            let mut seen = BTreeSet::from([start.to_string()]);
            let mut cycle_at = None;
            while (terms.len() as u64) < depth {
                let next = apply(f, terms.last().expect("non-empty"))?;
                let key = next.to_string();
                terms.push(next);
                if !seen.insert(key) {
                    cycle_at = Some(terms.len() as u64);
                    break;
                }
            }
            let mut table = Table::new(&["step", "term", "factored"]);
            for (i, t) in terms.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), show(t), t.to_string()]);
            }
            let mut r = Report::new(
                "orbit",
                ReportStatus::Info,
                json!({ "function": f, "terms": terms, "repeat_at": cycle_at }),
                table,
            )
            .param("fn", f)
            .param("n", start)
            .param("depth", depth);
            if let Some(at) = cycle_at {
                r.conclusions
                    .push(format!("term {at} repeats an earlier term"));
            }
            Ok(r)
        }
        Command::Family { scheme, index } => {
            let spec = FamilySpec::new(*scheme, *index)?;
            let depth = g.depth.unwrap_or(10);
            let terms = family_terms_with(&spec, depth, &config.depth_caps)?;
            let mut table = Table::new(&["family", "n", "term"]);
            for (i, t) in terms.iter().enumerate() {
                table.push(vec![spec.label(), (i + 1).to_string(), show(t)]);
            }
            Ok(Report::new(
                "family",
                ReportStatus::Info,
                json!({ "family": spec.label(), "function": scheme.function(), "terms": terms }),
                table,
            )
            .param("scheme", scheme)
            .param("index", index)
            .param("depth", depth))
        }
        Command::VerifyLemma { id, blocks, .. } => {
            let id = id
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("lemma id required (see --list)".into()))?;
            let args = LemmaArgs {
                function: match g.function {
                    Some(_) => Some(function(g)?),
                    None => None,
                },
                families: g.families,
                depth: g.depth,
                bound: g.bound,
                blocks: blocks.clone(),
            };
            let (v, used) = verify_lemma(id, &args, config)?;
            let mut r = Report::from_verification("verify-lemma", &v).param("id", id);
            if let Some(f) = used.function {
                r = r.param("fn", f);
            }
            for (k, v) in [
                ("families", used.families),
                ("depth", used.depth),
                ("bound", used.bound),
            ] {
                if let Some(v) = v {
                    r = r.param(k, v);
                }
            }
            if !used.blocks.is_empty() {
                r = r.param("blocks", &used.blocks);
            }
            Ok(r)
        }
        Command::Entropy => {
            let f = function(g)?;
            let horizon = g.horizon.unwrap_or(10);
            let e = ent_set_estimate(f, &seeds(g), horizon)?;
            Ok(entropy_report("entropy", &e))
        }
        Command::Centropy { mode } => {
            let f = function(g)?;
            let horizon = g.horizon.unwrap_or(10);
            let mode = match mode {
                ModeArg::Ambient => EntropyMode::Ambient,
                ModeArg::Core => EntropyMode::Core,
            };
            let e = ent_cset_estimate_mode(f, &seeds(g), horizon, mode)?;
            Ok(entropy_report("centropy", &e).param("mode", mode))
        }
        Command::MinOpen { topology } => {
            let f = function(g)?;
            let x = arg_n_u128(g)?;
            let s = match topology {
                TopologyArg::Taubar => min_open_forward_capped(f, x, config.orbit_step_cap)?,
                TopologyArg::Tau => {
                    let scan = arg_bound(g, 10_000.max(x.min(u64::MAX as u128) as u64), config)?;
                    min_open_backward(f, x, scan)?
                }
            };
            debug_assert!(matches!(s.topology, Topology::Tau | Topology::TauBar));
            Ok(open_set_report(&s, f))
        }
        Command::Components => {
            let f = function(g)?;
            let bound = arg_bound(g, 100, config)?;
            let c = components(f, bound)?;
            let mut table = Table::new(&["component", "size", "least", "members"]);
            for (i, comp) in c.components.iter().enumerate() {
                let shown: Vec<String> = comp.iter().take(20).map(|x| x.to_string()).collect();
                let more = if comp.len() > 20 { ",..." } else { "" };
                table.push(vec![
                    (i + 1).to_string(),
                    comp.len().to_string(),
                    comp[0].to_string(),
                    format!("{}{more}", shown.join(",")),
                ]);
            }
            let mut r = Report::new("components", ReportStatus::Info, json!(c), table)
                .param("fn", f)
                .param("bound", bound);
            r.conclusions.push(format!(
                "{} components, {} boundary points",
                c.components.len(),
                c.boundary.len()
            ));
            Ok(r)
        }
        Command::Separation => {
            let f = function_or(g, FunctionId::psi())?;
            let bound = arg_bound(g, 100_000, config)?;
            let v = separation_check(f, bound)?;
            Ok(Report::from_verification("separation", &v)
                .param("fn", f)
                .param("bound", bound))
        }
        Command::PartitionDemo { blocks } => {
            let blocks = if blocks.is_empty() {
                vec![
                    BlockDescriptor::Residue {
                        modulus: 2,
                        residue: 1,
                    },
                    BlockDescriptor::Residue {
                        modulus: 2,
                        residue: 0,
                    },
                ]
            } else {
                blocks.clone()
            };
            let bound = arg_bound(g, 1000, config)?;
            let p = partition_map(&blocks, bound)?;
            let v = partition_check(&blocks, bound)?;
            let mut table = Table::new(&["component", "block", "size", "least"]);
            for (i, (c, &b)) in p.components.iter().zip(&p.component_blocks).enumerate() {
                table.push(vec![
                    (i + 1).to_string(),
                    blocks[b].to_string(),
                    c.len().to_string(),
                    c[0].to_string(),
                ]);
            }
            let mut r = Report::new(
                "partition-demo",
                v.status.into(),
                json!({
                    "blocks": p.blocks,
                    "bound": p.bound,
                    "components": p.components.len(),
                    "component_blocks": p.component_blocks,
                    "refines_partition": p.refines_partition,
                }),
                table,
            )
            .param("blocks", &blocks)
            .param("bound", bound);
            r.counterexample = v.counterexample.clone();
            r.conclusions = v.conclusions.clone();
            Ok(r)
        }
        Command::Table { which } => {
            let args = tables::TableArgs {
                families: g.families.unwrap_or(20),
                depth: g.depth.unwrap_or(30),
                bound: arg_bound(g, 10_000, config)?,
                horizon: g.horizon.unwrap_or(6),
                seeds: seeds(g),
            };
            let r = match which {
                TableKind::OrbitNumbers => tables::orbit_numbers(&args, config)?
                    .param("families", args.families)
                    .param("depth", args.depth),
                TableKind::Entropies => tables::entropies(&args)?
                    .param("horizon", args.horizon)
                    .param(
                        "seeds",
                        args.seeds.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    ),
                TableKind::Connectivity => tables::connectivity(&args)?,
            };
            Ok(r.param("bound", args.bound))
        }
        Command::Search => {
            let f = function(g)?;
            let d = SearchBudget::default();
            let budget = SearchBudget {
                max_start: g
                    .n
                    .as_deref()
                    .map(|s| s.parse::<u64>())
                    .transpose()
                    .map_err(|_| Error::InvalidArgument("--n must be an integer here".into()))?
                    .unwrap_or(d.max_start),
                max_depth: g.depth.unwrap_or(d.max_depth),
                max_families: g.families.unwrap_or(d.max_families),
                scan_bound: arg_bound(g, d.scan_bound, config)?,
                step_cap: config.orbit_step_cap,
            };
            let s = search_families(f, budget)?;
            let mut table = Table::new(&["kind", "terms"]);
            for c in &s.candidates {
                let terms: Vec<String> = c.terms.iter().map(|t| t.to_string()).collect();
                let kind = serde_json::to_value(c.kind).unwrap();
                table.push(vec![
                    kind.as_str().unwrap_or_default().to_string(),
                    terms.join(","),
                ]);
            }
            let mut r = Report::new("search", ReportStatus::Info, json!(s), table).param("fn", f);
            r.conclusions
                .push(format!("{}: candidates only, nothing certified", s.label));
            Ok(r)
        }
    }
}

fn entropy_report(command: &str, e: &crate::dynamics::EntropyEstimate) -> Report {
    let seeds: Vec<String> = e.seeds.iter().map(|s| s.to_string()).collect();
    let table = Table::pairs([
        ("function", e.function.to_string()),
        ("seeds", seeds.join(",")),
        ("horizon", e.horizon.to_string()),
        ("count", e.count.to_string()),
        ("estimate", e.decimal()),
    ]);
    Report::new(command, ReportStatus::Info, json!(e), table)
        .param("fn", e.function)
        .param("seeds", &seeds)
        .param("horizon", e.horizon)
}
