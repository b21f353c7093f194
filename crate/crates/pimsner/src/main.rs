//! Command line interface: analyze declarative instance files, list
//! gauge-invariant ideal pairs, replay literal-definition oracles, and run
//! the cross-validation sweeps.
//!
//! Exit codes: 0 analysis completed, 1 invalid input or exhausted budget,
//! 2 internal inconsistency (a cross-check between two routes to the same
//! answer failed, which signals a bug rather than a bad input).

use clap::{Parser, Subcommand};
use pimsner::conditions::{
    is_strongly_topologically_free_on, is_topologically_aperiodic_on, is_topologically_free_on,
    weak_aperiodicity_candidates,
};
use pimsner::corr::{self, FinCorr, Ideal};
use pimsner::digraph::MultiDigraph;
use pimsner::instance::{Instance, InstanceDoc};
use pimsner::mask::{self, Mask};
use pimsner::oracle::{oracle_condition, ConditionKind, OracleError};
use pimsner::report::AnalysisReport;
use pimsner::sweep;
use pimsner::verdict::{self, VerdictError};
use pimsner::{bimodule, instance};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pimsner",
    version,
    about = "Decide uniqueness and simplicity questions for finite-scale C*-correspondences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an instance file and print its verdict report.
    Check {
        file: PathBuf,
        /// Emit the machine-readable report instead of the human one.
        #[arg(long)]
        json: bool,
    },
    /// List the gauge-invariant ideal pairs of a correspondence file.
    Tpairs { file: PathBuf },
    /// Replay literal-definition oracles against the fast checkers.
    Oracle {
        file: PathBuf,
        /// Path length horizon for the per-length oracles.
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: u64,
    },
    /// Run every cross-validation sweep and report instance counts.
    Selftest {
        /// Largest number of matrix blocks in the exhaustive family.
        #[arg(long, default_value_t = 3)]
        size: u32,
        /// Largest multiplicity entry in the exhaustive family.
        #[arg(long = "max-mult", default_value_t = 2)]
        max_mult: u64,
        /// Seed for the randomized families.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// User-facing failure split along the exit-code contract.
enum Failure {
    /// Bad input or an exhausted enumeration budget: exit 1.
    Input(String),
    /// Two routes to the same answer disagreed: exit 2.
    Inconsistency(String),
}

impl From<instance::InputError> for Failure {
    fn from(e: instance::InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<VerdictError> for Failure {
    fn from(e: VerdictError) -> Self {
        match e {
            VerdictError::Internal(_) => Failure::Inconsistency(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure::Input(format!(
                "{e}; rerun with a smaller --max-n or a smaller instance"
            )),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    configure_workers();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { file, json } => cmd_check(&file, json),
        Command::Tpairs { file } => cmd_tpairs(&file),
        Command::Oracle { file, max_n } => cmd_oracle(&file, max_n),
        Command::Selftest { size, max_mult, seed } => cmd_selftest(size, max_mult, seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Inconsistency(message)) => {
            eprintln!("internal inconsistency: {message}");
            ExitCode::from(2)
        }
    }
}

/// CK_WORKERS caps the worker pool; unset means available parallelism.
fn configure_workers() {
    if let Ok(raw) = std::env::var("CK_WORKERS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring CK_WORKERS={raw:?} (expected a positive integer)"),
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(InstanceDoc::parse(&text)?.resolve()?)
}

fn cmd_check(path: &Path, json: bool) -> Result<(), Failure> {
    let report = analyze(load(path)?)?;
    if json {
        let rendered = serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::Inconsistency(format!("report serialization failed: {e}")))?;
        println!("{rendered}");
    } else {
        print!("{}", report.render_human());
    }
    Ok(())
}

fn analyze(instance: Instance) -> Result<AnalysisReport, Failure> {
    match instance {
        Instance::Graph { graph, u } => Ok(verdict::graph_report(&graph, u)?),
        Instance::Map { map, u } => Ok(verdict::map_report(&map, u)?),
        Instance::Correspondence { corr, ideal } | Instance::Endomorphism { corr, ideal } => {
            corr_report(&corr, ideal)
        }
        Instance::Quiver { quiver } => {
            let (corr, ideal) = verdict::from_quiver(&quiver)?;
            let mut report = corr_report(&corr, ideal)?;
            if quiver.is_genuine() {
                // Positive weights: freeness of the weighted graph itself
                // must match the dual-graph verdict.
                verdict::quiver_tf_equivalence(&quiver)?;
                report
                    .notes
                    .push("edge graph and dual graph agree on topological freeness".to_string());
            }
            Ok(report)
        }
    }
}

/// The largest admissible ideal gets the full simplicity analysis, the zero
/// ideal the universal-cover analysis, anything else the plain verdict.
fn corr_report(c: &FinCorr, ideal: Ideal) -> Result<AnalysisReport, Failure> {
    if ideal == c.jx() {
        Ok(verdict::simplicity_verdict(c)?)
    } else if ideal == 0 {
        Ok(verdict::toeplitz_verdict(c)?)
    } else {
        Ok(verdict::uniqueness_verdict(c, ideal)?)
    }
}

fn cmd_tpairs(path: &Path) -> Result<(), Failure> {
    let (corr, ideal) = match load(path)? {
        Instance::Correspondence { corr, ideal } => (corr, ideal),
        other => {
            return Err(Failure::Input(format!(
                "expected a correspondence file, got kind \"{}\"",
                instance_kind(&other)
            )))
        }
    };
    if corr.k() > 24 {
        return Err(Failure::Input(
            "pair enumeration supports at most 24 summands".to_string(),
        ));
    }
    let pairs = corr.t_pairs(ideal).map_err(|e| Failure::Input(e.to_string()))?;
    for pair in &pairs {
        println!("({}, {})", mask::render(pair.ideal), mask::render(pair.relative_ideal));
    }
    println!("count: {}", pairs.len());
    Ok(())
}

fn instance_kind(i: &Instance) -> &'static str {
    match i {
        Instance::Graph { .. } => "graph",
        Instance::Map { .. } => "mvmap",
        Instance::Correspondence { .. } => "correspondence",
        Instance::Quiver { .. } => "quiver",
        Instance::Endomorphism { .. } => "endomorphism",
    }
}

fn cmd_oracle(path: &Path, max_n: u64) -> Result<(), Failure> {
    let mut table = String::new();
    let mismatches = match load(path)? {
        Instance::Graph { graph, u } => oracle_graph_table(&graph, u, max_n, &mut table)?,
        Instance::Map { map, u } => oracle_graph_table(&map.to_graph(), u, max_n, &mut table)?,
        Instance::Correspondence { corr, ideal } | Instance::Endomorphism { corr, ideal } => {
            oracle_corr_table(&corr, ideal, max_n, &mut table)?
        }
        Instance::Quiver { quiver } => {
            let (corr, ideal) = verdict::from_quiver(&quiver)?;
            oracle_corr_table(&corr, ideal, max_n, &mut table)?
        }
    };
    print!("{table}");
    if mismatches == 0 {
        println!("all conditions agree");
        Ok(())
    } else {
        Err(Failure::Inconsistency(format!(
            "{mismatches} condition(s) disagree with their oracle"
        )))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// One line per condition comparing the fast checker with the per-length
/// oracle at the requested horizon. Returns the number of disagreements.
fn oracle_graph_table(
    g: &MultiDigraph,
    u: Mask,
    max_n: u64,
    out: &mut String,
) -> Result<u32, Failure> {
    let f = g.mv_map();
    let mut mismatches = 0u32;
    let mut row = |label: &str, fast: bool, slow: bool, out: &mut String| {
        let verdict = if fast == slow { "agree" } else { "DISAGREE" };
        let _ = writeln!(out, "{label}: checker={} oracle={} {verdict}", yes_no(fast), yes_no(slow));
        if fast != slow {
            mismatches += 1;
        }
    };

    let tf = is_topologically_free_on(g, u).map_err(OracleError::from)?;
    let slow = oracle_condition(g, u, ConditionKind::TopFree, max_n)?;
    row("topological freeness", tf.holds, slow.holds, out);

    let strong = is_strongly_topologically_free_on(g, u).map_err(OracleError::from)?;
    let slow = oracle_condition(g, u, ConditionKind::StrongTopFree, max_n)?;
    row("strong topological freeness", strong.holds, slow.holds, out);

    let ap = is_topologically_aperiodic_on(&f, u).map_err(OracleError::from)?;
    let slow = oracle_condition(g, u, ConditionKind::Aperiodic, max_n)?;
    row("topological aperiodicity", ap.holds, slow.holds, out);
    let slow = oracle_condition(g, u, ConditionKind::AperiodicPaths, max_n)?;
    row("aperiodicity, path form", ap.holds, slow.holds, out);

    let candidates = weak_aperiodicity_candidates(&f, u).map_err(OracleError::from)?;
    let weak = candidates.iter().all(|c| c.holds);
    let slow = oracle_condition(g, u, ConditionKind::WeakAperiodic, max_n)?;
    // A failure located beyond the oracle horizon is out of its reach.
    let beyond_horizon = !weak
        && slow.holds
        && candidates.iter().filter_map(|c| c.first_failure).all(|len| len > max_n);
    row("weak topological aperiodicity", weak, slow.holds || beyond_horizon, out);

    Ok(mismatches)
}

/// Cycle detection against the path oracle for every admissible ideal, the
/// dual-graph condition table, and (at up to two summands) the matrix-unit
/// model of the bimodule. Returns the number of disagreements.
fn oracle_corr_table(
    c: &FinCorr,
    ideal: Ideal,
    max_n: u64,
    out: &mut String,
) -> Result<u32, Failure> {
    if c.k() > 16 {
        return Err(Failure::Input(
            "oracle replay enumerates all admissible ideals and supports at most 16 summands"
                .to_string(),
        ));
    }
    let mut mismatches = 0u32;
    for j in mask::subsets(c.jx()) {
        let fast = c.is_j_acyclic(j).map_err(|e| Failure::Input(e.to_string()))?;
        let slow = corr::j_acyclic_oracle(c, j).map_err(|e| Failure::Input(e.to_string()))?;
        let verdict = if fast.holds == slow.holds { "agree" } else { "DISAGREE" };
        let _ = writeln!(
            out,
            "ideal {} acyclic: checker={} oracle={} {verdict}",
            mask::render(j),
            yes_no(fast.holds),
            yes_no(slow.holds)
        );
        if fast.holds != slow.holds {
            mismatches += 1;
        }
    }

    let _ = writeln!(out, "dual graph conditions on ideal {}:", mask::render(ideal));
    mismatches += oracle_graph_table(&c.dual_graph(), ideal, max_n, out)?;

    if c.k() <= 2 {
        let mut row = |label: &str, ok: bool, out: &mut String| {
            let verdict = if ok { "agree" } else { "DISAGREE" };
            let _ = writeln!(out, "{label}: {verdict}");
            if !ok {
                mismatches += 1;
            }
        };
        row(
            "matrix-unit dual multiplicities",
            bimodule::dual_multiplicities(c) == *c.mult(),
            out,
        );
        let formulas_agree = mask::subsets(c.full()).into_iter().all(|s| {
            bimodule::image_ideal_literal(c, s) == c.image_ideal(s)
                && bimodule::preimage_ideal_literal(c, s) == c.preimage_ideal(s)
                && bimodule::j_of_ideal_literal(c, s).0
                    == (s | (c.full() & !c.preimage_ideal(s)))
        });
        row("matrix-unit ideal operators", formulas_agree, out);
        let tensors_agree = (1..=3u32).all(|n| {
            let power = if n == 1 { c.clone() } else { c.tensor_power(n).expect("small power") };
            let expect: u64 = power
                .mult()
                .iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &m)| (i, j, m)))
                .map(|(i, j, m)| m * c.dims()[i] * c.dims()[j])
                .sum();
            bimodule::tensor_dim_literal(c, n) == expect
        });
        row("matrix-unit tensor powers", tensors_agree, out);
    }
    Ok(mismatches)
}

fn cmd_selftest(size: u32, max_mult: u64, seed: u64) -> Result<(), Failure> {
    if size < 1 || size > 4 {
        return Err(Failure::Input("--size must be between 1 and 4".to_string()));
    }
    if max_mult < 1 {
        return Err(Failure::Input("--max-mult must be at least 1".to_string()));
    }
    let report = sweep::run_selftest(size, max_mult, seed);
    for suite in &report.suites {
        println!(
            "suite {}: {} instances, {} violation(s)",
            suite.suite,
            suite.instances,
            suite.violations.len()
        );
    }
    println!("total: {} instances", report.total_instances());
    if report.is_clean() {
        println!("no violations");
        return Ok(());
    }
    let first = report.violations().next().expect("not clean");
    let path = Path::new("counterexample.json");
    let body = serde_json::to_string_pretty(&first.doc)
        .map_err(|e| Failure::Inconsistency(format!("counterexample serialization failed: {e}")))?;
    if let Err(e) = std::fs::write(path, body) {
        eprintln!("warning: cannot write {}: {e}", path.display());
    } else {
        println!("counterexample written to {}", path.display());
    }
    Err(Failure::Inconsistency(format!(
        "suite {} found: {}",
        first.suite, first.description
    )))
}
