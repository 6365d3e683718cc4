//! `pgclass`: verification, invariants, isomorphism, classification and export
//! for class-2 groups of exponent p given as flow digraphs.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use pgclass::catalog::{self, ENTRIES};
use pgclass::central_products::{find_central_decomposition, name_factor, DecompositionOutcome};
use pgclass::digraph::{emit, parse, to_dot};
use pgclass::ff::{FpMatrix, Prime};
use pgclass::invariants::{
    center_preimage_profile, frequency_vector, rank_signature, small_centralizer_properties,
};
use pgclass::isomorphism::{classify_all, is_isomorphic, IsoOutcome, SearchBudget};
use pgclass::verify::{self, Verdict};
use pgclass::{CommutatorStructure, Error};
use serde_json::json;

use report::{Output, Report};

#[derive(Parser)]
#[command(name = "pgclass", version, about = "Class-2 groups of exponent p as alternating bilinear maps")]
struct Cli {
    /// print the structured JSON report instead of tables
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the catalog tables and the uniqueness replay for each prime
    Verify {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [3, 5, 7])]
        p: Vec<u32>,
    },
    /// Frequency vector, rank signature, small-centralizer flags, preimage profile
    Invariants { file: PathBuf },
    /// Decide isomorphism of two digraph files
    Iso {
        file1: PathBuf,
        file2: PathBuf,
        /// backtracking node budget
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Orbits of all derived-rank-2 structures on d generators
    Classify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u32,
    },
    /// Central decomposition and factor names
    Decompose { file: PathBuf },
    /// List catalog entries or serialize one
    Catalog {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Fdg,
    Dot,
}

fn prime(p: u32) -> anyhow::Result<Prime> {
    Prime::new(p).with_context(|| format!("invalid prime {p}"))
}

fn load(path: &Path) -> anyhow::Result<CommutatorStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(CommutatorStructure::from_digraph(&g))
}

fn rows(m: &FpMatrix) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn fmt_vec(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn unknown_or<T>(r: pgclass::Result<T>) -> anyhow::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn run_verify(primes: &[u32], out: &mut Output) -> anyhow::Result<()> {
    for &q in primes {
        let p = prime(q)?;
        out.line(format!("== p = {q}"));
        let freq = verify::verify_frequencies(p);
        out.line(format!("{:<8} {:<22} {:<12} {:<12} verdict", "group", "factors", "computed", "expected"));
        for item in &freq.items {
            let factors = verify::expected_factors(&item.name)?.join(" ");
            out.line(format!(
                "{:<8} {:<22} {:<12} {:<12} {}",
                item.name,
                factors,
                fmt_vec(&item.computed),
                fmt_vec(&item.expected),
                item.verdict.as_str()
            ));
            out.item(json!({"check": "frequency", "p": q, "detail": item}), item.verdict);
        }
        for finding in &freq.findings {
            out.line(format!(
                "finding: {} is {} with frequencies {} (tabulated {})",
                finding.name,
                if finding.special { "special" } else { "not special" },
                fmt_vec(&finding.computed),
                fmt_vec(&finding.tabulated)
            ));
        }
        out.extra(&format!("findings_p{q}"), &freq.findings);

        let distinct = verify::verify_pairwise_distinct(p);
        for item in &distinct.items {
            if item.expected != Some(pgclass::isomorphism::Discriminator::Shape) || item.verdict != Verdict::Pass {
                let by = item.expected.map_or("none", |d| d.label());
                out.line(format!("distinct {} / {}: by {} -> {}", item.first, item.second, by, item.verdict.as_str()));
            }
            out.item(json!({"check": "distinct", "p": q, "detail": item}), item.verdict);
        }
        let same_order = distinct.items.len();
        out.line(format!("pairwise distinct: {} pairs, {}", same_order, distinct.verdict.as_str()));

        let partition = verify::verify_partition_exhaustion(p);
        for item in &partition.items {
            let dims = item.dimensions.as_deref().map_or("?".to_string(), |d| {
                d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+")
            });
            let factors = item.factors.as_ref().map_or("?".to_string(), |f| f.join(" "));
            out.line(format!("decompose {:<2} {:<6} {:<22} {}", item.name, dims, factors, item.verdict.as_str()));
            out.item(json!({"check": "partition", "p": q, "detail": item}), item.verdict);
        }

        let replay = verify::replay_section5(p);
        for step in &replay.steps {
            out.line(format!("replay step {}: {} -> {}", step.index, step.description, step.verdict.as_str()));
        }
        out.line(format!("replay ends at group A: {}", replay.equals_group_a));
        out.item(json!({"check": "replay", "p": q, "detail": replay}), replay.verdict);
    }
    Ok(())
}

fn run_invariants(path: &Path, out: &mut Output) -> anyhow::Result<()> {
    let cs = load(path)?;
    out.line(format!("d = {}, r = {}, p = {}, special = {}", cs.d(), cs.r(), cs.p().value(), cs.is_special()));
    if cs.r() == 2 {
        let fv = frequency_vector(&cs)?;
        out.line(format!("frequency vector: {fv} (elementary abelian quotients: {})", fv.zero));
        out.item(json!({"invariant": "frequency", "value": fv}), Verdict::Pass);
    }
    match unknown_or(rank_signature(&cs))? {
        Some(sig) => {
            out.line(format!("rank signature: {sig}"));
            out.item(json!({"invariant": "rank-signature", "value": sig}), Verdict::Pass);
        }
        None => {
            out.line("rank signature: unknown (too many points)");
            out.item(json!({"invariant": "rank-signature"}), Verdict::Unknown);
        }
    }
    match unknown_or(small_centralizer_properties(&cs))? {
        Some(sc) => {
            out.line(format!(
                "small centralizers: {} points, subspace = {}, commuting = {}",
                sc.points, sc.is_subspace, sc.is_commuting
            ));
            out.item(json!({"invariant": "small-centralizer", "value": sc}), Verdict::Pass);
        }
        None => {
            out.line("small centralizers: unknown (too many points)");
            out.item(json!({"invariant": "small-centralizer"}), Verdict::Unknown);
        }
    }
    if cs.r() == 2 {
        let profile = center_preimage_profile(&cs)?;
        for e in &profile {
            out.line(format!(
                "  line {:?}: quotient E_{} , center preimage {}",
                e.line,
                2 * e.n + 1,
                if e.abelian { "abelian" } else { "non-abelian" }
            ));
        }
        out.item(json!({"invariant": "preimage-profile", "value": profile}), Verdict::Pass);
    }
    Ok(())
}

fn run_iso(a: &Path, b: &Path, budget: Option<u64>, out: &mut Output) -> anyhow::Result<()> {
    let (ca, cb) = (load(a)?, load(b)?);
    let mut sb = SearchBudget::default();
    if let Some(n) = budget {
        sb.max_nodes = n;
    }
    match is_isomorphic(&ca, &cb, sb)? {
        IsoOutcome::Iso(w) => {
            out.line("iso");
            out.line(format!("S = {:?}", rows(w.s())));
            out.line(format!("T = {:?}", rows(w.t())));
            out.item(json!({"result": "iso", "s": rows(w.s()), "t": rows(w.t())}), Verdict::Pass);
        }
        IsoOutcome::NotIso => {
            out.line("not-iso");
            out.item(json!({"result": "not-iso"}), Verdict::Pass);
        }
        IsoOutcome::Exhausted { nodes } => {
            out.line(format!("exhausted after {nodes} nodes"));
            out.item(json!({"result": "exhausted", "nodes": nodes}), Verdict::Unknown);
        }
    }
    Ok(())
}

fn run_classify(d: usize, q: u32, out: &mut Output) -> anyhow::Result<()> {
    let p = prime(q)?;
    let Some(c) = unknown_or(classify_all(d, p))? else {
        out.line(format!("classification at d = {d}, p = {q} exceeds the structure cap"));
        out.item(json!({"d": d, "p": q}), Verdict::Unknown);
        return Ok(());
    };
    let special = c.special_orbits().count();
    out.line(format!("structures: {}", c.total));
    out.line(format!("orbits: {}", c.orbits.len()));
    out.line(format!("special orbits: {special}"));
    out.extra("total", c.total);
    out.extra("orbits", c.orbits.len());
    out.extra("special_orbits", special);
    for (k, o) in c.orbits.iter().enumerate() {
        let name = format!("orbit{}", k + 1);
        let fdg = emit(&o.representative.to_digraph(&name));
        out.line(format!("# size {}, special {}", o.size, o.special));
        out.human.push_str(&fdg);
        out.item(json!({"orbit": k + 1, "size": o.size, "special": o.special, "fdg": fdg}), Verdict::Pass);
    }
    Ok(())
}

fn run_decompose(path: &Path, out: &mut Output) -> anyhow::Result<()> {
    let cs = load(path)?;
    let (special, abelian) = cs.strip_abelian_part();
    if abelian > 0 {
        out.line(format!("elementary abelian direct factor of rank {abelian}"));
    }
    out.extra("abelian_rank", abelian);
    if special.d() == 0 {
        out.line("no non-abelian part");
        return Ok(());
    }
    let factors = match unknown_or(find_central_decomposition(&special))? {
        None => {
            out.line("decomposition: unknown (search budget exceeded)");
            out.item(json!({"dimensions": null}), Verdict::Unknown);
            return Ok(());
        }
        Some(DecompositionOutcome::Indecomposable) => vec![special.clone()],
        Some(DecompositionOutcome::Decomposed(dec)) => dec.factor_structures().to_vec(),
    };
    let mut parts = Vec::new();
    for f in &factors {
        let name = match name_factor(f) {
            Ok(n) => Some(n),
            Err(Error::UnknownFactor { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        parts.push((f.d(), name));
    }
    parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let dims: Vec<String> = parts.iter().map(|(d, _)| d.to_string()).collect();
    out.line(format!("dimensions: {}", dims.join("+")));
    if parts.len() == 1 {
        out.line("indecomposable");
    }
    for (d, name) in &parts {
        out.line(format!("  {d} generators: {}", name.as_deref().unwrap_or("not in the catalog")));
        out.item(json!({"dimension": d, "factor": name}), Verdict::Pass);
    }
    Ok(())
}

fn run_catalog(name: Option<&str>, q: u32, format: Option<Format>, out: &mut Output) -> anyhow::Result<()> {
    let p = prime(q)?;
    let Some(name) = name else {
        if format.is_some() {
            bail!("--emit needs --name");
        }
        out.line(format!("{:<8} {:<6} {:<22} frequencies at p = {q}", "group", "order", "factors"));
        for e in &ENTRIES {
            let factors = verify::expected_factors(e.name)?;
            let freq = e.expected_frequency(p);
            out.line(format!(
                "{:<8} p^{:<4} {:<22} {}",
                e.name,
                e.order_exponent,
                factors.join(" "),
                if freq.is_empty() { "-".into() } else { fmt_vec(&freq) }
            ));
            out.item(
                json!({"name": e.name, "order_exponent": e.order_exponent, "gens": e.gens,
                       "derived_rank": e.derived_rank, "factors": factors, "frequency": freq}),
                Verdict::Pass,
            );
        }
        return Ok(());
    };
    let entry = catalog::lookup(name)?;
    let cs = catalog::build(entry.name, p)?;
    let g = cs.to_digraph(entry.name);
    let text = match format.unwrap_or(Format::Fdg) {
        Format::Fdg => emit(&g),
        Format::Dot => to_dot(&g),
    };
    out.human.push_str(&text);
    out.item(json!({"name": entry.name, "p": q, "text": text}), Verdict::Pass);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let command = std::env::args().skip(1).filter(|a| a != "--json").collect::<Vec<_>>().join(" ");
    let mut out = Output::new();
    let result = match &cli.command {
        Command::Verify { p } => run_verify(p, &mut out),
        Command::Invariants { file } => run_invariants(file, &mut out),
        Command::Iso { file1, file2, budget } => run_iso(file1, file2, *budget, &mut out),
        Command::Classify { d, p } => run_classify(*d, *p, &mut out),
        Command::Decompose { file } => run_decompose(file, &mut out),
        Command::Catalog { name, p, emit } => run_catalog(name.as_deref(), *p, *emit, &mut out),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let code = out.exit_code();
    let human = std::mem::take(&mut out.human);
    let report = Report::new(command, out, started);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error for a report writer
    let _ = if cli.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("serializable report"))
    } else {
        eprintln!("{}", report.summary_line());
        stdout.write_all(human.as_bytes())
    };
    ExitCode::from(code as u8)
}
