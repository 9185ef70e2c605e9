use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sperner_core::bounds::{bound_report, find_threshold, threshold_margin, BoundReport};
use sperner_core::saturation::AtomPartition;
use sperner_core::search::Certificate;
use sperner_core::{
    bootstrapped, brute_force_saturated, compose, find_atoms, instantiate, parse_concrete,
    parse_family, reduce_antichain, search_min, serialize_family, seven56, three_sperner,
    trivial_construction, verify_saturated_k_sperner, ConcreteFamily, Family, Outcome,
    SearchBounds,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "sperner",
    version,
    about = "Saturated k-Sperner systems: verify, construct, reduce, bound, search"
)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a family is a saturated k-Sperner system.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Emit a built-in construction.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Required for `trivial` and `bootstrap`.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two saturated systems.
    Compose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a saturated antichain until every small member is a single atom.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the step log here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Upper and lower bounds on the saturation number.
    Bounds {
        #[arg(long, group = "mode")]
        k: Option<u32>,
        /// Range `K1..K2`, printed as tab-separated rows.
        #[arg(long, group = "mode", value_parser = parse_range)]
        table: Option<(u32, u32)>,
        /// Least k from which the error-function bound holds up to KMAX.
        #[arg(long, group = "mode", value_name = "KMAX")]
        threshold: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Bounded search for a smallest saturated k-Sperner system.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        max_atoms: u32,
        #[arg(long, default_value_t = 32)]
        max_size: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        no_forcing: bool,
        /// Write the family found here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Partition the ground set of a concrete family into atoms.
    Atoms {
        /// A `ground` file, or a `universe` file together with `--h`.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force saturation check over every subset of the ground set.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        /// Size of the block standing for H; ignored for `ground` files.
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Trivial,
    Three,
    Seven56,
    Bootstrap,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected K1..K2")?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Failure classes that map to distinct exit codes.
enum Failure {
    Usage(anyhow::Error),
    Format(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Format(_) => 3,
        }
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn format_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Format(e.into())
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(format_err)
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    let text = read(path)?;
    parse_family(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(format_err)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(format_err),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn print_json<T: Serialize>(body: T) {
    let v = Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&v).expect("serializable")
    );
}

fn verify(k: usize, input: &Path, json: bool) -> CmdResult {
    let f = read_family(input)?;
    let r = verify_saturated_k_sperner(&f, k).map_err(usage)?;
    let code = if r.verdict { 0 } else { 1 };
    if json {
        print_json(&r);
        return Ok(code);
    }
    if r.verdict {
        println!("saturated {k}-Sperner, size {}", r.size);
    } else {
        println!("not a saturated {k}-Sperner system, size {}", r.size);
    }
    for l in &r.layers {
        print!(
            "layer {}: {} members ({} small, {} large)",
            l.index, l.size, l.small, l.large
        );
        match &l.witness {
            Some(w) if !l.saturated => println!(", unsaturated, uncovered {{{}}}", join(w)),
            _ => println!(),
        }
    }
    for reason in &r.reasons {
        match reason {
            sperner_core::saturation::Reason::WrongLayerCount { expected, found } => {
                println!("WRONG_LAYER_COUNT: expected {expected} layers, found {found}")
            }
            sperner_core::saturation::Reason::LayerNotSaturated { layer, witness } => {
                println!(
                    "LAYER_NOT_SATURATED: layer {layer}, uncovered {{{}}}",
                    join(witness)
                )
            }
        }
    }
    Ok(code)
}

fn join(xs: &[u32]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn construct(kind: Kind, k: Option<u32>, out: Option<&Path>) -> CmdResult {
    let need_k = || k.ok_or_else(|| usage(anyhow!("--k is required for this kind")));
    let f = match kind {
        Kind::Three => three_sperner(),
        Kind::Seven56 => seven56(),
        Kind::Trivial => trivial_construction(need_k()?).map_err(usage)?,
        Kind::Bootstrap => bootstrapped(need_k()?).map_err(usage)?.0,
    };
    write_or_print(out, &serialize_family(&f))?;
    Ok(0)
}

fn compose_files(a: &Path, b: &Path, out: Option<&Path>) -> CmdResult {
    let g = compose(&read_family(a)?, &read_family(b)?).map_err(usage)?;
    write_or_print(out, &serialize_family(&g))?;
    Ok(0)
}

fn reduce(input: &Path, out: Option<&Path>, trace: Option<&Path>) -> CmdResult {
    let a = read_family(input)?;
    let (b, t) = reduce_antichain(&a).map_err(usage)?;
    if let Some(p) = trace {
        write_or_print(Some(p), &t.to_string())?;
    }
    write_or_print(out, &serialize_family(&b))?;
    Ok(0)
}

#[derive(Serialize)]
struct BoundsJson<'a> {
    #[serde(flatten)]
    report: &'a BoundReport,
    /// `erf_lower_log2 - (k/2 + log2(k)/2)`; absent below k = 7.
    threshold_margin: Option<f64>,
}

#[derive(Serialize)]
struct TableJson {
    rows: Vec<BoundReport>,
}

#[derive(Serialize)]
struct ThresholdJson {
    k_max: u32,
    threshold: Option<u32>,
    margin_before: Option<f64>,
    margin_at: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn bounds(
    k: Option<u32>,
    table: Option<(u32, u32)>,
    threshold: Option<u32>,
    json: bool,
) -> CmdResult {
    if let Some(k) = k {
        let r = bound_report(k).map_err(usage)?;
        let margin = threshold_margin(k).ok();
        if json {
            print_json(BoundsJson {
                report: &r,
                threshold_margin: margin,
            });
            return Ok(0);
        }
        println!("k = {k}");
        println!("baseline lower (log2)   {:.6}", r.baseline_lower_log2);
        for l in &r.layer_bounds {
            println!("layer {} lower bound    {:.6}", l.i, l.value);
        }
        println!("sum lower bound         {}", opt(r.sum_lower));
        println!("sum lower (log2)        {}", opt(r.sum_lower_log2));
        println!("erf lower (log2)        {}", opt(r.erf_lower_log2));
        println!("k/2 + log2(k)/2 - 1.66  {:.6}", r.claimed_lower_log2_166);
        println!("k/2 + log2(k)/2         {:.6}", r.claimed_lower_log2);
        println!("threshold margin        {}", opt(margin));
        match r.upper.size {
            Some(s) => println!(
                "upper bound             {s} (j = {}, s = {})",
                r.upper.j, r.upper.s
            ),
            None => println!("upper bound (log2)      {:.6}", r.upper_log2),
        }
        println!("eps_new                 {:.9}", r.eps_new);
        println!("eps_mns                 {:.9}", r.eps_mns);
        return Ok(0);
    }
    if let Some((a, b)) = table {
        let rows = (a..=b)
            .map(bound_report)
            .collect::<Result<Vec<_>, _>>()
            .map_err(usage)?;
        if json {
            print_json(TableJson { rows });
            return Ok(0);
        }
        println!(
            "k\tbaseline_log2\tsum_log2\terf_log2\tclaimed_log2\tupper_log2\tthreshold_margin"
        );
        for r in &rows {
            println!(
                "{}\t{:.6}\t{}\t{}\t{:.6}\t{:.6}\t{}",
                r.k,
                r.baseline_lower_log2,
                opt(r.sum_lower_log2),
                opt(r.erf_lower_log2),
                r.claimed_lower_log2,
                r.upper_log2,
                opt(threshold_margin(r.k).ok())
            );
        }
        return Ok(0);
    }
    if let Some(k_max) = threshold {
        let t = find_threshold(k_max).map_err(usage)?;
        let before = t.threshold.and_then(|k| t.margin_at(k.saturating_sub(1)));
        let at = t.threshold.and_then(|k| t.margin_at(k));
        if json {
            print_json(ThresholdJson {
                k_max,
                threshold: t.threshold,
                margin_before: before,
                margin_at: at,
            });
        } else {
            match t.threshold {
                Some(k) => {
                    println!("bound holds for every k in [{k}, {k_max}]");
                    println!("margin at {}: {}", k - 1, opt(before));
                    println!("margin at {k}: {}", opt(at));
                }
                None => println!("bound fails at {k_max}"),
            }
        }
        return Ok(if t.threshold.is_some() { 0 } else { 1 });
    }
    Err(usage(anyhow!(
        "one of --k, --table, --threshold is required"
    )))
}

#[derive(Serialize)]
struct SearchJson {
    outcome: &'static str,
    family: Option<String>,
    size: Option<usize>,
    nodes: u64,
    certificate: Certificate,
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    max_atoms: u32,
    max_size: usize,
    budget: u64,
    no_forcing: bool,
    output: Option<&Path>,
    json: bool,
) -> CmdResult {
    let b = SearchBounds {
        k,
        max_atoms,
        max_size,
        budget,
        forcing: !no_forcing,
    };
    let r = search_min(&b).map_err(usage)?;
    let (tag, family, code) = match &r.outcome {
        Outcome::Found(f) => ("FOUND", Some(f), 0),
        Outcome::NoneWithinBounds => ("NONE_WITHIN_BOUNDS", None, 1),
        Outcome::BudgetExhausted { best } => ("BUDGET_EXHAUSTED", best.as_ref(), 4),
    };
    if let (Some(p), Some(f)) = (output, family) {
        write_or_print(Some(p), &serialize_family(f))?;
    }
    if json {
        print_json(SearchJson {
            outcome: tag,
            family: family.map(serialize_family),
            size: family.map(Family::len),
            nodes: r.nodes,
            certificate: r.certificate,
        });
        return Ok(code);
    }
    println!("{tag}");
    println!("{}", r.certificate.statement);
    println!("nodes {}", r.nodes);
    if let (Some(f), None) = (family, output) {
        print!("{}", serialize_family(f));
    }
    Ok(code)
}

/// A `ground` file as is, or a `universe` file expanded with a block of `h`.
fn read_concrete(path: &Path, h: Option<u32>) -> Result<ConcreteFamily, Failure> {
    let text = read(path)?;
    let universe = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("universe"));
    if !universe {
        return parse_concrete(&text)
            .with_context(|| format!("{}", path.display()))
            .map_err(format_err);
    }
    let h = h.ok_or_else(|| usage(anyhow!("--h is required for a universe file")))?;
    let f = parse_family(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(format_err)?;
    instantiate(&f, h).map_err(usage)
}

fn atoms(input: &Path, h: Option<u32>, json: bool) -> CmdResult {
    let c = read_concrete(input, h)?;
    let p: AtomPartition = find_atoms(&c);
    if json {
        print_json(&p);
        return Ok(0);
    }
    for (i, class) in p.classes.iter().enumerate() {
        let mark = if class.len() >= 2 {
            "  homogeneous"
        } else {
            ""
        };
        println!("atom {}: {}{mark}", i + 1, join(class));
    }
    if !p.homogeneous_unique {
        println!("more than one homogeneous atom");
    }
    Ok(0)
}

fn oracle(input: &Path, h: u32, k: usize) -> CmdResult {
    let c = read_concrete(input, Some(h))?;
    let ok = brute_force_saturated(&c, k).map_err(usage)?;
    if ok {
        println!(
            "saturated {k}-Sperner over {} elements, size {}",
            c.n(),
            c.len()
        );
        Ok(0)
    } else {
        println!(
            "not a saturated {k}-Sperner system over {} elements, size {}",
            c.n(),
            c.len()
        );
        Ok(1)
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(usage)?;
    }
    match cli.cmd {
        Cmd::Verify { k, input, json } => verify(k, &input, json),
        Cmd::Construct { kind, k, out } => construct(kind, k, out.as_deref()),
        Cmd::Compose { a, b, out } => compose_files(&a, &b, out.as_deref()),
        Cmd::Reduce { input, out, trace } => reduce(&input, out.as_deref(), trace.as_deref()),
        Cmd::Bounds {
            k,
            table,
            threshold,
            json,
        } => bounds(k, table, threshold, json),
        Cmd::Search {
            k,
            max_atoms,
            max_size,
            budget,
            no_forcing,
            output,
            json,
        } => search(
            k,
            max_atoms,
            max_size,
            budget,
            no_forcing,
            output.as_deref(),
            json,
        ),
        Cmd::Atoms { input, h, json } => atoms(&input, h, json),
        Cmd::Oracle { input, h, k } => oracle(&input, h, k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let code = f.code();
            let (Failure::Usage(e) | Failure::Format(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
