//! Command-line surface: decide, search, verify, construct, sweep, info.
//!
//! Exit codes: 0 success/decided, 1 negative verification or sweep
//! disagreement, 2 parse/input error, 3 search budget exhausted. Human
//! output goes to stdout, diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use magic_groups::constructions::witness_for;
use magic_groups::format::{
    grid_string, render_element, square_from_json, square_to_doc, square_to_json,
    verdict_to_json, SquareDoc,
};
use magic_groups::parser::{parse_group, render_group};
use magic_groups::{
    decide_group, search_general, sweep_crosscheck, verify, Element, FGAbelianSpec, Group,
    Order, OutcomeKind, Rule, SearchOptions, Square, Status, Verdict, DEFAULT_BUDGET,
};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "magic-groups",
    version,
    about = "Decide, construct, search for, and verify magic squares over groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a group admits an n x n magic square
    Decide {
        /// Group expression, e.g. "C4 x C8", "Z x C5", "(C7:C3|4)", "table(f)"
        spec: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Attach a constructed witness square to Magic verdicts
        #[arg(long)]
        witness: bool,
        /// Witness cache (JSON lines) consulted before constructing
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Node budget for the search fallback
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Search for an n x n magic square
    Search {
        spec: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Enumerate every cell instead of computing forced cells
        #[arg(long)]
        all_off_pruning: bool,
        /// Search an infinite group over free coordinates in [-B, B]
        /// (explicitly incomplete); B defaults to 16
        #[arg(long, value_name = "B", num_args = 0..=1, default_missing_value = "16")]
        window: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Verify a square document (JSON)
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Construct a witness square for a 3-magic abelian group
    Construct {
        spec: String,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Cross-validate the oracle against search over all abelian groups of
    /// order up to a cap
    Sweep {
        #[arg(long)]
        max_order: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print order, invariant factors, and decomposition data
    Info {
        spec: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Decide { spec, n, witness, cache, budget, jobs, json } => {
            cmd_decide(&spec, n, witness, cache.as_deref(), budget, jobs, json)
        }
        Command::Search { spec, n, budget, jobs, all_off_pruning, window, json } => {
            cmd_search(&spec, n, budget, jobs, all_off_pruning, window, json)
        }
        Command::Verify { file, json } => cmd_verify(&file, json),
        Command::Construct { spec, cache, json } => {
            cmd_construct(&spec, cache.as_deref(), json)
        }
        Command::Sweep { max_order, jobs, out, json } => {
            cmd_sweep(max_order, jobs, out.as_deref(), json)
        }
        Command::Info { spec, json } => cmd_info(&spec, json),
    };
    ExitCode::from(code)
}

fn input_error(err: impl std::fmt::Display) -> u8 {
    eprintln!("error: {err}");
    EXIT_INPUT
}

fn parse_or_exit(spec: &str) -> Result<Group, u8> {
    parse_group(spec).map_err(input_error)
}

fn print_verdict(group: &Group, verdict: &Verdict, json: bool) {
    if json {
        println!("{}", verdict_to_json(group, verdict).expect("serializable verdict"));
        return;
    }
    match verdict.rule {
        Some(rule) => println!("{} (rule {rule})", verdict.status),
        None => println!("{}", verdict.status),
    }
    if let Some(square) = &verdict.witness {
        print!("{}", grid_string(group, square).expect("witness renders"));
        if let Ok(report) = verify(group, square) {
            if let Some(p) = report.magic_product {
                println!("product: {}", render_element(group, &p).expect("renders"));
            }
        }
    }
}

fn cmd_decide(
    spec: &str,
    n: usize,
    witness: bool,
    cache: Option<&Path>,
    budget: u64,
    jobs: usize,
    json: bool,
) -> u8 {
    let group = match parse_or_exit(spec) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if n == 0 {
        return input_error("side length must be at least 1");
    }
    let mut verdict = decide_group(&group, n, Some(budget), jobs);
    if witness && verdict.status == Status::Magic && verdict.witness.is_none() && n == 3 {
        if let Group::Abelian(abelian) = &group {
            match obtain_witness(&group, abelian, cache) {
                Ok(square) => verdict.witness = square,
                Err(code) => return code,
            }
        }
    }
    if verdict.status == Status::Unknown && verdict.rule == Some(Rule::Search) {
        eprintln!("search budget of {budget} nodes exhausted before a decision");
        print_verdict(&group, &verdict, json);
        return EXIT_BUDGET;
    }
    print_verdict(&group, &verdict, json);
    EXIT_OK
}

#[derive(Serialize)]
struct SearchDoc {
    outcome: String,
    nodes_expanded: u64,
    square: Option<SquareDoc>,
}

fn cmd_search(
    spec: &str,
    n: usize,
    budget: u64,
    jobs: usize,
    all_off_pruning: bool,
    window: Option<i64>,
    json: bool,
) -> u8 {
    let group = match parse_or_exit(spec) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let opts = SearchOptions {
        budget: Some(budget),
        jobs,
        forced_cells: !all_off_pruning,
        window,
    };
    let outcome = match search_general(&group, n, &opts) {
        Ok(o) => o,
        Err(e) => return input_error(e),
    };
    if window.is_some() && group.order() == Order::Infinite {
        eprintln!(
            "note: windowed exploration of an infinite group; \
             exhaustion covers only the window"
        );
    }
    let (label, square, code) = match outcome.kind {
        OutcomeKind::Found(sq) => ("Found", Some(sq), EXIT_OK),
        OutcomeKind::ExhaustedNone => ("ExhaustedNone", None, EXIT_OK),
        OutcomeKind::BudgetExceeded => ("BudgetExceeded", None, EXIT_BUDGET),
    };
    if json {
        let doc = SearchDoc {
            outcome: label.to_string(),
            nodes_expanded: outcome.nodes_expanded,
            square: square
                .as_ref()
                .map(|sq| square_to_doc(&group, sq, None).expect("square renders")),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!(
            "{label} ({} nodes, {:.1?})",
            outcome.nodes_expanded, outcome.elapsed
        );
        if let Some(sq) = &square {
            print!("{}", grid_string(&group, sq).expect("square renders"));
            if let Ok(report) = verify(&group, sq) {
                if let Some(p) = report.magic_product {
                    println!("product: {}", render_element(&group, &p).expect("renders"));
                }
            }
        }
    }
    code
}

#[derive(Serialize)]
struct ReportDoc {
    is_magic: bool,
    lines_equal: bool,
    entries_distinct: bool,
    magic_product: Option<String>,
    line_products: Vec<String>,
    duplicate_pairs: Vec<((usize, usize), (usize, usize))>,
}

fn cmd_verify(file: &Path, json: bool) -> u8 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", file.display())),
    };
    let (group, square, claimed) = match square_from_json(&text) {
        Ok(x) => x,
        Err(e) => return input_error(e),
    };
    let report = match verify(&group, &square) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let render = |e: &Element| render_element(&group, e).expect("group elements render");
    if let (Some(claimed), Some(actual)) = (&claimed, &report.magic_product) {
        if claimed != actual {
            eprintln!(
                "note: document claims product {} but the lines multiply to {}",
                render(claimed),
                render(actual)
            );
        }
    }
    if json {
        let doc = ReportDoc {
            is_magic: report.is_magic,
            lines_equal: report.lines_equal,
            entries_distinct: report.entries_distinct,
            magic_product: report.magic_product.as_ref().map(render),
            line_products: report.line_products.iter().map(render).collect(),
            duplicate_pairs: report.duplicate_pairs.clone(),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", grid_string(&group, &square).expect("square renders"));
        println!("lines_equal: {}", report.lines_equal);
        println!("entries_distinct: {}", report.entries_distinct);
        if !report.duplicate_pairs.is_empty() {
            let pairs: Vec<String> = report
                .duplicate_pairs
                .iter()
                .map(|(a, b)| format!("({},{})=({},{})", a.0, a.1, b.0, b.1))
                .collect();
            println!("duplicates: {}", pairs.join(" "));
        }
        match &report.magic_product {
            Some(p) if report.is_magic => println!("is_magic: true (product {})", render(p)),
            _ => println!("is_magic: false"),
        }
    }
    if report.is_magic {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_construct(spec: &str, cache: Option<&Path>, json: bool) -> u8 {
    let group = match parse_or_exit(spec) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let Group::Abelian(abelian) = &group else {
        return input_error(
            "construct routes theorem witnesses for abelian groups; \
             use `search` for table or semidirect groups",
        );
    };
    let square = match obtain_witness(&group, abelian, cache) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match square {
        Some(square) => {
            if json {
                let product = verify(&group, &square)
                    .ok()
                    .and_then(|r| r.magic_product);
                println!(
                    "{}",
                    square_to_json(&group, &square, product.as_ref()).expect("square renders")
                );
            } else {
                print!("{}", grid_string(&group, &square).expect("square renders"));
                if let Ok(report) = verify(&group, &square) {
                    if let Some(p) = report.magic_product {
                        println!(
                            "product: {}",
                            render_element(&group, &p).expect("renders")
                        );
                    }
                }
            }
            EXIT_OK
        }
        None => {
            println!("NotMagic: no 3x3 magic square exists in this group");
            EXIT_NEGATIVE
        }
    }
}

fn cmd_sweep(max_order: u64, jobs: usize, out: Option<&Path>, json: bool) -> u8 {
    let report = sweep_crosscheck(max_order, jobs);
    let body = if json { report.to_json_lines() } else { report.to_text() };
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, body) {
                return input_error(format!("{}: {e}", path.display()));
            }
            println!(
                "{} groups checked, {} disagreements (report written to {})",
                report.records.len(),
                report.disagreements,
                path.display()
            );
        }
        None => print!("{body}"),
    }
    if report.disagreements > 0 {
        eprintln!("oracle/search disagreement detected");
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

#[derive(Serialize, Deserialize)]
struct InfoDoc {
    group: String,
    order: String,
    commutative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant_factors: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    primary_decomposition: Option<Vec<(u64, Vec<u32>)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<usize>>,
}

fn cmd_info(spec: &str, json: bool) -> u8 {
    let group = match parse_or_exit(spec) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut doc = InfoDoc {
        group: render_group(&group).unwrap_or_else(|_| group.describe()),
        order: group.order().to_string(),
        commutative: group.is_commutative(),
        free_rank: None,
        invariant_factors: None,
        primary_decomposition: None,
        alpha: None,
    };
    if let Group::Abelian(spec) = &group {
        let dec = spec.primary_decomposition();
        doc.free_rank = Some(spec.free_rank());
        doc.invariant_factors = Some(spec.canonical_invariant_factors());
        doc.primary_decomposition =
            Some(dec.by_prime().iter().map(|(&p, e)| (p, e.clone())).collect());
        doc.alpha = Some(dec.alpha_vector());
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("group: {}", doc.group);
        println!("order: {}", doc.order);
        println!("commutative: {}", doc.commutative);
        if let Some(r) = doc.free_rank {
            println!("free rank: {r}");
        }
        if let Some(factors) = &doc.invariant_factors {
            println!("invariant factors: {factors:?}");
        }
        if let Some(primary) = &doc.primary_decomposition {
            let parts: Vec<String> =
                primary.iter().map(|(p, e)| format!("{p}: {e:?}")).collect();
            println!("primary decomposition: {}", parts.join("; "));
        }
        if let Some(alpha) = &doc.alpha {
            println!("alpha: {alpha:?}");
        }
    }
    EXIT_OK
}

// --- witness cache: append-only JSON lines keyed by invariant factors ----

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    free_rank: usize,
    invariant_factors: Vec<u64>,
    square: SquareDoc,
}

fn obtain_witness(
    group: &Group,
    spec: &FGAbelianSpec,
    cache: Option<&Path>,
) -> Result<Option<Square>, u8> {
    if let Some(path) = cache {
        if let Some(square) = cache_lookup(path, group, spec) {
            return Ok(Some(square));
        }
    }
    let square = witness_for(spec).map_err(input_error)?;
    if let (Some(path), Some(square)) = (cache, &square) {
        if let Err(e) = cache_append(path, group, spec, square) {
            eprintln!("warning: could not update cache {}: {e}", path.display());
        }
    }
    Ok(square)
}

fn cache_lookup(path: &Path, group: &Group, spec: &FGAbelianSpec) -> Option<Square> {
    let text = fs::read_to_string(path).ok()?;
    let key = spec.canonical_invariant_factors();
    for line in text.lines() {
        let Ok(record) = serde_json::from_str::<CacheRecord>(line) else {
            continue;
        };
        if record.free_rank != spec.free_rank() || record.invariant_factors != key {
            continue;
        }
        let Ok((cached_group, square, _)) =
            magic_groups::format::doc_to_square(&record.square)
        else {
            continue;
        };
        // the cached square is only usable in the same presentation, and
        // only when it still verifies
        if &cached_group == group {
            if let Ok(report) = verify(group, &square) {
                if report.is_magic {
                    return Some(square);
                }
            }
        }
    }
    None
}

fn cache_append(
    path: &Path,
    group: &Group,
    spec: &FGAbelianSpec,
    square: &Square,
) -> std::io::Result<()> {
    let record = CacheRecord {
        free_rank: spec.free_rank(),
        invariant_factors: spec.canonical_invariant_factors(),
        square: square_to_doc(group, square, None)
            .map_err(|e| std::io::Error::other(e.to_string()))?,
    };
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", serde_json::to_string(&record).expect("serializable"))
}
