use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use squared_squares::enumerator::{self, Collect, EnumerationReport, SearchError, SearchOptions};
use squared_squares::geometry::{self, Dissection};
use squared_squares::io::{self, text, DissectionDocument};
use squared_squares::lemma::{self, CompositionFilter, LemmaError, LemmaId, LemmaLab};
use squared_squares::oracle::{self, OracleError};
use squared_squares::symmetry;

const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "sqsq", version, about = "Enumerate and check nontrivial squared squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustively search every size in a range.
    Enumerate {
        #[arg(long)]
        min: u32,
        #[arg(long)]
        max: u32,
        /// Turn off both pruning rules.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// json, text, bouwkamp, or `svg-dir PATH`.
        #[arg(long, num_args = 1..=2, value_names = ["FORMAT", "PATH"])]
        emit: Vec<String>,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Print order, perfection, simplicity, triviality and border contact.
    Classify { file: PathBuf },
    /// List border compositions of a side length.
    Compositions {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        min_parts: usize,
        /// Apply every lemma filter and drop reversed duplicates.
        #[arg(long)]
        apply_filters: bool,
    },
    /// Machine-check one registered lemma.
    VerifyLemma {
        id: String,
        #[arg(long, default_value_t = 17)]
        max_n: u32,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Draw a dissection as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 24)]
        cell_px: u32,
    },
    /// Run the brute-force oracle, optionally against the main search.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        include_trivial: bool,
        #[arg(long)]
        compare: bool,
    },
    /// Reproduce the counts for every size from 1 to 17.
    Theorem {
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// A failure mapped to an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure { code: EXIT_INVALID, message: message.to_string() }
    }

    fn verify(message: impl ToString) -> Self {
        Failure { code: EXIT_VERIFY, message: message.to_string() }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = if matches!(e, SearchError::BudgetExhausted { .. }) { EXIT_BUDGET } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

impl From<LemmaError> for Failure {
    fn from(e: LemmaError) -> Self {
        match e {
            LemmaError::Search(s) => s.into(),
            other => Failure::invalid(other),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::invalid(e)
    }
}

type Outcome = Result<(), Failure>;

fn default_workers(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn read_dissections(path: &Path) -> Result<Vec<Dissection>, Failure> {
    let contents = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let docs = text::parse_many(&contents).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    if docs.is_empty() {
        return Err(Failure::invalid(format!("{}: no dissection found", path.display())));
    }
    Ok(docs)
}

fn summary_header() {
    println!("{:>3} {:>10} {:>9} {:>10} {:>12} {:>10}", "n", "raw", "classes", "mirrored", "nodes", "seconds");
}

fn summary_line(r: &EnumerationReport) {
    println!(
        "{:>3} {:>10} {:>9} {:>10} {:>12} {:>10.3}",
        r.n,
        r.raw_count,
        r.canonical_count,
        r.reflection_pair_count,
        r.nodes_expanded,
        r.wall_time.as_secs_f64()
    );
}

enum Emit {
    Table,
    Json,
    Text,
    Bouwkamp,
    SvgDir(PathBuf),
}

fn parse_emit(args: &[String]) -> Result<Emit, Failure> {
    match args {
        [] => Ok(Emit::Table),
        [f] if f == "json" => Ok(Emit::Json),
        [f] if f == "text" => Ok(Emit::Text),
        [f] if f == "bouwkamp" => Ok(Emit::Bouwkamp),
        [f, path] if f == "svg-dir" => Ok(Emit::SvgDir(PathBuf::from(path))),
        [f] if f == "svg-dir" => Err(Failure::invalid("--emit svg-dir needs a directory")),
        _ => Err(Failure::invalid(format!("unknown --emit value `{}`", args.join(" ")))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    min: u32,
    max: u32,
    no_prune: bool,
    workers: Option<usize>,
    emit: &[String],
    count_only: bool,
    node_budget: Option<u64>,
) -> Outcome {
    let emit = parse_emit(emit)?;
    let mut opts = if no_prune { SearchOptions::unpruned() } else { SearchOptions::default() };
    opts.workers = default_workers(workers);
    opts.node_budget = node_budget;
    opts.collect = if count_only { Collect::CountOnly } else { Collect::Canonical };
    if count_only && matches!(emit, Emit::Text | Emit::Bouwkamp | Emit::SvgDir(_)) {
        return Err(Failure::invalid("--count-only keeps no tilings to emit"));
    }
    if min == 0 || min > max {
        return Err(Failure::invalid(format!("bad range {min}..={max}")));
    }

    if matches!(emit, Emit::Table | Emit::SvgDir(_)) {
        summary_header();
    }
    let mut reports = Vec::new();
    for n in min..=max {
        let r = enumerator::enumerate(n, &opts)?;
        match &emit {
            Emit::Table => summary_line(&r),
            Emit::Json => {}
            Emit::Text => {
                for d in &r.representatives {
                    let doc = DissectionDocument::new(d).with_canonical(true);
                    println!("{}", doc.to_text());
                }
            }
            Emit::Bouwkamp => {
                for d in &r.representatives {
                    println!("n={} {}", n, io::to_bouwkamp(d));
                }
            }
            Emit::SvgDir(dir) => {
                fs::create_dir_all(dir).map_err(|e| Failure::invalid(format!("{}: {e}", dir.display())))?;
                for (i, d) in r.representatives.iter().enumerate() {
                    let path = dir.join(format!("n{n}_{}.svg", i + 1));
                    fs::write(&path, io::to_svg(d, 24)).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
                }
                summary_line(&r);
            }
        }
        reports.push(r);
    }
    if matches!(emit, Emit::Json) {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    }
    Ok(())
}

fn cmd_classify(file: &Path) -> Outcome {
    for d in read_dissections(file)? {
        let c = geometry::classify(&d);
        println!("n: {}", d.n());
        println!("order: {}", c.order);
        println!("perfect: {}", c.perfect);
        println!("simple: {}", c.simple);
        println!("trivial: {}", c.trivial);
        println!("border-touch: {}", c.border_touch_count);
        println!();
    }
    Ok(())
}

fn cmd_compositions(n: u32, min_parts: usize, apply_filters: bool) -> Outcome {
    if n == 0 || min_parts == 0 {
        return Err(Failure::invalid("--n and --min-parts must be at least 1"));
    }
    let mut list = lemma::border_compositions(n, min_parts);
    if apply_filters {
        list = lemma::filter_compositions(&list, &CompositionFilter::ALL);
    }
    for c in &list {
        println!("{c}");
    }
    Ok(())
}

fn cmd_verify_lemma(id: &str, max_n: u32, workers: Option<usize>, json: bool) -> Outcome {
    let id: LemmaId = id.parse()?;
    let mut lab = LemmaLab::new(default_workers(workers));
    let report = lab.verify(id, max_n)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("{}: {}", report.id, report.claim);
        for c in &report.checks {
            println!("  [{}] n={:>2} {}", if c.passed { "ok" } else { "FAIL" }, c.n, c.description);
        }
        for w in &report.witnesses {
            println!("  witness:");
            for line in text::emit(w).lines() {
                println!("    {line}");
            }
        }
        println!("{} {}", report.id, if report.passed { "PASS" } else { "FAIL" });
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::verify(format!("{id} does not hold up to n = {max_n}")))
    }
}

fn cmd_render(file: &Path, out: &Path, cell_px: u32) -> Outcome {
    if cell_px == 0 {
        return Err(Failure::invalid("--cell-px must be at least 1"));
    }
    let docs = read_dissections(file)?;
    let [d] = docs.as_slice() else {
        return Err(Failure::invalid(format!("{}: expected one dissection, found {}", file.display(), docs.len())));
    };
    fs::write(out, io::to_svg(d, cell_px)).map_err(|e| Failure::invalid(format!("{}: {e}", out.display())))?;
    Ok(())
}

fn cmd_oracle(n: u32, include_trivial: bool, compare: bool) -> Outcome {
    let naive = oracle::naive_enumerate(n, include_trivial)?;
    summary_header();
    summary_line(&naive);
    if !compare {
        return Ok(());
    }
    let opts = if include_trivial { SearchOptions::all_tilings() } else { SearchOptions::default() };
    let main = enumerator::enumerate(n, &opts)?;
    summary_line(&main);
    let same = naive.canonical_keys() == main.canonical_keys() && naive.raw_count == main.raw_count;
    if same {
        println!("oracle and search agree");
        Ok(())
    } else {
        Err(Failure::verify(format!("oracle and search disagree at n = {n}")))
    }
}

/// Classes expected at each size.
fn expected_classes(n: u32) -> u64 {
    u64::from(n == 11 || n == 16)
}

fn cmd_theorem(workers: Option<usize>) -> Outcome {
    let opts = SearchOptions::default().with_workers(default_workers(workers));
    let fixtures = io::fixtures();
    println!("{:>3} {:>8} {:>9} {:>10} {:>10} {:>12} {:>10}  status", "n", "expected", "classes", "raw", "mirrored", "nodes", "seconds");
    let mut ok = true;
    for n in 1..=17 {
        let r = enumerator::enumerate(n, &opts)?;
        let mut good = r.canonical_count == expected_classes(n);
        let fixture = match n {
            11 => Some(&fixtures.eleven),
            16 => Some(&fixtures.sixteen),
            _ => None,
        };
        if let Some(f) = fixture {
            good &= r.canonical_keys() == vec![symmetry::canonical_key(f)];
            good &= r.reflection_pair_count == 2;
        }
        ok &= good;
        println!(
            "{:>3} {:>8} {:>9} {:>10} {:>10} {:>12} {:>10.3}  {}",
            n,
            expected_classes(n),
            r.canonical_count,
            r.raw_count,
            r.reflection_pair_count,
            r.nodes_expanded,
            r.wall_time.as_secs_f64(),
            if good { "ok" } else { "MISMATCH" }
        );
    }
    if ok {
        println!("exactly one class at 11 and at 16, none at any other size up to 17");
        Ok(())
    } else {
        Err(Failure::verify("enumeration disagrees with the expected counts"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Enumerate { min, max, no_prune, workers, emit, count_only, node_budget } => {
            cmd_enumerate(min, max, no_prune, workers, &emit, count_only, node_budget)
        }
        Command::Classify { file } => cmd_classify(&file),
        Command::Compositions { n, min_parts, apply_filters } => cmd_compositions(n, min_parts, apply_filters),
        Command::VerifyLemma { id, max_n, workers, json } => cmd_verify_lemma(&id, max_n, workers, json),
        Command::Render { file, out, cell_px } => cmd_render(&file, &out, cell_px),
        Command::Oracle { n, include_trivial, compare } => cmd_oracle(n, include_trivial, compare),
        Command::Theorem { workers } => cmd_theorem(workers),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
