//! Command-line surface: parse graphs, analyze density, run the coloring
//! pipeline, verify colorings, compute exact values, audit discharging,
//! and generate named graph families.
//!
//! Exit codes: 0 success; 1 a verified violation; 2 density hypothesis
//! violated; 3 reduction stalled; 4 a reducible configuration blocks a
//! discharge audit; 64 usage errors; 65 malformed data; 66 I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::{fs, thread};

use clap::{Args, Parser, Subcommand, ValueEnum};

use injcolor::density::mad_exact;
use injcolor::discharge::{
    discharge_lemma6, discharge_thm2, discharge_two_phase, ChargeLedger, DischargeError,
};
use injcolor::gen;
use injcolor::graph::{neighboring_graph, verify_injective, Graph};
use injcolor::io::{audit_document, emit_graph, parse_graph, ColoringDoc, Format, IoError};
use injcolor::listcolor::{chi_exact, ChiOutcome};
use injcolor::rational::{format_ratio, parse_ratio, ratio, ratio_to_f64};
use injcolor::reduce::{build_aux, find_config, Case, ReduceError};
use injcolor::solver::{color_injective, Mode};

const EXIT_VIOLATION: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_STALLED: u8 = 3;
const EXIT_CONFIG_PRESENT: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 66;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "injcolor",
    version,
    about = "Injective graph coloring: exact density analysis, constructive coloring, discharging audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print size, degree, and exact density statistics for a graph.
    Analyze {
        file: PathBuf,
        /// Input format (inferred from the extension when omitted).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Color graphs injectively; writes a coloring document on request.
    Color {
        /// Input graphs: files, or directories scanned for graph files.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        /// Write the coloring here as JSON (single input only).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input format (inferred from the extension when omitted).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Worker threads across inputs; each graph is solved on one thread.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a coloring document against a graph.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        /// Input format (inferred from the extension when omitted).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Compute the exact injective chromatic number.
    Exact {
        file: PathBuf,
        /// Give up beyond this many colors (defaults to the vertex count).
        #[arg(long)]
        ub: Option<u32>,
        /// Input format (inferred from the extension when omitted).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run a charge-redistribution audit and print it as JSON.
    Discharge {
        file: PathBuf,
        /// Which audit to run; auto picks by maximum degree.
        #[arg(long, value_enum, default_value_t = CaseArg::Auto)]
        case: CaseArg,
        /// Input format (inferred from the extension when omitted).
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Construct a graph from a named family.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Dimacs,
    Edgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Force,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Auto,
    D3,
    D4,
    D5,
    D6,
}

/// Shared flags of every `generate` family.
#[derive(Args)]
struct GenCommon {
    /// Subdivide every edge this many times after construction.
    #[arg(long, default_value_t = 0)]
    subdivide: usize,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Dimacs)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Family {
    /// Cycle on n vertices.
    Cycle {
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Path on n vertices.
    Path {
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Star with the given number of leaves.
    Star {
        leaves: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Complete graph on n vertices.
    Complete {
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Cubic graph from LCF notation: `repeats` copies of the shift list.
    Lcf {
        repeats: usize,
        #[arg(required = true, allow_hyphen_values = true)]
        shifts: Vec<i64>,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Point/line incidence graph of the smallest projective plane.
    FanoIncidence {
        #[command(flatten)]
        common: GenCommon,
    },
    /// The same graph minus one line vertex: density exactly 36/13.
    FanoMinusVertex {
        #[command(flatten)]
        common: GenCommon,
    },
    /// Heawood graph (3-regular, 14 vertices, girth 6).
    Heawood {
        #[command(flatten)]
        common: GenCommon,
    },
    /// Petersen graph (3-regular, 10 vertices, girth 5).
    Petersen {
        #[command(flatten)]
        common: GenCommon,
    },
    /// Incidence graph of the projective plane of order 4 (5-regular).
    Pg24 {
        #[command(flatten)]
        common: GenCommon,
    },
    /// k hubs in a ring, consecutive hubs joined by two 2-vertex bridges.
    ThickCycle {
        k: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// 27-vertex graph whose auxiliary audit runs a component into deficit.
    Gadget {
        #[command(flatten)]
        common: GenCommon,
    },
    /// Random connected graph with bounded degree and density.
    Random {
        n: usize,
        delta_max: usize,
        /// Density bound as p/q (default 36/13 when delta-max is 3, else 14/5).
        #[arg(long)]
        mad_bound: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: GenCommon,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    // Die quietly when a downstream reader such as `head` hangs up,
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Analyze { file, format } => analyze(&file, format),
        Command::Color {
            files,
            mode,
            out,
            format,
            jobs,
        } => color(&files, mode, out.as_deref(), format, jobs),
        Command::Verify {
            graph,
            coloring,
            format,
        } => verify(&graph, &coloring, format),
        Command::Exact { file, ub, format } => exact(&file, ub, format),
        Command::Discharge { file, case, format } => discharge(&file, case, format),
        Command::Generate { family } => generate(family),
    }
}

fn choose_format(arg: Option<FormatArg>, path: &Path) -> Format {
    match arg {
        Some(FormatArg::Dimacs) => Format::Dimacs,
        Some(FormatArg::Edgelist) => Format::Edgelist,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("txt" | "edges" | "edgelist") => Format::Edgelist,
            _ => Format::Dimacs,
        },
    }
}

fn io_failure(path: &Path, e: IoError) -> Failure {
    let code = match e {
        IoError::Io(_) => EXIT_IO,
        _ => EXIT_DATA,
    };
    fail(code, format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path, format: Option<FormatArg>) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    parse_graph(&text, choose_format(format, path)).map_err(|e| io_failure(path, e))
}

fn analyze(path: &Path, format: Option<FormatArg>) -> CliResult {
    let g = read_graph(path, format)?;
    println!("file: {}", path.display());
    println!("vertices: {}", g.n());
    println!("edges: {}", g.m());
    println!("max-degree: {}", g.max_degree());
    match mad_exact(&g) {
        Ok(w) => {
            println!(
                "mad: {} (~{:.6})",
                format_ratio(w.density),
                ratio_to_f64(w.density)
            );
            println!(
                "mad < 36/13: {}",
                if w.density < ratio(36, 13) { "yes" } else { "no" }
            );
            println!(
                "mad < 14/5: {}",
                if w.density < ratio(14, 5) { "yes" } else { "no" }
            );
        }
        Err(_) => {
            println!("mad: undefined (no vertices)");
            println!("mad < 36/13: yes");
            println!("mad < 14/5: yes");
        }
    }
    Ok(0)
}

/// Colors one file; never panics, everything becomes a printable line and
/// an exit code so corpus runs can keep going past individual failures.
fn color_one(
    path: &Path,
    mode: Mode,
    format: Option<FormatArg>,
) -> (String, u8, Option<ColoringDoc>) {
    let g = match read_graph(path, format) {
        Ok(g) => g,
        Err(f) => return (f.message, f.code, None),
    };
    match color_injective(&g, mode) {
        Ok((col, report)) => {
            let doc = ColoringDoc::from_coloring(&col).ok();
            let line = format!(
                "{}: {} vertices, {} colors (palette {}), {} steps, {:.1?}",
                path.display(),
                g.n(),
                report.colors_used,
                report.palette,
                report.steps.len(),
                report.runtime
            );
            (line, 0, doc)
        }
        Err(injcolor::solver::SolveError::HypothesisViolated { mad, bound }) => (
            format!(
                "{}: hypothesis violated: mad = {} is not below {}",
                path.display(),
                format_ratio(mad),
                format_ratio(bound)
            ),
            EXIT_HYPOTHESIS,
            None,
        ),
        Err(injcolor::solver::SolveError::Stalled { detail }) => (
            format!("{}: stalled: {detail}", path.display()),
            EXIT_STALLED,
            None,
        ),
    }
}

fn expand_inputs(files: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for f in files {
        let meta = fs::metadata(f).map_err(|e| fail(EXIT_IO, format!("{}: {e}", f.display())))?;
        if meta.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(f)
                .map_err(|e| fail(EXIT_IO, format!("{}: {e}", f.display())))?
                .filter_map(|r| r.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(f.clone());
        }
    }
    if out.is_empty() {
        return Err(fail(EXIT_USAGE, "no input files"));
    }
    Ok(out)
}

fn color(
    files: &[PathBuf],
    mode: ModeArg,
    out: Option<&Path>,
    format: Option<FormatArg>,
    jobs: usize,
) -> CliResult {
    let mode = match mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Force => Mode::Force,
    };
    let inputs = expand_inputs(files)?;
    if out.is_some() && inputs.len() > 1 {
        return Err(fail(EXIT_USAGE, "--out requires a single input file"));
    }

    let workers = jobs.max(1).min(inputs.len());
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(String, u8, Option<ColoringDoc>)>>> =
        Mutex::new((0..inputs.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= inputs.len() {
                    break;
                }
                let result = color_one(&inputs[i], mode, format);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });

    let mut worst = 0u8;
    for slot in slots.into_inner().unwrap() {
        let (line, code, doc) = slot.expect("every input was processed");
        if code == 0 {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
        worst = worst.max(code);
        if code == 0 {
            if let (Some(target), Some(doc)) = (out, doc) {
                let json = serde_json::to_string_pretty(&doc)
                    .map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
                fs::write(target, json + "\n")
                    .map_err(|e| fail(EXIT_IO, format!("{}: {e}", target.display())))?;
            }
        }
    }
    Ok(worst)
}

fn verify(graph: &Path, coloring: &Path, format: Option<FormatArg>) -> CliResult {
    let g = read_graph(graph, format)?;
    let text = fs::read_to_string(coloring)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", coloring.display())))?;
    let doc: ColoringDoc = serde_json::from_str(&text)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", coloring.display())))?;
    let col = doc
        .to_coloring()
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", coloring.display())))?;
    match verify_injective(&g, &col) {
        Ok(None) => {
            println!(
                "coloring is injective: {} vertices, palette {}",
                g.n(),
                col.palette()
            );
            Ok(0)
        }
        Ok(Some(v)) => {
            println!(
                "violation: vertices {} and {} share a color and the neighbor {}",
                v.u, v.v, v.witness
            );
            Ok(EXIT_VIOLATION)
        }
        Err(e) => Err(fail(EXIT_DATA, e.to_string())),
    }
}

fn exact(path: &Path, ub: Option<u32>, format: Option<FormatArg>) -> CliResult {
    let g = read_graph(path, format)?;
    let ub = ub.unwrap_or_else(|| (g.n() as u32).max(1));
    match chi_exact(&neighboring_graph(&g), ub) {
        ChiOutcome::Chromatic(k, _) => println!("chi-injective: {k}"),
        ChiOutcome::NoneWithin(bound) => println!("chi-injective: > {bound}"),
    }
    Ok(0)
}

fn discharge(path: &Path, case: CaseArg, format: Option<FormatArg>) -> CliResult {
    let g = read_graph(path, format)?;
    let case = match case {
        CaseArg::Auto => match g.max_degree() {
            0..=3 => CaseArg::D3,
            4 => CaseArg::D4,
            5 => CaseArg::D5,
            _ => CaseArg::D6,
        },
        other => other,
    };
    let ledger = match case {
        CaseArg::D3 => discharge_thm2(&g),
        CaseArg::D6 => discharge_lemma6(&g),
        CaseArg::D4 | CaseArg::D5 => {
            let reduce_case = if case == CaseArg::D4 {
                Case::Four
            } else {
                Case::Five
            };
            two_phase_ledger(&g, reduce_case)?
        }
        CaseArg::Auto => unreachable!("resolved above"),
    };
    let ledger = ledger.map_err(discharge_failure)?;
    let json = serde_json::to_string_pretty(&audit_document(&ledger))
        .map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    println!("{json}");
    Ok(0)
}

fn two_phase_ledger(
    g: &Graph,
    case: Case,
) -> Result<Result<ChargeLedger, DischargeError>, Failure> {
    if let Some(config) = find_config(g, case).map_err(reduce_failure)? {
        return Err(fail(
            EXIT_CONFIG_PRESENT,
            format!("reducible configuration present: {}", config.kind.describe()),
        ));
    }
    let aux = build_aux(g, case).map_err(reduce_failure)?;
    Ok(discharge_two_phase(g, &aux, case))
}

fn reduce_failure(e: ReduceError) -> Failure {
    match e {
        ReduceError::CaseMismatch { found, cap } => fail(
            EXIT_DATA,
            format!("graph has maximum degree {found}, this audit allows at most {cap}"),
        ),
        other => fail(EXIT_INTERNAL, other.to_string()),
    }
}

fn discharge_failure(e: DischargeError) -> Failure {
    match e {
        DischargeError::ConfigPresent(d) => fail(
            EXIT_CONFIG_PRESENT,
            format!("reducible configuration present: {d}"),
        ),
        DischargeError::CaseMismatch { found, cap } => fail(
            EXIT_DATA,
            format!("graph has maximum degree {found}, this audit allows at most {cap}"),
        ),
        DischargeError::DeficitFound { vertex, charge } => fail(
            EXIT_INTERNAL,
            format!(
                "vertex {vertex} ended below target at {}",
                format_ratio(charge)
            ),
        ),
    }
}

fn generate(family: Family) -> CliResult {
    let (graph, common) = match family {
        Family::Cycle { n, common } => (gen::cycle(n).map_err(gen_failure)?, common),
        Family::Path { n, common } => (gen::path(n).map_err(gen_failure)?, common),
        Family::Star { leaves, common } => (gen::star(leaves).map_err(gen_failure)?, common),
        Family::Complete { n, common } => (gen::complete(n).map_err(gen_failure)?, common),
        Family::Lcf {
            repeats,
            shifts,
            common,
        } => (gen::lcf(&shifts, repeats).map_err(gen_failure)?, common),
        Family::FanoIncidence { common } => (gen::fano_incidence(), common),
        Family::FanoMinusVertex { common } => (gen::fano_minus_vertex(), common),
        Family::Heawood { common } => (gen::heawood(), common),
        Family::Petersen { common } => (gen::petersen(), common),
        Family::Pg24 { common } => (gen::pg24_incidence(), common),
        Family::ThickCycle { k, common } => (gen::thick_cycle(k).map_err(gen_failure)?, common),
        Family::Gadget { common } => (gen::negative_surplus_gadget(), common),
        Family::Random {
            n,
            delta_max,
            mad_bound,
            seed,
            common,
        } => {
            let bound = match mad_bound {
                Some(s) => parse_ratio(&s).map_err(|e| fail(EXIT_USAGE, e))?,
                None if delta_max == 3 => ratio(36, 13),
                None => ratio(14, 5),
            };
            (
                gen::random_sparse(n, delta_max, bound, seed).map_err(gen_failure)?,
                common,
            )
        }
    };
    let graph = if common.subdivide > 0 {
        gen::subdivide(&graph, common.subdivide)
    } else {
        graph
    };
    let text = emit_graph(
        &graph,
        match common.format {
            FormatArg::Dimacs => Format::Dimacs,
            FormatArg::Edgelist => Format::Edgelist,
        },
    );
    match common.out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn gen_failure(e: gen::GenError) -> Failure {
    fail(EXIT_USAGE, e.to_string())
}
