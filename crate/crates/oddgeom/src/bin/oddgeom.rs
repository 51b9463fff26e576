//! Command-line front end: verify matrices, extract and analyze zero
//! patterns, run the budgeted searches, and exchange DIMACS CNF with
//! external SAT solvers.
//!
//! Exit codes are a stable contract: 0 success/valid, 1 checked-and-failed
//! or search exhausted without a solution, 2 usage/format error, 3 budget
//! truncation without a solution.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oddgeom::geometry::{AllowedSizes, LineSystem, OddGeometryParams};
use oddgeom::graphs::gamma_report;
use oddgeom::matrix::WeighingMatrix;
use oddgeom::search::cnf::CnfError;
use oddgeom::search::{
    decode_model, export_cnf, read_frontier, search_weighing, sign_search, write_frontier,
    Completion, GeometrySearch, SearchBudget, VarMap,
};

#[derive(Parser)]
#[command(
    name = "oddgeom",
    version,
    about = "Verification and budgeted search for weighing matrices and their zero-pattern line systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum candidate evaluations before truncating.
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 3_600)]
    max_seconds: u64,
    /// Worker threads (enumeration phase only).
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget::new(self.max_nodes, self.max_seconds, self.threads)
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Matrix order; with --k, derives the line-system parameters.
    #[arg(long)]
    n: Option<usize>,
    /// Matrix weight (needs --n).
    #[arg(long)]
    k: Option<usize>,
    /// Number of points (explicit parameter form).
    #[arg(long)]
    v: Option<usize>,
    /// Number of lines.
    #[arg(long)]
    b: Option<usize>,
    /// Line size.
    #[arg(long)]
    r: Option<usize>,
    /// Point degree.
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated allowed intersection sizes, e.g. 1,3,5,7.
    #[arg(long)]
    allowed: Option<String>,
}

impl ParamArgs {
    /// Builds parameters from --n/--k or the explicit flags; `file_v` and
    /// `file_b` fill in --v/--b when a geometry file supplied them.
    fn resolve(
        &self,
        file_v: Option<usize>,
        file_b: Option<usize>,
    ) -> Result<OddGeometryParams, String> {
        match (self.n, self.k) {
            (Some(n), Some(k)) => {
                if self.v.is_some()
                    || self.b.is_some()
                    || self.r.is_some()
                    || self.d.is_some()
                    || self.allowed.is_some()
                {
                    return Err("give either --n/--k or the explicit parameter flags, not both"
                        .to_string());
                }
                OddGeometryParams::for_weighing(n, k).map_err(|e| e.to_string())
            }
            (None, None) => {
                let v = self
                    .v
                    .or(file_v)
                    .ok_or("missing --v (no geometry file to take it from)")?;
                let b = self
                    .b
                    .or(file_b)
                    .ok_or("missing --b (no geometry file to take it from)")?;
                let r = self.r.ok_or("missing --r")?;
                let d = self.d.ok_or("missing --d")?;
                let allowed = self.allowed.as_deref().ok_or("missing --allowed")?;
                let allowed = AllowedSizes::parse_list(allowed)
                    .ok_or_else(|| format!("bad --allowed list `{allowed}`"))?;
                OddGeometryParams::new(v, b, r, d, allowed).map_err(|e| e.to_string())
            }
            _ => Err("--n and --k must be given together".to_string()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix file: entry alphabet, row weights, orthogonality.
    Verify {
        /// Matrix file (header `W <n> <k>`).
        matrix: PathBuf,
    },
    /// Extract the zero-pattern line system of a matrix.
    Pattern {
        matrix: PathBuf,
        /// Write the geometry here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every counting and graph check on a line system.
    Analyze {
        /// Geometry file (header `G <v> <b>`).
        geometry: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Enumerate line systems matching parameters, budgeted.
    SearchGeometry {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Stop after this many systems (0 = no cap).
        #[arg(long, default_value_t = 1)]
        emit_limit: usize,
        /// Write the first found system here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// On truncation, save the unfinished search roots here.
        #[arg(long)]
        dump_frontier: Option<PathBuf>,
        /// Continue from a saved frontier instead of the tree top.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Complete a zero pattern into a signed, verified matrix.
    Sign {
        geometry: PathBuf,
        /// Target order.
        #[arg(long)]
        n: usize,
        /// Target weight.
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the found matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: enumerate zero patterns, then sign each candidate.
    Search {
        /// Target order.
        #[arg(long)]
        n: usize,
        /// Target weight.
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the found matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the signing problem as a DIMACS CNF file.
    ExportCnf {
        geometry: PathBuf,
        /// Target order.
        #[arg(long)]
        n: usize,
        /// Target weight.
        #[arg(long)]
        k: usize,
        /// Output CNF path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a SAT model into a matrix and verify it.
    Decode {
        /// Model file: literals as integers; `c`/`s` lines and `v` prefixes
        /// are ignored, `0` terminators skipped.
        model: PathBuf,
        geometry: PathBuf,
        /// Target order.
        #[arg(long)]
        n: usize,
        /// Target weight.
        #[arg(long)]
        k: usize,
    },
}

fn read_to_string(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_matrix(path: &Path) -> Result<WeighingMatrix, String> {
    WeighingMatrix::parse(&read_to_string(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_geometry(path: &Path) -> Result<LineSystem, String> {
    LineSystem::parse(&read_to_string(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes the artifact to --out when given, otherwise prints it after the
/// stats so the report stays machine-readable either way.
fn deliver(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Exit code for a search that found nothing: 1 when the space was
/// exhausted (a definitive no), 3 when a budget cut the run short.
fn no_solution_code(completion: Completion) -> u8 {
    if completion.is_complete() {
        1
    } else {
        3
    }
}

fn cmd_verify(matrix: &Path) -> Result<u8, String> {
    let m = read_matrix(matrix)?;
    let report = m.verify();
    print!("{report}");
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn cmd_pattern(matrix: &Path, out: &Option<PathBuf>) -> Result<u8, String> {
    let m = read_matrix(matrix)?;
    deliver(out, &m.zero_pattern().to_text())?;
    Ok(0)
}

fn cmd_analyze(geometry: &Path, params: &ParamArgs) -> Result<u8, String> {
    let ls = read_geometry(geometry)?;
    let params = params.resolve(Some(ls.point_count()), Some(ls.line_count()))?;
    let mut all_pass = true;

    println!("params = {params}");
    let check = ls.odd_geometry_check(&params);
    print!("{check}");
    all_pass &= check.is_valid();

    let (lhs, rhs) = ls.counting_identity();
    println!("counting_lhs = {lhs}");
    println!("counting_rhs = {rhs}");
    all_pass &= lhs == rhs;

    for i in 1..=ls.line_count() {
        match ls.intersection_profile(i, &params.allowed) {
            Ok(profile) => {
                let ok = oddgeom::geometry::profile_identity_check(&profile, &params);
                println!("line {i}: {profile} identity_ok={ok}");
                all_pass &= ok;
            }
            Err(e) => {
                println!("line {i}: profile_error: {e}");
                all_pass = false;
            }
        }
    }

    match gamma_report(&ls, &params) {
        Ok(report) => {
            print!("{report}");
            all_pass &= report.all_pass();
        }
        Err(e) => {
            println!("graph_checks_error = {e}");
            all_pass = false;
        }
    }

    println!("all_pass = {all_pass}");
    Ok(if all_pass { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search_geometry(
    params: &ParamArgs,
    budget: &BudgetArgs,
    emit_limit: usize,
    out: &Option<PathBuf>,
    dump_frontier: &Option<PathBuf>,
    resume: &Option<PathBuf>,
) -> Result<u8, String> {
    let params = params.resolve(None, None)?;
    let mut search = GeometrySearch::new(params, budget.budget()).emit_limit(emit_limit);
    if let Some(path) = resume {
        let text = read_to_string(path)?;
        let roots = read_frontier(text.as_bytes()).map_err(|e| format!("{}: {e}", path.display()))?;
        search = search.resume(roots).map_err(|e| e.to_string())?;
    }

    let run = search.run();
    print!("{}", run.stats);

    if let Some(path) = dump_frontier {
        if !run.pending.is_empty() {
            let mut buf = Vec::new();
            write_frontier(&mut buf, &run.pending).map_err(|e| e.to_string())?;
            write_file(path, &String::from_utf8(buf).expect("frontier text is ascii"))?;
            eprintln!(
                "saved {} unfinished roots to {}",
                run.pending.len(),
                path.display()
            );
        }
    }

    match run.systems.first() {
        Some(first) => {
            deliver(out, &first.to_text())?;
            Ok(0)
        }
        None => Ok(no_solution_code(run.stats.completion)),
    }
}

fn cmd_sign(
    geometry: &Path,
    n: usize,
    k: usize,
    budget: &BudgetArgs,
    out: &Option<PathBuf>,
) -> Result<u8, String> {
    let ls = read_geometry(geometry)?;
    let (found, stats) = sign_search(&ls, n, k, &budget.budget()).map_err(|e| e.to_string())?;
    print!("{stats}");
    match found {
        Some(matrix) => {
            deliver(out, &matrix.to_text())?;
            Ok(0)
        }
        None => Ok(no_solution_code(stats.completion)),
    }
}

fn cmd_search(
    n: usize,
    k: usize,
    budget: &BudgetArgs,
    out: &Option<PathBuf>,
) -> Result<u8, String> {
    let (found, stats) = search_weighing(n, k, &budget.budget()).map_err(|e| e.to_string())?;
    print!("{stats}");
    match found {
        Some(matrix) => {
            deliver(out, &matrix.to_text())?;
            Ok(0)
        }
        None => Ok(no_solution_code(stats.completion)),
    }
}

fn cmd_export_cnf(geometry: &Path, n: usize, k: usize, out: &Path) -> Result<u8, String> {
    let ls = read_geometry(geometry)?;
    match export_cnf(&ls, n, k, out) {
        Ok(map) => {
            println!("cell_variables = {}", map.var_count());
            println!("written = {}", out.display());
            Ok(0)
        }
        Err(CnfError::OddCommonSupport { i, j, size }) => {
            // A geometry defect, not a usage error: report and fail the check.
            eprintln!("rows {i} and {j} share {size} support columns (odd); no signing exists");
            Ok(1)
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Extracts literals from a solver output or raw literal file: `c` and `s`
/// lines are skipped, leading `v` tokens dropped, `0` terminators ignored.
fn parse_model(text: &str) -> Result<Vec<i32>, String> {
    let mut model = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('s') || line.starts_with('#')
        {
            continue;
        }
        for token in line.split_whitespace() {
            if token == "v" {
                continue;
            }
            let lit: i32 = token
                .parse()
                .map_err(|_| format!("bad literal `{token}` in model"))?;
            if lit != 0 {
                model.push(lit);
            }
        }
    }
    Ok(model)
}

fn cmd_decode(model: &Path, geometry: &Path, n: usize, k: usize) -> Result<u8, String> {
    let ls = read_geometry(geometry)?;
    let literals = parse_model(&read_to_string(model)?)?;
    let map = VarMap::build(&ls, n, k).map_err(|e| e.to_string())?;
    let matrix = decode_model(&map, &literals, &ls, n, k).map_err(|e| e.to_string())?;
    print!("{}", matrix.to_text());
    let report = matrix.verify();
    print!("{report}");
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Verify { matrix } => cmd_verify(matrix),
        Command::Pattern { matrix, out } => cmd_pattern(matrix, out),
        Command::Analyze { geometry, params } => cmd_analyze(geometry, params),
        Command::SearchGeometry {
            params,
            budget,
            emit_limit,
            out,
            dump_frontier,
            resume,
        } => cmd_search_geometry(params, budget, *emit_limit, out, dump_frontier, resume),
        Command::Sign {
            geometry,
            n,
            k,
            budget,
            out,
        } => cmd_sign(geometry, *n, *k, budget, out),
        Command::Search { n, k, budget, out } => cmd_search(*n, *k, budget, out),
        Command::ExportCnf { geometry, n, k, out } => cmd_export_cnf(geometry, *n, *k, out),
        Command::Decode {
            model,
            geometry,
            n,
            k,
        } => cmd_decode(model, geometry, *n, *k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
