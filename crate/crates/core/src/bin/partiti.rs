//! `partiti`: solve, generate, verify and play Partiti puzzles from the shell.

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use partiti_core::format::{parse_puzzle, serialize_puzzle, FormatError, HintWire, PuzzleDocument};
use partiti_core::generator::{generate_puzzle, DifficultyRequest, GenerateError, GeneratorConfig};
use partiti_core::grid::{validate_assignment, AssignmentGrid, GridDims};
use partiti_core::partition::{
    count_distinct_partitions, count_odd_partitions, count_partitions, enumerate_bounded_distinct_partitions,
    p_asymptotic, q_asymptotic, MAX_DIGIT,
};
use partiti_core::series::{distinct_parts_product, odd_parts_product};
use partiti_core::solver::{hint, solve, HintError, SolveStatus, SolverConfig, DEFAULT_NODE_LIMIT};

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_NO_SOLUTION: u8 = 2;
const EXIT_MULTIPLE: u8 = 3;
const EXIT_NODE_LIMIT: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_UNAVAILABLE: u8 = 69;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_CANT_CREATE: u8 = 73;

const EXIT_CODES: &str = "\
Exit codes:
  0   success (solve: unique solution)
  1   verify/hint: the grid breaks a rule (violations on stdout)
  2   solve: no solution
  3   solve: more than one solution
  4   solve/count: node limit reached
  64  bad usage
  65  malformed input document
  66  input file unreadable
  69  generate: no puzzle accepted within the attempt budget
  73  output file could not be written";

#[derive(Parser)]
#[command(name = "partiti", version, about = "Partiti puzzle engine", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchArgs {
    /// Stop after this many solutions.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    /// Abort the search after this many nodes.
    #[arg(long, env = "PARTITI_NODE_LIMIT", default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    /// Disable the pairwise sum-cover rule.
    #[arg(long)]
    no_sum_cover: bool,
}

impl SearchArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            solution_cap: self.cap,
            node_limit: self.node_limit,
            enable_sum_cover: !self.no_sum_cover,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a puzzle; solutions go to stdout, statistics to stderr.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the number of solutions, up to --cap.
    Count {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a document's solution against its clues.
    Verify { file: PathBuf },
    /// Suggest the next deduction for a puzzle and optional marks.
    Hint {
        file: PathBuf,
        /// JSON matrix of digit arrays, one per cell; defaults to all empty.
        #[arg(long)]
        marks: Option<PathBuf>,
        #[arg(long)]
        no_sum_cover: bool,
    },
    /// Generate puzzles with unique solutions.
    Generate {
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, default_value_t = 6)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// any, easy, medium or hard.
        #[arg(long, default_value = "any")]
        difficulty: DifficultyRequest,
        /// Number of puzzles; seeds run consecutively from --seed.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Write one file per puzzle here instead of printing to stdout.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[arg(long, env = "PARTITI_NODE_LIMIT", default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Partition counts, enumerations, asymptotics and series.
    Math {
        #[command(subcommand)]
        op: MathOp,
    },
    /// Serve the HTTP API and, optionally, static UI assets.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    P,
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum Product {
    Distinct,
    Odd,
}

#[derive(Subcommand)]
enum MathOp {
    /// Unrestricted partitions p(N).
    P { n: u32 },
    /// Partitions into distinct parts q(N).
    Q { n: u32 },
    /// Partitions into odd parts.
    Odd { n: u32 },
    /// List partitions of N into distinct parts, one per line.
    Enum {
        n: u32,
        #[arg(long, default_value_t = MAX_DIGIT)]
        max_part: u32,
    },
    /// Leading-order asymptotic estimate.
    Asym {
        family: Family,
        n: u32,
        /// Print the natural logarithm instead of the value.
        #[arg(long)]
        log: bool,
    },
    /// Coefficients 0..=N of a generating-function product, as "k c" lines.
    Series { product: Product, n: usize },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            if code != 0 && !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(code);
        }
    };
    let mut out = io::stdout().lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("partiti: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Solve { file, search } => cmd_solve(&file, &search, out),
        Command::Count { file, search } => cmd_count(&file, &search, out),
        Command::Verify { file } => cmd_verify(&file, out),
        Command::Hint {
            file,
            marks,
            no_sum_cover,
        } => cmd_hint(&file, marks.as_deref(), !no_sum_cover, out),
        Command::Generate {
            rows,
            cols,
            seed,
            difficulty,
            count,
            out: dir,
            node_limit,
        } => {
            let dims = GridDims::new(rows, cols).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            cmd_generate(dims, seed, difficulty, count, dir.as_deref(), node_limit, out)
        }
        Command::Math { op } => cmd_math(op, out),
        Command::Serve { port, host, static_dir } => cmd_serve(SocketAddr::new(host, port), static_dir),
    }
}

/// A closed stdout (e.g. `| head`) ends the run quietly.
fn io_failure(e: io::Error) -> Failure {
    if e.kind() == io::ErrorKind::BrokenPipe {
        return Failure::new(0, "");
    }
    Failure::new(EXIT_SOFTWARE, format!("write failed: {e}"))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PuzzleDocument, Failure> {
    let text = read_input(path)?;
    parse_puzzle(&text).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn cmd_solve(file: &Path, search: &SearchArgs, out: &mut impl Write) -> Outcome {
    let doc = load(file)?;
    let result = solve(&doc.clues, &search.config()).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    for s in &result.solutions {
        let solved = PuzzleDocument {
            solution: Some(s.clone()),
            ..doc.clone()
        };
        out.write_all(serialize_puzzle(&solved).as_bytes())
            .map_err(io_failure)?;
    }
    eprintln!(
        "status={} solutions={} {}",
        result.status.as_str(),
        result.count(),
        result.stats
    );
    Ok(match (result.count(), result.status) {
        (n, _) if n >= 2 => EXIT_MULTIPLE,
        (_, SolveStatus::NodeLimit) => EXIT_NODE_LIMIT,
        (0, _) => EXIT_NO_SOLUTION,
        _ => 0,
    })
}

fn cmd_count(file: &Path, search: &SearchArgs, out: &mut impl Write) -> Outcome {
    let doc = load(file)?;
    let result = solve(&doc.clues, &search.config()).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    writeln!(out, "{}", result.count()).map_err(io_failure)?;
    eprintln!("status={}", result.status.as_str());
    Ok(if result.status == SolveStatus::NodeLimit {
        EXIT_NODE_LIMIT
    } else {
        0
    })
}

fn cmd_verify(file: &Path, out: &mut impl Write) -> Outcome {
    let doc = load(file)?;
    let Some(solution) = &doc.solution else {
        return Err(Failure::new(
            EXIT_DATA,
            format!("{}: document has no solution", file.display()),
        ));
    };
    let violations =
        validate_assignment(&doc.clues, solution, true).map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
    if violations.is_empty() {
        writeln!(out, "ok").map_err(io_failure)?;
        return Ok(0);
    }
    for v in &violations {
        writeln!(out, "{v}").map_err(io_failure)?;
    }
    Ok(EXIT_VIOLATIONS)
}

fn cmd_hint(file: &Path, marks: Option<&Path>, sum_cover: bool, out: &mut impl Write) -> Outcome {
    let doc = load(file)?;
    let dims = doc.dims();
    let partial = match marks {
        None => AssignmentGrid::empty(dims),
        Some(path) => {
            let text = read_input(path)?;
            parse_marks(&text, dims).map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?
        }
    };
    match hint(&doc.clues, &partial, sum_cover) {
        Ok(Some(h)) => {
            let wire = HintWire::from(&h);
            writeln!(out, "{}", serde_json::to_string(&wire).expect("hints serialize")).map_err(io_failure)?;
            Ok(0)
        }
        Ok(None) => {
            writeln!(out, "null").map_err(io_failure)?;
            Ok(0)
        }
        Err(HintError::Violations(v)) => {
            for x in &v {
                writeln!(out, "{x}").map_err(io_failure)?;
            }
            Ok(EXIT_VIOLATIONS)
        }
        Err(e @ (HintError::Unfillable(_) | HintError::Contradiction(_))) => {
            writeln!(out, "{e}").map_err(io_failure)?;
            Ok(EXIT_VIOLATIONS)
        }
        Err(HintError::Grid(e)) => Err(Failure::new(EXIT_DATA, e.to_string())),
    }
}

fn parse_marks(text: &str, dims: GridDims) -> Result<AssignmentGrid, FormatError> {
    let m: Vec<Vec<Vec<i64>>> = serde_json::from_str(text)?;
    partiti_core::format::marks_matrix(&m, dims)
}

fn cmd_generate(
    dims: GridDims,
    seed: u64,
    difficulty: DifficultyRequest,
    count: u64,
    dir: Option<&Path>,
    node_limit: u64,
    out: &mut impl Write,
) -> Outcome {
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_CANT_CREATE, format!("{}: {e}", dir.display())))?;
    }
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let mut config = GeneratorConfig::new(dims, s).with_difficulty(difficulty);
        config.node_limit = node_limit;
        let puzzle = generate_puzzle(&config).map_err(|e| match e {
            GenerateError::Exhausted(_) => Failure::new(EXIT_UNAVAILABLE, format!("seed {s}: {e}")),
            e => Failure::new(EXIT_SOFTWARE, format!("seed {s}: {e}")),
        })?;
        let text = serialize_puzzle(&PuzzleDocument::from_puzzle(&puzzle));
        match dir {
            None => out.write_all(text.as_bytes()).map_err(io_failure)?,
            Some(dir) => {
                let path = dir.join(format!("partiti-{}x{}-{s}.json", dims.rows(), dims.cols()));
                write_atomic(&path, &text)
                    .map_err(|e| Failure::new(EXIT_CANT_CREATE, format!("{}: {e}", path.display())))?;
                writeln!(out, "{}", path.display()).map_err(io_failure)?;
            }
        }
    }
    Ok(0)
}

/// Writes via a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn cmd_math(op: MathOp, out: &mut impl Write) -> Outcome {
    let domain = |e: &dyn std::fmt::Display| Failure::new(EXIT_USAGE, e.to_string());
    let mut lines = Vec::new();
    match op {
        MathOp::P { n } => lines.push(count_partitions(n).map_err(|e| domain(&e))?.to_string()),
        MathOp::Q { n } => lines.push(count_distinct_partitions(n).map_err(|e| domain(&e))?.to_string()),
        MathOp::Odd { n } => lines.push(count_odd_partitions(n).map_err(|e| domain(&e))?.to_string()),
        MathOp::Enum { n, max_part } => lines.extend(
            enumerate_bounded_distinct_partitions(n, max_part)
                .iter()
                .map(|p| p.to_string()),
        ),
        MathOp::Asym { family, n, log } => {
            let est = match family {
                Family::P => p_asymptotic(n),
                Family::Q => q_asymptotic(n),
            }
            .map_err(|e| domain(&e))?;
            lines.push(if log {
                est.log_value.to_string()
            } else {
                est.value.to_string()
            });
        }
        MathOp::Series { product, n } => {
            let s = match product {
                Product::Distinct => distinct_parts_product(n),
                Product::Odd => odd_parts_product(n),
            }
            .map_err(|e| domain(&e))?;
            lines.extend(s.coeffs().iter().enumerate().map(|(k, c)| format!("{k} {c}")));
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(io_failure)?;
    }
    Ok(0)
}

fn cmd_serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> Outcome {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::new(EXIT_SOFTWARE, e.to_string()))?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(partiti_core::service::serve(addr, static_dir))
        .map_err(|e| Failure::new(EXIT_UNAVAILABLE, format!("{addr}: {e}")))?;
    Ok(0)
}
