//! Command line front end: parse a puzzle file, compile it to a QUBO,
//! reduce variables, solve, verify, count solutions, or export the model.
//!
//! Exit codes: 0 solved and verified (or command succeeded), 1 proven
//! infeasible (or verification failed / zero solutions), 2 parse or problem
//! error, 3 the solver gave up without reaching the floor.

mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quboku::oracle;
use quboku::puzzle::BuildError;
use quboku::queens::QueensOptions;
use quboku::solve::{
    solve_anneal, solve_anneal_seq, solve_exhaustive, solve_exhaustive_seq, AnnealParams,
    SolveResult, EXHAUSTIVE_MAX_VARS,
};
use quboku::takuzu::check_global_nonrepetition;
use quboku::{Compiled, Puzzle};

#[derive(Parser)]
#[command(name = "quboku", version, about = "Compile, reduce, solve and verify grid puzzles as exact QUBO models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a machine-readable key/value block instead of prose.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compile the puzzle and report model statistics.
    Build(FileArgs),
    /// Run the variable eliminations and report the reduction.
    Reduce(FileArgs),
    /// Compile, minimize, verify and print the solution grid.
    Solve(SolveArgs),
    /// Check a provided solution grid against the puzzle constraints.
    Verify(VerifyArgs),
    /// Count solutions with the backtracking oracle.
    Count(CountArgs),
    /// Write the compiled model in the QUBO text format.
    Export(ExportArgs),
}

#[derive(Args)]
struct FileArgs {
    /// Puzzle file.
    file: PathBuf,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args, Clone, Copy)]
struct ModelFlags {
    /// Keep every region penalty instead of dropping the implied one.
    #[arg(long)]
    keep_all_regions: bool,
    /// Encode flexible empty regions as pairwise products.
    #[arg(long)]
    pairwise_soft: bool,
}

impl ModelFlags {
    fn options(&self) -> QueensOptions {
        QueensOptions {
            keep_all_regions: self.keep_all_regions,
            pairwise_soft: self.pairwise_soft,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    Auto,
    Exhaustive,
    Anneal,
}

#[derive(Args)]
struct SolveArgs {
    /// Puzzle file.
    file: PathBuf,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Cap on the number of minimizers the exhaustive solver keeps.
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    /// Annealing seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annealing restarts.
    #[arg(long, default_value_t = 20)]
    restarts: u32,
    /// Sweeps per restart.
    #[arg(long, default_value_t = 2000)]
    sweeps: u32,
    /// Geometric cooling factor in (0, 1).
    #[arg(long, default_value_t = 0.97)]
    cooling: f64,
    /// Fixed initial temperature (default: derived per restart).
    #[arg(long)]
    temp: Option<f64>,
    /// Run restarts / range chunks on the thread pool.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Puzzle file.
    file: PathBuf,
    /// Solution grid file (same alphabet `solve` prints).
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct CountArgs {
    /// Puzzle file.
    file: PathBuf,
    /// Stop after this many solutions.
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
}

#[derive(Args)]
struct ExportArgs {
    /// Puzzle file.
    file: PathBuf,
    #[command(flatten)]
    model: ModelFlags,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_OK: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GAVE_UP: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let machine = cli.machine;
    let code = match cli.command {
        Command::Build(args) => cmd_build(args, machine),
        Command::Reduce(args) => cmd_reduce(args, machine),
        Command::Solve(args) => cmd_solve(args, machine),
        Command::Verify(args) => cmd_verify(args, machine),
        Command::Count(args) => cmd_count(args, machine),
        Command::Export(args) => cmd_export(args),
    };
    ExitCode::from(code)
}

fn load_puzzle(path: &PathBuf) -> Result<Puzzle, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_PARSE);
        }
    };
    parse::parse_puzzle(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn compile_puzzle(puzzle: &Puzzle, flags: &ModelFlags) -> Result<Compiled, u8> {
    match puzzle.compile(&flags.options()) {
        Ok(compiled) => {
            for w in &compiled.warnings {
                eprintln!("warning: {w}");
            }
            Ok(compiled)
        }
        Err(BuildError::Infeasible(e)) => {
            eprintln!("{e}");
            Err(EXIT_INFEASIBLE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(EXIT_PARSE)
        }
    }
}

fn cmd_build(args: FileArgs, machine: bool) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let compiled = match compile_puzzle(&puzzle, &args.model) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let floor = compiled
        .floor
        .map(|f| f.to_string())
        .unwrap_or_else(|| "open".into());
    if machine {
        println!("family: {}", puzzle.family());
        println!("variables: {}", compiled.qubo.num_vars());
        println!("linear-terms: {}", compiled.qubo.num_linear_terms());
        println!("quadratic-terms: {}", compiled.qubo.num_quadratic_terms());
        println!("offset: {}", compiled.qubo.offset());
        println!("fractional-penalties: {}", compiled.fractional_penalties);
        println!("floor: {floor}");
    } else {
        println!(
            "{}: {} variables, {} linear terms, {} quadratic terms, offset {}, floor {}",
            puzzle.family(),
            compiled.qubo.num_vars(),
            compiled.qubo.num_linear_terms(),
            compiled.qubo.num_quadratic_terms(),
            compiled.qubo.offset(),
            floor,
        );
    }
    EXIT_OK
}

fn cmd_reduce(args: FileArgs, machine: bool) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let compiled = match compile_puzzle(&puzzle, &args.model) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let s = compiled.vars.summary();
    let bound = match &puzzle {
        Puzzle::Takuzu(p) => Some(
            (p.height * p.width) as i64
                - (p.zeros.len() + p.ones.len() + p.symbols.len()) as i64,
        ),
        _ => None,
    };
    if machine {
        println!("family: {}", puzzle.family());
        println!("cells: {}", s.cells);
        println!("inactive: {}", s.inactive);
        println!("fixed-zero: {}", s.fixed_zero);
        println!("fixed-one: {}", s.fixed_one);
        println!("aliased: {}", s.aliased);
        println!("free: {}", s.free);
        if let Some(b) = bound {
            println!("bound: {b}");
        }
    } else {
        println!("{s}");
        if let Some(b) = bound {
            println!("free {} <= bound {} (cells - givens - symbols)", s.free, b);
        }
    }
    EXIT_OK
}

fn render_grid(puzzle: &Puzzle, values: &[bool]) -> String {
    let (rows, cols) = puzzle.dims();
    let mut out = String::new();
    for r in 1..=rows {
        let mut line = Vec::with_capacity(cols);
        for c in 1..=cols {
            let idx = (r - 1) * cols + (c - 1);
            let cell = quboku::CellRef::new(r, c);
            let tok = match puzzle {
                Puzzle::NQueens(p) | Puzzle::LQueens(p) | Puzzle::GeneralQueens(p) => {
                    if values[idx] {
                        "Q".to_string()
                    } else if !p.board.is_active(cell) {
                        "#".to_string()
                    } else {
                        ".".to_string()
                    }
                }
                Puzzle::Tents(p) => {
                    if p.trees.contains(&cell) {
                        "T".to_string()
                    } else if values[idx] {
                        "A".to_string()
                    } else {
                        ".".to_string()
                    }
                }
                Puzzle::ColouredPieces(p) | Puzzle::MaxPieces { problem: p, .. } => {
                    if values[idx] {
                        p.letters[idx].to_string()
                    } else if !p.board.is_active(cell) {
                        "#".to_string()
                    } else {
                        ".".to_string()
                    }
                }
                Puzzle::Takuzu(_) => {
                    if values[idx] {
                        "1".to_string()
                    } else {
                        "0".to_string()
                    }
                }
            };
            line.push(tok);
        }
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn machine_solution(puzzle: &Puzzle, values: &[bool]) -> String {
    let (rows, cols) = puzzle.dims();
    let mut parts = Vec::with_capacity(rows);
    for r in 0..rows {
        let row: String = (0..cols)
            .map(|c| if values[r * cols + c] { '1' } else { '0' })
            .collect();
        parts.push(row);
    }
    parts.join("/")
}

struct MachineReport {
    fields: Vec<(String, String)>,
}

impl MachineReport {
    fn new(puzzle: &Puzzle) -> Self {
        let (rows, cols) = puzzle.dims();
        MachineReport {
            fields: vec![
                ("family".into(), puzzle.family().to_string()),
                ("rows".into(), rows.to_string()),
                ("cols".into(), cols.to_string()),
            ],
        }
    }

    fn push(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.into(), value.to_string()));
    }

    fn print(self) {
        for (k, v) in self.fields {
            println!("{k}: {v}");
        }
    }
}

fn cmd_solve(args: SolveArgs, machine: bool) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let compiled = match compile_puzzle(&puzzle, &args.model) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let free = compiled.vars.num_free();
    let use_exhaustive = match args.solver {
        SolverChoice::Exhaustive => true,
        SolverChoice::Anneal => false,
        SolverChoice::Auto => free <= EXHAUSTIVE_MAX_VARS,
    };
    if use_exhaustive && free > EXHAUSTIVE_MAX_VARS {
        eprintln!(
            "error: exhaustive solving supports at most {EXHAUSTIVE_MAX_VARS} free variables, instance has {free}"
        );
        return EXIT_PARSE;
    }

    let params = AnnealParams {
        restarts: args.restarts,
        sweeps: args.sweeps,
        initial_temp: args.temp,
        cooling: args.cooling,
        seed: args.seed,
    };
    let result = if use_exhaustive {
        let solved = if args.parallel {
            solve_exhaustive(&compiled.qubo, args.cap)
        } else {
            solve_exhaustive_seq(&compiled.qubo, args.cap)
        };
        match solved {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_PARSE;
            }
        }
    } else {
        let solved = if args.parallel {
            solve_anneal(&compiled.qubo, &params)
        } else {
            solve_anneal_seq(&compiled.qubo, &params)
        };
        match solved {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_PARSE;
            }
        }
    };

    report_solution(&puzzle, &compiled, result, use_exhaustive, machine)
}

/// Shared tail of `solve`: floor comparison, non-repetition filtering,
/// independent verification, rendering, exit code.
fn report_solution(
    puzzle: &Puzzle,
    compiled: &Compiled,
    result: SolveResult,
    exhaustive: bool,
    machine: bool,
) -> u8 {
    let floor = compiled.floor;
    let mut report = MachineReport::new(puzzle);
    report.push("free-variables", compiled.vars.num_free());
    report.push("solver", if exhaustive { "exhaustive" } else { "anneal" });

    if let Some(floor) = floor {
        if result.energy > floor {
            if exhaustive {
                let msg = format!(
                    "infeasible: exhaustive minimum {} > floor {}",
                    result.energy, floor
                );
                if machine {
                    report.push("status", "infeasible");
                    report.push("energy", result.energy);
                    report.push("floor", floor);
                    report.push("reason", &msg);
                    report.print();
                } else {
                    println!("{msg}");
                }
                return EXIT_INFEASIBLE;
            }
            let msg = format!(
                "solver gave up: best energy {} above floor {}",
                result.energy, floor
            );
            if machine {
                report.push("status", "gave-up");
                report.push("energy", result.energy);
                report.push("floor", floor);
                report.push("reason", &msg);
                report.print();
            } else {
                println!("{msg}");
            }
            return EXIT_GAVE_UP;
        }
    }

    // Pick an optimum that passes the checks the model cannot encode.
    let candidates: Vec<Vec<bool>> = match &result.optima {
        Some(list) => list.clone(),
        None => vec![result.best.clone()],
    };
    let mut chosen: Option<Vec<bool>> = None;
    for bits in &candidates {
        let values = compiled.vars.decode(bits);
        if let Puzzle::Takuzu(p) = puzzle {
            match check_global_nonrepetition(p, &values) {
                Ok(r) if !r.ok => continue,
                Ok(_) => {}
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            }
        }
        chosen = Some(values);
        break;
    }
    let Some(values) = chosen else {
        // Every floor assignment repeats a row or column.
        if exhaustive && !result.optima_truncated() {
            let msg = "infeasible: every minimum-energy board repeats a row or column";
            if machine {
                report.push("status", "infeasible");
                report.push("energy", result.energy);
                report.push("reason", msg);
                report.print();
            } else {
                println!("{msg}");
            }
            return EXIT_INFEASIBLE;
        }
        let msg = "solver gave up: reached the floor but only on boards that repeat lines";
        if machine {
            report.push("status", "gave-up");
            report.push("energy", result.energy);
            report.push("reason", msg);
            report.print();
        } else {
            println!("{msg}");
        }
        return EXIT_GAVE_UP;
    };

    let verdict = match oracle::verify(puzzle, &values) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let verified = verdict.satisfied();

    if machine {
        report.push(
            "status",
            if verified {
                "solved"
            } else if exhaustive {
                "infeasible"
            } else {
                "gave-up"
            },
        );
        report.push("energy", result.energy);
        if let Some(f) = floor {
            report.push("floor", f);
        }
        report.push("verified", verified);
        report.push("solution", machine_solution(puzzle, &values));
        report.print();
    } else {
        print!("{}", render_grid(puzzle, &values));
        println!("energy: {}", result.energy);
        match floor {
            Some(f) => println!("floor: {f}"),
            None => println!("floor: open (maximization)"),
        }
        if verified {
            println!("verified: all constraints satisfied");
        } else {
            println!("verifier found violations:");
            for v in &verdict.violations {
                let cells: Vec<String> = v.cells.iter().map(|c| c.to_string()).collect();
                println!("  {}: {}", v.constraint, cells.join(" "));
            }
        }
    }

    if verified {
        EXIT_OK
    } else if exhaustive {
        // The true minimum violates the puzzle: no better board exists.
        EXIT_INFEASIBLE
    } else {
        EXIT_GAVE_UP
    }
}

fn cmd_verify(args: VerifyArgs, machine: bool) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let text = match std::fs::read_to_string(&args.solution) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.solution.display());
            return EXIT_PARSE;
        }
    };
    let values = match parse::parse_solution_grid(&text, &puzzle) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}: {e}", args.solution.display());
            return EXIT_PARSE;
        }
    };
    let verdict = match oracle::verify(&puzzle, &values) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    if machine {
        let mut report = MachineReport::new(&puzzle);
        report.push("satisfied", verdict.satisfied());
        report.push("violations", verdict.violations.len());
        report.print();
    } else if verdict.satisfied() {
        println!("satisfied: all constraints hold");
    } else {
        println!("violations:");
        for v in &verdict.violations {
            let cells: Vec<String> = v.cells.iter().map(|c| c.to_string()).collect();
            println!("  {}: {}", v.constraint, cells.join(" "));
        }
    }
    if verdict.satisfied() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

fn cmd_count(args: CountArgs, machine: bool) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let enumeration = match oracle::enumerate_solutions(&puzzle, args.cap) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    let n = enumeration.solutions.len();
    if machine {
        let mut report = MachineReport::new(&puzzle);
        report.push("count", n);
        report.push("complete", enumeration.complete);
        report.print();
    } else if enumeration.complete {
        println!("{n} solution(s)");
    } else {
        println!("at least {n} solutions (cap reached)");
    }
    if n == 0 && enumeration.complete {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    }
}

fn cmd_export(args: ExportArgs) -> u8 {
    let puzzle = match load_puzzle(&args.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let compiled = match compile_puzzle(&puzzle, &args.model) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let text = compiled.qubo.export();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_PARSE;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}
