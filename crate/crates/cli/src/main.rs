//! `tnn-cells`: command-line driver for tnn-core.
//!
//! Exit codes: 0 when every check passes, 1 when a check or assertion fails,
//! 2 on usage or input errors.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tnn_core::cells::{self, CellsError};
use tnn_core::combinat::{self, CauchonDiagram, RestrictedPermutation};
use tnn_core::io::{format_trace, matrix_to_strings, parse_matrix_csv};
use tnn_core::minors::MinorFamily;
use tnn_core::restoration::{self, MatrixTrace};
use tnn_core::verify::{run_suite, Suite, SuiteConfig};
use tnn_core::{families, LaurentPoly, Matrix, Rational};

/// Largest grid the u64 diagram masks can hold.
const MAX_CELLS: usize = 64;
/// Largest grid for whole-grid symbolic runs without `--force`.
const SYMBOLIC_CAP: usize = 12;

#[derive(Parser)]
#[command(
    name = "tnn-cells",
    version,
    about = "Exact computations on cells of totally nonnegative matrices"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "TNN_CELLS_THREADS", global = true)]
    threads: Option<usize>,
    /// Allow whole-grid symbolic runs with m*p above 12.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Grid {
    /// Number of rows.
    m: usize,
    /// Number of columns.
    p: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List or count the Cauchon diagrams of an m x p grid.
    Diagrams {
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        count: bool,
    },
    /// List or count the restricted permutations for an m x p grid.
    Perms {
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        count: bool,
    },
    /// The minor family M(w) of a restricted permutation.
    Mw {
        #[command(flatten)]
        grid: Grid,
        /// One-line notation, e.g. 3,1,4,2,7,6,5.
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
    },
    /// The minor family M(C) of a Cauchon diagram.
    Mc {
        /// Diagram JSON `{"m":..,"p":..,"black":[[i,a],..]}`, a file holding it, or `-` for stdin.
        diagram: String,
    },
    /// Match every M(w) with the M(C) equal to it.
    Match {
        #[command(flatten)]
        grid: Grid,
    },
    /// Find the cell of a tnn matrix.
    Classify {
        /// CSV matrix file of `num/den` entries, or `-` for stdin.
        matrix: String,
        /// Also search for the permutation w with M(w) equal to the family.
        #[arg(long)]
        match_perm: bool,
    },
    /// Run the restoration algorithm and print every step.
    Restore {
        /// CSV matrix file, or `-` for stdin.
        #[arg(required_unless_present = "diagram", conflicts_with = "diagram")]
        matrix: Option<String>,
        /// Restore the symbolic matrix of a diagram instead (JSON, file or `-`).
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Run the deleting-derivations algorithm and print every step.
    Delete {
        /// CSV matrix file, or `-` for stdin.
        matrix: String,
    },
    /// Test total nonnegativity, reporting the first negative minor.
    TnnCheck {
        /// CSV matrix file, or `-` for stdin.
        matrix: String,
    },
    /// Run a verification suite.
    Verify {
        /// One of: match, poisson, tnn-roundtrip, counting, monotonicity, bruhat-cells, deletion.
        suite: Suite,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random work items for sampling suites.
        #[arg(long)]
        n: Option<usize>,
        /// Largest m*p for the Poisson suite.
        #[arg(long, default_value_t = 9)]
        poisson_cap: usize,
    },
}

enum CliError {
    Usage(anyhow::Error),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Usage(e)
    }
}

type CmdResult = Result<Output, CliError>;

struct Output {
    json: Value,
    table: String,
    passed: bool,
}

impl Output {
    fn ok(json: Value, table: String) -> Self {
        Output {
            json,
            table,
            passed: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        if n == 0 || pool.is_err() {
            eprintln!("error: invalid thread count {n}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&out.json).expect("json")),
                Format::Table => print!("{}", out.table),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(e)) => {
            eprintln!("failure: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Diagrams { grid, count } => cmd_diagrams(grid, *count),
        Command::Perms { grid, count } => cmd_perms(grid, *count),
        Command::Mw { grid, w } => cmd_mw(grid, w),
        Command::Mc { diagram } => {
            let c = read_diagram(diagram)?;
            Ok(family_output(&cells::compute_mc(&c)))
        }
        Command::Match { grid } => cmd_match(grid, cli.force),
        Command::Classify { matrix, match_perm } => cmd_classify(matrix, *match_perm),
        Command::Restore { matrix, diagram } => cmd_restore(matrix.as_deref(), diagram.as_deref()),
        Command::Delete { matrix } => {
            let x = read_matrix(matrix)?;
            let trace = restoration::delete_derivations(&x).map_err(|e| CliError::Usage(e.into()))?;
            Ok(trace_output(&trace, format_trace(&trace)))
        }
        Command::TnnCheck { matrix } => cmd_tnn_check(matrix),
        Command::Verify {
            suite,
            grid,
            seed,
            n,
            poisson_cap,
        } => cmd_verify(*suite, grid, *seed, *n, *poisson_cap, cli.force),
    }
}

fn check_grid(g: &Grid) -> anyhow::Result<()> {
    if g.m == 0 || g.p == 0 || g.m > combinat::MAX_SIDE || g.p > combinat::MAX_SIDE {
        bail!("grid sides must lie in 1..={}", combinat::MAX_SIDE);
    }
    if g.m * g.p > MAX_CELLS {
        bail!("m*p = {} exceeds the {MAX_CELLS}-cell bitmask limit", g.m * g.p);
    }
    Ok(())
}

/// Runs that compute `M(C)` for every diagram of the grid grow quickly.
fn symbolic_guard(m: usize, p: usize, force: bool) -> anyhow::Result<()> {
    if m * p > SYMBOLIC_CAP && !force {
        bail!(
            "symbolic run with m*p = {} exceeds {SYMBOLIC_CAP}; pass --force to run anyway",
            m * p
        );
    }
    Ok(())
}

/// Reads `-` as stdin, otherwise a file.
fn read_source(arg: &str) -> anyhow::Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn read_matrix(arg: &str) -> anyhow::Result<Matrix<Rational>> {
    let x = parse_matrix_csv(&read_source(arg)?)?;
    if x.rows() * x.cols() > MAX_CELLS {
        bail!("matrix has more than {MAX_CELLS} entries");
    }
    Ok(x)
}

/// Accepts inline JSON as well as a file or stdin.
fn read_diagram(arg: &str) -> anyhow::Result<CauchonDiagram> {
    let text = if arg.trim_start().starts_with('{') && !Path::new(arg).exists() {
        arg.to_string()
    } else {
        read_source(arg)?
    };
    serde_json::from_str(&text).context("parsing diagram JSON")
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn family_table(f: &MinorFamily) -> String {
    let mut out = String::new();
    for id in f.iter() {
        let _ = writeln!(out, "{id}");
    }
    let _ = writeln!(out, "# {} minors", f.len());
    out
}

fn family_output(f: &MinorFamily) -> Output {
    Output::ok(to_json(f), family_table(f))
}

fn trace_output<T: std::fmt::Display>(trace: &MatrixTrace<T>, table: String) -> Output {
    let steps: Vec<Value> = trace
        .iter()
        .map(|(r, x)| json!({ "step": r.to_string(), "matrix": matrix_to_strings(x) }))
        .collect();
    Output::ok(json!({ "m": trace.m(), "p": trace.p(), "steps": steps }), table)
}

fn cmd_diagrams(g: &Grid, count: bool) -> CmdResult {
    check_grid(g)?;
    if count {
        let n = combinat::count_diagrams(g.m, g.p).map_err(anyhow::Error::from)?;
        return Ok(Output::ok(json!(n), format!("{n}\n")));
    }
    let all = combinat::enumerate_diagrams(g.m, g.p).map_err(anyhow::Error::from)?;
    let table = all.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    Ok(Output::ok(to_json(&all), table))
}

fn cmd_perms(g: &Grid, count: bool) -> CmdResult {
    check_grid(g)?;
    if count {
        let n = combinat::band_permanent(g.m, g.p);
        return Ok(Output::ok(json!(n), format!("{n}\n")));
    }
    let all = combinat::enumerate_restricted_perms(g.m, g.p).map_err(anyhow::Error::from)?;
    let table: String = all.iter().map(|w| format!("{w}\n")).collect();
    Ok(Output::ok(to_json(&all), table))
}

fn cmd_mw(g: &Grid, w: &[usize]) -> CmdResult {
    check_grid(g)?;
    let w = RestrictedPermutation::new(g.m, g.p, w.to_vec()).map_err(anyhow::Error::from)?;
    Ok(family_output(&families::compute_mw(&w)))
}

fn cmd_match(g: &Grid, force: bool) -> CmdResult {
    check_grid(g)?;
    symbolic_guard(g.m, g.p, force)?;
    let pairs = cells::match_families(g.m, g.p).map_err(|e| match e {
        CellsError::Combinat(_) => CliError::Usage(e.into()),
        _ => CliError::Failure(e.into()),
    })?;
    let mut table = String::new();
    for x in &pairs {
        let _ = writeln!(
            table,
            "{}  {:>3}  black={:?}",
            x.perm,
            x.family_size,
            x.diagram.black_cells()
        );
    }
    let _ = writeln!(table, "# {} matched pairs", pairs.len());
    Ok(Output::ok(to_json(&pairs), table))
}

fn cmd_classify(matrix: &str, match_perm: bool) -> CmdResult {
    let x = read_matrix(matrix)?;
    let mut d = cells::classify(&x).map_err(|e| CliError::Failure(e.into()))?;
    if match_perm {
        d.matched_perm = cells::find_matching_perm(&d.family).map_err(|e| CliError::Failure(e.into()))?;
        if d.matched_perm.is_none() {
            return Err(CliError::Failure(anyhow!(
                "no restricted permutation has family {}",
                d.family
            )));
        }
    }
    let mut json = json!({
        "diagram": to_json(&d.diagram),
        "family": to_json(&d.family),
        "assertions_passed": true,
    });
    if let Some(w) = &d.matched_perm {
        json["matched_perm"] = to_json(w);
    }
    let mut table = format!("diagram:\n{}family: {}\n", d.diagram, d.family);
    if let Some(w) = &d.matched_perm {
        let _ = writeln!(table, "matched_perm: {w}");
    }
    Ok(Output::ok(json, table))
}

fn cmd_restore(matrix: Option<&str>, diagram: Option<&str>) -> CmdResult {
    if let Some(d) = diagram {
        let c = read_diagram(d)?;
        let trace = restoration::restore(&cells::symbolic_mc(&c)).map_err(|e| CliError::Failure(e.into()))?;
        let table = symbolic_trace_table(&trace);
        return Ok(trace_output(&trace, table));
    }
    let x = read_matrix(matrix.expect("clap requires a matrix or a diagram"))?;
    let trace = restoration::restore(&x).map_err(|e| CliError::Usage(e.into()))?;
    Ok(trace_output(&trace, format_trace(&trace)))
}

/// Laurent entries contain commas, so cells are separated by ` ; `.
fn symbolic_trace_table(trace: &MatrixTrace<LaurentPoly>) -> String {
    let mut out = String::new();
    for (r, x) in trace.iter() {
        let _ = writeln!(out, "{r}");
        for row in matrix_to_strings(x) {
            let _ = writeln!(out, "{}", row.join(" ; "));
        }
        out.push('\n');
    }
    out
}

fn cmd_tnn_check(matrix: &str) -> CmdResult {
    let x = read_matrix(matrix)?;
    let v = cells::is_tnn(&x);
    let table = match &v.witness {
        None => "tnn\n".to_string(),
        Some(id) => format!("not tnn: {id} is negative\n"),
    };
    Ok(Output {
        json: to_json(&v),
        table,
        passed: v.is_tnn,
    })
}

fn cmd_verify(
    suite: Suite,
    g: &Grid,
    seed: u64,
    n: Option<usize>,
    poisson_cap: usize,
    force: bool,
) -> CmdResult {
    check_grid(g)?;
    match suite {
        Suite::Poisson if g.m * g.p > poisson_cap => {
            return Err(
                anyhow!("poisson suite is capped at m*p <= {poisson_cap}; raise --poisson-cap").into(),
            );
        }
        Suite::Match | Suite::Poisson => symbolic_guard(g.m, g.p, force)?,
        _ => {}
    }
    let mut cfg = SuiteConfig::new(g.m, g.p).seed(seed);
    if let Some(n) = n {
        cfg = cfg.samples(n);
    }
    let rep = run_suite(suite, &cfg);
    let mut table = format!(
        "{} {}x{} seed={}: {} ({} checks)\n",
        rep.suite,
        rep.m,
        rep.p,
        rep.seed,
        if rep.passed { "PASS" } else { "FAIL" },
        rep.checks
    );
    for (k, v) in &rep.summary {
        let _ = writeln!(table, "  {k} = {v}");
    }
    for f in &rep.failures {
        let _ = writeln!(table, "  failure: {f}");
    }
    Ok(Output {
        json: to_json(&rep),
        table,
        passed: rep.passed,
    })
}
