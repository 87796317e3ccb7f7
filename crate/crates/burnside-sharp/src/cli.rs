//! Command-line front door.
//!
//! Grammar: `burnside-sharp <constant|solve|verify|table> [flags]`.
//! Exit codes are a stable contract: 0 pass, 1 verification failure,
//! 2 usage or domain error, 3 I/O failure. A downstream pipe closing
//! early (`... | head`) exits 141 quietly, mirroring death by SIGPIPE.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::approx::{self, ApproxKind};
use crate::error::Error;
use crate::extprec::ExtReal;
use crate::logfact::LogFactSweep;
use crate::solver::{self, TOL_FLOOR};
use crate::verify;

/// Significant digits in machine-readable output; round-trips ExtReal.
const MACHINE_DIGITS: usize = 30;
/// Significant digits in the human table.
const HUMAN_DIGITS: usize = 15;

#[derive(Parser)]
#[command(
    name = "burnside-sharp",
    version,
    about = "Sharp Burnside-type factorial bounds, verified in extended precision"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and print a named constant.
    Constant {
        /// Constant to print.
        #[arg(value_enum)]
        name: ConstantName,
        /// Digits after the decimal point, truncated (1..=28).
        #[arg(long, default_value_t = 28)]
        digits: u32,
    },
    /// Solve the defining equation f(a_n) = n! for one n.
    Solve {
        /// Index of the shift a_n.
        #[arg(long)]
        n: u64,
        /// Bracket-width tolerance as a decimal string (floor 1e-25).
        #[arg(long)]
        tol: Option<String>,
    },
    /// Run a verification sweep and emit its table.
    Verify {
        /// Which claim to verify.
        #[arg(value_enum)]
        kind: VerifyKind,
        /// Largest n to check (bounds, monotone, accuracy).
        #[arg(long)]
        n_max: Option<u64>,
        /// Geometric ladder A:B in steps of 10x (limits).
        #[arg(long)]
        ladder: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a comparison table of the approximations.
    Table {
        /// Which table to emit.
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 1)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantName {
    /// The sharp lower-bound constant a*.
    AStar,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    /// Theorem sandwich over an n range.
    Bounds,
    /// Strict growth of the shift sequence a_n.
    Monotone,
    /// Limit-chain diagnostics along a geometric ladder.
    Limits,
    /// Burnside versus Stirling accuracy.
    Accuracy,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    /// log n!, the named approximations, and signed relative errors.
    ApproxComparison,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable columns, 15 digits.
    Table,
    /// RFC-4180-style CSV, 30 digits, deterministic bytes.
    Csv,
    /// Flat array of row objects, same field names as the CSV header.
    Json,
}

/// Parses the process arguments, runs the command, returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 141,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            match e {
                Error::Io(_) => 3,
                Error::NoConvergence { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Constant { name, digits } => cmd_constant(name, digits),
        Command::Solve { n, tol } => cmd_solve(n, tol),
        Command::Verify {
            kind,
            n_max,
            ladder,
            format,
            out,
        } => with_output(out, |w| {
            cmd_verify(kind, n_max, ladder.as_deref(), format, w)
        }),
        Command::Table {
            kind: TableKind::ApproxComparison,
            n_from,
            n_to,
            format,
            out,
        } => with_output(out, |w| cmd_table(n_from, n_to, format, w)),
    }
}

/// Runs `body` against the chosen sink; --out failures surface as I/O.
fn with_output<F>(out: Option<PathBuf>, body: F) -> Result<i32, Error>
where
    F: FnOnce(&mut dyn Write) -> Result<i32, Error>,
{
    match out {
        Some(path) => {
            let file = File::create(&path)?;
            let mut w = io::BufWriter::new(file);
            let code = body(&mut w)?;
            w.flush()?;
            Ok(code)
        }
        None => {
            let stdout = io::stdout();
            let mut w = io::BufWriter::new(stdout.lock());
            let code = body(&mut w)?;
            w.flush()?;
            Ok(code)
        }
    }
}

fn cmd_constant(name: ConstantName, digits: u32) -> Result<i32, Error> {
    if !(1..=28).contains(&digits) {
        return Err(Error::Domain {
            what: "--digits must be in 1..=28",
        });
    }
    let ConstantName::AStar = name;
    let result = solver::solve_a_star(ExtReal::from(TOL_FLOOR))?;
    let mut w = io::stdout().lock();
    writeln!(
        w,
        "a-star = {}",
        result.value.to_fraction_trunc(digits as usize)
    )?;
    writeln!(w, "residual = {}", result.residual.to_decimal(3))?;
    if !result.converged {
        return Ok(1);
    }
    Ok(0)
}

fn cmd_solve(n: u64, tol: Option<String>) -> Result<i32, Error> {
    let tol = match tol {
        Some(s) => {
            let t = ExtReal::from_decimal_str(&s)?;
            if t.to_f64() < TOL_FLOOR {
                eprintln!("note: tolerance {s} is below the 1e-25 floor; clamped");
            }
            t
        }
        None => ExtReal::from(TOL_FLOOR),
    };
    let r = solver::solve_a_n(n, tol)?;
    let mut w = io::stdout().lock();
    writeln!(w, "a_{n} = {}", r.value.to_decimal(MACHINE_DIGITS))?;
    writeln!(w, "residual = {}", r.residual.to_decimal(3))?;
    writeln!(w, "bracket_width = {}", r.bracket_width.to_decimal(3))?;
    writeln!(
        w,
        "iterations = {} (newton {}, bisection {})",
        r.iterations, r.newton_steps, r.bisection_steps
    )?;
    writeln!(w, "converged = {}", r.converged)?;
    Ok(if r.converged { 0 } else { 1 })
}

fn cmd_verify(
    kind: VerifyKind,
    n_max: Option<u64>,
    ladder: Option<&str>,
    format: Format,
    w: &mut dyn Write,
) -> Result<i32, Error> {
    match kind {
        VerifyKind::Bounds => {
            let n_max = required_n_max(n_max)?;
            let sweep = verify::verify_bounds(1, n_max)?;
            let mut emitter = Emitter::new(
                format,
                w,
                &[
                    "n",
                    "log_lower",
                    "log_fact",
                    "log_upper",
                    "lower_margin",
                    "upper_margin",
                    "status",
                    "defining_equality",
                ],
            )?;
            let mut summary = verify::BoundsSummary::default();
            for report in sweep {
                summary.record(&report);
                emitter.row(&[
                    Cell::Int(report.n),
                    Cell::Ext(report.log_lower),
                    Cell::Ext(report.log_fact),
                    Cell::Ext(report.log_upper),
                    Cell::Ext(report.lower_margin),
                    Cell::Ext(report.upper_margin),
                    Cell::Text(report.status.label()),
                    Cell::Flag(report.defining_equality),
                ])?;
            }
            emitter.finish()?;
            let pass = summary.pass();
            summary_line(
                format,
                w,
                &format!(
                    "rows={} strict_pass={} defining_equality={} indeterminate={} fail={}{} verdict={}",
                    summary.rows,
                    summary.strict_pass,
                    summary.defining_equalities,
                    summary.indeterminate,
                    summary.fail,
                    match summary.first_fail {
                        Some(n) => format!(" first_fail={n}"),
                        None => String::new(),
                    },
                    verdict(pass)
                ),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyKind::Monotone => {
            let n_max = required_n_max(n_max)?;
            let report = verify::verify_monotone(n_max)?;
            let mut emitter = Emitter::new(format, w, &["n", "a_n", "gap"])?;
            for row in &report.rows {
                emitter.row(&[Cell::Int(row.n), Cell::Ext(row.a_n), Cell::Ext(row.gap)])?;
            }
            emitter.finish()?;
            let min_gap = if report.rows.len() >= 2 {
                format!(" min_gap={:e}", report.min_gap)
            } else {
                String::new()
            };
            summary_line(
                format,
                w,
                &format!(
                    "rows={}{} gaps_decreasing_from_2={}{} verdict={}",
                    report.rows.len(),
                    min_gap,
                    report.gaps_decreasing_from_2,
                    match report.first_violation {
                        Some(n) => format!(" first_violation={n}"),
                        None => String::new(),
                    },
                    verdict(report.pass)
                ),
            )?;
            Ok(if report.pass { 0 } else { 1 })
        }
        VerifyKind::Limits => {
            let (from, to) = parse_ladder(ladder.unwrap_or("10:1000000"))?;
            let ns = verify::ladder(from, to)?;
            let rows = verify::limit_diagnostics(&ns)?;
            let mut emitter = Emitter::new(
                format,
                w,
                &["n", "a_n", "gap", "pow_diag", "exp_diag", "small_diag"],
            )?;
            for row in &rows {
                emitter.row(&[
                    Cell::Int(row.n),
                    Cell::Ext(row.a_n),
                    Cell::Ext(row.gap),
                    Cell::Ext(row.pow_diag),
                    Cell::Ext(row.exp_diag),
                    Cell::Ext(row.small_diag),
                ])?;
            }
            emitter.finish()?;
            let pass = verify::limit_trend_ok(&rows);
            summary_line(
                format,
                w,
                &format!(
                    "rows={} trend_to_one={} verdict={}",
                    rows.len(),
                    pass,
                    verdict(pass)
                ),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyKind::Accuracy => {
            let n_max = required_n_max(n_max)?;
            let sweep = verify::accuracy_comparison(n_max)?;
            let mut emitter = Emitter::new(
                format,
                w,
                &["n", "sre_stirling", "sre_burnside", "abs_ratio"],
            )?;
            let mut summary = verify::AccuracySummary::default();
            for row in sweep {
                summary.record(&row);
                let ratio = row.sre_burnside.abs() / row.sre_stirling.abs();
                emitter.row(&[
                    Cell::Int(row.n),
                    Cell::Ext(row.sre_stirling),
                    Cell::Ext(row.sre_burnside),
                    Cell::Ext(ratio),
                ])?;
            }
            emitter.finish()?;
            let pass = summary.pass();
            summary_line(
                format,
                w,
                &format!(
                    "rows={} violations={}{} final_ratio={:.6} verdict={}",
                    summary.rows,
                    summary.violations,
                    match summary.first_violation {
                        Some(n) => format!(" first_violation={n}"),
                        None => String::new(),
                    },
                    summary.final_ratio,
                    verdict(pass)
                ),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn cmd_table(n_from: u64, n_to: u64, format: Format, w: &mut dyn Write) -> Result<i32, Error> {
    let ceiling = verify::sweep_ceiling();
    if n_to > ceiling {
        return Err(Error::RangeTooLarge {
            requested: n_to,
            ceiling,
        });
    }
    if n_from < 1 || n_from > n_to {
        return Err(Error::EmptyRange {
            from: n_from,
            to: n_to,
        });
    }
    let mut emitter = Emitter::new(
        format,
        w,
        &[
            "n",
            "log_fact",
            "log_stirling",
            "log_burnside",
            "log_sharp_lower",
            "log_sharp_upper",
            "sre_stirling",
            "sre_burnside",
        ],
    )?;
    for (n, log_fact) in LogFactSweep::starting_at(n_from)? {
        if n > n_to {
            break;
        }
        emitter.row(&[
            Cell::Int(n),
            Cell::Ext(log_fact),
            Cell::Ext(approx::log_stirling(n)?),
            Cell::Ext(approx::log_burnside(n)?),
            Cell::Ext(approx::log_sharp_lower(n)?),
            Cell::Ext(approx::log_sharp_upper(n)?),
            Cell::Ext(approx::signed_rel_error_with(
                ApproxKind::Stirling,
                n,
                log_fact,
            )?),
            Cell::Ext(approx::signed_rel_error_with(
                ApproxKind::Burnside,
                n,
                log_fact,
            )?),
        ])?;
    }
    emitter.finish()?;
    Ok(0)
}

fn required_n_max(n_max: Option<u64>) -> Result<u64, Error> {
    n_max.ok_or(Error::Domain {
        what: "--n-max is required for this sweep",
    })
}

fn parse_ladder(s: &str) -> Result<(u64, u64), Error> {
    let bad = Error::Domain {
        what: "--ladder expects A:B with integers A <= B",
    };
    let (a, b) = s.split_once(':').ok_or(bad)?;
    let from = a.parse::<u64>().map_err(|_| Error::Domain {
        what: "--ladder expects A:B with integers A <= B",
    })?;
    let to = b.parse::<u64>().map_err(|_| Error::Domain {
        what: "--ladder expects A:B with integers A <= B",
    })?;
    Ok((from, to))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// The table summary goes to stdout for the human format but to stderr
/// for machine formats, keeping csv/json streams clean.
fn summary_line(format: Format, w: &mut dyn Write, line: &str) -> Result<(), Error> {
    match format {
        Format::Table => writeln!(w, "# {line}")?,
        Format::Csv | Format::Json => {
            let _ = writeln!(io::stderr(), "# {line}");
        }
    }
    Ok(())
}

enum Cell {
    Int(u64),
    Ext(ExtReal),
    Text(&'static str),
    Flag(bool),
}

/// Streaming table writer for the three output formats.
struct Emitter<'w> {
    format: Format,
    w: &'w mut dyn Write,
    headers: &'static [&'static str],
    rows_written: u64,
}

impl<'w> Emitter<'w> {
    const HUMAN_WIDTH: usize = 23;

    fn new(
        format: Format,
        w: &'w mut dyn Write,
        headers: &'static [&'static str],
    ) -> Result<Emitter<'w>, Error> {
        let e = Emitter {
            format,
            w,
            headers,
            rows_written: 0,
        };
        match e.format {
            Format::Csv => {
                writeln!(e.w, "{}", headers.join(","))?;
            }
            Format::Json => {
                write!(e.w, "[")?;
            }
            Format::Table => {
                let mut line = String::new();
                for h in headers {
                    line.push_str(&format!("{h:>width$} ", width = Self::HUMAN_WIDTH));
                }
                writeln!(e.w, "{}", line.trim_end())?;
            }
        }
        Ok(e)
    }

    fn row(&mut self, cells: &[Cell]) -> Result<(), Error> {
        debug_assert_eq!(cells.len(), self.headers.len());
        match self.format {
            Format::Csv => {
                let fields: Vec<String> = cells.iter().map(|c| render(c, MACHINE_DIGITS)).collect();
                writeln!(self.w, "{}", fields.join(","))?;
            }
            Format::Json => {
                let mut obj = Map::with_capacity(cells.len());
                for (h, c) in self.headers.iter().zip(cells) {
                    let v = match c {
                        Cell::Int(n) => Value::from(*n),
                        Cell::Ext(x) => Value::from(x.to_decimal(MACHINE_DIGITS)),
                        Cell::Text(s) => Value::from(*s),
                        Cell::Flag(b) => Value::from(*b),
                    };
                    obj.insert((*h).to_string(), v);
                }
                if self.rows_written > 0 {
                    write!(self.w, ",")?;
                }
                write!(self.w, "\n{}", Value::Object(obj))?;
            }
            Format::Table => {
                let mut line = String::new();
                for c in cells {
                    line.push_str(&format!(
                        "{:>width$} ",
                        render(c, HUMAN_DIGITS),
                        width = Self::HUMAN_WIDTH
                    ));
                }
                writeln!(self.w, "{}", line.trim_end())?;
            }
        }
        self.rows_written += 1;
        Ok(())
    }

    fn finish(&mut self) -> Result<(), Error> {
        if self.format == Format::Json {
            writeln!(self.w, "\n]")?;
        }
        Ok(())
    }
}

fn render(cell: &Cell, digits: usize) -> String {
    match cell {
        Cell::Int(n) => n.to_string(),
        Cell::Ext(x) => x.to_decimal(digits),
        Cell::Text(s) => (*s).to_string(),
        Cell::Flag(b) => b.to_string(),
    }
}
