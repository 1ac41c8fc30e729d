//! Command-line tables for cloning a qubit that arrives with its orthogonal
//! partner: closed-form fidelity scans, the fixed-point optimizer and its
//! dual certificate, the two-mode-squeezing realization, and the resource
//! crossover search.
//!
//! Data goes to standard output (CSV with a header row, or single-line
//! JSON); diagnostics go to standard error. Exit codes: 0 success, 2 for a
//! usage or domain error, 3 when the optimizer runs out of iterations (the
//! last iterate is still reported).

use clap::{Parser, Subcommand, ValueEnum};
use orthoclone::cloneropt::{
    crossover, dual_certificate, extremal_residual, fidelity_operator, fidelity_parallel,
    fidelity_perp, fidelity_perp_general, optimize_choi, Optimum,
};
use orthoclone::pdcsim::{gain_scan, optimal_gain, pdc_fidelity};
use orthoclone::Error;
use serde_json::{json, Number, Value};
use std::fmt;
use std::io::Write;
use std::process::ExitCode;

/// Largest clone count the closed-form table commands accept.
const MAX_SCAN_M: usize = 1_000_000;

#[derive(Parser)]
#[command(
    name = "orthoclone",
    version,
    about = "Optimal cloning of a qubit supplied together with its orthogonal partner",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Comma-separated values with a header row, 12 significant digits
    Csv,
    /// A single JSON document, 15 significant digits
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the closed-form fidelity laws over a range of clone counts
    Scan {
        /// Smallest clone count M
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        /// Largest clone count M
        #[arg(long, default_value_t = 20)]
        m_max: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Maximize the clone fidelity by fixed-point iteration and certify it
    Optimize {
        /// Clone count M
        #[arg(long)]
        m: usize,
        /// Convergence tolerance on the fidelity increment
        #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
        tol: f64,
        /// Iteration budget
        #[arg(long, default_value_t = 50_000)]
        max_iter: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the dual optimality certificate and its spectrum
    Certificate {
        /// Clone count M
        #[arg(long)]
        m: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Scan the two-mode-squeezing realization over a gain grid
    Pdc {
        /// Clone count M
        #[arg(long)]
        m: usize,
        /// Smallest mean pair number y = sinh^2(gain)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        y_min: f64,
        /// Largest mean pair number y
        #[arg(long, allow_negative_numbers = true)]
        y_max: f64,
        /// Number of grid points
        #[arg(long, default_value_t = 201)]
        steps: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Find where N copies plus one orthogonal qubit beat N + 1 copies
    Crossover {
        /// Number of identical input copies N
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Largest clone count to scan
        #[arg(long, default_value_t = 100)]
        m_max: usize,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Everything that can interrupt a run: a library error or a write failure.
enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "failed to write output: {e}"),
        }
    }
}

/// Exit-code contract: 2 for anything the caller can fix by changing
/// arguments, 3 for an honest non-convergence, 1 for internal failures.
fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Lib(Error::NonConvergence { .. }) => 3,
        CliError::Lib(
            Error::Domain(_)
            | Error::SizeOutOfRange { .. }
            | Error::IndexOutOfRange(_)
            | Error::InsufficientCutoff { .. },
        ) => 2,
        _ => 1,
    }
}

/// A CSV cell: 12 significant digits, scientific notation, '.' decimal
/// separator regardless of locale.
fn csv_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// A JSON number carrying 15 significant digits.
fn json_num(x: f64) -> Value {
    let rounded: f64 = format!("{x:.14e}").parse().expect("rounded float reparses");
    Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn json_opt(x: Option<f64>) -> Value {
    x.map(json_num).unwrap_or(Value::Null)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = dispatch(&cli.command, &mut out);
    if let Err(e) = out.flush() {
        eprintln!("error: failed to write output: {e}");
        return ExitCode::FAILURE;
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(command: &Command, out: &mut impl Write) -> Result<(), CliError> {
    match *command {
        Command::Scan {
            m_min,
            m_max,
            format,
        } => cmd_scan(m_min, m_max, format, out),
        Command::Optimize {
            m,
            tol,
            max_iter,
            format,
        } => cmd_optimize(m, tol, max_iter, format, out),
        Command::Certificate { m, format } => cmd_certificate(m, format, out),
        Command::Pdc {
            m,
            y_min,
            y_max,
            steps,
            format,
        } => cmd_pdc(m, y_min, y_max, steps, format, out),
        Command::Crossover { n, m_max, format } => cmd_crossover(n, m_max, format, out),
    }
}

/// One row per clone count: the orthogonal-pair law, the two-copy law where
/// it exists (M ≥ 2), and their signed difference.
fn cmd_scan(
    m_min: usize,
    m_max: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<(), CliError> {
    if m_min < 1 || m_min > m_max || m_max > MAX_SCAN_M {
        return Err(Error::Domain(format!(
            "scan range must satisfy 1 <= m-min <= m-max <= {MAX_SCAN_M} (got {m_min}..{m_max})"
        ))
        .into());
    }
    if format == Format::Csv {
        writeln!(out, "m,f_perp,f_parallel,advantage")?;
    } else {
        write!(out, "{{\"rows\":[")?;
    }
    for m in m_min..=m_max {
        let f_perp = fidelity_perp(m)?;
        let pair = if m >= 2 {
            let f_parallel = fidelity_parallel(2, m)?;
            Some((f_parallel, f_perp - f_parallel))
        } else {
            None
        };
        match format {
            Format::Csv => {
                let (par, adv) = pair
                    .map(|(p, a)| (csv_num(p), csv_num(a)))
                    .unwrap_or_default();
                writeln!(out, "{m},{},{par},{adv}", csv_num(f_perp))?;
            }
            Format::Json => {
                if m > m_min {
                    write!(out, ",")?;
                }
                write!(
                    out,
                    "{{\"m\":{m},\"f_perp\":{},\"f_parallel\":{},\"advantage\":{}}}",
                    json_num(f_perp),
                    json_opt(pair.map(|(p, _)| p)),
                    json_opt(pair.map(|(_, a)| a)),
                )?;
            }
        }
    }
    if format == Format::Json {
        writeln!(out, "]}}")?;
    }
    Ok(())
}

/// The optimizer report; printed even when iterations run out, in which case
/// the command still exits with code 3.
fn cmd_optimize(
    m: usize,
    tol: f64,
    max_iter: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let report = |opt: &Optimum, converged: bool, out: &mut dyn Write| -> Result<(), CliError> {
        let a = fidelity_operator(m)?;
        let closed_form = fidelity_perp(m)?;
        let deviation = opt.fidelity - closed_form;
        let duality_gap = opt.certificate.trace_lambda() - opt.fidelity;
        let residual = extremal_residual(&opt.chi, &opt.certificate, &a)?;
        match format {
            Format::Csv => {
                writeln!(
                    out,
                    "m,fidelity,closed_form,deviation,duality_gap,residual,iterations,converged"
                )?;
                writeln!(
                    out,
                    "{m},{},{},{},{},{},{},{converged}",
                    csv_num(opt.fidelity),
                    csv_num(closed_form),
                    csv_num(deviation),
                    csv_num(duality_gap),
                    csv_num(residual),
                    opt.iterations,
                )?;
            }
            Format::Json => {
                let doc = json!({
                    "m": m,
                    "fidelity": json_num(opt.fidelity),
                    "closed_form": json_num(closed_form),
                    "deviation": json_num(deviation),
                    "duality_gap": json_num(duality_gap),
                    "residual": json_num(residual),
                    "iterations": opt.iterations,
                    "converged": converged,
                });
                writeln!(out, "{doc}")?;
            }
        }
        Ok(())
    };
    match optimize_choi(m, tol, max_iter) {
        Ok(opt) => report(&opt, true, out),
        Err(Error::NonConvergence {
            iterations,
            fidelity,
            last,
        }) => {
            report(&last, false, out)?;
            Err(Error::NonConvergence {
                iterations,
                fidelity,
                last,
            }
            .into())
        }
        Err(e) => Err(e.into()),
    }
}

/// The dual certificate in the fixed two-qubit basis |00⟩, |11⟩, |01⟩, |10⟩:
/// its trace (which equals the optimal fidelity), the three distinct
/// eigenvalues of the certified gap operator in descending order plus the
/// zero, a positivity flag, and all sixteen matrix entries row-major.
fn cmd_certificate(m: usize, format: Format, out: &mut impl Write) -> Result<(), CliError> {
    let cert = dual_certificate(m)?;
    let f_perp = fidelity_perp(m)?;
    let mu = cert.mu();
    if mu.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "certificate spectrum split into {} clusters, expected 3",
            mu.len()
        ))
        .into());
    }
    // Ascending clusters: the zero, then the two positive shells. The
    // report names the smaller positive one mu_1 and keeps the zero as mu_3.
    let (mu_3, mu_1, mu_2) = (mu[0], mu[1], mu[2]);
    let psd = mu_3 >= -1e-9;
    let lambda = cert.lambda();
    let entries: Vec<f64> = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .map(|(r, c)| lambda[(r, c)].re)
        .collect();
    match format {
        Format::Csv => {
            let header: Vec<String> = (0..4)
                .flat_map(|r| (0..4).map(move |c| format!("lambda_{r}{c}")))
                .collect();
            writeln!(
                out,
                "m,trace_lambda,f_perp,psd,mu_1,mu_2,mu_3,{}",
                header.join(",")
            )?;
            let cells: Vec<String> = entries.iter().map(|&x| csv_num(x)).collect();
            writeln!(
                out,
                "{m},{},{},{psd},{},{},{},{}",
                csv_num(cert.trace_lambda()),
                csv_num(f_perp),
                csv_num(mu_1),
                csv_num(mu_2),
                csv_num(mu_3),
                cells.join(",")
            )?;
        }
        Format::Json => {
            let rows: Vec<Value> = entries
                .chunks(4)
                .map(|row| Value::Array(row.iter().map(|&x| json_num(x)).collect()))
                .collect();
            let doc = json!({
                "m": m,
                "trace_lambda": json_num(cert.trace_lambda()),
                "f_perp": json_num(f_perp),
                "psd": psd,
                "mu_1": json_num(mu_1),
                "mu_2": json_num(mu_2),
                "mu_3": json_num(mu_3),
                "lambda": rows,
            });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}

/// Fidelity and success probability across a gain grid, with the analytic
/// optimum alongside every row so each line stands on its own.
fn cmd_pdc(
    m: usize,
    y_min: f64,
    y_max: f64,
    steps: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<(), CliError> {
    if !(y_min >= 0.0 && y_max > y_min && y_max.is_finite()) {
        return Err(Error::Domain(format!(
            "gain grid must satisfy 0 <= y-min < y-max (got {y_min}..{y_max})"
        ))
        .into());
    }
    if steps < 2 {
        return Err(
            Error::Domain(format!("gain grid needs at least 2 steps (got {steps})")).into(),
        );
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| y_min + (y_max - y_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let rows = gain_scan(m, &grid)?;
    let y_opt = optimal_gain(m)?.y();
    let f_opt = pdc_fidelity(m, y_opt)?;
    match format {
        Format::Csv => {
            writeln!(out, "m,y,gamma,fidelity,success_probability,y_opt,f_opt")?;
            for row in &rows {
                writeln!(
                    out,
                    "{m},{},{},{},{},{},{}",
                    csv_num(row.y),
                    csv_num(row.gamma),
                    csv_num(row.fidelity),
                    csv_num(row.success_probability),
                    csv_num(y_opt),
                    csv_num(f_opt),
                )?;
            }
        }
        Format::Json => {
            write!(
                out,
                "{{\"m\":{m},\"y_opt\":{},\"f_opt\":{},\"rows\":[",
                json_num(y_opt),
                json_num(f_opt)
            )?;
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write!(
                    out,
                    "{{\"y\":{},\"gamma\":{},\"fidelity\":{},\"success_probability\":{}}}",
                    json_num(row.y),
                    json_num(row.gamma),
                    json_num(row.fidelity),
                    json_num(row.success_probability),
                )?;
            }
            writeln!(out, "]}}")?;
        }
    }
    Ok(())
}

/// Both fidelity curves over M = N+1 ..= m_max plus the first strict-win
/// and equality points; a missing point prints as the literal `none` in CSV
/// and `null` in JSON.
fn cmd_crossover(
    n: usize,
    m_max: usize,
    format: Format,
    out: &mut impl Write,
) -> Result<(), CliError> {
    if m_max > MAX_SCAN_M {
        return Err(
            Error::Domain(format!("m-max must be at most {MAX_SCAN_M} (got {m_max})")).into(),
        );
    }
    let report = crossover(n, m_max)?;
    let marker = |p: Option<usize>| p.map_or_else(|| "none".into(), |v: usize| v.to_string());
    let json_marker = |p: Option<usize>| p.map_or(Value::Null, |v| Value::Number(Number::from(v)));
    if format == Format::Csv {
        writeln!(out, "n,m,f_pairs,f_copies,advantage,strict_at,equality_at")?;
    } else {
        write!(
            out,
            "{{\"n\":{n},\"m_max\":{m_max},\"strict_at\":{},\"equality_at\":{},\"rows\":[",
            json_marker(report.strict_at),
            json_marker(report.equality_at)
        )?;
    }
    for m in (n + 1)..=m_max {
        let f_pairs = fidelity_perp_general(n, m)?;
        let f_copies = fidelity_parallel(n + 1, m)?;
        let advantage = f_pairs - f_copies;
        match format {
            Format::Csv => writeln!(
                out,
                "{n},{m},{},{},{},{},{}",
                csv_num(f_pairs),
                csv_num(f_copies),
                csv_num(advantage),
                marker(report.strict_at),
                marker(report.equality_at),
            )?,
            Format::Json => {
                if m > n + 1 {
                    write!(out, ",")?;
                }
                write!(
                    out,
                    "{{\"m\":{m},\"f_pairs\":{},\"f_copies\":{},\"advantage\":{}}}",
                    json_num(f_pairs),
                    json_num(f_copies),
                    json_num(advantage),
                )?;
            }
        }
    }
    if format == Format::Json {
        writeln!(out, "]}}")?;
    }
    Ok(())
}
