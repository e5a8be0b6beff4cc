//! Command-line front end.
//!
//! Results go to standard output, diagnostics to standard error. Exit codes:
//! 0 success, 1 usage, 2 holonomy did not converge, 3 invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::adiabatic::{compare_to_holonomy, EvolutionSchedule, Pacing};
use crate::error::{Error, IntegrationError};
use crate::gates::{evaluate_program, lie_closure_dimension, register_generators, synthesize_single_qubit};
use crate::holonomy::{integrate_holonomy, projected_area, rectangle_loop, HolonomyResult, PlaneKind, PlaneSpec};
use crate::matrix::ComplexSquareMatrix;
use crate::models::{connection_at, Coordinate, ModelFamily, ModelKind};
use crate::program_file::LoopProgramFile;
use crate::tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "holoqc", version, about = "Holonomic quantum computation on CP² and G(4,2) control manifolds")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one component of the projected connection at a point.
    Connection {
        #[arg(long, value_parser = clap::value_parser!(ModelKind))]
        model: ModelKind,
        /// Comma-separated coordinates in model order (radians).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
        point: Reals,
        /// Coordinate name, e.g. theta1, phi2, theta, phi.
        #[arg(long, value_parser = clap::value_parser!(Coordinate))]
        coord: Coordinate,
    },
    /// Integrate the holonomy of a rectangle in a canonical plane.
    Holonomy {
        #[command(flatten)]
        rect: RectArgs,
        /// Refinement tolerance on successive estimates.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Budget of exponential factors before giving up.
        #[arg(long, default_value_t = tolerances::MAX_STEPS)]
        max_steps: usize,
    },
    /// Trotterized adiabatic evolution around a rectangle, compared with the holonomy.
    Evolve {
        #[command(flatten)]
        rect: RectArgs,
        /// Total evolution time.
        #[arg(long, value_parser = parse_positive)]
        time: f64,
        /// Number of Trotter steps.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value = "smooth", value_parser = clap::value_parser!(Pacing))]
        pacing: Pacing,
    },
    /// Compile a 2×2 unitary into a loop program (printed as program JSON).
    Synth {
        /// Eight comma-separated reals: row-major re,im pairs.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
        target: Reals,
    },
    /// Evaluate a loop program file.
    Run { path: PathBuf },
    /// Dimension of the Lie algebra generated by the register's loop generators.
    Closure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        qubits: u8,
    },
}

#[derive(Debug, Args)]
pub struct RectArgs {
    #[arg(long, value_parser = clap::value_parser!(PlaneKind))]
    pub plane: PlaneKind,
    /// Rectangle extents a,b along the plane's two axes (radians).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
    pub rect: (f64, f64),
    /// Pieces per rectangle edge.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub subdivisions: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reals(pub Vec<f64>);

fn parse_reals(s: &str) -> Result<Reals, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Reals)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    match parse_reals(s)?.0.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err("expected two comma-separated numbers a,b".into()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Outcome of a command body: the text to print plus an exit code.
struct Output {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn invalid(e: &Error) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INVALID }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let out = execute(&cli);
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stderr.write_all(out.stderr.as_bytes());
    out.code
}

fn execute(cli: &Cli) -> Output {
    let fmt = cli.format;
    match &cli.command {
        Command::Connection { model, point, coord } => cmd_connection(fmt, *model, &point.0, *coord),
        Command::Holonomy { rect, tol, max_steps } => cmd_holonomy(fmt, rect, *tol, *max_steps),
        Command::Evolve { rect, time, steps, pacing } => cmd_evolve(fmt, rect, *time, *steps as usize, *pacing),
        Command::Synth { target } => cmd_synth(&target.0),
        Command::Run { path } => cmd_run(fmt, path),
        Command::Closure { qubits } => cmd_closure(fmt, *qubits as usize),
    }
}

fn cmd_connection(fmt: OutputFormat, kind: ModelKind, point: &[f64], coord: Coordinate) -> Output {
    let model = ModelFamily::<f64>::of_kind(kind);
    match connection_at(&model, point, coord) {
        Ok(a) => Output::ok(match fmt {
            OutputFormat::Json => to_json_line(&json!({
                "model": kind.name(),
                "point": point,
                "coordinate": coord.label(),
                "matrix": matrix_json(a.matrix()),
            })),
            OutputFormat::Text => {
                format!("connection {} at {} ({})\n{}", coord.label(), fmt_point(point), kind.name(), matrix_text(a.matrix()))
            }
        }),
        Err(e) => Output::invalid(&e),
    }
}

fn rectangle(rect: &RectArgs) -> crate::error::Result<crate::holonomy::ParameterLoop<f64>> {
    let (a, b) = rect.rect;
    rectangle_loop(&PlaneSpec::canonical(rect.plane), a, b, rect.subdivisions as usize)
}

fn holonomy_output(fmt: OutputFormat, rect: &RectArgs, area: f64, res: &HolonomyResult<f64>, converged: bool) -> String {
    match fmt {
        OutputFormat::Json => to_json_line(&json!({
            "plane": rect.plane.name(),
            "rect": [rect.rect.0, rect.rect.1],
            "area": area,
            "converged": converged,
            "unitary": matrix_json(&res.gamma),
            "steps_used": res.steps_used,
            "estimated_error": res.estimated_error,
        })),
        OutputFormat::Text => format!(
            "holonomy on {} rect {} x {} (area {})\n{}steps_used {}\nestimated_error {}\nconverged {}\n",
            rect.plane.name(),
            sig6(rect.rect.0),
            sig6(rect.rect.1),
            sig6(area),
            matrix_text(&res.gamma),
            res.steps_used,
            sig6(res.estimated_error),
            converged
        ),
    }
}

fn cmd_holonomy(fmt: OutputFormat, rect: &RectArgs, tol: f64, max_steps: usize) -> Output {
    let lp = match rectangle(rect) {
        Ok(lp) => lp,
        Err(e) => return Output::invalid(&e),
    };
    let area = match projected_area(&lp) {
        Ok(a) => a,
        Err(e) => return Output::invalid(&e),
    };
    match integrate_holonomy(&lp, tol, max_steps) {
        Ok(res) => Output::ok(holonomy_output(fmt, rect, area, &res, true)),
        Err(IntegrationError::NotConverged(best)) => Output {
            stdout: holonomy_output(fmt, rect, area, &best, false),
            stderr: format!(
                "error: holonomy did not converge to {tol:e} within {max_steps} steps; printed the finest estimate\n"
            ),
            code: EXIT_NOT_CONVERGED,
        },
        Err(IntegrationError::Invalid(e)) => Output::invalid(&e),
    }
}

fn cmd_evolve(fmt: OutputFormat, rect: &RectArgs, time: f64, steps: usize, pacing: Pacing) -> Output {
    let schedule = match rectangle(rect).and_then(|lp| EvolutionSchedule::new(lp, time, steps)) {
        Ok(s) => s.with_pacing(pacing),
        Err(e) => return Output::invalid(&e),
    };
    match compare_to_holonomy(&schedule) {
        Ok(rep) => Output::ok(match fmt {
            OutputFormat::Json => to_json_line(&json!({
                "plane": rect.plane.name(),
                "rect": [rect.rect.0, rect.rect.1],
                "time": time,
                "steps": steps,
                "pacing": pacing_name(pacing),
                "leakage": rep.leakage,
                "deviation": rep.deviation,
                "projected_map": matrix_json(&rep.projected_map),
                "transport": matrix_json(&rep.transport),
            })),
            OutputFormat::Text => format!(
                "evolution on {} rect {} x {}, T = {}, N = {}, {} pacing\nleakage {}\ndeviation {}\nprojected map\n{}transport\n{}",
                rect.plane.name(),
                sig6(rect.rect.0),
                sig6(rect.rect.1),
                sig6(time),
                steps,
                pacing_name(pacing),
                sig6(rep.leakage),
                sig6(rep.deviation),
                matrix_text(&rep.projected_map),
                matrix_text(&rep.transport),
            ),
        }),
        Err(IntegrationError::NotConverged(best)) => Output {
            stdout: String::new(),
            stderr: format!(
                "error: reference holonomy did not converge (estimate {:e} after {} steps)\n",
                best.estimated_error, best.steps_used
            ),
            code: EXIT_NOT_CONVERGED,
        },
        Err(IntegrationError::Invalid(e)) => Output::invalid(&e),
    }
}

fn pacing_name(p: Pacing) -> &'static str {
    match p {
        Pacing::Uniform => "uniform",
        Pacing::Smooth => "smooth",
    }
}

fn cmd_synth(target: &[f64]) -> Output {
    if target.len() != 8 {
        return Output::invalid(&Error::InvalidInput(format!(
            "--target needs 8 numbers (row-major re,im pairs), got {}",
            target.len()
        )));
    }
    let m = ComplexSquareMatrix::from_fn(2, |r, c| {
        let k = 2 * (2 * r + c);
        Complex64::new(target[k], target[k + 1])
    });
    match synthesize_single_qubit(&m) {
        Ok(prog) => Output::ok(LoopProgramFile::from_program(&prog).to_json_pretty() + "\n"),
        Err(e) => Output::invalid(&e),
    }
}

fn cmd_run(fmt: OutputFormat, path: &PathBuf) -> Output {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return Output::invalid(&Error::InvalidInput(format!("cannot read {}: {e}", path.display())));
        }
    };
    let result = LoopProgramFile::from_json(&text)
        .and_then(|f| f.to_program())
        .and_then(|p| evaluate_program(&p).map(|u| (p.num_qubits, u)));
    match result {
        Ok((m, u)) => Output::ok(match fmt {
            OutputFormat::Json => to_json_line(&json!({ "num_qubits": m, "unitary": matrix_json(&u) })),
            OutputFormat::Text => format!("program unitary on {m} qubit(s)\n{}", matrix_text(&u)),
        }),
        Err(e) => Output::invalid(&e),
    }
}

fn cmd_closure(fmt: OutputFormat, qubits: usize) -> Output {
    match register_generators::<f64>(qubits).and_then(|g| lie_closure_dimension(&g).map(|d| (g.len(), d))) {
        Ok((count, dim)) => Output::ok(match fmt {
            OutputFormat::Json => {
                to_json_line(&json!({ "qubits": qubits, "generators": count, "dimension": dim }))
            }
            OutputFormat::Text => format!("closure dimension {dim} ({count} generators on {qubits} qubit(s))\n"),
        }),
        Err(e) => Output::invalid(&e),
    }
}

fn to_json_line(v: &Value) -> String {
    serde_json::to_string(v).expect("json value serializes") + "\n"
}

/// Row-major rows of `[re, im]` pairs.
pub fn matrix_json(m: &ComplexSquareMatrix<f64>) -> Value {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.dim()).map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect()).collect();
    json!(rows)
}

/// Inverse of [`matrix_json`].
pub fn matrix_from_json(v: &Value) -> Option<ComplexSquareMatrix<f64>> {
    let rows = v.as_array()?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()?
                .iter()
                .map(|pair| {
                    let p = pair.as_array()?;
                    match p.as_slice() {
                        [re, im] => Some(Complex64::new(re.as_f64()?, im.as_f64()?)),
                        _ => None,
                    }
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    ComplexSquareMatrix::from_rows(rows).ok()
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn complex_text(z: Complex64) -> String {
    let re = sig6(z.re);
    if z.im == 0.0 {
        return re;
    }
    let im = sig6(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    if z.re == 0.0 {
        return format!("{}{im}i", if z.im < 0.0 { "-" } else { "" });
    }
    format!("{re}{sign}{im}i")
}

fn matrix_text(m: &ComplexSquareMatrix<f64>) -> String {
    let cells: Vec<Vec<String>> = (0..m.dim()).map(|r| m.row(r).iter().map(|z| complex_text(*z)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str("  [ ");
        out.push_str(&line.join("  "));
        out.push_str(" ]\n");
    }
    out
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| sig6(*x)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("holoqc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-0.0), "0");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(std::f64::consts::PI), "3.14159");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(1.5e-9), "1.50000e-9");
        assert_eq!(sig6(-2e-16), "-2.00000e-16");
    }

    #[test]
    fn matrix_json_round_trips() {
        let m = ComplexSquareMatrix::from_fn(3, |r, c| Complex64::new(0.1 * r as f64 + 1.0 / 3.0, -(c as f64).sqrt()));
        let v = matrix_json(&m);
        let text = serde_json::to_string(&v).unwrap();
        let back = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["holonomy", "--plane", "nowhere", "--rect", "1,1"]).0, EXIT_USAGE);
        assert_eq!(call(&["holonomy", "--plane", "grassmann", "--rect", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["evolve", "--plane", "grassmann", "--rect", "1,1", "--time", "0", "--steps", "5"]).0, EXIT_USAGE);
        assert_eq!(call(&["closure", "--qubits", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn negative_values_parse() {
        let (code, out, _) = call(&["--format", "json", "holonomy", "--plane", "theta-phi-1", "--rect", "-0.5,-1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"converged\":true"));
    }
}
