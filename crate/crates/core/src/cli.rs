//! Command-line front end.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid arguments or parameters,
//! 3 solver failure (no convergence, no bracket, never entangled).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use crate::critical::{critical_temp, critical_temp_scan_with, SolverOptions};
use crate::entanglement::{concurrence_closed, concurrence_oracle};
use crate::error::{Error, Result};
use crate::model::{ground_state, spectrum_x, spectrum_z, CouplingParams, DmAxis};
use crate::sweep::{
    figure_preset, preset_t_axis, sweep_grid, write_csv, Axis, EvalMethod, FigureId, SweepSpec,
};
use crate::thermal::{gibbs, gibbs_oracle, Temperature, ThermalState};

#[derive(Parser, Debug)]
#[command(
    name = "xxz-dm",
    version,
    about = "Thermal entanglement of two-qubit XXZ chains with DM interaction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form eigenvalues, eigenstates and ground-state summary.
    Spectrum(ModelArgs),
    /// Thermal density matrix and partition function.
    Gibbs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        temp: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Wootters concurrence of the thermal state.
    Concurrence {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        temp: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Temperature above which the thermal state is separable.
    CriticalTemp {
        #[command(flatten)]
        model: ModelArgs,
        /// Relative bracket width at which the root search stops.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Evaluate a parameter grid and emit CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, allow_negative_numbers = true)]
    jz: f64,
    #[arg(long, allow_negative_numbers = true)]
    d: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<CouplingParams<f64>> {
        CouplingParams::new(self.j, self.jz, self.d, self.model.into())
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Figure preset fig1..fig6; other grid flags are then ignored.
    #[arg(long)]
    preset: Option<String>,
    /// Output file; CSV goes to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    /// Evaluate grid points on a single thread.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    jz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    d_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d_max: Option<f64>,
    #[arg(long)]
    d_steps: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Z,
    X,
}

impl From<ModelArg> for DmAxis {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Z => DmAxis::Z,
            ModelArg::X => DmAxis::X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Oracle,
}

impl From<MethodArg> for EvalMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => EvalMethod::Closed,
            MethodArg::Oracle => EvalMethod::Oracle,
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output and diagnostic streams. `argv[0]` is the program name.
pub fn run_cli_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let _ = writeln!(err, "xxz-dm: {}", line.trim_start_matches("error: "));
            return 2;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        // Reader went away (e.g. piped into `head`); nothing left to report.
        Err(Error::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "xxz-dm: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_solver_failure() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Spectrum(m) => print_spectrum(&m.params()?, out),
        Command::Gibbs {
            model,
            temp,
            method,
        } => {
            let p = model.params()?;
            let t = Temperature::new(temp)?;
            let state = match method {
                MethodArg::Closed => gibbs(&p, t)?,
                MethodArg::Oracle => gibbs_oracle(&p, t)?,
            };
            print_state(&state, out)
        }
        Command::Concurrence {
            model,
            temp,
            method,
        } => {
            let p = model.params()?;
            let t = Temperature::new(temp)?;
            let c = match method {
                MethodArg::Closed => concurrence_closed(&p, t)?,
                MethodArg::Oracle => concurrence_oracle(&gibbs_oracle(&p, t)?.rho)?,
            };
            writeln!(out, "{}", fix6(c.c))?;
            Ok(())
        }
        Command::CriticalTemp { model, tol, method } => {
            let p = model.params()?;
            let mut opts = SolverOptions::default();
            if let Some(tol) = tol {
                if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
                    return Err(Error::InvalidParams(format!(
                        "--tol must lie in (0, 1), got {tol}"
                    )));
                }
                opts.rel_tol = tol;
            }
            let r = match method {
                MethodArg::Closed => critical_temp(&p, &opts)?,
                MethodArg::Oracle => critical_temp_scan_with(&p, &opts)?,
            };
            writeln!(out, "{}", fix6(r.tc))?;
            Ok(())
        }
        Command::Sweep(args) => run_sweep(args, out),
    }
}

/// Six decimals, with values that round to zero printed unsigned.
fn fix6(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{x:.6}")
}

fn fmt_complex(z: Complex<f64>) -> String {
    let im = fix6(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fix6(z.re))
}

fn print_spectrum(p: &CouplingParams<f64>, out: &mut dyn Write) -> Result<()> {
    let (energies, states) = match p.axis {
        DmAxis::Z => {
            let s = spectrum_z(p)?;
            writeln!(out, "w {}", fix6(s.w))?;
            writeln!(out, "theta {}", fix6(s.theta))?;
            (s.energies, s.states)
        }
        DmAxis::X => {
            let s = spectrum_x(p)?;
            writeln!(out, "w_prime {}", fix6(s.w_prime))?;
            writeln!(out, "phi {}", fix6(s.phi))?;
            writeln!(out, "varphi {}", fix6(s.varphi))?;
            (s.energies, s.states)
        }
    };
    for (k, (e, psi)) in energies.iter().zip(states.iter()).enumerate() {
        let comps: Vec<String> = psi.iter().map(|&z| fmt_complex(z)).collect();
        writeln!(out, "E{} {} [{}]", k + 1, fix6(*e), comps.join(", "))?;
    }
    match ground_state(p) {
        Ok(g) => {
            writeln!(out, "ground_energy {}", fix6(g.energy))?;
            writeln!(out, "degeneracy {}", g.degeneracy)?;
            writeln!(out, "ground_concurrence {}", fix6(g.concurrence_at_zero))?;
        }
        // The ground-state summary relies on the closed form, which needs Jz <= J for the x model.
        Err(Error::JzExceedsJ { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

fn print_state(state: &ThermalState<f64>, out: &mut dyn Write) -> Result<()> {
    if state.temperature.is_zero() {
        writeln!(out, "degeneracy {}", state.shifted_partition)?;
    } else {
        writeln!(
            out,
            "Z {}",
            crate::sweep::format_sig(state.partition(), crate::sweep::CSV_DIGITS)
        )?;
    }
    for row in state.rho.rows() {
        let cells: Vec<String> = row.iter().map(|&z| fmt_complex(z)).collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(())
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    if let Some(name) = &args.preset {
        let mut spec = figure_preset(name.parse::<FigureId>()?);
        spec.method = args.method.into();
        spec.output_path = args.out.clone();
        return Ok(spec);
    }
    let missing =
        |flag: &str| Error::InvalidSpec(format!("custom sweep needs --{flag} (or use --preset)"));
    let model = args.model.ok_or_else(|| missing("model"))?;
    let j = args.j.ok_or_else(|| missing("j"))?;
    let jz = args.jz.ok_or_else(|| missing("jz"))?;

    let default_t = preset_t_axis();
    let Axis::Range { min, max, steps } = default_t else {
        unreachable!()
    };
    let t = Axis::range(
        args.t_min.unwrap_or(min),
        args.t_max.unwrap_or(max),
        args.t_steps.unwrap_or(steps),
    );

    let d_range = args.d_min.is_some() || args.d_max.is_some() || args.d_steps.is_some();
    let d = match (d_range, args.d) {
        (true, Some(_)) => {
            return Err(Error::InvalidSpec(
                "--d conflicts with --d-min/--d-max/--d-steps".into(),
            ));
        }
        (true, None) => Axis::range(
            args.d_min.ok_or_else(|| missing("d-min"))?,
            args.d_max.ok_or_else(|| missing("d-max"))?,
            args.d_steps.ok_or_else(|| missing("d-steps"))?,
        ),
        (false, Some(d)) => Axis::Fixed(d),
        (false, None) => return Err(missing("d")),
    };
    Ok(SweepSpec {
        models: vec![model.into()],
        j,
        jz: Axis::Fixed(jz),
        d,
        t,
        method: args.method.into(),
        output_path: args.out.clone(),
    })
}

fn run_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let spec = sweep_spec(&args)?;
    let rows = if args.serial {
        crate::sweep::sweep_grid_with(&spec, false)?
    } else {
        sweep_grid(&spec)?
    };
    match &spec.output_path {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            write_csv(&rows, BufWriter::new(file))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(())
}
