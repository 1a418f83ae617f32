//! Command-line front end for `qcorr-core`.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code: 0 on success, 1 on I/O failure, 2 on invalid input.

mod args;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::Parser;
use qcorr_core::dynamics::{detect_events, format_sig, to_csv, to_json, EventPoint, Interval};
use qcorr_core::tomography::{expected_counts, reconstruct};
use qcorr_core::{
    bootstrap_report, conditional_entropy_after_b, evolve, full_report, simulate_counts, sweep,
    ComplexMatrix, CountSet, DephasingModel, Error, EventMarkers, MeasurementDirection,
    OutcomeMode, StateFamilySpec,
};
use serde::Serialize;

pub use args::Cli;
use args::{
    CondEntropyArgs, EventsArgs, Family, Format, Mode, ModelArgs, ReportArgs, StateArgs, SweepArgs,
    TomoCommand, TomoFitArgs, TomoSimArgs,
};

pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    /// Core errors: I/O maps to 1, everything else is bad input.
    fn core(context: &str, err: Error) -> Self {
        let code = match err {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: format!("{context}: {err}"),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    use args::Command::*;
    match cli.command {
        Sweep(a) => cmd_sweep(a),
        Report(a) => cmd_report(a),
        CondEntropy(a) => cmd_cond_entropy(a),
        Events(a) => cmd_events(a),
        Tomo(TomoCommand::Sim(a)) => cmd_tomo_sim(a),
        Tomo(TomoCommand::Fit(a)) => cmd_tomo_fit(a),
    }
}

fn state_spec(s: &StateArgs) -> Result<StateFamilySpec, Failure> {
    if let Some(path) = &s.matrix {
        if s.b.is_some() || s.r.is_some() {
            return Err(Failure::invalid(
                "--b and --r cannot be combined with --matrix",
            ));
        }
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        let m = ComplexMatrix::from_json_str(&text)
            .map_err(|e| Failure::core(&format!("--matrix {}", path.display()), e))?;
        let spec = StateFamilySpec::Explicit(m);
        spec.validate()
            .map_err(|e| Failure::core(&format!("--matrix {}", path.display()), e))?;
        return Ok(spec);
    }
    let b =
        s.b.ok_or_else(|| Failure::invalid("--b is required with --family"))?;
    match s.family {
        Some(Family::Interference) => {
            if s.r.is_some() {
                return Err(Failure::invalid("--r only applies to --family four-mix"));
            }
            Ok(StateFamilySpec::Interference { b })
        }
        Some(Family::FourMix) => {
            let r =
                s.r.ok_or_else(|| Failure::invalid("--r is required with --family four-mix"))?;
            Ok(StateFamilySpec::FourMix { b, r })
        }
        None => Err(Failure::invalid("one of --family or --matrix is required")),
    }
}

fn model(m: &ModelArgs) -> Result<DephasingModel, Failure> {
    DephasingModel::gaussian(m.l_half).map_err(|e| Failure::core("--model-lhalf", e))
}

fn write_text(out: Option<&PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn output_format(explicit: Option<Format>, out: Option<&PathBuf>) -> Format {
    explicit.unwrap_or_else(|| match out {
        Some(p)
            if p.extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json")) =>
        {
            Format::Json
        }
        _ => Format::Csv,
    })
}

fn describe_point(name: &str, p: &Option<EventPoint>, out: &mut String) {
    match p {
        Some(p) => {
            let _ = writeln!(
                out,
                "{name}: L = {} lambda0 (|kappa| = {}){}",
                format_sig(p.l),
                format_sig(p.kappa_abs),
                if p.extrapolated {
                    " outside swept range"
                } else {
                    ""
                }
            );
        }
        None => {
            let _ = writeln!(out, "{name}: none");
        }
    }
}

fn describe_interval(name: &str, i: &Option<Interval>, out: &mut String) {
    match i {
        Some(Interval { start, end }) => {
            let end = end.map(format_sig).unwrap_or_else(|| "inf".into());
            let _ = writeln!(out, "{name}: [{}, {end}]", format_sig(*start));
        }
        None => {
            let _ = writeln!(out, "{name}: none");
        }
    }
}

fn marker_summary(m: &EventMarkers) -> String {
    let mut out = String::new();
    describe_point("sudden change", &m.sudden_change, &mut out);
    describe_point("entanglement sudden death", &m.esd, &mut out);
    if m.qc_cross_intervals.is_empty() {
        out.push_str("Q > C: none\n");
    }
    for (a, b) in &m.qc_cross_intervals {
        let _ = writeln!(out, "Q > C: [{}, {}]", format_sig(*a), format_sig(*b));
    }
    describe_interval("frozen Q", &m.plateaus.frozen_q, &mut out);
    describe_interval("frozen C", &m.plateaus.frozen_c, &mut out);
    out
}

fn sweep_with_events(
    state: &StateArgs,
    model_args: &ModelArgs,
    l_max: f64,
    steps: u32,
) -> Result<(qcorr_core::SweepTable, EventMarkers), Failure> {
    let spec = state_spec(state)?;
    let model = model(model_args)?;
    let table =
        sweep(&spec, &model, l_max, steps as usize).map_err(|e| Failure::core("sweep", e))?;
    let markers = detect_events(&table).map_err(|e| Failure::core("events", e))?;
    Ok((table, markers))
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    let (table, markers) = sweep_with_events(&a.state, &a.model, a.range.l_max, a.range.steps)?;
    let text = match output_format(a.output.format, a.output.out.as_ref()) {
        Format::Csv => to_csv(&table),
        Format::Json => to_json(&table, &markers).map_err(|e| Failure::core("sweep", e))?,
    };
    write_text(a.output.out.as_ref(), &text)?;
    let summary = marker_summary(&markers);
    if a.output.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn cmd_events(a: EventsArgs) -> Outcome {
    let (_, markers) = sweep_with_events(&a.state, &a.model, a.range.l_max, a.range.steps)?;
    write_text(a.out.as_ref(), &pretty_json(&markers))
}

fn cmd_report(a: ReportArgs) -> Outcome {
    let spec = state_spec(&a.state)?;
    let model = model(&a.model)?;
    let rho = evolve(&spec, &model, a.l).map_err(|e| Failure::core("--l", e))?;
    let report = full_report(&rho).map_err(|e| Failure::core("report", e))?;
    write_text(a.out.as_ref(), &pretty_json(&report))
}

fn cmd_cond_entropy(a: CondEntropyArgs) -> Outcome {
    let spec = state_spec(&a.state)?;
    let model = model(&a.model)?;
    let mode = match a.mode {
        Mode::Single => OutcomeMode::Single,
        Mode::Averaged => OutcomeMode::Averaged,
    };
    let n = a.theta_steps as usize;
    let phi = a.phi.to_radians();
    let mut out = String::from("L_lambda0,theta_deg,S_cond\n");
    for &l in &a.l {
        let rho = evolve(&spec, &model, l).map_err(|e| Failure::core("--l", e))?;
        for i in 0..n {
            let frac = i as f64 / (n - 1) as f64;
            let dir =
                MeasurementDirection::new(PI * frac, phi).map_err(|e| Failure::core("--phi", e))?;
            let s = conditional_entropy_after_b(&rho, &dir, mode)
                .map_err(|e| Failure::core("cond-entropy", e))?;
            let _ = writeln!(
                out,
                "{},{},{}",
                format_sig(l),
                format_sig(180.0 * frac),
                format_sig(s)
            );
        }
    }
    write_text(a.out.as_ref(), &out)
}

fn cmd_tomo_sim(a: TomoSimArgs) -> Outcome {
    let spec = state_spec(&a.state)?;
    let model = model(&a.model)?;
    let rho = evolve(&spec, &model, a.l).map_err(|e| Failure::core("--l", e))?;
    let set = if a.exact {
        expected_counts(&rho, a.counts)
    } else {
        simulate_counts(&rho, a.counts, a.seed)
    }
    .map_err(|e| Failure::core("--counts", e))?;
    write_text(a.out.as_ref(), &pretty_json(&set))
}

#[derive(Serialize)]
struct FitOutput {
    matrix: ComplexMatrix,
    bootstrap: qcorr_core::BootstrapReport,
}

fn cmd_tomo_fit(a: TomoFitArgs) -> Outcome {
    let text = fs::read_to_string(&a.counts).map_err(|e| Failure::io(&a.counts, e))?;
    let context = format!("--counts {}", a.counts.display());
    let set: CountSet =
        serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{context}: {e}")))?;
    set.ordered_counts()
        .map_err(|e| Failure::core(&context, e))?;
    let matrix = reconstruct(&set).map_err(|e| Failure::core(&context, e))?;
    let bootstrap =
        bootstrap_report(&set, a.bootstrap, a.seed).map_err(|e| Failure::core("--bootstrap", e))?;
    write_text(
        a.out.as_ref(),
        &pretty_json(&FitOutput { matrix, bootstrap }),
    )
}
