use std::path::Path;

use resfluor::correlation::{j_perturbative, j_resonant, pole_decomposition, spectrum_curve};
use resfluor::dynamics::delay_curve;
use resfluor::grid::{logspace, UniformGrid};
use resfluor::laplace::{counting_stats, delay_moments, DelayMoments};
use resfluor::monte_carlo::{
    delay_summary, empirical_counting, generate_poisson_reference, generate_stream, write_binary,
    write_csv, GENERATOR_NAME,
};
use resfluor::{correlation, AtomDriveParams, Execution};
use serde::Serialize;

use crate::args::{
    CorrelationArgs, DelayCurveArgs, DriveArgs, SimulateArgs, SpectrumArgs, StatsArgs,
    StreamFormat, TimeGridArgs,
};
use crate::error::CliError;
use crate::output::{destinations, emit, resolve, write_json, write_table, Metadata, Table};

/// Default counting window in mean delays.
const DEFAULT_WINDOW_DELAYS: f64 = 100.0;

fn parameter_sets(drive: &DriveArgs) -> Result<Vec<AtomDriveParams>, CliError> {
    let pairs: Vec<(f64, f64)> = match drive.preset {
        Some(preset) => preset
            .sets()
            .iter()
            .map(|&(o, d)| (o * drive.gamma, d * drive.gamma))
            .collect(),
        None => drive.omega.iter().map(|&o| (o, drive.delta)).collect(),
    };
    if pairs.is_empty() {
        return Err(CliError::usage("--omega", "needs at least one value"));
    }
    pairs
        .into_iter()
        .map(|(o, d)| AtomDriveParams::new(drive.gamma, o, d).map_err(CliError::from))
        .collect()
}

fn require_drive(sets: &[AtomDriveParams]) -> Result<(), CliError> {
    if sets.iter().any(|p| p.omega == 0.0) {
        return Err(CliError::usage("--omega", "must be > 0 for this command"));
    }
    Ok(())
}

fn time_grid(grid: &TimeGridArgs) -> Result<Vec<f64>, CliError> {
    if !(grid.tmin.is_finite() && grid.tmin >= 0.0) {
        return Err(CliError::usage(
            "--tmin",
            format!("must be >= 0, got {}", grid.tmin),
        ));
    }
    if !(grid.tmax.is_finite() && grid.tmax > grid.tmin) {
        return Err(CliError::usage(
            "--tmax",
            format!("must exceed --tmin, got {}", grid.tmax),
        ));
    }
    if grid.points < 2 {
        return Err(CliError::usage(
            "--points",
            format!("must be >= 2, got {}", grid.points),
        ));
    }
    Ok(UniformGrid::linspace(grid.tmin, grid.tmax, grid.points)?.points())
}

fn window_for(window: Option<f64>, moments: &DelayMoments) -> Result<f64, CliError> {
    match window {
        None => Ok(DEFAULT_WINDOW_DELAYS * moments.mean_delay),
        Some(w) if w.is_finite() && w > 0.0 => Ok(w),
        Some(w) => Err(CliError::usage("--window", format!("must be > 0, got {w}"))),
    }
}

fn emit_tables<F>(
    command: &'static str,
    sets: &[AtomDriveParams],
    out: &crate::args::OutputArgs,
    out_dir: Option<&Path>,
    mut build: F,
) -> Result<(), CliError>
where
    F: FnMut(&AtomDriveParams) -> Result<Table, CliError>,
{
    let path = out.output.as_deref().map(|p| resolve(out_dir, p));
    let tables = sets.iter().map(&mut build).collect::<Result<Vec<_>, _>>()?;
    for ((params, table), dest) in sets
        .iter()
        .zip(&tables)
        .zip(destinations(path.as_deref(), sets))
    {
        let meta = Metadata::new(command, Some(params));
        emit(dest.as_deref(), |w| {
            write_table(&meta, table, out.format, w)
        })?;
    }
    Ok(())
}

pub fn delay_curve_cmd(args: &DelayCurveArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let sets = parameter_sets(&args.drive)?;
    let taus = time_grid(&args.grid)?;
    emit_tables("delay-curve", &sets, &args.out, out_dir, |params| {
        let rows = delay_curve(params, &taus, Execution::default())
            .into_iter()
            .map(|e| {
                vec![
                    e.tau,
                    e.density_k,
                    e.survival_p,
                    e.intensity_lambda,
                    e.cumulative_lambda,
                ]
            })
            .collect();
        Ok(Table {
            columns: vec!["tau", "K", "P", "lambda", "Lambda"],
            rows,
        })
    })
}

#[derive(Serialize)]
struct StatsReport {
    metadata: Metadata,
    mean_delay: f64,
    delay_variance: f64,
    mandel_q: f64,
    one_plus_q: f64,
    mean_intensity: f64,
    window: f64,
    mean_count: f64,
    count_variance: f64,
    asymptotic_regime: bool,
}

pub fn stats_cmd(args: &StatsArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let sets = parameter_sets(&args.drive)?;
    require_drive(&sets)?;
    let path = args.output.as_deref().map(|p| resolve(out_dir, p));
    for (params, dest) in sets.iter().zip(destinations(path.as_deref(), &sets)) {
        let m = delay_moments(params)?;
        let window = window_for(args.window, &m)?;
        let counting = counting_stats(params, window)?;
        let report = StatsReport {
            metadata: Metadata::new("stats", Some(params)),
            mean_delay: m.mean_delay,
            delay_variance: m.delay_variance,
            mandel_q: m.mandel_q,
            one_plus_q: 1.0 + m.mandel_q,
            mean_intensity: correlation::mean_intensity(params)?,
            window,
            mean_count: counting.mean_count,
            count_variance: counting.count_variance,
            asymptotic_regime: counting.asymptotic_regime,
        };
        emit(dest.as_deref(), |w| write_json(&report, w))?;
    }
    Ok(())
}

pub fn spectrum_cmd(args: &SpectrumArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let sets = parameter_sets(&args.drive)?;
    require_drive(&sets)?;
    if args.points < 2 {
        return Err(CliError::usage(
            "--points",
            format!("must be >= 2, got {}", args.points),
        ));
    }
    let lower_ok = if args.linear {
        args.wmin >= 0.0
    } else {
        args.wmin > 0.0
    };
    if !(args.wmin.is_finite() && lower_ok) {
        return Err(CliError::usage(
            "--wmin",
            format!("out of range: {}", args.wmin),
        ));
    }
    if !(args.wmax.is_finite() && args.wmax > args.wmin) {
        return Err(CliError::usage(
            "--wmax",
            format!("must exceed --wmin, got {}", args.wmax),
        ));
    }
    let mut omegas = Vec::with_capacity(args.points + 1);
    if !args.no_zero {
        omegas.push(0.0);
    }
    if args.linear {
        omegas.extend(UniformGrid::linspace(args.wmin, args.wmax, args.points)?.points());
    } else {
        omegas.extend(logspace(args.wmin, args.wmax, args.points)?);
    }
    emit_tables("spectrum", &sets, &args.out, out_dir, |params| {
        let curve = spectrum_curve(params, &omegas, Execution::default())?;
        let rows = (0..omegas.len())
            .map(|i| vec![curve.omegas[i], curve.q_values[i], curve.s_values[i]])
            .collect();
        Ok(Table {
            columns: vec!["omega", "Q", "S_I"],
            rows,
        })
    })
}

pub fn correlation_cmd(args: &CorrelationArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let sets = parameter_sets(&args.drive)?;
    require_drive(&sets)?;
    if args.with_resonant && sets.iter().any(|p| p.delta != 0.0) {
        return Err(CliError::usage(
            "--with-resonant",
            "the resonant form needs --delta 0",
        ));
    }
    let lags = time_grid(&args.grid)?;
    emit_tables("correlation", &sets, &args.out, out_dir, |params| {
        let dec = pole_decomposition(params)?;
        let j = dec.j_curve(&lags, Execution::default());
        let mut columns = vec!["t", "j"];
        if args.with_resonant {
            columns.push("j0");
        }
        if args.with_perturbative {
            columns.push("j_pert");
        }
        let mut rows = Vec::with_capacity(lags.len());
        for (&t, &v) in lags.iter().zip(&j.values) {
            let mut row = vec![t, v];
            if args.with_resonant {
                row.push(j_resonant(params, t)?);
            }
            if args.with_perturbative {
                row.push(j_perturbative(params, t));
            }
            rows.push(row);
        }
        Ok(Table { columns, rows })
    })
}

#[derive(Serialize)]
struct Analytic {
    mean_delay: f64,
    delay_variance: f64,
    mandel_q: f64,
}

#[derive(Serialize)]
struct Empirical {
    mean_delay: f64,
    mean_delay_std_error: f64,
    delay_variance: f64,
    delay_variance_std_error: f64,
    window: f64,
    windows: Option<usize>,
    q_hat: Option<f64>,
    q_std_error: Option<f64>,
}

#[derive(Serialize)]
struct Deviations {
    /// `(empirical - analytic) / standard error`.
    mean_delay: f64,
    delay_variance: f64,
    mandel_q: Option<f64>,
}

#[derive(Serialize)]
struct SimulationSummary {
    metadata: Metadata,
    kind: &'static str,
    photons: usize,
    span: f64,
    analytic: Analytic,
    empirical: Option<Empirical>,
    deviations: Option<Deviations>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

pub fn simulate_cmd(args: &SimulateArgs, out_dir: Option<&Path>) -> Result<(), CliError> {
    let sets = parameter_sets(&args.drive)?;
    require_drive(&sets)?;
    let [params] = sets[..] else {
        return Err(CliError::usage(
            "--omega",
            "simulate takes a single parameter set",
        ));
    };
    if args.photons == 0 {
        return Err(CliError::usage("--photons", "must be >= 1"));
    }
    let moments = delay_moments(&params)?;
    let window = window_for(args.window, &moments)?;
    let (stream, analytic, kind) = if args.poisson_reference {
        let tau = moments.mean_delay;
        let analytic = Analytic {
            mean_delay: tau,
            delay_variance: tau * tau,
            mandel_q: 0.0,
        };
        let s = generate_poisson_reference(&params, args.photons, args.seed, Execution::default())?;
        (s, analytic, "poisson-reference")
    } else {
        let analytic = Analytic {
            mean_delay: moments.mean_delay,
            delay_variance: moments.delay_variance,
            mandel_q: moments.mandel_q,
        };
        (
            generate_stream(&params, args.photons, args.seed)?,
            analytic,
            "cascade",
        )
    };

    let stream_path = resolve(out_dir, &args.stream_out);
    emit(Some(&stream_path), |w| {
        match args.stream_format {
            StreamFormat::Bin => write_binary(&stream, w),
            StreamFormat::Csv => write_csv(&stream, w),
        }
        .map_err(|e| std::io::Error::other(e.to_string()))
    })?;

    let mut notes = Vec::new();
    let (empirical, deviations) = match delay_summary(&stream) {
        Ok(d) => {
            let counting = empirical_counting(&stream, window);
            if let Err(e) = &counting {
                notes.push(format!("counting statistics skipped: {e}"));
            }
            let counting = counting.ok();
            let empirical = Empirical {
                mean_delay: d.mean,
                mean_delay_std_error: d.mean_std_error,
                delay_variance: d.variance,
                delay_variance_std_error: d.variance_std_error,
                window,
                windows: counting.as_ref().map(|c| c.windows),
                q_hat: counting.as_ref().map(|c| c.q_hat),
                q_std_error: counting.as_ref().map(|c| c.q_std_error),
            };
            let deviations = Deviations {
                mean_delay: (d.mean - analytic.mean_delay) / d.mean_std_error,
                delay_variance: (d.variance - analytic.delay_variance) / d.variance_std_error,
                mandel_q: counting
                    .as_ref()
                    .map(|c| (c.q_hat - analytic.mandel_q) / c.q_std_error),
            };
            (Some(empirical), Some(deviations))
        }
        Err(e) => {
            notes.push(format!("delay statistics skipped: {e}"));
            (None, None)
        }
    };

    let mut metadata = Metadata::new("simulate", Some(&params));
    metadata.seed = Some(args.seed);
    metadata.generator = Some(GENERATOR_NAME);
    let summary = SimulationSummary {
        metadata,
        kind,
        photons: stream.len(),
        span: stream.span(),
        analytic,
        empirical,
        deviations,
        notes,
    };
    let path = args.output.as_deref().map(|p| resolve(out_dir, p));
    emit(path.as_deref(), |w| write_json(&summary, w))
}
