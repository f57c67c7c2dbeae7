//! Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report is always printed.

use std::f64::consts::SQRT_2;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use resfluor::correlation::{
    j_convolution_oracle, j_of_t, j_perturbative, j_resonant, laplace_j, laplace_j_from_k,
    mean_intensity, noise_spectrum,
};
use resfluor::dynamics::{amplitudes_closed_form, OdeTrajectory};
use resfluor::grid::UniformGrid;
use resfluor::laplace::{delay_moments, laplace_k};
use resfluor::monte_carlo::{delay_summary, empirical_counting, generate_stream, ks_test};
use resfluor::{AtomDriveParams, Execution};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(g: f64, o: f64, d: f64) -> AtomDriveParams {
    AtomDriveParams::new(g, o, d).unwrap()
}

fn within(label: &str, err: f64, tol: f64) -> Result<String, String> {
    let msg = format!("{label} error {err:.3e} (tol {tol:.0e})");
    if err <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn under(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds {limit:?}"))
    }
}

fn figure_sets() -> Vec<AtomDriveParams> {
    vec![
        p(1.0, SQRT_2, 0.0),
        p(1.0, SQRT_2 / 2.0, 0.0),
        p(1.0, 2.0 * SQRT_2, 0.0),
        p(1.0, 2.2, 0.0),
        p(1.0, 4.4, 0.0),
        p(1.0, 2.8, -2.2),
        p(1.0, 4.4, -3.4),
    ]
}

fn optimal_point() -> Outcome {
    let start = Instant::now();
    let q = delay_moments(&p(1.0, SQRT_2, 0.0))
        .map_err(|e| e.to_string())?
        .mandel_q;
    let elapsed = start.elapsed();
    let msg = within("Q + 3/4", (q + 0.75).abs(), 1e-12)?;
    under(elapsed, Duration::from_millis(1))?;
    Ok(format!("{msg}, {elapsed:?}"))
}

fn geometric_pair() -> Outcome {
    let mut worst = 0.0f64;
    for o in [SQRT_2 / 2.0, 2.0 * SQRT_2] {
        let q = delay_moments(&p(1.0, o, 0.0))
            .map_err(|e| e.to_string())?
            .mandel_q;
        worst = worst.max((1.0 + q - 13.0 / 25.0).abs());
    }
    within("1+Q - 13/25", worst, 1e-12)
}

fn sign_boundary() -> Outcome {
    let mut worst = 0.0f64;
    for o in [0.5, SQRT_2, 5.0] {
        let q = delay_moments(&p(1.0, o, 3f64.sqrt()))
            .map_err(|e| e.to_string())?
            .mandel_q;
        worst = worst.max(q.abs());
    }
    within("Q at δ = √3γ", worst, 1e-12)
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let s_points = [(0.1, 0.0), (0.5, 2.0), (1.0, -1.0), (2.0, 0.3), (5.0, -4.0)]
        .map(|(a, b)| Complex64::new(a, b));
    let (mut norm, mut product, mut spectral, mut renewal) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for o in [0.3, 1.0, SQRT_2, 2.8, 5.0] {
        for d in [0.0, 1.0, -1.0, -2.2, 3.0] {
            let q = p(1.0, o, d);
            let mut run = || -> resfluor::Result<()> {
                let m = delay_moments(&q)?;
                norm = norm.max((laplace_k(&q, Complex64::new(0.0, 0.0))? - 1.0).norm());
                product = product.max((mean_intensity(&q)? * m.mean_delay - 1.0).abs());
                spectral = spectral.max((noise_spectrum(&q, 0.0)?.0 - m.mandel_q).abs());
                for s in s_points {
                    let direct = laplace_j(&q, s)?;
                    let via_k = laplace_j_from_k(&q, s)?;
                    renewal = renewal.max((direct - via_k).norm() / direct.norm().max(1.0));
                }
                Ok(())
            };
            run().map_err(|e| e.to_string())?;
        }
    }
    let elapsed = start.elapsed();
    let worst = norm.max(product).max(spectral).max(renewal);
    let msg = within("K̃(0), Īτ̄, Q(0), J̃ identities", worst, 1e-12)?;
    under(elapsed, Duration::from_secs(1))?;
    Ok(format!("{msg}, {elapsed:?}"))
}

fn ode_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in figure_sets() {
        let mut ode = OdeTrajectory::new(q);
        for i in 0..=2000 {
            let t = 0.01 * i as f64;
            ode.advance_to(t, 1e-3);
            let (cf, s) = (amplitudes_closed_form(&q, t), ode.state());
            worst = worst
                .max((cf.a_ground - s.a_ground).norm())
                .max((cf.b_excited - s.b_excited).norm());
        }
    }
    let elapsed = start.elapsed();
    let msg = within("amplitudes vs RK4 on [0, 20/γ]", worst, 1e-8)?;
    under(elapsed, Duration::from_secs(10))?;
    Ok(format!("{msg}, {elapsed:?}"))
}

fn convolution_equivalence() -> Outcome {
    let start = Instant::now();
    let grid = UniformGrid::from_step(1e-3, 4001).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for q in figure_sets() {
        let run = || -> resfluor::Result<f64> {
            let conv = j_convolution_oracle(&q, &grid, 12, Execution::default())?;
            let ibar = mean_intensity(&q)?;
            let mut w = 0.0f64;
            for (&t, &v) in conv.lags.iter().zip(&conv.values) {
                w = w.max((ibar * j_of_t(&q, t)? - v).abs());
            }
            Ok(w)
        };
        worst = worst.max(run().map_err(|e| e.to_string())?);
    }
    let elapsed = start.elapsed();
    let msg = within("pole sum vs convolution on [0, 4/γ]", worst, 1e-4)?;
    under(elapsed, Duration::from_secs(30))?;
    Ok(format!("{msg}, {elapsed:?}"))
}

fn closed_forms() -> Outcome {
    let run = || -> resfluor::Result<(f64, f64)> {
        let mut resonant = 0.0f64;
        for o in [2.2, 4.4] {
            let q = p(1.0, o, 0.0);
            for i in 0..=500 {
                let t = 0.01 * i as f64;
                resonant = resonant.max((j_of_t(&q, t)? - j_resonant(&q, t)?).abs());
            }
        }
        let mut weak = 0.0f64;
        for d in [0.0, 2.0] {
            let q = p(1.0, 0.01, d);
            for i in 0..=1000 {
                let t = 0.01 * i as f64;
                weak = weak.max((j_of_t(&q, t)? - j_perturbative(&q, t)).abs());
            }
        }
        Ok((resonant, weak))
    };
    let (resonant, weak) = run().map_err(|e| e.to_string())?;
    let a = within("j vs j0", resonant, 1e-10)?;
    let b = within("j vs j_pert", weak, 1e-4)?;
    Ok(format!("{a}; {b}"))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let run = || -> resfluor::Result<_> {
        let stream = generate_stream(&p(1.0, SQRT_2, 0.0), 100_000, 1)?;
        Ok((
            delay_summary(&stream)?,
            empirical_counting(&stream, 200.0)?,
            ks_test(&stream, 1e-3)?,
        ))
    };
    let (summary, counting, ks) = run().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mean_sigma = (summary.mean - 2.0) / summary.mean_std_error;
    let q_sigma = (counting.q_hat + 0.75) / counting.q_std_error;
    let msg = format!(
        "mean {:.5} ({mean_sigma:+.2}σ), Q̂ {:.4} ± {:.4} ({q_sigma:+.2} SE), KS {:.4} < {:.4}, {elapsed:?}",
        summary.mean, counting.q_hat, counting.q_std_error, ks.statistic, ks.critical_value
    );
    if mean_sigma.abs() < 3.0
        && q_sigma.abs() < 3.0
        && ks.passed
        && elapsed < Duration::from_secs(60)
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn spectrum_limits() -> Outcome {
    let q = p(1.0, SQRT_2, 0.0);
    let low = noise_spectrum(&q, 0.0).map_err(|e| e.to_string())?.0;
    let high = noise_spectrum(&q, 100.0).map_err(|e| e.to_string())?.0;
    let a = within("1+Q(0) - 1/4", (1.0 + low - 0.25).abs(), 1e-12)?;
    let b = within("1+Q(100γ) - 1", high.abs(), 1e-3)?;
    Ok(format!("{a}; {b}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |tag: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let stream = dir.path().join(format!("{tag}.bin"));
        let summary = dir.path().join(format!("{tag}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_resfluor"))
            .args([
                "simulate",
                "--seed",
                "2024",
                "--photons",
                "100000",
                "--stream-out",
            ])
            .arg(&stream)
            .arg("--output")
            .arg(&summary)
            .env_remove("RESFLUOR_OUT_DIR")
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("simulate exited with {status}"));
        }
        let read = |p: &std::path::Path| std::fs::read(p).map_err(|e| e.to_string());
        Ok((read(&stream)?, read(&summary)?))
    };
    let first = run("first")?;
    let second = run("second")?;
    if first == second {
        Ok(format!(
            "stream ({} bytes) and summary ({} bytes) identical",
            first.0.len(),
            first.1.len()
        ))
    } else {
        Err("outputs differ between runs".into())
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("optimal sub-Poissonian point", optimal_point),
        ("geometric-progression degeneracy", geometric_pair),
        ("Q sign boundary", sign_boundary),
        ("identity suite", identity_suite),
        ("closed form vs ODE", ode_equivalence),
        ("poles vs convolution sum", convolution_equivalence),
        ("resonant and weak-drive closed forms", closed_forms),
        ("Monte-Carlo statistics", monte_carlo),
        ("spectrum limits", spectrum_limits),
        ("simulate determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
