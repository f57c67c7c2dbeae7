use resfluor::correlation::{j_resonant, mean_intensity};
use resfluor::dynamics::survival;
use resfluor::laplace::delay_moments;
use resfluor::monte_carlo::{
    chi_square_test, delay_summary, empirical_correlation, empirical_correlation_with,
    empirical_counting, empirical_counting_with, empirical_delay_histogram,
    generate_poisson_reference, generate_stream, generate_stream_with, ks_test, sample_delay,
    LagHistogram, PhotonStream,
};
use resfluor::quadrature::{integrate_real, Tolerance};
use resfluor::{AtomDriveParams, Execution};
use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

const N: usize = 100_000;

fn p(g: f64, o: f64, d: f64) -> AtomDriveParams {
    AtomDriveParams::new(g, o, d).unwrap()
}

fn optimal_stream() -> &'static PhotonStream {
    static S: OnceLock<PhotonStream> = OnceLock::new();
    S.get_or_init(|| generate_stream(&AtomDriveParams::optimal(1.0), N, 20_240_917).unwrap())
}

#[test]
fn inverse_cdf_round_trip() {
    for params in [p(1.0, SQRT_2, 0.0), p(1.0, 0.4, 1.0), p(1.0, 4.4, -3.4)] {
        for i in 0..=200 {
            let u = 1e-6 + (1.0 - 2e-6) * i as f64 / 200.0;
            let tau = sample_delay(&params, u).unwrap();
            assert!((survival(&params, tau) - u).abs() < 1e-10, "{params} u={u}");
        }
    }
}

#[test]
fn delay_mean_and_variance_within_three_sigma() {
    let s = delay_summary(optimal_stream()).unwrap();
    let m = delay_moments(&AtomDriveParams::optimal(1.0)).unwrap();
    assert_eq!(s.count, N - 1);
    assert!(
        (s.mean - m.mean_delay).abs() < 3.0 * s.mean_std_error,
        "{s:?}"
    );
    assert!(
        (s.variance - m.delay_variance).abs() < 3.0 * s.variance_std_error,
        "{s:?}"
    );
}

#[test]
fn delay_histogram_fits_density() {
    let h = empirical_delay_histogram(optimal_stream(), 0.1, 15.0).unwrap();
    let chi = chi_square_test(&h).unwrap();
    assert!(chi.p_value > 1e-3, "{chi:?}");
}

#[test]
fn antibunched_compared_with_poisson_reference() {
    let params = AtomDriveParams::optimal(1.0);
    let reference = generate_poisson_reference(&params, N, 7, Execution::default()).unwrap();
    let short = |s: &PhotonStream| s.delays().filter(|&d| d < 0.2).count();
    let (cascade, poisson) = (short(optimal_stream()), short(&reference));
    // K(τ) ~ τ² near zero, the exponential has density 1/τ̄ there
    assert!(cascade * 20 < poisson, "{cascade} vs {poisson}");
    let mean = delay_summary(&reference).unwrap();
    assert!((mean.mean - 2.0).abs() < 3.0 * mean.mean_std_error);
}

#[test]
fn ks_passes_across_delay_figure_grid() {
    for (i, o) in [SQRT_2, SQRT_2 / 2.0, 2.0 * SQRT_2].into_iter().enumerate() {
        let stream = generate_stream(&p(1.0, o, 0.0), 10_001, 100 + i as u64).unwrap();
        let ks = ks_test(&stream, 1e-3).unwrap();
        assert_eq!(ks.samples, 10_000);
        assert!(ks.passed, "Ω={o}: {ks:?}");
    }
}

#[test]
fn counting_q_matches_analytic() {
    let c = empirical_counting(optimal_stream(), 200.0).unwrap();
    assert!((c.q_hat + 0.75).abs() < 3.0 * c.q_std_error, "{c:?}");

    let zero_q = generate_stream(&p(1.0, SQRT_2, 3f64.sqrt()), N, 11).unwrap();
    let c0 = empirical_counting(&zero_q, 200.0).unwrap();
    assert!(c0.q_hat.abs() < 3.0 * c0.q_std_error, "{c0:?}");
}

#[test]
fn correlation_reproduces_resonant_form() {
    let params = p(1.0, 2.2, 0.0);
    let stream = generate_stream(&params, N, 5).unwrap();
    let width = 0.05;
    let curve = empirical_correlation(&stream, width, 10.0).unwrap();
    let errors = curve.std_errors.clone().unwrap();
    let tol = Tolerance::default();
    // compare with the bin average, the quantity a histogram estimates
    let bin_avg = |k: usize| {
        let a = k as f64 * width;
        integrate_real(|t| j_resonant(&params, t).unwrap(), a, a + width, 1, tol).unwrap() / width
    };
    let first = bin_avg(0);
    assert!(
        first < 0.1,
        "antibunching dip expected, bin average {first}"
    );
    // Poisson error from the expected count, at least one count
    let norm = curve.values[1] / (curve.values[1] / errors[1]).powi(2);
    let sigma = (first / norm).max(1.0).sqrt() * norm;
    assert!(
        (curve.values[0] - first).abs() < 3.0 * sigma,
        "{} vs {first}",
        curve.values[0]
    );

    for k in [4, 10, 20, 40] {
        let (v, e) = (curve.values[k], errors[k]);
        assert!(
            (v - bin_avg(k)).abs() < 3.0 * e,
            "bin {k}: {v} vs {}",
            bin_avg(k)
        );
    }
    // lags past 5/γ are decorrelated
    let tail: Vec<usize> = (100..200).collect();
    let mean = tail.iter().map(|&k| curve.values[k]).sum::<f64>() / tail.len() as f64;
    let err = tail.iter().map(|&k| errors[k].powi(2)).sum::<f64>().sqrt() / tail.len() as f64;
    assert!((mean - 1.0).abs() < 3.0 * err, "{mean} ± {err}");
}

#[test]
fn estimators_independent_of_execution() {
    let params = p(1.0, 2.8, -2.2);
    let seq = generate_stream_with(&params, 30_000, 9, Execution::Sequential).unwrap();
    let par = generate_stream_with(&params, 30_000, 9, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(
        empirical_counting_with(&seq, 50.0, Execution::Sequential).unwrap(),
        empirical_counting_with(&par, 50.0, Execution::Parallel).unwrap()
    );
    assert_eq!(
        empirical_correlation_with(&seq, 0.1, 5.0, Execution::Sequential).unwrap(),
        empirical_correlation_with(&par, 0.1, 5.0, Execution::Parallel).unwrap()
    );
}

#[test]
fn merged_partial_histograms_equal_single_pass() {
    // several independent streams, each split into disjoint start ranges
    let params = AtomDriveParams::optimal(1.0);
    let streams: Vec<PhotonStream> = Execution::Parallel.map_indexed(3, |i| {
        generate_stream(&params, 8000, 40 + i as u64).unwrap()
    });
    let (bins, max_lag) = (50, 5.0);
    for s in &streams {
        let starts = s.times.partition_point(|&t| t <= s.span() - max_lag);
        let whole = LagHistogram::accumulate(&s.times, 0..starts, bins, max_lag);
        let cuts = [0, 1, 777, 4096, starts];
        let mut merged = LagHistogram::empty(bins);
        for w in cuts.windows(2).rev() {
            merged.merge(&LagHistogram::accumulate(
                &s.times,
                w[0]..w[1],
                bins,
                max_lag,
            ));
        }
        assert_eq!(whole, merged);
        // and the library estimator is the normalized single pass
        let curve = empirical_correlation_with(s, 0.1, max_lag, Execution::Sequential).unwrap();
        assert_eq!(
            curve,
            whole.into_curve(max_lag, mean_intensity(&params).unwrap())
        );
        let again = generate_stream(&params, 8000, s.seed).unwrap();
        assert_eq!(&again, s);
    }
}
