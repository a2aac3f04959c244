use std::f64::consts::PI;

use nonstat_spectral::experiment::ExperimentConfig;
use nonstat_spectral::filter::make_filter;
use nonstat_spectral::io::{read_ensemble, write_ensemble, write_spectrum};
use nonstat_spectral::sampling::{
    fractional_bandwidth, make_plan, out_of_band_fraction, reconstruction_mse, sinc_reconstruct,
    subsample,
};
use nonstat_spectral::spectral::{
    averaged_autocorrelation, estimate_autocorrelation, estimate_psd, ft_of_lag,
    lag_averaged_autocorrelation, theoretical_avg_acf, theoretical_psd_ns1, Normalization,
};
use nonstat_spectral::synthesis::{step_variance_profile, synthesize, TemporalModel};
use nonstat_spectral::{Ensemble, FrequencyGrid, VarianceProfile};
use proptest::prelude::*;

fn ensemble_strategy() -> impl Strategy<Value = Ensemble> {
    (1usize..6, 1usize..40).prop_flat_map(|(p, k)| {
        prop::collection::vec(prop::collection::vec(-50.0f64..50.0, k), p)
            .prop_map(|rows| Ensemble::from_rows(rows, 0).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(x in ensemble_strategy(), frac in 0.0f64..1.0) {
        let n = 1 + ((x.len() - 1) as f64 * frac) as usize;
        let s = estimate_psd(&x, n).unwrap();
        let mean_bin = s.values().iter().sum::<f64>() / n as f64;
        let mut power = 0.0;
        for p in 0..x.realizations() {
            power += x.row_slice(p)[..n].iter().map(|v| v * v).sum::<f64>();
        }
        power /= (n * x.realizations()) as f64;
        prop_assert!((mean_bin - power).abs() <= 1e-9 * power.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn psd_nonnegative_and_symmetric(x in ensemble_strategy()) {
        let s = estimate_psd(&x, x.len()).unwrap();
        prop_assert!(s.values().iter().all(|&v| v >= 0.0));
        prop_assert_eq!(s.clipped_bins(), 0);
        s.validate().unwrap();
    }

    #[test]
    fn finite_window_wk_identity(x in ensemble_strategy()) {
        let k = x.len();
        let s = estimate_psd(&x, k).unwrap();
        let lag = averaged_autocorrelation(&estimate_autocorrelation(&x), Normalization::Biased);
        let f = ft_of_lag(&lag, &FrequencyGrid::dft(k)).unwrap();
        let scale = s.max_value().max(1e-300);
        for (a, b) in s.values().iter().zip(f.values()) {
            prop_assert!((a - b).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn psd_scales_quadratically(x in ensemble_strategy(), c in -4.0f64..4.0) {
        let scaled = Ensemble::new(x.data() * c, 0).unwrap();
        let a = estimate_psd(&x, x.len()).unwrap();
        let b = estimate_psd(&scaled, x.len()).unwrap();
        let scale = a.max_value().max(1e-300) * c * c;
        for (u, v) in a.values().iter().zip(b.values()) {
            prop_assert!((u * c * c - v).abs() <= 1e-9 * scale.max(1e-300));
        }
    }

    #[test]
    fn sinc_passes_kept_samples(x in ensemble_strategy(), m in 1usize..6) {
        let plan = make_plan(PI / m as f64 * 0.99, 0.9, m).unwrap();
        prop_assert_eq!(plan.decimation, m);
        let s = subsample(&x, &plan).unwrap();
        let y = sinc_reconstruct(&s, &plan, x.len()).unwrap();
        for p in 0..x.realizations() {
            for t in (0..x.len()).step_by(m) {
                prop_assert!((y.row_slice(p)[t] - x.row_slice(p)[t]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn csv_round_trip_is_lossless(x in ensemble_strategy(), seed in any::<u64>()) {
        let x = Ensemble::new(x.into_data(), seed).unwrap();
        let mut buf = Vec::new();
        write_ensemble(&x, &mut buf).unwrap();
        let back = read_ensemble(buf.as_slice()).unwrap();
        prop_assert_eq!(back.data(), x.data());
        prop_assert_eq!(back.seed(), seed);
    }
}

#[test]
fn wss_degeneracy() {
    let filter = make_filter(&[0.6], &[1.0, 0.5], 1e-10).unwrap();
    let k = 200;
    let profile = VarianceProfile::constant(k, 2.0).unwrap();
    let x = synthesize(&profile, &filter, 3000, TemporalModel::Iid, 17, 100).unwrap();
    let r = estimate_autocorrelation(&x);
    for norm in [Normalization::Biased, Normalization::Unbiased] {
        let from_r = averaged_autocorrelation(&r, norm);
        let classical = lag_averaged_autocorrelation(&x, norm);
        for (a, b) in from_r.values().iter().zip(classical.values()) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }
    // both approach σ²·(h⋆h)(τ) once the transient is discarded
    let theory = theoretical_avg_acf(&filter, &profile);
    let est = averaged_autocorrelation(&r, Normalization::Unbiased);
    for tau in 0..6 {
        let t = theory.at(tau);
        assert!(
            (est.at(tau) - t).abs() < 0.05 * theory.at(0),
            "lag {tau}: {} vs {t}",
            est.at(tau)
        );
    }
}

#[test]
fn plan_monotone_in_fraction() {
    let k = 500;
    let filter = make_filter(&[0.8, 0.1], &[1.0], 1e-10).unwrap();
    let profile = step_variance_profile(k).unwrap();
    let x = synthesize(&profile, &filter, 300, TemporalModel::Iid, 2, 0).unwrap();
    let estimated = estimate_psd(&x, k).unwrap();
    let theory = theoretical_psd_ns1(&filter, &profile, &FrequencyGrid::dft(k)).unwrap();
    for s in [estimated, theory] {
        let mut last: Option<(f64, usize)> = None;
        for f in [0.5, 0.7, 0.9, 0.99] {
            let b = fractional_bandwidth(&s, f).unwrap();
            let m = make_plan(b, f, k / 4).unwrap().decimation;
            if let Some((pb, pm)) = last {
                assert!(b >= pb && m <= pm, "fraction {f}: B {pb}->{b}, M {pm}->{m}");
            }
            last = Some((b, m));
        }
    }
}

/// Decimating without an anti-alias filter loses the power beyond π/M and
/// folds an equal amount back into the band, so the pooled error is close to
/// twice the spectral mass beyond π/M.
#[test]
fn mse_tracks_twice_the_beyond_nyquist_mass() {
    let k = 500;
    let filter = make_filter(&[0.8, 0.1], &[1.0], 1e-10).unwrap();
    let profile = step_variance_profile(k).unwrap();
    let x = synthesize(&profile, &filter, 600, TemporalModel::Iid, 5, 0).unwrap();
    let fine = theoretical_psd_ns1(&filter, &profile, &FrequencyGrid::dft(8192)).unwrap();
    for m in [2usize, 3, 4] {
        let plan = make_plan(PI / m as f64 * 0.999, 0.9, m).unwrap();
        let y = sinc_reconstruct(&subsample(&x, &plan).unwrap(), &plan, k).unwrap();
        let mse = reconstruction_mse(&x, &y).unwrap().pooled_percent;
        let beyond = 100.0 * out_of_band_fraction(&fine, PI / m as f64).unwrap();
        assert!(
            (mse - 2.0 * beyond).abs() < 2.0,
            "M={m}: mse {mse:.2}% vs 2x{beyond:.2}%"
        );
    }
}

#[test]
fn full_band_identity_plan_is_exact() {
    let x = synthesize(
        &VarianceProfile::constant(64, 1.0).unwrap(),
        &make_filter(&[], &[1.0], 1e-10).unwrap(),
        10,
        TemporalModel::Iid,
        1,
        0,
    )
    .unwrap();
    let s = estimate_psd(&x, 64).unwrap();
    let b = fractional_bandwidth(&s, 1.0).unwrap();
    let plan = make_plan(b.min(3.0), 1.0, 1).unwrap();
    assert_eq!(plan.decimation, 1);
    let y = sinc_reconstruct(&subsample(&x, &plan).unwrap(), &plan, 64).unwrap();
    assert_eq!(reconstruction_mse(&x, &y).unwrap().pooled_percent, 0.0);
}

fn run_pipeline() -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let k = 128;
    let filter = make_filter(&[0.8, 0.1], &[1.0], 1e-10).unwrap();
    let profile = step_variance_profile(k).unwrap();
    let x = synthesize(
        &profile,
        &filter,
        300,
        TemporalModel::ar1(0.7).unwrap(),
        99,
        0,
    )
    .unwrap();
    let mut ens = Vec::new();
    write_ensemble(&x, &mut ens).unwrap();
    let mut psd = Vec::new();
    write_spectrum(&estimate_psd(&x, k).unwrap(), &mut psd).unwrap();
    let lag = averaged_autocorrelation(&estimate_autocorrelation(&x), Normalization::Unbiased);
    let mut ft = Vec::new();
    write_spectrum(&ft_of_lag(&lag, &FrequencyGrid::dft(k)).unwrap(), &mut ft).unwrap();
    (ens, psd, ft)
}

#[test]
fn bit_identical_across_thread_counts() {
    let pool = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
    };
    let one = pool(1).install(run_pipeline);
    let eight = pool(8).install(run_pipeline);
    assert!(one == eight);
}

#[test]
fn config_round_trips_through_json() {
    let cfg = ExperimentConfig {
        temporal: TemporalModel::ar1(0.9).unwrap(),
        profile: "const:0.25".parse().unwrap(),
        max_decimation: Some(7),
        truncation_tol: 1e-12,
        ..ExperimentConfig::default()
    };
    let text = serde_json::to_string(&cfg).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
}
