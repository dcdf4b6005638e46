//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use mimo_bft::channel::{draw_channel, uplink_estimate};
use mimo_bft::dl_training::{estimate_gains, mmse_gain_generic, synth_received_stat};
use mimo_bft::harness::{
    points_to_csv, run_sweep, run_validate, CurveMode, ExperimentConfig, SweepAxis,
};
use mimo_bft::moments::{moments_mrt, moments_zf};
use mimo_bft::params::db_to_linear;
use mimo_bft::precoding::build_precoder;
use mimo_bft::rates::{monte_carlo_rate, se_baseline, se_bft};
use mimo_bft::{PrecoderKind, RateMode, RngStream, SystemParams};
use num_complex::Complex64;
use rayon::prelude::*;

fn reference_params() -> SystemParams {
    SystemParams {
        m: 50,
        k: 5,
        t: 200,
        tau_u: 5,
        tau_d: 5,
        p_u: 1.0,
        p_d: 100.0,
    }
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_moment_oracle_agreement() {
    let start = Instant::now();
    let params = reference_params();
    let rep = run_validate(&params, 100_000, 2024).unwrap();
    let get = |name: &str| {
        rep.checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("missing check {name}"))
    };
    // pin the oracle values the checks compare against
    let pins = [
        ("mrt_gain_var_diag", 0.2),
        ("mrt_gain_var_offdiag", 0.2),
        ("mrt_gain_mean_diag", 2.88675),
        ("mrt_eps_var_diag", 1.9802e-3),
        ("zf_gain_var_diag", 0.033333),
        ("zf_gain_var_offdiag", 0.033333),
        ("zf_gain_mean_diag", 2.73861),
        ("zf_eps_var_diag", 1.8868e-3),
    ];
    let mut ok = true;
    for (name, expected) in pins {
        let c = get(name);
        ok &= (c.expected - expected).abs() < 1e-4 * expected.max(1.0);
        ok &= c.pass;
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < 120.0;
    report(
        "1 moment oracle agreement",
        ok,
        &format!("10^5 trials in {elapsed:.1}s, all 3-SE bands"),
    );
}

#[test]
fn criterion_2_power_constraint() {
    let params = reference_params();
    let mut ok = true;
    let mut detail = String::new();
    for kind in [PrecoderKind::Mrt, PrecoderKind::Zf] {
        let traces: Vec<f64> = (0..10_000u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = RngStream::new(11, s).rng();
                let h = draw_channel(&mut rng, &params).unwrap();
                let pair = uplink_estimate(&mut rng, &h, &params).unwrap();
                build_precoder(kind, &pair.h_hat, &params)
                    .unwrap()
                    .w
                    .frob_norm_sq()
            })
            .collect();
        let mean = traces.iter().sum::<f64>() / traces.len() as f64;
        ok &= (0.99..=1.01).contains(&mean);
        detail.push_str(&format!("{} {:.5} ", kind.label(), mean));
    }
    report("2 power constraint", ok, detail.trim());
}

#[test]
fn criterion_3_estimator_equivalence() {
    let params = reference_params();
    let mut max_rel = 0.0f64;
    for trial in 0..1000u64 {
        let mut rng = RngStream::new(12, trial).rng();
        let h = draw_channel(&mut rng, &params).unwrap();
        let pair = uplink_estimate(&mut rng, &h, &params).unwrap();
        for kind in [PrecoderKind::Mrt, PrecoderKind::Zf] {
            let w = build_precoder(kind, &pair.h_hat, &params).unwrap();
            let y = synth_received_stat(&mut rng, &h, &w.w, &params).unwrap();
            let prior = match kind {
                PrecoderKind::Mrt => moments_mrt(&params),
                PrecoderKind::Zf => moments_zf(&params).unwrap(),
            };
            for k in 0..params.k {
                let closed = estimate_gains(kind, y.row(k), k, &params).unwrap();
                for (i, est) in closed.iter().enumerate() {
                    let mean = if i == k {
                        Complex64::new(prior.mean_diag, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let generic =
                        mmse_gain_generic(y.get(k, i), mean, prior.var, &params).unwrap();
                    max_rel = max_rel.max((est - generic).norm() / generic.norm().max(1.0));
                }
            }
        }
    }
    report(
        "3 estimator equivalence",
        max_rel <= 1e-12,
        &format!("max relative deviation {max_rel:.2e}"),
    );
}

#[test]
fn criterion_4_baseline_golden_values() {
    let params = reference_params();
    let mrt = se_baseline(PrecoderKind::Mrt, &params).unwrap().value;
    let zf = se_baseline(PrecoderKind::Zf, &params).unwrap().value;
    let ok = (mrt - 15.65).abs() < 0.01 && (zf - 26.53).abs() < 0.01;
    report(
        "4 baseline golden values",
        ok,
        &format!("mrt {mrt:.4} zf {zf:.4}"),
    );
}

#[test]
fn criterion_5_single_user_precoder_equivalence() {
    let mut ok = true;
    let mut detail = String::new();
    for snr_db in [0.0, 10.0, 20.0] {
        let params = SystemParams {
            m: 10,
            k: 1,
            t: 200,
            tau_u: 1,
            tau_d: 1,
            p_u: 1.0,
            p_d: db_to_linear(snr_db),
        };
        let mrt = monte_carlo_rate(RateMode::BftMrt, &params, 10_000, 13).unwrap();
        let zf = monte_carlo_rate(RateMode::BftZf, &params, 10_000, 13).unwrap();
        let se_m = se_bft(&mrt, &params).unwrap();
        let se_z = se_bft(&zf, &params).unwrap();
        let diff = (se_m.value - se_z.value).abs();
        let band = 3.0 * (se_m.std_error.powi(2) + se_z.std_error.powi(2)).sqrt();
        ok &= diff < band;
        detail.push_str(&format!("{snr_db}dB diff {diff:.4} band {band:.4}; "));
    }
    report("5 K=1 MRT/ZF equivalence", ok, detail.trim());
}

#[test]
fn criterion_6_training_benefit_ordering() {
    let params = reference_params();
    let mut gaps = Vec::new();
    let mut ok = true;
    for mode in [RateMode::BftMrt, RateMode::BftZf] {
        let trained = monte_carlo_rate(mode, &params, 10_000, 14).unwrap();
        let se_t = se_bft(&trained, &params).unwrap();
        let se_0 = se_baseline(mode.precoder(), &params).unwrap();
        let gap = se_t.value - se_0.value;
        ok &= gap > 3.0 * se_t.std_error;
        gaps.push(gap);
    }
    ok &= gaps[0] > gaps[1]; // MRT training gain exceeds ZF training gain
    report(
        "6 training benefit ordering",
        ok,
        &format!("gap mrt {:.3} zf {:.3}", gaps[0], gaps[1]),
    );
}

#[test]
fn criterion_7_coherence_crossover() {
    let grid = [15usize, 20, 30, 50, 100, 200, 400];
    let mut ok = true;
    let mut detail = String::new();
    for mode in [RateMode::BftMrt, RateMode::BftZf] {
        let diffs: Vec<f64> = grid
            .iter()
            .map(|&t| {
                let params = SystemParams {
                    t,
                    ..reference_params()
                };
                let trained = monte_carlo_rate(mode, &params, 10_000, 15).unwrap();
                let se_t = se_bft(&trained, &params).unwrap();
                let se_0 = se_baseline(mode.precoder(), &params).unwrap();
                se_t.value - se_0.value
            })
            .collect();
        let changes: Vec<(f64, f64)> = diffs
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .map(|w| (w[0], w[1]))
            .collect();
        ok &= changes.len() <= 1;
        if let Some((before, after)) = changes.first() {
            ok &= *before < 0.0 && *after > 0.0;
        }
        detail.push_str(&format!("{}: {} sign change(s); ", mode.label(), changes.len()));
    }
    report("7 coherence-interval crossover", ok, detail.trim());
}

#[test]
fn criterion_8_genie_gap() {
    let mut ok = true;
    let mut detail = String::new();
    for snr_db in [0.0, 10.0, 20.0] {
        let params = SystemParams {
            p_d: db_to_linear(snr_db),
            ..reference_params()
        };
        for (bft_mode, genie_mode) in [
            (RateMode::BftMrt, RateMode::GenieMrt),
            (RateMode::BftZf, RateMode::GenieZf),
        ] {
            let bft = monte_carlo_rate(bft_mode, &params, 10_000, 16).unwrap();
            let genie = monte_carlo_rate(genie_mode, &params, 10_000, 16).unwrap();
            let s_tb = se_bft(&bft, &params).unwrap();
            let s_g = se_bft(&genie, &params).unwrap();
            let rel_gap = (s_g.value - s_tb.value) / s_g.value;
            let se_combined = (s_tb.std_error.powi(2) + s_g.std_error.powi(2)).sqrt();
            // lower bound enforced at -3 SE on the gap itself
            ok &= s_g.value - s_tb.value >= -3.0 * se_combined;
            ok &= rel_gap <= 0.10;
            detail.push_str(&format!("{} {snr_db}dB gap {rel_gap:.4}; ", bft_mode.label()));
        }
    }
    report("8 genie gap", ok, detail.trim());
}

#[test]
fn criterion_9_determinism() {
    let config = ExperimentConfig {
        params: SystemParams {
            p_d: 1.0,
            ..reference_params()
        },
        modes: vec![CurveMode::BftMrt, CurveMode::BftZf, CurveMode::BaselineMrt],
        sweep_axis: SweepAxis::SnrDb,
        sweep_values: vec![0.0, 10.0, 20.0],
        n_trials: 2_000,
        master_seed: 99,
        output_path: None,
    };
    let csv_a = points_to_csv(&run_sweep(&config).unwrap());
    let report_a = run_validate(&config.params, 5_000, 99).unwrap().to_json().unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (csv_b, report_b) = pool.install(|| {
        (
            points_to_csv(&run_sweep(&config).unwrap()),
            run_validate(&config.params, 5_000, 99).unwrap().to_json().unwrap(),
        )
    });
    let csv_c = points_to_csv(&run_sweep(&config).unwrap());
    let ok = csv_a == csv_b && csv_a == csv_c && report_a == report_b;
    report(
        "9 determinism",
        ok,
        "sweep CSV and validate JSON byte-identical across runs and thread counts",
    );
}
