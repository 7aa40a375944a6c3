//! Independent numerical oracles for the analytic layer: a brute-force
//! Riemann sum for the special function, and direct Monte Carlo sampling of
//! the probability laws (separate from the production simulator).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swipt_outage::analytic::{
    conditional_pdf_z, first_hop_success, joint_cdf_below, outage_for_config,
};
use swipt_outage::experiments::validate;
use swipt_outage::model::{
    config_from_operating_point, DerivedRates, InterferenceMode, OperatingPoint,
};
use swipt_outage::numerics::{gen_inc_gamma, QuadratureSpec};

/// int_1^inf exp(-t - 1/t) dt by midpoint Riemann sum, step 1e-6 over
/// [1, 60] (the truncated tail is below 1e-26).
const GIG_1_1_1: f64 = 0.207_533_523_434_828_77;

fn rates(snr: f64, inr: f64, gain: f64) -> DerivedRates {
    DerivedRates {
        mean_snr: snr,
        mean_inr: inr,
        mean_harvest_gain: gain,
        interference_free: inr == 0.0,
    }
}

fn exp_draw(rng: &mut ChaCha8Rng, mean: f64) -> f64 {
    let u: f64 = rng.random();
    -mean * (1.0 - u).ln()
}

#[test]
fn riemann_sum_confirms_frozen_gamma_value() {
    let step = 1e-6;
    let steps = ((60.0 - 1.0) / step) as u64;
    // Kahan summation: 6e7 terms would otherwise lose digits.
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for i in 0..steps {
        let t = 1.0 + (i as f64 + 0.5) * step;
        let term = (-t - 1.0 / t).exp();
        let y = term - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    let riemann = sum * step;
    assert!(
        (riemann - GIG_1_1_1).abs() < 1e-9,
        "riemann {riemann} vs frozen {GIG_1_1_1}"
    );
    let quad = gen_inc_gamma(1.0, 1.0, 1.0, QuadratureSpec::default()).unwrap();
    assert!((quad - GIG_1_1_1).abs() < 1e-12, "quadrature {quad}");
}

#[test]
fn first_hop_success_against_direct_sampling() {
    // Success probability of Exp(10)/(1 + Exp(1)) clearing threshold 1.
    let r = rates(10.0, 1.0, 1.0);
    let analytic = first_hop_success(&r, 1.0);
    let n = 10_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
    let mut hits = 0u64;
    for _ in 0..n {
        let signal = exp_draw(&mut rng, 10.0);
        let interference = exp_draw(&mut rng, 1.0);
        if signal / (1.0 + interference) >= 1.0 {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / n as f64;
    let stderr = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    assert!(
        (analytic - p_hat).abs() <= 3.0 * stderr,
        "analytic {analytic} vs sampled {p_hat} (stderr {stderr})"
    );
}

#[test]
fn gated_density_against_histogram() {
    // Histogram of signal + interference restricted to decoding, bin width
    // 0.05 around z = 5, against the closed-form density.
    let r = rates(10.0, 1.0, 1.0);
    let threshold = 1.0;
    let (z_lo, z_hi) = (4.975, 5.025);
    let n = 10_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let mut in_bin = 0u64;
    for _ in 0..n {
        let signal = exp_draw(&mut rng, 10.0);
        let interference = exp_draw(&mut rng, 1.0);
        if signal / (1.0 + interference) >= threshold {
            let z = signal + interference;
            if z >= z_lo && z < z_hi {
                in_bin += 1;
            }
        }
    }
    let p_bin = in_bin as f64 / n as f64;
    let density_hat = p_bin / (z_hi - z_lo);
    let stderr = (p_bin * (1.0 - p_bin) / n as f64).sqrt() / (z_hi - z_lo);
    let analytic = conditional_pdf_z(&r, threshold, 5.0);
    assert!(
        (analytic - density_hat).abs() <= 3.0 * stderr,
        "analytic {analytic} vs histogram {density_hat} (stderr {stderr})"
    );
}

#[test]
fn joint_cdf_against_direct_sampling() {
    // Pr{ W (signal + interference) 1{decoded} < th } sampled from the three
    // exponentials directly.
    let r = rates(10.0, 1.0, 5.0);
    let threshold = 3.1623;
    let analytic = joint_cdf_below(&r, threshold, QuadratureSpec::default()).unwrap();
    assert!((analytic - 0.475_512_078_591_692_75).abs() < 1e-10);

    let n = 10_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut below = 0u64;
    for _ in 0..n {
        let signal = exp_draw(&mut rng, 10.0);
        let interference = exp_draw(&mut rng, 1.0);
        let second_hop = exp_draw(&mut rng, 5.0);
        let decoded = signal / (1.0 + interference) >= threshold;
        let gated_snr = if decoded {
            second_hop * (signal + interference)
        } else {
            0.0
        };
        if gated_snr < threshold {
            below += 1;
        }
    }
    let p_hat = below as f64 / n as f64;
    let stderr = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    assert!(
        (analytic - p_hat).abs() <= 3.0 * stderr,
        "analytic {analytic} vs sampled {p_hat} (stderr {stderr})"
    );
}

#[test]
fn interference_free_branch_against_simulator() {
    // The interference-free closed form is a derived limit; it must agree
    // with the full simulator before anything downstream trusts it.
    for relays in [1usize, 2, 3] {
        let config = config_from_operating_point(&OperatingPoint {
            relays,
            snr1_db: 20.0,
            mode: InterferenceMode::NoInterference,
            theta: 0.6,
            eta: 1.0,
            gamma_th_db: 5.0,
        })
        .unwrap();
        let report = validate(&config, 1_000_000, 2024, QuadratureSpec::default()).unwrap();
        assert!(report.pass, "relays {relays}: {report:?}");
    }
}

#[test]
fn equal_rate_configuration_against_simulator() {
    // SIR chosen so the post-split signal and interference rates coincide.
    let config = config_from_operating_point(&OperatingPoint {
        relays: 2,
        snr1_db: 10.0,
        mode: InterferenceMode::FixedSir { sir_db: 0.0 },
        theta: 0.5,
        eta: 1.0,
        gamma_th_db: 5.0,
    })
    .unwrap();
    let report = validate(&config, 1_000_000, 321, QuadratureSpec::default()).unwrap();
    assert!(report.pass, "{report:?}");
    assert_eq!(
        outage_for_config(&config, QuadratureSpec::default())
            .unwrap()
            .branch,
        swipt_outage::Branch::DegenerateEqualRates
    );
}
