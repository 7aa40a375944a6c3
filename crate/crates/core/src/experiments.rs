//! Scenario drivers: parameter sweeps, optimal splitting-ratio search,
//! diversity-order slope estimation, and the analytic-vs-simulation
//! cross-validation harness.

use serde::{Deserialize, Serialize};

use crate::analytic::{first_hop_success, outage_for_config, OutagePoint};
use crate::error::{Error, Result};
use crate::model::{config_from_operating_point, derive_rates, OperatingPoint, SystemConfig};
use crate::montecarlo::{estimate_outage, simulate_stats, OutageEstimate};
use crate::numerics::{reg_gamma_upper, QuadratureSpec};

/// Monte Carlo settings attached to a sweep or validation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub n_trials: u64,
    pub seed: u64,
}

/// One sweep grid point. `analytic` is absent when the closed form failed
/// at that point (the sweep keeps going); the Monte Carlo columns are absent
/// when simulation was not requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub analytic: Option<f64>,
    pub empirical: Option<f64>,
    pub stderr: Option<f64>,
}

/// An evaluated sweep, ordered ascending in the sweep variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Label of the sweep variable ("theta" or "snr1_db").
    pub variable: String,
    pub rows: Vec<SweepRow>,
    pub config_snapshot: SystemConfig,
}

/// Result of the optimal splitting-ratio search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalTheta {
    pub theta: f64,
    pub outage: f64,
    /// False when the coarse scan saw a second, clearly separated basin;
    /// the returned point is still the best one found.
    pub unimodal: bool,
}

/// Two-point log-log slope of outage versus SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityEstimate {
    pub snr_lo_db: f64,
    pub snr_hi_db: f64,
    pub slope: f64,
}

fn mc_columns(config: &SystemConfig, mc: Option<McSettings>) -> (Option<f64>, Option<f64>) {
    match mc {
        Some(settings) => {
            let est = estimate_outage(config, settings.n_trials, settings.seed);
            (Some(est.p_hat), Some(est.stderr))
        }
        None => (None, None),
    }
}

/// Sweeps the power-splitting ratio over `grid` (strictly inside (0, 1),
/// ascending) on an otherwise fixed configuration.
pub fn sweep_theta(
    template: &SystemConfig,
    grid: &[f64],
    mc: Option<McSettings>,
    quad: QuadratureSpec,
) -> Result<SweepResult> {
    template.validate()?;
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidConfig(
                "sweep grid must be strictly ascending".into(),
            ));
        }
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &theta in grid {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidGrid(theta));
        }
        let config = SystemConfig {
            split_ratio: theta,
            ..*template
        };
        let analytic = outage_for_config(&config, quad).ok().map(|p| p.outage);
        let (empirical, stderr) = mc_columns(&config, mc);
        rows.push(SweepRow {
            x: theta,
            analytic,
            empirical,
            stderr,
        });
    }
    Ok(SweepResult {
        variable: "theta".to_string(),
        rows,
        config_snapshot: *template,
    })
}

/// Sweeps the first-hop average SNR (dB, ascending) of an operating point.
pub fn sweep_snr(
    base: &OperatingPoint,
    grid_db: &[f64],
    mc: Option<McSettings>,
    quad: QuadratureSpec,
) -> Result<SweepResult> {
    if grid_db.is_empty() {
        return Err(Error::InvalidConfig("sweep grid must be nonempty".into()));
    }
    for pair in grid_db.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidConfig(
                "sweep grid must be strictly ascending".into(),
            ));
        }
    }
    let mut rows = Vec::with_capacity(grid_db.len());
    let mut snapshot = None;
    for &snr_db in grid_db {
        let config = config_from_operating_point(&OperatingPoint {
            snr1_db: snr_db,
            ..*base
        })?;
        snapshot.get_or_insert(config);
        let analytic = outage_for_config(&config, quad).ok().map(|p| p.outage);
        let (empirical, stderr) = mc_columns(&config, mc);
        rows.push(SweepRow {
            x: snr_db,
            analytic,
            empirical,
            stderr,
        });
    }
    Ok(SweepResult {
        variable: "snr1_db".to_string(),
        rows,
        config_snapshot: snapshot.expect("nonempty grid"),
    })
}

const COARSE_THETA_STEP: f64 = 0.02;
const COARSE_THETA_LO: f64 = 0.01;
const COARSE_THETA_HI: f64 = 0.99;

/// Locates the splitting ratio minimizing the analytic outage: a coarse
/// 0.02-step scan over [0.01, 0.99] brackets the minimum, golden-section
/// refinement narrows it to `tol`.
pub fn find_optimal_theta(
    template: &SystemConfig,
    tol: f64,
    quad: QuadratureSpec,
) -> Result<OptimalTheta> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidConfig(
            "theta tolerance must lie in (0, 0.1)".into(),
        ));
    }
    template.validate()?;

    let objective = |theta: f64| -> Result<f64> {
        let config = SystemConfig {
            split_ratio: theta,
            ..*template
        };
        Ok(outage_for_config(&config, quad)?.outage)
    };

    let mut grid = Vec::new();
    let mut theta = COARSE_THETA_LO;
    while theta <= COARSE_THETA_HI + 1e-12 {
        grid.push((theta, objective(theta)?));
        theta += COARSE_THETA_STEP;
    }

    let best_idx = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("coarse grid is nonempty");

    // A second basin counts only if it dips below its neighbors by more
    // than the quadrature noise floor.
    let noise = |value: f64| 10.0 * quad.abs_tol.max(quad.rel_tol * value.abs());
    let mut genuine_minima = 0;
    for i in 0..grid.len() {
        let v = grid[i].1;
        let left_up = i == 0 || grid[i - 1].1 - v > noise(v);
        let right_up = i + 1 == grid.len() || grid[i + 1].1 - v > noise(v);
        if left_up && right_up {
            genuine_minima += 1;
        }
    }
    let unimodal = genuine_minima <= 1;

    // Golden-section refinement inside the bracketing neighbors.
    let mut lo = grid[best_idx.saturating_sub(1)].0;
    let mut hi = grid[(best_idx + 1).min(grid.len() - 1)].0;
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut m1 = hi - INV_PHI * (hi - lo);
    let mut m2 = lo + INV_PHI * (hi - lo);
    let mut f1 = objective(m1)?;
    let mut f2 = objective(m2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - INV_PHI * (hi - lo);
            f1 = objective(m1)?;
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + INV_PHI * (hi - lo);
            f2 = objective(m2)?;
        }
    }
    let (theta_star, outage) = if f1 <= f2 { (m1, f1) } else { (m2, f2) };
    // The coarse scan may already be the better point at grid resolution.
    let (theta_star, outage) = if grid[best_idx].1 < outage {
        (grid[best_idx].0, grid[best_idx].1)
    } else {
        (theta_star, outage)
    };
    Ok(OptimalTheta {
        theta: theta_star,
        outage,
        unimodal,
    })
}

/// Two-point secant slope of log10(outage) against SNR, in decades per
/// 10 dB: the empirical diversity order over `[snr_lo_db, snr_hi_db]`.
pub fn estimate_diversity_order(
    sweep: &SweepResult,
    snr_lo_db: f64,
    snr_hi_db: f64,
) -> Result<DiversityEstimate> {
    let find = |x: f64| -> Result<f64> {
        let row = sweep
            .rows
            .iter()
            .find(|r| (r.x - x).abs() < 1e-9)
            .ok_or(Error::OutOfRange(x))?;
        match row.analytic {
            Some(p) if p > 0.0 => Ok(p),
            _ => Err(Error::ZeroProbability(x)),
        }
    };
    let p_lo = find(snr_lo_db)?;
    let p_hi = find(snr_hi_db)?;
    Ok(DiversityEstimate {
        snr_lo_db,
        snr_hi_db,
        slope: -(p_hi.log10() - p_lo.log10()) / ((snr_hi_db - snr_lo_db) / 10.0),
    })
}

/// Agreement criterion between the closed form and an empirical estimate:
/// within three standard errors or an absolute 1e-3 floor.
pub fn agreement_ok(analytic: f64, estimate: &OutageEstimate) -> bool {
    (analytic - estimate.p_hat).abs() <= (3.0 * estimate.stderr).max(1e-3)
}

/// Decoding-set size check: observed histogram against the binomial law.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSizeCheck {
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub pass: bool,
}

/// First-hop decoding fraction check for relay 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstHopCheck {
    pub expected: f64,
    pub observed: f64,
    pub stderr: f64,
    pub pass: bool,
}

/// Report of one cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub analytic: OutagePoint,
    pub estimate: OutageEstimate,
    pub outage_pass: bool,
    pub first_hop: FirstHopCheck,
    pub set_size: SetSizeCheck,
    pub pass: bool,
}

/// Significance level of the decoding-set-size goodness-of-fit test.
const SET_SIZE_SIGNIFICANCE: f64 = 1e-3;
/// Bins with expected counts below this are pooled before the test.
const MIN_EXPECTED_PER_BIN: f64 = 5.0;

fn binomial_pmf(relays: usize, success: f64) -> Vec<f64> {
    let fail = 1.0 - success;
    let mut pmf = Vec::with_capacity(relays + 1);
    let mut binom = 1.0f64;
    for l in 0..=relays {
        if l > 0 {
            binom *= (relays - l + 1) as f64 / l as f64;
        }
        pmf.push(binom * fail.powi((relays - l) as i32) * success.powi(l as i32));
    }
    pmf
}

fn chi_square_check(observed: &[u64], expected: &[f64], n: u64) -> SetSizeCheck {
    let scaled: Vec<f64> = expected.iter().map(|p| p * n as f64).collect();

    // Pool adjacent bins until each bucket carries enough expectation for
    // the chi-square approximation to hold.
    let mut buckets: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0f64, 0.0f64);
    for (&o, &e) in observed.iter().zip(&scaled) {
        acc.0 += o as f64;
        acc.1 += e;
        if acc.1 >= MIN_EXPECTED_PER_BIN {
            buckets.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        if let Some(last) = buckets.last_mut() {
            last.0 += acc.0;
            last.1 += acc.1;
        } else {
            buckets.push(acc);
        }
    }

    if buckets.len() < 2 {
        // Everything in one bucket: nothing to test.
        return SetSizeCheck {
            observed: observed.to_vec(),
            expected: scaled,
            chi2: 0.0,
            dof: 0,
            p_value: 1.0,
            pass: true,
        };
    }
    let chi2: f64 = buckets.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = buckets.len() - 1;
    let p_value = reg_gamma_upper(dof as f64 / 2.0, chi2 / 2.0).unwrap_or(0.0);
    SetSizeCheck {
        observed: observed.to_vec(),
        expected: scaled,
        chi2,
        dof,
        p_value,
        pass: p_value >= SET_SIZE_SIGNIFICANCE,
    }
}

/// Cross-validates the closed form against the simulator on one
/// configuration: outage agreement, the relay-0 decoding fraction, and the
/// decoding-set-size histogram.
pub fn validate(
    config: &SystemConfig,
    n_trials: u64,
    seed: u64,
    quad: QuadratureSpec,
) -> Result<ValidationReport> {
    if n_trials < 100_000 {
        return Err(Error::InvalidConfig(
            "validation needs at least 1e5 trials".into(),
        ));
    }
    let analytic = outage_for_config(config, quad)?;
    let stats = simulate_stats(config, n_trials, seed);
    let estimate = crate::montecarlo::estimate_from_stats(&stats, seed);
    let outage_pass = agreement_ok(analytic.outage, &estimate);

    let success = if config.split_ratio == 1.0 {
        0.0
    } else {
        first_hop_success(&derive_rates(config)?, config.snr_threshold)
    };
    let observed_fraction = stats.first_relay_decoded as f64 / n_trials as f64;
    let fh_stderr = (success * (1.0 - success) / n_trials as f64).sqrt();
    let first_hop = FirstHopCheck {
        expected: success,
        observed: observed_fraction,
        stderr: fh_stderr,
        pass: (observed_fraction - success).abs() <= 3.0 * fh_stderr
            || observed_fraction == success,
    };

    let set_size = chi_square_check(
        &stats.set_size_hist,
        &binomial_pmf(config.relays, success),
        n_trials,
    );

    let pass = outage_pass && first_hop.pass && set_size.pass;
    Ok(ValidationReport {
        analytic,
        estimate,
        outage_pass,
        first_hop,
        set_size,
        pass,
    })
}
