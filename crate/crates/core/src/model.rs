//! Physical parameters of one network instance and the analysis-level rates
//! derived from them.
//!
//! The network is a two-hop decode-and-forward relay system: a source, `L`
//! power-splitting energy-harvesting relays (each hit by one aggregate
//! co-channel interferer), and a destination. All channels are Rayleigh, so
//! squared channel gains are exponential with the configured variances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts decibels to the linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// All physical parameters of one network instance (linear units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of relays L.
    pub relays: usize,
    /// Source transmit power P_S (watts).
    pub source_power: f64,
    /// Interferer power at each relay P_I (watts, 0 disables interference).
    pub interferer_power: f64,
    /// Source-to-relay channel variance.
    pub first_hop_var: f64,
    /// Relay-to-destination channel variance.
    pub second_hop_var: f64,
    /// Interferer-to-relay channel variance.
    pub interference_var: f64,
    /// Relay noise variance (watts).
    pub relay_noise: f64,
    /// Destination noise variance (watts).
    pub dest_noise: f64,
    /// Energy conversion efficiency eta in [0, 1].
    pub harvest_efficiency: f64,
    /// Power-splitting ratio theta in [0, 1]: the harvested fraction.
    pub split_ratio: f64,
    /// Decoding SNR threshold (linear).
    pub snr_threshold: f64,
}

impl SystemConfig {
    /// Checks every invariant, naming the first violated one.
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, what: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(what.to_string()))
            }
        }
        check(self.relays >= 1, "relays must be >= 1")?;
        check(
            self.source_power > 0.0 && self.source_power.is_finite(),
            "source_power must be positive and finite",
        )?;
        check(
            self.interferer_power >= 0.0 && self.interferer_power.is_finite(),
            "interferer_power must be nonnegative and finite",
        )?;
        check(self.first_hop_var > 0.0, "first_hop_var must be positive")?;
        check(self.second_hop_var > 0.0, "second_hop_var must be positive")?;
        check(
            self.interference_var >= 0.0,
            "interference_var must be nonnegative",
        )?;
        check(self.relay_noise > 0.0, "relay_noise must be positive")?;
        check(self.dest_noise > 0.0, "dest_noise must be positive")?;
        check(
            (0.0..=1.0).contains(&self.harvest_efficiency),
            "harvest_efficiency must lie in [0, 1]",
        )?;
        check(
            (0.0..=1.0).contains(&self.split_ratio),
            "split_ratio must lie in [0, 1]",
        )?;
        check(
            self.snr_threshold > 0.0 && self.snr_threshold.is_finite(),
            "snr_threshold must be positive and finite",
        )?;
        Ok(())
    }

    /// True when no interference power reaches the relays.
    pub fn interference_free(&self) -> bool {
        self.interferer_power * self.interference_var == 0.0
    }
}

/// Analysis-level rates that fully determine the outage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    /// Mean first-hop signal SNR after power splitting.
    pub mean_snr: f64,
    /// Mean first-hop interference-to-noise ratio after power splitting.
    pub mean_inr: f64,
    /// Mean second-hop gain: harvested relay power times channel, per unit
    /// of first-hop received SNR.
    pub mean_harvest_gain: f64,
    /// Set when the interference power-variance product is exactly zero.
    pub interference_free: bool,
}

impl DerivedRates {
    /// Difference of inverse scales, `1/mean_inr - 1/mean_snr`. Infinite in
    /// the interference-free case.
    pub fn inv_scale_gap(&self) -> f64 {
        if self.interference_free {
            f64::INFINITY
        } else {
            1.0 / self.mean_inr - 1.0 / self.mean_snr
        }
    }

    /// Effective exponential decay rate of the joint second-hop term at a
    /// given threshold: `1/mean_snr + inv_scale_gap/(1 + threshold)`.
    pub fn joint_decay(&self, threshold: f64) -> f64 {
        1.0 / self.mean_snr + self.inv_scale_gap() / (1.0 + threshold)
    }
}

/// Derives the rate parameters from a configuration.
///
/// `split_ratio = 1` is rejected: it leaves no power for decoding and the
/// second-hop rate is undefined; callers treat it as forced outage.
/// `split_ratio = 0` is accepted and yields `mean_harvest_gain = 0`, which
/// downstream evaluators map to certain outage.
pub fn derive_rates(config: &SystemConfig) -> Result<DerivedRates> {
    config.validate()?;
    let theta = config.split_ratio;
    if theta == 1.0 {
        return Err(Error::DegenerateTheta {
            theta,
            starved: "information decoding",
        });
    }
    let split_kept = 1.0 - theta;
    Ok(DerivedRates {
        mean_snr: split_kept * config.source_power * config.first_hop_var / config.relay_noise,
        mean_inr: split_kept * config.interferer_power * config.interference_var
            / config.relay_noise,
        mean_harvest_gain: config.harvest_efficiency * theta / split_kept * config.relay_noise
            / config.dest_noise
            * config.second_hop_var,
        interference_free: config.interference_free(),
    })
}

/// How the interferer power is pinned when constructing a normalized
/// configuration from an operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum InterferenceMode {
    /// No interferer at the relays.
    NoInterference,
    /// Fixed interference-to-noise ratio at the first hop.
    FixedInr { inr_db: f64 },
    /// Fixed signal-to-interference ratio at the first hop.
    FixedSir { sir_db: f64 },
}

/// The figure-axis parametrization: first-hop average SNR (pre-splitting,
/// in dB) plus an interference mode, with everything else normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub relays: usize,
    /// First-hop average SNR in dB, defined pre-splitting as
    /// `source_power * first_hop_var / relay_noise`.
    pub snr1_db: f64,
    pub mode: InterferenceMode,
    pub theta: f64,
    pub eta: f64,
    pub gamma_th_db: f64,
}

/// Builds a normalized configuration (unit noise and channel variances)
/// realizing the requested operating point.
pub fn config_from_operating_point(point: &OperatingPoint) -> Result<SystemConfig> {
    let source_power = db_to_linear(point.snr1_db);
    if !source_power.is_finite() {
        return Err(Error::InvalidMode(format!(
            "snr1_db = {} is out of range",
            point.snr1_db
        )));
    }
    let interferer_power = match point.mode {
        InterferenceMode::NoInterference => 0.0,
        InterferenceMode::FixedInr { inr_db } => db_to_linear(inr_db),
        InterferenceMode::FixedSir { sir_db } => source_power / db_to_linear(sir_db),
    };
    if !interferer_power.is_finite() {
        return Err(Error::InvalidMode(
            "interference mode yields non-finite interferer power".to_string(),
        ));
    }
    let config = SystemConfig {
        relays: point.relays,
        source_power,
        interferer_power,
        first_hop_var: 1.0,
        second_hop_var: 1.0,
        interference_var: 1.0,
        relay_noise: 1.0,
        dest_noise: 1.0,
        harvest_efficiency: point.eta,
        split_ratio: point.theta,
        snr_threshold: db_to_linear(point.gamma_th_db),
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn base_config() -> SystemConfig {
        SystemConfig {
            relays: 2,
            source_power: 10.0,
            interferer_power: 1.0,
            first_hop_var: 1.0,
            second_hop_var: 1.0,
            interference_var: 1.0,
            relay_noise: 1.0,
            dest_noise: 1.0,
            harvest_efficiency: 1.0,
            split_ratio: 0.5,
            snr_threshold: 1.0,
        }
    }

    #[test]
    fn mean_snr_direct_substitution() {
        let config = SystemConfig {
            interferer_power: 0.0,
            ..base_config()
        };
        let rates = derive_rates(&config).unwrap();
        assert_eq!(rates.mean_snr, 5.0);
        assert!(rates.interference_free);
    }

    #[test]
    fn harvest_gain_direct_substitution() {
        let config = SystemConfig {
            second_hop_var: 2.0,
            ..base_config()
        };
        let rates = derive_rates(&config).unwrap();
        // theta = 0.5, eta = 1: theta/(1-theta) = 1, times the variance.
        assert!((rates.mean_harvest_gain - 2.0).abs() < 1e-15);
    }

    #[test]
    fn inv_scale_gap_definition() {
        let rates = DerivedRates {
            mean_snr: 10.0,
            mean_inr: 2.0,
            mean_harvest_gain: 1.0,
            interference_free: false,
        };
        assert!((rates.inv_scale_gap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn inv_scale_gap_cross_identity() {
        // gap * snr * inr == snr - inr whenever both rates are positive.
        for (snr, inr) in [(10.0, 2.0), (3.5, 7.25), (0.4, 0.4), (60.0, 0.01)] {
            let rates = DerivedRates {
                mean_snr: snr,
                mean_inr: inr,
                mean_harvest_gain: 1.0,
                interference_free: false,
            };
            let lhs = rates.inv_scale_gap() * snr * inr;
            let rhs = snr - inr;
            assert!(
                (lhs - rhs).abs() <= 8.0 * f64::EPSILON * snr.max(inr),
                "snr {snr} inr {inr}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn theta_one_is_rejected() {
        let config = SystemConfig {
            split_ratio: 1.0,
            ..base_config()
        };
        assert!(matches!(
            derive_rates(&config),
            Err(Error::DegenerateTheta { .. })
        ));
    }

    #[test]
    fn theta_zero_is_accepted_with_zero_gain() {
        let config = SystemConfig {
            split_ratio: 0.0,
            ..base_config()
        };
        let rates = derive_rates(&config).unwrap();
        assert_eq!(rates.mean_harvest_gain, 0.0);
        assert_eq!(rates.mean_snr, 10.0);
    }

    #[test]
    fn operating_point_no_interference() {
        let point = OperatingPoint {
            relays: 2,
            snr1_db: 20.0,
            mode: InterferenceMode::NoInterference,
            theta: 0.6,
            eta: 1.0,
            gamma_th_db: 5.0,
        };
        let config = config_from_operating_point(&point).unwrap();
        assert!((config.source_power - 100.0).abs() < 1e-12);
        assert_eq!(config.interferer_power, 0.0);
        assert!((config.snr_threshold - 3.162_277_660_168_379_5).abs() < 1e-12);
    }

    #[test]
    fn operating_point_fixed_inr() {
        let point = OperatingPoint {
            relays: 2,
            snr1_db: 20.0,
            mode: InterferenceMode::FixedInr { inr_db: 10.0 },
            theta: 0.6,
            eta: 1.0,
            gamma_th_db: 5.0,
        };
        let config = config_from_operating_point(&point).unwrap();
        assert!((config.interferer_power * config.interference_var - 10.0).abs() < 1e-12);
    }

    #[test]
    fn operating_point_fixed_sir() {
        let point = OperatingPoint {
            relays: 2,
            snr1_db: 20.0,
            mode: InterferenceMode::FixedSir { sir_db: 20.0 },
            theta: 0.6,
            eta: 1.0,
            gamma_th_db: 5.0,
        };
        let config = config_from_operating_point(&point).unwrap();
        assert!((config.interferer_power * config.interference_var - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operating_point_round_trip() {
        // derive_rates undone by the (1 - theta) factor reproduces the
        // requested SNR / INR / SIR exactly.
        let point = OperatingPoint {
            relays: 3,
            snr1_db: 17.0,
            mode: InterferenceMode::FixedSir { sir_db: 11.0 },
            theta: 0.35,
            eta: 0.8,
            gamma_th_db: 5.0,
        };
        let config = config_from_operating_point(&point).unwrap();
        let rates = derive_rates(&config).unwrap();
        let kept = 1.0 - point.theta;
        let close = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * b.abs();
        assert!(close(rates.mean_snr / kept, db_to_linear(17.0)));
        let sir = (rates.mean_snr / kept) / (rates.mean_inr / kept);
        assert!(close(sir, db_to_linear(11.0)));
    }

    #[test]
    fn invalid_config_is_named() {
        let config = SystemConfig {
            relay_noise: 0.0,
            ..base_config()
        };
        match derive_rates(&config) {
            Err(Error::InvalidConfig(msg)) => assert!(msg.contains("relay_noise")),
            other => panic!("expected InvalidConfig, got {other:?}"),
        }
    }

    proptest! {
        // Scaling all powers and noise variances together leaves the rates
        // unchanged up to floating-point rounding.
        #[test]
        fn scaling_invariance(scale in 1e-3f64..1e3, theta in 0.05f64..0.95) {
            let base = SystemConfig { split_ratio: theta, ..base_config() };
            let scaled = SystemConfig {
                source_power: base.source_power * scale,
                interferer_power: base.interferer_power * scale,
                relay_noise: base.relay_noise * scale,
                dest_noise: base.dest_noise * scale,
                ..base
            };
            let r0 = derive_rates(&base).unwrap();
            let r1 = derive_rates(&scaled).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs());
            prop_assert!(close(r0.mean_snr, r1.mean_snr));
            prop_assert!(close(r0.mean_inr, r1.mean_inr));
            prop_assert!(close(r0.mean_harvest_gain, r1.mean_harvest_gain));
        }
    }
}
