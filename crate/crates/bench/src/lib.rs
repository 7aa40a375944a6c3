//! Shared fixtures for the benchmark targets.

use swipt_outage::{config_from_operating_point, InterferenceMode, OperatingPoint, SystemConfig};

/// Two-relay operating point with co-channel interference at 10 dB INR.
pub fn interference_config() -> SystemConfig {
    config_from_operating_point(&OperatingPoint {
        relays: 2,
        snr1_db: 20.0,
        mode: InterferenceMode::FixedInr { inr_db: 10.0 },
        theta: 0.6,
        eta: 1.0,
        gamma_th_db: 5.0,
    })
    .unwrap()
}

/// Three-relay interference-free operating point.
pub fn clean_config() -> SystemConfig {
    config_from_operating_point(&OperatingPoint {
        relays: 3,
        snr1_db: 20.0,
        mode: InterferenceMode::NoInterference,
        theta: 0.6,
        eta: 1.0,
        gamma_th_db: 5.0,
    })
    .unwrap()
}
