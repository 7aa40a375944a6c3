//! Exact closed-form evaluation of the outage probability chain: first-hop
//! success, the conditional density of the relayed power sum, the joint
//! second-hop CDF, and the total outage over opportunistic selection.

use crate::error::{Error, Result};
use crate::model::{derive_rates, DerivedRates, SystemConfig};
use crate::numerics::{gen_inc_gamma1_scaled, QuadratureSpec};

/// Relative rate gap below which the general closed form is evaluated via a
/// symmetric perturbation of the interference rate (its prefactor is
/// singular at equal rates while the underlying probability is continuous).
const EQUAL_RATE_GAP: f64 = 1e-9;
/// Relative size of that perturbation. The probability is linear in the gap
/// to first order, so averaging the two nudges leaves an O(1e-12) error.
const EQUAL_RATE_NUDGE: f64 = 1e-6;

/// Which evaluation path produced an outage figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Distinct positive signal and interference rates.
    General,
    /// No interference power at the relays.
    InterferenceFree,
    /// Signal and interference rates equal to within `EQUAL_RATE_GAP`.
    DegenerateEqualRates,
    /// A splitting ratio of 0 or 1 starves one hop entirely.
    ForcedOutage,
}

impl Branch {
    pub fn classify(rates: &DerivedRates) -> Branch {
        if rates.mean_harvest_gain == 0.0 {
            return Branch::ForcedOutage;
        }
        if rates.interference_free {
            return Branch::InterferenceFree;
        }
        let gap = (rates.mean_snr - rates.mean_inr).abs() / rates.mean_snr.max(rates.mean_inr);
        if gap < EQUAL_RATE_GAP {
            Branch::DegenerateEqualRates
        } else {
            Branch::General
        }
    }
}

/// One evaluated outage point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutagePoint {
    /// Probability a given relay fails to decode the first hop.
    pub first_hop_fail: f64,
    /// Probability the indicator-gated destination SNR of a given relay
    /// falls below the threshold.
    pub joint_below: f64,
    /// Total outage probability over all relays and selection.
    pub outage: f64,
    pub branch: Branch,
}

fn nudged(rates: &DerivedRates, direction: f64) -> DerivedRates {
    DerivedRates {
        mean_inr: rates.mean_inr * (1.0 + direction * EQUAL_RATE_NUDGE),
        ..*rates
    }
}

/// Probability that one relay decodes the first hop:
/// `(1 + (mean_inr/mean_snr) th)^-1 exp(-th/mean_snr)`.
pub fn first_hop_success(rates: &DerivedRates, threshold: f64) -> f64 {
    let ratio = rates.mean_inr / rates.mean_snr;
    (-threshold / rates.mean_snr).exp() / (1.0 + ratio * threshold)
}

fn pdf_general(rates: &DerivedRates, threshold: f64, z: f64) -> f64 {
    let gap = rates.inv_scale_gap();
    // Both exponents are combined before exponentiation so that a huge gap
    // cannot produce inf * 0.
    let direct = (-z / rates.mean_snr).exp();
    let shifted = (-z / rates.mean_snr - gap * (z - threshold) / (1.0 + threshold)).exp();
    (direct - shifted) / (rates.mean_snr - rates.mean_inr)
}

/// Density of the harvested-power sum of one relay, gated on that relay
/// decoding. Zero at and below the threshold; the gated mass above it
/// integrates to `first_hop_success`.
pub fn conditional_pdf_z(rates: &DerivedRates, threshold: f64, z: f64) -> f64 {
    if z <= threshold {
        return 0.0;
    }
    match Branch::classify(rates) {
        Branch::ForcedOutage | Branch::InterferenceFree => {
            (-z / rates.mean_snr).exp() / rates.mean_snr
        }
        Branch::General => pdf_general(rates, threshold, z),
        Branch::DegenerateEqualRates => {
            0.5 * (pdf_general(&nudged(rates, 1.0), threshold, z)
                + pdf_general(&nudged(rates, -1.0), threshold, z))
        }
    }
}

fn joint_interference_free(
    rates: &DerivedRates,
    threshold: f64,
    quad: QuadratureSpec,
) -> Result<f64> {
    let x = threshold / rates.mean_snr;
    let b = threshold / (rates.mean_snr * rates.mean_harvest_gain);
    let scaled = gen_inc_gamma1_scaled(x, b, quad)?;
    Ok(1.0 - (-x).exp() * scaled)
}

fn joint_general(rates: &DerivedRates, threshold: f64, quad: QuadratureSpec) -> Result<f64> {
    let snr = rates.mean_snr;
    let inr = rates.mean_inr;
    let gain = rates.mean_harvest_gain;
    let decay = rates.joint_decay(threshold);

    // 1 - [snr G(1, th/snr; th/(snr gain)) - decay^-1 e^{gap th/(1+th)}
    //      G(1, decay th; decay th/gain)] / (snr - inr),
    // with e^{-th/snr} factored out of both Gamma terms: the unscaled second
    // term is exp(huge) * underflow once the interference rate gets small.
    let first = gen_inc_gamma1_scaled(threshold / snr, threshold / (snr * gain), quad)?;
    let second = gen_inc_gamma1_scaled(decay * threshold, decay * threshold / gain, quad)?;
    let common = (-threshold / snr).exp();
    Ok(1.0 - common * (snr * first - second / decay) / (snr - inr))
}

/// Probability that the indicator-gated destination SNR of one relay falls
/// below the threshold, `Pr{SNR_D * 1{decoded} < th}`.
pub fn joint_cdf_below(rates: &DerivedRates, threshold: f64, quad: QuadratureSpec) -> Result<f64> {
    let raw = match Branch::classify(rates) {
        Branch::ForcedOutage => 1.0,
        Branch::InterferenceFree => joint_interference_free(rates, threshold, quad)?,
        Branch::General => joint_general(rates, threshold, quad)?,
        Branch::DegenerateEqualRates => {
            0.5 * (joint_general(&nudged(rates, 1.0), threshold, quad)?
                + joint_general(&nudged(rates, -1.0), threshold, quad)?)
        }
    };
    Ok(raw.clamp(0.0, 1.0))
}

/// Total outage probability with `relays` relays and opportunistic
/// selection.
///
/// The total-probability expansion over the decoding-set size collapses to
/// `joint_below^relays` by the binomial theorem; that collapsed form is the
/// evaluation path. The literal expansion is kept in
/// [`outage_total_probability_sum`] for cross-validation.
pub fn outage_probability(
    rates: &DerivedRates,
    threshold: f64,
    relays: usize,
    quad: QuadratureSpec,
) -> Result<OutagePoint> {
    if relays < 1 {
        return Err(Error::InvalidConfig("relays must be >= 1".to_string()));
    }
    let first_hop_fail = (1.0 - first_hop_success(rates, threshold)).clamp(0.0, 1.0);
    let joint_below = joint_cdf_below(rates, threshold, quad)?;
    Ok(OutagePoint {
        first_hop_fail,
        joint_below,
        outage: joint_below.powi(relays as i32),
        branch: Branch::classify(rates),
    })
}

/// Evaluates the outage point for a full configuration, short-circuiting
/// the degenerate splitting ratios to certain outage.
pub fn outage_for_config(config: &SystemConfig, quad: QuadratureSpec) -> Result<OutagePoint> {
    config.validate()?;
    if config.split_ratio == 1.0 {
        // No power left for decoding: the decoding set is empty almost
        // surely and every probability collapses to one.
        return Ok(OutagePoint {
            first_hop_fail: 1.0,
            joint_below: 1.0,
            outage: 1.0,
            branch: Branch::ForcedOutage,
        });
    }
    let rates = derive_rates(config)?;
    outage_probability(&rates, config.snr_threshold, config.relays, quad)
}

/// The total-probability expansion over decoding-set sizes, exactly as the
/// theorem of total probability writes it:
/// `p^L sum_l C(L,l) (joint/p - 1)^l` with `p = first_hop_fail`.
///
/// Validation-suite path only; the production path uses the collapsed
/// identity `joint^L`, which this must match to relative 1e-10.
pub fn outage_total_probability_sum(first_hop_fail: f64, joint_below: f64, relays: usize) -> f64 {
    if first_hop_fail == 0.0 {
        return joint_below.powi(relays as i32);
    }
    let l_max = relays as u32;
    let mut sum = 0.0;
    let mut binom = 1.0f64;
    for l in 0..=l_max {
        if l > 0 {
            binom *= (l_max - l + 1) as f64 / l as f64;
        }
        sum += binom * (joint_below / first_hop_fail - 1.0).powi(l as i32);
    }
    first_hop_fail.powi(relays as i32) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_semi_infinite;
    use proptest::prelude::*;

    fn rates(snr: f64, inr: f64, gain: f64) -> DerivedRates {
        DerivedRates {
            mean_snr: snr,
            mean_inr: inr,
            mean_harvest_gain: gain,
            interference_free: inr == 0.0,
        }
    }

    #[test]
    fn first_hop_success_zero_threshold() {
        assert_eq!(first_hop_success(&rates(10.0, 1.0, 1.0), 0.0), 1.0);
    }

    #[test]
    fn first_hop_success_frozen_value() {
        // (1/1.1) exp(-0.1); Monte Carlo cross-check lives in tests/oracles.rs.
        let p = first_hop_success(&rates(10.0, 1.0, 1.0), 1.0);
        assert!((p - 0.822_579_470_941_781_4).abs() < 1e-15, "got {p}");
    }

    #[test]
    fn first_hop_success_interference_free() {
        let p = first_hop_success(&rates(10.0, 0.0, 1.0), 1.0);
        assert!((p - (-0.1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn pdf_vanishes_at_and_below_threshold() {
        let r = rates(10.0, 1.0, 1.0);
        assert_eq!(conditional_pdf_z(&r, 1.0, 1.0), 0.0);
        assert_eq!(conditional_pdf_z(&r, 1.0, 0.3), 0.0);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn pdf_frozen_value() {
        let r = rates(10.0, 1.0, 1.0);
        let f = conditional_pdf_z(&r, 1.0, 5.0);
        assert!((f - 0.056_252_423_998_869_963).abs() < 1e-15, "got {f}");
    }

    #[test]
    fn pdf_mass_equals_first_hop_success() {
        let quad = QuadratureSpec::default();
        let cases = [
            rates(10.0, 1.0, 5.0),
            rates(3.0, 7.0, 1.0),   // interference above signal
            rates(5.0, 0.0, 2.0),   // interference-free
            rates(5.0, 5.0, 2.0),   // equal rates
            rates(40.0, 4e-4, 1.5), // nearly interference-free
        ];
        for r in cases {
            let th = 1.7;
            let mass = integrate_semi_infinite(|z| conditional_pdf_z(&r, th, z), th, quad).unwrap();
            let expected = first_hop_success(&r, th);
            assert!(
                (mass - expected).abs() <= 1e-8 * expected,
                "rates {r:?}: mass {mass} vs {expected}"
            );
        }
    }

    #[test]
    fn joint_tiny_threshold_is_zero() {
        let quad = QuadratureSpec::default();
        let j = joint_cdf_below(&rates(10.0, 1.0, 5.0), 1e-12, quad).unwrap();
        assert!(j.abs() < 1e-9, "got {j}");
    }

    #[test]
    fn joint_frozen_value() {
        let quad = QuadratureSpec::default();
        let j = joint_cdf_below(&rates(10.0, 1.0, 5.0), 3.1623, quad).unwrap();
        assert!((j - 0.475_512_078_591_692_75).abs() < 1e-10, "got {j}");
    }

    #[test]
    fn joint_unbounded_second_hop_leaves_first_hop_atom() {
        let quad = QuadratureSpec::default();
        let r = rates(10.0, 1.0, 1e12);
        let j = joint_cdf_below(&r, 1.0, quad).unwrap();
        let atom = 1.0 - first_hop_success(&r, 1.0);
        assert!((j - atom).abs() <= 1e-6 * atom, "joint {j} vs atom {atom}");
    }

    #[test]
    fn joint_continuous_into_interference_free_limit() {
        let quad = QuadratureSpec::default();
        let th = 3.1623;
        let free = joint_cdf_below(&rates(40.0, 0.0, 1.5), th, quad).unwrap();
        let tiny = joint_cdf_below(&rates(40.0, 1e-6, 1.5), th, quad).unwrap();
        assert!((free - tiny).abs() < 1e-4, "free {free} vs tiny-inr {tiny}");
        // Small-but-not-degenerate interference keeps the general branch
        // finite even where the unscaled Gamma terms would underflow.
        let small = joint_cdf_below(&rates(0.1, 1e-3, 9.0), th, quad).unwrap();
        assert!(
            small.is_finite() && (0.0..=1.0).contains(&small),
            "got {small}"
        );
    }

    #[test]
    fn equal_rates_match_limit_density_route() {
        let quad = QuadratureSpec::default();
        let snr = 5.0;
        let gain = 2.0;
        let th = 3.162_277_660_168_379_5;
        let j = joint_cdf_below(&rates(snr, snr, gain), th, quad).unwrap();
        // Independent route: the equal-rate limit of the gated density is
        // exp(-z/snr) (z - th) / ((1 + th) snr^2).
        let limit_density = |z: f64| (-z / snr).exp() * (z - th) / ((1.0 + th) * snr * snr);
        let gated =
            integrate_semi_infinite(|z| (-th / (gain * z)).exp() * limit_density(z), th, quad)
                .unwrap();
        let expected = 1.0 - gated;
        assert!(
            (j - expected).abs() <= 1e-8,
            "perturbed {j} vs limit {expected}"
        );
        // A nearly-equal (but not equal) pair lands on the same value.
        let near = joint_cdf_below(&rates(snr, snr * (1.0 + 5e-10), gain), th, quad).unwrap();
        assert!((near - expected).abs() <= 1e-8, "near {near} vs {expected}");
    }

    #[test]
    fn outage_single_relay_equals_joint() {
        let quad = QuadratureSpec::default();
        let r = rates(10.0, 1.0, 5.0);
        let point = outage_probability(&r, 3.1623, 1, quad).unwrap();
        assert!((point.outage - point.joint_below).abs() <= 1e-10 * point.joint_below);
    }

    #[test]
    fn collapse_identity_against_literal_sum() {
        let quad = QuadratureSpec::default();
        for r in [
            rates(10.0, 1.0, 5.0),
            rates(4.0, 9.0, 0.7),
            rates(25.0, 0.0, 3.0),
        ] {
            let point = outage_probability(&r, 3.1623, 1, quad).unwrap();
            for relays in 1..=8 {
                let literal =
                    outage_total_probability_sum(point.first_hop_fail, point.joint_below, relays);
                let collapsed = point.joint_below.powi(relays as i32);
                assert!(
                    (literal - collapsed).abs() <= 1e-10 * collapsed.abs().max(1e-300),
                    "relays {relays}: {literal} vs {collapsed}"
                );
            }
        }
    }

    #[test]
    fn zero_harvest_gain_forces_outage() {
        let quad = QuadratureSpec::default();
        let point = outage_probability(&rates(10.0, 1.0, 0.0), 3.1623, 4, quad).unwrap();
        assert_eq!(point.outage, 1.0);
        assert_eq!(point.branch, Branch::ForcedOutage);
    }

    #[test]
    fn config_theta_extremes_force_outage() {
        let quad = QuadratureSpec::default();
        let mut config = crate::model::tests::base_config();
        for theta in [0.0, 1.0] {
            config.split_ratio = theta;
            let point = outage_for_config(&config, quad).unwrap();
            assert_eq!(point.outage, 1.0, "theta {theta}");
            assert_eq!(point.branch, Branch::ForcedOutage);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // first_hop_fail <= joint_below <= 1; the gap stays within the
        // first-hop success mass; outage is nonincreasing in relays.
        #[test]
        fn ordering_invariants(
            snr in 0.2f64..50.0,
            inr in 0.0f64..20.0,
            gain in 0.05f64..20.0,
            th in 0.1f64..8.0,
        ) {
            let quad = QuadratureSpec::default();
            let r = rates(snr, inr, gain);
            let point = outage_probability(&r, th, 1, quad).unwrap();
            prop_assert!(point.joint_below >= point.first_hop_fail - 1e-9);
            prop_assert!(point.joint_below <= 1.0);
            let conditional_fail = point.joint_below - point.first_hop_fail;
            prop_assert!(conditional_fail <= first_hop_success(&r, th) + 1e-9);
            let mut prev = 1.0f64;
            for relays in 1..=6usize {
                let p = outage_probability(&r, th, relays, quad).unwrap().outage;
                prop_assert!(p <= prev + 1e-12);
                prev = p;
            }
        }

        // More second-hop gain never hurts.
        #[test]
        fn joint_monotone_in_gain(
            snr in 0.2f64..50.0,
            inr in 0.0f64..20.0,
            gain in 0.05f64..10.0,
            extra in 0.1f64..10.0,
            th in 0.1f64..8.0,
        ) {
            let quad = QuadratureSpec::default();
            let lo = joint_cdf_below(&rates(snr, inr, gain + extra), th, quad).unwrap();
            let hi = joint_cdf_below(&rates(snr, inr, gain), th, quad).unwrap();
            prop_assert!(lo <= hi + 1e-9);
        }
    }
}
