//! Executes a resolved run spec and writes its outputs.

use std::io::Write;
use std::path::PathBuf;

use swipt_outage::analytic::outage_for_config;
use swipt_outage::experiments::{
    estimate_diversity_order, find_optimal_theta, sweep_snr, sweep_theta, validate,
};
use swipt_outage::montecarlo::estimate_outage;
use swipt_outage::{config_from_operating_point, QuadratureSpec, SweepResult, SystemConfig};

use crate::args::{Command, RunSpec};
use crate::csv::{point_csv, sweep_csv};
use crate::error::{CliError, Result};
use crate::svg::sweep_chart;

fn write_text(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn maybe_plot(sweep: &SweepResult, spec: &RunSpec) -> Result<()> {
    let Some(path) = &spec.plot else {
        return Ok(());
    };
    let chart = sweep_chart(sweep, spec.log_y)?;
    if chart.degenerate_range {
        eprintln!("warning: all y values identical; chart axis padded");
    }
    std::fs::write(path, chart.svg)?;
    Ok(())
}

fn reject_plot(spec: &RunSpec) -> Result<()> {
    if spec.plot.is_some() {
        return Err(CliError::Validation(
            "--plot needs a sweep command (sweep-theta, sweep-snr, diversity)".into(),
        ));
    }
    Ok(())
}

pub fn run(spec: &RunSpec) -> Result<()> {
    let quad = QuadratureSpec::default();
    match &spec.command {
        Command::Outage { point } => {
            reject_plot(spec)?;
            let config = config_from_operating_point(point)?;
            let analytic = outage_for_config(&config, quad)?;
            let estimate = spec
                .mc
                .map(|mc| estimate_outage(&config, mc.n_trials, mc.seed));
            eprintln!(
                "outage = {:.6e} (first-hop fail {:.6e}, joint {:.6e}, branch {:?})",
                analytic.outage, analytic.first_hop_fail, analytic.joint_below, analytic.branch
            );
            write_text(
                &point_csv(point.theta, analytic.outage, estimate.as_ref()),
                spec.output.as_ref(),
            )
        }
        Command::SweepTheta { template, grid } => {
            let config = config_from_operating_point(template)?;
            let sweep = sweep_theta(&config, grid, spec.mc, quad)?;
            maybe_plot(&sweep, spec)?;
            write_text(&sweep_csv(&sweep), spec.output.as_ref())
        }
        Command::SweepSnr { base, grid_db } => {
            let sweep = sweep_snr(base, grid_db, spec.mc, quad)?;
            maybe_plot(&sweep, spec)?;
            write_text(&sweep_csv(&sweep), spec.output.as_ref())
        }
        Command::OptimalTheta { template, tol } => {
            reject_plot(spec)?;
            let config = config_from_operating_point(template)?;
            let best = find_optimal_theta(&config, *tol, quad)?;
            if !best.unimodal {
                eprintln!(
                    "warning: coarse scan saw more than one separated minimum; \
                     reporting the best found"
                );
            }
            eprintln!(
                "optimal theta = {:.6} with outage {:.6e}",
                best.theta, best.outage
            );
            write_text(
                &point_csv(best.theta, best.outage, None),
                spec.output.as_ref(),
            )
        }
        Command::Diversity {
            base,
            grid_db,
            snr_lo_db,
            snr_hi_db,
        } => {
            let sweep = sweep_snr(base, grid_db, None, quad)?;
            let estimate = estimate_diversity_order(&sweep, *snr_lo_db, *snr_hi_db)?;
            maybe_plot(&sweep, spec)?;
            if let Some(path) = &spec.output {
                std::fs::write(path, sweep_csv(&sweep))?;
            }
            println!(
                "diversity slope over [{}, {}] dB: {:.4} (decades per 10 dB, {} relays)",
                estimate.snr_lo_db, estimate.snr_hi_db, estimate.slope, base.relays
            );
            Ok(())
        }
        Command::Validate {
            point,
            trials,
            seed,
        } => {
            reject_plot(spec)?;
            let config = config_from_operating_point(point)?;
            let report = validate(&config, *trials, *seed, quad)?;
            print_validation_report(&config, &report);
            write_text(
                &point_csv(point.theta, report.analytic.outage, Some(&report.estimate)),
                spec.output.as_ref(),
            )
        }
    }
}

fn print_validation_report(config: &SystemConfig, report: &swipt_outage::ValidationReport) {
    let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
    eprintln!(
        "outage: analytic {:.6e} vs simulated {:.6e} +- {:.2e} over {} trials [{}]",
        report.analytic.outage,
        report.estimate.p_hat,
        report.estimate.stderr,
        report.estimate.n_trials,
        verdict(report.outage_pass),
    );
    eprintln!(
        "first-hop decode fraction: expected {:.6e}, observed {:.6e} [{}]",
        report.first_hop.expected,
        report.first_hop.observed,
        verdict(report.first_hop.pass),
    );
    eprintln!(
        "decoding-set sizes ({} relays): chi2 {:.3} on {} dof, p = {:.3e} [{}]",
        config.relays,
        report.set_size.chi2,
        report.set_size.dof,
        report.set_size.p_value,
        verdict(report.set_size.pass),
    );
    eprintln!("validation: {}", verdict(report.pass));
}
