use clap::Parser;

use swipt_outage_cli::{resolve, runner, Cli};

/// Environment override for the Monte Carlo worker count; unset or 0 means
/// all available cores.
const WORKERS_ENV: &str = "SWIPT_OUTAGE_WORKERS";

fn configure_workers() {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return;
    };
    match raw.parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(err) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                eprintln!("warning: could not configure {n} workers: {err}");
            }
        }
        Err(_) => eprintln!("warning: ignoring non-numeric {WORKERS_ENV}={raw}"),
    }
}

fn main() {
    configure_workers();
    let cli = Cli::parse();
    let spec = match resolve(cli) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    };
    if let Err(err) = runner::run(&spec) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
