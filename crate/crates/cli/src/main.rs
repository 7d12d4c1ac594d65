mod args;
mod commands;
mod config;
mod error;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("KNOT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("KNOT_THREADS ignored: {e}");
        }
    }
    let cli = Cli::parse();
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::Inspect(a) => commands::inspect(config, a),
        Command::Optimize(a) => commands::optimize(config, a),
        Command::Render(a) => commands::render(config, a),
        Command::Symmetrize(a) => commands::symmetrize(config, a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
