use clap::Parser;
use kahler_cli::{execute, Cli, RunConfig, EXIT_USAGE};

fn main() {
    let cli = Cli::parse();
    let command = cli.command.name();
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    match execute(&cfg) {
        Ok(outcome) => {
            eprintln!("{command}: {}", if outcome.pass { "PASS" } else { "FAIL" });
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
