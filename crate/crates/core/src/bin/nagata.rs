use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nagata_core::dsl::{parse, run, RunOptions};

/// Runs a check script and reports one verdict per check.
#[derive(Debug, Parser)]
#[command(name = "nagata", version)]
struct Cli {
    /// Script file; `-` reads standard input.
    script: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the script's precision.
    #[arg(long)]
    precision: Option<usize>,
    /// Exit with status 2 when a verdict is indeterminate.
    #[arg(long)]
    strict: bool,
    /// Largest exponent m used for quantifiers over powers of c.
    #[arg(long)]
    max_exponent: Option<u32>,
    /// Degree bound on the formal variables in sampled elements.
    #[arg(long)]
    y_degree: Option<u32>,
    /// Leave elapsed times out of the report.
    #[arg(long)]
    no_timing: bool,
    /// Print the canonical form of the script and exit.
    #[arg(long)]
    print: bool,
}

fn read_script(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_script(&cli.script) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("nagata: cannot read {}: {e}", cli.script.display());
            return ExitCode::from(1);
        }
    };
    let script = match parse(&text) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("nagata: {}: {d}", cli.script.display());
            return ExitCode::from(1);
        }
    };
    if cli.print {
        print!("{script}");
        return ExitCode::SUCCESS;
    }
    let options = RunOptions {
        seed: cli.seed,
        precision: cli.precision,
        max_exponent: cli.max_exponent,
        y_degree: cli.y_degree,
        timing: !cli.no_timing,
    };
    let report = run(&script, &options);
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    let indeterminate = report.totals.indeterminate;
    if indeterminate > 0 && !cli.strict {
        eprintln!("nagata: warning: {indeterminate} indeterminate verdict(s); raise --precision or use --strict");
    }
    ExitCode::from(report.exit_code(cli.strict) as u8)
}
