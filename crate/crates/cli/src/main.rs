use std::process::ExitCode;

use clap::Parser;

use kahler_gw_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let code = run(&config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
