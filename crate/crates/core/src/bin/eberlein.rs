use std::process::ExitCode;

use clap::Parser;
use eberlein::cli::{run_command, CliArgs, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_from(CliArgs::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (code, outcome) = run_command(&config);
    match outcome {
        Ok(o) => {
            let r = &o.result;
            println!(
                "{} after {} sweeps: off(B) = {:.3e}, blocks = {:?}",
                if r.converged { "converged" } else { "not converged" },
                r.sweeps,
                r.final_off_b,
                o.blocks.sizes()
            );
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
