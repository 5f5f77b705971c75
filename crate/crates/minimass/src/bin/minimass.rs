//! Thin scenario runner: `minimass --scenario <file> --out <dir>
//! [--seed N] [--threads N] [--debug-overlap]`.

use minimass::scenario::{run, RunOverrides};
use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let mut scenario: Option<PathBuf> = None;
    let mut out: Option<PathBuf> = None;
    let mut overrides = RunOverrides::default();
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--scenario" => scenario = args.next().map(PathBuf::from),
            "--out" => out = args.next().map(PathBuf::from),
            "--seed" => {
                overrides.seed = args.next().and_then(|v| v.parse().ok());
                if overrides.seed.is_none() {
                    eprintln!("error: --seed expects an integer");
                    return ExitCode::from(1);
                }
            }
            "--threads" => {
                overrides.threads = args.next().and_then(|v| v.parse().ok());
                if overrides.threads.is_none() {
                    eprintln!("error: --threads expects an integer");
                    return ExitCode::from(1);
                }
            }
            "--debug-overlap" => overrides.debug_overlap = true,
            "--help" | "-h" => {
                println!(
                    "usage: minimass --scenario <file> --out <dir> [--seed N] [--threads N] [--debug-overlap]"
                );
                return ExitCode::SUCCESS;
            }
            other => {
                eprintln!("error: unknown argument {other}");
                return ExitCode::from(1);
            }
        }
    }
    let (Some(scenario), Some(out)) = (scenario, out) else {
        eprintln!("usage: minimass --scenario <file> --out <dir> [--seed N] [--threads N] [--debug-overlap]");
        return ExitCode::from(1);
    };
    ExitCode::from(run(&scenario, &out, &overrides) as u8)
}
