//! Drives a run from a configuration file, the same path the `conewave`
//! binary takes, and writes `series.csv` and `summary.txt`.
//!
//! `cargo run --example config_run -- [config] [out_dir]`

use std::path::PathBuf;

use anyhow::Context;
use cone_wave::harness::config::parse_config;
use cone_wave::harness::run::{run, write_run};

const SAMPLE: &str = "\
grid.ns = 24
grid.nx = 6
model.p = 3
model.m = 2
init.kind = nehari-scaled
init.amplitude = 1.2
scheme.t_max = 20
output.record_every = 5
";

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?,
        None => SAMPLE.to_string(),
    };
    let out = args.next().map_or_else(|| std::env::temp_dir().join("cone_wave_run"), PathBuf::from);
    let config = parse_config(&text)?;
    let outcome = run(&config)?;
    write_run(&outcome, &out)?;
    print!("{}", outcome.summary.render());
    println!("wrote {}", out.display());
    Ok(())
}
