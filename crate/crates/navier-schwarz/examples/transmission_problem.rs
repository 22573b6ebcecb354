//! Heterogeneous benchmark: a stiff circular inclusion inside a softer
//! square, realistic steel-like parameters at 10 kHz, four subdomains from
//! coordinate bisection. Shows the classical/optimized contrast carrying
//! over to discontinuous media, at a reduced mesh so it runs in seconds.
//!
//!     cargo run --example transmission_problem

use navier_schwarz::{parse_config, run_transmission, ExperimentKind};

fn main() -> navier_schwarz::Result<()> {
    // Quarter-resolution version of the full experiment; media default to
    // the published inner/outer pair. Lower frequency keeps it resolved.
    let text = "n = 40\nomega = 31416\nmax_iters = 120\ngmres_max_iters = 120\n";
    let config = parse_config(text, ExperimentKind::Transmission)?;
    let out = std::env::temp_dir().join("navier-schwarz-transmission-example");
    let manifest = run_transmission(&config, &out)?;
    println!("\nartifacts in {}:", out.display());
    for name in &manifest.outputs {
        println!("  {name}");
    }
    Ok(())
}
