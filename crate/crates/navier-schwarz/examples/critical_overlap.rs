//! Computes the critical overlap delta* for the zeroth-order Taylor
//! conditions: below it some evanescent band still diverges, at or above it
//! every mode contracts except the two cutoff wavenumbers. Also shows the
//! exact 1/omega scaling and the divergence-interval endpoint k*.
//!
//!     cargo run --example critical_overlap

use navier_schwarz::{delta_star, delta_star_alpha, find_kstar, max_rho_taylor0, ElasticMedium};

fn main() -> navier_schwarz::Result<()> {
    let medium = ElasticMedium::from_speeds(1.0, 1.0, 0.5)?;
    let alpha = delta_star_alpha(&medium)?;
    println!("medium (rho, cp, cs) = (1, 1, 0.5): alpha = {alpha:.12}");

    for omega in [1.0, 2.0, 5.0] {
        let ds = delta_star(&medium, omega)?;
        println!("\nomega = {omega}: delta* = {ds:.12}   (delta* x omega = {:.12})", ds * omega);
        for factor in [0.9, 1.0, 1.1] {
            let delta = factor * ds;
            let (k, rho) = max_rho_taylor0(&medium, omega, delta, 50.0 * omega)?;
            let kstar = find_kstar(&medium, omega, delta)?;
            let interval = match kstar {
                Some(ks) => format!("diverges on ({:.4}, {ks:.4})", omega / medium.cs),
                None => "no divergent band".to_string(),
            };
            println!(
                "  {factor:.1} delta*: sup_k rho = {rho:.9} at k = {k:.4}; {interval}"
            );
        }
    }
    Ok(())
}
