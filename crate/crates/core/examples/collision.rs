//! Runs one desk-scale collision and prints ε_L of every spin configuration.
//!
//! cargo run --release -p twofermion --example collision -- 10

use std::time::Instant;

use twofermion::scattering::{gaussian_packet, ho_ground_state, product_initial, propagate};
use twofermion::spin::{spatial_blocks, spin_entropies, SpinConfig};
use twofermion::units::make_gaas_units;
use twofermion::ScatteringConfig;

fn main() -> twofermion::Result<()> {
    let ek: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10.0);
    let cfg = ScatteringConfig::desk_default(make_gaas_units(), 2.0, ek)?;
    let psi = product_initial(&gaussian_packet(&cfg)?, &ho_ground_state(&cfg)?)?;
    let start = Instant::now();
    println!("t_fs same_spin opposite_nonfactorizable singlet triplet");
    propagate(psi, &cfg, |t, psi| {
        let blocks = spatial_blocks(psi)?;
        let le: Vec<String> = SpinConfig::ALL
            .iter()
            .map(|&s| spin_entropies(&blocks, s).map(|v| format!("{v:.6}")))
            .collect::<Result<_, _>>()?;
        println!("{t:7.1} {}  [{:.1} s]", le.join(" "), start.elapsed().as_secs_f64());
        Ok(())
    })?;
    Ok(())
}
