//! Teleporting two qubits through the molecular-orbital channel.
//!
//! The ideal virtual CNOT gives unit fidelity on every branch. Replacing it
//! with a coherent-state sink makes the gate approximate, and the fidelity
//! climbs towards one as the sink's mean occupation grows.

use fockent::teleport::{branch_analysis, coherent_sweep, run_protocol, Mode, TeleportConfig};
use fockent::{Statistics, C64};
use rand::SeedableRng;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let source = [C64::new(0.6, 0.0), C64::new(0.0, 0.48), C64::new(0.0, 0.0), C64::new(0.64, 0.0)];
    let config = TeleportConfig::default();

    for stats in [Statistics::Fermion, Statistics::Boson] {
        let a = branch_analysis(&source, stats, Mode::Ideal, &config)?;
        let worst = a.branches.iter().map(|b| b.fidelity).fold(f64::INFINITY, f64::min);
        println!("{stats}: {} branches, average fidelity {:.4}, worst {:.4}", a.branches.len(), a.average_fidelity, worst);
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let shot = run_protocol(&source, Statistics::Fermion, Mode::Ideal, &config, &mut rng)?;
    println!("one shot: bits {:?}, probability {:.4}, fidelity {:.4}", shot.bits, shot.probability, shot.fidelity);

    let bell = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
    for p in coherent_sweep(&bell, &[1.0, 4.0, 25.0, 100.0], &config)? {
        println!("|alpha|^2 = {:<5} cutoff {:<4} average fidelity {:.4}", p.mean_occupation, p.cutoff, p.average_fidelity);
    }
    Ok(())
}
