//! One particle per site behaves like a pair of qubits. Sweeping the
//! amplitudes of a|↑↑⟩ + b|↑↓⟩ + c|↓↑⟩ + d|↓↓⟩ shows the site entropy
//! matching the Wootters entanglement of formation.

use fockent::measures::{site_entropy, wootters_report, wootters_state};
use fockent::{Statistics, C64};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>8} {:>10} {:>10} {:>10}", "theta", "tangle", "E_W", "S(B)");
    for k in 0..=8 {
        let theta = std::f64::consts::FRAC_PI_4 * k as f64 / 8.0;
        let (a, d) = (C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0));
        let zero = C64::new(0.0, 0.0);
        let w = wootters_report(a, zero, zero, d)?;
        for stats in [Statistics::Fermion, Statistics::Boson] {
            let psi = wootters_state(stats, [a, zero, zero, d])?;
            let s = site_entropy(&psi, "B")?.total_entropy;
            assert!((s - w.entanglement).abs() < 1e-9, "{stats}: {s} vs {}", w.entanglement);
        }
        let psi = wootters_state(Statistics::Fermion, [a, zero, zero, d])?;
        let s = site_entropy(&psi, "B")?.total_entropy;
        println!("{theta:>8.4} {:>10.4} {:>10.4} {s:>10.4}", w.tangle, w.entanglement);
    }
    Ok(())
}
