//! Bell states built from orbitals with overlap S.
//!
//! For fermions Ψ− loses its entanglement as η = (1 − S²)/(1 + S²), while Ψ+
//! stays maximally entangled but its norm before normalization shrinks as
//! √(1 − S²). For bosons the roles of Ψ+ and Ψ− swap in the norm.

use fockent::overlap::{eta_vs_overlap_curve, BellKind, BellOptions};
use fockent::Statistics;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).chain([0.99, 0.999, 0.9999]).collect();
    let fermions = BellOptions::default();
    for kind in BellKind::ALL {
        println!("{kind}");
        for p in eta_vs_overlap_curve(kind, &grid, &fermions)? {
            let eta = p.eta.map_or("-".to_string(), |e| format!("{e:.4}"));
            println!("  S = {:<7} eta {eta:>7}  norm {:.4}", p.overlap, p.prenormalization_norm);
        }
    }

    let bosons = BellOptions { statistics: Statistics::Boson, ..BellOptions::default() };
    println!("bosons, prenormalization norms at S = 0.9");
    for kind in BellKind::ALL {
        let p = eta_vs_overlap_curve(kind, &[0.9], &bosons)?[0];
        println!("  {kind:<10} {:.4}", p.prenormalization_norm);
    }

    // with a loose threshold the Ψ+ state counts as destroyed near S = 1
    let strict = BellOptions { destroyed_threshold: 0.05, ..BellOptions::default() };
    let tail = eta_vs_overlap_curve(BellKind::PsiPlus, &[0.99, 0.999], &strict)?;
    for p in tail {
        println!("psi-plus at S = {}: destroyed = {}", p.overlap, p.destroyed);
    }
    Ok(())
}
