//! Two electrons in a bonding orbital spread over sites A and B.
//!
//! The state is a single Slater determinant, so η vanishes, while the site
//! entropy is two bits: the reduced state of B is maximally mixed over the
//! four occupations of its two modes.
//!
//! ```bash
//! cargo run --example molecular_orbital
//! ```

use fockent::entropy::{occupancy_sector_decompose, reduce_state};
use fockent::measures;
use fockent::{FockOp, FockSpace, Statistics};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = FockSpace::two_site(Statistics::Fermion);
    // (c†_{A↑} + c†_{B↑})(c†_{A↓} + c†_{B↓})|0⟩ / 2
    let bonding = (FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3));
    let psi = bonding.build(&space)?;
    println!("state: {psi}");

    let rho_b = reduce_state(&psi, &space.site_modes("B"))?;
    let report = occupancy_sector_decompose(&rho_b)?;
    println!("S(B) = {:.4} bits", report.total_entropy);
    for s in report.occupied_sectors() {
        println!("  sector {:<4} weight {:.4} eigenvalues {:?} contributes {:.4}", s.sector, s.weight, s.eigenvalues, s.entropy);
    }

    let w = measures::w_from_state(&psi)?;
    let slater = measures::slater_decompose(&w)?;
    println!("eta = {:.4}, Slater rank {}", measures::schliemann_eta(&w)?, slater.rank);

    // the closed form agrees with the partial trace
    let closed = measures::reduced_blocks_closed_form(&w)?;
    let diff = (closed.in_basis(rho_b.basis())? - rho_b.matrix()).norm();
    println!("closed-form rho_B deviation {diff:.2e}");
    Ok(())
}
