//! How fast each measure moves when the molecular state is pushed by an
//! on-site interaction U or a spin-flip hopping t.
//!
//! Exact evolution exp(−iεH) and the truncated map (1 − iεH) are both shown;
//! they disagree for η under hopping, which a one-body unitary cannot change.

use fockent::dynamics::{
    hubbard_onsite, response_order, spinflip_hopping, Evolution, Measure, OperatorMatrix, DEFAULT_EPSILON_GRID,
};
use fockent::{FockOp, FockSpace, Statistics};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = FockSpace::two_site(Statistics::Fermion);
    let psi = ((FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3))).build(&space)?;
    let b = space.site_modes("B");

    let generators = [
        ("U (site A)", OperatorMatrix::for_state(&hubbard_onsite(&space, "A", 1.0)?, &psi)?),
        ("t (spin flip)", OperatorMatrix::for_state(&spinflip_hopping(&space, 1.0)?, &psi)?),
    ];
    let measures = [Measure::SiteEntropy(b.clone()), Measure::SchliemannEta, Measure::ReducedMatrixChange(b)];

    for evolution in [Evolution::Exact, Evolution::FirstOrder] {
        println!("{evolution:?}");
        for (name, h) in &generators {
            for m in &measures {
                let fit = response_order(m, h, &psi, &DEFAULT_EPSILON_GRID, evolution)?;
                let note = fit.diagnostic.as_deref().unwrap_or("");
                println!("  {name:<14} {:<26} order {:<10} coefficient {:.4} {note}", m.to_string(), fit.order.to_string(), fit.coefficient);
            }
        }
    }
    Ok(())
}
