//! Test generators, the unitary maps they induce, and a probe for the order
//! at which a measure responds to a small transformation.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::entropy::{self, DensityMatrix};
use crate::error::{Error, Result};
use crate::fock::{FockOp, FockSpace, OccupationPattern, QuantumState, Spin, Statistics, C64};
use crate::linalg;
use crate::measures;

/// Hermiticity tolerance of a generator.
pub const OPERATOR_TOLERANCE: f64 = 1e-12;

/// Changes at or below this size are treated as no response.
pub const INVARIANCE_FLOOR: f64 = 1e-14;

/// Largest accepted gap between the fitted log-slope and its rounded order.
pub const SLOPE_TOLERANCE: f64 = 0.2;

pub const DEFAULT_EPSILON_GRID: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// An operator restricted to the patterns of chosen particle-number sectors.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    basis: Vec<OccupationPattern>,
    space: Arc<FockSpace>,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Matrix of `op` over every pattern whose total lies in `totals`.
    ///
    /// Fails if `op` maps a basis pattern outside the basis.
    pub fn from_op(space: &Arc<FockSpace>, op: &FockOp, totals: &[u32]) -> Result<Self> {
        let max = totals.iter().copied().max().unwrap_or(0);
        let all: Vec<usize> = (0..space.len()).collect();
        let basis: Vec<OccupationPattern> = space
            .enumerate_patterns(&all, max)
            .into_iter()
            .filter(|p| totals.contains(&p.total()))
            .collect();
        let n = basis.len();
        let mut matrix = DMatrix::zeros(n, n);
        for (j, p) in basis.iter().enumerate() {
            let image = op.apply(&QuantumState::basis(space, p.clone())?)?;
            for (q, &a) in image.iter() {
                let i = basis.iter().position(|b| b == q).ok_or(Error::OutsideOperatorBasis)?;
                matrix[(i, j)] += a;
            }
        }
        let hermitian = linalg::hermitian_defect(&matrix) <= OPERATOR_TOLERANCE;
        Ok(OperatorMatrix { matrix, basis, space: space.clone(), hermitian })
    }

    /// Matrix of `op` over the sectors occupied by `state`.
    pub fn for_state(op: &FockOp, state: &QuantumState) -> Result<Self> {
        let mut totals = state.particle_numbers();
        totals.dedup();
        Self::from_op(state.space(), op, &totals)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn basis(&self) -> &[OccupationPattern] {
        &self.basis
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        let v = state.to_vector(&self.basis)?;
        QuantumState::from_vector(&self.space, &self.basis, &(&self.matrix * v))
    }

    pub fn expectation(&self, state: &QuantumState) -> Result<C64> {
        state.inner(&self.apply(state)?)
    }

    fn require_hermitian(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::NotHermitian(linalg::hermitian_defect(&self.matrix)));
        }
        Ok(())
    }
}

fn site_spin_modes(space: &FockSpace, site: &str) -> Result<(usize, usize)> {
    let up = space.mode(site, Spin::Up)?;
    let down = space.mode(site, Spin::Down)?;
    Ok((up, down))
}

/// `U n_{s↑} n_{s↓}` on `site`.
pub fn hubbard_onsite(space: &FockSpace, site: &str, u: f64) -> Result<FockOp> {
    let (up, down) = site_spin_modes(space, site)?;
    Ok(FockOp::number(up) * FockOp::number(down) * u)
}

/// Hopping from B↓ to A↑ and back, `t (c†_{A↑} c_{B↓} + c†_{B↓} c_{A↑})`.
///
/// Only defined on the four-mode fermionic two-site system.
pub fn spinflip_hopping(space: &FockSpace, t: f64) -> Result<FockOp> {
    if space.statistics() != Statistics::Fermion || space.len() != 4 {
        return Err(Error::MismatchedSystems);
    }
    let (a_up, _) = site_spin_modes(space, "A")?;
    let (_, b_down) = site_spin_modes(space, "B")?;
    let forward = FockOp::create(a_up) * FockOp::annihilate(b_down);
    Ok((forward.clone() + forward.dagger()) * t)
}

/// `exp(−iεH)|ψ⟩`.
pub fn evolve_exact(state: &QuantumState, h: &OperatorMatrix, epsilon: f64) -> Result<QuantumState> {
    h.require_hermitian()?;
    let v = state.to_vector(&h.basis)?;
    let out = linalg::expm_hermitian_apply(&h.matrix, epsilon, &v)?;
    QuantumState::from_vector(&h.space, &h.basis, &out)
}

/// `(1 − iεH)|ψ⟩`, renormalized.
pub fn first_order_map(state: &QuantumState, h: &OperatorMatrix, epsilon: f64) -> Result<QuantumState> {
    first_order_unnormalized(state, h, epsilon)?.normalize()
}

/// `(1 − iεH)|ψ⟩` before renormalization.
pub fn first_order_unnormalized(
    state: &QuantumState,
    h: &OperatorMatrix,
    epsilon: f64,
) -> Result<QuantumState> {
    h.require_hermitian()?;
    let hv = h.apply(state)?;
    state.sub(&hv.scale(C64::new(0.0, epsilon)))
}

/// Quantity whose response is probed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Site entropy of the listed modes.
    SiteEntropy(Vec<usize>),
    SchliemannEta,
    /// Frobenius distance of the reduced matrix of the listed modes from its
    /// unperturbed value.
    ReducedMatrixChange(Vec<usize>),
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::SiteEntropy(m) => write!(f, "site-entropy{m:?}"),
            Measure::SchliemannEta => write!(f, "eta"),
            Measure::ReducedMatrixChange(m) => write!(f, "reduced-matrix-change{m:?}"),
        }
    }
}

/// Which map realizes `ψ → ψ(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evolution {
    Exact,
    FirstOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseOrder {
    /// No change above [`INVARIANCE_FLOOR`] anywhere on the grid.
    Invariant,
    Order(u32),
}

impl ResponseOrder {
    /// Invariance counts as an infinitely high order.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            ResponseOrder::Invariant => true,
            ResponseOrder::Order(o) => o >= k,
        }
    }
}

impl fmt::Display for ResponseOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseOrder::Invariant => write!(f, "invariant"),
            ResponseOrder::Order(o) => write!(f, "{o}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResponsePoint {
    pub epsilon: f64,
    pub value: f64,
    pub change: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResponseFit {
    pub order: ResponseOrder,
    /// `c` in `|m(ε) − m(0)| ≈ c ε^order`, zero when invariant.
    pub coefficient: f64,
    /// Least-squares log-log slope; absent when invariant.
    pub slope: Option<f64>,
    pub baseline: f64,
    pub points: Vec<ResponsePoint>,
    pub diagnostic: Option<String>,
}

fn measure_value(
    measure: &Measure,
    state: &QuantumState,
    reference: Option<&DensityMatrix>,
) -> Result<(f64, Option<DensityMatrix>)> {
    match measure {
        Measure::SiteEntropy(keep) => {
            let rho = entropy::reduce_state(state, keep)?;
            Ok((entropy::von_neumann_entropy(&rho)?, None))
        }
        Measure::SchliemannEta => {
            if state.statistics() != Statistics::Fermion {
                return Err(Error::UndefinedMeasure("η is defined for fermions only".into()));
            }
            Ok((measures::state_eta(state)?, None))
        }
        Measure::ReducedMatrixChange(keep) => {
            let rho = entropy::reduce_state(state, keep)?;
            match reference {
                None => Ok((0.0, Some(rho))),
                Some(r) => {
                    let a = rho.in_basis(r.basis())?;
                    Ok((linalg::frobenius_distance(&a, r.matrix()), None))
                }
            }
        }
    }
}

/// Fit `|m(ε) − m(0)|` against `ε` on a log-log grid.
pub fn response_order(
    measure: &Measure,
    h: &OperatorMatrix,
    state: &QuantumState,
    grid: &[f64],
    evolution: Evolution,
) -> Result<ResponseFit> {
    if grid.len() < 3 || grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::OutOfRange("ε grid needs at least three positive points".into()));
    }
    let (baseline, reference) = measure_value(measure, state, None)?;
    let mut points = Vec::with_capacity(grid.len());
    for &eps in grid {
        let evolved = match evolution {
            Evolution::Exact => evolve_exact(state, h, eps)?,
            Evolution::FirstOrder => first_order_map(state, h, eps)?,
        };
        let (value, _) = measure_value(measure, &evolved, reference.as_ref())?;
        let change = match measure {
            Measure::ReducedMatrixChange(_) => value,
            _ => (value - baseline).abs(),
        };
        points.push(ResponsePoint { epsilon: eps, value, change });
    }

    if points.iter().all(|p| p.change <= INVARIANCE_FLOOR) {
        return Ok(ResponseFit {
            order: ResponseOrder::Invariant,
            coefficient: 0.0,
            slope: None,
            baseline,
            points,
            diagnostic: None,
        });
    }
    if points.iter().any(|p| p.change <= INVARIANCE_FLOOR) {
        let diag = "change vanishes on part of the grid; fit uses the remaining points".to_string();
        return fit(baseline, points, Some(diag));
    }
    fit(baseline, points, None)
}

fn fit(baseline: f64, points: Vec<ResponsePoint>, mut diagnostic: Option<String>) -> Result<ResponseFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.change > INVARIANCE_FLOOR)
        .map(|p| (p.epsilon.ln(), p.change.ln()))
        .collect();
    if used.len() < 2 {
        return Err(Error::OutOfRange("too few grid points with a measurable change".into()));
    }
    let n = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
    let my = used.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let order = slope.round().max(0.0) as u32;
    let coefficient = (used.iter().map(|p| p.1 - order as f64 * p.0).sum::<f64>() / n).exp();
    if (slope - order as f64).abs() > SLOPE_TOLERANCE {
        diagnostic = Some(format!("log-slope {slope:.3} is far from order {order}"));
    }
    Ok(ResponseFit {
        order: ResponseOrder::Order(order),
        coefficient,
        slope: Some(slope),
        baseline,
        points,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn molecular() -> QuantumState {
        let space = FockSpace::two_site(Statistics::Fermion);
        ((FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3)))
            .build(&space)
            .unwrap()
    }

    fn pat(v: &[u32]) -> OccupationPattern {
        OccupationPattern::new(v.to_vec())
    }

    fn two_particle(op: &FockOp) -> OperatorMatrix {
        OperatorMatrix::from_op(&FockSpace::two_site(Statistics::Fermion), op, &[2]).unwrap()
    }

    #[test]
    fn hubbard_values() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let h = two_particle(&hubbard_onsite(&space, "A", 3.0).unwrap());
        assert_eq!(h.basis().len(), 6);
        assert!((h.expectation(&molecular()).unwrap() - C64::new(0.75, 0.0)).norm() < 1e-15);
        let s = QuantumState::basis(&space, pat(&[0, 0, 1, 1])).unwrap();
        assert_eq!(h.expectation(&s).unwrap(), C64::new(0.0, 0.0));
        let s = QuantumState::basis(&space, pat(&[1, 1, 0, 0])).unwrap();
        assert_eq!(h.expectation(&s).unwrap(), C64::new(3.0, 0.0));
    }

    #[test]
    fn hopping_action_on_molecular_state() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let t = 1.5;
        let op = spinflip_hopping(&space, t).unwrap();
        let out = op.apply(&molecular()).unwrap();
        // −(t/2) c†A↑ c†B↑|0⟩ + (t/2) c†B↓ c†A↓|0⟩
        let expect = (FockOp::create(0) * FockOp::create(2) * (-t / 2.0)
            + FockOp::create(3) * FockOp::create(1) * (t / 2.0))
            .apply(&QuantumState::vacuum(&space))
            .unwrap();
        assert!(out.sub(&expect).unwrap().norm() < 1e-15);
        assert!(two_particle(&op).expectation(&molecular()).unwrap().norm() < 1e-15);
        let vac = QuantumState::vacuum(&space);
        assert!(op.apply(&op.apply(&vac).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn hopping_needs_four_fermion_modes() {
        let space = FockSpace::two_site(Statistics::Boson);
        assert_eq!(spinflip_hopping(&space, 1.0).unwrap_err(), Error::MismatchedSystems);
    }

    #[test]
    fn exact_evolution_basics() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let h = two_particle(&hubbard_onsite(&space, "A", 2.0).unwrap());
        let psi = molecular();
        let same = evolve_exact(&psi, &h, 0.0).unwrap();
        assert!(same.sub(&psi).unwrap().norm() < 1e-15);
        let out = evolve_exact(&psi, &h, 0.3).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
        let phase = out.amplitude(&pat(&[1, 1, 0, 0])) / psi.amplitude(&pat(&[1, 1, 0, 0]));
        assert!((phase - C64::new(0.0, -0.6).exp()).norm() < 1e-12);
    }

    #[test]
    fn first_order_matches_known_entry_and_taylor_bound() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let u = 1.3;
        let h = two_particle(&hubbard_onsite(&space, "A", u).unwrap());
        let psi = molecular();
        let eps = 1e-3;
        let raw = first_order_unnormalized(&psi, &h, eps).unwrap();
        let ratio = raw.amplitude(&pat(&[1, 1, 0, 0])) / psi.amplitude(&pat(&[1, 1, 0, 0]));
        assert!((ratio - C64::new(1.0, -eps * u)).norm() < 1e-15);
        for eps in [1e-2, 1e-3] {
            let a = first_order_map(&psi, &h, eps).unwrap();
            let b = evolve_exact(&psi, &h, eps).unwrap();
            assert!(a.sub(&b).unwrap().norm() <= 2.0 * u * u * eps * eps);
        }
    }

    #[test]
    fn non_hermitian_generator_rejected() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let op = FockOp::create(0) * FockOp::annihilate(3);
        let h = two_particle(&op);
        assert!(!h.is_hermitian());
        assert!(matches!(evolve_exact(&molecular(), &h, 0.1), Err(Error::NotHermitian(_))));
        assert!(matches!(first_order_map(&molecular(), &h, 0.1), Err(Error::NotHermitian(_))));
        let _ = space;
    }

    #[test]
    fn eta_under_hubbard_is_linear() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let h = two_particle(&hubbard_onsite(&space, "A", 1.0).unwrap());
        let fit = response_order(&Measure::SchliemannEta, &h, &molecular(), &DEFAULT_EPSILON_GRID, Evolution::Exact)
            .unwrap();
        assert_eq!(fit.order, ResponseOrder::Order(1));
        // η(ε) = |sin(εU/2)| under the exact map
        assert!((fit.coefficient - 0.5).abs() < 1e-4);
        assert!(fit.diagnostic.is_none());
    }

    #[test]
    fn grid_too_short() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let h = two_particle(&hubbard_onsite(&space, "A", 1.0).unwrap());
        let r = response_order(&Measure::SchliemannEta, &h, &molecular(), &[1e-2, 1e-3], Evolution::Exact);
        assert!(matches!(r, Err(Error::OutOfRange(_))));
    }
}
