#![allow(dead_code)]

use std::sync::Arc;

use fockent::measures::WMatrix;
use fockent::{FockOp, FockSpace, ModeLabel, OccupationPattern, QuantumState, Spin, Statistics, C64};
use nalgebra::{DMatrix, Matrix4};
use rand::Rng;

pub fn molecular() -> QuantumState {
    let space = FockSpace::two_site(Statistics::Fermion);
    ((FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3))).build(&space).unwrap()
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Normalized state with random amplitudes on every pattern of total `n`.
pub fn random_state_with_total<R: Rng + ?Sized>(rng: &mut R, space: &Arc<FockSpace>, n: u32) -> QuantumState {
    let modes: Vec<usize> = (0..space.len()).collect();
    let terms: Vec<(OccupationPattern, C64)> = space
        .enumerate_patterns(&modes, n)
        .into_iter()
        .filter(|p| p.total() == n)
        .map(|p| (p, complex(rng)))
        .collect();
    QuantumState::from_terms(space, terms).unwrap().normalize().unwrap()
}

/// Normalized state with random amplitudes on every pattern up to `max_total`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, space: &Arc<FockSpace>, max_total: u32) -> QuantumState {
    let modes: Vec<usize> = (0..space.len()).collect();
    let terms: Vec<(OccupationPattern, C64)> =
        space.enumerate_patterns(&modes, max_total).into_iter().map(|p| (p, complex(rng))).collect();
    QuantumState::from_terms(space, terms).unwrap().normalize().unwrap()
}

/// Haar-ish unitary from the QR factor of a random complex matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(n, n, |_, _| complex(rng));
    m.qr().q()
}

/// Block-diagonal unitary acting separately on sites A (modes 0, 1) and B.
pub fn local_unitary<R: Rng + ?Sized>(rng: &mut R) -> DMatrix<C64> {
    let (ua, ub) = (random_unitary(rng, 2), random_unitary(rng, 2));
    let mut u = DMatrix::zeros(4, 4);
    u.view_mut((0, 0), (2, 2)).copy_from(&ua);
    u.view_mut((2, 2), (2, 2)).copy_from(&ub);
    u
}

/// Random `w` with the symmetry of `stats`, scaled so `Σ|w|² = ½`.
pub fn random_w<R: Rng + ?Sized>(rng: &mut R, stats: Statistics) -> WMatrix {
    let m = Matrix4::from_fn(|_, _| complex(rng));
    let sym = match stats {
        Statistics::Fermion => m - m.transpose(),
        Statistics::Boson => m + m.transpose(),
    };
    let scale = (0.5 / sym.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
    WMatrix::new(sym * C64::new(scale, 0.0), stats).unwrap()
}

pub fn three_site_fermions() -> Arc<FockSpace> {
    let mut modes = Vec::new();
    for site in ["A", "B", "C"] {
        modes.push(ModeLabel::new(site, Spin::Up));
        modes.push(ModeLabel::new(site, Spin::Down));
    }
    FockSpace::fermions(modes).unwrap()
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn state_distance(a: &QuantumState, b: &QuantumState) -> f64 {
    a.sub(b).unwrap().norm()
}
