//! Bell states of two particles whose spatial orbitals overlap.
//!
//! The orbitals φ_A and φ_B are unit vectors in a two-dimensional space with
//! real overlap `S`. They are expanded in an orthonormal pair χ₁, χ₂ which
//! become the sites A and B of the usual four-mode system, so every Bell
//! state is a combination of Slater determinants (or permanents) over the
//! modes A↑, A↓, B↑, B↓.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockOp, FockSpace, QuantumState, Statistics, C64};
use crate::measures;

/// Below this prenormalization norm a state counts as destroyed.
pub const DEFAULT_DESTROYED_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi-plus",
            BellKind::PsiMinus => "psi-minus",
            BellKind::PhiPlus => "phi-plus",
            BellKind::PhiMinus => "phi-minus",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown Bell state kind {s:?}")))
    }
}

/// How φ_A, φ_B are expressed over the orthonormal site orbitals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orthogonalization {
    /// Löwdin: φ_A = (a, b), φ_B = (b, a).
    #[default]
    Symmetric,
    /// Gram–Schmidt starting from φ_A: φ_A = (1, 0), φ_B = (S, √(1−S²)).
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellOptions {
    pub statistics: Statistics,
    pub scheme: Orthogonalization,
    pub destroyed_threshold: f64,
}

impl Default for BellOptions {
    fn default() -> Self {
        BellOptions {
            statistics: Statistics::Fermion,
            scheme: Orthogonalization::Symmetric,
            destroyed_threshold: DEFAULT_DESTROYED_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OverlapBellState {
    pub kind: BellKind,
    pub overlap: f64,
    pub statistics: Statistics,
    pub state: QuantumState,
    pub prenormalization_norm: f64,
}

impl OverlapBellState {
    /// η of the normalized state; `None` for bosons, where it is undefined.
    pub fn eta(&self) -> Result<Option<f64>> {
        match self.statistics {
            Statistics::Fermion => measures::state_eta(&self.state).map(Some),
            Statistics::Boson => Ok(None),
        }
    }
}

/// Coefficients of φ_A and φ_B over the orthonormal site orbitals.
pub fn orbital_coefficients(overlap: f64, scheme: Orthogonalization) -> Result<([f64; 2], [f64; 2])> {
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::OutOfRange(format!("overlap {overlap} outside [0, 1)")));
    }
    Ok(match scheme {
        Orthogonalization::Symmetric => {
            let (p, m) = ((1.0 + overlap).sqrt(), (1.0 - overlap).sqrt());
            let (a, b) = ((p + m) / 2.0, (p - m) / 2.0);
            ([a, b], [b, a])
        }
        Orthogonalization::Sequential => ([1.0, 0.0], [overlap, (1.0 - overlap * overlap).sqrt()]),
    })
}

/// Fermionic Bell state with symmetric orthogonalization.
pub fn bell_state_nonorthogonal(kind: BellKind, overlap: f64) -> Result<OverlapBellState> {
    bell_state_with(kind, overlap, &BellOptions::default())
}

pub fn bell_state_with(kind: BellKind, overlap: f64, options: &BellOptions) -> Result<OverlapBellState> {
    let (phi_a, phi_b) = orbital_coefficients(overlap, options.scheme)?;
    let space = match options.statistics {
        Statistics::Fermion => FockSpace::two_site(Statistics::Fermion),
        Statistics::Boson => FockSpace::bosons(crate::fock::two_site_modes(), 2)?,
    };
    // creation operator for orbital φ with spin σ (0 = ↑, 1 = ↓); A modes 0,1 and B modes 2,3
    let orbital = |phi: [f64; 2], spin: usize| {
        let mut coeffs = [C64::new(0.0, 0.0); 4];
        coeffs[spin] = C64::new(phi[0], 0.0);
        coeffs[2 + spin] = C64::new(phi[1], 0.0);
        FockOp::creation_combination(&coeffs)
    };
    let pair = |sa: usize, sb: usize| orbital(phi_a, sa) * orbital(phi_b, sb);
    let (first, second, sign) = match kind {
        BellKind::PsiPlus => (pair(0, 1), pair(1, 0), 1.0),
        BellKind::PsiMinus => (pair(0, 1), pair(1, 0), -1.0),
        BellKind::PhiPlus => (pair(0, 0), pair(1, 1), 1.0),
        BellKind::PhiMinus => (pair(0, 0), pair(1, 1), -1.0),
    };
    let op = (first + second * sign) * std::f64::consts::FRAC_1_SQRT_2;
    let raw = op.apply(&QuantumState::vacuum(&space))?;
    let norm = raw.norm();
    if norm < options.destroyed_threshold {
        return Err(Error::StateDestroyed(norm));
    }
    Ok(OverlapBellState {
        kind,
        overlap,
        statistics: options.statistics,
        state: raw.normalize()?,
        prenormalization_norm: norm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub overlap: f64,
    /// `None` where the state is destroyed or η is undefined.
    pub eta: Option<f64>,
    pub prenormalization_norm: f64,
    pub destroyed: bool,
}

/// η and prenormalization norm over an overlap grid; destroyed points are
/// flagged instead of failing the curve.
pub fn eta_vs_overlap_curve(kind: BellKind, grid: &[f64], options: &BellOptions) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::with_capacity(grid.len());
    for &s in grid {
        match bell_state_with(kind, s, options) {
            Ok(b) => out.push(CurvePoint {
                overlap: s,
                eta: b.eta()?,
                prenormalization_norm: b.prenormalization_norm,
                destroyed: false,
            }),
            Err(Error::StateDestroyed(norm)) => {
                out.push(CurvePoint { overlap: s, eta: None, prenormalization_norm: norm, destroyed: true })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
