//! Two-particle coefficient matrices and the entanglement measures built on
//! them: Schliemann's η with the Slater decomposition, the Wootters tangle,
//! and the site entropy of an occupation-basis reduction.
//!
//! A two-particle state on the four modes A↑, A↓, B↑, B↓ is written
//! `Σ_ab w_ab c†_a c†_b |0⟩`. The amplitude of the occupation pattern with
//! modes `a < b` filled is therefore `2 w_ab`, and for a doubly occupied
//! bosonic mode it is `√2 w_aa`. A normalized state has `Σ |w_ab|² = ½`.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix4};
use serde::Serialize;

use crate::entropy::{self, DensityMatrix, EntanglementReport};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, OccupationPattern, QuantumState, Statistics, C64, NORM_TOLERANCE};
use crate::linalg;

/// Symmetry tolerance of a coefficient matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Slater coefficients at or below this magnitude do not count toward the rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct WMatrix {
    entries: Matrix4<C64>,
    statistics: Statistics,
}

impl WMatrix {
    /// Check the symmetry required by `statistics` and wrap the matrix.
    pub fn new(entries: Matrix4<C64>, statistics: Statistics) -> Result<Self> {
        let sign = match statistics {
            Statistics::Fermion => -1.0,
            Statistics::Boson => 1.0,
        };
        let defect = symmetry_defect(&entries, sign);
        if defect > SYMMETRY_TOLERANCE {
            return Err(Error::WrongSymmetry(format!(
                "expected {} w, asymmetry {defect:.3e}",
                if sign < 0.0 { "antisymmetric" } else { "symmetric" }
            )));
        }
        Ok(WMatrix { entries, statistics })
    }

    pub fn entries(&self) -> &Matrix4<C64> {
        &self.entries
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// 1-based element access, matching the usual `w_12` notation.
    pub fn w(&self, a: usize, b: usize) -> C64 {
        self.entries[(a - 1, b - 1)]
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Pf(w) = w₁₂w₃₄ − w₁₃w₂₄ + w₁₄w₂₃`.
    pub fn pfaffian(&self) -> C64 {
        self.w(1, 2) * self.w(3, 4) - self.w(1, 3) * self.w(2, 4) + self.w(1, 4) * self.w(2, 3)
    }

    /// `w̃_ab = ½ Σ_cd ε^{abcd} w̄_cd`.
    pub fn dual(&self) -> Matrix4<C64> {
        let mut out = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..4 {
                    for d in 0..4 {
                        let e = levi_civita([a, b, c, d]);
                        if e != 0 {
                            s += self.entries[(c, d)].conj() * e as f64;
                        }
                    }
                }
                out[(a, b)] = s * 0.5;
            }
        }
        out
    }
}

fn symmetry_defect(m: &Matrix4<C64>, sign: f64) -> f64 {
    (m - m.transpose() * C64::new(sign, 0.0)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn levi_civita(idx: [usize; 4]) -> i32 {
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn require_four_modes(space: &FockSpace) -> Result<()> {
    if space.len() != 4 {
        return Err(Error::Dimension { expected: 4, got: space.len() });
    }
    Ok(())
}

/// Coefficient matrix of a two-particle state over four modes.
pub fn w_from_state(state: &QuantumState) -> Result<WMatrix> {
    require_four_modes(state.space())?;
    let mut w = Matrix4::<C64>::zeros();
    for (p, &amp) in state.iter() {
        if p.total() != 2 {
            return Err(Error::NotTwoParticle);
        }
        let occupied: Vec<usize> = (0..4).filter(|&m| p.get(m) > 0).collect();
        match occupied.as_slice() {
            [a, b] => {
                let half = amp * 0.5;
                w[(*a, *b)] = half;
                w[(*b, *a)] = match state.statistics() {
                    Statistics::Fermion => -half,
                    Statistics::Boson => half,
                };
            }
            [a] => w[(*a, *a)] = amp / 2f64.sqrt(),
            _ => unreachable!("two particles occupy one or two modes"),
        }
    }
    WMatrix::new(w, state.statistics())
}

/// Build `Σ_ab w_ab c†_a c†_b |0⟩` on `space` (four modes, matching statistics).
///
/// The result is returned as computed; a normalized state needs `Σ|w|² = ½`.
pub fn state_from_w(space: &Arc<FockSpace>, w: &WMatrix) -> Result<QuantumState> {
    require_four_modes(space)?;
    if space.statistics() != w.statistics {
        return Err(Error::MismatchedSystems);
    }
    let mut terms = Vec::new();
    for a in 0..4 {
        for b in a..4 {
            let mut counts = vec![0u32; 4];
            counts[a] += 1;
            counts[b] += 1;
            let amp = if a == b {
                if w.statistics == Statistics::Fermion {
                    continue;
                }
                w.entries[(a, a)] * 2f64.sqrt()
            } else {
                w.entries[(a, b)] * 2.0
            };
            if amp.norm() > 0.0 {
                terms.push((OccupationPattern::new(counts), amp));
            }
        }
    }
    QuantumState::from_terms(space, terms)
}

/// η = 8|Pf(w)|, normalized so localized Bell states give 1.
pub fn schliemann_eta(w: &WMatrix) -> Result<f64> {
    if w.statistics != Statistics::Fermion {
        return Err(Error::UndefinedMeasure("η is defined for fermions only".into()));
    }
    Ok(8.0 * w.pfaffian().norm())
}

/// η through the dual-matrix inner product, `2|Σ_ab conj(w̃_ab) w_ab|`.
pub fn schliemann_eta_dual(w: &WMatrix) -> Result<f64> {
    if w.statistics != Statistics::Fermion {
        return Err(Error::UndefinedMeasure("η is defined for fermions only".into()));
    }
    let dual = w.dual();
    let s: C64 = dual.iter().zip(w.entries.iter()).map(|(d, x)| d.conj() * x).sum();
    Ok(2.0 * s.norm())
}

pub fn state_eta(state: &QuantumState) -> Result<f64> {
    schliemann_eta(&w_from_state(state)?)
}

/// One elementary Slater determinant `z (u v ᵀ − v uᵀ)` of the decomposition.
#[derive(Clone, Debug)]
pub struct SlaterTerm {
    /// Non-negative weight in `w`; the state amplitude of the determinant is `2 z`.
    pub z: f64,
    pub first: DVector<C64>,
    pub second: DVector<C64>,
}

#[derive(Clone, Debug)]
pub struct SlaterDecomposition {
    pub terms: Vec<SlaterTerm>,
    pub rank: usize,
}

impl SlaterDecomposition {
    /// Coefficients of the normalized determinants in the state expansion.
    pub fn state_coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| 2.0 * t.z).collect()
    }

    pub fn reconstruct(&self) -> Matrix4<C64> {
        let mut w = Matrix4::zeros();
        for t in &self.terms {
            for a in 0..4 {
                for b in 0..4 {
                    w[(a, b)] += (t.first[a] * t.second[b] - t.second[a] * t.first[b]) * t.z;
                }
            }
        }
        w
    }
}

/// Canonical pairing form of an antisymmetric `w`.
///
/// Repeatedly takes the top singular vector `u` of `w`, pairs it with
/// `v = conj(w† u) / σ` (orthogonal to `u` because `w` is antisymmetric) and
/// deflates by `σ (u vᵀ − v uᵀ)`.
pub fn slater_decompose(w: &WMatrix) -> Result<SlaterDecomposition> {
    if w.statistics != Statistics::Fermion {
        return Err(Error::WrongSymmetry("Slater decomposition needs antisymmetric w".into()));
    }
    let mut rest = DMatrix::from_iterator(4, 4, w.entries.iter().copied());
    let mut terms = Vec::new();
    for _ in 0..2 {
        let gram = &rest * rest.adjoint();
        let (vals, vecs) = linalg::eigh(&linalg::symmetrize(&gram)?)?;
        let top = vals[3].max(0.0);
        let sigma = top.sqrt();
        if sigma <= RANK_TOLERANCE {
            break;
        }
        let u: DVector<C64> = vecs.column(3).into_owned();
        let v: DVector<C64> = (rest.adjoint() * &u).map(|z| z.conj()) / C64::new(sigma, 0.0);
        let block = (&u * v.transpose() - &v * u.transpose()) * C64::new(sigma, 0.0);
        rest -= block;
        terms.push(SlaterTerm { z: sigma, first: u, second: v });
    }
    let rank = terms.len();
    Ok(SlaterDecomposition { terms, rank })
}

/// Amplitudes `a|↑↑⟩ + b|↑↓⟩ + c|↓↑⟩ + d|↓↓⟩`, the first spin on site A.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WoottersReport {
    pub tangle: f64,
    pub x: f64,
    pub entanglement: f64,
}

pub fn wootters_report(a: C64, b: C64, c: C64, d: C64) -> Result<WoottersReport> {
    let n = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(n.sqrt()));
    }
    let concurrence = (2.0 * (a * d - b * c).norm()).min(1.0);
    let tangle = concurrence * concurrence;
    let x = 0.5 * (1.0 + (1.0 - tangle).max(0.0).sqrt());
    Ok(WoottersReport { tangle, x, entanglement: linalg::binary_entropy(x) })
}

/// The localized state `a|↑↑⟩ + b|↑↓⟩ + c|↓↑⟩ + d|↓↓⟩` in the occupation
/// basis, one particle per site.
pub fn wootters_state(statistics: Statistics, amps: [C64; 4]) -> Result<QuantumState> {
    let space = FockSpace::two_site(statistics);
    let patterns = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]];
    // c†_{Aσ} c†_{Bσ'}|0⟩ has a positive pattern amplitude in canonical order
    QuantumState::from_terms(
        &space,
        patterns.iter().zip(amps).map(|(p, a)| (OccupationPattern::new(p.to_vec()), a)),
    )
}

/// Site entropy: reduce to `keep`, then report entropy and sectors.
pub fn site_entropy_measure(state: &QuantumState, keep: &[usize]) -> Result<EntanglementReport> {
    let rho = entropy::reduce_state(state, keep)?;
    entropy::occupancy_sector_decompose(&rho)
}

/// Site entropy of every mode on `site`.
pub fn site_entropy(state: &QuantumState, site: &str) -> Result<EntanglementReport> {
    let keep = state.space().site_modes(site);
    if keep.is_empty() {
        return Err(Error::UnknownMode(site.to_string()));
    }
    site_entropy_measure(state, &keep)
}

/// `ρ_B` from the block formulas in terms of `w` for a two-particle,
/// two-site state (modes 1, 2 on site A; 3, 4 on site B).
///
/// Zero particles on B: `2|w₁₁|² + 2|w₂₂|² + 4|w₁₂|²`. One particle on B: the
/// 2×2 matrix `4 Σ_{i∈A} w_{i j} w̄_{i j'}` over B↑, B↓. Two particles on B: the
/// outer product of `(2w₃₄, √2 w₃₃, √2 w₄₄)` over the patterns 11, 20, 02.
/// For fermions the diagonal terms vanish, leaving `4|w₁₂|²` and `4|w₃₄|²`.
pub fn reduced_blocks_closed_form(w: &WMatrix) -> Result<DensityMatrix> {
    let sign = match w.statistics {
        Statistics::Fermion => -1.0,
        Statistics::Boson => 1.0,
    };
    if symmetry_defect(&w.entries, sign) > SYMMETRY_TOLERANCE {
        return Err(Error::WrongSymmetry("w does not have the symmetry of its statistics".into()));
    }
    let x = |a: usize, b: usize| w.w(a, b);
    let r2 = 2f64.sqrt();
    let mut elems: HashMap<(Vec<u32>, Vec<u32>), C64> = HashMap::new();

    elems.insert(
        (vec![0, 0], vec![0, 0]),
        C64::new(2.0 * x(1, 1).norm_sqr() + 2.0 * x(2, 2).norm_sqr() + 4.0 * x(1, 2).norm_sqr(), 0.0),
    );

    let one = [vec![1, 0], vec![0, 1]];
    for (j, pj) in one.iter().enumerate() {
        for (k, pk) in one.iter().enumerate() {
            let v = (1..=2).map(|i| x(i, j + 3) * x(i, k + 3).conj()).sum::<C64>() * 4.0;
            elems.insert((pj.clone(), pk.clone()), v);
        }
    }

    let two: Vec<(Vec<u32>, C64)> = match w.statistics {
        Statistics::Fermion => vec![(vec![1, 1], x(3, 4) * 2.0)],
        Statistics::Boson => vec![
            (vec![1, 1], x(3, 4) * 2.0),
            (vec![2, 0], x(3, 3) * r2),
            (vec![0, 2], x(4, 4) * r2),
        ],
    };
    for (p, a) in &two {
        for (q, b) in &two {
            elems.insert((p.clone(), q.clone()), a * b.conj());
        }
    }

    let full = FockSpace::two_site(w.statistics);
    let space = full.subspace(&[2, 3])?;
    let basis = space.enumerate_patterns(&[0, 1], 2);
    let n = basis.len();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        let key = (basis[i].counts().to_vec(), basis[j].counts().to_vec());
        elems.get(&key).copied().unwrap_or_default()
    });
    DensityMatrix::new(space, basis, matrix)
}
