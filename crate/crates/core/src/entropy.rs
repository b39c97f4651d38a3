//! Density matrices over the occupation basis, partial traces, von Neumann
//! entropy and the split of a reduced matrix into occupancy sectors.
//!
//! The fermionic partial trace first reorders every basis state so that the
//! traced modes form the leading block. With the canonical ordering
//! convention, moving an occupied traced mode in front of the occupied kept
//! modes that precede it costs one sign per crossing; that parity is applied
//! per basis state before the environment sum. No assumption about particle
//! number is made, so superpositions across number sectors reduce correctly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, OccupationPattern, QuantumState, Statistics, C64};
use crate::linalg;

/// Trace and Hermiticity tolerance of a valid density matrix.
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// Off-block norms at or below this count as exactly block diagonal.
pub const BLOCK_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    basis: Vec<OccupationPattern>,
    space: Arc<FockSpace>,
}

impl DensityMatrix {
    /// Wrap a matrix over an explicit basis of patterns of `space`.
    pub fn new(
        space: Arc<FockSpace>,
        basis: Vec<OccupationPattern>,
        matrix: DMatrix<C64>,
    ) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::Dimension { expected: basis.len(), got: matrix.nrows() });
        }
        for p in &basis {
            space.check_pattern(p)?;
        }
        Ok(DensityMatrix { matrix, basis, space })
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

    pub fn statistics(&self) -> Statistics {
        self.space.statistics()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Matrix element between two patterns; zero if either is outside the basis.
    pub fn element(&self, row: &OccupationPattern, col: &OccupationPattern) -> C64 {
        let find = |p: &OccupationPattern| self.basis.iter().position(|q| q == p);
        match (find(row), find(col)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => C64::new(0.0, 0.0),
        }
    }

    /// Check Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let defect = linalg::hermitian_defect(&self.matrix);
        if defect > TRACE_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::NotNormalized(tr.norm()));
        }
        linalg::clamp_eigenvalues(&linalg::eigvalsh(&self.matrix)?)?;
        Ok(())
    }

    /// Eigenvalues, descending, with numerical dust clamped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut v = linalg::clamp_eigenvalues(&linalg::eigvalsh(&self.matrix)?)?;
        v.reverse();
        Ok(v)
    }

    /// Re-express the matrix over another basis that contains its support.
    pub fn in_basis(&self, basis: &[OccupationPattern]) -> Result<DMatrix<C64>> {
        let index: HashMap<&OccupationPattern, usize> =
            basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut out = DMatrix::zeros(basis.len(), basis.len());
        for (i, p) in self.basis.iter().enumerate() {
            for (j, q) in self.basis.iter().enumerate() {
                let v = self.matrix[(i, j)];
                if v.norm() == 0.0 {
                    continue;
                }
                match (index.get(p), index.get(q)) {
                    (Some(&a), Some(&b)) => out[(a, b)] = v,
                    _ => return Err(Error::OutsideOperatorBasis),
                }
            }
        }
        Ok(out)
    }
}

/// `|ψ⟩⟨ψ|` over the support of a normalized state.
pub fn density_from_state(state: &QuantumState) -> Result<DensityMatrix> {
    state.require_normalized()?;
    let basis = state.support();
    let amps: Vec<C64> = basis.iter().map(|p| state.amplitude(p)).collect();
    let n = basis.len();
    let matrix = DMatrix::from_fn(n, n, |i, j| amps[i] * amps[j].conj());
    Ok(DensityMatrix { matrix, basis, space: state.space().clone() })
}

/// Parity of moving every occupied traced mode in front of the occupied kept
/// modes that precede it in canonical order.
fn leading_block_sign(pattern: &OccupationPattern, traced: &[usize], keep: &[usize]) -> f64 {
    let mut crossings = 0u32;
    for &t in traced {
        if pattern.get(t) == 0 {
            continue;
        }
        for &k in keep {
            if k < t {
                crossings += pattern.get(k) * pattern.get(t);
            }
        }
    }
    if crossings.is_multiple_of(2) { 1.0 } else { -1.0 }
}

/// Reduce to the modes in `keep` (indices into `rho`'s space).
///
/// The reduced basis holds every kept-mode pattern within the occupation caps
/// whose total does not exceed the largest particle number in `rho`'s basis.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let space = rho.space();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= space.len() || keep.iter().any(|&k| k >= space.len()) {
        return Err(Error::InvalidSubset);
    }
    let traced: Vec<usize> = (0..space.len()).filter(|m| !keep.contains(m)).collect();
    let fermion = space.statistics() == Statistics::Fermion;

    let max_total = rho.basis.iter().map(|p| p.total()).max().unwrap_or(0);
    let sub = space.subspace(&keep)?;
    let reduced_basis = sub.enumerate_patterns(&(0..keep.len()).collect::<Vec<_>>(), max_total);
    let index: HashMap<&OccupationPattern, usize> =
        reduced_basis.iter().enumerate().map(|(i, p)| (p, i)).collect();

    // environment pattern -> [(row in rho, row in reduced, sign)]
    let mut groups: BTreeMap<OccupationPattern, Vec<(usize, usize, f64)>> = BTreeMap::new();
    for (i, p) in rho.basis.iter().enumerate() {
        let env = p.restrict(&traced);
        let kept = p.restrict(&keep);
        let r = *index.get(&kept).ok_or(Error::OutsideOperatorBasis)?;
        let sign = if fermion { leading_block_sign(p, &traced, &keep) } else { 1.0 };
        groups.entry(env).or_default().push((i, r, sign));
    }

    let n = reduced_basis.len();
    let mut out = DMatrix::<C64>::zeros(n, n);
    for members in groups.values() {
        for &(i, a, si) in members {
            for &(j, b, sj) in members {
                out[(a, b)] += rho.matrix[(i, j)] * (si * sj);
            }
        }
    }
    Ok(DensityMatrix { matrix: out, basis: reduced_basis, space: sub })
}

/// Reduced density matrix of a normalized pure state.
pub fn reduce_state(state: &QuantumState, keep: &[usize]) -> Result<DensityMatrix> {
    partial_trace(&density_from_state(state)?, keep)
}

/// `-tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(linalg::shannon_bits(&rho.eigenvalues()?))
}

/// Occupancy sector label: the per-location particle counts sorted in
/// descending order. With a single location this is the total count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SectorKey(pub Vec<u32>);

impl SectorKey {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest occupancy of any single location.
    pub fn max_occupancy(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// How basis states of a reduced matrix are grouped into sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SectorRule {
    /// Total particle count of the subsystem.
    Total,
    /// Sorted per-`(site, arm)` occupancies, so "both particles in one arm"
    /// and "one particle per arm" are separate sectors.
    #[default]
    LocationProfile,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub sector: String,
    pub occupancy: Vec<u32>,
    /// Trace of the block.
    pub weight: f64,
    /// Block eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub entropy: f64,
}

/// Entropy of a reduced matrix with its sector-by-sector bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct EntanglementReport {
    pub total_entropy: f64,
    pub sectors: Vec<SectorReport>,
    pub off_block_norm: f64,
}

impl EntanglementReport {
    pub fn sector(&self, occupancy: &[u32]) -> Option<&SectorReport> {
        self.sectors.iter().find(|s| s.occupancy == occupancy)
    }

    /// Sectors carrying any weight.
    pub fn occupied_sectors(&self) -> impl Iterator<Item = &SectorReport> {
        self.sectors.iter().filter(|s| s.weight > BLOCK_TOLERANCE)
    }

    pub fn contributions_sum(&self) -> f64 {
        self.sectors.iter().map(|s| s.entropy).sum()
    }

    pub fn eigenvalue_sum(&self) -> f64 {
        self.sectors.iter().flat_map(|s| s.eigenvalues.iter()).sum()
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.off_block_norm <= BLOCK_TOLERANCE
    }
}

pub fn sector_key(space: &FockSpace, pattern: &OccupationPattern, rule: SectorRule) -> SectorKey {
    match rule {
        SectorRule::Total => SectorKey(vec![pattern.total()]),
        SectorRule::LocationProfile => {
            let mut counts: Vec<u32> = space
                .locations()
                .iter()
                .map(|(_, modes)| modes.iter().map(|&m| pattern.get(m)).sum())
                .collect();
            counts.sort_unstable_by(|a, b| b.cmp(a));
            SectorKey(counts)
        }
    }
}

/// Split `rho` into occupancy sectors using [`SectorRule::LocationProfile`].
pub fn occupancy_sector_decompose(rho: &DensityMatrix) -> Result<EntanglementReport> {
    occupancy_sector_decompose_with(rho, SectorRule::default())
}

pub fn occupancy_sector_decompose_with(
    rho: &DensityMatrix,
    rule: SectorRule,
) -> Result<EntanglementReport> {
    let total_entropy = von_neumann_entropy(rho)?;
    let keys: Vec<SectorKey> = rho.basis.iter().map(|p| sector_key(&rho.space, p, rule)).collect();
    let mut members: BTreeMap<SectorKey, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        members.entry(k.clone()).or_default().push(i);
    }

    let mut off = 0.0;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            if keys[i] != keys[j] {
                off += rho.matrix[(i, j)].norm_sqr();
            }
        }
    }

    let mut sectors = Vec::with_capacity(members.len());
    // highest occupancy first, matching the usual double-before-single layout
    for (key, idx) in members.into_iter().rev() {
        let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| rho.matrix[(idx[a], idx[b])]);
        let mut eig = linalg::clamp_eigenvalues(&linalg::eigvalsh(&block)?)?;
        eig.reverse();
        sectors.push(SectorReport {
            sector: key.to_string(),
            occupancy: key.0.clone(),
            weight: block.trace().re,
            entropy: linalg::shannon_bits(&eig),
            eigenvalues: eig,
        });
    }
    Ok(EntanglementReport { total_entropy, sectors, off_block_norm: off.sqrt() })
}
