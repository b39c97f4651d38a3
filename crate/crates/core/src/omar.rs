//! The two-pair beam-splitter experiment in which spin entanglement is
//! converted into spatial entanglement.
//!
//! Eight fermionic modes: sides 1 and 2, arms L and R, spins ↑ and ↓. Pair A
//! enters in the L arms and pair B in the R arms, each pair in the spin
//! triplet `|↑↓⟩ + |↓↑⟩` across the two sides. A 50/50 beam splitter on each
//! side then mixes the arms. The reduced state of one arm is compared with a
//! depolarized copy of its input through the two-qubit relabeling of the
//! arm's occupations `(n↑, n↓)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::entropy::{self, DensityMatrix, EntanglementReport};
use crate::error::{Error, Result};
use crate::fock::{FockOp, FockSpace, ModeLabel, OccupationPattern, QuantumState, Spin, C64};
use crate::linalg;

/// Number of points of the probability grid before refinement.
pub const CHANNEL_GRID_POINTS: usize = 801;

/// Residual differences at or below this are ties, broken by variant order.
pub const CHANNEL_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Input,
    Output,
}

#[derive(Clone, Debug)]
pub struct ApparatusState {
    pub state: QuantumState,
    pub stage: Stage,
}

/// The eight modes in canonical order: 1L↑ 1L↓ 1R↑ 1R↓ 2L↑ 2L↓ 2R↑ 2R↓.
pub fn apparatus_space() -> Arc<FockSpace> {
    let mut modes = Vec::with_capacity(8);
    for side in ["1", "2"] {
        for arm in ["L", "R"] {
            for spin in [Spin::Up, Spin::Down] {
                modes.push(ModeLabel::with_arm(side, arm, spin));
            }
        }
    }
    FockSpace::fermions(modes).expect("distinct labels")
}

fn mode(space: &FockSpace, side: &str, arm: &str, spin: Spin) -> usize {
    space.index_of(&ModeLabel::with_arm(side, arm, spin)).expect("apparatus mode")
}

/// Modes of one side, both arms.
pub fn side_modes(side: u8) -> Vec<usize> {
    apparatus_space().site_modes(&side.to_string())
}

/// Modes of one arm of one side.
pub fn arm_modes(side: u8, arm: &str) -> Vec<usize> {
    apparatus_space().arm_modes(&side.to_string(), arm)
}

/// Both pairs in the spin triplet, pair A in the L arms and pair B in the R arms.
pub fn build_input_state() -> ApparatusState {
    let space = apparatus_space();
    let c = |side: &str, arm: &str, spin: Spin| FockOp::create(mode(&space, side, arm, spin));
    let pair = |arm: &str| {
        c("1", arm, Spin::Up) * c("2", arm, Spin::Down) + c("1", arm, Spin::Down) * c("2", arm, Spin::Up)
    };
    let state = (pair("L") * pair("R")).build(&space).expect("nonzero input");
    ApparatusState { state, stage: Stage::Input }
}

/// The 50/50 beam splitter of one side as a single-particle map.
#[derive(Clone, Debug)]
pub struct BeamSplitter {
    side: u8,
    phase: f64,
}

impl BeamSplitter {
    /// `c†_L → (c†_L + e^{iφ} c†_R)/√2`, `c†_R → (e^{−iφ} c†_L − c†_R)/√2`
    /// for each spin. The map is Hermitian, so it is its own inverse.
    pub fn new(side: u8, phase: f64) -> Result<Self> {
        if side != 1 && side != 2 {
            return Err(Error::OutOfRange(format!("side {side} is not 1 or 2")));
        }
        Ok(BeamSplitter { side, phase })
    }

    pub fn side(&self) -> u8 {
        self.side
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// 8×8 matrix `u` with `c†_j → Σ_i u[(i, j)] c†_i`.
    pub fn mode_matrix(&self) -> DMatrix<C64> {
        let space = apparatus_space();
        let side = self.side.to_string();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let e = C64::from_polar(r, self.phase);
        let mut u = DMatrix::<C64>::identity(8, 8);
        for spin in [Spin::Up, Spin::Down] {
            let l = mode(&space, &side, "L", spin);
            let rr = mode(&space, &side, "R", spin);
            u[(l, l)] = C64::new(r, 0.0);
            u[(rr, l)] = e;
            u[(l, rr)] = e.conj();
            u[(rr, rr)] = C64::new(-r, 0.0);
        }
        u
    }

    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        state.transform_modes(&self.mode_matrix())
    }
}

/// Run both beam splitters with phase `phase` on the input state.
pub fn run_apparatus_with(phase: f64) -> Result<ApparatusState> {
    let input = build_input_state();
    let mut state = input.state;
    for side in [1, 2] {
        state = BeamSplitter::new(side, phase)?.apply(&state)?;
    }
    Ok(ApparatusState { state, stage: Stage::Output })
}

pub fn run_apparatus() -> Result<ApparatusState> {
    run_apparatus_with(0.0)
}

/// Relabel an arm matrix over `(n↑, n↓)` as a two-qubit matrix in the
/// order |00⟩, |01⟩, |10⟩, |11⟩, with the first qubit `n↑`.
pub fn virtual_qubit_map(rho: &DensityMatrix) -> Result<DMatrix<C64>> {
    if rho.dim() != 4 || rho.basis().iter().any(|p| p.len() != 2 || p.counts().iter().any(|&n| n > 1)) {
        return Err(Error::Dimension { expected: 4, got: rho.dim() });
    }
    let idx: Vec<usize> = rho.basis().iter().map(|p| (2 * p.get(0) + p.get(1)) as usize).collect();
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            out[(idx[i], idx[j])] = rho.matrix()[(i, j)];
        }
    }
    Ok(out)
}

/// Inverse of [`virtual_qubit_map`] onto the arm `space` (two modes).
pub fn occupation_from_qubits(space: &Arc<FockSpace>, m: &DMatrix<C64>) -> Result<DensityMatrix> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::Dimension { expected: 4, got: m.nrows() });
    }
    let basis = space.enumerate_patterns(&[0, 1], 2);
    let idx: Vec<usize> = basis.iter().map(|p| (2 * p.get(0) + p.get(1)) as usize).collect();
    let matrix = DMatrix::from_fn(4, 4, |i, j| m[(idx[i], idx[j])]);
    DensityMatrix::new(space.clone(), basis, matrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelVariant {
    SingleQubitFirst,
    SingleQubitSecond,
    IndependentBoth,
    UniformTwoQubit,
}

impl ChannelVariant {
    pub const ALL: [ChannelVariant; 4] = [
        ChannelVariant::SingleQubitFirst,
        ChannelVariant::SingleQubitSecond,
        ChannelVariant::IndependentBoth,
        ChannelVariant::UniformTwoQubit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelVariant::SingleQubitFirst => "single_qubit_first",
            ChannelVariant::SingleQubitSecond => "single_qubit_second",
            ChannelVariant::IndependentBoth => "independent_both",
            ChannelVariant::UniformTwoQubit => "uniform_two_qubit",
        }
    }
}

impl fmt::Display for ChannelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown channel variant {s:?}")))
    }
}

fn pauli(k: usize) -> DMatrix<C64> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        1 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// `(1−p)ρ + (p/3) Σ σρσ` with σ acting on qubit `which` (0 or 1).
fn depolarize_one(rho: &DMatrix<C64>, which: usize, p: f64) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(2, 2);
    let mut out = rho * C64::new(1.0 - p, 0.0);
    for k in 0..3 {
        let s = pauli(k);
        let full = if which == 0 { s.kronecker(&id) } else { id.kronecker(&s) };
        out += &full * rho * &full * C64::new(p / 3.0, 0.0);
    }
    out
}

/// Apply a depolarizing channel to a two-qubit matrix.
pub fn depolarizing_channel(rho: &DMatrix<C64>, variant: ChannelVariant, p: f64) -> Result<DMatrix<C64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("probability {p} outside [0, 1]")));
    }
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::Dimension { expected: 4, got: rho.nrows() });
    }
    Ok(match variant {
        ChannelVariant::SingleQubitFirst => depolarize_one(rho, 0, p),
        ChannelVariant::SingleQubitSecond => depolarize_one(rho, 1, p),
        ChannelVariant::IndependentBoth => depolarize_one(&depolarize_one(rho, 0, p), 1, p),
        ChannelVariant::UniformTwoQubit => {
            rho * C64::new(1.0 - p, 0.0) + DMatrix::<C64>::identity(4, 4) * C64::new(p / 4.0, 0.0)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelFit {
    pub variant: ChannelVariant,
    pub p: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelEquivalence {
    /// Best fit per variant, in variant order.
    pub fits: Vec<ChannelFit>,
    pub best: ChannelFit,
}

/// Best `p` for one variant: grid scan, then golden-section refinement in
/// the neighbouring grid cells.
pub fn fit_channel(input: &DMatrix<C64>, target: &DMatrix<C64>, variant: ChannelVariant) -> Result<ChannelFit> {
    let residual = |p: f64| -> Result<f64> {
        Ok(linalg::frobenius_distance(&depolarizing_channel(input, variant, p)?, target))
    };
    let n = CHANNEL_GRID_POINTS - 1;
    let mut best = (0usize, f64::INFINITY);
    for k in 0..=n {
        let r = residual(k as f64 / n as f64)?;
        if r < best.1 {
            best = (k, r);
        }
    }
    let step = 1.0 / n as f64;
    let (mut lo, mut hi) = (
        (best.0 as f64 * step - step).max(0.0),
        (best.0 as f64 * step + step).min(1.0),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (residual(a)?, residual(b)?);
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = residual(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = residual(b)?;
        }
    }
    let grid_p = best.0 as f64 * step;
    let mut fit = ChannelFit { variant, p: grid_p, residual: best.1 };
    for p in [a, b] {
        let r = residual(p)?;
        if r < fit.residual {
            fit = ChannelFit { variant, p, residual: r };
        }
    }
    Ok(fit)
}

/// Fit every variant and pick the smallest residual; near-ties go to the
/// earlier variant.
pub fn channel_scan(input: &DMatrix<C64>, target: &DMatrix<C64>) -> Result<ChannelEquivalence> {
    let fits: Vec<ChannelFit> =
        ChannelVariant::ALL.iter().map(|&v| fit_channel(input, target, v)).collect::<Result<_>>()?;
    let mut best = fits[0];
    for f in &fits[1..] {
        if f.residual < best.residual - CHANNEL_TIE_TOLERANCE {
            best = *f;
        }
    }
    Ok(ChannelEquivalence { fits, best })
}

/// Full account of one run of the experiment.
#[derive(Clone, Debug, Serialize)]
pub struct OmarReport {
    pub side_input: EntanglementReport,
    pub side_output: EntanglementReport,
    pub arm_input: EntanglementReport,
    pub arm_output: EntanglementReport,
    /// The output arm matrix in the two-qubit basis, real parts of the diagonal.
    pub arm_output_populations: Vec<f64>,
    pub channel: ChannelEquivalence,
}

/// Arm 1L reductions of input and output as two-qubit matrices.
pub fn arm_qubit_matrices(input: &ApparatusState, output: &ApparatusState) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let keep = arm_modes(1, "L");
    let rin = entropy::reduce_state(&input.state, &keep)?;
    let rout = entropy::reduce_state(&output.state, &keep)?;
    Ok((virtual_qubit_map(&rin)?, virtual_qubit_map(&rout)?))
}

/// `channel_scan` between the input and output reductions of arm 1L.
pub fn channel_equivalence_report(input: &ApparatusState, output: &ApparatusState) -> Result<ChannelEquivalence> {
    let (qin, qout) = arm_qubit_matrices(input, output)?;
    channel_scan(&qin, &qout)
}

pub fn run_experiment(phase: f64) -> Result<OmarReport> {
    let input = build_input_state();
    let output = run_apparatus_with(phase)?;
    let side = side_modes(1);
    let arm = arm_modes(1, "L");
    let report = |s: &ApparatusState, keep: &[usize]| {
        entropy::occupancy_sector_decompose(&entropy::reduce_state(&s.state, keep)?)
    };
    let (_, qout) = arm_qubit_matrices(&input, &output)?;
    Ok(OmarReport {
        side_input: report(&input, &side)?,
        side_output: report(&output, &side)?,
        arm_input: report(&input, &arm)?,
        arm_output: report(&output, &arm)?,
        arm_output_populations: (0..4).map(|i| qout[(i, i)].re).collect(),
        channel: channel_equivalence_report(&input, &output)?,
    })
}

/// Pattern of the apparatus space from the eight occupations in canonical order.
pub fn pattern(counts: [u32; 8]) -> OccupationPattern {
    OccupationPattern::new(counts.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn input_state_shape() {
        let s = build_input_state().state;
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|(p, _)| p.total() == 4));
        assert!(close(s.norm(), 1.0, 1e-15));
    }

    #[test]
    fn beam_splitter_is_hermitian_unitary() {
        for phase in [0.0, 0.7] {
            let u = BeamSplitter::new(1, phase).unwrap().mode_matrix();
            let id = DMatrix::<C64>::identity(8, 8);
            assert!(linalg::frobenius_distance(&(&u * &u.adjoint()), &id) < 1e-14);
            assert!(linalg::frobenius_distance(&(&u * &u), &id) < 1e-14);
        }
        assert!(BeamSplitter::new(3, 0.0).is_err());
    }

    #[test]
    fn single_particle_splits_evenly() {
        let space = apparatus_space();
        let s = QuantumState::basis(&space, pattern([1, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        let out = BeamSplitter::new(1, 0.0).unwrap().apply(&s).unwrap();
        assert!(close(out.amplitude(&pattern([1, 0, 0, 0, 0, 0, 0, 0])).norm_sqr(), 0.5, 1e-15));
        assert!(close(out.amplitude(&pattern([0, 0, 1, 0, 0, 0, 0, 0])).norm_sqr(), 0.5, 1e-15));
    }

    #[test]
    fn published_entropies() {
        let r = run_experiment(0.0).unwrap();
        assert!(close(r.side_input.total_entropy, 2.0, 1e-12));
        assert!(close(r.side_output.total_entropy, 2.0, 1e-12));
        assert!(close(r.arm_input.total_entropy, 1.0, 1e-12));
        assert!(close(r.arm_output.total_entropy, 1.811278124459133, 1e-12));
        let double = r.side_output.sector(&[2, 0]).unwrap();
        let single = r.side_output.sector(&[1, 1]).unwrap();
        assert!(close(double.entropy, 0.5, 1e-12));
        assert!(close(single.entropy, 1.5, 1e-12));
        assert_eq!(r.side_output.off_block_norm, 0.0);
        // the input carries everything in one particle per arm
        assert!(close(r.side_input.sector(&[1, 1]).unwrap().weight, 1.0, 1e-12));
    }

    #[test]
    fn channel_identity_and_uniform_limits() {
        let rho = DMatrix::from_fn(4, 4, |i, j| C64::new(if i == j { 0.25 } else { 0.0 }, 0.0));
        for v in ChannelVariant::ALL {
            let out = depolarizing_channel(&rho, v, 0.0).unwrap();
            assert!(linalg::frobenius_distance(&out, &rho) < 1e-15);
        }
        let pure = DMatrix::from_fn(4, 4, |i, j| C64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0));
        let out = depolarizing_channel(&pure, ChannelVariant::UniformTwoQubit, 1.0).unwrap();
        assert!(linalg::frobenius_distance(&out, &rho) < 1e-15);
        assert!(depolarizing_channel(&pure, ChannelVariant::SingleQubitFirst, 1.5).is_err());
    }

    #[test]
    fn qubit_map_round_trip() {
        let input = build_input_state();
        let keep = arm_modes(1, "L");
        let rho = entropy::reduce_state(&input.state, &keep).unwrap();
        let q = virtual_qubit_map(&rho).unwrap();
        let back = occupation_from_qubits(rho.space(), &q).unwrap();
        assert!(linalg::frobenius_distance(back.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn scan_picks_first_single_qubit_variant() {
        let r = run_experiment(0.0).unwrap();
        assert_eq!(r.channel.best.variant, ChannelVariant::SingleQubitFirst);
        assert!(close(r.channel.best.p, 0.375, 1e-9));
        assert!(r.channel.best.residual < 1e-12);
    }
}
