//! Teleporting two qubits through the doubly occupied molecular orbital.
//!
//! Alice holds the occupations of site A, Bob those of site B. Each
//! occupation `n ∈ {0, 1}` is read as a virtual qubit; with the default
//! orientation an occupied mode is spin up and A↑ carries the first qubit.
//! The protocol is the textbook one, twice over: a CNOT from each source
//! qubit onto Alice's matching virtual qubit, a Hadamard on each source
//! qubit, a measurement of all four, and a correction on Bob's side.
//!
//! The corrections are not hand-written. For every outcome the map from the
//! source to Bob's unnormalized state is computed from the four basis
//! sources; it must be proportional to a unitary, and its normalized adjoint
//! is the correction.
//!
//! In the coherent mode each CNOT borrows or returns a particle from a shared
//! bosonic sink D prepared in a coherent state, so the gate conserves
//! particle number on A ∪ D. The generator
//!
//! `H = g P↑_C (1 − (e^{−iθ} a† P₀ d + e^{iθ} d† P₀ a) / |α|)`, `α = |α| e^{iθ}`,
//!
//! reproduces the flip exactly as `|α| → ∞` for `g = π/2` and unit time. It
//! conserves `n_A + n_D`, so it is exponentiated exactly block by block.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{self, FockOp, FockSpace, QuantumState, Statistics, C64};
use crate::linalg;

/// Largest accepted Poisson tail beyond the sink cutoff.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-8;

/// Occupation cap of the A and B modes in the coherent mode.
pub const DEFAULT_SITE_CAP: u32 = 2;

/// Generator strength that turns the coherent gate into a CNOT as `|α| → ∞`.
pub const CNOT_COUPLING: f64 = std::f64::consts::FRAC_PI_2;

/// Tolerance on `K†K ∝ 1` when deriving corrections.
const CORRECTION_TOLERANCE: f64 = 1e-9;

/// Largest mean sink occupation handled; beyond it Poisson weights underflow.
const MAX_MEAN_OCCUPATION: f64 = 600.0;

/// The delocalized state `(c†_{A↑} + c†_{B↑})(c†_{A↓} + c†_{B↓})|0⟩ / 2`.
pub fn channel_state(statistics: Statistics) -> QuantumState {
    let space = FockSpace::two_site(statistics);
    ((FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3)))
        .build(&space)
        .expect("nonzero channel state")
}

/// How occupations are read as qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// An occupied mode is spin up when true, spin down otherwise.
    pub occupied_is_up: bool,
    /// The first virtual qubit lives on the ↓ mode when true.
    pub swap_modes: bool,
}

impl Default for Orientation {
    fn default() -> Self {
        Orientation { occupied_is_up: true, swap_modes: false }
    }
}

impl Orientation {
    /// Spin mode (0 = ↑, 1 = ↓) holding virtual qubit `which` (1 or 2).
    pub fn mode_of_qubit(self, which: usize) -> usize {
        (which - 1) ^ usize::from(self.swap_modes)
    }

    /// Occupations `(n↑, n↓)` of the two-qubit basis state `j`, ordered
    /// ↑↑, ↑↓, ↓↑, ↓↓.
    pub fn occupations(self, j: usize) -> [usize; 2] {
        let up = [j < 2, j.is_multiple_of(2)];
        let mut n = [0; 2];
        for (k, &u) in up.iter().enumerate() {
            n[self.mode_of_qubit(k + 1)] = usize::from(u == self.occupied_is_up);
        }
        n
    }
}

/// Ideal virtual CNOT on `control ⊗ n_{A↑} ⊗ n_{A↓}`, index `4c + 2n↑ + n↓`
/// with `c = 1` for a spin-up control. Flips `n_{A↑}` (which = 1) or
/// `n_{A↓}` (which = 2) when the control is up.
pub fn virtual_cnot_ideal(which: usize) -> Result<DMatrix<C64>> {
    if which != 1 && which != 2 {
        return Err(Error::OutOfRange(format!("virtual qubit {which} is not 1 or 2")));
    }
    let flip = if which == 1 { 2 } else { 1 };
    let mut u = DMatrix::zeros(8, 8);
    for i in 0..8 {
        let j = if i >= 4 { i ^ flip } else { i };
        u[(j, i)] = C64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Poisson tail `P(n > k)` for mean `lambda`, for every `k` up to the
/// returned length.
fn poisson_tails(lambda: f64) -> Vec<f64> {
    let n_max = (lambda + 30.0 * lambda.sqrt() + 60.0).ceil() as usize;
    let mut terms = Vec::with_capacity(n_max + 1);
    let mut t = (-lambda).exp();
    terms.push(t);
    for n in 1..=n_max {
        t *= lambda / n as f64;
        terms.push(t);
    }
    let mut tails = vec![0.0; n_max + 1];
    let mut acc = 0.0;
    for k in (0..=n_max).rev() {
        tails[k] = acc;
        acc += terms[k];
    }
    tails
}

/// A coherent state of one bosonic mode, truncated at `cutoff` and renormalized.
#[derive(Clone, Debug, Serialize)]
pub struct CoherentSource {
    pub alpha: C64,
    pub cutoff: usize,
    /// `P(n > cutoff)` of the untruncated state.
    pub tail: f64,
    #[serde(skip)]
    pub amplitudes: Vec<C64>,
}

impl CoherentSource {
    /// Smallest cutoff whose tail is at most `tolerance`.
    pub fn new(alpha: C64, tolerance: f64) -> Result<Self> {
        let lambda = alpha.norm_sqr();
        if lambda > MAX_MEAN_OCCUPATION {
            return Err(Error::OutOfRange(format!("|α|² = {lambda} is too large")));
        }
        let tails = poisson_tails(lambda);
        let cutoff = tails.iter().position(|&t| t <= tolerance).unwrap_or(tails.len() - 1);
        Self::with_cutoff(alpha, cutoff, tolerance)
    }

    /// Fixed cutoff; fails if the tail beyond it exceeds `tolerance`.
    pub fn with_cutoff(alpha: C64, cutoff: usize, tolerance: f64) -> Result<Self> {
        let lambda = alpha.norm_sqr();
        if lambda > MAX_MEAN_OCCUPATION {
            return Err(Error::OutOfRange(format!("|α|² = {lambda} is too large")));
        }
        let tails = poisson_tails(lambda);
        let tail = tails.get(cutoff).copied().unwrap_or(0.0);
        if tail > tolerance {
            return Err(Error::CutoffTooSmall { cutoff, tail });
        }
        let raw = fock::coherent_amplitudes(alpha, cutoff);
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amplitudes = raw.into_iter().map(|a| a / norm).collect();
        Ok(CoherentSource { alpha, cutoff, tail, amplitudes })
    }

    /// `‖(a − α)|α⟩‖` of the truncated, renormalized state.
    pub fn eigen_residual(&self) -> f64 {
        let k = self.cutoff;
        let mut r = 0.0;
        for n in 0..=k {
            let lowered = if n < k { self.amplitudes[n + 1] * ((n + 1) as f64).sqrt() } else { C64::new(0.0, 0.0) };
            r += (lowered - self.alpha * self.amplitudes[n]).norm_sqr();
        }
        r.sqrt()
    }

    /// `|α| √(P(n ≥ cutoff) / (1 − P(n > cutoff)))`, which bounds [`Self::eigen_residual`].
    pub fn residual_bound(&self) -> f64 {
        let tails = poisson_tails(self.alpha.norm_sqr());
        let at_least = if self.cutoff == 0 { 1.0 } else { tails.get(self.cutoff - 1).copied().unwrap_or(0.0) };
        self.alpha.norm() * (at_least / (1.0 - self.tail)).sqrt()
    }
}

/// A unitary acting on some factors of a register, given as independent
/// blocks of the combined local index; untouched local indices are fixed.
#[derive(Clone, Debug)]
struct LocalUnitary {
    factors: Vec<usize>,
    blocks: Vec<(Vec<usize>, DMatrix<C64>)>,
}

/// Dense state of a product of qudits; factor 0 is the most significant digit.
#[derive(Clone, Debug)]
struct Register {
    dims: Vec<usize>,
    strides: Vec<usize>,
    amps: Vec<C64>,
}

impl Register {
    fn new(dims: Vec<usize>, amps: Vec<C64>) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        debug_assert_eq!(amps.len(), dims.iter().product::<usize>());
        Register { dims, strides, amps }
    }

    fn digit(&self, index: usize, factor: usize) -> usize {
        index / self.strides[factor] % self.dims[factor]
    }

    fn apply(&mut self, u: &LocalUnitary) {
        let local_dims: Vec<usize> = u.factors.iter().map(|&f| self.dims[f]).collect();
        let local_len: usize = local_dims.iter().product();
        let offsets: Vec<usize> = (0..local_len)
            .map(|mut l| {
                let mut off = 0;
                for (k, &f) in u.factors.iter().enumerate().rev() {
                    off += (l % local_dims[k]) * self.strides[f];
                    l /= local_dims[k];
                }
                off
            })
            .collect();
        let bases: Vec<usize> = (0..self.amps.len())
            .filter(|&i| u.factors.iter().all(|&f| self.digit(i, f) == 0))
            .collect();
        for base in bases {
            for (idx, m) in &u.blocks {
                let v = DVector::from_iterator(idx.len(), idx.iter().map(|&l| self.amps[base + offsets[l]]));
                let w = m * v;
                for (k, &l) in idx.iter().enumerate() {
                    self.amps[base + offsets[l]] = w[k];
                }
            }
        }
    }
}

// register factor positions
const C1: usize = 0;
const C2: usize = 1;
const A: [usize; 2] = [2, 3];
const B: [usize; 2] = [4, 5];
const D: usize = 6;

fn hadamard(factor: usize) -> LocalUnitary {
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    LocalUnitary { factors: vec![factor], blocks: vec![(vec![0, 1], DMatrix::from_row_slice(2, 2, &[r, r, r, -r]))] }
}

fn ideal_cnot(which: usize, orientation: Orientation) -> Result<LocalUnitary> {
    // the ideal matrix is written on (control, A↑, A↓); reorder if qubit 1 sits on A↓
    let m = virtual_cnot_ideal(if orientation.swap_modes { 3 - which } else { which })?;
    let control = if which == 1 { C1 } else { C2 };
    Ok(LocalUnitary { factors: vec![control, A[0], A[1]], blocks: vec![((0..8).collect(), m)] })
}

/// The particle-number-conserving CNOT built on a coherent sink.
#[derive(Clone, Debug)]
pub struct CoherentCnot {
    /// Virtual qubit flipped (1 or 2).
    pub which: usize,
    pub coupling: f64,
    pub alpha: C64,
    /// Occupation cap of the target mode.
    pub site_cap: u32,
    /// Sink cutoff.
    pub cutoff: usize,
}

impl CoherentCnot {
    /// Fermions have no coherent state to borrow particles from.
    pub fn new(statistics: Statistics, which: usize, alpha: C64, site_cap: u32, cutoff: usize) -> Result<Self> {
        if statistics != Statistics::Boson {
            return Err(Error::RequiresBosons("coherent-source CNOT".into()));
        }
        if which != 1 && which != 2 {
            return Err(Error::OutOfRange(format!("virtual qubit {which} is not 1 or 2")));
        }
        if alpha.norm() == 0.0 {
            return Err(Error::OutOfRange("coherent amplitude must be nonzero".into()));
        }
        Ok(CoherentCnot { which, coupling: CNOT_COUPLING, alpha, site_cap, cutoff })
    }

    fn dims(&self) -> (usize, usize) {
        (self.site_cap as usize + 1, self.cutoff + 1)
    }

    /// Generator restricted to one control-up block of fixed `n_A + n_D`:
    /// the local indices `(n_A, n_D)` and the matrix.
    fn block(&self, total: usize) -> (Vec<(usize, usize)>, DMatrix<C64>) {
        let (da, dd) = self.dims();
        let states: Vec<(usize, usize)> =
            (0..da).filter(|&n| n <= total && total - n < dd).map(|n| (n, total - n)).collect();
        let phase = C64::from_polar(1.0, -self.alpha.arg());
        let mut h = DMatrix::<C64>::identity(states.len(), states.len()) * C64::new(self.coupling, 0.0);
        let zero = states.iter().position(|&(n, _)| n == 0);
        let one = states.iter().position(|&(n, _)| n == 1);
        if let (Some(i0), Some(i1)) = (zero, one) {
            // ⟨1, m−1| a† P₀ d |0, m⟩ = √m
            let amp = phase * (-(self.coupling) * (total as f64).sqrt() / self.alpha.norm());
            h[(i1, i0)] = amp;
            h[(i0, i1)] = amp.conj();
        }
        (states, h)
    }

    /// Dense generator on `control ⊗ target ⊗ D`, index `(c·d_A + n_A)·d_D + n_D`.
    pub fn hamiltonian(&self) -> DMatrix<C64> {
        let (da, dd) = self.dims();
        let n = 2 * da * dd;
        let mut h = DMatrix::zeros(n, n);
        for total in 0..da + dd - 1 {
            let (states, block) = self.block(total);
            let idx: Vec<usize> = states.iter().map(|&(a, d)| (da + a) * dd + d).collect();
            for (i, &r) in idx.iter().enumerate() {
                for (j, &c) in idx.iter().enumerate() {
                    h[(r, c)] = block[(i, j)];
                }
            }
        }
        h
    }

    /// `n_A + n_D` on the same local space.
    pub fn number_operator(&self) -> DMatrix<C64> {
        let (da, dd) = self.dims();
        let n = 2 * da * dd;
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(((i / dd) % da + i % dd) as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    fn unitary(&self, control: usize, target: usize) -> Result<LocalUnitary> {
        let (da, dd) = self.dims();
        let mut blocks = Vec::new();
        for total in 0..da + dd - 1 {
            let (states, h) = self.block(total);
            let u = linalg::expm_hermitian(&h, 1.0)?;
            let idx = states.iter().map(|&(a, d)| (da + a) * dd + d).collect();
            blocks.push((idx, u));
        }
        Ok(LocalUnitary { factors: vec![control, target, D], blocks })
    }
}

/// How the virtual CNOTs are realized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    /// Coherent sink with amplitude `alpha`; the cutoff defaults to the
    /// tail-bound rule.
    Coherent { alpha: C64, cutoff: Option<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeleportConfig {
    pub orientation: Orientation,
    pub site_cap: u32,
    pub tail_tolerance: f64,
}

impl Default for TeleportConfig {
    fn default() -> Self {
        TeleportConfig {
            orientation: Orientation::default(),
            site_cap: DEFAULT_SITE_CAP,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

/// Outcome of one measurement branch.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolResult {
    /// Source qubit 1 up, source qubit 2 up, A↑ occupied, A↓ occupied.
    pub bits: [bool; 4],
    pub probability: f64,
    /// Bob's corrected two-qubit state, order ↑↑, ↑↓, ↓↑, ↓↓.
    #[serde(skip)]
    pub output: DMatrix<C64>,
    pub fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchAnalysis {
    pub branches: Vec<ProtocolResult>,
    /// Probability-weighted mean fidelity over the branches.
    pub average_fidelity: f64,
    /// Weight that left Bob's qubit block or the measured bit values.
    pub leakage: f64,
    /// Sink description in the coherent mode.
    pub source: Option<CoherentSource>,
}

fn normalized_source(source: &[C64; 4]) -> Result<DVector<C64>> {
    let v = DVector::from_column_slice(source);
    let n = v.norm();
    if (n - 1.0).abs() > fock::NORM_TOLERANCE {
        return Err(Error::NotNormalized(n));
    }
    Ok(v)
}

struct Setup {
    register: Register,
    site_dim: usize,
    sink_dim: usize,
}

fn prepare(source: &DVector<C64>, statistics: Statistics, site_dim: usize, sink: &[C64]) -> Result<Setup> {
    let channel = channel_state(statistics);
    let chan_len = site_dim.pow(4);
    let mut chan = vec![C64::new(0.0, 0.0); chan_len];
    for (p, &a) in channel.iter() {
        let idx = p.counts().iter().fold(0, |acc, &n| acc * site_dim + n as usize);
        chan[idx] = a;
    }
    let sink_dim = sink.len();
    let mut amps = vec![C64::new(0.0, 0.0); 4 * chan_len * sink_dim];
    for j in 0..4 {
        // C digit 1 means spin up; source order ↑↑, ↑↓, ↓↑, ↓↓
        let (c1, c2) = (usize::from(j < 2), usize::from(j % 2 == 0));
        let s = source[j];
        if s.norm() == 0.0 {
            continue;
        }
        let base = (c1 * 2 + c2) * chan_len;
        for (ci, &ca) in chan.iter().enumerate() {
            if ca.norm() == 0.0 {
                continue;
            }
            for (di, &da) in sink.iter().enumerate() {
                amps[(base + ci) * sink_dim + di] = s * ca * da;
            }
        }
    }
    let dims = vec![2, 2, site_dim, site_dim, site_dim, site_dim, sink_dim];
    Ok(Setup { register: Register::new(dims, amps), site_dim, sink_dim })
}

/// Bob's unnormalized matrix in the qubit basis for one outcome, and the
/// total weight of that outcome.
fn branch_state(setup: &Setup, bits: [usize; 4], orientation: Orientation) -> (DMatrix<C64>, f64) {
    let reg = &setup.register;
    let mut fixed = 0;
    for (f, &b) in [C1, C2, A[0], A[1]].iter().zip(&bits) {
        fixed += b * reg.strides[*f];
    }
    let qubit_index: Vec<[usize; 2]> = (0..4).map(|j| orientation.occupations(j)).collect();
    let mut rho = DMatrix::<C64>::zeros(4, 4);
    let mut weight = 0.0;
    for d in 0..setup.sink_dim {
        let base = fixed + d * reg.strides[D];
        for bu in 0..setup.site_dim {
            for bd in 0..setup.site_dim {
                weight += reg.amps[base + bu * reg.strides[B[0]] + bd * reg.strides[B[1]]].norm_sqr();
            }
        }
        let v: Vec<C64> = qubit_index
            .iter()
            .map(|n| reg.amps[base + n[0] * reg.strides[B[0]] + n[1] * reg.strides[B[1]]])
            .collect();
        for i in 0..4 {
            for j in 0..4 {
                rho[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    (rho, weight)
}

const OUTCOMES: usize = 16;

fn outcome_bits(m: usize) -> [usize; 4] {
    [(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1]
}

fn run_gates(setup: &mut Setup, statistics: Statistics, mode: &Mode, sink: Option<&CoherentSource>, config: &TeleportConfig) -> Result<()> {
    for which in [1, 2] {
        let control = if which == 1 { C1 } else { C2 };
        let gate = match (mode, sink) {
            (Mode::Ideal, _) => ideal_cnot(which, config.orientation)?,
            (Mode::Coherent { .. }, Some(src)) => {
                let target = A[config.orientation.mode_of_qubit(which)];
                CoherentCnot::new(statistics, which, src.alpha, config.site_cap, src.cutoff)?.unitary(control, target)?
            }
            (Mode::Coherent { .. }, None) => unreachable!("coherent mode always has a sink"),
        };
        setup.register.apply(&gate);
    }
    setup.register.apply(&hadamard(C1));
    setup.register.apply(&hadamard(C2));
    Ok(())
}

/// Correction for every outcome, derived from ideal runs on the basis sources.
pub fn derive_corrections(statistics: Statistics, orientation: Orientation) -> Result<Vec<DMatrix<C64>>> {
    let config = TeleportConfig { orientation, ..TeleportConfig::default() };
    let mut kraus = vec![DMatrix::<C64>::zeros(4, 4); OUTCOMES];
    for j in 0..4 {
        let mut src = DVector::zeros(4);
        src[j] = C64::new(1.0, 0.0);
        let mut setup = prepare(&src, statistics, 2, &[C64::new(1.0, 0.0)])?;
        run_gates(&mut setup, statistics, &Mode::Ideal, None, &config)?;
        for (m, k) in kraus.iter_mut().enumerate() {
            let bits = outcome_bits(m);
            let reg = &setup.register;
            let mut fixed = 0;
            for (f, &b) in [C1, C2, A[0], A[1]].iter().zip(&bits) {
                fixed += b * reg.strides[*f];
            }
            for i in 0..4 {
                let n = orientation.occupations(i);
                k[(i, j)] = reg.amps[fixed + n[0] * reg.strides[B[0]] + n[1] * reg.strides[B[1]]];
            }
        }
    }
    kraus
        .iter()
        .map(|k| {
            let g = k.adjoint() * k;
            let c = g[(0, 0)].re;
            let defect = linalg::frobenius_distance(&g, &(DMatrix::identity(4, 4) * C64::new(c, 0.0)));
            if c <= 0.0 || defect > CORRECTION_TOLERANCE {
                return Err(Error::OutOfRange("branch map is not proportional to a unitary".into()));
            }
            Ok(k.adjoint() / C64::new(c.sqrt(), 0.0))
        })
        .collect()
}

/// Every measurement branch of the protocol for one source.
pub fn branch_analysis(
    source: &[C64; 4],
    statistics: Statistics,
    mode: Mode,
    config: &TeleportConfig,
) -> Result<BranchAnalysis> {
    let src = normalized_source(source)?;
    let sink = match mode {
        Mode::Ideal => None,
        Mode::Coherent { alpha, cutoff } => {
            if statistics != Statistics::Boson {
                return Err(Error::RequiresBosons("coherent-source teleportation".into()));
            }
            Some(match cutoff {
                Some(k) => CoherentSource::with_cutoff(alpha, k, config.tail_tolerance)?,
                None => CoherentSource::new(alpha, config.tail_tolerance)?,
            })
        }
    };
    let corrections = derive_corrections(statistics, config.orientation)?;
    let (site_dim, sink_amps) = match &sink {
        None => (2, vec![C64::new(1.0, 0.0)]),
        Some(s) => (config.site_cap as usize + 1, s.amplitudes.clone()),
    };
    let mut setup = prepare(&src, statistics, site_dim, &sink_amps)?;
    run_gates(&mut setup, statistics, &mode, sink.as_ref(), config)?;

    let mut branches = Vec::with_capacity(OUTCOMES);
    let mut captured = 0.0;
    let mut weighted = 0.0;
    for (m, corr) in corrections.iter().enumerate() {
        let bits = outcome_bits(m);
        let (rho, weight) = branch_state(&setup, bits, config.orientation);
        captured += weight;
        let corrected = corr * rho * corr.adjoint();
        let (output, fidelity) = if weight > 0.0 {
            let out = corrected / C64::new(weight, 0.0);
            let f = (src.adjoint() * &out * &src)[(0, 0)].re;
            (out, f)
        } else {
            (DMatrix::zeros(4, 4), 0.0)
        };
        weighted += weight * fidelity;
        branches.push(ProtocolResult { bits: bits.map(|b| b == 1), probability: weight, output, fidelity });
    }
    let total = setup.register.amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    Ok(BranchAnalysis {
        average_fidelity: weighted / captured,
        leakage: (total - captured).max(0.0),
        branches,
        source: sink,
    })
}

/// The branch with the given measured bits.
pub fn run_protocol_branch(
    source: &[C64; 4],
    statistics: Statistics,
    mode: Mode,
    config: &TeleportConfig,
    bits: [bool; 4],
) -> Result<ProtocolResult> {
    let analysis = branch_analysis(source, statistics, mode, config)?;
    Ok(analysis.branches.into_iter().find(|b| b.bits == bits).expect("all outcomes enumerated"))
}

/// Run the protocol once, drawing the measurement outcome from `rng`.
pub fn run_protocol<R: Rng + ?Sized>(
    source: &[C64; 4],
    statistics: Statistics,
    mode: Mode,
    config: &TeleportConfig,
    rng: &mut R,
) -> Result<ProtocolResult> {
    let analysis = branch_analysis(source, statistics, mode, config)?;
    let total: f64 = analysis.branches.iter().map(|b| b.probability).sum();
    let mut x = rng.random::<f64>() * total;
    let last = analysis.branches.len() - 1;
    for (i, b) in analysis.branches.into_iter().enumerate() {
        if x < b.probability || i == last {
            return Ok(b);
        }
        x -= b.probability;
    }
    unreachable!("at least one branch")
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepPoint {
    pub mean_occupation: f64,
    pub cutoff: usize,
    pub average_fidelity: f64,
    pub leakage: f64,
}

/// Average fidelity of the coherent mode for each `|α|²` (real positive α).
pub fn coherent_sweep(
    source: &[C64; 4],
    mean_occupations: &[f64],
    config: &TeleportConfig,
) -> Result<Vec<SweepPoint>> {
    mean_occupations
        .iter()
        .map(|&n| {
            let mode = Mode::Coherent { alpha: C64::new(n.sqrt(), 0.0), cutoff: None };
            let a = branch_analysis(source, Statistics::Boson, mode, config)?;
            Ok(SweepPoint {
                mean_occupation: n,
                cutoff: a.source.as_ref().map_or(0, |s| s.cutoff),
                average_fidelity: a.average_fidelity,
                leakage: a.leakage,
            })
        })
        .collect()
}
