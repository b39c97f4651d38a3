//! Site-spin modes, occupation-number basis states and ladder operators.
//!
//! Every [`FockSpace`] fixes a canonical mode order at construction. Basis
//! states are stored relative to that order: the fermionic pattern
//! `n_1 n_2 ... n_M` stands for `(c†_1)^{n_1} (c†_2)^{n_2} ... |0⟩` with the
//! lowest mode leftmost, so a creation operator on mode `j` picks up the sign
//! `(-1)^{n_1 + ... + n_{j-1}}`. Bosonic patterns are the normalized number
//! states `Π (a†_j)^{n_j} / sqrt(n_j!) |0⟩`.

mod ops;
mod state_file;

pub use ops::{build_from_ops, FockOp, Ladder};
pub use state_file::{StateFile, StateTerm};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Amplitudes below this magnitude are dropped after arithmetic.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// Tolerance used when deciding whether a state counts as normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Default bosonic occupation cap.
pub const DEFAULT_NMAX: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
    None,
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Up => write!(f, "↑"),
            Spin::Down => write!(f, "↓"),
            Spin::None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Fermion => write!(f, "fermion"),
            Statistics::Boson => write!(f, "boson"),
        }
    }
}

/// `(site, arm)` of a mode.
pub type Location = (String, Option<String>);

/// A single-particle mode: a site (optionally split into arms) and a spin.
///
/// Modes order lexicographically by `(site, arm, spin)` with up before down,
/// which gives `A↑, A↓, B↑, B↓` for the two-site system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub site: String,
    pub spin: Spin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<String>,
}

impl ModeLabel {
    pub fn new(site: impl Into<String>, spin: Spin) -> Self {
        ModeLabel { site: site.into(), spin, arm: None }
    }

    pub fn with_arm(site: impl Into<String>, arm: impl Into<String>, spin: Spin) -> Self {
        ModeLabel { site: site.into(), spin, arm: Some(arm.into()) }
    }

    fn sort_key(&self) -> (&str, Option<&str>, Spin) {
        (self.site.as_str(), self.arm.as_deref(), self.spin)
    }

    /// The spatial location of the mode, ignoring spin.
    pub fn location(&self) -> Location {
        (self.site.clone(), self.arm.clone())
    }
}

impl PartialOrd for ModeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.site)?;
        if let Some(arm) = &self.arm {
            write!(f, "{arm}")?;
        }
        write!(f, "{}", self.spin)
    }
}

/// A fixed, canonically ordered set of modes with one particle statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSpace {
    modes: Vec<ModeLabel>,
    statistics: Statistics,
    caps: Vec<u32>,
}

impl FockSpace {
    /// Fermionic space over the given modes (sorted into canonical order).
    pub fn fermions(modes: Vec<ModeLabel>) -> Result<Arc<Self>> {
        let n = modes.len();
        Self::build(modes, Statistics::Fermion, vec![1; n])
    }

    /// Bosonic space with a uniform occupation cap `nmax`.
    pub fn bosons(modes: Vec<ModeLabel>, nmax: u32) -> Result<Arc<Self>> {
        let n = modes.len();
        Self::build(modes, Statistics::Boson, vec![nmax; n])
    }

    pub fn new(modes: Vec<ModeLabel>, statistics: Statistics, nmax: u32) -> Result<Arc<Self>> {
        match statistics {
            Statistics::Fermion => Self::fermions(modes),
            Statistics::Boson => Self::bosons(modes, nmax),
        }
    }

    /// Bosonic space with one cap per mode, given in the same order as `modes`.
    pub fn bosons_with_caps(modes: Vec<ModeLabel>, caps: Vec<u32>) -> Result<Arc<Self>> {
        if caps.len() != modes.len() {
            return Err(Error::Dimension { expected: modes.len(), got: caps.len() });
        }
        Self::build(modes, Statistics::Boson, caps)
    }

    fn build(modes: Vec<ModeLabel>, statistics: Statistics, caps: Vec<u32>) -> Result<Arc<Self>> {
        if modes.is_empty() {
            return Err(Error::EmptyModes);
        }
        let mut paired: Vec<(ModeLabel, u32)> = modes.into_iter().zip(caps).collect();
        paired.sort_by(|a, b| a.0.cmp(&b.0));
        for w in paired.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateMode(w[0].0.to_string()));
            }
        }
        let (modes, caps) = paired.into_iter().unzip();
        Ok(Arc::new(FockSpace { modes, statistics, caps }))
    }

    /// The two-site, spin-1/2 system `A↑, A↓, B↑, B↓`.
    pub fn two_site(statistics: Statistics) -> Arc<Self> {
        let modes = two_site_modes();
        match statistics {
            Statistics::Fermion => Self::fermions(modes),
            Statistics::Boson => Self::bosons(modes, DEFAULT_NMAX),
        }
        .expect("static mode list is valid")
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn cap(&self, mode: usize) -> u32 {
        self.caps[mode]
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn index_of(&self, label: &ModeLabel) -> Result<usize> {
        self.modes
            .binary_search(label)
            .map_err(|_| Error::UnknownMode(label.to_string()))
    }

    /// Index of the arm-less mode `(site, spin)`.
    pub fn mode(&self, site: &str, spin: Spin) -> Result<usize> {
        self.index_of(&ModeLabel::new(site, spin))
    }

    /// All modes belonging to a site, across arms and spins.
    pub fn site_modes(&self, site: &str) -> Vec<usize> {
        (0..self.modes.len()).filter(|&i| self.modes[i].site == site).collect()
    }

    /// All modes of one arm of a site.
    pub fn arm_modes(&self, site: &str, arm: &str) -> Vec<usize> {
        (0..self.modes.len())
            .filter(|&i| self.modes[i].site == site && self.modes[i].arm.as_deref() == Some(arm))
            .collect()
    }

    /// A space over a subset of this one's modes (indices in canonical order).
    pub fn subspace(&self, modes: &[usize]) -> Result<Arc<FockSpace>> {
        for &m in modes {
            self.check_mode(m)?;
        }
        let labels = modes.iter().map(|&m| self.modes[m].clone()).collect();
        let caps = modes.iter().map(|&m| self.caps[m]).collect();
        Self::build(labels, self.statistics, caps)
    }

    /// Distinct `(site, arm)` locations, in canonical order, with their modes.
    pub fn locations(&self) -> Vec<(Location, Vec<usize>)> {
        let mut out: Vec<(Location, Vec<usize>)> = Vec::new();
        for (i, m) in self.modes.iter().enumerate() {
            let loc = m.location();
            match out.last_mut() {
                Some((l, v)) if *l == loc => v.push(i),
                _ => out.push((loc, vec![i])),
            }
        }
        out
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes.len() {
            Ok(())
        } else {
            Err(Error::UnknownMode(format!("#{mode}")))
        }
    }

    pub(crate) fn check_pattern(&self, pattern: &OccupationPattern) -> Result<()> {
        if pattern.len() != self.modes.len() {
            return Err(Error::PatternLength { expected: self.modes.len(), got: pattern.len() });
        }
        for (mode, (&count, &cap)) in pattern.counts().iter().zip(&self.caps).enumerate() {
            if count > cap {
                return Err(Error::OccupationOutOfRange { mode, count, cap });
            }
        }
        Ok(())
    }

    /// Every pattern over `modes` (a subset, in canonical order) whose total
    /// occupation is at most `max_total`, ordered by total count and then
    /// with earlier modes occupied first.
    pub fn enumerate_patterns(&self, modes: &[usize], max_total: u32) -> Vec<OccupationPattern> {
        let caps: Vec<u32> = modes.iter().map(|&m| self.caps[m]).collect();
        enumerate_bounded(&caps, max_total)
    }
}

pub(crate) fn enumerate_bounded(caps: &[u32], max_total: u32) -> Vec<OccupationPattern> {
    let mut out = Vec::new();
    let mut current = vec![0u32; caps.len()];
    fn rec(i: usize, left: u32, caps: &[u32], cur: &mut Vec<u32>, out: &mut Vec<OccupationPattern>) {
        if i == caps.len() {
            out.push(OccupationPattern(cur.clone()));
            return;
        }
        for n in 0..=caps[i].min(left) {
            cur[i] = n;
            rec(i + 1, left - n, caps, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_total, caps, &mut current, &mut out);
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| b.0.cmp(&a.0)));
    out
}

/// The mode labels `A↑, A↓, B↑, B↓`.
pub fn two_site_modes() -> Vec<ModeLabel> {
    vec![
        ModeLabel::new("A", Spin::Up),
        ModeLabel::new("A", Spin::Down),
        ModeLabel::new("B", Spin::Up),
        ModeLabel::new("B", Spin::Down),
    ]
}

/// Per-mode particle counts, in the canonical order of the owning space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationPattern(Vec<u32>);

impl OccupationPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        OccupationPattern(counts)
    }

    pub fn zeros(len: usize) -> Self {
        OccupationPattern(vec![0; len])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of particles in modes strictly before `mode`.
    pub fn count_before(&self, mode: usize) -> u32 {
        self.0[..mode].iter().sum()
    }

    /// The sub-pattern on the given modes.
    pub fn restrict(&self, modes: &[usize]) -> OccupationPattern {
        OccupationPattern(modes.iter().map(|&m| self.0[m]).collect())
    }

    pub(crate) fn with(&self, mode: usize, count: u32) -> OccupationPattern {
        let mut c = self.0.clone();
        c[mode] = count;
        OccupationPattern(c)
    }
}

impl fmt::Display for OccupationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&c| c < 10) {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl From<Vec<u32>> for OccupationPattern {
    fn from(v: Vec<u32>) -> Self {
        OccupationPattern(v)
    }
}

/// Sparse amplitude map over occupation patterns of one [`FockSpace`].
///
/// States produced by ladder operators are unnormalized and flagged as such;
/// [`QuantumState::normalize`] returns a normalized copy. Bosonic amplitude
/// pushed above a mode's cap is dropped and its weight accumulated in
/// [`QuantumState::truncation_loss`].
#[derive(Clone, Debug)]
pub struct QuantumState {
    space: Arc<FockSpace>,
    amps: BTreeMap<OccupationPattern, C64>,
    normalized: bool,
    truncation_loss: f64,
}

impl QuantumState {
    pub fn vacuum(space: &Arc<FockSpace>) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(OccupationPattern::zeros(space.len()), C64::new(1.0, 0.0));
        QuantumState { space: space.clone(), amps, normalized: true, truncation_loss: 0.0 }
    }

    /// The state with every amplitude zero.
    pub fn zero(space: &Arc<FockSpace>) -> Self {
        QuantumState {
            space: space.clone(),
            amps: BTreeMap::new(),
            normalized: false,
            truncation_loss: 0.0,
        }
    }

    pub fn basis(space: &Arc<FockSpace>, pattern: OccupationPattern) -> Result<Self> {
        space.check_pattern(&pattern)?;
        let mut amps = BTreeMap::new();
        amps.insert(pattern, C64::new(1.0, 0.0));
        Ok(QuantumState { space: space.clone(), amps, normalized: true, truncation_loss: 0.0 })
    }

    /// Unnormalized state from explicit terms; repeated patterns accumulate.
    pub fn from_terms<I>(space: &Arc<FockSpace>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationPattern, C64)>,
    {
        let mut state = QuantumState::zero(space);
        for (p, a) in terms {
            space.check_pattern(&p)?;
            *state.amps.entry(p).or_insert(C64::new(0.0, 0.0)) += a;
        }
        state.prune();
        Ok(state)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn statistics(&self) -> Statistics {
        self.space.statistics()
    }

    pub fn amplitude(&self, pattern: &OccupationPattern) -> C64 {
        self.amps.get(pattern).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationPattern, &C64)> {
        self.amps.iter()
    }

    /// Patterns with nonzero amplitude, in pattern order.
    pub fn support(&self) -> Vec<OccupationPattern> {
        self.amps.keys().cloned().collect()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    /// Whether this state carries the normalized flag.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n < PRUNE_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.scale(C64::new(1.0 / n, 0.0));
        out.normalized = true;
        Ok(out)
    }

    /// Error unless the state is normalized within [`NORM_TOLERANCE`].
    pub fn require_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            Err(Error::NotNormalized(n))
        } else {
            Ok(())
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = QuantumState {
            space: self.space.clone(),
            amps: self.amps.iter().map(|(p, a)| (p.clone(), a * c)).collect(),
            normalized: false,
            truncation_loss: self.truncation_loss * c.norm_sqr(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &QuantumState) -> Result<Self> {
        self.same_system(other)?;
        let mut out = QuantumState {
            space: self.space.clone(),
            amps: self.amps.clone(),
            normalized: false,
            truncation_loss: self.truncation_loss + other.truncation_loss,
        };
        for (p, a) in &other.amps {
            *out.amps.entry(p.clone()).or_insert(C64::new(0.0, 0.0)) += a;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &QuantumState) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn same_system(&self, other: &QuantumState) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::MismatchedSystems)
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        self.same_system(other)?;
        let (small, large, conj_small) = if self.amps.len() <= other.amps.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = C64::new(0.0, 0.0);
        for (p, a) in &small.amps {
            if let Some(b) = large.amps.get(p) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// Apply `c†_mode` (fermions) or `a†_mode` (bosons).
    pub fn create(&self, mode: usize) -> Result<Self> {
        self.space.check_mode(mode)?;
        let cap = self.space.cap(mode);
        let fermion = self.statistics() == Statistics::Fermion;
        let mut out = QuantumState::zero(&self.space);
        out.truncation_loss = self.truncation_loss;
        for (p, a) in &self.amps {
            let n = p.get(mode);
            if fermion {
                if n == 1 {
                    continue;
                }
                let sign = if p.count_before(mode) % 2 == 0 { 1.0 } else { -1.0 };
                out.accumulate(p.with(mode, 1), a * sign);
            } else if n >= cap {
                out.truncation_loss += a.norm_sqr() * (n as f64 + 1.0);
            } else {
                out.accumulate(p.with(mode, n + 1), a * ((n + 1) as f64).sqrt());
            }
        }
        out.prune();
        Ok(out)
    }

    /// Apply `c_mode` (fermions) or `a_mode` (bosons).
    pub fn annihilate(&self, mode: usize) -> Result<Self> {
        self.space.check_mode(mode)?;
        let fermion = self.statistics() == Statistics::Fermion;
        let mut out = QuantumState::zero(&self.space);
        out.truncation_loss = self.truncation_loss;
        for (p, a) in &self.amps {
            let n = p.get(mode);
            if n == 0 {
                continue;
            }
            let factor = if fermion {
                if p.count_before(mode) % 2 == 0 { 1.0 } else { -1.0 }
            } else {
                (n as f64).sqrt()
            };
            out.accumulate(p.with(mode, n - 1), a * factor);
        }
        out.prune();
        Ok(out)
    }

    /// Keep only patterns with `n` particles; also returns the retained norm.
    pub fn project_number(&self, n: u32) -> (Self, f64) {
        let mut out = QuantumState::zero(&self.space);
        for (p, a) in &self.amps {
            if p.total() == n {
                out.amps.insert(p.clone(), *a);
            }
        }
        let retained = out.norm();
        (out, retained)
    }

    /// Distinct total particle numbers present in the support.
    pub fn particle_numbers(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.amps.keys().map(|p| p.total()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Dense amplitude vector over an explicit basis; support outside it is an error.
    pub fn to_vector(&self, basis: &[OccupationPattern]) -> Result<nalgebra::DVector<C64>> {
        let index: BTreeMap<&OccupationPattern, usize> =
            basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut v = nalgebra::DVector::zeros(basis.len());
        for (p, a) in &self.amps {
            match index.get(p) {
                Some(&i) => v[i] = *a,
                None => return Err(Error::OutsideOperatorBasis),
            }
        }
        Ok(v)
    }

    pub fn from_vector(
        space: &Arc<FockSpace>,
        basis: &[OccupationPattern],
        v: &nalgebra::DVector<C64>,
    ) -> Result<Self> {
        if basis.len() != v.len() {
            return Err(Error::Dimension { expected: basis.len(), got: v.len() });
        }
        QuantumState::from_terms(space, basis.iter().cloned().zip(v.iter().copied()))
    }

    /// Apply a single-particle mode transformation: every creation operator
    /// `c†_j` is replaced by `Σ_i u[(i, j)] c†_i`.
    pub fn transform_modes(&self, u: &DMatrix<C64>) -> Result<Self> {
        let m = self.space.len();
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::Dimension { expected: m, got: u.nrows() });
        }
        let vac = QuantumState::vacuum(&self.space);
        let mut out = QuantumState::zero(&self.space);
        for (p, a) in &self.amps {
            // bosonic |n⟩ = (a†)^n / sqrt(n!) |0⟩
            let mut norm = 1.0;
            let mut ops = Vec::new();
            for (j, &n) in p.counts().iter().enumerate() {
                for k in 1..=n {
                    ops.push(j);
                    norm *= k as f64;
                }
            }
            let mut term = vac.scale(*a / norm.sqrt());
            for &j in ops.iter().rev() {
                let col: Vec<C64> = (0..m).map(|i| u[(i, j)]).collect();
                term = term.create_combination(&col)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Apply `Σ_i coeffs[i] c†_i`.
    pub fn create_combination(&self, coeffs: &[C64]) -> Result<Self> {
        let mut out = QuantumState::zero(&self.space);
        out.truncation_loss = self.truncation_loss;
        for (i, c) in coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let t = self.create(i)?;
            out.truncation_loss += (t.truncation_loss - self.truncation_loss) * c.norm_sqr();
            for (p, a) in t.amps {
                out.accumulate(p, a * c);
            }
        }
        out.prune();
        Ok(out)
    }

    fn accumulate(&mut self, p: OccupationPattern, a: C64) {
        *self.amps.entry(p).or_insert(C64::new(0.0, 0.0)) += a;
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE_TOLERANCE);
        self.normalized = false;
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, a) in &self.amps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, p)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Truncated coherent state `e^{-|α|²/2} Σ_k α^k / sqrt(k!) |k⟩` on one
/// bosonic mode, every other mode empty. The truncated tail is not
/// renormalized away; the state is flagged unnormalized.
pub fn coherent_state(space: &Arc<FockSpace>, mode: usize, alpha: C64) -> Result<QuantumState> {
    if space.statistics() != Statistics::Boson {
        return Err(Error::RequiresBosons("coherent state".into()));
    }
    space.check_mode(mode)?;
    let amps = coherent_amplitudes(alpha, space.cap(mode) as usize);
    let zero = OccupationPattern::zeros(space.len());
    QuantumState::from_terms(
        space,
        amps.into_iter().enumerate().map(|(k, a)| (zero.with(mode, k as u32), a)),
    )
}

/// Coherent-state amplitudes for number states `0..=cutoff`.
pub fn coherent_amplitudes(alpha: C64, cutoff: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    out.push(a);
    for k in 1..=cutoff {
        a = a * alpha / (k as f64).sqrt();
        out.push(a);
    }
    out
}
