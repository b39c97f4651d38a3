//! JSON state files.
//!
//! ```json
//! {
//!   "statistics": "fermion",
//!   "modes": [{"site": "A", "spin": "up"}, {"site": "A", "spin": "down"}],
//!   "terms": [{"occupations": [1, 1], "re": 1.0, "im": 0.0}]
//! }
//! ```
//!
//! `occupations` follow the order of `modes` as written in the file; the
//! loader maps them onto canonical order. `nmax` is read for bosons only.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FockSpace, ModeLabel, OccupationPattern, QuantumState, Statistics, C64, DEFAULT_NMAX};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateTerm {
    pub occupations: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub statistics: Statistics,
    pub modes: Vec<ModeLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<u32>,
    pub terms: Vec<StateTerm>,
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    /// Build the normalized state; also returns the norm found in the file.
    pub fn to_state(&self) -> Result<(QuantumState, f64)> {
        let nmax = self.nmax.unwrap_or(DEFAULT_NMAX);
        let space = FockSpace::new(self.modes.clone(), self.statistics, nmax)?;
        // file position -> canonical index
        let perm: Vec<usize> =
            self.modes.iter().map(|m| space.index_of(m)).collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.occupations.len() != perm.len() {
                return Err(Error::PatternLength { expected: perm.len(), got: t.occupations.len() });
            }
            let mut counts = vec![0; perm.len()];
            for (file_pos, &n) in t.occupations.iter().enumerate() {
                counts[perm[file_pos]] = n;
            }
            let sign = if self.statistics == Statistics::Fermion {
                reorder_sign(&t.occupations, &perm)
            } else {
                1.0
            };
            terms.push((OccupationPattern::new(counts), C64::new(t.re, t.im) * sign));
        }
        let state = QuantumState::from_terms(&space, terms)?;
        let norm = state.norm();
        Ok((state.normalize()?, norm))
    }

    pub fn from_state(state: &QuantumState) -> Self {
        let space = state.space();
        let nmax = match space.statistics() {
            Statistics::Boson => space.caps().iter().copied().max(),
            Statistics::Fermion => None,
        };
        StateFile {
            statistics: space.statistics(),
            modes: space.modes().to_vec(),
            nmax,
            terms: state
                .iter()
                .map(|(p, a)| StateTerm { occupations: p.counts().to_vec(), re: a.re, im: a.im })
                .collect(),
        }
    }

    pub fn space(&self) -> Result<Arc<FockSpace>> {
        FockSpace::new(self.modes.clone(), self.statistics, self.nmax.unwrap_or(DEFAULT_NMAX))
    }
}

/// Sign from reordering the creation operators of a file-ordered fermionic
/// pattern into canonical order (parity of inversions among occupied modes).
fn reorder_sign(occupations: &[u32], perm: &[usize]) -> f64 {
    let occupied: Vec<usize> =
        (0..occupations.len()).filter(|&i| occupations[i] > 0).map(|i| perm[i]).collect();
    let mut inversions = 0;
    for i in 0..occupied.len() {
        for j in i + 1..occupied.len() {
            if occupied[i] > occupied[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}
