use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{FockSpace, QuantumState, C64};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    fn dagger(self) -> Ladder {
        match self {
            Ladder::Create(m) => Ladder::Annihilate(m),
            Ladder::Annihilate(m) => Ladder::Create(m),
        }
    }
}

/// A second-quantized operator: a linear combination of ladder-operator
/// products. Each product is written left to right as in the usual notation
/// and acts right to left on a state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockOp {
    terms: Vec<(C64, Vec<Ladder>)>,
}

impl FockOp {
    pub fn zero() -> Self {
        FockOp { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        FockOp::scalar(C64::new(1.0, 0.0))
    }

    pub fn scalar(c: C64) -> Self {
        FockOp { terms: vec![(c, Vec::new())] }
    }

    pub fn create(mode: usize) -> Self {
        FockOp { terms: vec![(C64::new(1.0, 0.0), vec![Ladder::Create(mode)])] }
    }

    pub fn annihilate(mode: usize) -> Self {
        FockOp { terms: vec![(C64::new(1.0, 0.0), vec![Ladder::Annihilate(mode)])] }
    }

    /// `n_mode = c†c`.
    pub fn number(mode: usize) -> Self {
        FockOp::create(mode) * FockOp::annihilate(mode)
    }

    /// `Σ_i coeffs[i] c†_i`.
    pub fn creation_combination(coeffs: &[C64]) -> Self {
        FockOp {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(i, c)| (*c, vec![Ladder::Create(i)]))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(C64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn dagger(&self) -> Self {
        FockOp {
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| (c.conj(), ops.iter().rev().map(|l| l.dagger()).collect()))
                .collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        FockOp { terms: self.terms.iter().map(|(a, ops)| (a * c, ops.clone())).collect() }
    }

    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        let mut out = QuantumState::zero(state.space());
        for (c, ops) in &self.terms {
            let mut t = state.clone();
            for op in ops.iter().rev() {
                t = match *op {
                    Ladder::Create(m) => t.create(m)?,
                    Ladder::Annihilate(m) => t.annihilate(m)?,
                };
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t.scale(*c))?;
        }
        Ok(out)
    }

    /// Apply to the vacuum and normalize; a vanishing result is an error.
    pub fn build(&self, space: &Arc<FockSpace>) -> Result<QuantumState> {
        self.apply(&QuantumState::vacuum(space))?.normalize()
    }
}

/// Apply a linear combination of creation-operator strings to the vacuum of
/// `space` and normalize the result.
pub fn build_from_ops(space: &Arc<FockSpace>, op: &FockOp) -> Result<QuantumState> {
    op.build(space)
}

impl Add for FockOp {
    type Output = FockOp;
    fn add(mut self, rhs: FockOp) -> FockOp {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Sub for FockOp {
    type Output = FockOp;
    fn sub(self, rhs: FockOp) -> FockOp {
        self + (-rhs)
    }
}

impl Neg for FockOp {
    type Output = FockOp;
    fn neg(self) -> FockOp {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for FockOp {
    type Output = FockOp;
    fn mul(self, rhs: FockOp) -> FockOp {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, l) in &self.terms {
            for (b, r) in &rhs.terms {
                let mut ops = l.clone();
                ops.extend_from_slice(r);
                terms.push((a * b, ops));
            }
        }
        FockOp { terms }
    }
}

impl Mul<C64> for FockOp {
    type Output = FockOp;
    fn mul(self, rhs: C64) -> FockOp {
        self.scale(rhs)
    }
}

impl Mul<f64> for FockOp {
    type Output = FockOp;
    fn mul(self, rhs: f64) -> FockOp {
        self.scale(C64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fock::{OccupationPattern, Statistics};

    fn pat(v: &[u32]) -> OccupationPattern {
        OccupationPattern::new(v.to_vec())
    }

    #[test]
    fn molecular_orbital_signs() {
        // (c†A↑ + c†B↑)(c†A↓ + c†B↓)|0⟩ / 2, expanded by hand:
        // c†A↑c†A↓ -> +1100, c†A↑c†B↓ -> +1001, c†B↑c†A↓ -> -0110, c†B↑c†B↓ -> +0011
        let space = FockSpace::two_site(Statistics::Fermion);
        let op = (FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3));
        let s = build_from_ops(&space, &op).unwrap();
        let expect = [([1, 1, 0, 0], 0.5), ([1, 0, 0, 1], 0.5), ([0, 1, 1, 0], -0.5), ([0, 0, 1, 1], 0.5)];
        assert_eq!(s.len(), 4);
        for (p, a) in expect {
            assert!((s.amplitude(&pat(&p)) - C64::new(a, 0.0)).norm() < 1e-15, "{p:?}");
        }
        assert!((s.inner(&s).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pauli_violation_is_zero_norm() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let op = FockOp::create(0) * FockOp::create(0);
        assert_eq!(build_from_ops(&space, &op).unwrap_err(), Error::ZeroNorm);
    }

    #[test]
    fn localized_singlet() {
        let space = FockSpace::two_site(Statistics::Fermion);
        let op = FockOp::create(0) * FockOp::create(3) - FockOp::create(1) * FockOp::create(2);
        let s = build_from_ops(&space, &op).unwrap();
        let r = 0.5f64.sqrt();
        assert!((s.amplitude(&pat(&[1, 0, 0, 1])) - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&pat(&[0, 1, 1, 0])) - C64::new(-r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dagger_of_number_is_number() {
        let n = FockOp::number(2);
        assert_eq!(n.dagger(), n);
    }
}
