//! Schrödinger-picture evaluation used to cross-check the Heisenberg path.
//!
//! This module only shares the tensor substrate with [`crate::measurement`]:
//! states are pushed through the interaction steps by matrix-vector products
//! and observables stay fixed.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::measurement::{heisenberg_evolve, InteractionSequence};
use crate::tensor::{expectation, Layout, Operator, StateVector, NORM_TOL};

/// Threshold on singular values when counting the Schmidt rank.
pub const SCHMIDT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EvolvedState {
    pub state: StateVector,
    /// Tags of the steps applied so far, in order.
    pub applied: Vec<String>,
}

/// Apply the steps of `seq` to `initial` in sequence order.
pub fn schrodinger_evolve(initial: &StateVector, seq: &InteractionSequence) -> Result<EvolvedState> {
    let mut state = initial.clone();
    let mut applied = Vec::with_capacity(seq.len());
    for (tag, u) in seq.steps() {
        state = u.apply(&state)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        applied.push(tag.clone());
    }
    Ok(EvolvedState { state, applied })
}

/// `|⟨ψ_0|U† A U|ψ_0⟩ − ⟨Uψ_0|A|Uψ_0⟩|`.
pub fn cross_check(op: &Operator, seq: &InteractionSequence, initial: &StateVector) -> Result<f64> {
    if seq.is_empty() {
        return Ok(0.0);
    }
    let heisenberg = expectation(initial, &heisenberg_evolve(op, seq)?)?;
    let evolved = schrodinger_evolve(initial, seq)?;
    let schrodinger = expectation(&evolved.state, op)?;
    Ok((heisenberg - schrodinger).norm())
}

/// Schmidt rank of `state` across the cut between `labels` and the remaining
/// factors.
pub fn schmidt_rank(state: &StateVector, labels: &[&str]) -> Result<usize> {
    let layout = state.layout();
    let group = Layout::new(
        layout
            .factors()
            .iter()
            .filter(|f| labels.contains(&f.label.as_str()))
            .map(|f| (f.label.clone(), f.dim)),
    )?;
    if group.len() != labels.len() {
        let missing = labels
            .iter()
            .find(|l| layout.position(l).is_none())
            .copied()
            .unwrap_or_default();
        return Err(SimError::UnknownLabel(missing.to_string()));
    }
    let rows = layout.offsets_for(&group)?;
    let cols = layout.complement_offsets(&group)?;
    let amps = state.amplitudes();
    let m = DMatrix::<Complex64>::from_fn(rows.len(), cols.len(), |r, c| amps[rows[r] + cols[c]]);
    let sv = m.singular_values();
    Ok(sv.iter().filter(|&&s| s > SCHMIDT_TOL).count())
}
