//! EPR-Bohm experiment on the layout `[O1:3, O2:3, S1:2, S2:2]`.
//!
//! The initial state is fixed: both observers ignorant, particle 1 up and
//! particle 2 down along `z`. An optional singlet entangler acts on the
//! particles before the two measurements.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::measurement::{
    heisenberg_evolve, measurement_unitary, spin_projectors, BetaPreset, Direction,
    InteractionSequence, ObserverSpec, ShiftCompletion,
};
use crate::tensor::{embed, expectation_real, sigma_z, Layout, Operator, StateVector};

pub const O1: &str = "O1";
pub const O2: &str = "O2";
pub const S1: &str = "S1";
pub const S2: &str = "S2";

pub fn eprb_layout() -> Layout {
    Layout::new([(O1, 3), (O2, 3), (S1, 2), (S2, 2)]).expect("valid layout")
}

/// `|β_0⟩|β_0⟩|α_1⟩|α_2⟩`.
pub fn eprb_initial_state() -> StateVector {
    StateVector::basis(&eprb_layout(), &[0, 0, 0, 1]).expect("valid digits")
}

/// Two-particle entangler on `[S1, S2]` taking `|α_1 α_2⟩` to the singlet.
/// It fixes `|α_1α_1⟩` and `|α_2α_2⟩` and sends `|α_2α_1⟩` to the symmetric
/// combination.
pub fn singlet_entangler() -> Operator {
    let h = FRAC_1_SQRT_2;
    // Columns are images of |11⟩, |12⟩, |21⟩, |22⟩.
    let rows: [&[f64]; 4] = [
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, h, h, 0.0],
        &[0.0, -h, h, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ];
    Operator::from_real(&Layout::new([(S1, 2), (S2, 2)]).expect("valid"), &rows)
        .expect("4×4 matrix")
}

#[derive(Debug, Clone, PartialEq)]
pub struct EprbConfig {
    pub n1: Direction,
    pub n2: Direction,
    pub entangled: bool,
    pub beta: [f64; 3],
    pub completion: ShiftCompletion,
}

impl EprbConfig {
    pub fn new(n1: Direction, n2: Direction, entangled: bool) -> Self {
        Self {
            n1,
            n2,
            entangled,
            beta: BetaPreset::Spin.values(),
            completion: ShiftCompletion::Cyclic,
        }
    }

    pub fn with_beta(mut self, beta: [f64; 3]) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_preset(self, preset: BetaPreset) -> Self {
        self.with_beta(preset.values())
    }

    fn observer(&self, label: &str) -> Result<ObserverSpec> {
        Ok(ObserverSpec::readout(label, &self.beta)?.with_completion(self.completion))
    }
}

/// Time-`t_0` Heisenberg operators on the EPRB layout.
#[derive(Debug, Clone)]
pub struct EprbObservables {
    pub a1: Operator,
    pub a2: Operator,
    pub b1: Operator,
    pub b2: Operator,
}

/// A configured pipeline: layout, initial state, interaction sequence and
/// the `t_0` observables.
#[derive(Debug, Clone)]
pub struct EprbExperiment {
    pub initial: StateVector,
    pub sequence: InteractionSequence,
    pub observables: EprbObservables,
}

impl EprbExperiment {
    pub fn new(cfg: &EprbConfig) -> Result<Self> {
        let layout = eprb_layout();
        let spec1 = cfg.observer(O1)?;
        let spec2 = cfg.observer(O2)?;
        let mut sequence = InteractionSequence::new();
        if cfg.entangled {
            sequence.push("t1:U_E", embed(&singlet_entangler(), &layout)?)?;
        }
        sequence.push(
            "t2:U_M1",
            measurement_unitary(&layout, O1, S1, &spin_projectors(cfg.n1, S1)?, &spec1)?,
        )?;
        sequence.push(
            "t2:U_M2",
            measurement_unitary(&layout, O2, S2, &spin_projectors(cfg.n2, S2)?, &spec2)?,
        )?;
        let observables = EprbObservables {
            a1: embed(&sigma_z(S1)?, &layout)?,
            a2: embed(&sigma_z(S2)?, &layout)?,
            b1: embed(&spec1.observable(), &layout)?,
            b2: embed(&spec2.observable(), &layout)?,
        };
        Ok(Self {
            initial: eprb_initial_state(),
            sequence,
            observables,
        })
    }

    /// Same experiment with the two measurement steps performed in the
    /// opposite order.
    pub fn with_measurements_swapped(&self) -> Self {
        let n = self.sequence.len();
        Self {
            sequence: self.sequence.swapped(n - 2, n - 1),
            ..self.clone()
        }
    }

    pub fn evolve(&self, op: &Operator) -> Result<Operator> {
        heisenberg_evolve(op, &self.sequence)
    }

    /// `(⟨B1⟩, ⟨B2⟩, ⟨B1 B2⟩)` at the end of the sequence.
    pub fn correlations(&self) -> Result<(f64, f64, f64)> {
        let b1 = self.evolve(&self.observables.b1)?;
        let b2 = self.evolve(&self.observables.b2)?;
        let m1 = expectation_real(&self.initial, &b1)?;
        let m2 = expectation_real(&self.initial, &b2)?;
        let m12 = expectation_real(&self.initial, &b1.matmul(&b2)?)?;
        Ok((m1, m2, m12))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprbReport {
    pub mean_b1: f64,
    pub mean_b2: f64,
    pub mean_b1b2: f64,
    /// Joint spin-up probability, from a rerun under the probability preset.
    pub p_uu: f64,
}

pub fn run_eprb(cfg: &EprbConfig) -> Result<EprbReport> {
    let (mean_b1, mean_b2, mean_b1b2) = EprbExperiment::new(cfg)?.correlations()?;
    let prob_cfg = cfg.clone().with_preset(BetaPreset::Probability);
    let (_, _, p_uu) = EprbExperiment::new(&prob_cfg)?.correlations()?;
    Ok(EprbReport {
        mean_b1,
        mean_b2,
        mean_b1b2,
        p_uu,
    })
}

/// Joint spin-up probability for the entangled pair.
pub fn p_uu(n1: Direction, n2: Direction) -> Result<f64> {
    Ok(run_eprb(&EprbConfig::new(n1, n2, true))?.p_uu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellQ {
    pub directions: [Direction; 3],
    /// `P_uu(d0,d1)`, `P_uu(d1,d2)`, `P_uu(d2,d0)`.
    pub addends: [f64; 3],
    pub q: f64,
}

/// Analyzer azimuths (degrees) of the standard three-setting test.
pub const BELL_ANGLES_DEG: [f64; 3] = [0.0, 120.0, 240.0];

pub fn bell_q(directions: [Direction; 3]) -> Result<BellQ> {
    let mut addends = [0.0; 3];
    for (k, slot) in addends.iter_mut().enumerate() {
        *slot = p_uu(directions[k], directions[(k + 1) % 3])?;
    }
    Ok(BellQ {
        directions,
        addends,
        q: addends.iter().sum(),
    })
}

/// Three transverse analyzers at the given azimuths in degrees.
pub fn transverse_directions(phis_deg: [f64; 3]) -> [Direction; 3] {
    phis_deg.map(|p| Direction::transverse(p.to_radians()))
}

/// Closed-form predictions used to cross-check the matrix pipeline.
pub mod closed_form {
    use super::*;

    /// Unentangled `(⟨B1⟩, ⟨B2⟩)`; the product of the two is `⟨B1 B2⟩`.
    pub fn unentangled_means(cfg: &EprbConfig) -> (f64, f64) {
        let [_, b1, b2] = cfg.beta;
        let (s1, c1) = (cfg.n1.theta / 2.0).sin_cos();
        let (s2, c2) = (cfg.n2.theta / 2.0).sin_cos();
        (
            b1 * c1 * c1 + b2 * s1 * s1,
            b1 * s2 * s2 + b2 * c2 * c2,
        )
    }

    /// Entangled `⟨B1 B2⟩ = ((β1+β2)² − (β1−β2)² n1·n2) / 4`.
    pub fn entangled_correlation(cfg: &EprbConfig) -> f64 {
        let [_, b1, b2] = cfg.beta;
        ((b1 + b2).powi(2) - (b1 - b2).powi(2) * cfg.n1.dot(&cfg.n2)) / 4.0
    }
}
