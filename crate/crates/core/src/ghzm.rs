//! Three-particle GHZ-Mermin experiment with a meta-observer.
//!
//! Layout `[O0:3, O1:3, O2:3, O3:3, S1:2, S2:2, S3:2]` (dimension 648).
//! Observers `O1..O3` measure their particles, then `O0` records whether an
//! odd or even number of them saw spin up. Under the even preset
//! `γ = (0, 0, 1)` the expectation of `O0`'s awareness operator is `P_eu`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Result, SimError};
use crate::measurement::{
    heisenberg_evolve, measurement_unitary, shift_operator, spin_projectors, BetaPreset,
    Direction, InteractionSequence, ObserverSpec, ShiftCompletion,
};
use crate::tensor::{embed, expectation_real, kron, Layout, Operator, StateVector};

pub const O0: &str = "O0";
pub const OBSERVERS: [&str; 3] = ["O1", "O2", "O3"];
pub const PARTICLES: [&str; 3] = ["S1", "S2", "S3"];

pub fn ghzm_layout() -> Layout {
    Layout::new([
        (O0, 3),
        (OBSERVERS[0], 3),
        (OBSERVERS[1], 3),
        (OBSERVERS[2], 3),
        (PARTICLES[0], 2),
        (PARTICLES[1], 2),
        (PARTICLES[2], 2),
    ])
    .expect("valid layout")
}

fn particle_layout() -> Layout {
    Layout::new(PARTICLES.map(|p| (p, 2))).expect("valid layout")
}

/// All observers ignorant, all particles up along their own `z` axes.
pub fn ghzm_initial_state() -> StateVector {
    StateVector::basis(&ghzm_layout(), &[0; 7]).expect("valid digits")
}

/// Entangler on `[S1, S2, S3]` sending `|α_1α_1α_1⟩` to
/// `(|α_1α_1α_1⟩ − |α_2α_2α_2⟩)/√2`. The completion sends `|α_2α_2α_2⟩` to
/// the symmetric combination and fixes the six mixed basis states.
pub fn ghz_entangler() -> Operator {
    let h = FRAC_1_SQRT_2;
    let mut rows = [[0.0; 8]; 8];
    for (k, row) in rows.iter_mut().enumerate().skip(1).take(6) {
        row[k] = 1.0;
    }
    rows[0][0] = h;
    rows[7][0] = -h;
    rows[0][7] = h;
    rows[7][7] = h;
    let rows: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    Operator::from_real(&particle_layout(), &rows).expect("8×8 matrix")
}

/// Projectors on `[O1, O2, O3]` onto records with an odd or even number of
/// spin-up results. Both vanish whenever some observer is still ignorant.
#[derive(Debug, Clone)]
pub struct ParityProjectors {
    pub odd: Operator,
    pub even: Operator,
}

impl ParityProjectors {
    pub fn new() -> Self {
        let layout = Layout::new(OBSERVERS.map(|o| (o, 3))).expect("valid layout");
        let mut odd = vec![0.0; 27];
        let mut even = vec![0.0; 27];
        for digits in outcome_records() {
            let idx = layout.index_of(&digits).expect("valid digits");
            let ups = digits.iter().filter(|&&d| d == 1).count();
            if ups % 2 == 1 {
                odd[idx] = 1.0;
            } else {
                even[idx] = 1.0;
            }
        }
        Self {
            odd: Operator::diagonal(&layout, &odd).expect("27 entries"),
            even: Operator::diagonal(&layout, &even).expect("27 entries"),
        }
    }

    /// `P_odd + P_even`, the projector onto fully recorded outcomes.
    pub fn measured(&self) -> Operator {
        self.odd.add(&self.even).expect("same layout")
    }
}

impl Default for ParityProjectors {
    fn default() -> Self {
        Self::new()
    }
}

/// Outcome digits `(j, k, l)` with every observer aware (`β_1` or `β_2`).
fn outcome_records() -> impl Iterator<Item = [usize; 3]> {
    (0..8).map(|m| [1 + (m >> 2 & 1), 1 + (m >> 1 & 1), 1 + (m & 1)])
}

/// Named assignments `(γ_0, γ_1, γ_2)` for the meta-observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaPreset {
    /// `(0, 0, 1)`: expectation is the even-parity probability.
    Even,
    /// `(0, 1, 0)`: expectation is the odd-parity probability.
    Odd,
}

impl GammaPreset {
    pub fn values(self) -> [f64; 3] {
        match self {
            GammaPreset::Even => [0.0, 0.0, 1.0],
            GammaPreset::Odd => [0.0, 1.0, 0.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GammaPreset::Even => "even",
            GammaPreset::Odd => "odd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "even" => Some(GammaPreset::Even),
            "odd" => Some(GammaPreset::Odd),
            _ => None,
        }
    }
}

/// Meta-observer interaction `Σ_i v̂_i ⊗ P_i`, completed by the identity on
/// records where some observer is still ignorant. `v̂_1` fires on odd parity
/// and `v̂_2` on even parity.
pub fn parity_measurement_unitary(meta: &ObserverSpec) -> Result<Operator> {
    if meta.dim() != 3 {
        return Err(SimError::DimensionMismatch {
            expected: 3,
            found: meta.dim(),
        });
    }
    let parity = ParityProjectors::new();
    let v1 = shift_operator(meta, 1)?.with_label(O0)?;
    let v2 = shift_operator(meta, 2)?.with_label(O0)?;
    let id0 = Operator::identity(&Layout::single(O0, 3)?);
    let rest = Operator::identity(parity.odd.layout()).sub(&parity.measured())?;
    let local = kron(&v1, &parity.odd)?
        .add(&kron(&v2, &parity.even)?)?
        .add(&kron(&id0, &rest)?)?;
    embed(&local, &ghzm_layout())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhzmConfig {
    pub n: [Direction; 3],
    pub entangled: bool,
    pub gamma: [f64; 3],
    pub completion: ShiftCompletion,
}

impl GhzmConfig {
    pub fn new(n: [Direction; 3], entangled: bool) -> Self {
        Self {
            n,
            entangled,
            gamma: GammaPreset::Even.values(),
            completion: ShiftCompletion::Cyclic,
        }
    }

    /// Transverse analyzers at azimuths given in degrees.
    pub fn transverse_degrees(phis: [f64; 3], entangled: bool) -> Self {
        Self::new(phis.map(|p| Direction::transverse(p.to_radians())), entangled)
    }

    pub fn with_gamma(mut self, gamma: [f64; 3]) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_preset(self, preset: GammaPreset) -> Self {
        self.with_gamma(preset.values())
    }
}

#[derive(Debug, Clone)]
pub struct GhzmExperiment {
    pub initial: StateVector,
    pub sequence: InteractionSequence,
    /// `Ĝ = ĝ ⊗ I ⊗ ⋯ ⊗ I` at `t_0`.
    pub g: Operator,
}

impl GhzmExperiment {
    pub fn new(cfg: &GhzmConfig) -> Result<Self> {
        Self::with_entangler(cfg, &ghz_entangler())
    }

    /// Build with a caller-supplied entangler on `[S1, S2, S3]`; it is only
    /// used when `cfg.entangled` is set.
    pub fn with_entangler(cfg: &GhzmConfig, entangler: &Operator) -> Result<Self> {
        let layout = ghzm_layout();
        let meta = ObserverSpec::readout(O0, &cfg.gamma)?.with_completion(cfg.completion);
        let mut sequence = InteractionSequence::new();
        if cfg.entangled {
            sequence.push("t1:U_E", embed(entangler, &layout)?)?;
        }
        for p in 0..3 {
            let spec = ObserverSpec::new(OBSERVERS[p], &BetaPreset::Spin.values())?
                .with_completion(cfg.completion);
            let projectors = spin_projectors(cfg.n[p], PARTICLES[p])?;
            sequence.push(
                format!("t2:U_M{}", p + 1),
                measurement_unitary(&layout, OBSERVERS[p], PARTICLES[p], &projectors, &spec)?,
            )?;
        }
        sequence.push("t3:V", parity_measurement_unitary(&meta)?)?;
        Ok(Self {
            initial: ghzm_initial_state(),
            sequence,
            g: embed(&meta.observable(), &layout)?,
        })
    }

    /// Reorder the three spin measurements; `order[k]` is the particle
    /// (0-based) measured `k`-th.
    pub fn with_measurement_order(&self, order: [usize; 3]) -> Self {
        let offset = self.sequence.len() - 4;
        let steps = self.sequence.steps();
        let mut seq = InteractionSequence::new();
        for (tag, u) in &steps[..offset] {
            seq.push(tag.clone(), u.clone()).expect("already validated");
        }
        for &p in &order {
            let (tag, u) = &steps[offset + p];
            seq.push(tag.clone(), u.clone()).expect("already validated");
        }
        let (tag, u) = &steps[offset + 3];
        seq.push(tag.clone(), u.clone()).expect("already validated");
        Self {
            sequence: seq,
            ..self.clone()
        }
    }

    /// `Ĝ(t_3)`.
    pub fn g_t3(&self) -> Result<Operator> {
        heisenberg_evolve(&self.g, &self.sequence)
    }

    pub fn expectation(&self) -> Result<f64> {
        expectation_real(&self.initial, &self.g_t3()?)
    }
}

/// `⟨ψ_G, t_0| Ĝ(t_3) |ψ_G, t_0⟩` for the configured `γ`; with the default
/// even preset this is `P_eu`.
pub fn run_ghzm(cfg: &GhzmConfig) -> Result<f64> {
    GhzmExperiment::new(cfg)?.expectation()
}

/// Closed-form `P_eu` used to cross-check the matrix pipeline.
pub mod closed_form {
    use super::*;

    /// `(1 + cos(φ1+φ2+φ3) sinθ1 sinθ2 sinθ3) / 2`.
    pub fn entangled_p_even(n: &[Direction; 3]) -> f64 {
        let phase: f64 = n.iter().map(|d| d.phi).sum();
        let amp: f64 = n.iter().map(|d| d.theta.sin()).product();
        (1.0 + phase.cos() * amp) / 2.0
    }

    /// Probability of an even number of up results for three independent
    /// particles prepared up along `z`.
    pub fn unentangled_p_even(n: &[Direction; 3]) -> f64 {
        let up: Vec<f64> = n.iter().map(|d| (d.theta / 2.0).cos().powi(2)).collect();
        let down: Vec<f64> = n.iter().map(|d| (d.theta / 2.0).sin().powi(2)).collect();
        up[0] * up[1] * down[2]
            + up[0] * down[1] * up[2]
            + down[0] * up[1] * up[2]
            + down[0] * down[1] * down[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ONE;
    use num_complex::Complex64;

    #[test]
    fn entangler_column() {
        let u = ghz_entangler();
        assert!(u.is_unitary(1e-15));
        let l = u.layout().clone();
        let out = u.apply(&StateVector::basis(&l, &[0, 0, 0]).unwrap()).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[7] + Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parity_projectors_partition_measured_subspace() {
        let p = ParityProjectors::new();
        assert!(p.odd.is_hermitian(0.0) && p.even.is_hermitian(0.0));
        assert!(p.odd.matmul(&p.odd).unwrap().approx_eq(&p.odd, 1e-15));
        assert_eq!(p.odd.matmul(&p.even).unwrap().frobenius_norm(), 0.0);
        assert_eq!(p.measured().trace(), Complex64::new(8.0, 0.0));
        // |β1 β2 β2⟩ is odd, |β1 β1 β2⟩ even.
        let l = p.odd.layout();
        assert_eq!(p.odd.get(l.index_of(&[1, 2, 2]).unwrap(), l.index_of(&[1, 2, 2]).unwrap()), ONE);
        assert_eq!(p.even.get(l.index_of(&[1, 1, 2]).unwrap(), l.index_of(&[1, 1, 2]).unwrap()), ONE);
    }

    #[test]
    fn parity_unitary_actions() {
        let meta = ObserverSpec::readout(O0, &GammaPreset::Even.values()).unwrap();
        let v = parity_measurement_unitary(&meta).unwrap();
        assert!(v.is_unitary(1e-10));
        let l = ghzm_layout();
        let odd_in = StateVector::basis(&l, &[0, 1, 2, 2, 1, 0, 1]).unwrap();
        let odd_out = StateVector::basis(&l, &[1, 1, 2, 2, 1, 0, 1]).unwrap();
        assert_eq!(v.apply(&odd_in).unwrap(), odd_out);
        let even_in = StateVector::basis(&l, &[0, 1, 1, 2, 0, 0, 0]).unwrap();
        let even_out = StateVector::basis(&l, &[2, 1, 1, 2, 0, 0, 0]).unwrap();
        assert_eq!(v.apply(&even_in).unwrap(), even_out);
        let ignorant = StateVector::basis(&l, &[0, 0, 1, 2, 0, 0, 0]).unwrap();
        assert_eq!(v.apply(&ignorant).unwrap(), ignorant);
    }
}
