//! Ideal-measurement unitaries in Everett's model and Heisenberg evolution.
//!
//! An observer factor of dimension `N + 1` holds eigenstates `|β_0⟩ … |β_N⟩`
//! of its awareness operator `b̂`, with `β_0` the ignorant state. Measuring a
//! system with projectors `Π_1 … Π_N` is the unitary `Σ_i û_i ⊗ Π_i`, where the
//! shift operator `û_i` moves `|β_0⟩` to `|β_i⟩`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::tensor::{
    conjugate_by_with_tol, embed, kron, Layout, Operator, StateVector, DEFAULT_TOL, ONE, ZERO,
};

/// Label given to freshly built spin-½ operators and states.
pub const SPIN_LABEL: &str = "S";

/// How a shift operator acts on the already-aware states `|β_I⟩`, `I ≠ 0`.
/// Only the ignorant row matters for the experiments; the rest must merely
/// make `û_i` unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftCompletion {
    /// `û_i|β_I⟩ = |β_{(I+i) mod (N+1)}⟩`.
    #[default]
    Cyclic,
    /// `û_i` swaps `|β_0⟩` and `|β_i⟩`, fixing every other state.
    Transposition,
}

/// Named eigenvalue assignments `(β_0, β_1, β_2)` for two-outcome observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaPreset {
    /// `(0, 1, −1)`: the observer records the spin value itself.
    Spin,
    /// `(0, 1, 0)`: the observable becomes the spin-up indicator.
    Probability,
}

impl BetaPreset {
    pub fn values(self) -> [f64; 3] {
        match self {
            BetaPreset::Spin => [0.0, 1.0, -1.0],
            BetaPreset::Probability => [0.0, 1.0, 0.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BetaPreset::Spin => "spin",
            BetaPreset::Probability => "probability",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "spin" => Some(BetaPreset::Spin),
            "probability" => Some(BetaPreset::Probability),
            _ => None,
        }
    }
}

/// An observer with `N` possible outcomes and its awareness eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverSpec {
    label: String,
    eigenvalues: Vec<f64>,
    completion: ShiftCompletion,
}

impl ObserverSpec {
    /// `eigenvalues[0]` is the ignorant value `β_0`; at least one outcome is
    /// required and all values must be distinct.
    pub fn new(label: impl Into<String>, eigenvalues: &[f64]) -> Result<Self> {
        let spec = Self::readout(label, eigenvalues)?;
        for (i, a) in eigenvalues.iter().enumerate() {
            if eigenvalues[i + 1..].contains(a) {
                return Err(SimError::DegenerateEigenvalues(eigenvalues.to_vec()));
            }
        }
        Ok(spec)
    }

    /// Like [`ObserverSpec::new`] but allows repeated values. The observer's
    /// basis states stay distinct; only the readout `b̂` merges them, as the
    /// probability presets `(0, 1, 0)` and `(0, 0, 1)` do.
    pub fn readout(label: impl Into<String>, eigenvalues: &[f64]) -> Result<Self> {
        if eigenvalues.len() < 2 {
            return Err(SimError::InvalidLayout(
                "an observer needs β_0 and at least one outcome".into(),
            ));
        }
        if eigenvalues.iter().any(|b| !b.is_finite()) {
            return Err(SimError::NonFinite("observer eigenvalue".into()));
        }
        Ok(Self {
            label: label.into(),
            eigenvalues: eigenvalues.to_vec(),
            completion: ShiftCompletion::Cyclic,
        })
    }

    pub fn with_completion(mut self, completion: ShiftCompletion) -> Self {
        self.completion = completion;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn completion(&self) -> ShiftCompletion {
        self.completion
    }

    pub fn n_outcomes(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn factor_layout(&self) -> Layout {
        Layout::single(self.label.clone(), self.dim()).expect("dim ≥ 2 by construction")
    }

    /// `b̂ = diag(β_0, …, β_N)` on the observer factor.
    pub fn observable(&self) -> Operator {
        Operator::diagonal(&self.factor_layout(), &self.eigenvalues).expect("matching dim")
    }
}

/// Shift operator `û_i` for `1 ≤ i ≤ N`.
pub fn shift_operator(spec: &ObserverSpec, i: usize) -> Result<Operator> {
    let n = spec.n_outcomes();
    if i == 0 || i > n {
        return Err(SimError::OutcomeOutOfRange { index: i, max: n });
    }
    let d = spec.dim();
    let mut data = vec![ZERO; d * d];
    for col in 0..d {
        let row = match spec.completion {
            ShiftCompletion::Cyclic => (col + i) % d,
            ShiftCompletion::Transposition if col == 0 => i,
            ShiftCompletion::Transposition if col == i => 0,
            ShiftCompletion::Transposition => col,
        };
        data[row * d + col] = ONE;
    }
    Operator::from_rows(&spec.factor_layout(), data)
}

/// Analyzer orientation in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn from_degrees(theta: f64, phi: f64) -> Self {
        Self::new(theta.to_radians(), phi.to_radians())
    }

    /// Direction perpendicular to the flight axis, at azimuth `phi` (radians).
    pub fn transverse(phi: f64) -> Self {
        Self::new(FRAC_PI_2, phi)
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOutcome {
    Up,
    Down,
}

impl SpinOutcome {
    /// 1-based outcome index `i` (up = 1, down = 2).
    pub fn index(self) -> usize {
        match self {
            SpinOutcome::Up => 1,
            SpinOutcome::Down => 2,
        }
    }
}

/// Spin eigenstate along `n` in the half-angle, half-phase convention
///
/// ```text
/// |n; up⟩   =  e^{-iφ/2} cos(θ/2) |α_1⟩ + e^{iφ/2} sin(θ/2) |α_2⟩
/// |n; down⟩ = −e^{-iφ/2} sin(θ/2) |α_1⟩ + e^{iφ/2} cos(θ/2) |α_2⟩
/// ```
///
/// At `θ = 0` the result still carries a global phase depending on `φ`, but
/// every projector built from it is `φ`-independent.
pub fn spin_eigenstate(n: Direction, outcome: SpinOutcome) -> StateVector {
    let (s, c) = (n.theta / 2.0).sin_cos();
    let minus = Complex64::from_polar(1.0, -n.phi / 2.0);
    let plus = Complex64::from_polar(1.0, n.phi / 2.0);
    let amps = match outcome {
        SpinOutcome::Up => vec![minus * c, plus * s],
        SpinOutcome::Down => vec![-minus * s, plus * c],
    };
    let layout = Layout::single(SPIN_LABEL, 2).expect("valid layout");
    StateVector::new(&layout, amps).expect("unit norm by construction")
}

/// Transition operator `|α_i⟩⟨α_j|` on a spin factor (1-based indices).
pub fn transition_operator(i: usize, j: usize) -> Result<Operator> {
    for k in [i, j] {
        if k == 0 || k > 2 {
            return Err(SimError::OutcomeOutOfRange { index: k, max: 2 });
        }
    }
    let mut data = vec![ZERO; 4];
    data[(i - 1) * 2 + (j - 1)] = ONE;
    Operator::from_rows(&Layout::single(SPIN_LABEL, 2)?, data)
}

/// Projector onto the spin eigenstate along `n`, assembled from the `z`-basis
/// projectors and the transition operators:
/// `Π_up = cos²(θ/2) Π_1 + sin²(θ/2) Π_2 ± sinθ (e^{-iφ} T_{1-2} + e^{iφ} T_{2-1}) / 2`,
/// with `cos²`/`sin²` swapped and the sign flipped for `down`.
pub fn spin_projector(n: Direction, outcome: SpinOutcome) -> Operator {
    let (s2, c2) = ((n.theta / 2.0).sin().powi(2), (n.theta / 2.0).cos().powi(2));
    let (diag_1, diag_2, sign) = match outcome {
        SpinOutcome::Up => (c2, s2, 1.0),
        SpinOutcome::Down => (s2, c2, -1.0),
    };
    let off = 0.5 * sign * n.theta.sin();
    let p1 = transition_operator(1, 1).expect("valid");
    let p2 = transition_operator(2, 2).expect("valid");
    let t12 = transition_operator(1, 2).expect("valid");
    let t21 = transition_operator(2, 1).expect("valid");
    [
        (p1, Complex64::new(diag_1, 0.0)),
        (p2, Complex64::new(diag_2, 0.0)),
        (t12, Complex64::from_polar(off, -n.phi)),
        (t21, Complex64::from_polar(off, n.phi)),
    ]
    .into_iter()
    .map(|(op, w)| op.scale(w))
    .reduce(|a, b| a.add(&b).expect("same layout"))
    .expect("non-empty")
}

/// Both spin projectors `[Π_up, Π_down]` along `n`, relabeled onto `label`.
pub fn spin_projectors(n: Direction, label: &str) -> Result<Vec<Operator>> {
    [SpinOutcome::Up, SpinOutcome::Down]
        .into_iter()
        .map(|o| spin_projector(n, o).with_label(label))
        .collect()
}

/// Verify `Σ Π_i = I` and `Π_i Π_j = δ_ij Π_i` within `tol`.
pub fn check_projector_family(projectors: &[Operator], tol: f64) -> Result<()> {
    let first = projectors
        .first()
        .ok_or_else(|| SimError::IncompleteProjectors("empty family".into()))?;
    let layout = first.layout().clone();
    let mut sum = Operator::zeros(&layout);
    for (i, p) in projectors.iter().enumerate() {
        sum = sum.add(p)?;
        for (j, q) in projectors.iter().enumerate() {
            let pq = p.matmul(q)?;
            let target = if i == j { p.clone() } else { Operator::zeros(&layout) };
            let d = pq.distance(&target)?;
            if d > tol {
                return Err(SimError::IncompleteProjectors(format!(
                    "‖Π_{}Π_{} − δΠ‖_F = {d:e}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let d = sum.distance(&Operator::identity(&layout))?;
    if d > tol {
        return Err(SimError::IncompleteProjectors(format!(
            "‖ΣΠ_i − I‖_F = {d:e}"
        )));
    }
    Ok(())
}

/// Everett ideal-measurement unitary `Σ_i û_i ⊗ Π_i` on the full layout,
/// with `û_i` acting on `observer` and `Π_i` (single-factor operators of any
/// label) on `system`.
pub fn measurement_unitary(
    layout: &Layout,
    observer: &str,
    system: &str,
    projectors: &[Operator],
    spec: &ObserverSpec,
) -> Result<Operator> {
    if observer == system {
        return Err(SimError::LayoutConflict(observer.to_string()));
    }
    let obs_dim = layout.dim_of(observer)?;
    let sys_dim = layout.dim_of(system)?;
    if obs_dim != spec.dim() {
        return Err(SimError::DimensionMismatch {
            expected: obs_dim,
            found: spec.dim(),
        });
    }
    if projectors.len() != spec.n_outcomes() {
        return Err(SimError::IncompleteProjectors(format!(
            "{} projectors for {} outcomes",
            projectors.len(),
            spec.n_outcomes()
        )));
    }
    let projectors = projectors
        .iter()
        .map(|p| p.with_label(system))
        .collect::<Result<Vec<_>>>()?;
    if projectors[0].dim() != sys_dim {
        return Err(SimError::DimensionMismatch {
            expected: sys_dim,
            found: projectors[0].dim(),
        });
    }
    check_projector_family(&projectors, DEFAULT_TOL)?;

    let mut local: Option<Operator> = None;
    for (i, p) in projectors.iter().enumerate() {
        let u = shift_operator(spec, i + 1)?.with_label(observer)?;
        let term = kron(&u, p)?;
        local = Some(match local {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    embed(&local.expect("at least one outcome"), layout)
}

/// Ordered interaction steps; the earliest step acts first.
#[derive(Debug, Clone, Default)]
pub struct InteractionSequence {
    steps: Vec<(String, Operator)>,
}

impl InteractionSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a step. Rejects non-unitary operators and layout changes.
    pub fn push(&mut self, tag: impl Into<String>, unitary: Operator) -> Result<()> {
        if let Some((_, first)) = self.steps.first() {
            if first.layout() != unitary.layout() {
                return Err(SimError::LayoutMismatch {
                    expected: first.layout().to_string(),
                    found: unitary.layout().to_string(),
                });
            }
        }
        let defect = unitary.unitarity_defect();
        if defect > DEFAULT_TOL {
            return Err(SimError::NotUnitary { defect });
        }
        self.steps.push((tag.into(), unitary));
        Ok(())
    }

    pub fn then(mut self, tag: impl Into<String>, unitary: Operator) -> Result<Self> {
        self.push(tag, unitary)?;
        Ok(self)
    }

    pub fn steps(&self) -> &[(String, Operator)] {
        &self.steps
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().map(|(t, _)| t.as_str())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.steps.first().map(|(_, u)| u.layout())
    }

    /// Sequence with two steps exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut steps = self.steps.clone();
        steps.swap(a, b);
        Self { steps }
    }

    /// Composite evolution `U = U_n ⋯ U_1`, or `None` for an empty sequence.
    pub fn composite(&self) -> Result<Option<Operator>> {
        let mut acc: Option<Operator> = None;
        for (_, u) in &self.steps {
            acc = Some(match acc {
                None => u.clone(),
                Some(prev) => u.matmul(&prev)?,
            });
        }
        Ok(acc)
    }
}

/// Heisenberg-picture operator `U† op U` with `U` the composite of `seq`.
///
/// Evolution is applied one step at a time from the latest interaction
/// inwards, so `evolve(evolve(A, [U2]), [U1]) == evolve(A, [U1, U2])`.
pub fn heisenberg_evolve(op: &Operator, seq: &InteractionSequence) -> Result<Operator> {
    heisenberg_evolve_with_tol(op, seq, DEFAULT_TOL)
}

pub fn heisenberg_evolve_with_tol(
    op: &Operator,
    seq: &InteractionSequence,
    tol: f64,
) -> Result<Operator> {
    if let Some(layout) = seq.layout() {
        if layout != op.layout() {
            return Err(SimError::LayoutMismatch {
                expected: layout.to_string(),
                found: op.layout().to_string(),
            });
        }
    }
    seq.steps
        .iter()
        .rev()
        .try_fold(op.clone(), |acc, (_, u)| conjugate_by_with_tol(&acc, u, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::projector_from_state;
    use std::f64::consts::PI;

    fn spec2() -> ObserverSpec {
        ObserverSpec::new("O", &[0.0, 1.0, -1.0]).unwrap()
    }

    #[test]
    fn shift_operators_move_ignorant_state() {
        let spec = spec2();
        let l = spec.factor_layout();
        let e0 = StateVector::basis(&l, &[0]).unwrap();
        for i in 1..=2 {
            let u = shift_operator(&spec, i).unwrap();
            assert_eq!(u.apply(&e0).unwrap(), StateVector::basis(&l, &[i]).unwrap());
            assert!(u.is_unitary(1e-15));
        }
        // û_2 is the −1 cycle mod 3.
        let u2 = shift_operator(&spec, 2).unwrap();
        let e1 = StateVector::basis(&l, &[1]).unwrap();
        assert_eq!(u2.apply(&e1).unwrap(), e0);
    }

    #[test]
    fn shift_operator_range() {
        let spec = spec2();
        assert!(matches!(
            shift_operator(&spec, 0),
            Err(SimError::OutcomeOutOfRange { .. })
        ));
        assert!(shift_operator(&spec, 3).is_err());
    }

    #[test]
    fn transposition_completion_is_unitary() {
        let spec = ObserverSpec::new("O", &[0.0, 1.0, 2.0, 3.0])
            .unwrap()
            .with_completion(ShiftCompletion::Transposition);
        for i in 1..=3 {
            let u = shift_operator(&spec, i).unwrap();
            assert!(u.is_unitary(1e-15));
            assert_eq!(u.get(i, 0), ONE);
        }
    }

    #[test]
    fn degenerate_eigenvalues_rejected() {
        assert!(matches!(
            ObserverSpec::new("O", &[0.0, 1.0, 0.0]),
            Err(SimError::DegenerateEigenvalues(_))
        ));
    }

    #[test]
    fn eigenstate_examples() {
        let up = spin_eigenstate(Direction::new(0.0, 0.0), SpinOutcome::Up);
        assert_eq!(up.amplitudes(), &[ONE, ZERO]);
        let x = spin_eigenstate(Direction::new(PI / 2.0, 0.0), SpinOutcome::Up);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in x.amplitudes() {
            assert!((a - Complex64::new(h, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn projector_examples() {
        let l = Layout::single(SPIN_LABEL, 2).unwrap();
        let pz = spin_projector(Direction::new(0.0, 1.234), SpinOutcome::Up);
        assert!(pz.approx_eq(&Operator::diagonal(&l, &[1.0, 0.0]).unwrap(), 1e-15));
        let px = spin_projector(Direction::new(PI / 2.0, 0.0), SpinOutcome::Up);
        let half = Operator::from_real(&l, &[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(px.approx_eq(&half, 1e-15));
    }

    #[test]
    fn projector_matches_eigenstate_outer_product() {
        for k in 0..20 {
            let n = Direction::new(0.37 * k as f64, -1.1 + 0.53 * k as f64);
            for o in [SpinOutcome::Up, SpinOutcome::Down] {
                let direct = projector_from_state(&spin_eigenstate(n, o));
                assert!(spin_projector(n, o).approx_eq(&direct, 1e-12));
            }
        }
    }

    #[test]
    fn theta_zero_is_phi_independent() {
        let a = spin_projector(Direction::new(0.0, 0.0), SpinOutcome::Down);
        let b = spin_projector(Direction::new(0.0, 2.7), SpinOutcome::Down);
        assert!(a.approx_eq(&b, 1e-15));
    }

    #[test]
    fn measurement_unitary_acts_on_eigenstates() {
        let layout = Layout::new([("O", 3), ("S", 2)]).unwrap();
        let spec = spec2();
        let z = Direction::new(0.0, 0.0);
        let u = measurement_unitary(&layout, "O", "S", &spin_projectors(z, "S").unwrap(), &spec)
            .unwrap();
        assert!(u.is_unitary(1e-10));
        for i in 0..2 {
            let before = StateVector::basis(&layout, &[0, i]).unwrap();
            let after = StateVector::basis(&layout, &[i + 1, i]).unwrap();
            assert_eq!(u.apply(&before).unwrap(), after);
        }
    }

    #[test]
    fn measurement_unitary_errors() {
        let layout = Layout::new([("O", 3), ("S", 2)]).unwrap();
        let spec = spec2();
        let z = Direction::new(0.0, 0.0);
        let ps = spin_projectors(z, "S").unwrap();
        assert!(matches!(
            measurement_unitary(&layout, "S", "S", &ps, &spec),
            Err(SimError::LayoutConflict(_))
        ));
        let broken = vec![ps[0].clone(), ps[0].clone()];
        assert!(matches!(
            measurement_unitary(&layout, "O", "S", &broken, &spec),
            Err(SimError::IncompleteProjectors(_))
        ));
        assert!(measurement_unitary(&layout, "O", "S", &ps[..1], &spec).is_err());
    }

    #[test]
    fn sequence_rejects_non_unitary_and_mismatched_layouts() {
        let l = Layout::single("a", 2).unwrap();
        let mut seq = InteractionSequence::new();
        assert!(seq
            .push("p", Operator::diagonal(&l, &[1.0, 0.0]).unwrap())
            .is_err());
        seq.push("id", Operator::identity(&l)).unwrap();
        let other = Layout::single("b", 2).unwrap();
        assert!(seq.push("x", Operator::identity(&other)).is_err());
        let a = Operator::identity(&other);
        assert!(heisenberg_evolve(&a, &seq).is_err());
    }

    #[test]
    fn empty_sequence_leaves_operator() {
        let a = crate::tensor::sigma_x("a").unwrap();
        assert_eq!(heisenberg_evolve(&a, &InteractionSequence::new()).unwrap(), a);
    }
}
