//! Support analysis: on which tensor factors does an operator act
//! nontrivially?
//!
//! An operator `M` acts trivially on factor `k` when `M = M̃ ⊗ I_k` with
//! `M̃ = Tr_k(M) / d_k`. The Frobenius distance between `M` and that
//! reconstruction is the residual reported for each factor.

use std::fmt;

use crate::error::{Result, SimError};
use crate::tensor::{embed, partial_trace, Layout, Operator, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct FactorResidual {
    pub label: String,
    pub residual: f64,
    pub nontrivial: bool,
}

/// Per-factor verdicts in layout order.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    pub entries: Vec<FactorResidual>,
}

impl SupportSet {
    /// Labels on which the operator acts nontrivially, in layout order.
    pub fn labels(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.nontrivial)
            .map(|e| e.label.as_str())
            .collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.entries.iter().any(|e| e.nontrivial && e.label == label)
    }

    pub fn is_empty(&self) -> bool {
        !self.entries.iter().any(|e| e.nontrivial)
    }

    /// Largest residual among factors judged trivial, or 0.
    pub fn max_excluded_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !e.nontrivial)
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

/// Operator with the named factors replaced by normalized identities.
fn reconstruct_without(op: &Operator, labels: &[&str]) -> Result<Operator> {
    let layout = op.layout();
    let mut scale = 1.0;
    for l in labels {
        scale *= layout.dim_of(l)? as f64;
    }
    if labels.len() == layout.len() {
        let d = layout.total_dim() as f64;
        return Ok(Operator::identity(layout).scale(op.trace() / d));
    }
    let reduced = partial_trace(op, labels)?.scale((1.0 / scale).into());
    embed(&reduced, layout)
}

/// Whether `op` acts as the identity on `label`, and the reconstruction residual.
pub fn acts_trivially_on(op: &Operator, label: &str) -> Result<(bool, f64)> {
    acts_trivially_on_with_tol(op, label, DEFAULT_TOL)
}

pub fn acts_trivially_on_with_tol(op: &Operator, label: &str, tol: f64) -> Result<(bool, f64)> {
    let residual = reconstruct_without(op, &[label])?.distance(op)?;
    Ok((residual < tol, residual))
}

pub fn support(op: &Operator) -> SupportSet {
    support_with_tol(op, DEFAULT_TOL)
}

pub fn support_with_tol(op: &Operator, tol: f64) -> SupportSet {
    let entries = op
        .layout()
        .labels()
        .map(|label| {
            let (trivial, residual) =
                acts_trivially_on_with_tol(op, label, tol).expect("label taken from the layout");
            FactorResidual {
                label: label.to_string(),
                residual,
                nontrivial: !trivial,
            }
        })
        .collect();
    SupportSet { entries }
}

/// Replace each factor in `labels`, one at a time and in the given order, by
/// its normalized identity.
pub fn peel(op: &Operator, labels: &[&str]) -> Result<Operator> {
    labels
        .iter()
        .try_fold(op.clone(), |acc, l| reconstruct_without(&acc, &[l]))
}

/// The single-factor operator `F` with `embed(F) = op`, when `op` is
/// supported exactly on `label`.
pub fn local_factor(op: &Operator, label: &str) -> Result<Operator> {
    local_factor_with_tol(op, label, DEFAULT_TOL)
}

pub fn local_factor_with_tol(op: &Operator, label: &str, tol: f64) -> Result<Operator> {
    let layout = op.layout();
    layout.require(label)?;
    let supp = support_with_tol(op, tol);
    if supp.labels() != [label] {
        return Err(SimError::NotLocallySupported {
            label: label.to_string(),
            support: supp.labels().iter().map(|s| s.to_string()).collect(),
        });
    }
    if layout.len() == 1 {
        return Ok(op.clone());
    }
    let others: Vec<&str> = layout.labels().filter(|l| *l != label).collect();
    let traced_dim = (layout.total_dim() / layout.dim_of(label)?) as f64;
    let f = partial_trace(op, &others)?.scale((1.0 / traced_dim).into());
    let target = Layout::single(label, f.dim())?;
    f.relabel(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{kron, sigma_x, sigma_z};

    fn layout() -> Layout {
        Layout::new([("O1", 3), ("O2", 3), ("S1", 2), ("S2", 2)]).unwrap()
    }

    #[test]
    fn embedded_local_operator_has_singleton_support() {
        let op = embed(&sigma_z("S1").unwrap(), &layout()).unwrap();
        let s = support(&op);
        assert_eq!(s.labels(), ["S1"]);
        assert!(s.max_excluded_residual() < 1e-14);
        for l in ["O1", "O2", "S2"] {
            assert!(acts_trivially_on(&op, l).unwrap().0);
        }
        assert!(acts_trivially_on(&op, "nope").is_err());
    }

    #[test]
    fn identity_has_empty_support() {
        let s = support(&Operator::identity(&layout()));
        assert!(s.is_empty());
        assert_eq!(s.to_string(), "{}");
    }

    #[test]
    fn local_factor_extracts_embedded_operator() {
        let z = sigma_z("S1").unwrap();
        let op = embed(&z, &layout()).unwrap();
        assert!(local_factor(&op, "S1").unwrap().approx_eq(&z, 1e-14));
    }

    #[test]
    fn local_factor_rejects_wrong_support() {
        let id = Operator::identity(&layout());
        assert!(matches!(
            local_factor(&id, "S1"),
            Err(SimError::NotLocallySupported { .. })
        ));
        let two = embed(&kron(&sigma_x("S1").unwrap(), &sigma_z("S2").unwrap()).unwrap(), &layout())
            .unwrap();
        assert!(local_factor(&two, "S1").is_err());
    }

    #[test]
    fn scalar_multiple_of_identity_is_trivial_everywhere() {
        let op = Operator::identity(&layout()).scale((2.5).into());
        assert!(support(&op).is_empty());
        let single = Operator::identity(&Layout::single("a", 2).unwrap()).scale((3.0).into());
        assert!(support(&single).is_empty());
        assert!(!support(&sigma_z("a").unwrap()).is_empty());
    }
}
