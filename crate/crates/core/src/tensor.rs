//! Dense complex linear algebra over labeled tensor-product spaces.
//!
//! A [`Layout`] is an ordered list of labeled factors. Every [`Operator`] and
//! [`StateVector`] is bound to one. Basis indices use mixed-radix encoding with
//! the leftmost factor as the most significant digit, so for the layout
//! `[O1:3, O2:3, S1:2, S2:2]` the basis state `|i j k l⟩` sits at
//! `((i * 3 + j) * 2 + k) * 2 + l`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Largest composite dimension accepted by [`Layout::new`].
pub const MAX_TOTAL_DIM: usize = 10_000;

/// Default Frobenius tolerance for unitarity and equality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered, uniquely labeled tensor factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    factors: Vec<Factor>,
    total_dim: usize,
}

impl Layout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor {
                label: label.into(),
                dim,
            })
            .collect();
        if factors.is_empty() {
            return Err(SimError::InvalidLayout("layout has no factors".into()));
        }
        let mut total: usize = 1;
        for (i, f) in factors.iter().enumerate() {
            if f.dim < 2 {
                return Err(SimError::InvalidLayout(format!(
                    "factor '{}' has dimension {} (must be at least 2)",
                    f.label, f.dim
                )));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(SimError::LayoutConflict(f.label.clone()));
            }
            total = total
                .checked_mul(f.dim)
                .filter(|&t| t <= MAX_TOTAL_DIM)
                .ok_or_else(|| {
                    SimError::InvalidLayout(format!(
                        "total dimension exceeds {MAX_TOTAL_DIM}"
                    ))
                })?;
        }
        Ok(Self {
            factors,
            total_dim: total,
        })
    }

    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.position(label)
            .ok_or_else(|| SimError::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.require(label)?].dim)
    }

    /// Place value of each factor's digit in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factors[i + 1].dim;
        }
        strides
    }

    /// Flat index of a basis state given one digit per factor.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.factors.len() {
            return Err(SimError::DimensionMismatch {
                expected: self.factors.len(),
                found: digits.len(),
            });
        }
        let mut idx = 0;
        for (d, f) in digits.iter().zip(&self.factors) {
            if *d >= f.dim {
                return Err(SimError::DimensionMismatch {
                    expected: f.dim,
                    found: *d,
                });
            }
            idx = idx * f.dim + d;
        }
        Ok(idx)
    }

    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factors.len()];
        for (slot, f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.dim;
            index /= f.dim;
        }
        digits
    }

    /// Layout of `self` followed by `other`.
    pub fn concat(&self, other: &Layout) -> Result<Layout> {
        Layout::new(
            self.factors
                .iter()
                .chain(&other.factors)
                .map(|f| (f.label.clone(), f.dim)),
        )
    }

    /// Layout with the given labels removed; `None` if nothing would remain.
    pub fn without(&self, labels: &[&str]) -> Option<Layout> {
        let rest: Vec<_> = self
            .factors
            .iter()
            .filter(|f| !labels.contains(&f.label.as_str()))
            .map(|f| (f.label.clone(), f.dim))
            .collect();
        if rest.is_empty() {
            None
        } else {
            Layout::new(rest).ok()
        }
    }

    /// For every basis index of `sub` (whose factors all live in `self`),
    /// the contribution of its digits to a flat index of `self`.
    pub(crate) fn offsets_for(&self, sub: &Layout) -> Result<Vec<usize>> {
        let strides = self.strides();
        let mut placed = Vec::with_capacity(sub.factors.len());
        for f in &sub.factors {
            let pos = self.require(&f.label)?;
            if self.factors[pos].dim != f.dim {
                return Err(SimError::DimensionMismatch {
                    expected: self.factors[pos].dim,
                    found: f.dim,
                });
            }
            placed.push(strides[pos]);
        }
        Ok((0..sub.total_dim)
            .map(|i| {
                sub.digits_of(i)
                    .iter()
                    .zip(&placed)
                    .map(|(d, s)| d * s)
                    .sum()
            })
            .collect())
    }

    /// Offsets of the complementary factors, in `self` order. A lone zero
    /// offset when `sub` covers every factor.
    pub(crate) fn complement_offsets(&self, sub: &Layout) -> Result<Vec<usize>> {
        let labels: Vec<&str> = sub.labels().collect();
        match self.without(&labels) {
            Some(rest) => self.offsets_for(&rest),
            None => Ok(vec![0]),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", fac.label, fac.dim)?;
        }
        write!(f, "]")
    }
}

/// Dense square operator bound to a layout, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    layout: Arc<Layout>,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn from_rows(layout: &Layout, data: Vec<Complex64>) -> Result<Self> {
        let n = layout.total_dim();
        if data.len() != n * n {
            return Err(SimError::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SimError::NonFinite(format!("matrix entry {bad}")));
        }
        Ok(Self {
            layout: Arc::new(layout.clone()),
            data,
        })
    }

    /// Real matrix given as nested rows.
    pub fn from_real(layout: &Layout, rows: &[&[f64]]) -> Result<Self> {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_rows(layout, data)
    }

    pub fn zeros(layout: &Layout) -> Self {
        let n = layout.total_dim();
        Self {
            layout: Arc::new(layout.clone()),
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(layout: &Layout) -> Self {
        let mut op = Self::zeros(layout);
        let n = op.dim();
        for i in 0..n {
            op.data[i * n + i] = ONE;
        }
        op
    }

    pub fn diagonal(layout: &Layout, diag: &[f64]) -> Result<Self> {
        let n = layout.total_dim();
        if diag.len() != n {
            return Err(SimError::DimensionMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        let mut op = Self::zeros(layout);
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * n + i] = Complex64::new(d, 0.0);
        }
        Ok(op)
    }

    /// `|ket⟩⟨bra|` for two states on the same layout.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Result<Self> {
        ket.check_layout(bra.layout())?;
        let n = ket.layout.total_dim();
        let mut data = vec![ZERO; n * n];
        for (r, k) in ket.amplitudes.iter().enumerate() {
            for (c, b) in bra.amplitudes.iter().enumerate() {
                data[r * n + c] = k * b.conj();
            }
        }
        Ok(Self {
            layout: ket.layout.clone(),
            data,
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// Same matrix, bound to a relabeled layout of identical shape.
    pub fn relabel(&self, layout: &Layout) -> Result<Self> {
        let same_shape = layout.len() == self.layout.len()
            && layout
                .factors()
                .iter()
                .zip(self.layout.factors())
                .all(|(a, b)| a.dim == b.dim);
        if !same_shape {
            return Err(SimError::LayoutMismatch {
                expected: self.layout.to_string(),
                found: layout.to_string(),
            });
        }
        Ok(Self {
            layout: Arc::new(layout.clone()),
            data: self.data.clone(),
        })
    }

    /// Relabel a single-factor operator.
    pub fn with_label(&self, label: &str) -> Result<Self> {
        if self.layout.len() != 1 {
            return Err(SimError::InvalidLayout(format!(
                "with_label needs a single-factor operator, got {}",
                self.layout
            )));
        }
        self.relabel(&Layout::single(label, self.dim())?)
    }

    fn check_layout(&self, other: &Layout) -> Result<()> {
        if *self.layout != *other {
            return Err(SimError::LayoutMismatch {
                expected: self.layout.to_string(),
                found: other.to_string(),
            });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Self {
            layout: self.layout.clone(),
            data,
        }
    }

    /// Matrix product `self · rhs`. Zero entries of `self` are skipped, so the
    /// cost scales with the sparsity of the left operand.
    pub fn matmul(&self, rhs: &Operator) -> Result<Self> {
        self.check_layout(&rhs.layout)?;
        let n = self.dim();
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            data: out,
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Self> {
        self.check_layout(&rhs.layout)?;
        Ok(Self {
            layout: self.layout.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Self> {
        self.check_layout(&rhs.layout)?;
        Ok(Self {
            layout: self.layout.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            layout: self.layout.clone(),
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.dim();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance; layouts must match.
    pub fn distance(&self, other: &Operator) -> Result<f64> {
        self.check_layout(&other.layout)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.distance(other).map(|d| d < tol).unwrap_or(false)
    }

    /// `‖u u† − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let rows = self.sparse_rows();
        let cols = self.sparse_cols();
        let mut buf = vec![ZERO; n];
        let mut seen = vec![false; n];
        let mut touched = Vec::new();
        let mut total = 0.0;
        for (i, row) in rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &cols[k] {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    buf[j] += a * b.conj();
                }
            }
            let mut diag_seen = false;
            for &j in &touched {
                let target = if j == i { ONE } else { ZERO };
                diag_seen |= j == i;
                total += (buf[j] - target).norm_sqr();
                buf[j] = ZERO;
                seen[j] = false;
            }
            if !diag_seen {
                total += 1.0;
            }
            touched.clear();
        }
        total.sqrt()
    }

    /// Nonzero `(column, value)` entries of each row.
    pub(crate) fn sparse_rows(&self) -> Vec<Vec<(usize, Complex64)>> {
        let n = self.dim();
        self.data
            .chunks(n)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, z)| **z != ZERO)
                    .map(|(j, z)| (j, *z))
                    .collect()
            })
            .collect()
    }

    /// Nonzero `(row, value)` entries of each column.
    pub(crate) fn sparse_cols(&self) -> Vec<Vec<(usize, Complex64)>> {
        let n = self.dim();
        let mut cols = vec![Vec::new(); n];
        for (i, row) in self.data.chunks(n).enumerate() {
            for (j, z) in row.iter().enumerate() {
                if *z != ZERO {
                    cols[j].push((i, *z));
                }
            }
        }
        cols
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self.data[r * n + c] - self.data[c * n + r].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Commutator norm `‖[self, other]‖_F`.
    pub fn commutator_norm(&self, other: &Operator) -> Result<f64> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.distance(&ba)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_layout(state.layout())?;
        let n = self.dim();
        let amplitudes = (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(&state.amplitudes)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect();
        Ok(StateVector {
            layout: self.layout.clone(),
            amplitudes,
        })
    }
}

/// Kronecker product; the result's layout is `a`'s factors followed by `b`'s.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let layout = a.layout.concat(&b.layout)?;
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut data = vec![ZERO; n * n];
    for ar in 0..na {
        for ac in 0..na {
            let x = a.data[ar * na + ac];
            if x == ZERO {
                continue;
            }
            for br in 0..nb {
                let row = (ar * nb + br) * n + ac * nb;
                for bc in 0..nb {
                    data[row + bc] = x * b.data[br * nb + bc];
                }
            }
        }
    }
    Ok(Operator {
        layout: Arc::new(layout),
        data,
    })
}

/// Lift an operator on a subset of `layout`'s factors to the full space,
/// acting as the identity on every other factor. The operator's own factor
/// order may differ from `layout`'s.
pub fn embed(op: &Operator, layout: &Layout) -> Result<Operator> {
    let sub = op.layout();
    let local = layout.offsets_for(sub)?;
    let rest = layout.complement_offsets(sub)?;
    let d = sub.total_dim();
    let n = layout.total_dim();
    let mut data = vec![ZERO; n * n];
    for a in 0..d {
        for b in 0..d {
            let x = op.data[a * d + b];
            if x == ZERO {
                continue;
            }
            for &e in &rest {
                data[(local[a] + e) * n + local[b] + e] = x;
            }
        }
    }
    Ok(Operator {
        layout: Arc::new(layout.clone()),
        data,
    })
}

/// Partial trace over the named factors. Tracing out every factor is
/// rejected; use [`Operator::trace`] for that.
pub fn partial_trace(op: &Operator, labels: &[&str]) -> Result<Operator> {
    let layout = op.layout();
    for l in labels {
        layout.require(l)?;
    }
    let kept = layout.without(labels).ok_or_else(|| {
        SimError::InvalidLayout("partial trace would remove every factor".into())
    })?;
    let traced = Layout::new(
        layout
            .factors()
            .iter()
            .filter(|f| labels.contains(&f.label.as_str()))
            .map(|f| (f.label.clone(), f.dim)),
    )?;
    let keep_off = layout.offsets_for(&kept)?;
    let trace_off = layout.offsets_for(&traced)?;
    let n = layout.total_dim();
    let d = kept.total_dim();
    let mut data = vec![ZERO; d * d];
    for a in 0..d {
        for b in 0..d {
            data[a * d + b] = trace_off
                .iter()
                .map(|t| op.data[(keep_off[a] + t) * n + keep_off[b] + t])
                .sum();
        }
    }
    Ok(Operator {
        layout: Arc::new(kept),
        data,
    })
}

/// `u† · op · u`, rejecting `u` whose unitarity defect exceeds `tol`.
pub fn conjugate_by_with_tol(op: &Operator, u: &Operator, tol: f64) -> Result<Operator> {
    op.check_layout(u.layout())?;
    let defect = u.unitarity_defect();
    if defect > tol {
        return Err(SimError::NotUnitary { defect });
    }
    let n = op.dim();
    let rows = u.sparse_rows();
    // B = A U, skipping zeros of A and of U.
    let mut b = vec![ZERO; n * n];
    for (a_row, b_row) in op.data.chunks(n).zip(b.chunks_mut(n)) {
        for (k, &a) in a_row.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for &(j, x) in &rows[k] {
                b_row[j] += a * x;
            }
        }
    }
    // C = U† B: row k of B contributes conj(U[k,i]) to row i of C.
    let mut c = vec![ZERO; n * n];
    for (k, row) in rows.iter().enumerate() {
        let b_row = &b[k * n..(k + 1) * n];
        for &(i, x) in row {
            let x = x.conj();
            for (o, y) in c[i * n..(i + 1) * n].iter_mut().zip(b_row) {
                *o += x * y;
            }
        }
    }
    Ok(Operator {
        layout: op.layout.clone(),
        data: c,
    })
}

pub fn conjugate_by(op: &Operator, u: &Operator) -> Result<Operator> {
    conjugate_by_with_tol(op, u, DEFAULT_TOL)
}

/// `⟨ψ|op|ψ⟩`.
pub fn expectation(state: &StateVector, op: &Operator) -> Result<Complex64> {
    op.check_layout(state.layout())?;
    let n = op.dim();
    let mut acc = ZERO;
    for (r, psi_r) in state.amplitudes.iter().enumerate() {
        let row: Complex64 = op.data[r * n..(r + 1) * n]
            .iter()
            .zip(&state.amplitudes)
            .map(|(a, x)| a * x)
            .sum();
        acc += psi_r.conj() * row;
    }
    Ok(acc)
}

/// Real part of [`expectation`]; fails when the imaginary part reaches `tol`.
pub fn expectation_real_with_tol(state: &StateVector, op: &Operator, tol: f64) -> Result<f64> {
    let z = expectation(state, op)?;
    if z.im.abs() >= tol {
        return Err(SimError::NonRealExpectation(z.im));
    }
    Ok(z.re)
}

pub fn expectation_real(state: &StateVector, op: &Operator) -> Result<f64> {
    expectation_real_with_tol(state, op, DEFAULT_TOL)
}

/// Rank-one projector `|v⟩⟨v|`.
pub fn projector_from_state(v: &StateVector) -> Operator {
    Operator::outer(v, v).expect("same state on both sides")
}

/// Unit-norm state bound to a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: Arc<Layout>,
    amplitudes: Vec<Complex64>,
}

/// Allowed deviation of `‖ψ‖` from one.
pub const NORM_TOL: f64 = 1e-12;

impl StateVector {
    /// Rejects vectors whose norm differs from one by more than [`NORM_TOL`].
    pub fn new(layout: &Layout, amplitudes: Vec<Complex64>) -> Result<Self> {
        let s = Self::unchecked(layout, amplitudes)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(layout: &Layout, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::unchecked(layout, amplitudes)?;
        let norm = s.norm();
        if norm == 0.0 {
            return Err(SimError::NotNormalized(0.0));
        }
        s.amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(s)
    }

    fn unchecked(layout: &Layout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(SimError::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SimError::NonFinite("state amplitude".into()));
        }
        Ok(Self {
            layout: Arc::new(layout.clone()),
            amplitudes,
        })
    }

    /// Computational basis state with one digit per factor.
    pub fn basis(layout: &Layout, digits: &[usize]) -> Result<Self> {
        let idx = layout.index_of(digits)?;
        let mut amplitudes = vec![ZERO; layout.total_dim()];
        amplitudes[idx] = ONE;
        Ok(Self {
            layout: Arc::new(layout.clone()),
            amplitudes,
        })
    }

    /// Tensor product of states, in the given order.
    pub fn product(parts: &[&StateVector]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| SimError::InvalidLayout("empty product".into()))?;
        let mut acc = (*first).clone();
        for p in rest {
            let layout = acc.layout.concat(&p.layout)?;
            let amplitudes = acc
                .amplitudes
                .iter()
                .flat_map(|a| p.amplitudes.iter().map(move |b| a * b))
                .collect();
            acc = Self {
                layout: Arc::new(layout),
                amplitudes,
            };
        }
        Ok(acc)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_layout(other.layout())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn relabel(&self, layout: &Layout) -> Result<Self> {
        if layout.total_dim() != self.layout.total_dim() || layout.len() != self.layout.len() {
            return Err(SimError::LayoutMismatch {
                expected: self.layout.to_string(),
                found: layout.to_string(),
            });
        }
        Ok(Self {
            layout: Arc::new(layout.clone()),
            amplitudes: self.amplitudes.clone(),
        })
    }

    pub fn with_label(&self, label: &str) -> Result<Self> {
        if self.layout.len() != 1 {
            return Err(SimError::InvalidLayout(format!(
                "with_label needs a single-factor state, got {}",
                self.layout
            )));
        }
        self.relabel(&Layout::single(label, self.layout.total_dim())?)
    }

    fn check_layout(&self, other: &Layout) -> Result<()> {
        if *self.layout != *other {
            return Err(SimError::LayoutMismatch {
                expected: self.layout.to_string(),
                found: other.to_string(),
            });
        }
        Ok(())
    }
}

/// Pauli `σ_z` on a single factor.
pub fn sigma_z(label: &str) -> Result<Operator> {
    Operator::diagonal(&Layout::single(label, 2)?, &[1.0, -1.0])
}

pub fn sigma_x(label: &str) -> Result<Operator> {
    Operator::from_real(&Layout::single(label, 2)?, &[&[0.0, 1.0], &[1.0, 0.0]])
}
