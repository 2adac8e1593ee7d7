//! Instruction-set (local hidden variable) models, enumerated exhaustively.
//!
//! EPRB: particle 1 carries a definite up/down answer for each of the three
//! analyzer settings 0°, 120°, 240°; particle 2 carries the opposite answers,
//! which enforces perfect anti-correlation at equal settings.
//!
//! GHZM: each of three particles carries answers for the settings 0° and 90°.

use crate::error::{Result, SimError};
use crate::measurement::SpinOutcome;

/// Settings of the three-setting EPRB test, in degrees.
pub const EPRB_SETTINGS_DEG: [f64; 3] = [0.0, 120.0, 240.0];

/// Ordered setting pairs `(a, b)` whose `P_uu` values make up `Q`.
pub const Q_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Particle 1's answers at the three settings. Bit `k` set means "up" at
/// setting `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EprbInstructionSet(u8);

impl EprbInstructionSet {
    pub fn all() -> impl Iterator<Item = Self> {
        (0..8).map(Self)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn particle1(self, setting: usize) -> SpinOutcome {
        if self.0 >> setting & 1 == 1 {
            SpinOutcome::Up
        } else {
            SpinOutcome::Down
        }
    }

    pub fn particle2(self, setting: usize) -> SpinOutcome {
        match self.particle1(setting) {
            SpinOutcome::Up => SpinOutcome::Down,
            SpinOutcome::Down => SpinOutcome::Up,
        }
    }

    /// Whether this set makes both particles answer "up" at settings
    /// `(a, b)`, i.e. particle 1 says up at `a` and down at `b`.
    pub fn both_up(self, a: usize, b: usize) -> bool {
        self.particle1(a) == SpinOutcome::Up && self.particle2(b) == SpinOutcome::Up
    }

    /// Number of `Q` addend events this set realizes.
    pub fn q_events(self) -> usize {
        Q_PAIRS.iter().filter(|&&(a, b)| self.both_up(a, b)).count()
    }
}

/// `Q` for a probability distribution over the eight instruction sets,
/// indexed by [`EprbInstructionSet::index`].
pub fn eprb_q_over_distribution(weights: &[f64; 8]) -> Result<f64> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(SimError::InvalidDistribution(
            "weights must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(SimError::InvalidDistribution(format!(
            "weights sum to {total}"
        )));
    }
    Ok(EprbInstructionSet::all()
        .map(|s| weights[s.index()] * s.q_events() as f64)
        .sum())
}

/// Maximum of `Q` over all distributions. `Q` is linear in the weights, so
/// the maximum is attained at a point mass; the returned set is the first
/// maximizer.
pub fn eprb_q_max() -> (f64, EprbInstructionSet) {
    EprbInstructionSet::all()
        .map(|s| {
            let mut w = [0.0; 8];
            w[s.index()] = 1.0;
            (eprb_q_over_distribution(&w).expect("point mass"), s)
        })
        .fold((f64::NEG_INFINITY, EprbInstructionSet(0)), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        })
}

/// GHZ settings, in degrees.
pub const GHZ_SETTINGS_DEG: [f64; 2] = [0.0, 90.0];

/// Setting triples (indices into [`GHZ_SETTINGS_DEG`]) at which quantum
/// mechanics forbids an even number of up results.
pub const GHZ_CONSTRAINTS: [[usize; 3]; 3] = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];

/// Answers of three particles at two settings. Bit `2p + s` set means
/// particle `p` answers "up" at setting `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GhzInstructionSet(u8);

impl GhzInstructionSet {
    pub fn all() -> impl Iterator<Item = Self> {
        (0..64).map(Self)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn outcome(self, particle: usize, setting: usize) -> SpinOutcome {
        if self.0 >> (2 * particle + setting) & 1 == 1 {
            SpinOutcome::Up
        } else {
            SpinOutcome::Down
        }
    }

    pub fn ups(self, settings: [usize; 3]) -> usize {
        (0..3)
            .filter(|&p| self.outcome(p, settings[p]) == SpinOutcome::Up)
            .count()
    }

    pub fn satisfies_constraints(self) -> bool {
        GHZ_CONSTRAINTS.iter().all(|&t| self.ups(t) % 2 == 1)
    }
}

#[derive(Debug, Clone)]
pub struct GhzVerdict {
    pub examined: usize,
    pub survivors: Vec<GhzInstructionSet>,
    /// Up-count parity at (0°, 0°, 0°) for each survivor; `true` = even.
    pub even_at_000: Vec<bool>,
}

impl GhzVerdict {
    /// Classical `P_eu(0°,0°,0°)`: the fraction of surviving sets with an
    /// even up-count there. Every mixture of survivors lies between the min
    /// and max, and here all survivors agree.
    pub fn classical_p_even_000(&self) -> f64 {
        let even = self.even_at_000.iter().filter(|&&e| e).count();
        even as f64 / self.survivors.len() as f64
    }

    pub fn all_odd_at_000(&self) -> bool {
        self.even_at_000.iter().all(|e| !e)
    }
}

pub fn ghz_constrained_sets() -> GhzVerdict {
    let mut examined = 0;
    let mut survivors = Vec::new();
    for s in GhzInstructionSet::all() {
        examined += 1;
        if s.satisfies_constraints() {
            survivors.push(s);
        }
    }
    let even_at_000 = survivors.iter().map(|s| s.ups([0, 0, 0]) % 2 == 0).collect();
    GhzVerdict {
        examined,
        survivors,
        even_at_000,
    }
}
