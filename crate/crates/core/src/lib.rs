//! Unitary measurement models evolved in the Heisenberg picture.
//!
//! Builds the EPR-Bohm and GHZ-Mermin experiments as dense operators on
//! labeled tensor-product spaces, evolves observables through ideal
//! measurement interactions, and reports correlation functions, the Bell
//! quantity `Q`, parity probabilities, and which tensor factors each evolved
//! observable acts on. Exhaustive instruction-set enumeration supplies the
//! classical bounds for comparison.

pub mod config;
pub mod eprb;
pub mod error;
pub mod ghzm;
pub mod labels;
pub mod lhv;
pub mod measurement;
pub mod picture;
pub mod run;
pub mod tensor;

pub use error::{Result, SimError};
pub use measurement::{Direction, InteractionSequence, ObserverSpec, SpinOutcome};
pub use tensor::{Layout, Operator, StateVector};
