//! Bang-bang symmetrization of system-bath Hamiltonians.
//!
//! Exact rational average-Hamiltonian computation over Pauli/Clifford pulse
//! cycles, error-group analysis, and a dense-matrix oracle for checking the
//! first-order average against the simulated propagator.

pub mod bath;
pub mod cli;
pub mod error;
pub mod group;
pub mod io;
pub mod numeric;
pub mod pauli;
pub mod pulse;
pub mod sequence;

pub use bath::{BathVector, InteractionTerm, Rational, SBHamiltonian};
pub use error::{Error, Result};
pub use group::{ErrorGroup, GroupReport};
pub use pauli::{Pauli, PauliKey, PauliString, Phase};
pub use pulse::{Gate, Pulse, Tableau};
pub use sequence::{BuiltinSequence, Event, Frame, Sequence};
