//! Spin chains with fractional revival.
//!
//! An XY chain with nearest-neighbour couplings `J_n` and fields `B_n` is
//! simulated in its single-excitation sector. The crate designs chains whose
//! excitation at site 1 splits at time `tau0` into
//! `e^{i phi}(cos theta |1> + i sin theta |N>)`, checks candidate chains for
//! that behaviour, evaluates the associated speed limits, and simulates the
//! heralded transfer protocol built on top of it.
//!
//! Sites are numbered from 1 in every public interface.

pub mod chain;
pub mod designer;
pub mod eigen;
pub mod error;
pub mod protocol;
pub mod revival;
pub mod tolerance;

pub use chain::{build_hamiltonian, mirror_operator, ChainSpec, SingleExcitationState, TridiagonalHamiltonian};
pub use designer::{critical_angle, genest_chain, spectral_design, symmetric_design, FrDesign, FrSpectrumSpec};
pub use eigen::{eigendecompose, evolve, EigenSystem, Propagator};
pub use error::{Error, Result};
pub use protocol::{encode, monte_carlo, LogicalQubit, MonorailChannel, ProtocolStats};
pub use revival::{detect_revival, RevivalCharacterization};
pub use tolerance::Tolerances;
