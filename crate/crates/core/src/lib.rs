//! Transverse-field Ising ground states on imprinted complex networks, the
//! emergent mutual-information network they carry, mean-field predictions,
//! and the response of both to partial projective-measurement attacks.
//!
//! The numerical core is generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix it to `f64`, which is what the experiment drivers use.

pub mod error;
pub mod experiments;
pub mod graphs;
pub mod hilbert;
pub mod linalg;
pub mod meanfield;
pub mod minet;
pub mod quantum_state;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use graphs::{Graph, GraphModel, GraphModelSpec, RemovalStrategy};
pub use quantum_state::{AttackSpec, Direction, LocalSites, TargetStrategy};
pub use scalar::Scalar;

pub type Real = f64;
pub type GroundState = hilbert::GroundState<Real>;
pub type SparseHamiltonian = hilbert::SparseHamiltonian<Real>;
pub type HamiltonianParams = hilbert::HamiltonianParams<Real>;
pub type SolverOptions = hilbert::SolverOptions<Real>;
pub type SiteRdm = quantum_state::SiteRdm<Real>;
pub type PairRdm = quantum_state::PairRdm<Real>;
pub type StateRdms = quantum_state::StateRdms<Real>;
pub type MiNetwork = minet::MiNetwork<Real>;
pub type PathLengths = minet::PathLengths<Real>;
pub type MfGeneral = meanfield::MfGeneral<Real>;
pub type MfOptions = meanfield::MfOptions<Real>;
pub type MfRdms = meanfield::MfRdms<Real>;
pub type MfMeasures = meanfield::MfMeasures<Real>;
