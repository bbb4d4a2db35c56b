//! Complete complementarity relations for one and two qubits evolving under
//! noisy channels.
//!
//! Every channel is modeled as an explicit isometry from the system into
//! system plus environment, so the global state stays pure and the linear
//! entropy of a subsystem can be read as its correlation with everything
//! else. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ccr;
pub mod channels;
pub mod density;
pub mod eigen;
mod error;
pub mod layout;
pub mod matrix;
pub mod measures;
pub mod state;
pub mod tolerance;

pub use ccr::{
    ccr_report, check_identity, sudden_death_by_bisection, sudden_death_point, CcrReport,
    IdentityId,
};
pub use channels::{
    apply_kraus, dilate, kraus_set, local_kraus_set, validate_kraus, ChannelKind, ChannelSpec,
    DilationResult, KrausSet,
};
pub use density::{outer, partial_trace, partial_transpose, purity, DensityOperator};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use error::Error;
pub use layout::SubsystemLayout;
pub use matrix::{tensor_product, ComplexMatrix};
pub use measures::{
    concurrence_pure, concurrence_x_state, correlated_coherence_hs, hs_coherence,
    hs_predictability, is_ppt, linear_entropy, re_correlated_coherence, sector_decomposition,
    von_neumann_entropy, PartitionSpec, SectorDecomposition,
};
pub use state::StateVector;

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
