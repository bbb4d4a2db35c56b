//! Numerical tolerances shared across the crate.

/// Structural invariants: hermiticity, trace, normalization.
pub const STRUCTURAL: f64 = 1e-12;

/// Anything that passes through an eigensolve.
pub const SPECTRAL: f64 = 1e-10;

/// Most negative eigenvalue tolerated on a density operator. Values in
/// `[-SPECTRAL, 0)` are clamped to zero before taking logarithms.
pub const MIN_EIGENVALUE: f64 = -SPECTRAL;

/// Kraus operators with Frobenius norm below this are dropped.
pub const KRAUS_PRUNE: f64 = 1e-14;

/// Completeness residual above which `apply_kraus` refuses a set.
pub const KRAUS_COMPLETENESS: f64 = 1e-10;

/// Entries outside the X pattern must stay below this.
pub const X_STATE: f64 = 1e-12;
