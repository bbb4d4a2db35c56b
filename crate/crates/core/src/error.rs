use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid shape: {0}")]
    Shape(&'static str),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("not a density operator: {0}")]
    NotDensity(&'static str),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("parameter `{name}` = {value} outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("channel {kind} acts on {expected} qubit(s), got a {actual}-qubit system")]
    Arity {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("depolarizing dilation requires real amplitudes")]
    ComplexAmplitudes,
    #[error("Kraus set is incomplete (residual {0:e})")]
    IncompleteKraus(f64),
    #[error("matrix is not an X state")]
    NotXState,
    #[error("unsupported partition: {0}")]
    Partition(&'static str),
    #[error("identity {identity} does not apply to channel {kind}")]
    InapplicableIdentity {
        identity: &'static str,
        kind: &'static str,
    },
    #[error("required measure `{0}` missing from report")]
    MissingMeasure(&'static str),
    #[error("closed form {expected} disagrees with numerical search {found}")]
    CrossCheck { expected: f64, found: f64 },
}
