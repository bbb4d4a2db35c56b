//! The seven noise channels, each given as an explicit isometry
//! `|ψ⟩_S ↦ U(|ψ⟩_S ⊗ |0…0⟩_E)`.
//!
//! Kraus operators are never written down independently: they are read off
//! the isometry as `K_e = ⟨e|_E U |0⟩_E`. That keeps the operator-sum form and
//! the global pure state consistent by construction, and the tests compare
//! the two routes against each other.
//!
//! Environment labels are derived from the system labels: a system `[A, B]`
//! gets environments `[E_A, E_B]`. The correlated amplitude damping channel
//! acts on both environment qubits jointly, and for `0 < μ < 1` an extra
//! `E_M` qubit records which branch (memoryless or full-memory) fired.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::density::DensityOperator;
use crate::layout::SubsystemLayout;
use crate::matrix::ComplexMatrix;
use crate::state::StateVector;
use crate::tolerance::{KRAUS_COMPLETENESS, KRAUS_PRUNE};
use crate::{Error, Result};

/// Label of the branch register used by a partially correlated channel.
pub const MEMORY_FLAG_LABEL: &str = "E_M";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    AmplitudeDamping,
    CorrelatedAmplitudeDamping,
    PhaseDamping,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 7] = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::CorrelatedAmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::Depolarizing,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "ADC",
            ChannelKind::CorrelatedAmplitudeDamping => "CADC",
            ChannelKind::PhaseDamping => "PDC",
            ChannelKind::BitFlip => "BFC",
            ChannelKind::PhaseFlip => "PFC",
            ChannelKind::BitPhaseFlip => "BPFC",
            ChannelKind::Depolarizing => "DC",
        }
    }

    /// Number of system qubits the channel is studied on.
    pub fn system_qubits(self) -> usize {
        match self {
            ChannelKind::AmplitudeDamping
            | ChannelKind::CorrelatedAmplitudeDamping
            | ChannelKind::PhaseDamping
            | ChannelKind::BitFlip => 2,
            ChannelKind::PhaseFlip | ChannelKind::BitPhaseFlip | ChannelKind::Depolarizing => 1,
        }
    }

    /// True when one environment is shared by both qubits.
    pub fn has_shared_environment(self) -> bool {
        self == ChannelKind::CorrelatedAmplitudeDamping
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.short_name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown channel `{s}` (expected one of adc, cadc, pdc, bfc, pfc, bpfc, dc)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    p: f64,
    mu: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        Self::with_memory(kind, p, 0.0)
    }

    /// `mu` is the memory parameter; nonzero only for the correlated channel.
    pub fn with_memory(kind: ChannelKind, p: f64, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain { name: "p", value: p });
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Domain { name: "mu", value: mu });
        }
        if mu != 0.0 && kind != ChannelKind::CorrelatedAmplitudeDamping {
            return Err(Error::Domain { name: "mu", value: mu });
        }
        Ok(Self { kind, p, mu })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::with_memory(self.kind, p, self.mu)
    }

    fn has_memory_flag(&self) -> bool {
        self.kind == ChannelKind::CorrelatedAmplitudeDamping && self.mu > 0.0 && self.mu < 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
    source: Option<ChannelSpec>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>, source: Option<ChannelSpec>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or(Error::Shape("Kraus set must be nonempty"))?;
        let d = first.rows();
        if operators.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::Shape("Kraus operators must be square and equally sized"));
        }
        Ok(Self { operators, source })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn source(&self) -> Option<&ChannelSpec> {
        self.source.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// Global pure state of system plus environment.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationResult {
    pub state: StateVector,
    pub layout: SubsystemLayout,
}

impl DilationResult {
    pub fn density(&self) -> DensityOperator {
        crate::density::outer(&self.state, &self.layout).expect("layout matches state")
    }
}

/// Single-qubit isometry as a 4×2 matrix, rows indexed by `(system, env)`.
fn local_isometry(kind: ChannelKind, p: f64) -> ComplexMatrix {
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut v = ComplexMatrix::zeros(4, 2);
    // row = 2 * system + env
    match kind {
        ChannelKind::AmplitudeDamping | ChannelKind::CorrelatedAmplitudeDamping => {
            v[(0, 0)] = re(1.0);
            v[(2, 1)] = re(libm::sqrt(1.0 - p));
            v[(1, 1)] = re(libm::sqrt(p));
        }
        ChannelKind::PhaseDamping => {
            v[(0, 0)] = re(1.0);
            v[(2, 1)] = re(libm::sqrt(1.0 - p));
            v[(3, 1)] = re(libm::sqrt(p));
        }
        ChannelKind::BitFlip => {
            let (stay, flip) = (libm::sqrt(1.0 - p / 2.0), libm::sqrt(p / 2.0));
            v[(0, 0)] = re(stay);
            v[(3, 0)] = re(flip);
            v[(2, 1)] = re(stay);
            v[(1, 1)] = re(flip);
        }
        ChannelKind::PhaseFlip => {
            let (stay, flip) = (libm::sqrt(1.0 - p), libm::sqrt(p));
            v[(0, 0)] = re(stay);
            v[(1, 0)] = re(flip);
            v[(2, 1)] = re(stay);
            v[(3, 1)] = re(-flip);
        }
        ChannelKind::BitPhaseFlip => {
            let (stay, flip) = (libm::sqrt(1.0 - p), libm::sqrt(p));
            v[(0, 0)] = re(stay);
            v[(3, 0)] = Complex64::new(0.0, flip);
            v[(2, 1)] = re(stay);
            v[(1, 1)] = Complex64::new(0.0, -flip);
        }
        ChannelKind::Depolarizing => {
            let (stay, turn) = (libm::sqrt((1.0 + p) / 2.0), libm::sqrt((1.0 - p) / 2.0));
            // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = -i|0⟩
            v[(0, 0)] = re(stay);
            v[(3, 0)] = Complex64::new(0.0, turn);
            v[(2, 1)] = re(stay);
            v[(1, 1)] = Complex64::new(0.0, -turn);
        }
    }
    v
}

/// Full-memory amplitude damping on two qubits: only `|11⟩` decays, into
/// `|00⟩_S |11⟩_E`. Rows indexed by `(system, env)`, 16×4.
fn full_memory_isometry(p: f64) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(16, 4);
    for s in 0..3 {
        v[(s * 4, s)] = Complex64::new(1.0, 0.0);
    }
    v[(3 * 4, 3)] = Complex64::new(libm::sqrt(1.0 - p), 0.0);
    v[(3, 3)] = Complex64::new(libm::sqrt(p), 0.0);
    v
}

/// Two independent copies of a local isometry, rows reordered from
/// `(a, e_a, b, e_b)` to `(a, b, e_a, e_b)`.
fn product_isometry(local: &ComplexMatrix) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(16, 4);
    for a in 0..2 {
        for b in 0..2 {
            let col = 2 * a + b;
            for a2 in 0..2 {
                for ea in 0..2 {
                    let va = local[(2 * a2 + ea, a)];
                    if va.norm_sqr() == 0.0 {
                        continue;
                    }
                    for b2 in 0..2 {
                        for eb in 0..2 {
                            let row = (2 * a2 + b2) * 4 + 2 * ea + eb;
                            v[(row, col)] = va * local[(2 * b2 + eb, b)];
                        }
                    }
                }
            }
        }
    }
    v
}

/// The isometry `S → S ⊗ E` for `spec`, rows indexed by `(system, env)`,
/// together with the number of environment qubits.
fn isometry(spec: &ChannelSpec) -> (ComplexMatrix, usize) {
    let p = spec.p;
    match spec.kind {
        ChannelKind::CorrelatedAmplitudeDamping => {
            let memoryless = product_isometry(&local_isometry(ChannelKind::AmplitudeDamping, p));
            if spec.mu == 0.0 {
                return (memoryless, 2);
            }
            let memory = full_memory_isometry(p);
            if spec.mu == 1.0 {
                return (memory, 2);
            }
            // flag qubit appended as the least significant environment digit
            let (w0, w1) = (libm::sqrt(1.0 - spec.mu), libm::sqrt(spec.mu));
            let mut v = ComplexMatrix::zeros(32, 4);
            for row in 0..16 {
                for col in 0..4 {
                    v[(2 * row, col)] = memoryless[(row, col)] * w0;
                    v[(2 * row + 1, col)] = memory[(row, col)] * w1;
                }
            }
            (v, 3)
        }
        kind if kind.system_qubits() == 2 => (product_isometry(&local_isometry(kind, p)), 2),
        kind => (local_isometry(kind, p), 1),
    }
}

fn environment_layout(spec: &ChannelSpec, sys_layout: &SubsystemLayout) -> Result<SubsystemLayout> {
    let mut labels: Vec<String> = sys_layout
        .labels()
        .iter()
        .map(|l| format!("E_{l}"))
        .collect();
    if spec.has_memory_flag() {
        labels.push(String::from(MEMORY_FLAG_LABEL));
    }
    SubsystemLayout::qubits(&labels)
}

/// Default system layout for a channel: `[A, B]` or `[A]`.
pub fn system_layout(kind: ChannelKind) -> SubsystemLayout {
    let labels: &[&str] = if kind.system_qubits() == 2 { &["A", "B"] } else { &["A"] };
    SubsystemLayout::qubits(labels).expect("static labels are valid")
}

/// Evolves `system ⊗ |0…0⟩_E` to the global pure state.
pub fn dilate(
    spec: &ChannelSpec,
    system: &StateVector,
    sys_layout: &SubsystemLayout,
) -> Result<DilationResult> {
    let kind = spec.kind;
    let qubits = kind.system_qubits();
    if sys_layout.len() != qubits || sys_layout.dims().iter().any(|&d| d != 2) {
        return Err(Error::Arity {
            kind: kind.short_name(),
            expected: qubits,
            actual: sys_layout.len(),
        });
    }
    if system.dim() != sys_layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: sys_layout.total_dim(),
            actual: system.dim(),
        });
    }
    if kind == ChannelKind::Depolarizing && !system.is_real() {
        return Err(Error::ComplexAmplitudes);
    }

    let (v, _) = isometry(spec);
    let env = environment_layout(spec, sys_layout)?;
    let layout = sys_layout.extend(&env)?;

    let amps = system.amplitudes();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); v.rows()];
    for (row, slot) in out.iter_mut().enumerate() {
        for (col, a) in amps.iter().enumerate() {
            *slot += v[(row, col)] * a;
        }
    }
    Ok(DilationResult {
        state: StateVector::from_raw(out),
        layout,
    })
}

fn kraus_from_isometry(v: &ComplexMatrix, sys_dim: usize) -> Vec<ComplexMatrix> {
    let env_dim = v.rows() / sys_dim;
    let mut ops = Vec::new();
    for e in 0..env_dim {
        let mut k = ComplexMatrix::zeros(sys_dim, sys_dim);
        for s_out in 0..sys_dim {
            for s_in in 0..sys_dim {
                k[(s_out, s_in)] = v[(s_out * env_dim + e, s_in)];
            }
        }
        if libm::sqrt(k.frobenius_norm_sqr()) >= KRAUS_PRUNE {
            ops.push(k);
        }
    }
    ops
}

/// Kraus operators on the full system, `K_e = ⟨e|_E U |0⟩_E`.
pub fn kraus_set(spec: &ChannelSpec) -> KrausSet {
    let (v, _) = isometry(spec);
    KrausSet {
        operators: kraus_from_isometry(&v, v.cols()),
        source: Some(*spec),
    }
}

/// Kraus operators of the single-qubit factor of a memoryless channel.
pub fn local_kraus_set(kind: ChannelKind, p: f64) -> Result<KrausSet> {
    if kind.has_shared_environment() {
        return Err(Error::Shape("correlated channel has no single-qubit factor"));
    }
    let spec = ChannelSpec::new(kind, p)?;
    Ok(KrausSet {
        operators: kraus_from_isometry(&local_isometry(kind, p), 2),
        source: Some(spec),
    })
}

/// Largest entrywise modulus of `Σ K†K − I`.
pub fn validate_kraus(ks: &KrausSet) -> f64 {
    let d = ks.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    for k in &ks.operators {
        sum = &sum + &(&k.adjoint() * k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(d))
}

/// `Σ K ρ K†`.
pub fn apply_kraus(rho: &DensityOperator, ks: &KrausSet) -> Result<DensityOperator> {
    if rho.dim() != ks.dim() {
        return Err(Error::DimensionMismatch {
            expected: ks.dim(),
            actual: rho.dim(),
        });
    }
    let residual = validate_kraus(ks);
    if residual > KRAUS_COMPLETENESS {
        return Err(Error::IncompleteKraus(residual));
    }
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for k in &ks.operators {
        out = &out + &(&(k * rho.matrix()) * &k.adjoint());
    }
    Ok(DensityOperator::from_trusted(out, rho.layout().clone()))
}
