//! Complete complementarity reports for one `(channel, x, p)` point and the
//! redistribution identities checked on them.
//!
//! Every number in a report comes out of the dilation pipeline. The identities
//! only compare measured quantities with each other (or with the same
//! quantity evaluated on the undisturbed initial state), never with closed
//! forms.

use alloc::collections::BTreeMap;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use crate::channels::{dilate, system_layout, ChannelKind, ChannelSpec};
use crate::density::{outer, partial_trace, DensityOperator};
use crate::measures::{
    concurrence_x_state, correlated_coherence_hs, hs_coherence, hs_predictability, is_ppt,
    linear_entropy, re_correlated_coherence, sector_decomposition, PartitionSpec,
    SectorDecomposition,
};
use crate::state::StateVector;
use crate::tolerance::SPECTRAL;
use crate::{Error, Result};

/// Measure names. The ones that are also CSV columns use the column name.
pub mod names {
    pub const P_HS_A: &str = "P_hs_A";
    pub const C_HS_A: &str = "C_hs_A";
    pub const S_L_A: &str = "S_l_A";
    pub const CC_AB: &str = "Cc_AB";
    pub const CC_AEA: &str = "Cc_AEA";
    pub const CC_AEB: &str = "Cc_AEB";
    pub const CC_EAEB: &str = "Cc_EAEB";
    pub const CC_ABE: &str = "Cc_ABE";
    pub const C_GLOBAL: &str = "C_global";
    pub const C_ENV: &str = "C_env";
    pub const CONCURRENCE_AB: &str = "concurrence_AB";
    pub const MUTUAL_INFO_AB: &str = "mutual_info_AB";
    pub const PPT_AEA: &str = "ppt_AEA";
    pub const PPT_AEB: &str = "ppt_AEB";
    pub const PPT_EAEB: &str = "ppt_EAEB";
    pub const PPT_AB: &str = "ppt_AB";

    /// Same quantities on the initial state, before any coupling.
    pub const P_HS_A_INITIAL: &str = "P_hs_A_initial";
    pub const C_HS_A_INITIAL: &str = "C_hs_A_initial";
    pub const S_L_A_INITIAL: &str = "S_l_A_initial";

    /// Sector weights of the global pure state keyed by the differing labels.
    pub const SECTOR_AB: &str = "sector_AB";
    pub const SECTOR_ABEA: &str = "sector_ABEA";
    pub const SECTOR_ABEB: &str = "sector_ABEB";
    pub const SECTOR_ABEAEB: &str = "sector_ABEAEB";
    pub const SECTOR_EAEB: &str = "sector_EAEB";
    pub const SECTOR_EA: &str = "sector_EA";
    pub const SECTOR_EB: &str = "sector_EB";
    pub const SECTOR_TOTAL: &str = "sector_total";
    /// AB + ABE_A + ABE_B + ABE_AE_B sectors.
    pub const NONLOCAL_SUM: &str = "nonlocal_sum";
    /// The same grouping with the E_AE_B-based coefficient in the last slot.
    pub const NONLOCAL_SUM_ALT: &str = "nonlocal_sum_alt";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `P + C + S_l = 1/2` for qubit A.
    CcrUniversal,
    /// `P + C^c(AB) + C^c(AE_A) + C^c(AE_B) = 1/2`.
    AdcRedistribution,
    /// `P + C^c(ABE) − C^c(E) = 1/2`.
    CadcRedistribution,
    /// `C^c(E) + C^c(AB)` equals the initial linear entropy.
    CadcEnvComplement,
    /// `S_l = C(ABE_AE_B) − C(E_AE_B)`.
    PdcSubtraction,
    /// Nonlocal sector weights sum to the initial linear entropy.
    PdcNonlocalSum,
    /// `S_l = C^c(AB) + C^c(AE_A) + C^c(AE_B) − C^c(E_AE_B)`.
    BfcFourTerm,
    /// `C(ρ_A)` at p = 0 equals `C(ρ_A) + S_l(ρ_A)`.
    PfcCoherenceSplit,
    /// `C^c(AE_A) = (3/2) S_l`.
    ThreeHalves,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::CcrUniversal,
        IdentityId::AdcRedistribution,
        IdentityId::CadcRedistribution,
        IdentityId::CadcEnvComplement,
        IdentityId::PdcSubtraction,
        IdentityId::PdcNonlocalSum,
        IdentityId::BfcFourTerm,
        IdentityId::PfcCoherenceSplit,
        IdentityId::ThreeHalves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::CcrUniversal => "CCR_UNIVERSAL",
            IdentityId::AdcRedistribution => "ADC_REDISTRIBUTION",
            IdentityId::CadcRedistribution => "CADC_REDISTRIBUTION",
            IdentityId::CadcEnvComplement => "CADC_ENV_COMPLEMENT",
            IdentityId::PdcSubtraction => "PDC_SUBTRACTION",
            IdentityId::PdcNonlocalSum => "PDC_NL_SUM",
            IdentityId::BfcFourTerm => "BFC_FOUR_TERM",
            IdentityId::PfcCoherenceSplit => "PFC_COHERENCE_SPLIT",
            IdentityId::ThreeHalves => "THREE_HALVES",
        }
    }

    /// Whether the identity is stated for this channel configuration.
    /// Correlated amplitude damping is memoryless ADC at μ = 0, and its
    /// own identities are stated at μ = 1 only.
    pub fn applies_to(self, spec: &ChannelSpec) -> bool {
        use ChannelKind::*;
        let kind = spec.kind();
        match self {
            IdentityId::CcrUniversal => true,
            IdentityId::AdcRedistribution => {
                kind == AmplitudeDamping || (kind == CorrelatedAmplitudeDamping && spec.mu() == 0.0)
            }
            IdentityId::CadcRedistribution | IdentityId::CadcEnvComplement => {
                kind == CorrelatedAmplitudeDamping && spec.mu() == 1.0
            }
            IdentityId::PdcSubtraction | IdentityId::PdcNonlocalSum => kind == PhaseDamping,
            IdentityId::BfcFourTerm => kind == BitFlip,
            IdentityId::PfcCoherenceSplit => kind == PhaseFlip,
            IdentityId::ThreeHalves => matches!(kind, PhaseFlip | BitPhaseFlip | Depolarizing),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything measured at one `(channel, x, p)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct CcrReport {
    pub channel: ChannelSpec,
    pub x: f64,
    pub measures: BTreeMap<&'static str, f64>,
    pub flags: BTreeMap<&'static str, bool>,
    pub residuals: BTreeMap<IdentityId, f64>,
    /// Present when the global state is pure.
    pub sectors: Option<SectorDecomposition>,
}

impl CcrReport {
    pub fn measure(&self, name: &'static str) -> Option<f64> {
        self.measures.get(name).copied()
    }

    pub fn flag(&self, name: &'static str) -> Option<bool> {
        self.flags.get(name).copied()
    }

    fn require(&self, name: &'static str) -> Result<f64> {
        self.measure(name).ok_or(Error::MissingMeasure(name))
    }

    pub fn residual(&self, id: IdentityId) -> Option<f64> {
        self.residuals.get(&id).copied()
    }

    /// Largest residual over the channel-specific identities (excluding the
    /// universal relation), if any apply.
    pub fn channel_identity_residual(&self) -> Option<f64> {
        self.residuals
            .iter()
            .filter(|(id, _)| **id != IdentityId::CcrUniversal)
            .map(|(_, r)| *r)
            .reduce(f64::max)
    }
}

/// `x|0…0⟩ + √(1−x²)|1…1⟩` on the channel's system.
pub fn initial_state(kind: ChannelKind, x: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { name: "x", value: x });
    }
    let y = libm::sqrt(1.0 - x * x);
    if kind.system_qubits() == 2 {
        StateVector::from_real(&[x, 0.0, 0.0, y])
    } else {
        StateVector::from_real(&[x, y])
    }
}

/// The `x` actually used for a channel: bit flip is studied at `1/√2` only.
pub fn effective_x(kind: ChannelKind, x: f64) -> f64 {
    if kind == ChannelKind::BitFlip {
        FRAC_1_SQRT_2
    } else {
        x
    }
}

pub fn ccr_report(spec: &ChannelSpec, x: f64) -> Result<CcrReport> {
    use names::*;

    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { name: "x", value: x });
    }
    let kind = spec.kind();
    let x = effective_x(kind, x);
    let sys_layout = system_layout(kind);
    let psi = initial_state(kind, x)?;
    let dilation = dilate(spec, &psi, &sys_layout)?;
    let global = dilation.density();

    let mut measures = BTreeMap::new();
    let mut flags = BTreeMap::new();

    let initial_a = partial_trace(&outer(&psi, &sys_layout)?, &["A"])?;
    measures.insert(P_HS_A_INITIAL, hs_predictability(&initial_a));
    measures.insert(C_HS_A_INITIAL, hs_coherence(&initial_a));
    measures.insert(S_L_A_INITIAL, linear_entropy(&initial_a));

    let rho_a = partial_trace(&global, &["A"])?;
    measures.insert(P_HS_A, hs_predictability(&rho_a));
    measures.insert(C_HS_A, hs_coherence(&rho_a));
    measures.insert(S_L_A, linear_entropy(&rho_a));

    let cc = |labels: &[&str]| -> Result<f64> {
        correlated_coherence_hs(&global, &PartitionSpec::singles(labels)?)
    };
    let ppt = |labels: &[&str], transposed: &str| -> Result<bool> {
        is_ppt(&partial_trace(&global, labels)?, transposed, SPECTRAL)
    };

    measures.insert(CC_AEA, cc(&["A", "E_A"])?);
    flags.insert(PPT_AEA, ppt(&["A", "E_A"], "A")?);

    if kind.system_qubits() == 2 {
        let rho_ab = partial_trace(&global, &["A", "B"])?;
        let rho_env = partial_trace(&global, &["E_A", "E_B"])?;
        let rho_four = partial_trace(&global, &["A", "B", "E_A", "E_B"])?;

        measures.insert(CC_AB, cc(&["A", "B"])?);
        measures.insert(CC_AEB, cc(&["A", "E_B"])?);
        measures.insert(CC_EAEB, cc(&["E_A", "E_B"])?);
        measures.insert(CC_ABE, cc(&["A", "B", "E_A", "E_B"])?);
        measures.insert(C_GLOBAL, hs_coherence(&rho_four));
        measures.insert(C_ENV, hs_coherence(&rho_env));
        measures.insert(CONCURRENCE_AB, concurrence_x_state(&rho_ab)?);
        let ab = PartitionSpec::singles(&["A", "B"])?;
        measures.insert(MUTUAL_INFO_AB, re_correlated_coherence(&rho_ab, &ab)?);
        flags.insert(PPT_AB, is_ppt(&rho_ab, "A", SPECTRAL)?);
        flags.insert(PPT_AEB, ppt(&["A", "E_B"], "A")?);
        flags.insert(PPT_EAEB, ppt(&["E_A", "E_B"], "E_A")?);
    } else {
        let rho_env = partial_trace(&global, &["E_A"])?;
        measures.insert(C_GLOBAL, hs_coherence(&global));
        measures.insert(C_ENV, hs_coherence(&rho_env));
    }

    // A branch register makes the four-qubit state mixed; sectors need purity.
    let sectors = if dilation.layout.len() == sys_layout.len() * 2 {
        Some(sector_decomposition(&dilation.state, &dilation.layout)?)
    } else {
        None
    };
    if let (Some(dec), 2) = (&sectors, kind.system_qubits()) {
        let w = |key: &[&str]| dec.weight(key);
        let ab = w(&["A", "B"]);
        let abea = w(&["A", "B", "E_A"]);
        let abeb = w(&["A", "B", "E_B"]);
        let abeaeb = w(&["A", "B", "E_A", "E_B"]);
        let eaeb = w(&["E_A", "E_B"]);
        measures.insert(SECTOR_AB, ab);
        measures.insert(SECTOR_ABEA, abea);
        measures.insert(SECTOR_ABEB, abeb);
        measures.insert(SECTOR_ABEAEB, abeaeb);
        measures.insert(SECTOR_EAEB, eaeb);
        measures.insert(SECTOR_EA, w(&["E_A"]));
        measures.insert(SECTOR_EB, w(&["E_B"]));
        measures.insert(SECTOR_TOTAL, dec.total);
        measures.insert(NONLOCAL_SUM, ab + abea + abeb + abeaeb);
        measures.insert(NONLOCAL_SUM_ALT, ab + abea + abeb + eaeb / 2.0);
    }

    let mut report = CcrReport {
        channel: *spec,
        x,
        measures,
        flags,
        residuals: BTreeMap::new(),
        sectors,
    };
    for id in IdentityId::ALL {
        if id.applies_to(spec) {
            let r = check_identity(id, &report)?;
            report.residuals.insert(id, r);
        }
    }
    Ok(report)
}

/// `|LHS − RHS|` of an identity evaluated on a report.
pub fn check_identity(id: IdentityId, report: &CcrReport) -> Result<f64> {
    use names::*;

    if !id.applies_to(&report.channel) {
        return Err(Error::InapplicableIdentity {
            identity: id.name(),
            kind: report.channel.kind().short_name(),
        });
    }
    let m = |name| report.require(name);
    // qubit A: (d - 1) / d
    const HALF: f64 = 0.5;
    let residual = match id {
        IdentityId::CcrUniversal => m(P_HS_A)? + m(C_HS_A)? + m(S_L_A)? - HALF,
        IdentityId::AdcRedistribution => {
            m(P_HS_A)? + m(CC_AB)? + m(CC_AEA)? + m(CC_AEB)? - HALF
        }
        IdentityId::CadcRedistribution => m(P_HS_A)? + m(CC_ABE)? - m(CC_EAEB)? - HALF,
        IdentityId::CadcEnvComplement => m(CC_EAEB)? + m(CC_AB)? - m(S_L_A_INITIAL)?,
        IdentityId::PdcSubtraction => m(S_L_A)? - (m(C_GLOBAL)? - m(C_ENV)?),
        IdentityId::PdcNonlocalSum => m(NONLOCAL_SUM)? - m(S_L_A_INITIAL)?,
        IdentityId::BfcFourTerm => {
            m(S_L_A)? - (m(CC_AB)? + m(CC_AEA)? + m(CC_AEB)? - m(CC_EAEB)?)
        }
        IdentityId::PfcCoherenceSplit => m(C_HS_A_INITIAL)? - (m(C_HS_A)? + m(S_L_A)?),
        IdentityId::ThreeHalves => m(CC_AEA)? - 1.5 * m(S_L_A)?,
    };
    Ok(residual.abs())
}

fn adc_concurrence(x: f64, p: f64) -> Result<f64> {
    let spec = ChannelSpec::new(ChannelKind::AmplitudeDamping, p)?;
    let layout = system_layout(ChannelKind::AmplitudeDamping);
    let global = dilate(&spec, &initial_state(ChannelKind::AmplitudeDamping, x)?, &layout)?;
    let rho_ab: DensityOperator = partial_trace(&global.density(), &["A", "B"])?;
    concurrence_x_state(&rho_ab)
}

/// Smallest `p` at which the ADC concurrence of `ρ_AB` vanishes, found by
/// bisection on the evolved state.
pub fn sudden_death_by_bisection(x: f64) -> Result<Option<f64>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { name: "x", value: x });
    }
    let dead = |p: f64| adc_concurrence(x, p).map(|c| c <= 0.0);
    if dead(0.0)? || !dead(1.0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dead(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // concurrence also vanishes at p = 1 for every x; only an earlier zero counts
    Ok(if hi < 1.0 { Some(hi) } else { None })
}

/// Point of entanglement sudden death for the ADC initial family,
/// `p = x/√(1−x²)` when `x < 1/√2`, else `None`. The closed form is checked
/// against [`sudden_death_by_bisection`] before it is returned.
pub fn sudden_death_point(x: f64) -> Result<Option<f64>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain { name: "x", value: x });
    }
    let y = libm::sqrt(1.0 - x * x);
    let closed = if x < y { Some(x / y) } else { None };
    let bisected = sudden_death_by_bisection(x)?;
    match (closed, bisected) {
        (Some(c), Some(b)) if (c - b).abs() <= 1e-8 => Ok(Some(c)),
        (None, None) => Ok(None),
        (c, b) => Err(Error::CrossCheck {
            expected: c.unwrap_or(f64::NAN),
            found: b.unwrap_or(f64::NAN),
        }),
    }
}
