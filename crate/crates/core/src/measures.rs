//! Hilbert–Schmidt complementarity quantities and the correlation measures
//! built from them.
//!
//! All coherence measures are taken in the computational product basis.
//! Entropies are in bits.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::density::{outer, partial_trace, partial_transpose, purity, DensityOperator};
use crate::eigen::hermitian_eigenvalues;
use crate::layout::SubsystemLayout;
use crate::state::StateVector;
use crate::tolerance::X_STATE;
use crate::{Error, Result};

/// Disjoint groups of labels. Each block is reduced to separately when
/// computing correlated quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    blocks: Vec<Vec<String>>,
}

impl PartitionSpec {
    pub fn new<S: AsRef<str>>(blocks: &[&[S]]) -> Result<Self> {
        let mut seen: Vec<&str> = Vec::new();
        let mut out = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::Partition("blocks must be nonempty"));
            }
            let mut labels = Vec::with_capacity(block.len());
            for label in block.iter() {
                let label = label.as_ref();
                if seen.contains(&label) {
                    return Err(Error::Partition("blocks must be disjoint"));
                }
                seen.push(label);
                labels.push(String::from(label));
            }
            out.push(labels);
        }
        Ok(Self { blocks: out })
    }

    /// One block per label.
    pub fn singles<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let blocks: Vec<[&str; 1]> = labels.iter().map(|l| [l.as_ref()]).collect();
        let refs: Vec<&[&str]> = blocks.iter().map(|b| b.as_slice()).collect();
        Self::new(&refs)
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn labels(&self) -> Vec<&str> {
        self.blocks.iter().flatten().map(String::as_str).collect()
    }
}

/// Coherence of a pure global state split by which subsystems a pair of
/// basis states differ on.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    /// Keyed by the labels (in layout order) where the two basis states differ.
    pub sectors: BTreeMap<Vec<String>, f64>,
    /// Every contributing unordered pair, for finer groupings than by key.
    pub pairs: Vec<SectorPair>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorPair {
    pub left: usize,
    pub right: usize,
    pub key: Vec<String>,
    pub weight: f64,
}

impl SectorDecomposition {
    pub fn weight<S: AsRef<str>>(&self, key: &[S]) -> f64 {
        let key: Vec<String> = key.iter().map(|s| String::from(s.as_ref())).collect();
        self.sectors.get(&key).copied().unwrap_or(0.0)
    }
}

/// `Σ_{j≠k} |ρ_jk|²`.
pub fn hs_coherence(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    let diag: f64 = (0..rho.dim()).map(|i| m[(i, i)].norm_sqr()).sum();
    m.frobenius_norm_sqr() - diag
}

/// `Σ_j ρ_jj² − 1/d`.
pub fn hs_predictability(rho: &DensityOperator) -> f64 {
    let pops: f64 = rho.populations().iter().map(|p| p * p).sum();
    pops - 1.0 / rho.dim() as f64
}

/// `1 − Tr ρ²`.
pub fn linear_entropy(rho: &DensityOperator) -> f64 {
    1.0 - purity(rho)
}

/// Coherence of the joint state of all blocks minus the coherence of each
/// block on its own.
pub fn correlated_coherence_hs(global: &DensityOperator, part: &PartitionSpec) -> Result<f64> {
    if part.blocks.is_empty() {
        return Err(Error::Partition("empty partition"));
    }
    let joint = partial_trace(global, &part.labels())?;
    let mut value = hs_coherence(&joint);
    for block in &part.blocks {
        value -= hs_coherence(&partial_trace(&joint, block)?);
    }
    Ok(value)
}

/// `−Σ λ log₂ λ` over the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(rho
        .spectrum()?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * libm::log2(l))
        .sum())
}

/// Relative-entropy correlated coherence of two blocks, which coincides with
/// their quantum mutual information `S(X) + S(Y) − S(XY)`.
pub fn re_correlated_coherence(global: &DensityOperator, part: &PartitionSpec) -> Result<f64> {
    if part.blocks.len() != 2 {
        return Err(Error::Partition("relative-entropy correlation needs exactly two blocks"));
    }
    let joint = partial_trace(global, &part.labels())?;
    let sx = von_neumann_entropy(&partial_trace(&joint, &part.blocks[0])?)?;
    let sy = von_neumann_entropy(&partial_trace(&joint, &part.blocks[1])?)?;
    Ok(sx + sy - von_neumann_entropy(&joint)?)
}

/// `√(2 S_l(ρ_cut))` for a pure global state.
pub fn concurrence_pure<S: AsRef<str>>(
    global: &StateVector,
    layout: &SubsystemLayout,
    cut: &[S],
) -> Result<f64> {
    let rho = partial_trace(&outer(global, layout)?, cut)?;
    Ok(libm::sqrt(2.0 * linear_entropy(&rho).max(0.0)))
}

/// Closed-form concurrence of a two-qubit X state.
pub fn concurrence_x_state(rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::NotXState);
    }
    let m = rho.matrix();
    for i in 0..4 {
        for j in 0..4 {
            let on_pattern = i == j || i + j == 3;
            if !on_pattern && m[(i, j)].norm() > X_STATE {
                return Err(Error::NotXState);
            }
        }
    }
    let pop = |i: usize| m[(i, i)].re.max(0.0);
    let lambda1 = m[(0, 3)].norm() - libm::sqrt(pop(1) * pop(2));
    let lambda2 = m[(1, 2)].norm() - libm::sqrt(pop(0) * pop(3));
    Ok(2.0 * 0.0f64.max(lambda1).max(lambda2))
}

/// Positivity of the partial transpose on `subsystem`, up to `tol`.
pub fn is_ppt(rho: &DensityOperator, subsystem: &str, tol: f64) -> Result<bool> {
    let pt = partial_transpose(rho, subsystem)?;
    Ok(hermitian_eigenvalues(&pt)?[0] >= -tol)
}

pub fn sector_decomposition(
    global: &StateVector,
    layout: &SubsystemLayout,
) -> Result<SectorDecomposition> {
    if global.dim() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            actual: global.dim(),
        });
    }
    let support: Vec<(usize, f64)> = global
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm_sqr()))
        .filter(|&(_, w)| w > 0.0)
        .collect();

    let mut sectors = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut total = 0.0;
    for (n, &(i, wi)) in support.iter().enumerate() {
        let di = layout.digits(i);
        for &(j, wj) in &support[n + 1..] {
            let dj = layout.digits(j);
            let key: Vec<String> = layout
                .labels()
                .iter()
                .zip(di.iter().zip(&dj))
                .filter(|(_, (a, b))| a != b)
                .map(|(l, _)| l.clone())
                .collect();
            let weight = 2.0 * wi * wj;
            *sectors.entry(key.clone()).or_insert(0.0) += weight;
            total += weight;
            pairs.push(SectorPair {
                left: i,
                right: j,
                key,
                weight,
            });
        }
    }
    Ok(SectorDecomposition {
        sectors,
        pairs,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use core::f64::consts::FRAC_1_SQRT_2;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qubits(labels: &[&str]) -> SubsystemLayout {
        SubsystemLayout::qubits(labels).unwrap()
    }

    fn diag(entries: &[f64], labels: &[&str]) -> DensityOperator {
        DensityOperator::new(ComplexMatrix::diagonal(entries), qubits(labels)).unwrap()
    }

    fn bell() -> (StateVector, SubsystemLayout) {
        let h = FRAC_1_SQRT_2;
        (StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap(), qubits(&["A", "B"]))
    }

    fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    #[test]
    fn coherence_of_incoherent_state() {
        assert_eq!(hs_coherence(&diag(&[0.2, 0.8], &["A"])), 0.0);
    }

    #[test]
    fn coherence_frobenius_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let layout = qubits(&["A", "B"]);
        for _ in 0..10 {
            let rho = partial_trace(
                &outer(&random_state(8, &mut rng), &qubits(&["A", "B", "C"])).unwrap(),
                &["A", "B"],
            )
            .unwrap();
            assert_eq!(rho.layout(), &layout);
            let pops: f64 = rho.populations().iter().map(|p| p * p).sum();
            let expected = rho.matrix().frobenius_norm_sqr() - pops;
            assert!((hs_coherence(&rho) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn predictability_extremes() {
        assert!(hs_predictability(&diag(&[0.5, 0.5], &["A"])).abs() < 1e-15);
        assert!((hs_predictability(&diag(&[1.0, 0.0], &["A"])) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_entropy_of_initial_family() {
        let x: f64 = 0.6;
        let y = libm::sqrt(1.0 - x * x);
        let psi = StateVector::from_real(&[x, 0.0, 0.0, y]).unwrap();
        let rho_a = partial_trace(&outer(&psi, &qubits(&["A", "B"])).unwrap(), &["A"]).unwrap();
        let expected = 2.0 * x * x * (1.0 - x * x);
        assert!((linear_entropy(&rho_a) - expected).abs() < 1e-15);
        let (b, layout) = bell();
        assert!(linear_entropy(&outer(&b, &layout).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn ccr_saturates_for_random_pure_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let layout = SubsystemLayout::new(&[("A", 3), ("B", 2), ("C", 2)]).unwrap();
        for _ in 0..20 {
            let rho = outer(&random_state(12, &mut rng), &layout).unwrap();
            for (label, d) in [("A", 3.0), ("B", 2.0), ("C", 2.0)] {
                let r = partial_trace(&rho, &[label]).unwrap();
                let sum = hs_predictability(&r) + hs_coherence(&r) + linear_entropy(&r);
                assert!((sum - (d - 1.0) / d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert!(von_neumann_entropy(&diag(&[1.0, 0.0], &["A"])).unwrap().abs() < 1e-15);
        assert!((von_neumann_entropy(&diag(&[0.5, 0.5], &["A"])).unwrap() - 1.0).abs() < 1e-15);
        // -(1/4)log2(1/4) - (3/4)log2(3/4) = 0.5 + 0.75·log2(4/3)
        let expected = 0.5 + 0.75 * libm::log2(4.0 / 3.0);
        assert!((expected - 0.811_278_124_459_132_9).abs() < 1e-15);
        let s = von_neumann_entropy(&diag(&[0.25, 0.75], &["A"])).unwrap();
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn mutual_information() {
        let (b, layout) = bell();
        let rho = outer(&b, &layout).unwrap();
        let ab = PartitionSpec::singles(&["A", "B"]).unwrap();
        assert!((re_correlated_coherence(&rho, &ab).unwrap() - 2.0).abs() < 1e-12);

        let product = diag(&[0.1 * 0.6, 0.1 * 0.4, 0.9 * 0.6, 0.9 * 0.4], &["A", "B"]);
        assert!(re_correlated_coherence(&product, &ab).unwrap().abs() < 1e-12);

        let three = PartitionSpec::singles(&["A", "B", "C"]).unwrap();
        assert!(matches!(
            re_correlated_coherence(&rho, &three),
            Err(Error::Partition(_))
        ));
    }

    #[test]
    fn correlated_coherence_cases() {
        let (b, layout) = bell();
        let rho = outer(&b, &layout).unwrap();
        let ab = PartitionSpec::singles(&["A", "B"]).unwrap();
        assert!((correlated_coherence_hs(&rho, &ab).unwrap() - 0.5).abs() < 1e-15);
        let product = diag(&[0.06, 0.04, 0.54, 0.36], &["A", "B"]);
        assert_eq!(correlated_coherence_hs(&product, &ab).unwrap(), 0.0);
        let empty = PartitionSpec::new::<&str>(&[]).unwrap();
        assert!(correlated_coherence_hs(&rho, &empty).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionSpec::new(&[&["A"][..], &["A", "B"][..]]).is_err());
        assert!(PartitionSpec::new(&[&[][..] as &[&str]]).is_err());
    }

    #[test]
    fn pure_concurrence() {
        let (b, layout) = bell();
        assert!((concurrence_pure(&b, &layout, &["A"]).unwrap() - 1.0).abs() < 1e-15);
        let product = StateVector::basis(4, 1).unwrap();
        assert_eq!(concurrence_pure(&product, &layout, &["A"]).unwrap(), 0.0);
        let psi = StateVector::from_real(&[0.6, 0.0, 0.0, 0.8]).unwrap();
        assert!((concurrence_pure(&psi, &layout, &["A"]).unwrap() - 0.96).abs() < 1e-15);
    }

    #[test]
    fn x_state_concurrence() {
        let (b, layout) = bell();
        let rho = outer(&b, &layout).unwrap();
        assert!((concurrence_x_state(&rho).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(layout.clone());
        assert_eq!(concurrence_x_state(&mixed).unwrap(), 0.0);

        let h = 0.5;
        let plus = StateVector::from_real(&[h, h, h, h]).unwrap();
        assert_eq!(
            concurrence_x_state(&outer(&plus, &layout).unwrap()),
            Err(Error::NotXState)
        );
    }

    #[test]
    fn ppt_flags() {
        let (b, layout) = bell();
        let rho = outer(&b, &layout).unwrap();
        assert!(!is_ppt(&rho, "A", 1e-10).unwrap());
        let mixed = DensityOperator::maximally_mixed(layout);
        assert!(is_ppt(&mixed, "B", 1e-10).unwrap());
    }

    #[test]
    fn sectors_of_bell_and_basis_states() {
        let (b, layout) = bell();
        let dec = sector_decomposition(&b, &layout).unwrap();
        assert_eq!(dec.sectors.len(), 1);
        assert!((dec.weight(&["A", "B"]) - 0.5).abs() < 1e-15);

        let basis = sector_decomposition(&StateVector::basis(4, 2).unwrap(), &layout).unwrap();
        assert!(basis.sectors.is_empty());
        assert_eq!(basis.total, 0.0);
    }

    #[test]
    fn sector_total_matches_global_coherence() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let layout = qubits(&["A", "B", "E_A", "E_B"]);
        for _ in 0..10 {
            let psi = random_state(16, &mut rng);
            let dec = sector_decomposition(&psi, &layout).unwrap();
            let c = hs_coherence(&outer(&psi, &layout).unwrap());
            assert!((dec.total - c).abs() < 1e-12);
            let summed: f64 = dec.sectors.values().sum();
            assert!((summed - dec.total).abs() < 1e-12);
            assert!(!dec.sectors.contains_key(&Vec::<String>::new()));
        }
    }

    #[test]
    fn env_local_unitary_leaves_correlations_unchanged() {
        use crate::channels::{dilate, system_layout, ChannelKind, ChannelSpec};
        use crate::matrix::tensor_product;

        let spec = ChannelSpec::new(ChannelKind::AmplitudeDamping, 0.4).unwrap();
        let psi = StateVector::from_real(&[0.5, 0.0, 0.0, libm::sqrt(0.75)]).unwrap();
        let out = dilate(&spec, &psi, &system_layout(spec.kind())).unwrap();
        let rho = out.density();

        let theta = 0.73;
        let phase = ComplexMatrix::from_vec(
            2,
            2,
            alloc::vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, theta),
            ],
        )
        .unwrap();
        let flip = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let i4 = ComplexMatrix::identity(4);
        for gate in [phase, flip] {
            // acts on E_A, the third factor
            let u = tensor_product(&tensor_product(&i4, &gate), &i2);
            let m = &(&u * rho.matrix()) * &u.adjoint();
            let rotated = DensityOperator::new(m, rho.layout().clone()).unwrap();
            for blocks in [["A", "B"], ["A", "E_B"], ["A", "E_A"]] {
                let part = PartitionSpec::singles(&blocks).unwrap();
                let before = correlated_coherence_hs(&rho, &part).unwrap();
                let after = correlated_coherence_hs(&rotated, &part).unwrap();
                assert!((before - after).abs() < 1e-12, "{blocks:?}");
            }
        }
    }
}
