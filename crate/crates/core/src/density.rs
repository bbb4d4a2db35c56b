//! Density operators over labeled product spaces and the reductions on them.

use alloc::vec::Vec;

use crate::eigen::hermitian_eigenvalues;
use crate::layout::SubsystemLayout;
use crate::matrix::ComplexMatrix;
use crate::state::StateVector;
use crate::tolerance::{MIN_EIGENVALUE, STRUCTURAL};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

impl DensityOperator {
    /// Checks hermiticity, unit trace and positivity before wrapping.
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        check_shape(&matrix, &layout)?;
        let defect = matrix.hermiticity_defect();
        if defect > STRUCTURAL {
            return Err(Error::NotHermitian(defect));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STRUCTURAL || trace.im.abs() > STRUCTURAL {
            return Err(Error::NotDensity("trace differs from 1"));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < MIN_EIGENVALUE {
            return Err(Error::NotDensity("negative eigenvalue"));
        }
        Ok(Self { matrix, layout })
    }

    /// Wraps a matrix known to be a valid state (e.g. the image of one under a
    /// reduction or a complete Kraus map). Only the shape is checked.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, layout: SubsystemLayout) -> Self {
        debug_assert!(check_shape(&matrix, &layout).is_ok());
        Self { matrix, layout }
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let matrix = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        Self { matrix, layout }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Real diagonal (populations).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Eigenvalues with round-off negatives clamped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut vals = hermitian_eigenvalues(&self.matrix)?;
        for v in &mut vals {
            if *v < MIN_EIGENVALUE {
                return Err(Error::NotDensity("negative eigenvalue"));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(vals)
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let layout = self.layout.extend(&other.layout)?;
        Ok(Self {
            matrix: crate::matrix::tensor_product(&self.matrix, &other.matrix),
            layout,
        })
    }

    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityOperator> {
        partial_trace(self, keep)
    }
}

fn check_shape(matrix: &ComplexMatrix, layout: &SubsystemLayout) -> Result<()> {
    if !matrix.is_square() {
        return Err(Error::Shape("density operator must be square"));
    }
    if matrix.rows() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            actual: matrix.rows(),
        });
    }
    Ok(())
}

/// `|ψ⟩⟨ψ|` annotated with `layout`.
pub fn outer(psi: &StateVector, layout: &SubsystemLayout) -> Result<DensityOperator> {
    if psi.dim() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            actual: psi.dim(),
        });
    }
    let amps = psi.amplitudes();
    let d = amps.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = amps[i] * amps[j].conj();
        }
    }
    Ok(DensityOperator::from_trusted(m, layout.clone()))
}

/// Reduced state on `keep`. The result keeps the original label order.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityOperator, keep: &[S]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::Shape("partial trace must keep at least one subsystem"));
    }
    let layout = rho.layout();
    let kept = layout.positions_of(keep)?;
    if kept.len() == layout.len() {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..layout.len()).filter(|p| !kept.contains(p)).collect();
    let out_layout = layout.restrict(keep)?;
    let traced_dims: Vec<usize> = traced.iter().map(|&p| layout.dims()[p]).collect();
    let traced_dim: usize = traced_dims.iter().product();
    let out_dim = out_layout.total_dim();

    // Precompute the full-index digits contributed by each kept / traced value.
    let kept_offsets: Vec<usize> = (0..out_dim)
        .map(|k| {
            let digits = out_layout.digits(k);
            offset_for(layout, &kept, &digits)
        })
        .collect();
    let traced_offsets: Vec<usize> = (0..traced_dim)
        .map(|t| {
            let digits = mixed_radix(t, &traced_dims);
            offset_for(layout, &traced, &digits)
        })
        .collect();

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (i, &ri) in kept_offsets.iter().enumerate() {
        for (j, &cj) in kept_offsets.iter().enumerate() {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += m[(ri + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityOperator::from_trusted(out, out_layout))
}

/// Transposes the indices of one tensor factor. Returns a plain matrix since
/// the result need not be positive.
pub fn partial_transpose(rho: &DensityOperator, subsystem: &str) -> Result<ComplexMatrix> {
    let layout = rho.layout();
    let pos = layout.position(subsystem)?;
    let d = rho.dim();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let mut rd = layout.digits(r);
        for c in 0..d {
            let mut cd = layout.digits(c);
            core::mem::swap(&mut rd[pos], &mut cd[pos]);
            out[(layout.flat_index(&rd), layout.flat_index(&cd))] = m[(r, c)];
            core::mem::swap(&mut rd[pos], &mut cd[pos]);
        }
    }
    Ok(out)
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityOperator) -> f64 {
    // Tr ρ² = Σ_ij |ρ_ij|² for Hermitian ρ
    rho.matrix().frobenius_norm_sqr()
}

fn mixed_radix(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = alloc::vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Flat-index contribution of `digits` placed at `positions`.
fn offset_for(layout: &SubsystemLayout, positions: &[usize], digits: &[usize]) -> usize {
    let dims = layout.dims();
    let mut stride = alloc::vec![1usize; dims.len()];
    for p in (0..dims.len().saturating_sub(1)).rev() {
        stride[p] = stride[p + 1] * dims[p + 1];
    }
    positions
        .iter()
        .zip(digits)
        .map(|(&p, &digit)| digit * stride[p])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    fn bell() -> DensityOperator {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        outer(&psi, &SubsystemLayout::qubits(&["A", "B"]).unwrap()).unwrap()
    }

    #[test]
    fn outer_of_basis_and_bell() {
        let ab = SubsystemLayout::qubits(&["A"]).unwrap();
        let rho = outer(&StateVector::basis(2, 0).unwrap(), &ab).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::diagonal(&[1.0, 0.0]));

        let b = bell();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((b.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!(outer(&StateVector::basis(2, 0).unwrap(), b.layout()).is_err());
    }

    #[test]
    fn outer_of_random_state_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let layout = SubsystemLayout::qubits(&["A", "B", "C"]).unwrap();
        for _ in 0..10 {
            let rho = outer(&random_state(8, &mut rng), &layout).unwrap();
            assert!((purity(&rho) - 1.0).abs() < 1e-12);
            assert!(DensityOperator::new(rho.matrix().clone(), layout.clone()).is_ok());
        }
    }

    #[test]
    fn trace_of_product_state() {
        let a = DensityOperator::new(
            ComplexMatrix::from_real(2, 2, &[0.7, 0.2, 0.2, 0.3]).unwrap(),
            SubsystemLayout::qubits(&["A"]).unwrap(),
        )
        .unwrap();
        let b = DensityOperator::new(
            ComplexMatrix::diagonal(&[0.1, 0.5, 0.4]),
            SubsystemLayout::new(&[("B", 3)]).unwrap(),
        )
        .unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(partial_trace(&ab, &["A"]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(partial_trace(&ab, &["B"]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert_eq!(&partial_trace(&ab, &["A", "B"]).unwrap(), &ab);
    }

    #[test]
    fn trace_matches_summation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let layout = SubsystemLayout::qubits(&["A", "B", "C"]).unwrap();
        let psi = random_state(8, &mut rng);
        let rho = outer(&psi, &layout).unwrap();
        let reduced = partial_trace(&rho, &["A", "B"]).unwrap();
        // ρ_AB[(a,b),(a',b')] = Σ_c ψ[a,b,c] ψ*[a',b',c]
        let amps = psi.amplitudes();
        for i in 0..4 {
            for j in 0..4 {
                let mut expected = Complex64::new(0.0, 0.0);
                for c in 0..2 {
                    expected += amps[2 * i + c] * amps[2 * j + c].conj();
                }
                assert!((reduced.matrix()[(i, j)] - expected).norm() < 1e-15);
            }
        }
        // keep {A, C} skips the middle factor
        let ac = partial_trace(&rho, &["C", "A"]).unwrap();
        assert_eq!(ac.layout().labels(), &["A", "C"]);
        for i in 0..4 {
            for j in 0..4 {
                let (a, c) = (i / 2, i % 2);
                let (a2, c2) = (j / 2, j % 2);
                let mut expected = Complex64::new(0.0, 0.0);
                for b in 0..2 {
                    expected += amps[4 * a + 2 * b + c] * amps[4 * a2 + 2 * b + c2].conj();
                }
                assert!((ac.matrix()[(i, j)] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_errors() {
        let b = bell();
        assert!(matches!(partial_trace(&b, &["Q"]), Err(Error::UnknownLabel(_))));
        let empty: [&str; 0] = [];
        assert!(partial_trace(&b, &empty).is_err());
        assert!(matches!(partial_transpose(&b, "Q"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn bell_partial_transpose_is_negative() {
        let pt = partial_transpose(&bell(), "A").unwrap();
        let vals = hermitian_eigenvalues(&pt).unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagonal_is_invariant_under_partial_transpose() {
        let layout = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let rho = DensityOperator::new(ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]), layout)
            .unwrap();
        assert_eq!(&partial_transpose(&rho, "B").unwrap(), rho.matrix());
    }

    #[test]
    fn purity_values() {
        let mixed = DensityOperator::maximally_mixed(SubsystemLayout::qubits(&["A"]).unwrap());
        assert!((purity(&mixed) - 0.5).abs() < 1e-15);
        assert!((purity(&bell()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn new_rejects_invalid() {
        let layout = SubsystemLayout::qubits(&["A"]).unwrap();
        assert!(DensityOperator::new(ComplexMatrix::diagonal(&[0.5, 0.4]), layout.clone()).is_err());
        assert!(
            DensityOperator::new(ComplexMatrix::diagonal(&[1.5, -0.5]), layout.clone()).is_err()
        );
        let nonherm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(
            DensityOperator::new(nonherm, layout),
            Err(Error::NotHermitian(_))
        ));
    }
}
