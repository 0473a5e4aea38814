//! Dense complex matrices and state vectors for 1-, 2- and 3-qubit spaces.
//!
//! Everything here is tiny (dimension 2, 4 or 8) and stored dense in double
//! precision. The arithmetic is delegated to `nalgebra`; this module adds the
//! dimension discipline and the structural validators (unitarity, density,
//! Hermiticity) that the rest of the crate relies on.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Structural validation tolerance for unitarity / Hermiticity / trace checks.
pub const STRUCTURAL_TOL: f64 = 1e-10;

const ALLOWED_DIMS: [usize; 3] = [2, 4, 8];

fn check_dim(dim: usize) -> Result<()> {
    if ALLOWED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::arg(format!("dimension {dim} not in {{2, 4, 8}}")))
    }
}

/// Dense square complex matrix of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    m: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        check_dim(dim).expect("identity dimension");
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("zeros dimension");
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    /// Build from row-major entries; `entries.len()` must be `dim * dim`.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::arg(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self {
            m: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Kronecker product; the result dimension must again be 2, 4 or 8.
    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim() * other.dim();
        check_dim(dim).expect("kronecker product dimension");
        Self {
            m: self.m.kronecker(&other.m),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            m: &self.m * factor,
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Apply to a state vector (matrix-vector product).
    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim(), v.dim(), "dimension mismatch in apply");
        StateVector { v: &self.m * &v.v }
    }

    /// Largest entry-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch in max_abs_diff"
        );
        (&self.m - &other.m)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `max |(X†X − I)_{jk}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let gram = self.m.adjoint() * &self.m;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                worst = worst.max((gram[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.m - self.m.adjoint()).iter().all(|c| c.norm() <= tol)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(STRUCTURAL_TOL) {
            return Err(Error::arg("matrix is not Hermitian"));
        }
        let eig = self.m.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// Check the density-matrix invariants: unit trace, Hermiticity and
    /// positive semidefiniteness (eigenvalues >= -tol).
    pub fn validate_density(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::arg(format!("trace {} is not 1", tr)));
        }
        if !self.is_hermitian(tol) {
            return Err(Error::arg("matrix is not Hermitian"));
        }
        let eigs = self.hermitian_eigenvalues()?;
        if let Some(neg) = eigs.iter().find(|&&e| e < -tol) {
            return Err(Error::arg(format!("negative eigenvalue {neg}")));
        }
        Ok(())
    }

    /// The entries of a 2x2 matrix as a stack array, row-major.
    ///
    /// Used by hot loops that evaluate thousands of quadratic forms per
    /// second and must not touch the heap.
    pub fn as_2x2(&self) -> [[Complex64; 2]; 2] {
        assert_eq!(self.dim(), 2, "as_2x2 requires a 2x2 matrix");
        [
            [self.m[(0, 0)], self.m[(0, 1)]],
            [self.m[(1, 0)], self.m[(1, 1)]],
        ]
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix {
            m: &self.m * &rhs.m,
        }
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sum");
        ComplexMatrix {
            m: &self.m + &rhs.m,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in difference");
        ComplexMatrix {
            m: &self.m - &rhs.m,
        }
    }
}

/// Column state vector of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    v: DVector<Complex64>,
}

impl StateVector {
    pub fn from_components(components: &[Complex64]) -> Result<Self> {
        check_dim(components.len())?;
        Ok(Self {
            v: DVector::from_column_slice(components),
        })
    }

    /// Computational basis state |index> in the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::arg(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { v })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.v[index]
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "dimension mismatch in inner product"
        );
        self.v.dotc(&other.v)
    }

    /// Outer product `|self><self|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix {
            m: &self.v * self.v.adjoint(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim() * other.dim();
        check_dim(dim).expect("kronecker product dimension");
        Self {
            v: self.v.kronecker(&other.v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_unitary_and_hermitian() {
        let id = ComplexMatrix::identity(4);
        assert!(id.is_unitary(1e-15));
        assert!(id.is_hermitian(0.0));
        assert_eq!(id.trace(), c(4.0, 0.0));
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(ComplexMatrix::from_rows(3, &[c(0.0, 0.0); 9]).is_err());
        assert!(StateVector::from_components(&[c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn kron_dimensions() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(4);
        assert_eq!(a.kron(&b).dim(), 8);
        assert_eq!(a.kron(&a).dim(), 4);
    }

    #[test]
    fn density_validation_catches_defects() {
        // trace 2
        let bad = ComplexMatrix::identity(2);
        assert!(bad.validate_density(1e-10).is_err());
        // proper maximally mixed state
        let ok = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(ok.validate_density(1e-10).is_ok());
        // negative eigenvalue
        let neg =
            ComplexMatrix::from_rows(2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)])
                .unwrap();
        assert!(neg.validate_density(1e-10).is_err());
    }

    #[test]
    fn hermitian_eigenvalues_sorted() {
        let m = ComplexMatrix::from_rows(2, &[c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        // eigenvalues of [[2, -i], [i, 0]] are 1 ± √2
        let eigs = m.hermitian_eigenvalues().unwrap();
        assert!((eigs[0] - (1.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!((eigs[1] - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn inner_product_conjugates_left() {
        let a = StateVector::from_components(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = StateVector::from_components(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(a.inner(&b), c(0.0, -1.0));
    }

    #[test]
    fn projector_of_basis_state() {
        let e1 = StateVector::basis(2, 1).unwrap();
        let p = e1.projector();
        assert_eq!(p.get(1, 1), c(1.0, 0.0));
        assert_eq!(p.get(0, 0), c(0.0, 0.0));
        assert!(p.validate_density(1e-12).is_ok());
    }
}
