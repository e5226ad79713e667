//! Hermitian matrix kernel used by every other module.
//!
//! All spectral work routes through the Hermitian-specific eigendecomposition:
//! log-determinants, positive-definite inverses, and semidefinite-order tests.
//! Matrices built from product chains are re-symmetrized on construction so
//! floating-point drift never leaks into downstream comparisons.

use nalgebra::{Complex, DMatrix};
use serde::Serialize;
use thiserror::Error;

/// Complex double-precision scalar, the only scalar type the kernel handles.
pub type C64 = Complex<f64>;

/// Largest matrix dimension the toolkit accepts.
pub const MAX_DIM: usize = 16;

/// Numerical tolerance policy shared by the whole crate.
///
/// Invariants: every field is positive and `tol_geom >= tol_eq`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToleranceProfile {
    /// Largest entrywise deviation from conjugate symmetry accepted as Hermitian.
    pub tol_herm: f64,
    /// Eigenvalues above `-tol_psd` count as nonnegative in semidefinite tests.
    pub tol_psd: f64,
    /// Scalar comparison tolerance for rates and bounds.
    pub tol_eq: f64,
    /// Coincidence tolerance for vertices, containment, and certificates.
    pub tol_geom: f64,
}

impl ToleranceProfile {
    /// Default policy: 1e-10 / 1e-9 / 1e-7 / 1e-6.
    pub const DEFAULT: ToleranceProfile = ToleranceProfile {
        tol_herm: 1e-10,
        tol_psd: 1e-9,
        tol_eq: 1e-7,
        tol_geom: 1e-6,
    };

    /// Builds a custom profile, rejecting non-positive entries and
    /// `tol_geom < tol_eq`.
    pub fn new(tol_herm: f64, tol_psd: f64, tol_eq: f64, tol_geom: f64) -> Option<Self> {
        let p = ToleranceProfile {
            tol_herm,
            tol_psd,
            tol_eq,
            tol_geom,
        };
        let positive = tol_herm > 0.0 && tol_psd > 0.0 && tol_eq > 0.0 && tol_geom > 0.0;
        (positive && tol_geom >= tol_eq).then_some(p)
    }
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Failure modes of the matrix kernel.
#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge { dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix has a non-finite entry")]
    NotFinite,
    #[error("matrix deviates from conjugate symmetry by {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },
}

/// Square complex matrix validated and stored in exactly Hermitian form.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    /// Validates `data` (square, finite, within `tol_herm` of conjugate
    /// symmetry, dimension at most [`MAX_DIM`]) and stores `(A + A*)/2`.
    pub fn new(data: DMatrix<C64>, tol: &ToleranceProfile) -> Result<Self, MatrixError> {
        let (rows, cols) = data.shape();
        if rows != cols {
            return Err(MatrixError::NotSquare { rows, cols });
        }
        if rows > MAX_DIM {
            return Err(MatrixError::DimensionTooLarge { dim: rows });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatrixError::NotFinite);
        }
        let mut deviation = 0.0f64;
        for i in 0..rows {
            for j in i..rows {
                let d = (data[(i, j)] - data[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > tol.tol_herm {
            return Err(MatrixError::NotHermitian { deviation });
        }
        let herm = (&data + data.adjoint()) * C64::new(0.5, 0.0);
        Ok(HermitianMatrix { data: herm })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        HermitianMatrix {
            data: DMatrix::identity(dim, dim),
        }
    }

    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        HermitianMatrix {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    /// Entrywise sum; both operands must share a dimension.
    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add");
        HermitianMatrix {
            data: &self.data + &other.data,
        }
    }

    /// Entrywise difference; both operands must share a dimension.
    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in sub");
        HermitianMatrix {
            data: &self.data - &other.data,
        }
    }

    /// Real scalar multiple (keeps conjugate symmetry exactly).
    pub fn scaled(&self, s: f64) -> HermitianMatrix {
        assert!(s.is_finite(), "non-finite scale");
        HermitianMatrix {
            data: &self.data * C64::new(s, 0.0),
        }
    }

    /// Real eigenvalues sorted in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.data.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        vals
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()
            .first()
            .copied()
            .expect("dimension is at least one")
    }
}

/// `H * inner * H^*` for a rectangular map `H`, re-symmetrized.
///
/// `H` must have `inner.dim()` columns and at most [`MAX_DIM`] rows.
pub fn sandwich(h: &DMatrix<C64>, inner: &HermitianMatrix) -> HermitianMatrix {
    assert_eq!(h.ncols(), inner.dim(), "dimension mismatch in sandwich");
    let raw = h * inner.as_matrix() * h.adjoint();
    // products of validated operands stay within machine precision of Hermitian
    HermitianMatrix::new(raw, &ToleranceProfile::DEFAULT).expect("sandwich is Hermitian")
}

/// `H * H^*`, re-symmetrized.
pub fn gram(h: &DMatrix<C64>) -> HermitianMatrix {
    let raw = h * h.adjoint();
    HermitianMatrix::new(raw, &ToleranceProfile::DEFAULT).expect("gram is Hermitian")
}

/// `H^* * H`, re-symmetrized.
pub fn gram_adjoint(h: &DMatrix<C64>) -> HermitianMatrix {
    let raw = h.adjoint() * h;
    HermitianMatrix::new(raw, &ToleranceProfile::DEFAULT).expect("gram is Hermitian")
}

/// Base-2 log-determinant of a positive definite Hermitian matrix.
///
/// Every eigenvalue must exceed `tol.tol_psd`; otherwise the matrix is
/// reported as not positive definite.
pub fn logdet2(a: &HermitianMatrix, tol: &ToleranceProfile) -> Result<f64, MatrixError> {
    let eigs = a.eigenvalues();
    let min_eig = eigs[0];
    if min_eig <= tol.tol_psd {
        return Err(MatrixError::NotPositiveDefinite { min_eig });
    }
    Ok(eigs.iter().map(|l| l.log2()).sum())
}

/// Inverse of a positive definite Hermitian matrix via its eigensystem.
pub fn inv_hpd(
    a: &HermitianMatrix,
    tol: &ToleranceProfile,
) -> Result<HermitianMatrix, MatrixError> {
    let eig = a.as_matrix().clone().symmetric_eigen();
    let min_eig = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig <= tol.tol_psd {
        return Err(MatrixError::NotPositiveDefinite { min_eig });
    }
    let n = a.dim();
    let mut diag = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = C64::new(1.0 / eig.eigenvalues[i], 0.0);
    }
    let raw = &eig.eigenvectors * diag * eig.eigenvectors.adjoint();
    HermitianMatrix::new(raw, &ToleranceProfile::DEFAULT)
        .map_err(|_| MatrixError::NotPositiveDefinite { min_eig })
}

/// Semidefinite-order test `A <= B`: true when the smallest eigenvalue of
/// `B - A` is at least `-tol.tol_psd`.
pub fn psd_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &ToleranceProfile,
) -> Result<bool, MatrixError> {
    if a.dim() != b.dim() {
        return Err(MatrixError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(b.sub(a).min_eigenvalue() >= -tol.tol_psd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::DEFAULT
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_has_zero_logdet() {
        let i4 = HermitianMatrix::identity(4);
        assert_eq!(logdet2(&i4, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_logdet_matches_sum_of_logs() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(8.0, 0.0)]);
        let h = HermitianMatrix::new(m, &tol()).unwrap();
        let got = logdet2(&h, &tol()).unwrap();
        assert!((got - 4.0).abs() < 1e-12, "log2(2*8) = 4, got {got}");
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        match HermitianMatrix::new(m, &tol()) {
            Err(MatrixError::NotHermitian { deviation }) => assert!(deviation > 0.5),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn indefinite_matrix_fails_logdet() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let h = HermitianMatrix::new(m, &tol()).unwrap();
        assert!(matches!(
            logdet2(&h, &tol()),
            Err(MatrixError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(1.0, -2.0), c(1.0, 2.0), c(7.0, 0.0)]);
        let h = HermitianMatrix::new(m, &tol()).unwrap();
        let inv = inv_hpd(&h, &tol()).unwrap();
        let prod = h.as_matrix() * inv.as_matrix();
        let eye = DMatrix::<C64>::identity(2, 2);
        let err = (&prod - &eye).norm();
        assert!(err < 1e-12, "inverse residual {err}");
    }

    #[test]
    fn psd_order_accepts_identity_dominating_half_identity() {
        let a = HermitianMatrix::identity(3).scaled(0.5);
        let b = HermitianMatrix::identity(3);
        assert!(psd_leq(&a, &b, &tol()).unwrap());
        assert!(!psd_leq(&b, &a, &tol()).unwrap());
    }

    #[test]
    fn psd_order_rejects_dimension_mismatch() {
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::identity(3);
        assert!(matches!(
            psd_leq(&a, &b, &tol()),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn oversized_matrix_is_rejected() {
        let m = DMatrix::<C64>::identity(MAX_DIM + 1, MAX_DIM + 1);
        assert!(matches!(
            HermitianMatrix::new(m, &tol()),
            Err(MatrixError::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn tolerance_profile_rejects_bad_orderings() {
        assert!(ToleranceProfile::new(1e-10, 1e-9, 1e-6, 1e-7).is_none());
        assert!(ToleranceProfile::new(-1.0, 1e-9, 1e-7, 1e-6).is_none());
        assert!(ToleranceProfile::new(1e-10, 1e-9, 1e-7, 1e-6).is_some());
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let m = DMatrix::from_row_slice(1, 1, &[c(f64::NAN, 0.0)]);
        assert!(matches!(
            HermitianMatrix::new(m, &tol()),
            Err(MatrixError::NotFinite)
        ));
    }
}
