use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative tolerance on `max|A − Aᵀ|` accepted at construction.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Negative eigenvalues down to `−NEG_EIGEN_TOL·λ_max` are treated as round-off.
pub const NEG_EIGEN_TOL: f64 = 1e-10;
/// Relative eigenvalue floor; the absolute floor is `EPS_FLOOR_REL·max(λ_max, 1)`.
pub const EPS_FLOOR_REL: f64 = 1e-12;

/// Symmetric positive semidefinite matrix with its eigendecomposition and
/// log-determinant computed once at construction.
///
/// Eigenvalues are clamped from below to `eps_floor = 1e-12·max(λ_max, 1)` so
/// that log-determinants of rank-deficient empirical covariances stay finite.
/// When clamping changes anything, the stored entries are rebuilt from the
/// clamped spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    entries: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    logdet: f64,
    eps_floor: f64,
}

impl SpdMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a non-empty square matrix, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some(v) = m.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {v}")));
        }
        let scale = m.amax();
        let asymmetry = (&m - m.transpose()).amax();
        if asymmetry > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { asymmetry, scale });
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());

        let d = sym.nrows();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let raw: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vecs = DMatrix::zeros(d, d);
        for (k, &i) in order.iter().enumerate() {
            vecs.set_column(k, &eig.eigenvectors.column(i));
        }

        let lambda_max = raw[0];
        let lambda_min = raw[d - 1];
        if lambda_min < -NEG_EIGEN_TOL * lambda_max.abs() || (lambda_max < 0.0) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: lambda_min,
            });
        }
        let eps_floor = EPS_FLOOR_REL * lambda_max.max(1.0);
        let clamped: Vec<f64> = raw.iter().map(|&l| l.max(eps_floor)).collect();
        let entries = if clamped.iter().zip(&raw).any(|(a, b)| a != b) {
            let rebuilt =
                &vecs * DMatrix::from_diagonal(&DVector::from_vec(clamped.clone())) * vecs.transpose();
            (&rebuilt + rebuilt.transpose()) * 0.5
        } else {
            sym
        };
        let logdet = clamped.iter().map(|l| l.ln()).sum();
        Ok(Self {
            entries,
            eigenvalues: clamped,
            eigenvectors: vecs,
            logdet,
            eps_floor,
        })
    }

    /// Projects a nearly-PSD symmetric matrix onto the floored PSD cone,
    /// accepting negative eigenvalues down to `−neg_tol`.
    pub fn from_psd_projection(m: DMatrix<f64>, neg_tol: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!("{}×{}", m.nrows(), m.ncols())));
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let min = eig.eigenvalues.min();
        if min < -neg_tol {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        let clipped = eig.eigenvalues.map(|l| l.max(0.0));
        let rebuilt = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        Self::new((&rebuilt + rebuilt.transpose()) * 0.5)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d)).expect("identity is SPD")
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_row_slice(d: usize, values: &[f64]) -> Result<Self> {
        if values.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {d}×{d} matrix",
                values.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(d, d, values))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Eigenvalues in descending order, already clamped to the floor.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, ordered like [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn eps_floor(&self) -> f64 {
        self.eps_floor
    }

    /// det(A)^{1/d}, the geometric mean of the eigenvalues.
    pub fn det_root(&self) -> f64 {
        (self.logdet / self.dim() as f64).exp()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.spectral_map(|l| 1.0 / l)
    }

    /// V f(Λ) Vᵀ.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let diag = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| f(l)));
        let m = &self.eigenvectors * DMatrix::from_diagonal(&diag) * self.eigenvectors.transpose();
        (&m + m.transpose()) * 0.5
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let coords = self.eigenvectors.transpose() * b;
        let scaled = DVector::from_iterator(
            self.dim(),
            coords.iter().zip(&self.eigenvalues).map(|(c, l)| c / l),
        );
        &self.eigenvectors * scaled
    }

    /// A lower-triangular `L` with `L Lᵀ = A`; falls back to the symmetric
    /// square root when the floored matrix is too ill-conditioned for Cholesky.
    pub fn sampling_factor(&self) -> DMatrix<f64> {
        match self.entries.clone().cholesky() {
            Some(ch) => ch.l(),
            None => self.spectral_map(f64::sqrt),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(&self.entries * c)
    }

    pub fn add(&self, other: &SpdMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(&self.entries + &other.entries)
    }
}
