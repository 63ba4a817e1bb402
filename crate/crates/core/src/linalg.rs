//! Small dense complex linear algebra on top of nalgebra: Kronecker
//! superoperator helpers, a Schur-based eigendecomposition with condition
//! reporting, and kernel bases from the SVD.

use nalgebra::{DMatrix, DVector, Matrix4, Schur, SVD};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Op4 = Matrix4<C64>;
pub type SuperOp = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn to_dynamic(m: &Op4) -> DMatrix<C64> {
    DMatrix::from_iterator(4, 4, m.iter().cloned())
}

/// `A ⊗ B`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Superoperator of `X ↦ A X B` for column-stacked `X`: `Bᵀ ⊗ A`.
pub fn sandwich(a: &Op4, b: &Op4) -> SuperOp {
    kron(&to_dynamic(&b.transpose()), &to_dynamic(a))
}

/// `X ↦ A X`.
pub fn spre(a: &Op4) -> SuperOp {
    sandwich(a, &Op4::identity())
}

/// `X ↦ X B`.
pub fn spost(b: &Op4) -> SuperOp {
    sandwich(&Op4::identity(), b)
}

/// Column-stacked vector of a 4×4 matrix.
pub fn vec_of(m: &Op4) -> DVector<C64> {
    DVector::from_iterator(16, m.iter().cloned())
}

pub fn unvec(v: &DVector<C64>) -> Op4 {
    Op4::from_iterator(v.iter().cloned())
}

pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenpairs `A V = V diag(λ)` with the inverse of `V`.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub values: DVector<C64>,
    pub vectors: DMatrix<C64>,
    pub inverse: DMatrix<C64>,
    /// `‖V‖₂ ‖V⁻¹‖₂`.
    pub condition: f64,
    /// `‖A V − V Λ‖_F / ‖A‖_F`.
    pub residual: f64,
}

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Complex Schur form `A = Q T Qᴴ`.
pub fn schur(a: &DMatrix<C64>) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    Schur::try_new(a.clone(), SCHUR_EPS, SCHUR_MAX_ITER)
        .map(|s| s.unpack())
        .ok_or_else(|| Error::Linalg("Schur iteration did not converge".into()))
}

pub fn eigenvalues(a: &DMatrix<C64>) -> Result<DVector<C64>> {
    if a.iter().all(|z| *z == ZERO) {
        return Ok(DVector::zeros(a.nrows()));
    }
    let (_, t) = schur(a)?;
    Ok(t.diagonal())
}

/// Right eigenvectors from the triangular factor by back-substitution,
/// perturbing tiny pivots the way LAPACK's `ztrevc` does.
fn triangular_eigenvectors(t: &DMatrix<C64>) -> DMatrix<C64> {
    let n = t.nrows();
    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let smallnum = f64::MIN_POSITIVE * (n as f64 / f64::EPSILON);
    let mut y = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let smin = (f64::EPSILON * lambda.norm()).max(f64::EPSILON * tnorm * 1e-3).max(smallnum);
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut pivot = t[(i, i)] - lambda;
            if pivot.norm() < smin {
                pivot = C64::new(smin, 0.0);
            }
            y[(i, k)] = -acc / pivot;
        }
        let norm = y.column(k).norm();
        y.column_mut(k).unscale_mut(norm);
    }
    y
}

fn all_finite(m: &DMatrix<C64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if !all_finite(m) {
        return f64::INFINITY;
    }
    SVD::new(m.clone(), false, false).singular_values.max()
}

impl Spectral {
    pub fn new(a: &DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        if !all_finite(a) {
            return Err(Error::Linalg("matrix has non-finite entries".into()));
        }
        if a.iter().all(|z| *z == ZERO) {
            return Ok(Spectral {
                values: DVector::zeros(n),
                vectors: DMatrix::identity(n, n),
                inverse: DMatrix::identity(n, n),
                condition: 1.0,
                residual: 0.0,
            });
        }
        let (q, t) = schur(a)?;
        if !all_finite(&q) || !all_finite(&t) {
            return Err(Error::Linalg("Schur factors are not finite".into()));
        }
        let values = t.diagonal();
        let mut vectors = &q * triangular_eigenvectors(&t);
        for mut col in vectors.column_iter_mut() {
            let n = col.norm();
            col.unscale_mut(n);
        }
        let inverse = vectors
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Linalg("eigenvector matrix is singular".into()))?;
        let condition = spectral_norm(&vectors) * spectral_norm(&inverse);
        let scale = frobenius(a).max(f64::MIN_POSITIVE);
        let lhs = a * &vectors;
        let rhs = &vectors * DMatrix::from_diagonal(&values);
        let residual = frobenius(&(lhs - rhs)) / scale;
        Ok(Spectral {
            values,
            vectors,
            inverse,
            condition,
            residual,
        })
    }

    /// Whether the decomposition is trustworthy for propagation.
    pub fn is_well_conditioned(&self, max_condition: f64) -> bool {
        self.condition.is_finite() && self.condition <= max_condition && self.residual < 1e-10
    }
}

/// Orthonormal bases of the right and left kernels of `a`, each with
/// `dimension` columns, from the smallest singular values.
pub fn kernel_bases(a: &DMatrix<C64>, dimension: usize) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let n = a.nrows();
    if dimension == 0 || dimension > n {
        return Err(Error::Linalg(format!("bad kernel dimension {dimension}")));
    }
    if !all_finite(a) {
        return Err(Error::Linalg("matrix has non-finite entries".into()));
    }
    let svd = SVD::new(a.clone(), true, true);
    let u = svd.u.ok_or_else(|| Error::Linalg("SVD without U".into()))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Linalg("SVD without Vᴴ".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let mut right = DMatrix::<C64>::zeros(n, dimension);
    let mut left = DMatrix::<C64>::zeros(n, dimension);
    for (c, &idx) in order.iter().take(dimension).enumerate() {
        right.set_column(c, &v_t.row(idx).adjoint());
        left.set_column(c, &u.column(idx));
    }
    Ok((right, left))
}

/// Projector `R (Wᴴ R)⁻¹ Wᴴ` onto the span of `right` along the
/// complement annihilated by `left`.
pub fn oblique_projector(right: &DMatrix<C64>, left: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let gram = left.adjoint() * right;
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::Linalg("left and right kernels are not biorthogonalizable".into()))?;
    Ok(right * inv * left.adjoint())
}

/// Eigenvalues of a Hermitian 4×4 matrix in ascending order.
pub fn hermitian_eigenvalues(m: &Op4) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2], ev[3]]
}
