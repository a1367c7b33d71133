//! Small helpers for the 4x4 symmetric matrices used by both filters.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

pub type Mat4 = Matrix4<f64>;
pub type Vec4 = Vector4<f64>;

/// `(m + mᵀ) / 2`.
pub fn symmetrize(m: &Mat4) -> Mat4 {
    (m + m.transpose()) * 0.5
}

pub fn min_eigenvalue(m: &Mat4) -> f64 {
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

pub fn is_finite(m: &Mat4) -> bool {
    m.iter().all(|v| v.is_finite())
}

/// Symmetrizes `m` and, if it has a negative eigenvalue, replaces it with the
/// nearest positive-semidefinite matrix (Frobenius norm) by clipping the
/// negative eigenvalues to zero.
///
/// A matrix that is already PSD is returned symmetrized but otherwise
/// untouched, so the projection never perturbs a healthy covariance.
pub fn project_psd(m: &Mat4) -> Mat4 {
    let sym = symmetrize(m);
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.min() >= 0.0 {
        return sym;
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let v = eig.eigenvectors;
    symmetrize(&(v * Mat4::from_diagonal(&clipped) * v.transpose()))
}

/// Symmetric square root `S = V diag(sqrt(max(λ, 0))) Vᵀ`, so that `S Sᵀ = m`
/// for any PSD `m`, including singular ones.
pub fn sym_sqrt(m: &Mat4) -> Mat4 {
    let eig = SymmetricEigen::new(symmetrize(m));
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = eig.eigenvectors;
    v * Mat4::from_diagonal(&roots) * v.transpose()
}
