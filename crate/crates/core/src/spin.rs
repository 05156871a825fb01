//! Two-level operators and states in the diabatic basis {|0⟩, |1⟩}.

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;

pub type C64 = Complex64;
/// A two-component electronic state vector.
pub type SpinState = Vector2<C64>;

const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 2×2 Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOperator(Matrix2<C64>);

impl SpinOperator {
    /// Returns `None` if the matrix is not Hermitian to 1e-12 entrywise.
    pub fn new(m: Matrix2<C64>) -> Option<Self> {
        let d = m - m.adjoint();
        if d.iter().all(|z| z.norm() <= HERMITIAN_TOL) {
            Some(SpinOperator(m))
        } else {
            None
        }
    }

    /// a0·I + a·σ, Hermitian by construction.
    pub fn from_bloch(a0: f64, a: Vector3<f64>) -> Self {
        SpinOperator(Matrix2::new(
            c(a0 + a.z, 0.0),
            c(a.x, -a.y),
            c(a.x, a.y),
            c(a0 - a.z, 0.0),
        ))
    }

    pub fn identity() -> Self {
        SpinOperator(Matrix2::identity())
    }

    pub fn sigma_x() -> Self {
        Self::from_bloch(0.0, Vector3::x())
    }

    pub fn sigma_y() -> Self {
        Self::from_bloch(0.0, Vector3::y())
    }

    pub fn sigma_z() -> Self {
        Self::from_bloch(0.0, Vector3::z())
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    /// Decomposes into (a0, a) with self = a0·I + a·σ.
    pub fn bloch(&self) -> (f64, Vector3<f64>) {
        let m = &self.0;
        let a0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let az = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
        let off = m[(1, 0)];
        (a0, Vector3::new(off.re, off.im, az))
    }

    pub fn trace(&self) -> f64 {
        (self.0[(0, 0)] + self.0[(1, 1)]).re
    }

    /// Ascending eigenvalues, a0 ∓ |a|.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let (a0, a) = self.bloch();
        let n = a.norm();
        (a0 - n, a0 + n)
    }

    pub fn expectation(&self, psi: &SpinState) -> f64 {
        (psi.adjoint() * self.0 * psi)[(0, 0)].re
    }

    pub fn apply(&self, psi: &SpinState) -> SpinState {
        self.0 * psi
    }

    pub fn frobenius_distance(&self, other: &SpinOperator) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl std::ops::Mul for SpinOperator {
    type Output = Matrix2<C64>;
    fn mul(self, rhs: SpinOperator) -> Matrix2<C64> {
        self.0 * rhs.0
    }
}

/// exp(−i·(a·σ)) for real a, in closed form.
pub fn su2_exp(a: Vector3<f64>) -> Matrix2<C64> {
    let n = a.norm();
    if n == 0.0 {
        return Matrix2::identity();
    }
    let (s, co) = n.sin_cos();
    let u = a / n;
    // cos n · I − i sin n · (u·σ)
    Matrix2::new(
        c(co, -s * u.z),
        c(-s * u.y, -s * u.x),
        c(s * u.y, -s * u.x),
        c(co, s * u.z),
    )
}

/// Bloch vector ⟨ψ|σ|ψ⟩.
pub fn bloch_vector(psi: &SpinState) -> Vector3<f64> {
    let a = psi[0];
    let b = psi[1];
    let ab = a.conj() * b;
    Vector3::new(2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr())
}

/// ⟨a|b⟩.
pub fn inner(a: &SpinState, b: &SpinState) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}
