//! Dense complex linear algebra at two-qubit scale.
//!
//! Matrices are stored row-major over the computational basis
//! `{|00>, |01>, |10>, |11>}`. The eigensolver is a cyclic complex Jacobi
//! iteration, which is exact enough at this size and handles the degenerate
//! spectra the spin models produce without special casing.

#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type ComplexScalar<T> = Complex<T>;

/// A column vector of length `N`.
pub type Ket<T, const N: usize = 4> = [Complex<T>; N];

/// Dense `N x N` complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix<T, const N: usize> {
    data: [[Complex<T>; N]; N],
}

/// The 4x4 carrier for Hamiltonians, density matrices and operators.
pub type ComplexMatrix4<T> = CMatrix<T, 4>;

/// Symmetry tolerance used for Hermitian preconditions.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues above `-PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-10;
/// Sweep cap for the Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;

impl<T: Real, const N: usize> CMatrix<T, N> {
    pub fn zeros() -> Self {
        Self {
            data: [[Complex::new(T::zero(), T::zero()); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(data: [[Complex<T>; N]; N]) -> Self {
        Self { data }
    }

    pub fn from_real_rows(rows: [[T; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = Complex::new(rows[i][j], T::zero());
            }
        }
        m
    }

    pub fn from_diag(d: [T; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = Complex::new(d[i], T::zero());
        }
        m
    }

    /// `|a><b|`
    pub fn outer(a: &Ket<T, N>, b: &Ket<T, N>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> &[[Complex<T>; N]; N] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Ket<T, N> {
        std::array::from_fn(|i| self.data[i][j])
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn transpose(&self) -> Self {
        self.adjoint().conj()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.data[i][i]
        })
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|z| *z = *z * s);
        m
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|z| *z = *z * s);
        m
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    pub fn apply(&self, v: &Ket<T, N>) -> Ket<T, N> {
        std::array::from_fn(|i| {
            (0..N).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                acc + self.data[i][j] * v[j]
            })
        })
    }

    /// `AB - BA`
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in i..N {
                worst = worst.max((self.data[i][j] - self.data[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian to `tol`, relative to `max(1, max|M_ij|)`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_finite() && self.hermitian_defect() <= tol * T::one().max(self.max_abs())
    }

    /// `max|(M^dagger M - I)_ij| <= tol`
    pub fn is_unitary(&self, tol: T) -> bool {
        (self.adjoint() * *self - Self::identity()).max_abs() <= tol
    }

    /// Hermitian with every eigenvalue `>= -tol`.
    pub fn is_psd(&self, tol: T) -> bool {
        match hermitian_eig(self) {
            Ok(eig) => eig.eigenvalues[0] >= -tol,
            Err(_) => false,
        }
    }

    pub fn determinant(&self) -> Complex<T> {
        // Gaussian elimination with partial pivoting.
        let mut a = self.data;
        let mut det = Complex::new(T::one(), T::zero());
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&r, &s| a[r][col].norm().partial_cmp(&a[s][col].norm()).unwrap())
                .unwrap_or(col);
            if a[pivot][col].norm() == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det = det * a[col][col];
            for r in col + 1..N {
                let f = a[r][col] / a[col][col];
                for c in col..N {
                    let sub = f * a[col][c];
                    a[r][c] = a[r][c] - sub;
                }
            }
        }
        det
    }
}

impl<T, const N: usize> Index<(usize, usize)> for CMatrix<T, N> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for CMatrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i][j]
    }
}

impl<T: Real, const N: usize> Mul for CMatrix<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..N {
                    m.data[i][j] = m.data[i][j] + a * rhs.data[k][j];
                }
            }
        }
        m
    }
}

impl<T: Real, const N: usize> Add for CMatrix<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self
            .data
            .iter_mut()
            .flatten()
            .zip(rhs.data.iter().flatten())
        {
            *a = *a + *b;
        }
        self
    }
}

impl<T: Real, const N: usize> Sub for CMatrix<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self
            .data
            .iter_mut()
            .flatten()
            .zip(rhs.data.iter().flatten())
        {
            *a = *a - *b;
        }
        self
    }
}

impl<T: Real, const N: usize> Neg for CMatrix<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: fmt::Debug, const N: usize> fmt::Debug for CMatrix<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// Single-qubit factor of a two-site Pauli product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    Id,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix<T: Real>(self) -> [[Complex<T>; 2]; 2] {
        let o = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            PauliAxis::Id => [[one, o], [o, one]],
            PauliAxis::X => [[o, one], [one, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[one, o], [o, -one]],
        }
    }
}

/// `sigma^a (x) sigma^b` in the computational basis.
pub fn two_site_pauli<T: Real>(a: PauliAxis, b: PauliAxis) -> ComplexMatrix4<T> {
    let (pa, pb) = (a.matrix::<T>(), b.matrix::<T>());
    let mut m = ComplexMatrix4::zeros();
    for r1 in 0..2 {
        for r2 in 0..2 {
            for c1 in 0..2 {
                for c2 in 0..2 {
                    m[(2 * r1 + r2, 2 * c1 + c2)] = pa[r1][c1] * pb[r2][c2];
                }
            }
        }
    }
    m
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenDecomposition<T, const N: usize = 4> {
    pub eigenvalues: [T; N],
    pub eigenvectors: CMatrix<T, N>,
}

impl<T: Real, const N: usize> EigenDecomposition<T, N> {
    pub fn eigenvector(&self, k: usize) -> Ket<T, N> {
        self.eigenvectors.column(k)
    }

    /// `V f(L) V^dagger`
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> CMatrix<T, N> {
        self.reconstruct_diag(self.eigenvalues.map(f))
    }

    /// `V diag(d) V^dagger`
    pub fn reconstruct_diag(&self, d: [T; N]) -> CMatrix<T, N> {
        let v = &self.eigenvectors;
        let mut m = CMatrix::zeros();
        for k in 0..N {
            let fk = d[k];
            if fk == T::zero() {
                continue;
            }
            for i in 0..N {
                let vik = v[(i, k)] * fk;
                for j in 0..N {
                    m[(i, j)] = m[(i, j)] + vik * v[(j, k)].conj();
                }
            }
        }
        m
    }

    /// `max_k ||M v_k - lambda_k v_k||_2`
    pub fn max_residual(&self, m: &CMatrix<T, N>) -> T {
        (0..N)
            .map(|k| {
                let v = self.eigenvector(k);
                let mv = m.apply(&v);
                mv.iter()
                    .zip(v.iter())
                    .map(|(a, b)| (*a - *b * self.eigenvalues[k]).norm_sqr())
                    .sum::<T>()
                    .sqrt()
            })
            .fold(T::zero(), T::max)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Output is sorted ascending and is a deterministic function of the input bits.
pub fn hermitian_eig<T: Real, const N: usize>(
    m: &CMatrix<T, N>,
) -> Result<EigenDecomposition<T, N>> {
    if !m.is_hermitian(T::tol(HERMITIAN_TOL)) {
        return Err(Error::NotHermitian(
            m.hermitian_defect().to_f64().unwrap_or(f64::NAN),
        ));
    }
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a = *m;
    for i in 0..N {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in i + 1..N {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * T::half();
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::<T, N>::identity();
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * T::lit(0.5) * scale;

    let mut converged = scale == T::zero();
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            converged = true;
            continue;
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues = std::array::from_fn(|k| a[(order[k], order[k])].re);
    let mut vectors = CMatrix::zeros();
    for (k, &src) in order.iter().enumerate() {
        for i in 0..N {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn off_diagonal_norm<T: Real, const N: usize>(a: &CMatrix<T, N>) -> T {
    let mut s = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate<T: Real, const N: usize>(
    a: &mut CMatrix<T, N>,
    v: &mut CMatrix<T, N>,
    p: usize,
    q: usize,
) {
    let b = a[(p, q)];
    let babs = b.norm();
    if babs == T::zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible against both diagonal entries: drop it.
    let tiny = T::epsilon() * T::lit(1e-3);
    if babs <= tiny * app.abs() && babs <= tiny * aqq.abs() {
        a[(p, q)] = Complex::new(T::zero(), T::zero());
        a[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    let phase = b / babs;
    let theta = (aqq - app) / (T::two() * babs);
    let t = {
        let r = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -r
        } else {
            r
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // G = [[c, s e], [-s conj(e), c]] acting on the (p, q) plane.
    let g_pq = phase * s;
    let g_qp = -phase.conj() * s;

    for k in 0..N {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * c + akq * g_qp;
        let new_kq = akp * g_pq + akq * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = Complex::new(app - t * babs, T::zero());
    a[(q, q)] = Complex::new(aqq + t * babs, T::zero());
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());

    for k in 0..N {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * c;
    }
}

/// `exp(s M)` split as `(exp(s M - shift I), shift)` with `shift = max_k s*lambda_k`,
/// so the matrix factor has spectral radius 1.
pub fn exp_hermitian_shifted<T: Real, const N: usize>(
    m: &CMatrix<T, N>,
    s: T,
) -> Result<(CMatrix<T, N>, T)> {
    if !s.is_finite() {
        return Err(Error::InvalidParams(format!(
            "non-finite exponent scale {s}"
        )));
    }
    let eig = hermitian_eig(m)?;
    let shift = eig
        .eigenvalues
        .iter()
        .map(|&l| s * l)
        .fold(T::neg_infinity(), T::max);
    Ok((eig.reconstruct_with(|l| (s * l - shift).exp()), shift))
}

/// `exp(s M)` for Hermitian `M`, via the eigendecomposition with exponent shifting.
pub fn mat_exp_hermitian<T: Real, const N: usize>(
    m: &CMatrix<T, N>,
    s: T,
) -> Result<CMatrix<T, N>> {
    let (e, shift) = exp_hermitian_shifted(m, s)?;
    Ok(e.scale(shift.exp()))
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero.
pub fn mat_sqrt_psd<T: Real, const N: usize>(m: &CMatrix<T, N>) -> Result<CMatrix<T, N>> {
    let eig = hermitian_eig(m)?;
    let min = eig.eigenvalues[0];
    if min < -T::tol(PSD_TOL) {
        return Err(Error::NotPsd(min.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(eig.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

/// Singular values of a 4x4 complex matrix, descending.
///
/// Obtained as the non-negative half of the spectrum of the Hermitian
/// embedding `[[0, A], [A^dagger, 0]]`, which keeps absolute accuracy near
/// `eps * ||A||` for small singular values (squaring through `A A^dagger`
/// would lose half the digits).
pub fn singular_values<T: Real>(m: &ComplexMatrix4<T>) -> Result<[T; 4]> {
    let mut h = CMatrix::<T, 8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            h[(i, j + 4)] = m[(i, j)];
            h[(j + 4, i)] = m[(i, j)].conj();
        }
    }
    let eig = hermitian_eig(&h)?;
    Ok(std::array::from_fn(|k| {
        eig.eigenvalues[7 - k].max(T::zero())
    }))
}
