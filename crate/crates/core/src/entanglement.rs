//! Wootters concurrence.
//!
//! Three routes: a generic oracle on any two-qubit density matrix, a
//! pure-state shortcut, and closed forms for the thermal states of the two
//! models. The closed forms work with Boltzmann weights relative to the
//! largest one, so they stay exact at low temperature.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    mat_sqrt_psd, singular_values, two_site_pauli, ComplexMatrix4, Ket, PauliAxis, PSD_TOL,
};
use crate::model::{ground_state, CouplingParams};
use crate::scalar::{max_of, Real};
use crate::thermal::Temperature;

/// How a concurrence value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Oracle,
    PureState,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Oracle => "oracle",
            Method::PureState => "pure_state",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(Method::ClosedForm),
            "oracle" => Ok(Method::Oracle),
            "pure_state" => Ok(Method::PureState),
            other => Err(Error::InvalidParams(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceValue<T> {
    pub c: T,
    pub method: Method,
}

/// Square roots of the eigenvalues of `rho S rho* S`, sorted descending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WoottersSpectrum<T> {
    pub lambdas: [T; 4],
}

impl<T: Real> WoottersSpectrum<T> {
    /// Clamps roundoff negatives to zero and sorts descending.
    pub fn new(mut lambdas: [T; 4]) -> Self {
        for l in lambdas.iter_mut() {
            if *l < T::zero() {
                *l = T::zero();
            }
        }
        lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite lambdas"));
        Self { lambdas }
    }

    /// `max(2 max(lambda) - sum(lambda), 0)`, clamped to `[0, 1]`.
    pub fn concurrence(&self) -> T {
        let [l1, l2, l3, l4] = self.lambdas;
        clamp_unit(l1 - l2 - l3 - l4)
    }
}

fn clamp_unit<T: Real>(c: T) -> T {
    c.max(T::zero()).min(T::one())
}

/// `sigma^y (x) sigma^y`.
pub fn spin_flip_matrix<T: Real>() -> ComplexMatrix4<T> {
    two_site_pauli(PauliAxis::Y, PauliAxis::Y)
}

fn check_density_matrix<T: Real>(rho: &ComplexMatrix4<T>) -> Result<()> {
    let tr = rho.trace();
    if !rho.is_finite() || (tr - Complex::new(T::one(), T::zero())).norm() > T::tol(1e-9) {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {tr} differs from 1"
        )));
    }
    if !rho.is_hermitian(T::tol(1e-12)) {
        return Err(Error::InvalidDensityMatrix(format!(
            "not Hermitian (defect {})",
            rho.hermitian_defect()
        )));
    }
    if !rho.is_psd(T::tol(PSD_TOL)) {
        return Err(Error::InvalidDensityMatrix(
            "not positive semidefinite".into(),
        ));
    }
    Ok(())
}

/// Wootters spectrum of an arbitrary density matrix.
///
/// `rho S rho* S` is similar to the Hermitian PSD matrix
/// `sqrt(rho) S rho* S sqrt(rho) = A A^dagger` with `A = sqrt(rho) S sqrt(rho)*`,
/// so the lambdas are the singular values of `A`.
pub fn wootters_spectrum_oracle<T: Real>(rho: &ComplexMatrix4<T>) -> Result<WoottersSpectrum<T>> {
    check_density_matrix(rho)?;
    let sqrt_rho = mat_sqrt_psd(rho)?;
    let a = sqrt_rho * spin_flip_matrix() * sqrt_rho.conj();
    Ok(WoottersSpectrum::new(singular_values(&a)?))
}

/// Concurrence of any two-qubit density matrix.
pub fn concurrence_oracle<T: Real>(rho: &ComplexMatrix4<T>) -> Result<ConcurrenceValue<T>> {
    Ok(ConcurrenceValue {
        c: wootters_spectrum_oracle(rho)?.concurrence(),
        method: Method::Oracle,
    })
}

/// `|psi^T S psi|` for a normalized pure state.
pub fn concurrence_pure<T: Real>(psi: &Ket<T>) -> Result<ConcurrenceValue<T>> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let normalized = (norm - T::one()).abs() <= T::tol(1e-10);
    if !normalized {
        return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
    }
    let s = spin_flip_matrix::<T>();
    let s_psi = s.apply(psi);
    let amp: Complex<T> = psi.iter().zip(s_psi.iter()).map(|(a, b)| *a * *b).sum();
    Ok(ConcurrenceValue {
        c: clamp_unit(amp.norm()),
        method: Method::PureState,
    })
}

/// Relative Boltzmann weights `exp(x - max x)` and their sum.
fn shifted<T: Real>(exponents: [T; 4]) -> ([T; 4], T) {
    let m = max_of(&exponents);
    let w = exponents.map(|e| (e - m).exp());
    let z = w.iter().copied().sum();
    (w, z)
}

fn positive_beta<T: Real>(t: Temperature<T>) -> Result<T> {
    if t.is_zero() {
        Err(Error::ZeroTemperature)
    } else {
        Ok(t.beta())
    }
}

/// Exponents of `(e^{-b Jz}, e^{-b Jz}, e^{b(Jz-2w)}, e^{b(Jz+2w)})`.
fn z_lambda_exponents<T: Real>(p: &CouplingParams<T>, beta: T) -> Result<[T; 4]> {
    crate::model::spectrum_z(p)?;
    let two_w = T::two() * p.w();
    Ok([
        -beta * p.jz,
        -beta * p.jz,
        beta * (p.jz - two_w),
        beta * (p.jz + two_w),
    ])
}

/// Exponents of `(e^{b(Jz-2J)}, e^{-b Jz}, e^{b(J+w')}, e^{b(J-w')})`.
fn x_lambda_exponents<T: Real>(p: &CouplingParams<T>, beta: T) -> Result<[T; 4]> {
    crate::model::spectrum_x(p)?;
    let wp = p.w_prime();
    Ok([
        beta * (p.jz - T::two() * p.j),
        -beta * p.jz,
        beta * (p.j + wp),
        beta * (p.j - wp),
    ])
}

pub fn wootters_lambdas_z<T: Real>(
    p: &CouplingParams<T>,
    t: Temperature<T>,
) -> Result<WoottersSpectrum<T>> {
    let beta = positive_beta(t)?;
    let (w, z) = shifted(z_lambda_exponents(p, beta)?);
    Ok(WoottersSpectrum::new(w.map(|x| x / z)))
}

/// The pair `e^{beta J}[cosh(beta w') +- sqrt(cosh^2(beta w') - 1)]` is evaluated
/// as `e^{beta (J +- w')}`.
pub fn wootters_lambdas_x<T: Real>(
    p: &CouplingParams<T>,
    t: Temperature<T>,
) -> Result<WoottersSpectrum<T>> {
    let beta = positive_beta(t)?;
    let (w, z) = shifted(x_lambda_exponents(p, beta)?);
    Ok(WoottersSpectrum::new(w.map(|x| x / z)))
}

/// Closed-form thermal concurrence of the z-axis model:
/// `max{(1/Z)(|e^{b(Jz+2w)} - e^{-b Jz}| - e^{b(Jz-2w)} - e^{-b Jz}), 0}`.
///
/// `T = 0` returns the ground-state value.
pub fn concurrence_z<T: Real>(
    p: &CouplingParams<T>,
    t: Temperature<T>,
) -> Result<ConcurrenceValue<T>> {
    if t.is_zero() {
        crate::model::spectrum_z(p)?;
        return Ok(ConcurrenceValue {
            c: ground_state(p)?.concurrence_at_zero,
            method: Method::ClosedForm,
        });
    }
    Ok(ConcurrenceValue {
        c: clamp_unit(concurrence_z_unclamped(p, t.beta())?),
        method: Method::ClosedForm,
    })
}

/// The expression inside the outer `max` of the z-model concurrence.
pub(crate) fn concurrence_z_unclamped<T: Real>(p: &CouplingParams<T>, beta: T) -> Result<T> {
    let ([a, _, low, high], z) = shifted(z_lambda_exponents(p, beta)?);
    Ok(((high - a).abs() - low - a) / z)
}

/// Closed-form thermal concurrence of the x-axis model (requires `Jz <= J`):
/// `max{(1/Z')(|e^{b(J+w')} - e^{-b Jz}| - e^{b(J-w')} - e^{b(Jz-2J)}), 0}`.
pub fn concurrence_x<T: Real>(
    p: &CouplingParams<T>,
    t: Temperature<T>,
) -> Result<ConcurrenceValue<T>> {
    crate::model::spectrum_x(p)?;
    p.require_jz_le_j()?;
    if t.is_zero() {
        return Ok(ConcurrenceValue {
            c: ground_state(p)?.concurrence_at_zero,
            method: Method::ClosedForm,
        });
    }
    Ok(ConcurrenceValue {
        c: clamp_unit(concurrence_x_unclamped(p, t.beta())?),
        method: Method::ClosedForm,
    })
}

pub(crate) fn concurrence_x_unclamped<T: Real>(p: &CouplingParams<T>, beta: T) -> Result<T> {
    let ([l1, l2, l3, l4], z) = shifted(x_lambda_exponents(p, beta)?);
    Ok(((l3 - l2).abs() - l4 - l1) / z)
}

/// Closed-form concurrence for whichever axis `p` carries.
pub fn concurrence_closed<T: Real>(
    p: &CouplingParams<T>,
    t: Temperature<T>,
) -> Result<ConcurrenceValue<T>> {
    match p.axis {
        crate::model::DmAxis::Z => concurrence_z(p, t),
        crate::model::DmAxis::X => concurrence_x(p, t),
    }
}
