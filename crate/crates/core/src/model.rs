//! The two XXZ Hamiltonians with a Dzyaloshinskii-Moriya term along `z` or `x`,
//! their closed-form eigensystems, and ground-state classification.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::entanglement::{concurrence_closed, concurrence_pure};
use crate::error::{Error, Result};
use crate::linalg::{two_site_pauli, ComplexMatrix4, Ket, PauliAxis};
use crate::scalar::Real;
use crate::thermal::{Temperature, DEGENERACY_TOL};

/// Couplings larger than this are rejected; keeps every shifted exponent finite.
pub const MAX_COUPLING: f64 = 1e3;

/// Temperature used to resolve degenerate ground manifolds as a thermal limit.
pub const GROUND_LIMIT_T: f64 = 1e-6;

/// Direction of the Dzyaloshinskii-Moriya vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DmAxis {
    Z,
    X,
}

impl DmAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            DmAxis::Z => "z",
            DmAxis::X => "x",
        }
    }
}

impl fmt::Display for DmAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DmAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(DmAxis::Z),
            "x" => Ok(DmAxis::X),
            other => Err(Error::InvalidParams(format!(
                "unknown model '{other}' (expected z or x)"
            ))),
        }
    }
}

/// Dimensionless couplings `J` (XX and YY), `Jz` (ZZ) and DM strength `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingParams<T> {
    pub j: T,
    pub jz: T,
    pub d: T,
    pub axis: DmAxis,
}

impl<T: Real> CouplingParams<T> {
    pub fn new(j: T, jz: T, d: T, axis: DmAxis) -> Result<Self> {
        let p = Self { j, jz, d, axis };
        p.validate()?;
        Ok(p)
    }

    pub fn z(j: T, jz: T, d: T) -> Result<Self> {
        Self::new(j, jz, d, DmAxis::Z)
    }

    pub fn x(j: T, jz: T, d: T) -> Result<Self> {
        Self::new(j, jz, d, DmAxis::X)
    }

    pub fn validate(&self) -> Result<()> {
        let bound = T::lit(MAX_COUPLING);
        for (name, v) in [("J", self.j), ("Jz", self.jz), ("D", self.d)] {
            if !v.is_finite() || v.abs() > bound {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be finite with magnitude <= {MAX_COUPLING}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_axis(self, axis: DmAxis) -> Self {
        Self { axis, ..self }
    }

    /// `w = sqrt(J^2 + D^2)`, the z-model splitting scale.
    pub fn w(&self) -> T {
        self.j.hypot(self.d)
    }

    /// `w' = sqrt((J + Jz)^2 + 4 D^2)`, the x-model splitting scale.
    pub fn w_prime(&self) -> T {
        (self.j + self.jz).hypot(T::two() * self.d)
    }

    fn expect_axis(&self, axis: DmAxis) -> Result<()> {
        if self.axis == axis {
            Ok(())
        } else {
            Err(Error::WrongAxis {
                expected: axis.as_str(),
                got: self.axis.as_str(),
            })
        }
    }

    pub(crate) fn require_jz_le_j(&self) -> Result<()> {
        if self.jz <= self.j {
            Ok(())
        } else {
            Err(Error::JzExceedsJ {
                j: self.j.to_f64().unwrap_or(f64::NAN),
                jz: self.jz.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn xxz_part<T: Real>(p: &CouplingParams<T>) -> ComplexMatrix4<T> {
    use PauliAxis::*;
    (two_site_pauli(X, X) + two_site_pauli(Y, Y)).scale(p.j) + two_site_pauli(Z, Z).scale(p.jz)
}

/// `J(XX + YY) + Jz ZZ + Dz(XY - YX)`.
pub fn hamiltonian_z<T: Real>(p: &CouplingParams<T>) -> Result<ComplexMatrix4<T>> {
    use PauliAxis::*;
    p.expect_axis(DmAxis::Z)?;
    Ok(xxz_part(p) + (two_site_pauli(X, Y) - two_site_pauli(Y, X)).scale(p.d))
}

/// `J(XX + YY) + Jz ZZ + Dx(YZ - ZY)`.
pub fn hamiltonian_x<T: Real>(p: &CouplingParams<T>) -> Result<ComplexMatrix4<T>> {
    use PauliAxis::*;
    p.expect_axis(DmAxis::X)?;
    Ok(xxz_part(p) + (two_site_pauli(Y, Z) - two_site_pauli(Z, Y)).scale(p.d))
}

/// Hamiltonian for whichever DM axis `p` carries.
pub fn hamiltonian<T: Real>(p: &CouplingParams<T>) -> ComplexMatrix4<T> {
    match p.axis {
        DmAxis::Z => hamiltonian_z(p),
        DmAxis::X => hamiltonian_x(p),
    }
    .expect("axis matches by construction")
}

/// Closed-form eigensystem of the z-axis model.
///
/// `energies[k]` belongs to `states[k]`; order is `(Jz, Jz, -Jz + 2w, -Jz - 2w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumZ<T> {
    pub w: T,
    pub theta: T,
    pub energies: [T; 4],
    pub states: [Ket<T>; 4],
}

/// Closed-form eigensystem of the x-axis model.
///
/// Order is `(Jz, 2J - Jz, -J + w', -J - w')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumX<T> {
    pub w_prime: T,
    pub phi: T,
    pub varphi: T,
    pub energies: [T; 4],
    pub states: [Ket<T>; 4],
}

/// Common view over the two closed-form spectra.
pub trait ClosedSpectrum<T: Real> {
    fn energies(&self) -> [T; 4];
    fn states(&self) -> [Ket<T>; 4];

    fn ground_energy(&self) -> T {
        self.energies().iter().copied().fold(T::infinity(), T::min)
    }

    /// Indices whose energy lies within `DEGENERACY_TOL` of the minimum.
    fn ground_indices(&self) -> Vec<usize> {
        let e0 = self.ground_energy();
        let tol = T::tol(DEGENERACY_TOL);
        (0..4).filter(|&k| self.energies()[k] - e0 <= tol).collect()
    }
}

impl<T: Real> ClosedSpectrum<T> for SpectrumZ<T> {
    fn energies(&self) -> [T; 4] {
        self.energies
    }
    fn states(&self) -> [Ket<T>; 4] {
        self.states
    }
}

impl<T: Real> ClosedSpectrum<T> for SpectrumX<T> {
    fn energies(&self) -> [T; 4] {
        self.energies
    }
    fn states(&self) -> [Ket<T>; 4] {
        self.states
    }
}

/// Phase angle of `J + i Dz`.
///
/// Equals `arctan(Dz / J)` for `J > 0`; the quadrant-aware form keeps
/// `|Phi_3>` on the `-Jz + 2w` level when `J < 0`, and gives `pi/2 sign(Dz)`
/// at `J = 0` and `0` at `J = Dz = 0`.
pub fn theta_z<T: Real>(j: T, d: T) -> T {
    if j == T::zero() && d == T::zero() {
        T::zero()
    } else {
        d.atan2(j)
    }
}

pub fn spectrum_z<T: Real>(p: &CouplingParams<T>) -> Result<SpectrumZ<T>> {
    p.expect_axis(DmAxis::Z)?;
    let w = p.w();
    let theta = theta_z(p.j, p.d);
    let o = cplx(T::zero(), T::zero());
    let one = cplx(T::one(), T::zero());
    let r = T::FRAC_1_SQRT_2();
    let phase = Complex::from_polar(r, theta);
    let hr = cplx(r, T::zero());
    let two_w = T::two() * w;
    Ok(SpectrumZ {
        w,
        theta,
        energies: [p.jz, p.jz, -p.jz + two_w, -p.jz - two_w],
        states: [
            [one, o, o, o],
            [o, o, o, one],
            [o, phase, hr, o],
            [o, phase, -hr, o],
        ],
    })
}

/// `arctan(2 Dx / den)` where `den` is `J + Jz -/+ w'`.
///
/// `den` is evaluated without cancellation via `(J+Jz)^2 - w'^2 = -4 Dx^2`.
fn x_angles<T: Real>(j: T, jz: T, d: T, w_prime: T) -> (T, T) {
    let s = j + jz;
    let four_d2 = T::lit(4.0) * d * d;
    let (den_minus, den_plus) = if s >= T::zero() {
        let plus = s + w_prime;
        let minus = if plus == T::zero() {
            T::zero()
        } else {
            -four_d2 / plus
        };
        (minus, plus)
    } else {
        let minus = s - w_prime;
        (minus, -four_d2 / minus)
    };
    let angle = |den: T| {
        if den == T::zero() {
            // arctan(+-inf); at D = 0 the limit D -> 0+ is taken.
            if d < T::zero() {
                -T::FRAC_PI_2()
            } else {
                T::FRAC_PI_2()
            }
        } else {
            (T::two() * d / den).atan()
        }
    };
    let phi = angle(den_minus);
    // Fully degenerate J + Jz = D = 0: pick an orthogonal partner.
    let varphi = if w_prime == T::zero() {
        T::zero()
    } else {
        angle(den_plus)
    };
    (phi, varphi)
}

fn x_state<T: Real>(angle: T) -> Ket<T> {
    let r = T::FRAC_1_SQRT_2();
    let (s, c) = angle.sin_cos();
    [
        cplx(T::zero(), -r * s),
        cplx(r * c, T::zero()),
        cplx(-r * c, T::zero()),
        cplx(T::zero(), r * s),
    ]
}

pub fn spectrum_x<T: Real>(p: &CouplingParams<T>) -> Result<SpectrumX<T>> {
    p.expect_axis(DmAxis::X)?;
    let w_prime = p.w_prime();
    let (phi, varphi) = x_angles(p.j, p.jz, p.d, w_prime);
    let o = cplx(T::zero(), T::zero());
    let r = cplx(T::FRAC_1_SQRT_2(), T::zero());
    Ok(SpectrumX {
        w_prime,
        phi,
        varphi,
        energies: [p.jz, T::two() * p.j - p.jz, -p.j + w_prime, -p.j - w_prime],
        states: [[r, o, o, r], [o, r, r, o], x_state(phi), x_state(varphi)],
    })
}

/// Ground-state energy, degeneracy and its zero-temperature entanglement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundStateReport<T> {
    pub energy: T,
    pub degeneracy: usize,
    pub entangled: bool,
    pub concurrence_at_zero: T,
}

/// Classifies the ground manifold.
///
/// A non-degenerate ground state is scored by its pure-state concurrence. A
/// degenerate manifold is scored as the thermal limit at `T = 1e-6`. The
/// x-axis model is only handled for `Jz <= J`.
pub fn ground_state<T: Real>(p: &CouplingParams<T>) -> Result<GroundStateReport<T>> {
    let t_limit = Temperature::new(T::lit(GROUND_LIMIT_T))?;
    let spectrum: Box<dyn ClosedSpectrum<T>> = match p.axis {
        DmAxis::Z => Box::new(spectrum_z(p)?),
        DmAxis::X => {
            p.require_jz_le_j()?;
            Box::new(spectrum_x(p)?)
        }
    };
    let ground = spectrum.ground_indices();
    let c = if ground.len() == 1 {
        concurrence_pure(&spectrum.states()[ground[0]])?.c
    } else {
        concurrence_closed(p, t_limit)?.c
    };
    Ok(GroundStateReport {
        energy: spectrum.ground_energy(),
        degeneracy: ground.len(),
        entangled: c > T::tol(1e-12),
        concurrence_at_zero: c,
    })
}
