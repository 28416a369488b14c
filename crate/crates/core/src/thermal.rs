//! Gibbs states `exp(-H/T) / Z`, from the closed forms of both models and
//! from the generic matrix exponential.
//!
//! Boltzmann weights are always carried relative to the largest one, so the
//! density matrices stay finite down to `T = 1e-3` with couplings of order
//! `1e3`. The partition function is kept in the same split form.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix4, HERMITIAN_TOL, PSD_TOL};
use crate::model::{hamiltonian, spectrum_x, spectrum_z, ClosedSpectrum, CouplingParams, DmAxis};
use crate::scalar::{log_sum_exp, max_of, Real};

/// Eigenvalues within this distance of the minimum belong to the ground manifold.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Below this temperature the quoted partition formulas are evaluated in shifted form.
pub const LOW_T: f64 = 0.05;

/// Temperature in units with `k_B = 1`. Zero selects the ground-manifold limit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Temperature<T>(T);

impl<T: Real> Temperature<T> {
    pub fn new(t: T) -> Result<Self> {
        if t.is_finite() && t >= T::zero() {
            Ok(Self(t))
        } else {
            Err(Error::InvalidTemperature(t.to_f64().unwrap_or(f64::NAN)))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }

    /// `1/T`; infinite at `T = 0`.
    pub fn beta(self) -> T {
        T::one() / self.0
    }

    fn beta_nonzero(self) -> Result<T> {
        if self.is_zero() {
            Err(Error::ZeroTemperature)
        } else {
            Ok(self.beta())
        }
    }
}

/// A normalized Gibbs state.
///
/// The partition function is stored as `Z = shifted_partition * exp(-energy_shift / T)`,
/// with `energy_shift` the ground energy. At `T = 0` `shifted_partition` is
/// the ground-state degeneracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalState<T> {
    pub rho: ComplexMatrix4<T>,
    pub temperature: Temperature<T>,
    pub params: Option<CouplingParams<T>>,
    pub energy_shift: T,
    pub shifted_partition: T,
}

impl<T: Real> ThermalState<T> {
    /// `Z`; may overflow to infinity at very low temperature.
    pub fn partition(&self) -> T {
        self.ln_partition().exp()
    }

    pub fn ln_partition(&self) -> T {
        if self.temperature.is_zero() {
            return T::nan();
        }
        self.shifted_partition.ln() - self.energy_shift * self.temperature.beta()
    }

    pub fn trace_error(&self) -> T {
        (self.rho.trace() - Complex::new(T::one(), T::zero())).norm()
    }

    pub fn purity(&self) -> T {
        (self.rho * self.rho).trace().re
    }

    /// `||[rho, H]||_F`
    pub fn commutator_norm(&self, h: &ComplexMatrix4<T>) -> T {
        self.rho.commutator(h).frobenius_norm()
    }

    /// Checks trace, Hermiticity, positivity and commutation with `h` at the
    /// module tolerances. Returns the first violated property.
    pub fn validate_against(&self, h: &ComplexMatrix4<T>) -> std::result::Result<(), String> {
        if self.trace_error() > T::tol(1e-12) {
            return Err(format!("trace error {}", self.trace_error()));
        }
        if !self.rho.is_hermitian(T::tol(HERMITIAN_TOL)) {
            return Err(format!("hermitian defect {}", self.rho.hermitian_defect()));
        }
        if !self.rho.is_psd(T::tol(PSD_TOL)) {
            return Err("not positive semidefinite".into());
        }
        let comm = self.commutator_norm(h);
        if comm > T::tol(1e-9) {
            return Err(format!("commutator norm {comm}"));
        }
        Ok(())
    }
}

/// Uniform mixture over the given orthonormal states.
fn uniform_mixture<T: Real>(states: &[[Complex<T>; 4]]) -> ComplexMatrix4<T> {
    let n = T::from_usize(states.len()).expect("small count");
    states
        .iter()
        .fold(ComplexMatrix4::zeros(), |acc, s| {
            acc + ComplexMatrix4::outer(s, s)
        })
        .scale(T::one() / n)
}

fn ground_manifold_state<T: Real, S: ClosedSpectrum<T>>(
    spectrum: &S,
    params: &CouplingParams<T>,
) -> ThermalState<T> {
    let idx = spectrum.ground_indices();
    let states: Vec<_> = idx.iter().map(|&k| spectrum.states()[k]).collect();
    ThermalState {
        rho: uniform_mixture(&states),
        temperature: Temperature::zero(),
        params: Some(*params),
        energy_shift: spectrum.ground_energy(),
        shifted_partition: T::from_usize(idx.len()).expect("small count"),
    }
}

/// `Z = 2 e^{-beta Jz} [1 + e^{2 beta Jz} cosh(2 beta w)]`.
pub fn partition_z<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<T> {
    let beta = t.beta_nonzero()?;
    spectrum_z(p)?;
    let (jz, w) = (p.jz, p.w());
    if t.value() >= T::lit(LOW_T) {
        let two = T::two();
        Ok(two
            * (-beta * jz).exp()
            * (T::one() + (two * beta * jz).exp() * (two * beta * w).cosh()))
    } else {
        Ok(ln_partition_z(p, beta).exp())
    }
}

fn z_exponents<T: Real>(p: &CouplingParams<T>, beta: T) -> [T; 4] {
    let two_w = T::two() * p.w();
    [
        -beta * p.jz,
        -beta * p.jz,
        beta * (p.jz - two_w),
        beta * (p.jz + two_w),
    ]
}

fn ln_partition_z<T: Real>(p: &CouplingParams<T>, beta: T) -> T {
    log_sum_exp(&z_exponents(p, beta))
}

/// `Z' = 2 e^{-beta J} cosh[beta (J - Jz)] + 2 e^{beta J} cosh(beta w')`.
pub fn partition_x<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<T> {
    let beta = t.beta_nonzero()?;
    spectrum_x(p)?;
    if t.value() >= T::lit(LOW_T) {
        let two = T::two();
        Ok(two * (-beta * p.j).exp() * (beta * (p.j - p.jz)).cosh()
            + two * (beta * p.j).exp() * (beta * p.w_prime()).cosh())
    } else {
        Ok(log_sum_exp(&x_exponents(p, beta)).exp())
    }
}

/// `-beta E'_k` in the order `(E1', E2', E3', E4')`.
fn x_exponents<T: Real>(p: &CouplingParams<T>, beta: T) -> [T; 4] {
    let wp = p.w_prime();
    [
        -beta * p.jz,
        beta * (p.jz - T::two() * p.j),
        beta * (p.j - wp),
        beta * (p.j + wp),
    ]
}

/// Closed-form Gibbs state of the z-axis model.
///
/// Block form: `e^{-beta Jz}` on `|00>`, `|11>` and `[[u, v e^{i theta}], [v e^{-i theta}, u]]`
/// on `{|01>, |10>}`, all over `Z`.
pub fn gibbs_z<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<ThermalState<T>> {
    let spec = spectrum_z(p)?;
    if t.is_zero() {
        return Ok(ground_manifold_state(&spec, p));
    }
    let beta = t.beta();
    let ex = z_exponents(p, beta);
    let m = max_of(&ex);
    let a = (ex[0] - m).exp();
    let low = (ex[2] - m).exp();
    let high = (ex[3] - m).exp();
    // u = (e^{b(Jz-2w)} + e^{b(Jz+2w)}) / 2, v = (e^{b(Jz-2w)} - e^{b(Jz+2w)}) / 2
    let u = T::half() * (low + high);
    let v = T::half() * (low - high);
    let zs = T::two() * a + low + high;
    let phase = Complex::from_polar(T::one(), spec.theta);
    let mut rho = ComplexMatrix4::zeros();
    rho[(0, 0)] = Complex::new(a, T::zero());
    rho[(3, 3)] = Complex::new(a, T::zero());
    rho[(1, 1)] = Complex::new(u, T::zero());
    rho[(2, 2)] = Complex::new(u, T::zero());
    rho[(1, 2)] = phase * v;
    rho[(2, 1)] = phase.conj() * v;
    Ok(ThermalState {
        rho: rho.scale(T::one() / zs),
        temperature: t,
        params: Some(*p),
        energy_shift: -m * t.value(),
        shifted_partition: zs,
    })
}

/// Closed-form Gibbs state of the x-axis model, `(1/2Z') [[mu+, -xi, xi, mu-], ...]`.
pub fn gibbs_x<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<ThermalState<T>> {
    let spec = spectrum_x(p)?;
    if t.is_zero() {
        return Ok(ground_manifold_state(&spec, p));
    }
    let beta = t.beta();
    let ex = x_exponents(p, beta);
    let m = max_of(&ex);
    let [e1, e2, e3, e4] = ex.map(|e| (e - m).exp());
    let (s_phi, c_phi) = spec.phi.sin_cos();
    let (s_vphi, c_vphi) = spec.varphi.sin_cos();
    let sin_part = e3 * s_phi * s_phi + e4 * s_vphi * s_vphi;
    let cos_part = e3 * c_phi * c_phi + e4 * c_vphi * c_vphi;
    let mu_p = e1 + sin_part;
    let mu_m = e1 - sin_part;
    let nu_p = e2 + cos_part;
    let nu_m = e2 - cos_part;
    let xi = Complex::new(T::zero(), e3 * s_phi * c_phi + e4 * s_vphi * c_vphi);
    let re = |x: T| Complex::new(x, T::zero());
    let rows = [
        [re(mu_p), -xi, xi, re(mu_m)],
        [xi, re(nu_p), re(nu_m), -xi],
        [-xi, re(nu_m), re(nu_p), xi],
        [re(mu_m), xi, -xi, re(mu_p)],
    ];
    let zs = e1 + e2 + e3 + e4;
    Ok(ThermalState {
        rho: ComplexMatrix4::from_rows(rows).scale(T::one() / (T::two() * zs)),
        temperature: t,
        params: Some(*p),
        energy_shift: -m * t.value(),
        shifted_partition: zs,
    })
}

/// Closed-form Gibbs state for whichever axis `p` carries.
pub fn gibbs<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<ThermalState<T>> {
    match p.axis {
        DmAxis::Z => gibbs_z(p, t),
        DmAxis::X => gibbs_x(p, t),
    }
}

/// Closed-form partition function for whichever axis `p` carries.
pub fn partition<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<T> {
    match p.axis {
        DmAxis::Z => partition_z(p, t),
        DmAxis::X => partition_x(p, t),
    }
}

/// `exp(-H/T) / tr exp(-H/T)` by eigendecomposition of an arbitrary Hermitian `H`.
///
/// At `T = 0` returns the uniform mixture over the lowest eigenspace.
pub fn gibbs_generic<T: Real>(h: &ComplexMatrix4<T>, t: Temperature<T>) -> Result<ThermalState<T>> {
    let eig = hermitian_eig(h)?;
    let e0 = eig.eigenvalues[0];
    let weights: [T; 4] = if t.is_zero() {
        let tol = T::tol(DEGENERACY_TOL);
        eig.eigenvalues
            .map(|e| if e - e0 <= tol { T::one() } else { T::zero() })
    } else {
        let beta = t.beta();
        eig.eigenvalues.map(|e| (-(e - e0) * beta).exp())
    };
    let zs: T = weights.iter().copied().sum();
    let rho = eig.reconstruct_diag(weights).scale(T::one() / zs);
    Ok(ThermalState {
        rho,
        temperature: t,
        params: None,
        energy_shift: e0,
        shifted_partition: zs,
    })
}

/// Generic-path Gibbs state of a parameterized model.
pub fn gibbs_oracle<T: Real>(p: &CouplingParams<T>, t: Temperature<T>) -> Result<ThermalState<T>> {
    let mut s = gibbs_generic(&hamiltonian(p), t)?;
    s.params = Some(*p);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_exp_hermitian;
    use crate::model::hamiltonian_z;

    fn t(x: f64) -> Temperature<f64> {
        Temperature::new(x).unwrap()
    }

    #[test]
    fn temperature_rejects_negative() {
        assert!(Temperature::new(-1.0).is_err());
        assert!(Temperature::new(f64::INFINITY).is_err());
        assert!(t(0.0).is_zero());
    }

    #[test]
    fn partition_z_values() {
        let p = CouplingParams::z(1.0, 0.2, 0.0).unwrap();
        assert!((partition_z(&p, t(1e12)).unwrap() - 4.0).abs() < 1e-10);
        // Brute-force trace(expm(-H)) = 10.827773893811669
        assert!((partition_z(&p, t(1.0)).unwrap() - 10.827773893811669).abs() < 1e-9);
        assert_eq!(
            partition_z(&p, Temperature::zero()),
            Err(Error::ZeroTemperature)
        );
    }

    #[test]
    fn partition_x_values() {
        let p = CouplingParams::x(1.0, 0.2, 1.0).unwrap();
        assert!((partition_x(&p, t(1e12)).unwrap() - 4.0).abs() < 1e-10);
        // Brute-force trace(expm(-H')) = 29.2528133675
        assert!((partition_x(&p, t(1.0)).unwrap() - 29.2528133675).abs() < 1e-8);
        let h = hamiltonian(&p);
        let tr = mat_exp_hermitian(&h, -0.5).unwrap().trace().re;
        let z2 = partition_x(&p, t(2.0)).unwrap();
        assert!(((z2 - tr) / tr).abs() < 1e-9);
        assert!((tr - 7.117037739736278).abs() < 1e-9);
    }

    #[test]
    fn low_temperature_partition_is_shifted() {
        let p = CouplingParams::z(1.0, 0.2, 1.0).unwrap();
        let hi = partition_z(&p, t(0.05)).unwrap();
        let lo = partition_z(&p, t(0.05 * (1.0 - 1e-15))).unwrap();
        assert!(((hi - lo) / hi).abs() < 1e-9);
        let s = gibbs_z(&p, t(1e-3)).unwrap();
        assert!(s.rho.is_finite());
        assert!(s.ln_partition().is_finite());
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let quarter = ComplexMatrix4::<f64>::identity().scale(0.25);
        for p in [
            CouplingParams::z(1.0, 0.2, 1.0).unwrap(),
            CouplingParams::x(1.0, 0.2, 1.0).unwrap(),
        ] {
            let s = gibbs(&p, t(1e9)).unwrap();
            assert!((s.rho - quarter).max_abs() < 1e-8);
        }
        let s = gibbs_generic(&ComplexMatrix4::zeros(), t(1.0)).unwrap();
        assert!((s.rho - quarter).max_abs() < 1e-15);
    }

    #[test]
    fn gibbs_z_entry_and_oracle() {
        let p = CouplingParams::z(1.0, 0.2, 1.0).unwrap();
        let s = gibbs_z(&p, t(1.0)).unwrap();
        let w = 2f64.sqrt();
        let z = partition_z(&p, t(1.0)).unwrap();
        let v = 0.5 * (1.0 - (4.0 * w).exp()) * (0.2 - 2.0 * w).exp();
        let expected = Complex::from_polar(v / z, std::f64::consts::FRAC_PI_4);
        assert!((s.rho[(1, 2)] - expected).norm() < 1e-12);
        let o = gibbs_generic(&hamiltonian_z(&p).unwrap(), t(1.0)).unwrap();
        assert!((s.rho - o.rho).max_abs() < 1e-10);
        assert!(((s.partition() - z) / z).abs() < 1e-12);
    }

    #[test]
    fn gibbs_x_matches_oracle() {
        for (j, jz, d, temp) in [
            (1.0, 0.2, 1.0, 1.0),
            (-1.0, -3.0, 0.5, 0.3),
            (0.5, 2.0, -1.5, 4.0),
        ] {
            let p = CouplingParams::x(j, jz, d).unwrap();
            let s = gibbs_x(&p, t(temp)).unwrap();
            let o = gibbs_oracle(&p, t(temp)).unwrap();
            assert!((s.rho - o.rho).max_abs() < 1e-10, "{j} {jz} {d}");
        }
    }

    #[test]
    fn zero_temperature_ground_states() {
        let p = CouplingParams::z(1.0, 0.2, 1.0).unwrap();
        let s = gibbs_z(&p, Temperature::zero()).unwrap();
        let phi4 = spectrum_z(&p).unwrap().states[3];
        assert!((s.rho - ComplexMatrix4::outer(&phi4, &phi4)).max_abs() < 1e-15);

        let p = CouplingParams::x(1.0, 0.2, 1.0).unwrap();
        let s = gibbs_x(&p, Temperature::zero()).unwrap();
        let psi4 = spectrum_x(&p).unwrap().states[3];
        assert!((s.rho - ComplexMatrix4::outer(&psi4, &psi4)).max_abs() < 1e-15);
        assert!(s.trace_error() < 1e-15);

        let h = ComplexMatrix4::from_diag([0.0, 0.0, 0.0, -5.0]);
        let s = gibbs_generic(&h, Temperature::zero()).unwrap();
        assert!((s.rho - ComplexMatrix4::from_diag([0.0, 0.0, 0.0, 1.0])).max_abs() < 1e-15);
    }

    #[test]
    fn degenerate_ground_manifold_is_uniform() {
        let p = CouplingParams::z(1.0, -2.0, 0.0).unwrap();
        let s = gibbs_z(&p, Temperature::zero()).unwrap();
        assert!((s.rho - ComplexMatrix4::from_diag([0.5, 0.0, 0.0, 0.5])).max_abs() < 1e-15);
        let o = gibbs_generic(&hamiltonian(&p), Temperature::zero()).unwrap();
        assert!((s.rho - o.rho).max_abs() < 1e-12);
    }

    #[test]
    fn states_are_valid() {
        let p = CouplingParams::x(1.0, 0.2, 2.0).unwrap();
        let h = hamiltonian(&p);
        for temp in [1e-3, 0.05, 1.0, 10.0, 1e3] {
            gibbs(&p, t(temp)).unwrap().validate_against(&h).unwrap();
            gibbs_generic(&h, t(temp))
                .unwrap()
                .validate_against(&h)
                .unwrap();
        }
    }
}
