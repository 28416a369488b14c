//! Critical temperature above which the thermal concurrence vanishes.
//!
//! The z-axis model has the transcendental condition
//! `exp(2 Jz / Tc) sinh(2 w / Tc) = 1`; the x-axis model's threshold is the
//! zero of the closed-form concurrence bracket. Both are solved by bisection
//! in inverse temperature `x = 1/T`. An independent solver scans the oracle
//! concurrence of the numerically exponentiated Gibbs state.

use crate::entanglement::{concurrence_oracle, concurrence_x_unclamped};
use crate::error::{Error, Result};
use crate::model::{hamiltonian, CouplingParams, DmAxis};
use crate::scalar::{log_sum_exp, Real};
use crate::thermal::{gibbs_generic, Temperature};

/// Search interval for the inverse temperature.
pub const X_MIN: f64 = 1e-6;
pub const X_MAX: f64 = 1e3;
/// Scan interval and growth factor for the oracle scan.
pub const SCAN_T_MIN: f64 = 1e-3;
pub const SCAN_T_MAX: f64 = 1e3;
pub const SCAN_FACTOR: f64 = 1.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative width at which bisection stops.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}

impl SolverOptions {
    fn scan_default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalResult<T> {
    pub tc: T,
    /// Final temperature bracket `(t_low, t_high)` around `tc`.
    pub bracket: (T, T),
    pub iterations: usize,
    pub residual: T,
}

/// Bisection on `f` over `[lo, hi]` with `f(lo) <= 0 < f(hi)`.
/// Returns the final `(lo, hi)` and the iteration count.
fn bisect<T: Real>(
    mut lo: T,
    mut hi: T,
    opts: &SolverOptions,
    f: impl Fn(T) -> bool,
) -> (T, T, usize) {
    let tol = T::lit(opts.rel_tol);
    let mut iterations = 0;
    while iterations < opts.max_iter && hi - lo > tol * hi.abs() {
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if f(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi, iterations)
}

/// `ln sinh(y)` for `y > 0`.
fn ln_sinh<T: Real>(y: T) -> T {
    y + (-(-T::two() * y).exp_m1()).ln() - T::LN_2()
}

pub fn critical_temp_z<T: Real>(p: &CouplingParams<T>) -> Result<CriticalResult<T>> {
    critical_temp_z_with(p, &SolverOptions::default())
}

/// Root of `exp(2 Jz x) sinh(2 w x) = 1` in `x = 1/Tc`.
///
/// The left side is increasing in `x` whenever `Jz > -w`, so the root is unique.
pub fn critical_temp_z_with<T: Real>(
    p: &CouplingParams<T>,
    opts: &SolverOptions,
) -> Result<CriticalResult<T>> {
    crate::model::spectrum_z(p)?;
    let w = p.w();
    if p.jz <= -w {
        return Err(Error::NoEntangledRegion);
    }
    if w == T::zero() {
        return Err(Error::NoBracket);
    }
    // Same sign as exp(2 Jz x) sinh(2 w x) - 1.
    let g = |x: T| T::two() * p.jz * x + ln_sinh(T::two() * w * x);
    let (lo, hi) = (T::lit(X_MIN), T::lit(X_MAX));
    if !(g(lo) < T::zero() && g(hi) > T::zero()) {
        return Err(Error::NoBracket);
    }
    let (lo, hi, iterations) = bisect(lo, hi, opts, |x| g(x) > T::zero());
    let x = T::half() * (lo + hi);
    Ok(CriticalResult {
        tc: x.recip(),
        bracket: (hi.recip(), lo.recip()),
        iterations,
        residual: g(x).exp_m1().abs(),
    })
}

pub fn critical_temp_x<T: Real>(p: &CouplingParams<T>) -> Result<CriticalResult<T>> {
    critical_temp_x_with(p, &SolverOptions::default())
}

/// Highest temperature at which the x-model concurrence bracket
/// `e^{x(J+w')} - e^{-x Jz} - e^{x(J-w')} - e^{x(Jz-2J)}` changes sign.
///
/// Scans `x` geometrically from `X_MIN` for the first positive value, then bisects.
pub fn critical_temp_x_with<T: Real>(
    p: &CouplingParams<T>,
    opts: &SolverOptions,
) -> Result<CriticalResult<T>> {
    crate::model::spectrum_x(p)?;
    p.require_jz_le_j()?;
    let wp = p.w_prime();
    // Log-ratio of the leading term to the sum of the others: same sign as the bracket.
    let g = |x: T| {
        (p.j + wp) * x - log_sum_exp(&[-p.jz * x, (p.j - wp) * x, (p.jz - T::two() * p.j) * x])
    };
    let factor = T::lit(SCAN_FACTOR);
    let x_max = T::lit(X_MAX);
    let mut prev = T::lit(X_MIN);
    if g(prev) > T::zero() {
        return Err(Error::NoBracket);
    }
    let upper = loop {
        let next = (prev * factor).min(x_max);
        if g(next) > T::zero() {
            break next;
        }
        if next >= x_max {
            return Err(Error::NoBracket);
        }
        prev = next;
    };
    let (lo, hi, iterations) = bisect(prev, upper, opts, |x| g(x) > T::zero());
    let x = T::half() * (lo + hi);
    Ok(CriticalResult {
        tc: x.recip(),
        bracket: (hi.recip(), lo.recip()),
        iterations,
        residual: concurrence_x_unclamped(p, x)?.abs(),
    })
}

/// Closed-form critical temperature for whichever axis `p` carries.
pub fn critical_temp<T: Real>(
    p: &CouplingParams<T>,
    opts: &SolverOptions,
) -> Result<CriticalResult<T>> {
    match p.axis {
        DmAxis::Z => critical_temp_z_with(p, opts),
        DmAxis::X => critical_temp_x_with(p, opts),
    }
}

fn oracle_concurrence<T: Real>(h: &crate::linalg::ComplexMatrix4<T>, t: T) -> Result<T> {
    let state = gibbs_generic(h, Temperature::new(t)?)?;
    Ok(concurrence_oracle(&state.rho)?.c)
}

pub fn critical_temp_scan<T: Real>(p: &CouplingParams<T>) -> Result<CriticalResult<T>> {
    critical_temp_scan_with(p, &SolverOptions::scan_default())
}

/// Entanglement-death temperature from the oracle path alone.
///
/// Scans `T` geometrically over `[1e-3, 1e3]`, keeps the highest
/// entangled-to-separable transition and bisects it in `T`.
pub fn critical_temp_scan_with<T: Real>(
    p: &CouplingParams<T>,
    opts: &SolverOptions,
) -> Result<CriticalResult<T>> {
    p.validate()?;
    let h = hamiltonian(p);
    let factor = T::lit(SCAN_FACTOR);
    let t_max = T::lit(SCAN_T_MAX);
    let mut grid = vec![T::lit(SCAN_T_MIN)];
    while *grid.last().unwrap() < t_max {
        let next = (*grid.last().unwrap() * factor).min(t_max);
        grid.push(next);
    }
    let values = grid
        .iter()
        .map(|&t| oracle_concurrence(&h, t))
        .collect::<Result<Vec<_>>>()?;
    let last_positive = values
        .iter()
        .rposition(|&c| c > T::zero())
        .ok_or(Error::NeverEntangled)?;
    if last_positive + 1 == grid.len() {
        return Err(Error::NoBracket);
    }
    let (lo, hi) = (grid[last_positive], grid[last_positive + 1]);
    let entangled = |t: T| oracle_concurrence(&h, t).map(|c| c > T::zero());
    // Predicate for bisection: true once separable.
    let failed = std::cell::Cell::new(None);
    let (lo, hi, iterations) = bisect(lo, hi, opts, |t| match entangled(t) {
        Ok(e) => !e,
        Err(err) => {
            failed.set(Some(err));
            true
        }
    });
    if let Some(err) = failed.take() {
        return Err(err);
    }
    let tc = T::half() * (lo + hi);
    Ok(CriticalResult {
        tc,
        bracket: (lo, hi),
        iterations,
        residual: oracle_concurrence(&h, tc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{concurrence_x, concurrence_z};

    fn pz(j: f64, jz: f64, d: f64) -> CouplingParams<f64> {
        CouplingParams::z(j, jz, d).unwrap()
    }
    fn px(j: f64, jz: f64, d: f64) -> CouplingParams<f64> {
        CouplingParams::x(j, jz, d).unwrap()
    }
    fn t(x: f64) -> Temperature<f64> {
        Temperature::new(x).unwrap()
    }

    #[test]
    fn xx_limit_is_analytic() {
        let r = critical_temp_z(&pz(1.0, 0.0, 0.0)).unwrap();
        let exact = 2.0 / (1.0 + 2f64.sqrt()).ln();
        assert!((r.tc - exact).abs() < 1e-8);
        assert!(r.residual <= 1e-9);
        assert!(r.iterations <= 200);
        assert!(r.bracket.0 <= r.tc && r.tc <= r.bracket.1);
    }

    #[test]
    fn z_model_values_and_trend() {
        // Brute force (expm + eigvals of R, Brent on C): 5.388938712
        let tc2 = critical_temp_z(&pz(1.0, 0.2, 2.0)).unwrap().tc;
        assert!((tc2 - 5.388938712).abs() < 1e-6);
        let tc1 = critical_temp_z(&pz(1.0, 0.2, 1.0)).unwrap().tc;
        assert!((tc1 - 3.520749157).abs() < 1e-6);
        assert!(tc2 > tc1);
    }

    #[test]
    fn z_model_errors() {
        assert_eq!(
            critical_temp_z(&pz(1.0, -2.0, 0.0)),
            Err(Error::NoEntangledRegion)
        );
        assert_eq!(
            critical_temp_z(&pz(1.0, -1.0, 0.0)),
            Err(Error::NoEntangledRegion)
        );
        assert_eq!(critical_temp_z(&pz(0.0, 1.0, 0.0)), Err(Error::NoBracket));
        assert!(matches!(
            critical_temp_z(&px(1.0, 0.0, 0.0)),
            Err(Error::WrongAxis { .. })
        ));
    }

    #[test]
    fn x_model_values() {
        // Brute force: 6.172843938 (D = 2), 2.577356060 (D = 0), 3.991777214 (D = 1)
        let r = critical_temp_x(&px(1.0, 0.2, 2.0)).unwrap();
        assert!((r.tc - 6.172843938).abs() < 1e-6);
        assert!(r.residual <= 1e-9);
        assert!((critical_temp_x(&px(1.0, 0.2, 0.0)).unwrap().tc - 2.577356060).abs() < 1e-6);
        assert!((critical_temp_x(&px(1.0, 0.2, 1.0)).unwrap().tc - 3.991777214).abs() < 1e-6);
        assert!(r.tc > critical_temp_z(&pz(1.0, 0.2, 2.0)).unwrap().tc);
        assert!(matches!(
            critical_temp_x(&px(1.0, 2.0, 1.0)),
            Err(Error::JzExceedsJ { .. })
        ));
    }

    #[test]
    fn result_brackets_the_death_point() {
        for p in [pz(1.0, 0.2, 2.0), pz(-0.5, 0.3, 1.2)] {
            let tc = critical_temp_z(&p).unwrap().tc;
            assert!(concurrence_z(&p, t(tc * (1.0 - 1e-6))).unwrap().c > 0.0);
            assert!(concurrence_z(&p, t(tc * (1.0 + 1e-6))).unwrap().c <= 1e-9);
        }
        let p = px(1.0, 0.2, 2.0);
        let tc = critical_temp_x(&p).unwrap().tc;
        assert!(concurrence_x(&p, t(tc * (1.0 - 1e-6))).unwrap().c > 0.0);
        assert!(concurrence_x(&p, t(tc * (1.0 + 1e-6))).unwrap().c <= 1e-9);
    }

    #[test]
    fn scan_agrees_with_closed_solvers() {
        let scan = critical_temp_scan(&pz(1.0, 0.0, 0.0)).unwrap().tc;
        let closed = critical_temp_z(&pz(1.0, 0.0, 0.0)).unwrap().tc;
        assert!(((scan - closed) / closed).abs() < 1e-4);
        let scan = critical_temp_scan(&px(1.0, 0.2, 1.0)).unwrap().tc;
        let closed = critical_temp_x(&px(1.0, 0.2, 1.0)).unwrap().tc;
        assert!(((scan - closed) / closed).abs() < 1e-4);
        assert_eq!(
            critical_temp_scan(&pz(1.0, -2.0, 0.0)),
            Err(Error::NeverEntangled)
        );
    }

    #[test]
    fn bisection_is_deterministic() {
        let a = critical_temp_x(&px(0.8, 0.1, 1.3)).unwrap();
        let b = critical_temp_x(&px(0.8, 0.1, 1.3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ln_sinh_matches_direct() {
        for y in [1e-6, 0.1, 1.0, 5.0] {
            assert!((ln_sinh(y) - f64::sinh(y).ln()).abs() < 1e-12);
        }
        assert!(ln_sinh(2000.0f64).is_finite());
    }
}
