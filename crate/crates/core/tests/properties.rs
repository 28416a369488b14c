use num_complex::Complex;
use proptest::prelude::*;

use xxz_dm::sweep::{format_sig, sweep_grid_with, to_csv_string, CSV_DIGITS};
use xxz_dm::{
    concurrence_closed, concurrence_oracle, concurrence_pure, concurrence_x, concurrence_z,
    critical_temp, gibbs, gibbs_generic, hamiltonian, mat_exp_hermitian, partition, read_csv,
    spectrum_x, spectrum_z, Axis, ComplexMatrix4, CouplingParams, DmAxis, EvalMethod, Method,
    SolverOptions, SweepRecord, SweepSpec, Temperature,
};

fn temp(t: f64) -> Temperature<f64> {
    Temperature::new(t).unwrap()
}

fn coupling() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn params_z() -> impl Strategy<Value = CouplingParams<f64>> {
    (coupling(), coupling(), coupling()).prop_map(|(j, jz, d)| CouplingParams::z(j, jz, d).unwrap())
}

/// x-model parameters with Jz <= J.
fn params_x() -> impl Strategy<Value = CouplingParams<f64>> {
    (coupling(), coupling(), coupling())
        .prop_map(|(a, b, d)| CouplingParams::x(a.max(b), a.min(b), d).unwrap())
}

fn any_params() -> impl Strategy<Value = CouplingParams<f64>> {
    prop_oneof![params_z(), params_x()]
}

/// Log-uniform temperature over [1e-3, 1e3].
fn wide_temp() -> impl Strategy<Value = f64> {
    (-3.0..3.0f64).prop_map(|e| 10f64.powf(e))
}

fn max_entry_diff(a: &ComplexMatrix4<f64>, b: &ComplexMatrix4<f64>) -> f64 {
    (*a - *b).max_abs()
}

/// `exp(i a.sigma)` for a real 3-vector `a`.
fn su2(a: [f64; 3]) -> [[Complex<f64>; 2]; 2] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let (c, s) = (n.cos(), if n > 0.0 { n.sin() / n } else { 1.0 });
    let i = Complex::i();
    let re = |x: f64| Complex::new(x, 0.0);
    [
        [re(c) + i * s * a[2], i * s * a[0] + s * a[1]],
        [i * s * a[0] - s * a[1], re(c) - i * s * a[2]],
    ]
}

fn kron(a: [[Complex<f64>; 2]; 2], b: [[Complex<f64>; 2]; 2]) -> ComplexMatrix4<f64> {
    let mut m = ComplexMatrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_gibbs_matches_generic(p in any_params(), t in wide_temp()) {
        let closed = gibbs(&p, temp(t)).unwrap();
        let generic = gibbs_generic(&hamiltonian(&p), temp(t)).unwrap();
        prop_assert!(max_entry_diff(&closed.rho, &generic.rho) <= 1e-10);
        prop_assert!(closed.rho.is_finite());
        closed.validate_against(&hamiltonian(&p)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn concurrence_in_unit_interval(p in any_params(), t in wide_temp()) {
        let c = concurrence_closed(&p, temp(t)).unwrap().c;
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn closed_and_oracle_methods_agree(p in any_params(), t in 0.05..50.0f64) {
        let closed = concurrence_closed(&p, temp(t)).unwrap();
        let oracle = concurrence_oracle(&gibbs_generic(&hamiltonian(&p), temp(t)).unwrap().rho).unwrap();
        prop_assert_eq!(closed.method, Method::ClosedForm);
        prop_assert_eq!(oracle.method, Method::Oracle);
        prop_assert!((closed.c - oracle.c).abs() <= 1e-8);
    }

    #[test]
    fn sign_symmetry_z((j, jz, d) in (coupling(), coupling(), coupling()), t in wide_temp()) {
        let c = |j, d| concurrence_z(&CouplingParams::z(j, jz, d).unwrap(), temp(t)).unwrap().c;
        prop_assert_eq!(c(j, d), c(-j, d));
        prop_assert_eq!(c(j, d), c(j, -d));
    }

    #[test]
    fn sign_symmetry_x(p in params_x(), t in wide_temp()) {
        let flipped = CouplingParams::x(p.j, p.jz, -p.d).unwrap();
        let a = concurrence_x(&p, temp(t)).unwrap().c;
        let b = concurrence_x(&flipped, temp(t)).unwrap().c;
        prop_assert!((a - b).abs() <= 1e-14);
    }

    #[test]
    fn spectrum_z_invariant_under_sign_flips((j, jz, d) in (coupling(), coupling(), coupling())) {
        let e = |j, d| spectrum_z(&CouplingParams::z(j, jz, d).unwrap()).unwrap().energies;
        prop_assert_eq!(e(j, d), e(-j, d));
        prop_assert_eq!(e(j, d), e(j, -d));
    }

    #[test]
    fn x_eigenstates_are_maximally_entangled(p in params_x()) {
        for psi in spectrum_x(&p).unwrap().states {
            prop_assert!((concurrence_pure(&psi).unwrap().c - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn oracle_is_local_unitary_invariant(
        p in any_params(),
        t in 0.05..20.0f64,
        a in prop::array::uniform3(-3.0..3.0f64),
        b in prop::array::uniform3(-3.0..3.0f64),
    ) {
        let rho = gibbs(&p, temp(t)).unwrap().rho;
        let u = kron(su2(a), su2(b));
        prop_assert!(u.is_unitary(1e-12));
        let rotated = u * rho * u.adjoint();
        let c0 = concurrence_oracle(&rho).unwrap().c;
        let c1 = concurrence_oracle(&rotated).unwrap().c;
        prop_assert!((c0 - c1).abs() <= 1e-9);
    }

    #[test]
    fn exp_semigroup_trace_and_determinant(p in any_params(), s in -1.0..1.0f64, r in -1.0..1.0f64) {
        let h = hamiltonian(&p);
        prop_assert!(h.trace().norm() <= 1e-12);
        let es = mat_exp_hermitian(&h, s).unwrap();
        let er = mat_exp_hermitian(&h, r).unwrap();
        let esr = mat_exp_hermitian(&h, s + r).unwrap();
        // Rounding in the product scales with the factors, not the result.
        let scale = (es.max_abs() * er.max_abs()).max(1.0);
        prop_assert!(max_entry_diff(&(es * er), &esr) <= 1e-11 * scale);
        // H is traceless, so det exp(sH) = 1.
        prop_assert!((es.determinant() - Complex::new(1.0, 0.0)).norm() <= 1e-9 * es.max_abs().powi(4).max(1.0));
        let energies = match p.axis {
            DmAxis::Z => spectrum_z(&p).unwrap().energies,
            DmAxis::X => spectrum_x(&p).unwrap().energies,
        };
        let tr: f64 = energies.iter().map(|e| (s * e).exp()).sum();
        prop_assert!((es.trace().re - tr).abs() <= 1e-11 * tr);
    }

    #[test]
    fn purity_non_increasing_in_t(p in any_params()) {
        let mut last = f64::INFINITY;
        for k in 1..=200 {
            let purity = gibbs(&p, temp(0.05 * k as f64)).unwrap().purity();
            prop_assert!(purity <= last + 1e-12);
            last = purity;
        }
    }

    #[test]
    fn partition_positive_and_finite_at_low_t(p in any_params()) {
        let z = partition(&p, temp(1e-3)).unwrap();
        prop_assert!(z > 0.0);
        let state = gibbs(&p, temp(1e-3)).unwrap();
        prop_assert!(state.rho.is_finite());
        prop_assert!(state.ln_partition().is_finite());
    }

    #[test]
    fn f32_tracks_f64(p in params_z(), t in 0.1..10.0f64) {
        let p32 = CouplingParams::z(p.j as f32, p.jz as f32, p.d as f32).unwrap();
        let c32 = concurrence_z(&p32, Temperature::new(t as f32).unwrap()).unwrap().c;
        let c64 = concurrence_z(&p, temp(t)).unwrap().c;
        prop_assert!((c32 as f64 - c64).abs() <= 1e-4);
    }

    #[test]
    fn format_sig_roundtrips(x in prop::num::f64::NORMAL) {
        let s = format_sig(x, CSV_DIGITS);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(format_sig(back, CSV_DIGITS), s);
        prop_assert!((back - x).abs() <= 5e-12 * x.abs());
    }

    #[test]
    fn csv_roundtrip(records in prop::collection::vec(record(), 0..20)) {
        let text = to_csv_string(&records).unwrap();
        let parsed = read_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed.len(), records.len());
        for (a, b) in parsed.iter().zip(&records) {
            prop_assert_eq!((a.model, a.method), (b.model, b.method));
            for (x, y) in [(a.j, b.j), (a.jz, b.jz), (a.d, b.d), (a.t, b.t), (a.partition, b.partition), (a.concurrence, b.concurrence)] {
                prop_assert!((x - y).abs() <= 5e-12 * y.abs());
            }
        }
        prop_assert_eq!(to_csv_string(&parsed).unwrap(), text);
    }
}

fn record() -> impl Strategy<Value = SweepRecord> {
    (
        prop_oneof![Just(DmAxis::Z), Just(DmAxis::X)],
        prop::array::uniform4(-5.0..5.0f64),
        (1e-3..1e3f64, 0.0..1.0f64),
        prop_oneof![Just(Method::ClosedForm), Just(Method::Oracle)],
    )
        .prop_map(|(model, [j, jz, d, t], (z, c), method)| SweepRecord {
            model,
            j,
            jz,
            d,
            t: t.abs() + 0.01,
            partition: z,
            concurrence: c,
            method,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn parallel_matches_serial(
        model in prop_oneof![Just(DmAxis::Z), Just(DmAxis::X)],
        j in coupling(),
        jz in coupling(),
        d0 in 0.0..2.0f64,
        steps in 2usize..12,
        oracle in any::<bool>(),
    ) {
        let spec = SweepSpec {
            models: vec![model],
            j,
            jz: Axis::Fixed(jz),
            d: Axis::range(d0, d0 + 1.0, steps),
            t: Axis::range(0.05, 5.0, 25),
            method: if oracle { EvalMethod::Oracle } else { EvalMethod::Closed },
            output_path: None,
        };
        let par = sweep_grid_with(&spec, true).unwrap();
        let ser = sweep_grid_with(&spec, false).unwrap();
        prop_assert_eq!(&par, &ser);
        prop_assert_eq!(to_csv_string(&par).unwrap(), to_csv_string(&ser).unwrap());
    }
}

fn tc(axis: DmAxis, jz: f64, d: f64) -> f64 {
    critical_temp(
        &CouplingParams::new(1.0, jz, d, axis).unwrap(),
        &SolverOptions::default(),
    )
    .unwrap()
    .tc
}

#[test]
fn critical_temperature_increases_with_d() {
    for axis in [DmAxis::Z, DmAxis::X] {
        let tcs: Vec<f64> = [0.5, 1.0, 1.5, 2.0]
            .iter()
            .map(|&d| tc(axis, 0.2, d))
            .collect();
        assert!(tcs.windows(2).all(|w| w[1] > w[0]), "{axis}: {tcs:?}");
    }
}

#[test]
fn critical_temperature_increases_with_jz() {
    for axis in [DmAxis::Z, DmAxis::X] {
        let tcs: Vec<f64> = [0.0, 0.2, 0.5, 1.0]
            .iter()
            .map(|&jz| tc(axis, jz, 1.0))
            .collect();
        assert!(tcs.windows(2).all(|w| w[1] > w[0]), "{axis}: {tcs:?}");
    }
}

#[test]
fn bisection_is_deterministic() {
    let p = CouplingParams::x(1.0, 0.3, 1.7).unwrap();
    let a = critical_temp(&p, &SolverOptions::default()).unwrap();
    let b = critical_temp(&p, &SolverOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_with_jz_above_j_uses_oracle() {
    let spec = SweepSpec {
        models: vec![DmAxis::X],
        j: 1.0,
        jz: Axis::List(vec![0.5, 2.0]),
        d: Axis::Fixed(1.0),
        t: Axis::range(0.5, 2.0, 4),
        method: EvalMethod::Closed,
        output_path: None,
    };
    let rows = sweep_grid_with(&spec, true).unwrap();
    assert!(rows[..4].iter().all(|r| r.method == Method::ClosedForm));
    assert!(rows[4..].iter().all(|r| r.method == Method::Oracle));
}
