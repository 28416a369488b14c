//! Thermal entanglement of two-qubit anisotropic Heisenberg XXZ chains with a
//! Dzyaloshinskii-Moriya interaction along `z` or `x`.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`). Concrete `f64` aliases are provided below; the sweep
//! engine and the CLI work in `f64`.

pub mod cli;
pub mod critical;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod sweep;
pub mod thermal;

pub use cli::{run_cli, run_cli_with};
pub use critical::{
    critical_temp, critical_temp_scan, critical_temp_x, critical_temp_z, CriticalResult,
    SolverOptions,
};
pub use entanglement::{
    concurrence_closed, concurrence_oracle, concurrence_pure, concurrence_x, concurrence_z,
    spin_flip_matrix, wootters_lambdas_x, wootters_lambdas_z, wootters_spectrum_oracle,
    ConcurrenceValue, Method, WoottersSpectrum,
};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, mat_exp_hermitian, mat_sqrt_psd, two_site_pauli, CMatrix, ComplexMatrix4,
    ComplexScalar, EigenDecomposition, Ket, PauliAxis,
};
pub use model::{
    ground_state, hamiltonian, hamiltonian_x, hamiltonian_z, spectrum_x, spectrum_z,
    CouplingParams, DmAxis, GroundStateReport, SpectrumX, SpectrumZ,
};
pub use scalar::Real;
pub use sweep::{
    figure_preset, read_csv, sweep_grid, write_csv, Axis, EvalMethod, FigureId, SweepRecord,
    SweepSpec,
};
pub use thermal::{
    gibbs, gibbs_generic, gibbs_oracle, gibbs_x, gibbs_z, partition, partition_x, partition_z,
    Temperature, ThermalState,
};

pub type Matrix4 = ComplexMatrix4<f64>;
pub type Params = CouplingParams<f64>;
pub type Temp = Temperature<f64>;
pub type State = ThermalState<f64>;
pub type Concurrence = ConcurrenceValue<f64>;
pub type Critical = CriticalResult<f64>;
