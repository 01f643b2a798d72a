//! Swap-gate dynamics of two exchange-coupled spins in an Ohmic boson bath,
//! to second order in the spin–bath coupling (time-convolutionless expansion).
//!
//! Everything is generic over [`scalar::Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what the CLI uses.
//!
//! ```
//! use tclgate::{BathMode, BathParams, Propagator, initial_state, InitialState};
//! use tclgate::observables::polarization;
//! use tclgate::algebra::Dot;
//!
//! let params = BathParams::new(0.0, 300.0, 400.0, BathMode::HighT).unwrap();
//! let prop = Propagator::new(&params, 1.0, std::f64::consts::PI, 40).unwrap();
//! let rho0 = initial_state(&InitialState::MixedUp).unwrap();
//! let e = prop.superop(std::f64::consts::PI).unwrap();
//! let rho = tclgate::apply(&e, &rho0).unwrap();
//! assert!((polarization(&rho, Dot::First) - 1.0).abs() < 1e-12);
//! ```

// `!(x > 0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod propagator;
pub mod quadrature;
pub mod scalar;

pub use algebra::{energies, initial_state, Dot, FreqClass, InitialState};
pub use error::{Error, Result};
pub use kernel::{tabulate_kernel, BathMode, DEFAULT_DU_DIVISOR};
pub use observables::{gate_fidelity, gate_purity, state_fidelity, state_purity, von_neumann_entropy};
pub use propagator::{apply, evolution_superop, evolve_series, p_tensor, Convention};
pub use scalar::Real;

pub type Complex = scalar::C<f64>;
pub type Mat4 = linalg::Mat4<f64>;
pub type DensityMatrix = algebra::DensityMatrix<f64>;
pub type EnergySpectrum = algebra::EnergySpectrum<f64>;
pub type CouplingTensor = algebra::CouplingTensor<f64>;
pub type BathParams = kernel::BathParams<f64>;
pub type BathKernelTable = kernel::BathKernelTable<f64>;
pub type GateSchedule = propagator::GateSchedule<f64>;
pub type PTensor = propagator::PTensor<f64>;
pub type EvolutionSuperOp = propagator::EvolutionSuperOp<f64>;
pub type Propagator = propagator::Propagator<f64>;
pub type SeriesPoint = propagator::SeriesPoint<f64>;
pub type ObservableRecord = observables::ObservableRecord<f64>;
