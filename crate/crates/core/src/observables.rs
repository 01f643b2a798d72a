//! Scalar figures of merit computed from states and channels.

use crate::algebra::{build_spin_operator, Axis, DensityMatrix, Dot, EnergySpectrum};
use crate::error::{Error, Result};
use crate::linalg::{Mat4, DIM};
use crate::propagator::{EvolutionSuperOp, GateSchedule, SeriesPoint};
use crate::scalar::{cis, czero, Real, C};

/// Eigenvalues below this are treated as exactly zero in the entropy.
pub const EIGEN_FLOOR: f64 = 1e-12;
/// Eigenvalues below minus this are a positivity violation.
pub const POSITIVITY_TOLERANCE: f64 = 1e-6;

/// `s = 2 Re tr[ρ S^z]` for the given dot.
pub fn polarization<T: Real>(rho: &DensityMatrix<T>, dot: Dot) -> T {
    let sz = build_spin_operator::<T>(dot, Axis::Z);
    let tr = (rho.rho * sz).trace();
    debug_assert!(tr.im.abs() < T::tolerance(1e-10), "polarization trace has imaginary part {}", tr.im);
    T::lit(2.0) * tr.re
}

/// Average gate fidelity `1/6 + (1/24)[Σ_α E_{αα|αα} + Σ_{αβ} E_{αβ|αβ} e^{it̄ω_{αβ}}]`.
pub fn gate_fidelity<T: Real>(e: &EvolutionSuperOp<T>, spectrum: &EnergySpectrum<T>) -> T {
    let mut sum: C<T> = czero();
    for a in 0..DIM {
        sum = sum + e.get(a, a, a, a);
        for b in 0..DIM {
            sum = sum + e.get(a, b, a, b) * cis(e.tbar * spectrum.omega[a][b]);
        }
    }
    T::one() / T::lit(6.0) + sum.re / T::lit(24.0)
}

/// Gate purity `(1/24) Σ_{αβγ} [|E_{αβ|γγ}|² + Σ_δ (E_{αβ|γγ} E*_{αβ|δδ} + |E_{αβ|γδ}|²)]`.
pub fn gate_purity<T: Real>(e: &EvolutionSuperOp<T>) -> T {
    let mut total = T::zero();
    for a in 0..DIM {
        for b in 0..DIM {
            // Σ_γ E_{αβ|γγ}, so that Σ_{γδ} E_{αβ|γγ}E*_{αβ|δδ} = |Σ_γ E_{αβ|γγ}|².
            let mut diag_sum: C<T> = czero();
            for g in 0..DIM {
                let diag = e.get(a, b, g, g);
                diag_sum = diag_sum + diag;
                total = total + diag.norm_sqr();
                for d in 0..DIM {
                    total = total + e.get(a, b, g, d).norm_sqr();
                }
            }
            total = total + diag_sum.norm_sqr();
        }
    }
    total / T::lit(24.0)
}

/// `Re ⟨ψ₀|U†(t̄) ρ U(t̄)|ψ₀⟩`, with `U(t̄) = diag(e^{−iE_α t̄})` the ideal gate.
pub fn state_fidelity<T: Real>(
    rho_t: &DensityMatrix<T>,
    psi0: &[C<T>; DIM],
    spectrum: &EnergySpectrum<T>,
    schedule: &GateSchedule<T>,
    t: T,
) -> Result<T> {
    let norm: T = psi0.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b);
    if (norm - T::one()).abs() > T::tolerance(1e-9) {
        return Err(Error::InvalidState(format!("reference state has squared norm {norm}, expected 1")));
    }
    let tbar = schedule.clamp(t)?;
    let target: [C<T>; DIM] = std::array::from_fn(|a| cis(-spectrum.energies[a] * tbar) * psi0[a]);
    Ok(rho_t.rho.sandwich(&target, &target).re)
}

/// `Re tr ρ²`.
pub fn state_purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    (rho.rho * rho.rho).trace().re
}

/// `−tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let vals = rho.eigenvalues();
    if vals[0] < -T::lit(POSITIVITY_TOLERANCE) {
        return Err(Error::NumericalIntegrity {
            t: f64::NAN,
            detail: format!("density matrix eigenvalue {:e} below positivity tolerance", vals[0]),
        });
    }
    let floor = T::lit(EIGEN_FLOOR);
    Ok(vals
        .iter()
        .map(|&v| v.min(T::one()))
        .filter(|&v| v > floor)
        .fold(T::zero(), |acc, v| acc - v * v.log2()))
}

/// One row of output: every observable at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableRecord<T: Real> {
    pub t: T,
    pub tbar: T,
    pub s1: T,
    pub s2: T,
    pub gate_fidelity: T,
    pub gate_purity: T,
    /// Only defined for pure initial states.
    pub state_fidelity: Option<T>,
    pub state_purity: T,
    pub entropy_bits: T,
    pub trace_error: T,
    pub herm_error: T,
}

impl<T: Real> ObservableRecord<T> {
    /// `psi0` is the initial state vector when the input was pure.
    pub fn from_point(
        point: &SeriesPoint<T>,
        psi0: Option<&[C<T>; DIM]>,
        spectrum: &EnergySpectrum<T>,
        schedule: &GateSchedule<T>,
    ) -> Result<Self> {
        let rho = &point.state;
        let at = |err: Error| match err {
            Error::NumericalIntegrity { detail, .. } => Error::NumericalIntegrity {
                t: point.t.to_f64().unwrap_or(f64::NAN),
                detail,
            },
            other => other,
        };
        let state_fidelity = match psi0 {
            Some(psi) => Some(state_fidelity(rho, psi, spectrum, schedule, point.t)?),
            None => None,
        };
        Ok(Self {
            t: point.t,
            tbar: point.superop.tbar,
            s1: polarization(rho, Dot::First),
            s2: polarization(rho, Dot::Second),
            gate_fidelity: gate_fidelity(&point.superop, spectrum),
            gate_purity: gate_purity(&point.superop),
            state_fidelity,
            state_purity: state_purity(rho),
            entropy_bits: von_neumann_entropy(rho).map_err(at)?,
            trace_error: rho.trace_error(),
            herm_error: rho.hermiticity_error(),
        })
    }
}

/// Channel `ρ → V ρ V†` written as a superoperator.
pub fn conjugation_channel<T: Real>(v: &Mat4<T>, t: T, tbar: T) -> EvolutionSuperOp<T> {
    let e = crate::linalg::Tensor4::from_fn(|a, b, g, d| v[(a, g)] * v[(b, d)].conj());
    EvolutionSuperOp { e, t, tbar }
}

/// `ρ → tr(ρ) I/4`.
pub fn depolarizing_channel<T: Real>(t: T, tbar: T) -> EvolutionSuperOp<T> {
    let q = T::lit(0.25);
    let e = crate::linalg::Tensor4::from_fn(|a, b, g, d| {
        if a == b && g == d {
            C::new(q, T::zero())
        } else {
            czero()
        }
    });
    EvolutionSuperOp { e, t, tbar }
}
