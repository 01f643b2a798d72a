//! Second-order evolution superoperator of the swap gate.
//!
//! The bath enters only through the double time integrals
//!
//! ```text
//! p_{αβ|γδ}(t) = ∫₀ᵗ ds e^{i s̄ ω_{δβ}} ∫₀ˢ dτ e^{i τ̄ ω_{αγ}} K(s − τ),   K = Γ + iΔ,
//! ```
//!
//! where bars clamp times to the pulse length `τ_s`. Since every transition
//! frequency is one of `{−J₀, 0, +J₀}`, `p` takes only nine distinct values.
//! Each is evaluated by splitting the `(s, τ)` triangle at `τ_s` and reading the inner
//! integral from the cumulative kernel tables, so one time point costs `O(t/du)`.

use rayon::prelude::*;

use crate::algebra::{build_m_tensor, energies, transition_class, CouplingTensor, DensityMatrix, EnergySpectrum, FreqClass, SpinOperatorSet};
use crate::error::{invalid, Error, Result};
use crate::kernel::{tabulate_kernel, BathKernelTable, BathMode, BathParams};
use crate::linalg::{Mat4, Tensor4, DIM};
use crate::quadrature::integrate_to;
use crate::scalar::{cis, czero, re, Real, C};

/// Rectangular exchange pulse of height `J₀` on `[0, τ_s]`, `J₀τ_s = π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSchedule<T: Real> {
    pub j0: T,
    pub tau_s: T,
}

impl<T: Real> GateSchedule<T> {
    pub fn new(j0: T) -> Result<Self> {
        let spectrum = energies(j0)?;
        Ok(Self { j0, tau_s: spectrum.tau_s() })
    }

    /// `min(t, τ_s)`.
    pub fn clamp(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(invalid("t", format!("time must be non-negative, got {t}")));
        }
        Ok(t.min(self.tau_s))
    }
}

pub fn clamp<T: Real>(t: T, schedule: &GateSchedule<T>) -> Result<T> {
    schedule.clamp(t)
}

/// The nine canonical double integrals and the full `p_{αβ|γδ}` lookup built from them.
#[derive(Clone, Debug, PartialEq)]
pub struct PTensor<T: Real> {
    pub t: T,
    /// `canonical[a][b] = P(ω_a, ω_b)` indexed by [`FreqClass::index`].
    pub canonical: [[C<T>; 3]; 3],
    full: Tensor4<T>,
}

impl<T: Real> PTensor<T> {
    pub fn from_canonical(t: T, canonical: [[C<T>; 3]; 3]) -> Self {
        let full = Tensor4::from_fn(|a, b, c, d| {
            canonical[transition_class(a, c).index()][transition_class(d, b).index()]
        });
        Self { t, canonical, full }
    }

    pub fn canonical(&self, a: FreqClass, b: FreqClass) -> C<T> {
        self.canonical[a.index()][b.index()]
    }

    /// `p_{αβ|γδ} = P(ω_{αγ}, ω_{δβ})`.
    #[inline]
    pub fn get(&self, alpha: usize, beta: usize, gamma: usize, delta: usize) -> C<T> {
        self.full.get(alpha, beta, gamma, delta)
    }

    pub fn tensor(&self) -> &Tensor4<T> {
        &self.full
    }
}

/// `∫₀ᴸ e^{iωs} ds`.
fn phase_integral<T: Real>(omega: T, length: T) -> C<T> {
    if omega == T::zero() {
        return re(length);
    }
    (cis(omega * length) - re(T::one())) / C::new(T::zero(), omega)
}

pub fn p_tensor<T: Real>(t: T, table: &BathKernelTable<T>, schedule: &GateSchedule<T>) -> Result<PTensor<T>> {
    let tbar = schedule.clamp(t)?;
    if table.mode() != BathMode::Markov && t > table.u_max * (T::one() + T::lit(1e-12)) {
        return Err(Error::BeyondHorizon {
            t: t.to_f64().unwrap_or(f64::NAN),
            horizon: table.u_max.to_f64().unwrap_or(f64::NAN),
        });
    }
    let tau_s = schedule.tau_s;
    let mut canonical = [[czero(); 3]; 3];
    for a in FreqClass::ALL {
        for b in FreqClass::ALL {
            let wa = a.sign::<T>() * schedule.j0;
            let wb = b.sign::<T>() * schedule.j0;
            canonical[a.index()][b.index()] = match table.mode() {
                BathMode::Markov => markov_value(t, tbar, tau_s, wa, wb, table.markov_rate()),
                _ => table_value(t, tau_s, a, wa, wb, table),
            };
        }
    }
    Ok(PTensor::from_canonical(t, canonical))
}

/// δ-kernel closed form. The kernel only has support at `s = τ`, so the middle
/// region (`τ < τ_s < s`) contributes nothing.
fn markov_value<T: Real>(t: T, tbar: T, tau_s: T, wa: T, wb: T, rate: T) -> C<T> {
    if wa + wb == T::zero() {
        return re(rate * t);
    }
    let mut value = phase_integral(wa + wb, tbar) * re(rate);
    if t > tau_s {
        value = value + cis(tau_s * (wa + wb)) * re(rate * (t - tau_s));
    }
    value
}

fn table_value<T: Real>(t: T, tau_s: T, a: FreqClass, wa: T, wb: T, table: &BathKernelTable<T>) -> C<T> {
    let h = table.du;
    let m = table.steps_per_swap;
    let cneg = table.cumulative_nodes(a.negated());
    let x = t / h;
    let x_swap = T::of_usize(m);
    let nodes_for = |pos: T| (pos.floor().to_usize().unwrap_or(0) + 3).max(4);

    // s ∈ [0, min(t, τ_s)]: e^{is(ω_a+ω_b)} C_{−ω_a}(s).
    let x1 = x.min(x_swap);
    let n1 = nodes_for(x1).min(cneg.len());
    let f1: Vec<C<T>> = (0..n1)
        .map(|k| cis((wa + wb) * h * T::of_usize(k)) * cneg[k])
        .collect();
    let mut value = integrate_to(&f1, h, x1);

    if x > x_swap {
        // s ∈ [τ_s, t]: e^{iτ_sω_b} e^{isω_a} [C_{−ω_a}(s) − C_{−ω_a}(s − τ_s)].
        let x2 = x - x_swap;
        let n2 = nodes_for(x2).min(cneg.len() - m);
        let f2: Vec<C<T>> = (0..n2)
            .map(|j| cis(wa * h * T::of_usize(m + j)) * (cneg[m + j] - cneg[j]))
            .collect();
        value = value + cis(tau_s * wb) * integrate_to(&f2, h, x2);
        // τ, s ∈ [τ_s, t]: clamped phases, inner integral of K alone.
        value = value + cis(tau_s * (wa + wb)) * table.second(t - tau_s);
    }
    value
}

/// Index placement used when assembling the superoperator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// Free-evolution phase `e^{−it̄ω_{αβ}}` and the `p*_{κκ|δβ}` right-hand term;
    /// preserves trace and reduces to `U ρ U†` without the bath.
    #[default]
    Derived,
    /// Phase `e^{−it̄ω_{αγ}}` and `p*_{δκ|γβ}` instead. Diagnostic only: it does
    /// not preserve trace and misses the swap at zero coupling.
    Printed,
}

/// `E_{αβ|γδ}` mapping `ρ(0)_{γδ}` to `ρ(t)_{αβ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSuperOp<T: Real> {
    pub e: Tensor4<T>,
    pub t: T,
    pub tbar: T,
}

impl<T: Real> EvolutionSuperOp<T> {
    #[inline]
    pub fn get(&self, alpha: usize, beta: usize, gamma: usize, delta: usize) -> C<T> {
        self.e.get(alpha, beta, gamma, delta)
    }

    /// The bath-free channel `ρ_{αβ} → e^{−it̄ω_{αβ}} ρ_{αβ}`.
    pub fn unitary(spectrum: &EnergySpectrum<T>, t: T, tbar: T) -> Self {
        let e = Tensor4::from_fn(|a, b, c, d| {
            if a == c && b == d {
                cis(-tbar * spectrum.omega[a][b])
            } else {
                czero()
            }
        });
        Self { e, t, tbar }
    }

    /// `max |Σ_α E_{αα|γδ} − δ_{γδ}|`: deviation from trace preservation.
    pub fn trace_defect(&self) -> T {
        let mut worst = T::zero();
        for g in 0..DIM {
            for d in 0..DIM {
                let s: C<T> = (0..DIM).fold(czero(), |acc, a| acc + self.get(a, a, g, d));
                let target: C<T> = if g == d { re(T::one()) } else { czero() };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// `max |E_{αβ|γδ} − conj E_{βα|δγ}|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                for g in 0..DIM {
                    for d in 0..DIM {
                        worst = worst.max((self.get(a, b, g, d) - self.get(b, a, d, g).conj()).norm());
                    }
                }
            }
        }
        worst
    }
}

pub fn evolution_superop<T: Real>(
    t: T,
    p: &PTensor<T>,
    m: &CouplingTensor<T>,
    spectrum: &EnergySpectrum<T>,
    schedule: &GateSchedule<T>,
) -> Result<EvolutionSuperOp<T>> {
    evolution_superop_with(t, p, m, spectrum, schedule, Convention::Derived)
}

pub fn evolution_superop_with<T: Real>(
    t: T,
    p: &PTensor<T>,
    m: &CouplingTensor<T>,
    spectrum: &EnergySpectrum<T>,
    schedule: &GateSchedule<T>,
    convention: Convention,
) -> Result<EvolutionSuperOp<T>> {
    if (spectrum.j0 - schedule.j0).abs() > T::tolerance(1e-12) * schedule.j0 {
        return Err(invalid("j0", "spectrum and schedule disagree on the exchange energy"));
    }
    let tbar = schedule.clamp(t)?;
    let e = Tensor4::from_fn(|a, b, g, d| {
        let mut bracket = czero();
        if a == g && b == d {
            bracket = re(T::one());
        }
        if b == d {
            for k in 0..DIM {
                bracket = bracket - m.get(a, k, k, g) * p.get(k, k, g, a);
            }
        }
        if a == g {
            for k in 0..DIM {
                let q = match convention {
                    Convention::Derived => p.get(k, k, d, b),
                    Convention::Printed => p.get(d, k, g, b),
                };
                bracket = bracket - m.get(d, k, k, b) * q.conj();
            }
        }
        bracket = bracket + m.get(a, g, d, b) * (p.get(a, b, g, d) + p.get(b, a, d, g).conj());
        let omega = match convention {
            Convention::Derived => spectrum.omega[a][b],
            Convention::Printed => spectrum.omega[a][g],
        };
        cis(-tbar * omega) * bracket
    });
    Ok(EvolutionSuperOp { e, t, tbar })
}

/// Trace tolerance of a channel output; ten times this is an integrity failure.
pub const TRACE_TOLERANCE: f64 = 1e-8;
/// Hermiticity tolerance of a channel output; ten times this is an integrity failure.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// `ρ_{αβ} = Σ_{γδ} E_{αβ|γδ} ρ(0)_{γδ}`.
pub fn apply<T: Real>(e: &EvolutionSuperOp<T>, rho0: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let rho = Mat4::from_fn(|a, b| {
        let mut acc = czero();
        for g in 0..DIM {
            for d in 0..DIM {
                acc = acc + e.get(a, b, g, d) * rho0.get(g, d);
            }
        }
        acc
    });
    let out = DensityMatrix::from_matrix_unchecked(rho);
    let trace_err = out.trace_error();
    let herm_err = out.hermiticity_error();
    if trace_err > T::tolerance(10.0 * TRACE_TOLERANCE) || herm_err > T::tolerance(10.0 * HERMITICITY_TOLERANCE) {
        return Err(Error::NumericalIntegrity {
            t: e.t.to_f64().unwrap_or(f64::NAN),
            detail: format!("output trace error {trace_err:e}, hermiticity error {herm_err:e}"),
        });
    }
    Ok(out)
}

/// Everything needed to evaluate the channel at arbitrary times up to a horizon.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    pub spectrum: EnergySpectrum<T>,
    pub schedule: GateSchedule<T>,
    pub coupling: CouplingTensor<T>,
    pub table: BathKernelTable<T>,
    pub convention: Convention,
}

#[derive(Clone, Debug)]
pub struct SeriesPoint<T: Real> {
    pub t: T,
    pub superop: EvolutionSuperOp<T>,
    pub state: DensityMatrix<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(params: &BathParams<T>, j0: T, horizon: T, du_divisor: usize) -> Result<Self> {
        let spectrum = energies(j0)?;
        let schedule = GateSchedule::new(j0)?;
        let table = tabulate_kernel(params, &spectrum, horizon, du_divisor)?;
        let coupling = build_m_tensor(&SpinOperatorSet::new());
        Ok(Self { spectrum, schedule, coupling, table, convention: Convention::Derived })
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn p_tensor(&self, t: T) -> Result<PTensor<T>> {
        p_tensor(t, &self.table, &self.schedule)
    }

    pub fn superop(&self, t: T) -> Result<EvolutionSuperOp<T>> {
        let p = self.p_tensor(t)?;
        evolution_superop_with(t, &p, &self.coupling, &self.spectrum, &self.schedule, self.convention)
    }

    /// Channel and state at each time. Points are independent and evaluated in parallel.
    pub fn evolve_series(&self, times: &[T], rho0: &DensityMatrix<T>) -> Result<Vec<SeriesPoint<T>>> {
        evolve_series(times, rho0, self)
    }
}

pub fn evolve_series<T: Real>(
    times: &[T],
    rho0: &DensityMatrix<T>,
    propagator: &Propagator<T>,
) -> Result<Vec<SeriesPoint<T>>> {
    if times.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("times", "must be sorted ascending"));
    }
    times
        .par_iter()
        .map(|&t| {
            let superop = propagator.superop(t)?;
            let state = apply(&superop, rho0)?;
            Ok(SeriesPoint { t, superop, state })
        })
        .collect()
}
