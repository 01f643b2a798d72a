//! Slow, independent reference calculations used to check the main path.
//!
//! Nothing here shares the three-region decomposition of the propagator:
//! `p_bruteforce` sums the double integral directly on a square grid, and
//! `rk4_tcl2` integrates the time-local master equation instead of expanding
//! its solution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::{energies, transition_class, DensityMatrix, EnergySpectrum, FreqClass, SpinOperatorSet};
use crate::error::{invalid, Error, Result};
use crate::kernel::{kernel_high_t, tabulate_kernel, BathKernelTable, BathMode, BathParams, OhmicKernel};
use crate::linalg::{Mat4, DIM};
use crate::propagator::{EvolutionSuperOp, GateSchedule, PTensor};
use crate::scalar::{cis, czero, re, Real, C};

/// Largest RK4 step accepted, in units of `1/ω_c`.
pub const MAX_RK4_STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Trapezoid panels per swap time on the coarser of the two Richardson grids.
    pub panels_per_swap: usize,
    /// RK4 step in units of `1/ω_c`.
    pub rk4_step: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { panels_per_swap: 8000, rk4_step: MAX_RK4_STEP, seed: 0x5eed }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_swap < 2 {
            return Err(invalid("panels_per_swap", format!("need at least 2, got {}", self.panels_per_swap)));
        }
        if !(self.rk4_step > 0.0 && self.rk4_step <= MAX_RK4_STEP) {
            return Err(invalid(
                "rk4_step",
                format!("must lie in (0, {MAX_RK4_STEP}] in units of 1/omega_c, got {}", self.rk4_step),
            ));
        }
        Ok(())
    }
}

fn kernel_sampler<T: Real>(params: &BathParams<T>, what: &'static str) -> Result<impl Fn(T) -> Result<C<T>> + Sync> {
    params.validate()?;
    let exact = match params.mode {
        BathMode::Markov => return Err(Error::UnsupportedMode { mode: "markov", what }),
        BathMode::Exact => Some(OhmicKernel::new(*params)?),
        BathMode::HighT => None,
    };
    let params = *params;
    Ok(move |u: T| match &exact {
        Some(k) => k.sample(u).map(|s| s.as_complex()),
        None => Ok(kernel_high_t(u, &params).as_complex()),
    })
}

/// Direct iterated trapezoid over `0 ≤ τ ≤ s ≤ t` with `n` panels, returning `P(ω_a, ω_b)`
/// for the nine class pairs. `k[m]` is the kernel at lag `m·h`.
fn trapezoid_p<T: Real>(n: usize, h: T, tau_s: T, j0: T, k: &[C<T>]) -> [[C<T>; 3]; 3] {
    let clamp = |i: usize| (h * T::of_usize(i)).min(tau_s);
    let half = T::lit(0.5);
    // phase[c][i] = e^{i τ̄_i ω_c}
    let phase: Vec<[C<T>; 3]> = (0..=n)
        .map(|i| FreqClass::ALL.map(|c| cis(clamp(i) * c.sign::<T>() * j0)))
        .collect();
    // inner[j][a] = ∫₀^{s_j} e^{iτ̄ω_a} K(s_j − τ) dτ
    let inner: Vec<[C<T>; 3]> = (0..=n)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                return [czero(); 3];
            }
            let mut acc: [C<T>; 3] = [czero(); 3];
            for i in 0..=j {
                let kv = k[j - i];
                let p = &phase[i];
                acc[0] = acc[0] + p[0] * kv;
                acc[1] = acc[1] + p[1] * kv;
                acc[2] = acc[2] + p[2] * kv;
            }
            std::array::from_fn(|a| (acc[a] - (phase[0][a] * k[j] + phase[j][a] * k[0]) * re(half)) * re(h))
        })
        .collect();
    let mut out: [[C<T>; 3]; 3] = [[czero(); 3]; 3];
    for (j, row) in inner.iter().enumerate() {
        let w = if j == 0 || j == n { h * half } else { h };
        for a in 0..3 {
            for b in 0..3 {
                out[a][b] = out[a][b] + phase[j][b] * row[a] * re(w);
            }
        }
    }
    out
}

/// `p` by brute-force 2-D quadrature, Richardson-extrapolated from two grids.
///
/// For `t > τ_s` the step is `τ_s/panels_per_swap` and `t` must be a whole number
/// of steps, so the kink of the clamped phase sits on a node.
pub fn p_bruteforce<T: Real>(t: T, params: &BathParams<T>, schedule: &GateSchedule<T>, cfg: &OracleConfig) -> Result<PTensor<T>> {
    cfg.validate()?;
    let sampler = kernel_sampler(params, "brute-force p quadrature")?;
    schedule.clamp(t)?;
    if t == T::zero() {
        return Ok(PTensor::from_canonical(t, [[czero(); 3]; 3]));
    }
    let panels = T::of_usize(cfg.panels_per_swap);
    let n = if t <= schedule.tau_s {
        (t / schedule.tau_s * panels).ceil().to_usize().unwrap_or(1).max(1)
    } else {
        let steps = t / schedule.tau_s * panels;
        let rounded = steps.round();
        if (steps - rounded).abs() > T::tolerance(1e-9) * steps {
            return Err(invalid("t", "beyond the swap time t must be a multiple of tau_s/panels_per_swap"));
        }
        rounded.to_usize().unwrap_or(0)
    };
    let h = t / T::of_usize(n);
    let fine = h * T::lit(0.5);
    let k_fine: Vec<C<T>> = (0..=2 * n)
        .into_par_iter()
        .map(|m| sampler(fine * T::of_usize(m)))
        .collect::<Result<_>>()?;
    let k_coarse: Vec<C<T>> = k_fine.iter().step_by(2).copied().collect();
    let coarse = trapezoid_p(n, h, schedule.tau_s, schedule.j0, &k_coarse);
    let finer = trapezoid_p(2 * n, fine, schedule.tau_s, schedule.j0, &k_fine);
    let third = T::one() / T::lit(3.0);
    let canonical = std::array::from_fn(|a| {
        std::array::from_fn(|b| (finer[a][b] * re(T::lit(4.0)) - coarse[a][b]) * re(third))
    });
    Ok(PTensor::from_canonical(t, canonical))
}

/// `∫₀ᵗ K(t − τ) e^{iωτ̄} dτ` for the three frequency classes.
fn memory_integrals<T: Real>(t: T, table: &BathKernelTable<T>) -> [C<T>; 3] {
    let tau_s = table.tau_s;
    FreqClass::ALL.map(|c| {
        let w = c.sign::<T>() * table.j0;
        let cneg = c.negated();
        if t <= tau_s {
            cis(w * t) * table.cumulative(cneg, t)
        } else {
            cis(w * t) * (table.cumulative(cneg, t) - table.cumulative(cneg, t - tau_s))
                + cis(w * tau_s) * table.cumulative(FreqClass::Zero, t - tau_s)
        }
    })
}

struct Tcl2<T: Real> {
    ops: SpinOperatorSet<T>,
    spectrum: EnergySpectrum<T>,
    table: BathKernelTable<T>,
}

impl<T: Real> Tcl2<T> {
    /// `dρ̃/dt = −Σ ([S̃(t), B(t)ρ̃] + [ρ̃B(t)†, S̃(t)])`, `B(t) = ∫₀ᵗ K(t−τ) S̃(τ) dτ`.
    fn rhs(&self, t: T, rho: &Mat4<T>) -> Mat4<T> {
        let tbar = t.min(self.table.tau_s);
        let mem = memory_integrals(t, &self.table);
        let mut out = Mat4::zero();
        for s in self.ops.iter() {
            let st = Mat4::from_fn(|a, b| s[(a, b)] * cis(self.spectrum.omega[a][b] * tbar));
            let b = Mat4::from_fn(|a, c| s[(a, c)] * mem[transition_class(a, c).index()]);
            let b_rho = b * *rho;
            let rho_bd = *rho * b.adjoint();
            out = out - st.commutator(&b_rho) - rho_bd.commutator(&st);
        }
        out
    }
}

/// TCL2 master equation integrated with classical RK4 in the interaction picture.
///
/// Uses its own finer kernel table whose step is half the RK4 step, so every
/// stage time is a table node. Returns Schrödinger-picture states at `times`.
pub fn rk4_tcl2<T: Real>(
    rho0: &DensityMatrix<T>,
    times: &[T],
    params: &BathParams<T>,
    schedule: &GateSchedule<T>,
    cfg: &OracleConfig,
) -> Result<Vec<DensityMatrix<T>>> {
    cfg.validate()?;
    if params.mode == BathMode::Markov {
        return Err(Error::UnsupportedMode { mode: "markov", what: "RK4 master-equation oracle" });
    }
    if times.windows(2).any(|w| !(w[0] <= w[1])) || times.first().is_some_and(|&t| !(t >= T::zero())) {
        return Err(invalid("times", "must be non-negative and sorted ascending"));
    }
    let spectrum = energies(schedule.j0)?;
    let t_end = times.last().copied().unwrap_or(T::zero());
    let divisor = (2.0 * std::f64::consts::PI / cfg.rk4_step).ceil() as usize;
    let table = tabulate_kernel(params, &spectrum, t_end + schedule.tau_s * T::lit(0.01), divisor)?;
    let step = table.du * T::lit(2.0);
    let system = Tcl2 { ops: SpinOperatorSet::new(), spectrum, table };

    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut t = T::zero();
    let mut rho = rho0.rho;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let dt = step.min(target - t);
            if dt <= step * T::tolerance(1e-9) {
                t = target;
                break;
            }
            let k1 = system.rhs(t, &rho);
            let k2 = system.rhs(t + dt * half, &(rho + k1.scale(re(dt * half))));
            let k3 = system.rhs(t + dt * half, &(rho + k2.scale(re(dt * half))));
            let k4 = system.rhs(t + dt, &(rho + k3.scale(re(dt))));
            rho = rho + (k1 + k2.scale(re(T::lit(2.0))) + k3.scale(re(T::lit(2.0))) + k4).scale(re(dt * sixth));
            t = t + dt;
        }
        let tbar = schedule.clamp(target)?;
        let lab = Mat4::from_fn(|a, b| rho[(a, b)] * cis(-system.spectrum.omega[a][b] * tbar));
        out.push(DensityMatrix::from_matrix_unchecked(lab));
    }
    Ok(out)
}

/// Monte-Carlo average of `⟨ψ|U†(t̄) E[|ψ⟩⟨ψ|] U(t̄)|ψ⟩` over Haar-random pure states.
/// Returns the mean and its standard error.
pub fn haar_average_fidelity<T: Real>(
    e: &EvolutionSuperOp<T>,
    spectrum: &EnergySpectrum<T>,
    n: usize,
    seed: u64,
) -> Result<(T, T)> {
    if n < 100 {
        return Err(invalid("n", format!("need at least 100 samples, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..n {
        let mut psi: [C<T>; DIM] = std::array::from_fn(|_| {
            let re_part: f64 = rng.sample(StandardNormal);
            let im_part: f64 = rng.sample(StandardNormal);
            C::new(T::lit(re_part), T::lit(im_part))
        });
        let norm = psi.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        psi.iter_mut().for_each(|c| *c = *c / norm);
        let rho0 = Mat4::outer(&psi, &psi);
        let rho = Mat4::from_fn(|a, b| {
            let mut acc = czero();
            for g in 0..DIM {
                for d in 0..DIM {
                    acc = acc + e.get(a, b, g, d) * rho0[(g, d)];
                }
            }
            acc
        });
        let target: [C<T>; DIM] = std::array::from_fn(|a| cis(-spectrum.energies[a] * e.tbar) * psi[a]);
        let f = rho.sandwich(&target, &target).re.to_f64().unwrap_or(f64::NAN);
        sum += f;
        sum_sq += f * f;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok((T::lit(mean), T::lit((var / nf).sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{initial_state, InitialState};
    use crate::observables::{conjugation_channel, depolarizing_channel};
    use crate::propagator::Propagator;
    use std::f64::consts::PI;

    fn high_t() -> BathParams<f64> {
        BathParams::new(1.8e-5, 300.0, 400.0, BathMode::HighT).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        let bad = OracleConfig { rk4_step: 0.1, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidParameter { name: "rk4_step", .. })));
        let markov = BathParams::new(1.8e-5, 300.0, 400.0, BathMode::Markov).unwrap();
        let schedule = GateSchedule::new(1.0).unwrap();
        assert!(matches!(
            p_bruteforce(1.0, &markov, &schedule, &OracleConfig::default()),
            Err(Error::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn bruteforce_zero_coupling() {
        let params = BathParams::new(0.0, 300.0, 400.0, BathMode::Exact).unwrap();
        let schedule = GateSchedule::new(1.0).unwrap();
        let cfg = OracleConfig { panels_per_swap: 200, ..Default::default() };
        let p = p_bruteforce(2.0 * PI, &params, &schedule, &cfg).unwrap();
        assert_eq!(p.tensor().max_abs(), 0.0);
    }

    #[test]
    fn bruteforce_matches_table_path_for_short_times() {
        let schedule = GateSchedule::new(1.0).unwrap();
        let cfg = OracleConfig { panels_per_swap: 4000, ..Default::default() };
        let t = 0.25 * PI;
        let brute = p_bruteforce(t, &high_t(), &schedule, &cfg).unwrap();
        let prop = Propagator::new(&high_t(), 1.0, t, 40).unwrap();
        let fast = prop.p_tensor(t).unwrap();
        for a in FreqClass::ALL {
            for b in FreqClass::ALL {
                let (x, y) = (brute.canonical(a, b), fast.canonical(a, b));
                assert!((x - y).norm() < 1e-6 * y.norm(), "{a:?} {b:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn rk4_free_evolution_is_exact() {
        let params = BathParams::new(0.0, 300.0, 400.0, BathMode::HighT).unwrap();
        let schedule = GateSchedule::new(1.0).unwrap();
        let rho0 = initial_state(&InitialState::MixedUp).unwrap();
        let times = [0.0, 0.5, PI, 1.5 * PI];
        let states = rk4_tcl2(&rho0, &times, &params, &schedule, &OracleConfig::default()).unwrap();
        let spectrum = energies(1.0).unwrap();
        for (t, rho) in times.iter().zip(&states) {
            let tbar = t.min(PI);
            let expect = Mat4::from_fn(|a, b| rho0.get(a, b) * cis(-spectrum.omega[a][b] * tbar));
            assert!((rho.rho - expect).max_abs() < 1e-12);
        }
    }

    #[test]
    fn rk4_preserves_trace_and_hermiticity() {
        let schedule = GateSchedule::new(1.0).unwrap();
        let rho0 = initial_state(&InitialState::MixedUp).unwrap();
        let states = rk4_tcl2(&rho0, &[0.3, 1.2 * PI], &high_t(), &schedule, &OracleConfig::default()).unwrap();
        for rho in states {
            assert!(rho.trace_error() < 1e-10);
            assert!(rho.hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn haar_average_on_reference_channels() {
        let spectrum = energies(1.0).unwrap();
        let u = Mat4::diag(spectrum.energies.map(|e| cis(-e * PI)));
        let ideal = conjugation_channel(&u, PI, PI);
        let (mean, err) = haar_average_fidelity(&ideal, &spectrum, 500, 7).unwrap();
        assert!((mean - 1.0).abs() <= 3.0 * err + 1e-12);
        let dep = depolarizing_channel(PI, PI);
        let (mean, err) = haar_average_fidelity(&dep, &spectrum, 500, 7).unwrap();
        assert!((mean - 0.25).abs() <= 3.0 * err + 1e-12);
        assert_eq!(haar_average_fidelity(&dep, &spectrum, 500, 7), haar_average_fidelity(&dep, &spectrum, 500, 7));
        assert!(haar_average_fidelity(&dep, &spectrum, 10, 7).is_err());
    }
}
