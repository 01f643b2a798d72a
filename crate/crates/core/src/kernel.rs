//! Ohmic bath autocorrelation `Γ(t) + iΔ(t)` and its cumulative tables.
//!
//! With spectral density `ηω` up to a sharp cutoff `ω_c`,
//!
//! ```text
//! Γ(t) =  (λ²η/π) ∫₀^{ω_c} ω coth(ω/2T) cos(ωt) dω
//! Δ(t) = −(λ²η/π) ∫₀^{ω_c} ω sin(ωt) dω
//! ```
//!
//! `Δ` has a closed form. `Γ` is integrated with a Filon rule, so the panel count
//! only has to resolve `ω coth(ω/2T)`, never the `cos(ωt)` oscillation.

use rayon::prelude::*;

use crate::algebra::{EnergySpectrum, FreqClass};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{cumulative, filon_cos_by, interpolate};
use crate::scalar::{cis, czero, re, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BathMode {
    /// Finite-temperature kernel by frequency quadrature.
    Exact,
    /// `coth(x) → 1/x` closed form, valid for `k_BT ≫ ω_c/2`.
    HighT,
    /// `2Γ₀δ(t)/τ_s` with the Lamb-shift part dropped.
    Markov,
}

impl BathMode {
    pub fn name(self) -> &'static str {
        match self {
            BathMode::Exact => "exact",
            BathMode::HighT => "high_t",
            BathMode::Markov => "markov",
        }
    }
}

impl std::str::FromStr for BathMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(BathMode::Exact),
            "high_t" => Ok(BathMode::HighT),
            "markov" => Ok(BathMode::Markov),
            other => Err(format!("unknown bath mode `{other}` (expected exact, high_t or markov)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathParams<T: Real> {
    /// Combined coupling `λ²η`.
    pub lambda2_eta: T,
    /// `k_BT` in Kelvin.
    pub temperature: T,
    /// Cutoff `ω_c` in Kelvin.
    pub omega_c: T,
    pub mode: BathMode,
}

impl<T: Real> BathParams<T> {
    pub fn new(lambda2_eta: T, temperature: T, omega_c: T, mode: BathMode) -> Result<Self> {
        let p = Self { lambda2_eta, temperature, omega_c, mode };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > T::zero()) || !self.temperature.is_finite() {
            return Err(invalid("temperature", format!("must be positive, got {}", self.temperature)));
        }
        if !(self.omega_c > T::zero()) || !self.omega_c.is_finite() {
            return Err(invalid("omega_c", format!("must be positive, got {}", self.omega_c)));
        }
        if !(self.lambda2_eta >= T::zero()) || !self.lambda2_eta.is_finite() {
            return Err(invalid("lambda2_eta", format!("must be non-negative, got {}", self.lambda2_eta)));
        }
        Ok(())
    }

    fn prefactor(&self) -> T {
        self.lambda2_eta / T::PI()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KernelSample<T: Real> {
    pub gamma: T,
    pub delta: T,
}

impl<T: Real> KernelSample<T> {
    pub fn as_complex(&self) -> C<T> {
        C::new(self.gamma, self.delta)
    }
}

/// Dimensionless Markov-limit strengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkovConstants<T: Real> {
    /// `Γ₀ = λ²η k_BT τ_s`.
    pub gamma0: T,
    /// `Δ₀ = λ²η ω_c τ_s / π`.
    pub delta0: T,
}

pub fn markov_constants<T: Real>(params: &BathParams<T>, tau_s: T) -> Result<MarkovConstants<T>> {
    if !(tau_s > T::zero()) {
        return Err(invalid("tau_s", format!("must be positive, got {tau_s}")));
    }
    Ok(MarkovConstants {
        gamma0: params.lambda2_eta * params.temperature * tau_s,
        delta0: params.lambda2_eta * params.omega_c * tau_s / T::PI(),
    })
}

const SMALL_ARG: f64 = 1e-3;

/// `Δ(t) = −(λ²η/π)[sin(ω_c t) − ω_c t cos(ω_c t)]/t²`, series below `|ω_c t| = 1e-3`.
pub fn delta_closed_form<T: Real>(t: T, params: &BathParams<T>) -> T {
    let wc = params.omega_c;
    let x = wc * t;
    let inner = if x.abs() < T::lit(SMALL_ARG) {
        wc * wc * wc * t / T::lit(3.0) * (T::one() - x * x / T::lit(10.0))
    } else {
        (x.sin() - x * x.cos()) / (t * t)
    };
    -params.prefactor() * inner
}

/// High-temperature closed form of the kernel.
pub fn kernel_high_t<T: Real>(t: T, params: &BathParams<T>) -> KernelSample<T> {
    let wc = params.omega_c;
    let x = wc * t;
    let sinc = if x.abs() < T::lit(SMALL_ARG) {
        wc * (T::one() - x * x / T::lit(6.0))
    } else {
        x.sin() / t
    };
    KernelSample {
        gamma: T::lit(2.0) * params.prefactor() * params.temperature * sinc,
        delta: delta_closed_form(t, params),
    }
}

/// `ω coth(ω / 2T)`, equal to `2T` at `ω = 0`.
fn thermal_weight<T: Real>(omega: T, temperature: T) -> T {
    let x = omega / (T::lit(2.0) * temperature);
    if x.abs() < T::lit(1e-4) {
        T::lit(2.0) * temperature * (T::one() + x * x / T::lit(3.0))
    } else {
        omega / x.tanh()
    }
}

/// Finite-temperature kernel evaluator with cached frequency samples.
#[derive(Clone, Debug)]
pub struct OhmicKernel<T: Real> {
    params: BathParams<T>,
    /// `ω coth(ω/2T)` on the finest frequency grid.
    weights: Vec<T>,
    finest_panels: usize,
    scale: T,
    tolerance: T,
}

/// Coarsest and finest Filon panel counts tried by the adaptive loop.
const MIN_PANELS: usize = 128;
const MAX_PANELS: usize = 1 << 16;

impl<T: Real> OhmicKernel<T> {
    pub fn new(params: BathParams<T>) -> Result<Self> {
        Self::with_tolerance(params, 1e-10)
    }

    /// `tolerance` bounds the change between successive panel doublings, relative to
    /// `∫₀^{ω_c} |ω coth(ω/2T)| dω`.
    pub fn with_tolerance(params: BathParams<T>, tolerance: f64) -> Result<Self> {
        params.validate()?;
        let h = params.omega_c / T::of_usize(MAX_PANELS);
        let weights: Vec<T> = (0..=MAX_PANELS)
            .map(|k| thermal_weight(h * T::of_usize(k), params.temperature))
            .collect();
        let mut kernel = Self {
            params,
            weights,
            finest_panels: MAX_PANELS,
            scale: T::one(),
            tolerance: T::tolerance(tolerance),
        };
        // ω coth(ω/2T) > 0, so the t = 0 integral is the natural magnitude.
        kernel.scale = kernel.filon(MAX_PANELS, T::zero());
        Ok(kernel)
    }

    pub fn params(&self) -> &BathParams<T> {
        &self.params
    }

    fn filon(&self, panels: usize, t: T) -> T {
        let stride = self.finest_panels / panels;
        let h = self.params.omega_c / T::of_usize(panels);
        filon_cos_by(panels + 1, |k| self.weights[k * stride], T::zero(), h, t)
    }

    /// `∫₀^{ω_c} ω coth(ω/2T) cos(ωt) dω`, doubling panels until two estimates agree.
    fn gamma_integral(&self, t: T) -> Result<T> {
        let mut panels = MIN_PANELS;
        let mut prev = self.filon(panels, t);
        loop {
            panels *= 2;
            let next = self.filon(panels, t);
            let change = (next - prev).abs();
            if change <= self.tolerance * self.scale {
                return Ok(next);
            }
            if panels >= MAX_PANELS {
                return Err(Error::QuadratureNonConvergence {
                    t: t.to_f64().unwrap_or(f64::NAN),
                    change: (change / self.scale).to_f64().unwrap_or(f64::NAN),
                    tolerance: self.tolerance.to_f64().unwrap_or(f64::NAN),
                });
            }
            prev = next;
        }
    }

    pub fn sample(&self, t: T) -> Result<KernelSample<T>> {
        if self.params.lambda2_eta == T::zero() {
            return Ok(KernelSample::default());
        }
        let gamma = self.params.prefactor() * self.gamma_integral(t.abs())?;
        Ok(KernelSample { gamma, delta: delta_closed_form(t, &self.params) })
    }
}

/// Finite-temperature kernel at a single time.
pub fn kernel_exact<T: Real>(t: T, params: &BathParams<T>) -> Result<KernelSample<T>> {
    OhmicKernel::new(*params)?.sample(t)
}

/// Kernel samples on a uniform grid with running integrals.
///
/// For each `ω ∈ {−J₀, 0, +J₀}` the table holds `C_ω(u) = ∫₀ᵘ e^{iωτ}[Γ(τ)+iΔ(τ)] dτ`,
/// plus `D(u) = ∫₀ᵘ C₀(v) dv`. The step divides `τ_s` exactly so that the end of
/// the pulse is a grid node. In Markov mode only the rate `Γ₀/τ_s` is kept.
#[derive(Clone, Debug)]
pub struct BathKernelTable<T: Real> {
    pub params: BathParams<T>,
    pub du: T,
    pub u_max: T,
    pub tau_s: T,
    pub j0: T,
    /// Grid steps per swap time.
    pub steps_per_swap: usize,
    pub gamma: Vec<T>,
    pub delta: Vec<T>,
    cumulative: [Vec<C<T>>; 3],
    second: Vec<C<T>>,
    markov: MarkovConstants<T>,
}

pub const DEFAULT_DU_DIVISOR: usize = 40;

pub fn tabulate_kernel<T: Real>(
    params: &BathParams<T>,
    spectrum: &EnergySpectrum<T>,
    u_max: T,
    du_divisor: usize,
) -> Result<BathKernelTable<T>> {
    params.validate()?;
    if du_divisor < 20 {
        return Err(invalid("kernel_du_divisor", format!("must be at least 20, got {du_divisor}")));
    }
    if !(u_max >= T::zero()) || !u_max.is_finite() {
        return Err(invalid("u_max", format!("must be finite and non-negative, got {u_max}")));
    }
    let tau_s = spectrum.tau_s();
    let target = T::PI() / (T::of_usize(du_divisor) * params.omega_c);
    let steps_per_swap = (tau_s / target).ceil().to_usize().unwrap_or(1).max(1);
    let du = tau_s / T::of_usize(steps_per_swap);
    let markov = markov_constants(params, tau_s)?;

    let mut table = BathKernelTable {
        params: *params,
        du,
        u_max,
        tau_s,
        j0: spectrum.j0,
        steps_per_swap,
        gamma: Vec::new(),
        delta: Vec::new(),
        cumulative: [Vec::new(), Vec::new(), Vec::new()],
        second: Vec::new(),
        markov,
    };
    if params.mode == BathMode::Markov {
        return Ok(table);
    }

    // Nodes 0..=n cover u_max; the extra nodes feed the look-ahead of the two
    // cumulative passes and the interpolation stencils at the horizon.
    let n = (u_max / du).ceil().to_usize().unwrap_or(0).max(4);
    let count = n + 7;
    let samples: Vec<KernelSample<T>> = match params.mode {
        BathMode::Exact => {
            let kernel = OhmicKernel::new(*params)?;
            (0..count)
                .into_par_iter()
                .map(|k| kernel.sample(du * T::of_usize(k)))
                .collect::<Result<_>>()?
        }
        BathMode::HighT => (0..count).map(|k| kernel_high_t(du * T::of_usize(k), params)).collect(),
        BathMode::Markov => unreachable!(),
    };
    table.gamma = samples.iter().map(|s| s.gamma).collect();
    table.delta = samples.iter().map(|s| s.delta).collect();

    for class in FreqClass::ALL {
        let w = class.sign::<T>() * spectrum.j0;
        let g: Vec<C<T>> = samples
            .iter()
            .enumerate()
            .map(|(k, s)| cis(w * du * T::of_usize(k)) * s.as_complex())
            .collect();
        // Γ even and Δ odd make the integrand at −u the conjugate of that at +u.
        table.cumulative[class.index()] = cumulative(&g, [g[2].conj(), g[1].conj()], du);
    }
    let c0 = &table.cumulative[FreqClass::Zero.index()];
    table.second = cumulative(c0, [-c0[2].conj(), -c0[1].conj()], du);
    Ok(table)
}

impl<T: Real> BathKernelTable<T> {
    pub fn mode(&self) -> BathMode {
        self.params.mode
    }

    pub fn markov_constants(&self) -> MarkovConstants<T> {
        self.markov
    }

    /// `Γ₀/τ_s`, the long-time limit of `Re C₀`.
    pub fn markov_rate(&self) -> T {
        self.markov.gamma0 / self.tau_s
    }

    /// Largest time at which the cumulative tables may be read.
    pub fn horizon(&self) -> T {
        match self.mode() {
            BathMode::Markov => T::infinity(),
            _ => self.du * T::of_usize(self.second.len().saturating_sub(1)),
        }
    }

    /// `C_ω` at grid node `k`, with `ω = class·J₀`.
    pub fn cumulative_at(&self, class: FreqClass, k: usize) -> C<T> {
        match self.mode() {
            BathMode::Markov if k == 0 => czero(),
            BathMode::Markov => re(self.markov_rate()),
            _ => self.cumulative[class.index()][k],
        }
    }

    pub fn cumulative_nodes(&self, class: FreqClass) -> &[C<T>] {
        &self.cumulative[class.index()]
    }

    /// `C_ω(u)` at an arbitrary `0 ≤ u ≤ horizon`, by cubic interpolation.
    pub fn cumulative(&self, class: FreqClass, u: T) -> C<T> {
        match self.mode() {
            BathMode::Markov if u <= T::zero() => czero(),
            BathMode::Markov => re(self.markov_rate()),
            _ => interpolate(&self.cumulative[class.index()], u / self.du),
        }
    }

    /// `D(u) = ∫₀ᵘ C₀`.
    pub fn second(&self, u: T) -> C<T> {
        match self.mode() {
            BathMode::Markov => re(self.markov_rate() * u.max(T::zero())),
            _ => interpolate(&self.second, u / self.du),
        }
    }

    pub fn second_nodes(&self) -> &[C<T>] {
        &self.second
    }

    /// Kernel samples `(u_k, Γ, Δ)` for `u_k ≤ u_max`.
    pub fn samples(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        let n = (self.u_max / self.du).floor().to_usize().unwrap_or(0) + 1;
        (0..n.min(self.gamma.len())).map(move |k| (self.du * T::of_usize(k), self.gamma[k], self.delta[k]))
    }
}
