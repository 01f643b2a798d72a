//! Acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always appear in `cargo test`
//! output. Exits non-zero on failure only when `ACCEPTANCE_STRICT=1`, so a red
//! criterion does not stop cargo from running the remaining test targets.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use tclgate::algebra::{Dot, SINGLET};
use tclgate::kernel::{kernel_exact, kernel_high_t};
use tclgate::observables::{conjugation_channel, depolarizing_channel, polarization};
use tclgate::oracle::{p_bruteforce, rk4_tcl2, OracleConfig};
use tclgate::{
    apply, energies, gate_fidelity, gate_purity, initial_state, von_neumann_entropy, BathMode, BathParams,
    DensityMatrix, FreqClass, GateSchedule, InitialState, Mat4, ObservableRecord, Propagator, DEFAULT_DU_DIVISOR,
};

const LAMBDA2_ETA: f64 = 1.8e-5;
const TEMPERATURE: f64 = 300.0;
const OMEGA_C: f64 = 400.0;
const J0: f64 = 1.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn baseline(mode: BathMode) -> BathParams {
    BathParams::new(LAMBDA2_ETA, TEMPERATURE, OMEGA_C, mode).unwrap()
}

fn linspace(end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect()
}

fn records(prop: &Propagator, times: &[f64], kind: InitialState<f64>) -> tclgate::Result<Vec<ObservableRecord>> {
    let rho0 = initial_state(&kind)?;
    let psi0 = rho0.pure_state();
    prop.evolve_series(times, &rho0)?
        .iter()
        .map(|pt| ObservableRecord::from_point(pt, psi0.as_ref(), &prop.spectrum, &prop.schedule))
        .collect()
}

fn within(elapsed: Duration, limit: f64) -> (bool, String) {
    let secs = elapsed.as_secs_f64();
    (secs < limit, format!("{secs:.2}s (limit {limit}s)"))
}

fn criterion_1() -> tclgate::Result<Outcome> {
    let start = Instant::now();
    let params = BathParams::new(0.0, TEMPERATURE, OMEGA_C, BathMode::Exact)?;
    let prop = Propagator::new(&params, J0, PI, DEFAULT_DU_DIVISOR)?;
    let rec = &records(&prop, &[PI], InitialState::MixedUp)?[0];
    let errs = [(rec.s1 - 1.0).abs(), rec.s2.abs(), (rec.gate_fidelity - 1.0).abs(), (rec.gate_purity - 1.0).abs()];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    let (fast, time) = within(start.elapsed(), 1.0);
    Ok(Outcome { pass: worst < 1e-10 && fast, detail: format!("max deviation {worst:.2e}, {time}") })
}

fn criterion_2() -> tclgate::Result<Outcome> {
    let start = Instant::now();
    let prop = Propagator::new(&baseline(BathMode::Exact), J0, 4.0 * PI, DEFAULT_DU_DIVISOR)?;
    let recs = records(&prop, &linspace(4.0 * PI, 400), InitialState::MixedUp)?;
    let tr = recs.iter().map(|r| r.trace_error).fold(0.0, f64::max);
    let herm = recs.iter().map(|r| r.herm_error).fold(0.0, f64::max);
    let (fast, time) = within(start.elapsed(), 60.0);
    Ok(Outcome {
        pass: tr < 1e-8 && herm < 1e-10 && fast,
        detail: format!("max trace error {tr:.2e}, max herm error {herm:.2e}, {time}"),
    })
}

fn criterion_3() -> tclgate::Result<Outcome> {
    let up: f64 = von_neumann_entropy(&initial_state(&InitialState::MixedUp)?)?;
    let singlet: f64 = von_neumann_entropy(&initial_state(&InitialState::Singlet)?)?;
    let mixed = von_neumann_entropy(&DensityMatrix::new(Mat4::real_diag([0.25; 4]))?)?;
    let worst = [(up - 1.0).abs(), singlet.abs(), (mixed - 2.0).abs()].into_iter().fold(0.0, f64::max);
    Ok(Outcome { pass: worst < 1e-9, detail: format!("{up:.9} / {singlet:.9} / {mixed:.9} bits") })
}

fn criterion_4() -> tclgate::Result<Outcome> {
    let spectrum = energies(J0)?;
    let u = Mat4::diag(spectrum.energies.map(|e| tclgate::Complex::from_polar(1.0, -e * PI)));
    let ideal = conjugation_channel(&u, PI, PI);
    let dep = depolarizing_channel(PI, PI);
    let worst = [
        (gate_fidelity(&ideal, &spectrum) - 1.0).abs(),
        (gate_purity(&ideal) - 1.0).abs(),
        (gate_fidelity(&dep, &spectrum) - 0.25).abs(),
        (gate_purity(&dep) - 0.25).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(Outcome { pass: worst < 1e-12, detail: format!("max deviation {worst:.2e}") })
}

fn criterion_5() -> tclgate::Result<Outcome> {
    let start = Instant::now();
    let params = baseline(BathMode::Exact);
    let t = 2.0 * PI;
    let prop = Propagator::new(&params, J0, t, DEFAULT_DU_DIVISOR)?;
    let fast = prop.p_tensor(t)?;
    let brute = p_bruteforce(t, &params, &prop.schedule, &OracleConfig::default())?;
    let mut worst: f64 = 0.0;
    for a in FreqClass::ALL {
        for b in FreqClass::ALL {
            let (x, y) = (fast.canonical(a, b), brute.canonical(a, b));
            worst = worst.max((x - y).norm() / y.norm());
        }
    }
    let (quick, time) = within(start.elapsed(), 30.0);
    Ok(Outcome { pass: worst < 1e-6 && quick, detail: format!("max relative error {worst:.2e}, {time}") })
}

fn criterion_6() -> tclgate::Result<Outcome> {
    let start = Instant::now();
    let params = baseline(BathMode::Exact);
    let schedule = GateSchedule::new(J0)?;
    let gamma0 = tclgate::kernel::markov_constants(&params, schedule.tau_s)?.gamma0;
    let times: Vec<f64> = (1..=16).map(|k| k as f64 * PI / 4.0).collect();
    let rho0 = initial_state(&InitialState::MixedUp)?;
    let prop = Propagator::new(&params, J0, 4.0 * PI, DEFAULT_DU_DIVISOR)?;
    let series = prop.evolve_series(&times, &rho0)?;
    let oracle = rk4_tcl2(&rho0, &times, &params, &schedule, &OracleConfig::default())?;
    let mut worst_ratio: f64 = 0.0;
    let mut smallest: f64 = f64::INFINITY;
    for ((t, pt), rk) in times.iter().zip(&series).zip(&oracle) {
        let dev = (pt.state.rho - rk.rho).max_abs();
        let bound = 5.0 * (gamma0 * t / schedule.tau_s).powi(2);
        worst_ratio = worst_ratio.max(dev / bound);
        smallest = smallest.min(dev);
    }
    let (quick, time) = within(start.elapsed(), 120.0);
    Ok(Outcome {
        pass: worst_ratio < 1.0 && smallest > 0.0 && quick,
        detail: format!("max deviation/bound {worst_ratio:.3}, min deviation {smallest:.2e}, {time}"),
    })
}

fn criterion_7() -> tclgate::Result<Outcome> {
    let couplings = [0.5e-5, 1.8e-5, 3.0e-5];
    let mut degradations = Vec::new();
    for &lambda2_eta in &couplings {
        let params = BathParams::new(lambda2_eta, TEMPERATURE, OMEGA_C, BathMode::Exact)?;
        let prop = Propagator::new(&params, J0, PI, DEFAULT_DU_DIVISOR)?;
        let rec = records(&prop, &[PI], InitialState::MixedUp)?[0];
        degradations.push([1.0 - rec.s1, 1.0 - rec.gate_fidelity, 1.0 - rec.gate_purity]);
    }
    let mut worst: f64 = 0.0;
    for q in 0..3 {
        let sxy: f64 = couplings.iter().zip(&degradations).map(|(x, d)| x * d[q]).sum();
        let sxx: f64 = couplings.iter().map(|x| x * x).sum();
        let slope = sxy / sxx;
        for (x, d) in couplings.iter().zip(&degradations) {
            worst = worst.max((d[q] - slope * x).abs() / (slope * x));
        }
    }
    Ok(Outcome { pass: worst < 0.05, detail: format!("max deviation from proportional fit {:.3}%", worst * 100.0) })
}

fn criterion_8() -> tclgate::Result<Outcome> {
    let markov = Propagator::new(&baseline(BathMode::Markov), J0, 4.0 * PI, DEFAULT_DU_DIVISOR)?;
    let exact = Propagator::new(&baseline(BathMode::Exact), J0, 4.0 * PI, DEFAULT_DU_DIVISOR)?;
    let rate = markov.table.markov_rate();
    let mut analytic_exact = true;
    for t in linspace(4.0 * PI, 41) {
        let v = markov.p_tensor(t)?.canonical(FreqClass::Zero, FreqClass::Zero);
        analytic_exact &= v.re == rate * t && v.im == 0.0;
    }
    let mut worst_re: f64 = 0.0;
    let mut worst_complex: f64 = 0.0;
    for t in [PI, 1.5 * PI, 2.0 * PI, 3.0 * PI, 4.0 * PI] {
        let m = markov.p_tensor(t)?.canonical(FreqClass::Zero, FreqClass::Zero);
        let e = exact.p_tensor(t)?.canonical(FreqClass::Zero, FreqClass::Zero);
        worst_re = worst_re.max((e.re - m.re).abs() / m.re);
        worst_complex = worst_complex.max((e - m).norm() / m.norm());
    }
    Ok(Outcome {
        pass: analytic_exact && worst_re < 0.10,
        detail: format!(
            "markov p = (Γ0/τs)t exact: {analytic_exact}; exact vs markov real part max rel dev {:.2}% (with Lamb-shift imaginary part: {:.1}%)",
            worst_re * 100.0,
            worst_complex * 100.0
        ),
    })
}

/// Pointwise relative error of the high-T form on `[0, 0.1]` where `|Γ| > 1%` of `Γ(0)`.
fn high_t_error(temperature: f64) -> tclgate::Result<(f64, f64)> {
    let params = BathParams::new(LAMBDA2_ETA, temperature, OMEGA_C, BathMode::Exact)?;
    let kernel = tclgate::kernel::OhmicKernel::new(params)?;
    let peak = kernel.sample(0.0)?.gamma;
    let mut pointwise: f64 = 0.0;
    let mut peak_relative: f64 = 0.0;
    for k in 0..=4000 {
        let t = 0.1 * k as f64 / 4000.0;
        let exact = kernel.sample(t)?.gamma;
        let approx = kernel_high_t(t, &params).gamma;
        peak_relative = peak_relative.max((approx - exact).abs() / peak);
        if exact.abs() > 0.01 * peak {
            pointwise = pointwise.max((approx - exact).abs() / exact.abs());
        }
    }
    Ok((pointwise, peak_relative))
}

fn criterion_9() -> tclgate::Result<Outcome> {
    let (hot, hot_peak) = high_t_error(4000.0)?;
    let (baseline_t, baseline_peak) = high_t_error(TEMPERATURE)?;
    debug_assert!(kernel_exact(0.0, &baseline(BathMode::Exact))?.delta == 0.0);
    Ok(Outcome {
        pass: hot < 2e-3 && baseline_t < 0.06,
        detail: format!(
            "masked pointwise rel err {:.3}% at 4000 K (limit 0.2%), {:.1}% at 300 K (limit 6%); relative to Γ(0): {:.2e}, {:.2e}",
            hot * 100.0,
            baseline_t * 100.0,
            hot_peak,
            baseline_peak
        ),
    })
}

fn monotone(values: impl Iterator<Item = f64>, increasing: bool, slack: f64) -> (bool, f64) {
    let v: Vec<f64> = values.collect();
    let worst = v
        .windows(2)
        .map(|w| if increasing { w[0] - w[1] } else { w[1] - w[0] })
        .fold(f64::NEG_INFINITY, f64::max);
    (worst <= slack, worst)
}

fn criterion_10() -> tclgate::Result<Outcome> {
    let prop = Propagator::new(&baseline(BathMode::Exact), J0, 4.0 * PI, DEFAULT_DU_DIVISOR)?;
    let mut times = linspace(4.0 * PI, 400);
    times.push(PI);
    times.sort_by(f64::total_cmp);
    let up = records(&prop, &times, InitialState::MixedUp)?;
    let singlet_rho0 = initial_state(&InitialState::Singlet)?;
    let singlet = prop.evolve_series(&times, &singlet_rho0)?;
    let singlet_recs = records(&prop, &times, InitialState::Singlet)?;

    let s1_swap = up.iter().find(|r| r.t == PI).map(|r| r.s1).unwrap();
    let slack = 1e-6;
    let checks = [
        ("s1 after swap", monotone(up.iter().filter(|r| r.t >= PI).map(|r| r.s1), false, slack)),
        ("F", monotone(up.iter().map(|r| r.gate_fidelity), false, slack)),
        ("P", monotone(up.iter().map(|r| r.gate_purity), false, slack)),
        ("rho44", monotone(singlet.iter().map(|p| p.state.get(SINGLET, SINGLET).re), false, slack)),
        ("entropy (mixed_up)", monotone(up.iter().map(|r| r.entropy_bits), true, slack)),
        ("entropy (singlet)", monotone(singlet_recs.iter().map(|r| r.entropy_bits), true, slack)),
    ];
    let mut pass = s1_swap > 0.9 && s1_swap < 1.0;
    let mut detail = format!("s1(τs) = {s1_swap:.6}");
    for (name, (ok, worst)) in checks {
        pass &= ok;
        detail.push_str(&format!("; {name} {} (worst step {worst:.1e})", if ok { "ok" } else { "violated" }));
    }
    // Sanity: the swapped polarization is carried by dot 1.
    let swapped = apply(&prop.superop(PI)?, &initial_state(&InitialState::MixedUp)?)?;
    pass &= (polarization(&swapped, Dot::First) - s1_swap).abs() < 1e-15;
    Ok(Outcome { pass, detail })
}

type Check = fn() -> tclgate::Result<Outcome>;

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("unitary-limit swap", criterion_1),
        ("trace/Hermiticity preservation", criterion_2),
        ("entropy anchors", criterion_3),
        ("closed-form channel values", criterion_4),
        ("p-tensor oracle equivalence", criterion_5),
        ("dynamics oracle equivalence", criterion_6),
        ("linear coupling scaling", criterion_7),
        ("Markov-limit linearity", criterion_8),
        ("high-T kernel", criterion_9),
        ("qualitative swap dynamics", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        if !outcome.pass {
            failures += 1;
        }
        println!("{} criterion {}: {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, i + 1, outcome.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
