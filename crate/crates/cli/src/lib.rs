//! Scenario runner behind the `tclgate` binary.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use tclgate::kernel::{kernel_high_t, OhmicKernel};
use tclgate::{BathMode, ObservableRecord, Propagator};

pub use config::ScenarioConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(tclgate::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { key: key.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<tclgate::Error> for CliError {
    fn from(e: tclgate::Error) -> Self {
        use tclgate::Error as E;
        match e {
            E::InvalidParameter { name, reason } => CliError::config(name, reason),
            E::InvalidState(msg) => CliError::config("custom_state", msg),
            E::UnsupportedMode { .. } => CliError::config("bath_mode", e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    ScenarioConfig::parse(&text)
}

/// Evenly spaced times over `[0, t_max·τ_s]`.
pub fn time_grid(cfg: &ScenarioConfig, tau_s: f64) -> Vec<f64> {
    let end = cfg.t_max * tau_s;
    let last = (cfg.n_points - 1) as f64;
    (0..cfg.n_points).map(|k| if k == cfg.n_points - 1 { end } else { end * k as f64 / last }).collect()
}

pub fn simulate(cfg: &ScenarioConfig) -> Result<Vec<ObservableRecord>, CliError> {
    let params = cfg.bath_params()?;
    let rho0 = cfg.initial()?;
    let psi0 = rho0.pure_state();
    let tau_s = tclgate::energies(cfg.j0)?.tau_s();
    let prop = Propagator::new(&params, cfg.j0, cfg.t_max * tau_s, cfg.kernel_du_divisor)?;
    let times = time_grid(cfg, tau_s);
    let series = prop.evolve_series(&times, &rho0)?;
    series
        .iter()
        .map(|pt| ObservableRecord::from_point(pt, psi0.as_ref(), &prop.spectrum, &prop.schedule).map_err(CliError::from))
        .collect()
}

/// Observables at exactly `t = τ_s`.
pub fn at_swap_time(cfg: &ScenarioConfig) -> Result<ObservableRecord, CliError> {
    let params = cfg.bath_params()?;
    let rho0 = cfg.initial()?;
    let psi0 = rho0.pure_state();
    let tau_s = tclgate::energies(cfg.j0)?.tau_s();
    let prop = Propagator::new(&params, cfg.j0, tau_s, cfg.kernel_du_divisor)?;
    let point = prop.evolve_series(&[tau_s], &rho0)?.remove(0);
    Ok(ObservableRecord::from_point(&point, psi0.as_ref(), &prop.spectrum, &prop.schedule)?)
}

pub fn run(cfg: &ScenarioConfig, output: Option<&Path>) -> Result<PathBuf, CliError> {
    let path = output.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_path.clone());
    let records = simulate(cfg)?;
    write_file(&path, &output::records_csv(&records))?;
    Ok(path)
}

pub const SWEEP_PARAMS: [&str; 4] = ["lambda2_eta", "temperature", "omega_c", "j0"];

/// `{stem}_{param}_{k}.csv` for each value and `{stem}_{param}_summary.csv`.
pub fn sweep(cfg: &ScenarioConfig, param: &str, values: &[f64]) -> Result<Vec<PathBuf>, CliError> {
    if !SWEEP_PARAMS.contains(&param) {
        return Err(CliError::config(
            "param",
            format!("`{param}` cannot be swept; expected one of {}", SWEEP_PARAMS.join(", ")),
        ));
    }
    if values.is_empty() {
        return Err(CliError::config("values", "at least one value is required"));
    }
    let stem = cfg.output_path.with_extension("");
    let dir_stem = stem.to_string_lossy().into_owned();
    let mut written = Vec::new();
    let mut summary = Vec::new();
    for (k, &value) in values.iter().enumerate() {
        let mut point = cfg.clone();
        point.set(param, &format!("{value:?}"))?;
        point.validate()?;
        let path = PathBuf::from(format!("{dir_stem}_{param}_{k}.csv"));
        written.push(run(&point, Some(&path))?);
        summary.push((value, at_swap_time(&point)?));
    }
    let path = PathBuf::from(format!("{dir_stem}_{param}_summary.csv"));
    write_file(&path, &output::summary_csv(&summary))?;
    written.push(path);
    Ok(written)
}

/// Samples `(u, Γ, Δ)` on `n` evenly spaced points over `[0, t_max·τ_s]`.
pub fn kernel(cfg: &ScenarioConfig, t_max: f64, n: usize, output: Option<&Path>) -> Result<PathBuf, CliError> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::config("t-max", format!("must be positive, got {t_max}")));
    }
    if n < 2 {
        return Err(CliError::config("points", format!("must be at least 2, got {n}")));
    }
    let params = cfg.bath_params()?;
    let end = t_max * tclgate::energies(cfg.j0)?.tau_s();
    let us: Vec<f64> = (0..n).map(|k| end * k as f64 / (n - 1) as f64).collect();
    let rows: Vec<(f64, f64, f64)> = match params.mode {
        BathMode::Exact => {
            let kernel = OhmicKernel::new(params)?;
            us.iter()
                .map(|&u| kernel.sample(u).map(|s| (u, s.gamma, s.delta)))
                .collect::<Result<_, _>>()?
        }
        BathMode::HighT => us
            .iter()
            .map(|&u| {
                let s = kernel_high_t(u, &params);
                (u, s.gamma, s.delta)
            })
            .collect(),
        BathMode::Markov => {
            return Err(CliError::config("bath_mode", "the markov kernel is a delta function and has no samples"))
        }
    };
    let path = output.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_path.clone());
    write_file(&path, &output::kernel_csv(&rows))?;
    Ok(path)
}

pub fn dump_config(cfg: &ScenarioConfig, path: &Path) -> Result<(), CliError> {
    write_file(path, &cfg.dump())
}
