//! Flat `key = value` scenario files.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use tclgate::{BathMode, BathParams, Complex, InitialState, Mat4, DEFAULT_DU_DIVISOR};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    MixedUp,
    Singlet,
    Custom,
}

impl StateKind {
    fn name(self) -> &'static str {
        match self {
            StateKind::MixedUp => "mixed_up",
            StateKind::Singlet => "singlet",
            StateKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// Exchange energy, Kelvin.
    pub j0: f64,
    pub lambda2_eta: f64,
    /// k_B T, Kelvin.
    pub temperature: f64,
    /// Cutoff frequency, Kelvin.
    pub omega_c: f64,
    /// Final time in units of the swap time.
    pub t_max: f64,
    pub n_points: usize,
    pub bath_mode: BathMode,
    pub initial_state: StateKind,
    /// Row-major multiplet-basis entries; required iff `initial_state = custom`.
    pub custom_state: Option<[Complex; 16]>,
    pub output_path: PathBuf,
    pub kernel_du_divisor: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            j0: 1.0,
            lambda2_eta: 1.8e-5,
            temperature: 300.0,
            omega_c: 400.0,
            t_max: 4.0,
            n_points: 400,
            bath_mode: BathMode::Exact,
            initial_state: StateKind::MixedUp,
            custom_state: None,
            output_path: PathBuf::from("tclgate.csv"),
            kernel_du_divisor: DEFAULT_DU_DIVISOR,
            seed: 0,
        }
    }
}

pub const KEYS: [&str; 12] = [
    "j0",
    "lambda2_eta",
    "temperature",
    "omega_c",
    "t_max",
    "n_points",
    "bath_mode",
    "initial_state",
    "custom_state",
    "output_path",
    "kernel_du_divisor",
    "seed",
];

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::config(key, format!("cannot parse `{value}` as a number")))
}

/// Parses `re+imi`, `re-imi`, or a bare real.
pub fn parse_complex(s: &str) -> Option<Complex> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = body[..split].parse().ok()?;
    let im = body[split..].trim_start_matches('+').parse().ok()?;
    Some(Complex::new(re, im))
}

fn format_complex(c: Complex) -> String {
    if c.im.is_sign_negative() {
        format!("{:?}{:?}i", c.re, c.im)
    } else {
        format!("{:?}+{:?}i", c.re, c.im)
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(line, format!("line {}: expected `key = value`", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(CliError::config(key, "given more than once"));
            }
            seen.push(key.to_string());
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "j0" => self.j0 = number(key, value)?,
            "lambda2_eta" => self.lambda2_eta = number(key, value)?,
            "temperature" => self.temperature = number(key, value)?,
            "omega_c" => self.omega_c = number(key, value)?,
            "t_max" => self.t_max = number(key, value)?,
            "n_points" => self.n_points = number(key, value)?,
            "kernel_du_divisor" => self.kernel_du_divisor = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "output_path" => self.output_path = PathBuf::from(value),
            "bath_mode" => {
                self.bath_mode = value
                    .parse()
                    .map_err(|_| CliError::config(key, format!("`{value}` is not one of exact, high_t, markov")))?
            }
            "initial_state" => {
                self.initial_state = match value {
                    "mixed_up" => StateKind::MixedUp,
                    "singlet" => StateKind::Singlet,
                    "custom" => StateKind::Custom,
                    _ => return Err(CliError::config(key, format!("`{value}` is not one of mixed_up, singlet, custom"))),
                }
            }
            "custom_state" => {
                let entries: Vec<&str> = value.split([',', ' ', '\t']).filter(|s| !s.is_empty()).collect();
                if entries.len() != 16 {
                    return Err(CliError::config(key, format!("expected 16 complex entries, got {}", entries.len())));
                }
                let mut out = [Complex::new(0.0, 0.0); 16];
                for (slot, e) in out.iter_mut().zip(entries) {
                    *slot = parse_complex(e).ok_or_else(|| CliError::config(key, format!("cannot parse `{e}` as re+imi")))?;
                }
                self.custom_state = Some(out);
            }
            _ => return Err(CliError::config(key, format!("unknown key; expected one of {}", KEYS.join(", ")))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_points < 2 {
            return Err(CliError::config("n_points", format!("must be at least 2, got {}", self.n_points)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(CliError::config("t_max", format!("must be positive, got {}", self.t_max)));
        }
        if self.kernel_du_divisor < 20 {
            return Err(CliError::config("kernel_du_divisor", format!("must be at least 20, got {}", self.kernel_du_divisor)));
        }
        if !(self.j0 > 0.0 && self.j0.is_finite()) {
            return Err(CliError::config("j0", format!("must be positive, got {}", self.j0)));
        }
        self.bath_params()?;
        match (self.initial_state, &self.custom_state) {
            (StateKind::Custom, None) => Err(CliError::config("custom_state", "required when initial_state = custom")),
            (StateKind::MixedUp | StateKind::Singlet, Some(_)) => {
                Err(CliError::config("custom_state", "only allowed when initial_state = custom"))
            }
            _ => {
                self.initial()?;
                Ok(())
            }
        }
    }

    pub fn bath_params(&self) -> Result<BathParams, CliError> {
        BathParams::new(self.lambda2_eta, self.temperature, self.omega_c, self.bath_mode).map_err(CliError::from)
    }

    pub fn initial(&self) -> Result<tclgate::DensityMatrix, CliError> {
        let kind = match self.initial_state {
            StateKind::MixedUp => InitialState::MixedUp,
            StateKind::Singlet => InitialState::Singlet,
            StateKind::Custom => {
                let entries = self.custom_state.ok_or_else(|| CliError::config("custom_state", "missing"))?;
                InitialState::Custom(Mat4::from_fn(|i, j| entries[4 * i + j]))
            }
        };
        tclgate::initial_state(&kind).map_err(|e| CliError::config("custom_state", e.to_string()))
    }

    /// Every key with its effective value; parses back to an equal config.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "j0 = {:?}", self.j0);
        let _ = writeln!(out, "lambda2_eta = {:?}", self.lambda2_eta);
        let _ = writeln!(out, "temperature = {:?}", self.temperature);
        let _ = writeln!(out, "omega_c = {:?}", self.omega_c);
        let _ = writeln!(out, "t_max = {:?}", self.t_max);
        let _ = writeln!(out, "n_points = {}", self.n_points);
        let _ = writeln!(out, "bath_mode = {}", self.bath_mode.name());
        let _ = writeln!(out, "initial_state = {}", self.initial_state.name());
        if let Some(entries) = &self.custom_state {
            let joined: Vec<String> = entries.iter().map(|&c| format_complex(c)).collect();
            let _ = writeln!(out, "custom_state = {}", joined.join(", "));
        }
        let _ = writeln!(out, "output_path = {}", self.output_path.display());
        let _ = writeln!(out, "kernel_du_divisor = {}", self.kernel_du_divisor);
        let _ = writeln!(out, "seed = {}", self.seed);
        out
    }
}
