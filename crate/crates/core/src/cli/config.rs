//! Flat `key = value` run configuration.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// File name, or `--set` for command-line overrides.
    pub origin: String,
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn new(message: impl Into<String>) -> Self {
        Self {
            origin: String::new(),
            line: None,
            key: None,
            message: message.into(),
        }
    }

    fn at(mut self, origin: &str, line: Option<usize>) -> Self {
        self.origin = origin.to_string();
        self.line = line;
        self
    }

    pub(crate) fn for_key(key: &str, message: impl Into<String>) -> Self {
        Self {
            key: Some(key.to_string()),
            ..Self::new(message)
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.origin.is_empty() {
            write!(f, "{}", self.origin)?;
            if let Some(line) = self.line {
                write!(f, ":{line}")?;
            }
            write!(f, ": ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [&'static str] = &[$($text),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!("expected one of {}", Self::ALL.join(", "))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Family {
    ClassicalWave => "classical_wave",
    Electromagnetic => "electromagnetic",
    KleinGordon => "klein_gordon",
    SchrodingerFree => "schrodinger_free",
    SchrodingerPotential => "schrodinger_potential",
});

keyword_enum!(PotentialKind {
    None => "none",
    Constant => "constant",
    Harmonic => "harmonic",
});

keyword_enum!(Scheme {
    Spectral => "spectral",
    SplitStep => "split_step",
    CrankNicolson => "crank_nicolson",
});

keyword_enum!(Initial {
    Gaussian => "gaussian",
    Mode => "mode",
    Ground => "ground",
    Random => "random",
});

keyword_enum!(Branch {
    Positive => "positive",
    Rest => "rest",
});

/// Every tunable of every subcommand. Each command reads the keys it needs
/// and ignores the rest, but all of them are echoed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub family: Family,
    pub m: f64,
    pub v: f64,
    pub hbar: f64,
    pub c: f64,
    pub n_points: usize,
    pub length: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub snapshot_every: usize,
    pub initial: Initial,
    pub branch: Branch,
    pub x0: f64,
    pub k0: f64,
    pub sigma: f64,
    pub potential: PotentialKind,
    pub v0: f64,
    pub omega_c: f64,
    pub x_c: f64,
    pub scheme: Scheme,
    pub seed: u64,
    pub k_start: f64,
    pub k_stop: f64,
    pub k_count: usize,
    pub c_ladder: Vec<f64>,
    pub tau: f64,
    pub max_iters: usize,
    pub energy_tol: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub golden_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: "default".to_string(),
            family: Family::SchrodingerFree,
            m: 1.0,
            v: 1.0,
            hbar: 1.0,
            c: 1.0,
            n_points: 512,
            length: 64.0,
            dt: 0.01,
            n_steps: 100,
            snapshot_every: 10,
            initial: Initial::Gaussian,
            branch: Branch::Positive,
            x0: 32.0,
            k0: 1.0,
            sigma: 2.0,
            potential: PotentialKind::None,
            v0: 0.0,
            omega_c: 1.0,
            x_c: 32.0,
            scheme: Scheme::SplitStep,
            seed: 0,
            k_start: 0.0,
            k_stop: 8.0,
            k_count: 9,
            c_ladder: vec![10.0, 20.0, 40.0],
            tau: 0.005,
            max_iters: 200_000,
            energy_tol: 1e-12,
            bracket_lo: 0.1,
            bracket_hi: 10.0,
            golden_tol: 1e-10,
        }
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| ConfigError::for_key(key, format!("cannot parse `{raw}`: {e}")))
}

fn parse_list(key: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .map(|item| parse_value::<f64>(key, item.trim()))
        .collect()
}

impl RunConfig {
    pub const KEYS: &'static [&'static str] = &[
        "scenario",
        "family",
        "m",
        "v",
        "hbar",
        "c",
        "n_points",
        "length",
        "dt",
        "n_steps",
        "snapshot_every",
        "initial",
        "branch",
        "x0",
        "k0",
        "sigma",
        "potential",
        "v0",
        "omega_c",
        "x_c",
        "scheme",
        "seed",
        "k_start",
        "k_stop",
        "k_count",
        "c_ladder",
        "tau",
        "max_iters",
        "energy_tol",
        "bracket_lo",
        "bracket_hi",
        "golden_tol",
    ];

    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), ConfigError> {
        let raw = raw.trim();
        match key {
            "scenario" => {
                if raw.is_empty() || raw.contains(char::is_whitespace) {
                    return Err(ConfigError::for_key(key, "must be a single non-empty word"));
                }
                self.scenario = raw.to_string();
            }
            "family" => self.family = parse_value(key, raw)?,
            "m" => self.m = parse_value(key, raw)?,
            "v" => self.v = parse_value(key, raw)?,
            "hbar" => self.hbar = parse_value(key, raw)?,
            "c" => self.c = parse_value(key, raw)?,
            "n_points" => self.n_points = parse_value(key, raw)?,
            "length" => self.length = parse_value(key, raw)?,
            "dt" => self.dt = parse_value(key, raw)?,
            "n_steps" => self.n_steps = parse_value(key, raw)?,
            "snapshot_every" => self.snapshot_every = parse_value(key, raw)?,
            "initial" => self.initial = parse_value(key, raw)?,
            "branch" => self.branch = parse_value(key, raw)?,
            "x0" => self.x0 = parse_value(key, raw)?,
            "k0" => self.k0 = parse_value(key, raw)?,
            "sigma" => self.sigma = parse_value(key, raw)?,
            "potential" => self.potential = parse_value(key, raw)?,
            "v0" => self.v0 = parse_value(key, raw)?,
            "omega_c" => self.omega_c = parse_value(key, raw)?,
            "x_c" => self.x_c = parse_value(key, raw)?,
            "scheme" => self.scheme = parse_value(key, raw)?,
            "seed" => self.seed = parse_value(key, raw)?,
            "k_start" => self.k_start = parse_value(key, raw)?,
            "k_stop" => self.k_stop = parse_value(key, raw)?,
            "k_count" => self.k_count = parse_value(key, raw)?,
            "c_ladder" => self.c_ladder = parse_list(key, raw)?,
            "tau" => self.tau = parse_value(key, raw)?,
            "max_iters" => self.max_iters = parse_value(key, raw)?,
            "energy_tol" => self.energy_tol = parse_value(key, raw)?,
            "bracket_lo" => self.bracket_lo = parse_value(key, raw)?,
            "bracket_hi" => self.bracket_hi = parse_value(key, raw)?,
            "golden_tol" => self.golden_tol = parse_value(key, raw)?,
            _ => return Err(ConfigError::for_key(key, "unknown key")),
        }
        Ok(())
    }

    /// Current value of `key` in the same syntax [`RunConfig::set`] accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "scenario" => self.scenario.clone(),
            "family" => self.family.to_string(),
            "m" => fmt_f64(self.m),
            "v" => fmt_f64(self.v),
            "hbar" => fmt_f64(self.hbar),
            "c" => fmt_f64(self.c),
            "n_points" => self.n_points.to_string(),
            "length" => fmt_f64(self.length),
            "dt" => fmt_f64(self.dt),
            "n_steps" => self.n_steps.to_string(),
            "snapshot_every" => self.snapshot_every.to_string(),
            "initial" => self.initial.to_string(),
            "branch" => self.branch.to_string(),
            "x0" => fmt_f64(self.x0),
            "k0" => fmt_f64(self.k0),
            "sigma" => fmt_f64(self.sigma),
            "potential" => self.potential.to_string(),
            "v0" => fmt_f64(self.v0),
            "omega_c" => fmt_f64(self.omega_c),
            "x_c" => fmt_f64(self.x_c),
            "scheme" => self.scheme.to_string(),
            "seed" => self.seed.to_string(),
            "k_start" => fmt_f64(self.k_start),
            "k_stop" => fmt_f64(self.k_stop),
            "k_count" => self.k_count.to_string(),
            "c_ladder" => self
                .c_ladder
                .iter()
                .map(|&c| fmt_f64(c))
                .collect::<Vec<_>>()
                .join(","),
            "tau" => fmt_f64(self.tau),
            "max_iters" => self.max_iters.to_string(),
            "energy_tol" => fmt_f64(self.energy_tol),
            "bracket_lo" => fmt_f64(self.bracket_lo),
            "bracket_hi" => fmt_f64(self.bracket_hi),
            "golden_tol" => fmt_f64(self.golden_tol),
            _ => return None,
        })
    }

    /// Applies `key = value` lines; `#` starts a comment, blank lines are
    /// skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (idx, line) in text.lines().enumerate() {
            let line_no = Some(idx + 1);
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::new(format!("expected `key = value`, got `{content}`"))
                    .at(origin, line_no)
            })?;
            self.set(key.trim(), value)
                .map_err(|e| e.at(origin, line_no))?;
        }
        Ok(())
    }

    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            ConfigError::new(format!("expected `key=value`, got `{assignment}`")).at("--set", None)
        })?;
        self.set(key.trim(), value).map_err(|e| e.at("--set", None))
    }

    pub fn load(
        path: Option<&Path>,
        overrides: &[String],
        seed: Option<u64>,
    ) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Some(path) = path {
            let origin = path.display().to_string();
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new(format!("cannot read: {e}")).at(&origin, None))?;
            cfg.apply_text(&text, &origin)?;
        }
        for assignment in overrides {
            cfg.apply_override(assignment)?;
        }
        if let Some(seed) = seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    /// Effective configuration with every key spelled out; feeding it back
    /// through [`RunConfig::apply_text`] reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in Self::KEYS {
            let value = self.get(key).expect("every listed key has a value");
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}
