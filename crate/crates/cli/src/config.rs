//! TOML run configuration.

use crate::error::{io_err, CliError, Result};
use sdw_core::states::{FluidState, InitialData, MonotoneCubic, Profile};
use sdw_core::Tolerances;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    #[serde(rename = "2x2")]
    Pressureless,
    #[serde(rename = "3x3")]
    Energy,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "2x2" => Ok(Mode::Pressureless),
            "3x3" => Ok(Mode::Energy),
            _ => Err(format!("unknown mode {s:?}, expected 2x2 or 3x3")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { value: f64 },
    Linear { a: f64, b: f64 },
    Affine { knots: Vec<[f64; 2]> },
    Tanh { base: f64, amplitude: f64, center: f64, width: f64 },
    Table { xs: Vec<f64>, ys: Vec<f64> },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<Profile> {
        Ok(match self {
            ProfileSpec::Constant { value } => Profile::Constant(*value),
            ProfileSpec::Linear { a, b } => Profile::Linear { a: *a, b: *b },
            ProfileSpec::Affine { knots } => Profile::AffineByParts { knots: knots.iter().map(|k| (k[0], k[1])).collect() },
            ProfileSpec::Tanh { base, amplitude, center, width } => {
                Profile::TanhRamp { base: *base, amplitude: *amplitude, center: *center, width: *width }
            }
            ProfileSpec::Table { xs, ys } => Profile::Table(MonotoneCubic::new(xs.clone(), ys.clone())?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub u: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
}

/// Initial data: a catalog entry, a sample table, or explicit profiles.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    /// CSV with header x,rho,u[,e]; interpolated by monotone cubics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<ProfileSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSpec {
    #[default]
    Kinetic,
    NegInternal,
    Semiconvex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    #[serde(default = "yes")]
    pub conservation: bool,
    #[serde(default = "yes")]
    pub fronts: bool,
    #[serde(default)]
    pub entropy_pair: PairSpec,
    /// Samples per front curve and for the entropy trace.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Diagnostics { conservation: true, fronts: true, entropy_pair: PairSpec::Kinetic, samples: default_samples() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderingSpec {
    Atoms,
    #[default]
    Widened,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default)]
    pub rendering: RenderingSpec,
    /// Test function (xc, tc, rx, rt); centred on the run by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_function: Option<[f64; 4]>,
    /// Interval for the L1 comparison with the classical solution at t_end.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_window: Option<[f64; 2]>,
    #[serde(default)]
    pub require_oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub initial: InitialSpec,
    pub epsilon: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    pub t_end: f64,
    #[serde(default)]
    pub mode: Mode,
    /// Snapshot times; defaults to 0 and t_end.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    #[serde(default = "default_out")]
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default)]
    pub converge: ConvergeSpec,
}

fn yes() -> bool {
    true
}

fn default_samples() -> usize {
    64
}

fn default_c() -> f64 {
    2.0
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

pub const TOL_ENV: &str = "SDWTRACK_TOL_OVERRIDE";

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<RunConfig> {
        toml::from_str(text).map_err(|source| CliError::Toml { path: path.to_path_buf(), source })
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = RunConfig::from_toml(&text, path)?;
        // relative table paths are taken from the config's directory
        if let (Some(t), Some(dir)) = (&cfg.initial.table, path.parent()) {
            if t.is_relative() {
                cfg.initial.table = Some(dir.join(t));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        if self.snapshots.is_empty() {
            vec![0.0, self.t_end]
        } else {
            self.snapshots.clone()
        }
    }

    /// Tolerances from the config, then the environment override.
    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        if let Some(t) = &self.tolerances {
            apply(&mut tol, t);
        }
        if let Ok(s) = std::env::var(TOL_ENV) {
            apply(&mut tol, &parse_tolerance_override(&s)?);
        }
        for v in [tol.cluster, tol.root_rel, tol.quad_abs] {
            if !(v > 0.0) {
                return Err(CliError::Config(format!("tolerances must be positive, got {v}")));
            }
        }
        Ok(tol)
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        let data = self.initial.build()?;
        match (self.mode, data.is_energy_mode()) {
            (Mode::Energy, false) => {
                Err(CliError::Config("mode 3x3 needs an energy profile and left.e".into()))
            }
            (Mode::Pressureless, true) => Ok(InitialData { e: None, left: FluidState { e: None, ..data.left }, ..data }),
            _ => Ok(data),
        }
    }

    /// Check everything that can be checked before a run starts.
    pub fn validate(&self) -> Result<InitialData> {
        if !(self.epsilon > 0.0) {
            return Err(CliError::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(CliError::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.c >= 1.0) {
            return Err(CliError::Config(format!("C must be at least 1, got {}", self.c)));
        }
        if let Some(t) = self.snapshot_times().iter().find(|t| !(**t >= 0.0 && **t <= self.t_end)) {
            return Err(CliError::Config(format!("snapshot time {t} outside [0, {}]", self.t_end)));
        }
        if self.diagnostics.samples == 0 {
            return Err(CliError::Config("diagnostics.samples must be positive".into()));
        }
        if self.diagnostics.entropy_pair != PairSpec::Kinetic && self.mode != Mode::Energy {
            return Err(CliError::Config("internal-energy entropy pairs need mode 3x3".into()));
        }
        self.tolerances()?;
        let data = self.initial_data()?;
        data.validate().map_err(|e| CliError::Config(e.to_string()))?;
        sdw_core::states::build_partition(&data, self.epsilon, self.c).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(data)
    }
}

fn apply(tol: &mut Tolerances, t: &ToleranceSpec) {
    if let Some(v) = t.cluster {
        tol.cluster = v;
    }
    if let Some(v) = t.root {
        tol.root_rel = v;
    }
    if let Some(v) = t.quad {
        tol.quad_abs = v;
    }
}

/// Parse "cluster=1e-9,root=1e-12,quad=1e-10"; any subset, any order.
pub fn parse_tolerance_override(s: &str) -> Result<ToleranceSpec> {
    let mut t = ToleranceSpec { cluster: None, root: None, quad: None };
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{TOL_ENV}: expected key=value, got {item:?}")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{TOL_ENV}: bad number {value:?}")))?;
        match key.trim() {
            "cluster" => t.cluster = Some(v),
            "root" => t.root = Some(v),
            "quad" => t.quad = Some(v),
            k => return Err(CliError::Config(format!("{TOL_ENV}: unknown key {k:?}"))),
        }
    }
    Ok(t)
}

struct Catalog {
    u0: f64,
    rho: ProfileSpec,
    u: ProfileSpec,
}

fn catalog(name: &str) -> Option<Catalog> {
    let lin = |a: f64, b: f64| ProfileSpec::Linear { a, b };
    let one = ProfileSpec::Constant { value: 1.0 };
    let affine = |k: &[(f64, f64)]| ProfileSpec::Affine { knots: k.iter().map(|&(x, y)| [x, y]).collect() };
    Some(match name {
        "case-i" => Catalog { u0: -0.5, rho: lin(1.0, 1.0), u: lin(0.0, 1.0) },
        "case-ii-absorbing" => Catalog { u0: 1.0, rho: one, u: lin(0.0, 0.5) },
        "case-ii-stopping" => Catalog { u0: 0.5, rho: one, u: lin(0.0, 1.0) },
        "case-iii" => Catalog { u0: 2.0, rho: one, u: lin(1.0, -1.0) },
        "case-iv" => Catalog { u0: 0.5, rho: lin(1.0, 0.5), u: lin(1.0, -1.0) },
        "hat" => Catalog {
            u0: 0.5,
            rho: ProfileSpec::Tanh { base: 1.5, amplitude: 0.5, center: 0.5, width: 0.2 },
            u: affine(&[(0.0, 0.0), (0.4, 1.0), (1.0, 0.0)]),
        },
        "valley" => Catalog { u0: 1.0, rho: one, u: affine(&[(0.0, 1.0), (0.5, -0.5), (1.0, 0.5)]) },
        "zigzag" => Catalog { u0: 0.0, rho: one, u: affine(&[(0.0, 0.0), (0.25, 1.0), (0.5, 0.0), (1.0, 1.5)]) },
        "constant-density" => Catalog {
            u0: 2.0,
            rho: ProfileSpec::Constant { value: 2.0 },
            u: affine(&[(0.0, 1.5), (0.3, 1.2), (0.6, 0.3), (1.0, -1.0)]),
        },
        "linear" => Catalog { u0: 0.0, rho: one, u: lin(0.0, 1.0) },
        "focusing" => Catalog { u0: 0.0, rho: one, u: lin(0.0, -1.0) },
        _ => return None,
    })
}

pub const CATALOG: [&str; 11] = [
    "case-i",
    "case-ii-absorbing",
    "case-ii-stopping",
    "case-iii",
    "case-iv",
    "hat",
    "valley",
    "zigzag",
    "constant-density",
    "linear",
    "focusing",
];

impl InitialSpec {
    pub fn build(&self) -> Result<InitialData> {
        let sources = [self.catalog.is_some(), self.table.is_some(), self.u.is_some()];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(CliError::Config("give exactly one of initial.catalog, initial.table or initial.u".into()));
        }
        if let Some(name) = &self.catalog {
            let c = catalog(name).ok_or_else(|| {
                CliError::Config(format!("unknown catalog entry {name:?}; known: {}", CATALOG.join(", ")))
            })?;
            let rho0 = match &c.rho {
                ProfileSpec::Constant { value } => *value,
                _ => 1.0,
            };
            let left = self.left.unwrap_or(StateSpec { rho: rho0, u: c.u0, e: None });
            let rho = self.rho.as_ref().unwrap_or(&c.rho);
            return self.assemble(left, 0.0, 1.0, rho.build()?, c.u.build()?);
        }
        let left = self.left.ok_or_else(|| CliError::Config("initial.left is required".into()))?;
        if let Some(path) = &self.table {
            let (xs, cols) = read_table(path)?;
            let r = self.r.unwrap_or(xs[0]);
            let x_max = self.x_max.unwrap_or(*xs.last().unwrap());
            let rho = Profile::Table(MonotoneCubic::new(xs.clone(), cols[0].clone())?);
            let u = Profile::Table(MonotoneCubic::new(xs.clone(), cols[1].clone())?);
            let mut data = InitialData::new(fluid(left), r, rho, u, x_max);
            match (cols.get(2), left.e) {
                (Some(e), Some(e0)) => data = data.with_energy(e0, Profile::Table(MonotoneCubic::new(xs, e.clone())?)),
                (None, None) => {}
                _ => return Err(CliError::Config("table column e and left.e go together".into())),
            }
            return Ok(data);
        }
        let rho = self.rho.as_ref().ok_or_else(|| CliError::Config("initial.rho is required".into()))?;
        let u = self.u.as_ref().unwrap();
        self.assemble(left, self.r.unwrap_or(0.0), self.x_max.unwrap_or(1.0), rho.build()?, u.build()?)
    }

    fn assemble(&self, left: StateSpec, r: f64, x_max: f64, rho: Profile, u: Profile) -> Result<InitialData> {
        let data = InitialData::new(fluid(left), self.r.unwrap_or(r), rho, u, self.x_max.unwrap_or(x_max));
        match (&self.energy, left.e) {
            (Some(e), Some(e0)) => Ok(data.with_energy(e0, e.build()?)),
            (None, None) => Ok(data),
            _ => Err(CliError::Config("initial.energy and left.e go together".into())),
        }
    }
}

fn fluid(s: StateSpec) -> FluidState {
    FluidState { rho: s.rho, u: s.u, e: None }
}

type Columns = (Vec<f64>, Vec<Vec<f64>>);

fn read_table(path: &Path) -> Result<Columns> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').map(str::trim).collect();
    if header != ["x", "rho", "u"] && header != ["x", "rho", "u", "e"] {
        return Err(CliError::Config(format!("{}: header must be x,rho,u[,e]", path.display())));
    }
    let mut xs = Vec::new();
    let mut cols = vec![Vec::new(); header.len() - 1];
    for (n, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Config(format!("{} row {}: {e}", path.display(), n + 2)))?;
        if vals.len() != header.len() {
            return Err(CliError::Config(format!("{} row {}: expected {} values", path.display(), n + 2, header.len())));
        }
        xs.push(vals[0]);
        for (c, v) in cols.iter_mut().zip(&vals[1..]) {
            c.push(*v);
        }
    }
    if xs.len() < 2 {
        return Err(CliError::Config(format!("{}: need at least two rows", path.display())));
    }
    Ok((xs, cols))
}
