//! Run configuration: a TOML file with flat sections, overridden by flags,
//! resolved into a validated [`RunConfig`] before anything is computed.

use std::path::Path;

use pdm_core::reference::{KratzerParams, MorseParams, Reference};
use pdm_core::{CorrectionSign, MassProfile};
use serde::{Deserialize, Serialize};

use crate::args::Overrides;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config file {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Kratzer,
    Morse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<PotentialKind>,
    #[serde(rename = "De", skip_serializing_if = "Option::is_none")]
    pub de: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ye: Option<f64>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    /// `kind key=value ...`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_max: Option<f64>,
}

/// The config file as written; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub profile: ProfileSection,
    #[serde(default)]
    pub states: StatesSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: TolerancesSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse { path: path.display().to_string(), message: e.to_string() })
    }

    /// Flags win over file values.
    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
            if v.is_some() {
                slot.clone_from(v);
            }
        }
        let p = &mut self.potential;
        set(&mut p.kind, &o.potential);
        set(&mut p.de, &o.de);
        set(&mut p.ye, &o.ye);
        set(&mut p.d, &o.d);
        set(&mut p.a, &o.morse_a);
        set(&mut p.r0, &o.r0);
        set(&mut p.mu, &o.mu);
        set(&mut p.hbar, &o.hbar);
        if o.profile.is_some() {
            // a new profile string resets per-parameter file overrides
            self.profile = ProfileSection { spec: o.profile.clone(), ..Default::default() };
        }
        set(&mut self.profile.a, &o.a);
        set(&mut self.profile.q, &o.q);
        set(&mut self.profile.b, &o.b);
        set(&mut self.states.n_max, &o.n_max);
        if let Some(ell) = &o.ell {
            self.states.ell = Some(ell.clone());
        }
        set(&mut self.grid.points, &o.grid_points);
        set(&mut self.grid.box_tol, &o.box_tol);
        set(&mut self.output.format, &o.format);
        set(&mut self.tolerances.energy, &o.tolerance);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub energy: f64,
    pub order_min: f64,
    pub order_max: f64,
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Reference at the first requested ℓ.
    pub reference: Reference,
    pub profile: MassProfile,
    pub n_max: usize,
    pub ells: Vec<u32>,
    pub grid_points: usize,
    pub resolutions: Vec<usize>,
    pub box_tol: f64,
    pub x_range: Option<(f64, f64)>,
    pub format: Format,
    pub tolerances: Tolerances,
    pub correction_sign: CorrectionSign,
    /// The merged file view, echoed in output headers.
    pub effective: FileConfig,
}

fn positive(name: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field(name, format!("must be positive and finite, got {v}")))
    }
}

fn resolve_profile(s: &ProfileSection) -> Result<MassProfile, ConfigError> {
    let base: MassProfile = match &s.spec {
        Some(spec) => spec.parse().map_err(|e: pdm_core::Error| field("profile", e.to_string()))?,
        None => MassProfile::Uniform,
    };
    let reject = |name: &'static str, v: Option<f64>| match v {
        Some(_) => Err(field(name, format!("parameter `{name}` does not apply to the {} profile", base.name()))),
        None => Ok(()),
    };
    let profile = match base {
        MassProfile::Uniform => {
            reject("profile.a", s.a)?;
            reject("profile.q", s.q)?;
            reject("profile.b", s.b)?;
            base
        }
        MassProfile::Lorentzian { a, q } => {
            reject("profile.b", s.b)?;
            MassProfile::Lorentzian { a: s.a.unwrap_or(a), q: s.q.unwrap_or(q) }
        }
        MassProfile::SquaredLorentzian { a, b } => {
            reject("profile.q", s.q)?;
            MassProfile::SquaredLorentzian { a: s.a.unwrap_or(a), b: s.b.unwrap_or(b) }
        }
        MassProfile::Exponential { q } => {
            reject("profile.a", s.a)?;
            reject("profile.b", s.b)?;
            MassProfile::Exponential { q: s.q.unwrap_or(q) }
        }
    };
    profile.validate().map_err(|e| field("profile", e.to_string()))?;
    Ok(profile)
}

impl RunConfig {
    pub fn resolve(mut file: FileConfig, correction_sign: CorrectionSign) -> Result<Self, ConfigError> {
        let p = &mut file.potential;
        let kind = *p.kind.get_or_insert(PotentialKind::Kratzer);
        let mu = positive("potential.mu", *p.mu.get_or_insert(1.0))?;
        let hbar = positive("potential.hbar", *p.hbar.get_or_insert(1.0))?;
        let ells = file.states.ell.get_or_insert_with(|| vec![0]).clone();
        if ells.is_empty() {
            return Err(field("states.ell", "at least one angular momentum is required"));
        }
        let ell0 = ells[0];
        let reference = match kind {
            PotentialKind::Kratzer => {
                if p.d.is_some() || p.a.is_some() || p.r0.is_some() {
                    return Err(field("potential", "D, a and r0 are Morse parameters; the potential is kratzer"));
                }
                let de = *p.de.get_or_insert(1.0);
                let ye = *p.ye.get_or_insert(1.0);
                let params = KratzerParams::new(de, ye, ell0)
                    .and_then(|k| k.with_units(mu, hbar))
                    .map_err(|e| field("potential", e.to_string()))?;
                Reference::Kratzer(params)
            }
            PotentialKind::Morse => {
                if p.de.is_some() || p.ye.is_some() {
                    return Err(field("potential", "De and ye are Kratzer parameters; the potential is morse"));
                }
                let d = *p.d.get_or_insert(8.0);
                let a = *p.a.get_or_insert(1.0);
                let r0 = *p.r0.get_or_insert(1.0);
                let params = MorseParams::new(d, a, r0, ell0)
                    .and_then(|m| m.with_units(mu, hbar))
                    .map_err(|e| field("potential", e.to_string()))?;
                Reference::Morse(params)
            }
        };
        let profile = resolve_profile(&file.profile)?;
        file.profile = ProfileSection { spec: Some(profile.to_string()), ..Default::default() };
        let n_max = *file.states.n_max.get_or_insert(2);
        let grid_points = *file.grid.points.get_or_insert(4000);
        if grid_points < 12 {
            return Err(field("grid.points", format!("need at least 12 points, got {grid_points}")));
        }
        let resolutions = file
            .grid
            .resolutions
            .get_or_insert_with(|| vec![grid_points / 4, grid_points / 2, grid_points])
            .clone();
        if resolutions.iter().any(|&r| r < 3) {
            return Err(field("grid.resolutions", "every resolution needs at least 3 points"));
        }
        let box_tol = *file.grid.box_tol.get_or_insert(1e-10);
        if !(box_tol > 0.0 && box_tol < 1.0) {
            return Err(field("grid.box_tol", format!("must lie in (0, 1), got {box_tol}")));
        }
        let x_range = match (file.grid.x_min, file.grid.x_max) {
            (Some(lo), Some(hi)) if lo < hi && lo.is_finite() && hi.is_finite() => Some((lo, hi)),
            (None, None) => None,
            _ => return Err(field("grid", "x_min and x_max must be given together, finite, with x_min < x_max")),
        };
        let format = *file.output.format.get_or_insert(Format::Csv);
        let t = &mut file.tolerances;
        let tolerances = Tolerances {
            energy: positive("tolerances.energy", *t.energy.get_or_insert(1e-4))?,
            order_min: *t.order_min.get_or_insert(1.7),
            order_max: *t.order_max.get_or_insert(2.3),
        };
        if !(tolerances.order_min < tolerances.order_max) {
            return Err(field("tolerances", "order_min must be below order_max"));
        }
        Ok(Self {
            reference,
            profile,
            n_max,
            ells,
            grid_points,
            resolutions,
            box_tol,
            x_range,
            format,
            tolerances,
            correction_sign,
            effective: file,
        })
    }

    /// Effective configuration as `# `-prefixed TOML lines.
    pub fn header(&self, command: &str) -> String {
        let mut out = format!("# pdm {command}\n");
        if self.correction_sign == CorrectionSign::Minus {
            out.push_str("# correction_sign = \"minus\"\n");
        }
        let body = toml::to_string(&self.effective).unwrap_or_default();
        for line in body.lines().filter(|l| !l.is_empty()) {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Parameters that `sweep` can vary.
pub const SWEEPABLE: &[&str] = &["De", "ye", "D", "morse-a", "r0", "mu", "hbar", "a", "q", "b"];

impl FileConfig {
    pub fn set_parameter(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        let slot = match name {
            "De" => &mut self.potential.de,
            "ye" => &mut self.potential.ye,
            "D" => &mut self.potential.d,
            "morse-a" => &mut self.potential.a,
            "r0" => &mut self.potential.r0,
            "mu" => &mut self.potential.mu,
            "hbar" => &mut self.potential.hbar,
            "a" => &mut self.profile.a,
            "q" => &mut self.profile.q,
            "b" => &mut self.profile.b,
            other => {
                return Err(field("sweep.param", format!("`{other}` is not sweepable; choose one of {}", SWEEPABLE.join(", "))))
            }
        };
        *slot = Some(value);
        Ok(())
    }
}
