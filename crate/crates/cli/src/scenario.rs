//! Scenario files: a flat, commented `key = value` format.
//!
//! ```text
//! file    = { line } ;
//! line    = [ entry ] [ comment ] newline ;
//! entry   = key ws? "=" ws? value ;
//! key     = lower { lower | digit | "_" } ;
//! value   = number | word | sweep ;
//! sweep   = ( "logspace" | "linspace" ) "(" number "," number "," integer ")" ;
//! word    = lower { lower | digit | "_" } ;
//! comment = "#" { any } ;
//! ```
//!
//! A JSON document whose `scenario` member (or top level) maps keys to
//! values in the same syntax is accepted too, which is how the `scenario`
//! echo of a previous JSON result is fed back in.

use fastlight_core::constants::{fwhm_hz_to_half_width, hz_to_rad_s, wavelength_to_omega};
use fastlight_core::dispersion::{partial_fill_cad_target, DispersionProfile, TaylorCubic};
use fastlight_core::resonator::{EtaConvention, RingCavity};
use fastlight_core::sagnac::LoopGeometry;
use fastlight_core::sensitivity::{NoiseBudget, Readout};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{source_name}:{line}: key `{key}`: {message}")]
    Invalid {
        source_name: String,
        line: usize,
        key: String,
        message: String,
    },
    #[error("scenario: {0}")]
    Missing(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub spacing: Spacing,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + (b - a) * t)
                    }
                }
            })
            .map(|v| v.clamp(self.start, self.stop))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Word(String),
    Sweep(Sweep),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x:e}"),
            Value::Word(w) => f.write_str(w),
            Value::Sweep(s) => {
                let name = match s.spacing {
                    Spacing::Log => "logspace",
                    Spacing::Linear => "linspace",
                };
                write!(f, "{name}({:e}, {:e}, {})", s.start, s.stop, s.count)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: Value,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Number,
    NumberOrSweep,
    Word(&'static [&'static str]),
}

const MEDIA: &[&str] = &[
    "vacuum",
    "constant",
    "linear",
    "lorentzian",
    "taylor",
    "cad",
];

const KEYS: &[(&str, Kind)] = &[
    ("radius_m", Kind::Number),
    ("area_m2", Kind::Number),
    ("perimeter_m", Kind::Number),
    ("fill_fraction", Kind::Number),
    ("frequency_hz", Kind::Number),
    ("wavelength_m", Kind::Number),
    ("finesse", Kind::Number),
    ("n0", Kind::Number),
    ("medium", Kind::Word(MEDIA)),
    ("medium_n0", Kind::Number),
    ("medium_group_index", Kind::Number),
    ("medium_strength", Kind::Number),
    ("medium_fwhm_hz", Kind::Number),
    ("medium_center_hz", Kind::Number),
    ("medium_n1_s_per_rad", Kind::Number),
    ("medium_n3_s3_per_rad3", Kind::Number),
    ("rotation_rad_s", Kind::NumberOrSweep),
    ("delta_length_m", Kind::NumberOrSweep),
    ("empty_shift_hz", Kind::NumberOrSweep),
    ("power_w", Kind::Number),
    ("measurement_time_s", Kind::Number),
    ("quantum_efficiency", Kind::Number),
    ("snr", Kind::Number),
    ("photons", Kind::Number),
    ("convention", Kind::Word(&["derived", "paper"])),
    ("readout", Kind::Word(&["per_direction", "splitting"])),
    ("particle_mass_kg", Kind::Number),
    ("spectrum_points", Kind::Number),
    ("spectrum_half_span_hz", Kind::Number),
    ("fig4_ratio", Kind::NumberOrSweep),
    ("fig5_empty_shift_hz", Kind::Number),
    ("fig5_enhanced_shift_hz", Kind::Number),
];

/// Parsed but not yet validated key-value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawScenario {
    pub source_name: String,
    pub entries: BTreeMap<String, Entry>,
}

fn parse_error(src: &str, line: usize, column: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        source_name: src.to_string(),
        line,
        column,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() || !s.starts_with(|c: char| c.is_ascii_digit() || "+-.".contains(c)) {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_sweep(text: &str) -> Option<std::result::Result<Sweep, String>> {
    let (spacing, rest) = if let Some(r) = text.strip_prefix("logspace") {
        (Spacing::Log, r)
    } else if let Some(r) = text.strip_prefix("linspace") {
        (Spacing::Linear, r)
    } else {
        return None;
    };
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'));
    let Some(inner) = inner else {
        return Some(Err("expected `(start, stop, count)`".into()));
    };
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Some(Err("sweep takes exactly three arguments".into()));
    }
    let (Some(start), Some(stop)) = (parse_number(parts[0]), parse_number(parts[1])) else {
        return Some(Err("sweep bounds must be numbers".into()));
    };
    let Ok(count) = parts[2].trim().parse::<usize>() else {
        return Some(Err("sweep count must be a non-negative integer".into()));
    };
    if count < 2 {
        return Some(Err("sweep count must be at least 2".into()));
    }
    if !(stop > start) {
        return Some(Err("sweep range must be strictly increasing".into()));
    }
    if spacing == Spacing::Log && start <= 0.0 {
        return Some(Err("logspace bounds must be positive".into()));
    }
    Some(Ok(Sweep {
        spacing,
        start,
        stop,
        count,
    }))
}

fn parse_value(
    src: &str,
    line: usize,
    column: usize,
    key: &str,
    text: &str,
) -> Result<Value, ScenarioError> {
    let kind = KEYS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, kind)| *kind)
        .ok_or_else(|| parse_error(src, line, 1, format!("unknown key `{key}`")))?;
    if let Some(sweep) = parse_sweep(text) {
        let sweep = sweep.map_err(|m| parse_error(src, line, column, m))?;
        return match kind {
            Kind::NumberOrSweep => Ok(Value::Sweep(sweep)),
            _ => Err(parse_error(
                src,
                line,
                column,
                format!("`{key}` does not accept a sweep"),
            )),
        };
    }
    match kind {
        Kind::Number | Kind::NumberOrSweep => {
            parse_number(text).map(Value::Number).ok_or_else(|| {
                parse_error(
                    src,
                    line,
                    column,
                    format!("`{key}` expects a number, got `{text}`"),
                )
            })
        }
        Kind::Word(allowed) => {
            if allowed.contains(&text) {
                Ok(Value::Word(text.to_string()))
            } else {
                Err(parse_error(
                    src,
                    line,
                    column,
                    format!("`{key}` must be one of {}, got `{text}`", allowed.join("|")),
                ))
            }
        }
    }
}

impl RawScenario {
    pub fn parse(source_name: &str, text: &str) -> Result<Self, ScenarioError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Self::parse_json(source_name, text);
        }
        let mut raw = RawScenario {
            source_name: source_name.to_string(),
            entries: BTreeMap::new(),
        };
        for (i, full) in text.lines().enumerate() {
            let line = i + 1;
            let body = full.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                let col = body.len() - body.trim_start().len() + 1;
                return Err(parse_error(
                    source_name,
                    line,
                    col,
                    "expected `key = value`",
                ));
            };
            let key_part = &body[..eq];
            let key = key_part.trim();
            let key_col = key_part.len() - key_part.trim_start().len() + 1;
            if !is_ident(key) {
                return Err(parse_error(
                    source_name,
                    line,
                    key_col,
                    format!("invalid key `{key}`"),
                ));
            }
            if !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(parse_error(
                    source_name,
                    line,
                    key_col,
                    format!("unknown key `{key}`"),
                ));
            }
            let value_part = &body[eq + 1..];
            let value = value_part.trim();
            let value_col = eq + 2 + (value_part.len() - value_part.trim_start().len());
            if value.is_empty() {
                return Err(parse_error(source_name, line, value_col, "missing value"));
            }
            raw.insert(key, value, line, value_col)?;
        }
        Ok(raw)
    }

    fn insert(
        &mut self,
        key: &str,
        text: &str,
        line: usize,
        column: usize,
    ) -> Result<(), ScenarioError> {
        let src = self.source_name.clone();
        let value = parse_value(&src, line, column, key, text)?;
        if let Some(prev) = self.entries.get(key) {
            return Err(parse_error(
                &src,
                line,
                1,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value,
                line,
                column,
            },
        );
        Ok(())
    }

    fn parse_json(source_name: &str, text: &str) -> Result<Self, ScenarioError> {
        let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| {
            parse_error(
                source_name,
                e.line(),
                e.column(),
                format!("invalid JSON: {e}"),
            )
        })?;
        let map = match doc.get("scenario").unwrap_or(&doc) {
            serde_json::Value::Object(m) => m.clone(),
            _ => {
                return Err(parse_error(
                    source_name,
                    1,
                    1,
                    "expected a JSON object of scenario keys",
                ))
            }
        };
        let mut raw = RawScenario {
            source_name: source_name.to_string(),
            entries: BTreeMap::new(),
        };
        for (i, (key, v)) in map.iter().enumerate() {
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => {
                    return Err(parse_error(
                        source_name,
                        i + 1,
                        1,
                        format!("`{key}` must be a string or number"),
                    ))
                }
            };
            raw.insert(key, &text, i + 1, 1)?;
        }
        Ok(raw)
    }

    /// Later scenarios override earlier ones key by key.
    pub fn merge(mut self, over: RawScenario) -> RawScenario {
        for (k, e) in over.entries {
            self.entries.insert(k, e);
        }
        self.source_name = over.source_name;
        self
    }

    /// Canonical text of every value, for echoing and re-ingest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.value.to_string()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MediumSpec {
    Vacuum,
    Constant {
        n0: f64,
    },
    Linear {
        n0: f64,
        group_index: f64,
    },
    Lorentzian {
        strength: f64,
        fwhm_hz: f64,
        center_hz: Option<f64>,
    },
    Taylor {
        n0: f64,
        n1: f64,
        n3: f64,
    },
    Cad {
        fwhm_hz: f64,
        group_index: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    Rotation,
    DeltaLength,
    EmptyShift,
}

impl DriveKind {
    pub fn key(&self) -> &'static str {
        match self {
            DriveKind::Rotation => "rotation_rad_s",
            DriveKind::DeltaLength => "delta_length_m",
            DriveKind::EmptyShift => "empty_shift_hz",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drive {
    pub kind: DriveKind,
    /// In the key's own units (rad/s, m or Hz).
    pub values: Vec<f64>,
    pub is_sweep: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub raw: RawScenario,
    pub geometry: Option<LoopGeometry>,
    pub fill_fraction: f64,
    pub omega0: Option<f64>,
    pub finesse: Option<f64>,
    pub n0: f64,
    pub medium: MediumSpec,
    pub drive: Option<Drive>,
    pub noise: Option<NoiseBudget>,
    pub convention: EtaConvention,
    pub readout: Readout,
    pub particle_mass: Option<f64>,
    pub spectrum_points: usize,
    pub spectrum_half_span: Option<f64>,
    pub fig4_ratios: Vec<f64>,
    pub fig5_empty_shift_hz: f64,
    pub fig5_enhanced_shift_hz: f64,
}

pub const DEFAULT_SPECTRUM_POINTS: usize = 2001;

struct Reader<'a> {
    raw: &'a RawScenario,
}

impl<'a> Reader<'a> {
    fn invalid(&self, key: &str, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Invalid {
            source_name: self.raw.source_name.clone(),
            line: self.raw.entries.get(key).map_or(0, |e| e.line),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn has(&self, key: &str) -> bool {
        self.raw.entries.contains_key(key)
    }

    fn number(&self, key: &str) -> Option<f64> {
        match self.raw.entries.get(key).map(|e| &e.value) {
            Some(Value::Number(x)) => Some(*x),
            _ => None,
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        match self.number(key) {
            Some(x) if x > 0.0 => Ok(Some(x)),
            Some(_) => Err(self.invalid(key, "must be positive")),
            None => Ok(None),
        }
    }

    fn word(&self, key: &str) -> Option<&str> {
        match self.raw.entries.get(key).map(|e| &e.value) {
            Some(Value::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    fn list(&self, key: &str) -> Option<(Vec<f64>, bool)> {
        match self.raw.entries.get(key).map(|e| &e.value) {
            Some(Value::Number(x)) => Some((vec![*x], false)),
            Some(Value::Sweep(s)) => Some((s.values(), true)),
            _ => None,
        }
    }

    fn require_for(&self, key: &str, needed_by: &str) -> Result<f64, ScenarioError> {
        self.number(key)
            .ok_or_else(|| ScenarioError::Missing(format!("medium `{needed_by}` needs `{key}`")))
    }
}

fn core_err(r: &Reader, key: &str, e: fastlight_core::Error) -> ScenarioError {
    r.invalid(key, e.to_string())
}

impl Scenario {
    pub fn from_raw(raw: RawScenario) -> Result<Self, ScenarioError> {
        let r = Reader { raw: &raw };

        let radius = r.positive("radius_m")?;
        let area = r.positive("area_m2")?;
        let perimeter = r.positive("perimeter_m")?;
        let geometry = match (radius, area, perimeter) {
            (None, None, None) => None,
            (Some(rad), None, None) => {
                Some(LoopGeometry::circle(rad).map_err(|e| core_err(&r, "radius_m", e))?)
            }
            (None, Some(a), Some(p)) => {
                Some(LoopGeometry::new(a, p).map_err(|e| core_err(&r, "area_m2", e))?)
            }
            (Some(rad), Some(a), Some(p)) => Some(
                LoopGeometry::with_radius(a, p, rad).map_err(|e| core_err(&r, "radius_m", e))?,
            ),
            _ => {
                let key = if area.is_some() {
                    "area_m2"
                } else {
                    "perimeter_m"
                };
                return Err(r.invalid(key, "give radius_m, or both area_m2 and perimeter_m"));
            }
        };

        let fill_fraction = r.number("fill_fraction").unwrap_or(1.0);
        if !(fill_fraction > 0.0 && fill_fraction <= 1.0) {
            return Err(r.invalid("fill_fraction", "must lie in (0, 1]"));
        }

        let omega0 = match (r.positive("frequency_hz")?, r.positive("wavelength_m")?) {
            (Some(_), Some(_)) => {
                return Err(r.invalid("wavelength_m", "give either frequency_hz or wavelength_m"))
            }
            (Some(f), None) => Some(hz_to_rad_s(f)),
            (None, Some(l)) => Some(wavelength_to_omega(l)),
            (None, None) => None,
        };

        let finesse = r.number("finesse");
        if let Some(f) = finesse {
            if !(f > 1.0) {
                return Err(r.invalid("finesse", "must exceed 1"));
            }
        }
        let n0 = r.positive("n0")?.unwrap_or(1.0);

        let medium_name = r.word("medium").unwrap_or("vacuum");
        let medium = match medium_name {
            "vacuum" => MediumSpec::Vacuum,
            "constant" => MediumSpec::Constant {
                n0: r.require_for("medium_n0", medium_name)?,
            },
            "linear" => MediumSpec::Linear {
                n0: r.number("medium_n0").unwrap_or(1.0),
                group_index: r.require_for("medium_group_index", medium_name)?,
            },
            "lorentzian" => MediumSpec::Lorentzian {
                strength: r.require_for("medium_strength", medium_name)?,
                fwhm_hz: r.require_for("medium_fwhm_hz", medium_name)?,
                center_hz: r.number("medium_center_hz"),
            },
            "taylor" => MediumSpec::Taylor {
                n0: r.number("medium_n0").unwrap_or(1.0),
                n1: r.require_for("medium_n1_s_per_rad", medium_name)?,
                n3: r.number("medium_n3_s3_per_rad3").unwrap_or(0.0),
            },
            "cad" => MediumSpec::Cad {
                fwhm_hz: r.require_for("medium_fwhm_hz", medium_name)?,
                group_index: r.number("medium_group_index"),
            },
            _ => unreachable!("medium words are checked by the parser"),
        };
        let used: &[&str] = match medium_name {
            "vacuum" => &[],
            "constant" => &["medium_n0"],
            "linear" => &["medium_n0", "medium_group_index"],
            "lorentzian" => &["medium_strength", "medium_fwhm_hz", "medium_center_hz"],
            "taylor" => &["medium_n0", "medium_n1_s_per_rad", "medium_n3_s3_per_rad3"],
            _ => &["medium_fwhm_hz", "medium_group_index"],
        };
        if let Some(stray) = raw
            .entries
            .keys()
            .find(|k| k.starts_with("medium_") && !used.contains(&k.as_str()))
        {
            return Err(r.invalid(stray, format!("not a parameter of medium `{medium_name}`")));
        }

        let drives: Vec<DriveKind> = [
            DriveKind::Rotation,
            DriveKind::DeltaLength,
            DriveKind::EmptyShift,
        ]
        .into_iter()
        .filter(|d| r.has(d.key()))
        .collect();
        if drives.len() > 1 {
            return Err(r.invalid(
                drives[1].key(),
                format!("only one of rotation_rad_s, delta_length_m, empty_shift_hz may be given (also found `{}`)", drives[0].key()),
            ));
        }
        let drive = drives.first().map(|&kind| {
            let (values, is_sweep) = r.list(kind.key()).expect("drive key present");
            Drive {
                kind,
                values,
                is_sweep,
            }
        });

        let noise = match (r.positive("power_w")?, r.positive("measurement_time_s")?) {
            (Some(p), Some(t)) => {
                let qe = r.number("quantum_efficiency").unwrap_or(1.0);
                let mut b = NoiseBudget::new(p, t, qe)
                    .map_err(|e| core_err(&r, "quantum_efficiency", e))?;
                if let Some(n) = r.number("photons") {
                    b = b.with_photons(n).map_err(|e| core_err(&r, "photons", e))?;
                }
                if let Some(s) = r.number("snr") {
                    b = b.with_snr(s).map_err(|e| core_err(&r, "snr", e))?;
                }
                Some(b)
            }
            (None, None) => {
                for k in ["quantum_efficiency", "snr", "photons"] {
                    if r.has(k) {
                        return Err(r.invalid(k, "needs power_w and measurement_time_s"));
                    }
                }
                None
            }
            (Some(_), None) => return Err(r.invalid("power_w", "needs measurement_time_s as well")),
            (None, Some(_)) => return Err(r.invalid("measurement_time_s", "needs power_w as well")),
        };

        let convention = match r.word("convention") {
            Some("paper") => EtaConvention::FullWidth,
            _ => EtaConvention::Derived,
        };
        let readout = match r.word("readout") {
            Some("splitting") => Readout::Splitting,
            _ => Readout::PerDirection,
        };

        let particle_mass = r.positive("particle_mass_kg")?;
        let spectrum_points = match r.number("spectrum_points") {
            None => DEFAULT_SPECTRUM_POINTS,
            Some(p) if p.fract() == 0.0 && p >= 1001.0 && p <= 1e7 && (p as usize) % 2 == 1 => {
                p as usize
            }
            Some(_) => {
                return Err(r.invalid("spectrum_points", "must be an odd integer in [1001, 1e7]"))
            }
        };
        let spectrum_half_span = r.positive("spectrum_half_span_hz")?.map(hz_to_rad_s);
        let fig4_ratios = match r.list("fig4_ratio") {
            Some((v, _)) => {
                if v.iter().any(|&x| x <= 0.0) {
                    return Err(r.invalid("fig4_ratio", "must be positive"));
                }
                v
            }
            None => (0..=18)
                .map(|i| 10f64.powf(-9.0 + 0.5 * i as f64))
                .collect(),
        };
        let fig5_empty_shift_hz = r.positive("fig5_empty_shift_hz")?.unwrap_or(3e5);
        let fig5_enhanced_shift_hz = r.positive("fig5_enhanced_shift_hz")?.unwrap_or(9.5e6);
        if fig5_enhanced_shift_hz <= fig5_empty_shift_hz {
            return Err(r.invalid("fig5_enhanced_shift_hz", "must exceed fig5_empty_shift_hz"));
        }

        let s = Scenario {
            geometry,
            fill_fraction,
            omega0,
            finesse,
            n0,
            medium,
            drive,
            noise,
            convention,
            readout,
            particle_mass,
            spectrum_points,
            spectrum_half_span,
            fig4_ratios,
            fig5_empty_shift_hz,
            fig5_enhanced_shift_hz,
            raw: raw.clone(),
        };
        // module invariants that need several keys together
        if let Some(w0) = s.omega0 {
            s.profile_at(w0)?;
            if s.geometry.is_some() && s.finesse.is_some() {
                s.cavity()?;
            }
        }
        Ok(s)
    }

    pub fn load(paths: &[std::path::PathBuf]) -> Result<Self, ScenarioError> {
        let mut merged: Option<RawScenario> = None;
        for p in paths {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ScenarioError::Io(format!("{}: {e}", p.display())))?;
            let raw = RawScenario::parse(&p.display().to_string(), &text)?;
            merged = Some(match merged {
                None => raw,
                Some(base) => base.merge(raw),
            });
        }
        let raw = merged.ok_or_else(|| ScenarioError::Missing("no scenario file given".into()))?;
        Self::from_raw(raw)
    }

    pub fn parse_str(text: &str) -> Result<Self, ScenarioError> {
        Self::from_raw(RawScenario::parse("<string>", text)?)
    }

    fn medium_key(&self) -> &'static str {
        match self.medium {
            MediumSpec::Vacuum => "medium",
            MediumSpec::Constant { .. } => "medium_n0",
            MediumSpec::Linear { .. } => "medium_group_index",
            MediumSpec::Lorentzian { .. } => "medium_strength",
            MediumSpec::Taylor { .. } => "medium_n1_s_per_rad",
            MediumSpec::Cad { .. } => "medium_fwhm_hz",
        }
    }

    /// Dispersion profile with its reference at the cavity frequency `omega0`.
    pub fn profile_at(&self, omega0: f64) -> Result<DispersionProfile, ScenarioError> {
        let r = Reader { raw: &self.raw };
        let key = self.medium_key();
        let p = match self.medium {
            MediumSpec::Vacuum => Ok(DispersionProfile::vacuum()),
            MediumSpec::Constant { n0 } => DispersionProfile::constant(n0),
            MediumSpec::Linear { n0, group_index } => {
                DispersionProfile::linear_with_group_index(n0, group_index, omega0)
            }
            MediumSpec::Lorentzian {
                strength,
                fwhm_hz,
                center_hz,
            } => DispersionProfile::lorentzian(
                strength,
                fwhm_hz_to_half_width(fwhm_hz),
                center_hz.map_or(omega0, hz_to_rad_s),
            ),
            MediumSpec::Taylor { n0, n1, n3 } => {
                TaylorCubic::new(n0, n1, n3, omega0).and_then(DispersionProfile::taylor)
            }
            MediumSpec::Cad {
                fwhm_hz,
                group_index,
            } => {
                let target = match group_index {
                    Some(g) => Ok(g),
                    None => partial_fill_cad_target(self.fill_fraction),
                };
                target
                    .and_then(|t| DispersionProfile::cad(fwhm_hz_to_half_width(fwhm_hz), omega0, t))
            }
        };
        p.map_err(|e| core_err(&r, key, e))
    }

    pub fn half_width(&self) -> Option<f64> {
        match self.medium {
            MediumSpec::Lorentzian { fwhm_hz, .. } | MediumSpec::Cad { fwhm_hz, .. } => {
                Some(fwhm_hz_to_half_width(fwhm_hz))
            }
            _ => None,
        }
    }

    pub fn require_omega0(&self) -> Result<f64, ScenarioError> {
        self.omega0
            .ok_or_else(|| ScenarioError::Missing("needs frequency_hz or wavelength_m".into()))
    }

    pub fn require_geometry(&self) -> Result<LoopGeometry, ScenarioError> {
        self.geometry.ok_or_else(|| {
            ScenarioError::Missing("needs radius_m, or area_m2 and perimeter_m".into())
        })
    }

    pub fn cavity(&self) -> Result<RingCavity, ScenarioError> {
        let g = self.require_geometry()?;
        let w0 = self.require_omega0()?;
        let finesse = self
            .finesse
            .ok_or_else(|| ScenarioError::Missing("needs finesse".into()))?;
        let r = Reader { raw: &self.raw };
        RingCavity::new(g, finesse, self.n0, w0, self.fill_fraction)
            .map_err(|e| core_err(&r, "finesse", e))
    }

    pub fn require_drive(&self) -> Result<&Drive, ScenarioError> {
        self.drive.as_ref().ok_or_else(|| {
            ScenarioError::Missing(
                "needs one of rotation_rad_s, delta_length_m, empty_shift_hz".into(),
            )
        })
    }

    pub fn require_noise(&self) -> Result<NoiseBudget, ScenarioError> {
        self.noise
            .ok_or_else(|| ScenarioError::Missing("needs power_w and measurement_time_s".into()))
    }
}
