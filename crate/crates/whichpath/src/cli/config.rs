//! Config file loading: TOML file, `WHICHPATH_SIM_SEED` environment default,
//! and dotted-path flag overrides.
//!
//! Precedence, lowest to highest: built-in defaults, the environment seed,
//! the file, `--section.field=value` flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::InternalBasis;
use crate::interferometer::{Geometry, ModelVariant};
use crate::{Result, SimError};

pub const SEED_ENV_VAR: &str = "WHICHPATH_SIM_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub geometry: GeometrySection,
    pub variant: VariantSection,
    #[serde(default)]
    pub dephasing_sigma_rad: f64,
    pub run: RunSection,
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub wavelength_m: f64,
    pub slit_separation_m: f64,
    pub screen_distance_m: f64,
    pub detector: DetectorSection,
}

/// Either a symmetric array (`count` + `span_m`) or explicit positions.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions_m: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSection {
    pub kind: VariantKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_rad: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    PaperExact,
    MarkerOverlap,
    Collapsed,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_n_samples")]
    pub n_samples: u64,
    #[serde(default)]
    pub measure_internal: MeasureInternal,
    #[serde(default)]
    pub eraser_phi_rad: f64,
}

fn default_n_samples() -> u64 {
    100_000
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureInternal {
    #[default]
    None,
    Ab,
    Rotated,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    #[serde(default)]
    pub formats: Formats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formats {
    Csv,
    Json,
    #[default]
    Both,
}

impl Formats {
    pub fn csv(&self) -> bool {
        matches!(self, Formats::Csv | Formats::Both)
    }

    pub fn json(&self) -> bool {
        matches!(self, Formats::Json | Formats::Both)
    }
}

fn config_err(field: &str, message: impl Into<String>) -> SimError {
    SimError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

impl ConfigFile {
    /// Read, patch (env seed, then flag overrides), deserialize, validate.
    pub fn load(path: &Path, overrides: &[String]) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(
            &text,
            overrides,
            std::env::var(SEED_ENV_VAR).ok().as_deref(),
        )
    }

    pub fn parse(text: &str, overrides: &[String], env_seed: Option<&str>) -> Result<ConfigFile> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| config_err("<file>", format!("not valid TOML: {e}")))?;
        let mut value = toml::Value::Table(table);

        if let Some(raw) = env_seed {
            let seed: i64 = raw
                .parse()
                .map_err(|_| config_err(SEED_ENV_VAR, format!("not an integer seed: {raw:?}")))?;
            let run = value
                .as_table_mut()
                .map(|t| {
                    t.entry("run")
                        .or_insert_with(|| toml::Value::Table(Default::default()))
                })
                .and_then(|v| v.as_table_mut());
            if let Some(run) = run {
                // lowest precedence: only fills a seed the file left out
                run.entry("seed").or_insert(toml::Value::Integer(seed));
            }
        }

        for ov in overrides {
            apply_override(&mut value, ov)?;
        }

        let cfg: ConfigFile = value
            .try_into()
            .map_err(|e| config_err("<file>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        for (field, v) in [
            ("geometry.wavelength_m", g.wavelength_m),
            ("geometry.slit_separation_m", g.slit_separation_m),
            ("geometry.screen_distance_m", g.screen_distance_m),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(config_err(field, format!("must be positive, got {v}")));
            }
        }
        match (&g.detector.positions_m, g.detector.count, g.detector.span_m) {
            (Some(positions), None, None) => {
                if positions.is_empty() {
                    return Err(config_err(
                        "geometry.detector.positions_m",
                        "must list at least one position",
                    ));
                }
                if positions.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(config_err(
                        "geometry.detector.positions_m",
                        "must be strictly increasing",
                    ));
                }
            }
            (None, Some(count), span) => {
                if count < 1 {
                    return Err(config_err("geometry.detector.count", "must be >= 1"));
                }
                match span {
                    Some(s) if s > 0.0 && s.is_finite() => {}
                    Some(s) => {
                        return Err(config_err(
                            "geometry.detector.span_m",
                            format!("must be positive, got {s}"),
                        ));
                    }
                    None if count == 1 => {}
                    None => {
                        return Err(config_err(
                            "geometry.detector.span_m",
                            "required when count > 1",
                        ));
                    }
                }
            }
            _ => {
                return Err(config_err(
                    "geometry.detector",
                    "give either count (+ span_m) or positions_m, not both",
                ));
            }
        }
        match (self.variant.kind, self.variant.chi_rad) {
            (VariantKind::MarkerOverlap, Some(chi)) => {
                if !chi.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&chi) {
                    return Err(config_err(
                        "variant.chi_rad",
                        format!("must lie in [0, pi/2], got {chi}"),
                    ));
                }
            }
            (VariantKind::MarkerOverlap, None) => {
                return Err(config_err(
                    "variant.chi_rad",
                    "required for kind = \"marker_overlap\"",
                ));
            }
            (_, Some(_)) => {
                return Err(config_err(
                    "variant.chi_rad",
                    "only meaningful for kind = \"marker_overlap\"",
                ));
            }
            _ => {}
        }
        if !self.dephasing_sigma_rad.is_finite() || self.dephasing_sigma_rad < 0.0 {
            return Err(config_err(
                "dephasing_sigma_rad",
                format!("must be >= 0, got {}", self.dephasing_sigma_rad),
            ));
        }
        if self.run.n_samples < 1 {
            return Err(config_err("run.n_samples", "must be >= 1"));
        }
        if !self.run.eraser_phi_rad.is_finite() {
            return Err(config_err("run.eraser_phi_rad", "must be finite"));
        }
        if self.output.dir.as_os_str().is_empty() {
            return Err(config_err("output.dir", "must not be empty"));
        }
        Ok(())
    }

    pub fn build_geometry(&self) -> Result<Geometry> {
        let g = &self.geometry;
        if let Some(positions) = &g.detector.positions_m {
            Geometry::new(
                g.wavelength_m,
                g.slit_separation_m,
                g.screen_distance_m,
                positions.clone(),
            )
        } else {
            Geometry::with_symmetric_array(
                g.wavelength_m,
                g.slit_separation_m,
                g.screen_distance_m,
                g.detector.count.unwrap_or(1),
                g.detector.span_m.unwrap_or(0.0),
            )
        }
    }

    pub fn build_variant(&self) -> ModelVariant {
        match self.variant.kind {
            VariantKind::PaperExact => ModelVariant::PaperExact,
            VariantKind::Collapsed => ModelVariant::Collapsed,
            VariantKind::MarkerOverlap => ModelVariant::MarkerOverlap {
                chi: self.variant.chi_rad.unwrap_or(0.0),
            },
        }
    }

    pub fn seed(&self) -> u64 {
        self.run.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn measure_internal(&self) -> Option<InternalBasis> {
        match self.run.measure_internal {
            MeasureInternal::None => None,
            MeasureInternal::Ab => Some(InternalBasis::ModeAB),
            MeasureInternal::Rotated => Some(InternalBasis::Rotated {
                phi: self.run.eraser_phi_rad,
            }),
        }
    }
}

/// Apply one `--section.field=value` override to the TOML tree.
fn apply_override(value: &mut toml::Value, raw: &str) -> Result<()> {
    let body = raw.strip_prefix("--").unwrap_or(raw);
    let (path, rhs) = body
        .split_once('=')
        .ok_or_else(|| config_err(raw, "override must look like --section.field=value"))?;
    if path.is_empty() || rhs.is_empty() {
        return Err(config_err(raw, "empty path or value"));
    }
    let mut node = value;
    let segments: Vec<&str> = path.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| config_err(path, format!("`{seg}` is not inside a table")))?;
        if i + 1 == segments.len() {
            table.insert((*seg).to_string(), parse_scalar(rhs));
            return Ok(());
        }
        node = table
            .entry((*seg).to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    unreachable!("segments is non-empty")
}

fn parse_scalar(raw: &str) -> toml::Value {
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    toml::Value::String(raw.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const DEMO: &str = r#"
[geometry]
wavelength_m = 500e-9
slit_separation_m = 100e-6
screen_distance_m = 1.0

[geometry.detector]
count = 64
span_m = 25e-3

[variant]
kind = "paper_exact"

[run]
seed = 42
n_samples = 100000

[output]
dir = "out"
"#;

    #[test]
    fn demo_config_parses_and_validates() {
        let cfg = ConfigFile::parse(DEMO, &[], None).unwrap();
        assert_eq!(cfg.seed(), 42);
        assert_eq!(cfg.run.n_samples, 100_000);
        assert_eq!(cfg.build_geometry().unwrap().n_elements(), 64);
        assert_eq!(cfg.build_variant(), ModelVariant::PaperExact);
        assert!(cfg.output.formats.csv() && cfg.output.formats.json());
    }

    #[test]
    fn negative_wavelength_names_the_field() {
        let bad = DEMO.replace("wavelength_m = 500e-9", "wavelength_m = -500e-9");
        match ConfigFile::parse(&bad, &[], None) {
            Err(SimError::Config { field, .. }) => {
                assert_eq!(field, "geometry.wavelength_m");
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn chi_is_required_for_marker_overlap_only() {
        let marker = DEMO.replace("kind = \"paper_exact\"", "kind = \"marker_overlap\"");
        assert!(matches!(
            ConfigFile::parse(&marker, &[], None),
            Err(SimError::Config { .. })
        ));
        let ok = marker.replace(
            "kind = \"marker_overlap\"",
            "kind = \"marker_overlap\"\nchi_rad = 0.5",
        );
        let cfg = ConfigFile::parse(&ok, &[], None).unwrap();
        assert_eq!(
            cfg.build_variant(),
            ModelVariant::MarkerOverlap { chi: 0.5 }
        );
        // and chi on a non-marker variant is rejected
        let stray = DEMO.replace(
            "kind = \"paper_exact\"",
            "kind = \"paper_exact\"\nchi_rad = 0.5",
        );
        assert!(ConfigFile::parse(&stray, &[], None).is_err());
    }

    #[test]
    fn overrides_beat_the_file() {
        let cfg = ConfigFile::parse(
            DEMO,
            &[
                "--run.seed=7".into(),
                "--variant.kind=collapsed".into(),
                "--output.formats=json".into(),
                "--dephasing_sigma_rad=0.5".into(),
            ],
            None,
        )
        .unwrap();
        assert_eq!(cfg.seed(), 7);
        assert_eq!(cfg.build_variant(), ModelVariant::Collapsed);
        assert_eq!(cfg.output.formats, Formats::Json);
        assert_eq!(cfg.dephasing_sigma_rad, 0.5);
    }

    #[test]
    fn env_seed_is_lowest_precedence() {
        // file sets a seed: env is ignored
        let cfg = ConfigFile::parse(DEMO, &[], Some("9001")).unwrap();
        assert_eq!(cfg.seed(), 42);
        // file omits the seed: env fills it
        let no_seed = DEMO.replace("seed = 42\n", "");
        let cfg = ConfigFile::parse(&no_seed, &[], Some("9001")).unwrap();
        assert_eq!(cfg.seed(), 9001);
        // flags beat env
        let cfg = ConfigFile::parse(&no_seed, &["--run.seed=5".into()], Some("9001")).unwrap();
        assert_eq!(cfg.seed(), 5);
        // nothing anywhere: built-in default
        let cfg = ConfigFile::parse(&no_seed, &[], None).unwrap();
        assert_eq!(cfg.seed(), DEFAULT_SEED);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = DEMO.replace("n_samples = 100000", "n_samples = 100000\nbogus = 1");
        assert!(ConfigFile::parse(&bad, &[], None).is_err());
    }

    #[test]
    fn explicit_positions_work_and_must_increase() {
        let pos = DEMO.replace(
            "count = 64\nspan_m = 25e-3",
            "positions_m = [-1e-3, 0.0, 1e-3]",
        );
        let cfg = ConfigFile::parse(&pos, &[], None).unwrap();
        assert_eq!(cfg.build_geometry().unwrap().n_elements(), 3);
        let bad = DEMO.replace("count = 64\nspan_m = 25e-3", "positions_m = [1e-3, 0.0]");
        assert!(ConfigFile::parse(&bad, &[], None).is_err());
    }

    #[test]
    fn malformed_overrides_are_usage_errors() {
        assert!(ConfigFile::parse(DEMO, &["--run.seed".into()], None).is_err());
        assert!(ConfigFile::parse(DEMO, &["--run.seed=".into()], None).is_err());
    }

    #[test]
    fn rotated_measurement_uses_the_phi_field() {
        let rotated = DEMO.replace(
            "n_samples = 100000",
            "n_samples = 100000\nmeasure_internal = \"rotated\"\neraser_phi_rad = 0.3",
        );
        let cfg = ConfigFile::parse(&rotated, &[], None).unwrap();
        assert_eq!(
            cfg.measure_internal(),
            Some(InternalBasis::Rotated { phi: 0.3 })
        );
    }
}
