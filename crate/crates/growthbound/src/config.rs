//! Run configuration: TOML with dotted keys, validation, and the demo
//! presets.

use crate::weights::{DecayFunction, RadialWeight};
use crate::{Error, Result};
use serde::Deserialize;

/// Top-level mode of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bloch,
    Vmoa,
    Growth,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Bloch => "bloch",
            Mode::Vmoa => "vmoa",
            Mode::Growth => "growth",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: String,
    #[serde(default)]
    out: Option<String>,
    #[serde(default)]
    weight: Option<RawWeight>,
    #[serde(default)]
    decay: Option<RawDecay>,
    #[serde(default)]
    params: RawParams,
    #[serde(default)]
    grid: RawGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    family: String,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    p: Option<f64>,
    /// `(r, omega(r))` samples for the table family.
    #[serde(default)]
    samples: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecay {
    family: String,
    #[serde(default)]
    scale: Option<f64>,
    #[serde(default)]
    gamma: Option<f64>,
    /// `(delta, W)` samples for the table family.
    #[serde(default)]
    samples: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(default)]
    q: Option<u32>,
    #[serde(default)]
    j: Option<usize>,
    #[serde(default)]
    h: Option<f64>,
    #[serde(default)]
    x0: Option<f64>,
    #[serde(default)]
    r_max: Option<f64>,
    /// `1 - r_max`; exact near 1, preferred over `r_max`.
    #[serde(default)]
    r_max_delta: Option<f64>,
    #[serde(default)]
    k_max: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default)]
    radial: Option<usize>,
    #[serde(default)]
    angles: Option<usize>,
    /// Inclusive interval range, e.g. "1..6".
    #[serde(default)]
    k_range: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    angle_grid: Option<usize>,
    #[serde(default)]
    refine_tol: Option<f64>,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub out: Option<String>,
    pub weight: Option<RadialWeight>,
    pub decay: DecayFunction,
    pub q: u32,
    pub j_count: usize,
    pub h: f64,
    pub x0: f64,
    pub r_max_delta: f64,
    pub k_max: usize,
    pub grid_radial: usize,
    pub grid_angles: usize,
    pub k_lo: usize,
    pub k_hi: usize,
    pub jitter_seed: Option<u64>,
    pub angle_grid: usize,
    pub refine_tol: f64,
    pub weight_desc: String,
    pub decay_desc: String,
}

pub fn parse_k_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Config(format!("k range must look like A..B, got {s}")))?;
    let lo: usize = a
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad k range start {a}: {e}")))?;
    let hi: usize = b
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad k range end {b}: {e}")))?;
    if lo < 1 || hi < lo {
        return Err(Error::Config(format!("k range {s} must satisfy 1 <= A <= B")));
    }
    Ok((lo, hi))
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<RunConfig> {
        let raw: RawConfig = toml::from_str(text)
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        RunConfig::from_raw(raw)
    }

    pub fn from_path(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_toml_str(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<RunConfig> {
        let mode = match raw.mode.as_str() {
            "bloch" => Mode::Bloch,
            "vmoa" => Mode::Vmoa,
            "growth" => Mode::Growth,
            other => {
                return Err(Error::Config(format!(
                    "mode must be one of bloch, vmoa, growth; got {other}"
                )))
            }
        };

        let decay = match (&raw.decay, mode) {
            (Some(d), _) => build_decay(d)?,
            (None, Mode::Bloch) => DecayFunction::constant_one(),
            (None, Mode::Vmoa | Mode::Growth) => DecayFunction::inverse_log(),
        };
        let decay = crate::weights::normalize_decay(&decay)?;
        if mode == Mode::Bloch && !decay.is_constant_one() {
            // bloch mode is the big-O regression target
            return Err(Error::Config(
                "bloch mode uses the constant-one decay; use vmoa mode for a decaying W".into(),
            ));
        }

        let weight = match (&raw.weight, mode) {
            (Some(w), Mode::Growth) => Some(build_weight(w)?),
            (None, Mode::Growth) => {
                return Err(Error::Config("growth mode needs a [weight] block".into()))
            }
            (Some(_), _) => {
                return Err(Error::Config(
                    "weight block is only meaningful in growth mode".into(),
                ))
            }
            (None, _) => None,
        };

        let q = raw.params.q.unwrap_or(100);
        let j_count = raw.params.j.unwrap_or(8);
        let h = raw.params.h.unwrap_or(8.0);
        let x0 = raw.params.x0.unwrap_or(-0.1);
        let r_max_delta = match (raw.params.r_max_delta, raw.params.r_max) {
            (Some(d), _) => d,
            (None, Some(r)) => 1.0 - r,
            (None, None) => 1e-6,
        };
        let k_max = raw.params.k_max.unwrap_or(64);

        match mode {
            Mode::Bloch | Mode::Vmoa => {
                let root = (q as f64).sqrt().round() as u32;
                if root * root != q {
                    return Err(Error::Config(format!(
                        "params.q must be a perfect square in {} mode, got {q}",
                        mode.as_str()
                    )));
                }
                if j_count < 3 {
                    return Err(Error::Config("params.j must be at least 3".into()));
                }
            }
            Mode::Growth => {
                if !(h >= 8.0) {
                    return Err(Error::Config(format!(
                        "params.h must satisfy h >= 8, got {h}"
                    )));
                }
                let x0_min = (0.9f64).ln();
                if !(x0 > x0_min && x0 < 0.0) {
                    return Err(Error::Config(format!(
                        "params.x0 must lie in (log(9/10), 0), got {x0}"
                    )));
                }
                if !(r_max_delta > 0.0 && r_max_delta < 0.1) {
                    return Err(Error::Config(format!(
                        "r_max must lie in (9/10, 1); got delta {r_max_delta}"
                    )));
                }
            }
        }

        let (k_lo, k_hi) = match &raw.grid.k_range {
            Some(s) => parse_k_range(s)?,
            None => match mode {
                Mode::Bloch | Mode::Vmoa => (1, j_count - 2),
                Mode::Growth => (3, usize::MAX),
            },
        };

        let weight_desc = weight
            .as_ref()
            .map(|w| w.describe())
            .unwrap_or_else(|| "none".to_string());
        let decay_desc = decay.describe();
        Ok(RunConfig {
            mode,
            out: raw.out,
            weight,
            decay,
            q,
            j_count,
            h,
            x0,
            r_max_delta,
            k_max,
            grid_radial: raw.grid.radial.unwrap_or(40),
            grid_angles: raw.grid.angles.unwrap_or(64),
            k_lo,
            k_hi,
            jitter_seed: raw.grid.seed,
            angle_grid: raw.grid.angle_grid.unwrap_or(1024),
            refine_tol: raw.grid.refine_tol.unwrap_or(1e-12),
            weight_desc,
            decay_desc,
        })
    }

    /// Named end-to-end presets.
    pub fn demo(name: &str) -> Result<RunConfig> {
        let text = match name {
            // classical big-O pair: W == 1, derivative bound 1/(1-|z|)
            "ramey-ullrich" => {
                r#"
mode = "bloch"
decay = { family = "constant-one" }
params = { q = 100, j = 8 }
grid = { k_range = "1..6" }
"#
            }
            // f = sum j^{-1} z^{100^j} and the half-offset partner
            "vmoa" => {
                r#"
mode = "vmoa"
decay = { family = "inverse-log" }
params = { q = 100, j = 8 }
grid = { k_range = "1..6" }
"#
            }
            // little-o growth pair over a steep log-convex weight; the
            // power decay is fast enough for the one-decade profile check
            "abakumov-doubtsov-little" => {
                r#"
mode = "growth"
weight = { family = "exponential", c = 1.0, p = 1.0 }
decay = { family = "power", gamma = 0.3 }
params = { h = 8.0, x0 = -0.1, r_max_delta = 1e-6, k_max = 400 }
grid = { radial = 12, angles = 32 }
"#
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown demo {other}; available: ramey-ullrich, vmoa, abakumov-doubtsov-little"
                )))
            }
        };
        RunConfig::from_toml_str(text)
    }
}

fn build_weight(raw: &RawWeight) -> Result<RadialWeight> {
    match raw.family.as_str() {
        "power" => {
            let alpha = raw
                .alpha
                .ok_or_else(|| Error::Config("power weight needs weight.alpha".into()))?;
            RadialWeight::power(alpha).map_err(config_err)
        }
        "exponential" => {
            let c = raw
                .c
                .ok_or_else(|| Error::Config("exponential weight needs weight.c".into()))?;
            let p = raw
                .p
                .ok_or_else(|| Error::Config("exponential weight needs weight.p".into()))?;
            RadialWeight::exponential(c, p).map_err(config_err)
        }
        "table" => {
            let samples = raw
                .samples
                .as_ref()
                .ok_or_else(|| Error::Config("table weight needs weight.samples".into()))?;
            RadialWeight::from_samples(samples).map_err(config_err)
        }
        other => Err(Error::Config(format!(
            "unknown weight family {other}; available: power, exponential, table"
        ))),
    }
}

fn build_decay(raw: &RawDecay) -> Result<DecayFunction> {
    match raw.family.as_str() {
        "inverse-log" => match raw.scale {
            Some(s) => DecayFunction::inverse_log_scaled(s).map_err(config_err),
            None => Ok(DecayFunction::inverse_log()),
        },
        "power" => {
            let gamma = raw
                .gamma
                .ok_or_else(|| Error::Config("power decay needs decay.gamma".into()))?;
            DecayFunction::power_delta(gamma).map_err(config_err)
        }
        "table" => {
            let samples = raw
                .samples
                .as_ref()
                .ok_or_else(|| Error::Config("table decay needs decay.samples".into()))?;
            DecayFunction::from_delta_samples(samples).map_err(config_err)
        }
        "constant-one" => Ok(DecayFunction::constant_one()),
        other => Err(Error::Config(format!(
            "unknown decay family {other}; available: inverse-log, power, table, constant-one"
        ))),
    }
}

fn config_err(e: Error) -> Error {
    Error::Config(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dotted_and_table_styles() {
        let cfg = RunConfig::from_toml_str(
            r#"
mode = "growth"
weight.family = "power"
weight.alpha = 1.0
decay.family = "inverse-log"
params.h = 8.0
params.x0 = -0.1
params.r_max_delta = 1e-6
grid.radial = 30
grid.angles = 48
grid.k_range = "3..10"
"#,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Growth);
        assert_eq!(cfg.grid_radial, 30);
        assert_eq!((cfg.k_lo, cfg.k_hi), (3, 10));
        assert!(cfg.weight.is_some());
    }

    #[test]
    fn h_gate_cites_the_bound() {
        let err = RunConfig::from_toml_str(
            r#"
mode = "growth"
weight = { family = "power", alpha = 1.0 }
params = { h = 4.0 }
"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("h >= 8"), "message was: {msg}");
    }

    #[test]
    fn q_square_gate() {
        let err = RunConfig::from_toml_str(
            r#"
mode = "vmoa"
params = { q = 99 }
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("perfect square"));
    }

    #[test]
    fn x0_gate() {
        let err = RunConfig::from_toml_str(
            r#"
mode = "growth"
weight = { family = "power", alpha = 1.0 }
params = { x0 = -0.2 }
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("log(9/10)"));
    }

    #[test]
    fn parse_error_reports_location() {
        let err = RunConfig::from_toml_str("mode = \"vmoa\"\nparams = { q = }\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") || msg.contains('2'), "message: {msg}");
    }

    #[test]
    fn demos_load() {
        for name in ["ramey-ullrich", "vmoa", "abakumov-doubtsov-little"] {
            let cfg = RunConfig::demo(name).unwrap();
            match name {
                "abakumov-doubtsov-little" => assert_eq!(cfg.mode, Mode::Growth),
                "ramey-ullrich" => assert_eq!(cfg.mode, Mode::Bloch),
                _ => assert_eq!(cfg.mode, Mode::Vmoa),
            }
        }
        assert!(RunConfig::demo("unknown").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml_str(
            r#"
mode = "vmoa"
paramss = { q = 100 }
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("paramss") || err.to_string().contains("unknown"));
    }
}
