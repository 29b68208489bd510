//! Plain-text (TOML) configuration with explicit units in key names.
//!
//! All values are converted to SI at load time; the rest of the library
//! never sees centimeters, picofarads or megahertz. Unknown keys are
//! rejected, and with `require_all_physics = true` every physics key must
//! be spelled out in the file instead of falling back to the built-in
//! defaults.

use crate::channel::{NoiseParams, PdParams, Power};
use crate::error::{Result, VlpError};
use crate::geometry::{OirsElement, Scene};
use crate::Vec3;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Default lumens-to-watts conversion, lm/W.
///
/// Calibrated so the analytic position error bound reproduces the reference
/// accuracy curves at both 1000 lm and 3000 lm; the calibration lands on the
/// maximum spectral luminous efficacy (555 nm), i.e. the conversion treats
/// the photometric rating as p_lm = 683 * p_W.
pub const DEFAULT_LUMINOUS_EFFICACY: f64 = 683.0;

/// Elementary charge, C.
pub const DEFAULT_ELECTRON_CHARGE: f64 = 1.602e-19;

/// Boltzmann constant, J/K.
pub const DEFAULT_BOLTZMANN: f64 = 1.380649e-23;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scene: RawScene,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    experiment: Option<ExperimentSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    room_dims_m: [f64; 3],
    led_m: [f64; 3],
    pd_m: [f64; 3],
    #[serde(default)]
    oirs: Vec<RawOirs>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOirs {
    center_m: [f64; 3],
    width_m: f64,
    height_m: f64,
    #[serde(default)]
    alpha_deg: f64,
    #[serde(default)]
    beta_deg: f64,
    wall_normal: [f64; 3],
    reflectivity: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    fov_deg: Option<f64>,
    half_intensity_angle_deg: Option<f64>,
    refractive_index: Option<f64>,
    filter_gain: Option<f64>,
    area_cm2: Option<f64>,
    responsivity_a_per_w: Option<f64>,
    background_current_pa: Option<f64>,
    noise_bw_factor_i2: Option<f64>,
    noise_bw_factor_i3: Option<f64>,
    temperature_k: Option<f64>,
    open_loop_gain: Option<f64>,
    channel_noise_factor: Option<f64>,
    transconductance_ms: Option<f64>,
    capacitance_pf_per_cm2: Option<f64>,
    bandwidth_mhz: Option<f64>,
    electron_charge_c: Option<f64>,
    boltzmann_j_per_k: Option<f64>,
    luminous_efficacy_lm_per_w: Option<f64>,
    power_lm: Option<f64>,
    power_w: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seed: Option<u64>,
    trials: Option<usize>,
    out_dir: Option<String>,
    require_all_physics: Option<bool>,
}

impl Default for RawRun {
    fn default() -> Self {
        RawRun { seed: None, trials: None, out_dir: None, require_all_physics: None }
    }
}

/// Which quantity a generic sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    SnrDb,
    AzimuthDeg,
    HorizontalM,
    OuterIter,
}

/// Estimator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Ml,
    Rml,
}

/// How the IWLS weights are derived from the distance error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// w_j = 1 / DEB_j
    InvDeb,
    /// w_j = 1 / DEB_j^2
    InvDebSq,
}

/// Experiment block of a config file, consumed by the `sweep` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_kn")]
    pub k_n: usize,
    /// Sample count of the LoS phase backing the NLoS subtraction.
    #[serde(default = "default_k_los")]
    pub k_los: usize,
    #[serde(default = "default_ml")]
    pub los_estimator: EstimatorKind,
    #[serde(default = "default_rml")]
    pub nlos_estimator: EstimatorKind,
    #[serde(default = "default_weight_mode")]
    pub weight_mode: WeightMode,
    /// For `variable = "snr_db"`: sweep the reflected path of a
    /// single-mirror scene instead of the LoS link.
    #[serde(default)]
    pub nlos_target: bool,
}

fn default_k() -> usize {
    1
}
fn default_kn() -> usize {
    5
}
fn default_k_los() -> usize {
    10_000
}
fn default_ml() -> EstimatorKind {
    EstimatorKind::Ml
}
fn default_rml() -> EstimatorKind {
    EstimatorKind::Rml
}
fn default_weight_mode() -> WeightMode {
    WeightMode::InvDeb
}

/// Run-level settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSettings {
    pub seed: u64,
    pub trials: usize,
    pub out_dir: String,
}

/// Fully validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub scene: Scene,
    pub run: RunSettings,
    pub experiment: Option<ExperimentSpec>,
    /// SHA-256 of the source file, hex.
    pub config_hash: String,
    pub derived: DerivedConstants,
}

/// Constants derived at load time and echoed to the provenance record.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedConstants {
    /// Lambertian order m.
    pub lambertian_order: f64,
    /// Concentrator gain inside the FoV.
    pub concentrator_gain: f64,
    /// Noise floor a, A^2.
    pub noise_a: f64,
    /// Noise slope b, A.
    pub noise_b: f64,
    /// LoS coefficient xi at the configured power, A m^(m+3).
    pub xi: f64,
}

impl DerivedConstants {
    pub fn of(scene: &Scene) -> Self {
        let c = crate::channel::ChannelConstants::of(scene);
        DerivedConstants {
            lambertian_order: c.lambertian_order,
            concentrator_gain: c.concentrator_gain,
            noise_a: c.noise.a,
            noise_b: c.noise.b,
            xi: crate::estimation::los_coefficient(scene).xi,
        }
    }
}

fn require(field: Option<f64>, name: &'static str, default: f64, strict: bool) -> Result<f64> {
    match field {
        Some(v) => Ok(v),
        None if strict => Err(VlpError::ValidationError(format!("missing physics key: {name}"))),
        None => Ok(default),
    }
}

/// Load and validate a configuration file.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)?;
    let hash = hex_digest(text.as_bytes());
    let raw: RawConfig = toml::from_str(&text).map_err(|e| VlpError::ParseError {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    build_config(raw, hash)
}

fn build_config(raw: RawConfig, config_hash: String) -> Result<Config> {
    let strict = raw.run.require_all_physics.unwrap_or(false);
    let p = &raw.physics;
    let fov = require(p.fov_deg, "fov_deg", 70.0, strict)?.to_radians();
    let half = require(p.half_intensity_angle_deg, "half_intensity_angle_deg", 70.0, strict)?
        .to_radians();
    let pd_params = PdParams {
        area: require(p.area_cm2, "area_cm2", 0.2, strict)? * 1e-4,
        filter_gain: require(p.filter_gain, "filter_gain", 1.0, strict)?,
        fov,
        refractive_index: require(p.refractive_index, "refractive_index", 1.5, strict)?,
        responsivity: require(p.responsivity_a_per_w, "responsivity_a_per_w", 0.54, strict)?,
        half_intensity_angle: half,
    };
    let noise_params = NoiseParams {
        electron_charge: require(p.electron_charge_c, "electron_charge_c", DEFAULT_ELECTRON_CHARGE, strict)?,
        bandwidth: require(p.bandwidth_mhz, "bandwidth_mhz", 5.0, strict)? * 1e6,
        background_current: require(p.background_current_pa, "background_current_pa", 5.0, strict)? * 1e-12,
        noise_bw_factor_i2: require(p.noise_bw_factor_i2, "noise_bw_factor_i2", 0.562, strict)?,
        noise_bw_factor_i3: require(p.noise_bw_factor_i3, "noise_bw_factor_i3", 0.0868, strict)?,
        boltzmann: require(p.boltzmann_j_per_k, "boltzmann_j_per_k", DEFAULT_BOLTZMANN, strict)?,
        temperature: require(p.temperature_k, "temperature_k", 295.0, strict)?,
        open_loop_gain: require(p.open_loop_gain, "open_loop_gain", 10.0, strict)?,
        capacitance_per_area: require(p.capacitance_pf_per_cm2, "capacitance_pf_per_cm2", 112.0, strict)?
            * 1e-12
            / 1e-4,
        channel_noise_factor: require(p.channel_noise_factor, "channel_noise_factor", 1.5, strict)?,
        transconductance: require(p.transconductance_ms, "transconductance_ms", 30.0, strict)? * 1e-3,
    };
    let efficacy = require(
        p.luminous_efficacy_lm_per_w,
        "luminous_efficacy_lm_per_w",
        DEFAULT_LUMINOUS_EFFICACY,
        strict,
    )?;
    let power = match (p.power_lm, p.power_w) {
        (Some(_), Some(_)) => {
            return Err(VlpError::ValidationError(
                "specify power_lm or power_w, not both".into(),
            ))
        }
        (Some(lm), None) => Power::from_lumens(lm, efficacy),
        (None, Some(w)) => Power::from_watts(w, efficacy),
        (None, None) if strict => {
            return Err(VlpError::ValidationError("missing physics key: power_lm".into()))
        }
        (None, None) => Power::from_lumens(1000.0, efficacy),
    };

    let oirs = raw
        .scene
        .oirs
        .iter()
        .map(|o| OirsElement {
            center: o.center_m.into(),
            width: o.width_m,
            height: o.height_m,
            alpha: o.alpha_deg.to_radians(),
            beta: o.beta_deg.to_radians(),
            active: false,
            wall_normal: Vec3::from(o.wall_normal).normalized(),
            reflectivity: o.reflectivity,
        })
        .collect();

    let scene = Scene {
        room_dims: raw.scene.room_dims_m.into(),
        led: raw.scene.led_m.into(),
        oirs,
        pd: raw.scene.pd_m.into(),
        pd_params,
        noise_params,
        power,
    };
    scene.validate()?;

    let derived = DerivedConstants::of(&scene);
    Ok(Config {
        scene,
        run: RunSettings {
            seed: raw.run.seed.unwrap_or(1),
            trials: raw.run.trials.unwrap_or(10_000),
            out_dir: raw.run.out_dir.unwrap_or_else(|| "out".into()),
        },
        experiment: raw.experiment,
        config_hash,
        derived,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance record written next to every run's outputs.
pub fn write_run_meta(
    dir: &Path,
    config_hash: &str,
    seed: u64,
    derived: &DerivedConstants,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let body = format!(
        "version = {}\nconfig_sha256 = {}\nseed = {}\nlambertian_order = {:.12e}\n\
         concentrator_gain = {:.12e}\nnoise_a_A2 = {:.12e}\nnoise_b_A = {:.12e}\nxi = {:.12e}\n",
        env!("CARGO_PKG_VERSION"),
        config_hash,
        seed,
        derived.lambertian_order,
        derived.concentrator_gain,
        derived.noise_a,
        derived.noise_b,
        derived.xi,
    );
    std::fs::write(dir.join("run.meta"), body)?;
    Ok(())
}

/// Reference scene: Table-1 physics, 5x5x3 room, ceiling LED at the center,
/// 1000 lm transmit power, and the given PD position and mirror placements
/// (center, wall normal) with 1 x 1 m elements at rest.
pub fn table1_scene(pd: Vec3, mirrors: &[(Vec3, Vec3)]) -> Scene {
    let pd_params = PdParams {
        area: 0.2e-4,
        filter_gain: 1.0,
        fov: 70f64.to_radians(),
        refractive_index: 1.5,
        responsivity: 0.54,
        half_intensity_angle: 70f64.to_radians(),
    };
    let noise_params = NoiseParams {
        electron_charge: DEFAULT_ELECTRON_CHARGE,
        bandwidth: 5e6,
        background_current: 5e-12,
        noise_bw_factor_i2: 0.562,
        noise_bw_factor_i3: 0.0868,
        boltzmann: DEFAULT_BOLTZMANN,
        temperature: 295.0,
        open_loop_gain: 10.0,
        capacitance_per_area: 112e-12 / 1e-4,
        channel_noise_factor: 1.5,
        transconductance: 30e-3,
    };
    Scene {
        room_dims: Vec3::new(5.0, 5.0, 3.0),
        led: Vec3::new(2.5, 2.5, 3.0),
        oirs: mirrors
            .iter()
            .map(|&(c, n)| OirsElement::at_rest(c, 1.0, 1.0, n, 0.95))
            .collect(),
        pd,
        pd_params,
        noise_params,
        power: Power::from_lumens(1000.0, DEFAULT_LUMINOUS_EFFICACY),
    }
}

/// The four wall-center mirror placements of the reference room.
pub fn wall_center_mirrors() -> Vec<(Vec3, Vec3)> {
    vec![
        (Vec3::new(2.5, 0.0, 1.5), Vec3::EY),
        (Vec3::new(2.5, 5.0, 1.5), -Vec3::EY),
        (Vec3::new(0.0, 2.5, 1.5), Vec3::EX),
        (Vec3::new(5.0, 2.5, 1.5), -Vec3::EX),
    ]
}

/// Evenly distributed wall placements used by the coverage maps.
pub fn wall_mirrors(n: usize) -> Vec<(Vec3, Vec3)> {
    let per_wall = n / 4;
    assert!(per_wall * 4 == n && per_wall >= 1, "mirror count must be a positive multiple of 4");
    let offsets: Vec<f64> = match per_wall {
        1 => vec![2.5],
        2 => vec![2.0, 3.0],
        3 => vec![1.5, 2.5, 3.5],
        k => (0..k).map(|i| 2.5 + (i as f64 - (k as f64 - 1.0) / 2.0)).collect(),
    };
    let mut out = Vec::with_capacity(n);
    for &t in &offsets {
        out.push((Vec3::new(t, 0.0, 1.5), Vec3::EY));
    }
    for &t in &offsets {
        out.push((Vec3::new(t, 5.0, 1.5), -Vec3::EY));
    }
    for &t in &offsets {
        out.push((Vec3::new(0.0, t, 1.5), Vec3::EX));
    }
    for &t in &offsets {
        out.push((Vec3::new(5.0, t, 1.5), -Vec3::EX));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const MINIMAL: &str = r#"
[scene]
room_dims_m = [5.0, 5.0, 3.0]
led_m = [2.5, 2.5, 3.0]
pd_m = [3.0, 3.0, 0.0]

[[scene.oirs]]
center_m = [2.5, 0.0, 1.5]
width_m = 1.0
height_m = 1.0
wall_normal = [0.0, 1.0, 0.0]
reflectivity = 0.95
"#;

    #[test]
    fn minimal_config_loads_with_table1_defaults() {
        let f = write_temp(MINIMAL);
        let cfg = load_config(f.path()).unwrap();
        assert_relative_eq!(cfg.derived.lambertian_order, 0.6460587703487338, max_relative = 1e-12);
        assert_relative_eq!(cfg.derived.concentrator_gain, 2.5480672457215370, max_relative = 1e-12);
        assert_relative_eq!(cfg.derived.noise_b, 1.602e-12, max_relative = 1e-12);
        assert_eq!(cfg.scene.oirs.len(), 1);
        assert_eq!(cfg.config_hash.len(), 64);
    }

    #[test]
    fn strict_mode_names_the_missing_key() {
        let f = write_temp(&format!("{MINIMAL}\n[run]\nrequire_all_physics = true\n"));
        let err = load_config(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("fov_deg") || msg.contains("missing physics key"), "{msg}");
    }

    #[test]
    fn strict_mode_flags_missing_bandwidth_specifically() {
        // all keys present except bandwidth_mhz
        let body = r#"
[scene]
room_dims_m = [5.0, 5.0, 3.0]
led_m = [2.5, 2.5, 3.0]
pd_m = [3.0, 3.0, 0.0]

[physics]
fov_deg = 70.0
half_intensity_angle_deg = 70.0
refractive_index = 1.5
filter_gain = 1.0
area_cm2 = 0.2
responsivity_a_per_w = 0.54
background_current_pa = 5.0
noise_bw_factor_i2 = 0.562
noise_bw_factor_i3 = 0.0868
temperature_k = 295.0
open_loop_gain = 10.0
channel_noise_factor = 1.5
transconductance_ms = 30.0
capacitance_pf_per_cm2 = 112.0
electron_charge_c = 1.602e-19
boltzmann_j_per_k = 1.380649e-23
luminous_efficacy_lm_per_w = 683.0
power_lm = 1000.0

[run]
require_all_physics = true
"#;
        let f = write_temp(body);
        let err = load_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("bandwidth_mhz"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let f = write_temp(&format!("{MINIMAL}\n[physics]\nbogus_key = 1.0\n"));
        assert!(matches!(load_config(f.path()), Err(VlpError::ParseError { .. })));
    }

    #[test]
    fn out_of_room_mirror_rejected_with_element_index() {
        let body = MINIMAL.replace("center_m = [2.5, 0.0, 1.5]", "center_m = [2.5, -0.5, 1.5]");
        let f = write_temp(&body);
        let err = load_config(f.path()).unwrap_err();
        assert!(err.to_string().contains("element 0"), "{err}");
    }
}
