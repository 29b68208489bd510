//! Optical channel gains and receiver noise.
//!
//! The LoS gain follows the Lambertian point-source model; the mirror bounce
//! keeps the same angular factors but accumulates path loss over the total
//! LED-mirror-PD length (additive near-field model). Receiver noise is
//! Gaussian with a variance affine in the received mean photocurrent:
//! shot noise contributes the signal-dependent slope, thermal noise the
//! floor. That affine structure, sigma^2(mu) = a + b*mu, is what the ML
//! estimators and every Fisher-information expression below build on.

use crate::geometry::Scene;
use crate::Vec3;
use serde::{Deserialize, Serialize};

/// Photodetector front-end parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PdParams {
    /// Active area, m^2.
    pub area: f64,
    /// Optical filter gain (dimensionless).
    pub filter_gain: f64,
    /// Field-of-view half angle of the concentrator, rad.
    pub fov: f64,
    /// Refractive index of the concentrator.
    pub refractive_index: f64,
    /// Responsivity, A/W.
    pub responsivity: f64,
    /// LED half-intensity radiation angle, rad.
    pub half_intensity_angle: f64,
}

impl PdParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.area > 0.0) {
            return Err("pd area must be positive".into());
        }
        if !(self.fov > 0.0 && self.fov <= std::f64::consts::FRAC_PI_2) {
            return Err("pd fov must lie in (0, 90] degrees".into());
        }
        if !(self.refractive_index >= 1.0) {
            return Err("refractive index must be >= 1".into());
        }
        if !(self.responsivity > 0.0) {
            return Err("responsivity must be positive".into());
        }
        if !(self.half_intensity_angle > 0.0
            && self.half_intensity_angle < std::f64::consts::FRAC_PI_2)
        {
            return Err("half-intensity angle must lie in (0, 90) degrees".into());
        }
        Ok(())
    }

    /// Lambertian order of the LED.
    pub fn lambertian_order(&self) -> f64 {
        lambertian_order(self.half_intensity_angle)
    }

    /// In-FoV concentrator gain.
    pub fn concentrator_gain_peak(&self) -> f64 {
        self.refractive_index * self.refractive_index / self.fov.sin().powi(2)
    }
}

/// Receiver noise parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Electron charge, C.
    pub electron_charge: f64,
    /// Receiver bandwidth, Hz.
    pub bandwidth: f64,
    /// Background-light induced current, A.
    pub background_current: f64,
    /// Noise bandwidth factor of the B^2 thermal term.
    pub noise_bw_factor_i2: f64,
    /// Noise bandwidth factor of the B^3 thermal term.
    pub noise_bw_factor_i3: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
    /// Absolute temperature, K.
    pub temperature: f64,
    /// Open-loop voltage gain.
    pub open_loop_gain: f64,
    /// Fixed capacitance per unit area, F/m^2.
    pub capacitance_per_area: f64,
    /// FET channel noise factor.
    pub channel_noise_factor: f64,
    /// FET transconductance, S.
    pub transconductance: f64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("electron_charge", self.electron_charge),
            ("bandwidth", self.bandwidth),
            ("background_current", self.background_current),
            ("noise_bw_factor_i2", self.noise_bw_factor_i2),
            ("noise_bw_factor_i3", self.noise_bw_factor_i3),
            ("boltzmann", self.boltzmann),
            ("temperature", self.temperature),
            ("open_loop_gain", self.open_loop_gain),
            ("capacitance_per_area", self.capacitance_per_area),
            ("channel_noise_factor", self.channel_noise_factor),
            ("transconductance", self.transconductance),
        ];
        for (name, v) in fields {
            if !(v > 0.0) {
                return Err(format!("noise parameter {name} must be strictly positive"));
            }
        }
        Ok(())
    }
}

/// Transmit power, carried in both radiometric and photometric form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Power {
    /// Radiometric power, W.
    pub radiometric: f64,
    /// Photometric power, lm.
    pub photometric: f64,
    /// Conversion constant, lm/W.
    pub luminous_efficacy: f64,
}

impl Power {
    pub fn from_lumens(lm: f64, efficacy: f64) -> Self {
        Power { radiometric: lm / efficacy, photometric: lm, luminous_efficacy: efficacy }
    }

    pub fn from_watts(w: f64, efficacy: f64) -> Self {
        Power { radiometric: w, photometric: w * efficacy, luminous_efficacy: efficacy }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.radiometric < 0.0 || self.photometric < 0.0 {
            return Err("power must be non-negative".into());
        }
        let implied = self.photometric / self.luminous_efficacy;
        if (implied - self.radiometric).abs() > 1e-9 * self.radiometric.max(1e-300) {
            return Err("photometric and radiometric power disagree with the efficacy".into());
        }
        Ok(())
    }
}

/// Lambertian order m from the half-intensity angle.
pub fn lambertian_order(half_intensity_angle: f64) -> f64 {
    assert!(
        half_intensity_angle > 0.0 && half_intensity_angle < std::f64::consts::FRAC_PI_2,
        "half-intensity angle outside (0, pi/2)"
    );
    -1.0 / half_intensity_angle.cos().log2()
}

/// Non-imaging concentrator gain at incidence angle `phi`.
///
/// Hard cutoff at the FoV: zero outside, f^2/sin^2(psi) inside.
pub fn concentrator_gain(phi: f64, psi: f64, refractive_index: f64) -> f64 {
    if (0.0..=psi).contains(&phi) {
        refractive_index * refractive_index / psi.sin().powi(2)
    } else {
        0.0
    }
}

/// Lambertian channel gain in its general angular form.
pub fn los_gain_angular(d: f64, theta: f64, phi: f64, pd: &PdParams) -> f64 {
    let m = pd.lambertian_order();
    let g = concentrator_gain(phi, pd.fov, pd.refractive_index);
    pd.area * pd.filter_gain * g * (m + 1.0) / (2.0 * std::f64::consts::PI * d * d)
        * theta.cos().powf(m)
        * phi.cos()
}

/// LoS gain with the co-oriented LED/PD substitution cos(theta) = cos(phi) = q_z/d.
pub fn los_gain(d: f64, led_height: f64, pd: &PdParams) -> f64 {
    let m = pd.lambertian_order();
    let g = pd.concentrator_gain_peak();
    pd.area * pd.filter_gain * g * (m + 1.0) * led_height.powf(m + 1.0)
        / (2.0 * std::f64::consts::PI * d.powf(m + 3.0))
}

/// Mirror-bounce gain in its general angular form (additive path loss).
pub fn nlos_gain_angular(
    s_n: f64,
    d_n: f64,
    theta_n: f64,
    phi_n: f64,
    reflectivity: f64,
    pd: &PdParams,
) -> f64 {
    let m = pd.lambertian_order();
    let g = concentrator_gain(phi_n, pd.fov, pd.refractive_index);
    let total = s_n + d_n;
    reflectivity * pd.area * pd.filter_gain * g * (m + 1.0)
        / (2.0 * std::f64::consts::PI * total * total)
        * theta_n.cos().powf(m)
        * phi_n.cos()
}

/// Mirror-bounce gain with the geometric cosines substituted in.
///
/// `reflection_point` is the specular point on the mirror; the LED-side and
/// PD-side cosines become (q_z - r_z)/s_n and r_z/d_n.
pub fn nlos_gain(
    s_n: f64,
    d_n: f64,
    reflection_point: Vec3,
    led_height: f64,
    reflectivity: f64,
    pd: &PdParams,
) -> f64 {
    let m = pd.lambertian_order();
    let g = pd.concentrator_gain_peak();
    let rz = reflection_point.z;
    let total = s_n + d_n;
    reflectivity * pd.area * pd.filter_gain * g * (m + 1.0) * (led_height - rz).powf(m) * rz
        / (2.0 * std::f64::consts::PI * s_n.powf(m) * total * total * d_n)
}

/// Shot-noise variance at received optical power `p_rx`, A^2.
pub fn shot_variance(p_rx: f64, np: &NoiseParams, responsivity: f64) -> f64 {
    2.0 * np.electron_charge * responsivity * p_rx * np.bandwidth
        + 2.0 * np.electron_charge * np.background_current * np.bandwidth
}

/// Thermal-noise variance, A^2. Signal independent.
pub fn thermal_variance(np: &NoiseParams, area: f64) -> f64 {
    use std::f64::consts::PI;
    let kt = np.boltzmann * np.temperature;
    let ca = np.capacitance_per_area * area;
    8.0 * PI * kt / np.open_loop_gain * ca * np.noise_bw_factor_i2 * np.bandwidth.powi(2)
        + 16.0 * PI * PI * kt * np.channel_noise_factor / np.transconductance
            * ca
            * ca
            * np.noise_bw_factor_i3
            * np.bandwidth.powi(3)
}

/// Affine noise law sigma^2(mu) = a + b*mu over the mean photocurrent mu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCoefficients {
    /// Floor, A^2: thermal variance plus the dark shot term.
    pub a: f64,
    /// Slope, A: 2 q B.
    pub b: f64,
}

impl NoiseCoefficients {
    pub fn from_params(np: &NoiseParams, pd: &PdParams) -> Self {
        let b = 2.0 * np.electron_charge * np.bandwidth;
        let a = thermal_variance(np, pd.area) + b * np.background_current;
        NoiseCoefficients { a, b }
    }

    /// Total noise variance at mean current `mu` (A), in A^2.
    pub fn variance_at(&self, mu: f64) -> f64 {
        self.a + self.b * mu
    }
}

/// Derived channel constants for a scene, all at the scene's transmit power.
#[derive(Debug, Clone, Copy)]
pub struct ChannelConstants {
    pub lambertian_order: f64,
    pub concentrator_gain: f64,
    pub noise: NoiseCoefficients,
}

impl ChannelConstants {
    pub fn of(scene: &Scene) -> Self {
        ChannelConstants {
            lambertian_order: scene.pd_params.lambertian_order(),
            concentrator_gain: scene.pd_params.concentrator_gain_peak(),
            noise: NoiseCoefficients::from_params(&scene.noise_params, &scene.pd_params),
        }
    }
}

/// Eq.-(10)-style SNR for a given activation pattern: squared mean signal
/// current over the total noise variance at that current.
///
/// Active elements with no usable reflection contribute zero gain.
pub fn snr(scene: &Scene, activation: &[bool]) -> f64 {
    assert_eq!(activation.len(), scene.oirs.len(), "activation length mismatch");
    let h = scene.los_gain();
    let mut total_gain = h;
    for (n, &on) in activation.iter().enumerate() {
        if on {
            total_gain += scene.nlos_gain_at_current_tilt(n).unwrap_or(0.0);
        }
    }
    let mu = scene.pd_params.responsivity * scene.power.radiometric * total_gain;
    let coeffs = NoiseCoefficients::from_params(&scene.noise_params, &scene.pd_params);
    mu * mu / coeffs.variance_at(mu)
}

pub fn snr_db(scene: &Scene, activation: &[bool]) -> f64 {
    10.0 * snr(scene, activation).log10()
}
