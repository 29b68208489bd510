//! ML and relaxed-ML distance estimators.
//!
//! Both LoS estimators are closed forms in the sufficient statistics
//! (S1, S2); the structured ML keeps the signal-dependent variance
//! sigma^2(d) = a + b*mu(d) in the likelihood while the relaxed variant
//! treats the variance as a free nuisance parameter and collapses to the
//! inverse of the sample mean. For the reflected path the structured ML has
//! no closed form and is minimized by a 1-D grid search with golden-section
//! refinement; the relaxed variant reduces to a depressed cubic whose
//! unique positive root is evaluated in closed form.

use crate::channel::NoiseCoefficients;
use crate::error::{Result, VlpError};
use crate::geometry::Scene;
use crate::observation::CompensatedBatch;
use crate::Vec3;
use serde::{Deserialize, Serialize};

pub use crate::config::EstimatorKind;

/// Known coefficient of the LoS mean current: mu0(d) = xi / d^(m+3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosCoefficient {
    /// A * m^(m+3)
    pub xi: f64,
}

impl LosCoefficient {
    pub fn mean_at(&self, d: f64, m: f64) -> f64 {
        self.xi / d.powf(m + 3.0)
    }
}

/// xi = R p A T G (m+1) q_z^(m+1) / (2 pi) for the scene's LED height and power.
pub fn los_coefficient(scene: &Scene) -> LosCoefficient {
    let pd = &scene.pd_params;
    let m = pd.lambertian_order();
    let g = pd.concentrator_gain_peak();
    LosCoefficient {
        xi: pd.responsivity * scene.power.radiometric * pd.area * pd.filter_gain * g * (m + 1.0)
            * scene.led.z.powf(m + 1.0)
            / (2.0 * std::f64::consts::PI),
    }
}

/// Known coefficient of one reflected path: chi(d_n) = omega / ((s_n + d_n)^2 d_n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlosCoefficient {
    /// A * m^3
    pub omega: f64,
    /// LED-to-reflection-point leg baked into the coefficient, m.
    pub s_n: f64,
}

impl NlosCoefficient {
    pub fn mean_at(&self, d_n: f64) -> f64 {
        let t = self.s_n + d_n;
        self.omega / (t * t * d_n)
    }

    /// d/d(d_n) of the mean. Strictly negative for d_n > 0.
    pub fn mean_derivative_at(&self, d_n: f64) -> f64 {
        let chi = self.mean_at(d_n);
        -chi * (self.s_n + 3.0 * d_n) / ((self.s_n + d_n) * d_n)
    }
}

/// Coefficient referenced to an arbitrary reflection point.
pub fn nlos_coefficient_at_point(scene: &Scene, n: usize, r: Vec3) -> NlosCoefficient {
    let pd = &scene.pd_params;
    let el = &scene.oirs[n];
    let m = pd.lambertian_order();
    let g = pd.concentrator_gain_peak();
    let s_n = scene.led.distance(r);
    NlosCoefficient {
        omega: pd.responsivity
            * scene.power.radiometric
            * el.reflectivity
            * pd.area
            * pd.filter_gain
            * g
            * (m + 1.0)
            * (scene.led.z - r.z).powf(m)
            * r.z
            / (2.0 * std::f64::consts::PI * s_n.powf(m)),
        s_n,
    }
}

/// Coefficient in the no-prior mode: the element center stands in for the
/// unknown reflection point, so s_n becomes the LED-to-center distance.
pub fn nlos_coefficient_at_center(scene: &Scene, n: usize) -> NlosCoefficient {
    nlos_coefficient_at_point(scene, n, scene.oirs[n].center)
}

/// Sample mean and mean of squares of a batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    /// S1 (or T1 for a compensated batch), A.
    pub mean: f64,
    /// S2, A^2.
    pub mean_sq: f64,
    pub count: usize,
}

impl SufficientStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(!samples.is_empty());
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let mean_sq = samples.iter().map(|x| x * x).sum::<f64>() / k;
        SufficientStats { mean, mean_sq, count: samples.len() }
    }
}

/// Which path a distance estimate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    Los,
    Nlos(usize),
}

/// A point distance estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEstimate {
    pub value: f64,
    pub method: EstimatorKind,
    pub path: PathKind,
    /// Error bound at the estimate, filled in by the caller when used for
    /// weighting. m.
    pub deb: Option<f64>,
}

/// Structured ML estimate of the LoS distance (closed form in S1, S2).
pub fn ml_los(
    stats: &SufficientStats,
    xi: &LosCoefficient,
    coeffs: &NoiseCoefficients,
    m: f64,
) -> Result<DistanceEstimate> {
    let (a, b) = (coeffs.a, coeffs.b);
    let (s1, s2) = (stats.mean, stats.mean_sq);
    let denom = 2.0 * a * s1 + b * s2 - a * b;
    if denom <= 0.0 {
        return Err(VlpError::DegenerateSample("nonpositive ML denominator (deep-noise regime)"));
    }
    let root = ((a + b * s1).powi(2) + b * b * (s2 - s1 * s1) + b.powi(4) / 4.0).sqrt();
    let value = (xi.xi * (root + a + b * b / 2.0) / denom).powf(1.0 / (m + 3.0));
    Ok(DistanceEstimate { value, method: EstimatorKind::Ml, path: PathKind::Los, deb: None })
}

/// Relaxed ML estimate of the LoS distance: d = (xi / S1)^(1/(m+3)).
pub fn rml_los(stats: &SufficientStats, xi: &LosCoefficient, m: f64) -> Result<DistanceEstimate> {
    if stats.mean <= 0.0 {
        return Err(VlpError::DegenerateSample("nonpositive sample mean"));
    }
    let value = (xi.xi / stats.mean).powf(1.0 / (m + 3.0));
    Ok(DistanceEstimate { value, method: EstimatorKind::Rml, path: PathKind::Los, deb: None })
}

/// Search grid of the structured NLoS ML estimator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    /// Lower edge of the search range, m.
    pub min: f64,
    /// Upper edge (typically the room diagonal), m.
    pub max: f64,
    /// Grid step, m.
    pub step: f64,
    /// Golden-section refinement tolerance, m.
    pub refine_tol: f64,
}

impl GridSpec {
    pub fn for_room(room_dims: Vec3) -> Self {
        GridSpec { min: 0.01, max: room_dims.norm(), step: 1e-3, refine_tol: 1e-6 }
    }
}

/// Negative log-likelihood of the compensated batch, up to constants, as a
/// function of the candidate distance. Expressed through (T1, T2) so each
/// evaluation is O(1) in the sample count.
fn nlos_ml_cost(
    d_n: f64,
    stats: &SufficientStats,
    coeff: &NlosCoefficient,
    mu0_hat: f64,
    coeffs: &NoiseCoefficients,
) -> f64 {
    let k = stats.count as f64;
    let chi = coeff.mean_at(d_n);
    let sigma2 = coeffs.a + coeffs.b * (mu0_hat + chi);
    let sq = stats.mean_sq - 2.0 * chi * stats.mean + chi * chi;
    0.5 * k * sigma2.ln() + 0.5 * k * sq / sigma2
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Structured ML estimate of a reflected-path distance: grid argmin of the
/// negative log-likelihood, refined by golden section inside the winning
/// cell.
///
/// `d_hat` is the LoS estimate whose mean enters the phase variance.
pub fn ml_nlos(
    comp: &CompensatedBatch,
    coeff: &NlosCoefficient,
    d_hat: f64,
    xi: &LosCoefficient,
    coeffs: &NoiseCoefficients,
    m: f64,
    grid: &GridSpec,
) -> Result<DistanceEstimate> {
    let stats = SufficientStats::from_samples(&comp.samples);
    let mu0_hat = xi.mean_at(d_hat, m);
    let cost = |d: f64| nlos_ml_cost(d, &stats, coeff, mu0_hat, coeffs);

    let n = ((grid.max - grid.min) / grid.step).ceil() as usize;
    let mut best_i = 0usize;
    let mut best_cost = f64::INFINITY;
    for i in 0..=n {
        let d = (grid.min + i as f64 * grid.step).min(grid.max);
        let c = cost(d);
        if c < best_cost {
            best_cost = c;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == n {
        return Err(VlpError::GridExhausted);
    }
    let lo = grid.min + (best_i - 1) as f64 * grid.step;
    let hi = grid.min + (best_i + 1) as f64 * grid.step;
    let mut value = golden_section(cost, lo, hi, grid.refine_tol);
    // refinement must never lose to the winning grid node
    if cost(value) > best_cost {
        value = grid.min + best_i as f64 * grid.step;
    }
    Ok(DistanceEstimate {
        value,
        method: EstimatorKind::Ml,
        path: PathKind::Nlos(comp.oirs_index),
        deb: None,
    })
}

/// Relaxed ML estimate of a reflected-path distance: the unique positive
/// root of the stationarity cubic, in closed form.
pub fn rml_nlos(comp: &CompensatedBatch, coeff: &NlosCoefficient) -> Result<DistanceEstimate> {
    let stats = SufficientStats::from_samples(&comp.samples);
    rml_nlos_from_mean(stats.mean, coeff).map(|value| DistanceEstimate {
        value,
        method: EstimatorKind::Rml,
        path: PathKind::Nlos(comp.oirs_index),
        deb: None,
    })
}

/// Closed-form root of t1 * (s + d)^2 d = omega in d, for t1 > 0.
pub fn rml_nlos_from_mean(t1: f64, coeff: &NlosCoefficient) -> Result<f64> {
    if t1 <= 0.0 {
        return Err(VlpError::DegenerateSample("nonpositive compensated sample mean"));
    }
    let (omega, s) = (coeff.omega, coeff.s_n);
    let gamma = 2f64.cbrt();
    let radicand = 3.0 * omega * t1.powi(4) * (27.0 * omega + 4.0 * t1 * s.powi(3));
    debug_assert!(radicand >= 0.0);
    let upsilon = (3.0 * radicand.sqrt() + 2.0 * t1.powi(3) * s.powi(3) + 27.0 * omega * t1 * t1).cbrt();
    Ok(gamma * t1 * s * s / (3.0 * upsilon) + upsilon / (3.0 * gamma * t1) - 2.0 * s / 3.0)
}
