//! Fisher information and error bounds.
//!
//! Every entry derives from the scalar-Gaussian identity for a model
//! N(m(p), sigma^2(p)):  J_ij = count * [ dm_i dm_j / sigma^2
//! + dsigma2_i dsigma2_j / (2 sigma^4) ].  With the affine noise law
//! sigma^2 = a + b*m the variance derivative is b*dm, which collapses the
//! bracket to dm_i dm_j (sigma^2 + b^2/2) / sigma^4 and reproduces the
//! closed-form LoS and NLoS informations on the diagonal.
//!
//! The joint distance-domain matrix couples the LoS distance into every
//! active-mirror batch (their means contain the LoS term), and the position
//! bound follows from the 2 x (N+1) Jacobian of distances with respect to
//! the floor coordinates.

use crate::channel::{ChannelConstants, NoiseCoefficients};
use crate::error::{Result, VlpError};
use crate::estimation::{los_coefficient, nlos_coefficient_at_point, LosCoefficient, NlosCoefficient};
use crate::geometry::Scene;
use nalgebra::{DMatrix, Matrix2};

/// Generic scalar-Gaussian Fisher information entry.
pub fn gaussian_fim_entry(
    dmean_i: f64,
    dmean_j: f64,
    dvar_i: f64,
    dvar_j: f64,
    sigma2: f64,
    count: f64,
) -> f64 {
    assert!(sigma2 > 0.0);
    count * (dmean_i * dmean_j / sigma2 + dvar_i * dvar_j / (2.0 * sigma2 * sigma2))
}

/// LoS-distance Fisher information: K (m+3)^2 SNR0 (sigma0^2 + b^2/2) / (d^2 sigma0^2).
pub fn fim_los_raw(d: f64, k: usize, xi: &LosCoefficient, coeffs: &NoiseCoefficients, m: f64) -> f64 {
    assert!(d > 0.0 && k >= 1);
    let mu0 = xi.mean_at(d, m);
    let s2 = coeffs.variance_at(mu0);
    let snr0 = mu0 * mu0 / s2;
    k as f64 * (m + 3.0).powi(2) * snr0 * (s2 + coeffs.b * coeffs.b / 2.0) / (d * d * s2)
}

pub fn deb_los_raw(d: f64, k: usize, xi: &LosCoefficient, coeffs: &NoiseCoefficients, m: f64) -> f64 {
    fim_los_raw(d, k, xi, coeffs, m).powf(-0.5)
}

/// LoS Fisher information evaluated at distance `d` in the given scene.
pub fn fim_los(d: f64, k: usize, scene: &Scene) -> f64 {
    let c = ChannelConstants::of(scene);
    fim_los_raw(d, k, &los_coefficient(scene), &c.noise, c.lambertian_order)
}

pub fn deb_los(d: f64, k: usize, scene: &Scene) -> f64 {
    fim_los(d, k, scene).powf(-0.5)
}

/// NLoS-distance Fisher information:
/// K_n SNR_n (s+3d)^2 (sigma_n^2 + b^2/2) / (d^2 (s+d)^2 sigma_n^2).
///
/// `mu0` is the LoS mean current entering the phase variance.
pub fn fim_nlos_raw(
    d_n: f64,
    k_n: usize,
    coeff: &NlosCoefficient,
    mu0: f64,
    coeffs: &NoiseCoefficients,
) -> f64 {
    assert!(d_n > 0.0 && coeff.s_n > 0.0 && k_n >= 1);
    let chi = coeff.mean_at(d_n);
    let s2 = coeffs.variance_at(mu0 + chi);
    let snr_n = chi * chi / s2;
    let s = coeff.s_n;
    k_n as f64 * snr_n * (s + 3.0 * d_n).powi(2) * (s2 + coeffs.b * coeffs.b / 2.0)
        / (d_n * d_n * (s + d_n).powi(2) * s2)
}

pub fn deb_nlos_raw(
    d_n: f64,
    k_n: usize,
    coeff: &NlosCoefficient,
    mu0: f64,
    coeffs: &NoiseCoefficients,
) -> f64 {
    fim_nlos_raw(d_n, k_n, coeff, mu0, coeffs).powf(-0.5)
}

/// NLoS Fisher information of element `n` at the scene's true geometry
/// (current tilt).
pub fn fim_nlos(scene: &Scene, n: usize, k_n: usize) -> Result<f64> {
    let c = ChannelConstants::of(scene);
    let r = scene
        .reflection(n)
        .map_err(|reason| VlpError::InvalidLink { element: n, reason })?;
    let coeff = nlos_coefficient_at_point(scene, n, r);
    let d_n = r.distance(scene.pd);
    let mu0 = los_coefficient(scene).mean_at(scene.los_distance(), c.lambertian_order);
    Ok(fim_nlos_raw(d_n, k_n, &coeff, mu0, &c.noise))
}

/// All Fisher information pieces of a scene.
#[derive(Debug, Clone)]
pub struct FisherMatrices {
    /// LoS-only scalar information, 1/m^2.
    pub j_d: f64,
    /// Per-element NLoS informations, 1/m^2.
    pub j_dn: Vec<f64>,
    /// Joint (N+1) x (N+1) distance-domain matrix, 1/m^2.
    pub j_dist: DMatrix<f64>,
    /// 2 x (N+1) distance-to-position Jacobian.
    pub t_mat: DMatrix<f64>,
    /// 2 x 2 position-domain matrix, 1/m^2.
    pub j_pos: Matrix2<f64>,
}

/// Distance and position error bounds of a scene.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub deb_los: f64,
    pub deb_nlos: Vec<f64>,
    pub peb: f64,
}

const MAX_CONDITION: f64 = 1e12;

/// Joint distance-domain Fisher information at the scene's true geometry.
///
/// `k` samples back the LoS-only phase and `k_list[n]` samples the phase
/// with mirror `n` active. Every mirror link must be valid.
pub fn joint_fim(scene: &Scene, k: usize, k_list: &[usize]) -> Result<FisherMatrices> {
    let n_el = scene.oirs.len();
    assert_eq!(k_list.len(), n_el, "one sample count per mirror");
    let c = ChannelConstants::of(scene);
    let m = c.lambertian_order;
    let b = c.noise.b;
    let xi = los_coefficient(scene);
    let d = scene.los_distance();
    let mu0 = xi.mean_at(d, m);
    let dmu0_dd = -(m + 3.0) * mu0 / d;

    let mut j = DMatrix::<f64>::zeros(n_el + 1, n_el + 1);
    let mut t = DMatrix::<f64>::zeros(2, n_el + 1);
    let mut j_dn = Vec::with_capacity(n_el);

    // LoS-only batch
    let s20 = c.noise.variance_at(mu0);
    j[(0, 0)] += gaussian_fim_entry(dmu0_dd, dmu0_dd, b * dmu0_dd, b * dmu0_dd, s20, k as f64);
    t[(0, 0)] = (scene.pd.x - scene.led.x) / d;
    t[(1, 0)] = (scene.pd.y - scene.led.y) / d;

    // active-mirror batches: mean = mu0(d) + chi_n(d_n)
    for n in 0..n_el {
        let r = scene
            .reflection(n)
            .map_err(|reason| VlpError::InvalidLink { element: n, reason })?;
        let coeff = nlos_coefficient_at_point(scene, n, r);
        let d_n = r.distance(scene.pd);
        let chi = coeff.mean_at(d_n);
        let dchi = coeff.mean_derivative_at(d_n);
        let s2n = c.noise.variance_at(mu0 + chi);
        let kn = k_list[n] as f64;
        j[(0, 0)] += gaussian_fim_entry(dmu0_dd, dmu0_dd, b * dmu0_dd, b * dmu0_dd, s2n, kn);
        let cross = gaussian_fim_entry(dmu0_dd, dchi, b * dmu0_dd, b * dchi, s2n, kn);
        j[(0, n + 1)] += cross;
        j[(n + 1, 0)] += cross;
        let own = gaussian_fim_entry(dchi, dchi, b * dchi, b * dchi, s2n, kn);
        j[(n + 1, n + 1)] += own;
        j_dn.push(own);
        t[(0, n + 1)] = (scene.pd.x - r.x) / d_n;
        t[(1, n + 1)] = (scene.pd.y - r.y) / d_n;
    }

    let eig = j.clone().symmetric_eigen();
    let max_ev = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min_ev = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if !(min_ev > 0.0) || max_ev / min_ev > MAX_CONDITION {
        return Err(VlpError::SingularGeometry("ill-conditioned distance-domain information"));
    }

    let j_pos_d = &t * &j * t.transpose();
    let j_pos = Matrix2::new(j_pos_d[(0, 0)], j_pos_d[(0, 1)], j_pos_d[(1, 0)], j_pos_d[(1, 1)]);
    Ok(FisherMatrices { j_d: fim_los_raw(d, k, &xi, &c.noise, m), j_dn, j_dist: j, t_mat: t, j_pos })
}

/// Position error bound of a scene.
///
/// Requires at least two mirrors and a nonsingular position-domain matrix.
pub fn peb(scene: &Scene, k: usize, k_list: &[usize]) -> Result<BoundsReport> {
    if scene.oirs.len() < 2 {
        return Err(VlpError::SingularGeometry("fewer than two mirrors: position not identifiable"));
    }
    let fm = joint_fim(scene, k, k_list)?;
    let chol = nalgebra::Cholesky::new(fm.j_pos)
        .ok_or(VlpError::SingularGeometry("position-domain information not positive definite"))?;
    let inv = chol.inverse();
    let peb = (inv[(0, 0)] + inv[(1, 1)]).sqrt();
    let deb_nlos = fm.j_dn.iter().map(|j| j.powf(-0.5)).collect();
    Ok(BoundsReport { deb_los: fm.j_d.powf(-0.5), deb_nlos, peb })
}
