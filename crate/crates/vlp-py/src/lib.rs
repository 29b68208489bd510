//! Python bindings: scene construction, channel quantities, distance
//! estimators, error bounds, and the full localization loop.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::path::Path;
use vlp_core::config::{self, EstimatorKind, WeightMode};
use vlp_core::estimation::{
    los_coefficient, ml_los, nlos_coefficient_at_center, rml_los, rml_nlos_from_mean,
    SufficientStats,
};
use vlp_core::harness::{self, MonteCarloCfg};
use vlp_core::localization::{run_algorithm1, Algorithm1Config, Weighting};
use vlp_core::observation::StreamKey;
use vlp_core::channel::ChannelConstants;
use vlp_core::{bounds, geometry, Vec3};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn vec3(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

/// A positioning scene: room, LED, mirrors, PD and physics parameters.
#[pyclass]
#[derive(Clone)]
struct Scene {
    inner: vlp_core::geometry::Scene,
}

#[pymethods]
impl Scene {
    /// Load a scene from a TOML config file.
    #[staticmethod]
    fn from_config(path: &str) -> PyResult<Self> {
        let cfg = config::load_config(Path::new(path)).map_err(err)?;
        Ok(Scene { inner: cfg.scene })
    }

    /// Reference room with Table-style physics: PD position plus a list of
    /// (center, wall_normal) mirror placements.
    #[staticmethod]
    #[pyo3(signature = (pd, mirrors=vec![]))]
    fn reference(pd: [f64; 3], mirrors: Vec<([f64; 3], [f64; 3])>) -> PyResult<Self> {
        let placements: Vec<(Vec3, Vec3)> =
            mirrors.iter().map(|&(c, n)| (vec3(c), vec3(n).normalized())).collect();
        let scene = config::table1_scene(vec3(pd), &placements);
        scene.validate().map_err(err)?;
        Ok(Scene { inner: scene })
    }

    /// Number of mirror elements.
    #[getter]
    fn n_oirs(&self) -> usize {
        self.inner.oirs.len()
    }

    /// Ground-truth PD position.
    #[getter]
    fn pd(&self) -> [f64; 3] {
        self.inner.pd.into()
    }

    #[setter]
    fn set_pd(&mut self, pd: [f64; 3]) {
        self.inner.pd = vec3(pd);
    }

    /// Transmit power in lumens.
    #[getter]
    fn power_lm(&self) -> f64 {
        self.inner.power.photometric
    }

    #[setter]
    fn set_power_lm(&mut self, lm: f64) {
        self.inner.power =
            vlp_core::channel::Power::from_lumens(lm, self.inner.power.luminous_efficacy);
    }

    /// LED-PD distance, m.
    fn los_distance(&self) -> f64 {
        self.inner.los_distance()
    }

    /// LoS channel gain.
    fn los_gain(&self) -> f64 {
        self.inner.los_gain()
    }

    /// Specular reflection point of a mirror at its current tilt, or None.
    fn reflection_point(&self, n: usize) -> Option<[f64; 3]> {
        self.inner.reflection(n).ok().map(|r| r.into())
    }

    /// Steer every mirror's beam at a target point.
    fn steer_towards(&mut self, target: [f64; 3]) -> PyResult<()> {
        self.inner.steer_all_towards(vec3(target)).map_err(err)
    }

    /// Tilt angles (alpha, beta) of mirror n, radians.
    fn tilt(&self, n: usize) -> (f64, f64) {
        (self.inner.oirs[n].alpha, self.inner.oirs[n].beta)
    }

    /// Eq.-style SNR in dB for an activation pattern (empty = LoS only).
    #[pyo3(signature = (activation=None))]
    fn snr_db(&self, activation: Option<Vec<bool>>) -> f64 {
        let act = activation.unwrap_or_else(|| vec![false; self.inner.oirs.len()]);
        vlp_core::channel::snr_db(&self.inner, &act)
    }

    /// (DEB_los, [DEB_nlos...], PEB) at the current orientation state.
    fn error_bounds(&self, k: usize, k_n: usize) -> PyResult<(f64, Vec<f64>, f64)> {
        let rep = bounds::peb(&self.inner, k, &vec![k_n; self.inner.oirs.len()]).map_err(err)?;
        Ok((rep.deb_los, rep.deb_nlos, rep.peb))
    }

    /// Distance error bound of the LoS link for a K-sample batch.
    fn deb_los(&self, k: usize) -> f64 {
        bounds::deb_los(self.inner.los_distance(), k, &self.inner)
    }

    /// Solve the transmit power (lm) meeting a target LoS SNR in dB.
    fn power_for_snr_db(&self, target_db: f64) -> PyResult<f64> {
        let act = vec![false; self.inner.oirs.len()];
        harness::power_for_target_snr(&self.inner, target_db, &act)
            .map(|p| p.photometric)
            .map_err(err)
    }

    /// ML and RML LoS distance estimates from raw photocurrent samples, m.
    fn estimate_los_distance(&self, samples: Vec<f64>) -> PyResult<(f64, f64)> {
        if samples.is_empty() {
            return Err(PyValueError::new_err("samples must be non-empty"));
        }
        let consts = ChannelConstants::of(&self.inner);
        let xi = los_coefficient(&self.inner);
        let stats = SufficientStats::from_samples(&samples);
        let dm = ml_los(&stats, &xi, &consts.noise, consts.lambertian_order).map_err(err)?;
        let dr = rml_los(&stats, &xi, consts.lambertian_order).map_err(err)?;
        Ok((dm.value, dr.value))
    }

    /// Closed-form RML estimate of a mirror-PD distance from the mean of
    /// the compensated samples, m.
    fn estimate_nlos_distance(&self, n: usize, t1: f64) -> PyResult<f64> {
        let coeff = nlos_coefficient_at_center(&self.inner, n);
        rml_nlos_from_mean(t1, &coeff).map_err(err)
    }

    /// Run the iterative localization loop once; returns the per-iteration
    /// position estimates as a list of (x, y).
    #[pyo3(signature = (seed=1, trial=0, k=50, k_n=100, outer=5, weight_mode="inv_deb_sq"))]
    fn localize(
        &self,
        seed: u64,
        trial: u64,
        k: usize,
        k_n: usize,
        outer: usize,
        weight_mode: &str,
    ) -> PyResult<Vec<(f64, f64)>> {
        let mut cfg = Algorithm1Config::for_scene(&self.inner);
        cfg.k = k;
        cfg.k_n = k_n;
        cfg.outer_max = outer;
        cfg.los_estimator = EstimatorKind::Rml;
        cfg.nlos_estimator = EstimatorKind::Rml;
        cfg.weighting = match weight_mode {
            "ils" => Weighting::Identity,
            "inv_deb" => Weighting::Deb(WeightMode::InvDeb),
            "inv_deb_sq" => Weighting::Deb(WeightMode::InvDebSq),
            other => return Err(PyValueError::new_err(format!("unknown weight mode {other}"))),
        };
        let run = run_algorithm1(&self.inner, &cfg, StreamKey::new(seed, 0, trial)).map_err(err)?;
        Ok(run.iterations.iter().map(|it| (it.estimate.x, it.estimate.y)).collect())
    }

    /// Monte Carlo position RMSE per outer iteration at this scene's power.
    #[pyo3(signature = (trials=1000, seed=1, k=50, k_n=100))]
    fn localization_rmse(
        &self,
        trials: usize,
        seed: u64,
        k: usize,
        k_n: usize,
    ) -> PyResult<Vec<(usize, f64, f64, String)>> {
        let mut cfg = Algorithm1Config::for_scene(&self.inner);
        cfg.k = k;
        cfg.k_n = k_n;
        let rows = harness::run_localization_convergence(
            &self.inner,
            &cfg,
            &[self.inner.power.photometric],
            MonteCarloCfg { seed, trials },
        )
        .map_err(err)?;
        Ok(rows
            .into_iter()
            .map(|r| (r.outer_iter, r.rmse_m, r.peb_m, r.method.to_string()))
            .collect())
    }
}

/// Unit bisector of the LED and target directions seen from a mirror center.
#[pyfunction]
fn steering_normal(led: [f64; 3], center: [f64; 3], target: [f64; 3]) -> PyResult<[f64; 3]> {
    geometry::steering_normal(vec3(led), vec3(center), vec3(target))
        .map(|v| v.into())
        .map_err(err)
}

/// Yaw/pitch (alpha, beta) of a unit normal relative to its wall.
#[pyfunction]
fn tilt_angles_from_normal(normal: [f64; 3], wall_normal: [f64; 3]) -> PyResult<(f64, f64)> {
    geometry::tilt_angles_from_normal(vec3(normal), vec3(wall_normal))
        .map(|t| (t.alpha, t.beta))
        .map_err(err)
}

/// Lambertian order from the half-intensity angle in radians.
#[pyfunction]
fn lambertian_order(half_intensity_angle: f64) -> f64 {
    vlp_core::channel::lambertian_order(half_intensity_angle)
}

#[pymodule]
fn oirs_vlp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scene>()?;
    m.add_function(wrap_pyfunction!(steering_normal, m)?)?;
    m.add_function(wrap_pyfunction!(tilt_angles_from_normal, m)?)?;
    m.add_function(wrap_pyfunction!(lambertian_order, m)?)?;
    Ok(())
}
