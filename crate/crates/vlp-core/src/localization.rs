//! Position estimation: squared-range weighted least squares and the outer
//! loop that alternates distance estimation, a position fix, and adaptive
//! beam steering.
//!
//! The solver linearizes f(u) = [ ||u - q||^2, ||u - w_1||^2, ... ] around
//! the current iterate and applies Gauss-Newton steps
//! u <- u + (H' W H)^-1 H' W (d_hat^2 - f(u)) with H_j = 2 (u - anchor_j)'
//! restricted to the floor coordinates. Weights come from the distance
//! error bounds evaluated at the estimated distances; W = I recovers the
//! unweighted solver.

use crate::bounds::{deb_los_raw, deb_nlos_raw};
use crate::channel::ChannelConstants;
use crate::error::{Result, VlpError};
use crate::estimation::{
    los_coefficient, ml_los, ml_nlos, nlos_coefficient_at_center, rml_los, rml_nlos, EstimatorKind,
    GridSpec, SufficientStats,
};
use crate::geometry::{Scene, TiltAngles};
use crate::observation::{sample_los, sample_nlos, subtract_los, StreamKey};
use crate::Vec3;
use serde::{Deserialize, Serialize};

pub use crate::config::WeightMode;

/// Anchors (LED first, then mirror centers), squared-distance observations
/// and positive diagonal weights.
#[derive(Debug, Clone)]
pub struct AnchorSet {
    pub anchors: Vec<Vec3>,
    pub d_sq: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AnchorSet {
    pub fn validate(&self) -> Result<()> {
        if self.anchors.len() < 3 {
            return Err(VlpError::SingularGeometry("need at least three anchors"));
        }
        if self.anchors.len() != self.d_sq.len() || self.anchors.len() != self.weights.len() {
            return Err(VlpError::SingularGeometry("anchor/observation/weight length mismatch"));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(VlpError::SingularGeometry("weights must be positive and finite"));
        }
        Ok(())
    }

    /// Centroid of the anchors' floor projections, the default start point.
    pub fn centroid_xy(&self) -> (f64, f64) {
        let n = self.anchors.len() as f64;
        (
            self.anchors.iter().map(|a| a.x).sum::<f64>() / n,
            self.anchors.iter().map(|a| a.y).sum::<f64>() / n,
        )
    }
}

/// Why the inner solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Threshold,
    MaxIter,
}

/// Iterate history of one least-squares solve.
#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub iterates: Vec<(f64, f64)>,
    pub converged: bool,
    pub inner_iterations: usize,
    pub stop_reason: StopReason,
}

impl SolverTrace {
    pub fn solution(&self) -> (f64, f64) {
        *self.iterates.last().expect("trace never empty")
    }
}

/// Gauss-Newton squared-range solve with fixed diagonal weights.
pub fn iwls_solve(
    set: &AnchorSet,
    u0: (f64, f64),
    eps: f64,
    max_iter: usize,
) -> Result<SolverTrace> {
    set.validate()?;
    assert!(u0.0.is_finite() && u0.1.is_finite());
    let mut u = u0;
    let mut iterates = vec![u];
    for it in 0..max_iter {
        // normal equations: A = H'WH (2x2), rhs = H'W eps
        let mut a11 = 0.0;
        let mut a12 = 0.0;
        let mut a22 = 0.0;
        let mut r1 = 0.0;
        let mut r2 = 0.0;
        for ((anchor, d2), w) in set.anchors.iter().zip(&set.d_sq).zip(&set.weights) {
            let hx = 2.0 * (u.0 - anchor.x);
            let hy = 2.0 * (u.1 - anchor.y);
            let fx = (u.0 - anchor.x).powi(2) + (u.1 - anchor.y).powi(2) + anchor.z * anchor.z;
            let e = d2 - fx;
            a11 += w * hx * hx;
            a12 += w * hx * hy;
            a22 += w * hy * hy;
            r1 += w * hx * e;
            r2 += w * hy * e;
        }
        let tr = a11 + a22;
        let det = a11 * a22 - a12 * a12;
        // condition estimate of the symmetric 2x2 via its eigenvalues
        let disc = ((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12).sqrt();
        let ev_max = (tr + disc) / 2.0;
        let ev_min = (tr - disc) / 2.0;
        if !(ev_min > 0.0) || ev_max / ev_min > 1e12 {
            return Err(VlpError::SingularNormalEquations);
        }
        let dx = (a22 * r1 - a12 * r2) / det;
        let dy = (a11 * r2 - a12 * r1) / det;
        u = (u.0 + dx, u.1 + dy);
        iterates.push(u);
        if (dx * dx + dy * dy).sqrt() < eps {
            return Ok(SolverTrace {
                iterates,
                converged: true,
                inner_iterations: it + 1,
                stop_reason: StopReason::Threshold,
            });
        }
    }
    Ok(SolverTrace {
        iterates,
        converged: false,
        inner_iterations: max_iter,
        stop_reason: StopReason::MaxIter,
    })
}

/// Weighting of the position solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    /// Unweighted (classical ILS).
    Identity,
    /// Bound-derived weights.
    Deb(WeightMode),
}

/// Settings of the full iterative localization run.
#[derive(Debug, Clone)]
pub struct Algorithm1Config {
    /// LoS-phase sample count.
    pub k: usize,
    /// Per-mirror phase sample count.
    pub k_n: usize,
    pub los_estimator: EstimatorKind,
    pub nlos_estimator: EstimatorKind,
    pub weighting: Weighting,
    /// Number of outer (steering) iterations to run.
    pub outer_max: usize,
    /// Early-stop threshold on consecutive position estimates, m.
    /// `None` always runs `outer_max` iterations.
    pub outer_eps: Option<f64>,
    pub inner_eps: f64,
    pub inner_max: usize,
    pub nlos_grid: GridSpec,
}

impl Algorithm1Config {
    pub fn for_scene(scene: &Scene) -> Self {
        Algorithm1Config {
            k: 50,
            k_n: 100,
            los_estimator: EstimatorKind::Rml,
            nlos_estimator: EstimatorKind::Rml,
            weighting: Weighting::Deb(WeightMode::InvDebSq),
            outer_max: 5,
            outer_eps: Some(1e-4),
            inner_eps: 1e-6,
            inner_max: 100,
            nlos_grid: GridSpec::for_room(scene.room_dims),
        }
    }
}

/// One outer iteration's intermediate products.
#[derive(Debug, Clone)]
pub struct OuterIteration {
    pub d_hat: f64,
    /// Per-mirror distance estimates; `None` where the link failed.
    pub d_n_hats: Vec<Option<f64>>,
    /// Position estimate on the floor plane.
    pub estimate: Vec3,
    /// Tilt state applied after this iteration's steering update.
    pub tilts: Vec<TiltAngles>,
}

/// Full run of the iterative localization algorithm.
#[derive(Debug, Clone)]
pub struct LocalizationRun {
    pub iterations: Vec<OuterIteration>,
    pub final_estimate: Vec3,
}

/// Execute the iterative localization loop on a copy of the scene.
///
/// Each outer iteration: (1) estimate the LoS distance with all mirrors
/// deactivated; (2) activate mirrors one at a time and estimate the
/// mirror-PD distances, with the element center standing in for the unknown
/// reflection point; (3) weight by the error bounds at the estimated
/// distances and solve for the position; (4) re-steer every mirror toward
/// the estimate.
pub fn run_algorithm1(scene: &Scene, cfg: &Algorithm1Config, key: StreamKey) -> Result<LocalizationRun> {
    if scene.oirs.len() < 2 {
        return Err(VlpError::SingularGeometry("need at least two mirrors"));
    }
    let mut scene = scene.clone();
    let n_el = scene.oirs.len();
    let consts = ChannelConstants::of(&scene);
    let m = consts.lambertian_order;
    let coeffs = consts.noise;
    let xi = los_coefficient(&scene);

    let mut iterations: Vec<OuterIteration> = Vec::with_capacity(cfg.outer_max);
    let mut previous: Option<Vec3> = None;

    for outer in 0..cfg.outer_max {
        // phases of this iteration get their own stream context
        let phase_key = StreamKey::new(key.seed, key.context.wrapping_mul(64).wrapping_add(outer as u64), key.trial);

        // Step 1a: LoS distance, all mirrors deactivated
        for el in &mut scene.oirs {
            el.active = false;
        }
        let los_batch = sample_los(&scene, &coeffs, cfg.k, phase_key);
        let los_stats = SufficientStats::from_samples(&los_batch.samples);
        let d_hat = match cfg.los_estimator {
            EstimatorKind::Ml => ml_los(&los_stats, &xi, &coeffs, m)?,
            EstimatorKind::Rml => rml_los(&los_stats, &xi, m)?,
        }
        .value;

        // Step 1b: one mirror at a time
        let mut d_n_hats: Vec<Option<f64>> = vec![None; n_el];
        let mut anchors = vec![scene.led];
        let mut d_sq = vec![d_hat * d_hat];
        let mu0_hat = xi.mean_at(d_hat, m);
        let mut weights = vec![match cfg.weighting {
            Weighting::Identity => 1.0,
            Weighting::Deb(mode) => {
                let deb = deb_los_raw(d_hat, cfg.k, &xi, &coeffs, m);
                match mode {
                    WeightMode::InvDeb => 1.0 / deb,
                    WeightMode::InvDebSq => 1.0 / (deb * deb),
                }
            }
        }];
        for n in 0..n_el {
            scene.oirs[n].active = true;
            let est = (|| -> Result<f64> {
                let batch = sample_nlos(&scene, n, &coeffs, cfg.k_n, phase_key)?;
                let comp = subtract_los(&batch, d_hat, &xi, m);
                let coeff = nlos_coefficient_at_center(&scene, n);
                let est = match cfg.nlos_estimator {
                    EstimatorKind::Ml => {
                        ml_nlos(&comp, &coeff, d_hat, &xi, &coeffs, m, &cfg.nlos_grid)?
                    }
                    EstimatorKind::Rml => rml_nlos(&comp, &coeff)?,
                };
                Ok(est.value)
            })();
            scene.oirs[n].active = false;
            let Ok(dn) = est else { continue };
            d_n_hats[n] = Some(dn);
            anchors.push(scene.oirs[n].center);
            d_sq.push(dn * dn);
            weights.push(match cfg.weighting {
                Weighting::Identity => 1.0,
                Weighting::Deb(mode) => {
                    let coeff = nlos_coefficient_at_center(&scene, n);
                    let deb = deb_nlos_raw(dn, cfg.k_n, &coeff, mu0_hat, &coeffs);
                    match mode {
                        WeightMode::InvDeb => 1.0 / deb,
                        WeightMode::InvDebSq => 1.0 / (deb * deb),
                    }
                }
            });
        }

        // Step 2: position fix from the centroid
        let set = AnchorSet { anchors, d_sq, weights };
        let trace = iwls_solve(&set, set.centroid_xy(), cfg.inner_eps, cfg.inner_max)?;
        let (ux, uy) = trace.solution();
        let estimate = Vec3::new(ux, uy, 0.0);

        // Step 3: steer every mirror toward the estimate
        scene.steer_all_towards(estimate)?;
        iterations.push(OuterIteration {
            d_hat,
            d_n_hats,
            estimate,
            tilts: scene.oirs.iter().map(|el| TiltAngles { alpha: el.alpha, beta: el.beta }).collect(),
        });

        if let (Some(eps), Some(prev)) = (cfg.outer_eps, previous) {
            if (estimate - prev).norm() < eps {
                break;
            }
        }
        previous = Some(estimate);
    }

    let final_estimate = iterations.last().expect("at least one iteration").estimate;
    Ok(LocalizationRun { iterations, final_estimate })
}
