//! Monte Carlo experiment harness: SNR/position sweeps of the distance
//! estimators, convergence runs of the localization loop, and floor
//! coverage maps.
//!
//! Determinism contract: every trial draws from a stream keyed by
//! (seed, sweep-point or grid-cell index, trial index), and per-trial
//! results are collected in trial order before any reduction. Outputs are
//! therefore byte-identical across runs and across any number of worker
//! threads.

use crate::bounds;
use crate::channel::{ChannelConstants, NoiseCoefficients, Power};
use crate::config::{table1_scene, wall_mirrors, WeightMode};
use crate::csvio::{Cell, CsvTable};
use crate::error::{Result, VlpError};
use crate::estimation::{
    los_coefficient, ml_los, ml_nlos, nlos_coefficient_at_center, rml_los, rml_nlos, GridSpec,
    SufficientStats,
};
use crate::geometry::Scene;
use crate::localization::{run_algorithm1, Algorithm1Config, Weighting};
use crate::observation::{sample_los, sample_nlos, subtract_los, Phase, StreamKey};
use crate::Vec3;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

/// Monte Carlo bookkeeping shared by all sweeps.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloCfg {
    pub seed: u64,
    pub trials: usize,
}

/// One row of a sweep result.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub value: f64,
    pub rmse_ml: f64,
    pub rmse_rml: f64,
    /// DEB (distance sweeps) or PEB (position sweeps) at the true geometry.
    pub bound: f64,
    pub trials_used: usize,
    pub trials_dropped: usize,
}

/// Result of one sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub variable: &'static str,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self, bound_name: &str) -> CsvTable {
        let var = format!("{}", self.variable);
        let mut t = CsvTable::new(&[
            var.as_str(),
            "rmse_ml_m",
            "rmse_rml_m",
            bound_name,
            "trials_used",
            "trials_dropped",
        ]);
        for r in &self.rows {
            t.push(vec![
                Cell::Num(r.value),
                Cell::Num(r.rmse_ml),
                Cell::Num(r.rmse_rml),
                Cell::Num(r.bound),
                Cell::Int(r.trials_used as i64),
                Cell::Int(r.trials_dropped as i64),
            ]);
        }
        t
    }
}

fn rmse(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return f64::NAN;
    }
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

/// Solve the transmit power that meets a target Eq.-(10) SNR for the given
/// activation pattern, by bracketing and bisection on log power.
pub fn power_for_target_snr(scene: &Scene, target_db: f64, activation: &[bool]) -> Result<Power> {
    let mut gain = scene.los_gain();
    for (n, &on) in activation.iter().enumerate() {
        if on {
            gain += scene.nlos_gain_at_current_tilt(n).unwrap_or(0.0);
        }
    }
    solve_power(scene, target_db, gain, gain)
}

/// Solve the transmit power that meets a target post-subtraction SNR of
/// mirror `n`: (R p h_n)^2 over the variance of the composite phase.
pub fn power_for_target_nlos_snr(scene: &Scene, target_db: f64, n: usize) -> Result<Power> {
    let h_n = scene
        .nlos_gain_at_current_tilt(n)
        .map_err(|_| VlpError::NoBracket("no usable reflection for the target element"))?;
    if h_n <= 0.0 {
        return Err(VlpError::NoBracket("reflected gain is zero (outside FoV)"));
    }
    solve_power(scene, target_db, h_n, scene.los_gain() + h_n)
}

/// Bisection on ln p for SNR(p) = (R p g_sig)^2 / (a + b R p g_noise).
fn solve_power(scene: &Scene, target_db: f64, g_sig: f64, g_noise: f64) -> Result<Power> {
    if !(g_sig > 0.0) {
        return Err(VlpError::NoBracket("zero signal gain"));
    }
    let coeffs = NoiseCoefficients::from_params(&scene.noise_params, &scene.pd_params);
    let r = scene.pd_params.responsivity;
    let snr_db = |ln_p: f64| {
        let p = ln_p.exp();
        let sig = r * p * g_sig;
        let noise_mu = r * p * g_noise;
        10.0 * (sig * sig / coeffs.variance_at(noise_mu)).log10() - target_db
    };
    let mut lo = (1e-15f64).ln();
    let mut hi = (1e9f64).ln();
    if snr_db(lo) > 0.0 || snr_db(hi) < 0.0 {
        return Err(VlpError::NoBracket("target SNR outside the bracket"));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f = snr_db(mid);
        if f.abs() < 1e-9 {
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Power::from_watts(mid.exp(), scene.power.luminous_efficacy))
}

/// Exact one-draw sampler of the K-sample LoS mean: the mean of K i.i.d.
/// N(mu, sigma^2) draws is N(mu, sigma^2/K). Used for the large-K LoS
/// phases backing the NLoS subtraction.
fn sample_los_mean(scene: &Scene, coeffs: &NoiseCoefficients, k: usize, key: StreamKey) -> f64 {
    let mu = scene.pd_params.responsivity * scene.power.radiometric * scene.los_gain();
    let var = coeffs.variance_at(mu) / k as f64;
    if var == 0.0 {
        return mu;
    }
    let mut rng = key.rng(Phase::LosOnly);
    Normal::new(mu, var.sqrt()).expect("valid normal").sample(&mut rng)
}

/// LoS-estimator accuracy versus SNR at fixed geometry (transmit power
/// solved per point).
pub fn run_los_snr_sweep(scene: &Scene, k: usize, snr_db: &[f64], mc: MonteCarloCfg) -> Result<SweepResult> {
    let d_true = scene.los_distance();
    let mut rows = Vec::with_capacity(snr_db.len());
    for (pi, &target) in snr_db.iter().enumerate() {
        let mut s = scene.clone();
        s.power = power_for_target_snr(&s, target, &vec![false; s.oirs.len()])?;
        let consts = ChannelConstants::of(&s);
        let xi = los_coefficient(&s);
        let m = consts.lambertian_order;
        let outcomes: Vec<(Option<f64>, Option<f64>)> = (0..mc.trials)
            .into_par_iter()
            .map(|trial| {
                let key = StreamKey::new(mc.seed, pi as u64, trial as u64);
                let batch = sample_los(&s, &consts.noise, k, key);
                let stats = SufficientStats::from_samples(&batch.samples);
                let e_ml = ml_los(&stats, &xi, &consts.noise, m).ok().map(|e| e.value - d_true);
                let e_rml = rml_los(&stats, &xi, m).ok().map(|e| e.value - d_true);
                (e_ml, e_rml)
            })
            .collect();
        let used: Vec<(f64, f64)> = outcomes
            .iter()
            .filter_map(|(a, b)| a.zip(*b))
            .collect();
        let dropped = mc.trials - used.len();
        rows.push(SweepRow {
            value: target,
            rmse_ml: rmse(&used.iter().map(|x| x.0).collect::<Vec<_>>()),
            rmse_rml: rmse(&used.iter().map(|x| x.1).collect::<Vec<_>>()),
            bound: bounds::deb_los(d_true, k, &s),
            trials_used: used.len(),
            trials_dropped: dropped,
        });
    }
    Ok(SweepResult { variable: "snr_db", rows })
}

/// Configuration of a single-mirror NLoS sweep point.
#[derive(Debug, Clone, Copy)]
pub struct NlosPoint {
    /// Sweep coordinate written to the result row.
    pub value: f64,
    /// PD position of this point.
    pub pd: Vec3,
}

/// NLoS-estimator accuracy at fixed power over a set of PD positions
/// (azimuth arcs, range cuts). The single mirror stays at its configured
/// orientation, so moving the PD changes the pointing mismatch.
///
/// Errors are measured against the element-center distance, the quantity
/// the center-referenced estimators actually target; the bound column is
/// the DEB at the true reflection geometry.
pub fn run_nlos_position_sweep(
    scene: &Scene,
    variable: &'static str,
    points: &[NlosPoint],
    k_los: usize,
    k_n: usize,
    mc: MonteCarloCfg,
) -> Result<SweepResult> {
    assert_eq!(scene.oirs.len(), 1, "single-mirror sweep");
    let mut rows = Vec::with_capacity(points.len());
    for (pi, point) in points.iter().enumerate() {
        let mut s = scene.clone();
        s.pd = point.pd;
        rows.push(nlos_point_row(&s, point.value, k_los, k_n, mc, pi as u64)?);
    }
    Ok(SweepResult { variable, rows })
}

/// NLoS-estimator accuracy versus post-subtraction SNR at fixed geometry.
/// `steered` re-aims the mirror at the true PD first; otherwise it stays at
/// its configured (mismatched) orientation.
pub fn run_nlos_snr_sweep(
    scene: &Scene,
    snr_db: &[f64],
    steered: bool,
    k_los: usize,
    k_n: usize,
    mc: MonteCarloCfg,
) -> Result<SweepResult> {
    assert_eq!(scene.oirs.len(), 1, "single-mirror sweep");
    let mut base = scene.clone();
    if steered {
        base.steer_all_towards(base.pd)?;
    }
    let mut rows = Vec::with_capacity(snr_db.len());
    for (pi, &target) in snr_db.iter().enumerate() {
        let mut s = base.clone();
        s.power = power_for_target_nlos_snr(&s, target, 0)?;
        rows.push(nlos_point_row(&s, target, k_los, k_n, mc, pi as u64)?);
    }
    Ok(SweepResult { variable: "snr_db", rows })
}

fn nlos_point_row(
    s: &Scene,
    value: f64,
    k_los: usize,
    k_n: usize,
    mc: MonteCarloCfg,
    context: u64,
) -> Result<SweepRow> {
    let consts = ChannelConstants::of(s);
    let m = consts.lambertian_order;
    let xi = los_coefficient(s);
    let coeff = nlos_coefficient_at_center(s, 0);
    let grid = GridSpec::for_room(s.room_dims);
    // reference distance of the center-referenced estimators
    let d_ref = s.oirs[0].center.distance(s.pd);
    // bound at the true reflection geometry
    let bound = match bounds::fim_nlos(s, 0, k_n) {
        Ok(j) => j.powf(-0.5),
        Err(_) => {
            return Ok(SweepRow {
                value,
                rmse_ml: f64::NAN,
                rmse_rml: f64::NAN,
                bound: f64::NAN,
                trials_used: 0,
                trials_dropped: mc.trials,
            })
        }
    };
    let mut active = s.clone();
    active.oirs[0].active = true;
    let outcomes: Vec<(Option<f64>, Option<f64>)> = (0..mc.trials)
        .into_par_iter()
        .map(|trial| {
            let key = StreamKey::new(mc.seed, context, trial as u64);
            let s1 = sample_los_mean(s, &consts.noise, k_los, key);
            if s1 <= 0.0 {
                return (None, None);
            }
            let stats = SufficientStats { mean: s1, mean_sq: s1 * s1, count: k_los };
            let Ok(d_hat) = rml_los(&stats, &xi, m) else { return (None, None) };
            let Ok(batch) = sample_nlos(&active, 0, &consts.noise, k_n, key) else {
                return (None, None);
            };
            let comp = subtract_los(&batch, d_hat.value, &xi, m);
            let e_ml = ml_nlos(&comp, &coeff, d_hat.value, &xi, &consts.noise, m, &grid)
                .ok()
                .map(|e| e.value - d_ref);
            let e_rml = rml_nlos(&comp, &coeff).ok().map(|e| e.value - d_ref);
            (e_ml, e_rml)
        })
        .collect();
    let used: Vec<(f64, f64)> = outcomes.iter().filter_map(|(a, b)| a.zip(*b)).collect();
    Ok(SweepRow {
        value,
        rmse_ml: rmse(&used.iter().map(|x| x.0).collect::<Vec<_>>()),
        rmse_rml: rmse(&used.iter().map(|x| x.1).collect::<Vec<_>>()),
        bound,
        trials_used: used.len(),
        trials_dropped: mc.trials - used.len(),
    })
}

/// One row of a localization convergence run.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub outer_iter: usize,
    pub rmse_m: f64,
    pub peb_m: f64,
    pub method: &'static str,
    pub p_lm: f64,
    pub trials_used: usize,
    pub trials_dropped: usize,
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "outer_iter",
        "rmse_m",
        "peb_m",
        "method",
        "p_lm",
        "trials_used",
        "trials_dropped",
    ]);
    for r in rows {
        t.push(vec![
            Cell::Int(r.outer_iter as i64),
            Cell::Num(r.rmse_m),
            Cell::Num(r.peb_m),
            Cell::Text(r.method.into()),
            Cell::Num(r.p_lm),
            Cell::Int(r.trials_used as i64),
            Cell::Int(r.trials_dropped as i64),
        ]);
    }
    t
}

/// Position RMSE per outer steering iteration, weighted and unweighted,
/// against the position bound of the perfectly steered scene.
pub fn run_localization_convergence(
    scene: &Scene,
    cfg: &Algorithm1Config,
    p_lm: &[f64],
    mc: MonteCarloCfg,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for (pi, &lm) in p_lm.iter().enumerate() {
        let mut s = scene.clone();
        s.power = Power::from_lumens(lm, s.power.luminous_efficacy);
        // bound at the fully steered state
        let mut steered = s.clone();
        steered.steer_all_towards(steered.pd)?;
        let peb = bounds::peb(&steered, cfg.k, &vec![cfg.k_n; s.oirs.len()])?.peb;

        for (mi, weighting) in [Weighting::Deb(match cfg.weighting {
            Weighting::Deb(mode) => mode,
            Weighting::Identity => WeightMode::InvDebSq,
        }), Weighting::Identity]
        .iter()
        .enumerate()
        {
            let method = if matches!(weighting, Weighting::Identity) { "ils" } else { "iwls" };
            let mut run_cfg = cfg.clone();
            run_cfg.weighting = *weighting;
            run_cfg.outer_eps = None; // record every iteration of the curve
            let per_trial: Vec<Option<Vec<f64>>> = (0..mc.trials)
                .into_par_iter()
                .map(|trial| {
                    let key = StreamKey::new(mc.seed, (pi * 2 + mi) as u64, trial as u64);
                    run_algorithm1(&s, &run_cfg, key).ok().map(|run| {
                        run.iterations
                            .iter()
                            .map(|it| (it.estimate - s.pd).norm())
                            .collect()
                    })
                })
                .collect();
            let used: Vec<&Vec<f64>> = per_trial.iter().flatten().collect();
            let dropped = mc.trials - used.len();
            for it in 0..run_cfg.outer_max {
                let errs: Vec<f64> = used.iter().map(|v| v[it]).collect();
                rows.push(ConvergenceRow {
                    outer_iter: it + 1,
                    rmse_m: rmse(&errs),
                    peb_m: peb,
                    method,
                    p_lm: lm,
                    trials_used: used.len(),
                    trials_dropped: dropped,
                });
            }
        }
    }
    Ok(rows)
}

/// One cell of a coverage map.
#[derive(Debug, Clone)]
pub struct CoverageCell {
    pub x: f64,
    pub y: f64,
    pub n_visible: usize,
    /// Position bound at the steered state; `None` where blanked.
    pub peb_m: Option<f64>,
    /// Monte Carlo RMSE of the two-iteration localization run, if requested.
    pub rmse_m: Option<f64>,
    pub blank_reason: Option<&'static str>,
}

/// Floor coverage map.
#[derive(Debug, Clone)]
pub struct CoverageMap {
    pub resolution_m: f64,
    pub cells: Vec<CoverageCell>,
    /// Fraction of cells with at least two visible mirror links.
    pub coverage_fraction: f64,
}

impl CoverageMap {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["x_m", "y_m", "n_visible", "peb_m", "rmse_m", "blank_reason"]);
        for c in &self.cells {
            t.push(vec![
                Cell::Num(c.x),
                Cell::Num(c.y),
                Cell::Int(c.n_visible as i64),
                c.peb_m.map(Cell::Num).unwrap_or(Cell::Empty),
                c.rmse_m.map(Cell::Num).unwrap_or(Cell::Empty),
                c.blank_reason.map(Cell::from).unwrap_or(Cell::Empty),
            ]);
        }
        t
    }
}

/// Settings of a coverage-map run.
#[derive(Debug, Clone)]
pub struct CoverageCfg {
    pub resolution_m: f64,
    /// Monte Carlo trials per cell for the RMSE layer; 0 skips it.
    pub trials: usize,
    pub seed: u64,
    pub k: usize,
    pub k_n: usize,
    /// Outer steering iterations of the per-cell localization runs.
    pub outer_iters: usize,
}

impl Default for CoverageCfg {
    fn default() -> Self {
        CoverageCfg { resolution_m: 0.05, trials: 1000, seed: 1, k: 50, k_n: 100, outer_iters: 2 }
    }
}

/// Sweep the PD over the floor grid. A cell is localizable when at least
/// two mirrors offer a valid reflection at the template's initial
/// orientation; elsewhere the cell is blanked.
pub fn run_coverage_map(template: &Scene, cfg: &CoverageCfg) -> Result<CoverageMap> {
    let nx = (template.room_dims.x / cfg.resolution_m).round() as usize;
    let ny = (template.room_dims.y / cfg.resolution_m).round() as usize;
    let n_el = template.oirs.len();
    let mut alg = Algorithm1Config::for_scene(template);
    alg.k = cfg.k;
    alg.k_n = cfg.k_n;
    alg.outer_max = cfg.outer_iters;
    alg.outer_eps = None;

    let cells: Vec<CoverageCell> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let i = idx / ny;
            let j = idx % ny;
            let x = (i as f64 + 0.5) * cfg.resolution_m;
            let y = (j as f64 + 0.5) * cfg.resolution_m;
            let mut s = template.clone();
            s.pd = Vec3::new(x, y, 0.0);
            let n_visible = (0..n_el).filter(|&n| s.link_visible(n)).count();
            if n_visible < 2 {
                return CoverageCell {
                    x,
                    y,
                    n_visible,
                    peb_m: None,
                    rmse_m: None,
                    blank_reason: Some("insufficient_visible_oirs"),
                };
            }
            let mut steered = s.clone();
            let peb_m = steered
                .steer_all_towards(steered.pd)
                .ok()
                .and_then(|_| bounds::peb(&steered, cfg.k, &vec![cfg.k_n; n_el]).ok())
                .map(|rep| rep.peb);
            let rmse_m = if cfg.trials > 0 {
                let errs: Vec<f64> = (0..cfg.trials)
                    .filter_map(|trial| {
                        let key = StreamKey::new(cfg.seed, idx as u64, trial as u64);
                        run_algorithm1(&s, &alg, key)
                            .ok()
                            .map(|run| (run.final_estimate - s.pd).norm())
                    })
                    .collect();
                if errs.is_empty() {
                    None
                } else {
                    Some(rmse(&errs))
                }
            } else {
                None
            };
            CoverageCell { x, y, n_visible, peb_m, rmse_m, blank_reason: None }
        })
        .collect();

    let covered = cells.iter().filter(|c| c.blank_reason.is_none()).count();
    Ok(CoverageMap {
        resolution_m: cfg.resolution_m,
        cells,
        coverage_fraction: covered as f64 / (nx * ny) as f64,
    })
}

/// Named experiment presets reproducing the reference accuracy curves.
pub mod presets {
    use super::*;

    /// LoS sweep scene: PD directly beneath the LED, 3 m link.
    ///
    /// The reference LoS accuracy curves are generated at exactly d = 3 m;
    /// the bound values they plot are functions of (d, K, SNR) only.
    pub fn los_scene() -> Scene {
        table1_scene(Vec3::new(2.5, 2.5, 0.0), &[])
    }

    /// Single wall-center mirror, PD at the given position.
    pub fn single_mirror_scene(pd: Vec3) -> Scene {
        table1_scene(pd, &[(Vec3::new(2.5, 0.0, 1.5), Vec3::EY)])
    }

    /// PD on the 2.5 m horizontal arc around the mirror's floor projection.
    pub fn arc_pd(azimuth_deg: f64) -> Vec3 {
        let az = azimuth_deg.to_radians();
        Vec3::new(2.5 + 2.5 * az.cos(), 2.5 * az.sin(), 0.0)
    }

    /// Four wall-center mirrors, PD at [3, 3, 0].
    pub fn four_mirror_scene() -> Scene {
        table1_scene(Vec3::new(3.0, 3.0, 0.0), &crate::config::wall_center_mirrors())
    }

    /// Coverage template with n mirrors evenly distributed on the walls.
    pub fn coverage_scene(n: usize) -> Scene {
        table1_scene(Vec3::new(2.5, 2.5, 0.0), &wall_mirrors(n))
    }

    /// LoS RMSE vs SNR for K in {1, 3, 5} (three tables).
    pub fn fig2(mc: MonteCarloCfg) -> Result<Vec<(String, CsvTable)>> {
        let scene = los_scene();
        let snr: Vec<f64> = (10..=25).map(|v| v as f64).collect();
        let mut out = Vec::new();
        for k in [1usize, 3, 5] {
            let res = run_los_snr_sweep(&scene, k, &snr, mc)?;
            out.push((format!("fig2_k{k}.csv"), res.to_csv("deb_m")));
        }
        Ok(out)
    }

    /// NLoS RMSE vs arc azimuth for K1 in {5, 20, 80}.
    pub fn fig3(mc: MonteCarloCfg) -> Result<Vec<(String, CsvTable)>> {
        let scene = single_mirror_scene(arc_pd(90.0));
        let points: Vec<NlosPoint> = (0..=16)
            .map(|i| {
                let az = 70.0 + 2.5 * i as f64;
                NlosPoint { value: az, pd: arc_pd(az) }
            })
            .collect();
        let mut out = Vec::new();
        for k1 in [5usize, 20, 80] {
            let res = run_nlos_position_sweep(&scene, "azimuth_deg", &points, 10_000, k1, mc)?;
            out.push((format!("fig3_k{k1}.csv"), res.to_csv("deb_m")));
        }
        Ok(out)
    }

    /// NLoS RMSE vs horizontal PD-mirror distance along the y axis.
    pub fn fig4(mc: MonteCarloCfg) -> Result<Vec<(String, CsvTable)>> {
        let scene = single_mirror_scene(Vec3::new(2.5, 2.5, 0.0));
        let points: Vec<NlosPoint> = (0..=12)
            .map(|i| {
                let y = 1.5 + 0.25 * i as f64;
                NlosPoint { value: y, pd: Vec3::new(2.5, y, 0.0) }
            })
            .collect();
        let mut out = Vec::new();
        for k1 in [5usize, 20, 80] {
            let res = run_nlos_position_sweep(&scene, "horizontal_m", &points, 10_000, k1, mc)?;
            out.push((format!("fig4_k{k1}.csv"), res.to_csv("deb_m")));
        }
        Ok(out)
    }

    /// NLoS RMSE vs post-subtraction SNR with the mirror at its initial
    /// (mismatched) orientation and perfectly steered, K1 in {1, 3, 5}.
    pub fn fig5(mc: MonteCarloCfg) -> Result<Vec<(String, CsvTable)>> {
        let scene = single_mirror_scene(Vec3::new(3.0, 3.0, 0.0));
        let snr: Vec<f64> = (2..=11).map(|v| 5.0 * v as f64).collect(); // 10..55 dB
        let mut out = Vec::new();
        for k1 in [1usize, 3, 5] {
            for (steered, tag) in [(false, "initial"), (true, "steered")] {
                let res = run_nlos_snr_sweep(&scene, &snr, steered, 10_000, k1, mc)?;
                out.push((format!("fig5_{tag}_k{k1}.csv"), res.to_csv("deb_m")));
            }
        }
        Ok(out)
    }

    /// Localization RMSE vs outer steering iteration, IWLS and ILS, at
    /// 1000 and 3000 lm.
    pub fn fig7(mc: MonteCarloCfg) -> Result<Vec<(String, CsvTable)>> {
        let scene = four_mirror_scene();
        let cfg = Algorithm1Config::for_scene(&scene);
        let rows = run_localization_convergence(&scene, &cfg, &[1000.0, 3000.0], mc)?;
        Ok(vec![("fig7.csv".into(), convergence_csv(&rows))])
    }

    /// Coverage maps for N in {4, 8, 12}.
    pub fn fig8(seed: u64, trials: usize, resolution_m: f64) -> Result<Vec<(String, CsvTable)>> {
        let mut out = Vec::new();
        let mut summary = CsvTable::new(&["n_oirs", "coverage_fraction", "resolution_m"]);
        for n in [4usize, 8, 12] {
            let template = coverage_scene(n);
            let cfg = CoverageCfg { resolution_m, trials, seed, ..CoverageCfg::default() };
            let map = run_coverage_map(&template, &cfg)?;
            summary.push(vec![
                Cell::Int(n as i64),
                Cell::Num(map.coverage_fraction),
                Cell::Num(resolution_m),
            ]);
            out.push((format!("fig8_n{n}.csv"), map.to_csv()));
        }
        out.push(("fig8_coverage.csv".into(), summary));
        Ok(out)
    }
}
