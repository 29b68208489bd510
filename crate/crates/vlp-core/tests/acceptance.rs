//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured quantities before asserting.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see
//! every line; the suite is deterministic (fixed seeds), so outcomes are
//! reproducible bit for bit.

use vlp_core::bounds::{self, deb_los_raw, fim_los_raw, fim_nlos_raw, gaussian_fim_entry};
use vlp_core::channel::{ChannelConstants, NoiseCoefficients};
use vlp_core::config::table1_scene;
use vlp_core::estimation::{
    los_coefficient, ml_los, ml_nlos, nlos_coefficient_at_point, rml_los, rml_nlos_from_mean,
    GridSpec, LosCoefficient, NlosCoefficient, SufficientStats,
};
use vlp_core::harness::{self, presets, CoverageCfg, MonteCarloCfg};
use vlp_core::localization::{iwls_solve, Algorithm1Config, AnchorSet};
use vlp_core::observation::CompensatedBatch;
use vlp_core::Vec3;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TRIALS: usize = 10_000;

fn report(criterion: &str, pass: bool, detail: &str) -> bool {
    println!("criterion {criterion}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// 1. Analytic DEB curve: 0.2602 m at (10 dB, K=1) and 0.02069 m at
///    (25 dB, K=5), within 1%.
#[test]
fn criterion_01_deb_curve_reproduction() {
    let scene = presets::los_scene();
    let mut pass = true;
    for (snr_db, k, expected) in [(10.0, 1usize, 0.2602), (25.0, 5, 0.02069)] {
        let mut s = scene.clone();
        s.power = harness::power_for_target_snr(&s, snr_db, &[]).unwrap();
        let deb = bounds::deb_los(s.los_distance(), k, &s);
        let rel = (deb - expected).abs() / expected;
        pass &= report(
            "1 (DEB curve)",
            rel < 0.01,
            &format!("SNR {snr_db} dB, K={k}: DEB {deb:.6} m vs {expected} m ({:.3}% off)", rel * 100.0),
        );
    }
    assert!(pass);
}

/// 2. Both LoS estimators within 10% of the DEB for SNR >= 15 dB at K = 1.
#[test]
fn criterion_02_los_estimators_attain_deb() {
    let scene = presets::los_scene();
    let snr: Vec<f64> = (15..=25).map(f64::from).collect();
    let res = harness::run_los_snr_sweep(&scene, 1, &snr, MonteCarloCfg { seed: 2, trials: TRIALS })
        .unwrap();
    let mut pass = true;
    for row in &res.rows {
        let ok = row.rmse_ml <= 1.10 * row.bound && row.rmse_rml <= 1.10 * row.bound;
        pass &= report(
            "2 (LoS attains DEB)",
            ok,
            &format!(
                "SNR {} dB: RMSE ml {:.5} / rml {:.5} vs DEB {:.5} (ratios {:.3}, {:.3})",
                row.value,
                row.rmse_ml,
                row.rmse_rml,
                row.bound,
                row.rmse_ml / row.bound,
                row.rmse_rml / row.bound
            ),
        );
    }
    assert!(pass);
}

/// 3. Sample-count scaling of the accuracy curves: at the 10 dB grid point
///    the RMSE drops by 58% (K=3) and 67.7% (K=5) versus K=1, within
///    5 points.
#[test]
fn criterion_03_k_scaling() {
    let scene = presets::los_scene();
    let mc = MonteCarloCfg { seed: 3, trials: TRIALS };
    let rmse_at_10 = |k: usize| {
        harness::run_los_snr_sweep(&scene, k, &[10.0], mc).unwrap().rows[0].rmse_rml
    };
    let base = rmse_at_10(1);
    let red3 = 100.0 * (1.0 - rmse_at_10(3) / base);
    let red5 = 100.0 * (1.0 - rmse_at_10(5) / base);
    let pass3 = (red3 - 58.0).abs() <= 5.0;
    let pass5 = (red5 - 67.7).abs() <= 5.0;
    let p = report(
        "3 (K scaling)",
        pass3 && pass5,
        &format!("RMSE reduction at 10 dB: K=3 {red3:.1}% (want 58±5), K=5 {red5:.1}% (want 67.7±5)"),
    );
    assert!(p);
}

/// 4. Forcing the shot-noise slope to zero collapses ML onto RML: exactly
///    (1e-12 relative) for the LoS closed forms, within the 1e-6 m grid
///    tolerance for the NLoS pair, over 1e3 random instances.
#[test]
fn criterion_04_b_zero_collapse() {
    let mut rng = StdRng::seed_from_u64(4);
    let mut max_rel = 0f64;
    for _ in 0..1000 {
        let coeffs = NoiseCoefficients { a: 10f64.powf(rng.gen_range(-19.0..-16.0)), b: 0.0 };
        let m = rng.gen_range(0.3..1.5);
        let xi = LosCoefficient { xi: 10f64.powf(rng.gen_range(-6.0..-4.0)) };
        let mu = xi.mean_at(rng.gen_range(1.5..5.0), m);
        let mean = mu * rng.gen_range(0.6..1.4);
        let spread = rng.gen_range(0.0..0.3);
        let stats =
            SufficientStats { mean, mean_sq: mean * mean * (1.0 + spread), count: 8 };
        let dm = ml_los(&stats, &xi, &coeffs, m).unwrap().value;
        let dr = rml_los(&stats, &xi, m).unwrap().value;
        max_rel = max_rel.max((dm - dr).abs() / dr);
    }
    let pass_los = max_rel < 1e-12;

    let grid = GridSpec { min: 0.01, max: 9.0, step: 1e-3, refine_tol: 1e-7 };
    let xi = LosCoefficient { xi: 3e-6 };
    let mut max_abs = 0f64;
    let mut checked = 0;
    for _ in 0..1000 {
        let coeffs = NoiseCoefficients { a: 10f64.powf(rng.gen_range(-19.0..-16.0)), b: 0.0 };
        let coeff = NlosCoefficient {
            omega: 10f64.powf(rng.gen_range(-6.0..-4.0)),
            s_n: rng.gen_range(1.5..4.0),
        };
        let chi = coeff.mean_at(rng.gen_range(0.8..5.0));
        let k = rng.gen_range(1..8usize);
        let samples: Vec<f64> = (0..k).map(|_| chi * rng.gen_range(0.8..1.2)).collect();
        let comp = CompensatedBatch { oirs_index: 0, samples, d_hat_used: 3.0 };
        let (Ok(dm), Ok(dr)) = (
            ml_nlos(&comp, &coeff, 3.0, &xi, &coeffs, 0.646, &grid),
            vlp_core::estimation::rml_nlos(&comp, &coeff),
        ) else {
            continue;
        };
        checked += 1;
        max_abs = max_abs.max((dm.value - dr.value).abs());
    }
    let pass_nlos = max_abs < 1e-6 && checked > 900;
    let p = report(
        "4 (b=0 collapse)",
        pass_los && pass_nlos,
        &format!("LoS max rel diff {max_rel:.2e} (<1e-12); NLoS max abs diff {max_abs:.2e} m over {checked} instances (<1e-6)"),
    );
    assert!(p);
}

/// 5a. Aligned-mirror accuracy: at the 90° arc point with K1 = 5 and
///     1000 lm, both estimators' RMSE within 10% of the DEB.
#[test]
fn criterion_05a_nlos_deb_at_alignment() {
    let scene = presets::single_mirror_scene(presets::arc_pd(90.0));
    let points = [harness::NlosPoint { value: 90.0, pd: presets::arc_pd(90.0) }];
    let res = harness::run_nlos_position_sweep(
        &scene,
        "azimuth_deg",
        &points,
        10_000,
        5,
        MonteCarloCfg { seed: 5, trials: TRIALS },
    )
    .unwrap();
    let row = &res.rows[0];
    let ok = row.rmse_ml <= 1.10 * row.bound && row.rmse_rml <= 1.10 * row.bound;
    let p = report(
        "5a (NLoS RMSE = DEB at 90°)",
        ok,
        &format!(
            "RMSE ml {:.5} / rml {:.5} vs DEB {:.5} (ratios {:.3}, {:.3})",
            row.rmse_ml,
            row.rmse_rml,
            row.bound,
            row.rmse_ml / row.bound,
            row.rmse_rml / row.bound
        ),
    );
    assert!(p);
}

/// 5b. Robustness to pointing mismatch: RMSE at most 5 cm for arc offsets
///     up to 20 degrees.
#[test]
fn criterion_05b_nlos_misalignment_within_5cm() {
    let scene = presets::single_mirror_scene(presets::arc_pd(90.0));
    let offsets = [5.0, 10.0, 15.0, 20.0];
    let mut points = Vec::new();
    for off in offsets {
        for az in [90.0 - off, 90.0 + off] {
            points.push(harness::NlosPoint { value: az, pd: presets::arc_pd(az) });
        }
    }
    let res = harness::run_nlos_position_sweep(
        &scene,
        "azimuth_deg",
        &points,
        10_000,
        5,
        MonteCarloCfg { seed: 5, trials: TRIALS },
    )
    .unwrap();
    let mut pass = true;
    for row in &res.rows {
        let ok = row.rmse_ml <= 0.05 && row.rmse_rml <= 0.05;
        pass &= report(
            "5b (RMSE <= 5 cm up to 20°)",
            ok,
            &format!(
                "azimuth {}°: RMSE ml {:.2} cm, rml {:.2} cm",
                row.value,
                row.rmse_ml * 100.0,
                row.rmse_rml * 100.0
            ),
        );
    }
    assert!(pass);
}

/// 6. Mismatch saturation: with the mirror at its initial orientation the
///    RMSE plateaus (50 dB / 45 dB ratio within [0.9, 1.1]) while the
///    steered variant keeps improving (ratio < 0.8).
#[test]
fn criterion_06_saturation_under_mismatch() {
    let scene = presets::single_mirror_scene(Vec3::new(3.0, 3.0, 0.0));
    let mc = MonteCarloCfg { seed: 6, trials: TRIALS };
    let sweep = |steered: bool| {
        harness::run_nlos_snr_sweep(&scene, &[45.0, 50.0], steered, 10_000, 3, mc).unwrap()
    };
    let mis = sweep(false);
    let ratio_mis = mis.rows[1].rmse_rml / mis.rows[0].rmse_rml;
    let steered = sweep(true);
    let ratio_st = steered.rows[1].rmse_rml / steered.rows[0].rmse_rml;
    let ok_mis = (0.9..=1.1).contains(&ratio_mis);
    let ok_st = ratio_st < 0.8;
    let p = report(
        "6 (saturation under mismatch)",
        ok_mis && ok_st,
        &format!(
            "misaligned RMSE(50)/RMSE(45) = {ratio_mis:.3} (want [0.9,1.1], plateau at {:.2} cm); steered ratio = {ratio_st:.3} (< 0.8)",
            mis.rows[1].rmse_rml * 100.0
        ),
    );
    assert!(p);
}

/// 7a. Localization convergence: weighted solver within 15% of the PEB at
///     outer iteration 2 (N=4, K=50, K_n=100).
#[test]
fn criterion_07a_iwls_attains_peb() {
    let rows = fig7_rows();
    let iwls2 = rows
        .iter()
        .find(|r| r.method == "iwls" && r.outer_iter == 2)
        .expect("row exists");
    let ratio = iwls2.rmse_m / iwls2.peb_m;
    let p = report(
        "7a (IWLS vs PEB at iteration 2)",
        ratio <= 1.15,
        &format!("RMSE {:.5} m vs PEB {:.5} m (ratio {:.3}, want <= 1.15)", iwls2.rmse_m, iwls2.peb_m, ratio),
    );
    assert!(p);
}

/// 7b. Steady-state ILS over IWLS RMSE ratio within [1.3, 1.7].
#[test]
fn criterion_07b_ils_iwls_steady_ratio() {
    let rows = fig7_rows();
    let steady = |method: &str| {
        let v: Vec<f64> = rows
            .iter()
            .filter(|r| r.method == method && r.outer_iter >= 3)
            .map(|r| r.rmse_m)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let ratio = steady("ils") / steady("iwls");
    let p = report(
        "7b (ILS/IWLS steady ratio)",
        (1.3..=1.7).contains(&ratio),
        &format!(
            "ILS steady {:.5} m / IWLS steady {:.5} m = {:.3} (want [1.3, 1.7])",
            steady("ils"),
            steady("iwls"),
            ratio
        ),
    );
    assert!(p);
}

fn fig7_rows() -> Vec<harness::ConvergenceRow> {
    let scene = presets::four_mirror_scene();
    let cfg = Algorithm1Config::for_scene(&scene);
    harness::run_localization_convergence(
        &scene,
        &cfg,
        &[1000.0],
        MonteCarloCfg { seed: 7, trials: TRIALS },
    )
    .unwrap()
}

/// 8. Fisher-information identities: the generic scalar-Gaussian entry
///    reproduces both closed-form informations to 1e-10 over 1e3 draws, and
///    the joint matrix matches a Monte Carlo Hessian of the full
///    log-likelihood within 3 standard errors on a 3-mirror scene.
#[test]
fn criterion_08_fim_identity() {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let coeffs = NoiseCoefficients {
            a: 10f64.powf(rng.gen_range(-19.0..-16.0)),
            b: 10f64.powf(rng.gen_range(-13.0..-11.0)),
        };
        let m = rng.gen_range(0.3..2.0);
        let xi = LosCoefficient { xi: 10f64.powf(rng.gen_range(-6.5..-4.0)) };
        let d = rng.gen_range(1.0..5.0);
        let k = rng.gen_range(1..100usize);
        let mu = xi.mean_at(d, m);
        let dmu = -(m + 3.0) * mu / d;
        let s2 = coeffs.variance_at(mu);
        let lhs = gaussian_fim_entry(dmu, dmu, coeffs.b * dmu, coeffs.b * dmu, s2, k as f64);
        worst = worst.max((lhs / fim_los_raw(d, k, &xi, &coeffs, m) - 1.0).abs());

        let coeff = NlosCoefficient {
            omega: 10f64.powf(rng.gen_range(-6.0..-4.0)),
            s_n: rng.gen_range(1.5..4.0),
        };
        let dn = rng.gen_range(0.8..5.0);
        let chi = coeff.mean_at(dn);
        let dchi = coeff.mean_derivative_at(dn);
        let s2n = coeffs.variance_at(mu + chi);
        let lhs =
            gaussian_fim_entry(dchi, dchi, coeffs.b * dchi, coeffs.b * dchi, s2n, k as f64);
        worst = worst.max((lhs / fim_nlos_raw(dn, k, &coeff, mu, &coeffs) - 1.0).abs());
    }
    let pass_identity = worst < 1e-10;
    let pass_mc = monte_carlo_hessian_check();
    let p = report(
        "8 (FIM identity)",
        pass_identity && pass_mc,
        &format!("max diagonal mismatch {worst:.2e} (<1e-10); MC Hessian agreement: {pass_mc}"),
    );
    assert!(p);
}

/// -E[d2 lnL] estimated by finite differences over 1e5 observation rounds
/// must match the joint FIM entrywise within 3 standard errors.
fn monte_carlo_hessian_check() -> bool {
    use rand_distr::{Distribution, Normal};
    let mirrors = [
        (Vec3::new(2.5, 0.0, 1.5), Vec3::EY),
        (Vec3::new(0.0, 2.5, 1.5), Vec3::EX),
        (Vec3::new(5.0, 2.5, 1.5), -Vec3::EX),
    ];
    let mut scene = table1_scene(Vec3::new(3.0, 3.0, 0.0), &mirrors);
    scene.steer_all_towards(scene.pd).unwrap();
    let consts = ChannelConstants::of(&scene);
    let m = consts.lambertian_order;
    let xi = los_coefficient(&scene);
    let (k, k_n) = (4usize, 4usize);

    let fm = bounds::joint_fim(&scene, k, &[k_n; 3]).unwrap();
    let d_true = scene.los_distance();
    let r: Vec<Vec3> = (0..3).map(|n| scene.reflection(n).unwrap()).collect();
    let coeff: Vec<NlosCoefficient> =
        (0..3).map(|n| nlos_coefficient_at_point(&scene, n, r[n])).collect();
    let dn_true: Vec<f64> = r.iter().map(|rp| rp.distance(scene.pd)).collect();

    // log-likelihood of one observation round at parameter vector theta
    let lnl = |theta: &[f64; 4], los: &[f64], nlos: &[Vec<f64>]| -> f64 {
        let mu0 = xi.mean_at(theta[0], m);
        let s20 = consts.noise.variance_at(mu0);
        let mut l = 0.0;
        for &x in los {
            l += -0.5 * (2.0 * std::f64::consts::PI * s20).ln() - (x - mu0) * (x - mu0) / (2.0 * s20);
        }
        for n in 0..3 {
            let mean = mu0 + coeff[n].mean_at(theta[n + 1]);
            let s2 = consts.noise.variance_at(mean);
            for &x in &nlos[n] {
                l += -0.5 * (2.0 * std::f64::consts::PI * s2).ln() - (x - mean) * (x - mean) / (2.0 * s2);
            }
        }
        l
    };

    let theta0 = [d_true, dn_true[0], dn_true[1], dn_true[2]];
    let h = [1e-4 * d_true, 1e-4 * dn_true[0], 1e-4 * dn_true[1], 1e-4 * dn_true[2]];
    let draws = 100_000;
    let mut rng = StdRng::seed_from_u64(88);
    let mut sums = [[0f64; 4]; 4];
    let mut sums_sq = [[0f64; 4]; 4];
    for _ in 0..draws {
        // one observation round at the true parameters
        let mu0 = xi.mean_at(d_true, m);
        let n0 = Normal::new(mu0, consts.noise.variance_at(mu0).sqrt()).unwrap();
        let los: Vec<f64> = (0..k).map(|_| n0.sample(&mut rng)).collect();
        let nlos: Vec<Vec<f64>> = (0..3)
            .map(|n| {
                let mean = mu0 + coeff[n].mean_at(dn_true[n]);
                let nn = Normal::new(mean, consts.noise.variance_at(mean).sqrt()).unwrap();
                (0..k_n).map(|_| nn.sample(&mut rng)).collect()
            })
            .collect();
        let f = |t: &[f64; 4]| lnl(t, &los, &nlos);
        let f0 = f(&theta0);
        for i in 0..4 {
            for j in i..4 {
                let hij = if i == j {
                    let mut tp = theta0;
                    tp[i] += h[i];
                    let mut tm = theta0;
                    tm[i] -= h[i];
                    (f(&tp) - 2.0 * f0 + f(&tm)) / (h[i] * h[i])
                } else {
                    let mut tpp = theta0;
                    tpp[i] += h[i];
                    tpp[j] += h[j];
                    let mut tpm = theta0;
                    tpm[i] += h[i];
                    tpm[j] -= h[j];
                    let mut tmp = theta0;
                    tmp[i] -= h[i];
                    tmp[j] += h[j];
                    let mut tmm = theta0;
                    tmm[i] -= h[i];
                    tmm[j] -= h[j];
                    (f(&tpp) - f(&tpm) - f(&tmp) + f(&tmm)) / (4.0 * h[i] * h[j])
                };
                sums[i][j] += hij;
                sums_sq[i][j] += hij * hij;
            }
        }
    }
    let mut ok = true;
    for i in 0..4 {
        for j in i..4 {
            let mean = sums[i][j] / draws as f64;
            let var = sums_sq[i][j] / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt();
            let expected = -fm.j_dist[(i, j)];
            let z = (mean - expected).abs() / se.max(1e-300);
            if z > 3.0 {
                println!("  MC Hessian entry ({i},{j}): mean {mean:.4e} vs -J {expected:.4e}, z = {z:.2}");
                ok = false;
            }
        }
    }
    ok
}

/// 9. Noise-free exactness: the closed-form estimators invert exact
///    statistics to 1e-9 m, and the solver recovers the position from
///    exact squared distances to 1e-9 m.
#[test]
fn criterion_09_noise_free_exactness() {
    let scene = presets::four_mirror_scene();
    let consts = ChannelConstants::of(&scene);
    let m = consts.lambertian_order;
    let xi = los_coefficient(&scene);
    let d = scene.los_distance();
    let mu = xi.mean_at(d, m);
    let stats = SufficientStats { mean: mu, mean_sq: mu * mu, count: 5 };
    let e_los = (rml_los(&stats, &xi, m).unwrap().value - d).abs();

    let mut steered = scene.clone();
    steered.steer_all_towards(steered.pd).unwrap();
    let mut e_nlos = 0f64;
    for n in 0..steered.oirs.len() {
        let r = steered.reflection(n).unwrap();
        let coeff = nlos_coefficient_at_point(&steered, n, r);
        let dn = r.distance(steered.pd);
        let t1 = coeff.mean_at(dn);
        e_nlos = e_nlos.max((rml_nlos_from_mean(t1, &coeff).unwrap() - dn).abs());
    }

    let anchors: Vec<Vec3> =
        std::iter::once(scene.led).chain(scene.oirs.iter().map(|el| el.center)).collect();
    let d_sq: Vec<f64> = anchors.iter().map(|a| (scene.pd - *a).dot(scene.pd - *a)).collect();
    let n = anchors.len();
    let set = AnchorSet { anchors, d_sq, weights: vec![1.0; n] };
    let trace = iwls_solve(&set, set.centroid_xy(), 1e-12, 200).unwrap();
    let (x, y) = trace.solution();
    let e_pos = ((x - scene.pd.x).powi(2) + (y - scene.pd.y).powi(2)).sqrt();

    let pass = e_los < 1e-9 && e_nlos < 1e-9 && e_pos < 1e-9;
    let p = report(
        "9 (noise-free exactness)",
        pass,
        &format!("LoS {e_los:.2e} m, NLoS {e_nlos:.2e} m, position {e_pos:.2e} m (all < 1e-9)"),
    );
    assert!(p);
}

/// 10. Floor coverage at 5 cm resolution: about 30% (N=4), 46% (N=8) and
///     80% (N=12), each within 5 points.
#[test]
fn criterion_10_coverage_fractions() {
    let mut pass = true;
    for (n, expected) in [(4usize, 30.0), (8, 46.0), (12, 80.0)] {
        let template = presets::coverage_scene(n);
        let cfg = CoverageCfg { resolution_m: 0.05, trials: 0, seed: 10, ..CoverageCfg::default() };
        let map = harness::run_coverage_map(&template, &cfg).unwrap();
        let got = 100.0 * map.coverage_fraction;
        pass &= report(
            "10 (coverage fractions)",
            (got - expected).abs() <= 5.0,
            &format!("N={n}: coverage {got:.1}% (want {expected}±5)"),
        );
    }
    assert!(pass);
}

/// 11. Determinism: identical outputs for repeated runs and for different
///     worker counts, byte for byte.
#[test]
fn criterion_11_determinism() {
    let scene = presets::los_scene();
    let mc = MonteCarloCfg { seed: 11, trials: 500 };
    let sweep_csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            harness::run_los_snr_sweep(&scene, 2, &[12.0, 20.0], mc).unwrap().to_csv("deb_m").to_string()
        })
    };
    let s1 = sweep_csv(1);
    let s2 = sweep_csv(1);
    let s4 = sweep_csv(4);

    let cov_template = presets::coverage_scene(4);
    let cov_csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let cfg = CoverageCfg {
                resolution_m: 0.25,
                trials: 5,
                seed: 11,
                ..CoverageCfg::default()
            };
            harness::run_coverage_map(&cov_template, &cfg).unwrap().to_csv().to_string()
        })
    };
    let c1 = cov_csv(1);
    let c3 = cov_csv(3);

    let loc_scene = presets::four_mirror_scene();
    let loc_csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let cfg = Algorithm1Config::for_scene(&loc_scene);
            let rows = harness::run_localization_convergence(
                &loc_scene,
                &cfg,
                &[1000.0],
                MonteCarloCfg { seed: 11, trials: 100 },
            )
            .unwrap();
            harness::convergence_csv(&rows).to_string()
        })
    };
    let l1 = loc_csv(1);
    let l4 = loc_csv(4);

    let pass = s1 == s2 && s1 == s4 && c1 == c3 && l1 == l4;
    let p = report(
        "11 (determinism)",
        pass,
        &format!(
            "sweep repeat {} / threads {}, coverage threads {}, localization threads {}",
            s1 == s2,
            s1 == s4,
            c1 == c3,
            l1 == l4
        ),
    );
    assert!(p);
}
