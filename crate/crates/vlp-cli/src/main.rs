//! Command-line simulator for OIRS-assisted visible-light indoor
//! positioning.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vlp_core::config::{self, Config, EstimatorKind, SweepVariable, WeightMode};
use vlp_core::csvio::{emit_csv, CsvTable};
use vlp_core::error::VlpError;
use vlp_core::harness::{self, presets, CoverageCfg, MonteCarloCfg, NlosPoint};
use vlp_core::localization::{Algorithm1Config, Weighting};
use vlp_core::{bounds, Vec3};

#[derive(Parser)]
#[command(
    name = "oirs-vlp",
    about = "Visible-light indoor positioning with a single LED and distributed mirror reflectors",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Ml,
    Rml,
}

impl From<EstimatorArg> for EstimatorKind {
    fn from(v: EstimatorArg) -> Self {
        match v {
            EstimatorArg::Ml => EstimatorKind::Ml,
            EstimatorArg::Rml => EstimatorKind::Rml,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightModeArg {
    InvDeb,
    InvDebSq,
}

impl From<WeightModeArg> for WeightMode {
    fn from(v: WeightModeArg) -> Self {
        match v {
            WeightModeArg::InvDeb => WeightMode::InvDeb,
            WeightModeArg::InvDebSq => WeightMode::InvDebSq,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print distance and position error bounds for a scene.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        /// LoS-phase sample count.
        #[arg(long, default_value_t = 50)]
        k: usize,
        /// Per-mirror phase sample count.
        #[arg(long, default_value_t = 100)]
        k_n: usize,
        /// Evaluate at the steered-toward-PD state instead of the stored tilts.
        #[arg(long, default_value_t = true)]
        steered: bool,
        /// Optional CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo localization run with adaptive beam steering.
    Localize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rml")]
        los_estimator: EstimatorArg,
        #[arg(long, value_enum, default_value = "rml")]
        nlos_estimator: EstimatorArg,
        #[arg(long, value_enum, default_value = "inv-deb-sq")]
        weight_mode: WeightModeArg,
        /// Outer steering iterations.
        #[arg(long, default_value_t = 5)]
        outer_max: usize,
        #[arg(long, default_value_t = 50)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        k_n: usize,
    },
    /// Run the sweep described by the config's [experiment] block.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Position-error-bound / RMSE map over the floor grid.
    CoverageMap {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per cell for the RMSE layer (0 = bounds and coverage only).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Grid resolution in meters.
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
        /// Paper-scale settings: 1 mm grid and 1000 trials per cell.
        #[arg(long, default_value_t = false)]
        paper_scale: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the reference experiments as named presets.
    Replicate {
        /// Comma-separated subset of fig2,fig3,fig4,fig5,fig7,fig8.
        #[arg(long, default_value = "fig2,fig3,fig4,fig5,fig7,fig8")]
        which: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Paper-scale coverage maps (1 mm grid); very slow.
        #[arg(long, default_value_t = false)]
        paper_scale: bool,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("OIRS_VLP_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                VlpError::ParseError { .. } | VlpError::ValidationError(_) | VlpError::Io(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(3),
            }
        }
    }
}

fn load(path: &Path) -> Result<Config, VlpError> {
    config::load_config(path)
}

fn write_outputs(
    dir: &Path,
    cfg: &Config,
    seed: u64,
    tables: &[(String, CsvTable)],
) -> Result<(), VlpError> {
    config::write_run_meta(dir, &cfg.config_hash, seed, &cfg.derived)?;
    for (name, table) in tables {
        emit_csv(table, &dir.join(name))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), VlpError> {
    match cli.command {
        Command::Bounds { config, k, k_n, steered, out } => {
            let cfg = load(&config)?;
            let mut scene = cfg.scene.clone();
            if steered {
                scene.steer_all_towards(scene.pd)?;
            }
            let report = bounds::peb(&scene, k, &vec![k_n; scene.oirs.len()])?;
            println!("deb_los_m = {:.9e}", report.deb_los);
            for (n, deb) in report.deb_nlos.iter().enumerate() {
                println!("deb_nlos_{n}_m = {deb:.9e}");
            }
            println!("peb_m = {:.9e}", report.peb);
            if let Some(dir) = out {
                let mut t = CsvTable::new(&["quantity", "value_m"]);
                t.push(vec!["deb_los".into(), report.deb_los.into()]);
                for (n, deb) in report.deb_nlos.iter().enumerate() {
                    t.push(vec![format!("deb_nlos_{n}").as_str().into(), (*deb).into()]);
                }
                t.push(vec!["peb".into(), report.peb.into()]);
                write_outputs(&dir, &cfg, cfg.run.seed, &[("bounds.csv".into(), t)])?;
            }
            Ok(())
        }
        Command::Localize {
            config,
            seed,
            trials,
            out,
            los_estimator,
            nlos_estimator,
            weight_mode,
            outer_max,
            k,
            k_n,
        } => {
            let cfg = load(&config)?;
            let scene = cfg.scene.clone();
            let seed = seed.unwrap_or(cfg.run.seed);
            let trials = trials.unwrap_or(cfg.run.trials);
            let mut alg = Algorithm1Config::for_scene(&scene);
            alg.k = k;
            alg.k_n = k_n;
            alg.outer_max = outer_max;
            alg.los_estimator = los_estimator.into();
            alg.nlos_estimator = nlos_estimator.into();
            alg.weighting = Weighting::Deb(weight_mode.into());
            let rows = harness::run_localization_convergence(
                &scene,
                &alg,
                &[scene.power.photometric],
                MonteCarloCfg { seed, trials },
            )?;
            for r in &rows {
                println!(
                    "{}  iter {}  rmse {:.6e} m  peb {:.6e} m",
                    r.method, r.outer_iter, r.rmse_m, r.peb_m
                );
            }
            if let Some(dir) = out {
                write_outputs(
                    &dir,
                    &cfg,
                    seed,
                    &[("localize.csv".into(), harness::convergence_csv(&rows))],
                )?;
            }
            Ok(())
        }
        Command::Sweep { config, seed, trials, out } => {
            let cfg = load(&config)?;
            let exp = cfg.experiment.clone().ok_or_else(|| {
                VlpError::ValidationError("config has no [experiment] block".into())
            })?;
            let seed = seed.unwrap_or(cfg.run.seed);
            let trials = trials.unwrap_or(cfg.run.trials);
            let mc = MonteCarloCfg { seed, trials };
            let scene = cfg.scene.clone();
            let single_mirror = |what: &str| -> Result<(), VlpError> {
                if scene.oirs.len() == 1 {
                    Ok(())
                } else {
                    Err(VlpError::ValidationError(format!(
                        "{what} sweeps need a scene with exactly one mirror element"
                    )))
                }
            };
            let (result, bound_name) = match exp.variable {
                SweepVariable::SnrDb => {
                    if exp.nlos_target {
                        single_mirror("nlos snr")?;
                        (
                            harness::run_nlos_snr_sweep(
                                &scene, &exp.values, false, exp.k_los, exp.k_n, mc,
                            )?,
                            "deb_m",
                        )
                    } else {
                        (harness::run_los_snr_sweep(&scene, exp.k, &exp.values, mc)?, "deb_m")
                    }
                }
                SweepVariable::AzimuthDeg => {
                    single_mirror("azimuth")?;
                    let points: Vec<NlosPoint> = exp
                        .values
                        .iter()
                        .map(|&az| NlosPoint { value: az, pd: presets::arc_pd(az) })
                        .collect();
                    (
                        harness::run_nlos_position_sweep(
                            &scene,
                            "azimuth_deg",
                            &points,
                            exp.k_los,
                            exp.k_n,
                            mc,
                        )?,
                        "deb_m",
                    )
                }
                SweepVariable::HorizontalM => {
                    single_mirror("horizontal")?;
                    let points: Vec<NlosPoint> = exp
                        .values
                        .iter()
                        .map(|&y| NlosPoint { value: y, pd: Vec3::new(2.5, y, 0.0) })
                        .collect();
                    (
                        harness::run_nlos_position_sweep(
                            &scene,
                            "horizontal_m",
                            &points,
                            exp.k_los,
                            exp.k_n,
                            mc,
                        )?,
                        "deb_m",
                    )
                }
                SweepVariable::OuterIter => {
                    let mut alg = Algorithm1Config::for_scene(&scene);
                    alg.k = exp.k;
                    alg.k_n = exp.k_n;
                    alg.los_estimator = exp.los_estimator;
                    alg.nlos_estimator = exp.nlos_estimator;
                    alg.weighting = Weighting::Deb(exp.weight_mode);
                    let rows = harness::run_localization_convergence(
                        &scene,
                        &alg,
                        &[scene.power.photometric],
                        mc,
                    )?;
                    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.run.out_dir));
                    write_outputs(
                        &dir,
                        &cfg,
                        seed,
                        &[("sweep.csv".into(), harness::convergence_csv(&rows))],
                    )?;
                    println!("wrote {}", dir.join("sweep.csv").display());
                    return Ok(());
                }
            };
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.run.out_dir));
            write_outputs(&dir, &cfg, seed, &[("sweep.csv".into(), result.to_csv(bound_name))])?;
            println!("wrote {}", dir.join("sweep.csv").display());
            Ok(())
        }
        Command::CoverageMap { config, seed, trials, resolution, paper_scale, out } => {
            let cfg = load(&config)?;
            let seed = seed.unwrap_or(cfg.run.seed);
            let cov = CoverageCfg {
                resolution_m: if paper_scale { 0.001 } else { resolution },
                trials: if paper_scale { 1000 } else { trials },
                seed,
                ..CoverageCfg::default()
            };
            let map = harness::run_coverage_map(&cfg.scene, &cov)?;
            println!(
                "coverage_fraction = {:.4} at {:.3} m resolution",
                map.coverage_fraction, map.resolution_m
            );
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.run.out_dir));
            write_outputs(&dir, &cfg, seed, &[("coverage_map.csv".into(), map.to_csv())])?;
            println!("wrote {}", dir.join("coverage_map.csv").display());
            Ok(())
        }
        Command::Replicate { which, seed, trials, out, paper_scale } => {
            let mc = MonteCarloCfg { seed, trials };
            let mut tables: Vec<(String, CsvTable)> = Vec::new();
            for name in which.split(',') {
                let mut batch = match name.trim() {
                    "fig2" => presets::fig2(mc)?,
                    "fig3" => presets::fig3(mc)?,
                    "fig4" => presets::fig4(mc)?,
                    "fig5" => presets::fig5(mc)?,
                    "fig7" => presets::fig7(mc)?,
                    "fig8" => {
                        let res = if paper_scale { 0.001 } else { 0.05 };
                        let cell_trials = if paper_scale { 1000 } else { 0 };
                        presets::fig8(seed, cell_trials, res)?
                    }
                    other => {
                        return Err(VlpError::ValidationError(format!(
                            "unknown preset: {other}"
                        )))
                    }
                };
                tables.append(&mut batch);
            }
            std::fs::create_dir_all(&out)?;
            for (name, table) in &tables {
                emit_csv(table, &out.join(name))?;
                println!("wrote {}", out.join(name).display());
            }
            Ok(())
        }
    }
}
