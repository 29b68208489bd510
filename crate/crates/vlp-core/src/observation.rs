//! Synthetic photocurrent sampling under the structured activation protocol.
//!
//! A measurement round consists of one LoS-only batch (all mirrors
//! deactivated) followed by one batch per mirror with exactly that mirror
//! active. Samples are i.i.d. Gaussian with the signal-dependent variance
//! sigma^2 = a + b * mean.
//!
//! Reproducibility: every batch draws from a counter-based stream keyed by
//! (master seed, context, trial, phase). Batches can therefore be generated
//! in any order, on any number of workers, with bit-identical results.

use crate::channel::NoiseCoefficients;
use crate::error::{Result, VlpError};
use crate::estimation::LosCoefficient;
use crate::geometry::Scene;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Which protocol phase a batch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    LosOnly,
    OirsActive(usize),
}

impl Phase {
    fn index(self) -> u64 {
        match self {
            Phase::LosOnly => 0,
            Phase::OirsActive(n) => 1 + n as u64,
        }
    }
}

/// Address of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    /// Master seed of the whole experiment.
    pub seed: u64,
    /// Disambiguates the enclosing context (sweep point, grid cell, outer
    /// iteration), so trials never share a stream across contexts.
    pub context: u64,
    /// Monte Carlo trial index.
    pub trial: u64,
}

impl StreamKey {
    pub fn new(seed: u64, context: u64, trial: u64) -> Self {
        StreamKey { seed, context, trial }
    }

    /// Fresh generator for one (key, phase) pair.
    pub fn rng(&self, phase: Phase) -> ChaCha8Rng {
        let mut bytes = [0u8; 32];
        bytes[0..8].copy_from_slice(&self.seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&self.context.to_le_bytes());
        bytes[16..24].copy_from_slice(&self.trial.to_le_bytes());
        bytes[24..32].copy_from_slice(&phase.index().to_le_bytes());
        ChaCha8Rng::from_seed(bytes)
    }
}

/// Raw photocurrent samples of one protocol phase, A.
#[derive(Debug, Clone)]
pub struct ObservationBatch {
    pub phase: Phase,
    pub samples: Vec<f64>,
}

impl ObservationBatch {
    pub fn count(&self) -> usize {
        self.samples.len()
    }
}

/// NLoS batch after subtraction of the estimated LoS mean, A.
#[derive(Debug, Clone)]
pub struct CompensatedBatch {
    pub oirs_index: usize,
    pub samples: Vec<f64>,
    /// LoS distance estimate whose mean was subtracted, m.
    pub d_hat_used: f64,
}

fn draw(mean: f64, variance: f64, k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if variance == 0.0 {
        return vec![mean; k];
    }
    let normal = Normal::new(mean, variance.sqrt()).expect("valid normal");
    (0..k).map(|_| normal.sample(rng)).collect()
}

/// Sample the LoS-only phase: K i.i.d. draws of N(R p h, a + b R p h).
///
/// Protocol precondition: every mirror deactivated.
pub fn sample_los(scene: &Scene, coeffs: &NoiseCoefficients, k: usize, key: StreamKey) -> ObservationBatch {
    assert!(k >= 1, "need at least one sample");
    assert!(
        scene.oirs.iter().all(|el| !el.active),
        "LoS phase requires all mirrors deactivated"
    );
    let mean = scene.pd_params.responsivity * scene.power.radiometric * scene.los_gain();
    let mut rng = key.rng(Phase::LosOnly);
    ObservationBatch { phase: Phase::LosOnly, samples: draw(mean, coeffs.variance_at(mean), k, &mut rng) }
}

/// Sample the phase with exactly mirror `n` active: K_n i.i.d. draws of
/// N(R p (h + h_n), a + b R p (h + h_n)).
///
/// Fails with `InvalidLink` when no specular path exists for element `n` at
/// its current orientation.
pub fn sample_nlos(
    scene: &Scene,
    n: usize,
    coeffs: &NoiseCoefficients,
    k_n: usize,
    key: StreamKey,
) -> Result<ObservationBatch> {
    assert!(k_n >= 1, "need at least one sample");
    assert!(
        scene.oirs.iter().enumerate().all(|(i, el)| el.active == (i == n)),
        "single-active protocol violated"
    );
    let h_n = scene
        .nlos_gain_at_current_tilt(n)
        .map_err(|reason| VlpError::InvalidLink { element: n, reason })?;
    let mean = scene.pd_params.responsivity
        * scene.power.radiometric
        * (scene.los_gain() + h_n);
    let mut rng = key.rng(Phase::OirsActive(n));
    Ok(ObservationBatch {
        phase: Phase::OirsActive(n),
        samples: draw(mean, coeffs.variance_at(mean), k_n, &mut rng),
    })
}

/// Subtract the estimated LoS mean xi / d_hat^(m+3) from every sample of an
/// active-mirror batch.
pub fn subtract_los(
    batch: &ObservationBatch,
    d_hat: f64,
    xi: &LosCoefficient,
    lambertian_order: f64,
) -> CompensatedBatch {
    let Phase::OirsActive(n) = batch.phase else {
        panic!("subtraction applies to active-mirror batches only");
    };
    assert!(d_hat > 0.0);
    let mu0_hat = xi.mean_at(d_hat, lambertian_order);
    CompensatedBatch {
        oirs_index: n,
        samples: batch.samples.iter().map(|&x| x - mu0_hat).collect(),
        d_hat_used: d_hat,
    }
}
