use crate::error::{Error, Result};
use crate::instance::Instance;

use super::ndb::{build_ndb, NdbData};
use super::rng::Rng;

/// How the mean task time `μ` is derived from the task counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuMode {
    /// `μ = Σ d_i / (2H)`.
    #[default]
    Literal,
    /// `μ = 2qH / Σ d_i`.
    Balanced,
}

impl MuMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(MuMode::Literal),
            "balanced" => Ok(MuMode::Balanced),
            other => Err(Error::InvalidConfig(format!("unknown mu mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub p: usize,
    pub q: usize,
    pub h: f64,
    pub seed: u64,
    pub mu_mode: MuMode,
}

impl NoiseParams {
    pub fn new(p: usize, q: usize, seed: u64) -> Self {
        NoiseParams { p, q, h: 480.0, seed, mu_mode: MuMode::Literal }
    }
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

/// Random integer noise dosage instance.
///
/// `d_i ~ U{4..10}`, `t_i ~ N(μ, μ/5)` and `α_i ~ N(18, 4)` (standard
/// deviations), negative normal draws redrawn, times and noise rounded to six
/// decimals. Draw order: all `d`, then all `t`, then all `α`.
pub fn generate_noise(params: &NoiseParams) -> Result<Instance> {
    let NoiseParams { p, q, h, seed, mu_mode } = *params;
    if p == 0 || q == 0 || h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInstance("need p, q ≥ 1 and H > 0".into()));
    }
    let mut rng = Rng::new(seed);
    let d: Vec<u32> = (0..p).map(|_| rng.uniform_int(4, 10) as u32).collect();
    let total: f64 = d.iter().map(|&x| x as f64).sum();
    let mu = match mu_mode {
        MuMode::Literal => total / (2.0 * h),
        MuMode::Balanced => 2.0 * q as f64 * h / total,
    };
    let t = (0..p).map(|_| round6(rng.nonneg_normal(mu, mu / 5.0))).collect();
    let alpha = (0..p).map(|_| round6(rng.nonneg_normal(18.0, 4.0))).collect();
    build_ndb(&NdbData { name: format!("noise{p}_{q}_{h}_s{seed}"), p, q, d, t, alpha, h, integer: true })
}
