use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Seeded generator with fully specified sampling routines.
///
/// The bit source is xoshiro256++ seeded through SplitMix64
/// (`seed_from_u64`). Integers use rejection sampling on the top bits;
/// normals use the cosine branch of Box–Muller with one fresh pair per draw.
#[derive(Debug, Clone)]
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `(0, 1]`.
    pub fn unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn uniform_int(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi - lo) as u64 + 1;
        let zone = u64::MAX - (u64::MAX % span + 1) % span;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return lo + (x % span) as i64;
            }
        }
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        let u1 = self.unit();
        let u2 = self.unit();
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        mean + sd * z
    }

    /// Normal sample, redrawn while negative.
    pub fn nonneg_normal(&mut self, mean: f64, sd: f64) -> f64 {
        loop {
            let v = self.normal(mean, sd);
            if v >= 0.0 {
                return v;
            }
        }
    }
}
