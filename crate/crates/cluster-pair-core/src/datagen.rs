//! Seeded synthetic label generators.
//!
//! Both generators draw from [`SplitMix64`], a small explicitly-specified
//! PRNG, and route all floating-point math through `libm`, so a given seed
//! produces bit-identical label sequences on every platform.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::metrics::summarize;
use crate::model::Clustering;

/// 64-bit generator with the splitmix state update: the state advances by
/// the golden-ratio constant `0x9E3779B97F4A7C15` and each output is the
/// `mix64` finalization of the new state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const INV_2_POW_53: f64 = 1.0 / 9_007_199_254_740_992.0;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * INV_2_POW_53
    }

    /// Unbiased uniform draw in `[0, bound)` via widening multiplication
    /// with rejection.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let mut wide = self.next_u64() as u128 * bound as u128;
        let mut low = wide as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                wide = self.next_u64() as u128 * bound as u128;
                low = wide as u64;
            }
        }
        (wide >> 64) as u64
    }

    /// Gaussian draw via the Box–Muller cosine transform: two uniforms per
    /// sample, `u1` mapped into `(0, 1]` so the logarithm stays finite, the
    /// sine branch discarded.
    #[inline]
    pub fn next_gaussian(&mut self, mean: f64, std: f64) -> f64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * INV_2_POW_53;
        let u2 = (self.next_u64() >> 11) as f64 * INV_2_POW_53;
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        mean + std * radius * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}

/// Derives an independent seed for stream `stream` of a base seed; streams
/// are consecutive outputs of the splitmix sequence seeded with `base_seed`.
pub fn derive_seed(base_seed: u64, stream: u64) -> u64 {
    mix64(base_seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Whether points spread uniformly or Gaussian-concentrated over clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Balanced,
    Unbalanced,
}

impl GenMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            GenMode::Balanced => "balanced",
            GenMode::Unbalanced => "unbalanced",
        }
    }
}

/// Parameters for one synthetic clustering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub mode: GenMode,
    pub n_communities: usize,
    pub n_rows: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(mode: GenMode, n_communities: usize, n_rows: usize, seed: u64) -> Result<Self> {
        if n_communities == 0 || n_rows == 0 {
            return Err(CoreError::InvalidInput(
                "generator needs n_communities >= 1 and n_rows >= 1".into(),
            ));
        }
        if n_communities > u32::MAX as usize {
            return Err(CoreError::InvalidInput(format!(
                "n_communities {n_communities} exceeds the label range"
            )));
        }
        Ok(Self { mode, n_communities, n_rows, seed })
    }

    pub fn generate(&self) -> Clustering {
        match self.mode {
            GenMode::Balanced => gen_balanced(self),
            GenMode::Unbalanced => gen_unbalanced(self),
        }
    }
}

/// Draws `n_rows` labels i.i.d. uniform over the `n_communities` clusters.
pub fn gen_balanced(cfg: &GenConfig) -> Clustering {
    debug_assert_eq!(cfg.mode, GenMode::Balanced);
    let mut rng = SplitMix64::new(cfg.seed);
    let k = cfg.n_communities as u64;
    let labels: Vec<u32> = (0..cfg.n_rows).map(|_| rng.next_below(k) as u32).collect();
    Clustering::new(labels, cfg.n_communities).expect("generated labels are dense")
}

/// Draws each label from a Gaussian with mean `(K + 1) / 2` and standard
/// deviation `K / 4`, rounds to the nearest integer (half away from zero),
/// clips into `[1, K]`, then shifts to 0-based indices.
pub fn gen_unbalanced(cfg: &GenConfig) -> Clustering {
    debug_assert_eq!(cfg.mode, GenMode::Unbalanced);
    let mut rng = SplitMix64::new(cfg.seed);
    let k = cfg.n_communities as f64;
    let mean = (k + 1.0) / 2.0;
    let std = k / 4.0;
    let labels: Vec<u32> = (0..cfg.n_rows)
        .map(|_| {
            let rounded = libm::round(rng.next_gaussian(mean, std));
            let clipped = rounded.clamp(1.0, k);
            clipped as u32 - 1
        })
        .collect();
    Clustering::new(labels, cfg.n_communities).expect("generated labels are dense")
}

/// Mean and population standard deviation of the cluster sizes; empty
/// clusters count as size 0, so the mean is always exactly `n_rows / k`.
pub fn cluster_size_stats(c: &Clustering) -> (f64, f64) {
    let sizes: Vec<f64> = c.cluster_sizes().into_iter().map(|s| s as f64).collect();
    summarize(&sizes).expect("clusterings have k >= 1")
}
