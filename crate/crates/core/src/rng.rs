//! Seeded, splittable random streams.
//!
//! Every random quantity in a simulation is addressed by a path of integers
//! (a domain tag followed by realization, user, cluster and antenna indices).
//! The path and the scenario seed are hashed into a ChaCha8 key, so each
//! substream is a pure function of `(seed, path)`. Generating links in any
//! order, on any number of threads, yields bitwise identical values.
//!
//! Gaussian values use the Box–Muller transform with a fixed layout: each
//! complex sample consumes two `u64` words `a`, `b`,
//!
//! ```text
//! u1 = ((a >> 11) + 1) · 2⁻⁵³          ∈ (0, 1]
//! u2 =  (b >> 11)      · 2⁻⁵³          ∈ [0, 1)
//! z  = √(−ln u1) · (cos 2πu2 + i sin 2πu2)
//! ```
//!
//! which is circularly-symmetric CN(0, 1): real and imaginary parts each have
//! variance 1/2.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Domain tags keep the substreams of different model components disjoint.
pub mod domain {
    /// Cluster directions and phase offsets.
    pub const SPATIAL: u64 = 1;
    /// Temporal/frequential fading grids.
    pub const FADING: u64 = 2;
    /// Receiver noise.
    pub const NOISE: u64 = 3;
    /// Transmit symbols.
    pub const SYMBOLS: u64 = 4;
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const INV_2_53: f64 = 1.0 / 9_007_199_254_740_992.0;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Root of all substreams of one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed(pub u64);

impl StreamSeed {
    pub fn substream(&self, path: &[u64]) -> Substream {
        let mut h = splitmix(self.0 ^ GOLDEN);
        for (depth, &x) in path.iter().enumerate() {
            h = splitmix(h ^ splitmix(x.wrapping_add(GOLDEN.wrapping_mul(depth as u64 + 1))));
        }
        // length-tag so that [a] and [a, 0] never collide
        h = splitmix(h ^ (path.len() as u64).wrapping_mul(GOLDEN));
        let mut key = [0u8; 32];
        for (m, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = splitmix(h.wrapping_add(GOLDEN.wrapping_mul(m as u64 + 1)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Substream {
            rng: ChaCha8Rng::from_seed(key),
        }
    }
}

/// One independent random stream.
#[derive(Debug, Clone)]
pub struct Substream {
    rng: ChaCha8Rng,
}

impl Substream {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * INV_2_53
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    fn uniform_open_low(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * INV_2_53
    }

    /// Circularly-symmetric complex Gaussian with unit variance.
    #[inline]
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = self.uniform_open_low();
        let u2 = self.uniform();
        let radius = (-u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        Complex64::new(radius * c, radius * s)
    }

    pub fn fill_complex_normal(&mut self, out: &mut [Complex64]) {
        for z in out {
            *z = self.complex_normal();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_reproducible() {
        let seed = StreamSeed(7);
        let (mut a, mut b) = (seed.substream(&[2, 0, 1]), seed.substream(&[2, 0, 1]));
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_paths_give_distinct_streams() {
        let seed = StreamSeed(7);
        let paths: [&[u64]; 5] = [&[1], &[1, 0], &[0, 1], &[2, 0, 1], &[2, 1, 0]];
        let firsts: Vec<u64> = paths.iter().map(|p| seed.substream(p).next_u64()).collect();
        for i in 0..firsts.len() {
            for j in i + 1..firsts.len() {
                assert_ne!(
                    firsts[i], firsts[j],
                    "paths {:?} and {:?}",
                    paths[i], paths[j]
                );
            }
        }
        assert_ne!(
            StreamSeed(7).substream(&[1]).next_u64(),
            StreamSeed(8).substream(&[1]).next_u64()
        );
    }

    #[test]
    fn uniform_range() {
        let mut s = StreamSeed(1).substream(&[]);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
            let v = s.uniform_open_low();
            assert!(v > 0.0 && v <= 1.0);
        }
    }

    #[test]
    fn complex_normal_moments() {
        let n = 200_000;
        let mut s = StreamSeed(3).substream(&[domain::FADING]);
        let (mut mean, mut power, mut pseudo, mut re2) =
            (Complex64::new(0.0, 0.0), 0.0, Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let z = s.complex_normal();
            mean += z;
            power += z.norm_sqr();
            pseudo += z * z;
            re2 += z.re * z.re;
        }
        let n = n as f64;
        assert!((mean / n).norm() < 5.0 / n.sqrt());
        assert!((power / n - 1.0).abs() < 0.01);
        assert!((pseudo / n).norm() < 0.01);
        assert!((re2 / n - 0.5).abs() < 0.01);
    }
}
