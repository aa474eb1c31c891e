//! Counter-based random streams.
//!
//! A stream is identified by (seed, replication, population). The ChaCha8
//! key is derived from (seed, population) and the ChaCha stream id is the
//! replication, so draw j of any stream is fixed regardless of which thread
//! produces it or in what order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one (seed, replication, population) triple.
pub fn stream(seed: u64, replication: u64, population: u64) -> ChaCha8Rng {
    let mut state = seed ^ population.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replication);
    rng
}

/// Uniform on the open interval (0, 1).
#[inline]
pub fn open_uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal variates by Box–Muller on consecutive uniform pairs.
pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, replication: u64, population: u64) -> Self {
        Self { rng: stream(seed, replication, population), spare: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = open_uniform(&mut self.rng);
        let u2 = open_uniform(&mut self.rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn next_uniform(&mut self) -> f64 {
        open_uniform(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = NormalStream::new(7, 3, 1);
            (0..5).map(|_| s.next_normal()).collect()
        };
        let b: Vec<f64> = {
            let mut s = NormalStream::new(7, 3, 1);
            (0..5).map(|_| s.next_normal()).collect()
        };
        let c: Vec<f64> = {
            let mut s = NormalStream::new(7, 4, 1);
            (0..5).map(|_| s.next_normal()).collect()
        };
        let d: Vec<f64> = {
            let mut s = NormalStream::new(7, 3, 2);
            (0..5).map(|_| s.next_normal()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn normal_moments() {
        let mut s = NormalStream::new(1, 0, 0);
        let n = 200_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let z = s.next_normal();
            m1 += z;
            m2 += z * z;
        }
        m1 /= n as f64;
        m2 /= n as f64;
        assert!(m1.abs() < 0.01);
        assert!((m2 - 1.0).abs() < 0.015);
    }
}
