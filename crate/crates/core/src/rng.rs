//! Counter-based pseudo-random numbers for reproducible parallel sampling.
//!
//! The generator is Philox2x64-10: a 128-bit counter and a 64-bit key are
//! mixed by ten rounds of multiply-high/xor, producing two 64-bit words per
//! block. Because output depends only on `(key, counter)`, any draw can be
//! located without generating its predecessors, which makes sharded runs
//! bit-reproducible regardless of worker count.
//!
//! Stream discipline used across this crate:
//!
//! * the key is the user-supplied seed,
//! * the high counter word is a *stream id* (one stream per Monte Carlo
//!   sample, per tomography setting, or per bootstrap step),
//! * the low counter word enumerates blocks within a stream.
//!
//! Uniform doubles take the top 53 bits of a word. Gaussian variates use the
//! Marsaglia polar method; Poisson variates use Knuth inversion for small
//! means and Hörmann's PTRD transformed rejection for means >= 10.

const PHILOX_M: u64 = 0xD2B7_4407_B1CE_6E93;
const PHILOX_W: u64 = 0x9E37_79B9_7F4A_7C15;
const ROUNDS: u32 = 10;

/// One Philox2x64-10 block: maps `(key, counter)` to two output words.
#[inline]
pub fn philox2x64(key: u64, counter: [u64; 2]) -> [u64; 2] {
    let mut k = key;
    let (mut x0, mut x1) = (counter[0], counter[1]);
    for _ in 0..ROUNDS {
        let prod = (x0 as u128) * (PHILOX_M as u128);
        let hi = (prod >> 64) as u64;
        let lo = prod as u64;
        x0 = hi ^ k ^ x1;
        x1 = lo;
        k = k.wrapping_add(PHILOX_W);
    }
    [x0, x1]
}

/// A single logical stream of the generator.
///
/// Streams with distinct `(seed, stream_id)` pairs never overlap.
#[derive(Debug, Clone)]
pub struct PhiloxStream {
    seed: u64,
    stream_id: u64,
    block: u64,
    buf: [u64; 2],
    pos: usize,
    gauss_spare: Option<f64>,
}

impl PhiloxStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        PhiloxStream {
            seed,
            stream_id,
            block: 0,
            buf: [0; 2],
            pos: 2,
            gauss_spare: None,
        }
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        if self.pos >= 2 {
            self.buf = philox2x64(self.seed, [self.block, self.stream_id]);
            self.block = self.block.wrapping_add(1);
            self.pos = 0;
        }
        let out = self.buf[self.pos];
        self.pos += 1;
        out
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard normal variate (Marsaglia polar method, spare cached).
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.gauss_spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.gauss_spare = Some(v * m);
                return u * m;
            }
        }
    }

    /// Poisson variate with the given mean.
    pub fn poisson(&mut self, mean: f64) -> u64 {
        assert!(
            mean.is_finite() && mean >= 0.0,
            "poisson mean must be finite and non-negative"
        );
        if mean == 0.0 {
            0
        } else if mean < 10.0 {
            self.poisson_knuth(mean)
        } else {
            self.poisson_ptrd(mean)
        }
    }

    fn poisson_knuth(&mut self, mean: f64) -> u64 {
        let limit = (-mean).exp();
        let mut k = 0u64;
        let mut p = 1.0;
        loop {
            p *= self.uniform();
            if p <= limit {
                return k;
            }
            k += 1;
        }
    }

    // Hörmann's transformed rejection with squeeze, valid for mean >= 10.
    fn poisson_ptrd(&mut self, mean: f64) -> u64 {
        let smu = mean.sqrt();
        let ln_mu = mean.ln();
        let b = 0.931 + 2.53 * smu;
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let v_r = 0.9277 - 3.6224 / (b - 2.0);
        loop {
            let u = self.uniform() - 0.5;
            let v = self.uniform();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
            if us >= 0.07 && v <= v_r {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
            let rhs = -mean + k * ln_mu - ln_factorial(k as u64);
            if lhs <= rhs {
                return k as u64;
            }
        }
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Natural log of k! — exact table for small k, Stirling series otherwise.
pub fn ln_factorial(k: u64) -> f64 {
    const TABLE: [f64; 10] = [
        0.0,
        0.0,
        std::f64::consts::LN_2,
        1.791_759_469_228_055,
        3.178_053_830_347_946,
        4.787_491_742_782_046,
        6.579_251_212_010_101,
        8.525_161_361_065_415,
        10.604_602_902_745_25,
        12.801_827_480_081_469,
    ];
    if (k as usize) < TABLE.len() {
        return TABLE[k as usize];
    }
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x + 0.5) * x.ln() - x
        + LN_SQRT_2PI
        + inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0)))
}
