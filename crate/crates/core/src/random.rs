//! Seeded randomness. Every random draw in the crate goes through a ChaCha
//! stream keyed by `(seed, stream)`, so results do not depend on call order
//! across unrelated components.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{C64, ZERO};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Stable 64-bit stream id for a label (FNV-1a).
pub fn stream_id(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn unit_circle(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// Generic data vector: entries uniform on `[1,2] × [-0.5,0.5]·i`, zero on `zeros`.
pub fn generic_data(len: usize, zeros: &BTreeSet<usize>, seed: u64) -> Vec<C64> {
    let mut r = rng(seed, stream_id("data"));
    (0..len)
        .map(|i| {
            let z = C64::new(r.gen_range(1.0..2.0), r.gen_range(-0.5..0.5));
            if zeros.contains(&i) {
                ZERO
            } else {
                z
            }
        })
        .collect()
}
