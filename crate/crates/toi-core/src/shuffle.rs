//! Portable seeded randomness for the shuffling strategies.
//!
//! Shuffled batch layouts must be reproducible bit-for-bit across runs,
//! platforms, and reimplementations in other languages, so the generator is
//! pinned here rather than delegated to a library whose stream may change:
//!
//! * State initialisation: `state = splitmix64(seed)` (constants
//!   0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9, 0x94D049BB133111EB), with a
//!   zero result replaced by 0x9E3779B97F4A7C15.
//! * Stream: xorshift64* — `x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
//!   output = x * 0x2545F4914F6CDD1D`.
//! * Bounded draws: `next_u64() % bound`.
//! * Shuffle: Fisher–Yates, descending — for `i = len-1 .. 1`,
//!   swap `items[i]` with `items[next_below(i + 1)]`.

/// Seeded xorshift64* generator.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    /// Any seed is valid, including 0.
    pub fn new(seed: u64) -> Self {
        let mixed = splitmix64(seed);
        Xorshift64Star {
            state: if mixed != 0 { mixed } else { 0x9E37_79B9_7F4A_7C15 },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish draw in `0..bound`; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }
}

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic in-place Fisher–Yates shuffle driven by [`Xorshift64Star`].
pub fn fisher_yates<T>(items: &mut [T], seed: u64) {
    let mut rng = Xorshift64Star::new(seed);
    for i in (1..items.len()).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
