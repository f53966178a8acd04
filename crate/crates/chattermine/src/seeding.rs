//! Deterministic seed derivation.
//!
//! Every stochastic stage draws its seed from a single root seed, salted by
//! a stage name and an index. The mix is a plain FNV-1a fold followed by
//! splitmix64 finalization, so derived seeds are identical on every
//! platform and rand version.

/// Derive a stage seed from `root`, a stage label, and an item index.
pub fn stage_seed(root: u64, stage: &str, index: u64) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf29ce484222325;
    const FNV_PRIME: u64 = 0x100000001b3;
    let mut h = FNV_OFFSET;
    for b in stage.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(root ^ h ^ index.wrapping_mul(0x9e3779b97f4a7c15))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Seed-keyed Fisher-Yates permutation of `0..n`.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut state = seed;
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        state = splitmix64(state);
        let j = (state % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order
}
