//! Small internal numeric helpers shared across modules.

/// Rounds to the nearest multiple of 1e−9 (nano-unit). Grids are built as
/// `min + i·step` and rounded so that repeated constructions and parallel
/// partitions agree bit-for-bit.
pub(crate) fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// Ascending grid `min, min+step, …` up to `max` (inclusive within a 1e−9
/// slack), each value rounded to 1e−9.
pub(crate) fn grid_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    debug_assert!(step > 0.0);
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| round9(min + i as f64 * step)).collect()
}

/// SplitMix64 — the standard 64-bit mixer, used to derive independent
/// per-trial RNG seeds from a base seed.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
