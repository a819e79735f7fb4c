//! Seeded randomness with a pinned generator and stream derivation.
//!
//! Every randomized path uses ChaCha12 (`rand_chacha::ChaCha12Rng`)
//! seeded via `seed_from_u64`. Independent streams (one per trial or
//! sample) derive their seeds from a master seed and a stream index
//! with the splitmix64 finalizer, so results depend only on
//! (master seed, index), never on worker count or iteration order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 over `master + (index + 1) * golden-gamma`. Documented so
/// external tooling can reproduce any single stream.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The stream for (master, index).
pub fn stream_rng(master: u64, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_seed(master, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_stable_and_distinct() {
        // Frozen values: a change here breaks every recorded experiment.
        assert_eq!(derive_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(derive_seed(42, 0), derive_seed(42, 0));
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
    }
}
