//! Seeded randomness shared by every generator and sampler.
//!
//! All randomness comes from ChaCha8 seeded via `seed_from_u64`, which is
//! specified independently of platform and word size, so the same seed gives
//! the same instance everywhere. Pair orientations are drawn as one `bool`
//! per unordered pair `(i, j)`, `i < j`, in lexicographic order; `true`
//! orients the pair `i -> j`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One fair coin per call; `true` keeps the pair in its natural direction.
pub fn coin(rng: &mut SeededRng) -> bool {
    rng.gen::<bool>()
}
