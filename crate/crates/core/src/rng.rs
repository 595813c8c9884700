//! Deterministic random sub-streams.
//!
//! Every consumer of randomness (channel draws, noise draws, random
//! payloads) gets its own ChaCha stream derived from the master seed, a
//! domain tag and a key, with the realization index selecting the ChaCha
//! stream number. Results therefore do not depend on the order in which
//! worker threads pick up realizations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random number generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// What a sub-stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    Channel = 1,
    Noise = 2,
    Payload = 3,
    Search = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a generator for `(domain, key)` and realization `index`.
///
/// `key` distinguishes experiment points that must not share noise (for
/// example SNR grid points); pass 0 when the stream should be shared.
pub fn substream(master_seed: u64, domain: Domain, key: u64, index: u64) -> SimRng {
    let seed = splitmix64(splitmix64(splitmix64(master_seed) ^ domain as u64) ^ key);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
