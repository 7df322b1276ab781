//! Seeding. All randomness comes from ChaCha8 (`rand_chacha`), whose output
//! stream is fixed by its specification and identical on every platform.
//! Independent substreams are selected with the ChaCha stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `(seed, stream)`; distinct streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Labelled component of a derived seed.
#[derive(Debug, Clone, Copy)]
pub enum SeedPart<'a> {
    Text(&'a str),
    Index(u64),
}

/// Deterministic seed from a base seed and a path of labels, e.g.
/// `(base, dataset, method, repetition, fold)`.
pub fn derive_seed(base: u64, parts: &[SeedPart<'_>]) -> u64 {
    let mut h = splitmix64(base);
    for part in parts {
        match part {
            SeedPart::Text(s) => {
                // FNV-1a over the bytes, then mixed in.
                let mut f: u64 = 0xcbf2_9ce4_8422_2325;
                for b in s.bytes() {
                    f ^= u64::from(b);
                    f = f.wrapping_mul(0x0000_0100_0000_01b3);
                }
                h = splitmix64(h ^ f);
            }
            SeedPart::Index(i) => h = splitmix64(h ^ splitmix64(*i ^ 0x5851_F42D_4C95_7F2D)),
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn pinned_stream_values() {
        // Frozen outputs: any change here breaks reproducibility of saved runs.
        assert_eq!(stream_rng(1, 0).gen::<u64>(), 7_424_550_030_962_593_201);
        assert_eq!(stream_rng(1, 3).gen::<u64>(), 10_481_881_765_394_875_549);
    }

    #[test]
    fn derived_seeds_differ_by_part() {
        let a = derive_seed(7, &[SeedPart::Text("iris"), SeedPart::Index(0)]);
        let b = derive_seed(7, &[SeedPart::Text("iris"), SeedPart::Index(1)]);
        let c = derive_seed(7, &[SeedPart::Text("ecoli"), SeedPart::Index(0)]);
        assert!(a != b && a != c && b != c);
        assert_eq!(a, derive_seed(7, &[SeedPart::Text("iris"), SeedPart::Index(0)]));
    }
}
