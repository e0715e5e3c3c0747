/// Independent random streams within one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Food = 1,
    Memory = 2,
    Init = 3,
    Behaviour = 4,
    /// Batch-level home-garden assignment for file landscapes.
    AgriPlots = 5,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit seed for `(master_seed, replicate, stream)`.
pub fn stream_seed(master_seed: u64, replicate: u64, stream: Stream) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ replicate);
    splitmix64(h ^ stream as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let mut seen = HashSet::new();
        for r in 0..192 {
            for s in [Stream::Food, Stream::Memory, Stream::Init, Stream::Behaviour] {
                assert!(seen.insert(stream_seed(7, r, s)));
            }
        }
        assert_eq!(stream_seed(7, 3, Stream::Food), stream_seed(7, 3, Stream::Food));
        assert_ne!(stream_seed(7, 3, Stream::Food), stream_seed(8, 3, Stream::Food));
    }
}
