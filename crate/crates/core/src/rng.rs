//! Seeded random streams with a stable split discipline.
//!
//! Every node of the query tree draws from its own stream. A stream id is a
//! pure function of the root seed and the path of child indices leading to
//! the node, so runs are reproducible regardless of traversal order:
//! sibling subtrees can execute sequentially or in parallel and consume
//! exactly the same randomness. Recursive distance calls get a stream keyed
//! by the unordered window pair, which keeps memoized estimates symmetric.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Identifier of one random stream in the split tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamId(u64);

impl StreamId {
    pub fn root(seed: u64) -> Self {
        StreamId(splitmix64(seed))
    }

    /// Stream for the `index`-th child edge below this node.
    pub fn child(&self, index: u64) -> Self {
        StreamId(splitmix64(self.0 ^ splitmix64(index)))
    }

    /// Stream for a labelled branch (e.g. one rung of the distance ladder).
    pub fn labeled(&self, label: &str) -> Self {
        let mut h = self.0;
        for &byte in label.as_bytes() {
            h = splitmix64(h ^ u64::from(byte));
        }
        StreamId(h)
    }

    /// Stream for a recursive distance call on an unordered window pair.
    pub fn pair(&self, x: u32, y: u32) -> Self {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        StreamId(splitmix64(self.0 ^ splitmix64((u64::from(lo) << 32) | u64::from(hi))))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}
