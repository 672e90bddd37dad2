//! Seeded instance generators for tests, benchmarks, and the CLI.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// Two independent uniform strings.
    Random { alphabet: u8 },
    /// A uniform string and a copy mutated by `round(rate·n)` random edits.
    Mutate { alphabet: u8, rate: f64 },
    /// A pair whose optimal window matchings have skew well above 2: the
    /// first third of `a` is stretched threefold in `b`.
    AdversarialSkew { alphabet: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    /// Length of the planted edit script, when one exists. The true edit
    /// distance is at most this.
    pub planted: Option<u64>,
}

pub fn generate(n: usize, gen: Generator, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match gen {
        Generator::Random { alphabet } => {
            let sigma = alphabet.max(1);
            let a = uniform(n, sigma, &mut rng);
            let b = uniform(n, sigma, &mut rng);
            Instance { a, b, planted: None }
        }
        Generator::Mutate { alphabet, rate } => {
            let sigma = alphabet.max(1);
            let a = uniform(n, sigma, &mut rng);
            let ops = (rate * n as f64).round() as u64;
            let mut b = a.clone();
            for _ in 0..ops {
                match rng.gen_range(0..3u8) {
                    0 if !b.is_empty() => {
                        // substitute with a different symbol
                        let i = rng.gen_range(0..b.len());
                        let old = b[i];
                        if sigma == 1 {
                            b.remove(i); // single-symbol alphabet: fall back
                        } else {
                            let mut c = rng.gen_range(0..sigma);
                            while c == old {
                                c = rng.gen_range(0..sigma);
                            }
                            b[i] = c;
                        }
                    }
                    1 if !b.is_empty() => {
                        let i = rng.gen_range(0..b.len());
                        b.remove(i);
                    }
                    _ => {
                        let i = rng.gen_range(0..=b.len());
                        b.insert(i, rng.gen_range(0..sigma));
                    }
                }
            }
            Instance { a, b, planted: Some(ops) }
        }
        Generator::AdversarialSkew { alphabet } => {
            let sigma = alphabet.max(2);
            let a = uniform(n, sigma, &mut rng);
            let mut b = Vec::with_capacity(n);
            for &c in a.iter().take(n.div_ceil(3)) {
                b.extend_from_slice(&[c, c, c]);
            }
            b.truncate(n);
            while b.len() < n {
                b.push(rng.gen_range(0..sigma));
            }
            Instance { a, b, planted: None }
        }
    }
}

fn uniform(n: usize, sigma: u8, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..sigma)).collect()
}
