//! Cardinality snapping to powers of `t^ε`.
//!
//! Density ratios compare snapped set sizes so that small perturbations of a
//! clique or live set cannot flip a density decision. `snap(ℓ)` rounds `ℓ`
//! down to the largest power of `t^ε` not exceeding it (and `snap(0) = 0`),
//! so there are at most `2/ε` distinct snapped values on `[1, t]`.

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// The ladder of snapped values for a fixed `(t, ε)`.
///
/// When `ε` is so small that consecutive powers of `t^ε` are less than one
/// apart over the whole range (the paper-exact regime at any feasible `t`),
/// every integer in `[1, t]` is itself a floored power and the ladder is the
/// identity; we special-case that rather than materialize it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnapLadder {
    Identity,
    Powers(Vec<u64>),
}

impl SnapLadder {
    pub fn new(t: u64, eps: &BigRational) -> Self {
        let eps_f = eps.to_f64().unwrap_or(0.0);
        Self::from_f64(t, eps_f)
    }

    pub fn from_f64(t: u64, eps_f: f64) -> Self {
        assert!(t >= 2, "snap ladder needs t >= 2");
        assert!(eps_f >= 0.0);
        let tf = t as f64;
        let ratio = tf.powf(eps_f);
        if (ratio - 1.0) * tf < 1.0 {
            // Powers step by less than one everywhere below t, so flooring
            // them hits every integer.
            return SnapLadder::Identity;
        }
        let mut values = Vec::new();
        let mut k = 0u32;
        loop {
            let v = floor_power(tf, eps_f, k);
            if v > t {
                break;
            }
            if values.last() != Some(&v) {
                values.push(v);
            }
            if v == t {
                break;
            }
            k += 1;
        }
        SnapLadder::Powers(values)
    }

    /// Largest ladder value not exceeding `x`; `snap(0) = 0`.
    pub fn snap(&self, x: u64) -> u64 {
        if x == 0 {
            return 0;
        }
        match self {
            SnapLadder::Identity => x,
            SnapLadder::Powers(values) => match values.binary_search(&x) {
                Ok(i) => values[i],
                Err(0) => 1, // values start at 1 and x >= 1
                Err(i) => values[i - 1],
            },
        }
    }

    /// Interval rung lengths: the ladder values capped at `limit`, with
    /// `limit` itself appended so one rung always spans a whole side.
    pub fn rungs(&self, limit: u64) -> Vec<u64> {
        let mut r: Vec<u64> = match self {
            SnapLadder::Identity => (1..=limit).collect(),
            SnapLadder::Powers(values) => {
                values.iter().copied().filter(|&v| v <= limit).collect()
            }
        };
        if r.last() != Some(&limit) {
            r.push(limit);
        }
        r
    }
}

fn floor_power(tf: f64, eps_f: f64, k: u32) -> u64 {
    let p = tf.powf(eps_f * f64::from(k));
    let nearest = p.round();
    // powf of an exact power can land a few ulps under the integer.
    if (p - nearest).abs() < 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        p.floor() as u64
    }
}

/// Round `l` down to the largest power of `t^ε` not exceeding it.
pub fn snap(l: u64, t: u64, eps: &BigRational) -> u64 {
    SnapLadder::new(t, eps).snap(l)
}
