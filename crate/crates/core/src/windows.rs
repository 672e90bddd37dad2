//! Window decomposition of the two input strings.
//!
//! Both strings are cut into windows of width `d = ⌈√n⌉`. The A-side
//! windows tile the string with spacing `d`; the B-side windows overlap
//! with spacing `γ = max(1, Δd/n)`, rounded down to a divisor of `d` so
//! every later quantity (`d/γ`, the B-window count) stays integral. If `d`
//! does not divide the input length, both strings are padded with the same
//! sentinel byte, which leaves the edit distance unchanged.

use crate::error::{Error, Result};

pub const PAD_BYTE: u8 = 0;

/// Which string a window belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Side {
    A,
    B,
}

/// Global window identifier: A-side windows come first, then B-side.
pub type WindowId = u32;

/// The decomposition of a length-`n` pair into overlapping windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSet {
    /// Padded string length.
    pub n: usize,
    /// Window width.
    pub d: usize,
    /// B-side spacing; divides `d`.
    pub gamma: usize,
    /// Additive target the decomposition was built for.
    pub delta: u64,
    a_count: usize,
    b_count: usize,
}

impl WindowSet {
    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    /// Total window count `t = |𝒜| + |ℬ|`.
    pub fn t(&self) -> usize {
        self.a_count + self.b_count
    }

    pub fn side(&self, id: WindowId) -> Side {
        if (id as usize) < self.a_count {
            Side::A
        } else {
            Side::B
        }
    }

    /// Index of a window within its own side.
    pub fn index_in_side(&self, id: WindowId) -> usize {
        match self.side(id) {
            Side::A => id as usize,
            Side::B => id as usize - self.a_count,
        }
    }

    pub fn id_of(&self, side: Side, index: usize) -> WindowId {
        match side {
            Side::A => index as WindowId,
            Side::B => (self.a_count + index) as WindowId,
        }
    }

    /// 1-based start position of the `k`-th A-window.
    pub fn a_start(&self, k: usize) -> usize {
        1 + k * self.d
    }

    /// 1-based start position of the `k`-th B-window.
    pub fn b_start(&self, k: usize) -> usize {
        1 + k * self.gamma
    }

    /// 1-based start position of any window.
    pub fn start(&self, id: WindowId) -> usize {
        match self.side(id) {
            Side::A => self.a_start(id as usize),
            Side::B => self.b_start(id as usize - self.a_count),
        }
    }

    /// The bytes of a window, taken from the padded string of its side.
    pub fn slice<'a>(&self, id: WindowId, a: &'a [u8], b: &'a [u8]) -> &'a [u8] {
        let s = self.start(id) - 1;
        match self.side(id) {
            Side::A => &a[s..s + self.d],
            Side::B => &b[s..s + self.d],
        }
    }

    /// Index of the rightmost B-window containing string position `pos`
    /// (1-based). Every position in `[1, n]` is covered.
    pub fn rightmost_b_covering(&self, pos: usize) -> usize {
        debug_assert!((1..=self.n).contains(&pos));
        ((pos - 1) / self.gamma).min(self.b_count - 1)
    }

    pub fn all_ids(&self) -> impl Iterator<Item = WindowId> + '_ {
        0..self.t() as WindowId
    }
}

impl WindowSet {
    /// A decomposition with explicit `d` and `γ`, for exercising the
    /// window-level layers on shapes `build_windows` would not produce.
    /// Requires `d | n` and `γ | d`.
    pub fn custom(n: usize, d: usize, gamma: usize, delta: u64) -> Result<WindowSet> {
        if n == 0 || d == 0 || gamma == 0 || !n.is_multiple_of(d) || !d.is_multiple_of(gamma) {
            return Err(Error::InvalidParams(format!(
                "custom window set needs γ | d | n, got n={n} d={d} γ={gamma}"
            )));
        }
        Ok(WindowSet {
            n,
            d,
            gamma,
            delta,
            a_count: n / d,
            b_count: (n - d) / gamma + 1,
        })
    }
}

/// Build the window decomposition for (padded) length `n` and additive
/// target `Δ`. `n` must already be a multiple of `⌈√n⌉` — see
/// [`pad_to_window_multiple`].
pub fn build_windows(n: usize, delta: u64) -> Result<WindowSet> {
    if n < 4 {
        return Err(Error::InputTooShort { n });
    }
    if delta == 0 || delta as usize > n {
        return Err(Error::InvalidDelta { delta, n });
    }
    let d = ceil_sqrt(n);
    if !n.is_multiple_of(d) {
        return Err(Error::InvalidParams(format!(
            "length {n} is not a multiple of d = {d}; pad first"
        )));
    }
    // γ = max(1, Δd/n) rounded down to a divisor of d.
    let raw = ((delta as u128 * d as u128) / n as u128) as usize;
    let gamma = largest_divisor_at_most(d, raw.max(1));
    let a_count = n / d;
    let b_count = (n - d) / gamma + 1;
    Ok(WindowSet { n, d, gamma, delta, a_count, b_count })
}

/// Pad both strings with [`PAD_BYTE`] until their common length is a
/// multiple of `⌈√n⌉`. Appending the same suffix to both strings leaves the
/// edit distance unchanged.
pub fn pad_to_window_multiple(a: &mut Vec<u8>, b: &mut Vec<u8>) {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n == 0 {
        return;
    }
    let d = ceil_sqrt(n);
    let padded = n.div_ceil(d) * d;
    a.resize(padded, PAD_BYTE);
    b.resize(padded, PAD_BYTE);
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 1 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

fn largest_divisor_at_most(d: usize, x: usize) -> usize {
    let mut g = x.min(d);
    while !d.is_multiple_of(g) {
        g -= 1;
    }
    g
}
