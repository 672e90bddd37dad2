//! Exact edit distance, alignment trace-back, and a banded variant.
//!
//! This is the base case of the level recursion and the ground truth for
//! every oracle-backed test in the crate. Costs are unit for insertions,
//! deletions, and substitutions. The cost-only path keeps two rolling rows;
//! the alignment path records a full choice table and therefore only runs
//! for strings up to [`ALIGNMENT_CAP`].

use crate::error::{Error, Result};

/// Largest input length for which `exact_alignment` will allocate its
/// trace-back table. Alignments are only ever needed on windows of length
/// `d = √n`, so this is generous.
pub const ALIGNMENT_CAP: usize = 4096;

/// Exact edit distance between two byte strings.
///
/// Empty inputs and unequal lengths are fine. Runs in `O(|a|·|b|)` time and
/// `O(min(|a|,|b|))` space.
pub fn exact_ed(a: &[u8], b: &[u8]) -> u64 {
    // Keep the shorter string on the row axis.
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len() as u64;
    }
    let mut row: Vec<u32> = (0..=short.len() as u32).collect();
    for (j, &cl) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = j as u32 + 1;
        for (i, &cs) in short.iter().enumerate() {
            let sub = diag + u32::from(cs != cl);
            diag = row[i + 1];
            row[i + 1] = sub.min(diag + 1).min(row[i] + 1);
        }
    }
    u64::from(row[short.len()])
}

/// One edit operation. `pos` is a 1-based index into the partially
/// transformed string at the moment the operation is applied; replaying the
/// operations of an [`EditScript`] in order turns the source into the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditOp {
    pub kind: OpKind,
    pub pos: usize,
    pub ch: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Insert,
    Delete,
    Substitute,
}

/// An ordered list of edit operations transforming one string into another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Replay the script on `a`.
    pub fn apply(&self, a: &[u8]) -> Vec<u8> {
        let mut s = a.to_vec();
        for op in &self.ops {
            match op.kind {
                OpKind::Substitute => s[op.pos - 1] = op.ch,
                OpKind::Delete => {
                    s.remove(op.pos - 1);
                }
                OpKind::Insert => s.insert(op.pos - 1, op.ch),
            }
        }
        s
    }

    /// Positions of characters the script leaves untouched, as 1-based
    /// `(source, target)` pairs in increasing order. This is the monotone
    /// character correspondence induced by the alignment.
    pub fn matched_pairs(&self, a_len: usize) -> Vec<(usize, usize)> {
        // Tag every source character with its origin, replay the script on
        // the tags, and read off the survivors.
        let mut tags: Vec<Option<usize>> = (1..=a_len).map(Some).collect();
        for op in &self.ops {
            match op.kind {
                OpKind::Substitute => tags[op.pos - 1] = None,
                OpKind::Delete => {
                    tags.remove(op.pos - 1);
                }
                OpKind::Insert => tags.insert(op.pos - 1, None),
            }
        }
        tags.iter()
            .enumerate()
            .filter_map(|(j, t)| t.map(|i| (i, j + 1)))
            .collect()
    }
}

// Trace-back choices. Ties are broken substitute ≺ delete ≺ insert so that
// alignments are deterministic.
const DIAG: u8 = 0;
const UP: u8 = 1; // delete a[i]
const LEFT: u8 = 2; // insert b[j]

/// Optimal alignment of `a` into `b` as an [`EditScript`].
///
/// The script has length `exact_ed(a, b)` and `script.apply(a) == b`.
/// Fails with [`Error::AlignmentTooLarge`] above [`ALIGNMENT_CAP`].
pub fn exact_alignment(a: &[u8], b: &[u8]) -> Result<EditScript> {
    let (n, m) = (a.len(), b.len());
    if n.max(m) > ALIGNMENT_CAP {
        return Err(Error::AlignmentTooLarge { n: n.max(m), cap: ALIGNMENT_CAP });
    }
    let mut choice = vec![0u8; (n + 1) * (m + 1)];
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut prev: Vec<u32> = (0..=m as u32).collect();
    let mut cur = vec![0u32; m + 1];
    for j in 1..=m {
        choice[idx(0, j)] = LEFT;
    }
    for i in 1..=n {
        cur[0] = i as u32;
        choice[idx(i, 0)] = UP;
        for j in 1..=m {
            let sub = prev[j - 1] + u32::from(a[i - 1] != b[j - 1]);
            let del = prev[j] + 1;
            let ins = cur[j - 1] + 1;
            let (best, ch) = if sub <= del && sub <= ins {
                (sub, DIAG)
            } else if del <= ins {
                (del, UP)
            } else {
                (ins, LEFT)
            };
            cur[j] = best;
            choice[idx(i, j)] = ch;
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    // Walk back collecting raw operations in source coordinates, then
    // convert to positions in the evolving string.
    let (mut i, mut j) = (n, m);
    let mut raw: Vec<(u8, usize, u8)> = Vec::new();
    while i > 0 || j > 0 {
        match choice[idx(i, j)] {
            DIAG => {
                if a[i - 1] != b[j - 1] {
                    raw.push((DIAG, i, b[j - 1]));
                }
                i -= 1;
                j -= 1;
            }
            UP => {
                raw.push((UP, i, 0));
                i -= 1;
            }
            _ => {
                raw.push((LEFT, i, b[j - 1]));
                j -= 1;
            }
        }
    }
    raw.reverse();

    let mut ops = Vec::with_capacity(raw.len());
    let mut offset: isize = 0;
    for (kind, src, ch) in raw {
        match kind {
            DIAG => ops.push(EditOp {
                kind: OpKind::Substitute,
                pos: (src as isize + offset) as usize,
                ch,
            }),
            UP => {
                ops.push(EditOp { kind: OpKind::Delete, pos: (src as isize + offset) as usize, ch: 0 });
                offset -= 1;
            }
            _ => {
                // Insert before the slot following source position `src`.
                ops.push(EditOp {
                    kind: OpKind::Insert,
                    pos: (src as isize + offset + 1) as usize,
                    ch,
                });
                offset += 1;
            }
        }
    }
    Ok(EditScript { ops })
}

/// Banded edit distance with a cutoff.
///
/// Returns `Some(exact_ed(a, b))` whenever the true distance is at most
/// `cap`, and `None` otherwise; it never underestimates. Runs in
/// `O(cap · min(|a|,|b|))` time.
pub fn banded_ed(a: &[u8], b: &[u8], cap: u64) -> Option<u64> {
    let (n, m) = (a.len() as i64, b.len() as i64);
    if (n - m).unsigned_abs() > cap {
        return None;
    }
    if n == 0 || m == 0 {
        // Length gap already within cap.
        return Some(n.unsigned_abs().max(m.unsigned_abs()));
    }
    let k = cap.min((n + m) as u64) as i64;
    let width = (2 * k + 1) as usize;
    const INF: u64 = u64::MAX / 2;
    // row[c] holds D[i][j] for j - i = c - k.
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for (c, v) in prev.iter_mut().enumerate() {
        let j = c as i64 - k;
        if (0..=m).contains(&j) {
            *v = j as u64;
        }
    }
    for i in 1..=n {
        for v in cur.iter_mut() {
            *v = INF;
        }
        let lo = (i - k).max(0);
        let hi = (i + k).min(m);
        for j in lo..=hi {
            let c = (j - i + k) as usize;
            let mut best = INF;
            if j == 0 {
                best = i as u64;
            }
            if j > 0 && i > 0 {
                let sub = prev[c] + u64::from(a[(i - 1) as usize] != b[(j - 1) as usize]);
                best = best.min(sub);
            }
            if c + 1 < width {
                best = best.min(prev[c + 1] + 1); // delete a[i]
            }
            if c > 0 {
                best = best.min(cur[c - 1] + 1); // insert b[j]
            }
            cur[c] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let c = (m - n + k) as usize;
    let result = prev[c];
    (result <= cap).then_some(result)
}
