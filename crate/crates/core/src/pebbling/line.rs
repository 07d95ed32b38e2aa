//! Reversible pebblings of line graphs.
//!
//! The generators here work on positions of a segment of a line rather than
//! on graph vertices, so the same schedules drive the spines of
//! Carlson–Savage graphs and both lines of bit-reversal graphs. Every
//! segment schedule assumes the vertex just before the segment (if any) is
//! pebbled throughout.

use super::{Flavor, Game, Move, MoveKind, PebblingError, Strategy};
use crate::graph::VertexId;

pub(crate) type LineMove = (usize, MoveKind);

fn undo_into(seq: &[LineMove], out: &mut Vec<LineMove>) {
    out.extend(seq.iter().rev().map(|&(p, k)| {
        let inv = match k {
            MoveKind::Place => MoveKind::Remove,
            MoveKind::Remove => MoveKind::Place,
        };
        (p, inv)
    }));
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Pebbles needed to leave exactly the last vertex of a `len` segment pebbled.
#[cfg(test)]
pub(crate) fn persistent_space(len: usize) -> usize {
    if len <= 1 {
        1
    } else {
        (len - 1).ilog2() as usize + 2
    }
}

/// Pebbles needed to reach the last vertex of a `len` segment.
pub(crate) fn visiting_space(len: usize) -> usize {
    ceil_log2(len + 1) as usize
}

/// Ends with only position `start + len - 1` pebbled, in
/// [`persistent_space`] pebbles.
pub(crate) fn persistent_positions(start: usize, len: usize, out: &mut Vec<LineMove>) {
    debug_assert!(len >= 1);
    if len == 1 {
        out.push((start, MoveKind::Place));
        return;
    }
    let a = len / 2;
    let b = len - a;
    let first = out.len();
    persistent_positions(start, a, out);
    let mid = out.len();
    persistent_positions(start + a, b, out);
    let tail: Vec<LineMove> = out[first..mid].to_vec();
    undo_into(&tail, out);
}

/// Ends with position `start + len - 1` pebbled, in [`visiting_space`]
/// pebbles; other pebbles may remain.
pub(crate) fn visit_positions(start: usize, len: usize, out: &mut Vec<LineMove>) {
    debug_assert!(len >= 1);
    if len == 1 {
        out.push((start, MoveKind::Place));
        return;
    }
    let s = visiting_space(len) as u32;
    // the tail is reached with one pebble fewer, the head is made persistent
    let tail = (len - 1).min((1usize << (s - 1)) - 1);
    let head = len - tail;
    persistent_positions(start, head, out);
    visit_positions(start + head, tail, out);
}

/// Smallest `g` with `g^k >= n`.
pub(crate) fn iroot_ceil(n: usize, k: u32) -> usize {
    let mut g = 1usize;
    while g.checked_pow(k).is_some_and(|p| p < n) {
        g += 1;
    }
    g
}

/// Checkpointing schedule reaching `start + len - 1` with `k` levels of
/// recursion. Level one is a plain left-to-right sweep.
pub(crate) fn checkpoint_positions(start: usize, len: usize, k: u32, out: &mut Vec<LineMove>) {
    debug_assert!(len >= 1 && k >= 1);
    if k == 1 || len == 1 {
        out.extend((start..start + len).map(|p| (p, MoveKind::Place)));
        return;
    }
    let segments = iroot_ceil(len, k);
    let seg_len = len.div_ceil(segments);
    let mut pos = start;
    let end = start + len;
    while pos < end {
        let l = seg_len.min(end - pos);
        if pos + l == end {
            checkpoint_positions(pos, l, k - 1, out);
        } else {
            checkpoint_persistent_positions(pos, l, k - 1, out);
        }
        pos += l;
    }
}

/// [`checkpoint_positions`] followed by uncomputing everything but the
/// last vertex.
pub(crate) fn checkpoint_persistent_positions(
    start: usize,
    len: usize,
    k: u32,
    out: &mut Vec<LineMove>,
) {
    let first = out.len();
    checkpoint_positions(start, len, k, out);
    let body: Vec<LineMove> = out[first..out.len() - 1].to_vec();
    undo_into(&body, out);
}

fn to_moves(positions: &[LineMove]) -> Vec<Move> {
    positions
        .iter()
        .map(|&(p, kind)| Move {
            kind,
            vertex: VertexId::new(p),
        })
        .collect()
}

fn mirrored(prefix: Vec<LineMove>) -> Strategy {
    let mut all = prefix.clone();
    undo_into(&prefix, &mut all);
    Strategy {
        moves: to_moves(&all),
        game: Game::Reversible,
        flavor: Flavor::Visiting,
    }
}

fn require_vertices(n: usize) -> Result<(), PebblingError> {
    if n == 0 {
        return Err(PebblingError::ParamOutOfRange("line needs n >= 1".into()));
    }
    Ok(())
}

/// Visiting pebbling of `line(n)` in `ceil(log(n+1))` pebbles.
pub fn strat_line_visiting(n: usize) -> Result<Strategy, PebblingError> {
    require_vertices(n)?;
    let mut prefix = Vec::new();
    visit_positions(0, n, &mut prefix);
    Ok(mirrored(prefix))
}

/// Persistent pebbling of `line(n)` in `floor(log(n-1)) + 2` pebbles
/// (one pebble for `n = 1`).
pub fn strat_line_persistent(n: usize) -> Result<Strategy, PebblingError> {
    require_vertices(n)?;
    let mut moves = Vec::new();
    persistent_positions(0, n, &mut moves);
    Ok(Strategy {
        moves: to_moves(&moves),
        game: Game::Reversible,
        flavor: Flavor::Persistent,
    })
}

/// Visiting pebbling of `line(n)` with `k` levels of checkpoints: at most
/// `2k * ceil(n^(1/k))` pebbles and `2^k * n` moves.
pub fn strat_line_checkpoint(n: usize, k: u32) -> Result<Strategy, PebblingError> {
    require_vertices(n)?;
    if k == 0 {
        return Err(PebblingError::ParamOutOfRange("checkpoint levels must be >= 1".into()));
    }
    let mut prefix = Vec::new();
    checkpoint_positions(0, n, k, &mut prefix);
    Ok(mirrored(prefix))
}
