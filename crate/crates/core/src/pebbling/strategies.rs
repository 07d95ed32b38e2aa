//! Constructive reversible strategies for general DAGs (depth based),
//! Carlson–Savage graphs and bit-reversal permutation graphs.

use super::line::{
    checkpoint_persistent_positions, checkpoint_positions, iroot_ceil, visit_positions, LineMove,
};
use super::{mirror_extend, undo_sequence, Flavor, Game, Move, PebbleConfig, PebblingError, Strategy};
use crate::graph::{
    bit_reversal_permutation, carlson_savage, cs_sink_name, pyramid_vertex_name,
    single_sink_restriction, Dag, GraphError, VertexId,
};

fn param_error(e: GraphError) -> PebblingError {
    PebblingError::ParamOutOfRange(e.to_string())
}

/// Pebbles every predecessor of `v` that is not held yet, the last one only
/// up to the point where it is pebbled, then places `v`. Returns the
/// vertices added to `held`, which stay pebbled.
fn reach(dag: &Dag, v: VertexId, held: &mut PebbleConfig, out: &mut Vec<Move>) -> Vec<VertexId> {
    let preds: Vec<VertexId> = dag
        .preds(v)
        .iter()
        .copied()
        .filter(|&p| !held.contains(p))
        .collect();
    let mut added = Vec::new();
    if let Some((&last, rest)) = preds.split_last() {
        for &p in rest {
            persist(dag, p, held, out);
            held.insert(p);
            added.push(p);
        }
        added.extend(reach(dag, last, held, out));
    }
    out.push(Move::place(v));
    added
}

/// Like [`reach`] but uncomputes everything except `v` afterwards.
fn persist(dag: &Dag, v: VertexId, held: &mut PebbleConfig, out: &mut Vec<Move>) {
    let preds: Vec<VertexId> = dag
        .preds(v)
        .iter()
        .copied()
        .filter(|&p| !held.contains(p))
        .collect();
    let Some((&last, rest)) = preds.split_last() else {
        out.push(Move::place(v));
        return;
    };
    let mut persisted = Vec::with_capacity(rest.len());
    for &p in rest {
        let begin = out.len();
        persist(dag, p, held, out);
        held.insert(p);
        persisted.push((p, begin, out.len()));
    }
    let begin = out.len();
    let added = reach(dag, last, held, out);
    let end = out.len();
    out.push(Move::place(v));
    let undo: Vec<Move> = undo_sequence(&out[begin..end]).collect();
    out.extend(undo);
    for a in added {
        held.remove(a);
    }
    for (p, begin, end) in persisted.into_iter().rev() {
        let undo: Vec<Move> = undo_sequence(&out[begin..end]).collect();
        out.extend(undo);
        held.remove(p);
    }
}

/// Persistent schedule for `target` on the subgraph of its ancestors:
/// predecessors but one are pebbled persistently one at a time, the last one
/// is visited, `target` is placed and the rest is uncomputed.
pub fn by_depth_moves(dag: &Dag, target: VertexId) -> Vec<Move> {
    let mut held = PebbleConfig::empty(dag.len());
    let mut out = Vec::new();
    persist(dag, target, &mut held, &mut out);
    out
}

/// Persistent pebbling of a single-sink DAG in at most
/// `depth * max_indegree + 1` pebbles.
pub fn strat_by_depth(dag: &Dag) -> Result<Strategy, PebblingError> {
    let sink = dag.designated_sink().ok_or(PebblingError::NoDesignatedSink)?;
    Ok(Strategy {
        moves: by_depth_moves(dag, sink),
        game: Game::Reversible,
        flavor: Flavor::Persistent,
    })
}

/// Places each move of `line` on `vertices`, surrounding it with `aux` for
/// that position and its undo.
fn bracketed(
    line: &[LineMove],
    vertices: &[VertexId],
    mut aux: impl FnMut(usize) -> Vec<Move>,
    out: &mut Vec<Move>,
) {
    for &(pos, kind) in line {
        let support = aux(pos);
        out.extend_from_slice(&support);
        out.push(Move {
            kind,
            vertex: vertices[pos],
        });
        out.extend(undo_sequence(&support));
    }
}

fn cs_prefix(full: &Dag, prefix: &str, c: usize, r: usize, sink: usize, out: &mut Vec<Move>) {
    let id = |name: String| {
        full.id(&format!("{prefix}{name}"))
            .expect("generated Carlson-Savage vertex")
    };
    if r == 1 {
        out.push(Move::place(id("src1".into())));
        out.push(Move::place(id("src2".into())));
        out.push(Move::place(id(format!("sink{sink}"))));
        return;
    }
    // slot m of every section hangs off pyramid m (m <= c) or inner sink m - c
    let aux: Vec<Vec<Move>> = (1..=2 * c)
        .map(|m| {
            if m <= c {
                by_depth_moves(full, id(pyramid_vertex_name(&format!("pyr{m}"), 0, 1)))
            } else {
                let mut inner = Vec::new();
                cs_prefix(full, &format!("{prefix}sub/"), c, r - 1, m - c, &mut inner);
                inner
            }
        })
        .collect();
    let spine: Vec<VertexId> = (1..r)
        .flat_map(|k| (1..=2 * c).map(move |m| (k, m)))
        .map(|(k, m)| id(format!("spine{sink}/sec{k}/v{m}")))
        .collect();
    let mut line = Vec::new();
    visit_positions(0, spine.len(), &mut line);
    bracketed(&line, &spine, |pos| aux[pos % (2 * c)].clone(), out);
}

/// Visiting pebbling of `single_sink_restriction(carlson_savage(c, r), sink
/// sink_index)`: the spine is walked with the space-optimal line schedule and
/// every spine move is bracketed by pebbling its pyramid or recursive-copy
/// predecessor.
pub fn strat_carlson_savage(c: usize, r: usize, sink_index: usize) -> Result<Strategy, PebblingError> {
    let full = carlson_savage(c, r).map_err(param_error)?;
    if sink_index == 0 || sink_index > c {
        return Err(PebblingError::ParamOutOfRange(format!(
            "sink index must be in 1..={c}, got {sink_index}"
        )));
    }
    let sink = full
        .id(&cs_sink_name(c, r, sink_index))
        .expect("generated sink name");
    let target = single_sink_restriction(&full, sink).map_err(param_error)?;
    let mut prefix = Vec::new();
    cs_prefix(&full, "", c, r, sink_index, &mut prefix);
    let prefix: Vec<Move> = prefix
        .into_iter()
        .map(|m| Move {
            vertex: target
                .id(full.name(m.vertex))
                .expect("strategy stays inside the restriction"),
            ..m
        })
        .collect();
    mirror_extend(&target, &prefix)
}

fn bottom(positions: &[LineMove]) -> Vec<Move> {
    positions
        .iter()
        .map(|&(p, kind)| Move {
            kind,
            vertex: VertexId::new(p),
        })
        .collect()
}

/// Visiting pebbling of `bit_reversal(n)` in at most `2 log n + 2` pebbles.
///
/// The top line follows the space-optimal line schedule; each top move needs
/// its bottom predecessor, which is reached from scratch and uncomputed
/// right after the move.
pub fn strat_bit_reversal_small_space(n: usize) -> Result<Strategy, PebblingError> {
    let sigma = bit_reversal_permutation(n).map_err(param_error)?;
    let dag = crate::graph::bit_reversal(n).map_err(param_error)?;
    let top: Vec<VertexId> = (n..2 * n).map(VertexId::new).collect();
    let mut line = Vec::new();
    visit_positions(0, n, &mut line);
    let mut prefix = Vec::new();
    bracketed(
        &line,
        &top,
        |pos| {
            let mut b = Vec::new();
            visit_positions(0, sigma[pos], &mut b);
            bottom(&b)
        },
        &mut prefix,
    );
    mirror_extend(&dag, &prefix)
}

/// Visiting pebbling of `bit_reversal(n)` with `k` levels of checkpoints.
///
/// About `n^(1/k)` fixed pebbles are first placed equally spaced on the
/// bottom line. The top line is then walked with the `k`-level checkpoint
/// schedule, and each bottom predecessor it needs is reached from the
/// nearest fixed pebble to its left with the `(k-1)`-level schedule.
pub fn strat_bit_reversal_checkpoint(n: usize, k: u32) -> Result<Strategy, PebblingError> {
    let sigma = bit_reversal_permutation(n).map_err(param_error)?;
    if k == 0 {
        return Err(PebblingError::ParamOutOfRange("checkpoint levels must be >= 1".into()));
    }
    let dag = crate::graph::bit_reversal(n).map_err(param_error)?;
    let inner = (k - 1).max(1);
    let seg_len = n.div_ceil(iroot_ceil(n, k));
    // last bottom vertex of every segment
    let fixed: Vec<usize> = (1..=n.div_ceil(seg_len))
        .map(|j| (j * seg_len).min(n) - 1)
        .collect();

    let mut positions = Vec::new();
    let mut start = 0;
    for &end in &fixed {
        checkpoint_persistent_positions(start, end - start + 1, inner, &mut positions);
        start = end + 1;
    }
    let mut prefix = bottom(&positions);

    let top: Vec<VertexId> = (n..2 * n).map(VertexId::new).collect();
    let mut line = Vec::new();
    checkpoint_positions(0, n, k, &mut line);
    bracketed(
        &line,
        &top,
        |pos| {
            let q = sigma[pos] - 1;
            if fixed.binary_search(&q).is_ok() {
                return Vec::new();
            }
            let from = fixed.iter().rev().find(|&&f| f < q).map_or(0, |&f| f + 1);
            let mut b = Vec::new();
            checkpoint_positions(from, q - from + 1, inner, &mut b);
            bottom(&b)
        },
        &mut prefix,
    );
    mirror_extend(&dag, &prefix)
}
