//! Standard and reversible pebble games: move semantics, strategy replay and
//! the constructive strategies for the graph families.

mod config;
mod line;
mod strategies;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dag, VertexId};

pub use config::PebbleConfig;
pub use line::{strat_line_checkpoint, strat_line_persistent, strat_line_visiting};
pub use strategies::{
    by_depth_moves, strat_bit_reversal_checkpoint, strat_bit_reversal_small_space, strat_by_depth,
    strat_carlson_savage,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Place,
    Remove,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub vertex: VertexId,
}

impl Move {
    pub fn place(vertex: VertexId) -> Self {
        Move {
            kind: MoveKind::Place,
            vertex,
        }
    }

    pub fn remove(vertex: VertexId) -> Self {
        Move {
            kind: MoveKind::Remove,
            vertex,
        }
    }

    /// The move that undoes this one.
    pub fn inverse(self) -> Self {
        let kind = match self.kind {
            MoveKind::Place => MoveKind::Remove,
            MoveKind::Remove => MoveKind::Place,
        };
        Move { kind, ..self }
    }

    /// `+1` for a placement, `-1` for a removal.
    pub fn sign(self) -> i64 {
        match self.kind {
            MoveKind::Place => 1,
            MoveKind::Remove => -1,
        }
    }
}

/// Moves of `moves` undone in reverse order.
pub fn undo_sequence(moves: &[Move]) -> impl Iterator<Item = Move> + '_ {
    moves.iter().rev().map(|m| m.inverse())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Game {
    Standard,
    Reversible,
}

/// Visiting pebblings end empty; persistent ones end with only the sink.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Visiting,
    Persistent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub moves: Vec<Move>,
    pub game: Game,
    pub flavor: Flavor,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PebblingMetrics {
    /// Number of moves.
    pub time: usize,
    /// Largest configuration seen during replay.
    pub space: usize,
    /// Index of the first configuration holding the sink.
    pub first_sink_step: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PebblingError {
    #[error("cannot place a pebble on {0}: {1}")]
    IllegalPlacement(VertexId, &'static str),
    #[error("cannot remove the pebble on {0}: {1}")]
    IllegalRemoval(VertexId, &'static str),
    #[error("illegal move {step}: {cause}")]
    IllegalMoveAt {
        step: usize,
        cause: Box<PebblingError>,
    },
    #[error("the sink is never pebbled")]
    SinkNeverPebbled,
    #[error("final configuration has {0} pebbles, expected {1}")]
    BadFinalConfig(usize, &'static str),
    #[error("prefix is illegal at move {step}: {cause}")]
    PrefixIllegal {
        step: usize,
        cause: Box<PebblingError>,
    },
    #[error("prefix does not end with the sink pebbled")]
    SinkNotReached,
    #[error("graph has no designated sink; restrict it to one sink first")]
    NoDesignatedSink,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("malformed strategy file: {0}")]
    Format(String),
}

/// Applies one move under the rules of `game`.
pub fn step(
    dag: &Dag,
    config: &PebbleConfig,
    mv: Move,
    game: Game,
) -> Result<PebbleConfig, PebblingError> {
    let mut next = config.clone();
    apply(dag, &mut next, mv, game)?;
    Ok(next)
}

/// In-place variant of [`step`]; leaves `config` untouched on error.
pub fn apply(
    dag: &Dag,
    config: &mut PebbleConfig,
    mv: Move,
    game: Game,
) -> Result<(), PebblingError> {
    let v = mv.vertex;
    if v.index() >= dag.len() {
        return Err(PebblingError::UnknownVertex(v));
    }
    let preds_ok = || dag.preds(v).iter().all(|&p| config.contains(p));
    match mv.kind {
        MoveKind::Place => {
            if config.contains(v) {
                return Err(PebblingError::IllegalPlacement(v, "already pebbled"));
            }
            if !preds_ok() {
                return Err(PebblingError::IllegalPlacement(v, "a predecessor is not pebbled"));
            }
            config.insert(v);
        }
        MoveKind::Remove => {
            if !config.contains(v) {
                return Err(PebblingError::IllegalRemoval(v, "not pebbled"));
            }
            if game == Game::Reversible && !preds_ok() {
                return Err(PebblingError::IllegalRemoval(v, "a predecessor is not pebbled"));
            }
            config.remove(v);
        }
    }
    Ok(())
}

/// All configurations `P_0 = {} .. P_t` visited by `moves`.
pub fn replay(dag: &Dag, moves: &[Move], game: Game) -> Result<Vec<PebbleConfig>, PebblingError> {
    let mut configs = Vec::with_capacity(moves.len() + 1);
    let mut current = PebbleConfig::empty(dag.len());
    configs.push(current.clone());
    for (i, &mv) in moves.iter().enumerate() {
        apply(dag, &mut current, mv, game).map_err(|cause| PebblingError::IllegalMoveAt {
            step: i + 1,
            cause: Box::new(cause),
        })?;
        configs.push(current.clone());
    }
    Ok(configs)
}

/// Replays `strategy` and checks the start, end and sink conditions.
pub fn verify_strategy(dag: &Dag, strategy: &Strategy) -> Result<PebblingMetrics, PebblingError> {
    let sink = dag.designated_sink().ok_or(PebblingError::NoDesignatedSink)?;
    let mut current = PebbleConfig::empty(dag.len());
    let mut space = 0;
    let mut first_sink_step = None;
    for (i, &mv) in strategy.moves.iter().enumerate() {
        apply(dag, &mut current, mv, strategy.game).map_err(|cause| {
            PebblingError::IllegalMoveAt {
                step: i + 1,
                cause: Box::new(cause),
            }
        })?;
        space = space.max(current.len());
        if first_sink_step.is_none() && current.contains(sink) {
            first_sink_step = Some(i + 1);
        }
    }
    let first_sink_step = first_sink_step.ok_or(PebblingError::SinkNeverPebbled)?;
    match strategy.flavor {
        Flavor::Visiting if !current.is_empty() => {
            return Err(PebblingError::BadFinalConfig(current.len(), "an empty configuration"));
        }
        Flavor::Persistent if !(current.len() == 1 && current.contains(sink)) => {
            return Err(PebblingError::BadFinalConfig(current.len(), "only the sink"));
        }
        _ => {}
    }
    Ok(PebblingMetrics {
        time: strategy.moves.len(),
        space,
        first_sink_step,
    })
}

/// Completes a reversible prefix that ends on the sink into a visiting
/// pebbling by running it backwards.
pub fn mirror_extend(dag: &Dag, prefix: &[Move]) -> Result<Strategy, PebblingError> {
    let sink = dag.designated_sink().ok_or(PebblingError::NoDesignatedSink)?;
    let configs = replay(dag, prefix, Game::Reversible).map_err(|e| match e {
        PebblingError::IllegalMoveAt { step, cause } => PebblingError::PrefixIllegal { step, cause },
        other => other,
    })?;
    if !configs.last().is_some_and(|c| c.contains(sink)) {
        return Err(PebblingError::SinkNotReached);
    }
    let mut moves = Vec::with_capacity(2 * prefix.len());
    moves.extend_from_slice(prefix);
    moves.extend(undo_sequence(prefix));
    Ok(Strategy {
        moves,
        game: Game::Reversible,
        flavor: Flavor::Visiting,
    })
}

#[derive(Serialize, Deserialize)]
struct StrategyFile {
    game: Game,
    #[serde(default = "default_flavor")]
    flavor: Flavor,
    moves: Vec<MoveRecord>,
}

fn default_flavor() -> Flavor {
    Flavor::Visiting
}

#[derive(Serialize, Deserialize)]
struct MoveRecord {
    op: OpName,
    v: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OpName {
    Place,
    Remove,
}

impl Strategy {
    pub fn to_json(&self, dag: &Dag) -> String {
        let file = StrategyFile {
            game: self.game,
            flavor: self.flavor,
            moves: self
                .moves
                .iter()
                .map(|m| MoveRecord {
                    op: match m.kind {
                        MoveKind::Place => OpName::Place,
                        MoveKind::Remove => OpName::Remove,
                    },
                    v: dag.name(m.vertex).to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("strategy serialization cannot fail")
    }

    pub fn from_json(dag: &Dag, text: &str) -> Result<Strategy, PebblingError> {
        let file: StrategyFile =
            serde_json::from_str(text).map_err(|e| PebblingError::Format(e.to_string()))?;
        let moves = file
            .moves
            .into_iter()
            .map(|r| {
                let vertex = dag
                    .id(&r.v)
                    .ok_or_else(|| PebblingError::Format(format!("unknown vertex `{}`", r.v)))?;
                let kind = match r.op {
                    OpName::Place => MoveKind::Place,
                    OpName::Remove => MoveKind::Remove,
                };
                Ok(Move { kind, vertex })
            })
            .collect::<Result<Vec<_>, PebblingError>>()?;
        Ok(Strategy {
            moves,
            game: file.game,
            flavor: file.flavor,
        })
    }

    /// The strategy run backwards.
    pub fn reversed(&self) -> Strategy {
        Strategy {
            moves: undo_sequence(&self.moves).collect(),
            ..self.clone()
        }
    }
}
