//! Exact solvers over pebble configurations.
//!
//! States are bitmasks over topological indices (graphs up to 128
//! vertices). Configurations with more pebbles than the budget are never
//! generated. Neighbours are expanded in vertex order and the first parent
//! to reach a state is kept, so among shortest witnesses the one returned is
//! lexicographically smallest by vertex index.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

pub use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{Dag, VertexId};
use crate::pebbling::{
    mirror_extend, verify_strategy, Flavor, Game, Move, MoveKind, PebblingError, Strategy,
};

pub const DEFAULT_STATE_BUDGET: u64 = 50_000_000;
const MAX_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has no designated sink; restrict it to one sink first")]
    NoDesignatedSink,
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("no {game:?}/{flavor:?} pebbling fits in {space} pebbles")]
    SpaceInfeasible {
        game: Game,
        flavor: Flavor,
        space: usize,
    },
    #[error("witness failed re-verification: {0}")]
    Witness(#[from] PebblingError),
}

/// Search limits; `max_expansions` bounds the number of expanded states per
/// query.
#[derive(Copy, Clone, Debug)]
pub struct Limits {
    pub max_expansions: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_expansions: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TradeoffPoint {
    pub space_budget: usize,
    pub optimal_time: usize,
    pub witness: Strategy,
}

type Mask = u128;

struct Arena {
    preds: Vec<Mask>,
    sink: usize,
    n: usize,
}

impl Arena {
    fn new(dag: &Dag) -> Result<Self, SearchError> {
        let sink = dag.designated_sink().ok_or(SearchError::NoDesignatedSink)?;
        if dag.len() > MAX_VERTICES {
            return Err(SearchError::InstanceTooLarge(format!(
                "{} vertices, the solver handles at most {MAX_VERTICES}",
                dag.len()
            )));
        }
        let preds = dag
            .vertices()
            .map(|v| dag.preds(v).iter().fold(0, |m, p| m | 1 << p.index()))
            .collect();
        Ok(Arena {
            preds,
            sink: sink.index(),
            n: dag.len(),
        })
    }

    fn sink_bit(&self) -> Mask {
        1 << self.sink
    }

    /// Legal successors of `state` in vertex order.
    fn neighbours(&self, state: Mask, game: Game, budget: usize) -> impl Iterator<Item = (usize, Mask)> + '_ {
        let size = state.count_ones() as usize;
        (0..self.n).filter_map(move |v| {
            let bit: Mask = 1 << v;
            let ready = state & self.preds[v] == self.preds[v];
            if state & bit == 0 {
                (ready && size < budget).then_some((v, state | bit))
            } else {
                (ready || game == Game::Standard).then_some((v, state & !bit))
            }
        })
    }
}

/// Breadth-first layers from the empty configuration.
struct Bfs<'a> {
    arena: &'a Arena,
    game: Game,
    budget: usize,
    parent: HashMap<Mask, (Mask, usize)>,
    frontier: VecDeque<(Mask, usize)>,
    expansions: u64,
    limits: Limits,
}

impl<'a> Bfs<'a> {
    fn new(arena: &'a Arena, game: Game, budget: usize, limits: Limits) -> Self {
        let mut parent = HashMap::new();
        parent.insert(0, (0, usize::MAX));
        Bfs {
            arena,
            game,
            budget,
            parent,
            frontier: VecDeque::from([(0, 0)]),
            expansions: 0,
            limits,
        }
    }

    /// Pops states in BFS order, stopping at the first for which `stop`
    /// returns true.
    fn run(&mut self, mut stop: impl FnMut(Mask, usize) -> bool) -> Result<Option<(Mask, usize)>, SearchError> {
        while let Some((state, dist)) = self.frontier.pop_front() {
            if stop(state, dist) {
                return Ok(Some((state, dist)));
            }
            self.expansions += 1;
            if self.expansions > self.limits.max_expansions {
                return Err(SearchError::InstanceTooLarge(format!(
                    "more than {} states expanded; raise the state budget",
                    self.limits.max_expansions
                )));
            }
            for (v, next) in self.arena.neighbours(state, self.game, self.budget) {
                if let Entry::Vacant(e) = self.parent.entry(next) {
                    e.insert((state, v));
                    self.frontier.push_back((next, dist + 1));
                }
            }
        }
        Ok(None)
    }

    fn path_to(&self, mut state: Mask) -> Vec<Move> {
        let mut moves = Vec::new();
        while state != 0 {
            let (prev, v) = self.parent[&state];
            let kind = if state & (1 << v) != 0 {
                MoveKind::Place
            } else {
                MoveKind::Remove
            };
            moves.push(Move {
                kind,
                vertex: VertexId::new(v),
            });
            state = prev;
        }
        moves.reverse();
        moves
    }
}

fn clean_up(state: Mask, keep: Mask) -> impl Iterator<Item = Move> {
    (0..MAX_VERTICES)
        .filter(move |&v| (state & !keep) & (1 << v) != 0)
        .map(|v| Move::remove(VertexId::new(v)))
}

fn solve(
    dag: &Dag,
    game: Game,
    flavor: Flavor,
    budget: usize,
    limits: Limits,
) -> Result<Option<Strategy>, SearchError> {
    let arena = Arena::new(dag)?;
    let sink = arena.sink_bit();
    let mut bfs = Bfs::new(&arena, game, budget, limits);
    match game {
        Game::Reversible => {
            // A visiting optimum can be taken to be a shortest path to the
            // sink followed by its mirror image.
            let found = match flavor {
                Flavor::Visiting => bfs.run(|s, _| s & sink != 0)?,
                Flavor::Persistent => bfs.run(|s, _| s == sink)?,
            };
            let Some((state, _)) = found else {
                return Ok(None);
            };
            let path = bfs.path_to(state);
            let strategy = match flavor {
                Flavor::Visiting => mirror_extend(dag, &path)?,
                Flavor::Persistent => Strategy {
                    moves: path,
                    game,
                    flavor,
                },
            };
            Ok(Some(strategy))
        }
        Game::Standard => {
            // Shortest path to some U holding the sink, then one removal per
            // pebble of U that has to go.
            let keep = match flavor {
                Flavor::Visiting => 0,
                Flavor::Persistent => sink,
            };
            let mut best_total = usize::MAX;
            let mut candidates: Vec<Mask> = Vec::new();
            bfs.run(|s, d| {
                if d > best_total {
                    return true;
                }
                if s & sink != 0 {
                    let total = d + (s & !keep).count_ones() as usize;
                    if total < best_total {
                        best_total = total;
                        candidates.clear();
                    }
                    if total == best_total {
                        candidates.push(s);
                    }
                }
                false
            })?;
            let witness = candidates
                .into_iter()
                .map(|s| {
                    let mut moves = bfs.path_to(s);
                    moves.extend(clean_up(s, keep));
                    moves
                })
                .min_by(|a, b| order_key(a).cmp(&order_key(b)));
            Ok(witness.map(|moves| Strategy {
                moves,
                game,
                flavor,
            }))
        }
    }
}

fn order_key(moves: &[Move]) -> Vec<(VertexId, MoveKind)> {
    moves.iter().map(|m| (m.vertex, m.kind)).collect()
}

fn checked(dag: &Dag, strategy: Strategy) -> Result<(usize, Strategy), SearchError> {
    let metrics = verify_strategy(dag, &strategy)?;
    Ok((metrics.time, strategy))
}

/// Fewest moves of a `game`/`flavor` pebbling that never holds more than
/// `space` pebbles, with a witness.
pub fn min_time_within_space(
    dag: &Dag,
    game: Game,
    flavor: Flavor,
    space: usize,
    limits: Limits,
) -> Result<(usize, Strategy), SearchError> {
    match solve(dag, game, flavor, space, limits)? {
        Some(strategy) => checked(dag, strategy),
        None => Err(SearchError::SpaceInfeasible {
            game,
            flavor,
            space,
        }),
    }
}

/// Pebbling price: the smallest budget admitting a pebbling, with a
/// time-optimal witness at that budget.
pub fn min_space(
    dag: &Dag,
    game: Game,
    flavor: Flavor,
    limits: Limits,
) -> Result<(usize, Strategy), SearchError> {
    Arena::new(dag)?;
    for space in 1..=dag.len() {
        if let Some(strategy) = solve(dag, game, flavor, space, limits)? {
            let (_, strategy) = checked(dag, strategy)?;
            return Ok((space, strategy));
        }
    }
    unreachable!("every single-sink DAG can be pebbled with all its vertices")
}

/// Optimal time for every budget from the pebbling price up to `max_space`.
pub fn pareto(
    dag: &Dag,
    game: Game,
    flavor: Flavor,
    max_space: usize,
    limits: Limits,
) -> Result<Vec<TradeoffPoint>, SearchError> {
    let (price, first) = min_space(dag, game, flavor, limits)?;
    if max_space < price {
        return Err(SearchError::SpaceInfeasible {
            game,
            flavor,
            space: max_space,
        });
    }
    let mut points = vec![TradeoffPoint {
        space_budget: price,
        optimal_time: first.moves.len(),
        witness: first,
    }];
    for space in price + 1..=max_space {
        let (optimal_time, witness) = min_time_within_space(dag, game, flavor, space, limits)?;
        points.push(TradeoffPoint {
            space_budget: space,
            optimal_time,
            witness,
        });
    }
    Ok(points)
}

/// Carlson–Savage time lower bound `((c - s') / (s' + 1))^r * r!` for
/// standard pebblings of `carlson_savage(c, r)` in `space` pebbles, where
/// `space = (r + 2) + s' - 1`. Zero when `s'` falls outside `1..=c-3`.
pub fn cs_lower_bound(c: usize, r: usize, space: usize) -> BigRational {
    let surplus = space as i64 - r as i64 - 1;
    if surplus <= 0 || surplus > c as i64 - 3 {
        return BigRational::zero();
    }
    let ratio = BigRational::new(
        BigInt::from(c as i64 - surplus),
        BigInt::from(surplus + 1),
    );
    let mut value = BigRational::one();
    for i in 1..=r {
        value *= &ratio * BigRational::from_integer(BigInt::from(i));
    }
    value
}

/// Ceiling of [`cs_lower_bound`] as a bound on the number of moves, or
/// `None` when `space` is outside the range where the bound applies.
pub fn cs_time_bound(c: usize, r: usize, space: usize) -> Option<BigInt> {
    let b = cs_lower_bound(c, r, space);
    (!b.is_zero()).then(|| b.ceil().to_integer())
}
