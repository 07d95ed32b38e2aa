use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use revpeb::graph::{bit_reversal, carlson_savage, cs_sink_name, line, pyramid, single_sink_restriction, Dag};
use revpeb::pebbling::{
    strat_bit_reversal_checkpoint, strat_bit_reversal_small_space, strat_by_depth, strat_carlson_savage,
    strat_line_checkpoint, strat_line_persistent, strat_line_visiting, mirror_extend, Flavor, PebblingError,
    Strategy,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pyramid,
    Line,
    Cs,
    BitReversal,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Pyramid height.
    #[arg(long)]
    pub height: Option<usize>,
    /// Line length, or the length of each line of a bit-reversal graph.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of spines of a Carlson–Savage graph.
    #[arg(long)]
    pub c: Option<usize>,
    /// Recursion depth of a Carlson–Savage graph.
    #[arg(long)]
    pub r: Option<usize>,
    /// Keep only the ancestors of this Carlson–Savage sink (1-based).
    #[arg(long)]
    pub single_sink: Option<usize>,
}

fn need(v: Option<usize>, flag: &str, family: Family) -> Result<usize> {
    v.with_context(|| format!("--{flag} is required for --family {family:?}"))
}

impl FamilyArgs {
    pub fn build(&self) -> Result<Dag> {
        let f = self.family;
        if self.single_sink.is_some() && f != Family::Cs {
            bail!("--single-sink only applies to --family cs");
        }
        Ok(match f {
            Family::Pyramid => pyramid(need(self.height, "height", f)?),
            Family::Line => line(need(self.n, "n", f)?)?,
            Family::BitReversal => bit_reversal(need(self.n, "n", f)?)?,
            Family::Cs => {
                let (c, r) = (need(self.c, "c", f)?, need(self.r, "r", f)?);
                let g = carlson_savage(c, r)?;
                match self.single_sink {
                    None => g,
                    Some(j) => {
                        if j == 0 || j > c {
                            bail!("--single-sink must be in 1..={c}");
                        }
                        let sink = g.id(&cs_sink_name(c, r, j)).expect("generated sink");
                        single_sink_restriction(&g, sink)?
                    }
                }
            }
        })
    }

    /// The family's constructive pebblings of the requested flavor.
    pub fn constructions(&self, dag: &Dag, flavor: Flavor) -> Vec<Strategy> {
        let mut out = Vec::new();
        let mut push = |s: Result<Strategy, PebblingError>| out.extend(s.ok());
        match (self.family, flavor) {
            (Family::Line, Flavor::Persistent) => push(strat_line_persistent(self.n.unwrap_or(0))),
            (Family::Line, Flavor::Visiting) => {
                let n = self.n.unwrap_or(0);
                push(strat_line_visiting(n));
                for k in 1..=usize::BITS - n.leading_zeros() {
                    push(strat_line_checkpoint(n, k));
                }
            }
            (Family::Pyramid, Flavor::Persistent) => push(strat_by_depth(dag)),
            (Family::Pyramid, Flavor::Visiting) => {
                push(strat_by_depth(dag).and_then(|s| to_visiting(dag, s)))
            }
            (Family::Cs, Flavor::Visiting) => {
                if let (Some(c), Some(r), Some(j)) = (self.c, self.r, self.single_sink) {
                    push(strat_carlson_savage(c, r, j));
                }
            }
            (Family::BitReversal, Flavor::Visiting) => {
                let n = self.n.unwrap_or(0);
                push(strat_bit_reversal_small_space(n));
                for k in 1..=usize::BITS - n.leading_zeros() {
                    push(strat_bit_reversal_checkpoint(n, k));
                }
            }
            _ => {}
        }
        out
    }
}

/// Cuts a pebbling at its first sink placement and mirrors it.
fn to_visiting(dag: &Dag, s: Strategy) -> Result<Strategy, PebblingError> {
    let sink = dag.designated_sink().expect("single-sink family");
    let first = s
        .moves
        .iter()
        .position(|m| m.vertex == sink)
        .ok_or(PebblingError::SinkNeverPebbled)?;
    mirror_extend(dag, &s.moves[..=first])
}
