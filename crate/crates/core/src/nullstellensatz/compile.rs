use num_rational::BigRational;
use num_traits::One;

use super::{AxiomId, CertMode, Certificate, FieldSpec, Monomial, NsError, Poly};
use crate::graph::Dag;
use crate::pebbling::{replay, Game, MoveKind, PebbleConfig, Strategy};

/// Output of [`compile`].
#[derive(Clone, Debug)]
pub struct Compiled {
    pub certificate: Certificate,
    /// Moves up to and including the first one that pebbles the sink.
    pub prefix_len: usize,
    /// Moves after the prefix that are not its exact mirror image; these are
    /// not represented in the certificate.
    pub unmirrored_moves: usize,
}

fn monomial_of(config: &PebbleConfig) -> Monomial {
    Monomial::from_vars(config.iter().map(|v| v.index()))
}

/// Turns a reversible pebbling into a multilinear refutation over `field`.
///
/// Each move `P_{i-1} -> P_i` on `v` contributes `+-x_R` to the multiplier
/// of `A_v`, where `R = P_i - {v} - pred(v)` and the sign is `+` for a
/// placement; these terms telescope to `1 - x_{P_t}`, and the sink axiom
/// times `x_{P_t - {z}}` closes the sum. Only the moves up to the first
/// configuration holding the sink are used.
pub fn compile(dag: &Dag, strategy: &Strategy, field: FieldSpec) -> Result<Compiled, NsError> {
    let field = field.validated()?;
    let sink = dag.designated_sink().ok_or(NsError::NoDesignatedSink)?;
    let configs = replay(dag, &strategy.moves, Game::Reversible).map_err(NsError::StrategyIllegal)?;
    let t = configs
        .iter()
        .position(|c| c.contains(sink))
        .ok_or(NsError::SinkNeverReached)?;

    let one = BigRational::one();
    let minus_one = field.neg(&one);
    let mut cert = Certificate::new(field, CertMode::Multilinear);
    for (mv, after) in strategy.moves[..t].iter().zip(&configs[1..=t]) {
        let mut rest = after.clone();
        rest.remove(mv.vertex);
        for &p in dag.preds(mv.vertex) {
            rest.remove(p);
        }
        let sign = match mv.kind {
            MoveKind::Place => &one,
            MoveKind::Remove => &minus_one,
        };
        cert.multipliers
            .entry(AxiomId::Vertex(mv.vertex))
            .or_insert_with(|| Poly::zero(field))
            .add_term(monomial_of(&rest), sign);
    }
    let mut top = configs[t].clone();
    top.remove(sink);
    cert.multipliers
        .insert(AxiomId::Sink, Poly::term(field, monomial_of(&top), one));
    cert.multipliers.retain(|_, q| !q.is_zero());

    let tail = &strategy.moves[t..];
    let mirrored = tail.len() >= t
        && tail
            .iter()
            .zip(strategy.moves[..t].iter().rev())
            .all(|(a, b)| *a == b.inverse());
    let unmirrored_moves = if mirrored { tail.len() - t } else { tail.len() };
    Ok(Compiled {
        certificate: cert,
        prefix_len: t,
        unmirrored_moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_dag, line, pyramid, VertexId};
    use crate::nullstellensatz::{pebbling_formula, verify};
    use crate::pebbling::{strat_line_visiting, verify_strategy, Flavor, Move};

    const FIELDS: [FieldSpec; 4] = [
        FieldSpec::Prime(2),
        FieldSpec::Prime(3),
        FieldSpec::Prime(5),
        FieldSpec::Rationals,
    ];

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn strategy(moves: Vec<Move>) -> Strategy {
        Strategy {
            moves,
            game: Game::Reversible,
            flavor: Flavor::Visiting,
        }
    }

    #[test]
    fn single_vertex() {
        let g = build_dag(&["z"], &[], None).unwrap();
        let s = strategy(vec![Move::place(v(0)), Move::remove(v(0))]);
        let c = compile(&g, &s, FieldSpec::Rationals).unwrap();
        assert_eq!(c.prefix_len, 1);
        assert_eq!(c.unmirrored_moves, 0);
        assert!(c.certificate.multiplier(AxiomId::Vertex(v(0))).is_one());
        assert!(c.certificate.multiplier(AxiomId::Sink).is_one());
        let r = verify(&pebbling_formula(&g).unwrap(), &c.certificate).unwrap();
        assert!(r.valid);
        assert_eq!((r.size, r.degree), (3, 1));
    }

    #[test]
    fn line_two() {
        let g = line(2).unwrap();
        let s = strategy(vec![
            Move::place(v(0)),
            Move::place(v(1)),
            Move::remove(v(1)),
            Move::remove(v(0)),
        ]);
        for field in FIELDS {
            let cert = compile(&g, &s, field).unwrap().certificate;
            assert!(cert.multiplier(AxiomId::Vertex(v(0))).is_one());
            assert!(cert.multiplier(AxiomId::Vertex(v(1))).is_one());
            let sink = cert.multiplier(AxiomId::Sink);
            assert_eq!(sink, Poly::term(field, Monomial::from_vars([0]), BigRational::one()));
            let r = verify(&pebbling_formula(&g).unwrap(), &cert).unwrap();
            assert!(r.valid, "{field}");
            assert_eq!((r.size, r.degree), (5, 2));
        }
    }

    #[test]
    fn pyramid_one() {
        let g = pyramid(1);
        let s = strategy(vec![
            Move::place(v(0)),
            Move::place(v(1)),
            Move::place(v(2)),
            Move::remove(v(2)),
            Move::remove(v(1)),
            Move::remove(v(0)),
        ]);
        let cert = compile(&g, &s, FieldSpec::Prime(2)).unwrap().certificate;
        let r = verify(&pebbling_formula(&g).unwrap(), &cert).unwrap();
        assert!(r.valid);
        assert_eq!((r.size, r.degree), (7, 3));
    }

    #[test]
    fn size_and_degree_track_time_and_space() {
        for n in 1..=12 {
            let g = line(n).unwrap();
            let s = strat_line_visiting(n).unwrap();
            let m = verify_strategy(&g, &s).unwrap();
            let c = compile(&g, &s, FieldSpec::Prime(3)).unwrap();
            let r = verify(&pebbling_formula(&g).unwrap(), &c.certificate).unwrap();
            assert!(r.valid);
            assert_eq!(r.size, m.time + 1, "n={n}");
            assert_eq!(r.degree, m.space, "n={n}");
        }
    }

    #[test]
    fn trailing_moves_are_reported() {
        let g = line(2).unwrap();
        let s = strategy(vec![
            Move::place(v(0)),
            Move::place(v(1)),
            Move::remove(v(1)),
            Move::place(v(1)),
            Move::remove(v(1)),
            Move::remove(v(0)),
        ]);
        let c = compile(&g, &s, FieldSpec::Rationals).unwrap();
        assert_eq!(c.prefix_len, 2);
        assert_eq!(c.unmirrored_moves, 4);
    }

    #[test]
    fn errors() {
        let g = line(2).unwrap();
        let illegal = strategy(vec![Move::place(v(1))]);
        assert!(matches!(
            compile(&g, &illegal, FieldSpec::Rationals),
            Err(NsError::StrategyIllegal(_))
        ));
        let short = strategy(vec![Move::place(v(0)), Move::remove(v(0))]);
        assert_eq!(
            compile(&g, &short, FieldSpec::Rationals).unwrap_err(),
            NsError::SinkNeverReached
        );
    }
}
