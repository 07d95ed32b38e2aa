use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use revpeb::graph::{build_dag, Dag, VertexId};
use revpeb::nullstellensatz::{
    check_weights, compile, config_graph, extract, multilinear_product, pebbling_formula, verify, AxiomId,
    FieldSpec, Monomial, Poly,
};
use revpeb::pebbling::{mirror_extend, replay, step, verify_strategy, Game, Move, PebbleConfig};

/// A DAG on `n` vertices with the given forward edges, plus a final vertex
/// fed by every other sink so that the graph has a single sink.
fn closed_dag(n: usize, edges: &[(usize, usize)]) -> Dag {
    let mut names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut pairs: Vec<(String, String)> = edges
        .iter()
        .filter(|(a, b)| a < b && *b < n)
        .map(|&(a, b)| (format!("v{a}"), format!("v{b}")))
        .collect();
    let has_succ: Vec<bool> = (0..n).map(|i| pairs.iter().any(|(a, _)| *a == format!("v{i}"))).collect();
    names.push("z".into());
    for (i, out) in has_succ.iter().enumerate() {
        if !out {
            pairs.push((format!("v{i}"), "z".into()));
        }
    }
    build_dag(&names, &pairs, Some("z")).unwrap()
}

fn dag_strategy() -> impl Strategy<Value = Dag> {
    (1usize..8).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |edges| closed_dag(n, &edges))
    })
}

fn monomial_of(c: &PebbleConfig) -> Poly {
    Poly::term(
        FieldSpec::Rationals,
        Monomial::from_vars(c.iter().map(VertexId::index)),
        BigRational::one(),
    )
}

/// Random walk of legal reversible moves; ends wherever it ends.
fn random_walk(dag: &Dag, choices: &[usize]) -> Vec<Move> {
    let mut config = PebbleConfig::empty(dag.len());
    let mut moves = Vec::new();
    for &c in choices {
        let legal: Vec<Move> = dag
            .vertices()
            .map(|v| if config.contains(v) { Move::remove(v) } else { Move::place(v) })
            .filter(|&m| step(dag, &config, m, Game::Reversible).is_ok())
            .collect();
        let m = legal[c % legal.len()];
        config = step(dag, &config, m, Game::Reversible).unwrap();
        moves.push(m);
    }
    moves
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn every_reversible_step_telescopes(dag in dag_strategy(), choices in proptest::collection::vec(any::<usize>(), 1..30)) {
        let formula = pebbling_formula(&dag).unwrap();
        let moves = random_walk(&dag, &choices);
        let configs = replay(&dag, &moves, Game::Reversible).unwrap();
        for (i, mv) in moves.iter().enumerate() {
            let (before, after) = (&configs[i], &configs[i + 1]);
            let mut rest = after.clone();
            rest.remove(mv.vertex);
            for p in dag.preds(mv.vertex) {
                rest.remove(*p);
            }
            let axiom = formula.axiom(AxiomId::Vertex(mv.vertex)).unwrap();
            let mut term = multilinear_product(&monomial_of(&rest), axiom).unwrap();
            if mv.sign() < 0 {
                term = term.neg();
            }
            let mut lhs = monomial_of(before);
            lhs.add_assign(&monomial_of(after).neg()).unwrap();
            lhs.add_assign(&term.neg()).unwrap();
            prop_assert!(lhs.is_zero(), "step {} on {:?}", i + 1, mv);
        }
    }

    #[test]
    fn compiled_walks_round_trip(dag in dag_strategy(), choices in proptest::collection::vec(any::<usize>(), 1..40), p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]) {
        let moves = random_walk(&dag, &choices);
        let configs = replay(&dag, &moves, Game::Reversible).unwrap();
        let sink = dag.designated_sink().unwrap();
        let Some(t) = configs.iter().position(|c| c.contains(sink)) else { return Ok(()) };
        let prefix = &moves[..t];
        let strategy = mirror_extend(&dag, prefix).unwrap();
        let metrics = verify_strategy(&dag, &strategy).unwrap();
        let formula = pebbling_formula(&dag).unwrap();
        for field in [FieldSpec::Prime(p), FieldSpec::Rationals] {
            let cert = compile(&dag, &strategy, field).unwrap().certificate;
            let report = verify(&formula, &cert).unwrap();
            prop_assert!(report.valid);
            prop_assert!(report.size <= metrics.time + 1);
            prop_assert!(report.degree <= metrics.space);
            prop_assert!(check_weights(&config_graph(&dag, &cert).unwrap()).holds());
            let back = extract(&dag, &cert).unwrap();
            let m = verify_strategy(&dag, &back).unwrap();
            prop_assert!(m.space <= report.degree);
            prop_assert!(m.time < report.size);
        }
    }

    #[test]
    fn reversed_reversible_pebblings_stay_legal(dag in dag_strategy(), choices in proptest::collection::vec(any::<usize>(), 1..40)) {
        let moves = random_walk(&dag, &choices);
        let configs = replay(&dag, &moves, Game::Reversible).unwrap();
        let last = configs.last().unwrap().clone();
        // undoing from the final configuration must retrace the walk
        let mut cur = last;
        for (i, m) in moves.iter().enumerate().rev() {
            cur = step(&dag, &cur, m.inverse(), Game::Reversible).unwrap();
            prop_assert_eq!(&cur, &configs[i]);
        }
    }

    #[test]
    fn standard_game_accepts_every_reversible_walk(dag in dag_strategy(), choices in proptest::collection::vec(any::<usize>(), 1..40)) {
        let moves = random_walk(&dag, &choices);
        prop_assert!(replay(&dag, &moves, Game::Standard).is_ok());
    }
}
