use revpeb::graph::{bit_reversal, carlson_savage, line, pyramid, single_sink_restriction, Dag};
use revpeb::nullstellensatz::{compile, extract, pebbling_formula, verify, Certificate, FieldSpec};
use revpeb::pebbling::{
    strat_bit_reversal_checkpoint, strat_bit_reversal_small_space, strat_by_depth, strat_carlson_savage,
    strat_line_checkpoint, verify_strategy, Flavor, Game, Strategy,
};
use revpeb::search::{min_space, min_time_within_space, Limits};

fn cs_single(c: usize, r: usize) -> Dag {
    let g = carlson_savage(c, r).unwrap();
    single_sink_restriction(&g, g.sinks()[0]).unwrap()
}

#[test]
fn search_witness_to_certificate_and_back() {
    for g in [line(5).unwrap(), pyramid(2), bit_reversal(4).unwrap(), cs_single(2, 2)] {
        let formula = pebbling_formula(&g).unwrap();
        let (price, _) = min_space(&g, Game::Reversible, Flavor::Visiting, Limits::default()).unwrap();
        for space in price..=price + 1 {
            let (time, witness) =
                min_time_within_space(&g, Game::Reversible, Flavor::Visiting, space, Limits::default()).unwrap();
            let cert = compile(&g, &witness, FieldSpec::Prime(3)).unwrap().certificate;
            let report = verify(&formula, &cert).unwrap();
            assert!(report.valid);
            assert_eq!(report.size, time + 1);
            let used = verify_strategy(&g, &witness).unwrap().space;
            assert_eq!(report.degree, used);

            let text = cert.to_json(&g);
            let reread = Certificate::from_json(&g, &text, None).unwrap();
            assert_eq!(reread, cert);
            let back = extract(&g, &reread).unwrap();
            let m = verify_strategy(&g, &back).unwrap();
            assert_eq!((m.time, m.space), (time, used));
        }
    }
}

#[test]
fn strategy_files_round_trip() {
    let g = pyramid(3);
    let s = strat_by_depth(&g).unwrap();
    let back = Strategy::from_json(&g, &s.to_json(&g)).unwrap();
    assert_eq!(back, s);
    let g2 = Dag::from_json(&g.to_json()).unwrap();
    assert_eq!(g2.names(), g.names());
    assert_eq!(verify_strategy(&g2, &back).unwrap(), verify_strategy(&g, &s).unwrap());
}

#[test]
fn constructive_strategies_are_legal() {
    let checks: Vec<(Dag, Strategy)> = vec![
        (pyramid(4), strat_by_depth(&pyramid(4)).unwrap()),
        (line(30).unwrap(), strat_line_checkpoint(30, 3).unwrap()),
        (cs_single(3, 2), strat_carlson_savage(3, 2, 1).unwrap()),
        (bit_reversal(16).unwrap(), strat_bit_reversal_small_space(16).unwrap()),
        (bit_reversal(16).unwrap(), strat_bit_reversal_checkpoint(16, 2).unwrap()),
    ];
    for (g, s) in checks {
        assert_eq!(s.game, Game::Reversible);
        let m = verify_strategy(&g, &s).unwrap();
        assert!(m.space <= g.len());
    }
}

#[test]
fn reversible_price_dominates_standard_price() {
    for g in [line(6).unwrap(), pyramid(2), cs_single(2, 1), bit_reversal(4).unwrap()] {
        let (rev, _) = min_space(&g, Game::Reversible, Flavor::Visiting, Limits::default()).unwrap();
        let (std, _) = min_space(&g, Game::Standard, Flavor::Visiting, Limits::default()).unwrap();
        assert!(rev >= std);
    }
}
