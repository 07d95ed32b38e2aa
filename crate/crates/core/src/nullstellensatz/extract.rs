use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;

use super::{multilinearize, pebbling_formula, verify, AxiomId, CertMode, Certificate, FieldSpec, NsError};
use crate::graph::{Dag, VertexId};
use crate::pebbling::{mirror_extend, Move, PebbleConfig, Strategy};

/// An edge `W + pred(v) -- W + pred(v) + {v}` contributed by a monomial
/// `x_W` of the multiplier of `A_v` with `v` not in `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEdge {
    pub lower: PebbleConfig,
    pub upper: PebbleConfig,
    pub vertex: VertexId,
    pub weight: BigRational,
}

/// Configuration multigraph of a multilinear certificate; parallel edges
/// are kept.
#[derive(Clone, Debug)]
pub struct ConfigGraph {
    pub field: FieldSpec,
    pub sink: VertexId,
    pub edges: Vec<ConfigEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub empty_weight: BigRational,
    /// Nonempty sink-free endpoints whose weight is not zero.
    pub violations: Vec<(PebbleConfig, BigRational)>,
}

impl WeightReport {
    pub fn holds(&self) -> bool {
        self.empty_weight == BigRational::from_integer(1.into()) && self.violations.is_empty()
    }
}

pub fn config_graph(dag: &Dag, cert: &Certificate) -> Result<ConfigGraph, NsError> {
    let sink = dag.designated_sink().ok_or(NsError::NoDesignatedSink)?;
    if cert.mode != CertMode::Multilinear || cert.multipliers.values().any(|q| !q.is_multilinear()) {
        return Err(NsError::NotMultilinear);
    }
    let mut edges = Vec::new();
    for (&id, q) in &cert.multipliers {
        let AxiomId::Vertex(v) = id else { continue };
        if v.index() >= dag.len() {
            return Err(NsError::UnknownAxiom(format!("{id:?}")));
        }
        for (m, c) in q.terms() {
            if m.contains(v.index()) {
                continue;
            }
            if let Some(x) = m.vars().find(|&x| x >= dag.len()) {
                return Err(NsError::UnknownVariable(format!("x{x}")));
            }
            let lower = PebbleConfig::from_vertices(
                dag.len(),
                m.vars().map(VertexId::new).chain(dag.preds(v).iter().copied()),
            );
            let mut upper = lower.clone();
            upper.insert(v);
            edges.push(ConfigEdge {
                lower,
                upper,
                vertex: v,
                weight: c.clone(),
            });
        }
    }
    Ok(ConfigGraph {
        field: cert.field,
        sink,
        edges,
    })
}

/// Weighs every sink-free endpoint. An edge of weight `a` counts `+a` at
/// its lower end and `-a` at its upper end, matching the signs with which
/// `x_W * A_v` produces the two configurations' monomials. For a valid
/// certificate the empty configuration weighs 1 and every other sink-free
/// configuration 0.
pub fn check_weights(graph: &ConfigGraph) -> WeightReport {
    let f = graph.field;
    let mut weights: BTreeMap<PebbleConfig, BigRational> = BTreeMap::new();
    for e in &graph.edges {
        for (end, w) in [(&e.lower, e.weight.clone()), (&e.upper, f.neg(&e.weight))] {
            if end.contains(graph.sink) {
                continue;
            }
            let slot = weights.entry(end.clone()).or_insert_with(BigRational::zero);
            *slot = f.add(slot, &w);
        }
    }
    let empty_weight = weights
        .iter()
        .find(|(c, _)| c.is_empty())
        .map(|(_, w)| w.clone())
        .unwrap_or_else(BigRational::zero);
    let violations = weights
        .into_iter()
        .filter(|(c, w)| !c.is_empty() && !w.is_zero())
        .collect();
    WeightReport {
        empty_weight,
        violations,
    }
}

/// Reads a reversible visiting pebbling off a refutation: a shortest walk
/// from the empty configuration to one holding the sink in the
/// configuration graph, then back along the same path.
pub fn extract(dag: &Dag, cert: &Certificate) -> Result<Strategy, NsError> {
    let formula = pebbling_formula(dag)?;
    let ml = multilinearize(&formula, cert).map_err(|e| match e {
        NsError::ResultInvalid => {
            let residual = verify(&formula, cert)
                .map(|r| r.residual.display(dag.names()).to_string())
                .unwrap_or_default();
            NsError::CertificateInvalid(residual)
        }
        other => other,
    })?;
    let graph = config_graph(dag, &ml)?;

    let mut adjacency: HashMap<&PebbleConfig, Vec<&PebbleConfig>> = HashMap::new();
    for e in &graph.edges {
        adjacency.entry(&e.lower).or_default().push(&e.upper);
        adjacency.entry(&e.upper).or_default().push(&e.lower);
    }
    for list in adjacency.values_mut() {
        list.sort();
        list.dedup();
    }

    let start = PebbleConfig::empty(dag.len());
    let mut parent: HashMap<&PebbleConfig, &PebbleConfig> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut goal = None;
    if let Some((&start_ref, _)) = adjacency.get_key_value(&start) {
        parent.insert(start_ref, start_ref);
        queue.push_back(start_ref);
    }
    while let Some(u) = queue.pop_front() {
        if u.contains(graph.sink) {
            goal = Some(u);
            break;
        }
        for &w in &adjacency[u] {
            if !parent.contains_key(w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    let mut node = goal.ok_or(NsError::NoPathToSink)?;
    let mut prefix = Vec::new();
    while !node.is_empty() {
        let prev = parent[node];
        let moved = dag
            .vertices()
            .find(|&v| node.contains(v) != prev.contains(v))
            .expect("adjacent configurations differ in one vertex");
        prefix.push(if node.contains(moved) {
            Move::place(moved)
        } else {
            Move::remove(moved)
        });
        node = prev;
    }
    prefix.reverse();
    mirror_extend(dag, &prefix).map_err(|e| NsError::Internal(format!("extracted walk is illegal: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_dag, line, pyramid};
    use crate::nullstellensatz::{compile, Monomial, Poly};
    use crate::pebbling::{strat_line_visiting, verify_strategy, Flavor, Game};
    use num_traits::One;

    const FIELDS: [FieldSpec; 4] = [
        FieldSpec::Prime(2),
        FieldSpec::Prime(3),
        FieldSpec::Prime(5),
        FieldSpec::Rationals,
    ];

    fn config(n: usize, vs: &[usize]) -> PebbleConfig {
        PebbleConfig::from_vertices(n, vs.iter().map(|&i| VertexId::new(i)))
    }

    fn line2_cert(field: FieldSpec) -> Certificate {
        let g = line(2).unwrap();
        compile(&g, &strat_line_visiting(2).unwrap(), field).unwrap().certificate
    }

    #[test]
    fn line_two_edges() {
        let g = line(2).unwrap();
        let cg = config_graph(&g, &line2_cert(FieldSpec::Rationals)).unwrap();
        let pairs: Vec<_> = cg.edges.iter().map(|e| (e.lower.clone(), e.upper.clone())).collect();
        assert_eq!(
            pairs,
            [(config(2, &[]), config(2, &[0])), (config(2, &[0]), config(2, &[0, 1]))]
        );
    }

    #[test]
    fn monomials_with_own_variable_add_no_edge() {
        let g = line(2).unwrap();
        let q = FieldSpec::Rationals;
        let mut cert = Certificate::new(q, CertMode::Multilinear);
        cert.multipliers.insert(
            AxiomId::Vertex(VertexId::new(1)),
            Poly::term(q, Monomial::from_vars([1]), BigRational::one()),
        );
        assert!(config_graph(&g, &cert).unwrap().edges.is_empty());
        cert.mode = CertMode::Standard;
        assert_eq!(config_graph(&g, &cert).unwrap_err(), NsError::NotMultilinear);
    }

    #[test]
    fn weights_on_line_two() {
        for field in FIELDS {
            let g = line(2).unwrap();
            let report = check_weights(&config_graph(&g, &line2_cert(field)).unwrap());
            assert!(report.holds(), "{field}: {report:?}");
        }
    }

    #[test]
    fn weights_flag_broken_certificates() {
        let g = line(2).unwrap();
        let mut cert = line2_cert(FieldSpec::Prime(5));
        cert.multipliers.remove(&AxiomId::Vertex(VertexId::new(1)));
        let report = check_weights(&config_graph(&g, &cert).unwrap());
        assert!(!report.holds());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].0, config(2, &[0]));
    }

    #[test]
    fn single_vertex() {
        let g = build_dag(&["z"], &[], None).unwrap();
        let s = Strategy {
            moves: vec![Move::place(VertexId::new(0)), Move::remove(VertexId::new(0))],
            game: Game::Reversible,
            flavor: Flavor::Visiting,
        };
        let cert = compile(&g, &s, FieldSpec::Prime(2)).unwrap().certificate;
        let cg = config_graph(&g, &cert).unwrap();
        assert_eq!(cg.edges.len(), 1);
        let report = check_weights(&cg);
        assert!(report.holds());
        assert_eq!(extract(&g, &cert).unwrap(), s);
    }

    #[test]
    fn extract_line_two() {
        let g = line(2).unwrap();
        let s = extract(&g, &line2_cert(FieldSpec::Prime(3))).unwrap();
        let m = verify_strategy(&g, &s).unwrap();
        assert_eq!((m.time, m.space), (4, 2));
    }

    #[test]
    fn extract_pyramid_one() {
        let g = pyramid(1);
        let s = Strategy {
            moves: [0, 1, 2].map(|i| Move::place(VertexId::new(i))).to_vec(),
            game: Game::Reversible,
            flavor: Flavor::Visiting,
        };
        let full = mirror_extend(&g, &s.moves).unwrap();
        let cert = compile(&g, &full, FieldSpec::Rationals).unwrap().certificate;
        let out = extract(&g, &cert).unwrap();
        let m = verify_strategy(&g, &out).unwrap();
        assert!(m.time <= 6 && m.space <= 3);
    }

    #[test]
    fn extract_rejects_invalid() {
        let g = line(2).unwrap();
        let mut cert = line2_cert(FieldSpec::Rationals);
        cert.multipliers.remove(&AxiomId::Sink);
        assert!(matches!(extract(&g, &cert), Err(NsError::CertificateInvalid(_))));
    }
}
