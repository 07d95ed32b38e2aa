use std::fmt::Write;

use num_rational::BigRational;
use num_traits::One;

use super::{AxiomId, FieldSpec, Monomial, NsError, Poly};
use crate::graph::{Dag, VertexId};

/// Pebbling contradiction of a single-sink DAG, in clause and polynomial
/// form. Variable `i` is the vertex with topological index `i`.
#[derive(Clone, Debug)]
pub struct PebblingFormula {
    names: Vec<String>,
    sink: VertexId,
    vertex_axioms: Vec<Poly>,
    sink_axiom: Poly,
    clauses: Vec<Vec<i64>>,
}

/// Builds `A_v = (1 - x_v) * prod_{u in pred(v)} x_u` for every vertex and
/// `A_sink = x_z`, together with the clauses `pred(v) -> v` and `not z`.
pub fn pebbling_formula(dag: &Dag) -> Result<PebblingFormula, NsError> {
    let sink = dag.designated_sink().ok_or(NsError::NoDesignatedSink)?;
    let field = FieldSpec::Rationals;
    let minus_one = -BigRational::one();
    let mut vertex_axioms = Vec::with_capacity(dag.len());
    let mut clauses = Vec::with_capacity(dag.len() + 1);
    for v in dag.vertices() {
        let preds = dag.preds(v);
        let below = Monomial::from_vars(preds.iter().map(|p| p.index()));
        let above = Monomial::from_vars(preds.iter().map(|p| p.index()).chain([v.index()]));
        let mut axiom = Poly::term(field, below, BigRational::one());
        axiom.add_term(above, &minus_one);
        vertex_axioms.push(axiom);
        let mut clause: Vec<i64> = preds.iter().map(|p| -(p.index() as i64 + 1)).collect();
        clause.push(v.index() as i64 + 1);
        clauses.push(clause);
    }
    clauses.push(vec![-(sink.index() as i64 + 1)]);
    Ok(PebblingFormula {
        names: dag.names().to_vec(),
        sink,
        vertex_axioms,
        sink_axiom: Poly::term(field, Monomial::from_vars([sink.index()]), BigRational::one()),
        clauses,
    })
}

impl PebblingFormula {
    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    /// Axiom polynomial over the rationals.
    pub fn axiom(&self, id: AxiomId) -> Option<&Poly> {
        match id {
            AxiomId::Vertex(v) => self.vertex_axioms.get(v.index()),
            AxiomId::Sink => Some(&self.sink_axiom),
        }
    }

    pub fn axiom_ids(&self) -> impl Iterator<Item = AxiomId> + '_ {
        (0..self.vertex_axioms.len())
            .map(|i| AxiomId::Vertex(VertexId::new(i)))
            .chain([AxiomId::Sink])
    }

    /// DIMACS literals, one clause per vertex in topological order followed
    /// by the unit clause on the sink.
    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// DIMACS text with a `c` line naming every variable.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            writeln!(out, "c {} {}", i + 1, name).unwrap();
        }
        writeln!(out, "p cnf {} {}", self.names.len(), self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}
