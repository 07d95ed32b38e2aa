//! Directed acyclic graphs with named vertices.
//!
//! Vertices are stored in a topological order: every edge goes from a lower
//! index to a higher index, which is what certifies acyclicity. Generated
//! families declare their vertices in topological order already, and
//! [`build_dag`] keeps declaration order wherever the edges allow it, so the
//! index of a generated vertex is stable across runs.

mod families;

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use families::{
    bit_reversal, bit_reversal_permutation, carlson_savage, cs_sink_name, line, pyramid,
    pyramid_vertex_name, single_sink_restriction,
};

/// Dense vertex handle; the value is the vertex's topological index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(usize);

impl VertexId {
    pub const fn new(index: usize) -> Self {
        VertexId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph contains a cycle")]
    CycleDetected,
    #[error("edge references undeclared vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("designated sink `{0}` has a successor")]
    NotASink(String),
    #[error("`{0}` is not a sink of the graph")]
    NotASinkVertex(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("malformed graph file: {0}")]
    Format(String),
}

/// A validated DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    lookup: HashMap<String, VertexId>,
    preds: Vec<Vec<VertexId>>,
    succs: Vec<Vec<VertexId>>,
    sinks: Vec<VertexId>,
    designated_sink: Option<VertexId>,
    max_indegree: usize,
}

/// Validates a vertex/edge list and assigns topological indices.
///
/// Among the vertices whose predecessors are all placed, the one declared
/// first gets the next index. Duplicate edges collapse into one. A graph
/// with exactly one sink has it designated even when `designated_sink` is
/// `None`.
pub fn build_dag<S: AsRef<str>>(
    vertices: &[S],
    edges: &[(S, S)],
    designated_sink: Option<&str>,
) -> Result<Dag, GraphError> {
    let mut decl: HashMap<&str, usize> = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if decl.insert(v.as_ref(), i).is_some() {
            return Err(GraphError::DuplicateVertex(v.as_ref().to_string()));
        }
    }
    let n = vertices.len();
    let mut out_edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, b) in edges {
        let ia = *decl
            .get(a.as_ref())
            .ok_or_else(|| GraphError::UnknownVertex(a.as_ref().to_string()))?;
        let ib = *decl
            .get(b.as_ref())
            .ok_or_else(|| GraphError::UnknownVertex(b.as_ref().to_string()))?;
        if ia == ib {
            return Err(GraphError::CycleDetected);
        }
        out_edges[ia].insert(ib);
    }

    let mut indeg = vec![0usize; n];
    for outs in &out_edges {
        for &b in outs {
            indeg[b] += 1;
        }
    }
    // Kahn's algorithm, smallest declaration index first.
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &b in &out_edges[i] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::CycleDetected);
    }
    let mut pos = vec![0usize; n];
    for (topo, &d) in order.iter().enumerate() {
        pos[d] = topo;
    }

    let names: Vec<String> = order.iter().map(|&d| vertices[d].as_ref().to_string()).collect();
    let mut preds = vec![Vec::new(); n];
    let mut succs = vec![Vec::new(); n];
    for (a, outs) in out_edges.iter().enumerate() {
        for &b in outs {
            preds[pos[b]].push(VertexId(pos[a]));
            succs[pos[a]].push(VertexId(pos[b]));
        }
    }
    for list in preds.iter_mut().chain(succs.iter_mut()) {
        list.sort_unstable();
    }
    let lookup = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), VertexId(i)))
        .collect::<HashMap<_, _>>();
    let sinks: Vec<VertexId> = (0..n)
        .filter(|&i| succs[i].is_empty())
        .map(VertexId)
        .collect();
    let designated_sink = match designated_sink {
        None if sinks.len() == 1 => Some(sinks[0]),
        None => None,
        Some(name) => {
            let id = *lookup
                .get(name)
                .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))?;
            if !succs[id.0].is_empty() {
                return Err(GraphError::NotASink(name.to_string()));
            }
            Some(id)
        }
    };
    let max_indegree = preds.iter().map(Vec::len).max().unwrap_or(0);
    Ok(Dag {
        names,
        lookup,
        preds,
        succs,
        sinks,
        designated_sink,
        max_indegree,
    })
}

impl Dag {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.lookup.get(name).copied()
    }

    pub fn preds(&self, v: VertexId) -> &[VertexId] {
        &self.preds[v.0]
    }

    pub fn succs(&self, v: VertexId) -> &[VertexId] {
        &self.succs[v.0]
    }

    /// All edges `(pred, succ)`, ordered by successor then predecessor.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.preds
            .iter()
            .enumerate()
            .flat_map(|(b, ps)| ps.iter().map(move |&a| (a, VertexId(b))))
    }

    pub fn edge_count(&self) -> usize {
        self.preds.iter().map(Vec::len).sum()
    }

    /// Every vertex without successors, in index order.
    pub fn sinks(&self) -> &[VertexId] {
        &self.sinks
    }

    pub fn designated_sink(&self) -> Option<VertexId> {
        self.designated_sink
    }

    pub fn sources(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|v| self.preds[v.0].is_empty())
    }

    pub fn max_indegree(&self) -> usize {
        self.max_indegree
    }

    /// Length in edges of the longest path ending at `v`.
    pub fn depth_of(&self, v: VertexId) -> usize {
        let levels = self.levels();
        levels[v.0]
    }

    /// Longest source-to-vertex path length over all vertices.
    pub fn depth(&self) -> usize {
        self.levels().into_iter().max().unwrap_or(0)
    }

    fn levels(&self) -> Vec<usize> {
        let mut level = vec![0usize; self.len()];
        for v in 0..self.len() {
            level[v] = self.preds[v]
                .iter()
                .map(|p| level[p.0] + 1)
                .max()
                .unwrap_or(0);
        }
        level
    }

    /// `v` together with everything that reaches it.
    pub fn ancestors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if seen.insert(u) {
                stack.extend(self.preds[u.0].iter().copied());
            }
        }
        seen
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .map(|(a, b)| [self.name(a).to_string(), self.name(b).to_string()])
                .collect(),
            sink: self.designated_sink.map(|z| self.name(z).to_string()),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Dag, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
        let edges: Vec<(String, String)> = file
            .edges
            .into_iter()
            .map(|[a, b]| (a, b))
            .collect();
        build_dag(&file.vertices, &edges, file.sink.as_deref())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sink: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> Dag {
        build_dag(
            &["p", "q", "r", "u", "v", "z"],
            &[
                ("p", "u"),
                ("q", "u"),
                ("q", "v"),
                ("r", "v"),
                ("u", "z"),
                ("v", "z"),
            ],
            Some("z"),
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_is_source_and_sink() {
        let g = build_dag::<&str>(&["a"], &[], Some("a")).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.sinks(), &[VertexId::new(0)]);
        assert_eq!(g.sources().count(), 1);
    }

    #[test]
    fn two_cycle_rejected() {
        let err = build_dag(&["a", "b"], &[("a", "b"), ("b", "a")], Some("b")).unwrap_err();
        assert_eq!(err, GraphError::CycleDetected);
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_dag(&["a"], &[("a", "a")], None).unwrap_err();
        assert_eq!(err, GraphError::CycleDetected);
    }

    #[test]
    fn error_cases() {
        assert_eq!(
            build_dag(&["a", "a"], &[], None).unwrap_err(),
            GraphError::DuplicateVertex("a".into())
        );
        assert_eq!(
            build_dag(&["a"], &[("a", "b")], None).unwrap_err(),
            GraphError::UnknownVertex("b".into())
        );
        assert_eq!(
            build_dag(&["a", "b"], &[("a", "b")], Some("a")).unwrap_err(),
            GraphError::NotASink("a".into())
        );
    }

    #[test]
    fn figure_pyramid() {
        let g = fig1a();
        assert_eq!(g.len(), 6);
        let z = g.id("z").unwrap();
        let mut preds: Vec<&str> = g.preds(z).iter().map(|&p| g.name(p)).collect();
        preds.sort();
        assert_eq!(preds, ["u", "v"]);
        assert_eq!(g.designated_sink(), Some(z));
        assert_eq!(g.depth(), 2);
        assert_eq!(g.max_indegree(), 2);
    }

    #[test]
    fn indices_are_topological() {
        // declared in reverse, so indices must be reordered
        let g = build_dag(&["c", "b", "a"], &[("a", "b"), ("b", "c")], Some("c")).unwrap();
        assert_eq!(g.names(), ["a", "b", "c"]);
        for (a, b) in g.edges() {
            assert!(a < b);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = fig1a();
        let back = Dag::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let raw = r#"{"vertices":["a","b"],"edges":[["a","b"]],"sink":"b"}"#;
        let h = Dag::from_json(raw).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert!(Dag::from_json(r#"{"vertices":["a"],"edges":[["a","x"]]}"#).is_err());
    }
}
