//! Generators for the graph families used by the pebbling constructions.
//!
//! Naming scheme (all counters 1-based except pyramid layers, which count
//! the distance from the apex):
//!
//! * `line(n)`: `v1 .. vn`, sink `vn`.
//! * `pyramid(h)`: `pyr/{d}/{i}` where `d` is the distance from the apex
//!   (`0..=h`) and `i` the position in the layer (`1..=d+1`), sink `pyr/0/1`.
//! * `bit_reversal(n)`: bottom line `x1 .. xn`, top line `y1 .. yn`, sink `yn`.
//! * `carlson_savage(c, 1)`: sources `src1`, `src2`, sinks `sink1 .. sinkc`.
//! * `carlson_savage(c, r)` for `r >= 2`: pyramids `pyr{j}/{d}/{i}`, the
//!   recursive copy under the prefix `sub/`, and spine vertices
//!   `spine{j}/sec{k}/v{m}`; sink `j` is the last vertex of spine `j`.

use std::collections::HashSet;

use super::{build_dag, Dag, GraphError, VertexId};

struct Parts {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Parts {
    fn new() -> Self {
        Parts {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn build(self, sink: Option<&str>) -> Dag {
        build_dag(&self.vertices, &self.edges, sink).expect("generated family is a valid DAG")
    }
}

pub fn pyramid_vertex_name(prefix: &str, layer: usize, pos: usize) -> String {
    format!("{prefix}/{layer}/{pos}")
}

fn push_pyramid(parts: &mut Parts, prefix: &str, h: usize) -> String {
    for d in (0..=h).rev() {
        for i in 1..=d + 1 {
            let name = pyramid_vertex_name(prefix, d, i);
            if d < h {
                parts
                    .edges
                    .push((pyramid_vertex_name(prefix, d + 1, i), name.clone()));
                parts
                    .edges
                    .push((pyramid_vertex_name(prefix, d + 1, i + 1), name.clone()));
            }
            parts.vertices.push(name);
        }
    }
    pyramid_vertex_name(prefix, 0, 1)
}

/// Pyramid of height `h`: `(h+1)(h+2)/2` vertices, unique sink at the apex.
pub fn pyramid(h: usize) -> Dag {
    let mut parts = Parts::new();
    let sink = push_pyramid(&mut parts, "pyr", h);
    parts.build(Some(&sink))
}

/// Path `v1 -> v2 -> ... -> vn`.
pub fn line(n: usize) -> Result<Dag, GraphError> {
    if n == 0 {
        return Err(GraphError::ParamOutOfRange("line needs n >= 1".into()));
    }
    let mut parts = Parts::new();
    for i in 1..=n {
        parts.vertices.push(format!("v{i}"));
        if i > 1 {
            parts.edges.push((format!("v{}", i - 1), format!("v{i}")));
        }
    }
    let sink = format!("v{n}");
    Ok(parts.build(Some(&sink)))
}

/// Name of sink `j` (1-based) of `carlson_savage(c, r)`.
pub fn cs_sink_name(c: usize, r: usize, j: usize) -> String {
    if r == 1 {
        format!("sink{j}")
    } else {
        format!("spine{j}/sec{}/v{}", r - 1, 2 * c)
    }
}

fn push_cs(parts: &mut Parts, prefix: &str, c: usize, r: usize) -> Vec<String> {
    if r == 1 {
        let sources = [format!("{prefix}src1"), format!("{prefix}src2")];
        parts.vertices.extend(sources.iter().cloned());
        let mut sinks = Vec::with_capacity(c);
        for j in 1..=c {
            let sink = format!("{prefix}sink{j}");
            for s in &sources {
                parts.edges.push((s.clone(), sink.clone()));
            }
            parts.vertices.push(sink.clone());
            sinks.push(sink);
        }
        return sinks;
    }
    // Built from c pyramids of height r-1, one copy of the previous level and
    // c spines of r-1 sections of 2c vertices each.
    let pyramid_sinks: Vec<String> = (1..=c)
        .map(|j| push_pyramid(parts, &format!("{prefix}pyr{j}"), r - 1))
        .collect();
    let inner_sinks = push_cs(parts, &format!("{prefix}sub/"), c, r - 1);
    let mut sinks = Vec::with_capacity(c);
    for j in 1..=c {
        let mut prev: Option<String> = None;
        for k in 1..r {
            for m in 1..=2 * c {
                let name = format!("{prefix}spine{j}/sec{k}/v{m}");
                let aux = if m <= c {
                    &pyramid_sinks[m - 1]
                } else {
                    &inner_sinks[m - c - 1]
                };
                parts.edges.push((aux.clone(), name.clone()));
                if let Some(p) = prev.take() {
                    parts.edges.push((p, name.clone()));
                }
                parts.vertices.push(name.clone());
                prev = Some(name);
            }
        }
        sinks.push(prev.expect("spine has at least one section"));
    }
    sinks
}

/// Carlson–Savage graph with `c` spines/sinks and recursion depth `r`.
///
/// The result has `c` sinks and no designated sink; use
/// [`single_sink_restriction`] to obtain a pebbling target.
pub fn carlson_savage(c: usize, r: usize) -> Result<Dag, GraphError> {
    if c < 2 || r < 1 {
        return Err(GraphError::ParamOutOfRange(format!(
            "carlson_savage needs c >= 2 and r >= 1, got c={c}, r={r}"
        )));
    }
    let mut parts = Parts::new();
    push_cs(&mut parts, "", c, r);
    Ok(parts.build(None))
}

/// Induced subgraph on everything that reaches `sink`, with `sink` designated.
pub fn single_sink_restriction(dag: &Dag, sink: VertexId) -> Result<Dag, GraphError> {
    if !dag.sinks().contains(&sink) {
        let name = if sink.index() < dag.len() {
            dag.name(sink).to_string()
        } else {
            sink.to_string()
        };
        return Err(GraphError::NotASinkVertex(name));
    }
    let keep = dag.ancestors(sink);
    let vertices: Vec<&str> = keep.iter().map(|&v| dag.name(v)).collect();
    let kept: HashSet<VertexId> = keep.iter().copied().collect();
    let edges: Vec<(&str, &str)> = dag
        .edges()
        .filter(|(a, b)| kept.contains(a) && kept.contains(b))
        .map(|(a, b)| (dag.name(a), dag.name(b)))
        .collect();
    build_dag(&vertices, &edges, Some(dag.name(sink)))
}

/// The bit-reversal permutation on `1..=n` as a 1-based table: entry `i - 1`
/// holds `sigma(i)`.
pub fn bit_reversal_permutation(n: usize) -> Result<Vec<usize>, GraphError> {
    if n < 2 {
        return Err(GraphError::ParamOutOfRange(format!(
            "bit-reversal graph needs n >= 2, got {n}"
        )));
    }
    if !n.is_power_of_two() {
        return Err(GraphError::NotPowerOfTwo(n));
    }
    let bits = n.trailing_zeros();
    Ok((0..n)
        .map(|i| (i.reverse_bits() >> (usize::BITS - bits)) + 1)
        .collect())
}

/// Bit-reversal permutation graph on `2n` vertices.
pub fn bit_reversal(n: usize) -> Result<Dag, GraphError> {
    let sigma = bit_reversal_permutation(n)?;
    let mut parts = Parts::new();
    for line in ["x", "y"] {
        for i in 1..=n {
            parts.vertices.push(format!("{line}{i}"));
            if i > 1 {
                parts
                    .edges
                    .push((format!("{line}{}", i - 1), format!("{line}{i}")));
            }
        }
    }
    for (i, &s) in sigma.iter().enumerate() {
        parts.edges.push((format!("x{}", i + 1), format!("y{s}")));
    }
    let sink = format!("y{n}");
    Ok(parts.build(Some(&sink)))
}
