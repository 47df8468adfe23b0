//! Finite directed multigraphs whose edge classes may have infinite (`ω`)
//! multiplicity, together with the graph-theoretic machinery used by the
//! algebra and module layers.

mod analysis;
mod construct;
mod growth;
mod io;
mod paths;
pub mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub use analysis::*;
pub use construct::*;
pub use growth::*;
pub use io::{EdgeSpec, GraphSpec, MultiplicitySpec};
pub use paths::*;

/// Index of a vertex in the canonical (name-sorted) vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

/// Index of an edge class in the canonical (name-sorted) class order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassId(pub u32);

/// A concrete edge: the `index`-th parallel copy in its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub class: ClassId,
    pub index: u64,
}

impl Edge {
    pub fn new(class: ClassId, index: u64) -> Self {
        Edge { class, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    pub fn contains(self, index: u64) -> bool {
        match self {
            Multiplicity::Finite(n) => index < n,
            Multiplicity::Omega => true,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeClass {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
    pub multiplicity: Multiplicity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Sink,
    Regular,
    InfiniteEmitter,
}

pub type VertexSet = BTreeSet<VertexId>;

/// A validated graph. Vertices and edge classes are kept in name order, so
/// two graphs built from the same data compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<String>,
    classes: Vec<EdgeClass>,
    out_classes: Vec<Vec<ClassId>>,
    in_classes: Vec<Vec<ClassId>>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Graph {
    /// Validates a raw description. All problems found are reported together.
    pub fn from_spec(spec: &GraphSpec) -> Result<Graph, GraphError> {
        let mut errors = Vec::new();
        let mut names = BTreeSet::new();
        for v in &spec.vertices {
            if !is_identifier(v) {
                errors.push(GraphError::InvalidName(v.clone()));
            }
            if !names.insert(v.clone()) {
                errors.push(GraphError::DuplicateName(v.clone()));
            }
        }
        let mut vertices: Vec<String> = spec.vertices.clone();
        vertices.sort();
        vertices.dedup();
        let index: BTreeMap<&str, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), VertexId(i as u32)))
            .collect();

        let mut classes = Vec::new();
        for e in &spec.edges {
            if !is_identifier(&e.name) {
                errors.push(GraphError::InvalidName(e.name.clone()));
            }
            if !names.insert(e.name.clone()) {
                errors.push(GraphError::DuplicateName(e.name.clone()));
            }
            let multiplicity = match e.multiplicity {
                MultiplicitySpec::Count(0) => {
                    errors.push(GraphError::ZeroMultiplicity(e.name.clone()));
                    continue;
                }
                MultiplicitySpec::Count(n) => Multiplicity::Finite(n),
                MultiplicitySpec::Omega => Multiplicity::Omega,
            };
            let lookup = |endpoint: &str| {
                index
                    .get(endpoint)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: e.name.clone(),
                        endpoint: endpoint.to_string(),
                    })
            };
            match (lookup(&e.src), lookup(&e.dst)) {
                (Ok(src), Ok(dst)) => classes.push(EdgeClass {
                    name: e.name.clone(),
                    src,
                    dst,
                    multiplicity,
                }),
                (a, b) => errors.extend(a.err().into_iter().chain(b.err())),
            }
        }
        match errors.len() {
            0 => Ok(Graph::assemble(vertices, classes)),
            1 => Err(errors.remove(0)),
            _ => Err(GraphError::Invalid(errors)),
        }
    }

    /// Builds a graph from already-checked parts, sorting into canonical order.
    pub(crate) fn assemble(mut vertices: Vec<String>, classes: Vec<EdgeClass>) -> Graph {
        let old_names: Vec<String> = vertices.clone();
        vertices.sort();
        let remap: BTreeMap<&str, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), VertexId(i as u32)))
            .collect();
        let mut classes: Vec<EdgeClass> = classes
            .into_iter()
            .map(|c| EdgeClass {
                src: remap[old_names[c.src.0 as usize].as_str()],
                dst: remap[old_names[c.dst.0 as usize].as_str()],
                ..c
            })
            .collect();
        classes.sort_by(|a, b| a.name.cmp(&b.name));
        let n = vertices.len();
        let mut out_classes = vec![Vec::new(); n];
        let mut in_classes = vec![Vec::new(); n];
        for (i, c) in classes.iter().enumerate() {
            out_classes[c.src.0 as usize].push(ClassId(i as u32));
            in_classes[c.dst.0 as usize].push(ClassId(i as u32));
        }
        Graph {
            vertices,
            classes,
            out_classes,
            in_classes,
        }
    }

    /// Convenience constructor for finite graphs: `(name, src, dst)` triples
    /// of multiplicity one. Panics on invalid input; intended for fixtures.
    pub fn simple(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Graph {
        let spec = GraphSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(n, s, d)| EdgeSpec::new(n, s, d, MultiplicitySpec::Count(1)))
                .collect(),
        };
        Graph::from_spec(&spec).expect("valid fixture graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertex_ids().collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| VertexId(i as u32))
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_id(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &EdgeClass {
        &self.classes[id.0 as usize]
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.classes.len() as u32).map(ClassId)
    }

    pub fn class_id(&self, name: &str) -> Option<ClassId> {
        self.classes
            .binary_search_by(|c| c.name.as_str().cmp(name))
            .ok()
            .map(|i| ClassId(i as u32))
    }

    pub fn out_classes(&self, v: VertexId) -> &[ClassId] {
        &self.out_classes[v.0 as usize]
    }

    pub fn in_classes(&self, v: VertexId) -> &[ClassId] {
        &self.in_classes[v.0 as usize]
    }

    pub fn src(&self, e: Edge) -> VertexId {
        self.class(e.class).src
    }

    pub fn dst(&self, e: Edge) -> VertexId {
        self.class(e.class).dst
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        (e.class.0 as usize) < self.classes.len()
            && self.class(e.class).multiplicity.contains(e.index)
    }

    pub fn has_omega(&self) -> bool {
        self.classes.iter().any(|c| c.multiplicity.is_omega())
    }

    /// Number of edges leaving `v`, `None` when infinite.
    pub fn out_degree(&self, v: VertexId) -> Option<u64> {
        self.out_classes(v)
            .iter()
            .try_fold(0u64, |acc, &c| match self.class(c).multiplicity {
                Multiplicity::Finite(n) => Some(acc + n),
                Multiplicity::Omega => None,
            })
    }

    /// Number of edges entering `v`, `None` when infinite.
    pub fn in_degree(&self, v: VertexId) -> Option<u64> {
        self.in_classes(v)
            .iter()
            .try_fold(0u64, |acc, &c| match self.class(c).multiplicity {
                Multiplicity::Finite(n) => Some(acc + n),
                Multiplicity::Omega => None,
            })
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        match self.out_degree(v) {
            None => VertexKind::InfiniteEmitter,
            Some(0) => VertexKind::Sink,
            Some(_) => VertexKind::Regular,
        }
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::Sink
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::Regular
    }

    pub fn is_infinite_emitter(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::InfiniteEmitter
    }

    /// Concrete edges of a class; ω-classes contribute indices `0..reps`.
    pub fn class_edges(&self, c: ClassId, reps: u64) -> impl Iterator<Item = Edge> {
        let n = match self.class(c).multiplicity {
            Multiplicity::Finite(n) => n,
            Multiplicity::Omega => reps,
        };
        (0..n).map(move |i| Edge::new(c, i))
    }

    /// All edges leaving a regular vertex. `None` for infinite emitters.
    pub fn out_edges(&self, v: VertexId) -> Option<Vec<Edge>> {
        self.out_degree(v)?;
        Some(self.out_edges_sampled(v, 0))
    }

    /// Edges leaving `v`, with `reps` representatives per ω-class.
    pub fn out_edges_sampled(&self, v: VertexId, reps: u64) -> Vec<Edge> {
        self.out_classes(v)
            .iter()
            .flat_map(|&c| self.class_edges(c, reps))
            .collect()
    }

    /// Edges entering `v`, with `reps` representatives per ω-class.
    pub fn in_edges_sampled(&self, v: VertexId, reps: u64) -> Vec<Edge> {
        self.in_classes(v)
            .iter()
            .flat_map(|&c| self.class_edges(c, reps))
            .collect()
    }

    /// All edges of the graph with `reps` representatives per ω-class.
    pub fn edges_sampled(&self, reps: u64) -> Vec<Edge> {
        self.class_ids()
            .flat_map(|c| self.class_edges(c, reps))
            .collect()
    }

    /// The special edge at a regular vertex: the least outgoing edge in the
    /// canonical edge order. Sinks and infinite emitters have none.
    pub fn special_edge(&self, v: VertexId) -> Option<Edge> {
        if !self.is_regular(v) {
            return None;
        }
        self.out_classes(v).first().map(|&c| Edge::new(c, 0))
    }

    pub fn is_special(&self, e: Edge) -> bool {
        self.special_edge(self.src(e)) == Some(e)
    }

    /// Printable edge name: the class name, with `[i]` when the class has
    /// more than one edge.
    pub fn edge_name(&self, e: Edge) -> String {
        let c = self.class(e.class);
        match c.multiplicity {
            Multiplicity::Finite(1) => c.name.clone(),
            _ => format!("{}[{}]", c.name, e.index),
        }
    }

    /// Inverse of [`Graph::edge_name`]. A bare class name is accepted for
    /// single-edge classes only.
    pub fn parse_edge(&self, name: &str) -> Option<Edge> {
        let (base, index) = match name.strip_suffix(']').and_then(|s| s.split_once('[')) {
            Some((b, i)) => (b, Some(i.trim().parse::<u64>().ok()?)),
            None => (name, None),
        };
        let c = self.class_id(base)?;
        let e = match (index, self.class(c).multiplicity) {
            (Some(i), _) => Edge::new(c, i),
            (None, Multiplicity::Finite(1)) => Edge::new(c, 0),
            (None, _) => return None,
        };
        self.contains_edge(e).then_some(e)
    }

    pub fn vertex_set_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter()
            .map(|&v| self.vertex_name(v).to_string())
            .collect()
    }

    pub fn format_vertex_set(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.vertex_set_names(set).join(","))
    }

    pub fn parse_vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, GraphError> {
        names.iter().map(|n| self.vertex(n.as_ref())).collect()
    }

    /// Every vertex and edge-class name in use.
    pub(crate) fn names(&self) -> BTreeSet<String> {
        self.vertices
            .iter()
            .cloned()
            .chain(self.classes.iter().map(|c| c.name.clone()))
            .collect()
    }
}

/// Appends primes to `base` until it is unused.
pub(crate) fn fresh_name(base: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// The shared example graphs.
pub mod fixtures {
    use super::*;

    /// One vertex `v` with a loop `c`.
    pub fn g_loop() -> Graph {
        Graph::simple(&["v"], &[("c", "v", "v")])
    }

    /// Loop `e` at `v` and an edge `f: v → w`; its Leavitt path algebra is
    /// the Jacobson algebra.
    pub fn g_toe() -> Graph {
        Graph::simple(&["v", "w"], &[("e", "v", "v"), ("f", "v", "w")])
    }

    /// One vertex with two loops `g`, `h`.
    pub fn g_rose2() -> Graph {
        Graph::simple(&["v"], &[("g", "v", "v"), ("h", "v", "v")])
    }

    /// `a: u → v`, `b: v → u`, `d: v → w`.
    pub fn g_2cyc() -> Graph {
        Graph::simple(
            &["u", "v", "w"],
            &[("a", "u", "v"), ("b", "v", "u"), ("d", "v", "w")],
        )
    }

    /// A single edge `u → v`.
    pub fn g_line() -> Graph {
        Graph::simple(&["u", "v"], &[("a", "u", "v")])
    }

    /// An infinite emitter `v` with an ω-class into the sink `h` and one
    /// ordinary edge to the sink `u`; `v` breaks `{h}`.
    pub fn g_omega() -> Graph {
        let spec = GraphSpec {
            vertices: vec!["h".into(), "u".into(), "v".into()],
            edges: vec![
                EdgeSpec::new("k", "v", "h", MultiplicitySpec::Omega),
                EdgeSpec::new("m", "v", "u", MultiplicitySpec::Count(1)),
            ],
        };
        Graph::from_spec(&spec).expect("valid fixture")
    }

    /// An infinite emitter `v` with a loop `l` and an ω-class into the sink
    /// `h`; `v ∈ B_{H(v)}`, so it carries the breaking-emitter Chen module.
    pub fn g_omega_loop() -> Graph {
        let spec = GraphSpec {
            vertices: vec!["h".into(), "v".into()],
            edges: vec![
                EdgeSpec::new("k", "v", "h", MultiplicitySpec::Omega),
                EdgeSpec::new("l", "v", "v", MultiplicitySpec::Count(1)),
            ],
        };
        Graph::from_spec(&spec).expect("valid fixture")
    }

    /// `u → v` and an ω-class from `v` to the sink `w`; `v` has
    /// `r(s⁻¹(v)) ⊆ H(v)` and carries the quotient-emitter Chen module.
    pub fn g_omega_sinkish() -> Graph {
        let spec = GraphSpec {
            vertices: vec!["u".into(), "v".into(), "w".into()],
            edges: vec![
                EdgeSpec::new("a", "u", "v", MultiplicitySpec::Count(1)),
                EdgeSpec::new("k", "v", "w", MultiplicitySpec::Omega),
            ],
        };
        Graph::from_spec(&spec).expect("valid fixture")
    }

    pub fn by_name(name: &str) -> Option<Graph> {
        Some(match name {
            "loop" => g_loop(),
            "toe" => g_toe(),
            "rose2" => g_rose2(),
            "2cyc" => g_2cyc(),
            "line" => g_line(),
            "omega" => g_omega(),
            "omega_loop" => g_omega_loop(),
            "omega_sinkish" => g_omega_sinkish(),
            _ => return None,
        })
    }

    pub const NAMES: [&str; 8] = [
        "loop",
        "toe",
        "rose2",
        "2cyc",
        "line",
        "omega",
        "omega_loop",
        "omega_sinkish",
    ];
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn kinds_in_toe() {
        let g = g_toe();
        assert_eq!(g.kind(g.vertex("v").unwrap()), VertexKind::Regular);
        assert_eq!(g.kind(g.vertex("w").unwrap()), VertexKind::Sink);
    }

    #[test]
    fn omega_class_makes_infinite_emitter() {
        let g = g_omega();
        assert_eq!(g.kind(g.vertex("v").unwrap()), VertexKind::InfiniteEmitter);
        assert!(g.has_omega());
        let k = g.class_id("k").unwrap();
        assert!(g.contains_edge(Edge::new(k, 1_000_000)));
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let spec = GraphSpec {
            vertices: vec!["v".into()],
            edges: vec![EdgeSpec::new("e", "q", "v", MultiplicitySpec::Count(1))],
        };
        assert_eq!(
            Graph::from_spec(&spec),
            Err(GraphError::DanglingEndpoint {
                edge: "e".into(),
                endpoint: "q".into()
            })
        );
    }

    #[test]
    fn duplicate_and_zero_multiplicity_collected() {
        let spec = GraphSpec {
            vertices: vec!["v".into(), "v".into()],
            edges: vec![EdgeSpec::new("e", "v", "v", MultiplicitySpec::Count(0))],
        };
        match Graph::from_spec(&spec) {
            Err(GraphError::Invalid(list)) => {
                assert!(list.contains(&GraphError::DuplicateName("v".into())));
                assert!(list.contains(&GraphError::ZeroMultiplicity("e".into())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_order_is_input_independent() {
        let a = Graph::simple(&["w", "v"], &[("f", "v", "w"), ("e", "v", "v")]);
        assert_eq!(a, g_toe());
    }

    #[test]
    fn special_edges() {
        let g = g_toe();
        let v = g.vertex("v").unwrap();
        assert_eq!(g.edge_name(g.special_edge(v).unwrap()), "e");
        assert_eq!(g.special_edge(g.vertex("w").unwrap()), None);
        let r = g_rose2();
        assert_eq!(r.edge_name(r.special_edge(VertexId(0)).unwrap()), "g");
        assert_eq!(g_omega().special_edge(g_omega().vertex("v").unwrap()), None);
    }

    #[test]
    fn edge_names_round_trip() {
        let g = g_omega();
        let k = g.class_id("k").unwrap();
        let e = Edge::new(k, 7);
        assert_eq!(g.edge_name(e), "k[7]");
        assert_eq!(g.parse_edge("k[7]"), Some(e));
        assert_eq!(g.parse_edge("k"), None);
        assert_eq!(
            g.parse_edge("m"),
            Some(Edge::new(g.class_id("m").unwrap(), 0))
        );
    }
}
