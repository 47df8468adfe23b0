use super::{Edge, Graph, VertexId, VertexSet};
use crate::error::GraphError;

/// A finite path. The empty path sits at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: VertexId,
    edges: Vec<Edge>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    /// A nonempty path; consecutive edges must compose.
    pub fn from_edges(g: &Graph, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let first = *edges
            .first()
            .ok_or_else(|| GraphError::UnknownEdge("empty path".into()))?;
        check_composable(g, &edges)?;
        Ok(Path {
            start: g.src(first),
            edges,
        })
    }

    pub fn source(&self) -> VertexId {
        self.start
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| g.dst(e))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_closed(&self, g: &Graph) -> bool {
        !self.edges.is_empty() && self.range(g) == self.start
    }

    /// The vertices visited, source first.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        std::iter::once(self.start)
            .chain(self.edges.iter().map(|&e| g.dst(e)))
            .collect()
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.start).to_string()
        } else {
            format_edges(g, &self.edges)
        }
    }
}

pub(crate) fn check_composable(g: &Graph, edges: &[Edge]) -> Result<(), GraphError> {
    for &e in edges {
        if !g.contains_edge(e) {
            return Err(GraphError::UnknownEdge(format!(
                "{}#{}",
                e.class.0, e.index
            )));
        }
    }
    for w in edges.windows(2) {
        if g.dst(w[0]) != g.src(w[1]) {
            return Err(GraphError::NotACycle(format!(
                "{} does not continue {}",
                g.edge_name(w[1]),
                g.edge_name(w[0])
            )));
        }
    }
    Ok(())
}

/// Space-separated edge names.
pub fn format_edges(g: &Graph, edges: &[Edge]) -> String {
    edges
        .iter()
        .map(|&e| g.edge_name(e))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a sequence of edge names. Tokens are separated by whitespace or
/// `.`; a token that is not itself an edge name is split greedily into
/// edge names, so `gh` reads as `g h` when no edge is called `gh`.
pub fn parse_edges(g: &Graph, src: &str) -> Result<Vec<Edge>, GraphError> {
    let mut out = Vec::new();
    for token in src
        .split(|c: char| c.is_whitespace() || c == '.')
        .filter(|t| !t.is_empty())
    {
        if let Some(e) = g.parse_edge(token) {
            out.push(e);
            continue;
        }
        let mut rest = token;
        while !rest.is_empty() {
            let (e, len) = (1..=rest.len())
                .rev()
                .filter(|&k| rest.is_char_boundary(k))
                .find_map(|k| g.parse_edge(&rest[..k]).map(|e| (e, k)))
                .ok_or_else(|| GraphError::UnknownEdge(token.to_string()))?;
            out.push(e);
            rest = &rest[len..];
        }
    }
    Ok(out)
}

/// A cycle: a closed path visiting no vertex twice, stored as its least
/// rotation so that rotations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    edges: Vec<Edge>,
}

pub(crate) fn least_rotation(edges: &[Edge]) -> usize {
    (0..edges.len())
        .min_by(|&i, &j| {
            let a = edges[i..].iter().chain(&edges[..i]);
            let b = edges[j..].iter().chain(&edges[..j]);
            a.cmp(b)
        })
        .unwrap_or(0)
}

pub(crate) fn rotate(edges: &[Edge], k: usize) -> Vec<Edge> {
    edges[k..].iter().chain(&edges[..k]).copied().collect()
}

impl Cycle {
    pub fn from_edges(g: &Graph, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NotACycle("empty".into()));
        }
        check_composable(g, &edges)?;
        let text = format_edges(g, &edges);
        if g.dst(*edges.last().unwrap()) != g.src(edges[0]) {
            return Err(GraphError::NotACycle(format!("{text} is not closed")));
        }
        let mut seen = VertexSet::new();
        if !edges.iter().all(|&e| seen.insert(g.src(e))) {
            return Err(GraphError::NotACycle(format!("{text} repeats a vertex")));
        }
        let k = least_rotation(&edges);
        Ok(Cycle {
            edges: rotate(&edges, k),
        })
    }

    pub fn parse(g: &Graph, src: &str) -> Result<Self, GraphError> {
        Cycle::from_edges(g, parse_edges(g, src)?)
    }

    /// Edges of the canonical rotation.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertex sequence `s(e₁), …, s(eₙ)` of the canonical rotation.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.edges.iter().map(|&e| g.src(e)).collect()
    }

    pub fn vertex_set(&self, g: &Graph) -> VertexSet {
        self.edges.iter().map(|&e| g.src(e)).collect()
    }

    /// The base vertex of the canonical rotation.
    pub fn base(&self, g: &Graph) -> VertexId {
        g.src(self.edges[0])
    }

    /// The rotate based at `v`, if `v` lies on the cycle.
    pub fn based_at(&self, g: &Graph, v: VertexId) -> Option<Vec<Edge>> {
        let k = self.edges.iter().position(|&e| g.src(e) == v)?;
        Some(rotate(&self.edges, k))
    }

    pub fn has_exit(&self, g: &Graph) -> bool {
        self.edges
            .iter()
            .any(|&e| g.out_degree(g.src(e)) != Some(1))
    }

    pub fn uses_omega(&self, g: &Graph) -> bool {
        self.edges
            .iter()
            .any(|&e| g.class(e.class).multiplicity.is_omega())
    }

    pub fn display(&self, g: &Graph) -> String {
        format_edges(g, &self.edges)
    }
}

/// An infinite path `prefix · period^∞`, kept in canonical form: the period
/// is primitive and the prefix does not end with the last edge of the period.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UltimatelyPeriodicPath {
    prefix: Vec<Edge>,
    period: Vec<Edge>,
}

/// The shortest `d` with `edges = d^k`.
pub(crate) fn primitive_root(edges: &[Edge]) -> &[Edge] {
    let n = edges.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| edges[i] == edges[i - d]) {
            return &edges[..d];
        }
    }
    edges
}

impl UltimatelyPeriodicPath {
    pub fn new(g: &Graph, prefix: Vec<Edge>, period: Vec<Edge>) -> Result<Self, GraphError> {
        if period.is_empty() {
            return Err(GraphError::NotACycle("empty period".into()));
        }
        let whole: Vec<Edge> = prefix
            .iter()
            .chain(&period)
            .chain(&period[..1])
            .copied()
            .collect();
        check_composable(g, &whole)?;
        Ok(Self::canonical(prefix, period))
    }

    pub(crate) fn canonical(mut prefix: Vec<Edge>, period: Vec<Edge>) -> Self {
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
            if a != b {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UltimatelyPeriodicPath { prefix, period }
    }

    /// `c^∞` for a closed path `c`.
    pub fn rational(g: &Graph, period: Vec<Edge>) -> Result<Self, GraphError> {
        Self::new(g, Vec::new(), period)
    }

    /// Parses `"prefix; period"`; a text without `;` is a period alone.
    pub fn parse(g: &Graph, src: &str) -> Result<Self, GraphError> {
        let (prefix, period) = match src.split_once(';') {
            Some((a, b)) => (parse_edges(g, a)?, parse_edges(g, b)?),
            None => (Vec::new(), parse_edges(g, src)?),
        };
        Self::new(g, prefix, period)
    }

    pub fn prefix(&self) -> &[Edge] {
        &self.prefix
    }

    pub fn period(&self) -> &[Edge] {
        &self.period
    }

    pub fn source(&self, g: &Graph) -> VertexId {
        g.src(self.prefix.first().copied().unwrap_or(self.period[0]))
    }

    /// The `i`-th edge of the infinite path.
    pub fn edge_at(&self, i: usize) -> Edge {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// All vertices visited.
    pub fn vertex_set(&self, g: &Graph) -> VertexSet {
        self.prefix
            .iter()
            .chain(&self.period)
            .map(|&e| g.src(e))
            .collect()
    }

    /// `τ_{>n}`.
    pub fn shift(&self, n: usize) -> Self {
        let (prefix, period) = if n <= self.prefix.len() {
            (self.prefix[n..].to_vec(), self.period.clone())
        } else {
            let k = (n - self.prefix.len()) % self.period.len();
            (Vec::new(), rotate(&self.period, k))
        };
        Self::canonical(prefix, period)
    }

    /// Least rotation of the primitive period: a complete invariant of the
    /// tail-equivalence class.
    pub fn tail_class(&self) -> Vec<Edge> {
        rotate(&self.period, least_rotation(&self.period))
    }

    pub fn tail_equivalent(&self, other: &Self) -> bool {
        self.tail_class() == other.tail_class()
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.prefix.is_empty() {
            format_edges(g, &self.period)
        } else {
            format!(
                "{}; {}",
                format_edges(g, &self.prefix),
                format_edges(g, &self.period)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn cycle_rotations_compare_equal() {
        let g = g_2cyc();
        let ab = Cycle::parse(&g, "a b").unwrap();
        let ba = Cycle::parse(&g, "b a").unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.display(&g), "a b");
        assert!(ab.has_exit(&g));
    }

    #[test]
    fn non_simple_closed_path_is_rejected() {
        let g = g_rose2();
        assert!(matches!(
            Cycle::parse(&g, "g h"),
            Err(GraphError::NotACycle(_))
        ));
        assert!(Cycle::parse(&g, "g").is_ok());
    }

    #[test]
    fn greedy_edge_splitting() {
        let g = g_rose2();
        assert_eq!(
            parse_edges(&g, "gh").unwrap(),
            parse_edges(&g, "g h").unwrap()
        );
        assert!(parse_edges(&g, "gx").is_err());
    }

    #[test]
    fn periodic_canonical_form() {
        let g = g_loop();
        let a = UltimatelyPeriodicPath::parse(&g, "c c; c c").unwrap();
        let b = UltimatelyPeriodicPath::parse(&g, "c").unwrap();
        assert_eq!(a, b);
        assert!(a.prefix().is_empty());
        assert_eq!(a.period().len(), 1);
    }

    #[test]
    fn tail_equivalence_by_rotation() {
        let g = g_rose2();
        let gh = UltimatelyPeriodicPath::parse(&g, "g h").unwrap();
        let hg = UltimatelyPeriodicPath::parse(&g, "h g").unwrap();
        let gg = UltimatelyPeriodicPath::parse(&g, "g").unwrap();
        let hh = UltimatelyPeriodicPath::parse(&g, "h").unwrap();
        assert!(gh.tail_equivalent(&hg));
        assert_eq!(gh.shift(1), hg);
        assert!(!gg.tail_equivalent(&hh));
        assert_eq!(
            UltimatelyPeriodicPath::parse(&g, "h; g h")
                .unwrap()
                .prefix()
                .len(),
            0
        );
    }
}
