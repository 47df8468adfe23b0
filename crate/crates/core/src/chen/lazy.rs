//! Infinite paths given by an edge stream, read on demand.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::ChenError;
use crate::graph::{Edge, Graph, UltimatelyPeriodicPath};

struct StreamState {
    source: Box<dyn Iterator<Item = Edge> + Send>,
    buf: Vec<Edge>,
    ended: bool,
}

struct EdgeStream {
    name: String,
    state: Mutex<StreamState>,
}

/// A possibly non-periodic infinite path. Edges are pulled from the source
/// iterator at most once and memoized, so clones share one buffer and every
/// reader sees the same prefix.
#[derive(Clone)]
pub struct LazyPath {
    stream: Arc<EdgeStream>,
}

impl fmt::Debug for LazyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazyPath({})", self.stream.name)
    }
}

impl PartialEq for LazyPath {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.stream, &other.stream)
    }
}

impl Eq for LazyPath {}

impl LazyPath {
    pub fn from_iter(name: &str, source: impl Iterator<Item = Edge> + Send + 'static) -> Self {
        LazyPath {
            stream: Arc::new(EdgeStream {
                name: name.to_string(),
                state: Mutex::new(StreamState {
                    source: Box::new(source),
                    buf: Vec::new(),
                    ended: false,
                }),
            }),
        }
    }

    /// `g h² g h³ g h⁴ ⋯`, which is not tail-equivalent to any rational path.
    pub fn tower(g: Edge, h: Edge) -> Self {
        let source =
            (2usize..).flat_map(move |n| std::iter::once(g).chain(std::iter::repeat_n(h, n)));
        Self::from_iter("gh-tower", source)
    }

    /// Built-in streams by name. `gh-tower` uses the first two loops found
    /// at a single vertex.
    pub fn builtin(g: &Graph, name: &str) -> Result<Self, ChenError> {
        match name {
            "gh-tower" => {
                for v in g.vertex_ids() {
                    let loops: Vec<Edge> = g
                        .out_edges_sampled(v, 1)
                        .into_iter()
                        .filter(|&e| g.dst(e) == v)
                        .collect();
                    if loops.len() >= 2 {
                        return Ok(Self::tower(loops[0], loops[1]));
                    }
                }
                Err(ChenError::InvalidPath(
                    "gh-tower needs a vertex with two loops".into(),
                ))
            }
            _ => Err(ChenError::InvalidPath(format!("unknown stream '{name}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.stream.name
    }

    /// Edge `i`, or `None` if the stream ends first.
    pub fn get(&self, i: usize) -> Option<Edge> {
        let mut st = self.stream.state.lock().unwrap_or_else(|e| e.into_inner());
        while st.buf.len() <= i && !st.ended {
            match st.source.next() {
                Some(e) => st.buf.push(e),
                None => st.ended = true,
            }
        }
        st.buf.get(i).copied()
    }

    /// Edge `i` under an inspection bound.
    pub fn edge_at(&self, i: usize, depth: usize) -> Result<Edge, ChenError> {
        if i >= depth {
            return Err(ChenError::LazyDepthExceeded(depth));
        }
        self.get(i)
            .ok_or_else(|| ChenError::InvalidPath(format!("stream {} ended at {i}", self.name())))
    }

    pub fn take(&self, n: usize) -> Result<Vec<Edge>, ChenError> {
        (0..n).map(|i| self.edge_at(i, n)).collect()
    }

    /// Checks that the first `depth` edges compose.
    pub fn validate(&self, g: &Graph, depth: usize) -> Result<(), ChenError> {
        let edges = self.take(depth)?;
        for &e in &edges {
            if !g.contains_edge(e) {
                return Err(ChenError::InvalidPath(format!(
                    "stream {} leaves the graph",
                    self.name()
                )));
            }
        }
        for (i, w) in edges.windows(2).enumerate() {
            if g.dst(w[0]) != g.src(w[1]) {
                return Err(ChenError::InvalidPath(format!(
                    "stream {} breaks at edge {}",
                    self.name(),
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Looks for `prefix · period^∞` matching the first `depth` edges with
    /// a pre-period of at most `depth / 2` and at least two full periods in
    /// the window. `None` means no period was found.
    pub fn detect_period(&self, depth: usize) -> Result<Option<UltimatelyPeriodicPath>, ChenError> {
        let w = self.take(depth)?;
        for pre in 0..=depth / 2 {
            let rest = &w[pre..];
            for per in 1..=rest.len() / 2 {
                if (per..rest.len()).all(|i| rest[i] == rest[i - per]) {
                    return Ok(Some(UltimatelyPeriodicPath::canonical(
                        w[..pre].to_vec(),
                        rest[..per].to_vec(),
                    )));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn tower_prefix() {
        let g = g_rose2();
        let p = LazyPath::builtin(&g, "gh-tower").unwrap();
        let text: Vec<String> = p
            .take(12)
            .unwrap()
            .into_iter()
            .map(|e| g.edge_name(e))
            .collect();
        assert_eq!(text.join(""), "ghhghhhghhhh");
        p.validate(&g, 40).unwrap();
        assert_eq!(p.edge_at(50, 50), Err(ChenError::LazyDepthExceeded(50)));
    }

    #[test]
    fn tower_is_not_periodic_at_depth_50() {
        let g = g_rose2();
        let p = LazyPath::builtin(&g, "gh-tower").unwrap();
        assert_eq!(p.detect_period(50).unwrap(), None);
    }

    #[test]
    fn eventually_periodic_stream_is_detected() {
        let g = g_toe();
        let e = g.parse_edge("e").unwrap();
        let p = LazyPath::from_iter("e-forever", std::iter::repeat(e));
        let found = p.detect_period(10).unwrap().unwrap();
        assert_eq!(found, UltimatelyPeriodicPath::parse(&g, "e").unwrap());
        assert!(LazyPath::builtin(&g, "gh-tower").is_err());
    }

    #[test]
    fn shared_buffer_across_threads() {
        let g = g_rose2();
        let p = LazyPath::builtin(&g, "gh-tower").unwrap();
        let handles: Vec<_> = (0..4)
            .map(|k| {
                let q = p.clone();
                std::thread::spawn(move || q.take(20 + k).unwrap())
            })
            .collect();
        let expected = p.take(23).unwrap();
        for h in handles {
            let got = h.join().unwrap();
            assert_eq!(got[..], expected[..got.len()]);
        }
    }
}
