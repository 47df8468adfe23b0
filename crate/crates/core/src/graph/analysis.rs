use std::collections::{BTreeSet, VecDeque};

use super::{Cycle, Edge, Graph, Multiplicity, VertexId, VertexSet};
use crate::error::GraphError;

/// Default vertex bound for subset enumerations.
pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

/// `(H, S)` with `H` hereditary saturated and `S ⊆ B_H`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissiblePair {
    pub h: VertexSet,
    pub s: VertexSet,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: VertexSet, s: VertexSet) -> Result<Self, GraphError> {
        if !g.is_hereditary_saturated(&h) {
            return Err(GraphError::NotAdmissible(format!(
                "{} is not hereditary saturated",
                g.format_vertex_set(&h)
            )));
        }
        let b = g.breaking_vertices(&h)?;
        if !s.is_subset(&b) {
            return Err(GraphError::NotAdmissible(format!(
                "{} is not contained in B_H = {}",
                g.format_vertex_set(&s),
                g.format_vertex_set(&b)
            )));
        }
        Ok(AdmissiblePair { h, s })
    }

    /// `(H, B_H)`.
    pub fn full(g: &Graph, h: VertexSet) -> Result<Self, GraphError> {
        let s = g.breaking_vertices(&h)?;
        Ok(AdmissiblePair { h, s })
    }

    pub fn trivial() -> Self {
        AdmissiblePair {
            h: VertexSet::new(),
            s: VertexSet::new(),
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        format!(
            "({}, {})",
            g.format_vertex_set(&self.h),
            g.format_vertex_set(&self.s)
        )
    }
}

impl Graph {
    /// Vertices reachable from `u`, including `u`.
    pub fn reachable_from(&self, u: VertexId) -> VertexSet {
        let mut seen = VertexSet::from([u]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &c in self.out_classes(x) {
                let y = self.class(c).dst;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `M(v) = {w : w ≥ v}`.
    pub fn reaching(&self, v: VertexId) -> VertexSet {
        self.reaching_set(&VertexSet::from([v]))
    }

    /// `{w : w ≥ v for some v ∈ targets}`.
    pub fn reaching_set(&self, targets: &VertexSet) -> VertexSet {
        let mut seen = targets.clone();
        let mut queue: VecDeque<VertexId> = targets.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &c in self.in_classes(x) {
                let y = self.class(c).src;
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `H(v) = E⁰ ∖ M(v)`.
    pub fn h_of(&self, v: VertexId) -> VertexSet {
        self.complement(&self.reaching(v))
    }

    pub fn complement(&self, set: &VertexSet) -> VertexSet {
        self.vertex_ids().filter(|v| !set.contains(v)).collect()
    }

    /// `u ≥ v`.
    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.reachable_from(u).contains(&v)
    }

    pub fn reaches_by_name(&self, u: &str, v: &str) -> Result<bool, GraphError> {
        Ok(self.reaches(self.vertex(u)?, self.vertex(v)?))
    }

    pub fn is_hereditary(&self, set: &VertexSet) -> bool {
        self.classes()
            .iter()
            .all(|c| !set.contains(&c.src) || set.contains(&c.dst))
    }

    pub fn is_saturated(&self, set: &VertexSet) -> bool {
        self.vertex_ids().all(|v| {
            set.contains(&v)
                || !self.is_regular(v)
                || self
                    .out_classes(v)
                    .iter()
                    .any(|&c| !set.contains(&self.class(c).dst))
        })
    }

    pub fn is_hereditary_saturated(&self, set: &VertexSet) -> bool {
        self.is_hereditary(set) && self.is_saturated(set)
    }

    pub fn hereditary_closure(&self, set: &VertexSet) -> VertexSet {
        set.iter().flat_map(|&v| self.reachable_from(v)).collect()
    }

    /// The smallest hereditary saturated set containing `set`.
    pub fn saturate(&self, set: &VertexSet) -> VertexSet {
        let mut h = self.hereditary_closure(set);
        loop {
            let add: Vec<VertexId> = self
                .vertex_ids()
                .filter(|v| {
                    !h.contains(v)
                        && self.is_regular(*v)
                        && self
                            .out_classes(*v)
                            .iter()
                            .all(|&c| h.contains(&self.class(c).dst))
                })
                .collect();
            if add.is_empty() {
                return h;
            }
            h.extend(add);
        }
    }

    fn check_bound(&self, bound: usize) -> Result<(), GraphError> {
        if self.vertex_count() > bound {
            return Err(GraphError::TooLarge {
                size: self.vertex_count(),
                bound,
            });
        }
        Ok(())
    }

    /// All hereditary saturated subsets, ordered by size and then
    /// lexicographically.
    pub fn enumerate_hereditary_saturated(&self) -> Result<Vec<VertexSet>, GraphError> {
        self.enumerate_hereditary_saturated_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn enumerate_hereditary_saturated_bounded(
        &self,
        bound: usize,
    ) -> Result<Vec<VertexSet>, GraphError> {
        self.check_bound(bound)?;
        // Every hereditary saturated T ⊋ S contains saturate(S ∪ {v}) for
        // each v ∈ T ∖ S, so growing from ∅ one vertex at a time finds all.
        let mut found = BTreeSet::from([VertexSet::new()]);
        let mut queue = VecDeque::from([VertexSet::new()]);
        while let Some(s) = queue.pop_front() {
            for v in self.vertex_ids().filter(|v| !s.contains(v)) {
                let mut t = s.clone();
                t.insert(v);
                let t = self.saturate(&t);
                if found.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<VertexSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// `B_H`: infinite emitters outside `H` emitting finitely many, but at
    /// least one, edges into `E⁰ ∖ H`.
    pub fn breaking_vertices(&self, h: &VertexSet) -> Result<VertexSet, GraphError> {
        if !self.is_hereditary_saturated(h) {
            return Err(GraphError::NotHereditarySaturated);
        }
        Ok(self
            .vertex_ids()
            .filter(|v| !h.contains(v) && self.is_infinite_emitter(*v))
            .filter(|&v| matches!(self.edges_avoiding(v, h), Some(n) if n >= 1))
            .collect())
    }

    /// Number of edges from `v` with range outside `h`; `None` if infinite.
    pub(crate) fn edges_avoiding(&self, v: VertexId, h: &VertexSet) -> Option<u64> {
        self.out_classes(v)
            .iter()
            .map(|&c| self.class(c))
            .filter(|c| !h.contains(&c.dst))
            .try_fold(0u64, |acc, c| match c.multiplicity {
                Multiplicity::Finite(n) => Some(acc + n),
                Multiplicity::Omega => None,
            })
    }

    /// Every admissible pair, grouped by `H` in enumeration order.
    pub fn enumerate_admissible_pairs(&self) -> Result<Vec<AdmissiblePair>, GraphError> {
        let mut out = Vec::new();
        for h in self.enumerate_hereditary_saturated()? {
            let b: Vec<VertexId> = self.breaking_vertices(&h)?.into_iter().collect();
            for mask in 0u64..(1u64 << b.len()) {
                let s = b
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                out.push(AdmissiblePair { h: h.clone(), s });
            }
        }
        Ok(out)
    }

    /// All simple cycles up to rotation. Parallel edges of a finite class
    /// give distinct cycles; an ω-class contributes its edge of index 0.
    pub fn enumerate_cycles(&self) -> Vec<Cycle> {
        let mut out = BTreeSet::new();
        for start in self.vertex_ids() {
            let mut path = Vec::new();
            let mut on_path = VertexSet::from([start]);
            self.cycle_dfs(start, start, &mut path, &mut on_path, &mut out);
        }
        let mut cycles: Vec<Cycle> = out.into_iter().collect();
        cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cycles
    }

    fn cycle_dfs(
        &self,
        start: VertexId,
        at: VertexId,
        path: &mut Vec<Edge>,
        on_path: &mut VertexSet,
        out: &mut BTreeSet<Cycle>,
    ) {
        for &c in self.out_classes(at) {
            let dst = self.class(c).dst;
            // the least vertex of each cycle is its DFS root
            if dst < start {
                continue;
            }
            let reps = if self.class(c).multiplicity.is_omega() {
                1
            } else {
                0
            };
            for e in self.class_edges(c, reps) {
                path.push(e);
                if dst == start {
                    out.insert(Cycle::from_edges(self, path.clone()).expect("simple cycle"));
                } else if on_path.insert(dst) {
                    self.cycle_dfs(start, dst, path, on_path, out);
                    on_path.remove(&dst);
                }
                path.pop();
            }
        }
    }

    /// Strongly connected components, each sorted, in order of least vertex.
    pub fn sccs(&self) -> Vec<VertexSet> {
        let reach: Vec<VertexSet> = self.vertex_ids().map(|v| self.reachable_from(v)).collect();
        let mut assigned = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertex_ids() {
            if assigned.contains(&v) {
                continue;
            }
            let comp: VertexSet = reach[v.0 as usize]
                .iter()
                .copied()
                .filter(|w| reach[w.0 as usize].contains(&v))
                .collect();
            assigned.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Number of edges with both ends in `set`, `None` if infinite.
    pub(crate) fn internal_edge_count(&self, set: &VertexSet) -> Option<u64> {
        self.classes()
            .iter()
            .filter(|c| set.contains(&c.src) && set.contains(&c.dst))
            .try_fold(0u64, |acc, c| match c.multiplicity {
                Multiplicity::Finite(n) => Some(acc + n),
                Multiplicity::Omega => None,
            })
    }

    fn scc_of(&self, v: VertexId) -> VertexSet {
        let fwd = self.reachable_from(v);
        let back = self.reaching(v);
        fwd.intersection(&back).copied().collect()
    }

    /// True when no vertex of `c` lies on a different cycle, i.e. the strong
    /// component of `c` has no edges besides those of `c`.
    pub fn is_exclusive(&self, c: &Cycle) -> Result<bool, GraphError> {
        Cycle::from_edges(self, c.edges().to_vec())?;
        let comp = self.scc_of(c.base(self));
        Ok(self.internal_edge_count(&comp) == Some(c.len() as u64))
    }

    /// Every vertex is the base of at most one cycle: each strong component
    /// is either acyclic or exactly one cycle.
    pub fn one_cycle_per_vertex(&self) -> bool {
        self.sccs()
            .iter()
            .all(|comp| matches!(self.internal_edge_count(comp), Some(n) if n == 0 || n == comp.len() as u64))
    }

    /// Every cycle has an exit.
    pub fn has_condition_l(&self) -> bool {
        // a strong component with extra edges gives every cycle in it an
        // exit; only single-cycle components need checking
        self.sccs().iter().all(|comp| {
            if self.internal_edge_count(comp) != Some(comp.len() as u64) {
                return true;
            }
            comp.iter().any(|&v| self.out_degree(v) != Some(1))
        })
    }

    pub fn is_downward_directed(&self) -> bool {
        let reach: Vec<VertexSet> = self.vertex_ids().map(|v| self.reachable_from(v)).collect();
        reach
            .iter()
            .enumerate()
            .all(|(i, a)| reach[i..].iter().all(|b| !a.is_disjoint(b)))
    }

    /// Vertices with no incoming edges.
    pub fn sources(&self) -> Vec<VertexId> {
        self.vertex_ids()
            .filter(|&v| self.in_classes(v).is_empty())
            .collect()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertex_ids().filter(|&v| self.is_sink(v)).collect()
    }
}
