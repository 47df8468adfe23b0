//! Finite-dimensional modules over the path algebra of ghost edges.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::StructureError;
use crate::graph::{Cycle, Edge, Graph, VertexId, VertexSet};
use crate::scalar::{Field, Scalar};

/// Exhaustive simplicity checks enumerate at most this many vectors.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// A dense matrix with exact entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut basis = Echelon::default();
        (0..self.rows)
            .filter(|&i| basis.insert((0..self.cols).map(|j| self.get(i, j).clone()).collect()))
            .count()
    }

    pub fn display(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// Row echelon basis of a growing subspace.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x - &(&c * r);
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero pivot");
        let v: Vec<Scalar> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let c = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                *x = &*x - &(&c * r);
            }
        }
        self.rows.push((pivot, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// A representation of the reversed path algebra: a space `M_w` for each
/// vertex and a map `Φ_{α*}: M_{r(α)} → M_{s(α)}` for each edge. Edges
/// without a stored map act by zero.
#[derive(Clone, Debug)]
pub struct FinDimModule {
    graph: Arc<Graph>,
    field: Field,
    dims: Vec<usize>,
    maps: BTreeMap<Edge, Matrix>,
}

impl FinDimModule {
    pub fn new(graph: &Arc<Graph>, field: &Field, dims: Vec<usize>) -> Self {
        assert_eq!(dims.len(), graph.vertex_count());
        FinDimModule {
            graph: graph.clone(),
            field: field.clone(),
            dims,
            maps: BTreeMap::new(),
        }
    }

    /// Sets `Φ_{α*}`; the shape must be `dim M_{s(α)} × dim M_{r(α)}`.
    pub fn set_map(&mut self, e: Edge, m: Matrix) {
        let g = &self.graph;
        assert_eq!(
            (m.rows, m.cols),
            (
                self.dims[g.src(e).0 as usize],
                self.dims[g.dst(e).0 as usize]
            )
        );
        if m.is_zero() {
            self.maps.remove(&e);
        } else {
            self.maps.insert(e, m);
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim_at(&self, v: VertexId) -> usize {
        self.dims[v.0 as usize]
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `Φ_{α*}`, or a zero matrix of the right shape.
    pub fn map(&self, e: Edge) -> Matrix {
        let g = &self.graph;
        self.maps.get(&e).cloned().unwrap_or_else(|| {
            Matrix::zeros(&self.field, self.dim_at(g.src(e)), self.dim_at(g.dst(e)))
        })
    }

    pub fn rank_of(&self, e: Edge) -> usize {
        self.maps.get(&e).map_or(0, Matrix::rank)
    }

    /// Edges with a nonzero map.
    pub fn support_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.maps.keys().copied()
    }

    pub fn direct_sum(&self, other: &FinDimModule) -> FinDimModule {
        assert!(Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph);
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let mut out = FinDimModule::new(&self.graph, &self.field, dims);
        let edges: Vec<Edge> = self.maps.keys().chain(other.maps.keys()).copied().collect();
        for e in edges {
            let (a, b) = (self.map(e), other.map(e));
            let mut m = Matrix::zeros(&self.field, a.rows + b.rows, a.cols + b.cols);
            for i in 0..a.rows {
                for j in 0..a.cols {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
                }
            }
            out.set_map(e, m);
        }
        out
    }

    fn offset(&self, v: VertexId) -> usize {
        self.dims[..v.0 as usize].iter().sum()
    }

    fn project(&self, x: &[Scalar], v: VertexId) -> Vec<Scalar> {
        let (lo, hi) = (self.offset(v), self.offset(v) + self.dim_at(v));
        x.iter()
            .enumerate()
            .map(|(i, c)| {
                if (lo..hi).contains(&i) {
                    c.clone()
                } else {
                    self.field.zero()
                }
            })
            .collect()
    }

    fn apply_ghost(&self, e: Edge, m: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
        let g = &self.graph;
        let (from, to) = (self.offset(g.dst(e)), self.offset(g.src(e)));
        let mut out = vec![self.field.zero(); x.len()];
        for i in 0..m.rows {
            let mut acc = self.field.zero();
            for j in 0..m.cols {
                acc = &acc + &(m.get(i, j) * &x[from + j]);
            }
            out[to + i] = acc;
        }
        out
    }

    /// Dimension of the submodule generated by `x`.
    pub fn generated_dim(&self, x: &[Scalar]) -> usize {
        let mut span = Echelon::default();
        let mut queue = VecDeque::new();
        if span.insert(x.to_vec()) {
            queue.push_back(x.to_vec());
        }
        let support: Vec<VertexId> = self
            .graph
            .vertex_ids()
            .filter(|&v| self.dim_at(v) > 0)
            .collect();
        while let Some(y) = queue.pop_front() {
            let images = support
                .iter()
                .map(|&v| self.project(&y, v))
                .chain(self.maps.iter().map(|(&e, m)| self.apply_ghost(e, m, &y)));
            for z in images {
                if span.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        span.dim()
    }

    /// The basis vector of the one-dimensional space at `v`.
    fn unit(&self, v: VertexId) -> Vec<Scalar> {
        let mut x = vec![self.field.zero(); self.dim()];
        x[self.offset(v)] = self.field.one();
        x
    }

    pub fn report(&self) -> FinDimReport {
        let g = &self.graph;
        FinDimReport {
            field: self.field.to_string(),
            dimension: self.dim(),
            dims: g
                .vertex_ids()
                .filter(|&v| self.dim_at(v) > 0)
                .map(|v| (g.vertex_name(v).to_string(), self.dim_at(v)))
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|(&e, m)| (format!("{}*", g.edge_name(e)), m.display()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FinDimReport {
    pub field: String,
    pub dimension: usize,
    pub dims: BTreeMap<String, usize>,
    pub maps: BTreeMap<String, String>,
}

/// The simple module attached to two distinct cycles `gc`, `hc` through
/// `v`: a line `z_u` at each vertex `u` of either cycle, and each ghost edge
/// of either cycle sending the line at its range to the line at its source.
pub fn build_counterexample_module(
    g: &Arc<Graph>,
    v: VertexId,
    gc: &Cycle,
    hc: &Cycle,
    field: &Field,
) -> Result<FinDimModule, StructureError> {
    let bad = || StructureError::NotBothBasedAtV(g.vertex_name(v).to_string());
    if gc == hc {
        return Err(bad());
    }
    let alpha = gc.based_at(g, v).ok_or_else(bad)?;
    let beta = hc.based_at(g, v).ok_or_else(bad)?;
    let support: VertexSet = gc.vertex_set(g).union(&hc.vertex_set(g)).copied().collect();
    let dims = g
        .vertex_ids()
        .map(|u| usize::from(support.contains(&u)))
        .collect();
    let mut m = FinDimModule::new(g, field, dims);
    for &e in alpha.iter().chain(&beta) {
        m.set_map(e, Matrix::identity(field, 1));
    }
    Ok(m)
}

/// The finite-dimensional module spanned by the rotates of a cycle `q`:
/// one line per vertex of `q`, each ghost edge of `q` shifting to the next
/// rotate, every other edge acting by zero.
pub fn rotate_module(g: &Arc<Graph>, q: &Cycle, field: &Field) -> FinDimModule {
    let on = q.vertex_set(g);
    let dims = g
        .vertex_ids()
        .map(|u| usize::from(on.contains(&u)))
        .collect();
    let mut m = FinDimModule::new(g, field, dims);
    for &e in q.edges() {
        m.set_map(e, Matrix::identity(field, 1));
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicityMode {
    Exhaustive,
    Constructive,
}

impl fmt::Display for SimplicityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplicityMode::Exhaustive => "exhaustive",
            SimplicityMode::Constructive => "constructive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityCheck {
    pub simple: bool,
    pub mode: SimplicityMode,
    /// Nonzero vectors (exhaustive) or vertex lines (constructive) examined.
    pub checked: u64,
}

/// Exhaustive mode over small prime fields, the constructive test otherwise.
pub fn is_simple_findim(m: &FinDimModule) -> Result<SimplicityCheck, StructureError> {
    match exhaustive_size(m) {
        Some(n) if n <= EXHAUSTIVE_LIMIT => is_simple_exhaustive(m),
        _ => is_simple_constructive(m),
    }
}

fn exhaustive_size(m: &FinDimModule) -> Option<u64> {
    let Field::Prime(p) = m.field() else {
        return None;
    };
    p.checked_pow(m.dim() as u32)
}

/// Every nonzero vector generates `M`. Vectors are taken up to scalars
/// (first nonzero coordinate one) and split across worker threads.
pub fn is_simple_exhaustive(m: &FinDimModule) -> Result<SimplicityCheck, StructureError> {
    let Field::Prime(p) = *m.field() else {
        return Err(StructureError::TooLargeForExhaustive(format!(
            "infinitely many over {}",
            m.field()
        )));
    };
    let d = m.dim();
    let total = match exhaustive_size(m) {
        Some(n) if n <= EXHAUSTIVE_LIMIT => n,
        _ => return Err(StructureError::TooLargeForExhaustive(format!("{p}^{d}"))),
    };
    if d == 0 {
        return Ok(SimplicityCheck {
            simple: false,
            mode: SimplicityMode::Exhaustive,
            checked: 0,
        });
    }
    let field = m.field().clone();
    let decode = |mut k: u64| -> Vec<Scalar> {
        (0..d)
            .map(|_| {
                let x = field.from_i64((k % p) as i64);
                k /= p;
                x
            })
            .collect()
    };
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(8) as u64;
    let chunk = total.div_ceil(workers);
    let simple = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let decode = &decode;
                s.spawn(move || {
                    let lo = (w * chunk).max(1);
                    let hi = ((w + 1) * chunk).min(total);
                    (lo..hi).all(|k| {
                        let x = decode(k);
                        let lead = x.iter().find(|c| !c.is_zero()).expect("k > 0");
                        !lead.is_one() || m.generated_dim(&x) == d
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .all(|h| h.join().expect("worker panicked"))
    });
    Ok(SimplicityCheck {
        simple,
        mode: SimplicityMode::Exhaustive,
        checked: total - 1,
    })
}

/// For modules with vertex spaces of dimension at most one: any nonzero
/// vector projects onto some line `z_u`, so `M` is simple exactly when a
/// word of nonzero ghost maps carries every `z_u` onto the anchor line and
/// the anchor line generates `M`.
pub fn is_simple_constructive(m: &FinDimModule) -> Result<SimplicityCheck, StructureError> {
    let g = m.graph();
    if g.vertex_ids().any(|v| m.dim_at(v) > 1) {
        return Err(StructureError::NotConstructive);
    }
    let support: Vec<VertexId> = g.vertex_ids().filter(|&v| m.dim_at(v) == 1).collect();
    let Some(&anchor) = support.first() else {
        return Ok(SimplicityCheck {
            simple: false,
            mode: SimplicityMode::Constructive,
            checked: 0,
        });
    };
    // Φ_{α*} ≠ 0 moves the line at r(α) onto the line at s(α); search
    // backwards from the anchor
    let mut reached = VertexSet::from([anchor]);
    let mut queue = VecDeque::from([anchor]);
    while let Some(x) = queue.pop_front() {
        for e in m.support_edges().filter(|&e| g.src(e) == x) {
            if reached.insert(g.dst(e)) {
                queue.push_back(g.dst(e));
            }
        }
    }
    let simple = reached.len() == support.len() && m.generated_dim(&m.unit(anchor)) == m.dim();
    Ok(SimplicityCheck {
        simple,
        mode: SimplicityMode::Constructive,
        checked: support.len() as u64,
    })
}

/// What separates `M` from one rotate module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Witness {
    /// `dim M_v` differs.
    Dimension {
        vertex: String,
        module: usize,
        cycle_module: usize,
    },
    /// `rank Φ_{α*}` differs.
    Rank {
        edge: String,
        module: usize,
        cycle_module: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleComparison {
    pub cycle: String,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinctionReport {
    pub dimension: usize,
    pub comparisons: Vec<CycleComparison>,
    /// No cycle has as many vertices as `dim M`; dimension alone separates.
    pub vacuous: bool,
    pub all_distinguished: bool,
}

/// Compares `M` with the rotate module of every cycle of matching length,
/// first by vertex dimensions, then by ghost-edge ranks.
pub fn distinguish_from_cycle_modules(g: &Arc<Graph>, m: &FinDimModule) -> DistinctionReport {
    let mut comparisons = Vec::new();
    for q in g
        .enumerate_cycles()
        .into_iter()
        .filter(|q| q.len() == m.dim())
    {
        let n = rotate_module(g, &q, m.field());
        let by_dim = g
            .vertex_ids()
            .find(|&v| m.dim_at(v) != n.dim_at(v))
            .map(|v| Witness::Dimension {
                vertex: g.vertex_name(v).to_string(),
                module: m.dim_at(v),
                cycle_module: n.dim_at(v),
            });
        let witness = by_dim.or_else(|| {
            g.edges_sampled(1)
                .into_iter()
                .find(|&e| m.rank_of(e) != n.rank_of(e))
                .map(|e| Witness::Rank {
                    edge: g.edge_name(e),
                    module: m.rank_of(e),
                    cycle_module: n.rank_of(e),
                })
        });
        comparisons.push(CycleComparison {
            cycle: q.display(g),
            witness,
        });
    }
    DistinctionReport {
        dimension: m.dim(),
        vacuous: comparisons.is_empty(),
        all_distinguished: comparisons.iter().all(|c| c.witness.is_some()),
        comparisons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn two_two_cycles() -> Arc<Graph> {
        Arc::new(Graph::simple(
            &["a", "b", "v"],
            &[
                ("p", "v", "a"),
                ("q", "a", "v"),
                ("r", "v", "b"),
                ("s", "b", "v"),
            ],
        ))
    }

    fn rose_module(field: &Field) -> (Arc<Graph>, FinDimModule) {
        let g = Arc::new(g_rose2());
        let v = g.vertex("v").unwrap();
        let gc = Cycle::parse(&g, "g").unwrap();
        let hc = Cycle::parse(&g, "h").unwrap();
        let m = build_counterexample_module(&g, v, &gc, &hc, field).unwrap();
        (g, m)
    }

    #[test]
    fn rose_module_shape() {
        let k = Field::Rational;
        let (g, m) = rose_module(&k);
        assert_eq!(m.dim(), 1);
        for name in ["g", "h"] {
            assert_eq!(m.map(g.parse_edge(name).unwrap()), Matrix::identity(&k, 1));
        }
        assert_eq!(m.report().maps["h*"], "[[1]]");
    }

    #[test]
    fn shared_vertex_module_has_dim_three() {
        let g = two_two_cycles();
        let v = g.vertex("v").unwrap();
        let gc = Cycle::parse(&g, "p q").unwrap();
        let hc = Cycle::parse(&g, "r s").unwrap();
        let m = build_counterexample_module(&g, v, &gc, &hc, &Field::Rational).unwrap();
        assert_eq!(m.dim(), 3);
        // going once around either cycle returns to the line at v
        for c in [&gc, &hc] {
            let mut x = m.unit(v);
            for &e in c.based_at(&g, v).unwrap().iter().rev() {
                x = m.apply_ghost(e, &m.map(e), &x);
            }
            assert_eq!(x, m.unit(v));
        }
        assert_eq!(
            build_counterexample_module(&g, v, &gc, &gc, &Field::Rational).unwrap_err(),
            StructureError::NotBothBasedAtV("v".into())
        );
        let a = g.vertex("a").unwrap();
        assert!(build_counterexample_module(&g, a, &gc, &hc, &Field::Rational).is_err());
    }

    #[test]
    fn simplicity_checks() {
        let gf3 = Field::prime(3).unwrap();
        let (_, m) = rose_module(&gf3);
        let check = is_simple_findim(&m).unwrap();
        assert_eq!(
            (check.simple, check.mode, check.checked),
            (true, SimplicityMode::Exhaustive, 2)
        );
        let sum = m.direct_sum(&m);
        assert!(!is_simple_exhaustive(&sum).unwrap().simple);
        assert_eq!(
            is_simple_constructive(&sum),
            Err(StructureError::NotConstructive)
        );

        let g = two_two_cycles();
        let v = g.vertex("v").unwrap();
        let gf2 = Field::prime(2).unwrap();
        let m = build_counterexample_module(
            &g,
            v,
            &Cycle::parse(&g, "p q").unwrap(),
            &Cycle::parse(&g, "r s").unwrap(),
            &gf2,
        )
        .unwrap();
        let check = is_simple_exhaustive(&m).unwrap();
        assert!(check.simple);
        assert_eq!(check.checked, 7);
        assert!(is_simple_constructive(&m).unwrap().simple);
        let (_, mq) = rose_module(&Field::Rational);
        assert_eq!(
            is_simple_findim(&mq).unwrap().mode,
            SimplicityMode::Constructive
        );
        assert!(matches!(
            is_simple_exhaustive(&mq),
            Err(StructureError::TooLargeForExhaustive(_))
        ));
    }

    #[test]
    fn witnesses_against_cycle_modules() {
        let (g, m) = rose_module(&Field::Rational);
        let report = distinguish_from_cycle_modules(&g, &m);
        assert!(!report.vacuous && report.all_distinguished);
        let w: Vec<_> = report
            .comparisons
            .iter()
            .map(|c| (c.cycle.clone(), c.witness.clone().unwrap()))
            .collect();
        assert_eq!(
            w,
            [
                (
                    "g".to_string(),
                    Witness::Rank {
                        edge: "h".into(),
                        module: 1,
                        cycle_module: 0
                    }
                ),
                (
                    "h".to_string(),
                    Witness::Rank {
                        edge: "g".into(),
                        module: 1,
                        cycle_module: 0
                    }
                ),
            ]
        );
        let g2 = two_two_cycles();
        let m2 = build_counterexample_module(
            &g2,
            g2.vertex("v").unwrap(),
            &Cycle::parse(&g2, "p q").unwrap(),
            &Cycle::parse(&g2, "r s").unwrap(),
            &Field::Rational,
        )
        .unwrap();
        let report = distinguish_from_cycle_modules(&g2, &m2);
        assert!(report.vacuous && report.all_distinguished);
    }

    #[test]
    fn ranks() {
        let k = Field::Rational;
        let mut m = Matrix::zeros(&k, 2, 3);
        m.set(0, 0, k.one());
        m.set(1, 0, k.from_i64(2));
        assert_eq!(m.rank(), 1);
        m.set(1, 2, k.one());
        assert_eq!(m.rank(), 2);
        assert_eq!(m.display(), "[[1, 0, 0], [2, 0, 1]]");
    }
}
