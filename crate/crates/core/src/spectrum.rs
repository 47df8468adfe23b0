//! Primitive ideals of `L_K(E)` and the Chen modules realizing them.
//!
//! A primitive ideal with vertex set `H` is of one of three types:
//!
//! - I: `I(H, B_H, f(c))` for an exclusive cycle `c` based at `u` with
//!   `M(u) = E⁰ ∖ H` and `f` irreducible;
//! - II: `I(H, B_H ∖ {u})` for `u ∈ B_H` with `M(u) = E⁰ ∖ H`;
//! - III: `I(H, B_H)` when `E ∖ (H, B_H)` is downward directed and satisfies
//!   Condition (L).

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::chen::{
    are_isomorphic, make_chen, AnnihilatorDescriptor, ChenKind, ChenModule, ChenOptions,
};
use crate::error::{GraphError, SpectrumError};
use crate::graph::{
    AdmissiblePair, Cycle, Edge, Graph, UltimatelyPeriodicPath, VertexId, VertexSet,
};
use crate::poly::{Irreducibility, LaurentPoly, Poly};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimitiveIdealDescriptor {
    /// `poly` is `None` while the polynomial is left as a parameter.
    TypeI {
        h: VertexSet,
        cycle: Cycle,
        poly: Option<Poly>,
    },
    TypeII {
        h: VertexSet,
        u: VertexId,
    },
    TypeIII {
        h: VertexSet,
    },
}

impl PrimitiveIdealDescriptor {
    pub fn h(&self) -> &VertexSet {
        match self {
            Self::TypeI { h, .. } | Self::TypeII { h, .. } | Self::TypeIII { h } => h,
        }
    }

    /// Fixes the polynomial of a type I descriptor.
    pub fn instantiate(&self, f: &Poly) -> Self {
        match self {
            Self::TypeI { h, cycle, .. } => Self::TypeI {
                h: h.clone(),
                cycle: cycle.clone(),
                poly: Some(normalize(f)),
            },
            other => other.clone(),
        }
    }

    /// The ideal described, or `None` for a parametric type I.
    pub fn ideal(&self, g: &Graph) -> Result<Option<AnnihilatorDescriptor>, GraphError> {
        let pair = AdmissiblePair::full(g, self.h().clone())?;
        Ok(Some(match self {
            Self::TypeIII { .. } => AnnihilatorDescriptor::Graded(pair),
            Self::TypeII { u, .. } => {
                let mut pair = pair;
                pair.s.remove(u);
                AnnihilatorDescriptor::Graded(pair)
            }
            Self::TypeI { poly: None, .. } => return Ok(None),
            Self::TypeI {
                cycle,
                poly: Some(f),
                ..
            } => AnnihilatorDescriptor::NonGraded {
                pair,
                cycle: cycle.clone(),
                poly: f.clone(),
            },
        }))
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            Self::TypeI { h, cycle, poly } => format!(
                "TypeI(H={}, c={}, f={})",
                g.format_vertex_set(h),
                cycle.display(g),
                poly.as_ref()
                    .map_or("parametric".to_string(), |f| f.to_string())
            ),
            Self::TypeII { h, u } => format!(
                "TypeII(H={}, u={})",
                g.format_vertex_set(h),
                g.vertex_name(*u)
            ),
            Self::TypeIII { h } => format!("TypeIII(H={})", g.format_vertex_set(h)),
        }
    }
}

fn normalize(f: &Poly) -> Poly {
    LaurentPoly::from_poly(f)
        .associate()
        .unwrap_or_else(|| f.clone())
}

fn too_large(e: GraphError) -> SpectrumError {
    match e {
        GraphError::TooLarge { size, bound } => SpectrumError::TooLarge { size, bound },
        other => SpectrumError::Graph(other),
    }
}

/// `E ∖ (H, B_H)`.
fn quotient_by(g: &Graph, h: &VertexSet) -> Result<Graph, GraphError> {
    Ok(g.quotient_graph(&AdmissiblePair::full(g, h.clone())?)?.0)
}

/// Every primitive ideal, with type I polynomials left as parameters.
/// Ordered by `H` (size, then lexicographic), then III, II, I.
pub fn enumerate_prim_ideals(g: &Graph) -> Result<Vec<PrimitiveIdealDescriptor>, SpectrumError> {
    let all = g.all_vertices();
    let cycles = g.enumerate_cycles();
    let mut out = Vec::new();
    for h in g.enumerate_hereditary_saturated().map_err(too_large)? {
        if h == all {
            continue;
        }
        let rest = g.complement(&h);
        let f = quotient_by(g, &h)?;
        if f.is_downward_directed() && f.has_condition_l() {
            out.push(PrimitiveIdealDescriptor::TypeIII { h: h.clone() });
        }
        for u in g.breaking_vertices(&h)? {
            if g.reaching(u) == rest {
                out.push(PrimitiveIdealDescriptor::TypeII { h: h.clone(), u });
            }
        }
        for c in &cycles {
            let u = c.base(g);
            if h.contains(&u) || g.reaching(u) != rest || !g.is_exclusive(c)? {
                continue;
            }
            // c must be a cycle without exits in the quotient
            let no_exit = c.vertices(g).iter().all(|&x| {
                let name = g.vertex_name(x);
                f.vertex_id(name).and_then(|y| f.out_degree(y)) == Some(1)
            });
            if no_exit {
                out.push(PrimitiveIdealDescriptor::TypeI {
                    h: h.clone(),
                    cycle: c.clone(),
                    poly: None,
                });
            }
        }
    }
    Ok(out)
}

/// Re-checks the defining conditions of a descriptor directly.
pub fn check_descriptor(g: &Graph, d: &PrimitiveIdealDescriptor) -> bool {
    let h = d.h();
    if !g.is_hereditary_saturated(h) || h.len() == g.vertex_count() {
        return false;
    }
    let rest = g.complement(h);
    let Ok(b) = g.breaking_vertices(h) else {
        return false;
    };
    match d {
        PrimitiveIdealDescriptor::TypeIII { .. } => match quotient_by(g, h) {
            Ok(f) => f.is_downward_directed() && f.has_condition_l(),
            Err(_) => false,
        },
        PrimitiveIdealDescriptor::TypeII { u, .. } => b.contains(u) && g.reaching(*u) == rest,
        PrimitiveIdealDescriptor::TypeI { cycle, poly, .. } => {
            let u = cycle.base(g);
            let vs = cycle.vertex_set(g);
            let poly_ok = poly.as_ref().is_none_or(|f| {
                f.irreducibility() != Irreducibility::Reducible && f.is_normalized()
            });
            poly_ok
                && g.is_exclusive(cycle).unwrap_or(false)
                && vs.is_disjoint(h)
                && g.reaching(u) == rest
                && vs.iter().all(|&x| {
                    // exits of c lead into H
                    g.out_edges_sampled(x, 2)
                        .iter()
                        .filter(|&&e| !h.contains(&g.dst(e)))
                        .count()
                        == 1
                })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CofinalResult {
    Sink(VertexId),
    Path(UltimatelyPeriodicPath),
}

/// For a downward directed graph with Condition (L): its unique sink, or an
/// ultimately periodic path that every vertex connects to. The path is a
/// closed walk through every edge class of the terminal strong component.
pub fn cofinal_path(f: &Graph) -> Result<CofinalResult, SpectrumError> {
    if f.vertex_count() == 0 || !f.is_downward_directed() || !f.has_condition_l() {
        return Err(SpectrumError::NotCofinal);
    }
    let sinks = f.sinks();
    if let [w] = sinks[..] {
        return Ok(CofinalResult::Sink(w));
    }
    if !sinks.is_empty() {
        return Err(SpectrumError::NotCofinal);
    }
    let all = f.all_vertices();
    let terminal = f
        .sccs()
        .into_iter()
        .find(|comp| f.reaching_set(comp) == all && f.internal_edge_count(comp) != Some(0))
        .ok_or(SpectrumError::SearchBoundExceeded)?;
    let start = *terminal.first().unwrap();
    let mut walk: Vec<Edge> = Vec::new();
    let mut at = start;
    for c in f.class_ids() {
        let class = f.class(c);
        if !terminal.contains(&class.src) || !terminal.contains(&class.dst) {
            continue;
        }
        walk.extend(shortest_path(f, &terminal, at, class.src)?);
        let e = Edge::new(c, 0);
        walk.push(e);
        at = class.dst;
    }
    walk.extend(shortest_path(f, &terminal, at, start)?);
    let bound = f.vertex_count() * (f.classes().len() + 1);
    if walk.is_empty() || walk.len() > bound {
        return Err(SpectrumError::SearchBoundExceeded);
    }
    let p = UltimatelyPeriodicPath::rational(f, walk)?;
    if let Ok(c) = Cycle::from_edges(f, p.period().to_vec()) {
        if f.is_exclusive(&c)? {
            return Err(SpectrumError::SearchBoundExceeded);
        }
    }
    Ok(CofinalResult::Path(p))
}

/// Shortest path inside `within` from `a` to `b`.
fn shortest_path(
    g: &Graph,
    within: &VertexSet,
    a: VertexId,
    b: VertexId,
) -> Result<Vec<Edge>, SpectrumError> {
    let mut pred: Vec<Option<Edge>> = vec![None; g.vertex_count()];
    let mut seen = VertexSet::from([a]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            let mut path = Vec::new();
            let mut at = b;
            while at != a {
                let e = pred[at.0 as usize].unwrap();
                path.push(e);
                at = g.src(e);
            }
            path.reverse();
            return Ok(path);
        }
        for e in g.out_edges_sampled(x, 1) {
            let y = g.dst(e);
            if within.contains(&y) && seen.insert(y) {
                pred[y.0 as usize] = Some(e);
                queue.push_back(y);
            }
        }
    }
    Err(SpectrumError::SearchBoundExceeded)
}

fn lift_edges(g: &Graph, f: &Graph, edges: &[Edge]) -> Result<Vec<Edge>, SpectrumError> {
    edges
        .iter()
        .map(|&e| {
            let name = &f.class(e.class).name;
            g.class_id(name)
                .map(|c| Edge::new(c, e.index))
                .ok_or_else(|| SpectrumError::Graph(GraphError::UnknownEdge(name.clone())))
        })
        .collect()
}

/// A Chen module whose annihilator is the given ideal; the result is
/// checked against the descriptor.
pub fn realize_chen(
    g: &Arc<Graph>,
    field: &Field,
    d: &PrimitiveIdealDescriptor,
    opts: ChenOptions,
) -> Result<ChenModule, SpectrumError> {
    let kind = match d {
        PrimitiveIdealDescriptor::TypeI { poly: None, .. } => {
            return Err(SpectrumError::NoIrreduciblePolynomial)
        }
        PrimitiveIdealDescriptor::TypeI {
            cycle,
            poly: Some(f),
            ..
        } => {
            if normalize(f) == Poly::one_minus_x(field) {
                ChenKind::Path(UltimatelyPeriodicPath::rational(g, cycle.edges().to_vec())?)
            } else {
                ChenKind::Twisted {
                    cycle: cycle.clone(),
                    poly: f.clone(),
                }
            }
        }
        PrimitiveIdealDescriptor::TypeII { u, .. } => ChenKind::BreakingEmitter(*u),
        PrimitiveIdealDescriptor::TypeIII { h } => {
            let f = quotient_by(g, h)?;
            match cofinal_path(&f)? {
                CofinalResult::Sink(w) => {
                    let v = g.vertex(f.vertex_name(w))?;
                    if g.is_sink(v) {
                        ChenKind::Sink(v)
                    } else {
                        ChenKind::QuotientEmitter(v)
                    }
                }
                CofinalResult::Path(p) => ChenKind::Path(UltimatelyPeriodicPath::new(
                    g,
                    lift_edges(g, &f, p.prefix())?,
                    lift_edges(g, &f, p.period())?,
                )?),
            }
        }
    };
    let m = make_chen(g, field, kind, opts)?;
    let expected = d.ideal(g)?.expect("instantiated");
    let found = m.annihilator()?;
    if found != expected {
        return Err(SpectrumError::MismatchedDescriptor {
            expected: expected.display(g),
            found: found.display(g),
        });
    }
    Ok(m)
}

/// `L_K(E)` is primitive exactly when the zero ideal is of type III.
pub fn is_primitive_algebra(g: &Graph) -> Result<bool, SpectrumError> {
    let f = quotient_by(g, &VertexSet::new())?;
    Ok(g.vertex_count() > 0 && f.is_downward_directed() && f.has_condition_l())
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub descriptor: String,
    pub module: String,
    pub annihilator: String,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub schema: u32,
    pub graph_vertices: usize,
    pub primitive_algebra: bool,
    pub entries: Vec<SpectrumEntry>,
    pub all_matched: bool,
    /// Distinct realized modules have distinct annihilators. `None` when
    /// some vertex is the base of two cycles, where the claim is not made.
    pub injective: Option<bool>,
    /// Type I descriptors skipped for lack of an irreducible sample.
    pub uninstantiated: Vec<String>,
}

/// Realizes every descriptor (type I once per irreducible sample) and
/// compares annihilators.
pub fn spectrum_chen_bijection_report(
    g: &Arc<Graph>,
    field: &Field,
    samples: &[Poly],
    opts: ChenOptions,
) -> Result<SpectrumReport, SpectrumError> {
    let samples: Vec<Poly> = samples
        .iter()
        .map(normalize)
        .filter(|f| match f.irreducibility() {
            Irreducibility::Irreducible => true,
            Irreducibility::Unknown => opts.assume_irreducible,
            Irreducibility::Reducible => false,
        })
        .collect();
    let mut entries = Vec::new();
    let mut realized: Vec<(ChenModule, AnnihilatorDescriptor)> = Vec::new();
    let mut uninstantiated = Vec::new();
    for d in enumerate_prim_ideals(g)? {
        let instances = match &d {
            PrimitiveIdealDescriptor::TypeI { .. } => {
                samples.iter().map(|f| d.instantiate(f)).collect()
            }
            _ => vec![d.clone()],
        };
        if instances.is_empty() {
            uninstantiated.push(d.display(g));
        }
        for d in instances {
            let (module, annihilator, matched) = match realize_chen(g, field, &d, opts) {
                Ok(m) => {
                    let ann = m.annihilator()?;
                    let line = (m.display(), ann.display(g), true);
                    realized.push((m, ann));
                    line
                }
                Err(SpectrumError::MismatchedDescriptor { found, .. }) => {
                    ("-".into(), found, false)
                }
                Err(e) => return Err(e),
            };
            entries.push(SpectrumEntry {
                descriptor: d.display(g),
                module,
                annihilator,
                matched,
            });
        }
    }
    let injective = g.one_cycle_per_vertex().then(|| {
        realized.iter().enumerate().all(|(i, (m1, a1))| {
            realized[i + 1..]
                .iter()
                .all(|(m2, a2)| are_isomorphic(m1, m2) || a1 != a2)
        })
    });
    Ok(SpectrumReport {
        schema: 1,
        graph_vertices: g.vertex_count(),
        primitive_algebra: is_primitive_algebra(g)?,
        all_matched: entries.iter().all(|e| e.matched),
        entries,
        injective,
        uninstantiated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn names(g: &Graph) -> Vec<String> {
        enumerate_prim_ideals(g)
            .unwrap()
            .iter()
            .map(|d| d.display(g))
            .collect()
    }

    #[test]
    fn fixture_spectra() {
        assert_eq!(
            names(&g_toe()),
            ["TypeIII(H={})", "TypeI(H={w}, c=e, f=parametric)"]
        );
        assert_eq!(names(&g_loop()), ["TypeI(H={}, c=c, f=parametric)"]);
        assert_eq!(names(&g_rose2()), ["TypeIII(H={})"]);
        assert_eq!(
            names(&g_omega_loop()),
            [
                "TypeIII(H={})",
                "TypeII(H={h}, u=v)",
                "TypeI(H={h}, c=l, f=parametric)"
            ]
        );
        for name in NAMES {
            let g = by_name(name).unwrap();
            for d in enumerate_prim_ideals(&g).unwrap() {
                assert!(check_descriptor(&g, &d), "{name}: {}", d.display(&g));
            }
        }
    }

    #[test]
    fn cofinal_examples() {
        let toe = g_toe();
        assert_eq!(
            cofinal_path(&toe).unwrap(),
            CofinalResult::Sink(toe.vertex("w").unwrap())
        );
        let rose = g_rose2();
        let CofinalResult::Path(p) = cofinal_path(&rose).unwrap() else {
            panic!()
        };
        assert_eq!(p, UltimatelyPeriodicPath::parse(&rose, "g h").unwrap());
        assert_eq!(cofinal_path(&g_loop()), Err(SpectrumError::NotCofinal));
    }

    #[test]
    fn realization_examples() {
        let k = Field::Rational;
        let toe = Arc::new(g_toe());
        let ds = enumerate_prim_ideals(&toe).unwrap();
        let m = realize_chen(&toe, &k, &ds[0], ChenOptions::default()).unwrap();
        assert_eq!(m.display(), "N(w)");
        assert_eq!(
            realize_chen(&toe, &k, &ds[1], ChenOptions::default()).unwrap_err(),
            SpectrumError::NoIrreduciblePolynomial
        );
        let d = ds[1].instantiate(&Poly::from_i64s(&k, &[1, 1]));
        let m = realize_chen(&toe, &k, &d, ChenOptions::default()).unwrap();
        assert_eq!(m.display(), "Vf(e; 1 + x)");
        let d = ds[1].instantiate(&Poly::from_i64s(&k, &[-1, 1]));
        assert_eq!(
            realize_chen(&toe, &k, &d, ChenOptions::default())
                .unwrap()
                .display(),
            "V(e)"
        );

        let rose = Arc::new(g_rose2());
        let d = &enumerate_prim_ideals(&rose).unwrap()[0];
        let m = realize_chen(&rose, &k, d, ChenOptions::default()).unwrap();
        assert_eq!(m.display(), "V(g h)");
        assert_eq!(
            m.annihilator().unwrap(),
            AnnihilatorDescriptor::Graded(AdmissiblePair::trivial())
        );

        let s = Arc::new(g_omega_sinkish());
        for d in enumerate_prim_ideals(&s).unwrap() {
            realize_chen(&s, &k, &d, ChenOptions::default()).unwrap();
        }
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive_algebra(&g_toe()).unwrap());
        assert!(is_primitive_algebra(&g_rose2()).unwrap());
        assert!(!is_primitive_algebra(&g_loop()).unwrap());
        let two = Graph::simple(&["a", "b"], &[("x", "a", "a"), ("y", "b", "b")]);
        assert!(!is_primitive_algebra(&two).unwrap());
    }

    #[test]
    fn bijection_reports() {
        let k = Field::Rational;
        let toe = Arc::new(g_toe());
        let samples = [
            Poly::from_i64s(&k, &[1, 1]),
            Poly::from_i64s(&k, &[1, 1, 1]),
        ];
        let r = spectrum_chen_bijection_report(&toe, &k, &samples, ChenOptions::default()).unwrap();
        assert!(r.all_matched);
        assert_eq!(r.entries.len(), 3);
        assert_eq!(r.injective, Some(true));

        let lp = Arc::new(g_loop());
        let r = spectrum_chen_bijection_report(
            &lp,
            &k,
            &[Poly::from_i64s(&k, &[1, -1, -1])],
            ChenOptions::default(),
        )
        .unwrap();
        assert!(r.all_matched);
        assert_eq!(r.entries[0].module, "Vf(c; 1 - x - x^2)");

        let rose = Arc::new(g_rose2());
        let r =
            spectrum_chen_bijection_report(&rose, &k, &samples, ChenOptions::default()).unwrap();
        assert!(r.all_matched);
        assert_eq!(r.injective, None);
    }
}
