use std::collections::BTreeSet;
use std::sync::Arc;

use super::{BasisElement, ChenKind, ChenModule};
use crate::algebra::{LpaElement, OMEGA_REPS};
use crate::error::{AlgebraError, ChenError};
use crate::graph::{
    rotate, AdmissiblePair, Cycle, Edge, Graph, Path, UltimatelyPeriodicPath, VertexId, VertexSet,
};
use crate::poly::{LaurentPoly, Poly};
use crate::scalar::Field;

/// A primitive ideal `I(H,S)` or `I(H,S,f(c))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnnihilatorDescriptor {
    Graded(AdmissiblePair),
    NonGraded {
        pair: AdmissiblePair,
        cycle: Cycle,
        poly: Poly,
    },
}

impl AnnihilatorDescriptor {
    pub fn pair(&self) -> &AdmissiblePair {
        match self {
            AnnihilatorDescriptor::Graded(p) | AnnihilatorDescriptor::NonGraded { pair: p, .. } => {
                p
            }
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, AnnihilatorDescriptor::Graded(_))
    }

    pub fn display(&self, g: &Graph) -> String {
        let p = self.pair();
        let hs = format!(
            "H={}, S={}",
            g.format_vertex_set(&p.h),
            g.format_vertex_set(&p.s)
        );
        match self {
            AnnihilatorDescriptor::Graded(_) => format!("I({hs})"),
            AnnihilatorDescriptor::NonGraded { cycle, poly, .. } => {
                format!("I({hs}, f={poly}, c={})", cycle.display(g))
            }
        }
    }

    /// Ideal generators: the vertices of `H`, `v^H` for `v ∈ S`, and `f(c)`.
    pub fn generators(
        &self,
        g: &Arc<Graph>,
        field: &Field,
    ) -> Result<Vec<(String, LpaElement)>, AlgebraError> {
        let p = self.pair();
        let mut out = Vec::new();
        for &v in &p.h {
            out.push((
                g.vertex_name(v).to_string(),
                LpaElement::vertex(g, field, v),
            ));
        }
        for &v in &p.s {
            out.push((
                format!("{}^H", g.vertex_name(v)),
                gap_element(g, field, v, &p.h),
            ));
        }
        if let AnnihilatorDescriptor::NonGraded { cycle, poly, .. } = self {
            let f = LaurentPoly::from_poly(poly);
            let at = LpaElement::poly_at_cycle(g, cycle.edges(), &f)?;
            out.push((format!("({poly})({})", cycle.display(g)), at));
        }
        Ok(out)
    }
}

/// `v^H = v - Σ e e*` over the edges from `v` with range outside `H`.
pub fn gap_element(g: &Arc<Graph>, field: &Field, v: VertexId, h: &VertexSet) -> LpaElement {
    let mut x = LpaElement::vertex(g, field, v);
    for &c in g.out_classes(v) {
        if h.contains(&g.class(c).dst) {
            continue;
        }
        for e in g.class_edges(c, u64::MAX) {
            let ee = &LpaElement::edge(g, field, e) * &LpaElement::ghost(g, field, e);
            x = &x - &ee;
        }
    }
    x
}

/// `H(p)`: the vertices that do not reach any vertex of `p`.
fn h_of_set(g: &Graph, visited: &VertexSet) -> VertexSet {
    g.complement(&g.reaching_set(visited))
}

fn path_descriptor(
    g: &Graph,
    field: &Field,
    p: &UltimatelyPeriodicPath,
) -> Result<AnnihilatorDescriptor, ChenError> {
    let pair = AdmissiblePair::full(g, h_of_set(g, &p.vertex_set(g)))?;
    if let Ok(c) = Cycle::from_edges(g, p.period().to_vec()) {
        if g.is_exclusive(&c)? {
            return Ok(AnnihilatorDescriptor::NonGraded {
                pair,
                cycle: c,
                poly: Poly::one_minus_x(field),
            });
        }
    }
    Ok(AnnihilatorDescriptor::Graded(pair))
}

impl ChenModule {
    /// The annihilator, read off from the module type.
    pub fn annihilator(&self) -> Result<AnnihilatorDescriptor, ChenError> {
        let g = self.graph();
        Ok(match self.kind() {
            ChenKind::Sink(w) => {
                AnnihilatorDescriptor::Graded(AdmissiblePair::full(g, g.h_of(*w))?)
            }
            ChenKind::QuotientEmitter(v) => {
                AnnihilatorDescriptor::Graded(AdmissiblePair::full(g, g.h_of(*v))?)
            }
            ChenKind::BreakingEmitter(v) => {
                let mut pair = AdmissiblePair::full(g, g.h_of(*v))?;
                pair.s.remove(v);
                AnnihilatorDescriptor::Graded(pair)
            }
            ChenKind::Path(p) => path_descriptor(g, self.field(), p)?,
            ChenKind::LazyPath(p) => {
                let depth = self.options().depth;
                match p.detect_period(depth)? {
                    Some(q) => path_descriptor(g, self.field(), &q)?,
                    None => return Err(ChenError::UndecidableLazyTail(depth)),
                }
            }
            ChenKind::Twisted { cycle, poly } => AnnihilatorDescriptor::NonGraded {
                pair: AdmissiblePair::full(g, h_of_set(g, &cycle.vertex_set(g)))?,
                cycle: cycle.clone(),
                poly: poly.clone(),
            },
        })
    }

    /// Basis vectors whose finite part has length at most `depth`. Infinite
    /// emitters contribute their first [`OMEGA_REPS`] edges.
    pub fn basis_up_to(&self, depth: usize) -> Result<Vec<BasisElement>, ChenError> {
        let cg = self.carrier_graph().clone();
        let mut seen = BTreeSet::new();
        let mut frontier: Vec<BasisElement> = match self.kind() {
            ChenKind::Path(p) => {
                let period = p.tail_class();
                (0..period.len())
                    .map(|k| {
                        BasisElement::Periodic(UltimatelyPeriodicPath::canonical(
                            Vec::new(),
                            rotate(&period, k),
                        ))
                    })
                    .collect()
            }
            ChenKind::Twisted { cycle, .. } => (0..cycle.len())
                .map(|k| {
                    BasisElement::Periodic(UltimatelyPeriodicPath::canonical(
                        Vec::new(),
                        rotate(cycle.edges(), k),
                    ))
                })
                .collect(),
            ChenKind::LazyPath(_) => (0..=depth)
                .map(|offset| BasisElement::Lazy {
                    prefix: Vec::new(),
                    offset,
                })
                .collect(),
            _ => vec![self.generator()],
        };
        for _ in 0..=depth {
            let mut next = Vec::new();
            for b in frontier {
                if !seen.insert(b.clone()) {
                    continue;
                }
                if self.prefix_len(&b) >= depth {
                    continue;
                }
                let src = self.source_of(&b)?;
                for e in cg.in_edges_sampled(src, OMEGA_REPS) {
                    next.push(self.prepend(&cg, e, &b)?);
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }

    fn prefix_len(&self, b: &BasisElement) -> usize {
        match b {
            BasisElement::Finite(p) => p.len(),
            BasisElement::Periodic(p) => p.prefix().len(),
            BasisElement::Lazy { prefix, .. } => prefix.len(),
        }
    }

    fn source_of(&self, b: &BasisElement) -> Result<VertexId, ChenError> {
        let cg = self.carrier_graph();
        Ok(match b {
            BasisElement::Finite(p) => p.source(),
            BasisElement::Periodic(p) => p.source(cg),
            BasisElement::Lazy { prefix, offset } => match (prefix.first(), self.kind()) {
                (Some(&e), _) => cg.src(e),
                (None, ChenKind::LazyPath(p)) => cg.src(p.edge_at(*offset, self.options().depth)?),
                _ => unreachable!(),
            },
        })
    }

    fn prepend(&self, cg: &Graph, e: Edge, b: &BasisElement) -> Result<BasisElement, ChenError> {
        Ok(match b {
            BasisElement::Finite(p) => {
                let edges: Vec<Edge> = std::iter::once(e)
                    .chain(p.edges().iter().copied())
                    .collect();
                BasisElement::Finite(Path::from_edges(cg, edges)?)
            }
            BasisElement::Periodic(p) => {
                let prefix: Vec<Edge> = std::iter::once(e)
                    .chain(p.prefix().iter().copied())
                    .collect();
                BasisElement::Periodic(UltimatelyPeriodicPath::canonical(
                    prefix,
                    p.period().to_vec(),
                ))
            }
            BasisElement::Lazy { prefix, offset } => {
                let ChenKind::LazyPath(stream) = self.kind() else {
                    unreachable!()
                };
                let mut prefix: Vec<Edge> =
                    std::iter::once(e).chain(prefix.iter().copied()).collect();
                let mut offset = *offset;
                // only an empty old prefix can be absorbed
                if prefix.len() == 1
                    && offset > 0
                    && stream.edge_at(offset - 1, self.options().depth)? == e
                {
                    prefix.clear();
                    offset -= 1;
                }
                BasisElement::Lazy { prefix, offset }
            }
        })
    }

    /// Every generator of `d` kills every basis vector of depth at most
    /// `depth`.
    pub fn verify_annihilator(&self, d: &AnnihilatorDescriptor, depth: usize) -> bool {
        let Ok(gens) = d.generators(self.graph(), self.field()) else {
            return false;
        };
        let Ok(basis) = self.basis_up_to(depth) else {
            return false;
        };
        gens.iter().all(|(_, a)| {
            basis
                .iter()
                .all(|b| matches!(self.act_basis(a, b), Ok(x) if x.is_zero()))
        })
    }
}

/// Isomorphism of Chen modules: same type and equivalent defining data.
/// Lazy paths without a detected period are only isomorphic to modules
/// built from the same stream.
pub fn are_isomorphic(m1: &ChenModule, m2: &ChenModule) -> bool {
    let same_graph = Arc::ptr_eq(m1.graph(), m2.graph()) || m1.graph() == m2.graph();
    if !same_graph || m1.field() != m2.field() {
        return false;
    }
    let periodic = |m: &ChenModule| -> Option<UltimatelyPeriodicPath> {
        match m.kind() {
            ChenKind::Path(p) => Some(p.clone()),
            ChenKind::LazyPath(p) => p.detect_period(m.options().depth).ok().flatten(),
            _ => None,
        }
    };
    match (m1.kind(), m2.kind()) {
        (ChenKind::Sink(a), ChenKind::Sink(b))
        | (ChenKind::BreakingEmitter(a), ChenKind::BreakingEmitter(b))
        | (ChenKind::QuotientEmitter(a), ChenKind::QuotientEmitter(b)) => a == b,
        (ChenKind::Path(_) | ChenKind::LazyPath(_), ChenKind::Path(_) | ChenKind::LazyPath(_)) => {
            match (periodic(m1), periodic(m2)) {
                (Some(p), Some(q)) => p.tail_equivalent(&q),
                (None, None) => match (m1.kind(), m2.kind()) {
                    (ChenKind::LazyPath(a), ChenKind::LazyPath(b)) => a == b,
                    _ => false,
                },
                _ => false,
            }
        }
        (
            ChenKind::Twisted {
                cycle: c1,
                poly: f1,
            },
            ChenKind::Twisted {
                cycle: c2,
                poly: f2,
            },
        ) => c1 == c2 && f1 == f2,
        _ => false,
    }
}
