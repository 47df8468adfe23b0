use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use super::{same_graph, LpaElement, Monomial};
use crate::error::AlgebraError;
use crate::graph::{AdmissiblePair, ClassTerm, Edge, GeneratorTable, Graph, VertexId, VertexSet};
use crate::scalar::{Field, Scalar};

/// Representatives checked per ω-class. Images are index-uniform, so two
/// indices cover both the equal and the distinct case of every relation.
pub const OMEGA_REPS: u64 = 2;

/// Images of the generators of `source` in `L_K(target)`. The edge of
/// index `i` in a class maps to `Σ λ · prefix · (class', i)`; ghost edges
/// map to the adjoint.
#[derive(Clone, Debug)]
pub struct GeneratorImages {
    source: Arc<Graph>,
    target: Arc<Graph>,
    field: Field,
    vertices: Vec<LpaElement>,
    classes: Vec<Vec<(Scalar, ClassTerm)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCertificate {
    pub relations_checked: usize,
}

impl GeneratorImages {
    pub fn from_table(
        source: &Arc<Graph>,
        target: &Arc<Graph>,
        field: &Field,
        table: &GeneratorTable,
    ) -> Self {
        GeneratorImages {
            source: source.clone(),
            target: target.clone(),
            field: field.clone(),
            vertices: table
                .vertices
                .iter()
                .map(|vs| LpaElement::vertex_sum(target, field, vs.iter().copied()))
                .collect(),
            classes: table
                .classes
                .iter()
                .map(|ts| ts.iter().map(|t| (field.one(), t.clone())).collect())
                .collect(),
        }
    }

    pub fn identity(g: &Arc<Graph>, field: &Field) -> Self {
        Self::from_table(g, g, field, &GeneratorTable::identity(g))
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Replaces the image of a vertex.
    pub fn set_vertex(&mut self, v: VertexId, image: LpaElement) {
        self.vertices[v.0 as usize] = image;
    }

    /// Replaces the image template of the class of `e`.
    pub fn set_class(&mut self, class: crate::graph::ClassId, terms: Vec<(Scalar, ClassTerm)>) {
        self.classes[class.0 as usize] = terms;
    }

    pub fn vertex_image(&self, v: VertexId) -> &LpaElement {
        &self.vertices[v.0 as usize]
    }

    pub fn edge_image(&self, e: Edge) -> LpaElement {
        let mut out = LpaElement::zero(&self.target, &self.field);
        for (c, t) in &self.classes[e.class.0 as usize] {
            let mut path = t.prefix.clone();
            path.push(Edge::new(t.class, e.index));
            let p = LpaElement::path(&self.target, &self.field, &path);
            out = &out + &p.scale(c).expect("same field");
        }
        out
    }

    pub fn ghost_image(&self, e: Edge) -> LpaElement {
        self.edge_image(e).star()
    }

    /// Extends the generator images multiplicatively and linearly.
    pub fn apply(&self, a: &LpaElement) -> Result<LpaElement, AlgebraError> {
        if !same_graph(a.graph(), &self.source) {
            return Err(AlgebraError::GraphMismatch);
        }
        if *a.field() != self.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                a.field().to_string(),
            ));
        }
        let mut out = LpaElement::zero(&self.target, &self.field);
        for (m, c) in a.terms() {
            let img = self.monomial_image(m);
            out = &out + &img.scale(c)?;
        }
        Ok(out)
    }

    fn monomial_image(&self, m: &Monomial) -> LpaElement {
        if m.p().is_empty() && m.q().is_empty() {
            return self.vertex_image(m.end()).clone();
        }
        let word = |edges: &[Edge]| {
            edges
                .iter()
                .map(|&e| self.edge_image(e))
                .reduce(|a, b| &a * &b)
        };
        match (word(m.p()), word(m.q())) {
            (Some(p), Some(q)) => &p * &q.star(),
            (Some(p), None) => p,
            (None, Some(q)) => q.star(),
            (None, None) => unreachable!(),
        }
    }

    /// Checks that every defining relation of `L(source)` maps to zero:
    /// orthogonal idempotents, `s(e)e = e = er(e)`, `r(e)e* = e* = e*s(e)`,
    /// CK1 for all edge pairs and CK2 at regular vertices.
    pub fn verify(&self) -> Result<HomCertificate, Vec<Violation>> {
        let src = &self.source;
        let mut violations = Vec::new();
        let mut checked = 0usize;
        let mut check = |name: String, lhs: LpaElement, rhs: &LpaElement| {
            checked += 1;
            let residual = &lhs - rhs;
            if !residual.is_zero() {
                violations.push(Violation {
                    relation: name,
                    residual: residual.display(),
                });
            }
        };
        let zero = LpaElement::zero(&self.target, &self.field);
        for v in src.vertex_ids() {
            for w in src.vertex_ids() {
                let prod = self.vertex_image(v) * self.vertex_image(w);
                let expect = if v == w {
                    self.vertex_image(v).clone()
                } else {
                    zero.clone()
                };
                check(
                    format!("{} {}", src.vertex_name(v), src.vertex_name(w)),
                    prod,
                    &expect,
                );
            }
        }
        let edges = src.edges_sampled(OMEGA_REPS);
        for &e in &edges {
            let name = src.edge_name(e);
            let x = self.edge_image(e);
            let xs = x.star();
            let s = self.vertex_image(src.src(e));
            let r = self.vertex_image(src.dst(e));
            check(format!("s({name}) {name}"), s * &x, &x);
            check(format!("{name} r({name})"), &x * r, &x);
            check(format!("r({name}) {name}*"), r * &xs, &xs);
            check(format!("{name}* s({name})"), &xs * s, &xs);
            for &f in &edges {
                let y = self.edge_image(f);
                let expect = if e == f { r.clone() } else { zero.clone() };
                check(
                    format!("CK1({name}*, {})", src.edge_name(f)),
                    &xs * &y,
                    &expect,
                );
            }
        }
        for v in src.vertex_ids().filter(|&v| src.is_regular(v)) {
            let mut sum = zero.clone();
            for e in src.out_edges(v).unwrap() {
                let x = self.edge_image(e);
                sum = &sum + &(&x * &x.star());
            }
            check(
                format!("CK2({})", src.vertex_name(v)),
                sum,
                self.vertex_image(v),
            );
        }
        if violations.is_empty() {
            Ok(HomCertificate {
                relations_checked: checked,
            })
        } else {
            Err(violations)
        }
    }
}

/// The quotient map `L(E) → L(E∖(H,S))` on generators: `H` and edges into
/// `H` vanish, `v ↦ v + v'` and `e ↦ e + e'` where primed copies exist.
pub fn quotient_hom(
    g: &Arc<Graph>,
    field: &Field,
    pair: &AdmissiblePair,
) -> Result<GeneratorImages, AlgebraError> {
    let (f, table) = g.quotient_graph(pair)?;
    Ok(GeneratorImages::from_table(g, &Arc::new(f), field, &table))
}

/// Membership in the graded ideal `I(H,S)`: the image in the quotient
/// algebra vanishes.
pub fn in_graded_ideal(a: &LpaElement, pair: &AdmissiblePair) -> Result<bool, AlgebraError> {
    let hom = quotient_hom(a.graph(), a.field(), pair)?;
    Ok(hom.apply(a)?.is_zero())
}

/// The label-preserving embedding `L(E_H) → L(E)` onto the corner at
/// `Σ_{w∈H} w`.
pub fn corner_embedding(
    g: &Arc<Graph>,
    field: &Field,
    h: &VertexSet,
) -> Result<GeneratorImages, AlgebraError> {
    let sub = Arc::new(g.restricted_graph(h)?);
    let table = GeneratorTable::by_name(&sub, g);
    Ok(GeneratorImages::from_table(&sub, g, field, &table))
}

/// One summand `x · ε · y` of a fullness witness.
#[derive(Clone, Debug)]
pub struct WitnessTerm {
    pub left: LpaElement,
    pub right: LpaElement,
}

/// `v = Σ xᵢ ε yᵢ`, checked by normal-form equality.
#[derive(Clone, Debug)]
pub struct FullnessIdentity {
    pub vertex: VertexId,
    pub terms: Vec<WitnessTerm>,
}

impl FullnessIdentity {
    pub fn display(&self, g: &Graph) -> String {
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("({}) ε ({})", t.left.display(), t.right.display()))
            .collect();
        format!("{} = {}", g.vertex_name(self.vertex), body.join(" + "))
    }
}

/// For each vertex of `missing`, an expression of it inside the ideal
/// generated by `ε = Σ_{w∉missing} w`. A path `μ` from a vertex `u` of `ε`
/// gives `v = μ* u μ`; failing that, a regular vertex whose edges all leave
/// `missing` uses CK2.
pub fn fullness_certificate(
    g: &Arc<Graph>,
    field: &Field,
    missing: &VertexSet,
) -> Result<Vec<FullnessIdentity>, AlgebraError> {
    let eps = LpaElement::vertex_sum(g, field, g.vertex_ids().filter(|v| !missing.contains(v)));
    let mut out = Vec::new();
    for &v in missing {
        let terms = if let Some(mu) = path_from_outside(g, missing, v) {
            let p = LpaElement::path(g, field, &mu);
            vec![WitnessTerm {
                left: p.star(),
                right: p,
            }]
        } else if let Some(edges) = g
            .out_edges(v)
            .filter(|es| !es.is_empty() && es.iter().all(|&e| !missing.contains(&g.dst(e))))
        {
            edges
                .iter()
                .map(|&e| WitnessTerm {
                    left: LpaElement::edge(g, field, e),
                    right: LpaElement::ghost(g, field, e),
                })
                .collect()
        } else {
            return Err(AlgebraError::NoWitness(g.vertex_name(v).to_string()));
        };
        let sum = terms.iter().fold(LpaElement::zero(g, field), |acc, t| {
            &acc + &(&(&t.left * &eps) * &t.right)
        });
        if sum != LpaElement::vertex(g, field, v) {
            return Err(AlgebraError::NoWitness(g.vertex_name(v).to_string()));
        }
        out.push(FullnessIdentity { vertex: v, terms });
    }
    Ok(out)
}

/// Shortest nonempty path from a vertex outside `missing` to `v`.
fn path_from_outside(g: &Graph, missing: &VertexSet, v: VertexId) -> Option<Vec<Edge>> {
    let mut pred: Vec<Option<Edge>> = vec![None; g.vertex_count()];
    let mut seen = VertexSet::from([v]);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for e in g.in_edges_sampled(x, 1) {
            let y = g.src(e);
            if !seen.insert(y) {
                continue;
            }
            pred[y.0 as usize] = Some(e);
            if !missing.contains(&y) {
                let mut path = Vec::new();
                let mut at = y;
                loop {
                    let e = pred[at.0 as usize].unwrap();
                    path.push(e);
                    at = g.dst(e);
                    if at == v {
                        break;
                    }
                }
                return Some(path);
            }
            queue.push_back(y);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Cycle;

    #[test]
    fn identity_and_trivial_quotient_verify() {
        for name in NAMES {
            let g = Arc::new(by_name(name).unwrap());
            let k = Field::Rational;
            assert!(GeneratorImages::identity(&g, &k).verify().is_ok(), "{name}");
            let q = quotient_hom(&g, &k, &AdmissiblePair::trivial()).unwrap();
            assert!(q.verify().is_ok(), "{name}");
            let x = &LpaElement::one(&g, &k) + &LpaElement::edge(&g, &k, g.edges_sampled(1)[0]);
            assert_eq!(q.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn quotient_of_omega_graph_verifies() {
        let g = Arc::new(g_omega());
        let k = Field::Rational;
        let h = g.parse_vertex_set(&["h"]).unwrap();
        let q = quotient_hom(
            &g,
            &k,
            &AdmissiblePair::new(&g, h.clone(), VertexSet::new()).unwrap(),
        )
        .unwrap();
        assert!(q.verify().is_ok());
        let v = g.vertex("v").unwrap();
        assert_eq!(
            q.apply(&LpaElement::vertex(&g, &k, v)).unwrap().display(),
            "v + v'"
        );
        let q2 = quotient_hom(&g, &k, &AdmissiblePair::full(&g, h).unwrap()).unwrap();
        assert!(q2.verify().is_ok());
    }

    #[test]
    fn graded_ideal_membership() {
        let g = Arc::new(g_toe());
        let k = Field::Rational;
        let pair =
            AdmissiblePair::new(&g, g.parse_vertex_set(&["w"]).unwrap(), VertexSet::new()).unwrap();
        let w = LpaElement::vertex(&g, &k, g.vertex("w").unwrap());
        let v = LpaElement::vertex(&g, &k, g.vertex("v").unwrap());
        let f = LpaElement::edge(&g, &k, g.parse_edge("f").unwrap());
        assert!(in_graded_ideal(&w, &pair).unwrap());
        assert!(!in_graded_ideal(&v, &pair).unwrap());
        assert!(in_graded_ideal(&(&f * &f.star()), &pair).unwrap());
    }

    #[test]
    fn broken_images_are_reported() {
        let g = Arc::new(g_toe());
        let k = Field::Rational;
        let mut hom = GeneratorImages::identity(&g, &k);
        hom.set_class(g.class_id("e").unwrap(), Vec::new());
        let errs = hom.verify().unwrap_err();
        assert!(errs.iter().any(|v| v.relation == "CK2(v)"));
    }

    #[test]
    fn corner_embeddings() {
        let k = Field::Rational;
        for (name, hs) in [
            ("toe", vec!["w"]),
            ("2cyc", vec!["w"]),
            ("toe", vec!["v", "w"]),
        ] {
            let g = Arc::new(by_name(name).unwrap());
            let h = g.parse_vertex_set(&hs).unwrap();
            let emb = corner_embedding(&g, &k, &h).unwrap();
            assert!(emb.verify().is_ok());
        }
    }

    #[test]
    fn cycle_to_loop_theta_verifies() {
        let g = Arc::new(g_2cyc());
        let k = Field::Rational;
        let (f, table) = g.cycle_to_loop(&Cycle::parse(&g, "a b").unwrap()).unwrap();
        let theta = GeneratorImages::from_table(&Arc::new(f), &g, &k, &table);
        assert!(theta.verify().is_ok());
        let missing = g.parse_vertex_set(&["v"]).unwrap();
        let cert = fullness_certificate(&g, &k, &missing).unwrap();
        assert_eq!(cert[0].display(&g), "v = (a*) ε (a)");
    }

    #[test]
    fn source_fullness() {
        let g = Arc::new(g_line());
        let k = Field::Rational;
        let cert = fullness_certificate(&g, &k, &g.parse_vertex_set(&["u"]).unwrap()).unwrap();
        assert_eq!(cert[0].display(&g), "u = (a) ε (a*)");
        assert!(fullness_certificate(&g, &k, &VertexSet::new())
            .unwrap()
            .is_empty());
        assert!(fullness_certificate(&g, &k, &g.all_vertices()).is_err());
    }
}
