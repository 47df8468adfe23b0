//! Elements of `L_K(E)` in the special-edge basis.
//!
//! A basis monomial is `p q*` with `r(p) = r(q)`, where `p` and `q` do not
//! both end in the same special edge. Products are formed by cancelling
//! `q₁* p₂` with CK1 and then expanding any trailing special pair `γγ*`
//! through CK2.

mod hom;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::graph::{format_edges, Edge, Graph, VertexId};
use crate::poly::LaurentPoly;
use crate::scalar::{write_term, Field, Scalar};

pub use hom::*;

/// `p q*` with `r(p) = r(q) = end`. Either path may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    p: Vec<Edge>,
    q: Vec<Edge>,
    end: VertexId,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p.len() + self.q.len())
            .cmp(&(other.p.len() + other.q.len()))
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.end.cmp(&other.end))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn vertex(v: VertexId) -> Self {
        Monomial {
            p: Vec::new(),
            q: Vec::new(),
            end: v,
        }
    }

    /// Checks that `p` and `q` are paths ending at a common vertex. The
    /// result need not be in basis form.
    pub fn new(g: &Graph, p: Vec<Edge>, q: Vec<Edge>) -> Result<Self, AlgebraError> {
        crate::graph::check_composable(g, &p)?;
        crate::graph::check_composable(g, &q)?;
        let end = match (p.last(), q.last()) {
            (Some(&a), Some(&b)) if g.dst(a) != g.dst(b) => {
                return Err(AlgebraError::SyntaxError {
                    pos: 0,
                    msg: "p and q must have the same range".into(),
                })
            }
            (Some(&a), _) => g.dst(a),
            (None, Some(&b)) => g.dst(b),
            (None, None) => {
                return Err(AlgebraError::SyntaxError {
                    pos: 0,
                    msg: "use Monomial::vertex".into(),
                })
            }
        };
        Ok(Monomial { p, q, end })
    }

    pub fn p(&self) -> &[Edge] {
        &self.p
    }

    pub fn q(&self) -> &[Edge] {
        &self.q
    }

    /// The common range `r(p) = r(q)`.
    pub fn end(&self) -> VertexId {
        self.end
    }

    /// `s(p)`: the vertex `v` with `v · pq* = pq*`.
    pub fn left(&self, g: &Graph) -> VertexId {
        self.p.first().map_or(self.end, |&e| g.src(e))
    }

    /// `s(q)`: the vertex `v` with `pq* · v = pq*`.
    pub fn right(&self, g: &Graph) -> VertexId {
        self.q.first().map_or(self.end, |&e| g.src(e))
    }

    pub fn degree(&self) -> usize {
        self.p.len() + self.q.len()
    }

    pub fn star(&self) -> Self {
        Monomial {
            p: self.q.clone(),
            q: self.p.clone(),
            end: self.end,
        }
    }

    /// Not ending in a special pair `γγ*`.
    pub fn is_basis(&self, g: &Graph) -> bool {
        match (self.p.last(), self.q.last()) {
            (Some(&a), Some(&b)) => a != b || !g.is_special(a),
            _ => true,
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.p.is_empty() && self.q.is_empty() {
            return g.vertex_name(self.end).to_string();
        }
        let mut parts = Vec::new();
        if !self.p.is_empty() {
            parts.push(format_edges(g, &self.p));
        }
        for &e in self.q.iter().rev() {
            parts.push(format!("{}*", g.edge_name(e)));
        }
        parts.join(" ")
    }
}

/// Product of two basis monomials as a signed combination of basis
/// monomials (`true` marks a negative sign).
pub(crate) fn mul_monomials(g: &Graph, a: &Monomial, b: &Monomial) -> Vec<(bool, Monomial)> {
    if a.right(g) != b.left(g) {
        return Vec::new();
    }
    let m = if b.p.starts_with(&a.q) {
        let mut p = a.p.clone();
        p.extend_from_slice(&b.p[a.q.len()..]);
        Monomial {
            p,
            q: b.q.clone(),
            end: b.end,
        }
    } else if a.q.starts_with(&b.p) {
        let mut q = b.q.clone();
        q.extend_from_slice(&a.q[b.p.len()..]);
        Monomial {
            p: a.p.clone(),
            q,
            end: a.end,
        }
    } else {
        return Vec::new();
    };
    reduce_special(g, m)
}

/// Expands trailing special pairs: `p'γγ*q'* = p'q'* − Σ_{g≠γ} p'g g*q'*`.
pub(crate) fn reduce_special(g: &Graph, mut m: Monomial) -> Vec<(bool, Monomial)> {
    let mut out = Vec::new();
    while let (Some(&a), Some(&b)) = (m.p.last(), m.q.last()) {
        if a != b || !g.is_special(a) {
            break;
        }
        let w = g.src(a);
        m.p.pop();
        m.q.pop();
        for e in g
            .out_edges(w)
            .expect("special edges sit at regular vertices")
        {
            if e == a {
                continue;
            }
            let mut p = m.p.clone();
            p.push(e);
            let mut q = m.q.clone();
            q.push(e);
            out.push((
                true,
                Monomial {
                    p,
                    q,
                    end: g.dst(e),
                },
            ));
        }
        m.end = w;
    }
    out.push((false, m));
    out
}

/// A finite linear combination of basis monomials.
#[derive(Clone, Debug)]
pub struct LpaElement {
    graph: Arc<Graph>,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for LpaElement {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph)
            && self.field == other.field
            && self.terms == other.terms
    }
}

impl Eq for LpaElement {}

pub(crate) fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LpaElement {
    pub fn zero(graph: &Arc<Graph>, field: &Field) -> Self {
        LpaElement {
            graph: graph.clone(),
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A single monomial; it is reduced to basis form first.
    pub fn monomial(graph: &Arc<Graph>, field: &Field, m: Monomial, coeff: Scalar) -> Self {
        let mut out = Self::zero(graph, field);
        for (neg, b) in reduce_special(graph, m) {
            out.add_term(b, if neg { -&coeff } else { coeff.clone() });
        }
        out
    }

    pub fn vertex(graph: &Arc<Graph>, field: &Field, v: VertexId) -> Self {
        Self::monomial(graph, field, Monomial::vertex(v), field.one())
    }

    pub fn edge(graph: &Arc<Graph>, field: &Field, e: Edge) -> Self {
        Self::path(graph, field, &[e])
    }

    pub fn ghost(graph: &Arc<Graph>, field: &Field, e: Edge) -> Self {
        Self::edge(graph, field, e).star()
    }

    /// A nonempty path, assumed composable.
    pub fn path(graph: &Arc<Graph>, field: &Field, edges: &[Edge]) -> Self {
        let end = graph.dst(*edges.last().expect("nonempty path"));
        let m = Monomial {
            p: edges.to_vec(),
            q: Vec::new(),
            end,
        };
        Self::monomial(graph, field, m, field.one())
    }

    /// The unit: the sum of all vertices.
    pub fn one(graph: &Arc<Graph>, field: &Field) -> Self {
        let mut out = Self::zero(graph, field);
        for v in graph.vertex_ids() {
            out.add_term(Monomial::vertex(v), field.one());
        }
        out
    }

    /// `Σ_{v∈set} v`.
    pub fn vertex_sum(
        graph: &Arc<Graph>,
        field: &Field,
        set: impl IntoIterator<Item = VertexId>,
    ) -> Self {
        let mut out = Self::zero(graph, field);
        for v in set {
            out.add_term(Monomial::vertex(v), field.one());
        }
        out
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Largest `len(p) + len(q)` among the terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if !same_graph(&self.graph, &other.graph) {
            return Err(AlgebraError::GraphMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let mut out = Self::zero(&self.graph, &self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (neg, m) in mul_monomials(&self.graph, a, b) {
                    out.add_term(m, if neg { -&c } else { c.clone() });
                }
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Self {
        LpaElement {
            graph: self.graph.clone(),
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self, AlgebraError> {
        if c.field() != self.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.to_string(),
                c.field().to_string(),
            ));
        }
        let mut out = Self::zero(&self.graph, &self.field);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        Ok(out)
    }

    /// The involution `λ pq* ↦ λ qp*`.
    pub fn star(&self) -> Self {
        LpaElement {
            graph: self.graph.clone(),
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.star(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.graph, &self.field);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write_term(&mut out, c, &m.display(&self.graph), i == 0);
        }
        out
    }

    /// Substitutes a closed path for `x` in a Laurent polynomial: `x ↦ c`,
    /// `x⁻¹ ↦ c*`, constants `a ↦ a·s(c)`.
    pub fn poly_at_cycle(
        graph: &Arc<Graph>,
        closed: &[Edge],
        f: &LaurentPoly,
    ) -> Result<Self, AlgebraError> {
        let Some(&first) = closed.first() else {
            return Err(AlgebraError::NotClosed);
        };
        crate::graph::check_composable(graph, closed)?;
        let v = graph.src(first);
        if graph.dst(*closed.last().unwrap()) != v {
            return Err(AlgebraError::NotClosed);
        }
        let field = f.field();
        let c = Self::path(graph, field, closed);
        let cs = c.star();
        let mut out = Self::zero(graph, field);
        for (k, a) in f.terms() {
            let base = if k >= 0 { &c } else { &cs };
            let mut term = Self::vertex(graph, field, v);
            for _ in 0..k.unsigned_abs() {
                term = &term * base;
            }
            out = &out + &term.scale(a)?;
        }
        Ok(out)
    }
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Add for &LpaElement {
    type Output = LpaElement;

    /// Panics on mismatched graphs or fields; see [`LpaElement::try_add`].
    fn add(self, rhs: &LpaElement) -> LpaElement {
        self.try_add(rhs).expect("compatible operands")
    }
}

impl Sub for &LpaElement {
    type Output = LpaElement;

    fn sub(self, rhs: &LpaElement) -> LpaElement {
        self.try_sub(rhs).expect("compatible operands")
    }
}

impl Mul for &LpaElement {
    type Output = LpaElement;

    fn mul(self, rhs: &LpaElement) -> LpaElement {
        self.try_mul(rhs).expect("compatible operands")
    }
}

impl Neg for &LpaElement {
    type Output = LpaElement;

    fn neg(self) -> LpaElement {
        self.neg_ref()
    }
}

/// The special edge chosen at each regular vertex.
pub fn choose_special_edges(g: &Graph) -> BTreeMap<VertexId, Edge> {
    g.vertex_ids()
        .filter_map(|v| g.special_edge(v).map(|e| (v, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    struct Toe {
        g: Arc<Graph>,
        k: Field,
    }

    impl Toe {
        fn new() -> Self {
            Toe {
                g: Arc::new(g_toe()),
                k: Field::Rational,
            }
        }
        fn v(&self, n: &str) -> LpaElement {
            LpaElement::vertex(&self.g, &self.k, self.g.vertex(n).unwrap())
        }
        fn e(&self, n: &str) -> LpaElement {
            LpaElement::edge(&self.g, &self.k, self.g.parse_edge(n).unwrap())
        }
    }

    #[test]
    fn ck1() {
        let t = Toe::new();
        assert_eq!(&t.e("e").star() * &t.e("e"), t.v("v"));
        assert!((&t.e("f").star() * &t.e("e")).is_zero());
        assert_eq!(&t.e("f").star() * &t.e("f"), t.v("w"));
    }

    #[test]
    fn ck2_at_v() {
        let t = Toe::new();
        let ee = &t.e("e") * &t.e("e").star();
        let ff = &t.e("f") * &t.e("f").star();
        assert!((&(&ee + &ff) - &t.v("v")).is_zero());
        assert_eq!(ee.display(), "v - f f*");
    }

    #[test]
    fn jacobson_products() {
        let t = Toe::new();
        let x = &t.e("e") + &t.e("f");
        // e f* = e r(e) r(f) f* vanishes since r(e) = v and r(f) = w
        assert_eq!((&x * &x.star()).display(), "v");
        assert!((&t.e("e") * &t.e("f").star()).is_zero());
        assert_eq!(&x.star() * &x, &t.v("v") + &t.v("w"));
    }

    #[test]
    fn special_edge_map() {
        let g = g_toe();
        let m = choose_special_edges(&g);
        assert_eq!(m.len(), 1);
        assert_eq!(g.edge_name(m[&g.vertex("v").unwrap()]), "e");
        assert!(choose_special_edges(&Graph::simple(&["w"], &[])).is_empty());
    }

    #[test]
    fn mismatches_are_errors() {
        let t = Toe::new();
        let other = LpaElement::vertex(&t.g, &Field::prime(3).unwrap(), VertexId(0));
        assert!(matches!(
            t.v("v").try_add(&other),
            Err(AlgebraError::FieldMismatch(..))
        ));
        let g2 = Arc::new(g_loop());
        let y = LpaElement::vertex(&g2, &t.k, VertexId(0));
        assert_eq!(t.v("v").try_mul(&y), Err(AlgebraError::GraphMismatch));
    }

    #[test]
    fn poly_substitution() {
        let g = Arc::new(g_loop());
        let k = Field::Rational;
        let c = [g.parse_edge("c").unwrap()];
        let f = LaurentPoly::parse("1 - x", &k).unwrap();
        assert_eq!(
            LpaElement::poly_at_cycle(&g, &c, &f).unwrap().display(),
            "v - c"
        );
        let f = LaurentPoly::parse("x^-1", &k).unwrap();
        assert_eq!(
            LpaElement::poly_at_cycle(&g, &c, &f).unwrap().display(),
            "c*"
        );
        let t = Arc::new(g_toe());
        let e = [t.parse_edge("e").unwrap()];
        let f = LaurentPoly::parse("1 + x + x^2", &k).unwrap();
        assert_eq!(
            LpaElement::poly_at_cycle(&t, &e, &f).unwrap().display(),
            "v + e + e e"
        );
        let open = [t.parse_edge("f").unwrap()];
        assert_eq!(
            LpaElement::poly_at_cycle(&t, &open, &f),
            Err(AlgebraError::NotClosed)
        );
    }
}
