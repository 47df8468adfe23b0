//! The Chen simple modules and their annihilators.
//!
//! Sink-type modules have the finite paths ending at a sink as basis; the two
//! emitter types are sink modules over a quotient graph, pulled back along
//! the quotient map. Path-type modules have the infinite paths of one
//! tail-equivalence class as basis. The twisted type keeps its scalars in
//! `K[x]/(f)` and scales by `x̄^{±1}` whenever the marked edge of the cycle
//! (or its ghost) acts.

mod annihilator;
mod lazy;

pub use annihilator::*;
pub use lazy::LazyPath;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{quotient_hom, GeneratorImages, LpaElement, Monomial};
use crate::error::{ChenError, GraphError};
use crate::graph::{
    format_edges, parse_edges, AdmissiblePair, Cycle, Edge, Graph, Path, UltimatelyPeriodicPath,
    VertexId,
};
use crate::poly::{Irreducibility, LaurentPoly, Poly};
use crate::scalar::{write_term, ExtElem, Field, Scalar};

/// Inspection bound for lazy paths unless configured otherwise.
pub const DEFAULT_LAZY_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChenKind {
    /// `N_w` for a sink `w`.
    Sink(VertexId),
    /// `N_v^{B_{H(v)}}` for an infinite emitter `v ∈ B_{H(v)}`.
    BreakingEmitter(VertexId),
    /// `N_v^{H(v)}` for an infinite emitter with `r(s⁻¹(v)) ⊆ H(v)`.
    QuotientEmitter(VertexId),
    /// `V_[p]` for an ultimately periodic `p`.
    Path(UltimatelyPeriodicPath),
    /// `V_[p]` for a path given by a stream.
    LazyPath(LazyPath),
    /// `V^f_[c^∞]`; `poly` is stored with constant term one.
    Twisted { cycle: Cycle, poly: Poly },
}

impl ChenKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ChenKind::Sink(_) => "sink",
            ChenKind::BreakingEmitter(_) => "breaking_emitter",
            ChenKind::QuotientEmitter(_) => "quotient_emitter",
            ChenKind::Path(_) | ChenKind::LazyPath(_) => "infinite_path",
            ChenKind::Twisted { .. } => "twisted",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ChenOptions {
    /// Accept a twisting polynomial whose irreducibility is undecided.
    pub assume_irreducible: bool,
    /// How many edges of a lazy path may be read.
    pub depth: usize,
}

impl Default for ChenOptions {
    fn default() -> Self {
        ChenOptions {
            assume_irreducible: false,
            depth: DEFAULT_LAZY_DEPTH,
        }
    }
}

/// A basis vector. Finite paths live in the carrier graph (the quotient
/// graph for the emitter types).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElement {
    Finite(Path),
    Periodic(UltimatelyPeriodicPath),
    /// `prefix · τ_{>offset}(p)`; the prefix never ends with edge
    /// `offset - 1` of the stream.
    Lazy {
        prefix: Vec<Edge>,
        offset: usize,
    },
}

/// A finite combination of basis vectors with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleElement {
    terms: BTreeMap<BasisElement, Scalar>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisElement, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn add_term(&mut self, b: BasisElement, c: Scalar) {
        let sum = match self.terms.remove(&b) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(b, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasisElement) -> Option<&Scalar> {
        self.terms.get(b)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (b, d) in &self.terms {
            out.add_term(b.clone(), d * c);
        }
        out
    }
}

struct Carrier {
    hom: GeneratorImages,
    sink: VertexId,
}

/// A validated Chen module over `L_K(E)`.
pub struct ChenModule {
    graph: Arc<Graph>,
    field: Field,
    scalars: Field,
    kind: ChenKind,
    carrier: Option<Carrier>,
    opts: ChenOptions,
}

impl std::fmt::Debug for ChenModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChenModule({})", self.display())
    }
}

/// Builds a Chen module after checking the conditions of its type.
pub fn make_chen(
    g: &Arc<Graph>,
    field: &Field,
    kind: ChenKind,
    opts: ChenOptions,
) -> Result<ChenModule, ChenError> {
    let mut scalars = field.clone();
    let mut kind = kind;
    let mut carrier = None;
    let breaking = matches!(kind, ChenKind::BreakingEmitter(_));
    match &mut kind {
        ChenKind::Sink(w) => {
            if !g.is_sink(*w) {
                return Err(ChenError::NotASink(g.vertex_name(*w).to_string()));
            }
        }
        ChenKind::BreakingEmitter(v) | ChenKind::QuotientEmitter(v) => {
            let v = *v;
            let name = g.vertex_name(v).to_string();
            if !g.is_infinite_emitter(v) {
                return Err(ChenError::WrongEmitterShape(
                    name,
                    "not an infinite emitter".into(),
                ));
            }
            let h = g.h_of(v);
            let b = g.breaking_vertices(&h)?;
            let pair = if breaking {
                if !b.contains(&v) {
                    return Err(ChenError::WrongEmitterShape(name, "not in B_{H(v)}".into()));
                }
                AdmissiblePair {
                    h,
                    s: b.into_iter().filter(|&x| x != v).collect(),
                }
            } else {
                if g.out_classes(v)
                    .iter()
                    .any(|&c| !h.contains(&g.class(c).dst))
                {
                    return Err(ChenError::WrongEmitterShape(
                        name,
                        "an edge leaves H(v)".into(),
                    ));
                }
                AdmissiblePair { h, s: b }
            };
            let hom = quotient_hom(g, field, &pair)?;
            let f = hom.target().clone();
            let sink = hom
                .vertex_image(v)
                .terms()
                .map(|(m, _)| m.end())
                .find(|&x| f.is_sink(x))
                .expect("the emitter has a sink image");
            carrier = Some(Carrier { hom, sink });
        }
        ChenKind::Path(_) => {}
        ChenKind::LazyPath(p) => p.validate(g, opts.depth)?,
        ChenKind::Twisted { cycle, poly } => {
            if poly.field() != field {
                return Err(ChenError::FieldMismatch(
                    poly.field().to_string(),
                    field.to_string(),
                ));
            }
            if !g.is_exclusive(cycle)? {
                return Err(ChenError::NotExclusive(cycle.display(g)));
            }
            let normal = LaurentPoly::from_poly(poly)
                .associate()
                .ok_or_else(|| ChenError::ReduciblePolynomial("0".into()))?;
            if normal == Poly::one_minus_x(field) {
                return Err(ChenError::UntwistedPolynomial(normal.to_string()));
            }
            match normal.irreducibility() {
                Irreducibility::Irreducible => {}
                Irreducibility::Unknown if opts.assume_irreducible => {}
                _ => return Err(ChenError::ReduciblePolynomial(normal.to_string())),
            }
            scalars = Field::extension(normal.clone())?;
            *poly = normal;
        }
    }
    Ok(ChenModule {
        graph: g.clone(),
        field: field.clone(),
        scalars,
        kind,
        carrier,
        opts,
    })
}

fn lazy_edge(
    p: &LazyPath,
    prefix: &[Edge],
    offset: usize,
    k: usize,
    depth: usize,
) -> Result<Edge, ChenError> {
    if k < prefix.len() {
        Ok(prefix[k])
    } else {
        p.edge_at(offset + k - prefix.len(), depth)
    }
}

impl ChenModule {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `K`, or `K[x]/(f)` for the twisted type.
    pub fn scalars(&self) -> &Field {
        &self.scalars
    }

    pub fn kind(&self) -> &ChenKind {
        &self.kind
    }

    pub fn options(&self) -> ChenOptions {
        self.opts
    }

    /// The graph whose paths index the basis.
    pub fn carrier_graph(&self) -> &Arc<Graph> {
        self.carrier
            .as_ref()
            .map_or(&self.graph, |c| c.hom.target())
    }

    /// The sink whose paths form the basis, for the sink and emitter types.
    pub fn sink(&self) -> Option<VertexId> {
        match (&self.kind, &self.carrier) {
            (ChenKind::Sink(w), _) => Some(*w),
            (_, Some(c)) => Some(c.sink),
            _ => None,
        }
    }

    /// The quotient map onto the carrier graph, for the emitter types.
    pub fn quotient(&self) -> Option<&GeneratorImages> {
        self.carrier.as_ref().map(|c| &c.hom)
    }

    /// The first edge of the canonical rotation of the twisting cycle.
    pub fn marked_edge(&self) -> Option<Edge> {
        match &self.kind {
            ChenKind::Twisted { cycle, .. } => Some(cycle.edges()[0]),
            _ => None,
        }
    }

    /// `x̄ ∈ K[x]/(f)` for the twisted type.
    pub fn twist(&self) -> Option<Scalar> {
        match &self.scalars {
            Field::Extension(ext) if self.marked_edge().is_some() => Some(ExtElem::generator(ext)),
            _ => None,
        }
    }

    /// Textual form: `N(w)`, `NB(v)`, `NH(v)`, `V(prefix; period)`,
    /// `V(stream)`, `Vf(period; poly)`.
    pub fn display(&self) -> String {
        let g = &self.graph;
        match &self.kind {
            ChenKind::Sink(w) => format!("N({})", g.vertex_name(*w)),
            ChenKind::BreakingEmitter(v) => format!("NB({})", g.vertex_name(*v)),
            ChenKind::QuotientEmitter(v) => format!("NH({})", g.vertex_name(*v)),
            ChenKind::Path(p) => format!("V({})", p.display(g)),
            ChenKind::LazyPath(p) => format!("V({})", p.name()),
            ChenKind::Twisted { cycle, poly } => format!("Vf({}; {})", cycle.display(g), poly),
        }
    }

    /// Parses the textual forms of [`ChenModule::display`].
    pub fn parse(
        g: &Arc<Graph>,
        field: &Field,
        text: &str,
        opts: ChenOptions,
    ) -> Result<Self, ChenError> {
        let text = text.trim();
        let bad = || ChenError::InvalidPath(format!("cannot read module '{text}'"));
        let open = text.find('(').ok_or_else(bad)?;
        let body = text[open + 1..].strip_suffix(')').ok_or_else(bad)?.trim();
        let kind = match &text[..open] {
            "N" => ChenKind::Sink(g.vertex(body)?),
            "NB" => ChenKind::BreakingEmitter(g.vertex(body)?),
            "NH" => ChenKind::QuotientEmitter(g.vertex(body)?),
            "V" => match LazyPath::builtin(g, body) {
                Ok(p) => ChenKind::LazyPath(p),
                Err(_) => ChenKind::Path(UltimatelyPeriodicPath::parse(g, body)?),
            },
            "Vf" => {
                let (c, f) = body.split_once(';').ok_or_else(bad)?;
                let cycle = Cycle::parse(g, c)?;
                let poly = LaurentPoly::parse(f, field)?
                    .associate()
                    .ok_or_else(|| ChenError::ReduciblePolynomial("0".into()))?;
                ChenKind::Twisted { cycle, poly }
            }
            _ => return Err(bad()),
        };
        make_chen(g, field, kind, opts)
    }

    /// The canonical generator: the sink, `p`, or `c^∞`.
    pub fn generator(&self) -> BasisElement {
        match &self.kind {
            ChenKind::Path(p) => BasisElement::Periodic(p.clone()),
            ChenKind::Twisted { cycle, .. } => BasisElement::Periodic(
                UltimatelyPeriodicPath::canonical(Vec::new(), cycle.edges().to_vec()),
            ),
            ChenKind::LazyPath(_) => BasisElement::Lazy {
                prefix: Vec::new(),
                offset: 0,
            },
            _ => BasisElement::Finite(Path::vertex(self.sink().unwrap())),
        }
    }

    pub fn generator_element(&self) -> ModuleElement {
        ModuleElement::basis(self.generator(), self.scalars.one())
    }

    /// Reads a basis vector: a path or vertex name for the sink types,
    /// `prefix; period` for path types, `prefix; n` (meaning `prefix·τ_{>n}(p)`)
    /// for lazy paths.
    pub fn parse_basis(&self, text: &str) -> Result<BasisElement, ChenError> {
        let cg = self.carrier_graph();
        let b = match &self.kind {
            ChenKind::Path(_) | ChenKind::Twisted { .. } => {
                BasisElement::Periodic(UltimatelyPeriodicPath::parse(cg, text)?)
            }
            ChenKind::LazyPath(p) => {
                let (pre, n) = text.split_once(';').unwrap_or((text, "0"));
                let offset: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| ChenError::InvalidPath(format!("bad offset in '{text}'")))?;
                let mut prefix = parse_edges(cg, pre)?;
                let mut offset = offset;
                if let Some(&last) = prefix.last() {
                    let first = p.edge_at(offset, self.opts.depth)?;
                    if cg.dst(last) != cg.src(first) {
                        return Err(ChenError::InvalidPath(text.to_string()));
                    }
                }
                self.lazy_canonical(p, &mut prefix, &mut offset)?;
                BasisElement::Lazy { prefix, offset }
            }
            _ => {
                let sink = self.sink().unwrap();
                let path = match cg.vertex_id(text.trim()) {
                    Some(v) => Path::vertex(v),
                    None => Path::from_edges(cg, parse_edges(cg, text)?)?,
                };
                if path.range(cg) != sink {
                    return Err(ChenError::InvalidPath(format!(
                        "{} does not end at {}",
                        path.display(cg),
                        cg.vertex_name(sink)
                    )));
                }
                BasisElement::Finite(path)
            }
        };
        if !self.in_class(&b) {
            return Err(ChenError::InvalidPath(format!(
                "{text} is not in this module"
            )));
        }
        Ok(b)
    }

    fn in_class(&self, b: &BasisElement) -> bool {
        match (&self.kind, b) {
            (ChenKind::Path(p), BasisElement::Periodic(q)) => p.tail_equivalent(q),
            (ChenKind::Twisted { cycle, .. }, BasisElement::Periodic(q)) => {
                q.tail_class() == cycle.edges()
            }
            (ChenKind::LazyPath(_), BasisElement::Lazy { .. }) => true,
            (
                ChenKind::Sink(_) | ChenKind::BreakingEmitter(_) | ChenKind::QuotientEmitter(_),
                BasisElement::Finite(_),
            ) => true,
            _ => false,
        }
    }

    pub fn display_basis(&self, b: &BasisElement) -> String {
        let cg = self.carrier_graph();
        match b {
            BasisElement::Finite(p) => p.display(cg),
            BasisElement::Periodic(p) => {
                let tail = format!("({})^∞", format_edges(cg, p.period()));
                if p.prefix().is_empty() {
                    tail
                } else {
                    format!("{} {tail}", format_edges(cg, p.prefix()))
                }
            }
            BasisElement::Lazy { prefix, offset } => {
                let name = match &self.kind {
                    ChenKind::LazyPath(p) => p.name(),
                    _ => "p",
                };
                let tail = format!("{name}[{offset}..]");
                if prefix.is_empty() {
                    tail
                } else {
                    format!("{} {tail}", format_edges(cg, prefix))
                }
            }
        }
    }

    pub fn display_element(&self, x: &ModuleElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (b, c)) in x.terms().enumerate() {
            write_term(&mut out, c, &self.display_basis(b), i == 0);
        }
        out
    }

    /// `a · x`.
    pub fn act(&self, a: &LpaElement, x: &ModuleElement) -> Result<ModuleElement, ChenError> {
        if a.field() != &self.field {
            return Err(ChenError::FieldMismatch(
                a.field().to_string(),
                self.field.to_string(),
            ));
        }
        if !Arc::ptr_eq(a.graph(), &self.graph) && **a.graph() != *self.graph {
            return Err(ChenError::Algebra(
                crate::error::AlgebraError::GraphMismatch,
            ));
        }
        let image;
        let a = match &self.carrier {
            Some(c) => {
                image = c.hom.apply(a)?;
                &image
            }
            None => a,
        };
        let twist = self.twist();
        let marked = self.marked_edge();
        let mut out = ModuleElement::zero();
        for (m, c) in a.terms() {
            let c = self.scalars.embed(c);
            let factor = match (&twist, marked) {
                (Some(t), Some(e1)) => {
                    let k = m.p().iter().filter(|&&e| e == e1).count() as i64
                        - m.q().iter().filter(|&&e| e == e1).count() as i64;
                    &c * &t.pow(k).expect("x̄ is invertible")
                }
                _ => c,
            };
            for (b, d) in x.terms() {
                if let Some(r) = self.act_monomial(m, b)? {
                    out.add_term(r, &factor * d);
                }
            }
        }
        Ok(out)
    }

    pub fn act_basis(&self, a: &LpaElement, b: &BasisElement) -> Result<ModuleElement, ChenError> {
        self.act(a, &ModuleElement::basis(b.clone(), self.scalars.one()))
    }

    /// `p q* · b` on a single basis vector, ignoring the twist.
    fn act_monomial(
        &self,
        m: &Monomial,
        b: &BasisElement,
    ) -> Result<Option<BasisElement>, ChenError> {
        let cg = self.carrier_graph();
        let (p, q) = (m.p(), m.q());
        Ok(match b {
            BasisElement::Finite(path) => {
                if path.source() != m.right(cg) || !path.edges().starts_with(q) {
                    return Ok(None);
                }
                let edges: Vec<Edge> = p.iter().chain(&path.edges()[q.len()..]).copied().collect();
                Some(BasisElement::Finite(if edges.is_empty() {
                    Path::vertex(m.end())
                } else {
                    Path::from_edges(cg, edges)?
                }))
            }
            BasisElement::Periodic(x) => {
                if x.source(cg) != m.right(cg) || (0..q.len()).any(|i| x.edge_at(i) != q[i]) {
                    return Ok(None);
                }
                let rest = x.shift(q.len());
                let prefix: Vec<Edge> = p.iter().chain(rest.prefix()).copied().collect();
                Some(BasisElement::Periodic(UltimatelyPeriodicPath::canonical(
                    prefix,
                    rest.period().to_vec(),
                )))
            }
            BasisElement::Lazy { prefix, offset } => {
                let ChenKind::LazyPath(stream) = &self.kind else {
                    return Err(ChenError::InvalidPath(
                        "lazy vector in a non-lazy module".into(),
                    ));
                };
                let d = self.opts.depth;
                let first = lazy_edge(stream, prefix, *offset, 0, d)?;
                if cg.src(first) != m.right(cg) {
                    return Ok(None);
                }
                for (i, &e) in q.iter().enumerate() {
                    if lazy_edge(stream, prefix, *offset, i, d)? != e {
                        return Ok(None);
                    }
                }
                let (rest, mut off) = if q.len() <= prefix.len() {
                    (&prefix[q.len()..], *offset)
                } else {
                    (&prefix[..0], offset + q.len() - prefix.len())
                };
                let mut new_prefix: Vec<Edge> = p.iter().chain(rest).copied().collect();
                self.lazy_canonical(stream, &mut new_prefix, &mut off)?;
                Some(BasisElement::Lazy {
                    prefix: new_prefix,
                    offset: off,
                })
            }
        })
    }

    fn lazy_canonical(
        &self,
        p: &LazyPath,
        prefix: &mut Vec<Edge>,
        offset: &mut usize,
    ) -> Result<(), ChenError> {
        while let Some(&last) = prefix.last() {
            if *offset == 0 || p.edge_at(*offset - 1, self.opts.depth)? != last {
                break;
            }
            prefix.pop();
            *offset -= 1;
        }
        Ok(())
    }
}

/// Lifts a Chen module over the restriction `E_H` to `E`, keeping its
/// defining datum.
pub fn induce_from_restriction(
    g: &Arc<Graph>,
    h: &crate::graph::VertexSet,
    m: &ChenModule,
) -> Result<ChenModule, ChenError> {
    if !g.is_hereditary(h) {
        return Err(GraphError::NotHereditary.into());
    }
    let sub = m.graph().clone();
    let vmap = |v: VertexId| -> Result<VertexId, ChenError> {
        let name = sub.vertex_name(v);
        match g.vertex_id(name) {
            Some(w) if h.contains(&w) => Ok(w),
            _ => Err(ChenError::DatumEscapesH(name.to_string())),
        }
    };
    let emap = {
        let sub = sub.clone();
        let g = g.clone();
        let h = h.clone();
        move |e: Edge| -> Result<Edge, ChenError> {
            let class = sub.class(e.class);
            match g.class_id(&class.name) {
                Some(c) if h.contains(&g.class(c).src) => Ok(Edge::new(c, e.index)),
                _ => Err(ChenError::DatumEscapesH(sub.edge_name(e))),
            }
        }
    };
    let edges = |es: &[Edge]| es.iter().map(|&e| emap(e)).collect::<Result<Vec<_>, _>>();
    let kind = match m.kind() {
        ChenKind::Sink(w) => ChenKind::Sink(vmap(*w)?),
        ChenKind::BreakingEmitter(v) => ChenKind::BreakingEmitter(vmap(*v)?),
        ChenKind::QuotientEmitter(v) => ChenKind::QuotientEmitter(vmap(*v)?),
        ChenKind::Path(p) => ChenKind::Path(UltimatelyPeriodicPath::new(
            g,
            edges(p.prefix())?,
            edges(p.period())?,
        )?),
        ChenKind::Twisted { cycle, poly } => ChenKind::Twisted {
            cycle: Cycle::from_edges(g, edges(cycle.edges())?)?,
            poly: poly.clone(),
        },
        ChenKind::LazyPath(p) => {
            let inner = p.clone();
            let emap = emap.clone();
            let source = (0..).map_while(move |i| inner.get(i).and_then(|e| emap(e).ok()));
            ChenKind::LazyPath(LazyPath::from_iter(p.name(), source))
        }
    };
    make_chen(g, m.field(), kind, m.options())
}

#[cfg(test)]
mod tests;
