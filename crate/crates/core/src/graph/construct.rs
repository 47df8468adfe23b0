use std::collections::BTreeMap;

use super::{
    fresh_name, AdmissiblePair, ClassId, Cycle, Edge, EdgeClass, Graph, Multiplicity, VertexId,
    VertexSet,
};
use crate::error::GraphError;

/// One summand of an edge image: `prefix · (class, i)` for the source edge
/// of index `i`. Parallel copies map index-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTerm {
    pub prefix: Vec<Edge>,
    pub class: ClassId,
}

/// Images of the generators of a source graph, as sums of paths in a target
/// graph. Ghost edges map to the adjoint of the edge image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    /// Indexed by source vertex: a sum of target vertices.
    pub vertices: Vec<Vec<VertexId>>,
    /// Indexed by source class.
    pub classes: Vec<Vec<ClassTerm>>,
}

impl GeneratorTable {
    pub fn identity(g: &Graph) -> Self {
        GeneratorTable {
            vertices: g.vertex_ids().map(|v| vec![v]).collect(),
            classes: g
                .class_ids()
                .map(|c| {
                    vec![ClassTerm {
                        prefix: Vec::new(),
                        class: c,
                    }]
                })
                .collect(),
        }
    }

    /// Label-preserving map from `src` into `tgt`; every name of `src` must
    /// exist in `tgt`.
    pub fn by_name(src: &Graph, tgt: &Graph) -> Self {
        GeneratorTable {
            vertices: src
                .vertex_ids()
                .map(|v| {
                    vec![tgt
                        .vertex_id(src.vertex_name(v))
                        .expect("vertex present in target")]
                })
                .collect(),
            classes: src
                .classes()
                .iter()
                .map(|c| {
                    vec![ClassTerm {
                        prefix: Vec::new(),
                        class: tgt.class_id(&c.name).expect("class present in target"),
                    }]
                })
                .collect(),
        }
    }
}

struct Builder {
    vertices: Vec<String>,
    index: BTreeMap<String, VertexId>,
    classes: Vec<EdgeClass>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            index: BTreeMap::new(),
            classes: Vec::new(),
        }
    }

    fn vertex(&mut self, name: &str) {
        let id = VertexId(self.vertices.len() as u32);
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), id);
    }

    fn class(&mut self, name: &str, src: &str, dst: &str, multiplicity: Multiplicity) {
        self.classes.push(EdgeClass {
            name: name.to_string(),
            src: self.index[src],
            dst: self.index[dst],
            multiplicity,
        });
    }

    fn finish(self) -> Graph {
        Graph::assemble(self.vertices, self.classes)
    }
}

fn term(g: &Graph, name: &str) -> ClassTerm {
    ClassTerm {
        prefix: Vec::new(),
        class: g.class_id(name).expect("class exists"),
    }
}

impl Graph {
    /// The quotient graph `E∖(H,S)` and the images of the generators of `E`
    /// under the quotient map onto it.
    pub fn quotient_graph(
        &self,
        pair: &AdmissiblePair,
    ) -> Result<(Graph, GeneratorTable), GraphError> {
        let pair = AdmissiblePair::new(self, pair.h.clone(), pair.s.clone())?;
        let b = self.breaking_vertices(&pair.h)?;
        let doubled: VertexSet = b.difference(&pair.s).copied().collect();
        let mut taken = self.names();
        let primed_vertex: BTreeMap<VertexId, String> = doubled
            .iter()
            .map(|&v| {
                (
                    v,
                    fresh_name(&format!("{}'", self.vertex_name(v)), &mut taken),
                )
            })
            .collect();
        let primed_class: BTreeMap<ClassId, String> = self
            .class_ids()
            .filter(|&c| doubled.contains(&self.class(c).dst))
            .map(|c| {
                (
                    c,
                    fresh_name(&format!("{}'", self.class(c).name), &mut taken),
                )
            })
            .collect();

        let mut bld = Builder::new();
        for v in self.vertex_ids().filter(|v| !pair.h.contains(v)) {
            bld.vertex(self.vertex_name(v));
        }
        for name in primed_vertex.values() {
            bld.vertex(name);
        }
        for c in self.classes().iter().filter(|c| !pair.h.contains(&c.dst)) {
            bld.class(
                &c.name,
                self.vertex_name(c.src),
                self.vertex_name(c.dst),
                c.multiplicity,
            );
        }
        for (&c, name) in &primed_class {
            let cl = self.class(c);
            bld.class(
                name,
                self.vertex_name(cl.src),
                &primed_vertex[&cl.dst],
                cl.multiplicity,
            );
        }
        let f = bld.finish();

        let vertices = self
            .vertex_ids()
            .map(|v| {
                if pair.h.contains(&v) {
                    return Vec::new();
                }
                let mut img = vec![f.vertex_id(self.vertex_name(v)).unwrap()];
                if let Some(p) = primed_vertex.get(&v) {
                    img.push(f.vertex_id(p).unwrap());
                }
                img
            })
            .collect();
        let classes = self
            .class_ids()
            .map(|c| {
                if pair.h.contains(&self.class(c).dst) {
                    return Vec::new();
                }
                let mut img = vec![term(&f, &self.class(c).name)];
                if let Some(p) = primed_class.get(&c) {
                    img.push(term(&f, p));
                }
                img
            })
            .collect();
        Ok((f, GeneratorTable { vertices, classes }))
    }

    /// `E_H`: the vertices of `H` and the edges they emit.
    pub fn restricted_graph(&self, h: &VertexSet) -> Result<Graph, GraphError> {
        if !self.is_hereditary(h) {
            return Err(GraphError::NotHereditary);
        }
        let mut bld = Builder::new();
        for &v in h {
            bld.vertex(self.vertex_name(v));
        }
        for c in self.classes().iter().filter(|c| h.contains(&c.src)) {
            bld.class(
                &c.name,
                self.vertex_name(c.src),
                self.vertex_name(c.dst),
                c.multiplicity,
            );
        }
        Ok(bld.finish())
    }

    /// `E∖v` for a source `v` that is not a sink, together with the
    /// inclusion of its generators into `E`.
    pub fn source_eliminate(&self, v: VertexId) -> Result<(Graph, GeneratorTable), GraphError> {
        let name = self.vertex_name(v).to_string();
        if !self.in_classes(v).is_empty() {
            return Err(GraphError::NotASource(name));
        }
        if self.is_sink(v) {
            return Err(GraphError::IsASink(name));
        }
        let mut bld = Builder::new();
        for w in self.vertex_ids().filter(|&w| w != v) {
            bld.vertex(self.vertex_name(w));
        }
        for c in self.classes().iter().filter(|c| c.src != v) {
            bld.class(
                &c.name,
                self.vertex_name(c.src),
                self.vertex_name(c.dst),
                c.multiplicity,
            );
        }
        let f = bld.finish();
        let table = GeneratorTable::by_name(&f, self);
        Ok((f, table))
    }

    /// Replaces an entry-free cycle `c = e₁⋯e_r` (based at `v₁`, the base
    /// of its canonical rotation) by a loop at a new vertex. Returns the new
    /// graph `F` and the map `θ` from the generators of `F` into `L(E)`.
    pub fn cycle_to_loop(&self, c: &Cycle) -> Result<(Graph, GeneratorTable), GraphError> {
        let c = Cycle::from_edges(self, c.edges().to_vec())?;
        if c.len() == 1 {
            return Ok((self.clone(), GeneratorTable::identity(self)));
        }
        let cyc = c.vertices(self);
        for &v in &cyc {
            if self.in_degree(v) != Some(1) {
                return Err(GraphError::HasEntry(self.vertex_name(v).to_string()));
            }
        }
        let on_cycle: VertexSet = cyc.iter().copied().collect();
        let mut taken = self.names();
        let hub = fresh_name("x", &mut taken);
        let loop_name = fresh_name("e'", &mut taken);

        let mut bld = Builder::new();
        for v in self.vertex_ids().filter(|v| !on_cycle.contains(v)) {
            bld.vertex(self.vertex_name(v));
        }
        bld.vertex(&hub);
        bld.class(&loop_name, &hub, &hub, Multiplicity::Finite(1));
        let mut exits: Vec<(String, ClassId, usize)> = Vec::new();
        for (cid, cl) in self.class_ids().zip(self.classes()) {
            if !on_cycle.contains(&cl.src) {
                bld.class(
                    &cl.name,
                    self.vertex_name(cl.src),
                    self.vertex_name(cl.dst),
                    cl.multiplicity,
                );
                continue;
            }
            if on_cycle.contains(&cl.dst) {
                // entry-freeness makes every class inside c⁰ a cycle edge
                continue;
            }
            let name = fresh_name(&format!("{}'", cl.name), &mut taken);
            bld.class(&name, &hub, self.vertex_name(cl.dst), cl.multiplicity);
            let i = cyc.iter().position(|&v| v == cl.src).unwrap();
            exits.push((name, cid, i));
        }
        let f = bld.finish();

        let mut vertices = vec![Vec::new(); f.vertex_count()];
        for v in f.vertex_ids() {
            let name = f.vertex_name(v);
            vertices[v.0 as usize] = if name == hub {
                vec![cyc[0]]
            } else {
                vec![self.vertex_id(name).unwrap()]
            };
        }
        let mut classes = vec![Vec::new(); f.classes().len()];
        for (cid, cl) in f.class_ids().zip(f.classes()) {
            classes[cid.0 as usize] = if cl.name == loop_name {
                let last = *c.edges().last().unwrap();
                vec![ClassTerm {
                    prefix: c.edges()[..c.len() - 1].to_vec(),
                    class: last.class,
                }]
            } else if let Some((_, orig, i)) = exits.iter().find(|(n, _, _)| *n == cl.name) {
                vec![ClassTerm {
                    prefix: c.edges()[..*i].to_vec(),
                    class: *orig,
                }]
            } else {
                vec![term(self, &cl.name)]
            };
        }
        Ok((f, GeneratorTable { vertices, classes }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn quotient_of_toe_by_sink() {
        let g = g_toe();
        let pair =
            AdmissiblePair::new(&g, g.parse_vertex_set(&["w"]).unwrap(), VertexSet::new()).unwrap();
        let (f, table) = g.quotient_graph(&pair).unwrap();
        assert_eq!(f, Graph::simple(&["v"], &[("e", "v", "v")]));
        assert!(table.vertices[g.vertex("w").unwrap().0 as usize].is_empty());
        assert!(table.classes[g.class_id("f").unwrap().0 as usize].is_empty());
    }

    #[test]
    fn trivial_quotient_is_identity() {
        for name in NAMES {
            let g = by_name(name).unwrap();
            let (f, table) = g.quotient_graph(&AdmissiblePair::trivial()).unwrap();
            assert_eq!(f, g);
            assert_eq!(table, GeneratorTable::identity(&g));
        }
    }

    #[test]
    fn omega_quotient_has_primed_sink() {
        let g = g_omega();
        let h = g.parse_vertex_set(&["h"]).unwrap();
        let (f, _) = g
            .quotient_graph(&AdmissiblePair::new(&g, h, VertexSet::new()).unwrap())
            .unwrap();
        let v = f.vertex("v").unwrap();
        let vp = f.vertex("v'").unwrap();
        assert!(f.is_sink(vp));
        assert!(f.is_regular(v));
        let s_full = g.parse_vertex_set(&["v"]).unwrap();
        let (f2, _) = g
            .quotient_graph(
                &AdmissiblePair::new(&g, g.parse_vertex_set(&["h"]).unwrap(), s_full).unwrap(),
            )
            .unwrap();
        assert_eq!(f2.vertex_count(), 2);
    }

    #[test]
    fn restriction_examples() {
        let g = g_toe();
        let r = g
            .restricted_graph(&g.parse_vertex_set(&["w"]).unwrap())
            .unwrap();
        assert_eq!(r, Graph::simple(&["w"], &[]));
        assert_eq!(g.restricted_graph(&g.all_vertices()).unwrap(), g);
        assert_eq!(
            g.restricted_graph(&g.parse_vertex_set(&["v"]).unwrap()),
            Err(GraphError::NotHereditary)
        );
    }

    #[test]
    fn source_elimination_examples() {
        let chain = Graph::simple(&["u", "v", "w"], &[("a", "u", "v"), ("b", "v", "w")]);
        let (f, _) = chain.source_eliminate(chain.vertex("u").unwrap()).unwrap();
        assert_eq!(f, Graph::simple(&["v", "w"], &[("b", "v", "w")]));
        let t = g_toe();
        assert_eq!(
            t.source_eliminate(t.vertex("v").unwrap()),
            Err(GraphError::NotASource("v".into()))
        );
        let star = Graph::simple(
            &["s", "a", "b", "c"],
            &[("x", "s", "a"), ("y", "s", "b"), ("z", "s", "c")],
        );
        let (f, _) = star.source_eliminate(star.vertex("s").unwrap()).unwrap();
        assert_eq!(f.vertex_count(), 3);
        assert!(f.classes().is_empty());
        let (f, _) = chain.source_eliminate(chain.vertex("u").unwrap()).unwrap();
        assert_eq!(
            f.source_eliminate(f.vertex("v").unwrap())
                .unwrap()
                .0
                .vertex_count(),
            1
        );
    }

    #[test]
    fn cycle_to_loop_on_2cyc() {
        let g = g_2cyc();
        let c = Cycle::parse(&g, "a b").unwrap();
        let (f, table) = g.cycle_to_loop(&c).unwrap();
        assert_eq!(
            f,
            Graph::simple(&["x", "w"], &[("e'", "x", "x"), ("d'", "x", "w")])
        );
        let d = f.class_id("d'").unwrap();
        let img = &table.classes[d.0 as usize];
        assert_eq!(img[0].prefix, vec![Edge::new(g.class_id("a").unwrap(), 0)]);
        assert_eq!(img[0].class, g.class_id("d").unwrap());
        assert_eq!(
            table.vertices[f.vertex("x").unwrap().0 as usize],
            vec![g.vertex("u").unwrap()]
        );
    }

    #[test]
    fn cycle_to_loop_guards() {
        let g = g_loop();
        let (f, _) = g.cycle_to_loop(&Cycle::parse(&g, "c").unwrap()).unwrap();
        assert_eq!(f, g);
        let entry = Graph::simple(
            &["s", "u", "v"],
            &[("i", "s", "u"), ("a", "u", "v"), ("b", "v", "u")],
        );
        assert_eq!(
            entry.cycle_to_loop(&Cycle::parse(&entry, "a b").unwrap()),
            Err(GraphError::HasEntry("u".into()))
        );
    }
}
