use std::sync::Arc;

use leavitt_core::algebra::LpaElement;
use leavitt_core::chen::{ChenModule, ChenOptions, ModuleElement};
use leavitt_core::graph::fixtures::*;
use leavitt_core::graph::random::{random_graph, RandomGraphParams};
use leavitt_core::graph::{Cycle, Graph};
use leavitt_core::poly::Poly;
use leavitt_core::scalar::Field;
use leavitt_core::spectrum::{enumerate_prim_ideals, realize_chen, PrimitiveIdealDescriptor};
use leavitt_core::structure::{
    cycle_lengths, is_simple_constructive, is_simple_exhaustive, main_theorem_report,
    reduce_pipeline, FinDimModule, FpVerdict, Matrix, MoritaStepKind,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(seed: u64, max_vertices: usize, max_edges: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph(
        &mut rng,
        &RandomGraphParams::finite(max_vertices, max_edges),
    )
}

/// A word in vertices, edges and ghosts, chosen by index.
fn word(g: &Arc<Graph>, k: &Field, picks: &[usize]) -> LpaElement {
    let edges = g.edges_sampled(1);
    let n = g.vertex_count();
    picks.iter().fold(LpaElement::one(g, k), |acc, &i| {
        let i = i % (n + 2 * edges.len());
        let x = if i < n {
            LpaElement::vertex(g, k, g.vertex_ids().nth(i).unwrap())
        } else if i < n + edges.len() {
            LpaElement::edge(g, k, edges[i - n])
        } else {
            LpaElement::ghost(g, k, edges[i - n - edges.len()])
        };
        &acc * &x
    })
}

const MODULES: [(&str, &str); 6] = [
    ("toe", "N(w)"),
    ("toe", "V(e)"),
    ("rose2", "V(g h)"),
    ("2cyc", "V(a b)"),
    ("loop", "Vf(c; 1 + x + x^2)"),
    ("toe", "Vf(e; 1 + x)"),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chen_action_is_a_module_action(
        which in 0..MODULES.len(),
        a in prop::collection::vec(0usize..64, 1..4),
        b in prop::collection::vec(0usize..64, 1..4),
        depth in 0usize..4,
    ) {
        let k = Field::Rational;
        let (graph, text) = MODULES[which];
        let g = Arc::new(by_name(graph).unwrap());
        let m = ChenModule::parse(&g, &k, text, ChenOptions::default()).unwrap();
        let (a, b) = (word(&g, &k, &a), word(&g, &k, &b));
        for x in m.basis_up_to(depth).unwrap() {
            let x = ModuleElement::basis(x, m.scalars().one());
            let ab = m.act(&(&a * &b), &x).unwrap();
            prop_assert_eq!(&ab, &m.act(&a, &m.act(&b, &x).unwrap()).unwrap());
            let sum = m.act(&(&a + &b), &x).unwrap();
            prop_assert_eq!(sum, m.act(&a, &x).unwrap().add(&m.act(&b, &x).unwrap()));
            prop_assert_eq!(m.act(&LpaElement::one(&g, &k), &x).unwrap(), x);
        }
    }

    #[test]
    fn realized_ideals_match(seed in any::<u64>()) {
        let k = Field::Rational;
        let g = Arc::new(seeded(seed, 4, 6));
        let f = Poly::from_i64s(&k, &[1, 1]);
        for d in enumerate_prim_ideals(&g).unwrap() {
            let p = match d {
                PrimitiveIdealDescriptor::TypeI { .. } => d.instantiate(&f),
                _ => d,
            };
            let m = realize_chen(&g, &k, &p, ChenOptions::default()).unwrap();
            prop_assert_eq!(m.annihilator().unwrap(), p.ideal(&g).unwrap().unwrap());
        }
    }

    #[test]
    fn simplicity_modes_agree(
        n in 1usize..5,
        arcs in prop::collection::vec((0usize..5, 0usize..5, 1i64..3), 0..7),
        support in prop::collection::vec(any::<bool>(), 5),
        p in prop::sample::select(vec![2u64, 3]),
    ) {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edge_names: Vec<String> = (0..arcs.len()).map(|i| format!("a{i}")).collect();
        let spec: Vec<(&str, &str, &str)> = arcs
            .iter()
            .zip(&edge_names)
            .map(|(&(s, d, _), name)| (name.as_str(), names[s % n].as_str(), names[d % n].as_str()))
            .collect();
        let vs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = Arc::new(Graph::simple(&vs, &spec));
        let k = Field::prime(p).unwrap();
        let dims: Vec<usize> = (0..n).map(|i| usize::from(support[i])).collect();
        let mut m = FinDimModule::new(&g, &k, dims.clone());
        for (&(s, d, c), name) in arcs.iter().zip(&edge_names) {
            if dims[s % n] == 1 && dims[d % n] == 1 {
                let mut mat = Matrix::zeros(&k, 1, 1);
                mat.set(0, 0, k.from_i64(c));
                m.set_map(g.parse_edge(name).unwrap(), mat);
            }
        }
        let ex = is_simple_exhaustive(&m).unwrap();
        let co = is_simple_constructive(&m).unwrap();
        prop_assert_eq!(ex.simple, co.simple);
    }

    #[test]
    fn reduction_keeps_cycle_lengths(seed in any::<u64>()) {
        let g = seeded(seed, 5, 8);
        let r = reduce_pipeline(&g, true).unwrap();
        let mut expected = cycle_lengths(&g);
        for s in &r.steps {
            if let MoritaStepKind::CycleToLoop(c) = &s.kind {
                let i = expected.iter().position(|&l| l == Cycle::len(c)).unwrap();
                expected[i] = 1;
            }
        }
        expected.sort_unstable();
        prop_assert_eq!(cycle_lengths(&r.graph), expected);
        prop_assert!(r.graph.sources().iter().all(|&v| r.graph.is_sink(v)));
        prop_assert!(r.steps.iter().all(|s| s.theta.verify().is_ok()));
    }

    #[test]
    fn graph_json_round_trips(seed in any::<u64>()) {
        let g = seeded(seed, 6, 10);
        let text = g.to_json();
        let back = Graph::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, g);
    }
}

#[test]
fn fixtures_with_one_cycle_per_vertex() {
    for name in ["loop", "toe", "2cyc", "line"] {
        let g = Arc::new(by_name(name).unwrap());
        assert!(g.one_cycle_per_vertex(), "{name}");
        let r = main_theorem_report(&g, &Field::prime(3).unwrap()).unwrap();
        assert!(
            r.fp_checks.iter().all(|c| c.verdict == FpVerdict::True),
            "{name}"
        );
        assert!(
            r.spectrum.all_matched && r.spectrum.injective == Some(true),
            "{name}"
        );
        assert!(r.consistent, "{name}");
    }
}
