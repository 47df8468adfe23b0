use super::*;
use crate::expr::normal_form;
use crate::graph::fixtures::*;
use crate::graph::VertexSet;

fn q() -> Field {
    Field::Rational
}

fn module(g: &Arc<Graph>, text: &str) -> ChenModule {
    ChenModule::parse(g, &q(), text, ChenOptions::default()).unwrap()
}

fn act_text(m: &ChenModule, a: &str, on: &str) -> String {
    let a = normal_form(a, m.graph(), m.field()).unwrap();
    let b = m.parse_basis(on).unwrap();
    m.display_element(&m.act_basis(&a, &b).unwrap())
}

fn set(g: &Graph, names: &[&str]) -> VertexSet {
    g.parse_vertex_set(names).unwrap()
}

#[test]
fn sink_module_action() {
    let g = Arc::new(g_toe());
    let n = module(&g, "N(w)");
    assert_eq!(act_text(&n, "e*", "e f"), "f");
    assert_eq!(act_text(&n, "f*", "e f"), "0");
    assert_eq!(act_text(&n, "e", "e f"), "e e f");
    assert_eq!(act_text(&n, "f*", "f"), "w");
    assert_eq!(act_text(&n, "e*", "w"), "0");
    assert_eq!(act_text(&n, "v", "f"), "f");
    assert_eq!(act_text(&n, "w", "f"), "0");
    assert_eq!(n.display(), "N(w)");
}

#[test]
fn sink_validation() {
    let g = Arc::new(g_toe());
    let err = ChenModule::parse(&g, &q(), "N(v)", ChenOptions::default()).unwrap_err();
    assert_eq!(err, ChenError::NotASink("v".into()));
    assert!(n_parse_err(&g, "N(w").is_err());
}

fn n_parse_err(g: &Arc<Graph>, text: &str) -> Result<ChenModule, ChenError> {
    ChenModule::parse(g, &q(), text, ChenOptions::default())
}

#[test]
fn periodic_action_on_loop() {
    let g = Arc::new(g_loop());
    let m = module(&g, "V(c)");
    assert_eq!(act_text(&m, "c*", "c"), "(c)^∞");
    assert_eq!(act_text(&m, "c", "c"), "(c)^∞");
    assert_eq!(act_text(&m, "v - c", "c"), "0");
}

#[test]
fn twisted_cube_is_identity() {
    let g = Arc::new(g_loop());
    let m = module(&g, "Vf(c; 1 + x + x^2)");
    let x = m.twist().unwrap();
    // independent arithmetic: x³ = (x - 1)(x² + x + 1) + 1
    let k = q();
    let (quo, rem) = Poly::from_i64s(&k, &[0, 0, 0, 1]).div_rem(&Poly::from_i64s(&k, &[1, 1, 1]));
    assert_eq!(quo, Poly::from_i64s(&k, &[-1, 1]));
    assert_eq!(rem, Poly::from_i64s(&k, &[1]));
    assert_eq!(act_text(&m, "c c c", "c"), "(c)^∞");
    let once = m
        .act_basis(&normal_form("c", &g, &k).unwrap(), &m.generator())
        .unwrap();
    assert_eq!(once.coeff(&m.generator()), Some(&x));
    let back = m
        .act_basis(&normal_form("c*", &g, &k).unwrap(), &m.generator())
        .unwrap();
    assert_eq!(back.coeff(&m.generator()), Some(&x.inv().unwrap()));
}

#[test]
fn twisted_validation() {
    let g = Arc::new(g_rose2());
    let err = n_parse_err(&g, "Vf(g; 1 + x + x^2)").unwrap_err();
    assert_eq!(err, ChenError::NotExclusive("g".into()));
    let t = Arc::new(g_toe());
    assert!(matches!(
        n_parse_err(&t, "Vf(e; 1 - x)"),
        Err(ChenError::UntwistedPolynomial(_))
    ));
    assert!(matches!(
        n_parse_err(&t, "Vf(e; x - 1)"),
        Err(ChenError::UntwistedPolynomial(_))
    ));
    assert!(matches!(
        n_parse_err(&t, "Vf(e; 1 - x^2)"),
        Err(ChenError::ReduciblePolynomial(_))
    ));
    let m = module(&t, "Vf(e; 1 + x + x^2)");
    assert_eq!(m.scalars().to_string(), "Q[x]/(1 + x + x^2)");
    // irreducibility of this quartic over Q is undecided without the flag
    assert!(matches!(
        n_parse_err(&t, "Vf(e; 1 + x^4)"),
        Err(ChenError::ReduciblePolynomial(_))
    ));
    let opts = ChenOptions {
        assume_irreducible: true,
        ..ChenOptions::default()
    };
    assert!(ChenModule::parse(&t, &q(), "Vf(e; 1 + x^4)", opts).is_ok());
}

#[test]
fn annihilators_of_toe_modules() {
    let g = Arc::new(g_toe());
    let n = module(&g, "N(w)");
    let d = n.annihilator().unwrap();
    assert_eq!(d, AnnihilatorDescriptor::Graded(AdmissiblePair::trivial()));
    assert!(n.verify_annihilator(&d, 8));
    let wrong = AnnihilatorDescriptor::Graded(AdmissiblePair {
        h: set(&g, &["v"]),
        s: VertexSet::new(),
    });
    assert!(!n.verify_annihilator(&wrong, 8));

    let v = module(&g, "V(e)");
    let d = v.annihilator().unwrap();
    assert_eq!(d.display(&g), "I(H={w}, S={}, f=1 - x, c=e)");
    assert!(v.verify_annihilator(&d, 6));

    let t = module(&g, "Vf(e; 1 + x + x^2)");
    let d = t.annihilator().unwrap();
    assert_eq!(d.display(&g), "I(H={w}, S={}, f=1 + x + x^2, c=e)");
    assert!(t.verify_annihilator(&d, 8));
    // the untwisted relation does not kill the twisted module
    let untwisted = v.annihilator().unwrap();
    assert!(!t.verify_annihilator(&untwisted, 8));
}

#[test]
fn non_exclusive_path_is_graded() {
    let g = Arc::new(g_rose2());
    let m = module(&g, "V(g h)");
    let d = m.annihilator().unwrap();
    assert_eq!(d, AnnihilatorDescriptor::Graded(AdmissiblePair::trivial()));
    assert!(m.verify_annihilator(&d, 5));
    assert_eq!(act_text(&m, "h*", "g h"), "0");
    assert_eq!(act_text(&m, "g*", "g h"), "(h g)^∞");
    assert_eq!(act_text(&m, "h", "g h"), "(h g)^∞");
    assert_eq!(act_text(&m, "h", "h g"), "h (h g)^∞");
}

#[test]
fn emitter_modules() {
    let g = Arc::new(g_omega_loop());
    let nb = module(&g, "NB(v)");
    let d = nb.annihilator().unwrap();
    assert_eq!(d.display(&g), "I(H={h}, S={})");
    assert!(nb.verify_annihilator(&d, 5));
    assert_eq!(nb.carrier_graph().vertex_name(nb.sink().unwrap()), "v'");
    assert_eq!(act_text(&nb, "l", "l'"), "l l'");
    assert_eq!(act_text(&nb, "k[3]", "l'"), "0");
    // v^H = v - l l* is the generator left out of the annihilator
    let gap = gap_element(&g, &q(), g.vertex("v").unwrap(), &set(&g, &["h"]));
    let x = nb.act_basis(&gap, &nb.generator()).unwrap();
    assert_eq!(nb.display_element(&x), "v'");
    assert!(matches!(
        n_parse_err(&g, "NH(v)"),
        Err(ChenError::WrongEmitterShape(..))
    ));

    let s = Arc::new(g_omega_sinkish());
    let nh = module(&s, "NH(v)");
    let d = nh.annihilator().unwrap();
    assert_eq!(d.display(&s), "I(H={w}, S={})");
    assert!(nh.verify_annihilator(&d, 4));
    assert_eq!(act_text(&nh, "a", "v"), "a");
    assert!(matches!(
        n_parse_err(&s, "NB(v)"),
        Err(ChenError::WrongEmitterShape(..))
    ));
    assert!(matches!(
        n_parse_err(&s, "NB(u)"),
        Err(ChenError::WrongEmitterShape(..))
    ));

    let o = Arc::new(g_omega());
    let nh = module(&o, "NH(v)");
    assert_eq!(nh.annihilator().unwrap().display(&o), "I(H={h,u}, S={})");
}

#[test]
fn lazy_tower_module() {
    let g = Arc::new(g_rose2());
    let opts = ChenOptions {
        depth: 50,
        ..ChenOptions::default()
    };
    let m = ChenModule::parse(&g, &q(), "V(gh-tower)", opts).unwrap();
    assert_eq!(m.annihilator(), Err(ChenError::UndecidableLazyTail(50)));
    let k = q();
    let gen = m.generator();
    let x = m
        .act_basis(&normal_form("g*", &g, &k).unwrap(), &gen)
        .unwrap();
    assert_eq!(m.display_element(&x), "gh-tower[1..]");
    let back = m.act(&normal_form("g", &g, &k).unwrap(), &x).unwrap();
    assert_eq!(m.display_element(&back), "gh-tower[0..]");
    let y = m
        .act_basis(&normal_form("h g*", &g, &k).unwrap(), &gen)
        .unwrap();
    assert_eq!(m.display_element(&y), "h gh-tower[1..]");
    assert!(m
        .act_basis(&normal_form("h*", &g, &k).unwrap(), &gen)
        .unwrap()
        .is_zero());
    let deep = BasisElement::Lazy {
        prefix: Vec::new(),
        offset: 49,
    };
    let hh = normal_form("h* h*", &g, &k).unwrap();
    assert_eq!(
        m.act_basis(&hh, &deep),
        Err(ChenError::LazyDepthExceeded(50))
    );
}

#[test]
fn isomorphism_examples() {
    let lp = Arc::new(g_loop());
    assert!(are_isomorphic(
        &module(&lp, "V(c)"),
        &module(&lp, "V(c; c)")
    ));
    let toe = Arc::new(g_toe());
    assert!(!are_isomorphic(
        &module(&toe, "N(w)"),
        &module(&toe, "V(e)")
    ));
    assert!(!are_isomorphic(
        &module(&toe, "Vf(e; 1 + x + x^2)"),
        &module(&toe, "V(e)")
    ));
    assert!(are_isomorphic(
        &module(&toe, "Vf(e; 1 + x + x^2)"),
        &module(&toe, "Vf(e; 2 + 2x + 2x^2)")
    ));
    assert!(!are_isomorphic(
        &module(&toe, "Vf(e; 1 + x + x^2)"),
        &module(&toe, "Vf(e; 1 + x^2)")
    ));
    let rose = Arc::new(g_rose2());
    assert!(are_isomorphic(
        &module(&rose, "V(g h)"),
        &module(&rose, "V(h g)")
    ));
    assert!(!are_isomorphic(
        &module(&rose, "V(g)"),
        &module(&rose, "V(h)")
    ));
    let tower = module(&rose, "V(gh-tower)");
    assert!(are_isomorphic(&tower, &tower));
    assert!(!are_isomorphic(&tower, &module(&rose, "V(gh-tower)")));
    assert!(!are_isomorphic(&tower, &module(&rose, "V(g)")));
}

#[test]
fn induced_modules_keep_their_datum() {
    let toe = Arc::new(g_toe());
    let h = set(&toe, &["w"]);
    let sub = Arc::new(toe.restricted_graph(&h).unwrap());
    let lifted = induce_from_restriction(&toe, &h, &module(&sub, "N(w)")).unwrap();
    assert_eq!(lifted.display(), "N(w)");
    assert!(Arc::ptr_eq(lifted.graph(), &toe));

    let all = toe.all_vertices();
    let same = induce_from_restriction(&toe, &all, &module(&toe, "V(e)")).unwrap();
    assert!(are_isomorphic(&same, &module(&toe, "V(e)")));

    let c = Arc::new(g_2cyc());
    let h = set(&c, &["w"]);
    let sub = Arc::new(c.restricted_graph(&h).unwrap());
    let lifted = induce_from_restriction(&c, &h, &module(&sub, "N(w)")).unwrap();
    let basis: Vec<String> = lifted
        .basis_up_to(3)
        .unwrap()
        .iter()
        .map(|b| lifted.display_basis(b))
        .collect();
    for p in ["w", "d", "a d", "b a d"] {
        assert!(basis.contains(&p.to_string()), "{p} missing from {basis:?}");
    }
    assert_eq!(act_text(&lifted, "b", "a d"), "b a d");
    assert!(matches!(
        induce_from_restriction(&c, &set(&c, &["u"]), &module(&sub, "N(w)")),
        Err(ChenError::Graph(GraphError::NotHereditary))
    ));
    assert!(induce_from_restriction(&c, &set(&c, &["u", "v", "w"]), &module(&c, "V(a b)")).is_ok());
}

#[test]
fn basis_enumeration_is_canonical() {
    let g = Arc::new(g_2cyc());
    let m = module(&g, "V(a b)");
    let basis = m.basis_up_to(4).unwrap();
    let text: Vec<String> = basis.iter().map(|b| m.display_basis(b)).collect();
    assert_eq!(text, vec!["(a b)^∞", "(b a)^∞"]);
    let rose = Arc::new(g_rose2());
    let m = module(&rose, "V(g)");
    for b in m.basis_up_to(4).unwrap() {
        let BasisElement::Periodic(p) = &b else {
            panic!()
        };
        assert_ne!(p.prefix().last(), p.period().last());
    }
    assert_eq!(m.basis_up_to(3).unwrap().len(), 1 + 1 + 2 + 4);
}
