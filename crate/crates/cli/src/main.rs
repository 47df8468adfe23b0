use std::error::Error;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use leavitt_core::chen::{ChenModule, ChenOptions, LazyPath, ModuleElement};
use leavitt_core::expr::normal_form;
use leavitt_core::graph::random::{random_graph, RandomGraphParams};
use leavitt_core::graph::{Graph, UltimatelyPeriodicPath, VertexKind};
use leavitt_core::poly::{LaurentPoly, Poly};
use leavitt_core::scalar::Field;
use leavitt_core::spectrum::spectrum_chen_bijection_report;
use leavitt_core::structure::{
    counterexample_package, is_v_finitely_presented, main_theorem_report, reduce_pipeline,
    two_cycles_at_a_vertex, PathSpec, Witness, FP_DEPTH,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "leavitt",
    version,
    about = "Symbolic workbench for Leavitt path algebras of finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Graph JSON file.
    #[arg(long)]
    graph: Option<std::path::PathBuf>,
    /// Seed for a random graph when no --graph is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient field: q or gf<p>.
    #[arg(long, default_value = "q")]
    field: String,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Graph invariants and the five equivalent conditions.
    Analyze(Common),
    /// Normal form of an algebra expression.
    Nf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
    },
    /// Primitive ideals and the Chen modules realizing them.
    Prim {
        #[command(flatten)]
        common: Common,
        /// Irreducible polynomial for type I ideals (repeatable).
        #[arg(long)]
        irr: Vec<String>,
    },
    /// Action of an algebra element on a Chen module basis vector.
    ChenAct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long)]
        expr: String,
        /// Basis vector; the canonical generator by default.
        #[arg(long)]
        on: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Annihilator of a Chen module, verified on basis vectors.
    ChenAnn {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Whether V_[p] is finitely presented.
    CheckFp {
        #[command(flatten)]
        common: Common,
        /// Ultimately periodic path `prefix; period`.
        #[arg(long, conflicts_with = "stream", required_unless_present = "stream")]
        path: Option<String>,
        /// Built-in edge stream.
        #[arg(long)]
        stream: Option<String>,
        #[arg(long, default_value_t = FP_DEPTH)]
        depth: usize,
    },
    /// Morita reduction: source elimination, then cycles to loops.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Stop after eliminating sources.
        #[arg(long)]
        no_collapse: bool,
    },
    /// Simple finite-dimensional module that induces a non-Chen simple.
    Counterexample {
        #[command(flatten)]
        common: Common,
        /// Vertex carrying the two cycles; the first such vertex by default.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Path counts by length and the growth class.
    Growth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Graphviz rendering (canonical JSON with --json).
    ExportDot(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Analyze(c) | Command::ExportDot(c) => c,
            Command::Nf { common, .. }
            | Command::Prim { common, .. }
            | Command::ChenAct { common, .. }
            | Command::ChenAnn { common, .. }
            | Command::CheckFp { common, .. }
            | Command::Reduce { common, .. }
            | Command::Counterexample { common, .. }
            | Command::Growth { common, .. } => common,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(Box<dyn Error>),
}

impl<E: Error + 'static> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(Box::new(e))
    }
}

fn load_graph(c: &Common) -> Result<Arc<Graph>, Failure> {
    match (&c.graph, c.seed) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Domain(format!("{}: {e}", path.display()).into()))?;
            Ok(Arc::new(Graph::from_json(&text)?))
        }
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Arc::new(random_graph(
                &mut rng,
                &RandomGraphParams::finite(5, 8),
            )))
        }
        (None, None) => Err(Failure::Usage(
            "one of --graph or --seed is required".into(),
        )),
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialize")
}

fn parse_poly(src: &str, field: &Field) -> Res<Poly> {
    LaurentPoly::parse(src, field)?
        .associate()
        .ok_or_else(|| format!("'{src}' is the zero polynomial").into())
}

fn analyze(g: &Arc<Graph>, field: &Field, json: bool) -> Res<String> {
    #[derive(Serialize)]
    struct Analysis {
        schema: u32,
        vertices: Vec<(String, VertexKind)>,
        cycles: Vec<String>,
        hereditary_saturated: Vec<String>,
        one_cycle_per_vertex: bool,
        condition_l: bool,
        downward_directed: bool,
        theorem: Option<leavitt_core::structure::MainTheoremReport>,
    }
    let theorem = if g.has_omega() {
        None
    } else {
        Some(main_theorem_report(g, field)?)
    };
    let a = Analysis {
        schema: 1,
        vertices: g
            .vertex_ids()
            .map(|v| (g.vertex_name(v).to_string(), g.kind(v)))
            .collect(),
        cycles: g.enumerate_cycles().iter().map(|c| c.display(g)).collect(),
        hereditary_saturated: g
            .enumerate_hereditary_saturated()?
            .iter()
            .map(|h| g.format_vertex_set(h))
            .collect(),
        one_cycle_per_vertex: g.one_cycle_per_vertex(),
        condition_l: g.has_condition_l(),
        downward_directed: g.is_downward_directed(),
        theorem,
    };
    if json {
        return Ok(to_json(&a));
    }
    let mut out = String::new();
    let kinds: Vec<String> = a
        .vertices
        .iter()
        .map(|(n, k)| {
            let k = match k {
                VertexKind::Sink => "sink",
                VertexKind::Regular => "regular",
                VertexKind::InfiniteEmitter => "infinite emitter",
            };
            format!("{n} {k}")
        })
        .collect();
    writeln!(out, "vertices: {}", kinds.join(", "))?;
    writeln!(
        out,
        "cycles: {}",
        if a.cycles.is_empty() {
            "none".into()
        } else {
            a.cycles.join(", ")
        }
    )?;
    writeln!(
        out,
        "hereditary saturated: {}",
        a.hereditary_saturated.join(", ")
    )?;
    writeln!(out, "one cycle per vertex: {}", a.one_cycle_per_vertex)?;
    writeln!(out, "condition (L): {}", a.condition_l)?;
    writeln!(out, "downward directed: {}", a.downward_directed)?;
    match &a.theorem {
        None => writeln!(out, "conditions: not evaluated (infinite emitters)")?,
        Some(t) => {
            for c in &t.conditions {
                let basis = match c.basis {
                    leavitt_core::structure::Basis::Decision => "decided",
                    leavitt_core::structure::Basis::Equivalence => "by equivalence",
                };
                writeln!(out, "({}) {}: {} [{basis}]", c.id, c.statement, c.holds)?;
                for e in &c.evidence {
                    writeln!(out, "    {e}")?;
                }
            }
            writeln!(out, "evidence consistent: {}", t.consistent)?;
        }
    }
    Ok(out)
}

fn run(cmd: &Command) -> Result<String, Failure> {
    let common = cmd.common();
    let field = Field::parse(&common.field).map_err(|e| Failure::Usage(e.to_string()))?;
    let g = load_graph(common)?;
    let json = common.json;
    let out = match cmd {
        Command::Analyze(_) => analyze(&g, &field, json).map_err(Failure::Domain)?,
        Command::Nf { expr, .. } => {
            let x = normal_form(expr, &g, &field)?;
            format!("{}\n", x.display())
        }
        Command::Prim { irr, .. } => {
            let samples = irr
                .iter()
                .map(|s| parse_poly(s, &field))
                .collect::<Res<Vec<_>>>()
                .map_err(Failure::Domain)?;
            let report =
                spectrum_chen_bijection_report(&g, &field, &samples, ChenOptions::default())?;
            if json {
                to_json(&report)
            } else {
                let mut out = String::new();
                for e in &report.entries {
                    let status = if e.matched { "matched" } else { "MISMATCH" };
                    let _ = writeln!(
                        out,
                        "{} | {} | {} | {status}",
                        e.descriptor, e.module, e.annihilator
                    );
                }
                for d in &report.uninstantiated {
                    let _ = writeln!(out, "{d} | (pass --irr to instantiate)");
                }
                let _ = writeln!(out, "primitive algebra: {}", report.primitive_algebra);
                out
            }
        }
        Command::ChenAct {
            module,
            expr,
            on,
            depth,
            ..
        } => {
            let opts = ChenOptions {
                depth: depth.unwrap_or(ChenOptions::default().depth),
                ..Default::default()
            };
            let m = ChenModule::parse(&g, &field, module, opts)?;
            let a = normal_form(expr, &g, &field)?;
            let x = match on {
                Some(b) => ModuleElement::basis(m.parse_basis(b)?, m.scalars().one()),
                None => m.generator_element(),
            };
            format!("{}\n", m.display_element(&m.act(&a, &x)?))
        }
        Command::ChenAnn { module, depth, .. } => {
            let m = ChenModule::parse(&g, &field, module, ChenOptions::default())?;
            let d = m.annihilator()?;
            let verified = m.verify_annihilator(&d, *depth);
            if json {
                #[derive(Serialize)]
                struct Ann {
                    schema: u32,
                    module: String,
                    annihilator: String,
                    graded: bool,
                    generators: Vec<String>,
                    depth: usize,
                    verified: bool,
                }
                let generators = d
                    .generators(&g, &field)?
                    .into_iter()
                    .map(|(n, _)| n)
                    .collect();
                to_json(&Ann {
                    schema: 1,
                    module: m.display(),
                    annihilator: d.display(&g),
                    graded: d.is_graded(),
                    generators,
                    depth: *depth,
                    verified,
                })
            } else {
                format!("{}\nverified to depth {depth}: {verified}\n", d.display(&g))
            }
        }
        Command::CheckFp {
            path,
            stream,
            depth,
            ..
        } => {
            let spec = match (path, stream) {
                (Some(p), _) => PathSpec::Periodic(UltimatelyPeriodicPath::parse(&g, p)?),
                (None, Some(s)) => PathSpec::Lazy {
                    path: LazyPath::builtin(&g, s)?,
                    depth: *depth,
                },
                (None, None) => unreachable!("clap requires one of them"),
            };
            let verdict = is_v_finitely_presented(&g, &spec)?;
            if json {
                to_json(&verdict)
            } else {
                format!("{verdict}\n")
            }
        }
        Command::Reduce { no_collapse, .. } => {
            let r = reduce_pipeline(&g, !no_collapse)?;
            let report = r.report();
            if json {
                to_json(&report)
            } else {
                let mut out = String::new();
                for s in &report.steps {
                    let _ = writeln!(
                        out,
                        "{} {}: {} -> {} vertices, {} relations checked, split off {}",
                        s.kind,
                        s.target,
                        s.vertices_before,
                        s.vertices_after,
                        s.relations_checked,
                        s.split_off
                    );
                    for f in &s.fullness {
                        let _ = writeln!(out, "    {f}");
                    }
                }
                let _ = writeln!(out, "t = {}", report.t);
                let _ = writeln!(out, "{}", r.graph.to_json());
                out
            }
        }
        Command::Counterexample { vertex, .. } => {
            let (v, gc, hc) = match vertex {
                None => two_cycles_at_a_vertex(&g),
                Some(name) => {
                    let v = g.vertex(name)?;
                    let at_v: Vec<_> = g
                        .enumerate_cycles()
                        .into_iter()
                        .filter(|c| c.vertex_set(&g).contains(&v))
                        .collect();
                    match &at_v[..] {
                        [a, b, ..] => Some((v, a.clone(), b.clone())),
                        _ => None,
                    }
                }
            }
            .ok_or_else(|| {
                Failure::Domain("no vertex is the base of two distinct cycles".into())
            })?;
            let p = counterexample_package(&g, v, &gc, &hc, &field)?;
            if json {
                to_json(&p)
            } else {
                let mut out = String::new();
                let _ = writeln!(out, "vertex: {}", p.vertex);
                let _ = writeln!(out, "cycles: {}, {}", p.cycles[0], p.cycles[1]);
                let _ = writeln!(
                    out,
                    "dimension: {} (expected {})",
                    p.module.dimension, p.expected_dimension
                );
                for (e, m) in &p.module.maps {
                    let _ = writeln!(out, "{e} = {m}");
                }
                let _ = writeln!(
                    out,
                    "simplicity={} ({}, {} checked)",
                    p.simplicity.simple, p.simplicity.mode, p.simplicity.checked
                );
                if p.distinction.vacuous {
                    let _ = writeln!(
                        out,
                        "no cycle of length {}: distinguished by dimension",
                        p.distinction.dimension
                    );
                }
                for c in &p.distinction.comparisons {
                    let w = match &c.witness {
                        Some(Witness::Rank { edge, .. }) => edge.clone(),
                        Some(Witness::Dimension { vertex, .. }) => format!("dim at {vertex}"),
                        None => "none".into(),
                    };
                    let _ = writeln!(out, "non-Chen witness={w} (against cycle {})", c.cycle);
                }
                out
            }
        }
        Command::Growth { depth, .. } => {
            let counts = g.count_paths(*depth)?;
            let class = g.growth_class()?;
            if json {
                #[derive(Serialize)]
                struct Growth {
                    schema: u32,
                    counts: Vec<String>,
                    class: leavitt_core::graph::GrowthClass,
                }
                to_json(&Growth {
                    schema: 1,
                    counts: counts.iter().map(|c| c.to_string()).collect(),
                    class,
                })
            } else {
                let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                format!("paths by length: {}\ngrowth: {class:?}\n", counts.join(" ")).to_lowercase()
            }
        }
        Command::ExportDot(_) => {
            if json {
                format!("{}\n", g.to_json())
            } else {
                g.to_dot()
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
