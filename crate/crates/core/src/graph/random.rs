//! Seeded random multigraphs for property tests and sampling.

use rand::Rng;

use super::{EdgeSpec, Graph, GraphSpec, MultiplicitySpec};

#[derive(Clone, Copy, Debug)]
pub struct RandomGraphParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Largest finite multiplicity of a class.
    pub max_multiplicity: u64,
    /// Probability that a class is an ω-class.
    pub omega_probability: f64,
}

impl RandomGraphParams {
    pub fn finite(max_vertices: usize, max_edges: usize) -> Self {
        RandomGraphParams {
            max_vertices,
            max_edges,
            max_multiplicity: 2,
            omega_probability: 0.0,
        }
    }
}

/// Vertices `v0, v1, …` and classes `a0, a1, …` with uniformly chosen
/// endpoints. Multiplicities above one are drawn with probability 1/5.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, params: &RandomGraphParams) -> Graph {
    let n = rng.gen_range(1..=params.max_vertices.max(1));
    let m = rng.gen_range(0..=params.max_edges);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..m)
        .map(|i| {
            let src = &vertices[rng.gen_range(0..n)];
            let dst = &vertices[rng.gen_range(0..n)];
            let multiplicity = if rng.gen_bool(params.omega_probability) {
                MultiplicitySpec::Omega
            } else if params.max_multiplicity > 1 && rng.gen_bool(0.2) {
                MultiplicitySpec::Count(rng.gen_range(2..=params.max_multiplicity))
            } else {
                MultiplicitySpec::Count(1)
            };
            EdgeSpec::new(&format!("a{i}"), src, dst, multiplicity)
        })
        .collect();
    Graph::from_spec(&GraphSpec { vertices, edges }).expect("generated graph is valid")
}
