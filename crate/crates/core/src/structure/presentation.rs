//! Finite presentations of the simple modules `L/(Lf(c)+M)` attached to a
//! loop `c` at a vertex `v` with `E⁰∖{v}` hereditary and saturated.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{in_graded_ideal, LpaElement};
use crate::error::{AlgebraError, StructureError};
use crate::expr::normal_form;
use crate::graph::{AdmissiblePair, Edge, Graph, VertexId, VertexSet};
use crate::poly::{Irreducibility, LaurentPoly, Poly};
use crate::scalar::Field;

/// One step `eᵢ*(c*)^{r+1} = eᵢ*(c*)^{r+1}f(c) − a₁eᵢ*(c*)^r − ⋯` of the
/// recursion, as text together with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionIdentity {
    pub edge: String,
    pub r: usize,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationCertificate {
    pub vertex: String,
    pub cycle: String,
    pub poly: String,
    /// Generators of `N`: the vertices of `H` and `eᵢ*(c*)ʲ` for `j < deg f`.
    pub generators: Vec<String>,
    /// Each `eᵢ*` lies in the ideal generated by `H`.
    pub ghosts_in_ideal: bool,
    pub identities: Vec<RecursionIdentity>,
    pub r_max: usize,
}

impl PresentationCertificate {
    pub fn verified(&self) -> bool {
        self.ghosts_in_ideal && self.identities.iter().all(|i| i.holds)
    }
}

fn ghost_word(g: &Graph, e: Edge, c: Edge, j: usize) -> String {
    let mut parts = vec![format!("{}*", g.edge_name(e))];
    parts.extend(std::iter::repeat_n(format!("{}*", g.edge_name(c)), j));
    parts.join(" ")
}

fn loop_power(g: &Graph, v: VertexId, c: Edge, k: usize) -> String {
    if k == 0 {
        g.vertex_name(v).to_string()
    } else {
        vec![g.edge_name(c); k].join(" ")
    }
}

/// The loop at `v`, the exits `s⁻¹(v)∖{c}`, and the checks on `f`; `f` is
/// returned normalized to constant term one.
fn validate(
    g: &Graph,
    field: &Field,
    v: VertexId,
    f: &Poly,
) -> Result<(Edge, Vec<Edge>, Poly), StructureError> {
    let name = g.vertex_name(v).to_string();
    if g.is_infinite_emitter(v) {
        return Err(StructureError::InfiniteEmitter(name));
    }
    let out = g.out_edges(v).unwrap_or_default();
    let loops: Vec<Edge> = out.iter().copied().filter(|&e| g.dst(e) == v).collect();
    let [c] = loops[..] else {
        return Err(StructureError::NotALoop(name));
    };
    let h: VertexSet = g.vertex_ids().filter(|&u| u != v).collect();
    if !g.is_hereditary_saturated(&h) {
        return Err(StructureError::NotMaximal(name));
    }
    if f.field() != field || matches!(field, Field::Extension(_)) {
        return Err(AlgebraError::FieldMismatch(f.field().to_string(), field.to_string()).into());
    }
    let f = LaurentPoly::from_poly(f)
        .associate()
        .ok_or_else(|| StructureError::Reducible(f.to_string()))?;
    if f.irreducibility() != Irreducibility::Irreducible {
        return Err(StructureError::Reducible(f.to_string()));
    }
    let exits = out.into_iter().filter(|&e| e != c).collect();
    Ok((c, exits, f))
}

/// Generators of `N` and the recursion identities for `r = n−1, …, r_max`
/// (default `n+3`), each checked as an equality of normal forms.
pub fn presentation_certificate(
    g: &Arc<Graph>,
    field: &Field,
    v: VertexId,
    f: &Poly,
    r_max: Option<usize>,
) -> Result<PresentationCertificate, StructureError> {
    let (c, exits, f) = validate(g, field, v, f)?;
    let n = f.degree().expect("irreducible polynomials are nonzero");
    let r_max = r_max.unwrap_or(n + 3);
    let h: VertexSet = g.vertex_ids().filter(|&u| u != v).collect();

    let mut generators: Vec<String> = h.iter().map(|&u| g.vertex_name(u).to_string()).collect();
    for &e in &exits {
        generators.extend((0..n).map(|j| ghost_word(g, e, c, j)));
    }
    let pair = AdmissiblePair::full(g, h)?;
    let mut ghosts_in_ideal = true;
    for &e in &exits {
        ghosts_in_ideal &= in_graded_ideal(&LpaElement::ghost(g, field, e), &pair)?;
    }

    let fc: Vec<String> = (0..=n)
        .filter(|&k| !f.coeff(k).is_zero())
        .map(|k| format!("({}) {}", f.coeff(k), loop_power(g, v, c, k)))
        .collect();
    let fc = fc.join(" + ");
    let mut identities = Vec::new();
    for &e in &exits {
        for r in n - 1..=r_max {
            let lhs = ghost_word(g, e, c, r + 1);
            let mut rhs = format!("{lhs} ({fc})");
            for k in (1..=n).filter(|&k| !f.coeff(k).is_zero()) {
                rhs.push_str(&format!(
                    " - ({}) {}",
                    f.coeff(k),
                    ghost_word(g, e, c, r + 1 - k)
                ));
            }
            let holds = normal_form(&lhs, g, field)? == normal_form(&rhs, g, field)?;
            identities.push(RecursionIdentity {
                edge: g.edge_name(e),
                r,
                lhs,
                rhs,
                holds,
            });
        }
    }
    Ok(PresentationCertificate {
        vertex: g.vertex_name(v).to_string(),
        cycle: g.edge_name(c),
        poly: f.to_string(),
        generators,
        ghosts_in_ideal,
        identities,
        r_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn toe_certificates() {
        let g = Arc::new(g_toe());
        let k = Field::Rational;
        let v = g.vertex("v").unwrap();
        let cert =
            presentation_certificate(&g, &k, v, &Poly::from_i64s(&k, &[1, 1]), None).unwrap();
        assert_eq!(cert.generators, ["w", "f*"]);
        assert!(cert.verified());
        assert_eq!(
            cert.identities.iter().map(|i| i.r).collect::<Vec<_>>(),
            [0, 1, 2, 3, 4]
        );
        assert_eq!(cert.identities[0].rhs, "f* e* ((1) v + (1) e) - (1) f*");

        let cert =
            presentation_certificate(&g, &k, v, &Poly::from_i64s(&k, &[1, 1, 1]), None).unwrap();
        assert_eq!(cert.generators, ["w", "f*", "f* e*"]);
        assert!(cert.verified());
        assert_eq!(cert.identities.len(), 5);
    }

    #[test]
    fn guards() {
        let k = Field::Rational;
        let one_plus_x = Poly::from_i64s(&k, &[1, 1]);
        let g = Arc::new(g_2cyc());
        let u = g.vertex("u").unwrap();
        assert_eq!(
            presentation_certificate(&g, &k, u, &one_plus_x, None),
            Err(StructureError::NotALoop("u".into()))
        );
        let g = Arc::new(Graph::simple(
            &["u", "v"],
            &[("c", "v", "v"), ("a", "u", "v")],
        ));
        let v = g.vertex("v").unwrap();
        assert_eq!(
            presentation_certificate(&g, &k, v, &one_plus_x, None),
            Err(StructureError::NotMaximal("v".into()))
        );
        let g = Arc::new(g_toe());
        let v = g.vertex("v").unwrap();
        let reducible = Poly::from_i64s(&k, &[1, 0, -1]);
        assert!(matches!(
            presentation_certificate(&g, &k, v, &reducible, None),
            Err(StructureError::Reducible(_))
        ));
    }

    #[test]
    fn scaled_polynomial_is_normalized() {
        let k = Field::prime(5).unwrap();
        let g = Arc::new(g_toe());
        let v = g.vertex("v").unwrap();
        let cert =
            presentation_certificate(&g, &k, v, &Poly::from_i64s(&k, &[2, 2, 2]), Some(6)).unwrap();
        assert_eq!(cert.poly, "1 + x + x^2");
        assert!(cert.verified());
        assert_eq!(cert.identities.last().unwrap().r, 6);
    }
}
