use std::fmt::Write as _;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Graph, Multiplicity};
use crate::error::GraphError;

/// Raw graph description as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub multiplicity: MultiplicitySpec,
}

impl EdgeSpec {
    pub fn new(name: &str, src: &str, dst: &str, multiplicity: MultiplicitySpec) -> Self {
        EdgeSpec {
            name: name.to_string(),
            src: src.to_string(),
            dst: dst.to_string(),
            multiplicity,
        }
    }
}

/// A multiplicity as written in JSON: a count, or the string `"omega"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplicitySpec {
    Count(u64),
    Omega,
}

impl Default for MultiplicitySpec {
    fn default() -> Self {
        MultiplicitySpec::Count(1)
    }
}

impl Serialize for MultiplicitySpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MultiplicitySpec::Count(n) => s.serialize_u64(*n),
            MultiplicitySpec::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for MultiplicitySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = MultiplicitySpec;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative integer or \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Self::Value, E> {
                Ok(MultiplicitySpec::Count(n))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Self::Value, E> {
                u64::try_from(n)
                    .map(MultiplicitySpec::Count)
                    .map_err(|_| E::custom("multiplicity must be non-negative"))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Self::Value, E> {
                match s {
                    "omega" | "ω" => Ok(MultiplicitySpec::Omega),
                    _ => Err(E::custom(format!("unknown multiplicity '{s}'"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl Graph {
    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .classes
                .iter()
                .map(|c| EdgeSpec {
                    name: c.name.clone(),
                    src: self.vertex_name(c.src).to_string(),
                    dst: self.vertex_name(c.dst).to_string(),
                    multiplicity: match c.multiplicity {
                        Multiplicity::Finite(n) => MultiplicitySpec::Count(n),
                        Multiplicity::Omega => MultiplicitySpec::Omega,
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(src: &str) -> Result<Graph, GraphError> {
        let spec: GraphSpec =
            serde_json::from_str(src).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("graph spec serializes")
    }

    /// Graphviz rendering; parallel classes are labelled with their multiplicity.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph E {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for c in &self.classes {
            let label = match c.multiplicity {
                Multiplicity::Finite(1) => c.name.clone(),
                Multiplicity::Finite(n) => format!("{} (x{n})", c.name),
                Multiplicity::Omega => format!("{} (omega)", c.name),
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertex_name(c.src),
                self.vertex_name(c.dst),
                label
            );
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn json_round_trip_on_fixtures() {
        for name in fixtures::NAMES {
            let g = fixtures::by_name(name).unwrap();
            assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g, "{name}");
        }
    }

    #[test]
    fn multiplicity_defaults_to_one() {
        let g = Graph::from_json(
            r#"{"vertices":["v","w"],"edges":[{"name":"f","src":"v","dst":"w"}]}"#,
        )
        .unwrap();
        assert_eq!(g.classes()[0].multiplicity, Multiplicity::Finite(1));
    }

    #[test]
    fn omega_string_parses() {
        let g = Graph::from_json(
            r#"{"vertices":["v"],"edges":[{"name":"k","src":"v","dst":"v","multiplicity":"omega"}]}"#,
        )
        .unwrap();
        assert!(g.has_omega());
        assert!(Graph::from_json(
            r#"{"vertices":["v"],"edges":[{"name":"k","src":"v","dst":"v","multiplicity":"many"}]}"#
        )
        .is_err());
    }

    #[test]
    fn dot_labels() {
        let dot = fixtures::g_omega().to_dot();
        assert!(dot.contains("\"v\" -> \"h\" [label=\"k (omega)\"]"));
        assert!(dot.contains("\"v\" -> \"u\" [label=\"m\"]"));
    }
}
