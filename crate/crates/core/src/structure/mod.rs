//! Finite presentation of simple modules, Morita reductions and the
//! finite-dimensional module that is simple, finitely presented and not a
//! Chen module.

mod findim;
mod pipeline;
mod presentation;
mod report;

pub use findim::*;
pub use pipeline::*;
pub use presentation::*;
pub use report::*;

use std::fmt;

use serde::Serialize;

use crate::chen::LazyPath;
use crate::error::ChenError;
use crate::graph::{Graph, UltimatelyPeriodicPath};

/// Default number of edges inspected for lazy paths.
pub const FP_DEPTH: usize = 50;

/// An infinite path given either exactly or by a stream.
#[derive(Clone, Debug)]
pub enum PathSpec {
    Periodic(UltimatelyPeriodicPath),
    Lazy { path: LazyPath, depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FpVerdict {
    True,
    /// No period found among the inspected edges.
    Unknown {
        depth: usize,
    },
}

impl fmt::Display for FpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpVerdict::True => write!(f, "true"),
            FpVerdict::Unknown { depth } => write!(f, "Unknown (not periodic within {depth})"),
        }
    }
}

/// `V_[p]` is finitely presented exactly when `p` is tail-equivalent to
/// `c^∞` for a closed path `c`. A stream that visibly leaves the graph is
/// an error; one without a period in its window is `Unknown`.
pub fn is_v_finitely_presented(g: &Graph, p: &PathSpec) -> Result<FpVerdict, ChenError> {
    match p {
        PathSpec::Periodic(_) => Ok(FpVerdict::True),
        PathSpec::Lazy { path, depth } => {
            path.validate(g, *depth)?;
            Ok(match path.detect_period(*depth)? {
                Some(_) => FpVerdict::True,
                None => FpVerdict::Unknown { depth: *depth },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn fp_verdicts() {
        let toe = g_toe();
        let e_inf = PathSpec::Periodic(UltimatelyPeriodicPath::parse(&toe, "e").unwrap());
        assert_eq!(
            is_v_finitely_presented(&toe, &e_inf).unwrap(),
            FpVerdict::True
        );

        let rose = g_rose2();
        let tower = PathSpec::Lazy {
            path: LazyPath::builtin(&rose, "gh-tower").unwrap(),
            depth: FP_DEPTH,
        };
        let verdict = is_v_finitely_presented(&rose, &tower).unwrap();
        assert_eq!(verdict.to_string(), "Unknown (not periodic within 50)");
        let gh = PathSpec::Periodic(UltimatelyPeriodicPath::parse(&rose, "g h").unwrap());
        assert_eq!(
            is_v_finitely_presented(&rose, &gh).unwrap(),
            FpVerdict::True
        );
    }
}
