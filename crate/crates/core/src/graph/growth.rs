use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{Graph, Multiplicity};
use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Polynomial,
    Exponential,
}

impl Graph {
    /// Number of paths of each length `0..=max_len` (length 0 counts vertices).
    pub fn count_paths(&self, max_len: usize) -> Result<Vec<BigUint>, GraphError> {
        if self.has_omega() {
            return Err(GraphError::InfiniteCount);
        }
        // ends[v] = number of paths of the current length starting at v
        let mut ends: Vec<BigUint> = vec![BigUint::one(); self.vertex_count()];
        let mut out = vec![BigUint::from(self.vertex_count())];
        for _ in 0..max_len {
            let mut next = vec![BigUint::zero(); self.vertex_count()];
            for c in self.classes() {
                let Multiplicity::Finite(m) = c.multiplicity else {
                    unreachable!()
                };
                next[c.src.0 as usize] += &ends[c.dst.0 as usize] * m;
            }
            out.push(next.iter().sum());
            ends = next;
        }
        Ok(out)
    }

    /// Exponential exactly when some vertex has two closed walks of the
    /// same length `k ≤ 2|E⁰|`. Two distinct cycles `c`, `d` at `v` give
    /// `cd ≠ dc`; with one cycle per vertex every closed walk is a power of it.
    pub fn growth_class(&self) -> Result<GrowthClass, GraphError> {
        if self.has_omega() {
            return Err(GraphError::InfiniteCount);
        }
        let n = self.vertex_count();
        let mut adj = vec![vec![0u64; n]; n];
        for c in self.classes() {
            let Multiplicity::Finite(m) = c.multiplicity else {
                unreachable!()
            };
            adj[c.src.0 as usize][c.dst.0 as usize] += m;
        }
        // entries are capped at 2: only "at least two" matters
        let mut power = adj.clone();
        for _ in 0..2 * n {
            if (0..n).any(|v| power[v][v] >= 2) {
                return Ok(GrowthClass::Exponential);
            }
            power = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .fold(0u64, |acc, k| acc + power[i][k].min(2) * adj[k][j].min(2))
                                .min(2)
                        })
                        .collect()
                })
                .collect();
        }
        Ok(GrowthClass::Polynomial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&n| BigUint::from(n)).collect()
    }

    #[test]
    fn path_counts() {
        assert_eq!(
            g_rose2().count_paths(5).unwrap(),
            nums(&[1, 2, 4, 8, 16, 32])
        );
        assert_eq!(g_loop().count_paths(5).unwrap(), nums(&[1; 6]));
        assert_eq!(g_toe().count_paths(3).unwrap(), nums(&[2, 2, 2, 2]));
        assert_eq!(g_omega().count_paths(2), Err(GraphError::InfiniteCount));
    }

    #[test]
    fn growth_examples() {
        assert_eq!(g_rose2().growth_class().unwrap(), GrowthClass::Exponential);
        assert_eq!(g_toe().growth_class().unwrap(), GrowthClass::Polynomial);
        assert_eq!(g_line().growth_class().unwrap(), GrowthClass::Polynomial);
        assert_eq!(g_2cyc().growth_class().unwrap(), GrowthClass::Polynomial);
        // two 3-cycles through v only meet again after six steps
        let g = Graph::simple(
            &["a", "b", "c", "d", "v"],
            &[
                ("p", "v", "a"),
                ("q", "a", "b"),
                ("r", "b", "v"),
                ("s", "v", "c"),
                ("t", "c", "d"),
                ("u", "d", "v"),
            ],
        );
        assert_eq!(g.growth_class().unwrap(), GrowthClass::Exponential);
        let parallel = Graph::simple(&["u", "v"], &[("a", "u", "v"), ("b", "u", "v")]);
        assert_eq!(parallel.growth_class().unwrap(), GrowthClass::Polynomial);
    }
}
