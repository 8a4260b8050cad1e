//! Ground truth: the eight-vertex fixture, planted cohorts, and exhaustive search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphGroup, Label, ObservationGraph, VertexId};
use crate::solver::GoqcInstance;

/// Edges of the class-A fixture graph, 1-based.
pub const FIXTURE_A_EDGES: [(usize, usize); 9] = [
    (1, 2),
    (1, 4),
    (2, 4),
    (1, 5),
    (2, 5),
    (4, 5),
    (3, 5),
    (4, 6),
    (5, 6),
];

/// Edges of the class-B fixture graph, 1-based.
pub const FIXTURE_B_EDGES: [(usize, usize); 4] = [(1, 3), (2, 3), (1, 8), (4, 5)];

/// Two single-member groups over vertices `1..=8`, stored 0-based.
pub fn fixture_f2() -> (GraphGroup, GraphGroup) {
    let build = |edges: &[(usize, usize)], id: &str, label| {
        let g = ObservationGraph::new(8, edges.iter().map(|&(u, v)| (u - 1, v - 1)), id, label)
            .expect("fixture edges are valid");
        GraphGroup::new(label, vec![g]).expect("fixture group is valid")
    };
    (
        build(&FIXTURE_A_EDGES, "F2-A", Label::A),
        build(&FIXTURE_B_EDGES, "F2-B", Label::B),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    /// Planted set is `{0, .., k-1}`.
    pub k: usize,
    pub group_size_a: usize,
    pub group_size_b: usize,
    pub p_in_a: f64,
    pub p_in_b: f64,
    pub p_bg: f64,
    pub rng_seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        Self {
            n: 60,
            k: 10,
            group_size_a: 40,
            group_size_b: 40,
            p_in_a: 0.9,
            p_in_b: 0.1,
            p_bg: 0.3,
            rng_seed: 0,
        }
    }
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_in_a", self.p_in_a),
            ("p_in_b", self.p_in_b),
            ("p_bg", self.p_bg),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a probability in [0, 1], got {p}"
                )));
            }
        }
        if self.k > self.n {
            return Err(Error::InvalidArgument(format!(
                "planted size k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        if self.group_size_a == 0 || self.group_size_b == 0 {
            return Err(Error::EmptyGroup);
        }
        Ok(())
    }

    pub fn planted_set(&self) -> Vec<VertexId> {
        (0..self.k).collect()
    }
}

/// Samples a cohort: pairs inside the planted set appear with the class's inside
/// probability, every other pair with `p_bg`.
pub fn planted_dataset(spec: &PlantedSpec) -> Result<(GraphGroup, GraphGroup)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut sample_group = |label: Label, size: usize, p_in: f64| {
        let members = (0..size)
            .map(|i| {
                let mut edges = Vec::new();
                for u in 0..spec.n {
                    for v in (u + 1)..spec.n {
                        let p = if v < spec.k { p_in } else { spec.p_bg };
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                ObservationGraph::new(spec.n, edges, format!("{label}{i:03}"), label)
            })
            .collect::<Result<Vec<_>>>()?;
        GraphGroup::new(label, members)
    };
    let a = sample_group(Label::A, spec.group_size_a, spec.p_in_a)?;
    let b = sample_group(Label::B, spec.group_size_b, spec.p_in_b)?;
    Ok((a, b))
}

pub const BRUTE_FORCE_MAX_N: usize = 20;

/// Optimal value and every maximizer (within 1e-9), sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub value: f64,
    pub optima: Vec<Vec<VertexId>>,
}

/// Exhaustive maximization over all `2^n` subsets, in Gray-code order with incremental
/// updates. Ties are resolved by recomputing each candidate's value from scratch.
pub fn brute_force(inst: &GoqcInstance) -> Result<BruteForceResult> {
    const TIE: f64 = 1e-9;
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let (w, alpha) = (inst.weights(), inst.alpha());
    let pair = |u: usize, v: usize| w.get(u, v) - alpha.get(u, v);
    let exact = |mask: u32| {
        let mut total = 0.0;
        for u in 0..n {
            if mask >> u & 1 == 1 {
                for v in (u + 1)..n {
                    if mask >> v & 1 == 1 {
                        total += pair(u, v);
                    }
                }
            }
        }
        total
    };

    let mut gain = vec![0.0; n];
    let mut mask: u32 = 0;
    let mut value = 0.0;
    let mut best = 0.0;
    let mut candidates: Vec<u32> = vec![0];
    for i in 1u64..(1u64 << n) {
        let u = i.trailing_zeros() as usize;
        let adding = mask >> u & 1 == 0;
        let sign = if adding { 1.0 } else { -1.0 };
        value += sign * gain[u];
        mask ^= 1 << u;
        for (v, g) in gain.iter_mut().enumerate() {
            if v != u {
                *g += sign * pair(u, v);
            }
        }
        if value > best + TIE {
            best = value;
            candidates.retain(|&m| exact(m) >= best - 2.0 * TIE);
        }
        if value >= best - 2.0 * TIE {
            candidates.push(mask);
        }
    }

    let scored: Vec<(u32, f64)> = candidates.into_iter().map(|m| (m, exact(m))).collect();
    let value = scored.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let mut optima: Vec<Vec<VertexId>> = scored
        .into_iter()
        .filter(|&(_, v)| v >= value - TIE)
        .map(|(m, _)| (0..n).filter(|&u| m >> u & 1 == 1).collect())
        .collect();
    optima.sort();
    optima.dedup();
    Ok(BruteForceResult { value, optima })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymMatrix;

    #[test]
    fn all_negative_instance() {
        let inst = GoqcInstance::with_constant_alpha(SymMatrix::zeros(4), 0.3).unwrap();
        let res = brute_force(&inst).unwrap();
        assert_eq!(res.value, 0.0);
        let expected: Vec<Vec<usize>> =
            vec![vec![], vec![0], vec![1], vec![2], vec![3]];
        assert_eq!(res.optima, expected);
    }

    #[test]
    fn size_guard() {
        let inst = GoqcInstance::with_constant_alpha(SymMatrix::zeros(21), 0.3).unwrap();
        assert!(brute_force(&inst).is_err());
    }

    #[test]
    fn planted_spec_validation() {
        let bad = PlantedSpec {
            p_bg: 1.5,
            ..PlantedSpec::default()
        };
        assert!(planted_dataset(&bad).is_err());
        let bad = PlantedSpec {
            k: 61,
            ..PlantedSpec::default()
        };
        assert!(planted_dataset(&bad).is_err());
    }

    #[test]
    fn planted_is_deterministic() {
        let spec = PlantedSpec {
            n: 12,
            k: 4,
            group_size_a: 3,
            group_size_b: 3,
            ..PlantedSpec::default()
        };
        assert_eq!(planted_dataset(&spec).unwrap(), planted_dataset(&spec).unwrap());
    }
}
