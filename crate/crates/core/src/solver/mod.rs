//! Generalized optimal quasi-clique: maximize `sum_{u<v in S} (w(u,v) - alpha(u,v))`.
//!
//! Three strategies are available: seeded local search from random singletons, an SDP
//! relaxation followed by randomized hyperplane rounding, and the rounding refined by a
//! local search over the rounded candidate (the DENSDP composition).

mod local_search;
mod rounding;
mod sdp;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{membership, VertexId};
use crate::matrix::SymMatrix;

pub use local_search::{local_search, LocalSearchOutcome};
pub use rounding::{hyperplane_round, inclusion_probabilities, round_with_direction, rounding_scale};
pub use sdp::{default_sdp_rank, sdp_objective, sdp_solve, SdpSolution};

/// Pair weights plus per-pair penalty. Both symmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GoqcInstance {
    w: SymMatrix,
    alpha: SymMatrix,
    net: SymMatrix,
}

impl GoqcInstance {
    pub fn new(w: SymMatrix, alpha: SymMatrix) -> Result<Self> {
        if w.n() != alpha.n() {
            return Err(Error::DimensionMismatch(w.n(), alpha.n()));
        }
        if w.pairs().chain(alpha.pairs()).any(|(_, _, x)| !x.is_finite()) {
            return Err(Error::InvalidArgument("instance has non-finite entries".into()));
        }
        let net = w.zip_with(&alpha, |a, b| a - b)?;
        Ok(Self { w, alpha, net })
    }

    /// Constant penalty broadcast over every pair.
    pub fn with_constant_alpha(w: SymMatrix, alpha: f64) -> Result<Self> {
        let n = w.n();
        Self::new(w, SymMatrix::constant(n, alpha))
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn weights(&self) -> &SymMatrix {
        &self.w
    }

    pub fn alpha(&self) -> &SymMatrix {
        &self.alpha
    }

    /// `w - alpha`, the per-pair contribution to the objective.
    pub fn net(&self) -> &SymMatrix {
        &self.net
    }

    /// Instance induced on `vertices` (in that order).
    pub fn induced(&self, vertices: &[VertexId]) -> Self {
        let w = self.w.induced(vertices);
        let alpha = self.alpha.induced(vertices);
        let net = self.net.induced(vertices);
        Self { w, alpha, net }
    }

    /// Objective of an already validated, duplicate-free vertex list.
    pub(crate) fn value_of(&self, s: &[VertexId]) -> f64 {
        let mut total = 0.0;
        for (i, &u) in s.iter().enumerate() {
            let row = self.net.row(u);
            for &v in &s[i + 1..] {
                total += row[v];
            }
        }
        total
    }
}

/// `f(S)`; zero for the empty set and for singletons. Repeated vertices count once.
pub fn goqc_objective(inst: &GoqcInstance, s: &[VertexId]) -> Result<f64> {
    let mask = membership(inst.n(), s)?;
    let members: Vec<usize> = (0..inst.n()).filter(|&u| mask[u]).collect();
    Ok(inst.value_of(&members))
}

/// Edge surplus with `g(x) = x` and `h(x) = C(x, 2)`.
pub fn edge_surplus(edge_count: f64, size: usize, alpha: f64) -> f64 {
    if size == 0 {
        return 0.0;
    }
    let pairs = (size * (size - 1) / 2) as f64;
    edge_count - alpha * pairs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "local-search")]
    LocalSearch,
    #[serde(rename = "sdp")]
    Sdp,
    #[serde(rename = "sdp+local-search")]
    SdpLocalSearch,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::LocalSearch => "local-search",
            Method::Sdp => "sdp",
            Method::SdpLocalSearch => "sdp+local-search",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local-search" => Ok(Method::LocalSearch),
            "sdp" => Ok(Method::Sdp),
            "sdp+local-search" => Ok(Method::SdpLocalSearch),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restarts: usize,
    /// Outer-pass bound of the local search.
    pub local_search_max_passes: usize,
    /// Factorization rank; `None` picks `min(n+1, ceil(sqrt(2(n+1))) + 2)`.
    pub sdp_rank: Option<usize>,
    pub sdp_max_iters: usize,
    pub sdp_tol: f64,
    pub rounding_samples: usize,
    pub rng_seed: u64,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            local_search_max_passes: 50,
            sdp_rank: None,
            sdp_max_iters: 1000,
            sdp_tol: 1e-7,
            rounding_samples: 50,
            rng_seed: 0,
            method: Method::SdpLocalSearch,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("restarts", self.restarts),
            ("local_search_max_passes", self.local_search_max_passes),
            ("sdp_max_iters", self.sdp_max_iters),
            ("rounding_samples", self.rounding_samples),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive")));
        }
        if !(self.sdp_tol > 0.0 && self.sdp_tol.is_finite()) {
            return Err(Error::InvalidArgument("sdp_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StageIterations {
    /// Gradient steps taken by the SDP stage, when it ran.
    pub sdp: Option<usize>,
    /// Outer passes of each restart's local search.
    pub local_search: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub method: Method,
    pub best_value: f64,
    pub restart_values: Vec<f64>,
    pub iterations_used: StageIterations,
    pub seed: u64,
    pub sdp_rank: Option<usize>,
    pub sdp_objective: Option<f64>,
}

/// Independent stream of the seeded generator. Stream 0 seeds the SDP start; restart `i`
/// uses stream `i + 1`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact optimum over the (at most four) subsets of an instance with `n <= 2`.
fn solve_tiny(inst: &GoqcInstance) -> (Vec<VertexId>, f64) {
    debug_assert!(inst.n() <= 2);
    if inst.n() == 2 && inst.net.get(0, 1) > 0.0 {
        (vec![0, 1], inst.net.get(0, 1))
    } else {
        (Vec::new(), 0.0)
    }
}

struct RestartOutcome {
    vertices: Vec<VertexId>,
    value: f64,
    passes: Option<usize>,
}

/// Best set over `cfg.restarts` seeded runs of `cfg.method`. Deterministic in `cfg.rng_seed`;
/// restarts may run in parallel and the lowest restart index wins ties.
pub fn solve(inst: &GoqcInstance, cfg: &SolverConfig) -> Result<(Vec<VertexId>, f64, SolverTrace)> {
    cfg.validate()?;
    let n = inst.n();
    let mut iterations = StageIterations::default();
    let mut sdp_rank = None;
    let mut sdp_value = None;

    let outcomes: Vec<RestartOutcome> = match cfg.method {
        _ if n <= 2 && cfg.method != Method::LocalSearch => {
            let (vertices, value) = solve_tiny(inst);
            vec![RestartOutcome {
                vertices,
                value,
                passes: None,
            }]
        }
        Method::LocalSearch => (0..cfg.restarts)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(cfg.rng_seed, i as u64 + 1);
                let out = local_search(inst, None, cfg, &mut rng)?;
                Ok(RestartOutcome {
                    value: inst.value_of(&out.vertices),
                    vertices: out.vertices,
                    passes: Some(out.passes),
                })
            })
            .collect::<Result<_>>()?,
        Method::Sdp | Method::SdpLocalSearch => {
            let sol = sdp_solve(inst, cfg)?;
            iterations.sdp = Some(sol.iterations);
            sdp_rank = Some(sol.rank);
            sdp_value = Some(sol.objective);
            (0..cfg.restarts)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(cfg.rng_seed, i as u64 + 1);
                    let (candidate, value) =
                        hyperplane_round(&sol, inst, cfg.rounding_samples, &mut rng)?;
                    if cfg.method == Method::Sdp || candidate.is_empty() {
                        return Ok(RestartOutcome {
                            vertices: candidate,
                            value,
                            passes: None,
                        });
                    }
                    let sub = inst.induced(&candidate);
                    let out = local_search(&sub, None, cfg, &mut rng)?;
                    let mut vertices: Vec<_> = out.vertices.iter().map(|&i| candidate[i]).collect();
                    vertices.sort_unstable();
                    Ok(RestartOutcome {
                        value: inst.value_of(&vertices),
                        vertices,
                        passes: Some(out.passes),
                    })
                })
                .collect::<Result<_>>()?
        }
    };

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = i;
        }
    }
    iterations.local_search = outcomes.iter().filter_map(|o| o.passes).collect();
    let restart_values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let RestartOutcome {
        vertices, value, ..
    } = outcomes.into_iter().nth(best).expect("at least one restart");
    let trace = SolverTrace {
        method: cfg.method,
        best_value: value,
        restart_values,
        iterations_used: iterations,
        seed: cfg.rng_seed,
        sdp_rank,
        sdp_objective: sdp_value,
    };
    Ok((vertices, value, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(n: usize, pairs: &[(usize, usize, f64)], alpha: f64) -> GoqcInstance {
        let mut w = SymMatrix::zeros(n);
        for &(u, v, x) in pairs {
            w.set(u, v, x);
        }
        GoqcInstance::with_constant_alpha(w, alpha).unwrap()
    }

    #[test]
    fn objective_of_small_sets_is_zero() {
        let inst = instance(3, &[(0, 1, 1.0)], 0.3);
        assert_eq!(goqc_objective(&inst, &[]).unwrap(), 0.0);
        for v in 0..3 {
            assert_eq!(goqc_objective(&inst, &[v]).unwrap(), 0.0);
        }
        assert!((goqc_objective(&inst, &[0, 1]).unwrap() - 0.7).abs() < 1e-12);
        assert!(goqc_objective(&inst, &[3]).is_err());
    }

    #[test]
    fn edge_surplus_examples() {
        assert!((edge_surplus(3.0, 3, 0.8) - 0.6).abs() < 1e-12);
        assert_eq!(edge_surplus(7.0, 0, 0.8), 0.0);
        assert_eq!(edge_surplus(0.0, 2, 0.5), -0.5);
    }

    #[test]
    fn tiny_instances_bypass_sdp() {
        let inst = instance(2, &[(0, 1, 1.0)], 0.5);
        let cfg = SolverConfig::default();
        let (s, v, trace) = solve(&inst, &cfg).unwrap();
        assert_eq!(s, vec![0, 1]);
        assert_eq!(v, 0.5);
        assert_eq!(trace.iterations_used.sdp, None);
        let empty = instance(0, &[], 0.5);
        let (s, v, _) = solve(&empty, &cfg).unwrap();
        assert!(s.is_empty());
        assert_eq!(v, 0.0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::LocalSearch, Method::Sdp, Method::SdpLocalSearch] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }
}
