use rand::Rng;
use rand_distr::StandardNormal;

use super::{solve_tiny, GoqcInstance, SdpSolution};
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// `T = sqrt(4 ln n)`.
pub fn rounding_scale(n: usize) -> f64 {
    (4.0 * (n as f64).ln()).sqrt()
}

/// Per-vertex inclusion probability `(1 + y_u) / 2`, where `y_u` is `(v_u . r) / scale`
/// clipped to `[-1, 1]`.
pub fn inclusion_probabilities(sol: &SdpSolution, r: &[f64], scale: f64) -> Vec<f64> {
    (0..sol.n_vertices())
        .map(|u| {
            let z: f64 = sol.vertex(u).iter().zip(r).map(|(a, b)| a * b).sum::<f64>() / scale;
            (1.0 + z.clamp(-1.0, 1.0)) / 2.0
        })
        .collect()
}

/// One randomized rounding at a fixed direction `r`.
pub fn round_with_direction<R: Rng + ?Sized>(
    sol: &SdpSolution,
    r: &[f64],
    scale: f64,
    rng: &mut R,
) -> Vec<VertexId> {
    inclusion_probabilities(sol, r, scale)
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| rng.random::<f64>() < p)
        .map(|(u, _)| u)
        .collect()
}

/// Best of `samples` roundings, each with a fresh Gaussian direction. Ties keep the earliest
/// draw. Instances with `n <= 2` are solved exhaustively since `T` degenerates there.
pub fn hyperplane_round<R: Rng + ?Sized>(
    sol: &SdpSolution,
    inst: &GoqcInstance,
    samples: usize,
    rng: &mut R,
) -> Result<(Vec<VertexId>, f64)> {
    let n = inst.n();
    if sol.n_vertices() != n {
        return Err(Error::DimensionMismatch(sol.n_vertices(), n));
    }
    if n <= 2 {
        return Ok(solve_tiny(inst));
    }
    let scale = rounding_scale(n);
    let mut best: Option<(Vec<VertexId>, f64)> = None;
    let mut r = vec![0.0; sol.rank];
    for _ in 0..samples.max(1) {
        r.iter_mut()
            .for_each(|x| *x = rng.sample::<f64, _>(StandardNormal));
        let candidate = round_with_direction(sol, &r, scale, rng);
        let value = inst.value_of(&candidate);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((candidate, value));
        }
    }
    Ok(best.expect("at least one sample"))
}
