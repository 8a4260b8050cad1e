//! Vector relaxation solved by low-rank factorization.
//!
//! Maximizes `sum_{u<v} c(u,v) (1 + v_u.v_0 + v_v.v_0 + v_u.v_v) / 4` over unit vectors, with
//! `c = w - alpha`, by Riemannian gradient ascent on the product of spheres: every row takes
//! a tangent step and is renormalized, with a backtracking step size.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{stream_rng, GoqcInstance, SolverConfig};
use crate::error::{Error, Result};

/// Unit rows `v_0, v_1, ..., v_n` (row 0 is the reference vector), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub rank: usize,
    pub rows: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn n_vertices(&self) -> usize {
        self.rows.len() / self.rank - 1
    }

    /// Row `i` of the factor; `i = 0` is `v_0`, vertex `u` is row `u + 1`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.rank..(i + 1) * self.rank]
    }

    pub fn vertex(&self, u: usize) -> &[f64] {
        self.row(u + 1)
    }
}

pub fn default_sdp_rank(n: usize) -> usize {
    let r = (2.0 * (n + 1) as f64).sqrt().ceil() as usize + 2;
    r.min(n + 1)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relaxation objective of arbitrary rows (same layout as [`SdpSolution::rows`]).
pub fn sdp_objective(inst: &GoqcInstance, rows: &[f64], rank: usize) -> f64 {
    let n = inst.n();
    let c = inst.net();
    let row = |i: usize| &rows[i * rank..(i + 1) * rank];
    let v0 = row(0);
    let x: Vec<f64> = (0..n).map(|u| dot(row(u + 1), v0)).collect();
    let mut total = 0.0;
    for u in 0..n {
        let cu = c.row(u);
        let vu = row(u + 1);
        for v in (u + 1)..n {
            if cu[v] != 0.0 {
                total += cu[v] * (1.0 + x[u] + x[v] + dot(vu, row(v + 1)));
            }
        }
    }
    total / 4.0
}

/// Euclidean gradient of the relaxation objective with respect to every row.
fn gradient(inst: &GoqcInstance, rows: &[f64], rank: usize, degree: &[f64], out: &mut [f64]) {
    let n = inst.n();
    let c = inst.net();
    out.fill(0.0);
    let (head, tail) = out.split_at_mut(rank);
    // d/dv_0 = 1/4 sum_u deg(u) v_u
    for u in 0..n {
        let vu = &rows[(u + 1) * rank..(u + 2) * rank];
        for (g, x) in head.iter_mut().zip(vu) {
            *g += degree[u] * x / 4.0;
        }
    }
    // d/dv_u = 1/4 (deg(u) v_0 + sum_v c(u,v) v_v)
    let v0 = &rows[..rank];
    for u in 0..n {
        let gu = &mut tail[u * rank..(u + 1) * rank];
        for (g, x) in gu.iter_mut().zip(v0) {
            *g += degree[u] * x / 4.0;
        }
        for (v, &cuv) in c.row(u).iter().enumerate() {
            if cuv != 0.0 {
                let vv = &rows[(v + 1) * rank..(v + 2) * rank];
                for (g, x) in gu.iter_mut().zip(vv) {
                    *g += cuv * x / 4.0;
                }
            }
        }
    }
}

fn normalize(row: &mut [f64]) -> bool {
    let norm = dot(row, row).sqrt();
    if norm > 0.0 && norm.is_finite() {
        row.iter_mut().for_each(|x| *x /= norm);
        true
    } else {
        false
    }
}

/// Approximately solves the vector relaxation of `inst`.
///
/// Rows start uniformly on the unit sphere (stream 0 of `cfg.rng_seed`). Iteration stops when
/// the relative improvement `delta / max(1, |F|)` falls below `cfg.sdp_tol`, when no step
/// size improves the objective, or after `cfg.sdp_max_iters` steps.
pub fn sdp_solve(inst: &GoqcInstance, cfg: &SolverConfig) -> Result<SdpSolution> {
    let n = inst.n();
    let rank = cfg.sdp_rank.unwrap_or_else(|| default_sdp_rank(n));
    if rank < 2 || rank > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "sdp rank must lie in [2, n+1] = [2, {}], got {rank}",
            n + 1
        )));
    }
    let mut rng = stream_rng(cfg.rng_seed, 0);
    let mut rows = vec![0.0; (n + 1) * rank];
    for row in rows.chunks_mut(rank) {
        loop {
            row.iter_mut()
                .for_each(|x| *x = rng.sample::<f64, _>(StandardNormal));
            if normalize(row) {
                break;
            }
        }
    }

    let c = inst.net();
    let degree: Vec<f64> = (0..n).map(|u| c.row(u).iter().sum()).collect();
    let scale = (0..n)
        .map(|u| c.row(u).iter().map(|x| x.abs()).sum::<f64>() + degree[u].abs())
        .fold(0.0, f64::max);
    let mut step = if scale > 0.0 { 4.0 / scale } else { 1.0 };

    let mut value = sdp_objective(inst, &rows, rank);
    if !value.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut grad = vec![0.0; rows.len()];
    let mut trial = vec![0.0; rows.len()];
    let mut iterations = 0;
    while iterations < cfg.sdp_max_iters {
        iterations += 1;
        gradient(inst, &rows, rank, &degree, &mut grad);
        // project onto the tangent space of each sphere
        for (g, v) in grad.chunks_mut(rank).zip(rows.chunks(rank)) {
            let radial = dot(g, v);
            g.iter_mut().zip(v).for_each(|(gi, vi)| *gi -= radial * vi);
        }
        if grad.iter().all(|&g| g == 0.0) {
            break;
        }
        let mut accepted = None;
        for _ in 0..40 {
            for ((t, v), g) in trial.iter_mut().zip(&rows).zip(&grad) {
                *t = v + step * g;
            }
            for (row, orig) in trial.chunks_mut(rank).zip(rows.chunks(rank)) {
                if !normalize(row) {
                    row.copy_from_slice(orig);
                }
            }
            let candidate = sdp_objective(inst, &trial, rank);
            if !candidate.is_finite() {
                return Err(Error::Divergence {
                    iteration: iterations,
                });
            }
            if candidate >= value {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(new_value) = accepted else {
            break;
        };
        std::mem::swap(&mut rows, &mut trial);
        let improvement = new_value - value;
        value = new_value;
        step *= 1.5;
        if improvement / value.abs().max(1.0) < cfg.sdp_tol {
            break;
        }
    }

    Ok(SdpSolution {
        rank,
        rows,
        objective: value,
        iterations,
    })
}
