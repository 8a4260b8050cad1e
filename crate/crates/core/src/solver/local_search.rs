use rand::Rng;

use super::{GoqcInstance, SolverConfig};
use crate::error::Result;
use crate::graph::{membership, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct LocalSearchOutcome {
    /// Sorted ascending.
    pub vertices: Vec<VertexId>,
    pub value: f64,
    pub passes: usize,
}

/// Add/remove local search with the final complement check.
///
/// Each pass greedily adds any outside vertex whose inclusion does not decrease the
/// objective (lowest index first, until none qualifies), then removes the first inside
/// vertex whose removal does not decrease it. The search stops when no removal qualifies
/// or after `cfg.local_search_max_passes` passes. A vertex removed at the end of a pass is
/// not eligible for the add phase that immediately follows it.
///
/// Returns whichever of `S` and `V \ S` scores higher (`S` on ties).
pub fn local_search<R: Rng + ?Sized>(
    inst: &GoqcInstance,
    start: Option<&[VertexId]>,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<LocalSearchOutcome> {
    let n = inst.n();
    if n == 0 {
        return Ok(LocalSearchOutcome {
            vertices: Vec::new(),
            value: 0.0,
            passes: 0,
        });
    }
    let net = inst.net();
    let mut in_set = match start {
        Some(s) => membership(n, s)?,
        None => {
            let mut mask = vec![false; n];
            mask[rng.random_range(0..n)] = true;
            mask
        }
    };
    // gain[u] = sum_{v in S} net(u, v): the change from adding u (u outside) or
    // minus the change from removing it (u inside)
    let mut gain = vec![0.0; n];
    for v in (0..n).filter(|&v| in_set[v]) {
        for (g, x) in gain.iter_mut().zip(net.row(v)) {
            *g += x;
        }
    }
    let toggle = |u: usize, in_set: &mut Vec<bool>, gain: &mut Vec<f64>| {
        let sign = if in_set[u] { -1.0 } else { 1.0 };
        in_set[u] = !in_set[u];
        for (g, x) in gain.iter_mut().zip(net.row(u)) {
            *g += sign * x;
        }
    };

    let mut tabu: Option<usize> = None;
    let mut passes = 0;
    loop {
        passes += 1;
        while let Some(u) =
            (0..n).find(|&u| !in_set[u] && Some(u) != tabu && gain[u] >= 0.0)
        {
            toggle(u, &mut in_set, &mut gain);
        }
        let Some(u) = (0..n).find(|&u| in_set[u] && -gain[u] >= 0.0) else {
            break;
        };
        toggle(u, &mut in_set, &mut gain);
        tabu = Some(u);
        if passes >= cfg.local_search_max_passes {
            break;
        }
    }

    let inside: Vec<usize> = (0..n).filter(|&u| in_set[u]).collect();
    let outside: Vec<usize> = (0..n).filter(|&u| !in_set[u]).collect();
    let (value_in, value_out) = (inst.value_of(&inside), inst.value_of(&outside));
    let (vertices, value) = if value_out > value_in {
        (outside, value_out)
    } else {
        (inside, value_in)
    };
    Ok(LocalSearchOutcome {
        vertices,
        value,
        passes,
    })
}
