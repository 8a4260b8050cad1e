#![allow(dead_code)]

use contrast_core::solver::stream_rng;
use contrast_core::{GoqcInstance, SymMatrix};
use rand::Rng;

/// Fixture edges, vertices `1..=8`.
pub const F2_A: [(usize, usize); 9] = [
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
pub const F2_B: [(usize, usize); 4] = [(1, 3), (2, 3), (1, 8), (4, 5)];

fn has(edges: &[(usize, usize)], u: usize, v: usize) -> bool {
    edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
}

/// Pair weight of the fixture difference, 1-based vertices: `A - B`, `B - A` or `|A - B|`.
pub fn f2_weight(kind: &str, u: usize, v: usize) -> f64 {
    let a = f64::from(u8::from(has(&F2_A, u, v)));
    let b = f64::from(u8::from(has(&F2_B, u, v)));
    match kind {
        "A-B" => a - b,
        "B-A" => b - a,
        "abs" => (a - b).abs(),
        _ => unreachable!(),
    }
}

/// `sum_{u<v in s} (w(u,v) - alpha)` written out over index pairs.
pub fn pair_sum(s: &[usize], alpha: f64, w: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            total += w(s[i], s[j]) - alpha;
        }
    }
    total
}

/// Plain bitmask enumeration over `vertices`: best value and all maximizers within `1e-9`,
/// each sorted, the list sorted lexicographically.
pub fn naive_optima(
    vertices: &[usize],
    alpha: f64,
    w: impl Fn(usize, usize) -> f64,
) -> (f64, Vec<Vec<usize>>) {
    let n = vertices.len();
    let values: Vec<(Vec<usize>, f64)> = (0u32..(1 << n))
        .map(|mask| {
            let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| vertices[i]).collect();
            let value = pair_sum(&s, alpha, &w);
            (s, value)
        })
        .collect();
    let best = values.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let mut optima: Vec<Vec<usize>> = values
        .into_iter()
        .filter(|(_, v)| *v >= best - 1e-9)
        .map(|(s, _)| s)
        .collect();
    optima.sort();
    (best, optima)
}

/// Pair weights uniform in `[-1, 1]`, zero penalty.
pub fn random_instance(n: usize, seed: u64) -> GoqcInstance {
    let mut rng = stream_rng(seed, 7);
    let mut w = SymMatrix::zeros(n);
    for u in 0..n {
        for v in (u + 1)..n {
            w.set(u, v, rng.random_range(-1.0..=1.0));
        }
    }
    GoqcInstance::with_constant_alpha(w, 0.0).unwrap()
}

pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let inter = a.iter().filter(|x| b.contains(x)).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}
