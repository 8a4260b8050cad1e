//! Group summary graphs, difference graphs and their descriptive diagnostics.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphGroup, Label};
use crate::io::{atomic_write, format_matrix_csv};
use crate::matrix::SymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SummaryMode {
    /// Fraction of members containing each edge.
    Fraction,
    /// Mean edge weight across members, absent edges counting as 0.
    WeightedMean,
    /// 1 where the fraction strictly exceeds `threshold`, else 0.
    Binary { threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryGraph {
    pub w: SymMatrix,
    pub group_label: Label,
    pub group_size: usize,
    pub mode: SummaryMode,
}

impl SummaryGraph {
    pub fn n(&self) -> usize {
        self.w.n()
    }
}

pub fn build_summary(group: &GraphGroup, mode: SummaryMode) -> Result<SummaryGraph> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let n = group.n();
    let r = group.len();
    let w = match mode {
        SummaryMode::Fraction | SummaryMode::Binary { .. } => {
            // exact integer counts, divided once
            let mut counts = vec![0u32; n * n];
            for g in group.members() {
                for &(u, v) in g.edges() {
                    counts[u * n + v] += 1;
                }
            }
            let mut w = SymMatrix::zeros(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    let frac = counts[u * n + v] as f64 / r as f64;
                    let value = match mode {
                        SummaryMode::Binary { threshold } => f64::from(u8::from(frac > threshold)),
                        _ => frac,
                    };
                    w.set(u, v, value);
                }
            }
            w
        }
        SummaryMode::WeightedMean => {
            if let Some(g) = group.members().iter().find(|g| !g.is_weighted()) {
                return Err(Error::InvalidArgument(format!(
                    "weighted-mean summary requires weighted graphs; subject {} is unweighted",
                    g.subject_id()
                )));
            }
            let mut sums = vec![0.0f64; n * n];
            for g in group.members() {
                for (u, v, x) in g.weighted_edges() {
                    sums[u * n + v] += x;
                }
            }
            let mut w = SymMatrix::zeros(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    w.set(u, v, sums[u * n + v] / r as f64);
                }
            }
            w
        }
    };
    Ok(SummaryGraph {
        w,
        group_label: group.label(),
        group_size: r,
        mode,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceMode {
    Signed,
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceGraph {
    pub d: SymMatrix,
    pub mode: DifferenceMode,
}

impl DifferenceGraph {
    pub fn n(&self) -> usize {
        self.d.n()
    }
}

/// `a.w - b.w` (signed) or `|a.w - b.w|` (absolute).
pub fn build_difference(
    a: &SummaryGraph,
    b: &SummaryGraph,
    mode: DifferenceMode,
) -> Result<DifferenceGraph> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    if a.mode != b.mode {
        return Err(Error::InvalidArgument(format!(
            "summary modes differ: {:?} vs {:?}",
            a.mode, b.mode
        )));
    }
    let d = match mode {
        DifferenceMode::Signed => a.w.zip_with(&b.w, |x, y| x - y)?,
        DifferenceMode::Absolute => a.w.zip_with(&b.w, |x, y| (x - y).abs())?,
    };
    Ok(DifferenceGraph { d, mode })
}

pub fn weighted_degrees(s: &SummaryGraph) -> Vec<f64> {
    (0..s.n()).map(|u| s.w.row(u).iter().sum()).collect()
}

/// Writes `d` as a full CSV matrix, vertices in index order.
pub fn dump_difference_matrix(d: &DifferenceGraph, out: &Path) -> Result<()> {
    atomic_write(out, format_matrix_csv(&d.d))
}
