//! Subject graphs over a shared, positionally indexed vertex set.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Position of a vertex (ROI) in `[0, n)`. Identity is positional across all subjects.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
        })
    }
}

/// Maps manifest label strings (e.g. `TD`, `ASD`) onto the two group tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAliases(BTreeMap<String, Label>);

impl Default for LabelAliases {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        map.insert("A".to_string(), Label::A);
        map.insert("B".to_string(), Label::B);
        Self(map)
    }
}

impl LabelAliases {
    pub fn resolve(&self, raw: &str) -> Option<Label> {
        self.0.get(raw.trim()).copied()
    }

    pub fn insert(&mut self, alias: impl Into<String>, label: Label) {
        self.0.insert(alias.into(), label);
    }
}

impl FromStr for LabelAliases {
    type Err = Error;

    /// Parses `TD=A,ASD=B`. The canonical `A`/`B` tags always remain valid.
    fn from_str(s: &str) -> Result<Self> {
        let mut aliases = Self::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (alias, tag) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("bad label alias {item:?}")))?;
            let label = match tag.trim() {
                "A" => Label::A,
                "B" => Label::B,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "label alias {alias:?} must map to A or B, got {other:?}"
                    )))
                }
            };
            aliases.insert(alias.trim(), label);
        }
        Ok(aliases)
    }
}

/// One subject's undirected graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationGraph {
    n: usize,
    /// Sorted, unique, `u < v`.
    edges: Vec<(VertexId, VertexId)>,
    /// Parallel to `edges` when the graph is weighted.
    weights: Option<Vec<f64>>,
    subject_id: String,
    label: Label,
}

fn normalize_pair(n: usize, u: usize, v: usize) -> Result<(usize, usize)> {
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if u == v {
        return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
    }
    Ok((u.min(v), u.max(v)))
}

impl ObservationGraph {
    /// Unweighted graph. Duplicate edges (in either orientation) collapse to one.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        subject_id: impl Into<String>,
        label: Label,
    ) -> Result<Self> {
        let mut list = edges
            .into_iter()
            .map(|(u, v)| normalize_pair(n, u, v))
            .collect::<Result<Vec<_>>>()?;
        list.sort_unstable();
        list.dedup();
        Ok(Self {
            n,
            edges: list,
            weights: None,
            subject_id: subject_id.into(),
            label,
        })
    }

    /// Weighted graph. Every weight must be finite; a repeated pair is an error.
    pub fn weighted(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
        subject_id: impl Into<String>,
        label: Label,
    ) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            let pair = normalize_pair(n, u, v)?;
            if !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite weight on edge ({u},{v})"
                )));
            }
            list.push((pair, w));
        }
        list.sort_by_key(|e| e.0);
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            let (u, v) = w[0].0;
            return Err(Error::InvalidGraph(format!("duplicate weighted edge ({u},{v})")));
        }
        let (edges, weights) = list.into_iter().unzip();
        Ok(Self {
            n,
            edges,
            weights: Some(weights),
            subject_id: subject_id.into(),
            label,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    /// Iterates `(u, v, weight)`; unweighted edges carry weight 1.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().enumerate().map(move |(i, &(u, v))| {
            let w = self.weights.as_ref().map_or(1.0, |ws| ws[i]);
            (u, v, w)
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// 0/1 adjacency indicator, regardless of weights.
    pub fn indicator(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, 1.0);
        }
        m
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edge_count_induced(&self, s: &[VertexId]) -> Result<usize> {
        let mask = membership(self.n, s)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .count())
    }
}

/// Boolean membership vector for `s`, validating the range.
pub fn membership(n: usize, s: &[VertexId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &u in s {
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        mask[u] = true;
    }
    Ok(mask)
}

/// Non-empty set of subjects sharing one label and one vertex count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphGroup {
    label: Label,
    members: Vec<ObservationGraph>,
    n: usize,
}

impl GraphGroup {
    pub fn new(label: Label, members: Vec<ObservationGraph>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyGroup)?;
        let n = first.n();
        let mut seen = HashSet::new();
        for g in &members {
            if g.n() != n {
                return Err(Error::InconsistentVertexCount {
                    expected: n,
                    found: g.n(),
                    subject: g.subject_id().to_string(),
                });
            }
            if g.label() != label {
                return Err(Error::InvalidGraph(format!(
                    "subject {} has label {} in group {label}",
                    g.subject_id(),
                    g.label()
                )));
            }
            if !seen.insert(g.subject_id()) {
                return Err(Error::DuplicateSubject(g.subject_id().to_string()));
            }
        }
        Ok(Self { label, members, n })
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn members(&self) -> &[ObservationGraph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// ROI signals for one subject, row-major `n_rois x n_samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesMatrix {
    n_rois: usize,
    n_samples: usize,
    values: Vec<f64>,
    subject_id: String,
}

impl TimeSeriesMatrix {
    pub fn new(
        n_rois: usize,
        n_samples: usize,
        values: Vec<f64>,
        subject_id: impl Into<String>,
    ) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "time series need at least 2 samples, got {n_samples}"
            )));
        }
        if values.len() != n_rois * n_samples {
            return Err(Error::DimensionMismatch(values.len(), n_rois * n_samples));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at ROI {}, sample {}",
                i / n_samples,
                i % n_samples
            )));
        }
        Ok(Self {
            n_rois,
            n_samples,
            values,
            subject_id: subject_id.into(),
        })
    }

    pub fn n_rois(&self) -> usize {
        self.n_rois
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn row(&self, roi: usize) -> &[f64] {
        &self.values[roi * self.n_samples..(roi + 1) * self.n_samples]
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    /// Pearson correlation matrix over ROI pairs (diagonal left at 0).
    pub fn pearson(&self) -> Result<SymMatrix> {
        let centered = (0..self.n_rois)
            .map(|r| {
                let row = self.row(r);
                let mean = row.iter().sum::<f64>() / row.len() as f64;
                let dev: Vec<f64> = row.iter().map(|x| x - mean).collect();
                let norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::ZeroVariance {
                        roi: r,
                        subject: self.subject_id.clone(),
                    });
                }
                Ok(dev.into_iter().map(|d| d / norm).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut corr = SymMatrix::zeros(self.n_rois);
        for u in 0..self.n_rois {
            for v in (u + 1)..self.n_rois {
                let r: f64 = centered[u].iter().zip(&centered[v]).map(|(a, b)| a * b).sum();
                corr.set(u, v, r.clamp(-1.0, 1.0));
            }
        }
        Ok(corr)
    }
}

/// Nearest-rank percentile of an ascending-sorted, non-empty slice.
///
/// Rank is `ceil(p/100 * len)`, clamped to `[1, len]`.
pub fn nearest_rank(sorted: &[f64], percentile: f64) -> f64 {
    assert!(!sorted.is_empty(), "nearest_rank of an empty slice");
    let len = sorted.len();
    // the epsilon absorbs representation error in products such as 0.8 * 6670
    let rank = (percentile / 100.0 * len as f64 - 1e-9).ceil() as usize;
    sorted[rank.clamp(1, len) - 1]
}

/// Thresholded correlation graph: edge `(u,v)` iff `corr(u,v) > t`, where `t`
/// is the nearest-rank `percentile` of the subject's off-diagonal correlations.
pub fn correlation_graph(
    ts: &TimeSeriesMatrix,
    percentile: f64,
    label: Label,
) -> Result<ObservationGraph> {
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(Error::InvalidArgument(format!(
            "percentile must lie in (0, 100), got {percentile}"
        )));
    }
    let corr = ts.pearson()?;
    let mut values: Vec<f64> = corr.pairs().map(|(_, _, r)| r).collect();
    if values.is_empty() {
        return ObservationGraph::new(ts.n_rois(), [], ts.subject_id(), label);
    }
    values.sort_by(f64::total_cmp);
    let t = nearest_rank(&values, percentile);
    let edges = corr.pairs().filter(|&(_, _, r)| r > t).map(|(u, v, _)| (u, v));
    ObservationGraph::new(ts.n_rois(), edges, ts.subject_id(), label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ObservationGraph {
        ObservationGraph::new(3, [(0, 1), (1, 2), (0, 2)], "t", Label::A).unwrap()
    }

    #[test]
    fn induced_edge_counts() {
        let g = triangle();
        assert_eq!(g.edge_count_induced(&[0, 1, 2]).unwrap(), 3);
        assert_eq!(g.edge_count_induced(&[0]).unwrap(), 0);
        assert!(matches!(
            g.edge_count_induced(&[3]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn rejects_self_loops_and_range() {
        assert!(ObservationGraph::new(3, [(1, 1)], "s", Label::A).is_err());
        assert!(ObservationGraph::new(3, [(0, 3)], "s", Label::A).is_err());
        assert!(ObservationGraph::weighted(3, [(0, 1, f64::NAN)], "s", Label::A).is_err());
        assert!(ObservationGraph::weighted(3, [(0, 1, 1.0), (1, 0, 2.0)], "s", Label::A).is_err());
    }

    #[test]
    fn group_invariants() {
        assert!(matches!(GraphGroup::new(Label::A, vec![]), Err(Error::EmptyGroup)));
        let a = ObservationGraph::new(5, [], "x", Label::A).unwrap();
        let b = ObservationGraph::new(6, [], "y", Label::A).unwrap();
        assert!(matches!(
            GraphGroup::new(Label::A, vec![a.clone(), b]),
            Err(Error::InconsistentVertexCount { .. })
        ));
        assert!(matches!(
            GraphGroup::new(Label::A, vec![a.clone(), a]),
            Err(Error::DuplicateSubject(_))
        ));
    }

    #[test]
    fn nearest_rank_examples() {
        let v = [0.2, 0.4, 0.6, 0.8];
        assert_eq!(nearest_rank(&v, 50.0), 0.4);
        assert_eq!(nearest_rank(&v, 1.0), 0.2);
        assert_eq!(nearest_rank(&v, 99.0), 0.8);
    }

    #[test]
    fn constant_row_is_rejected() {
        let ts = TimeSeriesMatrix::new(2, 3, vec![1.0, 2.0, 3.0, 5.0, 5.0, 5.0], "s").unwrap();
        assert!(matches!(
            correlation_graph(&ts, 80.0, Label::A),
            Err(Error::ZeroVariance { roi: 1, .. })
        ));
    }

    #[test]
    fn perfectly_correlated_pair_is_an_edge() {
        // rows 0 and 3 are affine copies; rows 1, 2, 4 are unrelated patterns
        let rows = [
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            vec![3.0, -1.0, 4.0, 1.0, -5.0, 9.0],
            vec![2.0, 7.0, -1.0, 8.0, 2.0, -8.0],
            vec![3.0, 5.0, 7.0, 9.0, 11.0, 13.0],
            vec![-2.0, 6.0, 5.0, -3.0, 5.0, 0.5],
        ];
        let ts = TimeSeriesMatrix::new(5, 6, rows.concat(), "s").unwrap();
        let g = correlation_graph(&ts, 80.0, Label::B).unwrap();
        assert!(g.has_edge(0, 3));
        assert!(g.edges().iter().all(|&(u, v)| u < v));
    }
}
