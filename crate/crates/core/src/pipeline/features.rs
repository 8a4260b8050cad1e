use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{membership, Label, ObservationGraph, VertexId};
use crate::io::fmt_f64;
use crate::summary::SummaryGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureScheme {
    /// Edge counts inside the two directional contrast subgraphs.
    P1,
    /// L1 distances to each group summary on the symmetric contrast subgraph.
    P2,
}

impl fmt::Display for FeatureScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureScheme::P1 => "P1",
            FeatureScheme::P2 => "P2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisInfo {
    pub name: String,
    pub set_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub subject_id: String,
    pub label: Label,
    pub x: f64,
    pub y: f64,
}

impl FeatureRow {
    pub fn point(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub rows: Vec<FeatureRow>,
    pub scheme: FeatureScheme,
    pub axes: [AxisInfo; 2],
    /// Identifiers of the contrast results the features were computed from.
    pub provenance: Vec<String>,
}

impl FeatureTable {
    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.rows.iter().map(FeatureRow::point).collect()
    }

    /// `subject_id,label,x,y`, one row per subject.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subject_id,label,x,y\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.subject_id,
                r.label,
                fmt_f64(r.x),
                fmt_f64(r.y)
            ));
        }
        out
    }
}

fn check_range(n: usize, s: &[VertexId]) -> Result<()> {
    membership(n, s).map(|_| ())
}

/// Per subject: edges induced by `s_ab` (x) and by `s_ba` (y).
pub fn features_p1<'a>(
    subjects: impl IntoIterator<Item = &'a ObservationGraph>,
    s_ab: &[VertexId],
    s_ba: &[VertexId],
) -> Result<FeatureTable> {
    let rows = subjects
        .into_iter()
        .map(|g| {
            Ok(FeatureRow {
                subject_id: g.subject_id().to_string(),
                label: g.label(),
                x: g.edge_count_induced(s_ab)? as f64,
                y: g.edge_count_induced(s_ba)? as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureTable {
        rows,
        scheme: FeatureScheme::P1,
        axes: [
            AxisInfo {
                name: "A-B".into(),
                set_size: s_ab.len(),
            },
            AxisInfo {
                name: "B-A".into(),
                set_size: s_ba.len(),
            },
        ],
        provenance: Vec::new(),
    })
}

/// Per subject: `sum_{u<v in s} |a_i(u,v) - w^A(u,v)|` (x) and the same against `w^B` (y),
/// with `a_i` the subject's 0/1 adjacency.
pub fn features_p2<'a>(
    subjects: impl IntoIterator<Item = &'a ObservationGraph>,
    s: &[VertexId],
    sum_a: &SummaryGraph,
    sum_b: &SummaryGraph,
) -> Result<FeatureTable> {
    if sum_a.n() != sum_b.n() {
        return Err(Error::DimensionMismatch(sum_a.n(), sum_b.n()));
    }
    check_range(sum_a.n(), s)?;
    let mut set: Vec<usize> = s.to_vec();
    set.sort_unstable();
    set.dedup();
    let rows = subjects
        .into_iter()
        .map(|g| {
            if g.n() != sum_a.n() {
                return Err(Error::DimensionMismatch(g.n(), sum_a.n()));
            }
            let (mut x, mut y) = (0.0, 0.0);
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    let a = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                    x += (a - sum_a.w.get(u, v)).abs();
                    y += (a - sum_b.w.get(u, v)).abs();
                }
            }
            Ok(FeatureRow {
                subject_id: g.subject_id().to_string(),
                label: g.label(),
                x,
                y,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureTable {
        rows,
        scheme: FeatureScheme::P2,
        axes: [
            AxisInfo {
                name: format!("{}-summary", sum_a.group_label),
                set_size: set.len(),
            },
            AxisInfo {
                name: format!("{}-summary", sum_b.group_label),
                set_size: set.len(),
            },
        ],
        provenance: Vec::new(),
    })
}
