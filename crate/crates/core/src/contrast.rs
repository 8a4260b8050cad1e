//! Contrast-subgraph extraction between two graph groups.
//!
//! Both directed variants and the symmetric variant reduce to a quasi-clique instance whose
//! pair weights are the (signed or absolute) difference of the group summaries and whose
//! penalty is the constant `alpha`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{nearest_rank, GraphGroup, Label, VertexId};
use crate::solver::{goqc_objective, solve, GoqcInstance, SolverConfig, SolverTrace};
use crate::summary::{
    build_difference, build_summary, DifferenceGraph, DifferenceMode, SummaryGraph, SummaryMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaKind {
    /// Used as given; must lie in `(0, 1]`.
    Raw,
    /// `value / 100`; `value` in `(0, 100]`.
    Percent,
    /// Nearest-rank percentile of the strictly positive pair weights; `value` in `(0, 100)`.
    Percentile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub kind: AlphaKind,
    pub value: f64,
}

impl AlphaSpec {
    pub fn raw(value: f64) -> Self {
        Self {
            kind: AlphaKind::Raw,
            value,
        }
    }

    pub fn percent(value: f64) -> Self {
        Self {
            kind: AlphaKind::Percent,
            value,
        }
    }

    pub fn percentile(value: f64) -> Self {
        Self {
            kind: AlphaKind::Percentile,
            value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.value;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Alpha(format!("alpha must be positive, got {v}")));
        }
        if self.kind == AlphaKind::Raw && v > 1.0 {
            return Err(Error::Alpha(format!(
                "alpha {v} exceeds max pair weight 1: every pair of vertices is detrimental"
            )));
        }
        let ok = match self.kind {
            AlphaKind::Raw => true,
            AlphaKind::Percent => v <= 100.0,
            AlphaKind::Percentile => v < 100.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Alpha(format!("alpha {self} is out of range")))
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlphaKind::Raw => write!(f, "{}", self.value),
            AlphaKind::Percent => write!(f, "{}%", self.value),
            AlphaKind::Percentile => write!(f, "p{}", self.value),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    /// `0.8` is raw, `80` or `80%` is percent (bare integers above 1), `p80` is a percentile.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Alpha(format!("cannot parse alpha {s:?}")))
        };
        let spec = if let Some(rest) = s.strip_prefix('p') {
            Self::percentile(number(rest)?)
        } else if let Some(rest) = s.strip_suffix('%') {
            Self::percent(number(rest)?)
        } else {
            let v = number(s)?;
            if v > 1.0 && v.fract() == 0.0 {
                Self::percent(v)
            } else {
                Self::raw(v)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Resolves `spec` against the pair weights of `d`, enforcing `0 < alpha < max d(u,v)`.
pub fn resolve_alpha(spec: &AlphaSpec, d: &DifferenceGraph) -> Result<f64> {
    spec.validate()?;
    let mut positive: Vec<f64> = d.d.pairs().map(|(_, _, x)| x).filter(|&x| x > 0.0).collect();
    if positive.is_empty() {
        return Err(Error::Alpha(
            "no strictly positive pair weight: every pair of vertices is detrimental".into(),
        ));
    }
    positive.sort_by(f64::total_cmp);
    let max = *positive.last().expect("non-empty");
    let alpha = match spec.kind {
        AlphaKind::Raw => spec.value,
        AlphaKind::Percent => spec.value / 100.0,
        AlphaKind::Percentile => nearest_rank(&positive, spec.value),
    };
    if alpha >= max {
        return Err(Error::Alpha(format!(
            "alpha {alpha} exceeds max pair weight {max}: every pair of vertices is detrimental"
        )));
    }
    Ok(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "A-minus-B")]
    AMinusB,
    #[serde(rename = "B-minus-A")]
    BMinusA,
    #[serde(rename = "symmetric")]
    Symmetric,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AMinusB => "A-minus-B",
            Variant::BMinusA => "B-minus-A",
            Variant::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRef {
    pub label: Label,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastResult {
    /// Sorted ascending.
    pub vertices: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_names: Option<Vec<String>>,
    pub objective: f64,
    pub alpha_resolved: f64,
    pub variant: Variant,
    pub trace: SolverTrace,
    /// The dense group first, the sparse group second.
    pub groups: [GroupRef; 2],
}

/// Difference graph for a variant: signed `first - second`, or absolute.
pub fn difference_for(
    first: &SummaryGraph,
    second: &SummaryGraph,
    symmetric: bool,
) -> Result<DifferenceGraph> {
    let mode = if symmetric {
        DifferenceMode::Absolute
    } else {
        DifferenceMode::Signed
    };
    build_difference(first, second, mode)
}

/// Extraction on precomputed summaries. `first` is the group the subgraph should be dense in
/// (ignored for the symmetric variant beyond bookkeeping).
pub fn extract_from_summaries(
    first: &SummaryGraph,
    second: &SummaryGraph,
    alpha: &AlphaSpec,
    symmetric: bool,
    cfg: &SolverConfig,
) -> Result<ContrastResult> {
    let d = difference_for(first, second, symmetric)?;
    let alpha_resolved = resolve_alpha(alpha, &d)?;
    let inst = GoqcInstance::with_constant_alpha(d.d, alpha_resolved)?;
    let (vertices, objective, trace) = solve(&inst, cfg)?;
    let variant = match (symmetric, first.group_label) {
        (true, _) => Variant::Symmetric,
        (false, Label::A) => Variant::AMinusB,
        (false, Label::B) => Variant::BMinusA,
    };
    debug_assert!((goqc_objective(&inst, &vertices)? - objective).abs() < 1e-9);
    Ok(ContrastResult {
        vertices,
        vertex_names: None,
        objective,
        alpha_resolved,
        variant,
        trace,
        groups: [
            GroupRef {
                label: first.group_label,
                size: first.group_size,
            },
            GroupRef {
                label: second.group_label,
                size: second.group_size,
            },
        ],
    })
}

fn check_groups(a: &GraphGroup, b: &GraphGroup) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    Ok(())
}

pub fn extract_with_mode(
    a: &GraphGroup,
    b: &GraphGroup,
    alpha: &AlphaSpec,
    mode: SummaryMode,
    symmetric: bool,
    cfg: &SolverConfig,
) -> Result<ContrastResult> {
    check_groups(a, b)?;
    let sum_a = build_summary(a, mode)?;
    let sum_b = build_summary(b, mode)?;
    extract_from_summaries(&sum_a, &sum_b, alpha, symmetric, cfg)
}

/// Vertex set dense in `a` and sparse in `b`. The opposite direction is `extract(b, a, ..)`.
pub fn extract(
    a: &GraphGroup,
    b: &GraphGroup,
    alpha: &AlphaSpec,
    cfg: &SolverConfig,
) -> Result<ContrastResult> {
    extract_with_mode(a, b, alpha, SummaryMode::Fraction, false, cfg)
}

/// Vertex set maximizing the absolute summary difference; one result serves both directions.
pub fn extract_symmetric(
    a: &GraphGroup,
    b: &GraphGroup,
    alpha: &AlphaSpec,
    cfg: &SolverConfig,
) -> Result<ContrastResult> {
    extract_with_mode(a, b, alpha, SummaryMode::Fraction, true, cfg)
}

/// Re-evaluates the variant's objective of `vertices` on the difference graph.
pub fn contrast_objective(d: &DifferenceGraph, alpha: f64, vertices: &[VertexId]) -> Result<f64> {
    let inst = GoqcInstance::with_constant_alpha(d.d.clone(), alpha)?;
    goqc_objective(&inst, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymMatrix;

    fn diff(values: &[f64]) -> DifferenceGraph {
        let mut d = SymMatrix::zeros(values.len() + 1);
        for (i, &x) in values.iter().enumerate() {
            d.set(0, i + 1, x);
        }
        DifferenceGraph {
            d,
            mode: DifferenceMode::Signed,
        }
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("0.8".parse::<AlphaSpec>().unwrap(), AlphaSpec::raw(0.8));
        assert_eq!("80".parse::<AlphaSpec>().unwrap(), AlphaSpec::percent(80.0));
        assert_eq!("85%".parse::<AlphaSpec>().unwrap(), AlphaSpec::percent(85.0));
        assert_eq!("p90".parse::<AlphaSpec>().unwrap(), AlphaSpec::percentile(90.0));
        assert!(matches!("0".parse::<AlphaSpec>(), Err(Error::Alpha(_))));
        assert!("p100".parse::<AlphaSpec>().is_err());
        assert!("abc".parse::<AlphaSpec>().is_err());
        let err = "1.5".parse::<AlphaSpec>().unwrap_err().to_string();
        assert!(err.contains("exceeds max pair weight"), "{err}");
    }

    #[test]
    fn resolve_examples() {
        let d = diff(&[0.2, 0.4, 0.6, 0.8, -0.5]);
        assert_eq!(resolve_alpha(&AlphaSpec::percent(80.0), &diff(&[0.9])).unwrap(), 0.8);
        assert_eq!(resolve_alpha(&AlphaSpec::percentile(50.0), &d).unwrap(), 0.4);
        let err = resolve_alpha(&AlphaSpec::raw(0.0), &d).unwrap_err();
        assert!(err.to_string().contains("alpha must be positive"));
        let err = resolve_alpha(&AlphaSpec::raw(0.8), &d).unwrap_err();
        assert!(err.to_string().contains("every pair of vertices is detrimental"));
        assert!(resolve_alpha(&AlphaSpec::raw(0.5), &diff(&[-0.1, 0.0])).is_err());
    }
}
