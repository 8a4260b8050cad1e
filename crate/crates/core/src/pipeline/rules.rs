//! Human-readable decision rules over the two features.

use serde::{Deserialize, Serialize};

use super::features::{FeatureScheme, FeatureTable};
use crate::error::{Error, Result};
use crate::graph::Label;

pub const RATIO_FACTORS: [(f64, &str); 7] = [
    (0.25, "a quarter of"),
    (1.0 / 3.0, "a third of"),
    (0.5, "half of"),
    (1.0, ""),
    (2.0, "twice"),
    (3.0, "three times"),
    (4.0, "four times"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleKind {
    /// `axis > threshold => above`, otherwise the other label.
    Threshold {
        axis: Axis,
        threshold: f64,
        above: Label,
    },
    /// The axis never varies: predict the majority label.
    Constant { axis: Axis, label: Label },
    /// `y < factor * x => below`, otherwise the other label.
    Ratio { factor: f64, below: Label },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub kind: RuleKind,
    pub accuracy: f64,
    /// Short form such as `x > 5 => A`.
    pub compact: String,
    pub sentence: String,
}

fn accuracy(table: &FeatureTable, predict: impl Fn(f64, f64) -> Label) -> f64 {
    let hits = table
        .rows
        .iter()
        .filter(|r| predict(r.x, r.y) == r.label)
        .count();
    hits as f64 / table.rows.len() as f64
}

fn fmt_threshold(t: f64) -> String {
    let s = format!("{t:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn threshold_rule(table: &FeatureTable, axis: Axis) -> Rule {
    let pick = |x: f64, y: f64| if axis == Axis::X { x } else { y };
    let axis_name = if axis == Axis::X { "x" } else { "y" };
    let info = &table.axes[if axis == Axis::X { 0 } else { 1 }];

    let mut values: Vec<f64> = table.rows.iter().map(|r| pick(r.x, r.y)).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut best: Option<(f64, Label, f64)> = None;
    for pair in values.windows(2) {
        let t = (pair[0] + pair[1]) / 2.0;
        for above in [Label::A, Label::B] {
            let acc = accuracy(table, |x, y| if pick(x, y) > t { above } else { above.other() });
            if best.is_none_or(|(_, _, b)| acc > b) {
                best = Some((t, above, acc));
            }
        }
    }

    match best {
        Some((threshold, above, acc)) => {
            let sentence = match table.scheme {
                FeatureScheme::P1 => format!(
                    "If an individual exhibits more than {} edges among the {} vertices of the \
                     contrast subgraph {}, then there are high chances that the individual \
                     belongs to class {above}.",
                    threshold.floor(),
                    info.set_size,
                    info.name
                ),
                FeatureScheme::P2 => format!(
                    "If the L1 distance of an individual's induced subgraph from the {} \
                     exceeds {}, then there are high chances that the individual belongs to \
                     class {above}.",
                    info.name,
                    fmt_threshold(threshold)
                ),
            };
            Rule {
                kind: RuleKind::Threshold {
                    axis,
                    threshold,
                    above,
                },
                accuracy: acc,
                compact: format!("{axis_name} > {} => {above}", fmt_threshold(threshold)),
                sentence,
            }
        }
        None => {
            let n_a = table.rows.iter().filter(|r| r.label == Label::A).count();
            let label = if 2 * n_a >= table.rows.len() {
                Label::A
            } else {
                Label::B
            };
            Rule {
                kind: RuleKind::Constant { axis, label },
                accuracy: accuracy(table, |_, _| label),
                compact: format!("{axis_name} constant => {label}"),
                sentence: format!(
                    "The feature {axis_name} does not vary; predicting the majority class {label}."
                ),
            }
        }
    }
}

fn ratio_rule(table: &FeatureTable) -> Rule {
    let mut best: Option<(usize, Label, f64)> = None;
    for (i, &(k, _)) in RATIO_FACTORS.iter().enumerate() {
        for below in [Label::A, Label::B] {
            let acc = accuracy(table, |x, y| if y < k * x { below } else { below.other() });
            if best.is_none_or(|(_, _, b)| acc > b) {
                best = Some((i, below, acc));
            }
        }
    }
    let (i, below, acc) = best.expect("factor list is non-empty");
    let (factor, words) = RATIO_FACTORS[i];
    let [x_axis, y_axis] = &table.axes;
    let of = if words.is_empty() {
        String::new()
    } else {
        format!("{words} ")
    };
    let sentence = match table.scheme {
        FeatureScheme::P1 => format!(
            "If the number of edges induced by the contrast subgraph {} is smaller than {of}the \
             number of edges induced by the contrast subgraph {}, then there are high chances \
             that the individual belongs to class {below}.",
            y_axis.name, x_axis.name
        ),
        FeatureScheme::P2 => format!(
            "If the distance from the {} is smaller than {of}the distance from the {}, then \
             there are high chances that the individual belongs to class {below}.",
            y_axis.name, x_axis.name
        ),
    };
    Rule {
        kind: RuleKind::Ratio { factor, below },
        accuracy: acc,
        compact: format!("y < {} * x => {below}", fmt_threshold(factor)),
        sentence,
    }
}

/// Best threshold rule per axis followed by the best ratio rule, each with its accuracy on
/// `table`.
pub fn extract_rules(table: &FeatureTable) -> Result<Vec<Rule>> {
    let has = |l| table.rows.iter().any(|r| r.label == l);
    if !has(Label::A) || !has(Label::B) {
        return Err(Error::InvalidArgument(
            "rule extraction needs both labels present (single-class input)".into(),
        ));
    }
    Ok(vec![
        threshold_rule(table, Axis::X),
        threshold_rule(table, Axis::Y),
        ratio_rule(table),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::features::{AxisInfo, FeatureRow};

    fn table(rows: &[(Label, f64, f64)]) -> FeatureTable {
        FeatureTable {
            rows: rows
                .iter()
                .enumerate()
                .map(|(i, &(label, x, y))| FeatureRow {
                    subject_id: format!("s{i}"),
                    label,
                    x,
                    y,
                })
                .collect(),
            scheme: FeatureScheme::P1,
            axes: [
                AxisInfo {
                    name: "A-B".into(),
                    set_size: 15,
                },
                AxisInfo {
                    name: "B-A".into(),
                    set_size: 7,
                },
            ],
            provenance: vec![],
        }
    }

    #[test]
    fn separable_threshold() {
        let mut rows = vec![(Label::A, 10.0, 0.0); 10];
        rows.extend(vec![(Label::B, 0.0, 10.0); 10]);
        let rules = extract_rules(&table(&rows)).unwrap();
        assert_eq!(rules[0].compact, "x > 5 => A");
        assert_eq!(rules[0].accuracy, 1.0);
        assert!(rules[0]
            .sentence
            .starts_with("If an individual exhibits more than 5 edges among the 15 vertices"));
        assert_eq!(rules[2].accuracy, 1.0);
    }

    #[test]
    fn constant_axis_uses_majority() {
        let rows = [
            (Label::A, 1.0, 3.0),
            (Label::A, 2.0, 3.0),
            (Label::B, 3.0, 3.0),
        ];
        let rules = extract_rules(&table(&rows)).unwrap();
        assert!(matches!(rules[1].kind, RuleKind::Constant { label: Label::A, .. }));
        assert!((rules[1].accuracy - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(extract_rules(&table(&[(Label::A, 1.0, 1.0)])).is_err());
    }
}
