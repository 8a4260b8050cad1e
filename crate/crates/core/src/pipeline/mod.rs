//! Two-feature representations of subjects and the classification protocol built on them.

mod eval;
mod features;
mod rules;
mod svm;

pub use eval::{
    evaluate_protocol, fit_display_model, mean_stdev, run_repetition, stratified_folds,
    stratified_split, train_eval, train_eval_with, EvalConfig, EvalReport, C_GRID,
};
pub use features::{features_p1, features_p2, AxisInfo, FeatureRow, FeatureScheme, FeatureTable};
pub use rules::{extract_rules, Axis, Rule, RuleKind, RATIO_FACTORS};
pub use svm::{ClassifierModel, SvmParams};
