//! Linear max-margin classifier trained by full-batch hinge-loss subgradient descent.

use serde::{Deserialize, Serialize};

use crate::graph::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub epochs: usize,
    pub standardize: bool,
    /// Adds `x^2, y^2, xy` to the scaled features.
    pub quadratic: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            epochs: 2000,
            standardize: true,
            quadratic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper_c: f64,
    /// `(mean, stdev)` per raw feature, from the training points only.
    pub feature_scaling: [(f64, f64); 2],
    pub quadratic: bool,
}

fn target(label: Label) -> f64 {
    match label {
        Label::A => 1.0,
        Label::B => -1.0,
    }
}

fn expand(scaled: [f64; 2], quadratic: bool) -> Vec<f64> {
    let [x, y] = scaled;
    if quadratic {
        vec![x, y, x * x, y * y, x * y]
    } else {
        vec![x, y]
    }
}

fn scaling(points: &[[f64; 2]], standardize: bool) -> [(f64, f64); 2] {
    if !standardize || points.is_empty() {
        return [(0.0, 1.0); 2];
    }
    let m = points.len() as f64;
    std::array::from_fn(|j| {
        let mean = points.iter().map(|p| p[j]).sum::<f64>() / m;
        let var = points.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>() / m;
        let sd = var.sqrt();
        (mean, if sd > 0.0 { sd } else { 1.0 })
    })
}

impl ClassifierModel {
    /// Minimizes `lambda/2 |w|^2 + mean(hinge)` with `lambda = 1 / (C m)`, step `1/(lambda t)`.
    /// The bias is an extra constant feature; iterates are projected onto the ball of radius
    /// `1/sqrt(lambda)`.
    pub fn train(points: &[[f64; 2]], labels: &[Label], hyper_c: f64, params: &SvmParams) -> Self {
        assert_eq!(points.len(), labels.len());
        let feature_scaling = scaling(points, params.standardize);
        let scale = |p: &[f64; 2]| {
            std::array::from_fn(|j| (p[j] - feature_scaling[j].0) / feature_scaling[j].1)
        };
        let data: Vec<(Vec<f64>, f64)> = points
            .iter()
            .zip(labels)
            .map(|(p, &l)| {
                let mut z = expand(scale(p), params.quadratic);
                z.push(1.0);
                (z, target(l))
            })
            .collect();
        let dim = if params.quadratic { 6 } else { 3 };
        let mut w = vec![0.0; dim];
        let m = data.len().max(1) as f64;
        let lambda = 1.0 / (hyper_c * m);
        let radius = 1.0 / lambda.sqrt();
        let mut grad = vec![0.0; dim];
        for t in 1..=params.epochs {
            grad.iter_mut().zip(&w).for_each(|(g, wi)| *g = lambda * wi);
            for (z, y) in &data {
                let margin = y * z.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
                if margin < 1.0 {
                    grad.iter_mut().zip(z).for_each(|(g, zi)| *g -= y * zi / m);
                }
            }
            let eta = 1.0 / (lambda * t as f64);
            w.iter_mut().zip(&grad).for_each(|(wi, g)| *wi -= eta * g);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > radius {
                w.iter_mut().for_each(|x| *x *= radius / norm);
            }
        }
        let bias = w.pop().expect("bias coordinate");
        Self {
            weights: w,
            bias,
            hyper_c,
            feature_scaling,
            quadratic: params.quadratic,
        }
    }

    /// Positive scores predict `A`.
    pub fn decision(&self, p: [f64; 2]) -> f64 {
        let scaled = std::array::from_fn(|j| {
            (p[j] - self.feature_scaling[j].0) / self.feature_scaling[j].1
        });
        expand(scaled, self.quadratic)
            .iter()
            .zip(&self.weights)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            + self.bias
    }

    pub fn predict(&self, p: [f64; 2]) -> Label {
        if self.decision(p) >= 0.0 {
            Label::A
        } else {
            Label::B
        }
    }

    pub fn accuracy(&self, points: &[[f64; 2]], labels: &[Label]) -> f64 {
        if points.is_empty() {
            return 0.0;
        }
        let hits = points
            .iter()
            .zip(labels)
            .filter(|(p, &l)| self.predict(**p) == l)
            .count();
        hits as f64 / points.len() as f64
    }
}
