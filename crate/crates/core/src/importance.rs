//! Diagnostics relating a trained network back to feature importance.
//!
//! Two proxies are available: the analytic input gradient of each output
//! (`∂y/∂x_k = σ'(φ_y) Σ_j w_jy w_kj σ'(φ_j)`) and the mean absolute
//! first-layer weight of each input. Neither is used during training.

use serde::{Serialize, Serializer};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fri::FriVector;
use crate::net::{sigmoid_slope, Network};

/// `∂y/∂x_k` at one input, one row per output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyVector {
    pub per_output: Vec<Vec<f64>>,
}

pub fn dependency_gradient(net: &Network, x: &[f64]) -> Result<DependencyVector> {
    let acts = net.forward(x)?;
    let t = net.topology();
    let hidden_slope: Vec<f64> = acts.hidden_post.iter().map(|&h| sigmoid_slope(h)).collect();
    let per_output = (0..t.n_outputs)
        .map(|y| {
            let out_slope = sigmoid_slope(acts.output_post[y]);
            (0..t.n_inputs)
                .map(|k| {
                    let sum: f64 = hidden_slope
                        .iter()
                        .enumerate()
                        .map(|(j, s)| net.output_weight(j, y) * net.input_weight(k, j) * s)
                        .sum();
                    out_slope * sum
                })
                .collect()
        })
        .collect();
    Ok(DependencyVector { per_output })
}

/// Mean over hidden units of `|w_kj|` for every input `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalImportance {
    pub avg_abs_weight: Vec<f64>,
}

pub fn empirical_importance(net: &Network) -> EmpiricalImportance {
    let t = net.topology();
    let avg_abs_weight = (0..t.n_inputs)
        .map(|k| net.input_column(k).map(f64::abs).sum::<f64>() / t.n_hidden as f64)
        .collect();
    EmpiricalImportance { avg_abs_weight }
}

/// Rank correlation, or `Undefined` when either side has no variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Agreement {
    Defined(f64),
    Undefined,
}

impl Agreement {
    pub fn value(self) -> Option<f64> {
        match self {
            Agreement::Defined(v) => Some(v),
            Agreement::Undefined => None,
        }
    }
}

impl Serialize for Agreement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Agreement::Defined(v) => s.serialize_f64(*v),
            Agreement::Undefined => s.serialize_str("undefined"),
        }
    }
}

/// Ranks starting at 1; tied values share their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

pub fn spearman(a: &[f64], b: &[f64]) -> Result<Agreement> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            what: "rank correlation inputs",
            expected: a.len(),
            actual: b.len(),
        });
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = a.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        va += (x - mean) * (x - mean);
        vb += (y - mean) * (y - mean);
    }
    if va == 0.0 || vb == 0.0 {
        return Ok(Agreement::Undefined);
    }
    Ok(Agreement::Defined(
        (cov / (va * vb).sqrt()).clamp(-1.0, 1.0),
    ))
}

/// Spearman correlation between input FRI and [`empirical_importance`].
pub fn fri_agreement(net: &Network, fri: &FriVector) -> Result<Agreement> {
    fri.check_len(net.topology().n_inputs, "FRI for network inputs")?;
    spearman(fri, &empirical_importance(net).avg_abs_weight)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceRow {
    pub feature_index: usize,
    pub fri: f64,
    pub avg_abs_weight: f64,
    pub dependency_mean_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceReport {
    pub rows: Vec<ImportanceRow>,
    /// Rank agreement between per-feature FRI and per-feature average absolute weight.
    pub fri_agreement: Agreement,
}

/// Per raw feature (sequence position): its FRI, the mean of
/// [`empirical_importance`] over its encoded inputs, and the mean of
/// `|∂y/∂x|` over its inputs, the output units and every instance of `data`.
/// The last column is a dataset average standing in for the expected
/// dependency of a feature.
pub fn importance_report(
    net: &Network,
    data: &Dataset,
    per_feature_fri: &FriVector,
) -> Result<ImportanceReport> {
    let t = net.topology();
    if data.n_inputs() != t.n_inputs {
        return Err(Error::Dimension {
            what: "dataset inputs vs model inputs",
            expected: t.n_inputs,
            actual: data.n_inputs(),
        });
    }
    per_feature_fri.check_len(data.positions, "per-feature FRI")?;
    let width = data.block_width();

    let mut dep = vec![0.0; t.n_inputs];
    for inst in &data.instances {
        for row in dependency_gradient(net, &inst.x)?.per_output {
            for (acc, d) in dep.iter_mut().zip(row) {
                *acc += d.abs();
            }
        }
    }
    let samples = (data.len() * t.n_outputs) as f64;
    let weights = empirical_importance(net).avg_abs_weight;

    let block_mean =
        |v: &[f64], p: usize| v[p * width..(p + 1) * width].iter().sum::<f64>() / width as f64;
    let rows: Vec<ImportanceRow> = (0..data.positions)
        .map(|p| ImportanceRow {
            feature_index: p,
            fri: per_feature_fri[p],
            avg_abs_weight: block_mean(&weights, p),
            dependency_mean_abs: block_mean(&dep, p) / samples,
        })
        .collect();
    let per_feature_weight: Vec<f64> = rows.iter().map(|r| r.avg_abs_weight).collect();
    let fri_agreement = spearman(per_feature_fri, &per_feature_weight)?;
    Ok(ImportanceReport {
        rows,
        fri_agreement,
    })
}

impl ImportanceReport {
    /// CSV with header `feature_index,fri,avg_abs_weight,dependency_mean_abs`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::Topology;

    #[test]
    fn zero_network_has_zero_dependency() {
        let net = Network::zeros(Topology::new(3, 2, 2).unwrap()).unwrap();
        let d = dependency_gradient(&net, &[0.2, -0.4, 1.0]).unwrap();
        assert!(d.per_output.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_region_recovers_input_weights() {
        // one hidden unit kept near zero pre-activation acts as a scaled perceptron
        let w = [0.8, -0.3, 0.5, 0.1];
        let eps = 1e-6;
        let net = Network::from_parts(
            Topology::new(4, 1, 1).unwrap(),
            w.iter().map(|v| v * eps).collect(),
            vec![0.0],
            vec![1.0],
            vec![0.0],
        )
        .unwrap();
        let d = &dependency_gradient(&net, &[0.3, 0.9, -0.2, 0.5])
            .unwrap()
            .per_output[0];
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let cos = d.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / (norm(d) * norm(&w));
        assert!((cos - 1.0).abs() < 1e-12, "{cos}");
    }

    #[test]
    fn constant_magnitudes_average() {
        let net = Network::from_parts(
            Topology::new(2, 5, 1).unwrap(),
            (0..5)
                .flat_map(|j| [-0.4, if j % 2 == 0 { 0.2 } else { -0.6 }])
                .collect(),
            vec![0.0; 5],
            vec![0.0; 5],
            vec![0.0],
        )
        .unwrap();
        let e = empirical_importance(&net).avg_abs_weight;
        assert!((e[0] - 0.4).abs() < 1e-15);
        assert!((e[1] - 0.36).abs() < 1e-15);
        let zero = Network::zeros(Topology::new(3, 2, 1).unwrap()).unwrap();
        assert_eq!(empirical_importance(&zero).avg_abs_weight, vec![0.0; 3]);
    }

    #[test]
    fn spearman_extremes() {
        let v = [0.1, 0.5, 0.3, 0.9];
        assert_eq!(spearman(&v, &v).unwrap(), Agreement::Defined(1.0));
        let rev = [0.9, 0.2, 0.4, 0.1];
        assert_eq!(spearman(&v, &rev).unwrap(), Agreement::Defined(-1.0));
        assert_eq!(spearman(&[0.3; 4], &v).unwrap(), Agreement::Undefined);
        assert!(spearman(&v, &v[..3]).is_err());
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(
            average_ranks(&[2.0, 1.0, 2.0, 3.0]),
            vec![2.5, 1.0, 2.5, 4.0]
        );
    }

    #[test]
    fn agreement_serializes_undefined_as_string() {
        assert_eq!(
            serde_json::to_string(&Agreement::Undefined).unwrap(),
            "\"undefined\""
        );
        assert_eq!(
            serde_json::to_string(&Agreement::Defined(0.5)).unwrap(),
            "0.5"
        );
    }

    #[test]
    fn fri_agreement_matches_own_weights() {
        let net = Network::from_parts(
            Topology::new(3, 2, 1).unwrap(),
            vec![0.1, -0.5, 0.9, 0.3, 0.2, -0.7],
            vec![0.0; 2],
            vec![1.0, 1.0],
            vec![0.0],
        )
        .unwrap();
        let imp = empirical_importance(&net).avg_abs_weight;
        let scaled: Vec<f64> = imp.iter().map(|v| v / 2.0).collect();
        let fri = FriVector::new(scaled).unwrap();
        assert_eq!(fri_agreement(&net, &fri).unwrap(), Agreement::Defined(1.0));
        assert_eq!(
            fri_agreement(&net, &FriVector::uniform(3, 0.3).unwrap()).unwrap(),
            Agreement::Undefined
        );
    }
}
