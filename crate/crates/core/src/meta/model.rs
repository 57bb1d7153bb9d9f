use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::forest::{ForestParams, RandomForest};
use super::{EnsembleSet, MetaError};
use crate::graph::{compute_features, Domain, Graph, NetworkFeatures};
use crate::seeders::AlgorithmId;

pub const MODEL_FORMAT: &str = "maximin-meta-model";
pub const MODEL_VERSION: u32 = 1;
const MIN_NETWORKS: usize = 10;
const TEST_FRACTION: f64 = 0.2;

/// A training example: one network, its features and its best portfolio member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledNetwork {
    pub name: String,
    pub features: NetworkFeatures,
    pub label: AlgorithmId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingManifest {
    pub split_seed: u64,
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub train_accuracy: f64,
    /// `None` when the held-out split is empty.
    pub test_accuracy: Option<f64>,
}

/// Classifier mapping structural features to a portfolio member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaModel {
    pub format: String,
    pub version: u32,
    pub ensemble: EnsembleSet,
    pub feature_columns: Vec<String>,
    pub hyperparameters: ForestParams,
    pub manifest: TrainingManifest,
    /// Set when every training label was the same member; the forest is then
    /// skipped and this member is always predicted.
    pub constant: Option<AlgorithmId>,
    pub forest: Option<RandomForest>,
}

impl MetaModel {
    pub fn predict_vector(&self, x: &[f64]) -> Result<AlgorithmId, MetaError> {
        if x.len() != self.feature_columns.len() {
            return Err(MetaError::FeatureWidth { expected: self.feature_columns.len(), got: x.len() });
        }
        if let Some(c) = self.constant {
            return Ok(c);
        }
        let forest = self.forest.as_ref().ok_or_else(|| MetaError::ModelFormat("model has no forest".into()))?;
        Ok(self.ensemble.members[forest.predict(x)])
    }

    pub fn predict_features(&self, f: &NetworkFeatures) -> Result<AlgorithmId, MetaError> {
        self.predict_vector(&f.to_vector())
    }

    pub fn to_json(&self) -> Result<String, MetaError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<MetaModel, MetaError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let format = value.get("format").and_then(|v| v.as_str()).unwrap_or_default();
        let version = value.get("version").and_then(|v| v.as_u64()).unwrap_or_default();
        if format != MODEL_FORMAT || version != u64::from(MODEL_VERSION) {
            return Err(MetaError::ModelFormat(format!("format `{format}` version {version}")));
        }
        let model: MetaModel = serde_json::from_value(value)?;
        model.ensemble.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), MetaError> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<MetaModel, MetaError> {
        MetaModel::from_json(&std::fs::read_to_string(path)?)
    }
}

fn accuracy(model: &MetaModel, rows: &[&LabeledNetwork]) -> Result<Option<f64>, MetaError> {
    if rows.is_empty() {
        return Ok(None);
    }
    let mut hits = 0;
    for r in rows {
        if model.predict_features(&r.features)? == r.label {
            hits += 1;
        }
    }
    Ok(Some(hits as f64 / rows.len() as f64))
}

/// Fits a forest on a uniformly random 80% of `samples` and scores the rest.
pub fn train_meta(
    samples: &[LabeledNetwork],
    ensemble: &EnsembleSet,
    split_seed: u64,
    params: &ForestParams,
) -> Result<MetaModel, MetaError> {
    ensemble.validate()?;
    if samples.len() < MIN_NETWORKS {
        return Err(MetaError::TooFewNetworks { min: MIN_NETWORKS, got: samples.len() });
    }
    let mut labels = Vec::with_capacity(samples.len());
    for s in samples {
        let idx = ensemble
            .members
            .iter()
            .position(|&m| m == s.label)
            .ok_or_else(|| MetaError::LabelOutsideEnsemble { label: s.label.name().to_string() })?;
        labels.push(idx);
    }

    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(split_seed));
    let n_test = (samples.len() as f64 * TEST_FRACTION).round() as usize;
    let (test_idx, train_idx) = order.split_at(n_test);

    let first = labels[train_idx[0]];
    let constant = train_idx.iter().all(|&i| labels[i] == first).then(|| ensemble.members[first]);
    if constant.is_some() {
        log::warn!("all training labels are `{}`; model is constant", ensemble.members[first]);
    }
    let forest = match constant {
        Some(_) => None,
        None => {
            let x: Vec<Vec<f64>> = train_idx.iter().map(|&i| samples[i].features.to_vector()).collect();
            let y: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
            Some(RandomForest::fit(&x, &y, ensemble.members.len(), params))
        }
    };

    let mut model = MetaModel {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        ensemble: ensemble.clone(),
        feature_columns: NetworkFeatures::column_names(),
        hyperparameters: *params,
        manifest: TrainingManifest {
            split_seed,
            train: train_idx.iter().map(|&i| samples[i].name.clone()).collect(),
            test: test_idx.iter().map(|&i| samples[i].name.clone()).collect(),
            train_accuracy: 0.0,
            test_accuracy: None,
        },
        constant,
        forest,
    };
    let train_rows: Vec<&LabeledNetwork> = train_idx.iter().map(|&i| &samples[i]).collect();
    let test_rows: Vec<&LabeledNetwork> = test_idx.iter().map(|&i| &samples[i]).collect();
    model.manifest.train_accuracy = accuracy(&model, &train_rows)?.unwrap_or(0.0);
    model.manifest.test_accuracy = accuracy(&model, &test_rows)?;
    Ok(model)
}

/// Predicts the portfolio member for `g`.
pub fn meta_predict(model: &MetaModel, g: &Graph, domain: Domain) -> Result<AlgorithmId, MetaError> {
    model.predict_features(&compute_features(g, domain))
}
