//! Random-forest classifier: bootstrap-aggregated CART trees with gini splits.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::replicate_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    /// Features examined per split.
    pub mtry: usize,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { n_trees: 100, max_depth: None, mtry: 3, bootstrap: true, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf { class: usize },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Flat tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { class } => return class,
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub n_classes: usize,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    /// Fits on rows `x` with labels in `0..n_classes`. Each tree draws from
    /// its own stream, so the result is independent of thread scheduling.
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: &ForestParams) -> RandomForest {
        assert_eq!(x.len(), y.len());
        assert!(!x.is_empty(), "empty training set");
        let n_features = x[0].len();
        let trees = (0..params.n_trees.max(1))
            .into_par_iter()
            .map(|t| {
                let mut rng = replicate_rng(params.seed, t as u64);
                let rows: Vec<usize> = if params.bootstrap {
                    (0..x.len()).map(|_| rng.gen_range(0..x.len())).collect()
                } else {
                    (0..x.len()).collect()
                };
                let mut builder = TreeBuilder { x, y, n_classes, params, rng, nodes: Vec::new() };
                builder.grow(rows, 0);
                DecisionTree { nodes: builder.nodes }
            })
            .collect();
        RandomForest { n_classes, n_features, trees }
    }

    /// Per-class vote counts.
    pub fn votes(&self, x: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.n_classes];
        for tree in &self.trees {
            votes[tree.predict(x)] += 1;
        }
        votes
    }

    /// Majority vote, ties toward the lower class index.
    pub fn predict(&self, x: &[f64]) -> usize {
        argmax_first(&self.votes(x))
    }
}

fn argmax_first(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / t).powi(2)).sum::<f64>()
}

struct TreeBuilder<'a, R> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    params: &'a ForestParams,
    rng: R,
    nodes: Vec<TreeNode>,
}

struct Split {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl<R: Rng> TreeBuilder<'_, R> {
    fn class_counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &r in rows {
            counts[self.y[r]] += 1;
        }
        counts
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let counts = self.class_counts(&rows);
        let majority = argmax_first(&counts);
        self.nodes.push(TreeNode::Leaf { class: majority });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || self.params.max_depth.is_some_and(|d| depth >= d) {
            return id;
        }
        let Some(split) = self.best_split(&rows, &counts) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| self.x[i][split.feature] <= split.threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = TreeNode::Split { feature: split.feature, threshold: split.threshold, left, right };
        id
    }

    /// Examines features in random order until `mtry` of them admit a split
    /// (more if the first ones are constant on this node).
    fn best_split(&mut self, rows: &[usize], counts: &[usize]) -> Option<Split> {
        let n_features = self.x[0].len();
        let mut features: Vec<usize> = (0..n_features).collect();
        features.shuffle(&mut self.rng);
        let mut best: Option<Split> = None;
        let mut usable = 0;
        for f in features {
            if usable >= self.params.mtry.max(1) {
                break;
            }
            if let Some(s) = self.best_split_on(rows, counts, f) {
                usable += 1;
                if best.as_ref().is_none_or(|b| s.impurity < b.impurity) {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn best_split_on(&self, rows: &[usize], counts: &[usize], f: usize) -> Option<Split> {
        let mut sorted: Vec<(f64, usize)> = rows.iter().map(|&r| (self.x[r][f], self.y[r])).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = sorted.len();
        let mut left = vec![0; self.n_classes];
        let mut right = counts.to_vec();
        let mut best: Option<Split> = None;
        for i in 0..total - 1 {
            let (v, c) = sorted[i];
            left[c] += 1;
            right[c] -= 1;
            let next = sorted[i + 1].0;
            if next <= v {
                continue;
            }
            let nl = i + 1;
            let nr = total - nl;
            let impurity = (nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr)) / total as f64;
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next {
                    threshold = v;
                }
                best = Some(Split { feature: f, threshold, impurity });
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_values() {
        assert_eq!(gini(&[4, 0], 4), 0.0);
        assert_eq!(gini(&[2, 2], 4), 0.5);
    }

    #[test]
    fn learns_threshold_rule() {
        let x: Vec<Vec<f64>> = (0..60).map(|i| vec![i as f64, (i * 7 % 13) as f64]).collect();
        let y: Vec<usize> = (0..60).map(|i| usize::from(i >= 30)).collect();
        let forest = RandomForest::fit(&x, &y, 2, &ForestParams { n_trees: 15, ..Default::default() });
        for (row, &label) in x.iter().zip(&y) {
            assert_eq!(forest.predict(row), label);
        }
        assert_eq!(forest.predict(&[100.0, 0.0]), 1);
    }

    #[test]
    fn identical_rows_with_conflicting_labels_terminate() {
        let x = vec![vec![1.0, 1.0]; 4];
        let y = vec![0, 1, 1, 0];
        let forest = RandomForest::fit(&x, &y, 2, &ForestParams { n_trees: 3, bootstrap: false, ..Default::default() });
        assert_eq!(forest.trees[0].nodes.len(), 1);
        assert_eq!(forest.predict(&[1.0, 1.0]), 0);
    }

    #[test]
    fn deterministic_under_seed() {
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![(i * 31 % 17) as f64, (i % 5) as f64, i as f64]).collect();
        let y: Vec<usize> = (0..40).map(|i| i % 3).collect();
        let p = ForestParams { n_trees: 10, seed: 4, ..Default::default() };
        assert_eq!(RandomForest::fit(&x, &y, 3, &p), RandomForest::fit(&x, &y, 3, &p));
    }

    #[test]
    fn depth_limit() {
        let x: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64]).collect();
        let y: Vec<usize> = (0..16).map(|i| i % 2).collect();
        let p = ForestParams { n_trees: 1, max_depth: Some(1), bootstrap: false, mtry: 1, seed: 0 };
        let forest = RandomForest::fit(&x, &y, 2, &p);
        assert!(forest.trees[0].nodes.len() <= 3);
    }
}
