use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BetaResult;

/// Standing of an algorithm against the Myopic baseline on one network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelativeCategory {
    Better,
    Equivalent,
    Within80,
    Worse,
}

impl RelativeCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            RelativeCategory::Better => "better",
            RelativeCategory::Equivalent => "equivalent",
            RelativeCategory::Within80 => "within80",
            RelativeCategory::Worse => "worse",
        }
    }
}

impl fmt::Display for RelativeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelativeCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [RelativeCategory::Better, RelativeCategory::Equivalent, RelativeCategory::Within80, RelativeCategory::Worse]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Categorization {
    pub category: RelativeCategory,
    /// The baseline slope is not positive, so ratios against it are unreliable.
    pub flagged: bool,
}

/// Rules in precedence order: better than baseline plus one standard error,
/// within one standard error, at least 80% of baseline, otherwise worse.
pub fn categorize_values(beta_alg: f64, beta_myopic: f64, se_myopic: f64) -> Categorization {
    let category = if beta_alg > beta_myopic + se_myopic {
        RelativeCategory::Better
    } else if (beta_alg - beta_myopic).abs() <= se_myopic {
        RelativeCategory::Equivalent
    } else if beta_alg >= 0.8 * beta_myopic {
        RelativeCategory::Within80
    } else {
        RelativeCategory::Worse
    };
    Categorization { category, flagged: beta_myopic <= 0.0 }
}

pub fn categorize(beta_alg: &BetaResult, beta_myopic: &BetaResult) -> Categorization {
    categorize_values(beta_alg.mean, beta_myopic.mean, beta_myopic.se)
}
