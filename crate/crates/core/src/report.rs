use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of a grid-based numerical check.
///
/// A failed check is a normal result, not an error. `params` records the
/// truncation and grid choices so the tolerance can be interpreted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub argmax_xi: f64,
    pub params: BTreeMap<String, f64>,
}

impl CheckReport {
    pub(crate) fn new(max_deviation: f64, argmax_xi: f64, tol: f64) -> Self {
        let mut params = BTreeMap::new();
        params.insert("tol".to_owned(), tol);
        Self {
            pass: max_deviation <= tol,
            max_deviation,
            argmax_xi,
            params,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }
}

/// Running maximum of `|deviation|` together with where it was seen.
#[derive(Clone, Copy, Debug)]
pub(crate) struct MaxTracker {
    pub value: f64,
    pub at: f64,
}

impl MaxTracker {
    pub fn new() -> Self {
        Self {
            value: 0.0,
            at: 0.0,
        }
    }

    /// Keeps the first location when deviations tie up to a few ulps.
    pub fn observe(&mut self, deviation: f64, at: f64) {
        let slack = 4.0 * f64::EPSILON * self.value;
        if deviation > self.value + slack || deviation.is_nan() {
            self.value = deviation;
            self.at = at;
        }
    }
}
