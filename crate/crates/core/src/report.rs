use serde::{Deserialize, Serialize};

/// Outcome of a single checked condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub pass: bool,
    /// Size of the violation; zero or tiny when the condition holds.
    pub residual: f64,
    /// Slack of a strict inequality, where one applies.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin: Option<f64>,
}

impl ConditionEntry {
    /// Pass iff `residual <= tol`.
    pub fn within(residual: f64, tol: f64) -> Self {
        Self {
            pass: residual <= tol,
            residual,
            margin: None,
        }
    }

    /// Pass iff `margin > required`; residual is the shortfall.
    pub fn with_margin(margin: f64, required: f64) -> Self {
        Self {
            pass: margin > required,
            residual: (required - margin).max(0.0),
            margin: Some(margin),
        }
    }

    pub fn failed(residual: f64) -> Self {
        Self {
            pass: false,
            residual,
            margin: None,
        }
    }
}
