use serde::{Deserialize, Serialize};

/// Layering-quality and fidelity numbers for one comparison. Absent fields
/// were not measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mae: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_count_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rgb_mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ssim: Option<f64>,
}

impl MetricsReport {
    /// Flat JSON object, every value rounded to 6 significant digits.
    pub fn to_json(&self) -> String {
        let rounded = MetricsReport {
            order: self.order.map(round_sig6),
            mae: self.mae.map(round_sig6),
            mse: self.mse.map(round_sig6),
            path_count_error: self.path_count_error.map(round_sig6),
            rgb_mse: self.rgb_mse.map(round_sig6),
            ssim: self.ssim.map(round_sig6),
        };
        serde_json::to_string(&rounded).expect("plain struct serializes")
    }
}

pub fn round_sig6(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().expect("formatted float parses")
}
