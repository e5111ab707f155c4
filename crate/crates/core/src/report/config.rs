use serde::{Deserialize, Serialize};

use crate::quad::DEFAULT_ABS_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub max_n: usize,
    pub max_k: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<String>,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_n: 50,
            max_k: 25,
            rel_tol: 1e-10,
            abs_tol: DEFAULT_ABS_TOL,
            output_format: OutputFormat::Csv,
            output_path: None,
            parallelism: 1,
        }
    }
}
