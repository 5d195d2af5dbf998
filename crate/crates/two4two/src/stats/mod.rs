//! Pre-registered statistical battery and study-response analysis.
//!
//! Implements the exact two-sided McNemar test, Shapiro-Wilk (Royston
//! AS R94), Kruskal-Wallis with tie correction, Wilcoxon rank-sum with an
//! exact small-sample path, Holm-Bonferroni adjustment, Cohen's kappa, a
//! one-sample Kolmogorov-Smirnov uniformity test, and the Table-3-style
//! accuracy report over ingested response files.

mod distributions;
mod nonparametric;
mod responses;
mod shapiro;

pub use distributions::{chi2_sf, kolmogorov_sf, normal_cdf, normal_quantile, normal_sf};
pub use nonparametric::{
    chi2_independence, cohens_kappa, holm_bonferroni, kruskal_wallis, ks_test_uniform,
    mcnemar_exact, pearson_r, wilcoxon_rank_sum,
};
pub use responses::{
    accuracy_report, parse_responses_csv, AccuracyReport, Condition, ConditionSummary,
    ResponseRow, StudyResponses, ANSWER_ATTRIBUTES, GROUND_TRUTH_KEY,
};
pub use shapiro::shapiro_wilk;

/// Outcome of one statistical test.
///
/// `p_value` is `None` for statistics that do not define one (Cohen's kappa
/// is reported as an agreement coefficient only).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TestResult {
    pub name: &'static str,
    pub statistic: f64,
    pub p_value: Option<f64>,
    /// Effect size where defined (rank-sum reports r = |Z|/sqrt(n)).
    pub effect_size: Option<f64>,
    pub n: usize,
}

impl TestResult {
    pub fn p(&self) -> f64 {
        self.p_value.expect("test defines no p-value")
    }
}
