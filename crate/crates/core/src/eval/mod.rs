//! Run evaluation: trec-style metrics, paired significance tests with
//! multiple-testing correction, and the entropy/precision correlation.

mod correlation;
mod metrics;
mod qrels;
mod significance;

pub use correlation::{
    entropy_ap_correlation, pearson, pearson_permutation_test, EntropyCorrelation, EntropyPoint,
};
pub use metrics::{
    average_precision, evaluate, ndcg_at, precision_at, query_metrics, reciprocal_rank, GainMode,
    Metric, MetricReport, QueryMetrics,
};
pub use qrels::Qrels;
pub use significance::{
    benjamini_hochberg, compare_reports, randomization_test, randomization_test_with,
    SignificanceResult, TestMethod, TestOutcome, DEFAULT_PERMUTATIONS, EXACT_MAX_QUERIES,
};
