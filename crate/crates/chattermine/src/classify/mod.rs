//! Post scoring for the hate / counter-hate / neutral task.
//!
//! Every post gets a [`LabelDistribution`]; where the probabilities come
//! from is pluggable — the trainable linear baseline here, or a score file
//! computed elsewhere (e.g. by a fine-tuned transformer) joined by post id.

mod features;
mod linear;
mod metrics;
mod scores_io;

pub use features::featurize;
pub use linear::{
    batch_gradient, batch_loss, train, Example, Gradient, Hyper, Label, LabelDistribution,
    LinearScorer,
};
pub use metrics::{auroc, evaluate, ClassMetrics, EvalReport};
pub use scores_io::{import_scores, load_labeled, ImportOutcome, ScoredPost};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training needs at least 2 classes, found {0}")]
    SingleClass(usize),
    #[error("unknown label {0:?} (expected neutral, hate, counter_hate, or other)")]
    UnknownLabel(String),
    #[error("prediction/gold length mismatch: {predictions} vs {gold}")]
    LengthMismatch { predictions: usize, gold: usize },
    #[error("nothing to evaluate")]
    EmptyEvaluation,
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
