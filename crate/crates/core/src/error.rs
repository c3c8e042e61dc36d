use thiserror::Error;

use crate::confidence::ModelVariant;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed record: {reason}")]
    MalformedRecord { reason: String },
    #[error("malformed gazetteer row: {reason}")]
    MalformedGazetteerRow { reason: String },
    #[error("post {post_id} has no pretagged_entities but extraction mode is pretagged")]
    MissingPretags { post_id: String },
    #[error("feature vector variant {found:?} does not match model variant {expected:?}")]
    SchemaMismatch {
        expected: ModelVariant,
        found: ModelVariant,
    },
    #[error("need at least {min} rows, got {got}")]
    TooFewRows { got: usize, min: usize },
    #[error("label {0} is not one of 0, 0.5, 1")]
    InvalidLabel(f64),
    #[error("AUC is undefined when only one class is present")]
    SingleClass,
    #[error("guess author {guess:?} does not match annotation author {annotation:?}")]
    AuthorMismatch { guess: String, annotation: String },
    #[error("empty input")]
    EmptyInput,
    #[error("no population entry for state {0:?}")]
    MissingPopulation(String),
    #[error("no vote share entry for state {0:?}")]
    MissingState(String),
    #[error("empty series for topic {0:?}")]
    EmptySeries(String),
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
