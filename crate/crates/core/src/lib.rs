//! Infer the home location of social-media users from their full posting
//! histories, score the inferences, and analyze the resulting geographic
//! cohorts.
//!
//! The pipeline runs in stages, each a module here:
//!
//! 1. [`corpus`] — parse line-delimited post dumps into per-user histories.
//! 2. [`gazetteer`] — load a Geonames-format place database plus the static
//!    normalization tables (blocklist, aliases, state abbreviations,
//!    large-state regions, location subreddits).
//! 3. [`extract`] — pull place-entity mentions out of each user's posts,
//!    either by scanning against the gazetteer or by consuming pre-tagged
//!    entity spans.
//! 4. [`infer`] — geocode every mention, cluster the coordinates with
//!    DBSCAN, and pick a representative place per cluster.
//! 5. [`confidence`] — train bagged regression trees that score how likely
//!    each location guess is to be correct.
//! 6. [`evaluation`] — grade guesses against human annotations and
//!    summarize the confidence-filtered cohort.
//! 7. [`topics`] — count topic-keyword mentions per month, normalized by
//!    posting volume, split by geographic cohort.
//! 8. [`regression`] — fit the post-period × cohort interaction OLS per
//!    topic and report coefficients with standard errors.

pub mod confidence;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod extract;
pub mod fixtures;
pub mod gazetteer;
pub mod infer;
pub mod jsonl;
pub mod month;
pub mod regression;
pub mod text;
pub mod topics;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
