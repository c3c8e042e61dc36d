//! Pipeline configuration: one TOML file holding every path and tunable,
//! with the published constants as defaults. Relative paths resolve against
//! the config file's directory.

use std::path::{Path, PathBuf};

use geocohort::confidence::ForestParams;
use geocohort::extract::ExtractionMode;
use geocohort::infer::InferParams;
use geocohort::month::Month;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Abort on the first malformed corpus record instead of skip-and-count.
    pub strict: bool,
    /// Worker thread cap; 0 means one per core.
    pub workers: usize,
    pub paths: Paths,
    pub extraction: ExtractionCfg,
    pub dbscan: DbscanCfg,
    pub confidence: ConfidenceCfg,
    pub topics: TopicsCfg,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            strict: false,
            workers: 0,
            paths: Paths::default(),
            extraction: ExtractionCfg::default(),
            dbscan: DbscanCfg::default(),
            confidence: ConfidenceCfg::default(),
            topics: TopicsCfg::default(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Post dump: a JSONL file or a directory of JSONL shards.
    pub corpus: PathBuf,
    /// Geonames-format TSV dump.
    pub gazetteer: PathBuf,
    /// All pipeline artifacts land here.
    pub output_dir: PathBuf,
    /// Normalization tables (TOML); built-in defaults when absent.
    pub tables: Option<PathBuf>,
    /// Two-column subreddit -> place file merged into the tables.
    pub location_subreddits: Option<PathBuf>,
    /// Per-user labels for confidence training.
    pub labels: PathBuf,
    /// Per-user annotations for grading.
    pub annotations: PathBuf,
    /// Two-column state -> population file.
    pub population: PathBuf,
    /// Two-column state -> average vote share file.
    pub vote_shares: PathBuf,
    /// Posts for topic analysis; defaults to `corpus`.
    pub topic_corpus: Option<PathBuf>,
    /// Topic-keyword map override (TOML); built-in mapping when absent.
    pub topic_map: Option<PathBuf>,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            corpus: "corpus.jsonl".into(),
            gazetteer: "gazetteer.tsv".into(),
            output_dir: "out".into(),
            tables: None,
            location_subreddits: None,
            labels: "labels.jsonl".into(),
            annotations: "annotations.jsonl".into(),
            population: "population.tsv".into(),
            vote_shares: "vote_shares.tsv".into(),
            topic_corpus: None,
            topic_map: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionCfg {
    pub mode: ExtractionMode,
}

impl Default for ExtractionCfg {
    fn default() -> Self {
        ExtractionCfg {
            mode: ExtractionMode::GazetteerScan,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DbscanCfg {
    pub eps: f64,
    pub min_pts: usize,
    pub duplicate_points: bool,
}

impl Default for DbscanCfg {
    fn default() -> Self {
        let p = InferParams::default();
        DbscanCfg {
            eps: p.eps,
            min_pts: p.min_pts,
            duplicate_points: p.duplicate_points,
        }
    }
}

impl DbscanCfg {
    pub fn infer_params(&self) -> InferParams {
        InferParams {
            eps: self.eps,
            min_pts: self.min_pts,
            duplicate_points: self.duplicate_points,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfidenceCfg {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// 0 selects ceil(sqrt(feature count)).
    pub features_per_split: usize,
    pub holdout_fraction: f64,
    /// Users below this confidence are dropped from the cohort.
    pub threshold: f64,
}

impl Default for ConfidenceCfg {
    fn default() -> Self {
        ConfidenceCfg {
            n_trees: 200,
            max_depth: 8,
            min_leaf: 3,
            features_per_split: 0,
            holdout_fraction: 0.33,
            threshold: 0.5,
        }
    }
}

impl ConfidenceCfg {
    pub fn forest_params(&self, seed: u64) -> ForestParams {
        ForestParams {
            n_trees: self.n_trees,
            max_depth: self.max_depth,
            min_leaf: self.min_leaf,
            features_per_split: self.features_per_split,
            seed,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicsCfg {
    /// Adjusted counts are scale * raw / volume.
    pub scale: f64,
    /// First post-period month.
    pub covid_cutoff: Month,
    /// Analysis range; derived from the corpus when absent.
    pub start: Option<Month>,
    pub end: Option<Month>,
    /// Red cohort: state vote share strictly above this.
    pub vote_share_threshold: f64,
}

impl Default for TopicsCfg {
    fn default() -> Self {
        TopicsCfg {
            scale: 100_000.0,
            covid_cutoff: Month::new(2020, 3),
            start: None,
            end: None,
            vote_share_threshold: 0.5,
        }
    }
}

impl PipelineConfig {
    /// Load and validate, resolving relative paths against the config
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut config: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        config.validate()?;
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        resolve(&mut self.paths.corpus);
        resolve(&mut self.paths.gazetteer);
        resolve(&mut self.paths.output_dir);
        resolve(&mut self.paths.labels);
        resolve(&mut self.paths.annotations);
        resolve(&mut self.paths.population);
        resolve(&mut self.paths.vote_shares);
        for opt in [
            &mut self.paths.tables,
            &mut self.paths.location_subreddits,
            &mut self.paths.topic_corpus,
            &mut self.paths.topic_map,
        ] {
            if let Some(p) = opt {
                resolve(p);
            }
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::config(msg.to_string()))
            }
        };
        check(
            self.dbscan.eps.is_finite() && self.dbscan.eps > 0.0,
            "dbscan.eps must be a positive number",
        )?;
        check(self.dbscan.min_pts >= 1, "dbscan.min_pts must be at least 1")?;
        check(self.confidence.n_trees >= 1, "confidence.n_trees must be at least 1")?;
        check(self.confidence.max_depth >= 1, "confidence.max_depth must be at least 1")?;
        check(self.confidence.min_leaf >= 1, "confidence.min_leaf must be at least 1")?;
        check(
            (0.0..1.0).contains(&self.confidence.holdout_fraction),
            "confidence.holdout_fraction must be in [0, 1)",
        )?;
        check(
            (0.0..=1.0).contains(&self.confidence.threshold),
            "confidence.threshold must be in [0, 1]",
        )?;
        check(
            self.topics.scale.is_finite() && self.topics.scale > 0.0,
            "topics.scale must be a positive number",
        )?;
        check(
            (0.0..=1.0).contains(&self.topics.vote_share_threshold),
            "topics.vote_share_threshold must be in [0, 1]",
        )?;
        if let (Some(start), Some(end)) = (self.topics.start, self.topics.end) {
            check(start <= end, "topics.start must not be after topics.end")?;
        }
        Ok(())
    }

    pub fn topic_corpus_path(&self) -> &Path {
        self.paths
            .topic_corpus
            .as_deref()
            .unwrap_or(&self.paths.corpus)
    }

    fn out(&self, name: &str) -> PathBuf {
        self.paths.output_dir.join(name)
    }

    pub fn users_path(&self) -> PathBuf {
        self.out("users.jsonl")
    }
    pub fn mentions_path(&self) -> PathBuf {
        self.out("mentions.jsonl")
    }
    pub fn guesses_path(&self) -> PathBuf {
        self.out("guesses.jsonl")
    }
    pub fn positive_model_path(&self) -> PathBuf {
        self.out("model_positive.json")
    }
    pub fn negative_model_path(&self) -> PathBuf {
        self.out("model_negative.json")
    }
    pub fn metrics_path(&self) -> PathBuf {
        self.out("metrics.json")
    }
    pub fn scored_path(&self) -> PathBuf {
        self.out("scored.jsonl")
    }
    pub fn evaluation_path(&self) -> PathBuf {
        self.out("evaluation.json")
    }
    pub fn cohort_summary_path(&self) -> PathBuf {
        self.out("cohort_summary.json")
    }
    pub fn state_rates_path(&self) -> PathBuf {
        self.out("state_rates.tsv")
    }
    pub fn series_path(&self) -> PathBuf {
        self.out("series.jsonl")
    }
    pub fn regression_rows_path(&self) -> PathBuf {
        self.out("regression.jsonl")
    }
    pub fn regression_table_path(&self) -> PathBuf {
        self.out("regression.txt")
    }
}
