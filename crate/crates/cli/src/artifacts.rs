//! On-disk record shapes for pipeline artifacts, plus atomic writes and
//! small table-file parsers.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use geocohort::confidence::{FeatureVector, TrainingLabel};
use geocohort::corpus::Post;
use geocohort::gazetteer::GeoCandidate;
use geocohort::infer::LocationGuess;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One user history: author plus inline posts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UserRecord {
    pub author: String,
    pub posts: Vec<Post>,
}

/// One mention row of the extract artifact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MentionRecord {
    pub author: String,
    pub surface: String,
    pub normalized_names: Vec<String>,
    pub source: geocohort::extract::MentionSource,
    pub count: u32,
}

/// One guess row of the infer artifact; `rank` orders a user's guesses by
/// cluster size fraction. The no-guess record has no candidate and no
/// size fraction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GuessRecord {
    pub author: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<GeoCandidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_fraction: Option<f64>,
    pub features: FeatureVector,
}

/// One user's best guess after confidence scoring.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScoredRecord {
    pub author: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<GeoCandidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_fraction: Option<f64>,
    pub features: FeatureVector,
    pub confidence: f64,
    pub n_guesses: usize,
}

impl ScoredRecord {
    pub fn to_guess(&self) -> LocationGuess {
        LocationGuess {
            user: self.author.clone(),
            candidate: self.candidate.clone(),
            cluster: None,
            features: self.features.clone(),
            confidence: Some(self.confidence),
        }
    }
}

/// One confidence-training label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelRecord {
    pub author: String,
    pub label: TrainingLabel,
}

/// Write through a temp file in the target directory and rename into
/// place, so interrupted runs never leave a partial artifact.
pub fn write_atomic(
    path: &Path,
    write_fn: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::data(format!("cannot create temp file in {}: {e}", dir.display())))?;
    {
        let mut writer = std::io::BufWriter::new(tmp.as_file_mut());
        write_fn(&mut writer)?;
        writer
            .flush()
            .map_err(|e| CliError::data(format!("write failed: {e}")))?;
    }
    tmp.persist(path)
        .map_err(|e| CliError::data(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}

pub fn write_jsonl_atomic<'a, T: Serialize + 'a>(
    path: &Path,
    items: impl IntoIterator<Item = &'a T>,
) -> Result<(), CliError> {
    let items: Vec<&T> = items.into_iter().collect();
    write_atomic(path, |writer| {
        geocohort::jsonl::write_jsonl(writer, items.iter().copied())
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))
    })
}

pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_atomic(path, |writer| {
        serde_json::to_writer_pretty(&mut *writer, value)
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))?;
        writer
            .write_all(b"\n")
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))
    })
}

pub fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    geocohort::jsonl::read_jsonl(path)
        .map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))
}

/// Parse a two-column `key<TAB>value` table file; `#` comments and blank
/// lines are skipped.
pub fn read_two_column_table(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('\t').ok_or_else(|| {
            CliError::data(format!(
                "{} line {}: expected two tab-separated columns",
                path.display(),
                lineno + 1
            ))
        })?;
        rows.push((key.trim().to_lowercase(), value.trim().to_string()));
    }
    Ok(rows)
}

/// state -> population table.
pub fn read_population(path: &Path) -> Result<BTreeMap<String, u64>, CliError> {
    let mut out = BTreeMap::new();
    for (state, value) in read_two_column_table(path)? {
        let population: u64 = value.parse().map_err(|_| {
            CliError::data(format!("{}: bad population {value:?} for {state:?}", path.display()))
        })?;
        out.insert(state, population);
    }
    Ok(out)
}

/// state -> average vote share table; shares must lie in [0, 1].
pub fn read_vote_shares(path: &Path) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for (state, value) in read_two_column_table(path)? {
        let share: f64 = value.parse().map_err(|_| {
            CliError::data(format!("{}: bad vote share {value:?} for {state:?}", path.display()))
        })?;
        if !(0.0..=1.0).contains(&share) {
            return Err(CliError::data(format!(
                "{}: vote share {share} for {state:?} outside [0, 1]",
                path.display()
            )));
        }
        out.insert(state, share);
    }
    Ok(out)
}
