//! Topic-keyword counting over monthly buckets, volume-adjusted counts,
//! and the red/blue cohort split by state vote share.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{MonthlyVolume, Post};
use crate::infer::LocationGuess;
use crate::month::Month;
use crate::text::tokenize;
use crate::{Error, Result};

/// Topic name -> keyword lemma set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicMap {
    topics: BTreeMap<String, BTreeSet<String>>,
}

#[rustfmt::skip]
const DEFAULT_TOPICS: &[(&str, &[&str])] = &[
    ("covid-19", &["covid", "virus", "expose", "pandemic", "quarantine", "corona", "vaccination"]),
    ("crime", &["arrest", "bust", "narc", "nark"]),
    ("drug", &["heroin", "oxy", "dope", "fent", "stimulant", "diacetylmorphine"]),
    ("government money", &["unemployment", "irs", "stimulus"]),
    ("money", &["money", "pay", "spend", "account", "bill", "bank", "broke", "fund",
                "payment", "finance", "wage", "salary", "bankrupt", "skint"]),
    ("narcan", &["narcan", "naloxone"]),
    ("overdose and death", &["die", "overdose", "death", "dying", "o.d."]),
    ("physical", &["pain", "withdrawal", "tolerance", "addict", "sick", "junkie", "hurt",
                   "mental", "health", "ill", "hook", "withdraw", "puke", "suicide",
                   "vomit", "nauseous", "dopesick", "junky"]),
    ("recovery prescriptions", &["methadone", "suboxone", "buprenorphine", "subutex"]),
];

impl Default for TopicMap {
    fn default() -> Self {
        TopicMap {
            topics: DEFAULT_TOPICS
                .iter()
                .map(|(topic, keywords)| {
                    (
                        topic.to_string(),
                        keywords.iter().map(|k| k.to_string()).collect(),
                    )
                })
                .collect(),
        }
    }
}

impl TopicMap {
    pub fn new(topics: BTreeMap<String, BTreeSet<String>>) -> Self {
        TopicMap { topics }
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn keywords(&self, topic: &str) -> Option<&BTreeSet<String>> {
        self.topics.get(topic)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.topics.iter().map(|(t, k)| (t.as_str(), k))
    }

    pub fn all_keywords(&self) -> impl Iterator<Item = &str> {
        self.topics.values().flatten().map(String::as_str)
    }

    /// Keyword -> topics carrying it.
    fn inverted(&self) -> HashMap<&str, Vec<&str>> {
        let mut map: HashMap<&str, Vec<&str>> = HashMap::new();
        for (topic, keywords) in &self.topics {
            for k in keywords {
                map.entry(k.as_str()).or_default().push(topic.as_str());
            }
        }
        map
    }
}

/// Rule-based suffix stripper with an exception table. Every keyword of the
/// topic map it is built for is a fixed point, and candidates produced by
/// the suffix rules are checked against that vocabulary first, so common
/// inflections land back on their keyword ("overdosing" -> "overdose",
/// "arrested" -> "arrest"). Correctness is defined relative to the keyword
/// list; other words get a reasonable default stem.
pub struct Lemmatizer {
    exceptions: HashMap<String, String>,
    vocab: HashSet<String>,
}

impl Lemmatizer {
    pub fn for_topics(topics: &TopicMap) -> Self {
        let vocab: HashSet<String> = topics.all_keywords().map(str::to_string).collect();
        let exceptions = vocab.iter().map(|k| (k.clone(), k.clone())).collect();
        Lemmatizer { exceptions, vocab }
    }

    pub fn with_exception(mut self, from: &str, to: &str) -> Self {
        self.exceptions.insert(from.to_string(), to.to_string());
        self
    }

    pub fn lemmatize(&self, token: &str) -> String {
        if let Some(lemma) = self.exceptions.get(token) {
            return lemma.clone();
        }
        // tokens may arrive with sentence-final periods; dotted keywords
        // like "o.d." were already caught by the exception table above
        let token = token.trim_end_matches('.');
        if token.is_empty() {
            return String::new();
        }
        if let Some(lemma) = self.exceptions.get(token) {
            return lemma.clone();
        }
        for candidate in suffix_candidates(token) {
            if self.vocab.contains(&candidate) {
                return candidate;
            }
        }
        default_stem(token)
    }
}

fn undouble(stem: &str) -> Option<String> {
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if n >= 3 && bytes[n - 1] == bytes[n - 2] {
        let c = bytes[n - 1] as char;
        if c.is_ascii_alphabetic() && !"aeiouls".contains(c) {
            return Some(stem[..n - 1].to_string());
        }
    }
    None
}

/// Candidate lemmas for a token, most specific first.
fn suffix_candidates(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    let n = token.len();
    if n > 2 && token.ends_with('s') && !token.ends_with("ss") {
        out.push(token[..n - 1].to_string());
    }
    if n > 3 && token.ends_with("es") {
        out.push(token[..n - 2].to_string());
    }
    if n > 3 && token.ends_with("ies") {
        out.push(format!("{}y", &token[..n - 3]));
    }
    if n > 4 && token.ends_with("ing") {
        let stem = &token[..n - 3];
        out.push(stem.to_string());
        out.push(format!("{stem}e"));
        if let Some(u) = undouble(stem) {
            out.push(u);
        }
    }
    if n > 3 && token.ends_with("ed") {
        let stem = &token[..n - 2];
        out.push(stem.to_string());
        out.push(format!("{stem}e"));
        if let Some(u) = undouble(stem) {
            out.push(u);
        }
    }
    out
}

fn default_stem(token: &str) -> String {
    let n = token.len();
    if n > 3 && token.ends_with("ies") {
        return format!("{}y", &token[..n - 3]);
    }
    if n > 2 && token.ends_with('s') && !token.ends_with("ss") && !token.ends_with("us") {
        return token[..n - 1].to_string();
    }
    if n > 4 && token.ends_with("ing") {
        let stem = &token[..n - 3];
        return undouble(stem).unwrap_or_else(|| stem.to_string());
    }
    if n > 3 && token.ends_with("ed") {
        let stem = &token[..n - 2];
        return undouble(stem).unwrap_or_else(|| stem.to_string());
    }
    token.to_string()
}

/// Count keyword hits per topic per month over `[start, end]`. Tokens are
/// lemmatized before matching; a post can contribute to several topics and
/// several counts within one topic.
pub fn count_topic_mentions<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    topics: &TopicMap,
    lemmatizer: &Lemmatizer,
    start: Month,
    end: Month,
) -> BTreeMap<String, MonthlyVolume> {
    assert!(start <= end, "month range start must be <= end");
    let inverted = topics.inverted();
    let mut counts: BTreeMap<String, MonthlyVolume> = topics
        .topics()
        .map(|t| (t.to_string(), MonthlyVolume::zeroed(start, end)))
        .collect();

    for post in posts {
        let month = post.month();
        if month < start || month > end {
            continue;
        }
        let mut text = String::new();
        if let Some(title) = &post.title {
            text.push_str(title);
            text.push(' ');
        }
        text.push_str(&post.body);
        for token in tokenize(&text) {
            let lemma = lemmatizer.lemmatize(&token.lower);
            if let Some(hit_topics) = inverted.get(lemma.as_str()) {
                for topic in hit_topics {
                    counts
                        .get_mut(*topic)
                        .expect("topic present")
                        .add_if_tracked(month, 1);
                }
            }
        }
    }
    counts
}

/// Per-month adjusted mention counts for one topic over one cohort. Months
/// where the cohort posted nothing are absent rather than zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopicSeries {
    pub topic: String,
    pub cohort: String,
    pub points: BTreeMap<Month, f64>,
}

/// scale * raw / volume per month. Months with zero volume are omitted.
/// `volume` must cover every month of `raw`.
pub fn adjusted_counts(raw: &MonthlyVolume, volume: &MonthlyVolume, scale: f64) -> BTreeMap<Month, f64> {
    debug_assert!(
        raw.months().all(|m| volume.contains(m)),
        "volume must cover raw counts"
    );
    let mut points = BTreeMap::new();
    for (month, total) in volume.iter() {
        if total == 0 {
            continue;
        }
        points.insert(month, scale * raw.get(month) as f64 / total as f64);
    }
    points
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohortSplit {
    pub red: BTreeSet<String>,
    pub blue: BTreeSet<String>,
    /// Users that could not be assigned: no guess, non-US, or no state.
    pub excluded: Vec<String>,
}

/// Partition confidence-filtered users into red (vote share above the
/// threshold) and blue (at or below) cohorts by their inferred state.
/// Non-US users and users without a state-level guess are excluded and
/// reported; a US state missing from `vote_shares` is an error.
pub fn split_by_cohort(
    guesses: &[LocationGuess],
    vote_shares: &BTreeMap<String, f64>,
    share_threshold: f64,
) -> Result<CohortSplit> {
    let mut split = CohortSplit::default();
    for guess in guesses {
        let Some(candidate) = &guess.candidate else {
            split.excluded.push(guess.user.clone());
            continue;
        };
        if !candidate.is_us() {
            split.excluded.push(guess.user.clone());
            continue;
        }
        let Some(state) = &candidate.admin1 else {
            split.excluded.push(guess.user.clone());
            continue;
        };
        let share = *vote_shares
            .get(state)
            .ok_or_else(|| Error::MissingState(state.clone()))?;
        if share > share_threshold {
            split.red.insert(guess.user.clone());
        } else {
            split.blue.insert(guess.user.clone());
        }
    }
    Ok(split)
}
