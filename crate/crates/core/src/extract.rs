//! Produce the filtered, normalized, expanded set of place-entity mentions
//! per user.
//!
//! Two extraction modes are supported. `GazetteerScan` slides an n-gram
//! window (n <= 3, longest match wins) over each post and keeps n-grams
//! that hit the gazetteer, an alias key, or a state abbreviation.
//! `Pretagged` consumes entity spans attached to the posts by an external
//! tagger. Both feed the same normalization pipeline:
//!
//! 1. blocklisted surfaces are dropped;
//! 2. a state abbreviation expands to the state name, but only when the
//!    original token was fully uppercase ("MA" yes, "ma" no) — without the
//!    guard, everyday words like "in", "me", "or", "hi" flood the pipeline;
//! 3. nicknames map to proper names ("vegas" -> "las vegas");
//! 4. large-state names expand to their region list;
//! 5. anything without a gazetteer hit (or on the blocklist) is dropped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Post, UserHistory};
use crate::gazetteer::{GazetteerIndex, NormalizationTables};
use crate::text::{is_fully_uppercase, tokenize, Token};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MentionSource {
    Text,
    Pretagged,
    Subreddit,
}

/// A normalized place string attributed to a user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    /// Lowercase surface form as it appeared (post-alias keys keep their
    /// original spelling, e.g. "vegas").
    pub surface: String,
    /// Names after normalization and expansion, each with at least one
    /// gazetteer hit and none on the blocklist.
    pub normalized_names: Vec<String>,
    pub source: MentionSource,
    /// Per-user occurrence count of this surface.
    pub count: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMode {
    GazetteerScan,
    Pretagged,
}

/// A raw surface before normalization, with the case evidence the
/// abbreviation guard needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntity {
    pub surface: String,
    pub original_uppercase: bool,
}

const MAX_NGRAM: usize = 3;

/// Extract raw surface strings from one post.
///
/// In scan mode, title and body are tokenized separately (n-grams never
/// bridge the boundary) and every maximal n-gram whose lowercase form hits
/// the gazetteer, an alias key, or a state abbreviation is emitted; shorter
/// n-grams inside an emitted match are suppressed. In pretagged mode the
/// provided spans are emitted verbatim, lowercased.
pub fn extract_raw_entities(
    post: &Post,
    mode: ExtractionMode,
    index: &GazetteerIndex,
    tables: &NormalizationTables,
) -> Result<Vec<RawEntity>> {
    match mode {
        ExtractionMode::Pretagged => {
            let spans = post
                .pretagged_entities
                .as_ref()
                .ok_or_else(|| Error::MissingPretags {
                    post_id: post.id.clone(),
                })?;
            Ok(spans
                .iter()
                .map(|span| RawEntity {
                    surface: span.to_lowercase(),
                    original_uppercase: is_fully_uppercase(span),
                })
                .collect())
        }
        ExtractionMode::GazetteerScan => {
            let mut out = Vec::new();
            if let Some(title) = &post.title {
                scan_tokens(&tokenize(title), index, tables, &mut out);
            }
            scan_tokens(&tokenize(&post.body), index, tables, &mut out);
            Ok(out)
        }
    }
}

fn scan_tokens(
    tokens: &[Token],
    index: &GazetteerIndex,
    tables: &NormalizationTables,
    out: &mut Vec<RawEntity>,
) {
    let hit = |s: &str| {
        index.contains(s) || tables.aliases.contains_key(s) || tables.state_abbrev.contains_key(s)
    };
    // Try the joined n-gram as-is, then with trailing periods trimmed, so
    // "boston." matches while "l.a." still matches its dotted alias key.
    let match_key = |s: &str| -> Option<String> {
        if hit(s) {
            return Some(s.to_string());
        }
        let trimmed = s.trim_end_matches('.');
        if trimmed != s && !trimmed.is_empty() && hit(trimmed) {
            return Some(trimmed.to_string());
        }
        None
    };

    let mut i = 0;
    while i < tokens.len() {
        let mut advanced = false;
        for n in (1..=MAX_NGRAM.min(tokens.len() - i)).rev() {
            let window = &tokens[i..i + n];
            let lower = window
                .iter()
                .map(|t| t.lower.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            if let Some(key) = match_key(&lower) {
                let original = window
                    .iter()
                    .map(|t| t.original.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push(RawEntity {
                    surface: key,
                    original_uppercase: is_fully_uppercase(&original),
                });
                i += n;
                advanced = true;
                break;
            }
        }
        if !advanced {
            i += 1;
        }
    }
}

/// Run one surface through the normalization pipeline. Returns the list of
/// normalized names (possibly empty), in table order.
pub fn normalize_and_expand(
    surface: &str,
    tables: &NormalizationTables,
    original_uppercase: bool,
    index: &GazetteerIndex,
) -> Vec<String> {
    if tables.blocklist.contains(surface) {
        return Vec::new();
    }
    let mut name = surface;
    if original_uppercase {
        if let Some(state) = tables.state_abbrev.get(name) {
            name = state;
        }
    }
    if let Some(proper) = tables.aliases.get(name) {
        name = proper;
    }
    let mut names = match tables.large_state_regions.get(name) {
        Some(regions) => regions.clone(),
        None => vec![name.to_string()],
    };
    names.retain(|n| !tables.blocklist.contains(n) && index.contains(n));
    names
}

/// The subreddit itself as an entity, when it maps to a location.
pub fn subreddit_entity(
    post: &Post,
    tables: &NormalizationTables,
    index: &GazetteerIndex,
) -> Option<EntityMention> {
    let place = tables.location_subreddits.get(&post.subreddit)?;
    let surface = place.to_lowercase();
    let normalized = normalize_and_expand(&surface, tables, is_fully_uppercase(place), index);
    if normalized.is_empty() {
        return None;
    }
    Some(EntityMention {
        surface,
        normalized_names: normalized,
        source: MentionSource::Subreddit,
        count: 1,
    })
}

#[derive(Default)]
struct SurfaceAcc {
    count: u32,
    uppercase: bool,
    text: bool,
    pretagged: bool,
    subreddit: bool,
}

/// Aggregate text, pretagged, and subreddit mentions across a user's posts,
/// deduplicated by surface with per-user counts. Surfaces whose normalized
/// name list comes back empty are dropped.
pub fn user_mentions(
    history: &UserHistory,
    mode: ExtractionMode,
    tables: &NormalizationTables,
    index: &GazetteerIndex,
) -> Result<Vec<EntityMention>> {
    let mut acc: BTreeMap<String, SurfaceAcc> = BTreeMap::new();

    for post in &history.posts {
        for raw in extract_raw_entities(post, mode, index, tables)? {
            let entry = acc.entry(raw.surface).or_default();
            entry.count += 1;
            // Any fully-uppercase occurrence is enough evidence that the
            // surface is an abbreviation rather than a common word.
            entry.uppercase |= raw.original_uppercase;
            match mode {
                ExtractionMode::GazetteerScan => entry.text = true,
                ExtractionMode::Pretagged => entry.pretagged = true,
            }
        }
        if let Some(sub) = subreddit_entity(post, tables, index) {
            let entry = acc.entry(sub.surface).or_default();
            entry.count += 1;
            entry.subreddit = true;
        }
    }

    let mut mentions = Vec::new();
    for (surface, entry) in acc {
        let normalized = normalize_and_expand(&surface, tables, entry.uppercase, index);
        if normalized.is_empty() {
            continue;
        }
        let source = if entry.text {
            MentionSource::Text
        } else if entry.pretagged {
            MentionSource::Pretagged
        } else {
            MentionSource::Subreddit
        };
        mentions.push(EntityMention {
            surface,
            normalized_names: normalized,
            source,
            count: entry.count,
        });
    }
    Ok(mentions)
}
