//! Rank a user's candidate locations: geocode all mentions, cluster the
//! pooled coordinates with DBSCAN, and pick each cluster's representative
//! by granularity, then mention frequency, then population.

pub mod dbscan;

pub use dbscan::dbscan;

use serde::{Deserialize, Serialize};

use crate::confidence::FeatureVector;
use crate::corpus::UserHistory;
use crate::extract::EntityMention;
use crate::gazetteer::{GazetteerIndex, GeoCandidate};

/// One pooled coordinate, tied back to the candidate and the mention that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordPoint {
    pub latitude: f64,
    pub longitude: f64,
    pub candidate: GeoCandidate,
    /// Surface of the mention this point came from.
    pub surface: String,
    /// That mention's per-user count.
    pub mention_count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: Vec<CoordPoint>,
    pub representative: GeoCandidate,
    /// |members| / total pooled points for the user.
    pub size_fraction: f64,
}

/// A scored or not-yet-scored location guess for one user. `candidate` and
/// `cluster` are absent on the no-guess record emitted when no cluster
/// forms.
#[derive(Clone, Debug, PartialEq)]
pub struct LocationGuess {
    pub user: String,
    pub candidate: Option<GeoCandidate>,
    pub cluster: Option<Cluster>,
    pub features: FeatureVector,
    pub confidence: Option<f64>,
}

impl LocationGuess {
    pub fn has_guess(&self) -> bool {
        self.candidate.is_some()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InferParams {
    pub eps: f64,
    pub min_pts: usize,
    /// When true (the default) a mention with count k contributes its
    /// candidate points k times, so heavily-mentioned places add cluster
    /// mass. Disable for sensitivity analysis.
    pub duplicate_points: bool,
}

impl Default for InferParams {
    fn default() -> Self {
        InferParams {
            eps: 2.5,
            min_pts: 2,
            duplicate_points: true,
        }
    }
}

/// Pool all compatible geocodes from every mention: one point per
/// (normalized name, gazetteer candidate) pair, duplicated `count` times
/// when frequency weighting is on.
pub fn pool_coordinates(
    mentions: &[EntityMention],
    index: &GazetteerIndex,
    duplicate_points: bool,
) -> Vec<CoordPoint> {
    let mut points = Vec::new();
    for mention in mentions {
        let copies = if duplicate_points { mention.count } else { 1 };
        for name in &mention.normalized_names {
            for candidate in index.lookup(name) {
                for _ in 0..copies {
                    points.push(CoordPoint {
                        latitude: candidate.latitude,
                        longitude: candidate.longitude,
                        candidate: candidate.clone(),
                        surface: mention.surface.clone(),
                        mention_count: mention.count,
                    });
                }
            }
        }
    }
    points
}

/// Pick the cluster's representative: the most granular candidate first,
/// then the one mentioned most by the user, then the largest population,
/// with gazetteer id as the final deterministic tiebreak.
pub fn cluster_representative(members: &[CoordPoint]) -> GeoCandidate {
    assert!(!members.is_empty(), "cluster must have members");

    struct Entry {
        candidate: GeoCandidate,
        mention_count: u32,
        surfaces: std::collections::BTreeSet<String>,
    }

    let mut distinct: std::collections::BTreeMap<u64, Entry> = std::collections::BTreeMap::new();
    for point in members {
        let entry = distinct
            .entry(point.candidate.gazetteer_id)
            .or_insert_with(|| Entry {
                candidate: point.candidate.clone(),
                mention_count: 0,
                surfaces: Default::default(),
            });
        // Sum counts across the distinct mentions backing this candidate,
        // not across duplicated points, so the choice is independent of the
        // frequency-weighting switch.
        if entry.surfaces.insert(point.surface.clone()) {
            entry.mention_count += point.mention_count;
        }
    }

    let mut entries: Vec<Entry> = distinct.into_values().collect();
    entries.sort_by(|a, b| {
        a.candidate
            .granularity
            .cmp(&b.candidate.granularity)
            .then_with(|| b.mention_count.cmp(&a.mention_count))
            .then_with(|| b.candidate.population.cmp(&a.candidate.population))
            .then_with(|| a.candidate.gazetteer_id.cmp(&b.candidate.gazetteer_id))
    });
    entries.remove(0).candidate
}

/// Run the full per-user ranking. Returns one unscored guess per cluster,
/// ordered by size fraction descending, or a single no-guess record when no
/// cluster forms.
pub fn rank_user_locations(
    history: &UserHistory,
    mentions: &[EntityMention],
    index: &GazetteerIndex,
    params: &InferParams,
) -> Vec<LocationGuess> {
    let total_entities: u64 = mentions.iter().map(|m| m.count as u64).sum();
    let total_posts = history.post_count as u64;
    let duration = history.duration_days();

    let no_guess = |user: &str| LocationGuess {
        user: user.to_string(),
        candidate: None,
        cluster: None,
        features: FeatureVector::Negative {
            total_entities,
            total_posts,
            history_duration_days: duration,
        },
        confidence: None,
    };

    let points = pool_coordinates(mentions, index, params.duplicate_points);
    if points.is_empty() {
        return vec![no_guess(&history.author)];
    }

    let coords: Vec<(f64, f64)> = points.iter().map(|p| (p.latitude, p.longitude)).collect();
    let labels = dbscan(&coords, params.eps, params.min_pts);
    let n_clusters = labels.iter().flatten().max().map_or(0, |m| m + 1);
    if n_clusters == 0 {
        return vec![no_guess(&history.author)];
    }

    let total_points = points.len() as f64;
    let mut members: Vec<Vec<CoordPoint>> = vec![Vec::new(); n_clusters];
    for (point, label) in points.into_iter().zip(&labels) {
        if let Some(c) = label {
            members[*c].push(point);
        }
    }

    let mut guesses: Vec<(usize, LocationGuess)> = members
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let representative = cluster_representative(&members);
            let size_fraction = members.len() as f64 / total_points;
            let features = FeatureVector::Positive {
                cluster_size_fraction: size_fraction,
                total_entities,
                is_us: representative.is_us(),
                total_posts,
                history_duration_days: duration,
                guess_population: representative.population,
            };
            let guess = LocationGuess {
                user: history.author.clone(),
                candidate: Some(representative.clone()),
                cluster: Some(Cluster {
                    members,
                    representative,
                    size_fraction,
                }),
                features,
                confidence: None,
            };
            (id, guess)
        })
        .collect();

    guesses.sort_by(|(ida, a), (idb, b)| {
        let fa = a.cluster.as_ref().unwrap().size_fraction;
        let fb = b.cluster.as_ref().unwrap().size_fraction;
        fb.partial_cmp(&fa).unwrap().then_with(|| ida.cmp(idb))
    });
    guesses.into_iter().map(|(_, g)| g).collect()
}
