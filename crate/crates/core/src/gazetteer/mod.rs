//! Load a Geonames-format place database and serve exact-name lookups.
//!
//! The index accepts a standard Geonames dump (tab-separated, 19 columns)
//! and keeps three granularities of place:
//!
//! * feature class `P` (populated places) as cities,
//! * feature class `A` code `ADM1` (first-order divisions) as admin1,
//! * feature class `A` codes `PCL*` (political entities) as countries,
//! * feature class `L` codes `RGN*` (regions) as admin1, so large-state
//!   region expansions like "southern california" resolve.
//!
//! Everything else is excluded. Lookups are exact string matches on
//! lowercased primary and alternate names; there is no fuzzy matching.

pub mod tables;

pub use tables::NormalizationTables;

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    /// Most granular: a populated place. Sorts first in priority order.
    City,
    Admin1,
    Country,
}

/// One gazetteer record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoCandidate {
    pub gazetteer_id: u64,
    pub primary_name: String,
    pub latitude: f64,
    pub longitude: f64,
    /// Lowercase ISO-3166 alpha-2 code.
    pub country_code: String,
    /// US state name for US entries; the division's own name for admin1
    /// rows elsewhere. Absent for countries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admin1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub city: Option<String>,
    pub population: u64,
    pub granularity: Granularity,
}

impl GeoCandidate {
    pub fn is_us(&self) -> bool {
        self.country_code == "us"
    }
}

#[derive(Clone, Debug, Default)]
pub struct LoadReport {
    pub rows: usize,
    pub loaded: usize,
    pub excluded_feature: usize,
    pub malformed: usize,
    pub sample_errors: Vec<String>,
}

/// Immutable name -> candidates index. Safe to share read-only across
/// worker threads.
pub struct GazetteerIndex {
    candidates: Vec<GeoCandidate>,
    by_name: HashMap<String, Vec<u32>>,
}

impl GazetteerIndex {
    /// Load a Geonames dump from disk. `tables.state_abbrev` supplies the
    /// admin1-code -> state-name mapping for US rows. Malformed rows are
    /// skipped and counted in the report.
    pub fn load(path: impl AsRef<Path>, tables: &NormalizationTables) -> Result<(Self, LoadReport)> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file), tables)
    }

    pub fn from_reader(
        reader: impl BufRead,
        tables: &NormalizationTables,
    ) -> Result<(Self, LoadReport)> {
        let mut report = LoadReport::default();
        let mut candidates = Vec::new();
        let mut by_name: HashMap<String, Vec<u32>> = HashMap::new();

        for line in reader.lines() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            report.rows += 1;
            match parse_row(&line, tables) {
                Ok(Some((candidate, names))) => {
                    let idx = candidates.len() as u32;
                    for name in names {
                        let bucket = by_name.entry(name).or_default();
                        if !bucket.contains(&idx) {
                            bucket.push(idx);
                        }
                    }
                    candidates.push(candidate);
                    report.loaded += 1;
                }
                Ok(None) => report.excluded_feature += 1,
                Err(e) => {
                    report.malformed += 1;
                    if report.sample_errors.len() < 10 {
                        report.sample_errors.push(e.to_string());
                    }
                }
            }
        }

        // Deterministic candidate order per name: population desc, then id asc.
        for bucket in by_name.values_mut() {
            bucket.sort_by(|&a, &b| {
                let (ca, cb) = (&candidates[a as usize], &candidates[b as usize]);
                cb.population
                    .cmp(&ca.population)
                    .then_with(|| ca.gazetteer_id.cmp(&cb.gazetteer_id))
            });
        }

        Ok((
            GazetteerIndex {
                candidates,
                by_name,
            },
            report,
        ))
    }

    /// All candidates whose primary or alternate name equals `name` exactly.
    /// `name` must already be lowercase.
    pub fn lookup(&self, name: &str) -> Vec<&GeoCandidate> {
        self.by_name
            .get(name)
            .map(|bucket| {
                bucket
                    .iter()
                    .map(|&i| &self.candidates[i as usize])
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    /// Number of (name, candidate) entries in the index.
    pub fn entry_count(&self) -> usize {
        self.by_name.values().map(Vec::len).sum()
    }

    pub fn name_count(&self) -> usize {
        self.by_name.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }

    /// Check that every alias target and large-state region name resolves.
    /// Returns human-readable warnings; an empty list means the tables are
    /// consistent with this gazetteer.
    pub fn validate_tables(&self, tables: &NormalizationTables) -> Vec<String> {
        let mut warnings = Vec::new();
        for (nick, proper) in &tables.aliases {
            if !self.contains(proper) {
                warnings.push(format!(
                    "alias {nick:?} -> {proper:?} has no gazetteer entry"
                ));
            }
        }
        for (state, regions) in &tables.large_state_regions {
            for region in regions {
                if !self.contains(region) {
                    warnings.push(format!(
                        "region {region:?} (expansion of {state:?}) has no gazetteer entry"
                    ));
                }
            }
        }
        warnings
    }
}

fn bad_row(reason: impl Into<String>) -> Error {
    Error::MalformedGazetteerRow {
        reason: reason.into(),
    }
}

/// Parse one dump row. Returns `Ok(None)` for rows whose feature class or
/// code falls outside the accepted granularities.
fn parse_row(
    line: &str,
    tables: &NormalizationTables,
) -> Result<Option<(GeoCandidate, Vec<String>)>> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 15 {
        return Err(bad_row(format!("expected >= 15 columns, got {}", cols.len())));
    }
    let gazetteer_id: u64 = cols[0]
        .parse()
        .map_err(|_| bad_row(format!("bad geonameid {:?}", cols[0])))?;
    let name = cols[1].trim();
    if name.is_empty() {
        return Err(bad_row(format!("row {gazetteer_id}: empty name")));
    }
    let latitude: f64 = cols[4]
        .parse()
        .map_err(|_| bad_row(format!("row {gazetteer_id}: bad latitude {:?}", cols[4])))?;
    let longitude: f64 = cols[5]
        .parse()
        .map_err(|_| bad_row(format!("row {gazetteer_id}: bad longitude {:?}", cols[5])))?;
    if !(-90.0..=90.0).contains(&latitude) {
        return Err(bad_row(format!(
            "row {gazetteer_id}: latitude {latitude} out of range"
        )));
    }
    if !(-180.0..=180.0).contains(&longitude) {
        return Err(bad_row(format!(
            "row {gazetteer_id}: longitude {longitude} out of range"
        )));
    }

    let feature_class = cols[6];
    let feature_code = cols[7];
    let granularity = match (feature_class, feature_code) {
        ("P", _) => Granularity::City,
        ("A", "ADM1") => Granularity::Admin1,
        ("A", code) if code.starts_with("PCL") => Granularity::Country,
        ("L", code) if code.starts_with("RGN") => Granularity::Admin1,
        _ => return Ok(None),
    };

    let country_code = cols[8].trim().to_lowercase();
    let admin1_code = cols[10].trim().to_lowercase();
    let population: u64 = cols[14].trim().parse().unwrap_or(0);

    let primary_name = name.to_lowercase();
    let admin1 = match granularity {
        Granularity::Country => None,
        Granularity::Admin1 if feature_class == "A" => Some(primary_name.clone()),
        _ => {
            if country_code == "us" {
                tables.state_abbrev.get(&admin1_code).cloned()
            } else {
                None
            }
        }
    };
    let city = match granularity {
        Granularity::City => Some(primary_name.clone()),
        _ => None,
    };

    let mut names = vec![primary_name.clone()];
    for alt in cols[3].split(',') {
        let alt = alt.trim().to_lowercase();
        if !alt.is_empty() && !names.contains(&alt) {
            names.push(alt);
        }
    }

    Ok(Some((
        GeoCandidate {
            gazetteer_id,
            primary_name,
            latitude,
            longitude,
            country_code,
            admin1,
            city,
            population,
            granularity,
        },
        names,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fixture_index() -> GazetteerIndex {
        let tables = NormalizationTables::default();
        let (index, report) =
            GazetteerIndex::from_reader(fixtures::fixture_gazetteer_tsv().as_bytes(), &tables)
                .unwrap();
        assert_eq!(report.malformed, 0, "{:?}", report.sample_errors);
        index
    }

    #[test]
    fn boston_loads_as_city_with_state_name() {
        let index = fixture_index();
        let hits = index.lookup("boston");
        assert!(!hits.is_empty());
        let boston = hits[0];
        assert_eq!(boston.granularity, Granularity::City);
        assert_eq!(boston.admin1.as_deref(), Some("massachusetts"));
        assert_eq!(boston.city.as_deref(), Some("boston"));
        assert!(boston.is_us());
    }

    #[test]
    fn bad_latitude_is_malformed() {
        let tables = NormalizationTables::default();
        let row = "1\tNowhere\tNowhere\t\t91.0\t0.0\tP\tPPL\tUS\t\tMA\t\t\t\t100\t\t\t\t\n";
        let (index, report) = GazetteerIndex::from_reader(row.as_bytes(), &tables).unwrap();
        assert_eq!(report.malformed, 1);
        assert_eq!(index.lookup("nowhere").len(), 0);
    }

    #[test]
    fn short_row_is_malformed() {
        let tables = NormalizationTables::default();
        let (_, report) = GazetteerIndex::from_reader("1\tX\tX\n".as_bytes(), &tables).unwrap();
        assert_eq!(report.malformed, 1);
    }

    #[test]
    fn entry_count_matches_line_scan_oracle() {
        let tsv = fixtures::fixture_gazetteer_tsv();
        let index = fixture_index();

        // independent scan: count distinct (name, id) pairs over accepted rows
        let mut expected = 0usize;
        for line in tsv.lines() {
            let cols: Vec<&str> = line.split('\t').collect();
            let keep = match (cols[6], cols[7]) {
                ("P", _) => true,
                ("A", "ADM1") => true,
                ("A", code) => code.starts_with("PCL"),
                ("L", code) => code.starts_with("RGN"),
                _ => false,
            };
            if !keep {
                continue;
            }
            let mut names = vec![cols[1].to_lowercase()];
            for alt in cols[3].split(',') {
                let alt = alt.trim().to_lowercase();
                if !alt.is_empty() && !names.contains(&alt) {
                    names.push(alt);
                }
            }
            expected += names.len();
        }
        assert_eq!(index.entry_count(), expected);
    }

    #[test]
    fn springfield_fans_out_across_states() {
        let index = fixture_index();
        let hits = index.lookup("springfield");
        assert!(hits.len() >= 3, "expected several springfields");
        let states: std::collections::BTreeSet<_> =
            hits.iter().filter_map(|c| c.admin1.clone()).collect();
        assert!(states.len() >= 3);
        // deterministic order: population desc, then id asc
        for pair in hits.windows(2) {
            assert!(
                pair[0].population > pair[1].population
                    || (pair[0].population == pair[1].population
                        && pair[0].gazetteer_id < pair[1].gazetteer_id)
            );
        }
    }

    #[test]
    fn unknown_name_is_empty() {
        assert!(fixture_index().lookup("zzzz-not-a-place").is_empty());
    }

    #[test]
    fn massachusetts_is_single_admin1() {
        let index = fixture_index();
        let hits = index.lookup("massachusetts");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].granularity, Granularity::Admin1);
        assert_eq!(hits[0].admin1.as_deref(), Some("massachusetts"));
    }

    #[test]
    fn region_rows_load_as_admin1() {
        let index = fixture_index();
        let hits = index.lookup("southern california");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].granularity, Granularity::Admin1);
        assert_eq!(hits[0].admin1.as_deref(), Some("california"));
        assert!(hits[0].city.is_none());
    }

    #[test]
    fn country_rows_have_no_city_or_admin1() {
        let index = fixture_index();
        let hits = index.lookup("united states");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].granularity, Granularity::Country);
        assert!(hits[0].admin1.is_none() && hits[0].city.is_none());
    }

    #[test]
    fn two_loads_are_identical() {
        let a = fixture_index();
        let b = fixture_index();
        let mut keys: Vec<&str> = a.names().collect();
        keys.sort_unstable();
        for key in keys {
            let ca: Vec<_> = a.lookup(key);
            let cb: Vec<_> = b.lookup(key);
            assert_eq!(ca, cb, "lookup({key}) differs between loads");
        }
        assert_eq!(a.name_count(), b.name_count());
    }

    #[test]
    fn all_candidates_satisfy_coordinate_invariants() {
        let index = fixture_index();
        let mut keys: Vec<&str> = index.names().collect();
        keys.sort_unstable();
        for key in keys {
            for c in index.lookup(key) {
                assert!((-90.0..=90.0).contains(&c.latitude));
                assert!((-180.0..=180.0).contains(&c.longitude));
                match c.granularity {
                    Granularity::City => assert!(c.city.is_some()),
                    Granularity::Country => assert!(c.city.is_none() && c.admin1.is_none()),
                    Granularity::Admin1 => assert!(c.city.is_none()),
                }
            }
        }
    }

    #[test]
    fn alias_validation_reports_unresolvable_targets() {
        let index = fixture_index();
        let tables = NormalizationTables::default();
        assert!(index.validate_tables(&tables).is_empty());

        let mut broken = tables;
        broken
            .aliases
            .insert("atlantis".into(), "lost city of atlantis".into());
        let warnings = index.validate_tables(&broken);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("atlantis"));
    }
}
