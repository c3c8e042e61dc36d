//! Static normalization tables: the entity blocklist, nickname aliases,
//! state abbreviations, large-state region expansions, and the
//! location-subreddit mapping.
//!
//! The defaults are the hard-coded sets the pipeline was tuned with; all
//! of them can be replaced or extended through a config file so the sets
//! stay inspectable.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationTables {
    /// Entities dropped outright; they mostly carry non-location discourse.
    pub blocklist: BTreeSet<String>,
    /// Nickname -> proper name.
    pub aliases: BTreeMap<String, String>,
    /// Two-letter US state code (lowercase) -> state name.
    pub state_abbrev: BTreeMap<String, String>,
    /// Large states whose single centroid would starve in-state clusters;
    /// the state name expands to these region/city names instead.
    pub large_state_regions: BTreeMap<String, Vec<String>>,
    /// Subreddit name -> place name, for subreddits that are themselves
    /// locations.
    pub location_subreddits: BTreeMap<String, String>,
}

impl Default for NormalizationTables {
    fn default() -> Self {
        let blocklist = ["china", "russia", "turkey", "op"]
            .into_iter()
            .map(String::from)
            .collect();

        let aliases = [
            ("vegas", "las vegas"),
            ("nyc", "new york city"),
            ("l.a.", "los angeles"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();

        let state_abbrev = US_STATES
            .iter()
            .map(|(code, name)| (code.to_string(), name.to_string()))
            .collect();

        let large_state_regions = [
            (
                "california",
                vec!["central california", "southern california", "northern california"],
            ),
            ("texas", vec!["el paso", "houston", "dallas"]),
            ("florida", vec!["tallahassee", "miami"]),
            ("alaska", vec!["juneau", "anchorage", "fairbanks"]),
        ]
        .into_iter()
        .map(|(k, v)| {
            (
                k.to_string(),
                v.into_iter().map(String::from).collect::<Vec<_>>(),
            )
        })
        .collect();

        NormalizationTables {
            blocklist,
            aliases,
            state_abbrev,
            large_state_regions,
            location_subreddits: BTreeMap::new(),
        }
    }
}

impl NormalizationTables {
    /// Merge a two-column `subreddit<TAB>place name` file into
    /// `location_subreddits`. Blank lines and `#` comments are skipped.
    /// Returns the number of mappings read.
    pub fn merge_location_subreddits(&mut self, reader: impl BufRead) -> Result<usize> {
        let mut added = 0;
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (sub, place) = line.split_once('\t').ok_or_else(|| Error::MalformedRecord {
                reason: format!("location-subreddit line {line:?} is not tab-separated"),
            })?;
            self.location_subreddits
                .insert(sub.trim().to_lowercase(), place.trim().to_lowercase());
            added += 1;
        }
        Ok(added)
    }
}

/// Postal code -> state name, all lowercase. Includes D.C.
const US_STATES: [(&str, &str); 51] = [
    ("al", "alabama"),
    ("ak", "alaska"),
    ("az", "arizona"),
    ("ar", "arkansas"),
    ("ca", "california"),
    ("co", "colorado"),
    ("ct", "connecticut"),
    ("de", "delaware"),
    ("dc", "district of columbia"),
    ("fl", "florida"),
    ("ga", "georgia"),
    ("hi", "hawaii"),
    ("id", "idaho"),
    ("il", "illinois"),
    ("in", "indiana"),
    ("ia", "iowa"),
    ("ks", "kansas"),
    ("ky", "kentucky"),
    ("la", "louisiana"),
    ("me", "maine"),
    ("md", "maryland"),
    ("ma", "massachusetts"),
    ("mi", "michigan"),
    ("mn", "minnesota"),
    ("ms", "mississippi"),
    ("mo", "missouri"),
    ("mt", "montana"),
    ("ne", "nebraska"),
    ("nv", "nevada"),
    ("nh", "new hampshire"),
    ("nj", "new jersey"),
    ("nm", "new mexico"),
    ("ny", "new york"),
    ("nc", "north carolina"),
    ("nd", "north dakota"),
    ("oh", "ohio"),
    ("ok", "oklahoma"),
    ("or", "oregon"),
    ("pa", "pennsylvania"),
    ("ri", "rhode island"),
    ("sc", "south carolina"),
    ("sd", "south dakota"),
    ("tn", "tennessee"),
    ("tx", "texas"),
    ("ut", "utah"),
    ("vt", "vermont"),
    ("va", "virginia"),
    ("wa", "washington"),
    ("wv", "west virginia"),
    ("wi", "wisconsin"),
    ("wy", "wyoming"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_required_entries() {
        let t = NormalizationTables::default();
        for blocked in ["china", "russia", "turkey", "op"] {
            assert!(t.blocklist.contains(blocked));
        }
        assert_eq!(t.aliases.get("vegas").unwrap(), "las vegas");
        assert_eq!(t.aliases.get("nyc").unwrap(), "new york city");
        assert_eq!(t.aliases.get("l.a.").unwrap(), "los angeles");
        assert_eq!(t.state_abbrev.len(), 51);
        assert_eq!(t.state_abbrev.get("ma").unwrap(), "massachusetts");
        assert_eq!(
            t.large_state_regions.get("california").unwrap(),
            &vec![
                "central california".to_string(),
                "southern california".to_string(),
                "northern california".to_string()
            ]
        );
        assert_eq!(t.large_state_regions.len(), 4);
        assert!(t.location_subreddits.is_empty());
    }

    #[test]
    fn merges_location_subreddit_file() {
        let mut t = NormalizationTables::default();
        let file = "# subreddit\tplace\nboston\tboston\nNYC\tnew york city\n\nsydney\tsydney\n";
        let added = t.merge_location_subreddits(file.as_bytes()).unwrap();
        assert_eq!(added, 3);
        assert_eq!(t.location_subreddits.get("nyc").unwrap(), "new york city");
    }

    #[test]
    fn rejects_untabbed_subreddit_line() {
        let mut t = NormalizationTables::default();
        assert!(t
            .merge_location_subreddits("boston boston\n".as_bytes())
            .is_err());
    }

    #[test]
    fn tables_roundtrip_through_serde() {
        let t = NormalizationTables::default();
        let json = serde_json::to_string(&t).unwrap();
        let back: NormalizationTables = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
    }
}
