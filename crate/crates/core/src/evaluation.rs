//! Grade location guesses against human annotations and summarize the
//! confidence-filtered cohort geographically.
//!
//! Grading is city-level for US annotations and country-level otherwise.
//! Name comparison is exact on lowercase strings after alias normalization,
//! so an annotator's "NYC" matches a guessed "new york city", and "MA"
//! matches "massachusetts".

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gazetteer::{Granularity, NormalizationTables};
use crate::infer::LocationGuess;
use crate::{Error, Result};

/// One annotator verdict for one user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub author: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub city: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admin1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    /// The annotator inspected the full history and found no location.
    #[serde(default)]
    pub none_findable: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Grade {
    /// City-level match for US users, country-level for international.
    Full,
    /// Correct state and country, wrong city (US users only).
    Partial,
    Miss,
    /// No guess, and the annotator found nothing either.
    CorrectNone,
    /// No guess, but the annotator found a location.
    MissedNone,
    /// A guess for a user the annotator deemed locationless.
    FalseGuess,
}

fn norm_city(name: Option<&str>, tables: &NormalizationTables) -> Option<String> {
    name.map(|n| {
        let lower = n.to_lowercase();
        tables.aliases.get(&lower).cloned().unwrap_or(lower)
    })
}

fn norm_admin1(name: Option<&str>, tables: &NormalizationTables) -> Option<String> {
    name.map(|n| {
        let lower = n.to_lowercase();
        tables.state_abbrev.get(&lower).cloned().unwrap_or(lower)
    })
}

/// Grade one (guess, annotation) pair. A missing guess and a present guess
/// without a candidate (the no-guess record) are both treated as "no
/// location produced".
pub fn grade_guess(
    guess: Option<&LocationGuess>,
    annotation: &Annotation,
    tables: &NormalizationTables,
) -> Result<Grade> {
    if let Some(g) = guess {
        if g.user != annotation.author {
            return Err(Error::AuthorMismatch {
                guess: g.user.clone(),
                annotation: annotation.author.clone(),
            });
        }
    }
    let candidate = guess.and_then(|g| g.candidate.as_ref());

    let Some(candidate) = candidate else {
        return Ok(if annotation.none_findable {
            Grade::CorrectNone
        } else {
            Grade::MissedNone
        });
    };
    if annotation.none_findable {
        return Ok(Grade::FalseGuess);
    }

    let ann_country = annotation.country.as_deref().map(str::to_lowercase);
    let guess_country = Some(candidate.country_code.clone());

    if ann_country.as_deref() == Some("us") {
        let country_ok = guess_country.as_deref() == Some("us");
        let city_ok = norm_city(candidate.city.as_deref(), tables)
            == norm_city(annotation.city.as_deref(), tables);
        let admin1_ok = norm_admin1(candidate.admin1.as_deref(), tables)
            == norm_admin1(annotation.admin1.as_deref(), tables);
        if country_ok && admin1_ok && city_ok {
            Ok(Grade::Full)
        } else if country_ok && admin1_ok {
            Ok(Grade::Partial)
        } else {
            Ok(Grade::Miss)
        }
    } else if guess_country == ann_country {
        Ok(Grade::Full)
    } else {
        Ok(Grade::Miss)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub total: usize,
    pub full: usize,
    pub partial: usize,
    pub miss: usize,
    pub correct_none: usize,
    pub missed_none: usize,
    pub false_guess: usize,
    /// (Full + CorrectNone) / total.
    pub full_rate: f64,
    pub partial_rate: f64,
    /// (Full + CorrectNone + Partial) / total.
    pub combined_rate: f64,
}

pub fn accuracy_report(grades: &[Grade]) -> Result<AccuracyReport> {
    if grades.is_empty() {
        return Err(Error::EmptyInput);
    }
    let count = |g: Grade| grades.iter().filter(|&&x| x == g).count();
    let (full, partial, miss) = (count(Grade::Full), count(Grade::Partial), count(Grade::Miss));
    let correct_none = count(Grade::CorrectNone);
    let missed_none = count(Grade::MissedNone);
    let false_guess = count(Grade::FalseGuess);
    let n = grades.len();
    Ok(AccuracyReport {
        total: n,
        full,
        partial,
        miss,
        correct_none,
        missed_none,
        false_guess,
        full_rate: (full + correct_none) as f64 / n as f64,
        partial_rate: partial as f64 / n as f64,
        combined_rate: (full + correct_none + partial) as f64 / n as f64,
    })
}

/// Cumulative counts by resolution depth: a city-level guess counts at all
/// three levels, an admin1-level guess at two, a country-level guess at one.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GranularityCounts {
    pub city: usize,
    pub admin1: usize,
    pub country: usize,
}

fn count_granularities<'a>(guesses: impl Iterator<Item = &'a LocationGuess>) -> GranularityCounts {
    let mut counts = GranularityCounts::default();
    for guess in guesses {
        if let Some(c) = &guess.candidate {
            counts.country += 1;
            if matches!(c.granularity, Granularity::City | Granularity::Admin1) {
                counts.admin1 += 1;
            }
            if c.granularity == Granularity::City {
                counts.city += 1;
            }
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRate {
    pub state: String,
    pub users: usize,
    pub per_100k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub threshold: f64,
    pub pre_filter: GranularityCounts,
    pub post_filter: GranularityCounts,
    /// Post-filter US users per state, as users per 100k state population.
    pub state_rates: Vec<StateRate>,
}

/// Summarize one best-guess-per-user set before and after dropping guesses
/// with confidence below `threshold`. `population` must cover every US
/// state present in the post-filter set.
pub fn cohort_summary(
    guesses: &[LocationGuess],
    threshold: f64,
    population: &BTreeMap<String, u64>,
) -> Result<CohortSummary> {
    let pre_filter = count_granularities(guesses.iter());
    let kept: Vec<&LocationGuess> = guesses
        .iter()
        .filter(|g| g.confidence.unwrap_or(0.0) >= threshold)
        .collect();
    let post_filter = count_granularities(kept.iter().copied());

    let mut by_state: BTreeMap<String, usize> = BTreeMap::new();
    for guess in &kept {
        if let Some(c) = &guess.candidate {
            if c.is_us() {
                if let Some(state) = &c.admin1 {
                    *by_state.entry(state.clone()).or_insert(0) += 1;
                }
            }
        }
    }
    let mut state_rates = Vec::with_capacity(by_state.len());
    for (state, users) in by_state {
        let pop = *population
            .get(&state)
            .ok_or_else(|| Error::MissingPopulation(state.clone()))?;
        state_rates.push(StateRate {
            state,
            users,
            per_100k: 100_000.0 * users as f64 / pop as f64,
        });
    }

    Ok(CohortSummary {
        threshold,
        pre_filter,
        post_filter,
        state_rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::FeatureVector;
    use crate::gazetteer::GeoCandidate;

    fn candidate(
        city: Option<&str>,
        admin1: Option<&str>,
        country: &str,
        granularity: Granularity,
    ) -> GeoCandidate {
        GeoCandidate {
            gazetteer_id: 1,
            primary_name: city.or(admin1).unwrap_or(country).to_string(),
            latitude: 0.0,
            longitude: 0.0,
            country_code: country.into(),
            admin1: admin1.map(String::from),
            city: city.map(String::from),
            population: 1000,
            granularity,
        }
    }

    fn guess(user: &str, candidate: Option<GeoCandidate>, confidence: Option<f64>) -> LocationGuess {
        let features = match &candidate {
            Some(c) => FeatureVector::Positive {
                cluster_size_fraction: 1.0,
                total_entities: 1,
                is_us: c.is_us(),
                total_posts: 1,
                history_duration_days: 1.0,
                guess_population: c.population,
            },
            None => FeatureVector::Negative {
                total_entities: 0,
                total_posts: 1,
                history_duration_days: 1.0,
            },
        };
        LocationGuess {
            user: user.into(),
            candidate,
            cluster: None,
            features,
            confidence,
        }
    }

    fn ann(
        author: &str,
        city: Option<&str>,
        admin1: Option<&str>,
        country: Option<&str>,
        none_findable: bool,
    ) -> Annotation {
        Annotation {
            author: author.into(),
            city: city.map(String::from),
            admin1: admin1.map(String::from),
            country: country.map(String::from),
            none_findable,
        }
    }

    fn boston() -> Option<GeoCandidate> {
        Some(candidate(
            Some("boston"),
            Some("massachusetts"),
            "us",
            Granularity::City,
        ))
    }

    fn tables() -> NormalizationTables {
        NormalizationTables::default()
    }

    #[test]
    fn grades_cover_all_six_outcomes() {
        let t = tables();
        let us_ann = ann("u", Some("boston"), Some("massachusetts"), Some("us"), false);

        let full = grade_guess(Some(&guess("u", boston(), None)), &us_ann, &t).unwrap();
        assert_eq!(full, Grade::Full);

        let lowell = Some(candidate(
            Some("lowell"),
            Some("massachusetts"),
            "us",
            Granularity::City,
        ));
        let partial = grade_guess(Some(&guess("u", lowell, None)), &us_ann, &t).unwrap();
        assert_eq!(partial, Grade::Partial);

        let seattle = Some(candidate(
            Some("seattle"),
            Some("washington"),
            "us",
            Granularity::City,
        ));
        let miss = grade_guess(Some(&guess("u", seattle, None)), &us_ann, &t).unwrap();
        assert_eq!(miss, Grade::Miss);

        let nothing = ann("u", None, None, None, true);
        assert_eq!(
            grade_guess(Some(&guess("u", None, None)), &nothing, &t).unwrap(),
            Grade::CorrectNone
        );
        assert_eq!(grade_guess(None, &nothing, &t).unwrap(), Grade::CorrectNone);
        assert_eq!(
            grade_guess(Some(&guess("u", None, None)), &us_ann, &t).unwrap(),
            Grade::MissedNone
        );
        assert_eq!(
            grade_guess(Some(&guess("u", boston(), None)), &nothing, &t).unwrap(),
            Grade::FalseGuess
        );
    }

    #[test]
    fn non_us_grading_is_country_level() {
        let t = tables();
        let london = Some(candidate(Some("london"), None, "gb", Granularity::City));
        let gb_ann = ann("u", Some("manchester"), None, Some("gb"), false);
        assert_eq!(
            grade_guess(Some(&guess("u", london.clone(), None)), &gb_ann, &t).unwrap(),
            Grade::Full
        );
        let fr_ann = ann("u", None, None, Some("fr"), false);
        assert_eq!(
            grade_guess(Some(&guess("u", london, None)), &fr_ann, &t).unwrap(),
            Grade::Miss
        );
    }

    #[test]
    fn alias_and_abbreviation_normalization_in_grading() {
        let t = tables();
        let nyc = Some(candidate(
            Some("new york city"),
            Some("new york"),
            "us",
            Granularity::City,
        ));
        let annotated = ann("u", Some("NYC"), Some("NY"), Some("US"), false);
        assert_eq!(
            grade_guess(Some(&guess("u", nyc, None)), &annotated, &t).unwrap(),
            Grade::Full
        );
    }

    #[test]
    fn state_level_guess_against_city_annotation_is_partial() {
        let t = tables();
        let state_only = Some(candidate(
            None,
            Some("massachusetts"),
            "us",
            Granularity::Admin1,
        ));
        let us_ann = ann("u", Some("boston"), Some("massachusetts"), Some("us"), false);
        assert_eq!(
            grade_guess(Some(&guess("u", state_only, None)), &us_ann, &t).unwrap(),
            Grade::Partial
        );
    }

    #[test]
    fn author_mismatch_is_an_error() {
        let t = tables();
        let a = ann("other", Some("boston"), Some("massachusetts"), Some("us"), false);
        assert!(matches!(
            grade_guess(Some(&guess("u", boston(), None)), &a, &t),
            Err(Error::AuthorMismatch { .. })
        ));
    }

    #[test]
    fn report_rates_match_hand_arithmetic() {
        let mut grades = Vec::new();
        grades.extend(std::iter::repeat(Grade::Full).take(55));
        grades.extend(std::iter::repeat(Grade::CorrectNone).take(4));
        grades.extend(std::iter::repeat(Grade::Partial).take(4));
        grades.extend(std::iter::repeat(Grade::Miss).take(20));
        grades.extend(std::iter::repeat(Grade::MissedNone).take(10));
        grades.extend(std::iter::repeat(Grade::FalseGuess).take(7));
        let report = accuracy_report(&grades).unwrap();
        assert_eq!(report.total, 100);
        assert_eq!(report.full_rate, 0.59);
        assert_eq!(report.partial_rate, 0.04);
        assert_eq!(report.combined_rate, 0.63);
        assert_eq!(report.miss + report.missed_none + report.false_guess, 37);
    }

    #[test]
    fn all_full_report() {
        let grades = vec![Grade::Full; 8];
        let report = accuracy_report(&grades).unwrap();
        assert_eq!(report.full_rate, 1.0);
        assert_eq!(report.partial_rate, 0.0);
        assert_eq!(report.combined_rate, 1.0);
    }

    #[test]
    fn rates_partition_to_one() {
        let grades = vec![
            Grade::Full,
            Grade::Partial,
            Grade::Miss,
            Grade::CorrectNone,
            Grade::MissedNone,
            Grade::FalseGuess,
            Grade::Miss,
        ];
        let r = accuracy_report(&grades).unwrap();
        let incorrect_rate =
            (r.miss + r.missed_none + r.false_guess) as f64 / r.total as f64;
        assert!((r.full_rate + r.partial_rate + incorrect_rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_grades_error() {
        assert!(matches!(accuracy_report(&[]), Err(Error::EmptyInput)));
    }

    /// 9 guessing users: 5 city-level (one below threshold), 2 state-level,
    /// 2 country-level. Expected counts: pre (5, 7, 9), post (4, 6, 8).
    fn summary_fixture() -> Vec<LocationGuess> {
        let mut guesses = Vec::new();
        for (i, conf) in [(0, 0.9), (1, 0.8), (2, 0.7), (3, 0.6), (4, 0.2)] {
            let state = if i < 3 { "massachusetts" } else { "washington" };
            guesses.push(guess(
                &format!("city{i}"),
                Some(candidate(Some("x"), Some(state), "us", Granularity::City)),
                Some(conf),
            ));
        }
        for i in 0..2 {
            guesses.push(guess(
                &format!("state{i}"),
                Some(candidate(None, Some("oregon"), "us", Granularity::Admin1)),
                Some(0.75),
            ));
        }
        for i in 0..2 {
            guesses.push(guess(
                &format!("country{i}"),
                Some(candidate(None, None, "gb", Granularity::Country)),
                Some(0.65),
            ));
        }
        guesses.push(guess("noguess", None, Some(0.9)));
        guesses
    }

    fn population() -> BTreeMap<String, u64> {
        [
            ("massachusetts", 7_000_000u64),
            ("washington", 8_000_000),
            ("oregon", 4_000_000),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    #[test]
    fn cohort_summary_counts_and_rates() {
        let guesses = summary_fixture();
        let summary = cohort_summary(&guesses, 0.5, &population()).unwrap();
        assert_eq!(
            summary.pre_filter,
            GranularityCounts {
                city: 5,
                admin1: 7,
                country: 9
            }
        );
        assert_eq!(
            summary.post_filter,
            GranularityCounts {
                city: 4,
                admin1: 6,
                country: 8
            }
        );
        // post-filter US users: city0..2 in massachusetts, city3 in
        // washington, state0..1 in oregon
        let rates: BTreeMap<&str, (usize, f64)> = summary
            .state_rates
            .iter()
            .map(|r| (r.state.as_str(), (r.users, r.per_100k)))
            .collect();
        assert_eq!(rates["massachusetts"], (3, 100_000.0 * 3.0 / 7_000_000.0));
        assert_eq!(rates["washington"], (1, 100_000.0 / 8_000_000.0));
        assert_eq!(rates["oregon"], (2, 100_000.0 * 2.0 / 4_000_000.0));
    }

    #[test]
    fn fifty_users_in_a_million_is_five_per_100k() {
        let mut guesses = Vec::new();
        for i in 0..50 {
            guesses.push(guess(
                &format!("u{i}"),
                Some(candidate(Some("x"), Some("vermont"), "us", Granularity::City)),
                Some(0.9),
            ));
        }
        let pop = [("vermont".to_string(), 1_000_000u64)].into_iter().collect();
        let summary = cohort_summary(&guesses, 0.5, &pop).unwrap();
        assert_eq!(summary.state_rates.len(), 1);
        assert_eq!(summary.state_rates[0].per_100k, 5.0);
    }

    #[test]
    fn missing_population_is_an_error() {
        let guesses = summary_fixture();
        let mut pop = population();
        pop.remove("oregon");
        assert!(matches!(
            cohort_summary(&guesses, 0.5, &pop),
            Err(Error::MissingPopulation(s)) if s == "oregon"
        ));
    }

    #[test]
    fn counts_monotone_in_threshold() {
        let guesses = summary_fixture();
        let pop = population();
        let mut last = GranularityCounts {
            city: usize::MAX,
            admin1: usize::MAX,
            country: usize::MAX,
        };
        for i in 0..=10 {
            let threshold = i as f64 / 10.0;
            let summary = cohort_summary(&guesses, threshold, &pop).unwrap();
            assert!(summary.post_filter.city <= last.city);
            assert!(summary.post_filter.admin1 <= last.admin1);
            assert!(summary.post_filter.country <= last.country);
            last = summary.post_filter;
        }
    }
}
