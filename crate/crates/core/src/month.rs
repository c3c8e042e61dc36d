use std::fmt;
use std::str::FromStr;

use chrono::Datelike;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A calendar month in UTC, written as `YYYY-MM`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Month {
    pub year: i32,
    pub month: u8,
}

impl Month {
    pub fn new(year: i32, month: u8) -> Self {
        assert!((1..=12).contains(&month), "month out of range: {month}");
        Month { year, month }
    }

    /// The month containing the given UTC epoch timestamp.
    ///
    /// Panics if the timestamp is outside the representable date range;
    /// [`crate::corpus::parse_post_record`] rejects such timestamps up front.
    pub fn from_epoch(secs: i64) -> Self {
        let dt = chrono::DateTime::from_timestamp(secs, 0).expect("timestamp out of range");
        Month {
            year: dt.year(),
            month: dt.month() as u8,
        }
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Month {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Month {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    /// Every month from `start` through `end`, inclusive.
    pub fn range_inclusive(start: Month, end: Month) -> impl Iterator<Item = Month> {
        let mut cur = start;
        let mut done = start > end;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = cur;
            if cur == end {
                done = true;
            } else {
                cur = cur.next();
            }
            Some(out)
        })
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[derive(Debug, Error)]
#[error("invalid month {0:?}, expected YYYY-MM")]
pub struct ParseMonthError(String);

impl FromStr for Month {
    type Err = ParseMonthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMonthError(s.to_string());
        let (y, m) = s.split_once('-').ok_or_else(err)?;
        let year: i32 = y.parse().map_err(|_| err())?;
        let month: u8 = m.parse().map_err(|_| err())?;
        if !(1..=12).contains(&month) {
            return Err(err());
        }
        Ok(Month { year, month })
    }
}

impl Serialize for Month {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_roundtrip() {
        for s in ["2020-03", "2018-09", "1999-12", "2021-01"] {
            let m: Month = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
    }

    #[test]
    fn rejects_bad_strings() {
        for s in ["2020", "2020-13", "2020-00", "20-3-1", "abcd-ef"] {
            assert!(s.parse::<Month>().is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn ordering_and_next() {
        assert!(Month::new(2019, 12) < Month::new(2020, 1));
        assert_eq!(Month::new(2019, 12).next(), Month::new(2020, 1));
        assert_eq!(Month::new(2020, 2).next(), Month::new(2020, 3));
    }

    #[test]
    fn range_covers_endpoints() {
        let months: Vec<_> =
            Month::range_inclusive(Month::new(2019, 11), Month::new(2020, 2)).collect();
        assert_eq!(
            months,
            vec![
                Month::new(2019, 11),
                Month::new(2019, 12),
                Month::new(2020, 1),
                Month::new(2020, 2)
            ]
        );
        let single: Vec<_> =
            Month::range_inclusive(Month::new(2020, 1), Month::new(2020, 1)).collect();
        assert_eq!(single.len(), 1);
        let empty: Vec<_> =
            Month::range_inclusive(Month::new(2020, 2), Month::new(2020, 1)).collect();
        assert!(empty.is_empty());
    }

    #[test]
    fn from_epoch_utc_boundary() {
        // 2020-03-31T23:59:59Z
        assert_eq!(Month::from_epoch(1585699199), Month::new(2020, 3));
        // 2020-04-01T00:00:00Z
        assert_eq!(Month::from_epoch(1585699200), Month::new(2020, 4));
    }

    #[test]
    fn serde_as_string() {
        let m = Month::new(2020, 3);
        assert_eq!(serde_json::to_string(&m).unwrap(), "\"2020-03\"");
        let back: Month = serde_json::from_str("\"2020-03\"").unwrap();
        assert_eq!(back, m);
    }
}
