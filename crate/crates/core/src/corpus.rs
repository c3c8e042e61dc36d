//! Parse archived post dumps into typed records, group them into per-user
//! histories, and compute monthly posting volumes.
//!
//! Dumps are line-delimited JSON, one post per line, in the shape produced
//! by common Reddit archive tooling. Submissions carry a `title`; comments
//! do not. The tree structure of submissions and comments is ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::month::Month;
use crate::{Error, Result};

/// Author string used by archives for deleted accounts. Such posts cannot
/// anchor a user history and are dropped during grouping.
pub const DELETED_AUTHOR: &str = "[deleted]";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostKind {
    Submission,
    Comment,
}

/// One submission or comment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub author: String,
    /// Lowercase, without any `r/` prefix.
    pub subreddit: String,
    pub kind: PostKind,
    pub created_utc: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default)]
    pub body: String,
    /// Entity spans produced by an external tagger, when ingesting
    /// pre-tagged corpora.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pretagged_entities: Option<Vec<String>>,
}

impl Post {
    pub fn month(&self) -> Month {
        Month::from_epoch(self.created_utc)
    }
}

#[derive(Default, Deserialize)]
struct RawPost {
    id: Option<String>,
    author: Option<String>,
    subreddit: Option<String>,
    kind: Option<String>,
    created_utc: Option<i64>,
    title: Option<String>,
    body: Option<String>,
    #[serde(default)]
    pretagged_entities: Option<Vec<String>>,
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::MalformedRecord {
        reason: reason.into(),
    }
}

/// Parse one line of a dump into a [`Post`].
///
/// The subreddit is lowercased and stripped of any `r/` prefix. `kind` is
/// inferred from the presence of `title` unless given explicitly. A missing
/// `body` becomes empty text, but a record with neither `body` nor `title`
/// is malformed.
pub fn parse_post_record(line: &str) -> Result<Post> {
    let raw: RawPost =
        serde_json::from_str(line).map_err(|e| malformed(format!("not a JSON record: {e}")))?;

    let id = raw.id.ok_or_else(|| malformed("missing field id"))?;
    let author = raw.author.ok_or_else(|| malformed("missing field author"))?;
    if author.is_empty() {
        return Err(malformed("empty author"));
    }
    let subreddit = raw
        .subreddit
        .ok_or_else(|| malformed("missing field subreddit"))?;
    let subreddit = subreddit
        .to_lowercase()
        .trim_start_matches("r/")
        .to_string();
    if subreddit.is_empty() {
        return Err(malformed("empty subreddit"));
    }
    let created_utc = raw
        .created_utc
        .ok_or_else(|| malformed("missing field created_utc"))?;
    if created_utc <= 0 {
        return Err(malformed(format!("created_utc {created_utc} must be > 0")));
    }
    if chrono::DateTime::from_timestamp(created_utc, 0).is_none() {
        return Err(malformed(format!("created_utc {created_utc} out of range")));
    }
    if raw.body.is_none() && raw.title.is_none() {
        return Err(malformed("record has neither body nor title"));
    }

    let kind = match raw.kind.as_deref() {
        Some("submission") => PostKind::Submission,
        Some("comment") => PostKind::Comment,
        Some(other) => return Err(malformed(format!("unknown kind {other:?}"))),
        None => {
            if raw.title.is_some() {
                PostKind::Submission
            } else {
                PostKind::Comment
            }
        }
    };
    if kind == PostKind::Comment && raw.title.is_some() {
        return Err(malformed("comment carries a title"));
    }

    Ok(Post {
        id,
        author,
        subreddit,
        kind,
        created_utc,
        title: raw.title,
        body: raw.body.unwrap_or_default(),
        pretagged_entities: raw.pretagged_entities,
    })
}

/// One user's posts across the whole corpus, ordered by time.
#[derive(Clone, Debug, PartialEq)]
pub struct UserHistory {
    pub author: String,
    pub posts: Vec<Post>,
    pub first_post: i64,
    pub last_post: i64,
    pub post_count: usize,
}

impl UserHistory {
    /// Build a history from unordered posts. Posts are sorted by
    /// `(created_utc, id)` so equal timestamps still order deterministically.
    pub fn from_posts(author: String, mut posts: Vec<Post>) -> Self {
        posts.sort_by(|a, b| {
            a.created_utc
                .cmp(&b.created_utc)
                .then_with(|| a.id.cmp(&b.id))
        });
        let first_post = posts.first().map_or(0, |p| p.created_utc);
        let last_post = posts.last().map_or(0, |p| p.created_utc);
        let post_count = posts.len();
        UserHistory {
            author,
            posts,
            first_post,
            last_post,
            post_count,
        }
    }

    pub fn duration_days(&self) -> f64 {
        (self.last_post - self.first_post) as f64 / 86_400.0
    }
}

/// Group posts into one [`UserHistory`] per distinct author, dropping
/// posts whose author is [`DELETED_AUTHOR`]. Output is sorted by author and
/// independent of input order.
pub fn group_by_user(posts: impl IntoIterator<Item = Post>) -> Vec<UserHistory> {
    let mut by_author: BTreeMap<String, Vec<Post>> = BTreeMap::new();
    for post in posts {
        if post.author == DELETED_AUTHOR {
            continue;
        }
        by_author.entry(post.author.clone()).or_default().push(post);
    }
    by_author
        .into_iter()
        .map(|(author, posts)| UserHistory::from_posts(author, posts))
        .collect()
}

/// Post counts per calendar month (UTC).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthlyVolume {
    counts: BTreeMap<Month, u64>,
}

impl MonthlyVolume {
    /// Zero-filled volume over an inclusive month range.
    pub fn zeroed(start: Month, end: Month) -> Self {
        MonthlyVolume {
            counts: Month::range_inclusive(start, end).map(|m| (m, 0)).collect(),
        }
    }

    pub fn get(&self, month: Month) -> u64 {
        self.counts.get(&month).copied().unwrap_or(0)
    }

    pub fn contains(&self, month: Month) -> bool {
        self.counts.contains_key(&month)
    }

    /// Increment `month` by `by`, only if the month is already tracked.
    /// Used to keep counts confined to the configured range.
    pub fn add_if_tracked(&mut self, month: Month, by: u64) {
        if let Some(c) = self.counts.get_mut(&month) {
            *c += by;
        }
    }

    pub fn insert(&mut self, month: Month, count: u64) {
        self.counts.insert(month, count);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Month, u64)> + '_ {
        self.counts.iter().map(|(m, c)| (*m, *c))
    }

    pub fn months(&self) -> impl Iterator<Item = Month> + '_ {
        self.counts.keys().copied()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Add another volume's counts into this one, month by month.
    pub fn merge(&mut self, other: &MonthlyVolume) {
        for (m, c) in other.iter() {
            *self.counts.entry(m).or_insert(0) += c;
        }
    }
}

/// Count posts per calendar month over `[start, end]`. Months in range with
/// zero posts are present with count 0; posts outside the range are ignored.
pub fn monthly_volume<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    start: Month,
    end: Month,
) -> MonthlyVolume {
    assert!(start <= end, "month range start must be <= end");
    let mut volume = MonthlyVolume::zeroed(start, end);
    for post in posts {
        volume.add_if_tracked(post.month(), 1);
    }
    volume
}

#[cfg(test)]
mod tests {
    use super::*;

    fn post_json(id: &str, author: &str, sub: &str, ts: i64, body: &str) -> String {
        format!(
            r#"{{"id":"{id}","author":"{author}","subreddit":"{sub}","created_utc":{ts},"body":"{body}"}}"#
        )
    }

    #[test]
    fn parses_comment_with_field_mapping() {
        let p = parse_post_record(&post_json("c1", "u1", "Opiates", 1583020800, "hi")).unwrap();
        assert_eq!(p.kind, PostKind::Comment);
        assert_eq!(p.subreddit, "opiates");
        assert_eq!(p.body, "hi");
        assert!(p.title.is_none());
    }

    #[test]
    fn title_implies_submission() {
        let line = r#"{"id":"s1","author":"u1","subreddit":"heroin","created_utc":1583020800,"title":"t","body":""}"#;
        let p = parse_post_record(line).unwrap();
        assert_eq!(p.kind, PostKind::Submission);
        assert_eq!(p.title.as_deref(), Some("t"));
    }

    #[test]
    fn rejects_garbage_line() {
        assert!(matches!(
            parse_post_record("not-a-record"),
            Err(Error::MalformedRecord { .. })
        ));
    }

    #[test]
    fn rejects_invalid_records() {
        let missing_author = r#"{"id":"x","subreddit":"a","created_utc":1,"body":"b"}"#;
        let empty_author = r#"{"id":"x","author":"","subreddit":"a","created_utc":1,"body":"b"}"#;
        let bad_ts = r#"{"id":"x","author":"u","subreddit":"a","created_utc":0,"body":"b"}"#;
        let no_text = r#"{"id":"x","author":"u","subreddit":"a","created_utc":1}"#;
        let comment_with_title = r#"{"id":"x","author":"u","subreddit":"a","created_utc":1,"kind":"comment","title":"t","body":"b"}"#;
        for line in [
            missing_author,
            empty_author,
            bad_ts,
            no_text,
            comment_with_title,
        ] {
            assert!(
                matches!(parse_post_record(line), Err(Error::MalformedRecord { .. })),
                "should reject: {line}"
            );
        }
    }

    #[test]
    fn strips_subreddit_prefix() {
        let line = r#"{"id":"x","author":"u","subreddit":"r/Boston","created_utc":1,"body":"b"}"#;
        assert_eq!(parse_post_record(line).unwrap().subreddit, "boston");
    }

    #[test]
    fn missing_body_becomes_empty() {
        let line =
            r#"{"id":"x","author":"u","subreddit":"a","created_utc":1,"title":"only title"}"#;
        assert_eq!(parse_post_record(line).unwrap().body, "");
    }

    #[test]
    fn parse_serialize_parse_is_identity() {
        let lines = [
            post_json("c1", "u1", "opiates", 1583020800, "hi"),
            r#"{"id":"s1","author":"u1","subreddit":"heroin","created_utc":1583020800,"title":"t","body":"x","pretagged_entities":["Boston"]}"#.to_string(),
        ];
        for line in lines {
            let p1 = parse_post_record(&line).unwrap();
            let ser = serde_json::to_string(&p1).unwrap();
            let p2 = parse_post_record(&ser).unwrap();
            assert_eq!(p1, p2);
        }
    }

    fn mk(id: &str, author: &str, ts: i64) -> Post {
        Post {
            id: id.into(),
            author: author.into(),
            subreddit: "opiates".into(),
            kind: PostKind::Comment,
            created_utc: ts,
            title: None,
            body: String::new(),
            pretagged_entities: None,
        }
    }

    #[test]
    fn group_by_user_counts() {
        let posts = vec![
            mk("1", "a", 30),
            mk("2", "b", 10),
            mk("3", "a", 10),
            mk("4", "a", 20),
            mk("5", "b", 40),
        ];
        let histories = group_by_user(posts);
        assert_eq!(histories.len(), 2);
        assert_eq!(histories[0].author, "a");
        assert_eq!(histories[0].post_count, 3);
        assert_eq!(histories[1].post_count, 2);
        assert_eq!(histories[0].first_post, 10);
        assert_eq!(histories[0].last_post, 30);
        let ids: Vec<_> = histories[0].posts.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, vec!["3", "4", "1"]);
    }

    #[test]
    fn group_by_user_empty_and_order_invariant() {
        assert!(group_by_user(Vec::new()).is_empty());
        let posts = vec![mk("1", "a", 3), mk("2", "b", 1), mk("3", "a", 2)];
        let mut shuffled = posts.clone();
        shuffled.reverse();
        assert_eq!(group_by_user(posts), group_by_user(shuffled));
    }

    #[test]
    fn group_by_user_drops_deleted_and_partitions() {
        let posts = vec![
            mk("1", "a", 1),
            mk("2", DELETED_AUTHOR, 2),
            mk("3", "b", 3),
            mk("4", "a", 4),
        ];
        let histories = group_by_user(posts);
        let total: usize = histories.iter().map(|h| h.post_count).sum();
        assert_eq!(total, 3);
        assert!(histories.iter().all(|h| h.author != DELETED_AUTHOR));
    }

    #[test]
    fn monthly_volume_zero_months_present() {
        // five posts in 2020-03, none in 2020-04
        let posts: Vec<Post> = (0..5).map(|i| mk(&i.to_string(), "a", 1583020800 + i)).collect();
        let vol = monthly_volume(&posts, Month::new(2020, 3), Month::new(2020, 4));
        assert_eq!(vol.get(Month::new(2020, 3)), 5);
        assert_eq!(vol.get(Month::new(2020, 4)), 0);
        assert!(vol.contains(Month::new(2020, 4)));
    }

    #[test]
    fn monthly_volume_utc_boundary() {
        let p = mk("1", "a", 1585699199); // 2020-03-31T23:59:59Z
        let vol = monthly_volume([&p], Month::new(2020, 3), Month::new(2020, 4));
        assert_eq!(vol.get(Month::new(2020, 3)), 1);
        assert_eq!(vol.get(Month::new(2020, 4)), 0);
    }

    #[test]
    fn monthly_volume_matches_direct_count_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let start = Month::new(2020, 1);
        let end = Month::new(2020, 12);
        // 2020-01-01T00:00:00Z .. 2021-01-01T00:00:00Z
        let (lo, hi) = (1577836800i64, 1609459200i64);
        let posts: Vec<Post> = (0..10_000)
            .map(|i| mk(&i.to_string(), "a", rng.gen_range(lo..hi)))
            .collect();
        let vol = monthly_volume(&posts, start, end);

        // independent count
        let mut oracle: BTreeMap<Month, u64> = Month::range_inclusive(start, end)
            .map(|m| (m, 0))
            .collect();
        for p in &posts {
            *oracle.get_mut(&Month::from_epoch(p.created_utc)).unwrap() += 1;
        }
        for (m, c) in &oracle {
            assert_eq!(vol.get(*m), *c);
        }
        // uniform draw: each month within 3 sigma of binomial expectation
        let n = 10_000.0;
        let days_total = (hi - lo) as f64;
        for (m, c) in vol.iter() {
            let next = m.next();
            let month_secs = (chrono::NaiveDate::from_ymd_opt(next.year, next.month as u32, 1)
                .unwrap()
                .and_hms_opt(0, 0, 0)
                .unwrap()
                .and_utc()
                .timestamp()
                - chrono::NaiveDate::from_ymd_opt(m.year, m.month as u32, 1)
                    .unwrap()
                    .and_hms_opt(0, 0, 0)
                    .unwrap()
                    .and_utc()
                    .timestamp()) as f64;
            let p = month_secs / days_total;
            let mean = n * p;
            let sigma = (n * p * (1.0 - p)).sqrt();
            assert!(
                (c as f64 - mean).abs() <= 3.0 * sigma,
                "month {m}: {c} outside {mean} +- 3*{sigma}"
            );
        }
    }

    #[test]
    fn monthly_volume_additive_under_concatenation() {
        let posts: Vec<Post> = (0..50)
            .map(|i| mk(&i.to_string(), "a", 1577836800 + i * 500_000))
            .collect();
        let (start, end) = (Month::new(2020, 1), Month::new(2020, 12));
        let whole = monthly_volume(&posts, start, end);
        let mut merged = monthly_volume(posts.iter().take(20), start, end);
        merged.merge(&monthly_volume(posts.iter().skip(20), start, end));
        assert_eq!(whole, merged);
    }
}
