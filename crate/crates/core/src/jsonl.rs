//! Line-delimited JSON readers and writers for pipeline artifacts.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::corpus::{parse_post_record, Post};
use crate::Result;

pub fn read_jsonl<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let file = std::fs::File::open(path)?;
    from_reader(std::io::BufReader::new(file))
}

pub fn from_reader<T: DeserializeOwned>(reader: impl BufRead) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

pub fn write_jsonl<'a, T: Serialize + 'a>(
    writer: &mut dyn Write,
    items: impl IntoIterator<Item = &'a T>,
) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut *writer, item)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Outcome of a skip-and-count post read.
#[derive(Clone, Debug, Default)]
pub struct ReadReport {
    pub lines: usize,
    pub parsed: usize,
    pub skipped: usize,
    pub sample_errors: Vec<String>,
}

/// Read a post dump. In strict mode the first malformed record aborts the
/// read; otherwise malformed records are skipped and counted.
pub fn read_posts(reader: impl BufRead, strict: bool) -> Result<(Vec<Post>, ReadReport)> {
    let mut report = ReadReport::default();
    let mut posts = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.lines += 1;
        match parse_post_record(&line) {
            Ok(post) => {
                posts.push(post);
                report.parsed += 1;
            }
            Err(e) => {
                if strict {
                    return Err(e);
                }
                report.skipped += 1;
                if report.sample_errors.len() < 10 {
                    report.sample_errors.push(format!("line {}: {e}", lineno + 1));
                }
            }
        }
    }
    Ok((posts, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skip_and_count_vs_strict() {
        let dump = concat!(
            r#"{"id":"a","author":"u","subreddit":"x","created_utc":1,"body":"hi"}"#,
            "\n",
            "garbage\n",
            r#"{"id":"b","author":"u","subreddit":"x","created_utc":2,"body":"yo"}"#,
            "\n",
        );
        let (posts, report) = read_posts(dump.as_bytes(), false).unwrap();
        assert_eq!(posts.len(), 2);
        assert_eq!((report.lines, report.parsed, report.skipped), (3, 2, 1));
        assert_eq!(report.sample_errors.len(), 1);

        assert!(read_posts(dump.as_bytes(), true).is_err());
    }

    #[test]
    fn jsonl_roundtrip() {
        let items = vec![
            serde_json::json!({"a": 1}),
            serde_json::json!({"b": [1, 2]}),
        ];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &items).unwrap();
        let back: Vec<serde_json::Value> = from_reader(buf.as_slice()).unwrap();
        assert_eq!(items, back);
    }
}
