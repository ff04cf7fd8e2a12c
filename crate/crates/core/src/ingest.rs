//! Streaming ingestion of Stack Overflow `Posts.xml` dumps.
//!
//! Dumps carry one `<row .../>` element per line. Each line is decoded on its
//! own so that a malformed row is skipped and counted instead of aborting the
//! whole file. Ingestion makes two passes over the file: the first keeps
//! questions that match the tag filter and remembers their `AcceptedAnswerId`,
//! the second picks up the accepted answers. Row order inside the file
//! therefore has no influence on the result.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::LazyLock;

use chrono::{DateTime, NaiveDateTime, Utc};
use quick_xml::events::Event;
use quick_xml::Reader;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PostId = u64;

/// Maximum number of tags Stack Overflow allows on a question.
pub const MAX_TAGS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostKind {
    Question,
    AcceptedAnswer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: PostId,
    pub kind: PostKind,
    pub parent_id: Option<PostId>,
    pub created_at: DateTime<Utc>,
    pub tags: Vec<String>,
    #[serde(skip)]
    pub body_html: String,
    pub body_text: String,
    pub view_count: Option<u64>,
    pub has_accepted_answer: Option<bool>,
}

impl Post {
    pub fn is_question(&self) -> bool {
        self.kind == PostKind::Question
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpStats {
    pub total_rows: u64,
    pub questions_kept: u64,
    pub accepted_answers_kept: u64,
    pub rows_skipped: u64,
}

/// Attributes of a single `<row/>` element.
#[derive(Debug, Clone, Default)]
struct RawRow {
    id: Option<PostId>,
    post_type: Option<u32>,
    parent_id: Option<PostId>,
    accepted_answer_id: Option<PostId>,
    created_at: Option<DateTime<Utc>>,
    body: Option<String>,
    tags: Option<String>,
    view_count: Option<u64>,
}

/// A row with every attribute required for its post type.
#[derive(Debug, Clone)]
struct Row {
    id: PostId,
    post_type: u32,
    parent_id: Option<PostId>,
    accepted_answer_id: Option<PostId>,
    created_at: DateTime<Utc>,
    body: String,
    tags: Vec<String>,
    view_count: Option<u64>,
}

enum Line {
    Structural,
    Malformed,
    Row(Row),
}

fn classify_line(line: &str) -> Line {
    let trimmed = line.trim();
    if trimmed.is_empty()
        || trimmed.starts_with("<?xml")
        || trimmed.starts_with("<posts")
        || trimmed.starts_with("</posts")
    {
        return Line::Structural;
    }
    match decode_row(trimmed).and_then(RawRow::complete) {
        Some(row) => Line::Row(row),
        None => Line::Malformed,
    }
}

fn decode_row(line: &str) -> Option<RawRow> {
    let mut reader = Reader::from_str(line);
    let start = match reader.read_event() {
        Ok(Event::Empty(start)) if start.name().as_ref() == b"row" => start,
        _ => return None,
    };
    // anything but trailing whitespace after the element makes the row malformed
    match reader.read_event() {
        Ok(Event::Eof) => {}
        Ok(Event::Text(t)) if t.iter().all(u8::is_ascii_whitespace) => {}
        _ => return None,
    }

    let mut raw = RawRow::default();
    for attr in start.attributes() {
        let attr = attr.ok()?;
        let value = attr.unescape_value().ok()?;
        match attr.key.as_ref() {
            b"Id" => raw.id = Some(value.parse().ok()?),
            b"PostTypeId" => raw.post_type = Some(value.parse().ok()?),
            b"ParentId" => raw.parent_id = Some(value.parse().ok()?),
            b"AcceptedAnswerId" => raw.accepted_answer_id = Some(value.parse().ok()?),
            b"CreationDate" => raw.created_at = Some(parse_timestamp(&value)?),
            b"Body" => raw.body = Some(value.into_owned()),
            b"Tags" => raw.tags = Some(value.into_owned()),
            b"ViewCount" => raw.view_count = Some(value.parse().ok()?),
            _ => {}
        }
    }
    Some(raw)
}

impl RawRow {
    fn complete(self) -> Option<Row> {
        let id = self.id.filter(|&id| id > 0)?;
        Some(Row {
            id,
            post_type: self.post_type?,
            parent_id: self.parent_id,
            accepted_answer_id: self.accepted_answer_id,
            created_at: self.created_at?,
            body: self.body?,
            tags: self.tags.as_deref().map(parse_tags).unwrap_or_default(),
            view_count: self.view_count,
        })
    }
}

/// Dump timestamps have no zone designator and are UTC.
pub fn parse_timestamp(value: &str) -> Option<DateTime<Utc>> {
    if let Ok(naive) = NaiveDateTime::parse_from_str(value, "%Y-%m-%dT%H:%M:%S%.f") {
        return Some(naive.and_utc());
    }
    DateTime::parse_from_rfc3339(value)
        .ok()
        .map(|dt| dt.with_timezone(&Utc))
}

/// Decode a `Tags` attribute. Accepts both `<a><b>` and `|a|b|` encodings.
pub fn parse_tags(raw: &str) -> Vec<String> {
    raw.split(['<', '>', '|'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(?:https?|ftp)://\S+").expect("valid url regex"));

const DROPPED_BLOCKS: [&str; 2] = ["code", "pre"];

const BLOCK_TAGS: [&str; 20] = [
    "p",
    "br",
    "div",
    "li",
    "ul",
    "ol",
    "blockquote",
    "hr",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "table",
    "tr",
    "td",
    "th",
    "dl",
    "dd",
];

/// Reduce a post body to plain prose.
///
/// `<code>` and `<pre>` blocks are dropped with their content, every other tag
/// is dropped while its inner text is kept, URLs are removed and whitespace is
/// collapsed. An open tag with no closing `>` swallows the rest of the input.
pub fn strip_body(body_html: &str) -> String {
    let without_tags = remove_markup(body_html);
    let decoded = decode_entities(&without_tags);
    let without_urls = URL_RE.replace_all(&decoded, " ");
    collapse_whitespace(&without_urls)
}

fn remove_markup(html: &str) -> String {
    let mut out = String::with_capacity(html.len());
    let mut rest = html;
    while let Some(pos) = rest.find('<') {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        let next = tail[1..].chars().next();
        let looks_like_tag = matches!(next, Some(c) if c.is_ascii_alphabetic() || c == '/' || c == '!' || c == '?');
        if !looks_like_tag {
            out.push('<');
            rest = &tail[1..];
            continue;
        }
        let Some(close) = tail.find('>') else {
            // unterminated tag runs to end of input
            rest = "";
            break;
        };
        let name = tag_name(&tail[1..close]);
        let is_closing = tail[1..].starts_with('/');
        if !is_closing && DROPPED_BLOCKS.contains(&name.as_str()) {
            let end_marker = format!("</{name}");
            let after_open = &tail[close + 1..];
            match find_ascii_ci(after_open, &end_marker) {
                Some(end) => {
                    let after_end = &after_open[end..];
                    match after_end.find('>') {
                        Some(gt) => rest = &after_end[gt + 1..],
                        None => rest = "",
                    }
                }
                None => rest = "",
            }
            out.push(' ');
            continue;
        }
        if BLOCK_TAGS.contains(&name.as_str()) {
            out.push(' ');
        }
        rest = &tail[close + 1..];
    }
    out.push_str(rest);
    defuse_angle_brackets(out)
}

/// A kept `<` may end up right before a letter once the markup after it is
/// gone (`<<a>b`); separate them so the output never reads as a tag.
fn defuse_angle_brackets(text: String) -> String {
    if !text.contains('<') {
        return text;
    }
    let mut out = String::with_capacity(text.len() + 4);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        if c == '<' && chars.peek().is_some_and(|n| n.is_ascii_alphabetic() || matches!(n, '/' | '!' | '?')) {
            out.push(' ');
        }
    }
    out
}

fn tag_name(inner: &str) -> String {
    inner
        .trim_start_matches('/')
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

fn find_ascii_ci(haystack: &str, needle: &str) -> Option<usize> {
    let hay = haystack.as_bytes();
    let needle = needle.as_bytes();
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()].eq_ignore_ascii_case(needle))
}

/// Decodes the common entities that cannot reintroduce markup. `&lt;`, `&gt;`
/// and `&amp;` are left alone so that stripping stays idempotent.
fn decode_entities(text: &str) -> String {
    const ENTITIES: [(&str, &str); 6] = [
        ("&quot;", "\""),
        ("&#39;", "'"),
        ("&#x27;", "'"),
        ("&apos;", "'"),
        ("&nbsp;", " "),
        ("&#160;", " "),
    ];
    if !text.contains('&') {
        return text.to_string();
    }
    let mut out = text.to_string();
    for (entity, replacement) in ENTITIES {
        if out.contains(entity) {
            out = out.replace(entity, replacement);
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

struct AcceptedLink {
    question_id: PostId,
    tags: Vec<String>,
}

fn for_each_line(path: &Path, mut f: impl FnMut(&str)) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io(path, e))?;
        if n == 0 {
            return Ok(());
        }
        // invalid UTF-8 rows are handed on lossily and then fail row decoding
        let line = String::from_utf8_lossy(&buf);
        f(&line);
    }
}

/// Stream the posts retained from a dump into `sink`, returning the counters.
///
/// A question is retained when it carries between one and five tags and, if a
/// filter is given, at least one of them is in the filter. An answer is
/// retained when its id is the `AcceptedAnswerId` of a retained question; it
/// inherits that question's tags.
pub fn stream_dump(
    path: &Path,
    tag_filter: Option<&BTreeSet<String>>,
    mut sink: impl FnMut(Post),
) -> Result<DumpStats> {
    let mut stats = DumpStats::default();
    let mut accepted: HashMap<PostId, AcceptedLink> = HashMap::new();
    let mut seen_questions: BTreeSet<PostId> = BTreeSet::new();

    for_each_line(path, |line| {
        let row = match classify_line(line) {
            Line::Structural => return,
            Line::Malformed => {
                stats.total_rows += 1;
                return;
            }
            Line::Row(row) => row,
        };
        stats.total_rows += 1;
        if row.post_type != 1 || row.tags.is_empty() || row.tags.len() > MAX_TAGS {
            return;
        }
        if let Some(filter) = tag_filter {
            if !row.tags.iter().any(|t| filter.contains(t)) {
                return;
            }
        }
        if !seen_questions.insert(row.id) {
            return;
        }
        if let Some(answer_id) = row.accepted_answer_id {
            accepted.insert(
                answer_id,
                AcceptedLink {
                    question_id: row.id,
                    tags: row.tags.clone(),
                },
            );
        }
        stats.questions_kept += 1;
        sink(Post {
            id: row.id,
            kind: PostKind::Question,
            parent_id: None,
            created_at: row.created_at,
            body_text: strip_body(&row.body),
            body_html: row.body,
            tags: row.tags,
            view_count: Some(row.view_count.unwrap_or(0)),
            has_accepted_answer: Some(row.accepted_answer_id.is_some()),
        });
    })?;

    for_each_line(path, |line| {
        let Line::Row(row) = classify_line(line) else {
            return;
        };
        if row.post_type != 2 {
            return;
        }
        let Some(link) = accepted.remove(&row.id) else {
            return;
        };
        if row.parent_id.is_some_and(|p| p != link.question_id) {
            return;
        }
        stats.accepted_answers_kept += 1;
        sink(Post {
            id: row.id,
            kind: PostKind::AcceptedAnswer,
            parent_id: Some(link.question_id),
            created_at: row.created_at,
            body_text: strip_body(&row.body),
            body_html: row.body,
            tags: link.tags,
            view_count: None,
            has_accepted_answer: None,
        });
    })?;

    stats.rows_skipped = stats.total_rows - stats.questions_kept - stats.accepted_answers_kept;
    Ok(stats)
}

/// Collect every retained post. Questions come first in file order, followed
/// by accepted answers in file order.
pub fn parse_dump(path: &Path, tag_filter: Option<&BTreeSet<String>>) -> Result<(Vec<Post>, DumpStats)> {
    let mut posts = Vec::new();
    let stats = stream_dump(path, tag_filter, |p| posts.push(p))?;
    Ok((posts, stats))
}

/// Single pass over the dump yielding the tag list of every well-formed question.
pub fn scan_question_tags(path: &Path, mut sink: impl FnMut(&[String])) -> Result<()> {
    for_each_line(path, |line| {
        if let Line::Row(row) = classify_line(line) {
            if row.post_type == 1 && !row.tags.is_empty() && row.tags.len() <= MAX_TAGS {
                sink(&row.tags);
            }
        }
    })
}

pub fn write_posts(path: &Path, posts: &[Post]) -> Result<()> {
    crate::io::write_jsonl(path, posts)
}

pub fn read_posts(path: &Path) -> Result<Vec<Post>> {
    crate::io::read_jsonl(path)
}
