//! Topic evolution over time, topic popularity and difficulty, and how many
//! security sentences are reachable through security tags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{Sentence, SentenceId};
use crate::error::{Error, Result};
use crate::ingest::{Post, PostId};
use crate::io::{fmt_f64, fmt_opt};
use crate::topics::TopicId;

/// The security tags searched by default when measuring discoverability.
pub const DEFAULT_SECURITY_TAGS: [&str; 9] = [
    "security",
    "ssh",
    "ssl",
    "passwords",
    "authentication",
    "authorization",
    "encryption",
    "cryptography",
    "hash",
];

pub fn default_security_tags() -> Vec<String> {
    DEFAULT_SECURITY_TAGS.iter().map(|s| s.to_string()).collect()
}

/// User-supplied category of every topic (e.g. Software, Network, Hardware).
pub type TopicCategoryMap = BTreeMap<TopicId, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    Topic,
    Category,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrendGroup {
    Topic(TopicId),
    Category(String),
}

impl fmt::Display for TrendGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Topic(t) => write!(f, "{t}"),
            Self::Category(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendBucket {
    pub bucket_start: NaiveDate,
    pub group: TrendGroup,
    pub count: u64,
}

/// January 1 or July 1 of the half-year containing `t` (UTC).
pub fn half_year_start(t: DateTime<Utc>) -> NaiveDate {
    let month = if t.month() <= 6 { 1 } else { 7 };
    NaiveDate::from_ymd_opt(t.year(), month, 1).expect("valid date")
}

fn next_half_year(d: NaiveDate) -> NaiveDate {
    if d.month() == 1 {
        NaiveDate::from_ymd_opt(d.year(), 7, 1)
    } else {
        NaiveDate::from_ymd_opt(d.year() + 1, 1, 1)
    }
    .expect("valid date")
}

/// New sentences per group per half-year. Every group that occurs gets a row
/// for every half-year between the first and the last occupied one, with
/// count 0 where nothing was created.
pub fn absolute_impact(
    assignments: &BTreeMap<SentenceId, TopicId>,
    sentences: &[Sentence],
    categories: Option<&TopicCategoryMap>,
    granularity: Granularity,
) -> Result<Vec<TrendBucket>> {
    let mut counts: BTreeMap<(NaiveDate, TrendGroup), u64> = BTreeMap::new();
    let mut groups = BTreeSet::new();
    for s in sentences {
        let topic = *assignments
            .get(&s.id)
            .ok_or_else(|| Error::InvalidInput(format!("sentence {} has no topic assignment", s.id)))?;
        let group = match granularity {
            Granularity::Topic => TrendGroup::Topic(topic),
            Granularity::Category => {
                let map = categories
                    .ok_or_else(|| Error::InvalidInput("category granularity needs a topic category map".into()))?;
                TrendGroup::Category(
                    map.get(&topic)
                        .ok_or_else(|| Error::InvalidInput(format!("topic {topic} has no category")))?
                        .clone(),
                )
            }
        };
        groups.insert(group.clone());
        *counts.entry((half_year_start(s.created_at), group)).or_default() += 1;
    }
    let (Some(first), Some(last)) = (counts.keys().next(), counts.keys().next_back()) else {
        return Ok(Vec::new());
    };
    let (first, last) = (first.0, last.0);
    let mut out = Vec::new();
    let mut bucket = first;
    while bucket <= last {
        for g in &groups {
            out.push(TrendBucket {
                bucket_start: bucket,
                group: g.clone(),
                count: counts.get(&(bucket, g.clone())).copied().unwrap_or(0),
            });
        }
        bucket = next_half_year(bucket);
    }
    Ok(out)
}

pub fn write_trend_csv(path: &Path, buckets: &[TrendBucket]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["bucket_start", "group", "count"])?;
    for b in buckets {
        w.write_record([b.bucket_start.to_string(), b.group.to_string(), b.count.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// A calendar month, rendered `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn of(t: DateTime<Utc>) -> Self {
        Self {
            year: t.year(),
            month: t.month(),
        }
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Number of sentences created in each month.
pub fn monthly_counts<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> BTreeMap<YearMonth, u64> {
    let mut out = BTreeMap::new();
    for s in sentences {
        *out.entry(YearMonth::of(s.created_at)).or_default() += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub month: YearMonth,
    pub security: u64,
    pub total: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub points: Vec<GrowthPoint>,
    /// Months left out because no sentences at all were created in them.
    pub omitted: Vec<YearMonth>,
}

/// Share of each month's new sentences that are security sentences.
///
/// A month with a security count larger than its total is inconsistent input
/// and rejected.
pub fn relative_growth(
    security: &BTreeMap<YearMonth, u64>,
    total: &BTreeMap<YearMonth, u64>,
) -> Result<GrowthSeries> {
    let months: BTreeSet<YearMonth> = security.keys().chain(total.keys()).copied().collect();
    let mut series = GrowthSeries::default();
    for month in months {
        let sec = security.get(&month).copied().unwrap_or(0);
        let all = total.get(&month).copied().unwrap_or(0);
        if sec > all {
            return Err(Error::InvalidInput(format!(
                "{month}: {sec} security sentences exceed the total of {all}"
            )));
        }
        if all == 0 {
            series.omitted.push(month);
            continue;
        }
        series.points.push(GrowthPoint {
            month,
            security: sec,
            total: all,
            ratio: sec as f64 / all as f64,
        });
    }
    Ok(series)
}

pub fn write_growth_csv(path: &Path, series: &GrowthSeries) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["month", "security", "total", "ratio"])?;
    for p in &series.points {
        w.write_record([p.month.to_string(), p.security.to_string(), p.total.to_string(), fmt_f64(p.ratio)])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularityDifficulty {
    pub topic: TopicId,
    pub question_count: u64,
    pub avg_view_count: Option<f64>,
    pub pct_without_accepted: Option<f64>,
}

/// Per-topic popularity (mean view count) and difficulty (share without an
/// accepted answer) of the questions whose sentences fall in the topic.
///
/// Only question sentences count. A question with sentences in several
/// topics counts once toward each of them. Every topic in `0..k` gets a row.
pub fn popularity_difficulty(
    assignments: &BTreeMap<SentenceId, TopicId>,
    sentences: &[Sentence],
    posts: &[Post],
    k: usize,
) -> Result<Vec<PopularityDifficulty>> {
    let by_id: BTreeMap<PostId, &Post> = posts.iter().map(|p| (p.id, p)).collect();
    let mut members: Vec<BTreeSet<PostId>> = vec![BTreeSet::new(); k];
    for s in sentences.iter().filter(|s| s.is_question) {
        let Some(&topic) = assignments.get(&s.id) else {
            continue;
        };
        members
            .get_mut(topic)
            .ok_or(Error::OutOfRange { index: topic, len: k })?
            .insert(s.post_id);
    }
    members
        .into_iter()
        .enumerate()
        .map(|(topic, qs)| {
            let mut views = 0u64;
            let mut unanswered = 0u64;
            for id in &qs {
                let post = by_id
                    .get(id)
                    .ok_or_else(|| Error::InvalidInput(format!("question {id} not found among posts")))?;
                views += post.view_count.unwrap_or(0);
                unanswered += u64::from(post.has_accepted_answer != Some(true));
            }
            let n = qs.len() as u64;
            Ok(PopularityDifficulty {
                topic,
                question_count: n,
                avg_view_count: (n > 0).then(|| views as f64 / n as f64),
                pct_without_accepted: (n > 0).then(|| unanswered as f64 / n as f64),
            })
        })
        .collect()
}

pub fn write_popularity_csv(path: &Path, rows: &[PopularityDifficulty]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["topic", "questions", "avg_views", "pct_without_accepted"])?;
    for r in rows {
        w.write_record([
            r.topic.to_string(),
            r.question_count.to_string(),
            fmt_opt(r.avg_view_count),
            fmt_opt(r.pct_without_accepted),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Fraction of security sentences whose post carries at least one of
/// `security_tags` (compared case-insensitively). `None` when there are no
/// sentences.
pub fn discoverability(security_sentences: &[Sentence], security_tags: &[String]) -> Result<Option<f64>> {
    if security_tags.is_empty() {
        return Err(Error::InvalidInput("security tag list is empty".into()));
    }
    let wanted: BTreeSet<String> = security_tags.iter().map(|t| t.to_lowercase()).collect();
    if security_sentences.is_empty() {
        return Ok(None);
    }
    let found = security_sentences
        .iter()
        .filter(|s| s.tags.iter().any(|t| wanted.contains(&t.to_lowercase())))
        .count();
    Ok(Some(found as f64 / security_sentences.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn sentence(post: PostId, date: (i32, u32, u32), tags: &[&str], is_question: bool) -> Sentence {
        Sentence {
            id: SentenceId::new(post, 0),
            post_id: post,
            text: String::new(),
            created_at: Utc.with_ymd_and_hms(date.0, date.1, date.2, 12, 0, 0).unwrap(),
            tags: tags.iter().map(|s| s.to_string()).collect(),
            is_question,
        }
    }

    fn date(y: i32, m: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, 1).unwrap()
    }

    #[test]
    fn half_year_buckets() {
        let ss = vec![
            sentence(1, (2019, 2, 1), &[], true),
            sentence(2, (2019, 3, 15), &[], true),
            sentence(3, (2019, 8, 1), &[], true),
        ];
        let a = ss.iter().map(|s| (s.id, 0)).collect();
        let b = absolute_impact(&a, &ss, None, Granularity::Topic).unwrap();
        assert_eq!(
            b,
            vec![
                TrendBucket {
                    bucket_start: date(2019, 1),
                    group: TrendGroup::Topic(0),
                    count: 2
                },
                TrendBucket {
                    bucket_start: date(2019, 7),
                    group: TrendGroup::Topic(0),
                    count: 1
                },
            ]
        );
        assert!(absolute_impact(&BTreeMap::new(), &[], None, Granularity::Topic).unwrap().is_empty());
    }

    #[test]
    fn gaps_are_filled_and_categories_merge_topics() {
        let ss = vec![sentence(1, (2018, 1, 5), &[], true), sentence(2, (2019, 12, 31), &[], true)];
        let a: BTreeMap<_, _> = [(ss[0].id, 0), (ss[1].id, 1)].into();
        let map: TopicCategoryMap = [(0, "Network".to_string()), (1, "Network".to_string())].into();
        let b = absolute_impact(&a, &ss, Some(&map), Granularity::Category).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().map(|x| x.count).collect::<Vec<_>>(), [1, 0, 0, 1]);
        assert_eq!(b[3].bucket_start, date(2019, 7));
    }

    #[test]
    fn unassigned_or_uncategorized_sentence_is_an_error() {
        let ss = vec![sentence(1, (2018, 1, 5), &[], true)];
        assert!(absolute_impact(&BTreeMap::new(), &ss, None, Granularity::Topic).is_err());
        let a = [(ss[0].id, 3)].into();
        assert!(absolute_impact(&a, &ss, Some(&TopicCategoryMap::new()), Granularity::Category).is_err());
    }

    #[test]
    fn relative_growth_ratios() {
        let m = |month| YearMonth { year: 2020, month };
        let sec = [(m(1), 5), (m(2), 0)].into();
        let all = [(m(1), 50), (m(2), 50), (m(3), 0)].into();
        let g = relative_growth(&sec, &all).unwrap();
        assert_eq!(g.points.iter().map(|p| p.ratio).collect::<Vec<_>>(), [0.1, 0.0]);
        assert_eq!(g.omitted, [m(3)]);
        assert!(relative_growth(&[(m(1), 6)].into(), &[(m(1), 5)].into()).is_err());
    }

    fn question(id: PostId, views: u64, accepted: bool) -> Post {
        Post {
            id,
            kind: crate::ingest::PostKind::Question,
            parent_id: None,
            created_at: Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap(),
            tags: vec![],
            body_html: String::new(),
            body_text: String::new(),
            view_count: Some(views),
            has_accepted_answer: Some(accepted),
        }
    }

    #[test]
    fn popularity_and_difficulty() {
        let posts = vec![question(1, 10, true), question(2, 30, false), question(3, 5, false), question(4, 7, true)];
        let mut ss: Vec<Sentence> = (1..=4).map(|i| sentence(i, (2020, 1, 1), &[], true)).collect();
        let mut extra = sentence(1, (2020, 1, 1), &[], true);
        extra.id = SentenceId::new(1, 1);
        ss.push(extra);
        let mut answer = sentence(99, (2020, 1, 1), &[], false);
        answer.id = SentenceId::new(99, 0);
        ss.push(answer);
        let a: BTreeMap<_, _> = [
            (SentenceId::new(1, 0), 0),
            (SentenceId::new(2, 0), 0),
            (SentenceId::new(3, 0), 1),
            (SentenceId::new(4, 0), 1),
            (SentenceId::new(1, 1), 1),
            (SentenceId::new(99, 0), 2),
        ]
        .into();
        let rows = popularity_difficulty(&a, &ss, &posts, 3).unwrap();
        assert_eq!(rows[0].question_count, 2);
        assert_eq!(rows[0].avg_view_count, Some(20.0));
        assert_eq!(rows[0].pct_without_accepted, Some(0.5));
        assert_eq!(rows[1].question_count, 3);
        assert_eq!(rows[2].question_count, 0);
        assert_eq!(rows[2].avg_view_count, None);
    }

    #[test]
    fn discoverability_bounds() {
        let tagged: Vec<Sentence> = (0..4).map(|i| sentence(i, (2020, 1, 1), &["Security", "iot"], true)).collect();
        let untagged: Vec<Sentence> = (0..4).map(|i| sentence(i, (2020, 1, 1), &["iot"], true)).collect();
        let tags = default_security_tags();
        assert_eq!(discoverability(&tagged, &tags).unwrap(), Some(1.0));
        assert_eq!(discoverability(&untagged, &tags).unwrap(), Some(0.0));
        assert_eq!(discoverability(&[], &tags).unwrap(), None);
        assert!(discoverability(&tagged, &[]).is_err());
    }
}
