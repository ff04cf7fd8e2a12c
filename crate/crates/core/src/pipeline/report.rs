//! The summary report: every existing artifact rendered as a table, as JSON
//! and as Markdown. Nothing is recomputed; missing artifacts are skipped.

use std::io::BufRead;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::*;
use crate::classify::CvResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn key_value(rows: Vec<(String, String)>) -> Self {
        Self {
            columns: vec!["field".into(), "value".into()],
            rows: rows.into_iter().map(|(k, v)| vec![k, v]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSection {
    pub title: String,
    /// Artifact the section was read from.
    pub source: String,
    pub table: Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub sections: Vec<ReportSection>,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "undefined".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flatten nested JSON objects into dotted keys; arrays of scalars are
/// joined with spaces.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(" ")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv_table(path: &Path, keep: impl Fn(&csv::StringRecord) -> bool) -> Result<Table> {
    let mut reader = crate::io::csv_reader(path)?;
    let columns = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if keep(&record) {
            rows.push(record.iter().map(str::to_string).collect());
        }
    }
    Ok(Table { columns, rows })
}

struct Builder<'a> {
    pipeline: &'a Pipeline,
    sections: Vec<ReportSection>,
    inputs: Vec<PathBuf>,
}

impl Builder<'_> {
    fn add(&mut self, artifact: Artifact, title: &str, read: impl FnOnce(&Path) -> Result<Table>) -> Result<()> {
        let path = self.pipeline.path(artifact);
        if !path.is_file() {
            return Ok(());
        }
        let table = read(&path)?;
        self.sections.push(ReportSection {
            title: title.to_string(),
            source: artifact.file.to_string(),
            table,
        });
        self.inputs.push(path);
        Ok(())
    }
}

fn json_table(path: &Path) -> Result<Table> {
    let value: Value = read_json(path)?;
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    Ok(Table::key_value(rows))
}

pub(super) fn build(pipeline: &Pipeline) -> Result<(Report, Vec<PathBuf>)> {
    let mut b = Builder {
        pipeline,
        sections: Vec::new(),
        inputs: Vec::new(),
    };
    b.add(INGEST_STATS, "Dump ingestion", json_table)?;
    b.add(TAGS, "Selected tags", |p| {
        csv_table(p, |r| r.get(5) == Some("true"))
    })?;
    b.add(SENTENCES, "Sentences", |p| {
        let file = std::fs::File::open(p).map_err(|e| Error::io(p, e))?;
        let mut n = 0usize;
        for line in std::io::BufReader::new(file).lines() {
            n += usize::from(!line.map_err(|e| Error::io(p, e))?.trim().is_empty());
        }
        Ok(Table::key_value(vec![("sentences".into(), n.to_string())]))
    })?;
    b.add(AGREEMENT, "Inter-rater agreement", json_table)?;
    b.add(CV, "Cross-validation (mean over folds)", |p| {
        let cv: CvResult = read_json(p)?;
        let mut columns: Vec<String> = ["chosen", "lambda", "learning_rate", "epochs"].map(String::from).to_vec();
        columns.extend(EvalReport::CSV_HEADER.split(',').map(String::from));
        let rows = cv
            .grid
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut row = vec![
                    if i == cv.chosen { "*" } else { "" }.to_string(),
                    fmt_f64(g.hyperparams.lambda),
                    fmt_f64(g.hyperparams.learning_rate),
                    g.hyperparams.epochs.to_string(),
                ];
                row.extend(g.mean.to_csv_row().split(',').map(String::from));
                row
            })
            .collect();
        Ok(Table { columns, rows })
    })?;
    b.add(EVAL, "Evaluation", json_table)?;
    b.add(COHERENCE, "Topic coherence by K", |p| csv_table(p, |_| true))?;
    b.add(TOPIC_MODEL, "Topics (top 10 words)", |p| {
        let summary: TopicModelSummary = read_json(p)?;
        Ok(Table {
            columns: vec!["topic".into(), "top_words".into()],
            rows: summary
                .topics
                .iter()
                .map(|t| {
                    let words: Vec<&str> = t.top_words.iter().take(10).map(|w| w.term.as_str()).collect();
                    vec![t.topic.to_string(), words.join(" ")]
                })
                .collect(),
        })
    })?;
    b.add(TREND_TOPICS, "New sentences per topic per half-year", |p| csv_table(p, |_| true))?;
    b.add(TREND_CATEGORIES, "New sentences per category per half-year", |p| csv_table(p, |_| true))?;
    b.add(GROWTH, "Relative growth of security sentences", |p| csv_table(p, |_| true))?;
    b.add(POPULARITY, "Topic popularity and difficulty", |p| csv_table(p, |_| true))?;
    b.add(DISCOVERABILITY, "Discoverability through security tags", json_table)?;
    let report = Report {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        sections: b.sections,
    };
    Ok((report, b.inputs))
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

impl Report {
    pub fn section(&self, title: &str) -> Option<&ReportSection> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {} report\n\n", self.tool);
        if self.sections.is_empty() {
            out.push_str("No artifacts found.\n");
        }
        for s in &self.sections {
            out.push_str(&format!("## {}\n\nSource: `{}`\n\n", s.title, s.source));
            let cols: Vec<String> = s.table.columns.iter().map(|c| md_cell(c)).collect();
            out.push_str(&format!("| {} |\n", cols.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(cols.len())));
            for row in &s.table.rows {
                let cells: Vec<String> = row.iter().map(|c| md_cell(c)).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_nested_json() {
        let v: Value = serde_json::json!({"a": {"b": 1, "c": null}, "d": [1, 2], "e": [{"f": "x"}]});
        let mut rows = Vec::new();
        flatten("", &v, &mut rows);
        assert_eq!(
            rows,
            [("a.b", "1"), ("a.c", "undefined"), ("d", "1 2"), ("e.0.f", "x")]
                .map(|(k, v)| (k.to_string(), v.to_string()))
        );
    }

    #[test]
    fn empty_workdir_gives_empty_report() {
        let dir = tempfile::tempdir().unwrap();
        let p = Pipeline::new(dir.path(), PipelineConfig::default()).unwrap();
        let r = p.report().unwrap();
        assert!(r.sections.is_empty());
        assert!(r.to_markdown().contains("No artifacts found."));
        assert!(p.path(REPORT_MD).is_file());
    }

    #[test]
    fn markdown_escapes_pipes() {
        let r = Report {
            tool: "t".into(),
            version: "0".into(),
            sections: vec![ReportSection {
                title: "S".into(),
                source: "s.csv".into(),
                table: Table {
                    columns: vec!["a".into()],
                    rows: vec![vec!["x|y".into()]],
                },
            }],
        };
        assert!(r.to_markdown().contains("| x\\|y |"));
    }
}
