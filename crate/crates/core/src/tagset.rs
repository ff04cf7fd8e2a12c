//! Expansion of a seed tag set into the final domain tag set.
//!
//! Let `P` be the questions carrying at least one seed tag and `D` every
//! question in the dump. For each tag `t` seen on a question of `P`:
//!
//! * significance `mu(t) = |{q in P : t in q}| / |{q in D : t in q}|`
//! * relevance `nu(t) = |{q in P : t in q}| / |P|`
//!
//! A tag is selected when both ratios reach their thresholds. Seed tags are
//! always selected.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagStats {
    pub tag: String,
    pub count_in_p: u64,
    pub count_in_dump: u64,
    pub significance_mu: f64,
    pub relevance_nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TagSetConfig {
    pub seed_tags: Vec<String>,
    /// Any tag containing this substring (case-insensitive) also counts as a seed.
    pub seed_substring: Option<String>,
    pub mu_threshold: f64,
    pub nu_threshold: f64,
}

impl Default for TagSetConfig {
    fn default() -> Self {
        Self {
            seed_tags: vec!["iot".into(), "arduino".into(), "raspberry-pi".into()],
            seed_substring: Some("iot".into()),
            mu_threshold: 0.3,
            nu_threshold: 0.001,
        }
    }
}

impl TagSetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seed_tags.is_empty() && self.seed_substring.is_none() {
            return Err(Error::InvalidInput("seed_tags must not be empty".into()));
        }
        for (name, v) in [("mu_threshold", self.mu_threshold), ("nu_threshold", self.nu_threshold)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    pub fn is_seed(&self, tag: &str) -> bool {
        let tag = tag.to_lowercase();
        if self.seed_tags.iter().any(|s| s.eq_ignore_ascii_case(&tag)) {
            return true;
        }
        self.seed_substring
            .as_deref()
            .is_some_and(|sub| !sub.is_empty() && tag.contains(&sub.to_lowercase()))
    }
}

/// Compute significance and relevance for every tag co-occurring with a seed
/// tag. `questions` must enumerate the tag lists of all questions of the dump;
/// the seed-tagged subset is derived from it in the same pass.
pub fn compute_tag_stats<I, T>(questions: I, cfg: &TagSetConfig) -> Result<Vec<TagStats>>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[String]>,
{
    cfg.validate()?;
    let mut in_dump: BTreeMap<String, u64> = BTreeMap::new();
    let mut in_p: BTreeMap<String, u64> = BTreeMap::new();
    let mut p_size = 0u64;

    for tags in questions {
        // a question listing the same tag twice still counts once
        let distinct: BTreeSet<&str> = tags.as_ref().iter().map(String::as_str).collect();
        let seeded = distinct.iter().any(|t| cfg.is_seed(t));
        if seeded {
            p_size += 1;
        }
        for tag in distinct {
            *in_dump.entry(tag.to_string()).or_default() += 1;
            if seeded {
                *in_p.entry(tag.to_string()).or_default() += 1;
            }
        }
    }
    if p_size == 0 {
        return Err(Error::NoSeedMatches);
    }

    Ok(in_p
        .into_iter()
        .map(|(tag, count_in_p)| {
            let count_in_dump = in_dump[&tag];
            TagStats {
                significance_mu: count_in_p as f64 / count_in_dump as f64,
                relevance_nu: count_in_p as f64 / p_size as f64,
                tag,
                count_in_p,
                count_in_dump,
            }
        })
        .collect())
}

/// Threshold comparisons are inclusive.
pub fn passes_thresholds(stats: &TagStats, cfg: &TagSetConfig) -> bool {
    stats.significance_mu >= cfg.mu_threshold && stats.relevance_nu >= cfg.nu_threshold
}

/// `{t : mu(t) >= mu_threshold and nu(t) >= nu_threshold}` plus every seed tag.
pub fn select_final_tags(stats: &[TagStats], cfg: &TagSetConfig) -> BTreeSet<String> {
    let mut selected: BTreeSet<String> = cfg.seed_tags.iter().map(|t| t.to_lowercase()).collect();
    for s in stats {
        if passes_thresholds(s, cfg) || cfg.is_seed(&s.tag) {
            selected.insert(s.tag.clone());
        }
    }
    selected
}

#[derive(Debug, Serialize, Deserialize)]
struct TagRow {
    tag: String,
    count_in_p: u64,
    count_in_dump: u64,
    mu: f64,
    nu: f64,
    selected: bool,
}

/// Writes `tag,count_in_p,count_in_dump,mu,nu,selected` sorted by tag.
/// Explicit seed tags never seen in the dump get a row with zero counts.
pub fn write_tag_csv(path: &Path, stats: &[TagStats], cfg: &TagSetConfig) -> Result<()> {
    let selected = select_final_tags(stats, cfg);
    let mut rows: BTreeMap<&str, TagRow> = stats
        .iter()
        .map(|s| {
            (
                s.tag.as_str(),
                TagRow {
                    tag: s.tag.clone(),
                    count_in_p: s.count_in_p,
                    count_in_dump: s.count_in_dump,
                    mu: s.significance_mu,
                    nu: s.relevance_nu,
                    selected: selected.contains(&s.tag),
                },
            )
        })
        .collect();
    for tag in &selected {
        rows.entry(tag.as_str()).or_insert_with(|| TagRow {
            tag: tag.clone(),
            count_in_p: 0,
            count_in_dump: 0,
            mu: 0.0,
            nu: 0.0,
            selected: true,
        });
    }
    let mut w = crate::io::csv_writer(path)?;
    for row in rows.values() {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read back the selected tags of a tag CSV.
pub fn read_selected_tags(path: &Path) -> Result<BTreeSet<String>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = BTreeSet::new();
    for row in r.deserialize() {
        let row: TagRow = row?;
        if row.selected {
            out.insert(row.tag);
        }
    }
    Ok(out)
}
