//! Synthetic fixtures shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secmine::corpus::Vocabulary;

/// Corpus with planted topics: `topics` disjoint word families of
/// `vocab_size / topics` words each. Every document is generated from one
/// family, drawing a word from its family with probability `purity` and
/// uniformly from the whole vocabulary otherwise.
pub struct PlantedCorpus {
    pub docs: Vec<Vec<u32>>,
    pub truth: Vec<usize>,
    pub vocab: Vocabulary,
}

pub fn planted_corpus(topics: usize, docs: usize, vocab_size: usize, doc_len: usize, purity: f64, seed: u64) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = vocab_size / topics;
    let mut out = Vec::with_capacity(docs);
    let mut truth = Vec::with_capacity(docs);
    for d in 0..docs {
        let t = d % topics;
        let doc = (0..doc_len)
            .map(|_| {
                if rng.gen::<f64>() < purity {
                    (t * family + rng.gen_range(0..family)) as u32
                } else {
                    rng.gen_range(0..vocab_size) as u32
                }
            })
            .collect();
        out.push(doc);
        truth.push(t);
    }
    PlantedCorpus {
        docs: out,
        truth,
        vocab: Vocabulary::from_counts((0..vocab_size).map(|i| (format!("w{i:03}"), 1))),
    }
}

/// Fraction of documents whose assigned topic maps to their generating topic
/// under the best one-to-one relabeling (brute force over permutations).
pub fn best_permutation_accuracy(assigned: &[usize], truth: &[usize], k: usize) -> f64 {
    fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.clone();
            let head = rest.remove(i);
            for mut p in permutations(rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }
    let mut best = 0;
    for perm in permutations((0..k).collect()) {
        let hits = assigned.iter().zip(truth).filter(|&(&a, &t)| perm.get(a) == Some(&t)).count();
        best = best.max(hits);
    }
    best as f64 / truth.len() as f64
}

// ---------------------------------------------------------------------------
// Metric oracles

/// Precision, recall, F1, accuracy and MCC counted directly from label pairs
/// with their textbook formulas; `None` where a denominator is zero.
pub fn oracle_metrics(predicted: &[bool], gold: &[bool]) -> [Option<f64>; 5] {
    let count = |p: bool, g: bool| predicted.iter().zip(gold).filter(|&(&a, &b)| a == p && b == g).count() as u64;
    let (tp, fp, fn_, tn) = (count(true, true), count(true, false), count(false, true), count(false, false));
    let div = |a: u64, b: u64| if b == 0 { None } else { Some(a as f64 / b as f64) };
    let precision = div(tp, tp + fp);
    let recall = div(tp, tp + fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    let accuracy = div(tp + tn, tp + fp + fn_ + tn);
    let (tp, fp, fn_, tn) = (tp as f64, fp as f64, fn_ as f64, tn as f64);
    let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    let mcc = if den > 0.0 { Some((tp * tn - fp * fn_) / den.sqrt()) } else { None };
    [precision, recall, f1, accuracy, mcc]
}

/// AUC by enumerating every (positive, negative) pair; ties count one half.
pub fn pair_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        for (j, &lj) in labels.iter().enumerate() {
            if li && !lj {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Pearson correlation of average ranks, computed the long way.
pub fn rank_then_pearson(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        v.iter()
            .map(|&a| {
                let below = v.iter().filter(|&&b| b < a).count() as f64;
                let equal = v.iter().filter(|&&b| b == a).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

// ---------------------------------------------------------------------------
// Coherence oracle

/// c_v evaluated straight from its definition: materialize every boolean
/// window as a word set, estimate probabilities by scanning all windows,
/// build NPMI context vectors over the top words and compare each word's
/// vector with the sum vector by cosine similarity.
pub fn brute_force_cv(top_words: &[u32], docs: &[Vec<u32>], window: usize) -> f64 {
    const EPS: f64 = 1e-12;
    let mut windows: Vec<Vec<u32>> = Vec::new();
    for doc in docs {
        if doc.is_empty() {
            continue;
        }
        if doc.len() <= window {
            windows.push(doc.clone());
        } else {
            for start in 0..=doc.len() - window {
                windows.push(doc[start..start + window].to_vec());
            }
        }
    }
    let n = windows.len() as f64;
    let p = |words: &[u32]| windows.iter().filter(|w| words.iter().all(|x| w.contains(x))).count() as f64 / n;
    let npmi = |a: u32, b: u32| {
        let pa = p(&[a]) + EPS;
        let pb = p(&[b]) + EPS;
        let pab = p(&[a, b]) + EPS;
        (pab / (pa * pb)).ln() / -pab.ln()
    };
    let vectors: Vec<Vec<f64>> = top_words
        .iter()
        .map(|&a| top_words.iter().map(|&b| npmi(a, b)).collect())
        .collect();
    let sum: Vec<f64> = (0..top_words.len()).map(|j| vectors.iter().map(|v| v[j]).sum()).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sims: Vec<f64> = vectors
        .iter()
        .map(|v| {
            let dot: f64 = v.iter().zip(&sum).map(|(a, b)| a * b).sum();
            dot / (norm(v) * norm(&sum))
        })
        .collect();
    sims.iter().sum::<f64>() / sims.len() as f64
}

// ---------------------------------------------------------------------------
// Tag-set fixture and oracle

/// A synthetic dump of `n` questions whose tags are drawn from a fixed pool
/// with tag-specific frequencies; roughly a third carry a seed tag.
pub fn synthetic_tag_lists(n: usize, seed: u64) -> Vec<Vec<String>> {
    const POOL: [(&str, f64); 16] = [
        ("iot", 0.20),
        ("arduino", 0.12),
        ("raspberry-pi", 0.10),
        ("aws-iot", 0.03),
        ("mqtt", 0.10),
        ("esp8266", 0.08),
        ("security", 0.06),
        ("ssl", 0.05),
        ("python", 0.25),
        ("javascript", 0.25),
        ("java", 0.20),
        ("sensor", 0.04),
        ("bluetooth", 0.05),
        ("css", 0.10),
        ("zigbee", 0.01),
        ("encryption", 0.04),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut tags: Vec<String> = POOL
                .iter()
                .filter(|(_, p)| rng.gen::<f64>() < *p)
                .map(|(t, _)| t.to_string())
                .take(5)
                .collect();
            if tags.is_empty() {
                tags.push("php".into());
            }
            tags
        })
        .collect()
}

/// Write tag lists as a Posts.xml with one question row per list.
pub fn write_tag_dump(path: &std::path::Path, questions: &[Vec<String>]) {
    let mut xml = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>\n");
    for (i, tags) in questions.iter().enumerate() {
        let escaped: String = tags.iter().map(|t| format!("&lt;{t}&gt;")).collect();
        xml.push_str(&format!(
            "  <row Id=\"{}\" PostTypeId=\"1\" CreationDate=\"2018-03-0{}T12:00:00.000\" Body=\"&lt;p&gt;Question {i}.&lt;/p&gt;\" Tags=\"{escaped}\" />\n",
            i + 1,
            1 + i % 9
        ));
    }
    xml.push_str("</posts>\n");
    std::fs::write(path, xml).unwrap();
}

/// `(count_in_p, count_in_dump, |P|)` per candidate tag, by nested loops: for
/// every tag seen on a seed-tagged question, scan all questions again.
pub fn brute_force_tag_counts(
    questions: &[Vec<String>],
    is_seed: impl Fn(&str) -> bool,
) -> (std::collections::BTreeMap<String, (u64, u64)>, u64) {
    let seeded = |q: &Vec<String>| q.iter().any(|t| is_seed(t));
    let p_size = questions.iter().filter(|q| seeded(q)).count() as u64;
    let mut out = std::collections::BTreeMap::new();
    for q in questions.iter().filter(|q| seeded(q)) {
        for tag in q {
            if out.contains_key(tag) {
                continue;
            }
            let in_p = questions.iter().filter(|q| seeded(q) && q.contains(tag)).count() as u64;
            let in_dump = questions.iter().filter(|q| q.contains(tag)).count() as u64;
            out.insert(tag.clone(), (in_p, in_dump));
        }
    }
    (out, p_size)
}

// ---------------------------------------------------------------------------
// Classification fixture

/// `n` token lists; the positive half contains the planted token `attack`,
/// the negative half never does. All other tokens are filler shared by both.
pub fn planted_signal_docs(n: usize, seed: u64) -> (Vec<Vec<String>>, Vec<bool>) {
    const FILLER: [&str; 24] = [
        "sensor", "board", "device", "firmware", "broker", "message", "reading", "voltage", "pin", "module",
        "network", "server", "client", "packet", "battery", "motor", "relay", "display", "button", "library",
        "config", "update", "signal", "gateway",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let positive = i % 2 == 0;
        let len = rng.gen_range(4..10);
        let mut doc: Vec<String> = (0..len).map(|_| FILLER[rng.gen_range(0..FILLER.len())].to_string()).collect();
        if positive {
            let at = rng.gen_range(0..=doc.len());
            doc.insert(at, "attack".into());
        }
        docs.push(doc);
        labels.push(positive);
    }
    (docs, labels)
}

// ---------------------------------------------------------------------------
// Mini-dump pipeline

pub const MINI_DUMP: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini_dump.xml");
pub const MINI_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini_pipeline.toml");

/// Keyword rule standing in for a human annotator.
pub fn keyword_label(text: &str) -> bool {
    const KEYWORDS: [&str; 14] = [
        "password", "tls", "ssl", "certificate", "attack", "encrypt", "token", "ssh", "private key", "hack",
        "firewall", "signed", "vulnerab", "authentic",
    ];
    let lower = text.to_lowercase();
    KEYWORDS.iter().any(|k| lower.contains(k))
}

// ---------------------------------------------------------------------------
// Trend fixture

pub struct TrendFixture {
    pub posts: Vec<secmine::ingest::Post>,
    pub sentences: Vec<secmine::corpus::Sentence>,
    pub assignments: std::collections::BTreeMap<secmine::corpus::SentenceId, usize>,
    /// Sentences flagged as security-related.
    pub security: Vec<secmine::corpus::Sentence>,
    pub k: usize,
}

/// `n_sentences` sentences spread over questions and accepted answers created
/// between 2014 and 2019, each assigned one of `k` topics; some questions have
/// sentences in several topics.
pub fn trend_fixture(n_sentences: usize, k: usize, seed: u64) -> TrendFixture {
    use chrono::{TimeZone, Utc};
    use secmine::corpus::{Sentence, SentenceId};
    use secmine::ingest::{Post, PostKind};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut posts = Vec::new();
    let mut sentences = Vec::new();
    let mut assignments = std::collections::BTreeMap::new();
    let mut security = Vec::new();
    let mut id = 100;
    while sentences.len() < n_sentences {
        id += 1;
        let is_question = rng.gen::<f64>() < 0.75;
        let created_at = Utc
            .with_ymd_and_hms(
                rng.gen_range(2014..=2019),
                rng.gen_range(1..=12),
                rng.gen_range(1..=28),
                rng.gen_range(0..24),
                0,
                0,
            )
            .unwrap();
        let tags = vec!["iot".to_string()];
        posts.push(Post {
            id,
            kind: if is_question { PostKind::Question } else { PostKind::AcceptedAnswer },
            parent_id: (!is_question).then_some(id - 1),
            created_at,
            tags: tags.clone(),
            body_html: String::new(),
            body_text: String::new(),
            view_count: is_question.then(|| rng.gen_range(0..5000)),
            has_accepted_answer: is_question.then(|| rng.gen::<bool>()),
        });
        let n = rng.gen_range(1..=6).min(n_sentences - sentences.len());
        for seq in 0..n {
            let s = Sentence {
                id: SentenceId::new(id, seq as u32),
                post_id: id,
                text: format!("sentence {seq} of post {id}"),
                created_at,
                tags: tags.clone(),
                is_question,
            };
            assignments.insert(s.id, rng.gen_range(0..k));
            if rng.gen::<f64>() < 0.3 {
                security.push(s.clone());
            }
            sentences.push(s);
        }
    }
    TrendFixture {
        posts,
        sentences,
        assignments,
        security,
        k,
    }
}

/// `n` security sentences of which exactly `tagged` come from posts carrying
/// a security tag (in varying case); the rest carry unrelated tags.
pub fn discoverability_fixture(n: usize, tagged: usize) -> Vec<secmine::corpus::Sentence> {
    use chrono::{TimeZone, Utc};
    let security_tags = ["Security", "ssl", "encryption", "passwords"];
    (0..n)
        .map(|i| secmine::corpus::Sentence {
            id: secmine::corpus::SentenceId::new(i as u64 + 1, 0),
            post_id: i as u64 + 1,
            text: format!("security sentence {i}"),
            created_at: Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap(),
            tags: if i % (n / tagged) == 0 && i / (n / tagged) < tagged {
                vec!["iot".into(), security_tags[i % security_tags.len()].into()]
            } else {
                vec!["iot".into(), "mqtt".into()]
            },
            is_question: true,
        })
        .collect()
}

/// Run `secmine` with `args`, panicking with its stderr on failure.
pub fn secmine(bin: &str, args: &[&str]) -> String {
    let out = std::process::Command::new(bin).args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "secmine {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// Every stage of the CLI on the mini-dump. Annotator inputs (two raters, an
/// adjudication and a gold file) are derived with [`keyword_label`] and kept
/// in `inputs`, outside the work directory.
pub fn run_mini_pipeline(bin: &str, workdir: &std::path::Path, inputs: &std::path::Path) {
    use std::fmt::Write as _;
    let wd = workdir.to_str().unwrap();
    let run = |args: &[&str]| {
        let mut full = vec!["--workdir", wd, "--config", MINI_CONFIG];
        full.extend_from_slice(args);
        secmine(bin, &full)
    };
    let input = |name: &str| inputs.join(name).to_str().unwrap().to_string();

    run(&["tags"]);
    run(&["ingest"]);
    run(&["sentences"]);
    run(&["sample"]);

    let sentences = secmine::corpus::read_sentences(&workdir.join("sentences.jsonl")).unwrap();
    let text: std::collections::BTreeMap<_, _> = sentences.iter().map(|s| (s.id, s.text.as_str())).collect();
    let mut sample = csv::Reader::from_path(workdir.join("sample.csv")).unwrap();
    let ids: Vec<secmine::corpus::SentenceId> =
        sample.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    let (mut a, mut b) = (String::from("id,label\n"), String::from("id,label\n"));
    for (i, id) in ids.iter().enumerate() {
        let label = keyword_label(text[id]);
        writeln!(a, "{id},{}", u8::from(label)).unwrap();
        writeln!(b, "{id},{}", u8::from(label != (i % 7 == 3))).unwrap();
    }
    std::fs::write(input("rater_a.csv"), a).unwrap();
    std::fs::write(input("rater_b.csv"), b).unwrap();
    run(&["agreement", "--rater-a", &input("rater_a.csv"), "--rater-b", &input("rater_b.csv")]);

    // the adjudicator sides with rater A
    let mut adjudicated = String::from("id,label_a,label_b,resolved\n");
    let mut rows = csv::Reader::from_path(workdir.join("disagreements.csv")).unwrap();
    for r in rows.records() {
        let r = r.unwrap();
        writeln!(adjudicated, "{},{},{},{}", &r[0], &r[1], &r[2], &r[1]).unwrap();
    }
    std::fs::write(input("adjudicated.csv"), adjudicated).unwrap();
    run(&[
        "agreement",
        "--rater-a",
        &input("rater_a.csv"),
        "--rater-b",
        &input("rater_b.csv"),
        "--adjudicated",
        &input("adjudicated.csv"),
    ]);

    let mut gold = String::from("id,label\n");
    for s in &sentences {
        writeln!(gold, "{},{}", s.id, u8::from(keyword_label(&s.text))).unwrap();
    }
    std::fs::write(input("gold.csv"), gold).unwrap();
    run(&["train", "--labels", &input("gold.csv")]);
    run(&["predict"]);
    run(&["eval", "--labels", &input("gold.csv")]);
    run(&["topics"]);
    run(&["trends"]);
    run(&["report"]);
}

/// Relative paths of every file under `root`, sorted, skipping `skip_dir`.
pub fn files_under(root: &std::path::Path, skip_dir: &str) -> Vec<std::path::PathBuf> {
    fn walk(dir: &std::path::Path, root: &std::path::Path, skip: &str, out: &mut Vec<std::path::PathBuf>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let rel = path.strip_prefix(root).unwrap().to_path_buf();
            if path.is_dir() {
                if rel != std::path::Path::new(skip) {
                    walk(&path, root, skip, out);
                }
            } else {
                out.push(rel);
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, skip_dir, &mut out);
    out.sort();
    out
}
