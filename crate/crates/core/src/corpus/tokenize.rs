use std::collections::HashSet;
use std::path::Path;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::{Sentence, SentenceId};
use crate::error::{Error, Result};

/// Bundled English stopword list, one word per line (179 entries).
pub const STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");

pub const DEFAULT_MIN_TOKEN_LEN: usize = 3;

static DEFAULT_TOKENIZER: LazyLock<Tokenizer> = LazyLock::new(Tokenizer::default);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Input to the TF-IDF classifiers.
    Classify,
    /// Input to topic modeling; adds suffix-stripping lemmatization.
    Topics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenizedDoc {
    pub sentence_id: SentenceId,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Tokenizer {
    stopwords: HashSet<String>,
    min_len: usize,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::new(parse_stopwords(STOPWORDS_EN), DEFAULT_MIN_TOKEN_LEN)
    }
}

fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

impl Tokenizer {
    pub fn new(stopwords: HashSet<String>, min_len: usize) -> Self {
        Self { stopwords, min_len }
    }

    /// The bundled English stopword list with a custom minimum token length.
    pub fn english(min_len: usize) -> Self {
        Self::new(parse_stopwords(STOPWORDS_EN), min_len)
    }

    pub fn from_stopword_file(path: &Path, min_len: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(parse_stopwords(&text), min_len))
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn is_stopword(&self, term: &str) -> bool {
        self.stopwords.contains(term)
    }

    pub fn tokens(&self, text: &str, profile: Profile) -> Vec<String> {
        let folded: String = text
            .nfd()
            .filter(|c| !is_combining_mark(*c))
            .flat_map(char::to_lowercase)
            .collect();
        folded
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter(|t| !t.is_empty())
            .filter_map(|t| {
                let term = match profile {
                    Profile::Classify => t.to_string(),
                    Profile::Topics => lemmatize(t),
                };
                (term.len() >= self.min_len && !self.stopwords.contains(&term)).then_some(term)
            })
            .collect()
    }

    pub fn tokenize(&self, sentence: &Sentence, profile: Profile) -> TokenizedDoc {
        TokenizedDoc {
            sentence_id: sentence.id,
            tokens: self.tokens(&sentence.text, profile),
        }
    }
}

/// Tokenize with the bundled stopword list and the default minimum length.
pub fn tokenize(sentence: &Sentence, profile: Profile) -> TokenizedDoc {
    DEFAULT_TOKENIZER.tokenize(sentence, profile)
}

const LEMMA_EXCEPTIONS: [(&str, &str); 16] = [
    ("using", "use"),
    ("used", "use"),
    ("uses", "use"),
    ("data", "data"),
    ("does", "does"),
    ("was", "was"),
    ("has", "has"),
    ("its", "its"),
    ("this", "this"),
    ("bus", "bus"),
    ("gas", "gas"),
    ("https", "https"),
    ("aws", "aws"),
    ("ios", "ios"),
    ("windows", "windows"),
    ("news", "news"),
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

/// Deterministic suffix stripping: `-ies`/`-ied` to `-y`, plural `-s`/`-es`,
/// `-ing` and `-ed`, with a short exception list. At most one rule applies.
pub fn lemmatize(word: &str) -> String {
    if let Some((_, lemma)) = LEMMA_EXCEPTIONS.iter().find(|(w, _)| *w == word) {
        return (*lemma).to_string();
    }
    let b = word.as_bytes();
    let n = b.len();
    let ends = |s: &str| word.ends_with(s);

    if n > 4 && (ends("ies") || ends("ied")) {
        return format!("{}y", &word[..n - 3]);
    }
    if n > 4 && ends("sses") {
        return word[..n - 2].to_string();
    }
    if n > 4 && (ends("xes") || ends("ches") || ends("shes") || ends("zes")) {
        return word[..n - 2].to_string();
    }
    if n > 3 && ends("s") && !(ends("ss") || ends("us") || ends("is") || ends("os")) {
        return word[..n - 1].to_string();
    }
    if n > 5 && ends("ing") {
        let stem = &word[..n - 3];
        if stem.bytes().any(is_vowel) {
            return undouble(stem);
        }
    }
    if n > 4 && ends("ed") {
        let stem = &word[..n - 2];
        if stem.len() >= 3 && !stem.ends_with('e') && stem.bytes().any(is_vowel) {
            return undouble(stem);
        }
    }
    word.to_string()
}

/// `runn` -> `run`, keeping `ll`, `ss`, `zz`.
fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 4 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z') {
        return stem[..n - 1].to_string();
    }
    stem.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Utc;

    fn sentence(text: &str) -> Sentence {
        Sentence {
            id: SentenceId::new(1, 0),
            post_id: 1,
            text: text.into(),
            created_at: Utc::now(),
            tags: vec![],
            is_question: true,
        }
    }

    #[test]
    fn bundled_list_has_179_entries() {
        assert_eq!(parse_stopwords(STOPWORDS_EN).len(), 179);
    }

    #[test]
    fn topics_profile_golden() {
        let doc = tokenize(&sentence("The Passwords were hashed"), Profile::Topics);
        assert_eq!(doc.tokens, vec!["password", "hash"]);
    }

    #[test]
    fn classify_profile_keeps_inflections() {
        let doc = tokenize(&sentence("The Passwords were hashed"), Profile::Classify);
        assert_eq!(doc.tokens, vec!["passwords", "hashed"]);
    }

    #[test]
    fn stopwords_only_gives_nothing() {
        assert!(tokenize(&sentence("a an the of"), Profile::Classify).tokens.is_empty());
    }

    #[test]
    fn diacritics_fold_to_ascii() {
        assert_eq!(tokenize(&sentence("café"), Profile::Classify).tokens, vec!["cafe"]);
        assert_eq!(tokenize(&sentence("Über naïve"), Profile::Classify).tokens, vec!["uber", "naive"]);
    }

    #[test]
    fn short_tokens_dropped_and_split_on_punctuation() {
        let doc = tokenize(&sentence("IoT/ssl-v2 ok x509"), Profile::Classify);
        assert_eq!(doc.tokens, vec!["iot", "ssl", "x509"]);
    }

    #[test]
    fn lemmatizer_rules() {
        let cases = [
            ("libraries", "library"),
            ("copied", "copy"),
            ("passes", "pass"),
            ("boxes", "box"),
            ("patches", "patch"),
            ("hashes", "hash"),
            ("keys", "key"),
            ("class", "class"),
            ("status", "status"),
            ("analysis", "analysis"),
            ("hashing", "hash"),
            ("running", "run"),
            ("string", "string"),
            ("encrypted", "encrypt"),
            ("need", "need"),
            ("speed", "speed"),
            ("using", "use"),
            ("installing", "install"),
        ];
        for (word, want) in cases {
            assert_eq!(lemmatize(word), want, "{word}");
        }
    }

    #[test]
    fn custom_min_len() {
        let tok = Tokenizer::new(HashSet::new(), 1);
        assert_eq!(tok.tokens("a bc", Profile::Classify), vec!["a", "bc"]);
    }
}
