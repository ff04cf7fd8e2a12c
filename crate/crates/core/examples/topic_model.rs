//! Fit LDA by collapsed Gibbs sampling for several topic counts and keep the
//! one with the best c_v coherence.
//!
//!     cargo run --release --example topic_model

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secmine::corpus::Vocabulary;
use secmine::topics::{select_k, LdaTemplate};

const FAMILIES: [&[&str]; 3] = [
    &["certificate", "tls", "handshake", "ca", "x509", "expired", "chain", "verify"],
    &["password", "login", "hash", "salt", "credential", "reset", "account", "admin"],
    &["firmware", "update", "signed", "bootloader", "image", "flash", "ota", "rollback"],
];

fn main() -> secmine::Result<()> {
    let terms: Vec<&str> = FAMILIES.iter().flat_map(|f| f.iter().copied()).collect();
    let vocab = Vocabulary::from_counts(terms.iter().map(|t| (t.to_string(), 1)));
    let index = |t: &str| vocab.index_of(t).expect("term in vocabulary");

    // each document mostly draws from one family
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let docs: Vec<Vec<u32>> = (0..300)
        .map(|d| {
            let family = FAMILIES[d % 3];
            (0..12)
                .map(|_| {
                    let t = if rng.gen_bool(0.85) { family[rng.gen_range(0..family.len())] } else { terms[rng.gen_range(0..terms.len())] };
                    index(t)
                })
                .collect()
        })
        .collect();

    let template = LdaTemplate { iterations: 300, burn_in: 100, ..LdaTemplate::default() };
    let selection = select_k(&docs, &vocab, &[2, 3, 4, 5], &template, 42, 5, 110)?;
    for s in &selection.scores {
        println!("k = {}: c_v {:.4}", s.k, s.value);
    }
    println!("\nchosen k = {}", selection.best_k);
    for t in 0..selection.model.k() {
        let words: Vec<String> = selection.model.top_words(t, 5)?.into_iter().map(|(w, _)| w).collect();
        println!("topic {t}: {}", words.join(", "));
    }
    Ok(())
}
