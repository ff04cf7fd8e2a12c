//! Split post text into sentences, then turn a sentence into classifier
//! tokens and lemmatized topic-model tokens.
//!
//!     cargo run --example segment_and_tokenize

use secmine::corpus::{segment_text, Profile, Tokenizer, DEFAULT_MIN_TOKEN_LEN};

fn main() {
    let post = "I moved the broker to port 8883. The U.S. region endpoint rejects my certificate, \
                e.g. with a handshake error! Is the CA bundle on the ESP8266 too old? See p. 4 of the docs.";

    let sentences = segment_text(post);
    for (i, s) in sentences.iter().enumerate() {
        println!("[{i}] {s}");
    }

    let tokenizer = Tokenizer::english(DEFAULT_MIN_TOKEN_LEN);
    let s = &sentences[1];
    println!("\nclassify: {:?}", tokenizer.tokens(s, Profile::Classify));
    println!("topics:   {:?}", tokenizer.tokens(s, Profile::Topics));
}
