//! Cross-validate the linear baselines over the hyperparameter grid on a
//! handful of labeled sentences, then score new sentences.
//!
//!     cargo run --release --example classify_sentences

use secmine::classify::{cross_validate, default_grid, Classifier, ModelKind};
use secmine::corpus::{Profile, Sentence, SentenceId, Tokenizer, DEFAULT_MIN_TOKEN_LEN};

const LABELED: &[(&str, bool)] = &[
    ("Never store the Wi-Fi password in plain text on the device.", true),
    ("The broker rejects clients without a valid TLS certificate.", true),
    ("An attacker can replay the unlock command because there is no nonce.", true),
    ("Rotate the API token when a device is decommissioned.", true),
    ("Enable certificate pinning so a rogue gateway cannot intercept traffic.", true),
    ("The firmware image must be signed before the bootloader accepts it.", true),
    ("Disable SSH password login and use key authentication.", true),
    ("Encrypt the payload before it leaves the sensor node.", true),
    ("My sensor readings drift when the board heats up.", false),
    ("The LED strip flickers when the motor starts.", false),
    ("How do I read the humidity sensor over I2C?", false),
    ("The dashboard refreshes every ten seconds.", false),
    ("Deep sleep brings the current down to a few microamps.", false),
    ("The relay clicks but the lamp stays off.", false),
    ("I log the temperature to a time series database.", false),
    ("Which pull-up resistor should I use for the button?", false),
];

fn main() -> secmine::Result<()> {
    let tokenizer = Tokenizer::english(DEFAULT_MIN_TOKEN_LEN);
    let docs: Vec<Vec<String>> = LABELED.iter().map(|(t, _)| tokenizer.tokens(t, Profile::Classify)).collect();
    let labels: Vec<bool> = LABELED.iter().map(|&(_, y)| y).collect();

    for kind in [ModelKind::Logit, ModelKind::LinearSvm] {
        let cv = cross_validate(kind, &docs, &labels, &default_grid(), 4, 42)?;
        let best = cv.best();
        println!("{kind:?}: best {:?}, mean F1 {:?}", best.hyperparams, best.mean.f1);
    }

    let cv = cross_validate(ModelKind::LinearSvm, &docs, &labels, &default_grid(), 4, 42)?;
    let model = Classifier::fit(ModelKind::LinearSvm, &docs, &labels, cv.best().hyperparams, 42)?;
    for (i, text) in ["Is the MQTT password sent unencrypted?", "The servo jitters at low voltage."].iter().enumerate() {
        let sentence = Sentence {
            id: SentenceId::new(1, i as u32),
            post_id: 1,
            text: text.to_string(),
            created_at: chrono::DateTime::UNIX_EPOCH,
            tags: Vec::new(),
            is_question: true,
        };
        let p = model.predict(&tokenizer.tokenize(&sentence, Profile::Classify));
        println!("{:.3} {} {text}", p.prob, if p.label { "security" } else { "other   " });
    }
    Ok(())
}
