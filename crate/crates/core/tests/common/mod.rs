#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub mod golden;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub const WORDS: &[&str] = &[
    "talo", "metsä", "järvi", "ilta", "aamu", "mies", "nainen", "poika", "tyttö", "kylä", "ilo", "suru", "pelko",
    "viha", "toivo", "ystävä",
];

/// Writes `n` small Gutenberg-format books into `dir`; the files whose index
/// is in `invalid` get a Latin-1 byte that is not valid UTF-8.
pub fn write_synthetic_corpus(dir: &Path, n: usize, invalid: &[usize]) -> Vec<String> {
    let mut names = Vec::with_capacity(n);
    for i in 0..n {
        let name = format!("book{i:04}.txt");
        let mut text = format!(
            "Title: Kirja {i}\nAuthor: Kirjailija {}\nLanguage: Finnish\n\n\
             *** START OF THE PROJECT GUTENBERG EBOOK KIRJA {i} ***\n",
            i % 17
        );
        for line in 0..(3 + i % 5) {
            let w1 = WORDS[(i + line) % WORDS.len()];
            let w2 = WORDS[(i * 7 + line * 3) % WORDS.len()];
            text.push_str(&format!("{w1} ja {w2} rivillä {line}.\n"));
        }
        text.push_str(&format!("*** END OF THE PROJECT GUTENBERG EBOOK KIRJA {i} ***\n"));
        let mut bytes = text.into_bytes();
        if invalid.contains(&i) {
            // "ä" in Latin-1
            bytes.extend_from_slice(b"P\xe4\xe4ttyi.\n");
        }
        fs::write(dir.join(&name), bytes).unwrap();
        names.push(name);
    }
    names
}
