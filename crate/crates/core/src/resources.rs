//! Bundled featurizer resources: lexicon files, clickbait cue phrases,
//! stopwords, and the URL blog-host / TLD lists.
//!
//! Everything is loaded from a resource directory with fixed file names so
//! that a run is fully determined by the directory contents; a content hash
//! over all files feeds the feature-manifest hash.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::embedlex::{Lexicon, LexiconError};

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// The five moral foundations, in manifest order.
pub const MORAL_FOUNDATIONS: [&str; 5] = ["care", "fairness", "loyalty", "authority", "sanctity"];

/// Lexicons and cue lists consumed by the article featurizer.
#[derive(Debug, Clone)]
pub struct TextResources {
    pub positive: Lexicon,
    pub negative: Lexicon,
    pub subjectivity: Lexicon,
    pub negation: Lexicon,
    pub science: Lexicon,
    pub personal: Lexicon,
    pub insight: Lexicon,
    pub discrepancy: Lexicon,
    pub certainty: Lexicon,
    pub tentative: Lexicon,
    pub hedges: Lexicon,
    pub assertives: Lexicon,
    pub factives: Lexicon,
    pub implicatives: Lexicon,
    pub report_verbs: Lexicon,
    pub bias: Lexicon,
    /// Virtue/vice pairs per foundation, ordered
    /// `[care+, care-, fairness+, fairness-, ...]`.
    pub morality: Vec<Lexicon>,
    pub stopwords: HashSet<String>,
    /// Lowercase multi-word cue phrases matched by substring.
    pub clickbait_phrases: Vec<String>,
}

/// Suffix lists consumed by the URL featurizer.
#[derive(Debug, Clone)]
pub struct UrlResources {
    pub blog_hosts: Vec<String>,
    pub trusted_tlds: Vec<String>,
    pub mimic_tlds: Vec<String>,
}

/// Everything loaded from one resource directory, plus its content hash.
#[derive(Debug, Clone)]
pub struct ResourceSet {
    pub text: TextResources,
    pub url: UrlResources,
    /// SHA-256 over the sorted (relative path, bytes) of all resource files.
    pub hash: String,
}

/// The resource directory shipped with this crate.
pub fn bundled_resource_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("resources")
}

fn read_list(path: &Path) -> Result<Vec<String>, ResourceError> {
    let text = fs::read_to_string(path).map_err(|source| ResourceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

/// Loads lexicons from `<dir>/lexicons` and URL lists from `<dir>/url`.
pub fn load_resources(dir: &Path) -> Result<ResourceSet, ResourceError> {
    let lex_dir = dir.join("lexicons");
    let lex = |name: &str| Lexicon::load(&lex_dir.join(format!("{name}.txt")));

    let mut morality = Vec::with_capacity(10);
    for foundation in MORAL_FOUNDATIONS {
        morality.push(lex(&format!("mft_{foundation}_virtue"))?);
        morality.push(lex(&format!("mft_{foundation}_vice"))?);
    }

    let text = TextResources {
        positive: lex("positive")?,
        negative: lex("negative")?,
        subjectivity: lex("subjectivity")?,
        negation: lex("negation")?,
        science: lex("science")?,
        personal: lex("personal")?,
        insight: lex("insight")?,
        discrepancy: lex("discrepancy")?,
        certainty: lex("certainty")?,
        tentative: lex("tentative")?,
        hedges: lex("hedges")?,
        assertives: lex("assertives")?,
        factives: lex("factives")?,
        implicatives: lex("implicatives")?,
        report_verbs: lex("report_verbs")?,
        bias: lex("bias")?,
        morality,
        stopwords: read_list(&lex_dir.join("stopwords.txt"))?.into_iter().collect(),
        clickbait_phrases: read_list(&lex_dir.join("clickbait_phrases.txt"))?,
    };

    let url_dir = dir.join("url");
    let url = UrlResources {
        blog_hosts: read_list(&url_dir.join("blog_hosts.txt"))?,
        trusted_tlds: read_list(&url_dir.join("trusted_tlds.txt"))?,
        mimic_tlds: read_list(&url_dir.join("mimic_tlds.txt"))?,
    };

    let hash = hash_resource_dir(dir)?;
    Ok(ResourceSet { text, url, hash })
}

/// SHA-256 over the lexicon and URL resource files, in sorted relative-path
/// order. Embeddings are hashed separately because they are user-supplied.
pub fn hash_resource_dir(dir: &Path) -> Result<String, ResourceError> {
    let mut files = Vec::new();
    for sub in ["lexicons", "url"] {
        let sub_dir = dir.join(sub);
        let entries = fs::read_dir(&sub_dir).map_err(|source| ResourceError::Io {
            path: sub_dir.display().to_string(),
            source,
        })?;
        for entry in entries {
            let entry = entry.map_err(|source| ResourceError::Io {
                path: sub_dir.display().to_string(),
                source,
            })?;
            if entry.path().is_file() {
                files.push((format!("{sub}/{}", entry.file_name().to_string_lossy()), entry.path()));
            }
        }
    }
    files.sort();
    let mut hasher = Sha256::new();
    for (rel, path) in files {
        let bytes = fs::read(&path).map_err(|source| ResourceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        hasher.update(rel.as_bytes());
        hasher.update([0u8]);
        hasher.update(&bytes);
        hasher.update([0u8]);
    }
    Ok(hex_digest(hasher))
}

/// SHA-256 of a single file, hex-encoded.
pub fn hash_file(path: &Path) -> std::io::Result<String> {
    let bytes = fs::read(path)?;
    Ok(hash_bytes(&bytes))
}

/// SHA-256 of a byte slice, hex-encoded.
pub fn hash_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex_digest(hasher)
}

fn hex_digest(hasher: Sha256) -> String {
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
