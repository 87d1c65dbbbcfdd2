//! Data model, label scales, and snapshot loaders.
//!
//! A corpus is a CSV listing of media with gold factuality and bias labels,
//! plus one JSON evidence bundle per medium holding the raw snapshots
//! (articles, Wikipedia page, Twitter profile, traffic rank) that the
//! featurizers consume.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Factuality-of-reporting scale, low to high. `Very High` in input data is
/// folded into `High`.
pub const FACTUALITY_LABELS: [&str; 3] = ["Low", "Mixed", "High"];

/// Seven-point political bias scale, left to right.
pub const BIAS7_LABELS: [&str; 7] = [
    "Extreme-Left",
    "Left",
    "Center-Left",
    "Center",
    "Center-Right",
    "Right",
    "Extreme-Right",
];

/// Collapsed three-point bias scale.
pub const BIAS3_LABELS: [&str; 3] = ["Left", "Center", "Right"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: duplicate medium_id `{medium_id}`")]
    DuplicateMedium { line: u64, medium_id: String },
    #[error("line {line}: unknown {field} label `{value}`")]
    UnknownLabel {
        line: u64,
        field: &'static str,
        value: String,
    },
    #[error("no bundle for `{medium_id}`: {path} not found")]
    BundleNotFound { medium_id: String, path: String },
    #[error("{path}: {json_path}: {message}")]
    BundleSchema {
        path: String,
        json_path: String,
        message: String,
    },
}

/// One labeled news medium.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediumRecord {
    /// Normalized registrable domain: lowercase host, no scheme, no `www.`,
    /// no path. Unique within a corpus.
    pub medium_id: String,
    /// The original URL as listed.
    pub url: String,
    /// Ordinal factuality label, index into [`FACTUALITY_LABELS`].
    pub factuality: usize,
    /// Ordinal 7-point bias label, index into [`BIAS7_LABELS`].
    pub bias7: usize,
}

/// One crawled article snapshot. Title and body are featurized separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ArticleDoc {
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_at: Option<NaiveDate>,
}

/// Wikipedia page snapshot split into the five featurized segments.
/// When `exists` is false all text fields are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct WikiSnapshot {
    pub exists: bool,
    pub content: String,
    pub summary: String,
    /// Flattened `key: value` lines.
    pub infobox: String,
    pub categories: Vec<String>,
    /// Section headings.
    pub toc: Vec<String>,
}

/// Profile count statistics, all non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct TwitterCounts {
    pub followers: u64,
    pub friends: u64,
    pub statuses: u64,
    pub favorites: u64,
    pub listed: u64,
}

/// Twitter profile snapshot. When `exists` is false all other fields are
/// empty or absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TwitterProfile {
    pub exists: bool,
    pub verified: bool,
    pub created_year: Option<i64>,
    pub location: Option<String>,
    pub profile_url: Option<String>,
    pub description: String,
    pub counts: TwitterCounts,
}

/// The raw per-medium inputs from which every feature family derives.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceBundle {
    pub medium_id: String,
    /// May be empty (degenerate medium); featurizers must handle it.
    pub articles: Vec<ArticleDoc>,
    pub wiki: WikiSnapshot,
    pub twitter: TwitterProfile,
    /// Global traffic rank, >= 1 when present.
    pub alexa_rank: Option<u64>,
}

// On-disk form of a bundle: optional sections instead of exists flags.

#[derive(Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct WikiFile {
    content: String,
    summary: String,
    infobox: String,
    categories: Vec<String>,
    toc: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct TwitterFile {
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_year: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile_url: Option<String>,
    description: String,
    counts: TwitterCounts,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    medium_id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    articles: Vec<ArticleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wiki: Option<WikiFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twitter: Option<TwitterFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alexa_rank: Option<u64>,
}

impl From<BundleFile> for EvidenceBundle {
    fn from(f: BundleFile) -> Self {
        let wiki = match f.wiki {
            Some(w) => WikiSnapshot {
                exists: true,
                content: w.content,
                summary: w.summary,
                infobox: w.infobox,
                categories: w.categories,
                toc: w.toc,
            },
            None => WikiSnapshot::default(),
        };
        let twitter = match f.twitter {
            Some(t) => TwitterProfile {
                exists: true,
                verified: t.verified,
                created_year: t.created_year,
                location: t.location,
                profile_url: t.profile_url,
                description: t.description,
                counts: t.counts,
            },
            None => TwitterProfile::default(),
        };
        EvidenceBundle {
            medium_id: f.medium_id,
            articles: f.articles,
            wiki,
            twitter,
            alexa_rank: f.alexa_rank,
        }
    }
}

impl From<&EvidenceBundle> for BundleFile {
    fn from(b: &EvidenceBundle) -> Self {
        BundleFile {
            medium_id: b.medium_id.clone(),
            articles: b.articles.clone(),
            wiki: b.wiki.exists.then(|| WikiFile {
                content: b.wiki.content.clone(),
                summary: b.wiki.summary.clone(),
                infobox: b.wiki.infobox.clone(),
                categories: b.wiki.categories.clone(),
                toc: b.wiki.toc.clone(),
            }),
            twitter: b.twitter.exists.then(|| TwitterFile {
                verified: b.twitter.verified,
                created_year: b.twitter.created_year,
                location: b.twitter.location.clone(),
                profile_url: b.twitter.profile_url.clone(),
                description: b.twitter.description.clone(),
                counts: b.twitter.counts,
            }),
            alexa_rank: b.alexa_rank,
        }
    }
}

impl EvidenceBundle {
    /// Serializes back to the on-disk `bundle.json` schema. Loading the
    /// result yields a value equal to `self`.
    pub fn to_file_json(&self) -> String {
        serde_json::to_string_pretty(&BundleFile::from(self)).expect("bundle serializes")
    }
}

/// Normalizes a medium key or URL to its registrable-domain form:
/// lowercase host with scheme, leading `www.`, path, and port stripped.
pub fn normalize_medium_id(raw: &str) -> Option<String> {
    let s = raw.trim().to_lowercase();
    let after_scheme = match s.find("://") {
        Some(pos) => &s[pos + 3..],
        None => s.as_str(),
    };
    let host_port = after_scheme
        .split(['/', '?', '#'])
        .next()
        .unwrap_or_default();
    let host = host_port.split(':').next().unwrap_or_default();
    let host = host.strip_prefix("www.").unwrap_or(host);
    if host.is_empty() || host.chars().any(|c| c.is_whitespace()) {
        None
    } else {
        Some(host.to_string())
    }
}

fn parse_factuality(s: &str) -> Option<usize> {
    match s.trim() {
        "Low" => Some(0),
        "Mixed" => Some(1),
        // Very High is merged into High.
        "High" | "Very High" => Some(2),
        _ => None,
    }
}

fn parse_bias7(s: &str) -> Option<usize> {
    BIAS7_LABELS.iter().position(|l| *l == s.trim())
}

/// Loads and validates the labeled medium list.
///
/// The file is UTF-8 CSV with header `medium_id,url,factuality,bias7` and
/// labels given as canonical strings. Duplicate media and unknown labels
/// are rejected.
pub fn load_corpus(path: &Path) -> Result<Vec<MediumRecord>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => io_err(source),
            other => CorpusError::Parse {
                line: 1,
                message: format!("{other:?}"),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| CorpusError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected = ["medium_id", "url", "factuality", "bias7"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CorpusError::Parse {
            line: 1,
            message: format!("expected header `{}`, found `{}`", expected.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| CorpusError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != 4 {
            return Err(CorpusError::Parse {
                line,
                message: format!("expected 4 fields, found {}", row.len()),
            });
        }
        let medium_id = normalize_medium_id(&row[0]).ok_or_else(|| CorpusError::Parse {
            line,
            message: format!("invalid medium_id `{}`", &row[0]),
        })?;
        let factuality = parse_factuality(&row[2]).ok_or_else(|| CorpusError::UnknownLabel {
            line,
            field: "factuality",
            value: row[2].to_string(),
        })?;
        let bias7 = parse_bias7(&row[3]).ok_or_else(|| CorpusError::UnknownLabel {
            line,
            field: "bias7",
            value: row[3].to_string(),
        })?;
        if !seen.insert(medium_id.clone()) {
            return Err(CorpusError::DuplicateMedium { line, medium_id });
        }
        records.push(MediumRecord {
            medium_id,
            url: row[1].to_string(),
            factuality,
            bias7,
        });
    }
    Ok(records)
}

/// Loads and validates `<root>/<medium_id>/bundle.json`.
///
/// Missing optional sections become `exists = false` / absent fields; a
/// missing file or a schema violation is an error.
pub fn load_bundle(root: &Path, medium_id: &str) -> Result<EvidenceBundle, CorpusError> {
    let path = root.join(medium_id).join("bundle.json");
    let display = path.display().to_string();
    if !path.exists() {
        return Err(CorpusError::BundleNotFound {
            medium_id: medium_id.to_string(),
            path: display,
        });
    }
    let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
        path: display.clone(),
        source,
    })?;
    parse_bundle(&text, medium_id).map_err(|(json_path, message)| CorpusError::BundleSchema {
        path: display,
        json_path,
        message,
    })
}

/// Parses and validates one bundle document. The error carries the JSON
/// path of the offending value.
pub fn parse_bundle(
    text: &str,
    expected_medium_id: &str,
) -> Result<EvidenceBundle, (String, String)> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: BundleFile = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| (e.path().to_string(), e.inner().to_string()))?;
    if file.medium_id != expected_medium_id {
        return Err((
            "medium_id".to_string(),
            format!(
                "expected `{expected_medium_id}`, found `{}`",
                file.medium_id
            ),
        ));
    }
    if file.alexa_rank == Some(0) {
        return Err(("alexa_rank".to_string(), "rank must be >= 1".to_string()));
    }
    Ok(file.into())
}

/// Maps the 7-point bias scale onto 3 points:
/// {Extreme-Left, Left} -> Left, {Center-Left, Center, Center-Right} ->
/// Center, {Right, Extreme-Right} -> Right.
///
/// # Panics
/// Panics if `bias7 > 6`.
pub fn map_bias_7_to_3(bias7: usize) -> usize {
    assert!(bias7 <= 6, "bias7 label out of range: {bias7}");
    match bias7 {
        0 | 1 => 0,
        2..=4 => 1,
        _ => 2,
    }
}
