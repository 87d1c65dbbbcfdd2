//! The per-medium feature vector: family-span manifest and assembly.
//!
//! The vector concatenates five evidence families in a fixed order —
//! traffic, url, twitter, wikipedia, articles — with optional URL character
//! n-grams appended to the url family. The manifest maps every index to a
//! (family, part, name) triple and is hashed into model and cache files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artfeat::{article_manifest, medium_article_block, ARTICLE_BLOCK_LEN};
use crate::corpus::{EvidenceBundle, MediumRecord};
use crate::embedlex::EmbeddingTable;
use crate::profilefeat::{twitter_features, wiki_features, TWITTER_SCALAR_COUNT};
use crate::resources::ResourceSet;
use crate::urlfeat::{
    traffic_feature, url_structure_features, NgramVocab, UrlFeatureError,
    URL_STRUCTURE_FEATURE_NAMES,
};

/// Manifest schema version.
pub const MANIFEST_VERSION: u32 = 1;

/// Family names in vector order.
pub const FAMILY_ORDER: [&str; 5] = ["traffic", "url", "twitter", "wikipedia", "articles"];

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("unknown feature family `{given}`; valid families: {valid}")]
    UnknownFamily { given: String, valid: String },
    #[error("unknown part `{given}` of family `{family}`; valid parts: {valid}")]
    UnknownPart {
        family: String,
        given: String,
        valid: String,
    },
}

/// One feature of the full vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureEntry {
    pub index: usize,
    pub name: String,
    pub family: String,
    pub part: String,
}

/// `family` or `family:part` column selector; `family:*` selects the whole
/// family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySelector {
    pub family: String,
    pub part: Option<String>,
}

impl FamilySelector {
    pub fn parse(s: &str) -> Self {
        match s.split_once(':') {
            Some((family, "*")) | Some((family, "")) => FamilySelector {
                family: family.trim().to_string(),
                part: None,
            },
            Some((family, part)) => FamilySelector {
                family: family.trim().to_string(),
                part: Some(part.trim().to_string()),
            },
            None => FamilySelector {
                family: s.trim().to_string(),
                part: None,
            },
        }
    }

    pub fn to_string_form(&self) -> String {
        match &self.part {
            Some(part) => format!("{}:{part}", self.family),
            None => self.family.clone(),
        }
    }
}

/// The frozen index layout of one extraction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureManifest {
    pub version: u32,
    pub embedding_dim: usize,
    /// Hash of the lexicon/URL resources and the embedding file.
    pub resource_hash: String,
    /// Present when URL character n-grams are enabled.
    pub url_ngrams: Option<NgramVocab>,
    pub entries: Vec<FeatureEntry>,
}

fn push(entries: &mut Vec<FeatureEntry>, family: &str, part: &str, name: String) {
    entries.push(FeatureEntry {
        index: entries.len(),
        name,
        family: family.to_string(),
        part: part.to_string(),
    });
}

impl FeatureManifest {
    /// Builds the manifest for a given embedding dimension, resource hash,
    /// and optional frozen n-gram vocabulary.
    pub fn build(embedding_dim: usize, resource_hash: &str, url_ngrams: Option<NgramVocab>) -> Self {
        let mut entries = Vec::new();
        push(&mut entries, "traffic", "alexa", "alexa_reciprocal".to_string());
        for name in URL_STRUCTURE_FEATURE_NAMES {
            push(&mut entries, "url", "structure", name.to_string());
        }
        if let Some(vocab) = &url_ngrams {
            for gram in vocab.grams() {
                push(&mut entries, "url", "ngrams", format!("ngram:{gram}"));
            }
        }
        for name in ["has_account", "verified"] {
            push(&mut entries, "twitter", name, name.to_string());
        }
        push(&mut entries, "twitter", "created", "created_year".to_string());
        push(&mut entries, "twitter", "has_location", "has_location".to_string());
        push(&mut entries, "twitter", "url_match", "has_url".to_string());
        push(&mut entries, "twitter", "url_match", "url_matches".to_string());
        for name in ["followers", "friends", "statuses", "favorites", "listed"] {
            push(&mut entries, "twitter", "counts", format!("counts_{name}"));
        }
        for k in 0..embedding_dim {
            push(&mut entries, "twitter", "description", format!("description_{k}"));
        }
        push(&mut entries, "wikipedia", "has_page", "has_page".to_string());
        for segment in ["content", "infobox", "summary", "categories", "toc"] {
            for k in 0..embedding_dim {
                push(&mut entries, "wikipedia", segment, format!("{segment}_{k}"));
            }
        }
        for segment in ["title", "body"] {
            for feature in article_manifest() {
                push(
                    &mut entries,
                    "articles",
                    segment,
                    format!("{segment}_{}", feature.name),
                );
            }
        }
        FeatureManifest {
            version: MANIFEST_VERSION,
            embedding_dim,
            resource_hash: resource_hash.to_string(),
            url_ngrams,
            entries,
        }
    }

    /// Restores derived lookup state after deserialization.
    pub fn after_load(&mut self) {
        if let Some(vocab) = &mut self.url_ngrams {
            vocab.rebuild_index();
        }
    }

    /// Total vector length.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// SHA-256 over the canonical JSON encoding. Changes whenever the
    /// layout, any resource file, or the embedding file changes.
    pub fn hash(&self) -> String {
        crate::resources::hash_bytes(
            serde_json::to_string(self)
                .expect("manifest serializes")
                .as_bytes(),
        )
    }

    /// (family, length) in vector order.
    pub fn family_dims(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for entry in &self.entries {
            match out.last_mut() {
                Some((family, count)) if *family == entry.family => *count += 1,
                _ => out.push((entry.family.clone(), 1)),
            }
        }
        out
    }

    fn valid_families(&self) -> Vec<String> {
        let mut out = Vec::new();
        for entry in &self.entries {
            if !out.contains(&entry.family) {
                out.push(entry.family.clone());
            }
        }
        out
    }

    fn valid_parts(&self, family: &str) -> Vec<String> {
        let mut out = Vec::new();
        for entry in self.entries.iter().filter(|e| e.family == family) {
            if !out.contains(&entry.part) {
                out.push(entry.part.clone());
            }
        }
        out
    }

    /// Column indices selected by the given selectors, ascending and
    /// deduplicated.
    pub fn columns_for(&self, selectors: &[FamilySelector]) -> Result<Vec<usize>, ManifestError> {
        let mut cols = Vec::new();
        for sel in selectors {
            let family_entries: Vec<&FeatureEntry> = self
                .entries
                .iter()
                .filter(|e| e.family == sel.family)
                .collect();
            if family_entries.is_empty() {
                return Err(ManifestError::UnknownFamily {
                    given: sel.family.clone(),
                    valid: self.valid_families().join(", "),
                });
            }
            match &sel.part {
                None => cols.extend(family_entries.iter().map(|e| e.index)),
                Some(part) => {
                    let matched: Vec<usize> = family_entries
                        .iter()
                        .filter(|e| e.part == *part)
                        .map(|e| e.index)
                        .collect();
                    if matched.is_empty() {
                        return Err(ManifestError::UnknownPart {
                            family: sel.family.clone(),
                            given: part.clone(),
                            valid: self.valid_parts(&sel.family).join(", "),
                        });
                    }
                    cols.extend(matched);
                }
            }
        }
        cols.sort_unstable();
        cols.dedup();
        Ok(cols)
    }
}

/// Assembles the full feature vector for one medium, in manifest order.
/// The vector length always matches the manifest built with the same
/// embedding dimension and n-gram vocabulary.
pub fn assemble_features(
    record: &MediumRecord,
    bundle: &EvidenceBundle,
    resources: &ResourceSet,
    table: &EmbeddingTable,
    url_ngrams: Option<&NgramVocab>,
) -> Result<Vec<f64>, UrlFeatureError> {
    assert_eq!(
        record.medium_id, bundle.medium_id,
        "bundle does not belong to the medium record"
    );
    let mut v = Vec::new();
    v.push(traffic_feature(bundle.alexa_rank));
    v.extend(url_structure_features(&record.url, &resources.url)?);
    if let Some(vocab) = url_ngrams {
        v.extend(vocab.featurize(&record.url));
    }
    let twitter = twitter_features(&bundle.twitter, &record.url, table).to_vec();
    assert_eq!(twitter.len(), TWITTER_SCALAR_COUNT + table.dim());
    v.extend(twitter);
    let wiki = wiki_features(&bundle.wiki, table).to_vec();
    assert_eq!(wiki.len(), 1 + 5 * table.dim());
    v.extend(wiki);
    let articles = medium_article_block(&bundle.articles, &resources.text);
    assert_eq!(articles.len(), ARTICLE_BLOCK_LEN);
    v.extend(articles);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_bundle;
    use crate::resources::{bundled_resource_dir, load_resources};

    fn manifest(dim: usize) -> FeatureManifest {
        FeatureManifest::build(dim, "testhash", None)
    }

    #[test]
    fn dims_add_up() {
        // 1 + 12 + (11 + dim) + (1 + 5 dim) + 102
        let m = manifest(300);
        assert_eq!(m.dim(), 1 + 12 + 311 + 1501 + ARTICLE_BLOCK_LEN);
        let m25 = manifest(25);
        assert_eq!(m25.dim(), 1 + 12 + 36 + 126 + ARTICLE_BLOCK_LEN);
        let families: Vec<(String, usize)> = m.family_dims();
        assert_eq!(
            families,
            vec![
                ("traffic".to_string(), 1),
                ("url".to_string(), 12),
                ("twitter".to_string(), 311),
                ("wikipedia".to_string(), 1501),
                ("articles".to_string(), 102),
            ]
        );
    }

    #[test]
    fn indices_are_sequential_and_names_unique() {
        let m = manifest(10);
        for (i, e) in m.entries.iter().enumerate() {
            assert_eq!(e.index, i);
        }
        let mut names: Vec<&String> = m.entries.iter().map(|e| &e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), m.entries.len());
    }

    #[test]
    fn selectors_resolve() {
        let m = manifest(4);
        let all = m.columns_for(&[FamilySelector::parse("traffic")]).unwrap();
        assert_eq!(all, vec![0]);
        let wiki = m.columns_for(&[FamilySelector::parse("wikipedia:*")]).unwrap();
        assert_eq!(wiki.len(), 1 + 5 * 4);
        let counts = m.columns_for(&[FamilySelector::parse("twitter:counts")]).unwrap();
        assert_eq!(counts.len(), 5);
        let title = m.columns_for(&[FamilySelector::parse("articles:title")]).unwrap();
        assert_eq!(title.len(), 51);
        // Union keeps manifest order and dedups.
        let both = m
            .columns_for(&[
                FamilySelector::parse("url"),
                FamilySelector::parse("traffic"),
                FamilySelector::parse("url:structure"),
            ])
            .unwrap();
        assert_eq!(both.len(), 13);
        assert_eq!(both[0], 0);
    }

    #[test]
    fn unknown_selector_errors_list_valid_names() {
        let m = manifest(4);
        let err = m
            .columns_for(&[FamilySelector::parse("facebook")])
            .unwrap_err();
        assert!(err.to_string().contains("traffic"), "{err}");
        let err = m
            .columns_for(&[FamilySelector::parse("twitter:tweets")])
            .unwrap_err();
        assert!(err.to_string().contains("counts"), "{err}");
    }

    #[test]
    fn manifest_hash_tracks_inputs() {
        let a = FeatureManifest::build(4, "h1", None);
        let b = FeatureManifest::build(4, "h2", None);
        let c = FeatureManifest::build(5, "h1", None);
        let d = FeatureManifest::build(4, "h1", Some(NgramVocab::build(["ab"], 2, 2)));
        let hashes = [a.hash(), b.hash(), c.hash(), d.hash()];
        for i in 0..hashes.len() {
            for j in i + 1..hashes.len() {
                assert_ne!(hashes[i], hashes[j]);
            }
        }
        assert_eq!(a.hash(), FeatureManifest::build(4, "h1", None).hash());
    }

    #[test]
    fn assembled_vector_matches_manifest_length() {
        let resources = load_resources(&bundled_resource_dir()).unwrap();
        let mut table = EmbeddingTable::new(5);
        table.insert("news", vec![1.0, 0.0, 0.0, 0.5, -0.5]);
        let record = MediumRecord {
            medium_id: "x.com".to_string(),
            url: "http://x.com".to_string(),
            factuality: 2,
            bias7: 3,
        };
        let bundle = parse_bundle(
            r#"{
                "medium_id": "x.com",
                "articles": [{"title": "Breaking news", "body": "It was quite a day. More soon."}],
                "wiki": {"content": "news site", "summary": "news", "infobox": "type: news",
                         "categories": ["news"], "toc": ["history"]},
                "twitter": {"verified": true, "created_year": 2010, "description": "daily news",
                            "counts": {"followers": 10, "friends": 2, "statuses": 30,
                                       "favorites": 4, "listed": 1}},
                "alexa_rank": 500
            }"#,
            "x.com",
        )
        .unwrap();
        let m = FeatureManifest::build(5, &resources.hash, None);
        let v = assemble_features(&record, &bundle, &resources, &table, None).unwrap();
        assert_eq!(v.len(), m.dim());
        assert_eq!(v[0], 1.0 / 500.0);
        assert!(v.iter().all(|x| x.is_finite()));
    }
}
