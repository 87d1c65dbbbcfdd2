//! Feature extraction with a content-hash-keyed cache.
//!
//! One feature row per medium is stored alongside the full family manifest
//! in `<cache_dir>/features.json`. A row is recomputed only when its bundle
//! bytes change or the manifest hash (layout, lexicons, embeddings) moves.

use std::fs;
use std::path::{Path, PathBuf};

use mediaprof::corpus::{load_corpus, parse_bundle};
use mediaprof::embedlex::EmbeddingTable;
use mediaprof::features::{assemble_features, FeatureManifest};
use mediaprof::resources::{hash_bytes, hash_file, load_resources, ResourceSet};
use mediaprof::urlfeat::NgramVocab;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheRow {
    pub medium_id: String,
    pub bundle_hash: String,
    pub factuality: usize,
    pub bias7: usize,
    pub vector: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FeatureCache {
    pub manifest_hash: String,
    pub manifest: FeatureManifest,
    pub rows: Vec<CacheRow>,
}

impl FeatureCache {
    pub fn path(cache_dir: &Path) -> PathBuf {
        cache_dir.join("features.json")
    }

    pub fn load(cache_dir: &Path) -> Result<Self, CliError> {
        let path = Self::path(cache_dir);
        let text = fs::read_to_string(&path).map_err(|e| {
            CliError::Data(format!(
                "no feature cache at {} ({e}); run `mediaprof extract` first",
                path.display()
            ))
        })?;
        let mut cache: FeatureCache = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("corrupt feature cache {}: {e}", path.display())))?;
        cache.manifest.after_load();
        Ok(cache)
    }
}

pub struct ExtractSummary {
    pub reused: usize,
    pub computed: usize,
    pub skipped: Vec<String>,
    pub manifest_hash: String,
}

/// Hash covering everything the feature vectors depend on besides the
/// bundles: the lexicon/URL resources and the embedding file.
pub fn combined_resource_hash(resources: &ResourceSet, embeddings: &Path) -> Result<String, CliError> {
    let embed_hash = hash_file(embeddings).map_err(|e| {
        CliError::Data(format!("cannot read embeddings {}: {e}", embeddings.display()))
    })?;
    Ok(hash_bytes(format!("{}:{embed_hash}", resources.hash).as_bytes()))
}

pub fn cmd_extract(cfg: &PipelineConfig) -> Result<ExtractSummary, CliError> {
    let resources = load_resources(&cfg.resources_dir())
        .map_err(|e| CliError::Data(format!("cannot load resources: {e}")))?;
    let embeddings_path = cfg.embeddings_path()?;
    if !embeddings_path.exists() {
        return Err(CliError::Data(format!(
            "embedding file {} does not exist",
            embeddings_path.display()
        )));
    }
    let table = EmbeddingTable::load(embeddings_path)
        .map_err(|e| CliError::Data(format!("cannot load embeddings: {e}")))?;
    let records = load_corpus(cfg.corpus_path()?)
        .map_err(|e| CliError::Data(format!("cannot load corpus: {e}")))?;

    let vocab = cfg.enable_url_ngrams.then(|| {
        NgramVocab::build(records.iter().map(|r| r.url.as_str()), 2, 5)
    });
    let resource_hash = combined_resource_hash(&resources, embeddings_path)?;
    let manifest = FeatureManifest::build(table.dim(), &resource_hash, vocab);
    let manifest_hash = manifest.hash();

    for (family, dims) in manifest.family_dims() {
        log::info!("family {family}: {dims} dims");
    }
    log::info!("total feature dims: {}", manifest.dim());

    // Rows from a previous run are reusable when the manifest is unchanged.
    let previous = FeatureCache::load(&cfg.cache_dir)
        .ok()
        .filter(|c| c.manifest_hash == manifest_hash);

    let bundle_root = cfg.bundles_path()?;

    enum Outcome {
        Reused(CacheRow),
        Computed(CacheRow),
        Skipped(String),
    }

    // Media featurize independently; keep corpus order by collecting.
    let outcomes: Vec<Outcome> = records
        .par_iter()
        .map(|record| -> Result<Outcome, CliError> {
            let bundle_path = bundle_root.join(&record.medium_id).join("bundle.json");
            let bytes = match fs::read(&bundle_path) {
                Ok(bytes) => bytes,
                Err(_) => {
                    log::warn!(
                        "skipping {}: no bundle at {}",
                        record.medium_id,
                        bundle_path.display()
                    );
                    return Ok(Outcome::Skipped(record.medium_id.clone()));
                }
            };
            let bundle_hash = hash_bytes(&bytes);
            if let Some(prev) = &previous {
                if let Some(row) = prev
                    .rows
                    .iter()
                    .find(|r| r.medium_id == record.medium_id && r.bundle_hash == bundle_hash)
                {
                    return Ok(Outcome::Reused(CacheRow {
                        medium_id: row.medium_id.clone(),
                        bundle_hash: row.bundle_hash.clone(),
                        factuality: record.factuality,
                        bias7: record.bias7,
                        vector: row.vector.clone(),
                    }));
                }
            }
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::Data(format!("{}: not UTF-8", bundle_path.display())))?;
            let bundle = parse_bundle(&text, &record.medium_id).map_err(|(path, msg)| {
                CliError::Data(format!("{}: {path}: {msg}", bundle_path.display()))
            })?;
            let vector = assemble_features(
                record,
                &bundle,
                &resources,
                &table,
                manifest.url_ngrams.as_ref(),
            )
            .map_err(|e| CliError::Data(e.to_string()))?;
            debug_assert_eq!(vector.len(), manifest.dim());
            Ok(Outcome::Computed(CacheRow {
                medium_id: record.medium_id.clone(),
                bundle_hash,
                factuality: record.factuality,
                bias7: record.bias7,
                vector,
            }))
        })
        .collect::<Result<Vec<Outcome>, CliError>>()?;

    let mut rows = Vec::with_capacity(records.len());
    let mut skipped = Vec::new();
    let mut reused = 0usize;
    let mut computed = 0usize;
    for outcome in outcomes {
        match outcome {
            Outcome::Reused(row) => {
                rows.push(row);
                reused += 1;
            }
            Outcome::Computed(row) => {
                rows.push(row);
                computed += 1;
            }
            Outcome::Skipped(medium_id) => skipped.push(medium_id),
        }
    }

    fs::create_dir_all(&cfg.cache_dir)
        .map_err(|e| CliError::Data(format!("cannot create cache dir: {e}")))?;
    let cache = FeatureCache {
        manifest_hash: manifest_hash.clone(),
        manifest,
        rows,
    };
    let json = serde_json::to_string(&cache)
        .map_err(|e| CliError::Internal(format!("cache serialization failed: {e}")))?;
    fs::write(FeatureCache::path(&cfg.cache_dir), json)
        .map_err(|e| CliError::Data(format!("cannot write cache: {e}")))?;
    fs::write(cfg.cache_dir.join("skipped.txt"), skipped.join("\n"))
        .map_err(|e| CliError::Data(format!("cannot write skip manifest: {e}")))?;

    let summary = ExtractSummary {
        reused,
        computed,
        skipped,
        manifest_hash,
    };
    log::info!(
        "extract: {} media ({} reused, {} computed, {} skipped), manifest {}",
        summary.reused + summary.computed,
        summary.reused,
        summary.computed,
        summary.skipped.len(),
        summary.manifest_hash
    );
    Ok(summary)
}

/// Loads the cache and fails with a re-extract hint when its manifest no
/// longer matches the current resources, embeddings, or layout.
pub fn load_cache_checked(cfg: &PipelineConfig) -> Result<FeatureCache, CliError> {
    let cache = FeatureCache::load(&cfg.cache_dir)?;
    let resources = load_resources(&cfg.resources_dir())
        .map_err(|e| CliError::Data(format!("cannot load resources: {e}")))?;
    let resource_hash = combined_resource_hash(&resources, cfg.embeddings_path()?)?;
    let expected = FeatureManifest::build(
        cache.manifest.embedding_dim,
        &resource_hash,
        cache.manifest.url_ngrams.clone(),
    );
    if expected.hash() != cache.manifest_hash {
        return Err(CliError::Data(
            "feature cache is stale (manifest hash mismatch); run `mediaprof extract` again"
                .to_string(),
        ));
    }
    if cfg.enable_url_ngrams != cache.manifest.url_ngrams.is_some() {
        return Err(CliError::Data(
            "feature cache was built with a different --enable-url-ngrams setting; \
             run `mediaprof extract` again"
                .to_string(),
        ));
    }
    Ok(cache)
}
