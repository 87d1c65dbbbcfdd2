//! Media profiling: predicting the factuality of reporting and the
//! political bias of news media from per-medium evidence bundles.
//!
//! The pipeline featurizes five evidence families per medium — a sample of
//! its articles, its Wikipedia page, its Twitter profile, its URL
//! structure, and its web-traffic rank — trains one-vs-one SVM ensembles
//! with nested cross-validated hyper-parameter search, and evaluates with
//! ordinal-aware metrics (accuracy, macro-F1, MAE, and macro-averaged MAE).

pub mod artfeat;
pub mod corpus;
pub mod embedlex;
pub mod eval;
pub mod features;
pub mod profilefeat;
pub mod resources;
pub mod svm;
pub mod urlfeat;

pub use corpus::{
    load_bundle, load_corpus, map_bias_7_to_3, ArticleDoc, EvidenceBundle, MediumRecord,
    TwitterProfile, WikiSnapshot,
};
pub use embedlex::{avg_embedding, tokenize, EmbeddingTable, Lexicon};
pub use eval::{metrics, EvalReport, MetricQuad, Task};
pub use features::{assemble_features, FamilySelector, FeatureManifest};
pub use resources::{load_resources, ResourceSet};
pub use svm::{KernelParams, MultiModel};
