//! Shared text resources: deterministic tokenizer, pretrained word-embedding
//! table, and lexicon (word-list) matching used by all text featurizers.

mod embeddings;
mod lexicon;
mod tokenize;

pub use embeddings::{avg_embedding, EmbedError, EmbeddingTable};
pub use lexicon::{lexicon_ratio, Lexicon, LexiconError};
pub use tokenize::{tokenize, Tokens};
