//! Word-embedding table in word2vec text or binary format.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

/// Immutable token-to-vector map. Lookups are case-sensitive; the tokenizer
/// lowercases words before lookup.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    vocab: HashMap<String, Vec<f32>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            vocab: HashMap::new(),
        }
    }

    /// Inserts a vector, keeping the first occurrence of duplicate tokens.
    ///
    /// # Panics
    /// Panics if the vector length differs from the table dimension.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f32>) {
        assert_eq!(vector.len(), self.dim, "vector length must equal dim");
        self.vocab.entry(token.into()).or_insert(vector);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.vocab.get(token).map(|v| v.as_slice())
    }

    /// Loads a word2vec file, dispatching on extension: `.bin` is the binary
    /// format, anything else the text format.
    pub fn load(path: &Path) -> Result<Self, EmbedError> {
        if path.extension().is_some_and(|e| e == "bin") {
            Self::load_binary(path)
        } else {
            Self::load_text(path)
        }
    }

    /// Text format: a `<vocab_size> <dim>` header line, then one
    /// `token v1 ... vdim` line per entry.
    pub fn load_text(path: &Path) -> Result<Self, EmbedError> {
        let display = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| EmbedError::Io {
            path: display.clone(),
            source,
        })?;
        let parse_err = |line: usize, message: String| EmbedError::Parse {
            path: display.clone(),
            line,
            message,
        };

        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file".to_string()))?;
        let (vocab_size, dim) = parse_header(header).map_err(|m| parse_err(1, m))?;

        let mut table = EmbeddingTable::new(dim);
        let mut entries = 0usize;
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let token = fields.next().unwrap();
            let values: Vec<&str> = fields.collect();
            if values.len() != dim {
                return Err(parse_err(
                    idx + 1,
                    format!("expected {dim} values, found {}", values.len()),
                ));
            }
            let mut vector = Vec::with_capacity(dim);
            for v in values {
                let x: f32 = v
                    .parse()
                    .map_err(|_| parse_err(idx + 1, format!("invalid float `{v}`")))?;
                if !x.is_finite() {
                    return Err(parse_err(idx + 1, format!("non-finite value `{v}`")));
                }
                vector.push(x);
            }
            table.insert(token, vector);
            entries += 1;
        }
        if entries != vocab_size {
            return Err(parse_err(
                1,
                format!("header says {vocab_size} entries, found {entries}"),
            ));
        }
        Ok(table)
    }

    /// Binary format: the same header line, then per entry the token, one
    /// space, and `dim` little-endian IEEE-754 f32 values. An optional
    /// newline between entries is tolerated.
    pub fn load_binary(path: &Path) -> Result<Self, EmbedError> {
        let display = path.display().to_string();
        let bytes = fs::read(path).map_err(|source| EmbedError::Io {
            path: display.clone(),
            source,
        })?;
        let parse_err = |line: usize, message: String| EmbedError::Parse {
            path: display.clone(),
            line,
            message,
        };

        let header_end = bytes
            .iter()
            .position(|b| *b == b'\n')
            .ok_or_else(|| parse_err(1, "missing header line".to_string()))?;
        let header = std::str::from_utf8(&bytes[..header_end])
            .map_err(|_| parse_err(1, "header is not UTF-8".to_string()))?;
        let (vocab_size, dim) = parse_header(header).map_err(|m| parse_err(1, m))?;

        let mut table = EmbeddingTable::new(dim);
        let mut pos = header_end + 1;
        for entry in 0..vocab_size {
            while pos < bytes.len() && (bytes[pos] == b'\n' || bytes[pos] == b'\r') {
                pos += 1;
            }
            let token_end = bytes[pos..]
                .iter()
                .position(|b| *b == b' ')
                .map(|off| pos + off)
                .ok_or_else(|| parse_err(entry + 2, "unterminated token".to_string()))?;
            let token = std::str::from_utf8(&bytes[pos..token_end])
                .map_err(|_| parse_err(entry + 2, "token is not UTF-8".to_string()))?
                .to_string();
            pos = token_end + 1;
            if pos + 4 * dim > bytes.len() {
                return Err(parse_err(entry + 2, "truncated vector".to_string()));
            }
            let mut vector = Vec::with_capacity(dim);
            for k in 0..dim {
                let at = pos + 4 * k;
                let x = f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
                if !x.is_finite() {
                    return Err(parse_err(
                        entry + 2,
                        format!("non-finite value for `{token}`"),
                    ));
                }
                vector.push(x);
            }
            pos += 4 * dim;
            table.insert(token, vector);
        }
        Ok(table)
    }
}

fn parse_header(header: &str) -> Result<(usize, usize), String> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(format!("expected `<vocab_size> <dim>` header, found `{header}`"));
    }
    let vocab_size = fields[0]
        .parse()
        .map_err(|_| format!("invalid vocab size `{}`", fields[0]))?;
    let dim: usize = fields[1]
        .parse()
        .map_err(|_| format!("invalid dim `{}`", fields[1]))?;
    if dim == 0 {
        return Err("dim must be positive".to_string());
    }
    Ok((vocab_size, dim))
}

/// Arithmetic mean of the vectors of in-vocabulary tokens. Out-of-vocabulary
/// tokens are skipped; if nothing is found the zero vector is returned.
pub fn avg_embedding(tokens: &[String], table: &EmbeddingTable) -> Vec<f64> {
    let mut sum = vec![0.0f64; table.dim()];
    let mut found = 0usize;
    for token in tokens {
        if let Some(v) = table.get(token) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += *x as f64;
            }
            found += 1;
        }
    }
    if found > 0 {
        for s in &mut sum {
            *s /= found as f64;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    fn table(entries: &[(&str, &[f32])]) -> EmbeddingTable {
        let dim = entries[0].1.len();
        let mut t = EmbeddingTable::new(dim);
        for (tok, v) in entries {
            t.insert(*tok, v.to_vec());
        }
        t
    }

    fn words(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_small_text_file() {
        let f = write_temp("2 3\ncat 0.1 0.2 0.3\ndog -1 0 1\n");
        let t = EmbeddingTable::load_text(f.path()).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("dog"), Some([-1.0f32, 0.0, 1.0].as_slice()));
        assert_eq!(t.get("unseen"), None);
    }

    #[test]
    fn dim_mismatch_is_error() {
        let f = write_temp("1 300\ncat 0.1 0.2\n");
        let err = EmbeddingTable::load_text(f.path()).unwrap_err();
        assert!(err.to_string().contains("expected 300 values"));
    }

    #[test]
    fn non_finite_is_error() {
        let f = write_temp("1 2\ncat NaN 0.2\n");
        assert!(EmbeddingTable::load_text(f.path()).is_err());
    }

    #[test]
    fn duplicates_keep_first() {
        let f = write_temp("2 1\ncat 1\ncat 2\n");
        let t = EmbeddingTable::load_text(f.path()).unwrap();
        assert_eq!(t.get("cat"), Some([1.0f32].as_slice()));
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let t = table(&[("cat", &[0.25, -1.5]), ("dog", &[3.0, 0.125])]);
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"2 2\n");
        for tok in ["cat", "dog"] {
            bytes.extend_from_slice(tok.as_bytes());
            bytes.push(b' ');
            for x in t.get(tok).unwrap() {
                bytes.extend_from_slice(&x.to_le_bytes());
            }
        }
        let mut f = tempfile::Builder::new().suffix(".bin").tempfile().unwrap();
        f.write_all(&bytes).unwrap();
        let loaded = EmbeddingTable::load(f.path()).unwrap();
        assert_eq!(loaded.dim(), 2);
        assert_eq!(loaded.get("cat"), t.get("cat"));
        assert_eq!(loaded.get("dog"), t.get("dog"));
    }

    #[test]
    fn binary_tolerates_entry_newlines() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"2 1\n");
        for tok in ["a", "b"] {
            bytes.extend_from_slice(tok.as_bytes());
            bytes.push(b' ');
            bytes.extend_from_slice(&1.0f32.to_le_bytes());
            bytes.push(b'\n');
        }
        let mut f = tempfile::Builder::new().suffix(".bin").tempfile().unwrap();
        f.write_all(&bytes).unwrap();
        let loaded = EmbeddingTable::load(f.path()).unwrap();
        assert_eq!(loaded.len(), 2);
    }

    #[test]
    fn avg_of_empty_is_zero() {
        let t = table(&[("w", &[1.0, 2.0, 3.0])]);
        assert_eq!(avg_embedding(&[], &t), vec![0.0; 3]);
    }

    #[test]
    fn avg_of_singleton_is_the_vector() {
        let t = table(&[("w", &[1.0, 2.0, 3.0])]);
        assert_eq!(avg_embedding(&words(&["w"]), &t), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn avg_of_two_vectors() {
        let t = table(&[("w1", &[0.0, 0.0]), ("w2", &[2.0, 4.0])]);
        let avg = avg_embedding(&words(&["w1", "w2"]), &t);
        assert_abs_diff_eq!(avg[0], 1.0);
        assert_abs_diff_eq!(avg[1], 2.0);
    }

    #[test]
    fn oov_tokens_are_skipped() {
        let t = table(&[("w", &[2.0])]);
        assert_eq!(avg_embedding(&words(&["w", "unseen"]), &t), vec![2.0]);
        assert_eq!(avg_embedding(&words(&["unseen"]), &t), vec![0.0]);
    }

    #[test]
    fn avg_is_permutation_invariant_and_duplication_stable() {
        let t = table(&[("a", &[1.0, -1.0]), ("b", &[3.0, 5.0]), ("c", &[0.5, 0.5])]);
        let base = words(&["a", "b", "c", "zz"]);
        let perm = words(&["zz", "c", "a", "b"]);
        let doubled: Vec<String> = base.iter().chain(base.iter()).cloned().collect();
        let v0 = avg_embedding(&base, &t);
        for (i, x) in avg_embedding(&perm, &t).iter().enumerate() {
            assert_abs_diff_eq!(v0[i], *x, epsilon = 1e-12);
        }
        for (i, x) in avg_embedding(&doubled, &t).iter().enumerate() {
            assert_abs_diff_eq!(v0[i], *x, epsilon = 1e-12);
        }
    }
}
