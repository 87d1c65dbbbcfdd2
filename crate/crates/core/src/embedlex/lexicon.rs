//! Word-list matching with optional prefix wildcards.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{name}: invalid term `{term}`: {message}")]
    InvalidTerm {
        name: String,
        term: String,
        message: String,
    },
}

/// A named set of lowercase terms. A term ending in `*` matches any token
/// with that prefix; all other terms match exactly.
#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    exact: HashSet<String>,
    prefixes: Vec<String>,
}

impl Lexicon {
    /// Builds a lexicon from raw terms. Terms are lowercased; empty terms
    /// and a `*` anywhere but the final position are rejected.
    pub fn from_terms<I, S>(name: &str, terms: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut exact = HashSet::new();
        let mut prefixes = Vec::new();
        for term in terms {
            let term = term.as_ref().trim().to_lowercase();
            if term.is_empty() {
                return Err(LexiconError::InvalidTerm {
                    name: name.to_string(),
                    term,
                    message: "empty term".to_string(),
                });
            }
            if let Some(stem) = term.strip_suffix('*') {
                if stem.is_empty() || stem.contains('*') {
                    return Err(LexiconError::InvalidTerm {
                        name: name.to_string(),
                        term,
                        message: "`*` is only allowed as the final character".to_string(),
                    });
                }
                prefixes.push(stem.to_string());
            } else {
                if term.contains('*') {
                    return Err(LexiconError::InvalidTerm {
                        name: name.to_string(),
                        term,
                        message: "`*` is only allowed as the final character".to_string(),
                    });
                }
                exact.insert(term);
            }
        }
        prefixes.sort();
        prefixes.dedup();
        Ok(Lexicon {
            name: name.to_string(),
            exact,
            prefixes,
        })
    }

    /// Loads a plain-text lexicon: one term per line, `#` starts a comment,
    /// blank lines ignored, trailing `*` marks a prefix wildcard.
    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("lexicon")
            .to_string();
        let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let terms = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect::<Vec<_>>();
        Self::from_terms(&name, terms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.exact.len() + self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.prefixes.is_empty()
    }

    pub fn matches(&self, token: &str) -> bool {
        self.exact.contains(token) || self.prefixes.iter().any(|p| token.starts_with(p.as_str()))
    }
}

/// Fraction of tokens matching the lexicon, with an empty token list
/// mapping to 0.
pub fn lexicon_ratio(tokens: &[String], lex: &Lexicon) -> f64 {
    let hits = tokens.iter().filter(|t| lex.matches(t)).count();
    hits as f64 / tokens.len().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_tokens_yield_zero() {
        let lex = Lexicon::from_terms("t", ["good"]).unwrap();
        assert_eq!(lexicon_ratio(&[], &lex), 0.0);
    }

    #[test]
    fn exact_match_ratio() {
        let lex = Lexicon::from_terms("t", ["good"]).unwrap();
        assert_eq!(lexicon_ratio(&words(&["good", "bad"]), &lex), 0.5);
    }

    #[test]
    fn prefix_matches_both_inflections() {
        let lex = Lexicon::from_terms("t", ["car*"]).unwrap();
        assert_eq!(lexicon_ratio(&words(&["caring", "cared"]), &lex), 1.0);
    }

    #[test]
    fn prefix_match_is_literal() {
        // "caring" does not start with "care"; only "cared" matches.
        let lex = Lexicon::from_terms("t", ["care*"]).unwrap();
        assert_eq!(lexicon_ratio(&words(&["caring", "cared"]), &lex), 0.5);
    }

    #[test]
    fn wildcard_only_final() {
        assert!(Lexicon::from_terms("t", ["ca*re"]).is_err());
        assert!(Lexicon::from_terms("t", ["*"]).is_err());
        assert!(Lexicon::from_terms("t", [""]).is_err());
    }

    #[test]
    fn load_skips_comments(){
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write;
        write!(f, "# sentiment terms\ngood\ngreat* # prefix\n\n").unwrap();
        let lex = Lexicon::load(f.path()).unwrap();
        assert!(lex.matches("good"));
        assert!(lex.matches("greatest"));
        assert!(!lex.matches("bad"));
        assert_eq!(lex.len(), 2);
    }

    proptest! {
        #[test]
        fn adding_matching_token_is_monotone_in_hits(
            tokens in proptest::collection::vec("[a-z]{1,8}", 0..20)
        ) {
            let lex = Lexicon::from_terms("t", ["good", "care*"]).unwrap();
            let hits = |ts: &[String]| ts.iter().filter(|t| lex.matches(t)).count();
            let mut extended = tokens.clone();
            extended.push("good".to_string());
            prop_assert_eq!(hits(&extended), hits(&tokens) + 1);
        }
    }
}
