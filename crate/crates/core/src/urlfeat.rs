//! URL orthographic and credibility features, the optional character
//! n-gram featurizer, and the traffic feature.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resources::UrlResources;

/// Fixed length of the URL structure block.
pub const URL_STRUCTURE_FEATURE_COUNT: usize = 12;

/// Names of the structure features, in output order.
pub const URL_STRUCTURE_FEATURE_NAMES: [&str; URL_STRUCTURE_FEATURE_COUNT] = [
    "url_length",
    "section_count",
    "digit_char_ratio",
    "special_char_ratio",
    "has_digit_section",
    "has_hyphen_in_host",
    "has_underscore",
    "has_short_section",
    "has_long_section",
    "uses_https",
    "on_blog_host",
    "tld_class",
];

#[derive(Debug, Error)]
pub enum UrlFeatureError {
    #[error("cannot extract URL features from `{url}`: {message}")]
    Unparseable { url: String, message: String },
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn suffix_match(host: &str, suffix: &str) -> bool {
    host == suffix || host.ends_with(&format!(".{suffix}"))
}

/// Computes the 12 URL structure features. Sections are the host labels
/// split on `.` plus the path segments split on `/`. The result is
/// insensitive to scheme case and to a single trailing slash.
pub fn url_structure_features(
    url_str: &str,
    res: &UrlResources,
) -> Result<[f64; URL_STRUCTURE_FEATURE_COUNT], UrlFeatureError> {
    let err = |message: &str| UrlFeatureError::Unparseable {
        url: url_str.to_string(),
        message: message.to_string(),
    };
    let trimmed = url_str.trim();
    if trimmed.is_empty() {
        return Err(err("empty URL"));
    }
    let norm = trimmed.strip_suffix('/').unwrap_or(trimmed);
    let with_scheme = if norm.contains("://") {
        norm.to_string()
    } else {
        format!("http://{norm}")
    };
    let parsed = url::Url::parse(&with_scheme).map_err(|e| err(&e.to_string()))?;
    let host = parsed.host_str().ok_or_else(|| err("no host"))?.to_lowercase();

    let mut sections: Vec<&str> = host.split('.').filter(|s| !s.is_empty()).collect();
    let path = parsed.path();
    sections.extend(path.split('/').filter(|s| !s.is_empty()));

    let chars: Vec<char> = norm.chars().collect();
    let total = chars.len() as f64;
    let digits = chars.iter().filter(|c| c.is_ascii_digit()).count();
    let special = chars
        .iter()
        .filter(|c| !c.is_alphanumeric() && !matches!(**c, '.' | '/' | ':'))
        .count();

    let tld_class = if res.trusted_tlds.iter().any(|t| suffix_match(&host, t)) {
        1.0
    } else if res.mimic_tlds.iter().any(|t| suffix_match(&host, t)) {
        -1.0
    } else {
        0.0
    };

    Ok([
        total,
        sections.len() as f64,
        digits as f64 / total,
        special as f64 / total,
        flag(sections.iter().any(|s| s.chars().any(|c| c.is_ascii_digit()))),
        flag(host.contains('-')),
        flag(norm.contains('_')),
        flag(sections.iter().any(|s| s.chars().count() < 3)),
        flag(sections.iter().any(|s| s.chars().count() > 10)),
        flag(parsed.scheme() == "https"),
        flag(res.blog_hosts.iter().any(|b| suffix_match(&host, b))),
        tld_class,
    ])
}

/// Character n-gram vocabulary frozen from a training corpus of URLs.
/// Featurization is binary presence over the vocabulary; unseen n-grams are
/// ignored. Excluded from the default feature set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramVocab {
    pub n_lo: usize,
    pub n_hi: usize,
    grams: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

fn each_gram(url: &str, n_lo: usize, n_hi: usize, mut f: impl FnMut(&str)) {
    let chars: Vec<char> = url.chars().collect();
    for n in n_lo..=n_hi {
        if chars.len() < n {
            continue;
        }
        for start in 0..=chars.len() - n {
            let gram: String = chars[start..start + n].iter().collect();
            f(&gram);
        }
    }
}

impl NgramVocab {
    /// Collects all character n-grams, `n_lo <= n <= n_hi`, over the given
    /// URLs. The vocabulary is sorted, so it depends only on the set of
    /// grams encountered.
    ///
    /// # Panics
    /// Panics unless `2 <= n_lo <= n_hi <= 5`.
    pub fn build<'a>(urls: impl IntoIterator<Item = &'a str>, n_lo: usize, n_hi: usize) -> Self {
        assert!(
            (2..=5).contains(&n_lo) && (2..=5).contains(&n_hi) && n_lo <= n_hi,
            "n range must lie within [2,5]"
        );
        let mut grams: Vec<String> = Vec::new();
        for url in urls {
            each_gram(url, n_lo, n_hi, |g| grams.push(g.to_string()));
        }
        grams.sort();
        grams.dedup();
        let mut vocab = NgramVocab {
            n_lo,
            n_hi,
            grams,
            index: HashMap::new(),
        };
        vocab.rebuild_index();
        vocab
    }

    /// Restores the lookup index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .grams
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn grams(&self) -> &[String] {
        &self.grams
    }

    /// Binary presence vector over the frozen vocabulary.
    pub fn featurize(&self, url: &str) -> Vec<f64> {
        let mut out = vec![0.0; self.grams.len()];
        each_gram(url, self.n_lo, self.n_hi, |g| {
            if let Some(&i) = self.index.get(g) {
                out[i] = 1.0;
            }
        });
        out
    }
}

/// Reciprocal Alexa rank; 0 when the rank is unknown.
///
/// # Panics
/// Panics if a rank of 0 is passed.
pub fn traffic_feature(alexa_rank: Option<u64>) -> f64 {
    match alexa_rank {
        Some(0) => panic!("alexa rank must be >= 1"),
        Some(rank) => 1.0 / rank as f64,
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn res() -> UrlResources {
        UrlResources {
            blog_hosts: vec!["blogspot.com".into(), "wordpress.com".into()],
            trusted_tlds: vec!["gov".into(), "edu".into(), "mil".into()],
            mimic_tlds: vec!["co".into(), "com.co".into(), "info".into()],
        }
    }

    fn feature(url: &str, name: &str) -> f64 {
        let idx = URL_STRUCTURE_FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .unwrap();
        url_structure_features(url, &res()).unwrap()[idx]
    }

    #[test]
    fn trusted_tld_example() {
        assert_eq!(feature("https://example.gov", "uses_https"), 1.0);
        assert_eq!(feature("https://example.gov", "tld_class"), 1.0);
        assert_eq!(feature("https://example.gov", "on_blog_host"), 0.0);
    }

    #[test]
    fn mimic_tld_example() {
        assert_eq!(feature("http://abcnews.com.co", "uses_https"), 0.0);
        assert_eq!(feature("http://abcnews.com.co", "tld_class"), -1.0);
    }

    #[test]
    fn blog_host_section_example() {
        let url = "http://a-b.blogspot.com/long-section-name";
        assert_eq!(feature(url, "on_blog_host"), 1.0);
        assert_eq!(feature(url, "has_hyphen_in_host"), 1.0);
        assert_eq!(feature(url, "has_long_section"), 1.0);
        // Sections are a-b (3), blogspot (8), com (3), long-section-name
        // (17): none is shorter than three characters.
        assert_eq!(feature(url, "has_short_section"), 0.0);
    }

    #[test]
    fn full_vector_hand_check() {
        // 19 chars; sections en|x|gov|a_1; one digit; one special char (_).
        let v = url_structure_features("http://en.x.gov/a_1", &res()).unwrap();
        assert_eq!(v[0], 19.0); // length
        assert_eq!(v[1], 4.0); // sections
        assert!((v[2] - 1.0 / 19.0).abs() < 1e-12); // digit ratio
        assert!((v[3] - 1.0 / 19.0).abs() < 1e-12); // special ratio
        assert_eq!(v[4], 1.0); // digit section (a_1)
        assert_eq!(v[5], 0.0); // hyphen in host
        assert_eq!(v[6], 1.0); // underscore
        assert_eq!(v[7], 1.0); // short section (en, x)
        assert_eq!(v[8], 0.0); // long section
        assert_eq!(v[9], 0.0); // https
        assert_eq!(v[10], 0.0); // blog host
        assert_eq!(v[11], 1.0); // tld class
    }

    #[test]
    fn scheme_case_and_trailing_slash_invariance() {
        let a = url_structure_features("HTTP://Example.com/News", &res()).unwrap();
        let b = url_structure_features("http://example.com/News/", &res()).unwrap();
        // Same char count either way
        assert_eq!(a, b);
    }

    #[test]
    fn unparseable_url_is_error() {
        assert!(url_structure_features("http://ex ample.com", &res()).is_err());
        assert!(url_structure_features("", &res()).is_err());
    }

    #[test]
    fn ngram_single_gram() {
        let vocab = NgramVocab::build(["ab"], 2, 2);
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.featurize("ab"), vec![1.0]);
        assert_eq!(vocab.featurize("cd"), vec![0.0]);
    }

    #[test]
    fn ngram_presence_not_count() {
        let vocab = NgramVocab::build(["aaa"], 2, 2);
        assert_eq!(vocab.grams(), ["aa"]);
        assert_eq!(vocab.featurize("aaaaa"), vec![1.0]);
    }

    #[test]
    fn ngram_range_enumeration() {
        let vocab = NgramVocab::build(["abc"], 2, 3);
        let mut grams: Vec<&str> = vocab.grams().iter().map(|s| s.as_str()).collect();
        grams.sort();
        assert_eq!(grams, ["ab", "abc", "bc"]);
        assert_eq!(vocab.featurize("xabx"), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn traffic_examples() {
        assert_eq!(traffic_feature(Some(1)), 1.0);
        assert_eq!(traffic_feature(Some(1000)), 0.001);
        assert_eq!(traffic_feature(None), 0.0);
    }

    #[test]
    #[should_panic(expected = ">= 1")]
    fn traffic_rejects_zero_rank() {
        traffic_feature(Some(0));
    }

    proptest! {
        #[test]
        fn traffic_is_decreasing_and_bounded(a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let (lo, hi) = (a.min(b), a.max(b));
            let (flo, fhi) = (traffic_feature(Some(lo)), traffic_feature(Some(hi)));
            prop_assert!(flo > 0.0 && flo <= 1.0);
            if lo < hi {
                prop_assert!(flo > fhi);
            }
        }

        #[test]
        fn structure_ratios_and_flags_bounded(host in "[a-z]{1,8}(\\.[a-z]{2,3}){1,2}", path in "(/[a-z0-9_-]{1,12}){0,3}") {
            let url = format!("https://{host}{path}");
            let v = url_structure_features(&url, &res()).unwrap();
            prop_assert!(v[2] >= 0.0 && v[2] <= 1.0);
            prop_assert!(v[3] >= 0.0 && v[3] <= 1.0);
            for i in [4usize, 5, 6, 7, 8, 9, 10] {
                prop_assert!(v[i] == 0.0 || v[i] == 1.0);
            }
            prop_assert!(v[11] == -1.0 || v[11] == 0.0 || v[11] == 1.0);
        }

        #[test]
        fn ngram_featurize_deterministic(url in "[a-z.:/]{2,20}") {
            let vocab = NgramVocab::build([url.as_str(), "http://example.com"], 2, 3);
            prop_assert_eq!(vocab.featurize(&url), vocab.featurize(&url));
        }
    }
}
