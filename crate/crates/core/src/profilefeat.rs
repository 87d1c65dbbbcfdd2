//! Wikipedia-page and Twitter-profile feature blocks for a medium.

use crate::corpus::{TwitterProfile, WikiSnapshot};
use crate::embedlex::{avg_embedding, tokenize, EmbeddingTable};

/// Twitter block length excluding the description vector.
pub const TWITTER_SCALAR_COUNT: usize = 11;

/// Has-page flag plus five segment embeddings; 1 + 5*dim values.
#[derive(Debug, Clone, PartialEq)]
pub struct WikiFeatureBlock {
    pub has_page: f64,
    pub content: Vec<f64>,
    pub infobox: Vec<f64>,
    pub summary: Vec<f64>,
    pub categories: Vec<f64>,
    pub toc: Vec<f64>,
}

impl WikiFeatureBlock {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + 5 * self.content.len());
        v.push(self.has_page);
        v.extend_from_slice(&self.content);
        v.extend_from_slice(&self.infobox);
        v.extend_from_slice(&self.summary);
        v.extend_from_slice(&self.categories);
        v.extend_from_slice(&self.toc);
        v
    }
}

/// Profile facts plus the description embedding; 11 + dim values in the
/// order has_account, verified, created_year, has_location, has_url,
/// url_matches, counts (log1p of followers, friends, statuses, favorites,
/// listed), description.
#[derive(Debug, Clone, PartialEq)]
pub struct TwitterFeatureBlock {
    pub has_account: f64,
    pub verified: f64,
    pub created_year: f64,
    pub has_location: f64,
    pub has_url: f64,
    pub url_matches: f64,
    pub counts: [f64; 5],
    pub description: Vec<f64>,
}

impl TwitterFeatureBlock {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(TWITTER_SCALAR_COUNT + self.description.len());
        v.extend_from_slice(&[
            self.has_account,
            self.verified,
            self.created_year,
            self.has_location,
            self.has_url,
            self.url_matches,
        ]);
        v.extend_from_slice(&self.counts);
        v.extend_from_slice(&self.description);
        v
    }
}

fn segment_embedding(text: &str, table: &EmbeddingTable) -> Vec<f64> {
    avg_embedding(&tokenize(text).words, table)
}

/// Featurizes a Wikipedia snapshot: the has-page flag and one averaged
/// word-embedding vector per segment. Category and TOC lists are
/// space-joined before tokenization. An absent page zeroes every segment.
pub fn wiki_features(snap: &WikiSnapshot, table: &EmbeddingTable) -> WikiFeatureBlock {
    if !snap.exists {
        let zero = vec![0.0; table.dim()];
        return WikiFeatureBlock {
            has_page: 0.0,
            content: zero.clone(),
            infobox: zero.clone(),
            summary: zero.clone(),
            categories: zero.clone(),
            toc: zero,
        };
    }
    WikiFeatureBlock {
        has_page: 1.0,
        content: segment_embedding(&snap.content, table),
        infobox: segment_embedding(&snap.infobox, table),
        summary: segment_embedding(&snap.summary, table),
        categories: segment_embedding(&snap.categories.join(" "), table),
        toc: segment_embedding(&snap.toc.join(" "), table),
    }
}

/// Normalized host of a URL: lowercase, leading `www.` stripped. A string
/// without a scheme is treated as `http://`.
fn host_of(url_str: &str) -> Option<String> {
    let s = url_str.trim();
    if s.is_empty() {
        return None;
    }
    let with_scheme = if s.contains("://") {
        s.to_string()
    } else {
        format!("http://{s}")
    };
    let parsed = url::Url::parse(&with_scheme).ok()?;
    let host = parsed.host_str()?.to_lowercase();
    let host = host.strip_prefix("www.").unwrap_or(&host);
    Some(host.to_string())
}

/// Whether the profile lists a URL, and whether its normalized host equals
/// the medium's. Hosts must match exactly: `abcnews.com.co` does not match
/// `abcnews.com`.
///
/// # Panics
/// Panics if `medium_url` cannot be parsed.
pub fn url_match(profile_url: Option<&str>, medium_url: &str) -> (f64, f64) {
    let medium_host =
        host_of(medium_url).unwrap_or_else(|| panic!("unparseable medium URL `{medium_url}`"));
    match profile_url.and_then(host_of) {
        Some(profile_host) => (1.0, if profile_host == medium_host { 1.0 } else { 0.0 }),
        None => (0.0, 0.0),
    }
}

/// Featurizes a Twitter profile snapshot. Counts are log1p-transformed;
/// the description is embedded by word-vector averaging; an absent account
/// zeroes the whole block.
pub fn twitter_features(
    profile: &TwitterProfile,
    medium_url: &str,
    table: &EmbeddingTable,
) -> TwitterFeatureBlock {
    if !profile.exists {
        return TwitterFeatureBlock {
            has_account: 0.0,
            verified: 0.0,
            created_year: 0.0,
            has_location: 0.0,
            has_url: 0.0,
            url_matches: 0.0,
            counts: [0.0; 5],
            description: vec![0.0; table.dim()],
        };
    }
    let (has_url, url_matches) = url_match(profile.profile_url.as_deref(), medium_url);
    let c = profile.counts;
    let log1p = |x: u64| (1.0 + x as f64).ln();
    TwitterFeatureBlock {
        has_account: 1.0,
        verified: if profile.verified { 1.0 } else { 0.0 },
        created_year: profile.created_year.unwrap_or(0) as f64,
        has_location: if profile.location.as_deref().is_some_and(|l| !l.is_empty()) {
            1.0
        } else {
            0.0
        },
        has_url,
        url_matches,
        counts: [
            log1p(c.followers),
            log1p(c.friends),
            log1p(c.statuses),
            log1p(c.favorites),
            log1p(c.listed),
        ],
        description: segment_embedding(&profile.description, table),
    }
}
