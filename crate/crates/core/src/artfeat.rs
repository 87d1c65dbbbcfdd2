//! Per-article text features, computed separately for title and body and
//! averaged over a medium's articles.
//!
//! The 51 features per segment fall into six groups: structure, sentiment,
//! topic, complexity, bias, and morality. The order below is frozen and is
//! part of the model contract.

use serde::{Deserialize, Serialize};

use crate::corpus::ArticleDoc;
use crate::embedlex::{lexicon_ratio, tokenize, Tokens};
use crate::resources::{TextResources, MORAL_FOUNDATIONS};

/// Features per segment (title or body).
pub const SEGMENT_FEATURE_COUNT: usize = 51;

/// Length of a medium's article block: title segment then body segment.
pub const ARTICLE_BLOCK_LEN: usize = 2 * SEGMENT_FEATURE_COUNT;

const FIRST_PERSON: &[&str] = &[
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
];
const SECOND_PERSON: &[&str] = &["you", "your", "yours", "yourself", "yourselves"];
const THIRD_PERSON: &[&str] = &[
    "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "they",
    "them", "their", "theirs", "themselves",
];
const QUESTION_WORDS: &[&str] = &[
    "who", "what", "when", "where", "why", "how", "which", "whom", "whose",
];
const DEMONSTRATIVES: &[&str] = &["this", "that", "these", "those"];
const QUOTE_CHARS: &[char] = &['"', '\'', '\u{201C}', '\u{201D}', '\u{2018}', '\u{2019}'];

/// One entry of the per-segment feature manifest, exported as JSON alongside
/// trained models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleManifestEntry {
    pub name: String,
    pub group: String,
    pub index: usize,
}

/// The frozen (name, group) listing of the 51 per-segment features.
pub fn article_manifest() -> Vec<ArticleManifestEntry> {
    let fixed: [(&str, &str); 41] = [
        ("char_count", "structure"),
        ("word_count", "structure"),
        ("sentence_count", "structure"),
        ("avg_word_length", "structure"),
        ("avg_sentence_length_in_words", "structure"),
        ("exclamation_per_sentence", "structure"),
        ("question_per_sentence", "structure"),
        ("all_caps_word_ratio", "structure"),
        ("digit_token_ratio", "structure"),
        ("punctuation_per_token", "structure"),
        ("quote_char_count", "structure"),
        ("stopword_ratio", "structure"),
        ("first_person_pronoun_ratio", "structure"),
        ("second_person_pronoun_ratio", "structure"),
        ("third_person_pronoun_ratio", "structure"),
        ("starts_with_number", "structure"),
        ("contains_question_word", "structure"),
        ("contains_demonstrative", "structure"),
        ("contains_clickbait_phrase", "structure"),
        ("positive_lexicon_ratio", "sentiment"),
        ("negative_lexicon_ratio", "sentiment"),
        ("polarity", "sentiment"),
        ("subjectivity_lexicon_ratio", "sentiment"),
        ("negation_ratio", "sentiment"),
        ("science_lexicon_ratio", "topic"),
        ("personal_concern_lexicon_ratio", "topic"),
        ("type_token_ratio", "complexity"),
        ("flesch_reading_ease", "complexity"),
        ("flesch_kincaid_grade", "complexity"),
        ("gunning_fog", "complexity"),
        ("long_word_ratio", "complexity"),
        ("insight_ratio", "complexity"),
        ("discrepancy_ratio", "complexity"),
        ("certainty_ratio", "complexity"),
        ("tentative_ratio", "complexity"),
        ("hedge_ratio", "bias"),
        ("assertive_verb_ratio", "bias"),
        ("factive_verb_ratio", "bias"),
        ("implicative_verb_ratio", "bias"),
        ("report_verb_ratio", "bias"),
        ("bias_lexicon_ratio", "bias"),
    ];
    let mut names: Vec<(String, &str)> = fixed
        .iter()
        .map(|(n, g)| (n.to_string(), *g))
        .collect();
    for foundation in MORAL_FOUNDATIONS {
        names.push((format!("{foundation}_virtue_ratio"), "morality"));
        names.push((format!("{foundation}_vice_ratio"), "morality"));
    }
    let entries: Vec<ArticleManifestEntry> = names
        .into_iter()
        .enumerate()
        .map(|(index, (name, group))| ArticleManifestEntry {
            name,
            group: group.to_string(),
            index,
        })
        .collect();
    debug_assert_eq!(entries.len(), SEGMENT_FEATURE_COUNT);
    entries
}

/// Counts syllables as vowel groups (a, e, i, o, u, y runs), dropping a
/// terminal silent `e` unless the word ends in consonant+`le`, with a floor
/// of 1.
///
/// # Panics
/// Panics on an empty token.
pub fn count_syllables(word: &str) -> usize {
    assert!(!word.is_empty(), "count_syllables requires a non-empty token");
    let chars: Vec<char> = word.to_lowercase().chars().collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0usize;
    let mut in_group = false;
    for &c in &chars {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    let n = chars.len();
    if groups > 1 && chars[n - 1] == 'e' {
        let consonant_le =
            n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]) && chars[n - 3] != 'l';
        if !consonant_le {
            groups -= 1;
        }
    }
    groups.max(1)
}

fn ratio_of(tokens: &Tokens, pred: impl Fn(&str) -> bool) -> f64 {
    let hits = tokens.words.iter().filter(|w| pred(w)).count();
    hits as f64 / tokens.words.len().max(1) as f64
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Computes the 51 per-segment features in manifest order. Text with no
/// word tokens yields the zero vector.
pub fn segment_features(text: &str, res: &TextResources) -> Vec<f64> {
    let tokens = tokenize(text);
    if tokens.words.is_empty() {
        return vec![0.0; SEGMENT_FEATURE_COUNT];
    }

    let words = tokens.words.len() as f64;
    let sentences = tokens.sentences.max(1) as f64;
    let word_chars: usize = tokens.words.iter().map(|w| w.chars().count()).sum();
    let syllables: usize = tokens.words.iter().map(|w| count_syllables(w)).sum();
    let complex_words = tokens
        .words
        .iter()
        .filter(|w| count_syllables(w) >= 3)
        .count();

    let all_caps = tokens
        .raw
        .iter()
        .filter(|w| {
            let letters: Vec<char> = w.chars().filter(|c| c.is_alphabetic()).collect();
            letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase())
        })
        .count();
    let digit_tokens = tokens
        .words
        .iter()
        .filter(|w| w.chars().all(|c| c.is_ascii_digit()))
        .count();
    let exclamations = tokens.puncts.iter().filter(|c| **c == '!').count();
    let questions = tokens.puncts.iter().filter(|c| **c == '?').count();
    let quotes = tokens
        .puncts
        .iter()
        .filter(|c| QUOTE_CHARS.contains(c))
        .count();

    let normalized = text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ");
    let has_clickbait = res
        .clickbait_phrases
        .iter()
        .any(|p| normalized.contains(p.as_str()));

    let positive = lexicon_ratio(&tokens.words, &res.positive);
    let negative = lexicon_ratio(&tokens.words, &res.negative);
    let polarity = if positive + negative > 0.0 {
        (positive - negative) / (positive + negative)
    } else {
        0.0
    };

    let mut distinct: Vec<&String> = tokens.words.iter().collect();
    distinct.sort();
    distinct.dedup();

    let wps = words / sentences;
    let spw = syllables as f64 / words;

    let mut out = Vec::with_capacity(SEGMENT_FEATURE_COUNT);
    // structure
    out.push(text.chars().count() as f64);
    out.push(words);
    out.push(tokens.sentences as f64);
    out.push(word_chars as f64 / words);
    out.push(wps);
    out.push(exclamations as f64 / sentences);
    out.push(questions as f64 / sentences);
    out.push(all_caps as f64 / words);
    out.push(digit_tokens as f64 / words);
    out.push(tokens.puncts.len() as f64 / words);
    out.push(quotes as f64);
    out.push(ratio_of(&tokens, |w| res.stopwords.contains(w)));
    out.push(ratio_of(&tokens, |w| FIRST_PERSON.contains(&w)));
    out.push(ratio_of(&tokens, |w| SECOND_PERSON.contains(&w)));
    out.push(ratio_of(&tokens, |w| THIRD_PERSON.contains(&w)));
    out.push(flag(tokens.words[0].starts_with(|c: char| c.is_ascii_digit())));
    out.push(flag(tokens.words.iter().any(|w| QUESTION_WORDS.contains(&w.as_str()))));
    out.push(flag(tokens.words.iter().any(|w| DEMONSTRATIVES.contains(&w.as_str()))));
    out.push(flag(has_clickbait));
    // sentiment
    out.push(positive);
    out.push(negative);
    out.push(polarity);
    out.push(lexicon_ratio(&tokens.words, &res.subjectivity));
    out.push(lexicon_ratio(&tokens.words, &res.negation));
    // topic
    out.push(lexicon_ratio(&tokens.words, &res.science));
    out.push(lexicon_ratio(&tokens.words, &res.personal));
    // complexity
    out.push(distinct.len() as f64 / words);
    out.push(206.835 - 1.015 * wps - 84.6 * spw);
    out.push(0.39 * wps + 11.8 * spw - 15.59);
    out.push(0.4 * (wps + 100.0 * (complex_words as f64 / words)));
    out.push(ratio_of(&tokens, |w| w.chars().count() >= 7));
    out.push(lexicon_ratio(&tokens.words, &res.insight));
    out.push(lexicon_ratio(&tokens.words, &res.discrepancy));
    out.push(lexicon_ratio(&tokens.words, &res.certainty));
    out.push(lexicon_ratio(&tokens.words, &res.tentative));
    // bias
    out.push(lexicon_ratio(&tokens.words, &res.hedges));
    out.push(lexicon_ratio(&tokens.words, &res.assertives));
    out.push(lexicon_ratio(&tokens.words, &res.factives));
    out.push(lexicon_ratio(&tokens.words, &res.implicatives));
    out.push(lexicon_ratio(&tokens.words, &res.report_verbs));
    out.push(lexicon_ratio(&tokens.words, &res.bias));
    // morality
    for lex in &res.morality {
        out.push(lexicon_ratio(&tokens.words, lex));
    }

    debug_assert_eq!(out.len(), SEGMENT_FEATURE_COUNT);
    out
}

/// Title and body segment features of one article, concatenated.
pub fn article_features(article: &ArticleDoc, res: &TextResources) -> Vec<f64> {
    let mut v = segment_features(&article.title, res);
    v.extend(segment_features(&article.body, res));
    v
}

/// Component-wise mean of the per-article vectors; an empty article list
/// yields the zero vector.
pub fn medium_article_block(articles: &[ArticleDoc], res: &TextResources) -> Vec<f64> {
    let mut sum = vec![0.0; ARTICLE_BLOCK_LEN];
    if articles.is_empty() {
        return sum;
    }
    for article in articles {
        for (s, x) in sum.iter_mut().zip(article_features(article, res)) {
            *s += x;
        }
    }
    for s in &mut sum {
        *s /= articles.len() as f64;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::{bundled_resource_dir, load_resources};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn res() -> &'static TextResources {
        static RES: OnceLock<TextResources> = OnceLock::new();
        RES.get_or_init(|| load_resources(&bundled_resource_dir()).unwrap().text)
    }

    fn feature_index(name: &str) -> usize {
        article_manifest()
            .iter()
            .find(|e| e.name == name)
            .unwrap()
            .index
    }

    #[test]
    fn syllable_examples() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("believe"), 2);
        assert_eq!(count_syllables("incredible"), 4);
        assert_eq!(count_syllables("whale"), 1);
        assert_eq!(count_syllables("people"), 2);
        assert_eq!(count_syllables("mm"), 1);
        assert_eq!(count_syllables("2016"), 1);
    }

    #[test]
    #[should_panic(expected = "non-empty")]
    fn syllables_reject_empty() {
        count_syllables("");
    }

    #[test]
    fn manifest_is_well_formed() {
        let m = article_manifest();
        assert_eq!(m.len(), SEGMENT_FEATURE_COUNT);
        let mut names: Vec<&String> = m.iter().map(|e| &e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SEGMENT_FEATURE_COUNT, "names must be unique");
        for (i, e) in m.iter().enumerate() {
            assert_eq!(e.index, i);
        }
        let counts = |g: &str| m.iter().filter(|e| e.group == g).count();
        assert_eq!(counts("structure"), 19);
        assert_eq!(counts("sentiment"), 5);
        assert_eq!(counts("topic"), 2);
        assert_eq!(counts("complexity"), 9);
        assert_eq!(counts("bias"), 6);
        assert_eq!(counts("morality"), 10);
    }

    #[test]
    fn empty_text_is_zero_vector() {
        assert_eq!(segment_features("", res()), vec![0.0; SEGMENT_FEATURE_COUNT]);
    }

    #[test]
    fn cats_sleep_example() {
        let v = segment_features("Cats sleep.", res());
        assert_eq!(v[feature_index("word_count")], 2.0);
        assert_eq!(v[feature_index("sentence_count")], 1.0);
        assert_eq!(v[feature_index("type_token_ratio")], 1.0);
        assert_abs_diff_eq!(
            v[feature_index("flesch_kincaid_grade")],
            -3.01,
            epsilon = 1e-9
        );
    }

    #[test]
    fn clickbait_title_example() {
        let v = segment_features("You won't BELIEVE this!", res());
        assert_eq!(v[feature_index("contains_demonstrative")], 1.0);
        assert_eq!(v[feature_index("all_caps_word_ratio")], 0.25);
        assert_eq!(v[feature_index("exclamation_per_sentence")], 1.0);
        assert_eq!(v[feature_index("contains_clickbait_phrase")], 1.0);
        assert_eq!(v[feature_index("second_person_pronoun_ratio")], 0.25);
    }

    // Readability oracle: the three formulas evaluated by hand from
    // hand-counted words, sentences, syllables, and complex words.
    struct ReadabilityCase {
        text: &'static str,
        words: f64,
        sentences: f64,
        syllables: f64,
        complex: f64,
    }

    const READABILITY_CASES: [ReadabilityCase; 5] = [
        ReadabilityCase {
            text: "Cats sleep.",
            words: 2.0,
            sentences: 1.0,
            syllables: 2.0,
            complex: 0.0,
        },
        ReadabilityCase {
            text: "The cat sat on the mat.",
            words: 6.0,
            sentences: 1.0,
            syllables: 6.0,
            complex: 0.0,
        },
        ReadabilityCase {
            // in-cred-i-ble(4) dis-cov-er-ies(4) hap-pen(2),
            // scien-tists(2, heuristic) cel-e-brate(3) re-sults(2)
            text: "Incredible discoveries happen. Scientists celebrate results.",
            words: 6.0,
            sentences: 2.0,
            syllables: 17.0,
            complex: 3.0,
        },
        ReadabilityCase {
            // you(1) won't(1) be-lieve(2) this(1) | a-maz-ing(3)
            text: "You won't believe this! Amazing.",
            words: 5.0,
            sentences: 2.0,
            syllables: 8.0,
            complex: 1.0,
        },
        ReadabilityCase {
            // dr(1, floor) smith(1) won(1) real-ly(2); "Dr." does not end
            // a sentence.
            text: "Dr. Smith won. Really?",
            words: 4.0,
            sentences: 2.0,
            syllables: 5.0,
            complex: 0.0,
        },
    ];

    #[test]
    fn readability_matches_hand_computation() {
        for case in &READABILITY_CASES {
            let v = segment_features(case.text, res());
            let wps = case.words / case.sentences;
            let spw = case.syllables / case.words;
            let fre = 206.835 - 1.015 * wps - 84.6 * spw;
            let fk = 0.39 * wps + 11.8 * spw - 15.59;
            let fog = 0.4 * (wps + 100.0 * (case.complex / case.words));
            assert_abs_diff_eq!(v[feature_index("flesch_reading_ease")], fre, epsilon = 1e-9);
            assert_abs_diff_eq!(v[feature_index("flesch_kincaid_grade")], fk, epsilon = 1e-9);
            assert_abs_diff_eq!(v[feature_index("gunning_fog")], fog, epsilon = 1e-9);
        }
    }

    #[test]
    fn block_of_no_articles_is_zero() {
        assert_eq!(medium_article_block(&[], res()), vec![0.0; ARTICLE_BLOCK_LEN]);
    }

    #[test]
    fn block_of_one_article_is_its_vector() {
        let a = ArticleDoc {
            title: "Cats sleep.".into(),
            body: "The cat sat on the mat.".into(),
            published_at: None,
        };
        assert_eq!(
            medium_article_block(std::slice::from_ref(&a), res()),
            article_features(&a, res())
        );
    }

    #[test]
    fn block_averages_word_counts() {
        let mk = |title: &str| ArticleDoc {
            title: title.into(),
            body: String::new(),
            published_at: None,
        };
        let block = medium_article_block(&[mk("Cats sleep."), mk("The cat sat tight.")], res());
        assert_eq!(block[feature_index("word_count")], 3.0);
    }

    #[test]
    fn block_is_permutation_invariant_and_idempotent_on_duplicates() {
        let a = ArticleDoc {
            title: "Big news!".into(),
            body: "Something happened today. People noticed.".into(),
            published_at: None,
        };
        let b = ArticleDoc {
            title: "Quiet day".into(),
            body: "Nothing much occurred.".into(),
            published_at: None,
        };
        let ab = medium_article_block(&[a.clone(), b.clone()], res());
        let ba = medium_article_block(&[b.clone(), a.clone()], res());
        for (x, y) in ab.iter().zip(&ba) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
        let solo = medium_article_block(std::slice::from_ref(&a), res());
        let tripled = medium_article_block(&[a.clone(), a.clone(), a], res());
        for (x, y) in solo.iter().zip(&tripled) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn features_are_finite_and_ratios_bounded(text in "\\PC{0,120}") {
            let v = segment_features(&text, res());
            prop_assert_eq!(v.len(), SEGMENT_FEATURE_COUNT);
            for x in &v {
                prop_assert!(x.is_finite(), "non-finite feature for {:?}", text);
            }
            let manifest = article_manifest();
            for e in &manifest {
                let x = v[e.index];
                if e.name.ends_with("_ratio") {
                    prop_assert!((0.0..=1.0).contains(&x), "{} = {} out of range", e.name, x);
                }
                if e.name.starts_with("contains_") || e.name == "starts_with_number" {
                    prop_assert!(x == 0.0 || x == 1.0);
                }
            }
            let per_sentence = [
                v[feature_index("exclamation_per_sentence")],
                v[feature_index("question_per_sentence")],
            ];
            for x in per_sentence {
                prop_assert!(x >= 0.0);
            }
        }
    }
}
