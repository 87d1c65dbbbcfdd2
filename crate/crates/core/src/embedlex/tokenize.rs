//! Rule-based Unicode tokenizer with sentence boundary detection.

/// Terms that suppress a sentence boundary when they precede a period.
/// Single letters ("J. Smith") are suppressed by a separate rule.
const ABBREVIATIONS: &[&str] = &[
    "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "vs", "etc", "inc", "ltd", "co", "corp",
    "gen", "sen", "rep", "gov", "capt", "col", "lt", "maj", "rev", "hon", "fig", "dept", "univ",
    "est", "approx", "ave", "blvd", "mt",
];

/// Tokenizer output. `words` are lowercased; `raw` keeps the original
/// casing of each word in parallel. Punctuation characters are returned
/// individually in `puncts`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tokens {
    pub words: Vec<String>,
    pub raw: Vec<String>,
    pub puncts: Vec<char>,
    pub sentences: usize,
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '\u{2019}'
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into lowercased word tokens (contiguous letter/digit/apostrophe
/// runs), single-character punctuation tokens, and sentences.
///
/// A sentence boundary is a `.`, `!`, or `?` followed by whitespace and an
/// uppercase letter, or by end of text. Periods after single letters and
/// after a bundled abbreviation list do not end sentences.
pub fn tokenize(text: &str) -> Tokens {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Tokens::default();
    // Word tokens seen since the last sentence boundary.
    let mut open_sentence = false;
    let mut last_word = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if is_token_char(c) {
            let start = i;
            while i < chars.len() && is_token_char(chars[i]) {
                i += 1;
            }
            let run = &chars[start..i];
            // Leading/trailing apostrophes are quotes, not word characters.
            let begin = run.iter().take_while(|c| is_apostrophe(**c)).count();
            let end = run[begin..]
                .iter()
                .rev()
                .take_while(|c| is_apostrophe(**c))
                .count();
            for &c in &run[..begin] {
                out.puncts.push(c);
            }
            let word: String = run[begin..run.len() - end].iter().collect();
            for &c in &run[run.len() - end..] {
                out.puncts.push(c);
            }
            // Lowercasing may introduce combining marks (e.g. `İ`); drop
            // anything that is no longer a token character so re-tokenizing
            // a word is the identity.
            let lower: String = word
                .to_lowercase()
                .chars()
                .filter(|c| is_token_char(*c))
                .collect();
            if !lower.is_empty() {
                last_word = lower.clone();
                out.words.push(lower);
                out.raw.push(word);
                open_sentence = true;
            }
        } else if c.is_whitespace() {
            i += 1;
        } else {
            out.puncts.push(c);
            if matches!(c, '.' | '!' | '?') && open_sentence {
                let suppressed = c == '.'
                    && (is_single_letter(&last_word) || ABBREVIATIONS.contains(&last_word.as_str()));
                if !suppressed {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_whitespace() {
                        j += 1;
                    }
                    let at_end = j >= chars.len();
                    let space_then_upper = j > i + 1 && chars[j].is_uppercase();
                    if at_end || space_then_upper {
                        out.sentences += 1;
                        open_sentence = false;
                    }
                }
            }
            i += 1;
        }
    }
    if open_sentence {
        out.sentences += 1;
    }
    out
}

fn is_single_letter(word: &str) -> bool {
    let mut it = word.chars();
    matches!((it.next(), it.next()), (Some(c), None) if c.is_alphabetic())
}
