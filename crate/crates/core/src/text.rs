//! Tokenization shared by entity extraction and topic counting.
//!
//! Tokens are maximal runs of alphanumeric characters and periods, so
//! dotted forms like "l.a." and "o.d." survive as single tokens. Everything
//! else (whitespace, punctuation, apostrophes, hyphens) splits.

/// One token with its original casing preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub original: String,
    pub lower: String,
}

pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '.'))
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(|t| Token {
            original: t.to_string(),
            lower: t.to_lowercase(),
        })
        .collect()
}

/// True when the string contains at least one alphabetic character and all
/// its alphabetic characters are uppercase. Used to guard state-abbreviation
/// expansion ("MA" expands, "ma" does not).
pub fn is_fully_uppercase(s: &str) -> bool {
    let mut saw_alpha = false;
    for c in s.chars() {
        if c.is_alphabetic() {
            saw_alpha = true;
            if !c.is_uppercase() {
                return false;
            }
        }
    }
    saw_alpha
}
