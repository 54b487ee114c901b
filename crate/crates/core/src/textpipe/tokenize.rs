use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub position: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, position: usize) -> Self {
        Self {
            text: text.into(),
            position,
        }
    }
}

/// Lowercases `text` and returns its maximal alphanumeric runs that are at
/// least `min_token_length` characters long.
pub fn tokenize(text: &str, min_token_length: usize) -> Vec<Token> {
    let lowered = text.to_lowercase();
    lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty() && w.chars().count() >= min_token_length)
        .enumerate()
        .map(|(position, w)| Token::new(w, position))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn sentence_tokens() {
        let t = tokenize("To Sherlock Holmes she is always THE woman.", 1);
        assert_eq!(
            words(&t),
            ["to", "sherlock", "holmes", "she", "is", "always", "the", "woman"]
        );
        assert!(t.iter().enumerate().all(|(i, tok)| tok.position == i));
    }

    #[test]
    fn empty_and_punctuation_only() {
        assert!(tokenize("", 1).is_empty());
        assert!(tokenize(" ,.;-- !", 1).is_empty());
    }

    #[test]
    fn min_length_and_hyphens() {
        assert_eq!(words(&tokenize("e-mail 2nd", 1)), ["e", "mail", "2nd"]);
        assert_eq!(words(&tokenize("e-mail 2nd", 2)), ["mail", "2nd"]);
        assert_eq!(words(&tokenize("don't", 1)), ["don", "t"]);
    }

    #[test]
    fn unicode_lowercase() {
        assert_eq!(words(&tokenize("Ärger café ÉCOLE", 1)), ["ärger", "café", "école"]);
    }
}
