use aho_corasick::{AhoCorasick, MatchKind};
use serde::{Deserialize, Serialize};

use crate::dictionary::{canonicalize, EmotionDictionary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchMode {
    /// A term matches wherever it occurs as a substring; no delimiters
    /// are needed (Japanese and other unsegmented scripts).
    #[default]
    Substring,
    /// A term matches only when flanked by non-alphanumeric characters or
    /// the text boundary (space-delimited scripts).
    WordBoundary,
}

/// Single-pass multi-pattern matcher over canonicalized text.
#[derive(Debug, Clone)]
pub struct TermMatcher {
    terms: Vec<String>,
    automaton: AhoCorasick,
    mode: MatchMode,
}

impl TermMatcher {
    pub fn new(dict: &EmotionDictionary, mode: MatchMode) -> Self {
        Self::from_terms(dict.terms().map(str::to_string).collect(), mode)
    }

    /// `terms` must already be canonical.
    pub fn from_terms(terms: Vec<String>, mode: MatchMode) -> Self {
        // Standard semantics is required for overlapping search, which in
        // turn is what makes every term visible even when terms overlap.
        let automaton = AhoCorasick::builder()
            .match_kind(MatchKind::Standard)
            .build(&terms)
            .expect("dictionary terms form a valid automaton");
        Self {
            terms,
            automaton,
            mode,
        }
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    /// Indices of the terms present in `text` at least once, ascending.
    pub fn matched_terms(&self, text: &str) -> Vec<u32> {
        let canonical = canonicalize(text);
        let mut hit = vec![false; self.terms.len()];
        for m in self.automaton.find_overlapping_iter(&canonical) {
            if self.mode == MatchMode::WordBoundary
                && !at_word_boundary(&canonical, m.start(), m.end())
            {
                continue;
            }
            hit[m.pattern().as_usize()] = true;
        }
        hit.iter()
            .enumerate()
            .filter(|(_, h)| **h)
            .map(|(i, _)| i as u32)
            .collect()
    }
}

pub(crate) fn at_word_boundary(text: &str, start: usize, end: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matcher(terms: &[&str], mode: MatchMode) -> TermMatcher {
        TermMatcher::from_terms(terms.iter().map(|t| t.to_string()).collect(), mode)
    }

    #[test]
    fn overlapping_terms_all_found() {
        let m = matcher(&["悲し", "悲しい", "しい"], MatchMode::Substring);
        assert_eq!(m.matched_terms("今日は悲しい"), [0, 1, 2]);
    }

    #[test]
    fn repeated_term_reported_once() {
        let m = matcher(&["tired", "sad"], MatchMode::Substring);
        assert_eq!(m.matched_terms("tired tired tired"), [0]);
        assert_eq!(m.matched_terms("sad and tired"), [0, 1]);
    }

    #[test]
    fn text_is_canonicalized() {
        let m = matcher(&["ab", "カタカナ"], MatchMode::Substring);
        assert_eq!(m.matched_terms("ＡＢ ｶﾀｶﾅ"), [0, 1]);
    }

    #[test]
    fn word_boundary_mode() {
        let m = matcher(&["sad"], MatchMode::WordBoundary);
        assert!(m.matched_terms("saddle").is_empty());
        assert_eq!(m.matched_terms("so sad."), [0]);
        assert_eq!(m.matched_terms("sad"), [0]);
        let s = matcher(&["sad"], MatchMode::Substring);
        assert_eq!(s.matched_terms("saddle"), [0]);
    }
}
