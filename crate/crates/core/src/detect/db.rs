use std::collections::BTreeSet;

/// Hardcoded string delimiters and block-comment seed pairs.
///
/// Immutable once built; shared by reference across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDatabase {
    string_tokens: Vec<String>,
    block_pairs: Vec<(String, String)>,
}

const STRING_TOKENS: &[&str] = &["\"", "'", "`", "\"\"\"", "'''"];

const BLOCK_PAIRS: &[(&str, &str)] = &[
    ("/*", "*/"),
    ("(*", "*)"),
    ("<!--", "-->"),
    ("{-", "-}"),
    ("\"\"\"", "\"\"\""),
    ("'''", "'''"),
    ("=begin", "=end"),
    ("=pod", "=cut"),
    ("#|", "|#"),
    ("--[[", "]]"),
    ("%{", "%}"),
    ("<#", "#>"),
];

impl Default for TokenDatabase {
    fn default() -> Self {
        TokenDatabase::new(
            STRING_TOKENS.iter().map(|s| s.to_string()),
            BLOCK_PAIRS
                .iter()
                .map(|(o, c)| (o.to_string(), c.to_string())),
        )
    }
}

impl TokenDatabase {
    /// Builds a database, dropping empty or whitespace-containing tokens.
    pub fn new(
        string_tokens: impl IntoIterator<Item = String>,
        block_pairs: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        let valid = |t: &str| !t.is_empty() && !t.chars().any(char::is_whitespace);
        let mut string_tokens: Vec<String> = string_tokens
            .into_iter()
            .filter(|t| valid(t))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // longest first so `"""` is tried before `"`
        string_tokens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (open, close) in block_pairs {
            if valid(&open) && valid(&close) && !pairs.iter().any(|(o, _)| *o == open) {
                pairs.push((open, close));
            }
        }
        pairs.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.cmp(b)));
        TokenDatabase {
            string_tokens,
            block_pairs: pairs,
        }
    }

    /// String tokens, longest first.
    pub fn string_tokens(&self) -> &[String] {
        &self.string_tokens
    }

    /// Seed block pairs, longest opener first.
    pub fn block_pairs(&self) -> &[(String, String)] {
        &self.block_pairs
    }

    pub fn closer_for(&self, opener: &str) -> Option<&str> {
        self.block_pairs
            .iter()
            .find(|(o, _)| o == opener)
            .map(|(_, c)| c.as_str())
    }

    pub fn is_opener(&self, token: &str) -> bool {
        self.block_pairs.iter().any(|(o, _)| o == token)
    }

    /// True for tokens that only ever close a seed pair (`*/`, `-->`).
    pub fn is_closer_only(&self, token: &str) -> bool {
        !self.is_opener(token) && self.block_pairs.iter().any(|(_, c)| c == token)
    }

    /// Longest seed opener that `token` starts with (`/**` → `/*`).
    pub fn opener_prefix_of(&self, token: &str) -> Option<&str> {
        self.block_pairs
            .iter()
            .map(|(o, _)| o.as_str())
            .find(|o| token.starts_with(o))
    }

    pub(crate) fn opener_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.block_pairs.iter().flat_map(|(o, _)| o.chars())
    }
}
