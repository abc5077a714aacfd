//! Shared tokenizer for the line-oriented text formats.

/// One non-blank, comment-stripped line.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub directive: &'a str,
    /// Whitespace-separated tokens after the directive.
    pub args: Vec<&'a str>,
    /// Everything after the directive, trimmed.
    pub rest: &'a str,
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if content.is_empty() {
            return None;
        }
        let (directive, rest) = content
            .split_once(char::is_whitespace)
            .map_or((content, ""), |(d, r)| (d, r.trim()));
        Some(Line {
            number: i + 1,
            directive,
            args: rest.split_whitespace().collect(),
            rest,
        })
    })
}

/// `[A-Za-z][A-Za-z0-9_]*`, optionally followed by primes.
pub(crate) fn is_name(s: &str, allow_primes: bool) -> bool {
    let core = if allow_primes { s.trim_end_matches('\'') } else { s };
    let mut chars = core.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A strictly positive decimal count.
pub(crate) fn positive(s: &str) -> Option<u32> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<u32>().ok().filter(|&c| c > 0)
}

pub(crate) fn natural(s: &str) -> Option<usize> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
