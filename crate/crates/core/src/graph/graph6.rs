//! graph6 encoding and the small pattern-name language
//! (`C<n>`, `P<n>`, `K<n>`, `S<n>`, optional `@<anchor>`).

use crate::error::{Error, Result};

use super::{AnchoredGraph, Graph};

const HEADER: &str = ">>graph6<<";

fn encode_size(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

/// Standard graph6 encoding (no header, no newline).
pub fn format_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    encode_size(n, &mut out);
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push((chunk + 63) as char);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((chunk << (6 - filled)) + 63) as char);
    }
    out
}

/// Parses one graph6 string. An optional `>>graph6<<` header and
/// surrounding whitespace are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let trimmed = text.trim();
    let body = trimmed.strip_prefix(HEADER).unwrap_or(trimmed);
    let bad = |reason: &str| Error::Graph6 {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(bad(&format!("byte {b} outside 63..=126")));
    }
    let value = |b: u8| (b - 63) as usize;
    let (n, rest) = if bytes[0] != b'~' {
        (value(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == b'~' {
        if bytes.len() < 8 {
            return Err(bad("truncated size header"));
        }
        let n = bytes[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | value(b));
        (n, &bytes[8..])
    } else {
        if bytes.len() < 4 {
            return Err(bad("truncated size header"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | value(b));
        (n, &bytes[4..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    if rest.len() != bits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for {n} vertices, found {}",
            bits.div_ceil(6),
            rest.len()
        )));
    }
    let bit = |k: usize| (value(rest[k / 6]) >> (5 - k % 6)) & 1 == 1;
    if (bits..rest.len() * 6).any(bit) {
        return Err(bad("nonzero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_edges(n, edges))
}

/// A parsed pattern: plain or anchored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Plain(Graph),
    Anchored(AnchoredGraph),
}

impl Pattern {
    pub fn graph(&self) -> &Graph {
        match self {
            Pattern::Plain(g) => g,
            Pattern::Anchored(a) => a.graph(),
        }
    }

    pub fn anchor(&self) -> Option<usize> {
        match self {
            Pattern::Plain(_) => None,
            Pattern::Anchored(a) => Some(a.anchor()),
        }
    }

    pub fn into_anchored(self) -> Option<AnchoredGraph> {
        match self {
            Pattern::Anchored(a) => Some(a),
            Pattern::Plain(_) => None,
        }
    }
}

pub(crate) fn split_anchor(text: &str) -> Result<(&str, Option<usize>)> {
    if let Some((head, tail)) = text.rsplit_once('@') {
        if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
            let anchor = tail
                .parse()
                .map_err(|_| Error::UnknownPattern(text.to_string()))?;
            return Ok((head, Some(anchor)));
        }
    }
    Ok((text, None))
}

fn named_graph(name: &str) -> Option<Result<Graph>> {
    let mut chars = name.chars();
    let family = chars.next()?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    let out_of_range = || Err(Error::UnknownPattern(name.to_string()));
    Some(match family {
        'C' if k >= 3 => Ok(Graph::cycle(k)),
        'P' if k >= 1 => Ok(Graph::path(k)),
        'K' if k >= 1 => Ok(Graph::complete(k)),
        'S' => Ok(Graph::star(k)),
        'C' | 'P' | 'K' => out_of_range(),
        _ => return None,
    })
}

fn attach_anchor(g: Graph, anchor: Option<usize>) -> Result<Pattern> {
    match anchor {
        None => Ok(Pattern::Plain(g)),
        Some(a) => Ok(Pattern::Anchored(AnchoredGraph::new(g, a)?)),
    }
}

/// Resolves a pattern name such as `C5`, `K4`, `S9` or `P3@1`.
///
/// Cycles are labeled `0-1-…-(n-1)-0`, paths `0-1-…-(n-1)` and stars have
/// center 0.
pub fn named_pattern(name: &str) -> Result<Pattern> {
    let (base, anchor) = split_anchor(name)?;
    match named_graph(base) {
        Some(g) => attach_anchor(g?, anchor),
        None => Err(Error::UnknownPattern(name.to_string())),
    }
}

/// Accepts either a pattern name or a graph6 string, each with an optional
/// `@<anchor>` suffix.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let text = text.trim();
    let (base, anchor) = split_anchor(text)?;
    match named_graph(base) {
        Some(g) => attach_anchor(g?, anchor),
        None => attach_anchor(parse_graph6(base)?, anchor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonical_form;
    use proptest::prelude::*;

    #[test]
    fn known_encodings() {
        // Reference strings produced by nauty's geng/showg conventions.
        let g = Graph::new(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(format_graph6(&g), "DQc");
        assert_eq!(format_graph6(&Graph::complete(4)), "C~");
        assert_eq!(format_graph6(&Graph::empty(0)), "?");
        assert_eq!(format_graph6(&Graph::empty(1)), "@");
        assert_eq!(parse_graph6(">>graph6<<DQc\n").unwrap(), g);
    }

    #[test]
    fn large_size_header_round_trips() {
        let g = Graph::path(100);
        let text = format_graph6(&g);
        assert!(text.starts_with('~'));
        assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn malformed_graph6() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D").is_err());
        assert!(parse_graph6("DQcc").is_err());
        assert!(parse_graph6("D\tQc").is_err());
        // K2 is "A_"; "A`" sets a padding bit.
        assert!(parse_graph6("A_").is_ok());
        assert!(parse_graph6("A`").is_err());
    }

    #[test]
    fn named_patterns() {
        let c5 = named_pattern("C5").unwrap();
        assert_eq!(c5.graph().edge_count(), 5);
        assert!(c5.graph().has_edge(0, 4));
        let p3 = named_pattern("P3@1").unwrap();
        assert_eq!(p3.anchor(), Some(1));
        assert_eq!(p3.graph().edges(), &[(0, 1), (1, 2)]);
        let s = named_pattern("S9").unwrap();
        assert_eq!(s.graph().vertex_count(), 10);
        assert_eq!(s.graph().degree(0), 9);
        assert!(named_pattern("X4").is_err());
        assert!(named_pattern("C2").is_err());
        assert!(matches!(
            named_pattern("P3@3"),
            Err(Error::AnchorOutOfRange { .. })
        ));
        let k4 = parse_pattern(&format_graph6(&Graph::complete(4))).unwrap();
        assert_eq!(
            canonical_form(k4.graph()).key,
            canonical_form(&Graph::complete(4)).key
        );
        assert_eq!(parse_pattern("A_@1").unwrap().anchor(), Some(1));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..70).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph6(&format_graph6(&g)).unwrap(), g);
        }
    }
}
