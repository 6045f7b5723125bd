//! graph6 reading and writing.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";
const BIAS: u8 = 63;

/// Parses one graph6 line. A leading `>>graph6<<` header and trailing line terminators are
/// ignored. Both the one-byte and the `~`-prefixed three-byte size encodings are read.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let body = line.strip_prefix(HEADER).unwrap_or(line).as_bytes();
    if let Some(&b) = body.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::MalformedGraph6(format!(
            "byte {b:#04x} outside 63..=126"
        )));
    }
    let (n, rest) = match body {
        [] => return Err(Error::MalformedGraph6("empty input".into())),
        [126, 126, ..] => {
            return Err(Error::MalformedGraph6(
                "eight-byte size encoding is not supported".into(),
            ))
        }
        [126, a, b, c, rest @ ..] => {
            let n =
                ((*a - BIAS) as usize) << 12 | ((*b - BIAS) as usize) << 6 | (*c - BIAS) as usize;
            (n, rest)
        }
        [126, ..] => return Err(Error::MalformedGraph6("truncated size field".into())),
        [first, rest @ ..] => ((first - BIAS) as usize, rest),
    };
    if n > MAX_VERTICES {
        return Err(Error::SizeUnsupported(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if rest.len() < need {
        return Err(Error::MalformedGraph6(format!(
            "bit field truncated: {} bytes, expected {need}",
            rest.len()
        )));
    }
    if rest.len() > need {
        return Err(Error::MalformedGraph6(format!(
            "{} trailing bytes after the bit field",
            rest.len() - need
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = rest[k / 6] - BIAS;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Writes `g` in graph6 without a header or trailing newline. Only the one-byte size
/// encoding is produced, so `n ≤ 62`.
pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > 62 {
        return Err(Error::SizeUnsupported(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(1 + bits.div_ceil(6));
    out.push(n as u8 + BIAS);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn mk(s: &str) -> Graph {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(write_graph6(&mk("K2")).unwrap(), "A_");
        let g = parse_graph6("A?").unwrap();
        assert_eq!((g.n(), g.m()), (2, 0));
        let c5 = mk("C5");
        assert_eq!(parse_graph6(&write_graph6(&c5).unwrap()).unwrap(), c5);
    }

    #[test]
    fn known_strings() {
        // nauty output for K4 and the 5-cycle 0-1-2-3-4-0
        assert_eq!(write_graph6(&mk("K4")).unwrap(), "C~");
        assert_eq!(write_graph6(&mk("C5")).unwrap(), "Dhc");
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap(), mk("K4"));
        assert_eq!(write_graph6(&Graph::empty(0).unwrap()).unwrap(), "?");
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph6("A"), Err(Error::MalformedGraph6(_))));
        assert!(matches!(
            parse_graph6("A_?"),
            Err(Error::MalformedGraph6(_))
        ));
        assert!(matches!(parse_graph6("A "), Err(Error::MalformedGraph6(_))));
        assert!(matches!(parse_graph6(""), Err(Error::MalformedGraph6(_))));
        assert!(matches!(parse_graph6("~?"), Err(Error::MalformedGraph6(_))));
        assert!(matches!(
            parse_graph6("~~??????"),
            Err(Error::MalformedGraph6(_))
        ));
        assert_eq!(
            write_graph6(&mk("K1,62")).unwrap_err(),
            Error::SizeUnsupported(63)
        );
        assert_eq!(
            parse_graph6("~?D?").unwrap_err(),
            Error::SizeUnsupported(320)
        );
    }

    #[test]
    fn three_byte_size() {
        // n = 63 with no edges
        let bits: usize = 63 * 62 / 2;
        let s = format!("~??~{}", "?".repeat(bits.div_ceil(6)));
        let g = parse_graph6(&s).unwrap();
        assert_eq!((g.n(), g.m()), (63, 0));
    }

    #[test]
    fn lenient_padding() {
        // K2 with a stray padding bit set
        assert_eq!(parse_graph6("A`").unwrap(), mk("K2"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip(n in 0usize..=62, seed in any::<u64>()) {
                let mut state = seed;
                let mut e = Vec::new();
                for j in 1..n {
                    for i in 0..j {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        if state >> 62 == 0 {
                            e.push((i, j));
                        }
                    }
                }
                let g = Graph::from_edges(n, &e).unwrap();
                let s = write_graph6(&g).unwrap();
                prop_assert!(!s.ends_with('\n'));
                prop_assert_eq!(parse_graph6(&s).unwrap(), g);
            }
        }
    }
}
