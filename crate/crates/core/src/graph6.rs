//! The graph6 encoding for simple undirected graphs.
//!
//! A graph6 string is a size prefix followed by the upper triangle of the
//! adjacency matrix in column-major order, `x(0,1), x(0,2), x(1,2), x(0,3), ...`,
//! packed six bits per byte (most significant first) and offset by 63.
//! Sizes up to 62 take one byte; sizes up to 258047 take `~` plus three bytes.

use thiserror::Error;

use crate::graph::Graph;

/// Largest order expressible with the four-byte size prefix.
pub const MAX_ORDER: usize = 258_047;

const HEADER: &[u8] = b">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty input")]
    EmptyInput,
    #[error("malformed size prefix")]
    MalformedSize,
    #[error("graph6 encodes the empty graph (n = 0)")]
    ZeroOrder,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("payload truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{extra} unexpected bytes after the payload")]
    TrailingData { extra: usize },
    #[error("padding bits in the final byte are not zero")]
    NonZeroPadding,
    #[error("order {0} exceeds the graph6 limit of {MAX_ORDER}")]
    TooLarge(usize),
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses a single graph6 string (no trailing newline).
pub fn parse_graph6(text: &[u8]) -> Result<Graph, Graph6Error> {
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let (&first, _) = text.split_first().ok_or(Graph6Error::EmptyInput)?;
    if !(63..=126).contains(&first) {
        return Err(Graph6Error::InvalidByte { offset: 0, byte: first });
    }
    let (n, body_start) = if first < 126 {
        (usize::from(first - 63), 1)
    } else {
        let size = text.get(1..4).ok_or(Graph6Error::MalformedSize)?;
        if size[0] == 126 {
            // eight-byte prefix: only meaningful above MAX_ORDER
            return Err(Graph6Error::MalformedSize);
        }
        let mut n = 0usize;
        for (i, &b) in size.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::InvalidByte { offset: 1 + i, byte: b });
            }
            n = (n << 6) | usize::from(b - 63);
        }
        (n, 4)
    };
    if n == 0 {
        return Err(Graph6Error::ZeroOrder);
    }
    let body = &text[body_start..];
    if let Some((i, &b)) = body.iter().enumerate().find(|(_, b)| !(63..=126).contains(*b)) {
        return Err(Graph6Error::InvalidByte { offset: body_start + i, byte: b });
    }
    let expected = payload_len(n);
    if body.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: body.len() });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingData { extra: body.len() - expected });
    }
    let total_bits = n * (n - 1) / 2;
    if total_bits % 6 != 0 {
        let last = body[expected - 1] - 63;
        let pad = 6 - total_bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonZeroPadding);
        }
    }

    let mut g = Graph::edgeless_unchecked(n);
    let mut bit = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = body[bit / 6] - 63;
            if byte & (1 << (5 - bit % 6)) != 0 {
                g.set_edge(u, v);
            }
            bit += 1;
        }
    }
    Ok(g)
}

/// Encodes `g` with the shortest legal size prefix.
pub fn emit_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::with_capacity(4 + payload_len(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|b| b as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}
