//! The `crg 1` text format for edge colorings.
//!
//! ```text
//! crg 1
//! n 4
//! 1 2 0
//! 1 3 0
//! 2 3 1
//! ...
//! ```
//!
//! Writers emit one line per edge in colexicographic order with normalized
//! colors, so a coloring has exactly one serialized form. Lines starting with
//! `#` are metadata comments: parsers collect and otherwise ignore them. A
//! parser accepts edges in any order and any raw colors, renormalizing and
//! flagging the document when the input was not already in written form.

use thiserror::Error;

use crate::coloring::{ColoringError, EdgeColoring, Vertex};

/// A parsed `crg 1` document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrgDocument {
    pub coloring: EdgeColoring,
    /// Comment lines, in order, without the leading `#`.
    pub comments: Vec<String>,
    /// True when the input colors were not already normalized.
    pub renormalized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrgError {
    #[error("empty input, expected `crg 1` header")]
    MissingHeader,
    #[error("unsupported header `{0}`, expected `crg 1`")]
    BadHeader(String),
    #[error("missing `n <count>` line")]
    MissingVertexCount,
    #[error("line {line}: second `n` line")]
    DuplicateVertexCount { line: usize },
    #[error("line {line}: edge before the `n` line")]
    EdgeBeforeVertexCount { line: usize },
    #[error("line {line}: expected `<u> <v> <color>`, got `{content}`")]
    Malformed { line: usize, content: String },
    #[error("line {line}: `{token}` is not a number")]
    BadNumber { line: usize, token: String },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Serializes a coloring, interleaving the given comment lines after the
/// header. The output is deterministic: colex edge order, normalized colors.
pub fn write_crg(chi: &EdgeColoring, comments: &[String]) -> String {
    let mut out = String::from("crg 1\n");
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("n {}\n", chi.n()));
    for (u, v, c) in chi.edges() {
        out.push_str(&format!("{u} {v} {c}\n"));
    }
    out
}

/// Parses a `crg 1` document. See the module docs for reader tolerance.
pub fn parse_crg(text: &str) -> Result<CrgDocument, CrgError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            None => return Err(CrgError::MissingHeader),
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
        }
    };
    if header.trim() != "crg 1" {
        return Err(CrgError::BadHeader(header.trim().to_string()));
    }

    let mut comments = Vec::new();
    let mut n: Option<u32> = None;
    let mut entries: Vec<(Vertex, Vertex, i64)> = Vec::new();
    for (idx, raw_line) in lines {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            comments.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["n", count] => {
                if n.is_some() {
                    return Err(CrgError::DuplicateVertexCount { line: line_no });
                }
                n = Some(parse_num(count, line_no)?);
            }
            [u, v, c] => {
                if n.is_none() {
                    return Err(CrgError::EdgeBeforeVertexCount { line: line_no });
                }
                entries.push((
                    parse_num(u, line_no)?,
                    parse_num(v, line_no)?,
                    parse_num(c, line_no)?,
                ));
            }
            _ => {
                return Err(CrgError::Malformed { line: line_no, content: line.to_string() })
            }
        }
    }

    let n = n.ok_or(CrgError::MissingVertexCount)?;
    let coloring = EdgeColoring::from_edge_list(n, &entries)?;
    let renormalized = entries
        .iter()
        .any(|&(u, v, raw)| raw != coloring.color(u, v) as i64);
    Ok(CrgDocument { coloring, comments, renormalized })
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T, CrgError> {
    token
        .parse()
        .map_err(|_| CrgError::BadNumber { line, token: token.to_string() })
}
