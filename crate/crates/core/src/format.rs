//! The `.loop` table file format.
//!
//! ```text
//! # optional comment lines
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! Line 1 is the order `n`, followed by `n` rows of `n` space-separated
//! indices. Row `i`, column `j` holds the index of `eᵢ·eⱼ`. Element 0 must be
//! the identity, and the file must end with a newline.

use std::path::Path;

use crate::error::{LoopError, Result};
use crate::loops::FiniteLoop;

pub fn parse_loop(text: &str) -> Result<FiniteLoop> {
    if !text.ends_with('\n') {
        return Err(LoopError::Parse {
            line: text.lines().count().max(1),
            msg: "missing trailing newline".into(),
        });
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#'));

    let (lno, header) = lines.next().ok_or(LoopError::Parse {
        line: 1,
        msg: "missing order line".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| LoopError::Parse {
        line: lno,
        msg: format!("expected decimal order, found {header:?}"),
    })?;
    if n == 0 {
        return Err(LoopError::Parse {
            line: lno,
            msg: "order must be positive".into(),
        });
    }

    let mut rows = Vec::with_capacity(n);
    for (lno, line) in lines {
        if rows.len() == n {
            return Err(LoopError::Parse {
                line: lno,
                msg: format!("unexpected content after {n} rows"),
            });
        }
        let row = line
            .split(' ')
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| LoopError::Parse {
                    line: lno,
                    msg: format!("bad entry {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(LoopError::Parse {
                line: lno,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(LoopError::Parse {
            line: text.lines().count(),
            msg: format!("expected {n} rows, found {}", rows.len()),
        });
    }

    let (q, relabel) = FiniteLoop::from_table_reporting(&rows)?;
    if let Some(r) = relabel {
        return Err(LoopError::IdentityNotFirst(r.original_identity));
    }
    Ok(q)
}

pub fn to_loop_string(q: &FiniteLoop) -> String {
    let n = q.order();
    let mut out = String::with_capacity(n * n * 3 + 8);
    out.push_str(&n.to_string());
    out.push('\n');
    for a in q.elements() {
        let mut first = true;
        for v in q.row(a) {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Read errors are reported as `Err(io)`; content errors as `Ok(Err(..))`.
pub fn read_loop_file(path: &Path) -> std::io::Result<Result<FiniteLoop>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_loop(&text))
}

pub fn write_loop_file(path: &Path, q: &FiniteLoop) -> std::io::Result<()> {
    std::fs::write(path, to_loop_string(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = "3\n0 1 2\n1 2 0\n2 0 1\n";

    #[test]
    fn parses_and_serializes_identically() {
        let q = parse_loop(C3).unwrap();
        assert_eq!(q.order(), 3);
        assert_eq!(to_loop_string(&q), C3);
    }

    #[test]
    fn comments_are_skipped() {
        let text = "# cyclic of order 3\n3\n0 1 2\n# middle\n1 2 0\n2 0 1\n";
        assert_eq!(to_loop_string(&parse_loop(text).unwrap()), C3);
    }

    #[test]
    fn trailing_newline_required() {
        let err = parse_loop(C3.trim_end()).unwrap_err();
        assert!(matches!(err, LoopError::Parse { .. }));
    }

    #[test]
    fn short_row_is_a_parse_error() {
        let err = parse_loop("2\n0 1\n1\n").unwrap_err();
        assert_eq!(
            err,
            LoopError::Parse {
                line: 3,
                msg: "expected 2 entries, found 1".into()
            }
        );
    }

    #[test]
    fn identity_must_be_first() {
        let err = parse_loop("2\n1 0\n0 1\n").unwrap_err();
        assert_eq!(err, LoopError::IdentityNotFirst(1));
    }

    #[test]
    fn latin_violation_passes_through() {
        let err = parse_loop("2\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, LoopError::NotLatinSquare { .. }));
    }
}
