//! Text format for projective planes:
//!
//! ```text
//! plane v1 order=<q> points=<N> lines=<N>
//! <q+1 increasing point indices per line, N lines>
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;

use super::{Point, ProjectivePlane};
use crate::error::{Error, Result};

struct Header {
    order: u64,
    points: u64,
    lines: u64,
}

fn parse_header(line: &str, line_no: usize) -> Result<Header> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("plane") || tokens.next() != Some("v1") {
        return Err(err("expected header `plane v1 order=<q> points=<N> lines=<N>`".into()));
    }
    let (mut order, mut points, mut lines) = (None, None, None);
    for tok in tokens {
        let (key, value) = tok.split_once('=').ok_or_else(|| err(format!("malformed header field {tok:?}")))?;
        let value: u64 = value.parse().map_err(|e| err(format!("bad value for {key}: {e}")))?;
        match key {
            "order" => order = Some(value),
            "points" => points = Some(value),
            "lines" => lines = Some(value),
            _ => return Err(err(format!("unknown header field {key:?}"))),
        }
    }
    let missing = |k: &str| err(format!("header is missing {k}"));
    Ok(Header {
        order: order.ok_or_else(|| missing("order"))?,
        points: points.ok_or_else(|| missing("points"))?,
        lines: lines.ok_or_else(|| missing("lines"))?,
    })
}

/// Parse and fully validate a plane file.
pub fn parse_plane(text: &str, label: impl Into<String>) -> Result<ProjectivePlane> {
    let mut header = None;
    let mut lines: Vec<Vec<Point>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(h) = &header else {
            header = Some(parse_header(content, line_no)?);
            continue;
        };
        let pts: Vec<Point> = content
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse { line: line_no, msg: format!("bad point {t:?}: {e}") }))
            .collect::<Result<_>>()?;
        if pts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { line: line_no, msg: "point indices must be strictly increasing".into() });
        }
        if pts.len() as u64 != h.order + 1 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("line has {} points, expected {}", pts.len(), h.order + 1),
            });
        }
        if let Some(&p) = pts.iter().find(|&&p| p as u64 >= h.points) {
            return Err(Error::Parse { line: line_no, msg: format!("point {p} outside 0..{}", h.points) });
        }
        lines.push(pts);
    }
    let h = header.ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let expected = h.order * h.order + h.order + 1;
    if h.order < 2 {
        return Err(Error::Axiom(format!("order {} is below 2", h.order)));
    }
    if h.points != expected {
        return Err(Error::Axiom(format!("point count {} ≠ {expected}", h.points)));
    }
    if h.lines != expected {
        return Err(Error::Axiom(format!("line count {} ≠ {expected}", h.lines)));
    }
    if lines.len() as u64 != expected {
        return Err(Error::Axiom(format!("line count {} ≠ {expected}", lines.len())));
    }
    ProjectivePlane::from_lines(lines, label)
}

/// Serialize with lines in lexicographic order.
pub fn serialize_plane(plane: &ProjectivePlane) -> String {
    let n = plane.num_points();
    let mut out = format!("plane v1 order={} points={n} lines={n}\n", plane.order());
    for line in plane.lines() {
        let row: Vec<String> = line.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::FiniteField;

    fn pg(q: u64) -> ProjectivePlane {
        ProjectivePlane::pg2(&FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn round_trip() {
        for q in [2, 3, 4, 5] {
            let p = pg(q);
            let text = serialize_plane(&p);
            assert_eq!(parse_plane(&text, "file").unwrap(), p);
            assert_eq!(serialize_plane(&parse_plane(&text, "file").unwrap()), text);
        }
    }

    #[test]
    fn missing_line_reports_count() {
        let text = serialize_plane(&pg(2));
        let truncated: Vec<&str> = text.lines().take(7).collect();
        let err = parse_plane(&truncated.join("\n"), "fano").unwrap_err();
        assert_eq!(err.to_string(), "axiom violation: line count 6 ≠ 7");
    }

    #[test]
    fn duplicated_pair_is_named() {
        let text = "plane v1 order=2 points=7 lines=7\n0 1 2\n0 1 3\n0 4 5\n1 4 6\n2 3 4\n2 5 6\n3 5 6\n";
        let err = parse_plane(text, "bad").unwrap_err();
        assert!(matches!(err, Error::Axiom(_)));
        assert!(err.to_string().contains("points 0 and 1"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let mut text = String::from("# the Fano plane\n\n");
        text.push_str(&serialize_plane(&pg(2)).replace('\n', "  # row\n"));
        assert_eq!(parse_plane(&text, "fano").unwrap(), pg(2));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_plane("plane v1 order=2 points=7 lines=7\n0 1 x\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_plane("plane v2\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_plane("plane v1 order=2 points=7 lines=7\n2 1 0\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
