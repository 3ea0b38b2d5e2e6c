//! Plain-text class catalogue: one class per line,
//! `n=<n> lines=<l1;l2;...> aut=<order> tags=<tag,...>`.

use std::fmt::Write as _;

use super::canon::{canonicalize, IsoClass};
use super::{parse_lines, LinearSpaceFunction};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub class: IsoClass,
}

fn tags_of(c: &IsoClass) -> String {
    let mut tags = Vec::new();
    if c.tags.is_superfiguration {
        tags.push("superfiguration");
    }
    if c.tags.is_configuration {
        tags.push("configuration");
    }
    if tags.is_empty() {
        "-".into()
    } else {
        tags.join(",")
    }
}

pub fn write_catalogue(classes: &[IsoClass]) -> String {
    let mut out = String::new();
    for c in classes {
        let _ = writeln!(out, "n={} lines={} aut={} tags={}", c.n(), lines_field(&c.canon), c.aut_order, tags_of(c));
    }
    out
}

fn lines_field(f: &LinearSpaceFunction) -> String {
    if f.num_lines() == 0 {
        "-".into()
    } else {
        f.lines_string()
    }
}

/// Parse a catalogue, recomputing automorphism orders and tags and checking
/// them against the recorded values.
pub fn parse_catalogue(text: &str) -> Result<Vec<CatalogueEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let (mut n, mut lines, mut aut, mut tags) = (None, None, None, None);
        for field in raw.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| err(format!("malformed field {field:?}")))?;
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|e| err(format!("bad n: {e}")))?),
                "lines" => lines = Some(value.to_string()),
                "aut" => aut = Some(value.parse::<u64>().map_err(|e| err(format!("bad aut: {e}")))?),
                "tags" => tags = Some(value.to_string()),
                _ => return Err(err(format!("unknown field {key:?}"))),
            }
        }
        let n = n.ok_or_else(|| err("missing n".into()))?;
        let lines = lines.ok_or_else(|| err("missing lines".into()))?;
        let masks = parse_lines(n, &lines).map_err(|e| err(e.to_string()))?;
        let f = LinearSpaceFunction::new(n, masks).map_err(|e| err(e.to_string()))?;
        let class = canonicalize(&f);
        if let Some(a) = aut {
            if a != class.aut_order {
                return Err(err(format!("recorded aut {a} but computed {}", class.aut_order)));
            }
        }
        if let Some(t) = tags {
            if t != tags_of(&class) {
                return Err(err(format!("recorded tags {t:?} but computed {:?}", tags_of(&class))));
            }
        }
        out.push(CatalogueEntry { class });
    }
    Ok(out)
}
