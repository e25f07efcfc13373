//! Line-oriented interchange format.
//!
//! ```text
//! # source: hand-made example
//! # canonical: true
//! n=3
//! 0 0 2
//! 2 0 1
//! ...
//! ```
//!
//! Metadata lives in `# key: value` comments before the header; other
//! comment lines are ignored. Elements are `x y s` triples in scanline
//! order. A file may hold several documents, each starting at its own
//! `n=` header.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Dissection, GeometryError, SquareElement};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<bool>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        self.source.is_none() && self.canonical.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionDocument {
    pub n: u32,
    pub elements: Vec<SquareElement>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no document found")]
    Empty,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

impl DissectionDocument {
    pub fn new(d: &Dissection) -> Self {
        DissectionDocument { n: d.n(), elements: d.elements().to_vec(), metadata: Metadata::default() }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.metadata.source = Some(source.into());
        self
    }

    pub fn with_canonical(mut self, canonical: bool) -> Self {
        self.metadata.canonical = Some(canonical);
        self
    }

    /// Validates the elements as an exact cover.
    pub fn to_dissection(&self) -> Result<Dissection, GeometryError> {
        Dissection::new(self.n, self.elements.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(source) = &self.metadata.source {
            out.push_str(&format!("# source: {}\n", source.replace('\n', " ")));
        }
        if let Some(canonical) = self.metadata.canonical {
            out.push_str(&format!("# canonical: {canonical}\n"));
        }
        out.push_str(&format!("n={}\n", self.n));
        for e in &self.elements {
            out.push_str(&format!("{} {} {}\n", e.x, e.y, e.s));
        }
        out
    }
}

/// Text form of a dissection without metadata.
pub fn emit(d: &Dissection) -> String {
    DissectionDocument::new(d).to_text()
}

/// Several documents separated by blank lines.
pub fn emit_many<'a>(docs: impl IntoIterator<Item = &'a DissectionDocument>) -> String {
    docs.into_iter().map(DissectionDocument::to_text).collect::<Vec<_>>().join("\n")
}

/// Every document in `text`, in order. Elements are not checked for
/// exact cover here; see [`DissectionDocument::to_dissection`].
pub fn parse_documents(text: &str) -> Result<Vec<DissectionDocument>, ParseError> {
    let mut docs: Vec<DissectionDocument> = Vec::new();
    let mut pending = Metadata::default();
    let mut current: Option<DissectionDocument> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "source" => pending.source = Some(value.to_string()),
                    "canonical" => {
                        let flag = value.parse().map_err(|_| syntax(line_no, format!("bad canonical flag `{value}`")))?;
                        pending.canonical = Some(flag);
                    }
                    _ => {}
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            let n = rest.trim().parse().map_err(|_| syntax(line_no, format!("bad size `{rest}`")))?;
            docs.extend(current.take());
            current = Some(DissectionDocument { n, elements: Vec::new(), metadata: std::mem::take(&mut pending) });
            continue;
        }
        let doc = current.as_mut().ok_or_else(|| syntax(line_no, "element before `n=` header"))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y, s] = fields[..] else {
            return Err(syntax(line_no, format!("expected `x y s`, found `{line}`")));
        };
        let num = |v: &str| v.parse::<u32>().map_err(|_| syntax(line_no, format!("bad number `{v}`")));
        doc.elements.push(SquareElement::new(num(x)?, num(y)?, num(s)?));
    }
    docs.extend(current);
    Ok(docs)
}

/// Exactly one validated dissection.
pub fn parse(text: &str) -> Result<Dissection, ParseError> {
    let docs = parse_documents(text)?;
    match docs.as_slice() {
        [doc] => Ok(doc.to_dissection()?),
        [] => Err(ParseError::Empty),
        _ => Err(syntax(0, format!("expected one document, found {}", docs.len()))),
    }
}

/// Every document, validated.
pub fn parse_many(text: &str) -> Result<Vec<Dissection>, ParseError> {
    parse_documents(text)?.iter().map(|doc| Ok(doc.to_dissection()?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_survives() {
        let d = Dissection::whole(3);
        let doc = DissectionDocument::new(&d).with_source("unit test").with_canonical(true);
        let text = doc.to_text();
        assert!(text.starts_with("# source: unit test\n# canonical: true\nn=3\n"));
        assert_eq!(parse_documents(&text).unwrap(), vec![doc]);
    }

    #[test]
    fn several_documents() {
        let a = DissectionDocument::new(&Dissection::whole(2));
        let b = DissectionDocument::new(&Dissection::whole(5)).with_canonical(false);
        let text = emit_many([&a, &b]);
        assert_eq!(parse_documents(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse("0 0 1\n"), Err(syntax(1, "element before `n=` header")));
        assert!(matches!(parse("n=2\n0 0\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse("n=2\n0 0 1\n"), Err(ParseError::Geometry(GeometryError::AreaMismatch { .. }))));
        assert_eq!(parse("# nothing\n"), Err(ParseError::Empty));
    }
}
