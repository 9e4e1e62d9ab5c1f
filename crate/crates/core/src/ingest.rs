//! Triple-file readers and the canonical TSV writer.
//!
//! Both readers are all-or-nothing: the first offending line aborts the load
//! and is reported as a [`ParseDiagnostic`] carrying its 1-based line number.
//! LF and CRLF line endings are accepted; `#` comment lines and blank lines
//! are skipped.
//!
//! TSV lines are `head<TAB>relation<TAB>tail`. A line holding a single field
//! declares an entity without edges, which is how isolated entities survive a
//! round trip through [`write_tsv`].

use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{GraphBuilder, KnowledgeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    MalformedFields,
    EmptyLabel,
    BadTerminator,
    Encoding,
    UnsupportedLiteral,
    BlankNode,
    Io,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::MalformedFields => "malformed-fields",
            DiagnosticKind::EmptyLabel => "empty-label",
            DiagnosticKind::BadTerminator => "bad-terminator",
            DiagnosticKind::Encoding => "encoding",
            DiagnosticKind::UnsupportedLiteral => "unsupported-literal",
            DiagnosticKind::BlankNode => "blank-node",
            DiagnosticKind::Io => "io",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}: {excerpt}")]
pub struct ParseDiagnostic {
    /// 1-based.
    pub line: usize,
    pub kind: DiagnosticKind,
    pub excerpt: String,
}

const EXCERPT_CHARS: usize = 80;

impl ParseDiagnostic {
    fn new(line: usize, kind: DiagnosticKind, text: &str) -> Self {
        let mut excerpt: String = text.chars().take(EXCERPT_CHARS).collect();
        if text.chars().nth(EXCERPT_CHARS).is_some() {
            excerpt.push('…');
        }
        Self { line, kind, excerpt }
    }
}

/// Calls `f` on each non-blank, non-comment line with its 1-based number.
fn for_each_line<R, F>(mut reader: R, mut f: F) -> Result<(), ParseDiagnostic>
where
    R: BufRead,
    F: FnMut(usize, &str) -> Result<(), ParseDiagnostic>,
{
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| ParseDiagnostic::new(line_no + 1, DiagnosticKind::Io, &e.to_string()))?;
        if n == 0 {
            return Ok(());
        }
        line_no += 1;
        let mut bytes = &buf[..];
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest;
        }
        if let Some(rest) = bytes.strip_suffix(b"\r") {
            bytes = rest;
        }
        let line = std::str::from_utf8(bytes).map_err(|_| {
            ParseDiagnostic::new(
                line_no,
                DiagnosticKind::Encoding,
                &String::from_utf8_lossy(bytes),
            )
        })?;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        f(line_no, line)?;
    }
}

/// Parses tab-separated triples.
pub fn parse_tsv<R: BufRead>(reader: R) -> Result<KnowledgeGraph, ParseDiagnostic> {
    let mut builder = GraphBuilder::new();
    for_each_line(reader, |line_no, line| {
        let fields: Vec<&str> = line.split('\t').collect();
        let empty = || ParseDiagnostic::new(line_no, DiagnosticKind::EmptyLabel, line);
        match fields[..] {
            [entity] => builder.intern_entity(entity).map(drop).map_err(|_| empty()),
            [head, relation, tail] => builder
                .add_triple(head, relation, tail)
                .map_err(|_| empty()),
            _ => Err(ParseDiagnostic::new(
                line_no,
                DiagnosticKind::MalformedFields,
                line,
            )),
        }
    })?;
    Ok(builder.finish())
}

/// Parses the `<iri> <iri> <iri> .` subset of N-Triples.
///
/// IRIs are stored verbatim without the angle brackets. Literals and blank
/// nodes are rejected.
pub fn parse_ntriples<R: BufRead>(reader: R) -> Result<KnowledgeGraph, ParseDiagnostic> {
    let mut builder = GraphBuilder::new();
    for_each_line(reader, |line_no, line| {
        let [s, p, o] = parse_nt_line(line).map_err(|kind| ParseDiagnostic::new(line_no, kind, line))?;
        builder
            .add_triple(s, p, o)
            .map_err(|_| ParseDiagnostic::new(line_no, DiagnosticKind::EmptyLabel, line))
    })?;
    Ok(builder.finish())
}

fn parse_nt_line(line: &str) -> Result<[&str; 3], DiagnosticKind> {
    let mut rest = line;
    let mut terms = [""; 3];
    for term in &mut terms {
        rest = rest.trim_start_matches([' ', '\t']);
        if rest.starts_with('"') {
            return Err(DiagnosticKind::UnsupportedLiteral);
        }
        if rest.starts_with("_:") {
            return Err(DiagnosticKind::BlankNode);
        }
        let body = rest.strip_prefix('<').ok_or(DiagnosticKind::MalformedFields)?;
        let end = body.find('>').ok_or(DiagnosticKind::MalformedFields)?;
        *term = &body[..end];
        if term.trim().is_empty() {
            return Err(DiagnosticKind::EmptyLabel);
        }
        rest = &body[end + 1..];
    }
    rest = rest.trim_start_matches([' ', '\t']);
    let tail = rest.strip_prefix('.').ok_or(DiagnosticKind::BadTerminator)?;
    let tail = tail.trim_start_matches([' ', '\t']);
    if !(tail.is_empty() || tail.starts_with('#')) {
        return Err(DiagnosticKind::BadTerminator);
    }
    Ok(terms)
}

/// On-disk triple format, chosen from the file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Tsv,
    NTriples,
}

impl GraphFormat {
    /// `.nt` selects N-Triples; anything else is read as TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("nt") => GraphFormat::NTriples,
            _ => GraphFormat::Tsv,
        }
    }

    pub fn parse<R: BufRead>(self, reader: R) -> Result<KnowledgeGraph, ParseDiagnostic> {
        match self {
            GraphFormat::Tsv => parse_tsv(reader),
            GraphFormat::NTriples => parse_ntriples(reader),
        }
    }
}

/// Writes `graph` as TSV that [`parse_tsv`] reads back into an equal graph.
///
/// Every entity is first declared on its own line in id order. Triples follow,
/// ordered by `(relation, head, tail)` so relations are first seen in id order.
pub fn write_tsv<W: Write>(graph: &KnowledgeGraph, mut out: W) -> io::Result<()> {
    for e in graph.entities() {
        writeln!(out, "{}", graph.entity_label(e))?;
    }
    let mut triples: Vec<_> = graph.triples().collect();
    triples.sort_unstable_by_key(|t| (t.relation, t.head, t.tail));
    for t in triples {
        writeln!(
            out,
            "{}\t{}\t{}",
            graph.entity_label(t.head),
            graph.relation_label(t.relation),
            graph.entity_label(t.tail)
        )?;
    }
    Ok(())
}
