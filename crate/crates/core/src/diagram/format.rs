//! Line-oriented text format for diagrams.
//!
//! ```text
//! wfbdd v1
//! nvars 4
//! terminal0 0
//! terminal1 1
//! node 2 var 1 e0 3 1.0000000000000000e0 0.0000000000000000e0 e1 4 ...
//! root 2
//! ```
//!
//! `#` starts a comment. Unweighted files omit the four weight fields per
//! node line; mixing both arities is an error. The serializer emits weights
//! with 17 significant digits, which round-trips `f64` bit-exactly. Node
//! lines may appear in any order; the version header must come first.

use super::{Diagram, DiagramBuilder};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

const HEADER: &str = "wfbdd v1";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Format a float with 17 significant digits.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct NodeLine {
    line: usize,
    id: u32,
    var: usize,
    e0: (u32, Complex64),
    e1: (u32, Complex64),
    weighted: bool,
}

impl Diagram {
    pub fn parse(text: &str) -> Result<Diagram, ParseError> {
        let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                None
            } else {
                Some((i + 1, body))
            }
        });

        let (header_line, header) = lines.next().ok_or_else(|| err(0, "empty file"))?;
        if header != HEADER {
            return Err(err(header_line, format!("expected `{HEADER}` header")));
        }

        let mut nvars: Option<(usize, usize)> = None;
        let mut terminal0: Option<(usize, u32)> = None;
        let mut terminal1: Option<(usize, u32)> = None;
        let mut root: Option<(usize, u32)> = None;
        let mut nodes: Vec<NodeLine> = Vec::new();

        for (line, body) in lines {
            let tokens: Vec<&str> = body.split_whitespace().collect();
            match tokens[0] {
                "nvars" => {
                    if nvars.is_some() {
                        return Err(err(line, "duplicate nvars line"));
                    }
                    let n = parse_num::<usize>(line, &tokens, 1, "variable count")?;
                    nvars = Some((line, n));
                }
                "terminal0" => {
                    if terminal0.is_some() {
                        return Err(err(line, "duplicate terminal0 line"));
                    }
                    terminal0 = Some((line, parse_num(line, &tokens, 1, "terminal0 id")?));
                }
                "terminal1" => {
                    if terminal1.is_some() {
                        return Err(err(line, "duplicate terminal1 line"));
                    }
                    terminal1 = Some((line, parse_num(line, &tokens, 1, "terminal1 id")?));
                }
                "root" => {
                    if root.is_some() {
                        return Err(err(line, "duplicate root line"));
                    }
                    root = Some((line, parse_num(line, &tokens, 1, "root id")?));
                }
                "node" => nodes.push(parse_node(line, &tokens)?),
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            }
        }

        let (_, n) = nvars.ok_or_else(|| err(0, "missing nvars line"))?;
        let (_, root_id) = root.ok_or_else(|| err(0, "missing root line"))?;

        let weighted = match nodes.first() {
            Some(first) => {
                if let Some(mixed) = nodes.iter().find(|n| n.weighted != first.weighted) {
                    return Err(err(
                        mixed.line,
                        "mix of weighted and unweighted node lines",
                    ));
                }
                first.weighted
            }
            // No internal nodes: nothing fixes the flag, default unweighted.
            None => false,
        };

        let mut b = DiagramBuilder::new(n, weighted);
        if let Some((_, id)) = terminal0 {
            b.terminal0(id);
        }
        if let Some((_, id)) = terminal1 {
            b.terminal1(id);
        }
        for node in &nodes {
            b.node(node.id, node.var, node.e0, node.e1);
        }
        b.root(root_id);
        b.build().map_err(|e| err(0, e.to_string()))
    }

    /// Serialize in the canonical order: header, nvars, terminals, nodes in
    /// ascending id, root last.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!("nvars {}\n", self.var_count()));
        if let Some(t) = self.terminal0() {
            out.push_str(&format!("terminal0 {t}\n"));
        }
        if let Some(t) = self.terminal1() {
            out.push_str(&format!("terminal1 {t}\n"));
        }
        for (id, var, e0, e1) in self.internals() {
            if self.is_weighted() {
                out.push_str(&format!(
                    "node {id} var {var} e0 {} {} {} e1 {} {} {}\n",
                    e0.head,
                    fmt_f64(e0.weight.re),
                    fmt_f64(e0.weight.im),
                    e1.head,
                    fmt_f64(e1.weight.re),
                    fmt_f64(e1.weight.im),
                ));
            } else {
                out.push_str(&format!("node {id} var {var} e0 {} e1 {}\n", e0.head, e1.head));
            }
        }
        out.push_str(&format!("root {}\n", self.root()));
        out
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn parse_num<T: std::str::FromStr>(
    line: usize,
    tokens: &[&str],
    idx: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tokens
        .get(idx)
        .ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("cannot parse {what} `{tok}`")))
}

fn parse_node(line: usize, tokens: &[&str]) -> Result<NodeLine, ParseError> {
    // node <id> var <i> e0 <head> [<re> <im>] e1 <head> [<re> <im>]
    let weighted = match tokens.len() {
        8 => false,
        12 => true,
        got => {
            return Err(err(
                line,
                format!("node line has {got} tokens, expected 8 (unweighted) or 12 (weighted)"),
            ))
        }
    };
    if tokens[2] != "var" {
        return Err(err(line, "expected `var` keyword"));
    }
    let id = parse_num(line, tokens, 1, "node id")?;
    let var = parse_num(line, tokens, 3, "variable index")?;
    let (e0_at, e1_at) = if weighted { (4, 8) } else { (4, 6) };
    let parse_edge = |at: usize, label: &str| -> Result<(u32, Complex64), ParseError> {
        if tokens[at] != label {
            return Err(err(line, format!("expected `{label}` keyword")));
        }
        let head = parse_num(line, tokens, at + 1, "edge head id")?;
        let weight = if weighted {
            Complex64::new(
                parse_num(line, tokens, at + 2, "weight real part")?,
                parse_num(line, tokens, at + 3, "weight imaginary part")?,
            )
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok((head, weight))
    };
    let e0 = parse_edge(e0_at, "e0")?;
    let e1 = parse_edge(e1_at, "e1")?;
    Ok(NodeLine {
        line,
        id,
        var,
        e0,
        e1,
        weighted,
    })
}
