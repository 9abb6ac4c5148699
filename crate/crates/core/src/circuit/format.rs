//! Circuit text format: a `qubits <total>` header, `prep <qubit> <0|1|+>`
//! lines for non-open qubits, then one gate per line:
//!
//! ```text
//! qubits 4
//! prep 0 +
//! H q3
//! CH q0 q3
//! CU q0 q3 <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
//! CCX q0 q3 q5
//! X q2
//! PHASE q9 <theta>
//! ```
//!
//! `#` starts a comment; synthesized files carry their source diagram in
//! `# src:` comment lines so a downstream simulate step can rebuild the
//! amplitude oracle. Floats use 17 significant digits.

use super::{Circuit, Gate, Matrix2, Prep};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct CircuitParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> CircuitParseError {
    CircuitParseError {
        line,
        message: message.into(),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

const SOURCE_PREFIX: &str = "# src: ";

impl Circuit {
    pub fn parse(text: &str) -> Result<Circuit, CircuitParseError> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if circuit.is_none() {
                if tokens[0] != "qubits" {
                    return Err(err(line, "expected `qubits <total>` header"));
                }
                let total: usize = parse_tok(line, &tokens, 1, "qubit count")?;
                circuit = Some(Circuit::new(total));
                continue;
            }
            let c = circuit.as_mut().expect("header seen");
            match tokens[0] {
                "prep" => {
                    let q: usize = parse_tok(line, &tokens, 1, "prep qubit")?;
                    if q >= c.qubits {
                        return Err(err(line, format!("prep qubit {q} out of range")));
                    }
                    c.prep[q] = match *tokens
                        .get(2)
                        .ok_or_else(|| err(line, "missing prep value"))?
                    {
                        "0" => Prep::Zero,
                        "1" => Prep::One,
                        "+" => Prep::Plus,
                        other => return Err(err(line, format!("unknown prep value `{other}`"))),
                    };
                }
                "X" => c.gates.push(Gate::X(parse_qubit(line, &tokens, 1)?)),
                "H" => c.gates.push(Gate::H(parse_qubit(line, &tokens, 1)?)),
                "CH" => c.gates.push(Gate::Ch {
                    control: parse_qubit(line, &tokens, 1)?,
                    target: parse_qubit(line, &tokens, 2)?,
                }),
                "CU" => {
                    let control = parse_qubit(line, &tokens, 1)?;
                    let target = parse_qubit(line, &tokens, 2)?;
                    if tokens.len() != 11 {
                        return Err(err(line, "CU expects 8 matrix entries"));
                    }
                    let mut vals = [0.0f64; 8];
                    for (k, slot) in vals.iter_mut().enumerate() {
                        *slot = parse_tok(line, &tokens, 3 + k, "matrix entry")?;
                    }
                    let matrix: Matrix2 = [
                        [
                            Complex64::new(vals[0], vals[1]),
                            Complex64::new(vals[2], vals[3]),
                        ],
                        [
                            Complex64::new(vals[4], vals[5]),
                            Complex64::new(vals[6], vals[7]),
                        ],
                    ];
                    c.gates.push(Gate::Cu { control, target, matrix });
                }
                "CCX" => c.gates.push(Gate::Ccx {
                    control0: parse_qubit(line, &tokens, 1)?,
                    control1: parse_qubit(line, &tokens, 2)?,
                    target: parse_qubit(line, &tokens, 3)?,
                }),
                "PHASE" => c.gates.push(Gate::Phase {
                    target: parse_qubit(line, &tokens, 1)?,
                    theta: parse_tok(line, &tokens, 2, "phase angle")?,
                }),
                other => return Err(err(line, format!("unknown gate `{other}`"))),
            }
        }
        let c = circuit.ok_or_else(|| err(0, "empty circuit file"))?;
        c.check().map_err(|e| err(0, e.to_string()))?;
        Ok(c)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("qubits {}\n", self.qubits));
        for (q, prep) in self.prep.iter().enumerate() {
            let value = match prep {
                Prep::Zero => "0",
                Prep::One => "1",
                Prep::Plus => "+",
                Prep::Open => continue,
            };
            out.push_str(&format!("prep {q} {value}\n"));
        }
        for gate in &self.gates {
            match gate {
                Gate::X(t) => out.push_str(&format!("X q{t}\n")),
                Gate::H(t) => out.push_str(&format!("H q{t}\n")),
                Gate::Ch { control, target } => {
                    out.push_str(&format!("CH q{control} q{target}\n"))
                }
                Gate::Cu { control, target, matrix } => {
                    out.push_str(&format!("CU q{control} q{target}"));
                    for row in matrix {
                        for entry in row {
                            out.push_str(&format!(" {} {}", fmt_f64(entry.re), fmt_f64(entry.im)));
                        }
                    }
                    out.push('\n');
                }
                Gate::Ccx { control0, control1, target } => {
                    out.push_str(&format!("CCX q{control0} q{control1} q{target}\n"))
                }
                Gate::Phase { target, theta } => {
                    out.push_str(&format!("PHASE q{target} {}\n", fmt_f64(*theta)))
                }
            }
        }
        out
    }

    /// Serialization preceded by the source diagram embedded as comments,
    /// one `# src:` line per diagram line.
    pub fn serialize_with_source(&self, source: &str) -> String {
        let mut out = String::new();
        for line in source.lines() {
            out.push_str(SOURCE_PREFIX);
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.serialize());
        out
    }
}

/// Recover the diagram text embedded by [`Circuit::serialize_with_source`].
pub fn embedded_source(text: &str) -> Option<String> {
    let lines: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix(SOURCE_PREFIX))
        .collect();
    if lines.is_empty() {
        None
    } else {
        Some(lines.join("\n"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn parse_tok<T: std::str::FromStr>(
    line: usize,
    tokens: &[&str],
    idx: usize,
    what: &str,
) -> Result<T, CircuitParseError> {
    let tok = tokens
        .get(idx)
        .ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("cannot parse {what} `{tok}`")))
}

fn parse_qubit(line: usize, tokens: &[&str], idx: usize) -> Result<usize, CircuitParseError> {
    let tok = tokens
        .get(idx)
        .ok_or_else(|| err(line, "missing qubit operand"))?;
    let digits = tok
        .strip_prefix('q')
        .ok_or_else(|| err(line, format!("qubit operand `{tok}` must look like q3")))?;
    digits
        .parse()
        .map_err(|_| err(line, format!("cannot parse qubit id `{tok}`")))
}
