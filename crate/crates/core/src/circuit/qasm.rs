//! Line-oriented QASM dialect with parallel bundles and waits.
//!
//! ```text
//! qubits 3
//! h q0
//! { cnot q0,q1 | h q2 }
//! qwait 12
//! swap q1,q2   # swap inserted
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use super::{Circuit, GateKind, InstrId, Instruction, Qubit};

const INSERTED_TAG: &str = "swap inserted";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("undeclared qubit `{0}`")]
    UndeclaredQubit(String),
    #[error("qubit `{0}` declared twice")]
    Redeclared(String),
    #[error("qubit `{0}` used twice in one bundle")]
    QubitReused(String),
    #[error("`{gate}` takes {expected} operand(s), found {found}")]
    Arity {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid wait count `{0}`")]
    BadWait(String),
}

struct Parser {
    names: Vec<String>,
    index: HashMap<String, u32>,
    body: Vec<Vec<Instruction>>,
    next_id: u32,
}

/// Splits `text` on `sep`, yielding each trimmed piece with its byte offset.
fn split_with_offsets(text: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == sep {
            out.push(trimmed(text, base, start, i));
            start = i + ch.len_utf8();
        }
    }
    out.push(trimmed(text, base, start, text.len()));
    out
}

fn trimmed(text: &str, base: usize, start: usize, end: usize) -> (usize, &str) {
    let piece = &text[start..end];
    let lead = piece.len() - piece.trim_start().len();
    (base + start + lead, piece.trim())
}

impl Parser {
    fn declare(&mut self, name: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if self.index.contains_key(name) {
            return Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::Redeclared(name.to_string()),
            });
        }
        self.index.insert(name.to_string(), self.names.len() as u32);
        self.names.push(name.to_string());
        Ok(())
    }

    fn line(&mut self, lineno: usize, raw: &str) -> Result<(), ParseError> {
        let err = |col: usize, kind| ParseError {
            line: lineno,
            col: col + 1,
            kind,
        };
        let (code, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
            None => (raw, None),
        };
        let lead = code.len() - code.trim_start().len();
        let code = code.trim();
        if code.is_empty() {
            return Ok(());
        }

        let (word, rest) = match code.find(char::is_whitespace) {
            Some(i) => (&code[..i], code[i..].trim()),
            None => (code, ""),
        };
        match word {
            "qubits" => {
                let n: u32 = rest
                    .parse()
                    .map_err(|_| err(lead, ParseErrorKind::Syntax(format!("bad qubit count `{rest}`"))))?;
                let start = self.names.len() as u32;
                for i in start..start + n {
                    self.declare(&format!("q{i}"), lineno, lead + 1)?;
                }
                return Ok(());
            }
            "qubit" => {
                if rest.is_empty() || rest.contains(|c: char| c.is_whitespace() || c == ',') {
                    return Err(err(lead, ParseErrorKind::Syntax("expected one qubit name".into())));
                }
                return self.declare(rest, lineno, lead + 1);
            }
            "qwait" => {
                let n: u64 = rest
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| err(lead, ParseErrorKind::BadWait(rest.to_string())))?;
                self.body.push(vec![Instruction::wait(self.next_id, n)]);
                self.next_id += 1;
                return Ok(());
            }
            _ => {}
        }

        let stmts = if let Some(inner) = code.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| err(lead + code.len(), ParseErrorKind::Syntax("missing `}`".into())))?;
            split_with_offsets(inner, lead + 1, '|')
        } else {
            vec![(lead, code)]
        };

        let mut bundle = Vec::with_capacity(stmts.len());
        let mut used: Vec<Qubit> = Vec::new();
        for (col, stmt) in stmts {
            if stmt.is_empty() {
                return Err(err(col, ParseErrorKind::Syntax("empty bundle entry".into())));
            }
            let (name, args) = match stmt.find(char::is_whitespace) {
                Some(i) => (&stmt[..i], &stmt[i..]),
                None => (stmt, ""),
            };
            let kind = GateKind::from_mnemonic(name)
                .ok_or_else(|| err(col, ParseErrorKind::UnknownGate(name.to_string())))?;
            if kind == GateKind::Wait {
                return Err(err(col, ParseErrorKind::Syntax("qwait cannot appear in a bundle".into())));
            }
            let args_base = col + name.len();
            let operands: Vec<(usize, &str)> = if args.trim().is_empty() {
                Vec::new()
            } else {
                split_with_offsets(args, args_base, ',')
            };
            if operands.len() != kind.arity() {
                return Err(err(
                    col,
                    ParseErrorKind::Arity {
                        gate: name.to_string(),
                        expected: kind.arity(),
                        found: operands.len(),
                    },
                ));
            }
            let mut qubits = Vec::with_capacity(operands.len());
            for (qcol, qname) in operands {
                let q = *self
                    .index
                    .get(qname)
                    .ok_or_else(|| err(qcol, ParseErrorKind::UndeclaredQubit(qname.to_string())))?;
                let q = Qubit(q);
                if used.contains(&q) {
                    return Err(err(qcol, ParseErrorKind::QubitReused(qname.to_string())));
                }
                used.push(q);
                qubits.push(q);
            }
            bundle.push(Instruction {
                id: InstrId(self.next_id),
                kind,
                operands: qubits,
                wait_cycles: 0,
                inserted: false,
            });
            self.next_id += 1;
        }

        if let Some(tag) = comment.and_then(|c| c.strip_prefix(INSERTED_TAG)) {
            let tag = tag.trim();
            match tag.strip_prefix(':') {
                Some(list) => {
                    for pos in list.split(',') {
                        let pos: usize = pos.trim().parse().map_err(|_| {
                            err(raw.len(), ParseErrorKind::Syntax("bad swap annotation".into()))
                        })?;
                        match bundle.get_mut(pos) {
                            Some(ins) if ins.kind == GateKind::Swap => ins.inserted = true,
                            _ => {
                                return Err(err(
                                    raw.len(),
                                    ParseErrorKind::Syntax("annotation names a non-swap entry".into()),
                                ))
                            }
                        }
                    }
                }
                None => {
                    for ins in bundle.iter_mut().filter(|i| i.kind == GateKind::Swap) {
                        ins.inserted = true;
                    }
                }
            }
        }
        self.body.push(bundle);
        Ok(())
    }
}

/// Parses the dialect into a [`Circuit`]. Qubit names are canonicalized to
/// `q<index>` in declaration order.
pub fn parse_qasm(text: &str) -> Result<Circuit, ParseError> {
    let mut p = Parser {
        names: Vec::new(),
        index: HashMap::new(),
        body: Vec::new(),
        next_id: 0,
    };
    for (i, line) in text.lines().enumerate() {
        p.line(i + 1, line)?;
    }
    let mut c = Circuit::new(p.names.len());
    c.body = p.body;
    Ok(c)
}

pub(crate) struct Line<'a>(pub(crate) &'a [Instruction]);

impl fmt::Display for Line<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bundle = self.0;
        if let [only] = bundle {
            write!(f, "{only}")?;
        } else {
            f.write_str("{ ")?;
            for (i, ins) in bundle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{ins}")?;
            }
            f.write_str(" }")?;
        }
        let swaps: Vec<&Instruction> = bundle.iter().filter(|i| i.kind == GateKind::Swap).collect();
        if swaps.iter().any(|i| i.inserted) {
            if swaps.iter().all(|i| i.inserted) {
                write!(f, "  # {INSERTED_TAG}")?;
            } else {
                let pos: Vec<String> = bundle
                    .iter()
                    .enumerate()
                    .filter(|(_, i)| i.inserted)
                    .map(|(k, _)| k.to_string())
                    .collect();
                write!(f, "  # {INSERTED_TAG}: {}", pos.join(","))?;
            }
        }
        Ok(())
    }
}

/// Emits the circuit in the dialect. Consecutive wait steps are merged and
/// every qubit is printed as `q<index>`.
pub fn emit_qasm(c: &Circuit) -> String {
    let c = c.canonicalize();
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", c.n_qubits());
    for bundle in &c.body {
        let _ = writeln!(out, "{}", Line(bundle));
    }
    out
}
