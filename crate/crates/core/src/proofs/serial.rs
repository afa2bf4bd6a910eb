//! Text serialization of proof trees.
//!
//! The format is indentation-based with two-space steps and one `key: value`
//! per line:
//!
//! ```text
//! bound: |abAB| <= 2
//! proof: triangle-inequality
//!   first:
//!     bound: |a| <= 1
//!     proof: length-is-normalized
//!   second:
//!     bound: |bAB| <= 1
//!     proof: conjugacy-invariance
//!       conjugated-by: b
//!       base:
//!         bound: |A| <= 1
//!         proof: length-is-normalized
//! ```
//!
//! Step names are `empty-word`, `length-is-normalized`, `elementary`,
//! `triangle-inequality`, `conjugacy-invariance`, and `homogeneity` (an
//! elementary bound justified by `exponent` and a nested `power-proof`).
//! Parsing preserves the stored statements verbatim; consistency checking is
//! the verifier's job.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::freegroup::Word;

use super::{format_statement, PowerJustification, ProofStep, ProofTree};

/// Rejected input to [`deserialize`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TreeParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

/// Serializes the certificate, expanding shared subproofs.
pub fn serialize(tree: &ProofTree) -> String {
    let mut out = String::new();
    write_node(&mut out, tree, 0);
    out
}

fn write_node(out: &mut String, node: &ProofTree, depth: usize) {
    let pad = "  ".repeat(depth);
    let statement = format_statement(node.subject(), &node.value().to_string());
    let _ = writeln!(out, "{pad}bound: {statement}");
    match node.step() {
        ProofStep::EmptyWord => {
            let _ = writeln!(out, "{pad}proof: empty-word");
        }
        ProofStep::Normalized { .. } => {
            let _ = writeln!(out, "{pad}proof: length-is-normalized");
        }
        ProofStep::Elementary { origin: None } => {
            let _ = writeln!(out, "{pad}proof: elementary");
        }
        ProofStep::Elementary { origin: Some(pj) } => {
            let _ = writeln!(out, "{pad}proof: homogeneity");
            let _ = writeln!(out, "{pad}  exponent: {}", pj.exponent);
            let _ = writeln!(out, "{pad}  power-proof:");
            write_node(out, &pj.power_proof, depth + 2);
        }
        ProofStep::Triangle { first, second } => {
            let _ = writeln!(out, "{pad}proof: triangle-inequality");
            let _ = writeln!(out, "{pad}  first:");
            write_node(out, first, depth + 2);
            let _ = writeln!(out, "{pad}  second:");
            write_node(out, second, depth + 2);
        }
        ProofStep::Conjugacy { conjugator, inner } => {
            let _ = writeln!(out, "{pad}proof: conjugacy-invariance");
            let _ = writeln!(out, "{pad}  conjugated-by: {conjugator}");
            let _ = writeln!(out, "{pad}  base:");
            write_node(out, inner, depth + 2);
        }
    }
}

/// Parses a serialized certificate back into a tree.
pub fn deserialize(text: &str) -> Result<ProofTree, TreeParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if raw.contains('\t') {
            return Err(TreeParseError {
                line: number,
                message: "tabs are not allowed in indentation".into(),
            });
        }
        let spaces = raw.len() - raw.trim_start_matches(' ').len();
        if spaces % 2 != 0 {
            return Err(TreeParseError {
                line: number,
                message: format!("odd indentation of {spaces} spaces"),
            });
        }
        lines.push(SourceLine {
            number,
            depth: spaces / 2,
            content: &raw[spaces..],
        });
    }
    let mut pos = 0;
    let root = parse_node(&lines, &mut pos, 0)?;
    if pos != lines.len() {
        return Err(TreeParseError {
            line: lines[pos].number,
            message: "trailing content after the root proof".into(),
        });
    }
    Ok(root)
}

struct SourceLine<'a> {
    number: usize,
    depth: usize,
    content: &'a str,
}

fn parse_node(
    lines: &[SourceLine<'_>],
    pos: &mut usize,
    depth: usize,
) -> Result<ProofTree, TreeParseError> {
    let (subject, value) = {
        let line = expect_key(lines, pos, depth, "bound")?;
        parse_statement(line.content["bound:".len()..].trim_start(), line.number)?
    };
    let kind_line = expect_key(lines, pos, depth, "proof")?;
    let kind = kind_line.content["proof:".len()..].trim();
    let kind_number = kind_line.number;
    let step = match kind {
        "empty-word" => ProofStep::EmptyWord,
        "length-is-normalized" => {
            if subject.len() != 1 {
                return Err(TreeParseError {
                    line: kind_number,
                    message: format!(
                        "length-is-normalized subject must be a single letter, got {:?}",
                        subject.to_string()
                    ),
                });
            }
            ProofStep::Normalized {
                letter: subject.letters()[0],
            }
        }
        "elementary" => ProofStep::Elementary { origin: None },
        "homogeneity" => {
            let exp_line = expect_key(lines, pos, depth + 1, "exponent")?;
            let exponent: u32 = exp_line.content["exponent:".len()..]
                .trim()
                .parse()
                .map_err(|_| TreeParseError {
                    line: exp_line.number,
                    message: "exponent must be a positive integer".into(),
                })?;
            if exponent == 0 {
                return Err(TreeParseError {
                    line: exp_line.number,
                    message: "exponent must be at least 1".into(),
                });
            }
            expect_block_key(lines, pos, depth + 1, "power-proof")?;
            let power_proof = parse_node(lines, pos, depth + 2)?;
            ProofStep::Elementary {
                origin: Some(PowerJustification {
                    base: subject.clone(),
                    exponent,
                    power_proof: Arc::new(power_proof),
                }),
            }
        }
        "triangle-inequality" => {
            expect_block_key(lines, pos, depth + 1, "first")?;
            let first = parse_node(lines, pos, depth + 2)?;
            expect_block_key(lines, pos, depth + 1, "second")?;
            let second = parse_node(lines, pos, depth + 2)?;
            ProofStep::Triangle {
                first: Arc::new(first),
                second: Arc::new(second),
            }
        }
        "conjugacy-invariance" => {
            let conj_line = expect_key(lines, pos, depth + 1, "conjugated-by")?;
            let conj_text = conj_line.content["conjugated-by:".len()..].trim();
            let conjugator = Word::parse(conj_text).map_err(|e| TreeParseError {
                line: conj_line.number,
                message: format!("bad conjugator: {e}"),
            })?;
            expect_block_key(lines, pos, depth + 1, "base")?;
            let inner = parse_node(lines, pos, depth + 2)?;
            ProofStep::Conjugacy {
                conjugator,
                inner: Arc::new(inner),
            }
        }
        other => {
            return Err(TreeParseError {
                line: kind_number,
                message: format!("unknown proof step {other:?}"),
            })
        }
    };
    Ok(ProofTree::raw(subject, value, step))
}

/// Consumes the next line, which must be `key: …` at exactly `depth`.
fn expect_key<'a, 'b>(
    lines: &'a [SourceLine<'b>],
    pos: &mut usize,
    depth: usize,
    key: &str,
) -> Result<&'a SourceLine<'b>, TreeParseError> {
    let line = lines.get(*pos).ok_or_else(|| TreeParseError {
        line: lines.last().map_or(1, |l| l.number),
        message: format!("unexpected end of input, expected {key:?}"),
    })?;
    if line.depth != depth {
        return Err(TreeParseError {
            line: line.number,
            message: format!(
                "expected {key:?} indented {} spaces, found indentation of {}",
                depth * 2,
                line.depth * 2
            ),
        });
    }
    if !line.content.starts_with(key) || !line.content[key.len()..].starts_with(':') {
        return Err(TreeParseError {
            line: line.number,
            message: format!("expected key {key:?}, found {:?}", line.content),
        });
    }
    *pos += 1;
    Ok(line)
}

/// Consumes a bare block opener `key:` with nothing after the colon.
fn expect_block_key(
    lines: &[SourceLine<'_>],
    pos: &mut usize,
    depth: usize,
    key: &str,
) -> Result<(), TreeParseError> {
    let line = expect_key(lines, pos, depth, key)?;
    if !line.content[key.len() + 1..].trim().is_empty() {
        return Err(TreeParseError {
            line: line.number,
            message: format!("key {key:?} opens a block and takes no inline value"),
        });
    }
    Ok(())
}

/// Parses the statement atom `|word| <= value`.
fn parse_statement(text: &str, number: usize) -> Result<(Word, f64), TreeParseError> {
    let err = |message: String| TreeParseError {
        line: number,
        message,
    };
    let rest = text
        .strip_prefix('|')
        .ok_or_else(|| err(format!("expected statement '|word| <= value', found {text:?}")))?;
    let bar = rest
        .find('|')
        .ok_or_else(|| err("unterminated word in statement".into()))?;
    let word_text = &rest[..bar];
    let subject = Word::parse(word_text)
        .map_err(|e| err(format!("bad word in statement: {e}")))?;
    let value_text = rest[bar + 1..]
        .strip_prefix(" <= ")
        .ok_or_else(|| err("expected ' <= ' after the word".into()))?;
    let value: f64 = value_text
        .trim()
        .parse()
        .map_err(|_| err(format!("bad numeric value {value_text:?}")))?;
    if !value.is_finite() || value < 0.0 {
        return Err(err(format!(
            "bound value must be finite and nonnegative, got {value_text:?}"
        )));
    }
    Ok((subject, value))
}
