//! Human-readable proof lines.
//!
//! Line grammar (bit-exact for golden files):
//!
//! ```text
//! line := "|" word "| <= " number [" using " ref (" and " ref)? (" by taking " int "th power")?]
//! ref  := "|" word "| <= " number
//! ```
//!
//! One line is emitted per distinct derived statement, deduplicated by
//! (formatted subject, formatted value) with the first derivation winning,
//! in an order where every reference points to an earlier line.

use std::collections::{HashMap, HashSet};

use num::BigRational;

use super::{format_statement, EvalMode, ProofStep, ProofTree};

/// Renders the certificate as proof lines, with values formatted in the
/// requested arithmetic.
pub fn render_text(tree: &ProofTree, mode: EvalMode) -> Vec<String> {
    let mut renderer = Renderer {
        mode,
        lines: Vec::new(),
        emitted: HashSet::new(),
        statements: HashMap::new(),
        rationals: HashMap::new(),
    };
    renderer.walk(tree);
    renderer.lines
}

struct Renderer {
    mode: EvalMode,
    lines: Vec<String>,
    /// Statements already emitted, keyed by their exact text.
    emitted: HashSet<String>,
    /// Statement text per visited node, to avoid re-walking shared subproofs.
    statements: HashMap<*const ProofTree, String>,
    /// Memo for exact re-evaluation in rational mode.
    rationals: HashMap<*const ProofTree, BigRational>,
}

impl Renderer {
    /// Emits the lines for `node` (children first) and returns its statement.
    fn walk(&mut self, node: &ProofTree) -> String {
        let key = node as *const ProofTree;
        if let Some(statement) = self.statements.get(&key) {
            return statement.clone();
        }
        let statement = format_statement(node.subject(), &self.value_string(node));
        if self.emitted.contains(&statement) {
            // Same statement already derived elsewhere; the earlier
            // derivation stands and this subtree contributes nothing new.
            self.statements.insert(key, statement.clone());
            return statement;
        }
        let line = match node.step() {
            ProofStep::EmptyWord | ProofStep::Normalized { .. } => statement.clone(),
            ProofStep::Elementary { origin: None } => statement.clone(),
            ProofStep::Elementary { origin: Some(pj) } => {
                let power_statement = self.walk(&pj.power_proof);
                format!(
                    "{} using {} by taking {}th power",
                    statement, power_statement, pj.exponent
                )
            }
            ProofStep::Triangle { first, second } => {
                let first_statement = self.walk(first);
                let second_statement = self.walk(second);
                format!(
                    "{} using {} and {}",
                    statement, first_statement, second_statement
                )
            }
            ProofStep::Conjugacy { inner, .. } => {
                let inner_statement = self.walk(inner);
                format!("{} using {}", statement, inner_statement)
            }
        };
        self.lines.push(line);
        self.emitted.insert(statement.clone());
        self.statements.insert(key, statement.clone());
        statement
    }

    fn value_string(&mut self, node: &ProofTree) -> String {
        match self.mode {
            EvalMode::Float => node.value().to_string(),
            EvalMode::Rational => self.rational_value(node).to_string(),
        }
    }

    fn rational_value(&mut self, node: &ProofTree) -> BigRational {
        let key = node as *const ProofTree;
        if let Some(v) = self.rationals.get(&key) {
            return v.clone();
        }
        let v = match node.step() {
            ProofStep::EmptyWord => BigRational::from_integer(0.into()),
            ProofStep::Normalized { .. } => BigRational::from_integer(1.into()),
            ProofStep::Elementary { origin: None } => {
                BigRational::from_float(node.value()).expect("assumed bound is a finite double")
            }
            ProofStep::Elementary { origin: Some(pj) } => {
                self.rational_value(&pj.power_proof)
                    / BigRational::from_integer(pj.exponent.into())
            }
            ProofStep::Triangle { first, second } => {
                self.rational_value(first) + self.rational_value(second)
            }
            ProofStep::Conjugacy { inner, .. } => self.rational_value(inner),
        };
        self.rationals.insert(key, v.clone());
        v
    }
}

/// Splits a rendered line into its statement and the references it uses.
///
/// Useful for checking that every reference points to an earlier line.
pub fn parse_line(line: &str) -> (String, Vec<String>) {
    match line.split_once(" using ") {
        None => (line.to_string(), Vec::new()),
        Some((statement, rest)) => {
            let rest = match rest.rfind(" by taking ") {
                Some(idx) => &rest[..idx],
                None => rest,
            };
            let refs = rest.split(" and ").map(|r| r.to_string()).collect();
            (statement.to_string(), refs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Letter;
    use crate::testutil::word;

    #[test]
    fn conjugacy_renders_with_a_single_reference() {
        let proof = ProofTree::conjugacy(word("B"), ProofTree::normalized(Letter::AlphaInv));
        let lines = render_text(&proof, EvalMode::Float);
        assert_eq!(lines, vec!["|A| <= 1", "|BAb| <= 1 using |A| <= 1"]);
    }

    #[test]
    fn triangle_renders_with_two_references() {
        let proof = ProofTree::triangle(
            ProofTree::normalized(Letter::Alpha),
            ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv)),
        );
        let lines = render_text(&proof, EvalMode::Float);
        assert_eq!(
            lines,
            vec![
                "|a| <= 1",
                "|A| <= 1",
                "|bAB| <= 1 using |A| <= 1",
                "|abAB| <= 2 using |a| <= 1 and |bAB| <= 1",
            ]
        );
    }

    #[test]
    fn empty_word_renders_degenerately() {
        let proof = ProofTree::empty_word();
        assert_eq!(render_text(&proof, EvalMode::Float), vec!["|| <= 0"]);
    }

    #[test]
    fn homogeneity_renders_power_reference() {
        let c = word("abAB");
        let inner = ProofTree::elementary(c.power(2), 3.0);
        let proof = ProofTree::homogeneity(c, 2, inner);
        let lines = render_text(&proof, EvalMode::Float);
        assert_eq!(
            lines,
            vec![
                "|abABabAB| <= 3",
                "|abAB| <= 1.5 using |abABabAB| <= 3 by taking 2th power",
            ]
        );
    }

    #[test]
    fn duplicate_statements_are_emitted_once() {
        let leaf = ProofTree::normalized(Letter::Alpha);
        // A fresh, structurally identical leaf: same statement text.
        let other = ProofTree::normalized(Letter::Alpha);
        let proof = ProofTree::triangle(leaf, other);
        let lines = render_text(&proof, EvalMode::Float);
        assert_eq!(
            lines,
            vec!["|a| <= 1", "|aa| <= 2 using |a| <= 1 and |a| <= 1"]
        );
    }

    #[test]
    fn rational_mode_formats_exact_fractions() {
        let base = word("ab");
        let inner = ProofTree::elementary(base.power(2), 3.0);
        let proof = ProofTree::homogeneity(base, 2, inner);
        let lines = render_text(&proof, EvalMode::Rational);
        assert_eq!(
            lines,
            vec![
                "|abab| <= 3",
                "|ab| <= 3/2 using |abab| <= 3 by taking 2th power",
            ]
        );
    }

    #[test]
    fn root_statement_already_derived_is_not_repeated() {
        // The root claims |a| <= 1 which the leaf axiom already states; the
        // first derivation wins and the homogeneity wrapper adds no line.
        let inner = ProofTree::triangle(
            ProofTree::triangle(
                ProofTree::normalized(Letter::Alpha),
                ProofTree::normalized(Letter::Alpha),
            ),
            ProofTree::normalized(Letter::Alpha),
        );
        let proof = ProofTree::homogeneity(word("a"), 3, inner);
        let lines = render_text(&proof, EvalMode::Float);
        assert_eq!(
            lines,
            vec![
                "|a| <= 1",
                "|aa| <= 2 using |a| <= 1 and |a| <= 1",
                "|aaa| <= 3 using |aa| <= 2 and |a| <= 1",
            ]
        );
    }

    #[test]
    fn parse_line_splits_statement_and_refs() {
        let (statement, refs) = parse_line("|abAB| <= 1.5 using |abABabAB| <= 3 by taking 2th power");
        assert_eq!(statement, "|abAB| <= 1.5");
        assert_eq!(refs, vec!["|abABabAB| <= 3"]);
        let (statement, refs) = parse_line("|ab| <= 2 using |a| <= 1 and |b| <= 1");
        assert_eq!(statement, "|ab| <= 2");
        assert_eq!(refs, vec!["|a| <= 1", "|b| <= 1"]);
        let (statement, refs) = parse_line("|a| <= 1");
        assert_eq!(statement, "|a| <= 1");
        assert!(refs.is_empty());
    }
}
