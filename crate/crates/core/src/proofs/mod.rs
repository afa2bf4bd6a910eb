//! Proof certificates for length bounds.
//!
//! A [`ProofTree`] records exactly which rule justifies each inequality the
//! bound engine derives. Certificates can be re-evaluated in IEEE-double or
//! exact rational arithmetic, rendered as human-readable proof lines,
//! serialized to an indentation-based text format, and re-checked by an
//! independent verifier that shares only the word algebra with the engine.
//!
//! Trees are immutable and shared via [`Arc`]; evaluation, rendering, and
//! verification are pure.

mod render;
mod serial;
mod verify;

pub use render::{parse_line, render_text};
pub use serial::{deserialize, serialize, TreeParseError};
pub use verify::{verify, VerifyError, VerifyReason};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::BigRational;

use crate::freegroup::{Letter, Word};

/// An assumed inequality `|element| <= bound` fed to the engine or verifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryBound {
    pub element: Word,
    pub bound: f64,
}

impl ElementaryBound {
    pub fn new(element: Word, bound: f64) -> ElementaryBound {
        assert!(
            bound.is_finite() && bound >= 0.0,
            "elementary bound must be finite and nonnegative, got {bound}"
        );
        ElementaryBound { element, bound }
    }
}

/// Arithmetic used when re-evaluating a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// IEEE double precision, mirroring the search-time arithmetic.
    Float,
    /// Arbitrary-precision rationals; exact, no rounding anywhere.
    Rational,
}

/// A number produced by proof evaluation, in the arithmetic that was asked for.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Float(f64),
    Rational(BigRational),
}

impl BoundValue {
    /// The value as a double (rationals are rounded to nearest).
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Float(v) => *v,
            BoundValue::Rational(r) => rational_to_f64(r),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Float(v) => write!(f, "{}", v),
            BoundValue::Rational(r) => write!(f, "{}", r),
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Derivation of an elementary bound from a power: `|base| <= |base^exponent|-bound / exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerJustification {
    pub base: Word,
    pub exponent: u32,
    pub power_proof: Arc<ProofTree>,
}

/// The rule at one node of a certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofStep {
    /// `|e| <= 0`.
    EmptyWord,
    /// `|letter| <= 1` for a generator or inverse generator.
    Normalized { letter: Letter },
    /// An elementary bound: assumed outright, or derived from a power of the
    /// subject when `origin` is present.
    Elementary { origin: Option<PowerJustification> },
    /// `|uv| <= x + y` from `|u| <= x` and `|v| <= y`.
    Triangle {
        first: Arc<ProofTree>,
        second: Arc<ProofTree>,
    },
    /// `|g h g⁻¹| <= x` from `|h| <= x`.
    Conjugacy {
        conjugator: Word,
        inner: Arc<ProofTree>,
    },
}

/// A certificate node: the statement `|subject| <= value` plus its justification.
///
/// `value` is the search-time double; [`ProofTree::evaluate`] recomputes it
/// bottom-up in either arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofTree {
    subject: Word,
    value: f64,
    step: ProofStep,
}

impl ProofTree {
    pub fn empty_word() -> Arc<ProofTree> {
        Arc::new(ProofTree {
            subject: Word::identity(),
            value: 0.0,
            step: ProofStep::EmptyWord,
        })
    }

    pub fn normalized(letter: Letter) -> Arc<ProofTree> {
        Arc::new(ProofTree {
            subject: Word::letter(letter),
            value: 1.0,
            step: ProofStep::Normalized { letter },
        })
    }

    /// An assumed bound with no further justification.
    pub fn elementary(element: Word, bound: f64) -> Arc<ProofTree> {
        assert!(bound.is_finite() && bound >= 0.0);
        Arc::new(ProofTree {
            subject: element,
            value: bound,
            step: ProofStep::Elementary { origin: None },
        })
    }

    /// An elementary bound derived by homogeneity: value = power_proof.value / exponent.
    pub fn homogeneity(
        element: Word,
        exponent: u32,
        power_proof: Arc<ProofTree>,
    ) -> Arc<ProofTree> {
        assert!(exponent >= 1, "homogeneity exponent must be positive");
        debug_assert_eq!(power_proof.subject(), &element.power(exponent));
        let value = power_proof.value / exponent as f64;
        Arc::new(ProofTree {
            subject: element.clone(),
            value,
            step: ProofStep::Elementary {
                origin: Some(PowerJustification {
                    base: element,
                    exponent,
                    power_proof,
                }),
            },
        })
    }

    pub fn triangle(first: Arc<ProofTree>, second: Arc<ProofTree>) -> Arc<ProofTree> {
        let subject = first.subject.concat(&second.subject);
        let value = first.value + second.value;
        Arc::new(ProofTree {
            subject,
            value,
            step: ProofStep::Triangle { first, second },
        })
    }

    pub fn conjugacy(conjugator: Word, inner: Arc<ProofTree>) -> Arc<ProofTree> {
        let subject = inner.subject.conjugated_by(&conjugator);
        let value = inner.value;
        Arc::new(ProofTree {
            subject,
            value,
            step: ProofStep::Conjugacy { conjugator, inner },
        })
    }

    /// Used by the deserializer, which must preserve file contents verbatim
    /// and leave validation to the verifier.
    pub(crate) fn raw(subject: Word, value: f64, step: ProofStep) -> ProofTree {
        ProofTree {
            subject,
            value,
            step,
        }
    }

    /// The word this node bounds.
    pub fn subject(&self) -> &Word {
        &self.subject
    }

    /// The cached search-time value of the bound.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn step(&self) -> &ProofStep {
        &self.step
    }

    /// Recomputes the root value bottom-up in the requested arithmetic.
    pub fn evaluate(&self, mode: EvalMode) -> BoundValue {
        match mode {
            EvalMode::Float => BoundValue::Float(self.evaluate_float()),
            EvalMode::Rational => BoundValue::Rational(self.evaluate_rational()),
        }
    }

    /// Bottom-up double-precision evaluation; on engine-generated trees this
    /// reproduces the cached values bit for bit.
    pub fn evaluate_float(&self) -> f64 {
        fn go(node: &ProofTree, memo: &mut HashMap<*const ProofTree, f64>) -> f64 {
            let key = node as *const ProofTree;
            if let Some(&v) = memo.get(&key) {
                return v;
            }
            let v = match &node.step {
                ProofStep::EmptyWord => 0.0,
                ProofStep::Normalized { .. } => 1.0,
                ProofStep::Elementary { origin: None } => node.value,
                ProofStep::Elementary { origin: Some(pj) } => {
                    go(&pj.power_proof, memo) / pj.exponent as f64
                }
                ProofStep::Triangle { first, second } => go(first, memo) + go(second, memo),
                ProofStep::Conjugacy { inner, .. } => go(inner, memo),
            };
            memo.insert(key, v);
            v
        }
        go(self, &mut HashMap::new())
    }

    /// Exact rational evaluation; assumed leaf values convert exactly since
    /// every finite double is a rational.
    pub fn evaluate_rational(&self) -> BigRational {
        fn go(node: &ProofTree, memo: &mut HashMap<*const ProofTree, BigRational>) -> BigRational {
            let key = node as *const ProofTree;
            if let Some(v) = memo.get(&key) {
                return v.clone();
            }
            let v = match &node.step {
                ProofStep::EmptyWord => BigRational::from_integer(0.into()),
                ProofStep::Normalized { .. } => BigRational::from_integer(1.into()),
                ProofStep::Elementary { origin: None } => BigRational::from_float(node.value)
                    .expect("assumed bound is a finite double"),
                ProofStep::Elementary { origin: Some(pj) } => {
                    go(&pj.power_proof, memo) / BigRational::from_integer(pj.exponent.into())
                }
                ProofStep::Triangle { first, second } => go(first, memo) + go(second, memo),
                ProofStep::Conjugacy { inner, .. } => go(inner, memo),
            };
            memo.insert(key, v.clone());
            v
        }
        go(self, &mut HashMap::new())
    }

    /// Number of nodes when the proof is expanded as a tree (shared subproofs
    /// counted once per occurrence).
    pub fn expanded_size(&self) -> usize {
        match &self.step {
            ProofStep::EmptyWord | ProofStep::Normalized { .. } => 1,
            ProofStep::Elementary { origin: None } => 1,
            ProofStep::Elementary {
                origin: Some(pj), ..
            } => 1 + pj.power_proof.expanded_size(),
            ProofStep::Triangle { first, second } => {
                1 + first.expanded_size() + second.expanded_size()
            }
            ProofStep::Conjugacy { inner, .. } => 1 + inner.expanded_size(),
        }
    }
}

/// The statement atom `|word| <= value` shared by proof lines and tree files.
pub(crate) fn format_statement(subject: &Word, value: &str) -> String {
    format!("|{}| <= {}", subject, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::word;
    use num::BigInt;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalized_axiom_rational_is_one() {
        let proof = ProofTree::normalized(Letter::Alpha);
        assert_eq!(proof.evaluate_rational(), rational(1, 1));
        assert_eq!(proof.evaluate_float(), 1.0);
    }

    #[test]
    fn triangle_caches_sum_and_subject() {
        let proof = ProofTree::triangle(
            ProofTree::normalized(Letter::Alpha),
            ProofTree::normalized(Letter::Beta),
        );
        assert_eq!(proof.subject(), &word("ab"));
        assert_eq!(proof.value(), 2.0);
        assert_eq!(proof.evaluate_rational(), rational(2, 1));
    }

    #[test]
    fn conjugacy_keeps_value_and_conjugates_subject() {
        let proof = ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv));
        assert_eq!(proof.subject(), &word("bAB"));
        assert_eq!(proof.value(), 1.0);
    }

    #[test]
    fn power_justification_divides_by_the_exponent() {
        // A 17th power step splits the parent bound by 17, as in
        // 0.8152734778121775 = 13.859649122807017 / 17.
        let c = word("abAB");
        let inner = ProofTree::elementary(c.power(17), 13.859649122807017);
        let proof = ProofTree::homogeneity(c.clone(), 17, inner);
        assert_eq!(proof.value(), 0.8152734778121775);
        assert_eq!(proof.subject(), &c);
        assert_eq!(
            proof.evaluate_rational(),
            BigRational::from_float(13.859649122807017).unwrap()
                / BigRational::from_integer(17.into())
        );
    }

    #[test]
    fn float_and_rational_agree_on_exact_chains() {
        let a = ProofTree::normalized(Letter::Alpha);
        let b = ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv));
        let t = ProofTree::triangle(a, b);
        let f = t.evaluate_float();
        let r = rational_to_f64(&t.evaluate_rational());
        assert_eq!(f, r);
    }
}
