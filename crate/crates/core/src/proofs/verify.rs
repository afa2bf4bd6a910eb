//! Independent certificate checking.
//!
//! The verifier shares only the word algebra with the bound engine: it walks
//! a tree bottom-up, re-deriving every subject with fresh `freegroup`
//! operations and every value in exact rational arithmetic, and compares the
//! claims stored at each node against what the rules actually yield. Stored
//! values are search-time doubles, so arithmetic agreement is checked to a
//! relative tolerance of 1e-9; subjects and assumption lookups are exact.

use std::collections::HashMap;
use std::fmt;

use num::{BigRational, Signed};
use thiserror::Error;

use crate::freegroup::Word;

use super::{ElementaryBound, ProofStep, ProofTree};

/// Machine-readable failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyReason {
    /// A node's subject does not follow from its children by the claimed rule.
    BadSubject,
    /// A node's value does not combine from its children per the rule.
    BadArithmetic,
    /// An elementary bound neither appears in the assumptions nor carries a
    /// power justification.
    UnjustifiedAssumption,
}

impl VerifyReason {
    pub fn code(self) -> &'static str {
        match self {
            VerifyReason::BadSubject => "bad-subject",
            VerifyReason::BadArithmetic => "bad-arithmetic",
            VerifyReason::UnjustifiedAssumption => "unjustified-assumption",
        }
    }
}

impl fmt::Display for VerifyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The first failing node, reported with its claimed statement.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{reason} at |{subject}| <= {claimed}: {detail}")]
pub struct VerifyError {
    pub reason: VerifyReason,
    pub subject: Word,
    pub claimed: f64,
    pub detail: String,
}

/// Checks every node of the certificate; `Ok` means all checks passed.
///
/// Per node this re-checks the word algebra (triangle subjects concatenate,
/// conjugacy subjects match the reduced conjugation, power subjects match),
/// the arithmetic (in exact rationals, against the stored double to relative
/// 1e-9), and that every bare elementary bound is covered by `assumptions`.
pub fn verify(tree: &ProofTree, assumptions: &[ElementaryBound]) -> Result<(), VerifyError> {
    let mut checker = Checker {
        assumptions,
        verified: HashMap::new(),
    };
    checker.check(tree).map(|_| ())
}

struct Checker<'a> {
    assumptions: &'a [ElementaryBound],
    /// Exact values of already-verified shared nodes.
    verified: HashMap<*const ProofTree, BigRational>,
}

impl Checker<'_> {
    /// Verifies the subtree and returns its exact re-derived value.
    fn check(&mut self, node: &ProofTree) -> Result<BigRational, VerifyError> {
        let key = node as *const ProofTree;
        if let Some(v) = self.verified.get(&key) {
            return Ok(v.clone());
        }
        let fail = |reason: VerifyReason, detail: String| VerifyError {
            reason,
            subject: node.subject().clone(),
            claimed: node.value(),
            detail,
        };
        let exact = match node.step() {
            ProofStep::EmptyWord => {
                if !node.subject().is_empty() {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        "empty-word proves bounds on the identity only".into(),
                    ));
                }
                BigRational::from_integer(0.into())
            }
            ProofStep::Normalized { letter } => {
                if node.subject() != &Word::letter(*letter) {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        format!("subject is not the single letter {letter}"),
                    ));
                }
                BigRational::from_integer(1.into())
            }
            ProofStep::Elementary { origin: None } => {
                let claimed = rational_of(node.value())
                    .ok_or_else(|| fail(VerifyReason::BadArithmetic, "non-finite value".into()))?;
                let justified = self.assumptions.iter().any(|a| {
                    a.element == *node.subject()
                        && rational_of(a.bound).is_some_and(|assumed| assumed <= claimed)
                });
                if !justified {
                    return Err(fail(
                        VerifyReason::UnjustifiedAssumption,
                        "no assumption covers this elementary bound".into(),
                    ));
                }
                claimed
            }
            ProofStep::Elementary { origin: Some(pj) } => {
                let inner = self.check(&pj.power_proof)?;
                if &pj.base != node.subject() {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        "power justification base differs from the subject".into(),
                    ));
                }
                if pj.power_proof.subject() != &pj.base.power(pj.exponent) {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        format!(
                            "power proof is about {:?}, not the {}th power of the subject",
                            pj.power_proof.subject().to_string(),
                            pj.exponent
                        ),
                    ));
                }
                inner / BigRational::from_integer(pj.exponent.into())
            }
            ProofStep::Triangle { first, second } => {
                let left = self.check(first)?;
                let right = self.check(second)?;
                if node.subject() != &first.subject().concat(second.subject()) {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        "subject is not the product of the two premises".into(),
                    ));
                }
                left + right
            }
            ProofStep::Conjugacy { conjugator, inner } => {
                let value = self.check(inner)?;
                if node.subject() != &inner.subject().conjugated_by(conjugator) {
                    return Err(fail(
                        VerifyReason::BadSubject,
                        "subject is not the stated conjugate of the premise".into(),
                    ));
                }
                value
            }
        };
        self.check_arithmetic(node, &exact)?;
        self.verified.insert(key, exact.clone());
        Ok(exact)
    }

    fn check_arithmetic(&self, node: &ProofTree, exact: &BigRational) -> Result<(), VerifyError> {
        let stored = rational_of(node.value()).ok_or_else(|| VerifyError {
            reason: VerifyReason::BadArithmetic,
            subject: node.subject().clone(),
            claimed: node.value(),
            detail: "non-finite value".into(),
        })?;
        let deviation = (stored - exact).abs();
        let one = BigRational::from_integer(1.into());
        let scale = if exact.abs() > one { exact.abs() } else { one };
        let tolerance = rational_of(1e-9).unwrap() * scale;
        if deviation > tolerance {
            return Err(VerifyError {
                reason: VerifyReason::BadArithmetic,
                subject: node.subject().clone(),
                claimed: node.value(),
                detail: format!("rule yields {exact}, stored value disagrees"),
            });
        }
        Ok(())
    }
}

fn rational_of(value: f64) -> Option<BigRational> {
    BigRational::from_float(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Letter;
    use crate::proofs::PowerJustification;
    use crate::testutil::word;
    use std::sync::Arc;

    fn schematic_proof() -> Arc<ProofTree> {
        ProofTree::triangle(
            ProofTree::normalized(Letter::Alpha),
            ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv)),
        )
    }

    #[test]
    fn well_formed_proofs_verify_with_no_assumptions() {
        assert!(verify(&schematic_proof(), &[]).is_ok());
    }

    #[test]
    fn lowered_value_is_bad_arithmetic() {
        let good = schematic_proof();
        let bad = ProofTree::raw(good.subject().clone(), good.value() - 0.1, good.step().clone());
        let err = verify(&bad, &[]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::BadArithmetic);
        assert_eq!(err.reason.code(), "bad-arithmetic");
        assert_eq!(&err.subject, good.subject());
    }

    #[test]
    fn mismatched_conjugator_is_bad_subject() {
        let inner = ProofTree::normalized(Letter::AlphaInv);
        let good = ProofTree::conjugacy(word("b"), inner.clone());
        // Keep the stored subject but swap the conjugator it claims.
        let bad = ProofTree::raw(
            good.subject().clone(),
            good.value(),
            ProofStep::Conjugacy {
                conjugator: word("a"),
                inner,
            },
        );
        let err = verify(&bad, &[]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::BadSubject);
    }

    #[test]
    fn bare_elementary_needs_a_covering_assumption() {
        let proof = ProofTree::elementary(word("abAB"), 0.5);
        let err = verify(&proof, &[]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::UnjustifiedAssumption);

        let exact = ElementaryBound::new(word("abAB"), 0.5);
        assert!(verify(&proof, &[exact]).is_ok());

        // A weaker claim than assumed is still justified.
        let stronger_assumption = ElementaryBound::new(word("abAB"), 0.25);
        assert!(verify(&proof, &[stronger_assumption]).is_ok());

        // A stronger claim than assumed is not.
        let weaker_assumption = ElementaryBound::new(word("abAB"), 0.75);
        let err = verify(&proof, &[weaker_assumption]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::UnjustifiedAssumption);
    }

    #[test]
    fn power_justification_checks_the_power_subject() {
        let c = word("abAB");
        let proof = ProofTree::homogeneity(
            c.clone(),
            2,
            ProofTree::triangle(
                ProofTree::triangle(
                    ProofTree::normalized(Letter::Alpha),
                    ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv)),
                ),
                ProofTree::triangle(
                    ProofTree::normalized(Letter::Alpha),
                    ProofTree::conjugacy(word("b"), ProofTree::normalized(Letter::AlphaInv)),
                ),
            ),
        );
        assert!(verify(&proof, &[]).is_ok());

        // Claim the same bound for a different base word.
        let bad = ProofTree::raw(word("abab"), proof.value(), proof.step().clone());
        let err = verify(&bad, &[]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::BadSubject);
    }

    #[test]
    fn wrong_exponent_is_caught() {
        let c = word("abAB");
        let power_proof = ProofTree::elementary(c.power(2), 3.0);
        let good = ProofTree::homogeneity(c.clone(), 2, power_proof.clone());
        assert!(verify(&good, &[ElementaryBound::new(c.power(2), 3.0)]).is_ok());

        let bad = ProofTree::raw(
            c.clone(),
            good.value(),
            ProofStep::Elementary {
                origin: Some(PowerJustification {
                    base: c,
                    exponent: 3,
                    power_proof,
                }),
            },
        );
        let err = verify(&bad, &[]).unwrap_err();
        assert_eq!(err.reason, VerifyReason::BadSubject);
    }
}
