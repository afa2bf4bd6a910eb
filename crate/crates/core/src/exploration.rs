//! Searching for useful homogeneity elements without expert guidance.
//!
//! Candidate words are enumerated up to the problem's symmetries —
//! transposing the generators, transposing either generator with its
//! inverse, and cyclic permutation — and families `a·bᵏ` are scored by the
//! usefulness ratio `ρ(g, n) = L(g) / (L(gⁿ)/n)`, the maximum possible
//! improvement a homogeneity pair `(g, n)` can contribute.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::bounds::BoundContext;
use crate::freegroup::{Generator, Letter, Word};

/// Enumeration refuses lengths above this cap.
pub const MAX_ENUMERATION_LENGTH: usize = 12;

/// An orbit of cyclically reduced words under the symmetry group, named by
/// its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClass {
    pub representative: Word,
    /// Number of cyclically reduced words in the orbit, when known.
    pub members: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ExplorationError {
    #[error("length {requested} exceeds the enumeration cap of {cap}")]
    LengthCapExceeded { requested: usize, cap: usize },
}

/// The eight letter symmetries: swap α↔β, invert α, invert β, and their
/// compositions.
fn letter_symmetries() -> impl Iterator<Item = impl Fn(Letter) -> Letter> {
    (0u8..8).map(|bits| {
        move |letter: Letter| {
            let mut generator = letter.generator();
            let mut inverted = letter.is_inverted();
            if bits & 1 != 0 {
                generator = match generator {
                    Generator::Alpha => Generator::Beta,
                    Generator::Beta => Generator::Alpha,
                };
            }
            let flip = match generator {
                Generator::Alpha => bits & 2 != 0,
                Generator::Beta => bits & 4 != 0,
            };
            if flip {
                inverted = !inverted;
            }
            Letter::new(generator, inverted)
        }
    })
}

/// The lexicographically least member (letter order `a < b < A < B`) of the
/// orbit of the cyclic reduction of `g` under the letter symmetries and all
/// cyclic rotations. Idempotent and constant on orbits.
pub fn canonicalize(g: &Word) -> Word {
    let core = g.cyclically_reduce();
    if core.is_empty() {
        return core;
    }
    let mut best: Option<Word> = None;
    for symmetry in letter_symmetries() {
        let image: Vec<Letter> = core.letters().iter().map(|&l| symmetry(l)).collect();
        for rotation in 0..image.len() {
            let mut rotated = Vec::with_capacity(image.len());
            rotated.extend_from_slice(&image[rotation..]);
            rotated.extend_from_slice(&image[..rotation]);
            // Rotations of a cyclically reduced word are reduced.
            let candidate = Word::from_letters(rotated);
            debug_assert_eq!(candidate.len(), core.len());
            if best.as_ref().map_or(true, |b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap()
}

/// All cyclically reduced words of exactly `length`, grouped into symmetry
/// classes. Sorted by representative for deterministic output.
pub fn enumerate_classes(length: usize) -> Result<Vec<SymmetryClass>, ExplorationError> {
    if length > MAX_ENUMERATION_LENGTH {
        return Err(ExplorationError::LengthCapExceeded {
            requested: length,
            cap: MAX_ENUMERATION_LENGTH,
        });
    }
    if length == 0 {
        return Ok(vec![SymmetryClass {
            representative: Word::identity(),
            members: Some(1),
        }]);
    }
    let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
    let mut prefix: Vec<Letter> = Vec::with_capacity(length);
    enumerate_reduced(&mut prefix, length, &mut |word| {
        if word.is_cyclically_reduced() {
            *counts.entry(canonicalize(word)).or_insert(0) += 1;
        }
    });
    Ok(counts
        .into_iter()
        .map(|(representative, members)| SymmetryClass {
            representative,
            members: Some(members),
        })
        .collect())
}

fn enumerate_reduced(prefix: &mut Vec<Letter>, remaining: usize, visit: &mut impl FnMut(&Word)) {
    if remaining == 0 {
        visit(&Word::from_letters(prefix.clone()));
        return;
    }
    for letter in Letter::ALL {
        if prefix.last() == Some(&letter.inverse()) {
            continue;
        }
        prefix.push(letter);
        enumerate_reduced(prefix, remaining - 1, visit);
        prefix.pop();
    }
}

/// The usefulness ratio `ρ(g, n) = L(g) / (L(gⁿ)/n)`, both bounds computed
/// against fresh empty contexts.
///
/// A ratio of 1 means the pair `(g, n)` buys nothing.
pub fn usefulness_ratio(g: &Word, exponent: u32) -> f64 {
    assert!(!g.is_empty(), "usefulness ratio is undefined for the identity");
    assert!(exponent >= 1);
    let (single, _) = BoundContext::new().bound(g);
    let (powered, _) = BoundContext::new().bound(&g.power(exponent));
    single / (powered / exponent as f64)
}

/// One family's scan result: the best ratio seen and where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyScanRow {
    pub a: Word,
    pub b: Word,
    pub max_rho: f64,
    pub at_k: u32,
    pub at_n: u32,
}

impl fmt::Display for FamilyScanRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} b={} max_rho={} at k={} n={}",
            self.a, self.b, self.max_rho, self.at_k, self.at_n
        )
    }
}

/// Scores each family `(a, b)` by `max ρ(a·bᵏ, n)` over the sample grid and
/// ranks families best-first (ties keep input order).
///
/// Grid points where `a·bᵏ` reduces to the identity are skipped; a family
/// with no valid sample scores 1 at `k = n = 0`.
pub fn family_scan(
    families: &[(Word, Word)],
    k_samples: &[u32],
    n_samples: &[u32],
) -> Vec<FamilyScanRow> {
    let mut rows: Vec<FamilyScanRow> = families
        .iter()
        .map(|(a, b)| {
            let mut best: Option<(f64, u32, u32)> = None;
            for &k in k_samples {
                let g = a.concat(&b.power(k));
                if g.is_empty() {
                    continue;
                }
                for &n in n_samples {
                    let rho = usefulness_ratio(&g, n);
                    if best.map_or(true, |(b, _, _)| rho > b) {
                        best = Some((rho, k, n));
                    }
                }
            }
            let (max_rho, at_k, at_n) = best.unwrap_or((1.0, 0, 0));
            FamilyScanRow {
                a: a.clone(),
                b: b.clone(),
                max_rho,
                at_k,
                at_n,
            }
        })
        .collect();
    rows.sort_by(|x, y| y.max_rho.partial_cmp(&x.max_rho).expect("ratios are finite"));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{arb_word, word};
    use proptest::prelude::*;

    #[test]
    fn all_single_letters_share_one_class() {
        for text in ["a", "b", "A", "B"] {
            assert_eq!(canonicalize(&word(text)), word("a"));
        }
    }

    #[test]
    fn rotation_equivalence() {
        assert_eq!(canonicalize(&word("ba")), canonicalize(&word("ab")));
    }

    #[test]
    fn generator_transposition_equivalence() {
        assert_eq!(canonicalize(&word("abAB")), canonicalize(&word("baBA")));
    }

    #[test]
    fn canonical_form_cyclically_reduces_first() {
        // abA is conjugate to b, so its class is the single-letter class.
        assert_eq!(canonicalize(&word("abA")), word("a"));
    }

    #[test]
    fn class_counts_for_small_lengths() {
        let counts: Vec<usize> = (1..=4)
            .map(|len| enumerate_classes(len).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 2, 6]);
    }

    #[test]
    fn length_zero_is_the_identity_class() {
        let classes = enumerate_classes(0).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].representative, Word::identity());
    }

    #[test]
    fn class_members_cover_all_cyclically_reduced_words() {
        // 12 cyclically reduced words of length 2 split into the aa-type and
        // ab-type orbits.
        let classes = enumerate_classes(2).unwrap();
        let total: usize = classes.iter().map(|c| c.members.unwrap()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_classes(MAX_ENUMERATION_LENGTH + 1).unwrap_err();
        assert!(matches!(err, ExplorationError::LengthCapExceeded { .. }));
    }

    #[test]
    fn rho_at_exponent_one_is_exactly_one() {
        for text in ["a", "ab", "abAB", "aabAB"] {
            assert_eq!(usefulness_ratio(&word(text), 1), 1.0);
        }
    }

    #[test]
    fn commutator_gains_from_high_powers() {
        assert!(usefulness_ratio(&word("abAB"), 17) > 1.0);
    }

    #[test]
    fn positive_words_gain_nothing() {
        // Words in a and b alone admit no rule-(b) split anywhere, so powers
        // cost their full length and ρ = 1.
        assert_eq!(usefulness_ratio(&word("ab"), 5), 1.0);
        assert_eq!(usefulness_ratio(&word("aab"), 10), 1.0);
    }

    #[test]
    fn commutator_family_outranks_the_generator_family() {
        let families = vec![
            (word("a"), word("b")),
            (word("a"), word("abAB")),
        ];
        let grid = [2, 4, 6];
        let rows = family_scan(&families, &grid, &grid);
        assert_eq!(rows[0].b, word("abAB"));
        assert!(rows[0].max_rho > rows[1].max_rho);
        assert_eq!(rows[1].max_rho, 1.0);
    }

    #[test]
    fn single_family_report() {
        let rows = family_scan(&[(word("a"), word("b"))], &[2], &[3]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].to_string(), "a=a b=b max_rho=1 at k=2 n=3");
    }

    #[test]
    fn empty_family_list_gives_empty_report() {
        assert!(family_scan(&[], &[2, 4], &[2, 4]).is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn canonicalize_is_idempotent(g in arb_word(12)) {
            let canon = canonicalize(&g);
            prop_assert_eq!(canonicalize(&canon), canon);
        }

        #[test]
        fn canonicalize_is_constant_on_orbits(
            g in arb_word(12),
            bits in 0u8..8,
            rotation in 0usize..12,
        ) {
            let core = g.cyclically_reduce();
            let symmetry = letter_symmetries().nth(bits as usize).unwrap();
            let image: Vec<Letter> = core.letters().iter().map(|&l| symmetry(l)).collect();
            let rotation = if image.is_empty() { 0 } else { rotation % image.len() };
            let mut rotated = Vec::new();
            rotated.extend_from_slice(&image[rotation..]);
            rotated.extend_from_slice(&image[..rotation]);
            let moved = Word::from_letters(rotated);
            prop_assert_eq!(canonicalize(&moved), canonicalize(&g));
        }

        #[test]
        fn rho_is_at_least_one_up_to_float_slack(g in arb_word(8), n in 1u32..6) {
            prop_assume!(!g.is_empty());
            prop_assert!(usefulness_ratio(&g, n) >= 1.0 - 1e-12);
        }

        #[test]
        fn family_scan_is_replay_identical(g in arb_word(6), h in arb_word(4)) {
            let families = vec![(g, h)];
            let grid = [1, 2];
            let first = family_scan(&families, &grid, &grid);
            let second = family_scan(&families, &grid, &grid);
            prop_assert_eq!(first, second);
        }
    }
}
