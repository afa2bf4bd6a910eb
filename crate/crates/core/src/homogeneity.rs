//! Driving the engine through a homogeneity pair sequence.
//!
//! A pair `(g, n)` licenses the elementary bound `|g| <= L(gⁿ)/n`. Pairs are
//! processed strictly in order; each derived bound is inserted into the
//! context (with its power justification) before the next pair runs, so
//! later computations can stand on earlier ones. Two memo disciplines are
//! supported:
//!
//! * **shared** — one persistent context; memo entries from earlier pair
//!   computations are retained. This is the fast mode and the one whose
//!   numbers the pipeline reproduces.
//! * **fresh** — before each pair the table is reset to exactly the
//!   previously derived elementary bounds, so nothing stale is reused. This
//!   recomputes more but never yields worse bounds.

use std::sync::Arc;

use thiserror::Error;

use crate::bounds::BoundContext;
use crate::freegroup::{Letter, Word, WordParseError};
use crate::proofs::ProofTree;

/// One use of homogeneity: the element `g` and the exponent `n` of `(g, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityPair {
    pub element: Word,
    pub exponent: u32,
}

/// Memo discipline for [`apply_schedule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoMode {
    #[default]
    Shared,
    Fresh,
}

/// An ordered sequence of homogeneity pairs; the order is semantically
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneitySchedule {
    pub pairs: Vec<HomogeneityPair>,
    pub mode: MemoMode,
}

impl HomogeneitySchedule {
    pub fn with_mode(mut self, mode: MemoMode) -> HomogeneitySchedule {
        self.mode = mode;
        self
    }
}

/// Parameters of the standard schedule: for each `k` the word
/// `γ_k = α·targetᵏ` is taken with every exponent `1..=max_power`, and the
/// target itself comes last with the same exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleConfig {
    pub max_power: u32,
    pub ks: Vec<u32>,
    pub target: Word,
}

impl Default for ScheduleConfig {
    /// The headline configuration: `N = 20`, `ks = 1, 2, 6`, target the
    /// commutator `abAB`.
    fn default() -> ScheduleConfig {
        ScheduleConfig {
            max_power: 20,
            ks: vec![1, 2, 6],
            target: Word::parse("abAB").unwrap(),
        }
    }
}

/// The elementary bound derived from one schedule pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedBound {
    pub element: Word,
    pub exponent: u32,
    pub value: f64,
}

/// Expands a config into its pair sequence (shared memo mode by default).
pub fn build_schedule(cfg: &ScheduleConfig) -> HomogeneitySchedule {
    assert!(cfg.max_power >= 1, "max_power must be at least 1");
    assert!(!cfg.ks.is_empty(), "ks must be nonempty");
    let alpha = Word::letter(Letter::Alpha);
    let mut pairs = Vec::with_capacity((cfg.ks.len() + 1) * cfg.max_power as usize);
    for &k in &cfg.ks {
        let gamma = alpha.concat(&cfg.target.power(k));
        for exponent in 1..=cfg.max_power {
            pairs.push(HomogeneityPair {
                element: gamma.clone(),
                exponent,
            });
        }
    }
    for exponent in 1..=cfg.max_power {
        pairs.push(HomogeneityPair {
            element: cfg.target.clone(),
            exponent,
        });
    }
    HomogeneitySchedule {
        pairs,
        mode: MemoMode::Shared,
    }
}

/// Processes the pairs in order and returns the resulting context together
/// with the per-pair derived bounds `xᵢ`.
///
/// Insertion policy: a derived bound overwrites the stored entry for its
/// element only when strictly smaller, so the table is always a
/// best-known-bound map.
pub fn apply_schedule(schedule: &HomogeneitySchedule) -> (BoundContext, Vec<DerivedBound>) {
    let mut derived = Vec::with_capacity(schedule.pairs.len());
    match schedule.mode {
        MemoMode::Shared => {
            let mut ctx = BoundContext::new();
            for pair in &schedule.pairs {
                let x = process_pair(&mut ctx, pair);
                derived.push(x);
            }
            (ctx, derived)
        }
        MemoMode::Fresh => {
            let mut best: Vec<(Word, f64, Arc<ProofTree>)> = Vec::new();
            for pair in &schedule.pairs {
                let mut ctx = context_of(&best);
                let power_word = pair.element.power(pair.exponent);
                let (value, proof) = ctx.bound(&power_word);
                let x = value / pair.exponent as f64;
                derived.push(DerivedBound {
                    element: pair.element.clone(),
                    exponent: pair.exponent,
                    value: x,
                });
                let node = ProofTree::homogeneity(pair.element.clone(), pair.exponent, proof);
                match best.iter_mut().find(|(w, _, _)| w == &pair.element) {
                    Some(slot) => {
                        if x < slot.1 {
                            slot.1 = x;
                            slot.2 = node;
                        }
                    }
                    None => best.push((pair.element.clone(), x, node)),
                }
            }
            (context_of(&best), derived)
        }
    }
}

fn process_pair(ctx: &mut BoundContext, pair: &HomogeneityPair) -> DerivedBound {
    let power_word = pair.element.power(pair.exponent);
    let (value, proof) = ctx.bound(&power_word);
    let x = value / pair.exponent as f64;
    let keep = ctx.get(&pair.element).map_or(true, |(old, _)| x < old);
    if keep {
        let node = ProofTree::homogeneity(pair.element.clone(), pair.exponent, proof);
        ctx.insert(pair.element.clone(), x, node);
    }
    DerivedBound {
        element: pair.element.clone(),
        exponent: pair.exponent,
        value: x,
    }
}

fn context_of(best: &[(Word, f64, Arc<ProofTree>)]) -> BoundContext {
    let mut ctx = BoundContext::new();
    for (element, value, proof) in best {
        ctx.insert(element.clone(), *value, proof.clone());
    }
    ctx
}

/// Runs the full pipeline in shared-memo mode: apply the schedule, then take
/// `min { L(targetⁿ)/n : 1 <= n <= max_power }` with the final context.
pub fn commutator_bound(cfg: &ScheduleConfig) -> (f64, Arc<ProofTree>) {
    commutator_bound_with_mode(cfg, MemoMode::Shared)
}

/// [`commutator_bound`] with an explicit memo discipline.
///
/// The winning candidate's proof is wrapped in a power justification for its
/// exponent; at `n = 1` the looked-up proof already states the bound and is
/// returned as is.
pub fn commutator_bound_with_mode(cfg: &ScheduleConfig, mode: MemoMode) -> (f64, Arc<ProofTree>) {
    let schedule = build_schedule(cfg).with_mode(mode);
    let (mut ctx, _) = apply_schedule(&schedule);
    let mut best: Option<(f64, u32, Arc<ProofTree>)> = None;
    for n in 1..=cfg.max_power {
        let power_word = cfg.target.power(n);
        let (value, proof) = match mode {
            MemoMode::Shared => ctx.bound(&power_word),
            // Fresh discipline extends to the final sweep: every candidate
            // starts from exactly the derived elementary bounds.
            MemoMode::Fresh => ctx.clone().bound(&power_word),
        };
        let candidate = value / n as f64;
        if best.as_ref().map_or(true, |(b, _, _)| candidate < *b) {
            best = Some((candidate, n, proof));
        }
    }
    let (value, n, proof) = best.expect("max_power >= 1");
    let proof = if n == 1 {
        proof
    } else {
        ProofTree::homogeneity(cfg.target.clone(), n, proof)
    };
    (value, proof)
}

/// Values for the config-file keys `max_power`, `ks`, `target`, and `mode`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub max_power: Option<u32>,
    pub ks: Option<Vec<u32>>,
    pub target: Option<Word>,
    pub mode: Option<MemoMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Parses plain `key=value` lines; `#` starts a comment. Later duplicate
/// keys win.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut cfg = ConfigFile::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
            line,
            message: "expected key=value".into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "max_power" => {
                let n: u32 = value.parse().map_err(|_| ConfigError {
                    line,
                    message: format!("max_power must be a positive integer, got {value:?}"),
                })?;
                if n == 0 {
                    return Err(ConfigError {
                        line,
                        message: "max_power must be at least 1".into(),
                    });
                }
                cfg.max_power = Some(n);
            }
            "ks" => {
                let ks = value
                    .split(',')
                    .map(|p| p.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| ConfigError {
                        line,
                        message: format!("ks must be comma-separated integers, got {value:?}"),
                    })?;
                if ks.is_empty() || ks.contains(&0) {
                    return Err(ConfigError {
                        line,
                        message: "ks must be a nonempty list of positive integers".into(),
                    });
                }
                cfg.ks = Some(ks);
            }
            "target" => {
                let target = Word::parse(value).map_err(|e: WordParseError| ConfigError {
                    line,
                    message: format!("bad target word: {e}"),
                })?;
                cfg.target = Some(target);
            }
            "mode" => {
                cfg.mode = Some(match value {
                    "shared" => MemoMode::Shared,
                    "fresh" => MemoMode::Fresh,
                    other => {
                        return Err(ConfigError {
                            line,
                            message: format!("mode must be shared or fresh, got {other:?}"),
                        })
                    }
                });
            }
            other => {
                return Err(ConfigError {
                    line,
                    message: format!("unknown key {other:?}"),
                })
            }
        }
    }
    Ok(cfg)
}

impl ScheduleConfig {
    /// Applies config-file values where present, keeping defaults elsewhere.
    pub fn with_overrides(mut self, overrides: &ConfigFile) -> ScheduleConfig {
        if let Some(n) = overrides.max_power {
            self.max_power = n;
        }
        if let Some(ks) = &overrides.ks {
            self.ks = ks.clone();
        }
        if let Some(target) = &overrides.target {
            self.target = target.clone();
        }
        self
    }
}
