use std::fmt;
use std::str::FromStr;

use super::SimilarityError;
use crate::manifest::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairMode {
    /// Unordered pairs inside one set, no self-pairs.
    #[default]
    Within,
    /// Every (a, b) with a from the first set and b from the second.
    Cross,
}

impl PairMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PairMode::Within => "within",
            PairMode::Cross => "cross",
        }
    }
}

impl fmt::Display for PairMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "within" => Ok(PairMode::Within),
            "cross" => Ok(PairMode::Cross),
            other => Err(format!("unknown pair mode {other:?} (expected within|cross)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledId {
    pub id: String,
    pub label: Label,
}

impl LabeledId {
    pub fn new(id: impl Into<String>, label: Label) -> Self {
        Self { id: id.into(), label }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub a: String,
    pub b: String,
    pub class: Label,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    mode: PairMode,
    pairs: Vec<Pair>,
}

impl PairSet {
    pub fn mode(&self) -> PairMode {
        self.mode
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn count_class(&self, class: Label) -> usize {
        self.pairs.iter().filter(|p| p.class == class).count()
    }
}

fn class_ids(set: &[LabeledId], label: Label) -> Vec<&str> {
    let mut ids: Vec<&str> = set.iter().filter(|r| r.label == label).map(|r| r.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Builds class-matched pairs in lexicographic `(a, b)` order.
///
/// Within mode yields `sum_c C(n_c, 2)` pairs with `a < b`; cross mode yields
/// `sum_c n_A,c * n_B,c`. A class with no members contributes nothing; only
/// an entirely empty input set is an error.
pub fn enumerate_pairs(
    mode: PairMode,
    set_a: &[LabeledId],
    set_b: Option<&[LabeledId]>,
) -> Result<PairSet, SimilarityError> {
    if set_a.is_empty() {
        return Err(SimilarityError::EmptyClass("first set has no records".into()));
    }
    let mut pairs = Vec::new();
    match mode {
        PairMode::Within => {
            for label in Label::ALL {
                let ids = class_ids(set_a, label);
                for (i, a) in ids.iter().enumerate() {
                    for b in &ids[i + 1..] {
                        pairs.push(Pair {
                            a: a.to_string(),
                            b: b.to_string(),
                            class: label,
                        });
                    }
                }
            }
        }
        PairMode::Cross => {
            let set_b = set_b.ok_or(SimilarityError::MissingSecondSet)?;
            if set_b.is_empty() {
                return Err(SimilarityError::EmptyClass("second set has no records".into()));
            }
            for label in Label::ALL {
                let ids_b = class_ids(set_b, label);
                for a in class_ids(set_a, label) {
                    for b in &ids_b {
                        pairs.push(Pair {
                            a: a.to_string(),
                            b: b.to_string(),
                            class: label,
                        });
                    }
                }
            }
        }
    }
    pairs.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Ok(PairSet { mode, pairs })
}
