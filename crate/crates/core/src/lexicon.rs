//! Lexicon storage, coordinator splitting, and per-side assignment
//! enumeration.
//!
//! Lexicon files are line-oriented UTF-8: `word<TAB>type(,type)*`. Lines
//! starting with `#` and blank lines are ignored; repeated entries for a
//! word merge their type sets. Type sets are deduplicated and kept sorted
//! by their textual form, which fixes the enumeration order.

use std::collections::BTreeMap;
use std::fmt;

use num::BigUint;
use thiserror::Error;

use crate::occurrence::{saturate, Register, Side, SideVerdict};
use crate::types::{parse_type, CatType, TypeParseError, TypeSequence};

/// Word-to-types mapping. Every word has at least one type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<CatType>>,
}

impl Lexicon {
    /// Parse lexicon file content.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let Some((word, types)) = raw.split_once('\t') else {
                return Err(LexiconError::MissingTab { line });
            };
            let word = word.trim();
            if word.is_empty() {
                return Err(LexiconError::EmptyWord { line });
            }
            if types.trim().is_empty() {
                return Err(LexiconError::EmptyTypes { line });
            }
            let mut parsed = Vec::new();
            for (index, item) in types.split(',').enumerate() {
                let t = parse_type(item.trim()).map_err(|source| LexiconError::Type {
                    line,
                    index: index + 1,
                    source,
                })?;
                parsed.push(t);
            }
            lex.add(word, parsed);
        }
        Ok(lex)
    }

    /// Build a lexicon from word/type pairs; duplicates merge.
    /// Panics if some word has an empty type list.
    pub fn from_entries<I, W>(entries: I) -> Self
    where
        I: IntoIterator<Item = (W, Vec<CatType>)>,
        W: Into<String>,
    {
        let mut lex = Lexicon::default();
        for (word, types) in entries {
            let word = word.into();
            assert!(!types.is_empty(), "word {word:?} has no types");
            lex.add(&word, types);
        }
        lex
    }

    fn add(&mut self, word: &str, types: Vec<CatType>) {
        let slot = self.entries.entry(word.to_string()).or_default();
        slot.extend(types);
        slot.sort_by_cached_key(|t| t.to_string());
        slot.dedup();
    }

    pub fn types_for(&self, word: &str) -> Option<&[CatType]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: missing tab between word and types")]
    MissingTab { line: usize },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: empty type list")]
    EmptyTypes { line: usize },
    #[error("line {line}, type {index}: {source}")]
    Type {
        line: usize,
        index: usize,
        source: TypeParseError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown word {0:?}")]
pub struct UnknownWord(pub String);

/// One choice of lexical type per word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    words: Vec<String>,
    types: TypeSequence,
}

impl Assignment {
    /// Pairs words with their chosen types; the lengths must agree.
    pub fn new(words: Vec<String>, types: TypeSequence) -> Result<Self, LengthMismatch> {
        if words.len() != types.len() {
            return Err(LengthMismatch {
                words: words.len(),
                types: types.len(),
            });
        }
        Ok(Assignment { words, types })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn types(&self) -> &TypeSequence {
        &self.types
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (word, t)) in self.words.iter().zip(self.types.iter()).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{word}:{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{words} words but {types} types")]
pub struct LengthMismatch {
    pub words: usize,
    pub types: usize,
}

/// A sentence split at its unique coordinator token. The coordinator is
/// syncategorematic: it never receives a type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordSplit {
    pub left: Vec<String>,
    pub coordinator: String,
    pub right: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("no coordinator {0:?} in the sentence")]
    NoCoordinator(String),
    #[error("found {count} occurrences of coordinator {token:?}; exactly one is supported")]
    MultipleCoordinators { token: String, count: usize },
    #[error("coordinator {0:?} has an empty side")]
    EmptySide(String),
}

/// Split `words` at the unique occurrence of `coord`.
pub fn split_coordination(words: &[String], coord: &str) -> Result<CoordSplit, SplitError> {
    let positions: Vec<usize> = words
        .iter()
        .enumerate()
        .filter(|(_, w)| w.as_str() == coord)
        .map(|(i, _)| i)
        .collect();
    match positions.as_slice() {
        [] => Err(SplitError::NoCoordinator(coord.to_string())),
        [at] => {
            if *at == 0 || *at == words.len() - 1 {
                return Err(SplitError::EmptySide(coord.to_string()));
            }
            Ok(CoordSplit {
                left: words[..*at].to_vec(),
                coordinator: coord.to_string(),
                right: words[*at + 1..].to_vec(),
            })
        }
        many => Err(SplitError::MultipleCoordinators {
            token: coord.to_string(),
            count: many.len(),
        }),
    }
}

/// The number of distinct type assignments for `words`: the product of
/// the lexical set sizes. 1 for the empty word list.
pub fn possible_assignments_count(words: &[String], lex: &Lexicon) -> Result<BigUint, UnknownWord> {
    let mut product = BigUint::from(1u32);
    for word in words {
        let types = lex
            .types_for(word)
            .ok_or_else(|| UnknownWord(word.clone()))?;
        product *= BigUint::from(types.len());
    }
    Ok(product)
}

/// Result of enumerating one side: the assignments whose side verdict is
/// Ok, each with its register.
#[derive(Debug, Clone)]
pub struct SideEnumeration {
    pub survivors: Vec<(Assignment, Register)>,
    /// True when a survivor cap cut the enumeration short.
    pub truncated: bool,
    /// Candidates actually inspected.
    pub inspected: u64,
}

/// Enumerate the per-word type choices of one conjunct in lexicographic
/// order of per-word type indices, keeping the assignments that pass the
/// directionality verdict for `side`.
///
/// Enumeration is streaming: memory is proportional to the survivors, not
/// to the product. With a cap, enumeration stops as soon as one survivor
/// beyond the cap is seen; the overflow survivor is discarded and the
/// result flagged as truncated.
pub fn enumerate_side(
    words: &[String],
    lex: &Lexicon,
    side: Side,
    cap: Option<u64>,
) -> Result<SideEnumeration, UnknownWord> {
    enumerate_side_filtered(words, lex, side, cap, |_, _| true)
}

/// [`enumerate_side`] with an extra predicate, the hook for occurrence
/// checks beyond directionality. Candidates failing `keep` are dropped
/// without counting against the cap.
pub fn enumerate_side_filtered(
    words: &[String],
    lex: &Lexicon,
    side: Side,
    cap: Option<u64>,
    mut keep: impl FnMut(&Assignment, &Register) -> bool,
) -> Result<SideEnumeration, UnknownWord> {
    let choices: Vec<&[CatType]> = words
        .iter()
        .map(|w| lex.types_for(w).ok_or_else(|| UnknownWord(w.clone())))
        .collect::<Result<_, _>>()?;

    let mut out = SideEnumeration {
        survivors: Vec::new(),
        truncated: false,
        inspected: 0,
    };
    let mut indices = vec![0usize; words.len()];
    loop {
        out.inspected += 1;
        let types: TypeSequence = indices
            .iter()
            .zip(&choices)
            .map(|(&i, set)| set[i].clone())
            .collect();
        let (register, verdict) = saturate(&types, side);
        if matches!(verdict, SideVerdict::Ok) {
            let assignment =
                Assignment::new(words.to_vec(), types).expect("one type per word by construction");
            if keep(&assignment, &register) {
                if cap.is_some_and(|c| out.survivors.len() as u64 >= c) {
                    out.truncated = true;
                    break;
                }
                out.survivors.push((assignment, register));
            }
        }
        if !advance(&mut indices, &choices) {
            break;
        }
    }
    Ok(out)
}

/// Odometer step, last word fastest. False when the product is exhausted.
fn advance(indices: &mut [usize], choices: &[&[CatType]]) -> bool {
    for i in (0..indices.len()).rev() {
        indices[i] += 1;
        if indices[i] < choices[i].len() {
            return true;
        }
        indices[i] = 0;
    }
    false
}
