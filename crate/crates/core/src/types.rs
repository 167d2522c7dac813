//! Categorial types, their textual notation, and the count protocol.
//!
//! Notation is *result-first*: `a/b` is a type that produces `a` after
//! consuming a `b` to its **right**, and `a\b` produces `a` after consuming
//! a `b` to its **left**. So in `x z\x` the second token consumes the `x`
//! before it and the pair reduces to `z`. This differs from one common
//! Lambek convention (`b\a` with the argument on the left of the slash), so
//! read carefully when porting grammars.
//!
//! Both slashes have equal precedence and associate to the left:
//! `z\x\u` denotes `(z\x)\u`, a type that first consumes `u`, then `x`,
//! both to its left. Parentheses override as usual, e.g. `x/(y\z)`.
//!
//! The count of a basic type `x` in a type is +1 for each head (positive)
//! occurrence and -1 for each argument (negative) occurrence:
//!
//! ```text
//! count_x(x)   = 1
//! count_x(y)   = 0          for basic y != x
//! count_x(y/z) = count_x(y\z) = count_x(y) - count_x(z)
//! ```
//!
//! Counts extend to sequences by summation. A sequence can only reduce to a
//! basic goal `g` if every basic type balances (1 for `g`, 0 for the rest);
//! the converse does not hold, which is what makes the check a cheap
//! pre-parse filter rather than a parser.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use thiserror::Error;

/// An atomic category, e.g. `s`, `np`, `n`.
///
/// Names start with an ASCII letter and continue with letters, digits or
/// underscores.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicType(String);

impl BasicType {
    pub fn new(name: impl Into<String>) -> Result<Self, TypeParseError> {
        let name = name.into();
        validate_atom(&name)?;
        Ok(BasicType(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for BasicType {
    type Err = TypeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BasicType::new(s)
    }
}

fn validate_atom(name: &str) -> Result<(), TypeParseError> {
    let mut chars = name.chars();
    match chars.next() {
        None => return Err(TypeParseError::new(1, ErrorKind::UnexpectedEnd)),
        Some(c) if c.is_ascii_alphabetic() => {}
        Some(c) => return Err(TypeParseError::new(1, ErrorKind::UnexpectedChar(c))),
    }
    for (i, c) in name.char_indices().skip(1) {
        if !(c.is_ascii_alphanumeric() || c == '_') {
            return Err(TypeParseError::new(i + 1, ErrorKind::UnexpectedChar(c)));
        }
    }
    Ok(())
}

/// Slash direction: where a fraction looks for its argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slash {
    /// `/` - the argument is expected to the right.
    Rightward,
    /// `\` - the argument is expected to the left.
    Leftward,
}

impl Slash {
    pub fn flipped(self) -> Slash {
        match self {
            Slash::Rightward => Slash::Leftward,
            Slash::Leftward => Slash::Rightward,
        }
    }
}

impl fmt::Display for Slash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slash::Rightward => "/",
            Slash::Leftward => "\\",
        })
    }
}

/// A directional fraction: `result slash argument`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    pub result: CatType,
    pub slash: Slash,
    pub argument: CatType,
}

/// A categorial type: a basic atom or a directional fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatType {
    Basic(BasicType),
    Fraction(Box<Fraction>),
}

impl CatType {
    pub fn basic(b: BasicType) -> CatType {
        CatType::Basic(b)
    }

    pub fn fraction(result: CatType, slash: Slash, argument: CatType) -> CatType {
        CatType::Fraction(Box::new(Fraction {
            result,
            slash,
            argument,
        }))
    }

    /// `self / argument`
    pub fn over(self, argument: CatType) -> CatType {
        CatType::fraction(self, Slash::Rightward, argument)
    }

    /// `self \ argument`
    pub fn under(self, argument: CatType) -> CatType {
        CatType::fraction(self, Slash::Leftward, argument)
    }

    pub fn as_basic(&self) -> Option<&BasicType> {
        match self {
            CatType::Basic(b) => Some(b),
            CatType::Fraction(_) => None,
        }
    }

    /// The count of `x` in this type.
    pub fn count(&self, x: &BasicType) -> i64 {
        match self {
            CatType::Basic(b) => (b == x) as i64,
            CatType::Fraction(f) => f.result.count(x) - f.argument.count(x),
        }
    }

    /// All basic types occurring as leaves of this type.
    pub fn basics(&self) -> BTreeSet<BasicType> {
        let mut out = BTreeSet::new();
        self.collect_basics(&mut out);
        out
    }

    fn collect_basics(&self, out: &mut BTreeSet<BasicType>) {
        match self {
            CatType::Basic(b) => {
                out.insert(b.clone());
            }
            CatType::Fraction(f) => {
                f.result.collect_basics(out);
                f.argument.collect_basics(out);
            }
        }
    }

    /// The same type with every slash flipped. Mirroring a whole sequence
    /// (reverse token order, flip slashes) swaps the roles of the left and
    /// right conjunct sides.
    pub fn mirrored(&self) -> CatType {
        match self {
            CatType::Basic(b) => CatType::Basic(b.clone()),
            CatType::Fraction(f) => CatType::fraction(
                f.result.mirrored(),
                f.slash.flipped(),
                f.argument.mirrored(),
            ),
        }
    }
}

impl From<BasicType> for CatType {
    fn from(b: BasicType) -> Self {
        CatType::Basic(b)
    }
}

impl fmt::Display for CatType {
    /// Minimal parentheses: slashes are left-associative, so results are
    /// never parenthesized and fraction arguments always are.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatType::Basic(b) => write!(f, "{b}"),
            CatType::Fraction(fr) => {
                write!(f, "{}{}", fr.result, fr.slash)?;
                match &fr.argument {
                    CatType::Basic(b) => write!(f, "{b}"),
                    arg @ CatType::Fraction(_) => write!(f, "({arg})"),
                }
            }
        }
    }
}

impl FromStr for CatType {
    type Err = TypeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

/// An ordered sequence of categorial types, one per token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TypeSequence(Vec<CatType>);

impl TypeSequence {
    pub fn new(items: Vec<CatType>) -> Self {
        TypeSequence(items)
    }

    pub fn items(&self) -> &[CatType] {
        &self.0
    }

    /// The summed count of `x` over all items; 0 for the empty sequence.
    pub fn count(&self, x: &BasicType) -> i64 {
        self.0.iter().map(|t| t.count(x)).sum()
    }

    /// All basic types occurring anywhere in the sequence.
    pub fn basics(&self) -> BTreeSet<BasicType> {
        let mut out = BTreeSet::new();
        for t in &self.0 {
            t.collect_basics(&mut out);
        }
        out
    }

    /// True iff every basic type balances for the goal: count 1 for the
    /// goal itself and 0 for every other basic type occurring in the
    /// sequence. Necessary but not sufficient for reducibility to `goal`.
    pub fn count_invariance_holds(&self, goal: &BasicType) -> bool {
        let mut basics = self.basics();
        basics.insert(goal.clone());
        basics.iter().all(|x| self.count(x) == i64::from(x == goal))
    }

    pub fn concat(&self, other: &TypeSequence) -> TypeSequence {
        let mut items = self.0.clone();
        items.extend(other.0.iter().cloned());
        TypeSequence(items)
    }

    /// Reversed token order with every slash flipped; see
    /// [`CatType::mirrored`].
    pub fn mirrored(&self) -> TypeSequence {
        self.0.iter().rev().map(CatType::mirrored).collect()
    }
}

impl Deref for TypeSequence {
    type Target = [CatType];

    fn deref(&self) -> &[CatType] {
        &self.0
    }
}

impl From<Vec<CatType>> for TypeSequence {
    fn from(items: Vec<CatType>) -> Self {
        TypeSequence(items)
    }
}

impl From<&[CatType]> for TypeSequence {
    fn from(items: &[CatType]) -> Self {
        TypeSequence(items.to_vec())
    }
}

impl FromIterator<CatType> for TypeSequence {
    fn from_iter<I: IntoIterator<Item = CatType>>(iter: I) -> Self {
        TypeSequence(iter.into_iter().collect())
    }
}

impl fmt::Display for TypeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for TypeSequence {
    /// Parses whitespace-separated type notation, e.g. `"x/y y"`.
    type Err = TypeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace().map(parse_type).collect()
    }
}

/// Error from the type-notation parser, with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {col}")]
pub struct TypeParseError {
    pub col: usize,
    pub kind: ErrorKind,
}

impl TypeParseError {
    fn new(col: usize, kind: ErrorKind) -> Self {
        TypeParseError { col, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    UnexpectedEnd,
    UnexpectedChar(char),
    UnclosedParen,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ErrorKind::UnclosedParen => f.write_str("unclosed parenthesis"),
        }
    }
}

/// Parse type notation: `T := ATOM | T '/' T | T '\' T | '(' T ')'` with
/// both slashes at equal precedence, associating to the left.
pub fn parse_type(text: &str) -> Result<CatType, TypeParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let t = parse_expr(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    match chars.get(pos) {
        None => Ok(t),
        Some(&c) => Err(TypeParseError::new(pos + 1, ErrorKind::UnexpectedChar(c))),
    }
}

fn parse_expr(chars: &[char], pos: &mut usize) -> Result<CatType, TypeParseError> {
    let mut acc = parse_primary(chars, pos)?;
    loop {
        skip_ws(chars, pos);
        let slash = match chars.get(*pos) {
            Some('/') => Slash::Rightward,
            Some('\\') => Slash::Leftward,
            _ => break,
        };
        *pos += 1;
        let argument = parse_primary(chars, pos)?;
        acc = CatType::fraction(acc, slash, argument);
    }
    Ok(acc)
}

fn parse_primary(chars: &[char], pos: &mut usize) -> Result<CatType, TypeParseError> {
    skip_ws(chars, pos);
    match chars.get(*pos) {
        None => Err(TypeParseError::new(*pos + 1, ErrorKind::UnexpectedEnd)),
        Some('(') => {
            let open = *pos;
            *pos += 1;
            let t = parse_expr(chars, pos)?;
            skip_ws(chars, pos);
            match chars.get(*pos) {
                Some(')') => {
                    *pos += 1;
                    Ok(t)
                }
                Some(&c) => Err(TypeParseError::new(*pos + 1, ErrorKind::UnexpectedChar(c))),
                None => Err(TypeParseError::new(open + 1, ErrorKind::UnclosedParen)),
            }
        }
        Some(&c) if c.is_ascii_alphabetic() => {
            let start = *pos;
            while matches!(chars.get(*pos), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
                *pos += 1;
            }
            let name: String = chars[start..*pos].iter().collect();
            Ok(CatType::Basic(BasicType(name)))
        }
        Some(&c) => Err(TypeParseError::new(*pos + 1, ErrorKind::UnexpectedChar(c))),
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while matches!(chars.get(*pos), Some(c) if c.is_whitespace()) {
        *pos += 1;
    }
}
