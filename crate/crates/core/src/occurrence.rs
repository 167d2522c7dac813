//! Signed, directed occurrences of basic types and the per-conjunct
//! saturation registers built from them.
//!
//! Every leaf of a type is either a head (what the type produces, +1 under
//! the count protocol) or an argument (what it consumes, -1). Arguments
//! carry the direction of the slash that introduced them; for occurrences
//! nested inside a complex argument subtype, the outermost
//! argument-introducing slash wins, since it decides on which side of the
//! token the matching material must appear.
//!
//! `saturate` matches arguments to heads within one conjunct, per basic
//! type, respecting linear order: a rightward argument can only be filled
//! by a head of a later token, a leftward argument only by a head of an
//! earlier token. A type never consumes itself, so occurrences of the
//! same token are never matched to each other. The outcome per basic type
//! is a quadruple `<sathead, satarg, freehead, freearg>`:
//!
//! * `sathead` - heads saturated by arguments that point away from the
//!   coordinator (leftward in a left conjunct, rightward in a right one);
//! * `satarg`/`freearg` - matched/unmatched arguments that point toward
//!   the coordinator;
//! * `freehead` - heads not saturated at all.
//!
//! Heads saturated by coordinator-pointing arguments count in neither
//! `sathead` nor `freehead`. An argument pointing away from the
//! coordinator can never be satisfied by the other conjunct, so leaving
//! one unmatched fails the side outright.

use std::collections::BTreeMap;
use std::fmt;

use crate::types::{BasicType, CatType, Slash, TypeSequence};

/// Whether a basic-type occurrence is produced or consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Head,
    Argument,
}

impl Polarity {
    fn flipped(self) -> Polarity {
        match self {
            Polarity::Head => Polarity::Argument,
            Polarity::Argument => Polarity::Head,
        }
    }
}

/// One basic-type occurrence in a sequence.
///
/// `token` is the 0-based index of the type the occurrence belongs to and
/// `rank` its pre-order position within that type's tree (result subtree
/// before argument subtree). Occurrences are totally ordered by
/// `(token, rank)`. Heads on the top-level result spine have no direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub basic: BasicType,
    pub polarity: Polarity,
    pub direction: Option<Slash>,
    pub token: usize,
    pub rank: usize,
}

impl Occurrence {
    pub fn position(&self) -> (usize, usize) {
        (self.token, self.rank)
    }
}

/// Occurrences of a single type, in pre-order, with `token` set to 0.
pub fn occurrences(t: &CatType) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let mut rank = 0;
    walk(t, Polarity::Head, None, 0, &mut rank, &mut out);
    out
}

/// Occurrences of a whole sequence, in `(token, rank)` order.
pub fn seq_occurrences(s: &TypeSequence) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (token, t) in s.iter().enumerate() {
        let mut rank = 0;
        walk(t, Polarity::Head, None, token, &mut rank, &mut out);
    }
    out
}

fn walk(
    t: &CatType,
    polarity: Polarity,
    direction: Option<Slash>,
    token: usize,
    rank: &mut usize,
    out: &mut Vec<Occurrence>,
) {
    match t {
        CatType::Basic(b) => {
            out.push(Occurrence {
                basic: b.clone(),
                polarity,
                direction,
                token,
                rank: *rank,
            });
            *rank += 1;
        }
        CatType::Fraction(f) => {
            walk(&f.result, polarity, direction, token, rank, out);
            // The outermost argument-introducing slash fixes the direction
            // for everything below it.
            let dir = direction.or(Some(f.slash));
            walk(&f.argument, polarity.flipped(), dir, token, rank, out);
        }
    }
}

/// A conjunct's position relative to the coordinator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Argument direction pointing toward the coordinator. Such arguments
    /// may stay free: the other conjunct can still satisfy them.
    pub fn inward(self) -> Slash {
        match self {
            Side::Left => Slash::Rightward,
            Side::Right => Slash::Leftward,
        }
    }

    /// Argument direction pointing away from the coordinator. Nothing can
    /// ever appear there, so these arguments must be saturated in-side.
    pub fn outward(self) -> Slash {
        self.inward().flipped()
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Saturation counts for one basic type; all components non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Quadruple {
    pub sathead: u32,
    pub satarg: u32,
    pub freehead: u32,
    pub freearg: u32,
}

impl Quadruple {
    pub fn new(sathead: u32, satarg: u32, freehead: u32, freearg: u32) -> Self {
        Quadruple {
            sathead,
            satarg,
            freehead,
            freearg,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Quadruple::default()
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{},{},{},{}>",
            self.sathead, self.satarg, self.freehead, self.freearg
        )
    }
}

/// Per-side register: one quadruple per basic type occurring in the
/// sequence. Absent types denote the all-zero quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    side: Side,
    entries: BTreeMap<BasicType, Quadruple>,
}

impl Register {
    /// Assemble a register directly from quadruples. [`saturate`] is the
    /// canonical way to build one from a type sequence; this is for
    /// synthetic registers in diagnostics and benchmarks. All-zero
    /// quadruples are dropped, since absent already means zero.
    pub fn from_quads(
        side: Side,
        entries: impl IntoIterator<Item = (BasicType, Quadruple)>,
    ) -> Register {
        Register {
            side,
            entries: entries
                .into_iter()
                .filter(|(_, quad)| !quad.is_zero())
                .collect(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn quad(&self, x: &BasicType) -> Quadruple {
        self.entries.get(x).copied().unwrap_or_default()
    }

    pub fn basics(&self) -> impl Iterator<Item = &BasicType> {
        self.entries.keys()
    }

    pub fn entries(&self) -> &BTreeMap<BasicType, Quadruple> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for Register {
    /// One line per basic type, sorted lexicographically:
    /// `x: <sathead,satarg,freehead,freearg>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (basic, quad)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{basic}: {quad}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    FreeLeftwardArgInLeft,
    FreeRightwardArgInRight,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::FreeLeftwardArgInLeft => "FreeLeftwardArgInLeft",
            FailureReason::FreeRightwardArgInRight => "FreeRightwardArgInRight",
        })
    }
}

/// An unsatisfiable argument: it points away from the coordinator but no
/// head within the conjunct can fill it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideFailure {
    pub reason: FailureReason,
    pub occurrence: Occurrence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideVerdict {
    Ok,
    Fail(SideFailure),
}

impl SideVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, SideVerdict::Ok)
    }
}

impl fmt::Display for SideVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideVerdict::Ok => f.write_str("Ok"),
            SideVerdict::Fail(failure) => {
                let occ = &failure.occurrence;
                let dir = match occ.direction {
                    Some(Slash::Leftward) => "leftward",
                    Some(Slash::Rightward) => "rightward",
                    None => "undirected",
                };
                write!(
                    f,
                    "Fail {} (token {}: {} argument {})",
                    failure.reason, occ.token, dir, occ.basic
                )
            }
        }
    }
}

/// Build the register for one side of a coordination.
///
/// Per basic type, a maximum-cardinality matching between arguments and
/// heads is computed under the direction/order constraints, preferring
/// matchings that saturate outward-pointing arguments (these both fix the
/// verdict and maximize `sathead`). A failed side still returns its
/// register for diagnostics; the reported occurrence is the first
/// unmatchable argument in position order.
pub fn saturate(s: &TypeSequence, side: Side) -> (Register, SideVerdict) {
    let occs = seq_occurrences(s);

    let mut grouped: BTreeMap<&BasicType, (Vec<&Occurrence>, Vec<&Occurrence>)> = BTreeMap::new();
    for occ in &occs {
        let slot = grouped.entry(&occ.basic).or_default();
        match occ.polarity {
            Polarity::Head => slot.0.push(occ),
            Polarity::Argument => slot.1.push(occ),
        }
    }

    let mut entries = BTreeMap::new();
    let mut failure: Option<&Occurrence> = None;
    for (basic, (heads, args)) in &grouped {
        let matched = match_arguments(heads, args, side.outward());
        let mut quad = Quadruple::default();
        let mut matched_total = 0u32;
        for (arg, &is_matched) in args.iter().zip(&matched) {
            if is_matched {
                matched_total += 1;
            }
            if arg.direction == Some(side.inward()) {
                if is_matched {
                    quad.satarg += 1;
                } else {
                    quad.freearg += 1;
                }
            } else if is_matched {
                quad.sathead += 1;
            } else if failure.is_none_or(|f| arg.position() < f.position()) {
                failure = Some(arg);
            }
        }
        quad.freehead = heads.len() as u32 - matched_total;
        entries.insert((*basic).clone(), quad);
    }

    let verdict = match failure {
        None => SideVerdict::Ok,
        Some(occ) => SideVerdict::Fail(SideFailure {
            reason: match side {
                Side::Left => FailureReason::FreeLeftwardArgInLeft,
                Side::Right => FailureReason::FreeRightwardArgInRight,
            },
            occurrence: occ.clone(),
        }),
    };
    (Register { side, entries }, verdict)
}

fn direction_admits(arg: &Occurrence, head: &Occurrence) -> bool {
    match arg.direction {
        Some(Slash::Rightward) => head.token > arg.token,
        Some(Slash::Leftward) => head.token < arg.token,
        None => false,
    }
}

/// Augmenting-path matching of arguments to heads of one basic type.
/// Arguments in `priority` direction are seeded first: augmentation never
/// unmatches an already-matched argument, so the result is a maximum
/// matching that also maximizes the number of matched priority arguments.
/// Returns, per argument, whether it was matched.
fn match_arguments(heads: &[&Occurrence], args: &[&Occurrence], priority: Slash) -> Vec<bool> {
    let order = args
        .iter()
        .enumerate()
        .filter(|(_, a)| a.direction == Some(priority))
        .chain(
            args.iter()
                .enumerate()
                .filter(|(_, a)| a.direction != Some(priority)),
        )
        .map(|(i, _)| i)
        .collect::<Vec<_>>();

    let mut head_owner: Vec<Option<usize>> = vec![None; heads.len()];
    for &arg_idx in &order {
        let mut visited = vec![false; heads.len()];
        try_assign(arg_idx, heads, args, &mut head_owner, &mut visited);
    }

    let mut matched = vec![false; args.len()];
    for owner in head_owner.into_iter().flatten() {
        matched[owner] = true;
    }
    matched
}

fn try_assign(
    arg_idx: usize,
    heads: &[&Occurrence],
    args: &[&Occurrence],
    head_owner: &mut Vec<Option<usize>>,
    visited: &mut Vec<bool>,
) -> bool {
    for head_idx in 0..heads.len() {
        if visited[head_idx] || !direction_admits(args[arg_idx], heads[head_idx]) {
            continue;
        }
        visited[head_idx] = true;
        let free = match head_owner[head_idx] {
            None => true,
            Some(owner) => try_assign(owner, heads, args, head_owner, visited),
        };
        if free {
            head_owner[head_idx] = Some(arg_idx);
            return true;
        }
    }
    false
}
