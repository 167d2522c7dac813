//! Brute-force AB derivability (application only) and the coordination
//! scheme, used as ground truth for the count-based filter.
//!
//! AB has exactly two rules, stated here in result-first notation:
//!
//! ```text
//! a/b  b   =>  a     (rightward application)
//! b    a\b =>  a     (leftward application)
//! ```
//!
//! `ab_derive` fills a CYK-style chart over spans; every derivable type of
//! a span is a subtype of the input, so the chart is finite. A coordinated
//! string `L & R => goal` is treated as derivable when some non-empty
//! suffix of `L` and some non-empty prefix of `R` reduce to a common type
//! `c` and the remainder, with `c` spliced in where the coordination was,
//! reduces to the goal.

use std::collections::BTreeSet;

use crate::types::{CatType, Slash, TypeSequence};

/// True iff `s` reduces to `goal` by application alone. The empty
/// sequence derives nothing.
pub fn ab_derive(s: &TypeSequence, goal: &CatType) -> bool {
    if s.is_empty() {
        return false;
    }
    full_span(s).contains(goal)
}

/// Every type derivable from the full span of `s`.
pub fn derivable_types(s: &TypeSequence) -> BTreeSet<CatType> {
    if s.is_empty() {
        return BTreeSet::new();
    }
    full_span(s)
}

fn full_span(s: &TypeSequence) -> BTreeSet<CatType> {
    let n = s.len();
    // chart[i][j - i - 1] holds the types derivable over tokens i..j.
    let mut chart: Vec<Vec<BTreeSet<CatType>>> = (0..n)
        .map(|i| {
            let mut row = vec![BTreeSet::new(); n - i];
            row[0].insert(s[i].clone());
            row
        })
        .collect();

    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell = BTreeSet::new();
            for k in i + 1..j {
                let left = &chart[i][k - i - 1];
                let right = &chart[k][j - k - 1];
                for a in left {
                    if let CatType::Fraction(f) = a {
                        if f.slash == Slash::Rightward && right.contains(&f.argument) {
                            cell.insert(f.result.clone());
                        }
                    }
                }
                for b in right {
                    if let CatType::Fraction(f) = b {
                        if f.slash == Slash::Leftward && left.contains(&f.argument) {
                            cell.insert(f.result.clone());
                        }
                    }
                }
            }
            chart[i][len - 1] = cell;
        }
    }
    std::mem::take(&mut chart[0][n - 1])
}

/// A certificate that `L & R => goal` is derivable: the coordinated parts
/// of each conjunct, the surrounding context, and the shared type the
/// coordinated parts reduce to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordWitness {
    /// Left-conjunct material before the coordinated part (may be empty).
    pub left_context: TypeSequence,
    /// Non-empty suffix of the left conjunct that reduces to the shared type.
    pub left_coordinated: TypeSequence,
    /// Non-empty prefix of the right conjunct that reduces to the shared type.
    pub right_coordinated: TypeSequence,
    /// Right-conjunct material after the coordinated part (may be empty).
    pub right_context: TypeSequence,
    /// The type both coordinated parts reduce to.
    pub coordinated_type: CatType,
}

/// Coordination derivability. Returns the first witness found, scanning
/// the longest left-coordinated suffix first, then the longest
/// right-coordinated prefix, then shared types in textual order.
pub fn coord_derive(
    left: &TypeSequence,
    right: &TypeSequence,
    goal: &CatType,
) -> Option<CoordWitness> {
    if left.is_empty() || right.is_empty() {
        return None;
    }

    // Derivable sets of every non-empty prefix of the right conjunct,
    // indexed by prefix length.
    let right_prefixes: Vec<BTreeSet<CatType>> = (1..=right.len())
        .map(|len| derivable_types(&right[..len].into()))
        .collect();

    for split_l in 0..left.len() {
        let left_context: TypeSequence = left[..split_l].into();
        let left_coordinated: TypeSequence = left[split_l..].into();
        let left_derivable = derivable_types(&left_coordinated);
        if left_derivable.is_empty() {
            continue;
        }
        for split_r in (1..=right.len()).rev() {
            let shared = &right_prefixes[split_r - 1];
            let mut candidates: Vec<&CatType> = left_derivable.intersection(shared).collect();
            if candidates.is_empty() {
                continue;
            }
            candidates.sort_by_cached_key(|c| c.to_string());
            let right_context: TypeSequence = right[split_r..].into();
            for c in candidates {
                let mut spliced = left_context.clone();
                spliced = spliced.concat(&TypeSequence::new(vec![c.clone()]));
                spliced = spliced.concat(&right_context);
                if ab_derive(&spliced, goal) {
                    return Some(CoordWitness {
                        left_context,
                        left_coordinated,
                        right_coordinated: right[..split_r].into(),
                        right_context,
                        coordinated_type: c.clone(),
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::tests::arb_seq;
    use proptest::prelude::*;

    fn cat(s: &str) -> CatType {
        s.parse().unwrap()
    }

    fn seq(items: &[&str]) -> TypeSequence {
        items.iter().map(|s| cat(s)).collect()
    }

    #[test]
    fn rightward_application() {
        assert!(ab_derive(&seq(&["x/y", "y"]), &cat("x")));
    }

    #[test]
    fn leftward_argument_in_the_wrong_place() {
        // x\y wants its y on the left; here it sits on the right.
        assert!(!ab_derive(&seq(&["x\\y", "y"]), &cat("x")));
    }

    #[test]
    fn count_balance_does_not_imply_derivability() {
        assert!(!ab_derive(&seq(&["(x/y)/z", "y", "z"]), &cat("x")));
    }

    #[test]
    fn leftward_application() {
        assert!(ab_derive(&seq(&["x", "z\\x"]), &cat("z")));
        assert!(ab_derive(&seq(&["x/y", "y", "z\\x"]), &cat("z")));
    }

    #[test]
    fn empty_sequence_derives_nothing() {
        assert!(!ab_derive(&TypeSequence::default(), &cat("x")));
        assert!(derivable_types(&TypeSequence::default()).is_empty());
    }

    #[test]
    fn derivable_types_of_small_spans() {
        assert_eq!(derivable_types(&seq(&["x/y", "y"])), [cat("x")].into());
        assert_eq!(derivable_types(&seq(&["x"])), [cat("x")].into());
        assert_eq!(derivable_types(&seq(&["x/y"])), [cat("x/y")].into());
    }

    #[test]
    fn coordination_with_shared_argument() {
        // x/y y & y z\x => z: the y is coordinated.
        let witness = coord_derive(&seq(&["x/y", "y"]), &seq(&["y", "z\\x"]), &cat("z")).unwrap();
        assert_eq!(witness.left_context, seq(&["x/y"]));
        assert_eq!(witness.left_coordinated, seq(&["y"]));
        assert_eq!(witness.right_coordinated, seq(&["y"]));
        assert_eq!(witness.right_context, seq(&["z\\x"]));
        assert_eq!(witness.coordinated_type, cat("y"));
    }

    #[test]
    fn coordination_of_identical_conjuncts() {
        let witness = coord_derive(&seq(&["x"]), &seq(&["x"]), &cat("x")).unwrap();
        assert!(witness.left_context.is_empty());
        assert!(witness.right_context.is_empty());
        assert_eq!(witness.coordinated_type, cat("x"));
    }

    #[test]
    fn eight_token_charts_stay_cheap() {
        let started = std::time::Instant::now();
        let chain = seq(&["s/x", "x/x", "x/x", "x/x", "x/x", "x/x", "x/x", "x"]);
        assert!(ab_derive(&chain, &cat("s")));
        let mirrored = chain.mirrored();
        assert!(ab_derive(&mirrored, &cat("s")));
        assert!(started.elapsed().as_millis() < 500);
    }

    #[test]
    fn coordination_fails_when_the_double_function_head_is_occupied() {
        // x/y y/u & y/u u z\x\u => z: the lone u head is consumed by the
        // stacked \u, leaving the coordinated /u arguments uncovered.
        let verdict = coord_derive(
            &seq(&["x/y", "y/u"]),
            &seq(&["y/u", "u", "z\\x\\u"]),
            &cat("z"),
        );
        assert!(verdict.is_none());
    }

    #[test]
    fn witnesses_prefer_longer_coordinated_parts() {
        // Both the whole conjuncts and their final tokens reduce to a
        // shared type; the longest left suffix wins.
        let witness = coord_derive(&seq(&["x/y", "y"]), &seq(&["x"]), &cat("x")).unwrap();
        assert!(witness.left_context.is_empty());
        assert_eq!(witness.left_coordinated, seq(&["x/y", "y"]));
        assert_eq!(witness.coordinated_type, cat("x"));
    }

    proptest! {
        // Chart cells only ever hold subtypes of the input, so growing the
        // span never invents new material.
        #[test]
        fn derivable_types_are_subtypes_of_the_input(s in arb_seq(5)) {
            let mut subtypes = BTreeSet::new();
            fn collect(t: &CatType, out: &mut BTreeSet<CatType>) {
                out.insert(t.clone());
                if let CatType::Fraction(f) = t {
                    collect(&f.result, out);
                    collect(&f.argument, out);
                }
            }
            for t in s.iter() {
                collect(t, &mut subtypes);
            }
            for t in derivable_types(&s) {
                prop_assert!(subtypes.contains(&t));
            }
        }

        #[test]
        fn every_witness_validates_its_sub_derivations(
            l in arb_seq(3), r in arb_seq(3),
        ) {
            if l.is_empty() || r.is_empty() {
                return Ok(());
            }
            let goal = cat("x");
            if let Some(w) = coord_derive(&l, &r, &goal) {
                prop_assert!(ab_derive(&w.left_coordinated, &w.coordinated_type));
                prop_assert!(ab_derive(&w.right_coordinated, &w.coordinated_type));
                let spliced = w
                    .left_context
                    .concat(&TypeSequence::new(vec![w.coordinated_type.clone()]))
                    .concat(&w.right_context);
                prop_assert!(ab_derive(&spliced, &goal));
                let rebuilt_left = w.left_context.concat(&w.left_coordinated);
                let rebuilt_right = w.right_coordinated.concat(&w.right_context);
                prop_assert_eq!(rebuilt_left, l);
                prop_assert_eq!(rebuilt_right, r);
            }
        }
    }
}
