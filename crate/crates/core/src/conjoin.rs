//! Conjoinability of a left/right register pair and the product filter.
//!
//! For a basic type `x`, let
//!
//! ```text
//! lambda_x = freehead_x(L) - freearg_x(R)
//! rho_x    = freehead_x(R) - freearg_x(L)
//! ```
//!
//! If the coordinated string is derivable, then for every basic type
//! except the goal all four of
//!
//! ```text
//! lambda_x <= satarg_x(R)      -lambda_x <= sathead_x(L) + satarg_x(L)
//! rho_x    <= satarg_x(L)      -rho_x    <= sathead_x(R) + satarg_x(R)
//! ```
//!
//! must hold: surplus free heads on one side can only be co-covered by
//! already-saturated arguments on the other, and surplus free arguments
//! only by already-saturated heads on the other. Every matched argument
//! saturates exactly one head, so `sathead + satarg` is the count of all
//! saturated heads on a side, whichever slash did the saturating. (With
//! `sathead` alone the bound is too tight: in `x/x y & y x\y s\x => s`
//! the free `/x` on the left is fed by the right-hand head of `x\y`,
//! which that side's own `s\x` already saturates.) Violations are
//! therefore safe grounds for rejecting an assignment pair before
//! parsing. The check is one fixed-size comparison per basic type present
//! in either register.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::fmt;

use num::{BigRational, BigUint};

use crate::occurrence::{Register, Side};
use crate::types::BasicType;

thread_local! {
    static TYPE_CHECKS: Cell<u64> = const { Cell::new(0) };
}

/// Number of per-type conjoinability evaluations performed on this thread
/// since the last reset. The test suite uses this to pin the cost of
/// [`conjoinable`] to one evaluation per basic type present.
pub fn type_checks() -> u64 {
    TYPE_CHECKS.with(|c| c.get())
}

pub fn reset_type_checks() {
    TYPE_CHECKS.with(|c| c.set(0));
}

/// `(lambda_x, rho_x)` for a register pair.
///
/// Panics if `reg_l` is not a left-conjunct register or `reg_r` not a
/// right-conjunct one; mixing sides is a caller bug.
pub fn lambda_rho(x: &BasicType, reg_l: &Register, reg_r: &Register) -> (i64, i64) {
    assert_eq!(
        reg_l.side(),
        Side::Left,
        "lambda_rho: left register expected"
    );
    assert_eq!(
        reg_r.side(),
        Side::Right,
        "lambda_rho: right register expected"
    );
    let l = reg_l.quad(x);
    let r = reg_r.quad(x);
    (
        i64::from(l.freehead) - i64::from(r.freearg),
        i64::from(r.freehead) - i64::from(l.freearg),
    )
}

/// One of the four inequalities, named by what it compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    LambdaVsSatargR,
    RhoVsSatargL,
    NegLambdaVsSatheadL,
    NegRhoVsSatheadR,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::LambdaVsSatargR => "LambdaVsSatargR",
            Violation::RhoVsSatargL => "RhoVsSatargL",
            Violation::NegLambdaVsSatheadL => "NegLambdaVsSatheadL",
            Violation::NegRhoVsSatheadR => "NegRhoVsSatheadR",
        })
    }
}

/// Outcome of the four inequalities for one basic type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeVerdict {
    pub lambda: i64,
    pub rho: i64,
    pub violations: Vec<Violation>,
}

impl TypeVerdict {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_type(x: &BasicType, reg_l: &Register, reg_r: &Register) -> TypeVerdict {
    TYPE_CHECKS.with(|c| c.set(c.get() + 1));
    let (lambda, rho) = lambda_rho(x, reg_l, reg_r);
    let l = reg_l.quad(x);
    let r = reg_r.quad(x);
    let mut violations = Vec::new();
    if lambda > i64::from(r.satarg) {
        violations.push(Violation::LambdaVsSatargR);
    }
    if rho > i64::from(l.satarg) {
        violations.push(Violation::RhoVsSatargL);
    }
    if -lambda > i64::from(l.sathead) + i64::from(l.satarg) {
        violations.push(Violation::NegLambdaVsSatheadL);
    }
    if -rho > i64::from(r.sathead) + i64::from(r.satarg) {
        violations.push(Violation::NegRhoVsSatheadR);
    }
    TypeVerdict {
        lambda,
        rho,
        violations,
    }
}

/// The inequalities that fail for `x`; empty means `x`-conjoinable. All
/// four are always evaluated so diagnostics stay complete.
pub fn conjoinable_for(x: &BasicType, reg_l: &Register, reg_r: &Register) -> Vec<Violation> {
    check_type(x, reg_l, reg_r).violations
}

/// Verdict for a register pair: per-type detail for every basic type
/// checked, and the overall conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub conjoinable: bool,
    pub detail: Vec<(BasicType, TypeVerdict)>,
}

impl PairVerdict {
    /// One line per failing type: `x: λ=<v> ρ=<v> violated=[...]`.
    pub fn render_failures(&self) -> String {
        let mut out = String::new();
        for (basic, verdict) in &self.detail {
            if verdict.passes() {
                continue;
            }
            if !out.is_empty() {
                out.push('\n');
            }
            let names: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{}: λ={} ρ={} violated=[{}]",
                basic,
                verdict.lambda,
                verdict.rho,
                names.join(", ")
            ));
        }
        out
    }
}

/// Check every basic type occurring in either register except the goal.
/// Types absent from both registers trivially satisfy the inequalities.
pub fn conjoinable(reg_l: &Register, reg_r: &Register, goal: &BasicType) -> PairVerdict {
    let basics: BTreeSet<&BasicType> = reg_l.basics().chain(reg_r.basics()).collect();
    let mut detail = Vec::with_capacity(basics.len());
    let mut all_pass = true;
    for x in basics {
        if x == goal {
            continue;
        }
        let verdict = check_type(x, reg_l, reg_r);
        all_pass &= verdict.passes();
        detail.push((x.clone(), verdict));
    }
    PairVerdict {
        conjoinable: all_pass,
        detail,
    }
}

/// Pruning statistics for one sentence.
///
/// `pa` is the lexical assignment product over the whole sentence, `ll`
/// and `rr` the per-side survivor counts, `cp = ll * rr` the pair product
/// actually checked, and `aa` the conjoinable pairs admitted to parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterStats {
    pub pa: BigUint,
    pub ll: u64,
    pub rr: u64,
    pub cp: u128,
    pub aa: u64,
}

impl FilterStats {
    pub fn new(pa: BigUint, ll: u64, rr: u64, aa: u64) -> Self {
        let cp = u128::from(ll) * u128::from(rr);
        debug_assert!(u128::from(aa) <= cp);
        FilterStats { pa, ll, rr, cp, aa }
    }

    /// CP/PA as a percentage; `None` when PA is zero.
    pub fn cp_pa_pct(&self) -> Option<BigRational> {
        pct(BigUint::from(self.cp), self.pa.clone())
    }

    /// AA/CP as a percentage; `None` when CP is zero.
    pub fn aa_cp_pct(&self) -> Option<BigRational> {
        pct(BigUint::from(self.aa), BigUint::from(self.cp))
    }

    /// AA/PA as a percentage; `None` when PA is zero.
    pub fn aa_pa_pct(&self) -> Option<BigRational> {
        pct(BigUint::from(self.aa), self.pa.clone())
    }
}

fn pct(num: BigUint, den: BigUint) -> Option<BigRational> {
    use num::Zero;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new((num * 100u32).into(), den.into()))
}

/// Keep exactly the conjoinable pairs of the product `left x right`.
///
/// Returns the surviving `(left index, right index)` pairs in lexicographic
/// order plus the filled-in statistics; `pa` is carried through for ratio
/// reporting. The payload type is opaque to the filter.
pub fn filter_product<A>(
    left: &[(A, Register)],
    right: &[(A, Register)],
    goal: &BasicType,
    pa: &BigUint,
) -> (Vec<(usize, usize)>, FilterStats) {
    let mut survivors = Vec::new();
    for (i, (_, reg_l)) in left.iter().enumerate() {
        for (j, (_, reg_r)) in right.iter().enumerate() {
            if conjoinable(reg_l, reg_r, goal).conjoinable {
                survivors.push((i, j));
            }
        }
    }
    let stats = FilterStats::new(
        pa.clone(),
        left.len() as u64,
        right.len() as u64,
        survivors.len() as u64,
    );
    (survivors, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::occurrence::{saturate, Quadruple};
    use crate::types::TypeSequence;

    fn atom(s: &str) -> BasicType {
        s.parse().unwrap()
    }

    fn seq(items: &[&str]) -> TypeSequence {
        items
            .iter()
            .map(|s| s.parse::<crate::types::CatType>().unwrap())
            .collect()
    }

    fn reg(items: &[&str], side: Side) -> Register {
        saturate(&seq(items), side).0
    }

    #[test]
    fn lambda_rho_of_the_worked_example() {
        // <0,0,1,0> on the left against <0,1,0,0> on the right.
        let left = reg(&["x"], Side::Left);
        let right = reg(&["x", "y\\x"], Side::Right);
        assert_eq!(lambda_rho(&atom("x"), &left, &right), (1, 0));
    }

    #[test]
    fn lambda_rho_of_empty_registers() {
        let left = reg(&[], Side::Left);
        let right = reg(&[], Side::Right);
        assert_eq!(lambda_rho(&atom("x"), &left, &right), (0, 0));
    }

    #[test]
    fn lambda_rho_of_a_shared_argument() {
        let left = reg(&["x/y", "y"], Side::Left);
        let right = reg(&["y", "z\\x"], Side::Right);
        assert_eq!(lambda_rho(&atom("y"), &left, &right), (0, 1));
    }

    #[test]
    #[should_panic(expected = "left register expected")]
    fn lambda_rho_rejects_swapped_sides() {
        let left = reg(&["x"], Side::Right);
        let right = reg(&["x"], Side::Right);
        lambda_rho(&atom("x"), &left, &right);
    }

    #[test]
    fn worked_example_is_conjoinable() {
        // The worked-example pair as its x-quadruples: <0,0,1,0> against
        // <0,1,0,0>. The free head on the left is covered by the saturated
        // leftward argument on the right.
        let left = Register::from_quads(Side::Left, [(atom("x"), Quadruple::new(0, 0, 1, 0))]);
        let right = Register::from_quads(Side::Right, [(atom("x"), Quadruple::new(0, 1, 0, 0))]);
        assert!(conjoinable_for(&atom("x"), &left, &right).is_empty());
        assert!(conjoinable(&left, &right, &atom("s")).conjoinable);

        // The same quadruples arise from saturating the instantiated
        // sequences; x stays conjoinable there too, though the sequences
        // bring a surplus y head along.
        let left = reg(&["x"], Side::Left);
        let right = reg(&["x", "y\\x"], Side::Right);
        assert!(conjoinable_for(&atom("x"), &left, &right).is_empty());
        let verdict = conjoinable(&left, &right, &atom("s"));
        assert!(!verdict.conjoinable);
        assert_eq!(
            conjoinable_for(&atom("y"), &left, &right),
            [Violation::RhoVsSatargL]
        );
    }

    #[test]
    fn occupied_double_function_head_violates_sathead_bound() {
        // Left side has a free /u; on the right the lone u head feeds the
        // stacked \u, so nothing saturated is left over for the copies.
        let left = reg(&["x/y", "y/u"], Side::Left);
        let right = reg(&["y/u", "u", "(z\\x)\\u"], Side::Right);
        let violations = conjoinable_for(&atom("u"), &left, &right);
        assert!(violations.contains(&Violation::NegLambdaVsSatheadL));
    }

    #[test]
    fn empty_registers_pass_trivially() {
        let left = reg(&[], Side::Left);
        let right = reg(&[], Side::Right);
        assert!(conjoinable_for(&atom("x"), &left, &right).is_empty());
        assert!(conjoinable(&left, &right, &atom("s")).conjoinable);
    }

    #[test]
    fn shared_argument_pair_is_conjoinable_for_goal_z() {
        let left = reg(&["x/y", "y"], Side::Left);
        let right = reg(&["y", "z\\x"], Side::Right);
        let verdict = conjoinable(&left, &right, &atom("z"));
        assert!(verdict.conjoinable);
    }

    #[test]
    fn goal_type_is_exempt() {
        // The free z head on the right violates RhoVsSatargL, but z is the
        // goal, so the pair still passes.
        let left = reg(&["x/y", "y"], Side::Left);
        let right = reg(&["y", "z\\x"], Side::Right);
        assert!(!conjoinable_for(&atom("z"), &left, &right).is_empty());
        assert!(conjoinable(&left, &right, &atom("z")).conjoinable);
    }

    #[test]
    fn failure_rendering_lists_each_failing_type() {
        let left = reg(&["x/y", "y/u"], Side::Left);
        let right = reg(&["y/u", "u", "(z\\x)\\u"], Side::Right);
        let verdict = conjoinable(&left, &right, &atom("z"));
        assert!(!verdict.conjoinable);
        let rendered = verdict.render_failures();
        assert!(rendered.contains("u: λ=-1 ρ=-1"));
        assert!(rendered.contains("NegLambdaVsSatheadL"));
    }

    #[test]
    fn filter_product_counts_and_orders_pairs() {
        let goal = atom("y");
        let left = vec![((), reg(&["x"], Side::Left))];
        let right = vec![((), reg(&["x", "y\\x"], Side::Right))];
        let pa = BigUint::from(2u32);
        let (pairs, stats) = filter_product(&left, &right, &goal, &pa);
        assert_eq!(pairs, [(0, 0)]);
        assert_eq!(stats.ll, 1);
        assert_eq!(stats.rr, 1);
        assert_eq!(stats.cp, 1);
        assert_eq!(stats.aa, 1);
    }

    #[test]
    fn filter_product_of_empty_register_singletons() {
        let goal = atom("s");
        let left = vec![((), reg(&[], Side::Left))];
        let right = vec![((), reg(&[], Side::Right))];
        let pa = BigUint::from(1u32);
        let (pairs, stats) = filter_product(&left, &right, &goal, &pa);
        assert_eq!(pairs.len(), 1);
        assert_eq!(stats.cp, 1);
        assert_eq!(stats.aa, 1);
    }

    #[test]
    fn product_arithmetic_matches_side_cardinalities() {
        let stats = FilterStats::new(BigUint::from(4_600_000u64), 736, 160, 1256);
        assert_eq!(stats.cp, 117_760);
    }

    #[test]
    fn removing_a_left_member_never_increases_survivors() {
        let goal = atom("s");
        let left = vec![
            ((), reg(&["x"], Side::Left)),
            ((), reg(&["x/y", "y"], Side::Left)),
        ];
        let right = vec![
            ((), reg(&["x", "y\\x"], Side::Right)),
            ((), reg(&["y", "z\\x"], Side::Right)),
        ];
        let pa = BigUint::from(16u32);
        let (_, full) = filter_product(&left, &right, &goal, &pa);
        let (_, truncated) = filter_product(&left[..1], &right, &goal, &pa);
        assert!(truncated.aa <= full.aa);
    }

    #[test]
    fn type_check_counter_tracks_work() {
        let left = reg(&["x/y", "y"], Side::Left);
        let right = reg(&["y", "z\\x"], Side::Right);
        reset_type_checks();
        conjoinable(&left, &right, &atom("s"));
        // x, y, z occur across the two registers; none is the goal.
        assert_eq!(type_checks(), 3);
        conjoinable(&left, &right, &atom("z"));
        assert_eq!(type_checks(), 5);
    }

    #[test]
    fn percentages_are_exact_rationals() {
        let stats = FilterStats::new(BigUint::from(6000u32), 20, 1, 2);
        let cp_pa = stats.cp_pa_pct().unwrap();
        assert_eq!(cp_pa, BigRational::new(1.into(), 3.into()));
        let zero = FilterStats::new(BigUint::from(10u32), 0, 5, 0);
        assert_eq!(zero.cp, 0);
        assert!(zero.aa_cp_pct().is_none());
    }
}
