//! Small named semigroupoids used throughout the docs and tests.

use crate::genrep::TransformationArrow;
use crate::tables::CompositionTable;

fn table(s: &str) -> CompositionTable {
    s.parse().expect("catalog tables are well formed")
}

/// The flip-flop monoid: arrow 0 is the identity, 1 and 2 are the two
/// constant resets, `xy = y` for resets.
pub fn flip_flop() -> CompositionTable {
    table("0 1 2; 1 1 2; 2 1 2")
}

/// Three arrows where only `ab = c` is defined. A semigroupoid with a
/// two-object chain typing.
pub fn single_composite() -> CompositionTable {
    table(". 2 .; . . .; . . .")
}

/// As [`single_composite`] but with `ab = b`, which breaks associativity:
/// `(aa)b` is not composable while `a(ab) = ab = b`.
pub fn single_composite_absorbing() -> CompositionTable {
    table(". 1 .; . . .; . . .")
}

/// Typable on one object but not associative: `(ba)b = b` while `b(ab) = a`.
pub fn typable_not_associative() -> CompositionTable {
    table("0 1; 0 0")
}

/// Associative but admits no type structure: `aa` is not composable while
/// `ab` and `ba` are.
pub fn associative_untypable() -> CompositionTable {
    table(". 0; 0 1")
}

/// Two objects, six arrows: an order-two group `{0, 1}` on the first
/// object, three arrows 2, 3, 4 from the first to the second on which the
/// group acts, and an idempotent 5 on the second object absorbing them.
pub fn two_object_semigroupoid() -> CompositionTable {
    table("0 1 2 3 4 .; 1 0 2 4 3 .; . . . . . 2; . . . . . 2; . . . . . 2; . . . . . 5")
}

/// An idempotent next to a non-composable arrow.
pub fn idempotent_and_loner() -> CompositionTable {
    table("0 .; . .")
}

/// The cyclic group of order two.
pub fn cyclic_group_two() -> CompositionTable {
    table("1 0; 0 1")
}

/// Degrees and generators of two 2-state objects: a transposition on the
/// first, a reset on the second, and identity-shaped maps both ways.
/// Returns `(degrees, [c, r, f, g])`.
pub fn communicating_vessels() -> (Vec<usize>, Vec<TransformationArrow>) {
    let arrow = |dom, cod, map: [usize; 2]| TransformationArrow {
        dom,
        cod,
        map: map.to_vec(),
    };
    (
        vec![2, 2],
        vec![
            arrow(0, 0, [1, 0]),
            arrow(1, 1, [1, 1]),
            arrow(0, 1, [0, 1]),
            arrow(1, 0, [0, 1]),
        ],
    )
}
