//! Small sample posets used throughout the tests and examples.

use crate::poset::FinitePoset;

/// The chain `x < y < z`.
pub fn three_chain() -> FinitePoset {
    FinitePoset::from_covers(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap()
}

/// The chain `w < x < y < z`.
pub fn four_chain() -> FinitePoset {
    FinitePoset::from_covers(&["w", "x", "y", "z"], &[("w", "x"), ("x", "y"), ("y", "z")]).unwrap()
}

/// The diamond `p < q1, q2 < r`: two maximal chains sharing top and bottom.
pub fn diamond() -> FinitePoset {
    FinitePoset::from_covers(
        &["p", "q1", "q2", "r"],
        &[("p", "q1"), ("p", "q2"), ("q1", "r"), ("q2", "r")],
    )
    .unwrap()
}

/// A connected six-element poset with two chain regions: the branch
/// `a < b < d` on one side and the fan `a < c < {e, f}` on the other.
/// The regions share only the minimal element `a`.
pub fn branching() -> FinitePoset {
    FinitePoset::from_covers(
        &["a", "b", "c", "d", "e", "f"],
        &[("a", "b"), ("b", "d"), ("a", "c"), ("c", "e"), ("c", "f")],
    )
    .unwrap()
}

/// The disjoint union of [`branching`] and the chain `g < h < i`:
/// two components, three chain regions in total.
pub fn two_component() -> FinitePoset {
    FinitePoset::from_covers(
        &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
        &[
            ("a", "b"),
            ("b", "d"),
            ("a", "c"),
            ("c", "e"),
            ("c", "f"),
            ("g", "h"),
            ("h", "i"),
        ],
    )
    .unwrap()
}

/// All fixture posets that satisfy the minimum chain-size precondition
/// of the structure theorem.
pub fn all() -> Vec<FinitePoset> {
    vec![
        three_chain(),
        four_chain(),
        diamond(),
        branching(),
        two_component(),
    ]
}
