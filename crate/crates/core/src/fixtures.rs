//! Small named AG-groups and fuzzy subsets used throughout tests, benches and the CLI.

use crate::grade::Grade;
use crate::group::AgGroup;
use crate::table::CayleyTable;

/// The order-4 AG-group with `a * b = (b - a) mod 4`:
///
/// ```text
/// . | 0 1 2 3
/// 0 | 0 1 2 3
/// 1 | 3 0 1 2
/// 2 | 2 3 0 1
/// 3 | 1 2 3 0
/// ```
pub fn z4_subtraction() -> AgGroup {
    let raw = [[0, 1, 2, 3], [3, 0, 1, 2], [2, 3, 0, 1], [1, 2, 3, 0]];
    let raw: Vec<Vec<i64>> = raw.iter().map(|r| r.to_vec()).collect();
    AgGroup::promote(CayleyTable::validate(&raw).expect("valid table")).expect("AG-group")
}

/// Klein four-group `<a, b : a^2 = b^2 = (ab)^2 = e>` labelled `e=0, a=1, b=2, ab=3`.
pub fn klein_four() -> AgGroup {
    AgGroup::promote(CayleyTable::from_fn(4, |x, y| x ^ y).expect("valid table")).expect("AG-group")
}

/// `Z3` under `i * j = (j - i) mod 3`, a non-commutative AG-group.
pub fn z3_subtraction() -> AgGroup {
    AgGroup::promote(CayleyTable::from_fn(3, |i, j| (j + 3 - i) % 3).expect("valid table")).expect("AG-group")
}

pub fn z2() -> AgGroup {
    AgGroup::promote(CayleyTable::from_fn(2, |a, b| (a + b) % 2).expect("valid table")).expect("AG-group")
}

pub fn trivial() -> AgGroup {
    AgGroup::promote(CayleyTable::from_fn(1, |_, _| 0).expect("valid table")).expect("AG-group")
}

fn grades(values: &[(u64, u64)]) -> Vec<Grade> {
    values.iter().map(|&(p, q)| Grade::new(p, q).expect("grade in [0,1]")).collect()
}

/// `mu(0) = 1`, `mu(x) = 1/2` otherwise, on [`z4_subtraction`].
pub fn z4_non_normal_grades() -> Vec<Grade> {
    grades(&[(1, 1), (1, 2), (1, 2), (1, 2)])
}

/// `mu(e) = 1`, `mu(a) = 1/2`, `mu(b) = mu(ab) = 1/4`, on [`klein_four`].
pub fn klein_normal_grades() -> Vec<Grade> {
    grades(&[(1, 1), (1, 2), (1, 4), (1, 4)])
}

/// `mu(e) = mu(a) = 1`, `mu(b) = mu(ab) = 1/2` on [`klein_four`]; level set `{e, a}`.
pub fn klein_level_pair_grades() -> Vec<Grade> {
    grades(&[(1, 1), (1, 1), (1, 2), (1, 2)])
}
