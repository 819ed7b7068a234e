//! Exhaustive enumeration of small AG-groups (and AG-groupoids with a left
//! identity) up to isomorphism.
//!
//! The left identity is pinned to `0`, so row 0 is the identity row. The
//! remaining cells are filled in row-major order and every left invertive
//! triple is checked as soon as its four cells are known. In AG-group mode
//! rows and columns are also kept duplicate-free, since both cancellation
//! laws hold in an AG-group: `ba = ca` gives `b = (ba)a^-1 = (ca)a^-1 = c`,
//! and `ab = ac` gives `(db)a = (dc)a` for all `d`, so `db = dc`, and `d = e`
//! gives `b = c`. Inverses must be two-sided, so `ab = e` iff `ba = e`.

use std::collections::BTreeSet;

use crate::error::{AlgebraError, Result};
use crate::group::{check_left_invertive, left_identities, AgGroup};
use crate::par::{self, Execution};
use crate::table::CayleyTable;

pub const DEFAULT_ORDER_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    AgGroupoidsWithLeftIdentity,
    AgGroups,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationTask {
    pub order: usize,
    pub mode: Mode,
    pub canonical_only: bool,
    pub cap: usize,
}

impl EnumerationTask {
    pub fn new(order: usize, mode: Mode, canonical_only: bool) -> Self {
        EnumerationTask { order, mode, canonical_only, cap: DEFAULT_ORDER_CAP }
    }

    pub fn ag_groups(order: usize) -> Self {
        Self::new(order, Mode::AgGroups, true)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(AlgebraError::EmptyTable);
        }
        // row/column bitmasks are u64
        let cap = self.cap.min(63);
        if self.order > cap {
            return Err(AlgebraError::OrderCapExceeded { order: self.order, cap });
        }
        Ok(())
    }
}

const UNSET: usize = usize::MAX;

#[derive(Clone)]
struct State {
    n: usize,
    latin: bool,
    cells: Vec<usize>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl State {
    fn new(n: usize, mode: Mode) -> Self {
        let mut s = State {
            n,
            latin: mode == Mode::AgGroups,
            cells: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
        };
        for b in 0..n {
            s.set(0, b, b);
        }
        s
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize, v: usize) {
        self.cells[a * self.n + b] = v;
        self.row_used[a] |= 1 << v;
        self.col_used[b] |= 1 << v;
    }

    fn unset(&mut self, a: usize, b: usize) {
        let v = self.get(a, b);
        self.cells[a * self.n + b] = UNSET;
        self.row_used[a] &= !(1 << v);
        self.col_used[b] &= !(1 << v);
    }

    /// `(ab)c = (cb)a`, or some needed cell is still open.
    #[inline]
    fn triple_ok(&self, a: usize, b: usize, c: usize) -> bool {
        let ab = self.get(a, b);
        let cb = self.get(c, b);
        if ab == UNSET || cb == UNSET {
            return true;
        }
        let l = self.get(ab, c);
        let r = self.get(cb, a);
        l == UNSET || r == UNSET || l == r
    }

    /// Checks every triple that uses cell `(r, c)` in one of its four positions.
    fn consistent_after(&self, r: usize, c: usize) -> bool {
        let n = self.n;
        let v = self.get(r, c);
        if self.latin {
            if v == 0 {
                let t = self.get(c, r);
                if t != UNSET && t != 0 {
                    return false;
                }
            } else if self.get(c, r) == 0 {
                return false;
            }
        }
        for z in 0..n {
            // (r c) z  and  (z c) r
            if !self.triple_ok(r, c, z) || !self.triple_ok(z, c, r) {
                return false;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.get(a, b) == r {
                    // (a b) c with ab = r, and (a b) . c appears on the right of (c b) a
                    if !self.triple_ok(a, b, c) || !self.triple_ok(c, b, a) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn candidates(&self, r: usize, c: usize) -> impl Iterator<Item = usize> + '_ {
        let blocked = if self.latin { self.row_used[r] | self.col_used[c] } else { 0 };
        (0..self.n).filter(move |&v| blocked & (1 << v) == 0)
    }

    fn accept(&self, mode: Mode) -> Option<CayleyTable> {
        let t = CayleyTable::from_cells(self.n, self.cells.clone()).ok()?;
        let ok = match mode {
            Mode::AgGroups => AgGroup::promote(t.clone()).map(|g| g.identity() == 0).unwrap_or(false),
            Mode::AgGroupoidsWithLeftIdentity => check_left_invertive(&t).is_ok(),
        };
        ok.then_some(t)
    }
}

fn search_from(state: &mut State, pos: usize, mode: Mode, out: &mut Vec<CayleyTable>) {
    let n = state.n;
    if pos == n * n {
        out.extend(state.accept(mode));
        return;
    }
    let (r, c) = (pos / n, pos % n);
    let options: Vec<usize> = state.candidates(r, c).collect();
    for v in options {
        state.set(r, c, v);
        if state.consistent_after(r, c) {
            search_from(state, pos + 1, mode, out);
        }
        state.unset(r, c);
    }
}

/// Partial states after fixing the first `depth` free cells, for splitting work.
fn frontier(n: usize, mode: Mode, depth: usize) -> Vec<(State, usize)> {
    let mut level = vec![(State::new(n, mode), n)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (state, pos) in level {
            if pos == n * n {
                next.push((state, pos));
                continue;
            }
            let (r, c) = (pos / n, pos % n);
            for v in state.candidates(r, c).collect::<Vec<_>>() {
                let mut s = state.clone();
                s.set(r, c, v);
                if s.consistent_after(r, c) {
                    next.push((s, pos + 1));
                }
            }
        }
        level = next;
    }
    level
}

/// Calls `f` on every permutation of `items`.
fn for_each_permutation(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Lexicographically least relabelling of `t` that keeps a left identity on `0`.
pub fn canonical_form(t: &CayleyTable) -> CayleyTable {
    let n = t.order();
    let mut best: Option<CayleyTable> = None;
    for l in left_identities(t) {
        let mut rest: Vec<usize> = (0..n).filter(|&x| x != l).collect();
        for_each_permutation(&mut rest, 0, &mut |order: &[usize]| {
            // order lists the old labels that become 1, 2, ...
            let mut perm = vec![0; n];
            for (new, &old) in order.iter().enumerate() {
                perm[old] = new + 1;
            }
            perm[l] = 0;
            let candidate = t.relabel(&perm);
            if best.as_ref().is_none_or(|b| candidate.cells() < b.cells()) {
                best = Some(candidate);
            }
        });
    }
    best.unwrap_or_else(|| t.clone())
}

/// All tables of the task's kind with left identity `0`, sorted; when
/// `canonical_only`, one canonical representative per isomorphism class.
pub fn enumerate(task: &EnumerationTask, exec: Execution) -> Result<Vec<CayleyTable>> {
    task.validate()?;
    let n = task.order;
    let mode = task.mode;
    let depth = if n >= 4 { 2 } else { 0 };
    let roots = frontier(n, mode, depth);
    let mut tables: Vec<CayleyTable> = par::flat_map(exec, &roots, |(state, pos)| {
        let mut state = state.clone();
        let mut out = Vec::new();
        search_from(&mut state, *pos, mode, &mut out);
        out
    });
    tables.sort();
    if task.canonical_only {
        let canon: BTreeSet<CayleyTable> = par::map(exec, &tables, canonical_form).into_iter().collect();
        tables = canon.into_iter().collect();
    }
    Ok(tables)
}

/// Canonical AG-groups of the given order.
pub fn enumerate_ag_groups(order: usize, exec: Execution) -> Result<Vec<AgGroup>> {
    enumerate_ag_groups_with_cap(order, DEFAULT_ORDER_CAP, exec)
}

pub fn enumerate_ag_groups_with_cap(order: usize, cap: usize, exec: Execution) -> Result<Vec<AgGroup>> {
    Ok(enumerate(&EnumerationTask::ag_groups(order).with_cap(cap), exec)?
        .into_iter()
        .map(|t| AgGroup::promote(t).expect("enumerated tables are AG-groups"))
        .collect())
}

/// Brute-force reference: every one of the `n^(n^2)` tables, filtered by the
/// axioms alone. Only feasible for `n <= 3`.
pub fn naive_filter(order: usize, mode: Mode) -> Vec<CayleyTable> {
    assert!((1..=3).contains(&order), "naive filter is limited to orders 1..=3");
    let n = order;
    let cells = n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % n;
            c /= n;
        }
        let t = CayleyTable::from_cells(n, digits.clone()).expect("digits are in range");
        let keep = match mode {
            Mode::AgGroups => AgGroup::promote(t.clone()).is_ok_and(|g| g.identity() == 0),
            Mode::AgGroupoidsWithLeftIdentity => check_left_invertive(&t).is_ok() && left_identities(&t).contains(&0),
        };
        if keep {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::are_isomorphic;

    #[test]
    fn order_one() {
        let t = enumerate(&EnumerationTask::ag_groups(1), Execution::Sequential).unwrap();
        assert_eq!(t, vec![CayleyTable::from_fn(1, |_, _| 0).unwrap()]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate(&EnumerationTask::ag_groups(7), Execution::Sequential).unwrap_err();
        assert_eq!(err, AlgebraError::OrderCapExceeded { order: 7, cap: 6 });
        assert!(enumerate(&EnumerationTask::ag_groups(0), Execution::Sequential).is_err());
    }

    #[test]
    fn order_three_contains_subtraction() {
        let z3 = fixtures::z3_subtraction();
        let all = enumerate(&EnumerationTask::new(3, Mode::AgGroups, false), Execution::Sequential).unwrap();
        assert!(all.contains(z3.table()));
        let canon = enumerate_ag_groups(3, Execution::Sequential).unwrap();
        assert!(canon.iter().any(|g| are_isomorphic(g, &z3).is_some()));
    }

    #[test]
    fn order_three_matches_naive_filter() {
        for mode in [Mode::AgGroups, Mode::AgGroupoidsWithLeftIdentity] {
            let pruned = enumerate(&EnumerationTask::new(3, mode, false), Execution::Sequential).unwrap();
            let mut naive = naive_filter(3, mode);
            naive.sort();
            assert_eq!(pruned, naive, "{mode:?}");
        }
    }

    #[test]
    fn order_four_contains_z4_subtraction() {
        let z4 = fixtures::z4_subtraction();
        let canon = enumerate_ag_groups(4, Execution::Sequential).unwrap();
        assert!(canon.iter().any(|g| are_isomorphic(g, &z4).is_some()));
        assert!(canon.iter().any(|g| are_isomorphic(g, &fixtures::klein_four()).is_some()));
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let z4 = fixtures::z4_subtraction();
        let relabeled = z4.table().relabel(&[0, 3, 1, 2]);
        assert_eq!(canonical_form(z4.table()), canonical_form(&relabeled));
        let moved = z4.table().relabel(&[2, 3, 0, 1]);
        assert_eq!(canonical_form(z4.table()), canonical_form(&moved));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for n in 1..=5 {
            let task = EnumerationTask::new(n, Mode::AgGroups, false);
            assert_eq!(
                enumerate(&task, Execution::Sequential).unwrap(),
                enumerate(&task, Execution::Parallel).unwrap()
            );
        }
    }
}
