//! AG-groups (left almost groups): axioms, derived identities, crisp
//! subgroups and right cosets, homomorphisms and isomorphism search.
//!
//! Elements are dense indices. The left identity is located from the table,
//! never assumed to be `0`.

use std::collections::BTreeSet;

use crate::error::{AlgebraError, Result};
use crate::report::{Finding, TheoremId, Witness};
use crate::table::CayleyTable;

/// Returns the lexicographically first `(a, b, c)` with `(ab)c != (cb)a`.
pub fn check_left_invertive(t: &CayleyTable) -> std::result::Result<(), [usize; 3]> {
    let n = t.order();
    for a in 0..n {
        for b in 0..n {
            let ab = t.op(a, b);
            for c in 0..n {
                if t.op(ab, c) != t.op(t.op(c, b), a) {
                    return Err([a, b, c]);
                }
            }
        }
    }
    Ok(())
}

/// All `e` with `e * a = a` for every `a`.
pub fn left_identities(t: &CayleyTable) -> Vec<usize> {
    let n = t.order();
    (0..n).filter(|&e| (0..n).all(|a| t.op(e, a) == a)).collect()
}

/// A verified AG-group: left invertive law, unique left identity, two-sided inverses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AgGroup {
    table: CayleyTable,
    identity: usize,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for AgGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AgGroup")
            .field("identity", &self.identity)
            .field("inverse", &self.inverse)
            .field("table", &self.table)
            .finish()
    }
}

impl AgGroup {
    /// Checks the axioms in order (left invertive law, left identity,
    /// inverses) and reports the first that fails.
    pub fn promote(table: CayleyTable) -> Result<Self> {
        check_left_invertive(&table).map_err(AlgebraError::NotLeftInvertive)?;
        let ids = left_identities(&table);
        let identity = match ids.as_slice() {
            [] => return Err(AlgebraError::NoLeftIdentity),
            [e] => *e,
            _ => return Err(AlgebraError::MultipleLeftIdentities(ids)),
        };
        let n = table.order();
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&x| table.op(x, a) == identity && table.op(a, x) == identity)
                    .ok_or(AlgebraError::MissingInverse(a))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AgGroup { table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table.op(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_commutative(&self) -> bool {
        self.table.is_commutative()
    }

    pub(crate) fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order() {
            Ok(())
        } else {
            Err(AlgebraError::ElementOutOfRange { element: x, order: self.order() })
        }
    }
}

/// Exhaustively checks the identities the fuzzy theory leans on:
/// `a(bc) = b(ac)`, `(ab.c)d = a(bc.d)` and `(xy)^-1 = x^-1 y^-1`.
pub fn check_derived_identities(g: &AgGroup) -> Vec<Finding> {
    let n = g.order();
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));

    let left_perm = triples()
        .find(|&(a, b, c)| g.op(a, g.op(b, c)) != g.op(b, g.op(a, c)))
        .map(|(a, b, c)| Witness::new([a, b, c], "a(bc) != b(ac)"));

    let shift = triples()
        .flat_map(|(a, b, c)| (0..n).map(move |d| (a, b, c, d)))
        .find(|&(a, b, c, d)| g.op(g.op(g.op(a, b), c), d) != g.op(a, g.op(g.op(b, c), d)))
        .map(|(a, b, c, d)| Witness::new([a, b, c, d], "(ab.c)d != a(bc.d)"));

    let inv_prod = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| g.inv(g.op(x, y)) != g.op(g.inv(x), g.inv(y)))
        .map(|(x, y)| Witness::new([x, y], "(xy)^-1 != x^-1 y^-1"));

    vec![
        Finding::from_outcome(TheoremId::LeftPermutable, left_perm.map_or(Ok(()), Err)),
        Finding::from_outcome(TheoremId::BracketShift, shift.map_or(Ok(()), Err)),
        Finding::from_outcome(TheoremId::InverseOfProduct, inv_prod.map_or(Ok(()), Err)),
    ]
}

/// True iff `members` contains the identity and is closed under product and inverse.
pub fn is_subgroup(g: &AgGroup, members: &[usize]) -> bool {
    let n = g.order();
    if members.iter().any(|&m| m >= n) {
        return false;
    }
    let mask = membership_mask(n, members);
    mask[g.identity()] && members.iter().all(|&x| mask[g.inv(x)] && members.iter().all(|&y| mask[g.op(x, y)]))
}

fn membership_mask(n: usize, members: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &m in members {
        mask[m] = true;
    }
    mask
}

/// Canonicalizes an element list: sorted, deduplicated.
pub fn element_set(members: impl IntoIterator<Item = usize>) -> Vec<usize> {
    members.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// A crisp AG-subgroup of a parent AG-group.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup<'g> {
    group: &'g AgGroup,
    members: Vec<usize>,
}

impl std::fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl<'g> Subgroup<'g> {
    pub fn new(group: &'g AgGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members = element_set(members);
        if !is_subgroup(group, &members) {
            return Err(AlgebraError::NotASubgroup(members));
        }
        Ok(Subgroup { group, members })
    }

    pub fn trivial(group: &'g AgGroup) -> Self {
        Subgroup { group, members: vec![group.identity()] }
    }

    pub fn whole(group: &'g AgGroup) -> Self {
        Subgroup { group, members: group.elements().collect() }
    }

    pub fn group(&self) -> &'g AgGroup {
        self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// The right coset `Hx = {h x : h in H}`, sorted.
    pub fn right_coset(&self, x: usize) -> Vec<usize> {
        crisp_coset(self.group, &self.members, x)
    }

    /// Partition of the carrier into right cosets, ordered by minimal element.
    ///
    /// The partition property is checked rather than assumed.
    pub fn coset_decomposition(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.group.order();
        let cosets: BTreeSet<Vec<usize>> = (0..n).map(|x| self.right_coset(x)).collect();
        let mut seen = vec![false; n];
        for c in &cosets {
            for &x in c {
                if seen[x] {
                    return Err(AlgebraError::NotAPartition {
                        subgroup: self.members.clone(),
                        detail: format!("element {x} lies in two distinct cosets"),
                    });
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(AlgebraError::NotAPartition {
                subgroup: self.members.clone(),
                detail: format!("element {x} lies in no coset"),
            });
        }
        // BTreeSet order on sorted vectors of disjoint sets is order by minimal element
        Ok(cosets.into_iter().collect())
    }

    /// Restricts the parent table to the members, relabelled `0..|H|` in
    /// ascending order. Returns the group and the embedding `new -> old`.
    pub fn to_group(&self) -> (AgGroup, Vec<usize>) {
        let k = self.members.len();
        let index_of = |x: usize| self.members.binary_search(&x).expect("closed under product");
        let table = CayleyTable::from_fn(k, |i, j| index_of(self.group.op(self.members[i], self.members[j])))
            .expect("restriction of a valid table is valid");
        let g = AgGroup::promote(table).expect("a subgroup of an AG-group is an AG-group");
        (g, self.members.clone())
    }
}

/// `Hx = {h x : h in H}` for an arbitrary element list `h`.
pub fn crisp_coset(g: &AgGroup, h: &[usize], x: usize) -> Vec<usize> {
    element_set(h.iter().map(|&m| g.op(m, x)))
}

/// Complex product `AB = {ab : a in A, b in B}`.
pub fn set_product(g: &AgGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
    element_set(a.iter().flat_map(|&x| b.iter().map(move |&y| g.op(x, y))))
}

/// Smallest subgroup containing `generators`.
pub fn subgroup_closure(g: &AgGroup, generators: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let n = g.order();
    let mut mask = vec![false; n];
    let mut members = vec![g.identity()];
    mask[g.identity()] = true;
    for x in generators {
        if !mask[x] {
            mask[x] = true;
            members.push(x);
        }
    }
    loop {
        let mut added = false;
        let snapshot = members.clone();
        for &x in &snapshot {
            let xi = g.inv(x);
            if !mask[xi] {
                mask[xi] = true;
                members.push(xi);
                added = true;
            }
            for &y in &snapshot {
                let p = g.op(x, y);
                if !mask[p] {
                    mask[p] = true;
                    members.push(p);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    members.sort_unstable();
    members
}

/// Every AG-subgroup, ordered by size and then lexicographically.
pub fn all_subgroups(g: &AgGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![subgroup_closure(g, [])];
    found.insert(frontier[0].clone());
    while let Some(s) = frontier.pop() {
        for x in 0..n {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let bigger = subgroup_closure(g, s.iter().copied().chain([x]));
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// A verified structure-preserving map between AG-groups.
#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism<'a> {
    source: &'a AgGroup,
    target: &'a AgGroup,
    map: Vec<usize>,
}

impl std::fmt::Debug for Homomorphism<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Homomorphism{:?}", self.map)
    }
}

/// Accepts `map` iff `map[xy] = map[x] map[y]` for all `x, y`; otherwise
/// names the lexicographically first failing pair.
pub fn check_homomorphism<'a>(map: Vec<usize>, source: &'a AgGroup, target: &'a AgGroup) -> Result<Homomorphism<'a>> {
    if map.len() != source.order() {
        return Err(AlgebraError::MapLength { expected: source.order(), found: map.len() });
    }
    for &y in &map {
        target.check_element(y)?;
    }
    for x in source.elements() {
        for y in source.elements() {
            if map[source.op(x, y)] != target.op(map[x], map[y]) {
                return Err(AlgebraError::NotHomomorphism(x, y));
            }
        }
    }
    Ok(Homomorphism { source, target, map })
}

impl<'a> Homomorphism<'a> {
    pub fn source(&self) -> &'a AgGroup {
        self.source
    }

    pub fn target(&self) -> &'a AgGroup {
        self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `f(G)` as a subgroup of the target.
    pub fn image(&self) -> Subgroup<'a> {
        Subgroup::new(self.target, self.map.iter().copied()).expect("the image of a homomorphism is a subgroup")
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&x| self.map[x] == self.target.identity()).collect()
    }
}

/// All homomorphisms `source -> target`, in lexicographic order of their maps.
pub fn all_homomorphisms(source: &AgGroup, target: &AgGroup) -> Vec<Vec<usize>> {
    fn extend(src: &AgGroup, dst: &AgGroup, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = map.len();
        if k == src.order() {
            out.push(map.clone());
            return;
        }
        for v in dst.elements() {
            map.push(v);
            let consistent = (0..=k).all(|x| {
                (0..=k).all(|y| {
                    if x != k && y != k {
                        return true;
                    }
                    let p = src.op(x, y);
                    p > k || map[p] == dst.op(map[x], map[y])
                })
            });
            if consistent {
                extend(src, dst, map, out);
            }
            map.pop();
        }
    }
    let mut out = Vec::new();
    extend(source, target, &mut Vec::with_capacity(source.order()), &mut out);
    out
}

/// Isomorphism-invariant fingerprint used to prune the bijection search.
fn element_signature(g: &AgGroup, a: usize) -> (bool, bool, usize, usize, usize) {
    let n = g.order();
    let commuting = (0..n).filter(|&x| g.op(a, x) == g.op(x, a)).count();
    let row_fixed = (0..n).filter(|&x| g.op(a, x) == x).count();
    let col_fixed = (0..n).filter(|&x| g.op(x, a) == x).count();
    (a == g.identity(), g.inv(a) == a, commuting, row_fixed, col_fixed)
}

/// Searches for a product-preserving bijection `g1 -> g2` by backtracking.
///
/// Candidates must agree on identity, self-inverseness and a few counting
/// invariants, and partial maps must respect inverse pairing and every
/// product among already-assigned elements.
pub fn are_isomorphic(g1: &AgGroup, g2: &AgGroup) -> Option<Vec<usize>> {
    let n = g1.order();
    if n != g2.order() {
        return None;
    }
    let sig1: Vec<_> = g1.elements().map(|a| element_signature(g1, a)).collect();
    let sig2: Vec<_> = g2.elements().map(|a| element_signature(g2, a)).collect();
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }

    const UNSET: usize = usize::MAX;
    struct Search<'a> {
        g1: &'a AgGroup,
        g2: &'a AgGroup,
        sig1: Vec<(bool, bool, usize, usize, usize)>,
        sig2: Vec<(bool, bool, usize, usize, usize)>,
        map: Vec<usize>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn consistent(&self, a: usize) -> bool {
            let (g1, g2, map) = (self.g1, self.g2, &self.map);
            let ai = g1.inv(a);
            if map[ai] != UNSET && map[ai] != g2.inv(map[a]) {
                return false;
            }
            (0..g1.order()).filter(|&b| map[b] != UNSET).all(|b| {
                let ab = g1.op(a, b);
                let ba = g1.op(b, a);
                (map[ab] == UNSET || map[ab] == g2.op(map[a], map[b]))
                    && (map[ba] == UNSET || map[ba] == g2.op(map[b], map[a]))
            })
        }

        fn solve(&mut self, a: usize) -> bool {
            let n = self.g1.order();
            if a == n {
                return true;
            }
            if self.map[a] != UNSET {
                // forced earlier through inverse pairing
                return self.consistent(a) && self.solve(a + 1);
            }
            for v in 0..n {
                if self.used[v] || self.sig1[a] != self.sig2[v] {
                    continue;
                }
                self.map[a] = v;
                self.used[v] = true;
                let ai = self.g1.inv(a);
                let vi = self.g2.inv(v);
                let mut forced = false;
                let ok = if ai == a {
                    vi == v
                } else if self.map[ai] == UNSET {
                    if self.used[vi] {
                        false
                    } else {
                        self.map[ai] = vi;
                        self.used[vi] = true;
                        forced = true;
                        true
                    }
                } else {
                    self.map[ai] == vi
                };
                if ok && self.consistent(a) && (!forced || self.consistent(ai)) && self.solve(a + 1) {
                    return true;
                }
                if forced {
                    self.map[ai] = UNSET;
                    self.used[vi] = false;
                }
                self.map[a] = UNSET;
                self.used[v] = false;
            }
            false
        }
    }

    let mut search = Search { g1, g2, sig1, sig2, map: vec![UNSET; n], used: vec![false; n] };
    if search.solve(0) {
        debug_assert!(check_homomorphism(search.map.clone(), g1, g2).is_ok());
        Some(search.map)
    } else {
        None
    }
}
