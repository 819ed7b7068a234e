//! Fuzzy subsets of an AG-group with exact grades: the fuzzy AG-subgroup and
//! normality predicates, level sets, the elementary lemmas and pullbacks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::grade::Grade;
use crate::group::{all_subgroups, AgGroup, Homomorphism, Subgroup};
use crate::report::{Finding, TheoremId, Witness};

/// A total map from the carrier of an AG-group into `[0, 1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct FuzzySubset<'g> {
    carrier: &'g AgGroup,
    grades: Vec<Grade>,
}

impl std::fmt::Debug for FuzzySubset<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FuzzySubset{:?}", self.grades)
    }
}

impl<'g> FuzzySubset<'g> {
    pub fn new(carrier: &'g AgGroup, grades: Vec<Grade>) -> Result<Self> {
        if grades.len() != carrier.order() {
            return Err(AlgebraError::GradeCount { expected: carrier.order(), found: grades.len() });
        }
        Ok(FuzzySubset { carrier, grades })
    }

    pub fn constant(carrier: &'g AgGroup, grade: Grade) -> Self {
        FuzzySubset { carrier, grades: vec![grade; carrier.order()] }
    }

    pub fn carrier(&self) -> &'g AgGroup {
        self.carrier
    }

    #[inline]
    pub fn grade(&self, x: usize) -> Grade {
        self.grades[x]
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn identity_grade(&self) -> Grade {
        self.grades[self.carrier.identity()]
    }

    /// Distinct grades, ascending.
    pub fn image(&self) -> Vec<Grade> {
        self.grades.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Applies `f` to every grade. With a strictly increasing `f` every
    /// order-based predicate is unchanged.
    pub fn map_grades(&self, f: impl Fn(Grade) -> Grade) -> Self {
        FuzzySubset { carrier: self.carrier, grades: self.grades.iter().map(|&g| f(g)).collect() }
    }

    /// `mu(xy) >= mu(x) ^ mu(y)` for all pairs and `mu(x^-1) >= mu(x)` for
    /// all `x`. Reports the first failing pair, then the first failing element.
    pub fn is_fuzzy_ag_subgroup(&self) -> std::result::Result<(), Witness> {
        let g = self.carrier;
        for x in g.elements() {
            for y in g.elements() {
                if self.grade(g.op(x, y)) < self.grade(x).meet(self.grade(y)) {
                    return Err(Witness::new([x, y], "mu(xy) < mu(x) ^ mu(y)"));
                }
            }
        }
        for x in g.elements() {
            if self.grade(g.inv(x)) < self.grade(x) {
                return Err(Witness::new([x], "mu(x^-1) < mu(x)"));
            }
        }
        Ok(())
    }

    /// Second route to [`Self::is_fuzzy_ag_subgroup`]: every upper cut
    /// `{x : mu(x) >= t}`, `t` in the image, is closed under product and inverse.
    pub fn is_fuzzy_ag_subgroup_by_level_cuts(&self) -> std::result::Result<(), Witness> {
        let g = self.carrier;
        for t in self.image() {
            let cut: Vec<usize> = g.elements().filter(|&x| self.grade(x) >= t).collect();
            let inside = |z: usize| self.grade(z) >= t;
            for &x in &cut {
                if !inside(g.inv(x)) {
                    return Err(Witness::new([x], format!("cut at {t} not closed under inverse")));
                }
                if let Some(&y) = cut.iter().find(|&&y| !inside(g.op(x, y))) {
                    return Err(Witness::new([x, y], format!("cut at {t} not closed under product")));
                }
            }
        }
        Ok(())
    }

    /// `mu(xy . x^-1) = mu(y)` for all `x, y`.
    pub fn is_normal(&self) -> std::result::Result<(), Witness> {
        let g = self.carrier;
        for x in g.elements() {
            for y in g.elements() {
                if self.grade(g.op(g.op(x, y), g.inv(x))) != self.grade(y) {
                    return Err(Witness::new([x, y], "mu(xy.x^-1) != mu(y)"));
                }
            }
        }
        Ok(())
    }

    pub fn level_set(&self) -> LevelSet {
        let top = self.identity_grade();
        LevelSet { members: self.carrier.elements().filter(|&x| self.grade(x) == top).collect() }
    }

    fn require_fuzzy_subgroup(&self) -> Result<()> {
        self.is_fuzzy_ag_subgroup()
            .map_err(|w| AlgebraError::PreconditionFailed(format!("not a fuzzy AG-subgroup: {w}")))
    }

    fn require_normal(&self) -> Result<()> {
        self.require_fuzzy_subgroup()?;
        self.is_normal().map_err(|w| AlgebraError::PreconditionFailed(format!("not normal: {w}")))
    }

    /// `mu(e) >= mu(x)`, `mu(x) = mu(x^-1)` and `mu(xy) = mu(yx)`, the last
    /// without any normality assumption.
    pub fn check_elementary_lemmas(&self) -> Result<Vec<Finding>> {
        self.require_fuzzy_subgroup()?;
        let g = self.carrier;
        let top = self.identity_grade();
        let max = g.elements().find(|&x| self.grade(x) > top).map(|x| Witness::new([x], "mu(x) > mu(e)"));
        let inv = g
            .elements()
            .find(|&x| self.grade(x) != self.grade(g.inv(x)))
            .map(|x| Witness::new([x], "mu(x) != mu(x^-1)"));
        Ok(vec![
            Finding::from_outcome(TheoremId::IdentityMaximal, max.map_or(Ok(()), Err)),
            Finding::from_outcome(TheoremId::InverseGrade, inv.map_or(Ok(()), Err)),
            self.check_commutation(),
        ])
    }

    /// `mu(xy) = mu(yx)` for every pair.
    pub fn check_commutation(&self) -> Finding {
        let g = self.carrier;
        let w = g
            .elements()
            .flat_map(|x| g.elements().map(move |y| (x, y)))
            .find(|&(x, y)| self.grade(g.op(x, y)) != self.grade(g.op(y, x)))
            .map(|(x, y)| Witness::new([x, y], "mu(xy) != mu(yx)"));
        Finding::from_outcome(TheoremId::Commutation, w.map_or(Ok(()), Err))
    }

    /// The level set of a fuzzy AG-subgroup is a crisp AG-subgroup.
    pub fn check_level_set_subgroup(&self) -> Result<Finding> {
        self.require_fuzzy_subgroup()?;
        let ls = self.level_set();
        Ok(match ls.subgroup(self.carrier) {
            Ok(_) => Finding::pass(TheoremId::LevelSetSubgroup),
            Err(_) => Finding::fail(TheoremId::LevelSetSubgroup, Witness::new(ls.members, "level set not closed")),
        })
    }

    /// The first `y` with `mu(xy) != mu(y)`, if any.
    pub fn translation_witness(&self, x: usize) -> Option<usize> {
        let g = self.carrier;
        g.elements().find(|&y| self.grade(g.op(x, y)) != self.grade(y))
    }

    /// For every `x`: `mu(xy) = mu(y)` for all `y` iff `mu(x) = mu(e)`.
    pub fn check_translation_lemma(&self) -> Result<Finding> {
        self.require_fuzzy_subgroup()?;
        let top = self.identity_grade();
        let bad = self.carrier.elements().find_map(|x| {
            let translates = self.translation_witness(x).is_none();
            let at_top = self.grade(x) == top;
            (translates != at_top).then(|| {
                let detail = if translates {
                    "x translates mu but mu(x) != mu(e)".to_string()
                } else {
                    format!("mu(x) = mu(e) but mu(xy) != mu(y) at y = {}", self.translation_witness(x).unwrap())
                };
                Witness::new([x], detail)
            })
        });
        Ok(Finding::from_outcome(TheoremId::Translation, bad.map_or(Ok(()), Err)))
    }

    pub fn is_constant(&self) -> bool {
        self.grades.windows(2).all(|w| w[0] == w[1])
    }
}

/// `{x : mu(x) = mu(e)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub members: Vec<usize>,
}

impl LevelSet {
    pub fn subgroup<'g>(&self, g: &'g AgGroup) -> Result<Subgroup<'g>> {
        Subgroup::new(g, self.members.iter().copied())
    }
}

/// `mu o f` over the source of `f`, where `mu` lives on the target and is
/// required to be a normal fuzzy AG-subgroup on the image `f(G)`. The result
/// is re-checked to be a normal fuzzy AG-subgroup.
pub fn pullback<'a>(f: &Homomorphism<'a>, mu: &FuzzySubset<'_>) -> Result<FuzzySubset<'a>> {
    if mu.carrier() != f.target() {
        return Err(AlgebraError::PreconditionFailed("fuzzy subset does not live on the target".into()));
    }
    let image = f.image();
    let (image_group, embedding) = image.to_group();
    let restricted = FuzzySubset::new(&image_group, embedding.iter().map(|&y| mu.grade(y)).collect())?;
    restricted.require_normal().map_err(|e| AlgebraError::PreconditionFailed(format!("on the image f(G): {e}")))?;

    let pulled = FuzzySubset::new(f.source(), f.map().iter().map(|&y| mu.grade(y)).collect())?;
    pulled
        .is_fuzzy_ag_subgroup()
        .and_then(|_| pulled.is_normal())
        .map_err(|witness| AlgebraError::TheoremViolation { theorem: TheoremId::Pullback, witness })?;
    Ok(pulled)
}

/// Every strictly increasing chain of subgroups `H1 < H2 < ... < Hk = G`,
/// as lists of indices into [`all_subgroups`], in lexicographic order.
fn subgroup_chains(subgroups: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    let is_proper_subset = |a: &[usize], b: &[usize]| a.len() < b.len() && a.iter().all(|x| b.binary_search(x).is_ok());
    let top = subgroups.len() - 1;
    // chains are built top-down, then reversed
    let mut out = Vec::new();
    let mut stack = vec![vec![top]];
    while let Some(chain) = stack.pop() {
        if chain.len() == k {
            let mut c = chain;
            c.reverse();
            out.push(c);
            continue;
        }
        let last = *chain.last().unwrap();
        for (i, s) in subgroups.iter().enumerate() {
            if is_proper_subset(s, &subgroups[last]) {
                let mut next = chain.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

/// Deterministic stream of fuzzy AG-subgroups built from subgroup chains:
/// members of `H1` get grade 1, members of `H(i) \ H(i-1)` get `1/2^(i-1)`.
///
/// Every candidate is re-checked definitionally before it is yielded.
pub struct FuzzySubgroupStream<'g> {
    group: &'g AgGroup,
    subgroups: Vec<Vec<usize>>,
    chains: Vec<Vec<usize>>,
    next: usize,
}

impl<'g> FuzzySubgroupStream<'g> {
    /// Restarts the stream at chain `index`.
    pub fn starting_at(mut self, index: usize) -> Self {
        self.next = index;
        self
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    fn build(&self, chain: &[usize]) -> FuzzySubset<'g> {
        let mut grades = vec![Grade::ZERO; self.group.order()];
        let mut assigned = vec![false; self.group.order()];
        for (level, &si) in chain.iter().enumerate() {
            for &x in &self.subgroups[si] {
                if !assigned[x] {
                    assigned[x] = true;
                    grades[x] = Grade::halving(level as u32);
                }
            }
        }
        FuzzySubset { carrier: self.group, grades }
    }
}

impl<'g> Iterator for FuzzySubgroupStream<'g> {
    type Item = FuzzySubset<'g>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.next < self.chains.len() {
            let mu = self.build(&self.chains[self.next]);
            self.next += 1;
            if mu.is_fuzzy_ag_subgroup().is_ok() {
                return Some(mu);
            }
        }
        None
    }
}

/// Fuzzy AG-subgroups from subgroup chains of length exactly `k`.
pub fn generate_fuzzy_subgroups(g: &AgGroup, k: usize) -> FuzzySubgroupStream<'_> {
    assert!(k >= 1, "chain length must be at least 1");
    let subgroups = all_subgroups(g);
    let chains = subgroup_chains(&subgroups, k);
    FuzzySubgroupStream { group: g, subgroups, chains, next: 0 }
}

/// Fuzzy AG-subgroups from chains of every length.
pub fn all_chain_fuzzy_subgroups(g: &AgGroup) -> Vec<FuzzySubset<'_>> {
    let longest = all_subgroups(g).len();
    (1..=longest).flat_map(|k| generate_fuzzy_subgroups(g, k)).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GradesJson {
    grades: Vec<Grade>,
}

/// Parses `index p/q` lines; each index in `0..n` must appear exactly once.
pub fn parse_grades_text(input: &str, n: usize) -> Result<Vec<Grade>> {
    let perr = |line: usize, message: String| AlgebraError::Parse { line: line + 1, message };
    let mut seen: BTreeMap<usize, Grade> = BTreeMap::new();
    for (i, line) in input.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            [idx, grade] => {
                let idx: usize = idx.parse().map_err(|_| perr(i, format!("bad index {idx:?}")))?;
                if idx >= n {
                    return Err(perr(i, format!("index {idx} outside 0..{n}")));
                }
                let grade: Grade = grade.parse()?;
                if seen.insert(idx, grade).is_some() {
                    return Err(perr(i, format!("index {idx} given twice")));
                }
            }
            _ => return Err(perr(i, format!("expected `index grade`, got {line:?}"))),
        }
    }
    if seen.len() != n {
        return Err(AlgebraError::GradeCount { expected: n, found: seen.len() });
    }
    Ok(seen.into_values().collect())
}

pub fn grades_to_text(grades: &[Grade]) -> String {
    grades.iter().enumerate().map(|(i, g)| format!("{i} {g}\n")).collect()
}

pub fn parse_grades_json(input: &str, n: usize) -> Result<Vec<Grade>> {
    let parsed: GradesJson =
        serde_json::from_str(input).map_err(|e| AlgebraError::Parse { line: e.line(), message: e.to_string() })?;
    if parsed.grades.len() != n {
        return Err(AlgebraError::GradeCount { expected: n, found: parsed.grades.len() });
    }
    Ok(parsed.grades)
}

pub fn grades_to_json(grades: &[Grade]) -> String {
    serde_json::to_string(&GradesJson { grades: grades.to_vec() }).expect("grades serialize")
}

pub fn parse_grades_auto(input: &str, n: usize) -> Result<Vec<Grade>> {
    if input.trim_start().starts_with('{') {
        parse_grades_json(input, n)
    } else {
        parse_grades_text(input, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::check_homomorphism;

    fn g(p: u64, q: u64) -> Grade {
        Grade::new(p, q).unwrap()
    }

    #[test]
    fn z4_grades_are_fuzzy_subgroup_not_normal() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        assert_eq!(mu.is_fuzzy_ag_subgroup(), Ok(()));
        let w = mu.is_normal().unwrap_err();
        // x = 1, y = 0: (1*0)*1 = 3*1 = 2, mu(2) = 1/2 != mu(0) = 1
        assert_eq!(w.elements, vec![1, 0]);
        assert_eq!(grp.op(grp.op(1, 0), grp.inv(1)), 2);
        assert_eq!(mu.level_set().members, vec![0]);
    }

    #[test]
    fn constant_subsets() {
        for grp in [fixtures::z4_subtraction(), fixtures::klein_four(), fixtures::z3_subtraction()] {
            let mu = FuzzySubset::constant(&grp, g(1, 3));
            assert!(mu.is_fuzzy_ag_subgroup().is_ok());
            assert!(mu.is_normal().is_ok());
            assert_eq!(mu.level_set().members, grp.elements().collect::<Vec<_>>());
            assert!(mu.check_elementary_lemmas().unwrap().iter().all(Finding::passed));
        }
    }

    #[test]
    fn identity_not_maximal_fails_closure() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, vec![g(1, 2), g(1, 1), g(1, 4), g(1, 4)]).unwrap();
        // brute force over the 16 pairs: first failure in lexicographic order
        let mut first = None;
        for x in 0..4 {
            for y in 0..4 {
                if first.is_none() && mu.grade(grp.op(x, y)) < mu.grade(x).min(mu.grade(y)) {
                    first = Some(vec![x, y]);
                }
            }
        }
        let w = mu.is_fuzzy_ag_subgroup().unwrap_err();
        assert_eq!(Some(w.elements.clone()), first);
        // 1*1 = 0 with mu(0) = 1/2 < 1 is among the violations
        assert!(mu.grade(grp.op(1, 1)) < mu.grade(1));
        assert!(matches!(mu.check_elementary_lemmas(), Err(AlgebraError::PreconditionFailed(_))));
    }

    #[test]
    fn elementary_lemmas_on_fixtures() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        assert!(mu.is_normal().is_err());
        assert!(mu.check_elementary_lemmas().unwrap().iter().all(Finding::passed));

        let k = fixtures::klein_four();
        let nu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        assert!(nu.check_elementary_lemmas().unwrap().iter().all(Finding::passed));
    }

    #[test]
    fn klein_grades_are_normal() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        assert!(mu.is_fuzzy_ag_subgroup().is_ok());
        assert!(mu.is_normal().is_ok());
        assert_eq!(mu.level_set().members, vec![0]);
    }

    #[test]
    fn translation_lemma_cases() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        assert_eq!(mu.translation_witness(grp.identity()), None);
        // y = 0: mu(1*0) = mu(3) = 1/2 != mu(0)
        assert_eq!(mu.translation_witness(1), Some(0));
        assert!(mu.check_translation_lemma().unwrap().passed());

        let k = fixtures::klein_four();
        let nu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        // a*a = e
        assert_eq!(nu.translation_witness(1), Some(0));
        assert_eq!(nu.grade(k.op(1, 1)), Grade::ONE);
        assert!(nu.check_translation_lemma().unwrap().passed());
    }

    #[test]
    fn pullbacks() {
        let k = fixtures::klein_four();
        let z2 = fixtures::z2();
        let mu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();

        let id = check_homomorphism(k.elements().collect(), &k, &k).unwrap();
        assert_eq!(pullback(&id, &mu).unwrap(), mu);

        let constant = check_homomorphism(vec![0; 4], &k, &k).unwrap();
        let pulled = pullback(&constant, &mu).unwrap();
        assert_eq!(pulled, FuzzySubset::constant(&k, Grade::ONE));

        let f = check_homomorphism(vec![0, 1, 0, 1], &k, &z2).unwrap();
        let on_z2 = FuzzySubset::new(&z2, vec![g(1, 1), g(1, 2)]).unwrap();
        let pulled = pullback(&f, &on_z2).unwrap();
        assert_eq!(pulled.grades(), &[g(1, 1), g(1, 2), g(1, 1), g(1, 2)]);
        assert!(pulled.is_fuzzy_ag_subgroup().is_ok() && pulled.is_normal().is_ok());
    }

    #[test]
    fn pullback_rejects_non_normal() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        let id = check_homomorphism(grp.elements().collect(), &grp, &grp).unwrap();
        assert!(matches!(pullback(&id, &mu), Err(AlgebraError::PreconditionFailed(_))));
    }

    #[test]
    fn generator_cases() {
        let k = fixtures::klein_four();
        let k1: Vec<_> = generate_fuzzy_subgroups(&k, 1).collect();
        assert_eq!(k1, vec![FuzzySubset::constant(&k, Grade::ONE)]);

        let k2: Vec<_> = generate_fuzzy_subgroups(&k, 2).collect();
        let half = g(1, 2);
        assert!(k2.iter().any(|m| m.grades() == [Grade::ONE, half, half, half]));
        assert_eq!(k2.len(), 4);

        let grp = fixtures::z4_subtraction();
        let first: Vec<_> = generate_fuzzy_subgroups(&grp, 2).collect();
        assert!(first.iter().any(|m| m.grades() == fixtures::z4_non_normal_grades().as_slice()));
    }

    #[test]
    fn generator_is_restartable() {
        let k = fixtures::klein_four();
        let all: Vec<_> = generate_fuzzy_subgroups(&k, 2).collect();
        let tail: Vec<_> = generate_fuzzy_subgroups(&k, 2).starting_at(2).collect();
        assert_eq!(&all[2..], tail.as_slice());
        let three: Vec<_> = generate_fuzzy_subgroups(&k, 3).collect();
        assert_eq!(three.len(), 3);
        assert!(generate_fuzzy_subgroups(&k, 4).next().is_none());
    }

    #[test]
    fn grade_files() {
        let gs = fixtures::klein_normal_grades();
        let text = grades_to_text(&gs);
        assert_eq!(text, "0 1\n1 1/2\n2 1/4\n3 1/4\n");
        assert_eq!(parse_grades_text(&text, 4).unwrap(), gs);
        assert_eq!(parse_grades_text("1 1/2\n0 1\n", 2).unwrap(), vec![Grade::ONE, g(1, 2)]);
        assert!(parse_grades_text("0 1\n0 1\n", 2).is_err());
        assert!(parse_grades_text("0 1\n", 2).is_err());
        assert!(parse_grades_text("0 1 x\n1 0\n", 2).is_err());
        assert!(parse_grades_text("0 1\n1 2/4\n", 2).is_err());
        assert!(parse_grades_text("0 1\n2 0\n", 2).is_err());

        let json = grades_to_json(&gs);
        assert_eq!(json, r#"{"grades":["1","1/2","1/4","1/4"]}"#);
        assert_eq!(parse_grades_json(&json, 4).unwrap(), gs);
        assert_eq!(parse_grades_auto(&json, 4).unwrap(), gs);
        assert!(parse_grades_json(r#"{"grades":["1","0.5"]}"#, 2).is_err());
        assert!(parse_grades_json(r#"{"grades":["1"]} x"#, 1).is_err());
    }
}
