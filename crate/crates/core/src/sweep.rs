//! Runs theorem checks over every small AG-group and every generated fuzzy
//! AG-subgroup on it.
//!
//! Instances are independent, so they are checked in parallel (see
//! [`crate::par`]); records are sorted on emission, which keeps the
//! aggregate independent of scheduling.

use std::ops::RangeInclusive;

use crate::error::{AlgebraError, Result};
use crate::fuzzy::{all_chain_fuzzy_subgroups, FuzzySubset};
use crate::grade::Grade;
use crate::group::{all_homomorphisms, all_subgroups, check_derived_identities, check_homomorphism, AgGroup, Subgroup};
use crate::par::{self, Execution};
use crate::quotient::{
    build_quotient_by_mu, check_quotient_ag_group, coset_equality_theorem, fuzzy_lagrange, induced_on_quotient,
    isomorphism_theorem, lift_correspondence, natural_homomorphism, normal_coset_identity, normal_grade_theorem,
    quotient_fuzzy_subgroup,
};
use crate::report::{Finding, Record, Report, TheoremId, Witness};
use crate::search::{enumerate_ag_groups_with_cap, DEFAULT_ORDER_CAP};

/// One family of statements the sweep can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Once per group: the three identities used in the proofs.
    DerivedIdentities,
    /// `mu(e) >= mu(x)`, `mu(x) = mu(x^-1)` and `mu(xy) = mu(yx)`.
    ElementaryLemmas,
    /// `mu(xy) = mu(yx)` only.
    Commutation,
    LevelSetSubgroup,
    Translation,
    /// Definitional check and level-cut characterization agree.
    LevelCutOracle,
    CosetEquality,
    QuotientAgGroup,
    NormalGrade,
    NormalCoset,
    Isomorphism,
    NaturalHomomorphism,
    InducedNormal,
    Correspondence,
    /// Over every crisp subgroup `H` of the group.
    QuotientFuzzySubgroup,
    Lagrange,
    /// Along every endomorphism of the group.
    Pullback,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::DerivedIdentities,
        Check::ElementaryLemmas,
        Check::Commutation,
        Check::LevelSetSubgroup,
        Check::Translation,
        Check::LevelCutOracle,
        Check::CosetEquality,
        Check::QuotientAgGroup,
        Check::NormalGrade,
        Check::NormalCoset,
        Check::Isomorphism,
        Check::NaturalHomomorphism,
        Check::InducedNormal,
        Check::Correspondence,
        Check::QuotientFuzzySubgroup,
        Check::Lagrange,
        Check::Pullback,
    ];

    /// Statements whose hypothesis is normality.
    pub fn needs_normal(self) -> bool {
        matches!(
            self,
            Check::QuotientAgGroup
                | Check::NormalGrade
                | Check::NormalCoset
                | Check::Isomorphism
                | Check::NaturalHomomorphism
                | Check::InducedNormal
                | Check::Correspondence
                | Check::Pullback
        )
    }

    pub fn parse(name: &str) -> Option<Check> {
        let key: String = name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        Check::ALL.into_iter().find(|c| format!("{c:?}").to_lowercase() == key)
    }
}

#[derive(Debug, Clone)]
pub struct PopulationGroup {
    pub id: String,
    pub group: AgGroup,
    pub subgroups: Vec<Vec<usize>>,
    pub fuzzy: Vec<Vec<Grade>>,
    pub endomorphisms: Vec<Vec<usize>>,
}

/// Canonical AG-groups over a range of orders with their generated fuzzy AG-subgroups.
#[derive(Debug, Clone)]
pub struct Population {
    pub groups: Vec<PopulationGroup>,
}

impl Population {
    pub fn build(orders: RangeInclusive<usize>, exec: Execution) -> Result<Self> {
        Self::build_with_cap(orders, DEFAULT_ORDER_CAP, exec)
    }

    pub fn build_with_cap(orders: RangeInclusive<usize>, cap: usize, exec: Execution) -> Result<Self> {
        let mut groups = Vec::new();
        for n in orders {
            for (i, group) in enumerate_ag_groups_with_cap(n, cap, exec)?.into_iter().enumerate() {
                groups.push(PopulationGroup::new(format!("n{n}#{i}"), group));
            }
        }
        Ok(Population { groups })
    }

    /// Keeps only constant fuzzy subsets.
    pub fn constant_only(mut self) -> Self {
        for g in &mut self.groups {
            g.fuzzy.retain(|gr| gr.windows(2).all(|w| w[0] == w[1]));
        }
        self
    }

    pub fn fuzzy_count(&self) -> usize {
        self.groups.iter().map(|g| g.fuzzy.len()).sum()
    }
}

impl PopulationGroup {
    pub fn new(id: String, group: AgGroup) -> Self {
        let subgroups = all_subgroups(&group);
        let fuzzy = all_chain_fuzzy_subgroups(&group).into_iter().map(|m| m.grades().to_vec()).collect();
        let endomorphisms = all_homomorphisms(&group, &group);
        PopulationGroup { id, group, subgroups, fuzzy, endomorphisms }
    }

    pub fn fuzzy_subset(&self, i: usize) -> FuzzySubset<'_> {
        FuzzySubset::new(&self.group, self.fuzzy[i].clone()).expect("one grade per element")
    }

    pub fn instance_id(&self, i: usize) -> String {
        let grades: Vec<String> = self.fuzzy[i].iter().map(Grade::to_string).collect();
        format!("{}/mu{i}[{}]", self.id, grades.join(","))
    }
}

/// Aggregate counts beyond pass/fail.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub groups: usize,
    pub fuzzy_subgroups: usize,
    pub normal: usize,
    pub non_normal: usize,
    /// Non-normal instances for which `G/mu` was nonetheless well defined.
    pub non_normal_quotient_well_defined: usize,
    /// `(instance, |G|, [G:mu])` for every instance the Lagrange check ran on.
    pub lagrange_indices: Vec<(String, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub report: Report,
    pub stats: SweepStats,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn records_for(&self, theorem: TheoremId) -> impl Iterator<Item = &Record> {
        self.report.records.iter().filter(move |r| r.theorem == theorem)
    }
}

fn error_finding(theorem: TheoremId, e: AlgebraError) -> Finding {
    match e {
        AlgebraError::TheoremViolation { theorem, witness } => Finding::fail(theorem, witness),
        AlgebraError::NotWellDefined(w) => Finding::fail(theorem, w),
        other => Finding::fail(theorem, Witness::new([], other.to_string())),
    }
}

fn one(theorem: TheoremId, r: Result<Finding>) -> Vec<Finding> {
    vec![r.unwrap_or_else(|e| error_finding(theorem, e))]
}

fn many(theorem: TheoremId, r: Result<Vec<Finding>>) -> Vec<Finding> {
    r.unwrap_or_else(|e| vec![error_finding(theorem, e)])
}

struct InstanceResult {
    records: Vec<Record>,
    normal: bool,
    quotient_well_defined: bool,
    lagrange: Option<(String, usize, usize)>,
}

fn check_instance(pg: &PopulationGroup, i: usize, suite: &[Check]) -> InstanceResult {
    let mu = pg.fuzzy_subset(i);
    let g = &pg.group;
    let id = pg.instance_id(i);
    let normal = mu.is_normal().is_ok();
    let quotient_well_defined = build_quotient_by_mu(&mu).is_ok();
    let mut records = Vec::new();
    let mut lagrange = None;
    let mut push = |suffix: &str, findings: Vec<Finding>| {
        let inst = if suffix.is_empty() { id.clone() } else { format!("{id}/{suffix}") };
        records.extend(findings.into_iter().map(|f| Record::new(inst.clone(), f)));
    };

    for &check in suite {
        if check.needs_normal() && !normal {
            continue;
        }
        match check {
            Check::DerivedIdentities => {}
            Check::ElementaryLemmas => push("", many(TheoremId::IdentityMaximal, mu.check_elementary_lemmas())),
            Check::Commutation => push("", vec![mu.check_commutation()]),
            Check::LevelSetSubgroup => push("", one(TheoremId::LevelSetSubgroup, mu.check_level_set_subgroup())),
            Check::Translation => push("", one(TheoremId::Translation, mu.check_translation_lemma())),
            Check::LevelCutOracle => push("", vec![oracle_agreement(&mu)]),
            Check::CosetEquality => push("", many(TheoremId::CosetEquality, coset_equality_theorem(&mu))),
            Check::QuotientAgGroup => push("", one(TheoremId::QuotientAgGroup, check_quotient_ag_group(&mu))),
            Check::NormalGrade => push("", one(TheoremId::NormalGrade, normal_grade_theorem(&mu))),
            Check::NormalCoset => push("", one(TheoremId::NormalCoset, normal_coset_identity(&mu))),
            Check::Isomorphism => push("", one(TheoremId::Isomorphism, isomorphism_theorem(&mu))),
            Check::NaturalHomomorphism => {
                push("", one(TheoremId::NaturalHomomorphism, natural_homomorphism(&mu).map(|(_, f)| f)))
            }
            Check::InducedNormal => push(
                "",
                one(
                    TheoremId::InducedNormal,
                    induced_on_quotient(&mu).map(|_| Finding::pass(TheoremId::InducedNormal)),
                ),
            ),
            Check::Correspondence => push("", correspondence_findings(&mu)),
            Check::QuotientFuzzySubgroup => {
                for h in &pg.subgroups {
                    let sub = Subgroup::new(g, h.iter().copied()).expect("listed subgroups are subgroups");
                    let r = quotient_fuzzy_subgroup(&mu, &sub).map(|_| Finding::pass(TheoremId::QuotientFuzzySubgroup));
                    push(&format!("H{h:?}"), one(TheoremId::QuotientFuzzySubgroup, r));
                }
            }
            Check::Lagrange => {
                // the index is only defined where G/mu is an AG-group
                if quotient_well_defined {
                    match fuzzy_lagrange(&mu) {
                        Ok(r) => {
                            lagrange = Some((id.clone(), r.order, r.index));
                            push("", vec![r.finding]);
                        }
                        Err(e) => push("", vec![error_finding(TheoremId::Lagrange, e)]),
                    }
                }
            }
            Check::Pullback => {
                for f in &pg.endomorphisms {
                    let hom = check_homomorphism(f.clone(), g, g).expect("listed maps are homomorphisms");
                    let r = crate::fuzzy::pullback(&hom, &mu).map(|_| Finding::pass(TheoremId::Pullback));
                    push(&format!("f{f:?}"), one(TheoremId::Pullback, r));
                }
            }
        }
    }
    InstanceResult { records, normal, quotient_well_defined, lagrange }
}

/// The definitional check and the level-cut characterization give the same verdict.
pub fn oracle_agreement(mu: &FuzzySubset<'_>) -> Finding {
    let def = mu.is_fuzzy_ag_subgroup().is_ok();
    let cuts = mu.is_fuzzy_ag_subgroup_by_level_cuts().is_ok();
    if def == cuts {
        Finding::pass(TheoremId::LevelCutOracle)
    } else {
        let grades: Vec<String> = mu.grades().iter().map(Grade::to_string).collect();
        Finding::fail(
            TheoremId::LevelCutOracle,
            Witness::new([], format!("definition says {def}, level cuts say {cuts} on [{}]", grades.join(","))),
        )
    }
}

/// Lifts every generated normal fuzzy AG-subgroup of `G/mu` back to `G`, and
/// checks that inducing then lifting returns `mu`.
fn correspondence_findings(mu: &FuzzySubset<'_>) -> Vec<Finding> {
    let induced = match induced_on_quotient(mu) {
        Ok(i) => i,
        Err(e) => return vec![error_finding(TheoremId::Correspondence, e)],
    };
    let mut out = Vec::new();
    let round_trip = lift_correspondence(mu, &induced.quotient, &induced.fuzzy());
    out.push(match round_trip {
        Ok(nu) if nu == *mu => Finding::pass(TheoremId::Correspondence),
        Ok(_) => Finding::fail(TheoremId::Correspondence, Witness::new([], "induce then lift does not recover mu")),
        Err(e) => error_finding(TheoremId::Correspondence, e),
    });
    for zeta in all_chain_fuzzy_subgroups(induced.quotient.group()) {
        if zeta.is_normal().is_err() {
            continue;
        }
        let r = lift_correspondence(mu, &induced.quotient, &zeta).map(|_| Finding::pass(TheoremId::Correspondence));
        out.extend(one(TheoremId::Correspondence, r));
    }
    out
}

/// Runs `suite` over every group and fuzzy AG-subgroup in `population`.
pub fn population_sweep(population: &Population, suite: &[Check], exec: Execution) -> SweepOutcome {
    assert!(!suite.is_empty(), "suite must name at least one check");
    let mut report = Report::new("sweep");
    let mut stats =
        SweepStats { groups: population.groups.len(), fuzzy_subgroups: population.fuzzy_count(), ..Default::default() };

    if suite.contains(&Check::DerivedIdentities) {
        for pg in &population.groups {
            report.extend(&pg.id, check_derived_identities(&pg.group));
        }
    }

    let instances: Vec<(usize, usize)> =
        population.groups.iter().enumerate().flat_map(|(gi, pg)| (0..pg.fuzzy.len()).map(move |i| (gi, i))).collect();
    let results = par::map(exec, &instances, |&(gi, i)| check_instance(&population.groups[gi], i, suite));

    for r in results {
        if r.normal {
            stats.normal += 1;
        } else {
            stats.non_normal += 1;
            if r.quotient_well_defined {
                stats.non_normal_quotient_well_defined += 1;
            }
        }
        stats.lagrange_indices.extend(r.lagrange);
        report.records.extend(r.records);
    }
    report.records.sort();
    stats.lagrange_indices.sort();

    report.fact("groups", stats.groups);
    report.fact("fuzzy_subgroups", stats.fuzzy_subgroups);
    report.fact("normal", stats.normal);
    report.fact("non_normal", stats.non_normal);
    report.fact("non_normal_quotient_well_defined", stats.non_normal_quotient_well_defined);
    report.fact("census_source", "enumerated by this tool; no published census to compare against");
    SweepOutcome { report, stats }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_parse() {
        assert_eq!(Check::parse("lagrange"), Some(Check::Lagrange));
        assert_eq!(Check::parse("coset-equality"), Some(Check::CosetEquality));
        assert_eq!(Check::parse("nope"), None);
    }

    #[test]
    fn commutation_sweep_small_orders() {
        let pop = Population::build(1..=4, Execution::Parallel).unwrap();
        let out = population_sweep(&pop, &[Check::Commutation], Execution::Parallel);
        assert!(out.passed());
        assert_eq!(out.records_for(TheoremId::Commutation).count(), pop.fuzzy_count());
    }

    #[test]
    fn lemmas_over_constant_subsets() {
        let pop = Population::build(1..=4, Execution::Sequential).unwrap().constant_only();
        assert_eq!(pop.fuzzy_count(), pop.groups.len());
        let out = population_sweep(&pop, &[Check::ElementaryLemmas], Execution::Sequential);
        assert!(out.passed());
    }

    #[test]
    fn lagrange_sweep_records_indices() {
        let pop = Population::build(1..=4, Execution::Parallel).unwrap();
        let out = population_sweep(&pop, &[Check::Lagrange], Execution::Parallel);
        assert!(out.passed());
        assert!(!out.stats.lagrange_indices.is_empty());
        assert!(out.stats.lagrange_indices.iter().all(|(_, n, k)| n % k == 0));
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        let pop = Population::build(1..=4, Execution::Parallel).unwrap();
        let a = population_sweep(&pop, &Check::ALL, Execution::Sequential);
        let b = population_sweep(&pop, &Check::ALL, Execution::Parallel);
        assert_eq!(a.report.records, b.report.records);
        assert_eq!(a.stats, b.stats);
    }
}
