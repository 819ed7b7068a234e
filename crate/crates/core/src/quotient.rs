//! Fuzzy cosets, the quotient AG-groups `G/mu` and `G/H`, induced fuzzy
//! subsets on quotients, the natural homomorphism and the fuzzy Lagrange
//! theorem.
//!
//! Every construction that a theorem guarantees is still verified on the
//! instance at hand: quotient products are checked for independence from the
//! chosen representatives, and class tables go through the full AG-group
//! axiom check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::fuzzy::FuzzySubset;
use crate::grade::Grade;
use crate::group::{are_isomorphic, check_homomorphism, crisp_coset, set_product, AgGroup, Subgroup};
use crate::report::{Finding, TheoremId, Witness};
use crate::table::CayleyTable;

/// `mu_x(g) = mu(g x^-1)`. Equality compares grade vectors only; two cosets
/// with different determining elements can be equal.
#[derive(Debug, Clone)]
pub struct FuzzyCoset {
    pub determinant: usize,
    pub grades: Vec<Grade>,
}

impl PartialEq for FuzzyCoset {
    fn eq(&self, other: &Self) -> bool {
        self.grades == other.grades
    }
}

impl Eq for FuzzyCoset {}

pub fn fuzzy_coset(mu: &FuzzySubset<'_>, x: usize) -> FuzzyCoset {
    let g = mu.carrier();
    let xi = g.inv(x);
    FuzzyCoset { determinant: x, grades: g.elements().map(|y| mu.grade(g.op(y, xi))).collect() }
}

/// A partition of an AG-group's carrier whose classes carry a verified AG-group structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStructure {
    classes: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    group: AgGroup,
    projection: Vec<usize>,
}

impl QuotientStructure {
    /// Builds the class table from minimal representatives and cross-checks
    /// it against every pair of members. `classes` must partition `0..n`.
    pub fn from_partition(g: &AgGroup, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.order();
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort();
        let mut projection = vec![usize::MAX; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                g.check_element(x)?;
                if projection[x] != usize::MAX {
                    return Err(AlgebraError::PreconditionFailed(format!("element {x} appears in two classes")));
                }
                projection[x] = i;
            }
        }
        if let Some(x) = projection.iter().position(|&p| p == usize::MAX) {
            return Err(AlgebraError::PreconditionFailed(format!("element {x} is in no class")));
        }
        let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let k = classes.len();
        let table = CayleyTable::from_fn(k, |i, j| projection[g.op(representatives[i], representatives[j])])?;

        for x in g.elements() {
            for y in g.elements() {
                let (i, j) = (projection[x], projection[y]);
                if projection[g.op(x, y)] != table.op(i, j) {
                    let (rx, ry) = (representatives[i], representatives[j]);
                    return Err(AlgebraError::NotWellDefined(Witness::new(
                        [x, y, rx, ry],
                        format!("{x}~{rx} and {y}~{ry} but {x}{y} and {rx}{ry} fall in different classes"),
                    )));
                }
            }
        }
        let group = AgGroup::promote(table).map_err(|e| AlgebraError::NotAgGroup(Box::new(e)))?;
        Ok(QuotientStructure { classes, representatives, group, projection })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn group(&self) -> &AgGroup {
        &self.group
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classes `c` with `c . identity != c`: the left identity of a quotient
    /// need not be a right identity.
    pub fn right_identity_failures(&self) -> Vec<usize> {
        let e = self.group.identity();
        (0..self.len()).filter(|&c| self.group.op(c, e) != c).collect()
    }

    pub fn dump(&self, grades: Option<&[Grade]>) -> QuotientDump {
        QuotientDump {
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(i, members)| DumpClass {
                    representative: self.representatives[i],
                    members: members.clone(),
                    grade: grades.map(|g| g[i]),
                })
                .collect(),
            table: self.group.table().clone(),
        }
    }
}

fn require_fuzzy_subgroup(mu: &FuzzySubset<'_>) -> Result<()> {
    mu.is_fuzzy_ag_subgroup().map_err(|w| AlgebraError::PreconditionFailed(format!("not a fuzzy AG-subgroup: {w}")))
}

fn require_normal(mu: &FuzzySubset<'_>) -> Result<()> {
    require_fuzzy_subgroup(mu)?;
    mu.is_normal().map_err(|w| AlgebraError::PreconditionFailed(format!("not normal: {w}")))
}

/// Groups the carrier by exact equality of fuzzy cosets.
pub fn fuzzy_coset_classes(mu: &FuzzySubset<'_>) -> Vec<Vec<usize>> {
    let mut by_vector: BTreeMap<Vec<Grade>, Vec<usize>> = BTreeMap::new();
    for x in mu.carrier().elements() {
        by_vector.entry(fuzzy_coset(mu, x).grades).or_default().push(x);
    }
    let mut classes: Vec<Vec<usize>> = by_vector.into_values().collect();
    classes.sort();
    classes
}

/// `G/mu` under `mu_x . mu_y = mu_xy`.
///
/// Normality is not required: for a non-normal fuzzy AG-subgroup the product
/// may fail to descend, which is reported as [`AlgebraError::NotWellDefined`].
pub fn build_quotient_by_mu(mu: &FuzzySubset<'_>) -> Result<QuotientStructure> {
    require_fuzzy_subgroup(mu)?;
    QuotientStructure::from_partition(mu.carrier(), fuzzy_coset_classes(mu))
}

/// The quotient is an AG-group whose left identity is the class of `mu_e`
/// and in which the class of `mu_(x^-1)` inverts the class of `mu_x`.
pub fn check_quotient_ag_group(mu: &FuzzySubset<'_>) -> Result<Finding> {
    require_fuzzy_subgroup(mu)?;
    let g = mu.carrier();
    let q = match build_quotient_by_mu(mu) {
        Ok(q) => q,
        Err(AlgebraError::NotWellDefined(w)) => return Ok(Finding::fail(TheoremId::QuotientAgGroup, w)),
        Err(AlgebraError::NotAgGroup(e)) => {
            return Ok(Finding::fail(TheoremId::QuotientAgGroup, Witness::new([], e.to_string())))
        }
        Err(e) => return Err(e),
    };
    let e_class = q.class_of(g.identity());
    if q.group().identity() != e_class {
        return Ok(Finding::fail(
            TheoremId::QuotientAgGroup,
            Witness::new([g.identity()], "class of mu_e is not the left identity"),
        ));
    }
    let bad = g.elements().find(|&x| q.group().inv(q.class_of(x)) != q.class_of(g.inv(x)));
    Ok(match bad {
        Some(x) => Finding::fail(TheoremId::QuotientAgGroup, Witness::new([x], "mu_(x^-1) does not invert mu_x")),
        None => Finding::pass(TheoremId::QuotientAgGroup),
    })
}

/// `mu_x = mu_y` iff `mu* x = mu* y`, each side computed on its own, plus
/// the crisp coset product law `(mu* x)(mu* y) = mu*(xy)` the proof relies on.
pub fn coset_equality_theorem(mu: &FuzzySubset<'_>) -> Result<Vec<Finding>> {
    require_fuzzy_subgroup(mu)?;
    let g = mu.carrier();
    let level = mu.level_set().members;
    let fuzzy: Vec<FuzzyCoset> = g.elements().map(|x| fuzzy_coset(mu, x)).collect();
    let crisp: Vec<Vec<usize>> = g.elements().map(|x| crisp_coset(g, &level, x)).collect();

    let pairs = || g.elements().flat_map(|x| g.elements().map(move |y| (x, y)));
    let equality = pairs().find(|&(x, y)| (fuzzy[x] == fuzzy[y]) != (crisp[x] == crisp[y])).map(|(x, y)| {
        let detail = if fuzzy[x] == fuzzy[y] { "mu_x = mu_y but mu*x != mu*y" } else { "mu*x = mu*y but mu_x != mu_y" };
        Witness::new([x, y], detail)
    });
    let product = pairs()
        .find(|&(x, y)| set_product(g, &crisp[x], &crisp[y]) != crisp[g.op(x, y)])
        .map(|(x, y)| Witness::new([x, y], "(mu*x)(mu*y) != mu*(xy)"));
    Ok(vec![
        Finding::from_outcome(TheoremId::CosetEquality, equality.map_or(Ok(()), Err)),
        Finding::from_outcome(TheoremId::CrispCosetProduct, product.map_or(Ok(()), Err)),
    ])
}

/// For normal `mu`: `mu_x = mu_y` implies `mu(x) = mu(y)`.
pub fn normal_grade_theorem(mu: &FuzzySubset<'_>) -> Result<Finding> {
    require_normal(mu)?;
    let g = mu.carrier();
    let cosets: Vec<FuzzyCoset> = g.elements().map(|x| fuzzy_coset(mu, x)).collect();
    let bad = g
        .elements()
        .flat_map(|x| g.elements().map(move |y| (x, y)))
        .find(|&(x, y)| cosets[x] == cosets[y] && mu.grade(x) != mu.grade(y))
        .map(|(x, y)| Witness::new([x, y], "mu_x = mu_y but mu(x) != mu(y)"));
    Ok(Finding::from_outcome(TheoremId::NormalGrade, bad.map_or(Ok(()), Err)))
}

/// For normal `mu`: `mu_x(xg) = mu_x(gx) = mu(g)` for all `x, g`.
pub fn normal_coset_identity(mu: &FuzzySubset<'_>) -> Result<Finding> {
    require_normal(mu)?;
    let g = mu.carrier();
    let bad = g.elements().find_map(|x| {
        let coset = fuzzy_coset(mu, x);
        g.elements().find_map(|e| {
            let left = coset.grades[g.op(x, e)];
            let right = coset.grades[g.op(e, x)];
            (left != mu.grade(e) || right != mu.grade(e)).then(|| {
                Witness::new([x, e], format!("mu_x(xg) = {left}, mu_x(gx) = {right}, mu(g) = {}", mu.grade(e)))
            })
        })
    });
    Ok(Finding::from_outcome(TheoremId::NormalCoset, bad.map_or(Ok(()), Err)))
}

/// `G/H` over the right cosets of `h`, with `Hx . Hy = H(xy)` verified.
pub fn build_crisp_quotient(h: &Subgroup<'_>) -> Result<QuotientStructure> {
    QuotientStructure::from_partition(h.group(), h.coset_decomposition()?)
}

/// A fuzzy subset living on a quotient it owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedFuzzySubset {
    pub quotient: QuotientStructure,
    pub grades: Vec<Grade>,
}

impl InducedFuzzySubset {
    pub fn fuzzy(&self) -> FuzzySubset<'_> {
        FuzzySubset::new(self.quotient.group(), self.grades.clone()).expect("one grade per class")
    }
}

/// `nu / H`: the class `Hx` gets the maximum of `nu` over `Hx`.
/// The result is checked to be a fuzzy AG-subgroup of `G/H`.
pub fn quotient_fuzzy_subgroup(nu: &FuzzySubset<'_>, h: &Subgroup<'_>) -> Result<InducedFuzzySubset> {
    require_fuzzy_subgroup(nu)?;
    if nu.carrier() != h.group() {
        return Err(AlgebraError::PreconditionFailed("subgroup and fuzzy subset live on different groups".into()));
    }
    let quotient = build_crisp_quotient(h)?;
    let grades = quotient
        .classes()
        .iter()
        .map(|c| c.iter().map(|&z| nu.grade(z)).max().expect("cosets are non-empty"))
        .collect();
    let induced = InducedFuzzySubset { quotient, grades };
    induced
        .fuzzy()
        .is_fuzzy_ag_subgroup()
        .map_err(|witness| AlgebraError::TheoremViolation { theorem: TheoremId::QuotientFuzzySubgroup, witness })?;
    Ok(induced)
}

/// For normal `mu`: `nu(mu_x) = mu(x)` on `G/mu`, checked to be independent of
/// the representative and to be a normal fuzzy AG-subgroup of the quotient.
pub fn induced_on_quotient(mu: &FuzzySubset<'_>) -> Result<InducedFuzzySubset> {
    require_normal(mu)?;
    let quotient = build_quotient_by_mu(mu)?;
    for (i, class) in quotient.classes().iter().enumerate() {
        let rep = quotient.representatives()[i];
        if let Some(&x) = class.iter().find(|&&x| mu.grade(x) != mu.grade(rep)) {
            return Err(AlgebraError::NotWellDefined(Witness::new([rep, x], "mu_x = mu_y but mu(x) != mu(y)")));
        }
    }
    let grades = quotient.representatives().iter().map(|&r| mu.grade(r)).collect();
    let induced = InducedFuzzySubset { quotient, grades };
    {
        let nu = induced.fuzzy();
        nu.is_fuzzy_ag_subgroup()
            .and_then(|_| nu.is_normal())
            .map_err(|witness| AlgebraError::TheoremViolation { theorem: TheoremId::InducedNormal, witness })?;
    }
    Ok(induced)
}

/// For normal `mu`: `G/mu` and `G/mu*` are isomorphic, and the explicit map
/// `mu_x -> mu* x` is itself a well-defined isomorphism.
pub fn isomorphism_theorem(mu: &FuzzySubset<'_>) -> Result<Finding> {
    require_normal(mu)?;
    let g = mu.carrier();
    let fail =
        |elements: Vec<usize>, detail: &str| Ok(Finding::fail(TheoremId::Isomorphism, Witness::new(elements, detail)));

    let by_mu = match build_quotient_by_mu(mu) {
        Ok(q) => q,
        Err(e) => return fail(vec![], &format!("G/mu: {e}")),
    };
    let level = mu.level_set();
    let h = match level.subgroup(g) {
        Ok(h) => h,
        Err(_) => return fail(level.members, "mu* is not a subgroup"),
    };
    let by_level = match build_crisp_quotient(&h) {
        Ok(q) => q,
        Err(e) => return fail(vec![], &format!("G/mu*: {e}")),
    };

    if are_isomorphic(by_mu.group(), by_level.group()).is_none() {
        return fail(vec![], "isomorphism search found no bijection");
    }

    let mut explicit = vec![usize::MAX; by_mu.len()];
    for x in g.elements() {
        let (src, dst) = (by_mu.class_of(x), by_level.class_of(x));
        if explicit[src] == usize::MAX {
            explicit[src] = dst;
        } else if explicit[src] != dst {
            return fail(vec![x, by_mu.representatives()[src]], "mu_x -> mu*x depends on the representative");
        }
    }
    let mut hit = vec![false; by_level.len()];
    for &d in &explicit {
        hit[d] = true;
    }
    if by_mu.len() != by_level.len() || hit.iter().any(|h| !h) {
        return fail(vec![], "mu_x -> mu*x is not a bijection");
    }
    if let Err(AlgebraError::NotHomomorphism(a, b)) = check_homomorphism(explicit, by_mu.group(), by_level.group()) {
        return fail(
            vec![by_mu.representatives()[a], by_mu.representatives()[b]],
            "mu_x -> mu*x does not preserve products",
        );
    }
    Ok(Finding::pass(TheoremId::Isomorphism))
}

/// `theta(x) = mu_x` as a map onto the classes of `G/mu`.
#[derive(Debug, Clone)]
pub struct NaturalMap {
    pub quotient: QuotientStructure,
    pub map: Vec<usize>,
}

impl NaturalMap {
    /// `{x : theta(x) = mu_e}`.
    pub fn kernel(&self, g: &AgGroup) -> Vec<usize> {
        let e = self.map[g.identity()];
        g.elements().filter(|&x| self.map[x] == e).collect()
    }
}

/// For normal `mu`: `theta` is a homomorphism onto `G/mu` with kernel `mu*`.
pub fn natural_homomorphism(mu: &FuzzySubset<'_>) -> Result<(NaturalMap, Finding)> {
    require_normal(mu)?;
    let g = mu.carrier();
    let quotient = build_quotient_by_mu(mu)?;
    let map = quotient.projection().to_vec();
    let theta = NaturalMap { quotient, map };

    let finding = match check_homomorphism(theta.map.clone(), g, theta.quotient.group()) {
        Err(AlgebraError::NotHomomorphism(x, y)) => {
            Finding::fail(TheoremId::NaturalHomomorphism, Witness::new([x, y], "theta(xy) != theta(x)theta(y)"))
        }
        Err(e) => return Err(e),
        Ok(_) => {
            let kernel = theta.kernel(g);
            let level = mu.level_set().members;
            if kernel != level {
                Finding::fail(
                    TheoremId::NaturalHomomorphism,
                    Witness::new(kernel, format!("kernel differs from mu* = {level:?}")),
                )
            } else if theta.map[g.identity()] != theta.quotient.group().identity() {
                Finding::fail(
                    TheoremId::NaturalHomomorphism,
                    Witness::new([g.identity()], "theta(e) is not the identity class"),
                )
            } else {
                Finding::pass(TheoremId::NaturalHomomorphism)
            }
        }
    };
    Ok((theta, finding))
}

/// Lifts `zeta` on `G/mu` back to `nu(x) = zeta(mu_x)` on `G`, checked normal.
///
/// `quotient` must be the quotient of `mu`'s carrier by `mu`.
pub fn lift_correspondence<'g>(
    mu: &FuzzySubset<'g>,
    quotient: &QuotientStructure,
    zeta: &FuzzySubset<'_>,
) -> Result<FuzzySubset<'g>> {
    require_normal(mu)?;
    if zeta.carrier() != quotient.group() || quotient.projection().len() != mu.carrier().order() {
        return Err(AlgebraError::PreconditionFailed("zeta does not live on G/mu".into()));
    }
    require_normal(zeta).map_err(|e| AlgebraError::PreconditionFailed(format!("zeta on G/mu: {e}")))?;
    let g = mu.carrier();
    let nu = FuzzySubset::new(g, g.elements().map(|x| zeta.grade(quotient.class_of(x))).collect())?;
    nu.is_fuzzy_ag_subgroup()
        .and_then(|_| nu.is_normal())
        .map_err(|witness| AlgebraError::TheoremViolation { theorem: TheoremId::Correspondence, witness })?;
    Ok(nu)
}

/// `[G : mu]`, the number of distinct fuzzy cosets.
pub fn fuzzy_index(mu: &FuzzySubset<'_>) -> Result<usize> {
    Ok(build_quotient_by_mu(mu)?.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangeReport {
    pub order: usize,
    pub index: usize,
    /// `H = {h : mu_h = mu_e}`.
    pub stabilizer: Vec<usize>,
    pub crisp_cosets: Vec<Vec<usize>>,
    pub finding: Finding,
}

impl LagrangeReport {
    pub fn divides(&self) -> bool {
        self.order.is_multiple_of(self.index)
    }
}

/// `[G : mu]` divides `|G|`, with the counting argument rebuilt: `H` is a
/// subgroup, and `Hx -> mu_x` over the right cosets of `H` is well defined
/// and injective onto the fuzzy cosets.
pub fn fuzzy_lagrange(mu: &FuzzySubset<'_>) -> Result<LagrangeReport> {
    require_fuzzy_subgroup(mu)?;
    let g = mu.carrier();
    let n = g.order();
    let quotient = build_quotient_by_mu(mu)?;
    let index = quotient.len();

    let cosets: Vec<FuzzyCoset> = g.elements().map(|x| fuzzy_coset(mu, x)).collect();
    let e = g.identity();
    let stabilizer: Vec<usize> = g.elements().filter(|&h| cosets[h] == cosets[e]).collect();

    let mut report = LagrangeReport {
        order: n,
        index,
        stabilizer: stabilizer.clone(),
        crisp_cosets: Vec::new(),
        finding: Finding::pass(TheoremId::Lagrange),
    };
    let fail =
        |elements: Vec<usize>, detail: String| Finding::fail(TheoremId::Lagrange, Witness::new(elements, detail));

    let h = match Subgroup::new(g, stabilizer.iter().copied()) {
        Ok(h) => h,
        Err(_) => {
            report.finding = fail(stabilizer, "{h : mu_h = mu_e} is not a subgroup".into());
            return Ok(report);
        }
    };
    let decomposition = match h.coset_decomposition() {
        Ok(d) => d,
        Err(e) => {
            report.finding = fail(stabilizer, e.to_string());
            return Ok(report);
        }
    };
    report.crisp_cosets = decomposition.clone();

    // Hx_i -> mu_(x_i): constant on each coset
    for coset in &decomposition {
        let rep = coset[0];
        if let Some(&z) = coset.iter().find(|&&z| cosets[z] != cosets[rep]) {
            report.finding = fail(vec![rep, z], "elements of one crisp coset have different fuzzy cosets".into());
            return Ok(report);
        }
    }
    // and injective
    for (i, a) in decomposition.iter().enumerate() {
        for b in &decomposition[i + 1..] {
            if cosets[a[0]] == cosets[b[0]] {
                report.finding = fail(vec![a[0], b[0]], "distinct crisp cosets map to one fuzzy coset".into());
                return Ok(report);
            }
        }
    }
    if decomposition.len() != index {
        report.finding = fail(vec![], format!("{} crisp cosets but index {index}", decomposition.len()));
    } else if !n.is_multiple_of(index) {
        report.finding = fail(vec![], format!("index {index} does not divide {n}"));
    }
    Ok(report)
}

/// Serializable view of a quotient, optionally with one grade per class.
///
/// Text layout: the class count; one line per class,
/// `rep: m1 m2 ...` with an optional trailing `grade p/q`; then the class
/// table in the Cayley text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientDump {
    pub classes: Vec<DumpClass>,
    #[serde(with = "table_json")]
    pub table: CayleyTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpClass {
    pub representative: usize,
    pub members: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grade: Option<Grade>,
}

mod table_json {
    use super::CayleyTable;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &CayleyTable, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&t.to_json_value(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CayleyTable, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CayleyTable::parse_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

impl QuotientDump {
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.classes.len());
        for c in &self.classes {
            let members: Vec<String> = c.members.iter().map(usize::to_string).collect();
            s.push_str(&format!("{}: {}", c.representative, members.join(" ")));
            if let Some(g) = c.grade {
                s.push_str(&format!(" grade {g}"));
            }
            s.push('\n');
        }
        s.push_str(&self.table.to_text());
        s
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let perr = |line: usize, message: &str| AlgebraError::Parse { line: line + 1, message: message.into() };
        let lines: Vec<(usize, &str)> = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect();
        let (i0, head) = *lines.first().ok_or_else(|| perr(0, "empty quotient dump"))?;
        let k: usize = head.trim().parse().map_err(|_| perr(i0, "bad class count"))?;
        if lines.len() < k + 1 {
            return Err(perr(i0, "dump ends early"));
        }
        let mut classes = Vec::with_capacity(k);
        for &(i, line) in &lines[1..=k] {
            let (rep, rest) = line.split_once(':').ok_or_else(|| perr(i, "expected `rep: members`"))?;
            let representative = rep.trim().parse().map_err(|_| perr(i, "bad representative"))?;
            let (members_part, grade) = match rest.split_once("grade") {
                Some((m, g)) => (m, Some(g.trim().parse::<Grade>()?)),
                None => (rest, None),
            };
            let members = members_part
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(i, "bad member")))
                .collect::<Result<Vec<usize>>>()?;
            classes.push(DumpClass { representative, members, grade });
        }
        let rest: Vec<&str> = lines[k + 1..].iter().map(|(_, l)| *l).collect();
        let table = CayleyTable::parse_text(&rest.join("\n"))?;
        Ok(QuotientDump { classes, table })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dump serializes")
    }

    pub fn parse_json(input: &str) -> Result<Self> {
        serde_json::from_str(input).map_err(|e| AlgebraError::Parse { line: e.line(), message: e.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::are_isomorphic;

    fn g(p: u64, q: u64) -> Grade {
        Grade::new(p, q).unwrap()
    }

    #[test]
    fn cosets_on_z4_subtraction() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        let e = fuzzy_coset(&mu, 0);
        assert_eq!(e.grades, vec![g(1, 1), g(1, 2), g(1, 2), g(1, 2)]);
        // g*1 = (1, 0, 3, 2) for g = 0..3
        assert_eq!((0..4).map(|x| grp.op(x, 1)).collect::<Vec<_>>(), vec![1, 0, 3, 2]);
        assert_eq!(fuzzy_coset(&mu, 1).grades, vec![g(1, 2), g(1, 1), g(1, 2), g(1, 2)]);

        let c = FuzzySubset::constant(&grp, g(2, 3));
        assert!(grp.elements().all(|x| fuzzy_coset(&c, x).grades == vec![g(2, 3); 4]));
    }

    #[test]
    fn coset_equality_ignores_determinant() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let a = fuzzy_coset(&mu, 0);
        let b = fuzzy_coset(&mu, 1);
        assert_ne!(a.determinant, b.determinant);
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_by_level_pair() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        assert_eq!(fuzzy_coset(&mu, 0).grades, vec![g(1, 1), g(1, 1), g(1, 2), g(1, 2)]);
        assert_eq!(fuzzy_coset(&mu, 2).grades, vec![g(1, 2), g(1, 2), g(1, 1), g(1, 1)]);
        let q = build_quotient_by_mu(&mu).unwrap();
        assert_eq!(q.classes(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(q.representatives(), &[0, 2]);
        assert_eq!(q.group().table().cells(), &[0, 1, 1, 0]);
        assert_eq!(fuzzy_index(&mu).unwrap(), 2);
        assert!(check_quotient_ag_group(&mu).unwrap().passed());
    }

    #[test]
    fn quotient_by_constant_is_trivial() {
        let grp = fixtures::z3_subtraction();
        let mu = FuzzySubset::constant(&grp, g(1, 2));
        let q = build_quotient_by_mu(&mu).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(fuzzy_index(&mu).unwrap(), 1);
    }

    #[test]
    fn quotient_by_non_normal_mu() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        let cosets: Vec<_> = grp.elements().map(|x| fuzzy_coset(&mu, x)).collect();
        for i in 0..4 {
            for j in 0..i {
                assert_ne!(cosets[i], cosets[j]);
            }
        }
        let q = build_quotient_by_mu(&mu).unwrap();
        assert_eq!(q.len(), 4);
        assert!(are_isomorphic(q.group(), &grp).is_some());
        assert_eq!(fuzzy_index(&mu).unwrap(), 4);
        // the class of mu_e is a left identity but not a right identity
        assert!(!q.right_identity_failures().is_empty());
    }

    #[test]
    fn ill_defined_partition_is_reported() {
        // {0,1} is not a subgroup of the Z4 subtraction table, and its "cosets" do not descend
        let grp = fixtures::z4_subtraction();
        let err = QuotientStructure::from_partition(&grp, vec![vec![0, 1], vec![2, 3]]).unwrap_err();
        match err {
            AlgebraError::NotWellDefined(w) => assert_eq!(w.elements.len(), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coset_equality_cases() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        assert_eq!(fuzzy_coset(&mu, 0), fuzzy_coset(&mu, 1));
        assert_eq!(crisp_coset(&k, &[0, 1], 0), crisp_coset(&k, &[0, 1], 1));
        assert!(coset_equality_theorem(&mu).unwrap().iter().all(Finding::passed));

        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        assert_ne!(fuzzy_coset(&mu, 1), fuzzy_coset(&mu, 2));
        assert_eq!(crisp_coset(&grp, &[0], 1), vec![1]);
        assert_eq!(crisp_coset(&grp, &[0], 2), vec![2]);
        assert!(coset_equality_theorem(&mu).unwrap().iter().all(Finding::passed));
    }

    #[test]
    fn normal_theorems_on_klein() {
        let k = fixtures::klein_four();
        for grades in [fixtures::klein_level_pair_grades(), fixtures::klein_normal_grades(), vec![g(1, 3); 4]] {
            let mu = FuzzySubset::new(&k, grades).unwrap();
            assert!(normal_grade_theorem(&mu).unwrap().passed());
            assert!(normal_coset_identity(&mu).unwrap().passed());
            assert!(isomorphism_theorem(&mu).unwrap().passed());
            let (theta, finding) = natural_homomorphism(&mu).unwrap();
            assert!(finding.passed());
            assert_eq!(theta.kernel(&k), mu.level_set().members);
        }
        // mu_a(ab) = mu(ab . a) = mu(b) = 1/4
        let mu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        let (a, b, ab) = (1, 2, 3);
        assert_eq!(fuzzy_coset(&mu, a).grades[ab], g(1, 4));
        assert_eq!(mu.grade(b), g(1, 4));
    }

    #[test]
    fn natural_homomorphism_kernels() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let (theta, _) = natural_homomorphism(&mu).unwrap();
        assert_eq!(theta.kernel(&k), vec![0, 1]);

        let mu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        let (theta, _) = natural_homomorphism(&mu).unwrap();
        assert_eq!(theta.map, vec![0, 1, 2, 3]);
        assert_eq!(theta.kernel(&k), vec![0]);

        let c = FuzzySubset::constant(&k, Grade::ONE);
        let (theta, _) = natural_homomorphism(&c).unwrap();
        assert_eq!(theta.map, vec![0; 4]);
        assert_eq!(theta.kernel(&k), vec![0, 1, 2, 3]);
    }

    #[test]
    fn normal_only_operations_reject_non_normal() {
        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        assert!(matches!(normal_grade_theorem(&mu), Err(AlgebraError::PreconditionFailed(_))));
        assert!(matches!(induced_on_quotient(&mu), Err(AlgebraError::PreconditionFailed(_))));
        assert!(matches!(natural_homomorphism(&mu), Err(AlgebraError::PreconditionFailed(_))));
    }

    #[test]
    fn crisp_quotients() {
        let k = fixtures::klein_four();
        let triv = build_crisp_quotient(&Subgroup::trivial(&k)).unwrap();
        assert!(are_isomorphic(triv.group(), &k).is_some());
        assert_eq!(build_crisp_quotient(&Subgroup::whole(&k)).unwrap().len(), 1);
        let h = Subgroup::new(&k, [0, 1]).unwrap();
        let q = build_crisp_quotient(&h).unwrap();
        assert_eq!(q.classes(), &[vec![0, 1], vec![2, 3]]);
        assert!(are_isomorphic(q.group(), &fixtures::z2()).is_some());
    }

    #[test]
    fn quotient_fuzzy_subgroups() {
        let k = fixtures::klein_four();
        let nu = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        let h = Subgroup::new(&k, [0, 1]).unwrap();
        let xi = quotient_fuzzy_subgroup(&nu, &h).unwrap();
        assert_eq!(xi.grades, vec![Grade::ONE, g(1, 4)]);

        let triv = quotient_fuzzy_subgroup(&nu, &Subgroup::trivial(&k)).unwrap();
        assert_eq!(triv.grades, nu.grades());
        let whole = quotient_fuzzy_subgroup(&nu, &Subgroup::whole(&k)).unwrap();
        assert_eq!(whole.grades, vec![nu.identity_grade()]);
    }

    #[test]
    fn induced_and_lifted() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let induced = induced_on_quotient(&mu).unwrap();
        assert_eq!(induced.grades, vec![Grade::ONE, g(1, 2)]);
        assert!(induced.fuzzy().is_normal().is_ok());

        let zeta = FuzzySubset::new(induced.quotient.group(), vec![Grade::ONE, g(1, 2)]).unwrap();
        let nu = lift_correspondence(&mu, &induced.quotient, &zeta).unwrap();
        assert_eq!(nu.grades(), &[Grade::ONE, Grade::ONE, g(1, 2), g(1, 2)]);

        // round trip recovers mu exactly
        let second = FuzzySubset::new(&k, fixtures::klein_normal_grades()).unwrap();
        let ind = induced_on_quotient(&second).unwrap();
        assert_eq!(ind.quotient.len(), 4);
        assert_eq!(ind.grades, second.grades());
        let back = lift_correspondence(&second, &ind.quotient, &ind.fuzzy()).unwrap();
        assert_eq!(back, second);

        let c = FuzzySubset::constant(&k, g(1, 2));
        let ind = induced_on_quotient(&c).unwrap();
        assert_eq!(ind.grades, vec![g(1, 2)]);
        let zc = FuzzySubset::constant(ind.quotient.group(), g(1, 5));
        assert_eq!(lift_correspondence(&c, &ind.quotient, &zc).unwrap(), FuzzySubset::constant(&k, g(1, 5)));
    }

    #[test]
    fn lift_rejects_non_normal_zeta() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let q = build_quotient_by_mu(&mu).unwrap();
        let zeta = FuzzySubset::new(q.group(), vec![g(1, 2), Grade::ONE]).unwrap();
        assert!(matches!(lift_correspondence(&mu, &q, &zeta), Err(AlgebraError::PreconditionFailed(_))));
    }

    #[test]
    fn lagrange_cases() {
        let k = fixtures::klein_four();
        let c = FuzzySubset::constant(&k, Grade::ONE);
        let r = fuzzy_lagrange(&c).unwrap();
        assert_eq!((r.index, r.divides()), (1, true));

        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let r = fuzzy_lagrange(&mu).unwrap();
        assert!(r.finding.passed());
        assert_eq!(r.index, 2);
        assert_eq!(r.stabilizer, vec![0, 1]);
        assert_eq!(r.crisp_cosets, vec![vec![0, 1], vec![2, 3]]);

        let grp = fixtures::z4_subtraction();
        let mu = FuzzySubset::new(&grp, fixtures::z4_non_normal_grades()).unwrap();
        let r = fuzzy_lagrange(&mu).unwrap();
        assert!(r.finding.passed());
        assert_eq!((r.index, r.stabilizer.clone()), (4, vec![0]));
    }

    #[test]
    fn dump_round_trips() {
        let k = fixtures::klein_four();
        let mu = FuzzySubset::new(&k, fixtures::klein_level_pair_grades()).unwrap();
        let induced = induced_on_quotient(&mu).unwrap();
        let dump = induced.quotient.dump(Some(&induced.grades));
        let text = dump.to_text();
        assert_eq!(text, "2\n0: 0 1 grade 1\n2: 2 3 grade 1/2\n2\n0 1\n1 0\n");
        assert_eq!(QuotientDump::parse_text(&text).unwrap(), dump);
        assert_eq!(QuotientDump::parse_json(&dump.to_json()).unwrap(), dump);

        let bare = induced.quotient.dump(None);
        assert_eq!(QuotientDump::parse_text(&bare.to_text()).unwrap(), bare);
        assert!(!bare.to_json().contains("grade"));
    }
}
