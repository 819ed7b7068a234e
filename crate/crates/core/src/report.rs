//! Structured check results and their text/JSON renderings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Identifies the law, lemma or theorem a finding is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "Axiom-left-invertive")]
    LeftInvertive,
    #[serde(rename = "Identity-left-permutable")]
    LeftPermutable,
    #[serde(rename = "Identity-bracket-shift")]
    BracketShift,
    #[serde(rename = "Identity-inverse-of-product")]
    InverseOfProduct,
    #[serde(rename = "Definition-fuzzy-subgroup")]
    FuzzySubgroup,
    #[serde(rename = "Definition-normal-fuzzy-subgroup")]
    Normal,
    #[serde(rename = "Lemma-identity-maximal")]
    IdentityMaximal,
    #[serde(rename = "Lemma-inverse-grade")]
    InverseGrade,
    #[serde(rename = "Proposition-commutation")]
    Commutation,
    #[serde(rename = "Lemma-level-set-subgroup")]
    LevelSetSubgroup,
    #[serde(rename = "Lemma-translation")]
    Translation,
    #[serde(rename = "Oracle-level-cut")]
    LevelCutOracle,
    #[serde(rename = "Theorem-pullback")]
    Pullback,
    #[serde(rename = "Theorem-quotient-ag-group")]
    QuotientAgGroup,
    #[serde(rename = "Theorem-quotient-fuzzy-subgroup")]
    QuotientFuzzySubgroup,
    #[serde(rename = "Lemma-crisp-coset-product")]
    CrispCosetProduct,
    #[serde(rename = "Theorem-coset-equality")]
    CosetEquality,
    #[serde(rename = "Theorem-normal-grade")]
    NormalGrade,
    #[serde(rename = "Proposition-normal-coset")]
    NormalCoset,
    #[serde(rename = "Theorem-isomorphism")]
    Isomorphism,
    #[serde(rename = "Theorem-induced-normal")]
    InducedNormal,
    #[serde(rename = "Theorem-natural-homomorphism")]
    NaturalHomomorphism,
    #[serde(rename = "Theorem-correspondence")]
    Correspondence,
    #[serde(rename = "Theorem-Lagrange")]
    Lagrange,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        use TheoremId::*;
        match self {
            LeftInvertive => "Axiom-left-invertive",
            LeftPermutable => "Identity-left-permutable",
            BracketShift => "Identity-bracket-shift",
            InverseOfProduct => "Identity-inverse-of-product",
            FuzzySubgroup => "Definition-fuzzy-subgroup",
            Normal => "Definition-normal-fuzzy-subgroup",
            IdentityMaximal => "Lemma-identity-maximal",
            InverseGrade => "Lemma-inverse-grade",
            Commutation => "Proposition-commutation",
            LevelSetSubgroup => "Lemma-level-set-subgroup",
            Translation => "Lemma-translation",
            LevelCutOracle => "Oracle-level-cut",
            Pullback => "Theorem-pullback",
            QuotientAgGroup => "Theorem-quotient-ag-group",
            QuotientFuzzySubgroup => "Theorem-quotient-fuzzy-subgroup",
            CrispCosetProduct => "Lemma-crisp-coset-product",
            CosetEquality => "Theorem-coset-equality",
            NormalGrade => "Theorem-normal-grade",
            NormalCoset => "Proposition-normal-coset",
            Isomorphism => "Theorem-isomorphism",
            InducedNormal => "Theorem-induced-normal",
            NaturalHomomorphism => "Theorem-natural-homomorphism",
            Correspondence => "Theorem-correspondence",
            Lagrange => "Theorem-Lagrange",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Element indices exhibiting a failure, plus a short human description.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub detail: String,
}

impl Witness {
    pub fn new(elements: impl Into<Vec<usize>>, detail: impl Into<String>) -> Self {
        Witness { elements: elements.into(), detail: detail.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of checking one statement on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub theorem: TheoremId,
    pub outcome: Result<(), Witness>,
}

impl Finding {
    pub fn pass(theorem: TheoremId) -> Self {
        Finding { theorem, outcome: Ok(()) }
    }

    pub fn fail(theorem: TheoremId, witness: Witness) -> Self {
        Finding { theorem, outcome: Err(witness) }
    }

    pub fn from_outcome(theorem: TheoremId, outcome: Result<(), Witness>) -> Self {
        Finding { theorem, outcome }
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// A finding attached to the instance it was observed on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub theorem: TheoremId,
    pub instance: String,
    pub witness: Option<Witness>,
}

impl Record {
    pub fn new(instance: impl Into<String>, finding: Finding) -> Self {
        Record { theorem: finding.theorem, instance: instance.into(), witness: finding.outcome.err() }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "theorem": self.theorem.as_str(),
            "instance": self.instance,
            "status": if self.passed() { "PASS" } else { "FAIL" },
        });
        if let Some(w) = &self.witness {
            v["witness"] = json!(w.elements);
            v["detail"] = json!(w.detail);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Everything a command wants to say: free-form facts plus check records.
///
/// Facts carry descriptive output (the identity element, an index, a quotient
/// dump); records carry pass/fail outcomes. Only records affect the exit status.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub facts: Vec<(String, Value)>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.facts.push((key.into(), value.into()));
    }

    pub fn push(&mut self, instance: &str, finding: Finding) {
        self.records.push(Record::new(instance, finding));
    }

    pub fn extend(&mut self, instance: &str, findings: impl IntoIterator<Item = Finding>) {
        for f in findings {
            self.push(instance, f);
        }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn tallies(&self) -> BTreeMap<TheoremId, Tally> {
        let mut out: BTreeMap<TheoremId, Tally> = BTreeMap::new();
        for r in &self.records {
            let t = out.entry(r.theorem).or_default();
            if r.passed() {
                t.pass += 1;
            } else {
                t.fail += 1;
            }
        }
        out
    }

    fn sorted_records(&self) -> Vec<&Record> {
        let mut rs: Vec<&Record> = self.records.iter().collect();
        rs.sort();
        rs
    }

    pub fn to_json(&self) -> Value {
        let tallies: serde_json::Map<String, Value> = self
            .tallies()
            .into_iter()
            .map(|(id, t)| (id.as_str().to_string(), json!({"pass": t.pass, "fail": t.fail})))
            .collect();
        let facts: serde_json::Map<String, Value> = self.facts.iter().cloned().collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": if self.passed() { "PASS" } else { "FAIL" },
            "facts": facts,
            "summary": tallies,
            "records": self.sorted_records().into_iter().map(Record::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# agfuzz report v{SCHEMA_VERSION}: {}\n", self.command));
        for (k, v) in &self.facts {
            match v {
                Value::String(s) if s.contains('\n') => {
                    out.push_str(&format!("{k}:\n"));
                    for line in s.lines() {
                        out.push_str(&format!("  {line}\n"));
                    }
                }
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        for r in self.sorted_records() {
            match &r.witness {
                None => out.push_str(&format!("PASS {} {}\n", r.theorem, r.instance)),
                Some(w) => out.push_str(&format!("FAIL {} {} witness={}\n", r.theorem, r.instance, w)),
            }
        }
        for (id, t) in self.tallies() {
            out.push_str(&format!("TOTAL {id} pass={} fail={}\n", t.pass, t.fail));
        }
        out.push_str(&format!("STATUS {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }

    /// Renders the report. JSON output has sorted keys and carries grades
    /// only as fraction strings.
    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only_and_passes() {
        let r = Report::new("sweep");
        assert!(r.passed());
        let text = r.emit(Format::Text);
        assert_eq!(text, "# agfuzz report v1: sweep\nSTATUS PASS\n");
    }

    #[test]
    fn single_failure_names_theorem_and_witness() {
        let mut r = Report::new("check-fuzzy");
        r.push("g", Finding::fail(TheoremId::Normal, Witness::new([1, 0], "mu(xy.x^-1) != mu(y)")));
        assert!(!r.passed());
        let text = r.emit(Format::Text);
        let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
        assert_eq!(fails, ["FAIL Definition-normal-fuzzy-subgroup g witness=[1, 0] (mu(xy.x^-1) != mu(y))"]);
    }

    #[test]
    fn json_keys_sorted_and_schema_versioned() {
        let mut r = Report::new("x");
        r.fact("zeta", "1/2");
        r.fact("alpha", 3);
        r.push("i", Finding::pass(TheoremId::Lagrange));
        let s = r.emit(Format::Json);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema_version"], 1);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
    }

    #[test]
    fn serde_names_match_as_str() {
        for id in [TheoremId::Commutation, TheoremId::Lagrange, TheoremId::LevelCutOracle, TheoremId::InverseOfProduct]
        {
            assert_eq!(serde_json::to_value(id).unwrap(), Value::String(id.as_str().into()));
        }
    }
}
