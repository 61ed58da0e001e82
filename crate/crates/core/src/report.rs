//! Verdicts and witnesses shared by every validator.

use std::fmt;

use serde::Serialize;

/// Named laws checked by the validators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Law {
    Commutativity,
    Associativity,
    Neutrality,
    /// Compatibility of an equivalence with addition.
    Congruence,
    /// Additivity of μ̃ in each T-argument.
    A1,
    /// 0-absorption of μ̃.
    A2,
    /// n-ary associativity under flattening.
    A3,
    /// Non-symmetry; informational only.
    A4,
    /// Additivity of μ̃ in each Γ-parameter; informational for semirings.
    GammaAdditivity,
    /// Additivity of the action in the module slot and in each T-slot.
    M1,
    /// Coherence of the action with μ̃ composition.
    M2,
    /// 0-absorption of the action.
    M3,
    /// Additivity of the action in each Γ-parameter.
    M4,
    /// Commutation of the two actions of a bi-module.
    Compatibility,
    ZeroPreserved,
    Additive,
    Intertwining,
    IdealContainsZero,
    IdealAddClosed,
    IdealAbsorbing,
    Prime,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Commutativity => "commutativity",
            Law::Associativity => "associativity",
            Law::Neutrality => "neutrality",
            Law::Congruence => "congruence",
            Law::A1 => "A1",
            Law::A2 => "A2",
            Law::A3 => "A3",
            Law::A4 => "A4",
            Law::GammaAdditivity => "gamma-additivity",
            Law::M1 => "M1",
            Law::M2 => "M2",
            Law::M3 => "M3",
            Law::M4 => "M4",
            Law::Compatibility => "bimodule-compatibility",
            Law::ZeroPreserved => "zero-preserved",
            Law::Additive => "additive",
            Law::Intertwining => "intertwining",
            Law::IdealContainsZero => "ideal-contains-zero",
            Law::IdealAddClosed => "ideal-add-closed",
            Law::IdealAbsorbing => "ideal-absorbing",
            Law::Prime => "prime",
        };
        f.write_str(s)
    }
}

/// A concrete failing instance of a law. Fields are named index vectors so
/// that the instance can be replayed through the owning validator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub law: Law,
    pub fields: Vec<(String, Vec<usize>)>,
    /// Value of the left-hand side of the failed equation, when meaningful.
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

impl Witness {
    pub fn new(law: Law) -> Self {
        Witness {
            law,
            fields: Vec::new(),
            lhs: None,
            rhs: None,
        }
    }

    pub fn field(mut self, name: &str, values: impl Into<Vec<usize>>) -> Self {
        self.fields.push((name.to_string(), values.into()));
        self
    }

    pub fn scalar(self, name: &str, value: usize) -> Self {
        self.field(name, vec![value])
    }

    pub fn sides(mut self, lhs: usize, rhs: usize) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn get(&self, name: &str) -> Option<&[usize]> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice())
    }

    pub fn get_scalar(&self, name: &str) -> Option<usize> {
        self.get(name).and_then(|v| v.first().copied())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        for (k, v) in &self.fields {
            write!(f, " {}={:?}", k, v)?;
        }
        if let (Some(l), Some(r)) = (self.lhs, self.rhs) {
            write!(f, " lhs={} rhs={}", l, r)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail(Witness),
    /// Informational outcome that never fails validation.
    Info(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: Law,
    pub verdict: Verdict,
    /// Number of law instances evaluated.
    pub checked: u64,
    /// Instances skipped because a cell was outside a bounded carrier.
    pub skipped: u64,
    pub note: Option<String>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        !matches!(self.verdict, Verdict::Fail(_))
    }
}

/// Per-law verdicts of one validation run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub results: Vec<LawResult>,
}

pub type ValidationReport = AxiomReport;

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, result: LawResult) {
        self.results.push(result);
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(LawResult::passed)
    }

    pub fn get(&self, law: Law) -> Option<&LawResult> {
        self.results.iter().find(|r| r.law == law)
    }

    pub fn passed_law(&self, law: Law) -> bool {
        self.results.iter().filter(|r| r.law == law).all(LawResult::passed)
    }

    pub fn failure(&self, law: Law) -> Option<&Witness> {
        self.results
            .iter()
            .filter(|r| r.law == law)
            .find_map(|r| match &r.verdict {
                Verdict::Fail(w) => Some(w),
                _ => None,
            })
    }

    pub fn first_failure(&self) -> Option<&Witness> {
        self.results.iter().find_map(|r| match &r.verdict {
            Verdict::Fail(w) => Some(w),
            _ => None,
        })
    }

    /// Human-readable one line per law.
    pub fn lines(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|r| {
                let mut s = match &r.verdict {
                    Verdict::Pass => format!("{}: pass ({} instances)", r.law, r.checked),
                    Verdict::Fail(w) => format!("{}: FAIL witness {}", r.law, w),
                    Verdict::Info(msg) => format!("{}: info {}", r.law, msg),
                };
                if r.skipped > 0 {
                    s.push_str(&format!(" [{} bounded cells skipped]", r.skipped));
                }
                if let Some(n) = &r.note {
                    s.push_str(&format!(" [{}]", n));
                }
                s
            })
            .collect()
    }
}

/// Accumulates instance counts and the first failure for one law.
pub(crate) struct LawScan {
    law: Law,
    checked: u64,
    skipped: u64,
    failure: Option<Witness>,
    note: Option<String>,
}

impl LawScan {
    pub(crate) fn new(law: Law) -> Self {
        LawScan {
            law,
            checked: 0,
            skipped: 0,
            failure: None,
            note: None,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) {
        self.checked += 1;
    }

    #[inline]
    pub(crate) fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Records `w` unless a failure is already recorded. Scans run in
    /// lexicographic order, so the first failure is the smallest witness.
    pub(crate) fn fail(&mut self, w: Witness) {
        if self.failure.is_none() {
            self.failure = Some(w);
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub(crate) fn finish(self) -> LawResult {
        LawResult {
            law: self.law,
            verdict: match self.failure {
                Some(w) => Verdict::Fail(w),
                None => Verdict::Pass,
            },
            checked: self.checked,
            skipped: self.skipped,
            note: self.note,
        }
    }
}
