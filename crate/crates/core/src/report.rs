use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    FaceClosure,
    Intersection,
    Coverage,
    Degenerate,
    MissingCoordinates,
    Antipodal,
    Unsupported,
    LabelCondition,
    Codomain,
    Totality,
    Chain,
    StrictSymmetry,
    OddDegree,
    PhiBound,
    PropositionMismatch,
    Extension,
    OrthantSeparation,
    ShellComplementary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub simplices: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<u32>,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            simplices: Vec::new(),
            vertices: Vec::new(),
            detail: detail.into(),
        }
    }

    pub fn with_simplex(mut self, s: Vec<u32>) -> Self {
        self.simplices.push(s);
        self
    }

    pub fn with_vertex(mut self, v: u32) -> Self {
        self.vertices.push(v);
        self
    }
}

/// Outcome of a structural or labelling check. `ok` holds iff there are no
/// violations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    ok: bool,
    violations: Vec<Violation>,
}

impl Default for ValidationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport {
            ok: true,
            violations: Vec::new(),
        }
    }

    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn push(&mut self, v: Violation) {
        self.ok = false;
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            self.push(v);
        }
    }

    pub fn ok(&self) -> bool {
        self.ok
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}
