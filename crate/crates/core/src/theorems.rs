//! Hypothesis validators and witness finders for the seven labelling theorems.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{boundary_complex, check_antipodal_symmetry, Simplex, Triangulation, VertexId};
use crate::geometry::{
    active_constraints, hull_meets_interior, point_location, Constraint, Location,
    PolytopeDescriptor, PolytopeKind,
};
use crate::labels::{
    complementary, ext_points, neutral, Label, LabelError, LabelFunction, LabelKind,
    LabelSetDescriptor,
};
use crate::rational::{signum, zero};
use crate::report::{ValidationReport, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoremError {
    #[error("{0} needs a triangulation with a domain")]
    MissingDomain(TheoremId),
    #[error("{id} is stated for {expected} domains, got {got}")]
    DomainMismatch {
        id: TheoremId,
        expected: &'static str,
        got: PolytopeKind,
    },
    #[error("{id} needs {expected} labels, got {got}")]
    CodomainMismatch {
        id: TheoremId,
        expected: LabelKind,
        got: LabelKind,
    },
    #[error("{id} needs label dimension {expected}, got {got}")]
    CodomainDimension { id: TheoremId, expected: usize, got: usize },
    #[error("no label satisfies the hypotheses at vertex {0}")]
    NoValidLabel(VertexId),
    #[error("boundary vertex {0} has no antipodal vertex")]
    MissingAntipode(VertexId),
    #[error("label hypotheses violated")]
    HypothesisViolated(ValidationReport),
    #[error(transparent)]
    Label(#[from] LabelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    Sperner,
    OctOct,
    CubCub,
    CubOct,
    OctCub,
    Tucker,
    TuckerCub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessKind {
    Panchromatic,
    ComplementaryEdge,
    Neutral,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Sperner,
        TheoremId::OctOct,
        TheoremId::CubCub,
        TheoremId::CubOct,
        TheoremId::OctCub,
        TheoremId::Tucker,
        TheoremId::TuckerCub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Sperner => "SPERNER",
            TheoremId::OctOct => "OCT_OCT",
            TheoremId::CubCub => "CUB_CUB",
            TheoremId::CubOct => "CUB_OCT",
            TheoremId::OctCub => "OCT_CUB",
            TheoremId::Tucker => "TUCKER",
            TheoremId::TuckerCub => "TUCKER_CUB",
        }
    }

    pub fn domain_kinds(self) -> &'static [PolytopeKind] {
        match self {
            TheoremId::Sperner => &[PolytopeKind::Simplex],
            TheoremId::OctOct | TheoremId::OctCub => &[PolytopeKind::Cross],
            TheoremId::CubCub | TheoremId::CubOct => &[PolytopeKind::Cube],
            TheoremId::Tucker | TheoremId::TuckerCub => &[PolytopeKind::Cross, PolytopeKind::Cube],
        }
    }

    pub fn codomain_kind(self) -> LabelKind {
        match self {
            TheoremId::Sperner => LabelKind::SimplexExt,
            TheoremId::OctOct | TheoremId::CubOct | TheoremId::Tucker => LabelKind::CrossExt,
            TheoremId::CubCub | TheoremId::OctCub | TheoremId::TuckerCub => LabelKind::CubeExt,
        }
    }

    pub fn witness_kind(self) -> WitnessKind {
        match self.codomain_kind() {
            LabelKind::SimplexExt => WitnessKind::Panchromatic,
            LabelKind::CrossExt => WitnessKind::ComplementaryEdge,
            LabelKind::CubeExt => WitnessKind::Neutral,
        }
    }

    pub fn is_tucker_type(self) -> bool {
        matches!(self, TheoremId::Tucker | TheoremId::TuckerCub)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    #[serde(with = "simplex_ids")]
    pub simplex: Simplex,
}

mod simplex_ids {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Simplex, ser: S) -> Result<S::Ok, S::Error> {
        s.ids().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Simplex, D::Error> {
        let ids = Vec::<u32>::deserialize(d)?;
        Simplex::from_ids(&ids).map_err(serde::de::Error::custom)
    }
}

/// Does the labelling of a simplex satisfy the witness predicate?
pub fn is_witness(kind: WitnessKind, labels: &[Label], codomain: LabelSetDescriptor) -> bool {
    match kind {
        WitnessKind::Panchromatic => {
            let mut seen = vec![false; codomain.vector_len()];
            for l in labels {
                if let Some((i, _)) = l.signed_axis() {
                    seen[i] = true;
                }
            }
            seen.into_iter().all(|b| b)
        }
        WitnessKind::ComplementaryEdge => complementary(labels),
        WitnessKind::Neutral => neutral(labels, codomain.dim),
    }
}

/// Per-instance precomputation: allowed labels at each vertex, antipodal
/// pairing on the boundary, and the simplices the witness search scans.
pub struct Checker<'a> {
    id: TheoremId,
    t: &'a Triangulation,
    codomain: LabelSetDescriptor,
    allowed: Vec<Vec<Label>>,
    /// Antipode of each boundary vertex (Tucker-type theorems only).
    partner: Vec<Option<VertexId>>,
    search: Vec<Simplex>,
}

fn domain_of(id: TheoremId, t: &Triangulation) -> Result<&PolytopeDescriptor, TheoremError> {
    let d = t.domain().ok_or(TheoremError::MissingDomain(id))?;
    if !id.domain_kinds().contains(&d.kind) {
        let expected = match id.domain_kinds() {
            [PolytopeKind::Simplex] => "SIMPLEX",
            [PolytopeKind::Cross] => "CROSS",
            [PolytopeKind::Cube] => "CUBE",
            _ => "CROSS or CUBE",
        };
        return Err(TheoremError::DomainMismatch {
            id,
            expected,
            got: d.kind,
        });
    }
    Ok(d)
}

fn check_codomain(id: TheoremId, codomain: LabelSetDescriptor) -> Result<(), TheoremError> {
    if codomain.kind != id.codomain_kind() {
        return Err(TheoremError::CodomainMismatch {
            id,
            expected: id.codomain_kind(),
            got: codomain.kind,
        });
    }
    Ok(())
}

impl<'a> Checker<'a> {
    /// Strict form: the label dimension must equal the domain dimension.
    pub fn new(id: TheoremId, t: &'a Triangulation, codomain: LabelSetDescriptor) -> Result<Self, TheoremError> {
        let d = domain_of(id, t)?;
        if codomain.dim != d.dim {
            return Err(TheoremError::CodomainDimension {
                id,
                expected: d.dim,
                got: codomain.dim,
            });
        }
        Self::build(id, t, codomain)
    }

    /// Like [`Checker::new`], but Tucker-type theorems accept any label
    /// dimension (antipodality is the only hypothesis).
    pub fn for_sampling(
        id: TheoremId,
        t: &'a Triangulation,
        codomain: LabelSetDescriptor,
    ) -> Result<Self, TheoremError> {
        if id.is_tucker_type() {
            domain_of(id, t)?;
            Self::build(id, t, codomain)
        } else {
            Self::new(id, t, codomain)
        }
    }

    fn build(id: TheoremId, t: &'a Triangulation, codomain: LabelSetDescriptor) -> Result<Self, TheoremError> {
        check_codomain(id, codomain)?;
        let d = domain_of(id, t)?;
        let ext = ext_points(codomain);
        let mut allowed = Vec::with_capacity(t.vertex_count());
        let mut partner = vec![None; t.vertex_count()];
        for v in t.vertex_ids() {
            let x = t.point(v);
            let loc = point_location(d, x).unwrap_or(Location::Outside);
            let tight = active_constraints(d, x).unwrap_or_default();
            let ok: Vec<Label> = ext
                .iter()
                .filter(|l| label_allowed(id, d, x.coords(), loc, &tight, l))
                .cloned()
                .collect();
            if ok.is_empty() {
                return Err(TheoremError::NoValidLabel(v));
            }
            allowed.push(ok);
            if id.is_tucker_type() && loc == Location::Boundary {
                partner[v.index()] = t.antipode(v);
            }
        }
        let search = match id.witness_kind() {
            WitnessKind::Panchromatic => t.simplices_of_dim(d.dim).cloned().collect(),
            WitnessKind::ComplementaryEdge => t.edges().cloned().collect(),
            WitnessKind::Neutral => t.simplices().iter().cloned().collect(),
        };
        Ok(Checker {
            id,
            t,
            codomain,
            allowed,
            partner,
            search,
        })
    }

    pub fn id(&self) -> TheoremId {
        self.id
    }

    pub fn codomain(&self) -> LabelSetDescriptor {
        self.codomain
    }

    pub fn allowed(&self, v: VertexId) -> &[Label] {
        &self.allowed[v.index()]
    }

    /// Vertices labelled freely: everything except the larger-id member of
    /// each antipodal boundary pair.
    fn free_vertices(&self) -> Result<Vec<VertexId>, TheoremError> {
        let mut out = Vec::new();
        for v in self.t.vertex_ids() {
            let boundary = self.id.is_tucker_type()
                && point_location(self.t.domain().expect("checked"), self.t.point(v)) == Ok(Location::Boundary);
            match self.partner[v.index()] {
                Some(w) if w < v => {}
                Some(w) if w == v => return Err(TheoremError::MissingAntipode(v)),
                None if boundary => return Err(TheoremError::MissingAntipode(v)),
                _ => out.push(v),
            }
        }
        Ok(out)
    }

    fn assemble(&self, free: &[VertexId], chosen: &[&Label]) -> LabelFunction {
        let mut labels: Vec<Option<Label>> = vec![None; self.t.vertex_count()];
        for (&v, l) in free.iter().zip(chosen) {
            labels[v.index()] = Some((*l).clone());
            if let Some(w) = self.partner[v.index()] {
                labels[w.index()] = Some(l.neg());
            }
        }
        LabelFunction::new(self.codomain, labels.into_iter().map(|l| l.expect("every vertex labelled")).collect())
            .expect("labels drawn from the codomain")
    }

    /// Uniform draw among valid label functions. Panics if some boundary vertex
    /// lacks an antipode (use [`Checker::valid_count`] to check first).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> LabelFunction {
        let free = self.free_vertices().expect("antipodal boundary");
        let chosen: Vec<&Label> = free
            .iter()
            .map(|&v| crate::generate::pick(rng, &self.allowed[v.index()]))
            .collect();
        self.assemble(&free, &chosen)
    }

    /// Number of valid label functions (saturating).
    pub fn valid_count(&self) -> Result<u128, TheoremError> {
        Ok(self
            .free_vertices()?
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(self.allowed[v.index()].len() as u128)))
    }

    /// The `index`-th valid label function in mixed-radix order (last free
    /// vertex varies fastest).
    pub fn nth_valid(&self, index: u128) -> Result<LabelFunction, TheoremError> {
        let free = self.free_vertices()?;
        let mut rest = index;
        let mut chosen = vec![&self.allowed[0][0]; free.len()];
        for (slot, &v) in free.iter().enumerate().rev() {
            let opts = &self.allowed[v.index()];
            chosen[slot] = &opts[(rest % opts.len() as u128) as usize];
            rest /= opts.len() as u128;
        }
        Ok(self.assemble(&free, &chosen))
    }

    /// Checks hypotheses without re-validating the triangulation.
    pub fn validate(&self, lambda: &LabelFunction) -> ValidationReport {
        let mut report = ValidationReport::new();
        if lambda.codomain() != self.codomain {
            report.push(Violation::new(
                ViolationKind::Codomain,
                format!("label codomain {} differs from {}", lambda.codomain(), self.codomain),
            ));
            return report;
        }
        if lambda.len() < self.t.vertex_count() {
            for v in self.t.vertex_ids().skip(lambda.len()) {
                report.push(Violation::new(ViolationKind::Totality, "vertex has no label").with_vertex(v.0));
            }
            return report;
        }
        for v in self.t.vertex_ids() {
            let l = lambda.label(v);
            if !self.allowed[v.index()].contains(l) {
                report.push(
                    Violation::new(
                        ViolationKind::LabelCondition,
                        format!("label {:?} not allowed at {:?}", l, self.t.point(v)),
                    )
                    .with_vertex(v.0),
                );
            }
        }
        if self.id.is_tucker_type() {
            match boundary_complex(self.t) {
                Ok(b) => report.merge(check_antipodal_symmetry(&b)),
                Err(e) => report.push(Violation::new(ViolationKind::Antipodal, e.to_string())),
            }
            let d = self.t.domain().expect("checked");
            for v in self.t.vertex_ids() {
                if point_location(d, self.t.point(v)) != Ok(Location::Boundary) {
                    continue;
                }
                match self.partner[v.index()] {
                    Some(w) if v < w => {
                        if *lambda.label(w) != lambda.label(v).neg() {
                            report.push(
                                Violation::new(ViolationKind::Antipodal, "λ(-v) ≠ -λ(v)")
                                    .with_vertex(v.0)
                                    .with_vertex(w.0),
                            );
                        }
                    }
                    Some(_) => {}
                    None => report.push(
                        Violation::new(ViolationKind::Antipodal, "boundary vertex without antipode").with_vertex(v.0),
                    ),
                }
            }
        }
        report
    }

    /// First witness in sorted simplex order, without validating.
    pub fn witness(&self, lambda: &LabelFunction) -> Option<Witness> {
        let kind = self.id.witness_kind();
        let mut buf = Vec::new();
        self.search
            .iter()
            .find(|s| {
                buf.clear();
                buf.extend(s.vertices().iter().map(|&v| lambda.label(v).clone()));
                is_witness(kind, &buf, self.codomain)
            })
            .map(|s| Witness {
                kind,
                simplex: s.clone(),
            })
    }
}

fn label_allowed(
    id: TheoremId,
    d: &PolytopeDescriptor,
    x: &[crate::rational::Rational],
    loc: Location,
    tight: &std::collections::BTreeSet<Constraint>,
    l: &Label,
) -> bool {
    match id {
        TheoremId::Sperner => {
            let (i, _) = l.signed_axis().expect("basis label");
            x[i] != zero()
        }
        TheoremId::OctOct => {
            if loc != Location::Boundary {
                return true;
            }
            let (i, s) = l.signed_axis().expect("basis label");
            // x_i ≥ 0 forbids -e_i, x_i ≤ 0 forbids e_i
            signum(&x[i]) == s
        }
        TheoremId::CubCub => tight.iter().all(|c| match c {
            Constraint::Bound { coord, sign } => l.0[*coord] == *sign,
            _ => true,
        }),
        TheoremId::CubOct => {
            let (i, s) = l.signed_axis().expect("basis label");
            !tight.contains(&Constraint::Bound { coord: i, sign: -s })
        }
        TheoremId::OctCub => {
            let neg: Vec<i8> = l.0.iter().map(|x| -x).collect();
            !tight.contains(&Constraint::Facet(neg))
        }
        TheoremId::Tucker | TheoremId::TuckerCub => {
            let _ = d;
            true
        }
    }
}

pub fn validate_label_conditions(
    id: TheoremId,
    t: &Triangulation,
    lambda: &LabelFunction,
) -> Result<ValidationReport, TheoremError> {
    Ok(Checker::new(id, t, lambda.codomain())?.validate(lambda))
}

/// Validates first; `Ok(None)` means no witness exists, which refutes the
/// theorem for this instance.
pub fn find_witness(id: TheoremId, t: &Triangulation, lambda: &LabelFunction) -> Result<Option<Witness>, TheoremError> {
    let checker = Checker::new(id, t, lambda.codomain())?;
    let report = checker.validate(lambda);
    if !report.ok() {
        return Err(TheoremError::HypothesisViolated(report));
    }
    Ok(checker.witness(lambda))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: TheoremId,
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub witness: Option<Witness>,
}

pub fn check_instance(id: TheoremId, t: &Triangulation, lambda: &LabelFunction) -> Result<CheckReport, TheoremError> {
    let checker = Checker::new(id, t, lambda.codomain())?;
    let report = checker.validate(lambda);
    let witness = if report.ok() { checker.witness(lambda) } else { None };
    Ok(CheckReport {
        theorem: id,
        valid: report.ok(),
        violations: report.violations().to_vec(),
        witness,
    })
}

/// Memoized hull oracle keyed by the distinct labels of a simplex.
#[derive(Default)]
pub struct HullOracle {
    memo: Mutex<HashMap<(LabelSetDescriptor, Vec<Label>), bool>>,
}

impl HullOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `hull(labels) ∩ int(P) ≠ ∅` for the codomain polytope `P`.
    pub fn meets_interior(&self, codomain: LabelSetDescriptor, labels: &[Label]) -> bool {
        let mut key: Vec<Label> = labels.to_vec();
        key.sort();
        key.dedup();
        let key = (codomain, key);
        if let Some(&b) = self.memo.lock().expect("oracle lock").get(&key) {
            return b;
        }
        let poly = match codomain.kind {
            LabelKind::CrossExt => PolytopeDescriptor::cross(codomain.dim),
            LabelKind::CubeExt => PolytopeDescriptor::cube(codomain.dim),
            LabelKind::SimplexExt => PolytopeDescriptor::simplex(codomain.dim),
        };
        let pts: Vec<_> = key.1.iter().map(Label::to_point).collect();
        let b = hull_meets_interior(&pts, &poly).expect("label dimensions match");
        self.memo.lock().expect("oracle lock").insert(key, b);
        b
    }
}

/// Compares the combinatorial predicate with the hull oracle on every simplex.
pub fn crosscheck_propositions(t: &Triangulation, lambda: &LabelFunction) -> ValidationReport {
    crosscheck_with(&HullOracle::new(), t, lambda)
}

pub fn crosscheck_with(oracle: &HullOracle, t: &Triangulation, lambda: &LabelFunction) -> ValidationReport {
    let codomain = lambda.codomain();
    let kind = match codomain.kind {
        LabelKind::CrossExt => WitnessKind::ComplementaryEdge,
        LabelKind::CubeExt => WitnessKind::Neutral,
        LabelKind::SimplexExt => {
            return ValidationReport::from_violations(vec![Violation::new(
                ViolationKind::Unsupported,
                "proposition cross-check needs CROSS_EXT or CUBE_EXT labels",
            )])
        }
    };
    if lambda.len() < t.vertex_count() {
        return ValidationReport::from_violations(vec![Violation::new(ViolationKind::Totality, "label function is not total")]);
    }
    let simplices: Vec<&Simplex> = t.simplices().iter().collect();
    let bad: Vec<Violation> = simplices
        .par_iter()
        .filter_map(|s| {
            let labels: Vec<Label> = s.vertices().iter().map(|&v| lambda.label(v).clone()).collect();
            let comb = is_witness(kind, &labels, codomain);
            let geo = oracle.meets_interior(codomain, &labels);
            (comb != geo).then(|| {
                Violation::new(
                    ViolationKind::PropositionMismatch,
                    format!("combinatorial {comb}, hull {geo} for labels {labels:?}"),
                )
                .with_simplex(s.ids())
            })
        })
        .collect();
    ValidationReport::from_violations(bad)
}

/// Outcome of enumerating every valid label function of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveSummary {
    pub theorem: TheoremId,
    pub valid_labellings: u64,
    pub witnesses: u64,
    /// Mixed-radix indices with no witness.
    pub refutations: Vec<u64>,
}

/// `Ok(None)` if the valid-labelling count exceeds `budget`.
pub fn exhaustive_check(
    id: TheoremId,
    t: &Triangulation,
    codomain: LabelSetDescriptor,
    budget: u64,
) -> Result<Option<ExhaustiveSummary>, TheoremError> {
    let checker = Checker::new(id, t, codomain)?;
    let count = checker.valid_count()?;
    if count > budget as u128 {
        return Ok(None);
    }
    let count = count as u64;
    let mut refutations: Vec<u64> = (0..count)
        .into_par_iter()
        .filter(|&i| {
            let lambda = checker.nth_valid(i as u128).expect("free vertices checked");
            checker.witness(&lambda).is_none()
        })
        .collect();
    refutations.sort_unstable();
    Ok(Some(ExhaustiveSummary {
        theorem: id,
        valid_labellings: count,
        witnesses: count - refutations.len() as u64,
        refutations,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cross_standard, freudenthal_cube, grid_simplex, random_labelling};
    use crate::geometry::Point;

    fn lf(t: &Triangulation, cod: LabelSetDescriptor, f: impl Fn(&Point) -> Vec<i8>) -> LabelFunction {
        LabelFunction::new(cod, t.points().iter().map(|p| Label(f(p))).collect()).unwrap()
    }

    fn v(t: &Triangulation, c: &[i64]) -> VertexId {
        t.vertex_at(&Point::from_ints(c)).unwrap()
    }

    #[test]
    fn parse_ids() {
        assert_eq!("tucker".parse::<TheoremId>().unwrap(), TheoremId::Tucker);
        assert_eq!("oct_cub".parse::<TheoremId>().unwrap(), TheoremId::OctCub);
        assert_eq!("TUCKER-CUB".parse::<TheoremId>().unwrap(), TheoremId::TuckerCub);
        assert!("brouwer".parse::<TheoremId>().is_err());
        assert_eq!(serde_json::to_string(&TheoremId::CubOct).unwrap(), "\"CUB_OCT\"");
    }

    #[test]
    fn oct_cub_condition_at_e1() {
        let t = crate::generate::cross_standard(3);
        let cod = LabelSetDescriptor::cube(3);
        let e1 = v(&t, &[1, 0, 0]);
        let lambda = lf(&t, cod, |p| {
            if *p == Point::from_ints(&[1, 0, 0]) {
                vec![-1, 1, 1]
            } else {
                // -sign pattern never equals -v for a tight v: label by the
                // sign of the point with ties broken to +1
                p.0.iter().map(|q| if *q < zero() { -1 } else { 1 }).collect()
            }
        });
        let r = validate_label_conditions(TheoremId::OctCub, &t, &lambda).unwrap();
        assert!(!r.ok());
        assert!(r.violations().iter().all(|x| x.vertices == vec![e1.0]));
    }

    #[test]
    fn cub_cub_forced_coordinate_only() {
        let t = freudenthal_cube(2, 2);
        let c = Checker::new(TheoremId::CubCub, &t, LabelSetDescriptor::cube(2)).unwrap();
        let x = v(&t, &[1, 0]);
        assert!(c.allowed(x).contains(&Label(vec![1, -1])));
        assert!(!c.allowed(x).contains(&Label(vec![-1, -1])));
    }

    #[test]
    fn tucker_antipodality_violation() {
        let t = cross_standard(2);
        let cod = LabelSetDescriptor::cross(2);
        let lambda = lf(&t, cod, |_| vec![1, 0]);
        let r = validate_label_conditions(TheoremId::Tucker, &t, &lambda).unwrap();
        assert!(r.has(ViolationKind::Antipodal));
    }

    #[test]
    fn mismatches_are_errors() {
        let t = cross_standard(2);
        let lambda = lf(&t, LabelSetDescriptor::cross(2), |_| vec![1, 0]);
        assert!(matches!(
            validate_label_conditions(TheoremId::Sperner, &t, &lambda),
            Err(TheoremError::DomainMismatch { .. })
        ));
        assert!(matches!(
            validate_label_conditions(TheoremId::OctCub, &t, &lambda),
            Err(TheoremError::CodomainMismatch { .. })
        ));
        let l3 = lf(&t, LabelSetDescriptor::cross(3), |_| vec![1, 0, 0]);
        assert!(matches!(
            validate_label_conditions(TheoremId::Tucker, &t, &l3),
            Err(TheoremError::CodomainDimension { .. })
        ));
    }

    #[test]
    fn sperner_single_triangle() {
        let t = grid_simplex(2, 1);
        let lambda = lf(&t, LabelSetDescriptor::simplex(2), |p| {
            p.0.iter().map(|q| if *q == zero() { 0 } else { 1 }).collect()
        });
        let w = find_witness(TheoremId::Sperner, &t, &lambda).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::Panchromatic);
        assert_eq!(w.simplex, t.maximal_simplices()[0]);
    }

    #[test]
    fn tucker_on_segment() {
        let t = cross_standard(1);
        let cod = LabelSetDescriptor::cross(1);
        for center in [1i8, -1] {
            let lambda = lf(&t, cod, |p| {
                if p.0[0] == zero() {
                    vec![center]
                } else {
                    vec![if p.0[0] > zero() { 1 } else { -1 }]
                }
            });
            let w = find_witness(TheoremId::Tucker, &t, &lambda).unwrap().unwrap();
            assert_eq!(w.kind, WitnessKind::ComplementaryEdge);
            let other = if center == 1 { v(&t, &[-1]) } else { v(&t, &[1]) };
            assert_eq!(w.simplex, Simplex::new(vec![v(&t, &[0]), other]).unwrap());
        }
    }

    #[test]
    fn oct_cub_neutral_edge() {
        let t = cross_standard(2);
        let cod = LabelSetDescriptor::cube(2);
        let table = [
            ([1, 0], [1, 1]),
            ([0, 1], [-1, 1]),
            ([-1, 0], [-1, -1]),
            ([0, -1], [1, -1]),
            ([0, 0], [1, 1]),
        ];
        let lambda = lf(&t, cod, |p| {
            table
                .iter()
                .find(|(c, _)| Point::from_ints(&c.map(|x| x as i64)) == *p)
                .unwrap()
                .1
                .to_vec()
        });
        assert!(validate_label_conditions(TheoremId::OctCub, &t, &lambda).unwrap().ok());
        let w = find_witness(TheoremId::OctCub, &t, &lambda).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::Neutral);
        let labels: Vec<Label> = w.simplex.vertices().iter().map(|&u| lambda.label(u).clone()).collect();
        assert!(neutral(&labels, 2));
        // the edge {0, -e_1} is neutral too
        let edge = Simplex::new(vec![v(&t, &[0, 0]), v(&t, &[-1, 0])]).unwrap();
        let el: Vec<Label> = edge.vertices().iter().map(|&u| lambda.label(u).clone()).collect();
        assert!(neutral(&el, 2));
    }

    #[test]
    fn exhaustive_counts_on_smallest_generators() {
        let cases = [
            (TheoremId::Sperner, grid_simplex(2, 1), LabelSetDescriptor::simplex(2), 1),
            (TheoremId::OctOct, cross_standard(2), LabelSetDescriptor::cross(2), 4),
            (TheoremId::CubCub, freudenthal_cube(2, 1), LabelSetDescriptor::cube(2), 1),
            (TheoremId::CubOct, freudenthal_cube(2, 1), LabelSetDescriptor::cross(2), 16),
            (TheoremId::OctCub, cross_standard(2), LabelSetDescriptor::cube(2), 64),
            (TheoremId::Tucker, cross_standard(2), LabelSetDescriptor::cross(2), 64),
            (TheoremId::TuckerCub, cross_standard(2), LabelSetDescriptor::cube(2), 64),
        ];
        for (id, t, cod, expected) in cases {
            let s = exhaustive_check(id, &t, cod, 1_000_000).unwrap().unwrap();
            assert_eq!(s.valid_labellings, expected, "{id}");
            assert!(s.refutations.is_empty(), "{id}");
            let c = Checker::new(id, &t, cod).unwrap();
            for i in 0..expected {
                assert!(c.validate(&c.nth_valid(i as u128).unwrap()).ok());
            }
        }
    }

    #[test]
    fn random_labellings_validate_and_are_deterministic() {
        let t = cross_standard(2);
        let a = random_labelling(TheoremId::Tucker, &t, 2, 7).unwrap();
        let b = random_labelling(TheoremId::Tucker, &t, 2, 7).unwrap();
        assert_eq!(a, b);
        assert!(validate_label_conditions(TheoremId::Tucker, &t, &a).unwrap().ok());
        let g = grid_simplex(2, 2);
        let s = random_labelling(TheoremId::Sperner, &g, 2, 1).unwrap();
        assert!(validate_label_conditions(TheoremId::Sperner, &g, &s).unwrap().ok());
    }

    #[test]
    fn crosscheck_small() {
        let t = cross_standard(2);
        for seed in 0..20 {
            let l = random_labelling(TheoremId::OctOct, &t, 2, seed).unwrap();
            assert!(crosscheck_propositions(&t, &l).ok());
            let c = random_labelling(TheoremId::TuckerCub, &t, 2, seed).unwrap();
            assert!(crosscheck_propositions(&t, &c).ok());
        }
        let seg = crate::generate::cross_standard(1);
        let l = LabelFunction::new(
            LabelSetDescriptor::cross(1),
            vec![Label(vec![1]), Label(vec![-1]), Label(vec![1])],
        )
        .unwrap();
        let r = crosscheck_propositions(&seg, &l);
        assert!(r.ok());
        let oracle = HullOracle::new();
        assert!(oracle.meets_interior(LabelSetDescriptor::cross(1), &[Label(vec![1]), Label(vec![-1])]));
    }
}
