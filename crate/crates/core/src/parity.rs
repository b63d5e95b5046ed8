//! Generalized Fan parity framework: forbidden sets, partition rules, the
//! `M^i` chain and its simplex counts on hemisphere-aligned triangulations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{boundary_complex, Simplex, Triangulation};
use crate::generate::HemisphereChain;
use crate::labels::{
    check_strict_symmetry, complementary, enumerate_labellings, neutral, Label, LabelError,
    LabelFunction, LabelKind, LabelSetDescriptor, Labelling,
};
use crate::report::{ValidationReport, Violation, ViolationKind};
use crate::theorems::{Checker, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParityError {
    #[error("parity framework needs CROSS_EXT or CUBE_EXT labels")]
    UnsupportedLabels,
    #[error("partition rule is undefined on {0:?}")]
    RuleUndefined(Labelling),
    #[error("partition rule is not antisymmetric on {0:?}")]
    NotAntisymmetric(Labelling),
    #[error("set is not closed under negation at {0:?}")]
    NotSymmetric(Labelling),
    #[error("labelling sizes do not match")]
    SizeMismatch,
    #[error("forbidden set fails strict symmetry")]
    ForbiddenSetInvalid(ValidationReport),
    #[error("label function is not antipodal on the boundary")]
    NotAntipodal(ValidationReport),
    #[error("label function codomain {got} differs from {expected}")]
    Codomain { expected: LabelSetDescriptor, got: LabelSetDescriptor },
    #[error(transparent)]
    Label(#[from] LabelError),
}

type Predicate = Arc<dyn Fn(&Labelling) -> bool + Send + Sync>;
type SignFn = Arc<dyn Fn(&Labelling) -> Option<Sign> + Send + Sync>;

#[derive(Clone)]
pub enum ForbiddenSet {
    Complementary,
    Neutral,
    Custom(Predicate),
}

impl fmt::Debug for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForbiddenSet::Complementary => "COMPLEMENTARY",
            ForbiddenSet::Neutral => "NEUTRAL",
            ForbiddenSet::Custom(_) => "CUSTOM",
        })
    }
}

impl ForbiddenSet {
    pub fn empty() -> Self {
        ForbiddenSet::Custom(Arc::new(|_| false))
    }

    pub fn contains(&self, l: &Labelling) -> bool {
        match self {
            ForbiddenSet::Complementary => complementary(l.labels()),
            ForbiddenSet::Neutral => neutral(l.labels(), l.set().dim),
            ForbiddenSet::Custom(p) => p(l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn from_i8(s: i8) -> Sign {
        if s > 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleKind {
    TuckerRule,
    CubicalRule,
}

#[derive(Clone)]
pub enum PartitionRule {
    Tucker,
    Cubical,
    Custom(SignFn),
}

impl fmt::Debug for PartitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionRule::Tucker => "TUCKER_RULE",
            PartitionRule::Cubical => "CUBICAL_RULE",
            PartitionRule::Custom(_) => "CUSTOM",
        })
    }
}

pub fn builtin_rule(kind: RuleKind) -> PartitionRule {
    match kind {
        RuleKind::TuckerRule => PartitionRule::Tucker,
        RuleKind::CubicalRule => PartitionRule::Cubical,
    }
}

/// Smallest 0-based coordinate on which all labels agree.
pub fn phi(l: &Labelling) -> Option<usize> {
    let labels = l.labels();
    (0..l.set().dim).find(|&c| labels.iter().all(|x| x.0[c] == labels[0].0[c]))
}

impl PartitionRule {
    pub fn sign(&self, l: &Labelling) -> Result<Sign, ParityError> {
        let undefined = || ParityError::RuleUndefined(l.clone());
        match self {
            PartitionRule::Tucker => {
                if l.set().kind != LabelKind::CrossExt {
                    return Err(undefined());
                }
                let mut best: Option<(usize, i8)> = None;
                for lab in l.labels() {
                    let (axis, s) = lab.signed_axis().ok_or_else(undefined)?;
                    match best {
                        Some((a, bs)) if a == axis && bs != s => return Err(undefined()),
                        Some((a, _)) if a <= axis => {}
                        _ => best = Some((axis, s)),
                    }
                }
                best.map(|(_, s)| Sign::from_i8(s)).ok_or_else(undefined)
            }
            PartitionRule::Cubical => {
                if l.set().kind != LabelKind::CubeExt || l.is_empty() {
                    return Err(undefined());
                }
                let c = phi(l).ok_or_else(undefined)?;
                Ok(Sign::from_i8(l.labels()[0].0[c]))
            }
            PartitionRule::Custom(f) => f(l).ok_or_else(undefined),
        }
    }
}

/// `L^i \ F` is strictly symmetric for every `i ≤ n`, and `F ∩ L^0 = ∅`.
pub fn verify_strict_symmetry(f: &ForbiddenSet, ls: LabelSetDescriptor, n: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    if !ls.has_negation() {
        report.push(Violation::new(ViolationKind::Unsupported, "simplex labels have no negation"));
        return report;
    }
    for i in 0..=n {
        let allowed: Vec<Labelling> = enumerate_labellings(ls, i).into_iter().filter(|l| !f.contains(l)).collect();
        if i == 0 && allowed.len() != ls.cardinality() {
            report.push(Violation::new(ViolationKind::StrictSymmetry, "forbidden set meets L^0"));
        }
        let set: BTreeSet<&Labelling> = allowed.iter().collect();
        for l in &allowed {
            let o = l.opposite().expect("negation exists");
            if o == *l {
                report.push(Violation::new(
                    ViolationKind::StrictSymmetry,
                    format!("level {i}: {l:?} is its own opposite"),
                ));
            } else if !set.contains(&o) {
                report.push(Violation::new(
                    ViolationKind::StrictSymmetry,
                    format!("level {i}: opposite of {l:?} is forbidden"),
                ));
            }
        }
    }
    report
}

/// Number of positions whose removal leaves a labelling in `m`; equal labels
/// count once per position.
pub fn face_degree(l: &Labelling, m: &BTreeSet<Labelling>) -> Result<usize, ParityError> {
    if l.is_empty() || m.iter().any(|x| x.len() + 1 != l.len()) {
        return Err(ParityError::SizeMismatch);
    }
    Ok((0..l.len()).filter(|&p| m.contains(&l.without(p))).count())
}

/// Splits a strictly symmetric set by the rule, checking antisymmetry.
pub fn partition(
    m: &BTreeSet<Labelling>,
    rule: &PartitionRule,
) -> Result<(BTreeSet<Labelling>, BTreeSet<Labelling>), ParityError> {
    let mut plus = BTreeSet::new();
    let mut minus = BTreeSet::new();
    for l in m {
        let s = rule.sign(l)?;
        let o = l.opposite()?;
        if o == *l || !m.contains(&o) {
            return Err(ParityError::NotSymmetric(l.clone()));
        }
        if rule.sign(&o)? != s.flip() {
            return Err(ParityError::NotAntisymmetric(l.clone()));
        }
        match s {
            Sign::Plus => plus.insert(l.clone()),
            Sign::Minus => minus.insert(l.clone()),
        };
    }
    Ok((plus, minus))
}

/// `{ℓ ∈ L^i \ F : face_degree(ℓ, M^{i-1}_+) odd}`.
pub fn next_m(
    m_plus_prev: &BTreeSet<Labelling>,
    ls: LabelSetDescriptor,
    f: &ForbiddenSet,
    i: usize,
) -> BTreeSet<Labelling> {
    if m_plus_prev.is_empty() {
        return BTreeSet::new();
    }
    enumerate_labellings(ls, i)
        .into_par_iter()
        .filter(|l| !f.contains(l) && face_degree(l, m_plus_prev).map_or(false, |d| d % 2 == 1))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Every `ℓ ∈ L^i \ F` has an even number of faces in `M^{i-1}`.
pub fn even_degree_check(
    ls: LabelSetDescriptor,
    f: &ForbiddenSet,
    i: usize,
    m_prev: &BTreeSet<Labelling>,
) -> ValidationReport {
    let bad: Vec<Violation> = enumerate_labellings(ls, i)
        .into_par_iter()
        .filter(|l| !f.contains(l))
        .filter_map(|l| match face_degree(&l, m_prev) {
            Ok(d) if d % 2 == 0 => None,
            Ok(d) => Some(Violation::new(ViolationKind::OddDegree, format!("{l:?} has degree {d}"))),
            Err(e) => Some(Violation::new(ViolationKind::OddDegree, e.to_string())),
        })
        .collect();
    ValidationReport::from_violations(bad)
}

/// Cross labelling from signed 1-based indices (`-2` is `-e_2`).
pub fn signed_labelling(m: usize, idx: &[i64]) -> Labelling {
    let labels = idx
        .iter()
        .map(|&k| Label::axis(m, k.unsigned_abs() as usize - 1, k.signum() as i8))
        .collect();
    Labelling::new(LabelSetDescriptor::cross(m), labels).expect("indices within 1..=m")
}

fn increasing_tuples(len: usize, m: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fn rec(start: i64, m: i64, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for k in start..=m {
            cur.push(k);
            rec(k + 1, m, len, cur, out);
            cur.pop();
        }
    }
    rec(1, m as i64, len, &mut Vec::new(), &mut out);
    out
}

fn alternating(len: usize, m: usize, first: i64) -> BTreeSet<Labelling> {
    increasing_tuples(len, m)
        .into_iter()
        .map(|ks| {
            let idx: Vec<i64> = ks
                .iter()
                .enumerate()
                .map(|(j, &k)| if j % 2 == 0 { first * k } else { -first * k })
                .collect();
            signed_labelling(m, &idx)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub m_plus_prev: BTreeSet<Labelling>,
    pub m_minus_prev: BTreeSet<Labelling>,
    pub m_next: BTreeSet<Labelling>,
}

/// Alternating-sign families for the Tucker rule, indices bounded by `m`:
/// `M^{i-1}_± = {±k_1, ∓k_2, …}` with `i` indices and `M^i` with `i + 1`.
pub fn closed_form_tucker_m(i: usize, m: usize) -> ClosedForm {
    assert!(i >= 1, "level must be at least 1");
    let mut m_next = alternating(i + 1, m, 1);
    m_next.extend(alternating(i + 1, m, -1));
    ClosedForm {
        m_plus_prev: alternating(i, m, 1),
        m_minus_prev: alternating(i, m, -1),
        m_next,
    }
}

/// One level of the label-side chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MLevel {
    pub m: BTreeSet<Labelling>,
    pub plus: BTreeSet<Labelling>,
    pub minus: BTreeSet<Labelling>,
}

/// `M^0 … M^n` with partitions; depends only on labels, `F` and the rule.
#[derive(Clone, Debug)]
pub struct MChain {
    pub labels: LabelSetDescriptor,
    pub levels: Vec<MLevel>,
}

impl MChain {
    pub fn compute(
        ls: LabelSetDescriptor,
        f: &ForbiddenSet,
        rule: &PartitionRule,
        n: usize,
    ) -> Result<MChain, ParityError> {
        if !ls.has_negation() {
            return Err(ParityError::UnsupportedLabels);
        }
        let mut levels = Vec::with_capacity(n + 1);
        let mut m: BTreeSet<Labelling> = enumerate_labellings(ls, 0).into_iter().collect();
        for i in 0..=n {
            let (plus, minus) = partition(&m, rule)?;
            let next = if i < n { Some(next_m(&plus, ls, f, i + 1)) } else { None };
            levels.push(MLevel { m, plus, minus });
            match next {
                Some(x) => m = x,
                None => break,
            }
        }
        Ok(MChain { labels: ls, levels })
    }

    pub fn n(&self) -> usize {
        self.levels.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub level: usize,
    pub m_size: usize,
    pub plus_size: usize,
    pub minus_size: usize,
    pub simplex_count: usize,
    pub odd: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<Vec<i8>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSequence {
    pub levels: Vec<MLevel>,
    pub counts: Vec<usize>,
}

impl MSequence {
    pub fn all_odd(&self) -> bool {
        self.counts.iter().all(|c| c % 2 == 1)
    }

    pub fn trace(&self, listing_limit: usize) -> Vec<LevelTrace> {
        self.levels
            .iter()
            .zip(&self.counts)
            .enumerate()
            .map(|(i, (lv, &c))| LevelTrace {
                level: i,
                m_size: lv.m.len(),
                plus_size: lv.plus.len(),
                minus_size: lv.minus.len(),
                simplex_count: c,
                odd: c % 2 == 1,
                members: (lv.m.len() <= listing_limit)
                    .then(|| lv.m.iter().map(|l| l.labels().iter().map(|x| x.0.clone()).collect()).collect()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameworkOutcome {
    Completed(MSequence),
    /// A simplex carries a forbidden labelling.
    Aborted { simplex: Simplex, labelling: Labelling },
}

/// `λ(-v) = -λ(v)` on the geometric boundary of the top level.
pub fn check_boundary_antipodal(t: &Triangulation, lambda: &LabelFunction) -> ValidationReport {
    let mut report = ValidationReport::new();
    let boundary = match boundary_complex(t) {
        Ok(b) => b,
        Err(e) => {
            report.push(Violation::new(ViolationKind::Antipodal, e.to_string()));
            return report;
        }
    };
    for s in boundary.simplices_of_dim(0) {
        let v = s.vertices()[0];
        match t.antipode(v) {
            Some(w) if *lambda.label(w) == lambda.label(v).neg() => {}
            Some(w) => report.push(
                Violation::new(ViolationKind::Antipodal, "λ(-v) ≠ -λ(v)")
                    .with_vertex(v.0)
                    .with_vertex(w.0),
            ),
            None => report.push(Violation::new(ViolationKind::Antipodal, "no antipode").with_vertex(v.0)),
        }
    }
    report
}

/// Full run; recomputes the label chain.
pub fn run_framework(
    chain: &HemisphereChain,
    lambda: &LabelFunction,
    f: &ForbiddenSet,
    rule: &PartitionRule,
) -> Result<FrameworkOutcome, ParityError> {
    let ls = lambda.codomain();
    let sym = verify_strict_symmetry(f, ls, chain.n());
    if !sym.ok() {
        return Err(ParityError::ForbiddenSetInvalid(sym));
    }
    let m = MChain::compute(ls, f, rule, chain.n())?;
    run_with_chain(chain, lambda, f, &m)
}

/// Run against a precomputed label chain (valid for every `λ` with the same
/// codomain, `F` and rule).
pub fn run_with_chain(
    chain: &HemisphereChain,
    lambda: &LabelFunction,
    f: &ForbiddenSet,
    mchain: &MChain,
) -> Result<FrameworkOutcome, ParityError> {
    if lambda.codomain() != mchain.labels {
        return Err(ParityError::Codomain {
            expected: mchain.labels,
            got: lambda.codomain(),
        });
    }
    let top = chain.top();
    let anti = check_boundary_antipodal(top, lambda);
    if !anti.ok() {
        return Err(ParityError::NotAntipodal(anti));
    }
    for s in top.simplices() {
        let l = lambda.labelling_of(s);
        if f.contains(&l) {
            return Ok(FrameworkOutcome::Aborted {
                simplex: s.clone(),
                labelling: l,
            });
        }
    }
    let counts = (0..=chain.n())
        .map(|i| {
            let level = &mchain.levels[i].m;
            chain
                .level(i)
                .simplices_of_dim(i)
                .filter(|s| level.contains(&lambda.labelling_of(s)))
                .count()
        })
        .collect();
    Ok(FrameworkOutcome::Completed(MSequence {
        levels: mchain.levels.clone(),
        counts,
    }))
}

/// Every member of `M^i` has `Φ ≥ i + 1` (1-based), i.e. no agreement before
/// 0-based coordinate `i`.
pub fn cubical_phi_bound(mchain: &MChain) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (i, lv) in mchain.levels.iter().enumerate() {
        for l in &lv.m {
            if let Some(c) = phi(l) {
                if c < i {
                    report.push(Violation::new(
                        ViolationKind::PhiBound,
                        format!("level {i}: Φ({l:?}) = {}", c + 1),
                    ));
                }
            }
        }
    }
    report
}

/// Each `M^i` is closed under negation with no self-opposite member.
pub fn chain_strictly_symmetric(mchain: &MChain) -> bool {
    mchain
        .levels
        .iter()
        .all(|lv| check_strict_symmetry(&lv.m).unwrap_or(false))
}

/// Antipodal label functions on `T` with the given codomain, in mixed-radix
/// order, keeping the first that has no forbidden simplex. Scans at most
/// `limit` candidates.
pub fn search_forbidden_free(
    t: &Triangulation,
    ls: LabelSetDescriptor,
    f: &ForbiddenSet,
    limit: u128,
) -> Option<LabelFunction> {
    let id = match ls.kind {
        LabelKind::CrossExt => TheoremId::Tucker,
        LabelKind::CubeExt => TheoremId::TuckerCub,
        LabelKind::SimplexExt => return None,
    };
    let checker = Checker::for_sampling(id, t, ls).ok()?;
    let total = checker.valid_count().ok()?.min(limit);
    (0..total).find_map(|i| {
        let lambda = checker.nth_valid(i).ok()?;
        t.simplices()
            .iter()
            .all(|s| !f.contains(&lambda.labelling_of(s)))
            .then_some(lambda)
    })
}

/// Seeded rejection sampling of an antipodal label function with no
/// forbidden simplex; `None` after `attempts` misses.
pub fn sample_forbidden_free(
    t: &Triangulation,
    ls: LabelSetDescriptor,
    f: &ForbiddenSet,
    seed: u64,
    attempts: usize,
) -> Option<LabelFunction> {
    use rand::SeedableRng;
    let id = match ls.kind {
        LabelKind::CrossExt => TheoremId::Tucker,
        LabelKind::CubeExt => TheoremId::TuckerCub,
        LabelKind::SimplexExt => return None,
    };
    let checker = Checker::for_sampling(id, t, ls).ok()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..attempts).find_map(|_| {
        let lambda = checker.sample(&mut rng);
        t.simplices()
            .iter()
            .all(|s| !f.contains(&lambda.labelling_of(s)))
            .then_some(lambda)
    })
}
