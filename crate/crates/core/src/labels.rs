//! Label sets (extreme points of a simplex, cross-polytope or cube), labellings
//! as multisets, and label functions on triangulations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, Triangulation, VertexId};
use crate::geometry::{sign_vectors, Point};
use crate::rational::int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelError {
    #[error("label dimension must be at least 1")]
    ZeroDimension,
    #[error("{0:?} is not an extreme point of {1}")]
    NotExtremePoint(Vec<i8>, LabelSetDescriptor),
    #[error("simplex labels have no negation")]
    NoNegation,
    #[error("operation needs {expected} labels, got {got}")]
    WrongKind { expected: LabelKind, got: LabelKind },
    #[error("labels come from different label sets")]
    MixedCodomain,
    #[error("vertex {0} has no label")]
    Unlabelled(VertexId),
    #[error("label key {0:?} is not a vertex id")]
    BadKey(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LabelKind {
    SimplexExt,
    CrossExt,
    CubeExt,
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelKind::SimplexExt => "SIMPLEX_EXT",
            LabelKind::CrossExt => "CROSS_EXT",
            LabelKind::CubeExt => "CUBE_EXT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelSetDescriptor {
    pub kind: LabelKind,
    pub dim: usize,
}

impl fmt::Display for LabelSetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.dim)
    }
}

/// `cross:3`, `cube:2`, `simplex:2`.
impl std::str::FromStr for LabelSetDescriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, dim) = s.trim().split_once(':').ok_or_else(|| format!("expected KIND:DIM, got {s:?}"))?;
        let kind = match kind.to_ascii_lowercase().as_str() {
            "cross" | "cross_ext" => LabelKind::CrossExt,
            "cube" | "cube_ext" => LabelKind::CubeExt,
            "simplex" | "simplex_ext" => LabelKind::SimplexExt,
            other => return Err(format!("unknown label family {other:?}")),
        };
        let dim: usize = dim.parse().map_err(|_| format!("bad dimension in {s:?}"))?;
        Self::new(kind, dim).map_err(|e| e.to_string())
    }
}

impl LabelSetDescriptor {
    pub fn new(kind: LabelKind, dim: usize) -> Result<Self, LabelError> {
        if dim == 0 {
            return Err(LabelError::ZeroDimension);
        }
        Ok(LabelSetDescriptor { kind, dim })
    }

    pub fn simplex(m: usize) -> Self {
        Self::new(LabelKind::SimplexExt, m).expect("m >= 1")
    }

    pub fn cross(m: usize) -> Self {
        Self::new(LabelKind::CrossExt, m).expect("m >= 1")
    }

    pub fn cube(m: usize) -> Self {
        Self::new(LabelKind::CubeExt, m).expect("m >= 1")
    }

    /// Length of label vectors: `m + 1` for simplex labels, else `m`.
    pub fn vector_len(&self) -> usize {
        match self.kind {
            LabelKind::SimplexExt => self.dim + 1,
            _ => self.dim,
        }
    }

    pub fn cardinality(&self) -> usize {
        match self.kind {
            LabelKind::SimplexExt => self.dim + 1,
            LabelKind::CrossExt => 2 * self.dim,
            LabelKind::CubeExt => 1 << self.dim,
        }
    }

    pub fn has_negation(&self) -> bool {
        self.kind != LabelKind::SimplexExt
    }

    pub fn contains(&self, l: &Label) -> bool {
        if l.0.len() != self.vector_len() {
            return false;
        }
        match self.kind {
            LabelKind::SimplexExt => {
                l.0.iter().all(|&x| x == 0 || x == 1) && l.0.iter().filter(|&&x| x == 1).count() == 1
            }
            LabelKind::CrossExt => {
                l.0.iter().all(|&x| (-1..=1).contains(&x)) && l.0.iter().filter(|&&x| x != 0).count() == 1
            }
            LabelKind::CubeExt => l.0.iter().all(|&x| x == 1 || x == -1),
        }
    }

    pub fn label(&self, v: Vec<i8>) -> Result<Label, LabelError> {
        let l = Label(v);
        if self.contains(&l) {
            Ok(l)
        } else {
            Err(LabelError::NotExtremePoint(l.0, *self))
        }
    }
}

/// An extreme point of a label set, as an integer vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub Vec<i8>);

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Label {
    /// `sign · e_axis` in `R^len` (axis is 0-based).
    pub fn axis(len: usize, axis: usize, sign: i8) -> Label {
        let mut v = vec![0; len];
        v[axis] = sign;
        Label(v)
    }

    pub fn neg(&self) -> Label {
        Label(self.0.iter().map(|x| -x).collect())
    }

    /// For a signed basis vector: `(axis, sign)`.
    pub fn signed_axis(&self) -> Option<(usize, i8)> {
        let mut nz = self.0.iter().enumerate().filter(|(_, &x)| x != 0);
        let (i, &s) = nz.next()?;
        nz.next().is_none().then_some((i, s))
    }

    /// Signed 1-based index: `+e_i ↦ i`, `-e_i ↦ -i`.
    pub fn signed_index(&self) -> Option<i64> {
        self.signed_axis().map(|(i, s)| (i as i64 + 1) * s as i64)
    }

    pub fn to_point(&self) -> Point {
        Point(self.0.iter().map(|&x| int(x as i64)).collect())
    }
}

/// Full list of extreme points in the canonical order:
/// simplex `e_1..e_{m+1}`; cross `e_1, -e_1, e_2, -e_2, …`; cube sign vectors
/// in lexicographic order with `+1` before `-1`.
pub fn ext_points(ls: LabelSetDescriptor) -> Vec<Label> {
    let m = ls.dim;
    match ls.kind {
        LabelKind::SimplexExt => (0..=m).map(|i| Label::axis(m + 1, i, 1)).collect(),
        LabelKind::CrossExt => (0..m)
            .flat_map(|i| [Label::axis(m, i, 1), Label::axis(m, i, -1)])
            .collect(),
        LabelKind::CubeExt => sign_vectors(m).into_iter().map(Label).collect(),
    }
}

/// Multiset of labels from one label set, held sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelling {
    set: LabelSetDescriptor,
    labels: Vec<Label>,
}

impl fmt::Debug for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl Labelling {
    pub fn new(set: LabelSetDescriptor, mut labels: Vec<Label>) -> Result<Self, LabelError> {
        if let Some(bad) = labels.iter().find(|l| !set.contains(l)) {
            return Err(LabelError::NotExtremePoint(bad.0.clone(), set));
        }
        labels.sort();
        Ok(Labelling { set, labels })
    }

    pub fn from_vecs(set: LabelSetDescriptor, vecs: &[&[i8]]) -> Result<Self, LabelError> {
        Self::new(set, vecs.iter().map(|v| Label(v.to_vec())).collect())
    }

    pub fn set(&self) -> LabelSetDescriptor {
        self.set
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Index `i` of an `i`-labelling (size minus one).
    pub fn order(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn opposite(&self) -> Result<Labelling, LabelError> {
        if !self.set.has_negation() {
            return Err(LabelError::NoNegation);
        }
        let mut labels: Vec<Label> = self.labels.iter().map(Label::neg).collect();
        labels.sort();
        Ok(Labelling { set: self.set, labels })
    }

    /// Drops the label at `pos`.
    pub fn without(&self, pos: usize) -> Labelling {
        let mut labels = self.labels.clone();
        labels.remove(pos);
        Labelling { set: self.set, labels }
    }

    pub fn with(&self, l: Label) -> Labelling {
        let mut labels = self.labels.clone();
        let at = labels.partition_point(|x| *x < l);
        labels.insert(at, l);
        Labelling { set: self.set, labels }
    }

    pub fn distinct(&self) -> Labelling {
        let mut labels = self.labels.clone();
        labels.dedup();
        Labelling { set: self.set, labels }
    }

    pub fn points(&self) -> Vec<Point> {
        self.labels.iter().map(Label::to_point).collect()
    }

    fn require(&self, kind: LabelKind) -> Result<(), LabelError> {
        if self.set.kind == kind {
            Ok(())
        } else {
            Err(LabelError::WrongKind {
                expected: kind,
                got: self.set.kind,
            })
        }
    }

    pub fn has_complementary_pair(&self) -> Result<bool, LabelError> {
        self.require(LabelKind::CrossExt)?;
        Ok(complementary(&self.labels))
    }

    pub fn is_neutral(&self) -> Result<bool, LabelError> {
        self.require(LabelKind::CubeExt)?;
        Ok(neutral(&self.labels, self.set.dim))
    }
}

/// Some label occurs together with its negation.
pub fn complementary(labels: &[Label]) -> bool {
    labels
        .iter()
        .enumerate()
        .any(|(i, a)| labels[i + 1..].iter().any(|b| b.0.iter().zip(&a.0).all(|(x, y)| *x == -*y)))
}

/// Every coordinate sees both signs.
pub fn neutral(labels: &[Label], m: usize) -> bool {
    (0..m).all(|c| labels.iter().any(|l| l.0[c] > 0) && labels.iter().any(|l| l.0[c] < 0))
}

/// All multisets of size `i + 1`, in lexicographic order of their sorted
/// index sequences over [`ext_points`].
pub fn enumerate_labellings(ls: LabelSetDescriptor, i: usize) -> Vec<Labelling> {
    let ext = ext_points(ls);
    let k = i + 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    if ext.is_empty() {
        return out;
    }
    loop {
        out.push(Labelling::new(ls, idx.iter().map(|&j| ext[j].clone()).collect()).expect("ext point"));
        // next nondecreasing sequence
        let mut p = k;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] + 1 < ext.len() {
                let v = idx[p] + 1;
                for q in idx[p..].iter_mut() {
                    *q = v;
                }
                break;
            }
        }
    }
}

/// `S = -S` and no element is its own opposite.
pub fn check_strict_symmetry<'a>(s: impl IntoIterator<Item = &'a Labelling>) -> Result<bool, LabelError> {
    let set: BTreeSet<&Labelling> = s.into_iter().collect();
    for l in &set {
        let o = l.opposite()?;
        if o == **l || !set.contains(&o) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C(n, k)` for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// Total assignment `V(T) -> L`, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelFunction {
    codomain: LabelSetDescriptor,
    labels: Vec<Label>,
}

impl LabelFunction {
    pub fn new(codomain: LabelSetDescriptor, labels: Vec<Label>) -> Result<Self, LabelError> {
        if let Some(bad) = labels.iter().find(|l| !codomain.contains(l)) {
            return Err(LabelError::NotExtremePoint(bad.0.clone(), codomain));
        }
        Ok(LabelFunction { codomain, labels })
    }

    pub fn codomain(&self) -> LabelSetDescriptor {
        self.codomain
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<&Label> {
        self.labels.get(v.index())
    }

    /// Panics on an unlabelled vertex; use [`LabelFunction::check_total`] first.
    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn check_total(&self, t: &Triangulation) -> Result<(), LabelError> {
        match t.vertex_ids().find(|v| v.index() >= self.labels.len()) {
            Some(v) => Err(LabelError::Unlabelled(v)),
            None => Ok(()),
        }
    }

    pub fn labelling_of(&self, s: &Simplex) -> Labelling {
        let mut labels: Vec<Label> = s.vertices().iter().map(|&v| self.label(v).clone()).collect();
        labels.sort();
        Labelling {
            set: self.codomain,
            labels,
        }
    }

    /// Copies labels of the first `self.len()` vertices and appends `extra`.
    pub fn extended(&self, extra: Vec<Label>) -> Result<LabelFunction, LabelError> {
        let mut labels = self.labels.clone();
        labels.extend(extra);
        LabelFunction::new(self.codomain, labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelFunctionDoc {
    pub codomain: LabelSetDescriptor,
    pub labels: BTreeMap<String, Vec<i8>>,
}

impl LabelFunctionDoc {
    pub fn from_function(f: &LabelFunction) -> Self {
        LabelFunctionDoc {
            codomain: f.codomain,
            labels: f
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| (i.to_string(), l.0.clone()))
                .collect(),
        }
    }

    pub fn into_function(self) -> Result<LabelFunction, LabelError> {
        let mut by_id = BTreeMap::new();
        for (k, v) in self.labels {
            let id: u32 = k.parse().map_err(|_| LabelError::BadKey(k.clone()))?;
            by_id.insert(id, Label(v));
        }
        let mut labels = Vec::with_capacity(by_id.len());
        for (expected, (id, l)) in by_id.into_iter().enumerate() {
            if id as usize != expected {
                return Err(LabelError::Unlabelled(VertexId(expected as u32)));
            }
            labels.push(l);
        }
        LabelFunction::new(self.codomain, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross(m: usize, v: &[&[i8]]) -> Labelling {
        Labelling::from_vecs(LabelSetDescriptor::cross(m), v).unwrap()
    }

    fn cube(m: usize, v: &[&[i8]]) -> Labelling {
        Labelling::from_vecs(LabelSetDescriptor::cube(m), v).unwrap()
    }

    #[test]
    fn ext_point_lists() {
        let c = ext_points(LabelSetDescriptor::cross(2));
        assert_eq!(
            c,
            vec![
                Label(vec![1, 0]),
                Label(vec![-1, 0]),
                Label(vec![0, 1]),
                Label(vec![0, -1])
            ]
        );
        let q = ext_points(LabelSetDescriptor::cube(3));
        assert_eq!(q.len(), 8);
        assert_eq!(q[0], Label(vec![1, 1, 1]));
        assert_eq!(q[7], Label(vec![-1, -1, -1]));
        let s = ext_points(LabelSetDescriptor::simplex(2));
        assert_eq!(s, vec![Label(vec![1, 0, 0]), Label(vec![0, 1, 0]), Label(vec![0, 0, 1])]);
        for ls in [LabelSetDescriptor::simplex(3), LabelSetDescriptor::cross(3), LabelSetDescriptor::cube(3)] {
            assert_eq!(ext_points(ls).len(), ls.cardinality());
            assert!(ext_points(ls).iter().all(|l| ls.contains(l)));
        }
    }

    #[test]
    fn opposites() {
        assert_eq!(Label(vec![1, 0]).neg(), Label(vec![-1, 0]));
        let pm = cross(1, &[&[1], &[-1]]);
        assert_eq!(pm.opposite().unwrap(), pm);
        let a = cube(2, &[&[1, 1], &[1, -1]]);
        assert_eq!(a.opposite().unwrap(), cube(2, &[&[-1, -1], &[-1, 1]]));
        let s = Labelling::from_vecs(LabelSetDescriptor::simplex(1), &[&[1, 0]]).unwrap();
        assert_eq!(s.opposite(), Err(LabelError::NoNegation));
    }

    #[test]
    fn complementary_pairs() {
        assert!(cross(3, &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0]]).has_complementary_pair().unwrap());
        assert!(!cross(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).has_complementary_pair().unwrap());
        assert!(!cross(3, &[&[1, 0, 0], &[1, 0, 0]]).has_complementary_pair().unwrap());
        assert!(cube(1, &[&[1]]).has_complementary_pair().is_err());
    }

    #[test]
    fn neutrality() {
        assert!(cube(2, &[&[1, 1], &[-1, -1]]).is_neutral().unwrap());
        assert!(cube(3, &[&[1, 1, -1], &[1, -1, 1], &[-1, 1, 1], &[1, 1, 1]]).is_neutral().unwrap());
        assert!(!cube(2, &[&[1, 1], &[1, -1]]).is_neutral().unwrap());
        assert!(cross(1, &[&[1]]).is_neutral().is_err());
    }

    #[test]
    fn enumeration_counts() {
        let l = enumerate_labellings(LabelSetDescriptor::cross(1), 1);
        assert_eq!(l, vec![cross(1, &[&[1], &[1]]), cross(1, &[&[1], &[-1]]), cross(1, &[&[-1], &[-1]])]);
        assert_eq!(enumerate_labellings(LabelSetDescriptor::cross(2), 0).len(), 4);
        assert_eq!(enumerate_labellings(LabelSetDescriptor::cube(2), 1).len(), 10);
        for (ls, i) in [(LabelSetDescriptor::cube(3), 3), (LabelSetDescriptor::cross(3), 2)] {
            let all = enumerate_labellings(ls, i);
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert_eq!(all.len() as u64, binomial((ls.cardinality() + i) as u64, (i + 1) as u64));
        }
    }

    #[test]
    fn strict_symmetry_examples() {
        let l1 = enumerate_labellings(LabelSetDescriptor::cross(1), 1);
        assert!(!check_strict_symmetry(&l1).unwrap());
        let rest: Vec<_> = l1.into_iter().filter(|l| !l.has_complementary_pair().unwrap()).collect();
        assert_eq!(rest.len(), 2);
        assert!(check_strict_symmetry(&rest).unwrap());
        assert!(check_strict_symmetry(std::iter::empty()).unwrap());
    }

    #[test]
    fn label_function_json() {
        let f = LabelFunction::new(
            LabelSetDescriptor::cross(2),
            vec![Label(vec![1, 0]), Label(vec![0, -1])],
        )
        .unwrap();
        let doc = LabelFunctionDoc::from_function(&f);
        let s = serde_json::to_string(&doc).unwrap();
        assert_eq!(s, r#"{"codomain":{"kind":"CROSS_EXT","dim":2},"labels":{"0":[1,0],"1":[0,-1]}}"#);
        let back: LabelFunctionDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(back.into_function().unwrap(), f);
        assert!(LabelFunction::new(LabelSetDescriptor::cross(2), vec![Label(vec![1, 1])]).is_err());
    }

    #[test]
    fn signed_index() {
        assert_eq!(Label(vec![0, -1, 0]).signed_index(), Some(-2));
        assert_eq!(Label(vec![1, 1]).signed_index(), None);
    }
}
