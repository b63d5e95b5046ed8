//! Geometric simplicial complexes: construction, validity checking,
//! boundary extraction and antipodal symmetry.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    self, active_constraints, affinely_independent, orientation, point_location, Constraint,
    Location, Point, PolytopeDescriptor, PolytopeKind,
};
use crate::rational::{self, zero, Rational};
use crate::report::{ValidationReport, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("simplex must have at least one vertex")]
    EmptySimplex,
    #[error("simplex has a repeated vertex {0}")]
    RepeatedVertex(VertexId),
    #[error("vertex {0} has no coordinates")]
    UnknownVertex(VertexId),
    #[error("vertex coordinates {0:?} listed twice")]
    DuplicatePoint(Point),
    #[error("point {got:?} has dimension {}, expected {expected}", got.dim())]
    PointDimension { got: Point, expected: usize },
    #[error("vertex ids must be 0..n in order; found {0}")]
    NonContiguousIds(u32),
    #[error("operation requires a domain descriptor")]
    MissingDomain,
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Strictly sorted, nonempty vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(w[0]));
        }
        Ok(Simplex(vertices))
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self, ComplexError> {
        Self::new(ids.iter().map(|&i| VertexId(i)).collect())
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.0.iter().map(|v| v.0).collect()
    }

    /// Codimension-one faces (none for a vertex).
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        (0..k).filter(move |_| k > 1).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u32..(1u32 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.0.len();
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (self.0[i], self.0[j])))
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|v| v.0)).finish()
    }
}

/// Vertex table plus a simplex set, optionally tied to a polytope.
///
/// Vertex ids are dense indices into the vertex table. Coordinates are unique,
/// so the coordinate index doubles as a dedup key during construction.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point>,
    index: HashMap<Point, VertexId>,
    simplices: BTreeSet<Simplex>,
    maximal: Vec<Simplex>,
    domain: Option<PolytopeDescriptor>,
    boundary: bool,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
            && self.simplices == other.simplices
            && self.domain == other.domain
            && self.boundary == other.boundary
    }
}

impl Triangulation {
    /// Builds the face closure of the given maximal simplices.
    pub fn from_maximal(
        points: Vec<Point>,
        maximal: impl IntoIterator<Item = Simplex>,
        domain: Option<PolytopeDescriptor>,
    ) -> Result<Self, ComplexError> {
        let mut simplices = BTreeSet::new();
        for s in maximal {
            for f in s.faces() {
                simplices.insert(f);
            }
        }
        Self::from_simplices(points, simplices, domain)
    }

    /// Takes the simplex set as given; face closure is not enforced.
    pub fn from_simplices(
        points: Vec<Point>,
        simplices: BTreeSet<Simplex>,
        domain: Option<PolytopeDescriptor>,
    ) -> Result<Self, ComplexError> {
        let mut index = HashMap::with_capacity(points.len());
        let expected_dim = domain
            .as_ref()
            .map(|d| d.ambient_dim())
            .or_else(|| points.first().map(Point::dim));
        for (i, p) in points.iter().enumerate() {
            if let Some(d) = expected_dim {
                if p.dim() != d {
                    return Err(ComplexError::PointDimension {
                        got: p.clone(),
                        expected: d,
                    });
                }
            }
            if index.insert(p.clone(), VertexId(i as u32)).is_some() {
                return Err(ComplexError::DuplicatePoint(p.clone()));
            }
        }
        for s in &simplices {
            if let Some(v) = s.vertices().iter().find(|v| v.index() >= points.len()) {
                return Err(ComplexError::UnknownVertex(*v));
            }
        }
        let maximal = compute_maximal(&simplices);
        Ok(Triangulation {
            points,
            index,
            simplices,
            maximal,
            domain,
            boundary: false,
        })
    }

    pub fn domain(&self) -> Option<&PolytopeDescriptor> {
        self.domain.as_ref()
    }

    /// True for complexes produced by [`boundary_complex`].
    pub fn is_boundary_complex(&self) -> bool {
        self.boundary
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.points.len() as u32).map(VertexId)
    }

    pub fn point(&self, v: VertexId) -> &Point {
        &self.points[v.index()]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn vertex_at(&self, p: &Point) -> Option<VertexId> {
        self.index.get(p).copied()
    }

    /// The vertex at `-p(v)`, if any.
    pub fn antipode(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_at(&self.point(v).neg())
    }

    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.dim() == k)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices_of_dim(1)
    }

    /// Largest simplex dimension present.
    pub fn dim(&self) -> usize {
        self.maximal.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    pub fn simplex_points(&self, s: &Simplex) -> Vec<Point> {
        s.vertices().iter().map(|&v| self.point(v).clone()).collect()
    }

    /// Vertices of `s` reflected through the origin, if all exist.
    pub fn reflect(&self, s: &Simplex) -> Option<Simplex> {
        let ids: Option<Vec<VertexId>> = s.vertices().iter().map(|&v| self.antipode(v)).collect();
        ids.and_then(|ids| Simplex::new(ids).ok())
    }

    /// Same vertex table, different simplex set.
    pub fn with_simplices(&self, simplices: BTreeSet<Simplex>, boundary: bool) -> Triangulation {
        Triangulation {
            points: self.points.clone(),
            index: self.index.clone(),
            maximal: compute_maximal(&simplices),
            simplices,
            domain: self.domain.clone(),
            boundary,
        }
    }
}

fn compute_maximal(simplices: &BTreeSet<Simplex>) -> Vec<Simplex> {
    let mut covered: HashSet<&[VertexId]> = HashSet::new();
    let mut proper: HashSet<Simplex> = HashSet::new();
    for s in simplices {
        if s.0.len() == 1 {
            continue;
        }
        if !covered.insert(&s.0) {
            continue;
        }
        for f in s.faces() {
            if f.0.len() < s.0.len() {
                proper.insert(f);
            }
        }
    }
    simplices
        .iter()
        .filter(|s| !proper.contains(*s))
        .cloned()
        .collect()
}

/// Incremental construction with coordinate deduplication.
#[derive(Default)]
pub struct TriangulationBuilder {
    points: Vec<Point>,
    index: HashMap<Point, VertexId>,
    maximal: Vec<Simplex>,
}

impl TriangulationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seeds the vertex table with an existing triangulation's vertices, in
    /// order, so its ids stay valid.
    pub fn extending(t: &Triangulation) -> Self {
        TriangulationBuilder {
            points: t.points.clone(),
            index: t.index.clone(),
            maximal: Vec::new(),
        }
    }

    pub fn vertex(&mut self, p: Point) -> VertexId {
        if let Some(&v) = self.index.get(&p) {
            return v;
        }
        let v = VertexId(self.points.len() as u32);
        self.index.insert(p.clone(), v);
        self.points.push(p);
        v
    }

    pub fn lookup(&self, p: &Point) -> Option<VertexId> {
        self.index.get(p).copied()
    }

    pub fn simplex(&mut self, points: impl IntoIterator<Item = Point>) -> Result<Simplex, ComplexError> {
        let ids = points.into_iter().map(|p| self.vertex(p)).collect();
        let s = Simplex::new(ids)?;
        self.maximal.push(s.clone());
        Ok(s)
    }

    pub fn add(&mut self, s: Simplex) {
        self.maximal.push(s);
    }

    pub fn build(self, domain: Option<PolytopeDescriptor>) -> Result<Triangulation, ComplexError> {
        Triangulation::from_maximal(self.points, self.maximal, domain)
    }
}

/// Coordinates used for volume and orientation tests: simplex domains live in
/// a hyperplane of `R^{n+1}`, so their last coordinate is dropped.
fn projection_drop(t: &Triangulation) -> usize {
    match t.domain() {
        Some(d) if d.kind == PolytopeKind::Simplex && !t.boundary => 1,
        _ => 0,
    }
}

/// Checks face closure, pairwise intersection of maximal simplices, and (when a
/// domain is attached) exact-volume coverage of the domain.
///
/// Full-dimensional triangulations of a domain are first tested with a local
/// certificate (see [`local_certificate`]); the pairwise scan runs only when
/// it fails, to name the offending pairs.
pub fn validate_triangulation(t: &Triangulation) -> ValidationReport {
    validate_with(t, true)
}

/// [`validate_triangulation`] without the local certificate: every pair of
/// maximal simplices with overlapping bounding boxes is tested.
pub fn validate_triangulation_pairwise(t: &Triangulation) -> ValidationReport {
    validate_with(t, false)
}

fn validate_with(t: &Triangulation, certificate: bool) -> ValidationReport {
    let mut report = ValidationReport::new();

    for s in &t.simplices {
        for f in s.facets() {
            if !t.simplices.contains(&f) {
                report.push(
                    Violation::new(ViolationKind::FaceClosure, format!("facet {f:?} of {s:?} missing"))
                        .with_simplex(s.ids())
                        .with_simplex(f.ids()),
                );
            }
        }
    }

    let mut usable = Vec::with_capacity(t.maximal.len());
    for s in &t.maximal {
        if s.vertices().iter().any(|v| v.index() >= t.points.len()) {
            report.push(
                Violation::new(ViolationKind::MissingCoordinates, "vertex without coordinates")
                    .with_simplex(s.ids()),
            );
            continue;
        }
        if !affinely_independent(&t.simplex_points(s)) {
            report.push(
                Violation::new(ViolationKind::Degenerate, "affinely dependent vertices")
                    .with_simplex(s.ids()),
            );
            continue;
        }
        usable.push(s);
    }

    let certified = certificate && usable.len() == t.maximal.len() && local_certificate(t, &usable);
    let pairs = if certified { Vec::new() } else { intersecting_pairs(t, &usable) };
    for (a, b) in pairs {
        report.push(
            Violation::new(
                ViolationKind::Intersection,
                "simplices meet outside a common face",
            )
            .with_simplex(a.ids())
            .with_simplex(b.ids()),
        );
    }

    if let Some(domain) = t.domain() {
        check_coverage(t, domain, &usable, &mut report);
    }
    report
}

fn check_coverage(
    t: &Triangulation,
    domain: &PolytopeDescriptor,
    usable: &[&Simplex],
    report: &mut ValidationReport,
) {
    let used: BTreeSet<VertexId> = t
        .simplices
        .iter()
        .flat_map(|s| s.vertices().iter().copied())
        .collect();
    for v in used {
        let loc = point_location(domain, t.point(v));
        let bad = match loc {
            Err(_) | Ok(Location::Outside) => true,
            Ok(Location::Interior) => t.boundary,
            Ok(Location::Boundary) => false,
        };
        if bad {
            report.push(
                Violation::new(
                    ViolationKind::Coverage,
                    format!("vertex {:?} is not in the expected region", t.point(v)),
                )
                .with_vertex(v.0),
            );
        }
    }
    if t.boundary {
        return;
    }
    let n = domain.dim;
    let mut total = zero();
    for s in usable {
        if s.dim() != n {
            report.push(
                Violation::new(
                    ViolationKind::Coverage,
                    format!("maximal simplex of dimension {} in a {n}-dimensional domain", s.dim()),
                )
                .with_simplex(s.ids()),
            );
            continue;
        }
        let pts: Vec<&Point> = s.vertices().iter().map(|&v| t.point(v)).collect();
        total += geometry::simplex_volume_in(&pts, projection_drop(t));
    }
    let expected = domain.volume();
    if total != expected {
        report.push(Violation::new(
            ViolationKind::Coverage,
            format!(
                "simplex volumes sum to {} but the domain has volume {}",
                rational::PQ(&total),
                rational::PQ(&expected)
            ),
        ));
    }
}

/// Sufficient condition for a set of full-dimensional simplices with
/// vertices in a convex domain to triangulate it: every codimension-1 face
/// lies either in two simplices on opposite sides of it, or in exactly one
/// simplex and on a facet of the domain; and the volumes sum to the domain
/// volume. The first condition makes the number of simplices covering a
/// generic point constant, the volume makes it 1.
fn local_certificate(t: &Triangulation, usable: &[&Simplex]) -> bool {
    let Some(domain) = t.domain() else { return false };
    if t.boundary || usable.iter().any(|s| s.dim() != domain.dim) {
        return false;
    }
    let Ok(cons) = vertex_constraints(t, domain) else { return false };
    let drop = projection_drop(t);
    let used: BTreeSet<VertexId> = usable.iter().flat_map(|s| s.vertices().iter().copied()).collect();
    if used
        .iter()
        .any(|&v| !matches!(point_location(domain, t.point(v)), Ok(Location::Interior | Location::Boundary)))
    {
        return false;
    }
    let total: Rational = usable
        .iter()
        .map(|s| {
            let pts: Vec<&Point> = s.vertices().iter().map(|&v| t.point(v)).collect();
            geometry::simplex_volume_in(&pts, drop)
        })
        .sum();
    if total != domain.volume() {
        return false;
    }

    let project = |v: VertexId| {
        let p = t.point(v);
        Point(p.0[..p.dim() - drop].to_vec())
    };
    let mut facets: BTreeMap<Simplex, Vec<VertexId>> = BTreeMap::new();
    for s in usable {
        for &apex in s.vertices() {
            let f = Simplex::new(s.vertices().iter().copied().filter(|&v| v != apex).collect()).expect("nonempty facet");
            facets.entry(f).or_default().push(apex);
        }
    }
    let entries: Vec<(&Simplex, &Vec<VertexId>)> = facets.iter().collect();
    entries.par_iter().all(|(f, apexes)| match apexes.as_slice() {
        [_] => {
            let mut common = cons[f.vertices()[0].index()].clone();
            for v in &f.vertices()[1..] {
                common.retain(|c| cons[v.index()].contains(c));
            }
            !common.is_empty()
        }
        [a, b] => {
            let base: Vec<Point> = f.vertices().iter().map(|&v| project(v)).collect();
            let side = |apex: VertexId| {
                let q = project(apex);
                let mut pts: Vec<&Point> = base.iter().collect();
                pts.push(&q);
                rational::signum(&orientation(&pts))
            };
            let (sa, sb) = (side(*a), side(*b));
            sa != 0 && sa == -sb
        }
        _ => false,
    })
}

struct Bbox {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

fn bbox(points: &[Point]) -> Bbox {
    let mut lo = points[0].0.clone();
    let mut hi = points[0].0.clone();
    for p in &points[1..] {
        for (c, q) in p.0.iter().enumerate() {
            if *q < lo[c] {
                lo[c] = q.clone();
            }
            if *q > hi[c] {
                hi[c] = q.clone();
            }
        }
    }
    Bbox { lo, hi }
}

/// Pairs of maximal simplices that violate the common-face property.
fn intersecting_pairs<'a>(t: &Triangulation, simplices: &[&'a Simplex]) -> Vec<(&'a Simplex, &'a Simplex)> {
    let drop = projection_drop(t);
    let coords: Vec<Vec<Point>> = simplices
        .iter()
        .map(|s| {
            s.vertices()
                .iter()
                .map(|&v| {
                    let p = t.point(v);
                    Point(p.0[..p.dim() - drop].to_vec())
                })
                .collect()
        })
        .collect();
    let boxes: Vec<Bbox> = coords.iter().map(|c| bbox(c)).collect();
    let mut order: Vec<usize> = (0..simplices.len()).collect();
    order.sort_by(|&a, &b| boxes[a].lo[0].cmp(&boxes[b].lo[0]));

    let mut candidates = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j].lo[0] > boxes[i].hi[0] {
                break;
            }
            let overlap = (1..boxes[i].lo.len())
                .all(|c| boxes[j].lo[c] <= boxes[i].hi[c] && boxes[i].lo[c] <= boxes[j].hi[c]);
            if overlap {
                candidates.push((i.min(j), i.max(j)));
            }
        }
    }

    let mut bad: Vec<(usize, usize)> = candidates
        .into_par_iter()
        .filter(|&(i, j)| !pair_ok(simplices[i], &coords[i], simplices[j], &coords[j]))
        .collect();
    bad.sort_unstable();
    bad.into_iter().map(|(i, j)| (simplices[i], simplices[j])).collect()
}

fn pair_ok(a: &Simplex, pa: &[Point], b: &Simplex, pb: &[Point]) -> bool {
    let shared_a: Vec<bool> = a.vertices().iter().map(|&v| b.contains(v)).collect();
    if shared_a.iter().all(|&x| x) {
        return true;
    }
    let full_dim = |pts: &[Point]| pts.len() == pts[0].dim() + 1;
    if full_dim(pa) && full_dim(pb) {
        let shared_b: Vec<bool> = b.vertices().iter().map(|&v| a.contains(v)).collect();
        if separated_by_facet(pa, &shared_a, pb, &shared_b)
            || separated_by_facet(pb, &shared_b, pa, &shared_a)
        {
            return true;
        }
    }
    !geometry::meets_outside_shared(pa, pb, &shared_a)
}

/// Sufficient condition: some facet of `a` containing every shared vertex has
/// all unshared vertices of `b` strictly on its far side.
fn separated_by_facet(pa: &[Point], shared_a: &[bool], pb: &[Point], shared_b: &[bool]) -> bool {
    for apex in 0..pa.len() {
        if shared_a[apex] {
            continue;
        }
        let facet: Vec<&Point> = (0..pa.len()).filter(|&i| i != apex).map(|i| &pa[i]).collect();
        let side = |p: &Point| {
            let mut pts = facet.clone();
            pts.push(p);
            rational::signum(&orientation(&pts))
        };
        let apex_side = side(&pa[apex]);
        if apex_side == 0 {
            continue;
        }
        let separated = pb
            .iter()
            .zip(shared_b)
            .filter(|(_, &sh)| !sh)
            .all(|(p, _)| side(p) == -apex_side);
        if separated {
            return true;
        }
    }
    false
}

/// Per-vertex tight constraints (`None` for interior vertices).
pub fn vertex_constraints(
    t: &Triangulation,
    domain: &PolytopeDescriptor,
) -> Result<Vec<BTreeSet<Constraint>>, ComplexError> {
    t.points
        .iter()
        .map(|p| active_constraints(domain, p).map_err(ComplexError::from))
        .collect()
}

/// Sub-complex of simplices lying in the domain boundary: a simplex belongs
/// iff all its vertices share a tight constraint (one common facet).
pub fn boundary_complex(t: &Triangulation) -> Result<Triangulation, ComplexError> {
    let domain = t.domain().ok_or(ComplexError::MissingDomain)?;
    let cons = vertex_constraints(t, domain)?;
    let simplices: BTreeSet<Simplex> = t
        .simplices
        .iter()
        .filter(|s| {
            let mut it = s.vertices().iter();
            let first = &cons[it.next().unwrap().index()];
            if first.is_empty() {
                return false;
            }
            let mut common: BTreeSet<&Constraint> = first.iter().collect();
            for v in it {
                common.retain(|c| cons[v.index()].contains(*c));
                if common.is_empty() {
                    return false;
                }
            }
            true
        })
        .cloned()
        .collect();
    Ok(t.with_simplices(simplices, true))
}

/// Every simplex must have its reflection `-σ` in the complex.
pub fn check_antipodal_symmetry(tb: &Triangulation) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Some(d) = tb.domain() {
        if !d.is_origin_symmetric() {
            report.push(Violation::new(
                ViolationKind::Unsupported,
                format!("domain {} is not origin-symmetric", d.kind),
            ));
            return report;
        }
    }
    for s in tb.simplices() {
        match tb.reflect(s) {
            Some(r) if tb.contains(&r) => {}
            Some(r) => report.push(
                Violation::new(ViolationKind::Antipodal, "reflected simplex absent")
                    .with_simplex(s.ids())
                    .with_simplex(r.ids()),
            ),
            None => report.push(
                Violation::new(ViolationKind::Antipodal, "reflected vertex absent").with_simplex(s.ids()),
            ),
        }
    }
    report
}

/// Pure-combinatorial boundary: faces of codimension one lying in exactly one
/// top-dimensional simplex, closed under taking faces.
pub fn combinatorial_boundary(simplices: &BTreeSet<Simplex>) -> BTreeSet<Simplex> {
    let top = simplices.iter().map(Simplex::dim).max().unwrap_or(0);
    if top == 0 {
        return BTreeSet::new();
    }
    let mut count: HashMap<Simplex, usize> = HashMap::new();
    for s in simplices.iter().filter(|s| s.dim() == top) {
        for f in s.facets() {
            *count.entry(f).or_default() += 1;
        }
    }
    let mut out = BTreeSet::new();
    for (f, c) in count {
        if c == 1 {
            out.extend(f.faces());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDoc {
    pub kind: PolytopeKind,
    #[serde(with = "rational::pq")]
    pub scale: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: u32,
    pub coords: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub dim: usize,
    pub domain: Option<DomainDoc>,
    pub vertices: Vec<VertexDoc>,
    pub maximal_simplices: Vec<Vec<u32>>,
}

impl TriangulationDoc {
    pub fn from_triangulation(t: &Triangulation) -> Self {
        TriangulationDoc {
            dim: t.domain().map_or_else(|| t.dim(), |d| d.dim),
            domain: t.domain().map(|d| DomainDoc {
                kind: d.kind,
                scale: d.scale.clone(),
            }),
            vertices: t
                .vertex_ids()
                .map(|v| VertexDoc {
                    id: v.0,
                    coords: t.point(v).clone(),
                })
                .collect(),
            maximal_simplices: t.maximal_simplices().iter().map(Simplex::ids).collect(),
        }
    }

    /// Rebuilds the triangulation, recomputing face closure.
    pub fn into_triangulation(self) -> Result<Triangulation, ComplexError> {
        let mut vertices = self.vertices;
        vertices.sort_by_key(|v| v.id);
        for (i, v) in vertices.iter().enumerate() {
            if v.id as usize != i {
                return Err(ComplexError::NonContiguousIds(v.id));
            }
        }
        let domain = self
            .domain
            .map(|d| PolytopeDescriptor::scaled(d.kind, self.dim, d.scale))
            .transpose()?;
        let points = vertices.into_iter().map(|v| v.coords).collect();
        let maximal = self
            .maximal_simplices
            .iter()
            .map(|ids| Simplex::from_ids(ids))
            .collect::<Result<Vec<_>, _>>()?;
        Triangulation::from_maximal(points, maximal, domain)
    }
}

/// True iff every coordinate of `p` is zero.
pub fn is_origin(p: &Point) -> bool {
    p.0.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn cross2() -> Triangulation {
        let mut b = TriangulationBuilder::new();
        b.vertex(Point::origin(2));
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                b.simplex([
                    Point::origin(2),
                    Point::from_ints(&[s1, 0]),
                    Point::from_ints(&[0, s2]),
                ])
                .unwrap();
            }
        }
        b.build(Some(PolytopeDescriptor::cross(2))).unwrap()
    }

    #[test]
    fn simplex_normalizes_and_rejects_bad_input() {
        let s = Simplex::from_ids(&[3, 1, 2]).unwrap();
        assert_eq!(s.ids(), vec![1, 2, 3]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.faces().len(), 7);
        assert_eq!(s.facets().count(), 3);
        assert_eq!(Simplex::from_ids(&[]), Err(ComplexError::EmptySimplex));
        assert_eq!(
            Simplex::from_ids(&[1, 1]),
            Err(ComplexError::RepeatedVertex(VertexId(1)))
        );
    }

    #[test]
    fn cross_standard_is_valid() {
        let t = cross2();
        assert_eq!(t.vertex_count(), 5);
        assert_eq!(t.maximal_simplices().len(), 4);
        let r = validate_triangulation(&t);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn overlapping_segments_are_an_intersection_violation() {
        let pts = vec![
            Point::origin(1),
            Point::from_ints(&[1]),
            Point(vec![rat(-1, 2)]),
            Point(vec![rat(1, 2)]),
        ];
        let t = Triangulation::from_maximal(
            pts,
            [Simplex::from_ids(&[0, 1]).unwrap(), Simplex::from_ids(&[2, 3]).unwrap()],
            None,
        )
        .unwrap();
        let r = validate_triangulation(&t);
        assert!(r.has(ViolationKind::Intersection));
    }

    #[test]
    fn missing_edge_is_a_face_closure_violation() {
        let t = cross2();
        let mut simplices = t.simplices().clone();
        let edge = t
            .edges()
            .find(|e| !e.vertices().contains(&VertexId(0)))
            .unwrap()
            .clone();
        simplices.remove(&edge);
        let broken = Triangulation::from_simplices(t.points().to_vec(), simplices, None).unwrap();
        let r = validate_triangulation(&broken);
        assert!(r.has(ViolationKind::FaceClosure));
        assert!(!r.ok());
    }

    #[test]
    fn missing_triangle_is_a_coverage_violation() {
        let t = cross2();
        let keep = t.maximal_simplices()[1..].to_vec();
        let partial =
            Triangulation::from_maximal(t.points().to_vec(), keep, Some(PolytopeDescriptor::cross(2)))
                .unwrap();
        assert!(validate_triangulation(&partial).has(ViolationKind::Coverage));
    }

    #[test]
    fn certificate_agrees_with_pairwise_on_valid_complexes() {
        use crate::generate::{barycentric_subdivide, cross_standard, freudenthal_cube, grid_simplex};
        let cases = [
            cross_standard(2),
            cross_standard(3),
            barycentric_subdivide(&cross_standard(2)),
            freudenthal_cube(2, 3),
            freudenthal_cube(3, 2),
            grid_simplex(2, 3),
            barycentric_subdivide(&grid_simplex(2, 2)),
        ];
        for t in &cases {
            let usable: Vec<&Simplex> = t.maximal_simplices().iter().collect();
            assert!(local_certificate(t, &usable));
            assert!(validate_triangulation(t).ok());
            assert!(validate_triangulation_pairwise(t).ok());
        }
    }

    #[test]
    fn equal_volume_overlap_falls_back_to_pairwise() {
        // the last quadrant is swapped for a triangle of equal area that
        // reaches into the first one
        let pts = vec![
            Point::origin(2),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
            Point::from_ints(&[-1, 0]),
            Point::from_ints(&[0, -1]),
            Point(vec![rat(1, 2), rat(1, 2)]),
        ];
        let maximal = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [5, 1, 4]].map(|ids| Simplex::from_ids(&ids).unwrap());
        let t = Triangulation::from_maximal(pts, maximal, Some(PolytopeDescriptor::cross(2))).unwrap();
        let usable: Vec<&Simplex> = t.maximal_simplices().iter().collect();
        assert!(!local_certificate(&t, &usable));
        let fast = validate_triangulation(&t);
        assert!(fast.has(ViolationKind::Intersection));
        assert_eq!(fast, validate_triangulation_pairwise(&t));
    }

    #[test]
    fn missing_simplex_fails_both_paths() {
        let t = cross2();
        let keep = t.maximal_simplices()[1..].to_vec();
        let partial =
            Triangulation::from_maximal(t.points().to_vec(), keep, Some(PolytopeDescriptor::cross(2)))
                .unwrap();
        let usable: Vec<&Simplex> = partial.maximal_simplices().iter().collect();
        assert!(!local_certificate(&partial, &usable));
        assert_eq!(validate_triangulation(&partial), validate_triangulation_pairwise(&partial));
    }

    #[test]
    fn degenerate_simplex_reported() {
        let pts = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[2, 0])];
        let t = Triangulation::from_maximal(pts, [Simplex::from_ids(&[0, 1, 2]).unwrap()], None).unwrap();
        assert!(validate_triangulation(&t).has(ViolationKind::Degenerate));
    }

    #[test]
    fn boundary_of_cross2() {
        let t = cross2();
        let b = boundary_complex(&t).unwrap();
        assert_eq!(b.simplices_of_dim(1).count(), 4);
        assert_eq!(b.simplices_of_dim(0).count(), 4);
        assert_eq!(b.simplices_of_dim(2).count(), 0);
        assert!(b.simplices_of_dim(0).all(|s| !s.contains(VertexId(0))));
        assert!(check_antipodal_symmetry(&b).ok());
        assert_eq!(combinatorial_boundary(t.simplices()), b.simplices().clone());
        assert!(validate_triangulation(&b).ok());
        // idempotent
        assert_eq!(boundary_complex(&b).unwrap().simplices(), b.simplices());
    }

    #[test]
    fn one_sided_subdivision_breaks_symmetry() {
        let mut b = TriangulationBuilder::new();
        let o = Point::origin(2);
        let mid = Point(vec![rat(1, 2), rat(1, 2)]);
        b.simplex([o.clone(), Point::from_ints(&[1, 0]), mid.clone()]).unwrap();
        b.simplex([o.clone(), mid, Point::from_ints(&[0, 1])]).unwrap();
        for (s1, s2) in [(1, -1), (-1, 1), (-1, -1)] {
            b.simplex([o.clone(), Point::from_ints(&[s1, 0]), Point::from_ints(&[0, s2])])
                .unwrap();
        }
        let t = b.build(Some(PolytopeDescriptor::cross(2))).unwrap();
        assert!(validate_triangulation(&t).ok());
        let r = check_antipodal_symmetry(&boundary_complex(&t).unwrap());
        assert!(!r.ok());
        assert!(r.has(ViolationKind::Antipodal));
    }

    #[test]
    fn symmetry_unsupported_on_simplex_domain() {
        let pts = vec![
            Point::from_ints(&[1, 0, 0]),
            Point::from_ints(&[0, 1, 0]),
            Point::from_ints(&[0, 0, 1]),
        ];
        let t = Triangulation::from_maximal(
            pts,
            [Simplex::from_ids(&[0, 1, 2]).unwrap()],
            Some(PolytopeDescriptor::simplex(2)),
        )
        .unwrap();
        assert!(validate_triangulation(&t).ok());
        let b = boundary_complex(&t).unwrap();
        assert_eq!(b.simplices_of_dim(1).count(), 3);
        assert_eq!(b.simplices_of_dim(0).count(), 3);
        assert!(check_antipodal_symmetry(&b).has(ViolationKind::Unsupported));
    }

    #[test]
    fn json_roundtrip_recomputes_closure() {
        let t = cross2();
        let doc = TriangulationDoc::from_triangulation(&t);
        let s = serde_json::to_string(&doc).unwrap();
        assert!(s.contains("\"kind\":\"CROSS\""));
        assert!(s.contains("\"scale\":\"1/1\""));
        assert!(s.contains("\"-1/1\""));
        let back: TriangulationDoc = serde_json::from_str(&s).unwrap();
        let t2 = back.into_triangulation().unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn builder_dedups_points() {
        let mut b = TriangulationBuilder::new();
        let a = b.vertex(Point(vec![rat(2, 4)]));
        let c = b.vertex(Point(vec![rat(1, 2)]));
        assert_eq!(a, c);
        assert_eq!(b.vertex(Point(vec![int(1)])), VertexId(1));
    }
}
