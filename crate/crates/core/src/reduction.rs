//! Shell reductions: embed a labelled triangulation of an inner polytope in a
//! dilated outer polytope, triangulate the shell cell by cell, and extend the
//! labels so the outer instance meets Tucker's hypotheses without adding
//! complementary edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{
    boundary_complex, check_antipodal_symmetry, validate_triangulation, vertex_constraints,
    ComplexError, Simplex, Triangulation, TriangulationBuilder, VertexId,
};
use crate::geometry::{
    affine_rank, orientation, point_location, rank, sign_vectors, Constraint, Location, Point,
    PolytopeDescriptor, PolytopeKind,
};
use crate::labels::{complementary, Label, LabelFunction, LabelSetDescriptor};
use crate::rational::{int, signum, zero, Rational};
use crate::report::{ValidationReport, Violation, ViolationKind};
use crate::theorems::{validate_label_conditions, Checker, TheoremError, TheoremId, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("configuration {0} is not supported in dimension {1}")]
    Unsupported(ShellConfig, usize),
    #[error("input triangulation must cover {expected:?}")]
    WrongDomain { expected: PolytopeDescriptor },
    #[error("input instance violates its hypotheses")]
    Precondition(ValidationReport),
    #[error("extended instance failed verification")]
    Verification(ValidationReport),
    #[error("cell {cell} could not be triangulated: {reason}")]
    Cell { cell: String, reason: String },
    #[error("no complementary edge in the extended triangulation")]
    NoWitness,
    #[error("witness {0:?} lies in the shell")]
    ShellWitness(Simplex),
    #[error(transparent)]
    Theorem(#[from] TheoremError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Supported (inner, outer) pairs, all with octahedral labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShellConfig {
    /// `◇^n` inside `2◇^n`.
    #[serde(rename = "oct-in-2oct")]
    OctInOct,
    /// `□^n` inside a dilated cross-polytope (`3◇^2`, or `2◇^1`).
    #[serde(rename = "cube-in-2oct")]
    CubeInOct,
    /// `◇^n` inside `2□^n`.
    #[serde(rename = "oct-in-2cube")]
    OctInCube,
}

impl fmt::Display for ShellConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShellConfig::OctInOct => "oct-in-2oct",
            ShellConfig::CubeInOct => "cube-in-2oct",
            ShellConfig::OctInCube => "oct-in-2cube",
        })
    }
}

impl FromStr for ShellConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oct-in-2oct" | "oct-in-oct" => Ok(ShellConfig::OctInOct),
            "cube-in-2oct" | "cube-in-oct" => Ok(ShellConfig::CubeInOct),
            "oct-in-2cube" | "oct-in-cube" => Ok(ShellConfig::OctInCube),
            _ => Err(format!("unknown shell configuration {s:?}")),
        }
    }
}

impl ShellConfig {
    pub fn supports(self, n: usize) -> bool {
        match self {
            ShellConfig::OctInOct => (1..=4).contains(&n),
            ShellConfig::CubeInOct | ShellConfig::OctInCube => (1..=2).contains(&n),
        }
    }

    /// The Sperner-type theorem whose instances this configuration reduces.
    pub fn inner_theorem(self) -> TheoremId {
        match self {
            ShellConfig::OctInOct | ShellConfig::OctInCube => TheoremId::OctOct,
            ShellConfig::CubeInOct => TheoremId::CubOct,
        }
    }

    pub fn inner(self, n: usize) -> PolytopeDescriptor {
        match self {
            ShellConfig::OctInOct | ShellConfig::OctInCube => PolytopeDescriptor::cross(n),
            ShellConfig::CubeInOct => PolytopeDescriptor::cube(n),
        }
    }

    /// For the cube inside a cross-polytope, `2◇^2` would pass through the
    /// cube's corners, so the dilation is `n + 1`.
    pub fn outer(self, n: usize) -> PolytopeDescriptor {
        let (kind, scale) = match self {
            ShellConfig::OctInOct => (PolytopeKind::Cross, 2),
            ShellConfig::CubeInOct => (PolytopeKind::Cross, n as i64 + 1),
            ShellConfig::OctInCube => (PolytopeKind::Cube, 2),
        };
        PolytopeDescriptor::scaled(kind, n, int(scale)).expect("positive scale")
    }

    /// Only the outer cube configuration needs non-extreme vertices on the
    /// outer boundary (where coordinate hyperplanes cut it).
    pub fn boundary_is_ext_only(self) -> bool {
        self != ShellConfig::OctInCube
    }

    /// Label of a vertex on the outer boundary: `sign(p_i) e_i` for the first
    /// nonzero coordinate `i`.
    pub fn outer_label(self, p: &Point) -> Label {
        let (i, q) = p
            .0
            .iter()
            .enumerate()
            .find(|(_, q)| **q != zero())
            .expect("outer boundary avoids the origin");
        Label::axis(p.dim(), i, signum(q))
    }
}

/// Convex piece of the shell, given by its corners. Corners on the inner
/// polytope are flagged; the inner simplices adjoined to the cell are those of
/// `∂T` lying on `inner_face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellCell {
    pub name: String,
    pub corners: Vec<Point>,
    pub inner_corners: BTreeSet<Point>,
    /// Tight constraint of the inner polytope carrying the cell's inner
    /// facet; `None` when the cell touches the inner polytope in one vertex.
    pub inner_face: Option<Constraint>,
}

fn sign_name(s: &[i8]) -> String {
    s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect()
}

/// Convex cells covering the shell `X \ int(Z)`. For the cross-polytope
/// configurations these are the `2^n` orthant pieces; the cube inside a
/// cross-polytope uses one cone per cube facet plus one cell per cube corner.
pub fn slice_shell_by_orthants(cfg: ShellConfig, n: usize) -> Result<Vec<ShellCell>, ReductionError> {
    if !cfg.supports(n) {
        return Err(ReductionError::Unsupported(cfg, n));
    }
    let outer = cfg.outer(n);
    let scale = outer.scale.clone();
    let axis = |i: usize, s: i8, k: &Rational| Point::axis(n, i, k * int(s as i64));
    let mut cells = Vec::new();
    match cfg {
        ShellConfig::OctInOct | ShellConfig::OctInCube => {
            for s in sign_vectors(n) {
                let inner: Vec<Point> = (0..n).map(|i| axis(i, s[i], &int(1))).collect();
                let mut corners = inner.clone();
                if cfg == ShellConfig::OctInOct {
                    corners.extend((0..n).map(|i| axis(i, s[i], &scale)));
                } else {
                    // corners of the orthant box [0, 2]^n (signed), except 0
                    for mask in 1u32..(1 << n) {
                        corners.push(Point(
                            (0..n)
                                .map(|i| if mask >> i & 1 == 1 { &scale * int(s[i] as i64) } else { zero() })
                                .collect(),
                        ));
                    }
                }
                cells.push(ShellCell {
                    name: format!("orthant {}", sign_name(&s)),
                    corners,
                    inner_corners: inner.into_iter().collect(),
                    inner_face: Some(Constraint::Facet(s)),
                });
            }
        }
        ShellConfig::CubeInOct => {
            let cube_corners = sign_vectors(n);
            for i in 0..n {
                for s in [1i8, -1] {
                    let facet: Vec<Point> = cube_corners
                        .iter()
                        .filter(|v| v[i] == s)
                        .map(|v| Point(v.iter().map(|&x| int(x as i64)).collect()))
                        .collect();
                    let mut corners = facet.clone();
                    corners.push(axis(i, s, &scale));
                    cells.push(ShellCell {
                        name: format!("facet x{}={}", i + 1, s),
                        corners,
                        inner_corners: facet.into_iter().collect(),
                        inner_face: Some(Constraint::Bound { coord: i, sign: s }),
                    });
                }
            }
            if n >= 2 {
                for v in cube_corners {
                    let p = Point(v.iter().map(|&x| int(x as i64)).collect());
                    let mut corners = vec![p.clone()];
                    corners.extend((0..n).map(|i| axis(i, v[i], &scale)));
                    cells.push(ShellCell {
                        name: format!("corner {}", sign_name(&v)),
                        corners,
                        inner_corners: [p].into_iter().collect(),
                        inner_face: None,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Affine chart of a face: coordinate indices on which the projection of the
/// face's affine hull is injective.
fn chart(points: &[&Point], d: usize) -> Vec<usize> {
    let base = points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(base)).collect();
    let mut coords = Vec::new();
    for c in 0..base.dim() {
        if coords.len() == d {
            break;
        }
        let mut trial = coords.clone();
        trial.push(c);
        let rows: Vec<Vec<Rational>> = diffs.iter().map(|r| trial.iter().map(|&k| r[k].clone()).collect()).collect();
        if rank(&rows) == trial.len() {
            coords = trial;
        }
    }
    coords
}

fn project(p: &Point, coords: &[usize]) -> Point {
    Point(coords.iter().map(|&c| p.0[c].clone()).collect())
}

/// Facets of the convex polytope `conv(face)` as sorted corner-index lists.
fn facets_of(all: &[Point], face: &[usize]) -> Vec<Vec<usize>> {
    let pts: Vec<&Point> = face.iter().map(|&i| &all[i]).collect();
    let owned: Vec<Point> = pts.iter().map(|p| (*p).clone()).collect();
    let d = affine_rank(&owned);
    if d == 0 {
        return Vec::new();
    }
    let coords = chart(&pts, d);
    let proj: Vec<Point> = pts.iter().map(|p| project(p, &coords)).collect();
    let mut out = BTreeSet::new();
    let k = proj.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let base: Vec<&Point> = idx.iter().map(|&i| &proj[i]).collect();
        let sides: Vec<i8> = proj
            .iter()
            .map(|x| {
                let mut s = base.clone();
                s.push(x);
                signum(&orientation(&s))
            })
            .collect();
        let has_pos = sides.iter().any(|&s| s > 0);
        let has_neg = sides.iter().any(|&s| s < 0);
        if has_pos != has_neg {
            let facet: Vec<usize> = (0..k).filter(|&j| sides[j] == 0).map(|j| face[j]).collect();
            out.insert(facet);
        }
        // next d-subset
        let mut p = d;
        loop {
            if p == 0 {
                return out.into_iter().collect();
            }
            p -= 1;
            if idx[p] < k - d + p {
                idx[p] += 1;
                for q in p + 1..d {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Pulling triangulation of a convex cell that keeps the given triangulation
/// of its inner part. `inner` must be face-closed. Outer corners are pulled in
/// descending lexicographic order.
pub fn pull_triangulate_cell(cell: &ShellCell, inner: &[Vec<Point>]) -> Result<Vec<Vec<Point>>, ReductionError> {
    let mut order: Vec<usize> = (0..cell.corners.len())
        .filter(|&i| !cell.inner_corners.contains(&cell.corners[i]))
        .collect();
    order.sort_by(|&a, &b| cell.corners[b].cmp(&cell.corners[a]));
    let all: Vec<usize> = (0..cell.corners.len()).collect();
    let d = affine_rank(&cell.corners);
    let out = pull(cell, inner, &order, &all, d)?;
    if out.is_empty() {
        return Err(ReductionError::Cell {
            cell: cell.name.clone(),
            reason: "empty triangulation".into(),
        });
    }
    Ok(out)
}

fn pull(
    cell: &ShellCell,
    inner: &[Vec<Point>],
    order: &[usize],
    face: &[usize],
    d: usize,
) -> Result<Vec<Vec<Point>>, ReductionError> {
    let corners: Vec<Point> = face.iter().map(|&i| cell.corners[i].clone()).collect();
    if corners.iter().all(|p| cell.inner_corners.contains(p)) {
        let found: Vec<Vec<Point>> = inner
            .iter()
            .filter(|s| s.len() == d + 1)
            .filter(|s| {
                s.iter().all(|p| {
                    let mut probe = corners.clone();
                    probe.push(p.clone());
                    affine_rank(&probe) == d
                })
            })
            .cloned()
            .collect();
        if found.is_empty() {
            return Err(ReductionError::Cell {
                cell: cell.name.clone(),
                reason: format!("no inner simplices on the face {corners:?}"),
            });
        }
        return Ok(found);
    }
    if d == 0 {
        return Ok(vec![corners]);
    }
    let apex = *order.iter().find(|i| face.contains(i)).expect("face has an outer corner");
    let mut out = Vec::new();
    for g in facets_of(&cell.corners, face) {
        if g.contains(&apex) {
            continue;
        }
        for mut s in pull(cell, inner, order, &g, d - 1)? {
            s.push(cell.corners[apex].clone());
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Inner,
    Shell,
}

#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub config: ShellConfig,
    pub t_star: Triangulation,
    pub lambda_star: LabelFunction,
    /// Maximal simplices of `T*` with their origin.
    pub provenance: Vec<(Simplex, Provenance)>,
    /// Vertices `0..inner_vertices` of `T*` are the vertices of `T`.
    pub inner_vertices: usize,
}

impl ExtensionResult {
    /// A simplex is inner iff it is a simplex of the original triangulation.
    pub fn provenance_of(&self, s: &Simplex, original: &Triangulation) -> Provenance {
        if s.vertices().iter().all(|v| v.index() < self.inner_vertices) && original.contains(s) {
            Provenance::Inner
        } else {
            Provenance::Shell
        }
    }

    pub fn shell_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.provenance.iter().filter(|(_, p)| *p == Provenance::Shell).map(|(s, _)| s)
    }
}

fn check_input(cfg: ShellConfig, t: &Triangulation) -> Result<usize, ReductionError> {
    let d = t.domain().ok_or(ReductionError::Complex(ComplexError::MissingDomain))?;
    let n = d.dim;
    if !cfg.supports(n) {
        return Err(ReductionError::Unsupported(cfg, n));
    }
    if *d != cfg.inner(n) {
        return Err(ReductionError::WrongDomain { expected: cfg.inner(n) });
    }
    Ok(n)
}

/// `T*` with provenance and the labels of the new (outer-boundary) vertices.
fn assemble(t: &Triangulation, cfg: ShellConfig) -> Result<(Triangulation, Vec<(Simplex, Provenance)>, Vec<Label>), ReductionError> {
    let n = check_input(cfg, t)?;
    let inner_domain = cfg.inner(n);
    let outer = cfg.outer(n);
    let boundary = boundary_complex(t)?;
    let cons = vertex_constraints(t, &inner_domain)?;

    let mut b = TriangulationBuilder::extending(t);
    let mut provenance = Vec::new();
    for s in t.maximal_simplices() {
        b.add(s.clone());
        provenance.push((s.clone(), Provenance::Inner));
    }
    for cell in slice_shell_by_orthants(cfg, n)? {
        let inner: Vec<Vec<Point>> = match &cell.inner_face {
            Some(c) => boundary
                .simplices()
                .iter()
                .filter(|s| s.vertices().iter().all(|v| cons[v.index()].contains(c)))
                .map(|s| t.simplex_points(s))
                .collect(),
            None => cell.inner_corners.iter().map(|p| vec![p.clone()]).collect(),
        };
        for pts in pull_triangulate_cell(&cell, &inner)? {
            let s = b.simplex(pts).map_err(|e| ReductionError::Cell {
                cell: cell.name.clone(),
                reason: e.to_string(),
            })?;
            provenance.push((s, Provenance::Shell));
        }
    }
    let t_star = b.build(Some(outer.clone()))?;

    let mut outer_labels = Vec::new();
    for v in t_star.vertex_ids().skip(t.vertex_count()) {
        let p = t_star.point(v);
        if point_location(&outer, p) != Ok(Location::Boundary) {
            return Err(ReductionError::Cell {
                cell: format!("{p:?}"),
                reason: "new vertex off the outer boundary has no label rule".into(),
            });
        }
        outer_labels.push(cfg.outer_label(p));
    }
    // keep provenance in T*'s maximal-simplex order
    let prov: BTreeMap<Simplex, Provenance> = provenance.into_iter().collect();
    let provenance = t_star
        .maximal_simplices()
        .iter()
        .map(|s| (s.clone(), prov.get(s).copied().unwrap_or(Provenance::Shell)))
        .collect();
    Ok((t_star, provenance, outer_labels))
}

fn precondition(t: &Triangulation, lambda: &LabelFunction, cfg: ShellConfig) -> Result<(), ReductionError> {
    check_input(cfg, t)?;
    let pre = validate_label_conditions(cfg.inner_theorem(), t, lambda)?;
    if !pre.ok() {
        return Err(ReductionError::Precondition(pre));
    }
    Ok(())
}

fn extend_labels(lambda: &LabelFunction, outer_labels: &[Label]) -> Result<LabelFunction, ReductionError> {
    let mut labels = lambda.labels().to_vec();
    labels.extend_from_slice(outer_labels);
    Ok(LabelFunction::new(lambda.codomain(), labels).map_err(TheoremError::from)?)
}

/// Builds `T*` and `λ*`; the hypotheses of the inner theorem are checked first.
pub fn extend(t: &Triangulation, lambda: &LabelFunction, cfg: ShellConfig) -> Result<ExtensionResult, ReductionError> {
    precondition(t, lambda, cfg)?;
    let (t_star, provenance, outer_labels) = assemble(t, cfg)?;
    Ok(ExtensionResult {
        config: cfg,
        t_star,
        lambda_star: extend_labels(lambda, &outer_labels)?,
        provenance,
        inner_vertices: t.vertex_count(),
    })
}

/// Label-independent part of the checks. Also returns the outer-boundary
/// vertices with their antipodes and the edges of `T*` not in `T`, which the
/// label checks need.
fn geometric_checks(
    cfg: ShellConfig,
    ts: &Triangulation,
    t: &Triangulation,
) -> (ValidationReport, Vec<(VertexId, Option<VertexId>)>, Vec<Simplex>) {
    let mut report = ValidationReport::new();
    let outer = cfg.outer(t.domain().map_or(0, |d| d.dim));

    // (1)
    if ts.vertex_count() < t.vertex_count() {
        report.push(Violation::new(ViolationKind::Extension, "T* lost vertices of T"));
        return (report, Vec::new(), Vec::new());
    }
    for v in t.vertex_ids() {
        if ts.point(v) != t.point(v) {
            report.push(Violation::new(ViolationKind::Extension, "vertex moved").with_vertex(v.0));
        }
    }
    for s in t.simplices() {
        if !ts.contains(s) {
            report.push(Violation::new(ViolationKind::Extension, "simplex of T missing from T*").with_simplex(s.ids()));
        }
    }

    report.merge(validate_triangulation(ts));

    // (2)
    let mut boundary = Vec::new();
    match boundary_complex(ts) {
        Ok(bd) => {
            report.merge(check_antipodal_symmetry(&bd));
            for s in bd.simplices_of_dim(0) {
                let v = s.vertices()[0];
                let p = ts.point(v);
                if cfg.boundary_is_ext_only() && !outer.extreme_points().contains(p) {
                    report.push(
                        Violation::new(ViolationKind::Extension, format!("non-extreme vertex {p:?} on the outer boundary"))
                            .with_vertex(v.0),
                    );
                }
                boundary.push((v, ts.antipode(v)));
            }
        }
        Err(e) => report.push(Violation::new(ViolationKind::Antipodal, e.to_string())),
    }

    // (3), geometric half
    let inner_vertices = t.vertex_count();
    let shell_edges: Vec<Simplex> = ts
        .edges()
        .filter(|e| !(e.vertices().iter().all(|v| v.index() < inner_vertices) && t.contains(e)))
        .cloned()
        .collect();
    for e in &shell_edges {
        let (pa, pb) = (ts.point(e.vertices()[0]), ts.point(e.vertices()[1]));
        if pa.0.iter().zip(&pb.0).any(|(x, y)| signum(x) * signum(y) < 0) {
            report.push(
                Violation::new(ViolationKind::OrthantSeparation, "shell edge joins opposite orthants").with_simplex(e.ids()),
            );
        }
    }
    (report, boundary, shell_edges)
}

fn label_checks(
    lambda_star: &LabelFunction,
    t: &Triangulation,
    lambda: &LabelFunction,
    boundary: &[(VertexId, Option<VertexId>)],
    shell_edges: &[Simplex],
) -> ValidationReport {
    let mut report = ValidationReport::new();
    for v in t.vertex_ids() {
        if lambda_star.get(v) != lambda.get(v) {
            report.push(Violation::new(ViolationKind::Extension, "label changed").with_vertex(v.0));
        }
    }
    for &(v, w) in boundary {
        match (w, lambda_star.get(v)) {
            (Some(w), Some(l)) if lambda_star.get(w) == Some(&l.neg()) => {}
            (w, _) => {
                let mut viol =
                    Violation::new(ViolationKind::Antipodal, "λ*(-v) ≠ -λ*(v) on the outer boundary").with_vertex(v.0);
                if let Some(w) = w {
                    viol = viol.with_vertex(w.0);
                }
                report.push(viol);
            }
        }
    }
    for e in shell_edges {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        if let (Some(la), Some(lb)) = (lambda_star.get(a), lambda_star.get(b)) {
            if complementary(&[la.clone(), lb.clone()]) {
                report.push(Violation::new(ViolationKind::ShellComplementary, "complementary shell edge").with_simplex(e.ids()));
            }
        }
    }
    report
}

/// Properties: (1) `T ⊂ T*` with `λ* = λ` on `V(T)`; (2) antipodal boundary
/// and labels on `∂X`; (3) no complementary or orthant-crossing edge outside
/// `T`; plus validity and coverage of `T*`.
pub fn verify_extension(res: &ExtensionResult, t: &Triangulation, lambda: &LabelFunction) -> ValidationReport {
    let (mut report, boundary, shell_edges) = geometric_checks(res.config, &res.t_star, t);
    report.merge(label_checks(&res.lambda_star, t, lambda, &boundary, &shell_edges));
    report
}

/// Tucker witness in `T*`, which must be an inner simplex.
fn tucker_in_inner(
    t_star: &Triangulation,
    lambda_star: &LabelFunction,
    t: &Triangulation,
    inner_vertices: usize,
) -> Result<Witness, ReductionError> {
    let checker = Checker::new(TheoremId::Tucker, t_star, lambda_star.codomain())?;
    let hyp = checker.validate(lambda_star);
    if !hyp.ok() {
        return Err(ReductionError::Verification(hyp));
    }
    let w = checker.witness(lambda_star).ok_or(ReductionError::NoWitness)?;
    if w.simplex.vertices().iter().all(|v| v.index() < inner_vertices) && t.contains(&w.simplex) {
        Ok(w)
    } else {
        Err(ReductionError::ShellWitness(w.simplex))
    }
}

/// Extends, verifies, finds a Tucker witness in `T*` and maps it back to `T`.
pub fn reduce_and_find(t: &Triangulation, lambda: &LabelFunction, cfg: ShellConfig) -> Result<Witness, ReductionError> {
    precondition(t, lambda, cfg)?;
    Reducer::new(t, cfg)?.reduce(lambda)
}

/// `T*` depends only on `T` and the configuration, so a sweep over many
/// labellings builds and validates it once.
pub struct Reducer<'a> {
    t: &'a Triangulation,
    cfg: ShellConfig,
    t_star: Triangulation,
    provenance: Vec<(Simplex, Provenance)>,
    outer_labels: Vec<Label>,
    geometry: ValidationReport,
    boundary: Vec<(VertexId, Option<VertexId>)>,
    shell_edges: Vec<Simplex>,
}

impl<'a> Reducer<'a> {
    pub fn new(t: &'a Triangulation, cfg: ShellConfig) -> Result<Self, ReductionError> {
        let (t_star, provenance, outer_labels) = assemble(t, cfg)?;
        let (geometry, boundary, shell_edges) = geometric_checks(cfg, &t_star, t);
        Ok(Reducer {
            t,
            cfg,
            t_star,
            provenance,
            outer_labels,
            geometry,
            boundary,
            shell_edges,
        })
    }

    pub fn t_star(&self) -> &Triangulation {
        &self.t_star
    }

    pub fn provenance(&self) -> &[(Simplex, Provenance)] {
        &self.provenance
    }

    /// Label-independent violations of `T*`.
    pub fn geometry(&self) -> &ValidationReport {
        &self.geometry
    }

    pub fn extend(&self, lambda: &LabelFunction) -> Result<ExtensionResult, ReductionError> {
        precondition(self.t, lambda, self.cfg)?;
        Ok(ExtensionResult {
            config: self.cfg,
            t_star: self.t_star.clone(),
            lambda_star: extend_labels(lambda, &self.outer_labels)?,
            provenance: self.provenance.clone(),
            inner_vertices: self.t.vertex_count(),
        })
    }

    /// Same checks as [`verify_extension`] for `λ* = extend(λ)`.
    pub fn verify(&self, lambda: &LabelFunction) -> Result<ValidationReport, ReductionError> {
        let lambda_star = extend_labels(lambda, &self.outer_labels)?;
        let mut report = self.geometry.clone();
        report.merge(label_checks(&lambda_star, self.t, lambda, &self.boundary, &self.shell_edges));
        Ok(report)
    }

    pub fn reduce(&self, lambda: &LabelFunction) -> Result<Witness, ReductionError> {
        precondition(self.t, lambda, self.cfg)?;
        let lambda_star = extend_labels(lambda, &self.outer_labels)?;
        let mut report = self.geometry.clone();
        report.merge(label_checks(&lambda_star, self.t, lambda, &self.boundary, &self.shell_edges));
        if !report.ok() {
            return Err(ReductionError::Verification(report));
        }
        tucker_in_inner(&self.t_star, &lambda_star, self.t, self.t.vertex_count())
    }
}

/// Codomain every configuration uses in dimension `n`.
pub fn codomain(n: usize) -> LabelSetDescriptor {
    LabelSetDescriptor::cross(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{barycentric_subdivide, cross_standard, freudenthal_cube, random_labelling};
    use crate::rational::int;

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn orthant_cells() {
        let cells = slice_shell_by_orthants(ShellConfig::OctInOct, 2).unwrap();
        assert_eq!(cells.len(), 4);
        let pos: BTreeSet<Point> = cells[0].corners.iter().cloned().collect();
        assert_eq!(pos, pts(&[&[1, 0], &[0, 1], &[2, 0], &[0, 2]]).into_iter().collect());
        let one = slice_shell_by_orthants(ShellConfig::OctInOct, 1).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(one[1].corners, pts(&[&[-1], &[-2]]));
        let three = slice_shell_by_orthants(ShellConfig::OctInOct, 3).unwrap();
        assert_eq!(three.len(), 8);
        assert!(three.iter().all(|c| c.corners.len() == 6));
        assert!(slice_shell_by_orthants(ShellConfig::CubeInOct, 3).is_err());
    }

    #[test]
    fn quadrilateral_pulls_at_2e1_first() {
        let cell = &slice_shell_by_orthants(ShellConfig::OctInOct, 2).unwrap()[0];
        let inner = vec![pts(&[&[1, 0]]), pts(&[&[0, 1]]), pts(&[&[1, 0], &[0, 1]])];
        let tris = pull_triangulate_cell(cell, &inner).unwrap();
        let as_sets: Vec<BTreeSet<Point>> = tris.into_iter().map(|t| t.into_iter().collect()).collect();
        assert_eq!(
            as_sets,
            vec![
                pts(&[&[1, 0], &[0, 1], &[2, 0]]).into_iter().collect(),
                pts(&[&[0, 1], &[0, 2], &[2, 0]]).into_iter().collect(),
            ]
        );
        // subdivided inner edge gives three triangles
        let mid = Point(vec![crate::rational::rat(1, 2), crate::rational::rat(1, 2)]);
        let inner2 = vec![
            pts(&[&[1, 0]]),
            pts(&[&[0, 1]]),
            vec![mid.clone()],
            vec![Point::from_ints(&[1, 0]), mid.clone()],
            vec![mid, Point::from_ints(&[0, 1])],
        ];
        assert_eq!(pull_triangulate_cell(cell, &inner2).unwrap().len(), 3);
        let seg = &slice_shell_by_orthants(ShellConfig::OctInOct, 1).unwrap()[0];
        assert_eq!(pull_triangulate_cell(seg, &[pts(&[&[1]])]).unwrap(), vec![pts(&[&[1], &[2]])]);
    }

    #[test]
    fn extend_cross2() {
        let t = cross_standard(2);
        let lambda = random_labelling(TheoremId::OctOct, &t, 2, 3).unwrap();
        let res = extend(&t, &lambda, ShellConfig::OctInOct).unwrap();
        assert_eq!(res.t_star.vertex_count(), 9);
        assert_eq!(res.t_star.maximal_simplices().len(), 12);
        assert_eq!(res.shell_simplices().count(), 8);
        let r = verify_extension(&res, &t, &lambda);
        assert!(r.ok(), "{r:?}");
        let w = reduce_and_find(&t, &lambda, ShellConfig::OctInOct).unwrap();
        assert!(t.contains(&w.simplex));
    }

    #[test]
    fn extend_segment() {
        let t = cross_standard(1);
        for center in [1i8, -1] {
            let labels = t
                .points()
                .iter()
                .map(|p| Label(vec![if p.0[0] == zero() { center } else { signum(&p.0[0]) }]))
                .collect();
            let lambda = LabelFunction::new(LabelSetDescriptor::cross(1), labels).unwrap();
            let res = extend(&t, &lambda, ShellConfig::OctInOct).unwrap();
            assert_eq!(res.shell_simplices().count(), 2);
            for v in res.t_star.vertex_ids().skip(t.vertex_count()) {
                let p = res.t_star.point(v);
                assert_eq!(res.lambda_star.label(v).0, vec![signum(&p.0[0])]);
            }
            assert!(verify_extension(&res, &t, &lambda).ok());
            let w = reduce_and_find(&t, &lambda, ShellConfig::OctInOct).unwrap();
            let origin = t.vertex_at(&Point::origin(1)).unwrap();
            assert!(w.simplex.contains(origin));
        }
    }

    #[test]
    fn refined_inner_gives_twelve_shell_triangles() {
        let t = barycentric_subdivide(&cross_standard(2));
        let lambda = random_labelling(TheoremId::OctOct, &t, 2, 11).unwrap();
        let res = extend(&t, &lambda, ShellConfig::OctInOct).unwrap();
        assert_eq!(res.shell_simplices().count(), 12);
        assert!(verify_extension(&res, &t, &lambda).ok());
    }

    #[test]
    fn cube_configs_n2() {
        let t = freudenthal_cube(2, 1);
        let lambda = random_labelling(TheoremId::CubOct, &t, 2, 5).unwrap();
        let res = extend(&t, &lambda, ShellConfig::CubeInOct).unwrap();
        assert_eq!(res.t_star.domain().unwrap().scale, int(3));
        let r = verify_extension(&res, &t, &lambda);
        assert!(r.ok(), "{r:?}");
        reduce_and_find(&t, &lambda, ShellConfig::CubeInOct).unwrap();

        let t = cross_standard(2);
        let lambda = random_labelling(TheoremId::OctOct, &t, 2, 5).unwrap();
        let res = extend(&t, &lambda, ShellConfig::OctInCube).unwrap();
        let r = verify_extension(&res, &t, &lambda);
        assert!(r.ok(), "{r:?}");
        reduce_and_find(&t, &lambda, ShellConfig::OctInCube).unwrap();
    }

    #[test]
    fn tampered_results_are_caught() {
        let t = cross_standard(2);
        let lambda = random_labelling(TheoremId::OctOct, &t, 2, 1).unwrap();
        let res = extend(&t, &lambda, ShellConfig::OctInOct).unwrap();

        let mut bad = res.clone();
        let v = bad.t_star.vertex_at(&Point::from_ints(&[2, 0])).unwrap();
        let mut labels = bad.lambda_star.labels().to_vec();
        labels[v.index()] = Label(vec![-1, 0]);
        bad.lambda_star = LabelFunction::new(lambda.codomain(), labels).unwrap();
        assert!(verify_extension(&bad, &t, &lambda).has(ViolationKind::Antipodal));

        let mut crossing = res.clone();
        let a = crossing.t_star.vertex_at(&Point::from_ints(&[2, 0])).unwrap();
        let b = crossing.t_star.vertex_at(&Point::from_ints(&[-2, 0])).unwrap();
        let mut simplices = crossing.t_star.simplices().clone();
        simplices.extend(Simplex::new(vec![a, b]).unwrap().faces());
        crossing.t_star = crossing.t_star.with_simplices(simplices, false);
        assert!(verify_extension(&crossing, &t, &lambda).has(ViolationKind::OrthantSeparation));
    }

    #[test]
    fn reducer_matches_one_shot() {
        let t = barycentric_subdivide(&cross_standard(2));
        let red = Reducer::new(&t, ShellConfig::OctInOct).unwrap();
        assert!(red.geometry().ok());
        for seed in 0..5 {
            let lambda = random_labelling(TheoremId::OctOct, &t, 2, seed).unwrap();
            let res = extend(&t, &lambda, ShellConfig::OctInOct).unwrap();
            assert_eq!(red.extend(&lambda).unwrap().lambda_star, res.lambda_star);
            assert_eq!(red.verify(&lambda).unwrap(), verify_extension(&res, &t, &lambda));
            assert_eq!(red.reduce(&lambda).unwrap(), reduce_and_find(&t, &lambda, ShellConfig::OctInOct).unwrap());
        }
    }

    #[test]
    fn precondition_enforced() {
        let t = cross_standard(2);
        let lambda = LabelFunction::new(LabelSetDescriptor::cross(2), vec![Label(vec![-1, 0]); t.vertex_count()]).unwrap();
        assert!(matches!(extend(&t, &lambda, ShellConfig::OctInOct), Err(ReductionError::Precondition(_))));
    }

    #[test]
    fn config_names() {
        for c in [ShellConfig::OctInOct, ShellConfig::CubeInOct, ShellConfig::OctInCube] {
            assert_eq!(c.to_string().parse::<ShellConfig>().unwrap(), c);
        }
    }
}
