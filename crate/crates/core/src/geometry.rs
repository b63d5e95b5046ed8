//! Exact convex-geometry primitives: points, the three polytope families,
//! point location, tight constraints, and LP-backed hull/intersection tests.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{LinearProgram, LpSolution, Relation};
use crate::rational::{self, int, one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the polytope")]
    Outside,
    #[error("empty point list")]
    EmptyPointList,
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("polytope dimension must be at least 1")]
    ZeroDimension,
}

/// Dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(#[serde(with = "rational::pq_vec")] pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Point(v.iter().map(|&x| int(x)).collect())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![zero(); n])
    }

    /// `sign * scale * e_axis` in `R^n` (axis is 0-based).
    pub fn axis(n: usize, axis: usize, value: Rational) -> Self {
        let mut p = Point::origin(n);
        p.0[axis] = value;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn neg(&self) -> Point {
        Point(self.0.iter().map(|q| -q).collect())
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, s: &Rational) -> Point {
        Point(self.0.iter().map(|q| q * s).collect())
    }

    pub fn l1_norm(&self) -> Rational {
        self.0.iter().fold(zero(), |acc, q| acc + q.abs())
    }

    pub fn linf_norm(&self) -> Rational {
        self.0.iter().map(|q| q.abs()).max().unwrap_or_else(zero)
    }

    /// Coordinate-wise mean of the given points.
    pub fn barycenter<'a>(points: impl IntoIterator<Item = &'a Point>) -> Point {
        let mut it = points.into_iter();
        let first = it.next().expect("barycenter of empty set");
        let mut acc = first.0.clone();
        let mut k = 1i64;
        for p in it {
            for (a, b) in acc.iter_mut().zip(&p.0) {
                *a += b;
            }
            k += 1;
        }
        let k = int(k);
        Point(acc.into_iter().map(|q| q / &k).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PolytopeKind {
    /// `Δ^n` in `R^{n+1}`: nonnegative coordinates summing to `scale`.
    Simplex,
    /// `scale · ◇^n`, the ℓ1 ball.
    Cross,
    /// `scale · □^n`, the ℓ∞ ball.
    Cube,
}

impl fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolytopeKind::Simplex => "SIMPLEX",
            PolytopeKind::Cross => "CROSS",
            PolytopeKind::Cube => "CUBE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolytopeDescriptor {
    pub kind: PolytopeKind,
    pub dim: usize,
    pub scale: Rational,
}

impl fmt::Display for PolytopeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of dimension {} and scale {}", self.kind, self.dim, self.scale)
    }
}

/// A tight defining inequality of one of the polytope families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// Cross-polytope facet `v·x = scale` for `v ∈ {±1}^n`.
    Facet(Vec<i8>),
    /// Cube facet `x_coord = sign · scale` (coord 0-based).
    Bound { coord: usize, sign: i8 },
    /// Simplex facet `x_coord = 0` (coord 0-based).
    Zero(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

impl PolytopeDescriptor {
    pub fn new(kind: PolytopeKind, dim: usize) -> Self {
        PolytopeDescriptor { kind, dim, scale: one() }
    }

    pub fn scaled(kind: PolytopeKind, dim: usize, scale: Rational) -> Result<Self, GeometryError> {
        if !scale.is_positive() {
            return Err(GeometryError::NonPositiveScale);
        }
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(PolytopeDescriptor { kind, dim, scale })
    }

    pub fn simplex(dim: usize) -> Self {
        Self::new(PolytopeKind::Simplex, dim)
    }

    pub fn cross(dim: usize) -> Self {
        Self::new(PolytopeKind::Cross, dim)
    }

    pub fn cube(dim: usize) -> Self {
        Self::new(PolytopeKind::Cube, dim)
    }

    /// Length of coordinate vectors for points of this polytope.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            PolytopeKind::Simplex => self.dim + 1,
            _ => self.dim,
        }
    }

    pub fn is_origin_symmetric(&self) -> bool {
        self.kind != PolytopeKind::Simplex
    }

    /// Volume of the polytope. For simplices this is measured after dropping
    /// the last coordinate, consistent with [`simplex_volume_in`].
    pub fn volume(&self) -> Rational {
        let n = self.dim as u32;
        let s_pow = num_traits::pow(self.scale.clone(), n as usize);
        let fact = int(factorial(self.dim) as i64);
        match self.kind {
            PolytopeKind::Simplex => s_pow / fact,
            PolytopeKind::Cross => s_pow * int(1i64 << n) / fact,
            PolytopeKind::Cube => s_pow * int(1i64 << n),
        }
    }

    pub fn extreme_points(&self) -> Vec<Point> {
        let n = self.dim;
        let s = &self.scale;
        match self.kind {
            PolytopeKind::Simplex => (0..=n).map(|i| Point::axis(n + 1, i, s.clone())).collect(),
            PolytopeKind::Cross => (0..n)
                .flat_map(|i| [Point::axis(n, i, s.clone()), Point::axis(n, i, -s)])
                .collect(),
            PolytopeKind::Cube => sign_vectors(n)
                .into_iter()
                .map(|v| Point(v.iter().map(|&e| int(e as i64) * s).collect()))
                .collect(),
        }
    }

    /// Inequalities `a·x <= b` describing the polytope (equalities excluded).
    fn inequalities(&self) -> Vec<(Vec<Rational>, Rational)> {
        let n = self.dim;
        match self.kind {
            PolytopeKind::Simplex => (0..=n)
                .map(|i| {
                    let mut a = vec![zero(); n + 1];
                    a[i] = -one();
                    (a, zero())
                })
                .collect(),
            PolytopeKind::Cross => sign_vectors(n)
                .into_iter()
                .map(|v| (v.iter().map(|&e| int(e as i64)).collect(), self.scale.clone()))
                .collect(),
            PolytopeKind::Cube => (0..n)
                .flat_map(|i| {
                    [1i64, -1].map(|sg| {
                        let mut a = vec![zero(); n];
                        a[i] = int(sg);
                        (a, self.scale.clone())
                    })
                })
                .collect(),
        }
    }

    fn check_dim(&self, x: &Point) -> Result<(), GeometryError> {
        if x.dim() != self.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All vectors in `{+1,-1}^n`, ordered lexicographically with `+1` first.
pub fn sign_vectors(n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        out.push(
            (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 0 { 1 } else { -1 })
                .collect(),
        );
    }
    out
}

fn dot_signs(v: &[i8], x: &Point) -> Rational {
    v.iter().zip(&x.0).fold(zero(), |acc, (&s, q)| match s {
        1 => acc + q,
        -1 => acc - q,
        _ => acc,
    })
}

pub fn point_location(p: &PolytopeDescriptor, x: &Point) -> Result<Location, GeometryError> {
    p.check_dim(x)?;
    let s = &p.scale;
    let loc = match p.kind {
        PolytopeKind::Simplex => {
            let sum = x.0.iter().fold(zero(), |a, q| a + q);
            if &sum != s || x.0.iter().any(|q| q.is_negative()) {
                Location::Outside
            } else if x.0.iter().any(|q| q.is_zero()) {
                Location::Boundary
            } else {
                Location::Interior
            }
        }
        PolytopeKind::Cross => classify(&x.l1_norm(), s),
        PolytopeKind::Cube => classify(&x.linf_norm(), s),
    };
    Ok(loc)
}

fn classify(norm: &Rational, scale: &Rational) -> Location {
    match norm.cmp(scale) {
        std::cmp::Ordering::Less => Location::Interior,
        std::cmp::Ordering::Equal => Location::Boundary,
        std::cmp::Ordering::Greater => Location::Outside,
    }
}

/// Tight constraints at `x`; empty iff `x` is interior.
pub fn active_constraints(
    p: &PolytopeDescriptor,
    x: &Point,
) -> Result<BTreeSet<Constraint>, GeometryError> {
    if point_location(p, x)? == Location::Outside {
        return Err(GeometryError::Outside);
    }
    let s = &p.scale;
    let out = match p.kind {
        PolytopeKind::Simplex => x
            .0
            .iter()
            .enumerate()
            .filter(|(_, q)| q.is_zero())
            .map(|(i, _)| Constraint::Zero(i))
            .collect(),
        PolytopeKind::Cross => sign_vectors(p.dim)
            .into_iter()
            .filter(|v| &dot_signs(v, x) == s)
            .map(Constraint::Facet)
            .collect(),
        PolytopeKind::Cube => x
            .0
            .iter()
            .enumerate()
            .filter_map(|(i, q)| {
                if q == s {
                    Some(Constraint::Bound { coord: i, sign: 1 })
                } else if *q == -s {
                    Some(Constraint::Bound { coord: i, sign: -1 })
                } else {
                    None
                }
            })
            .collect(),
    };
    Ok(out)
}

fn check_points(points: &[Point], dim: usize) -> Result<(), GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointList);
    }
    if let Some(bad) = points.iter().find(|q| q.dim() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            got: bad.dim(),
        });
    }
    Ok(())
}

/// True iff some convex combination of `points` lies strictly inside `p`
/// (relative interior for simplices). Solved as `max ε` with every facet
/// inequality tightened by `ε`.
pub fn hull_meets_interior(points: &[Point], p: &PolytopeDescriptor) -> Result<bool, GeometryError> {
    let n = p.ambient_dim();
    check_points(points, n)?;
    let k = points.len();
    // variables: weights w_0..w_{k-1}, eps_plus, eps_minus
    let nv = k + 2;
    let mut lp = LinearProgram::new(nv);
    let mut obj = vec![zero(); nv];
    obj[k] = one();
    obj[k + 1] = -one();
    lp.maximize(obj);
    let mut sum_w = vec![zero(); nv];
    for w in sum_w.iter_mut().take(k) {
        *w = one();
    }
    lp.constrain(sum_w, Relation::Eq, one());
    for (a, b) in p.inequalities() {
        let mut row = vec![zero(); nv];
        for (j, pt) in points.iter().enumerate() {
            row[j] = a.iter().zip(&pt.0).fold(zero(), |acc, (ai, xi)| acc + ai * xi);
        }
        row[k] = one();
        row[k + 1] = -one();
        lp.constrain(row, Relation::Le, b);
    }
    if p.kind == PolytopeKind::Simplex {
        let mut row = vec![zero(); nv];
        for (j, pt) in points.iter().enumerate() {
            row[j] = pt.0.iter().fold(zero(), |a, q| a + q);
        }
        lp.constrain(row, Relation::Eq, p.scale.clone());
    }
    Ok(match lp.solve() {
        LpSolution::Optimal { value, .. } => value.is_positive(),
        LpSolution::Unbounded => true,
        LpSolution::Infeasible => false,
    })
}

/// True iff `target ∈ conv(points)`.
pub fn hull_contains_point(points: &[Point], target: &Point) -> Result<bool, GeometryError> {
    check_points(points, target.dim())?;
    let k = points.len();
    let mut lp = LinearProgram::new(k);
    lp.constrain(vec![one(); k], Relation::Eq, one());
    for c in 0..target.dim() {
        let row = points.iter().map(|pt| pt.0[c].clone()).collect();
        lp.constrain(row, Relation::Eq, target.0[c].clone());
    }
    Ok(lp.solve().is_feasible())
}

/// Rank of a matrix given as rows (Gaussian elimination over Q).
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for j in c..cols {
                let d = &f * &m[rank][j];
                m[r][j] -= d;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Dimension of the affine hull of the points (`-1` for none is reported as 0).
pub fn affine_rank(points: &[Point]) -> usize {
    match points.split_first() {
        None => 0,
        Some((base, rest)) => {
            let diffs: Vec<Vec<Rational>> = rest.iter().map(|p| p.sub(base)).collect();
            rank(&diffs)
        }
    }
}

pub fn affinely_independent(points: &[Point]) -> bool {
    !points.is_empty() && affine_rank(points) + 1 == points.len()
}

/// Determinant of a square matrix (fraction-free enough for tiny sizes).
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for j in c..n {
                let d = &f * &m[c][j];
                m[r][j] -= d;
            }
        }
    }
    det
}

/// Signed `d!`-scaled volume `det(p_1 - p_0, …, p_d - p_0)` of a full-dimensional
/// simplex given by `d + 1` points in `R^d`.
pub fn orientation(points: &[&Point]) -> Rational {
    let base = points[0];
    let rows = points[1..].iter().map(|p| p.sub(base)).collect();
    determinant(rows)
}

/// Unsigned volume of a full-dimensional simplex, after dropping the last
/// `drop` coordinates of every point.
pub fn simplex_volume_in(points: &[&Point], drop: usize) -> Rational {
    let d = points.len() - 1;
    let projected: Vec<Point> = points
        .iter()
        .map(|p| Point(p.0[..p.dim() - drop].to_vec()))
        .collect();
    let refs: Vec<&Point> = projected.iter().collect();
    debug_assert_eq!(projected[0].dim(), d);
    orientation(&refs).abs() / int(factorial(d) as i64)
}

/// True iff `conv(s1) ∩ conv(s2) = conv(shared vertices)`, i.e. the two
/// simplices meet in a common face. Shared vertices are detected by exact
/// coordinate equality.
pub fn simplex_pair_ok(s1: &[Point], s2: &[Point]) -> Result<bool, GeometryError> {
    if s1.is_empty() || s2.is_empty() {
        return Err(GeometryError::EmptyPointList);
    }
    let dim = s1[0].dim();
    check_points(s1, dim)?;
    check_points(s2, dim)?;
    if !affinely_independent(s1) || !affinely_independent(s2) {
        return Err(GeometryError::AffinelyDependent);
    }
    let shared1: Vec<bool> = s1.iter().map(|p| s2.contains(p)).collect();
    Ok(!meets_outside_shared(s1, s2, &shared1))
}

/// LP core of the pair test: is there a common point whose (unique) barycentric
/// coordinates in `s1` put positive weight on a vertex not flagged shared?
pub(crate) fn meets_outside_shared(s1: &[Point], s2: &[Point], shared1: &[bool]) -> bool {
    if shared1.iter().all(|&b| b) {
        return false;
    }
    let (k1, k2) = (s1.len(), s2.len());
    let dim = s1[0].dim();
    let nv = k1 + k2;
    let mut lp = LinearProgram::new(nv);
    let mut obj = vec![zero(); nv];
    for (i, &sh) in shared1.iter().enumerate() {
        if !sh {
            obj[i] = one();
        }
    }
    lp.maximize(obj);
    let mut r1 = vec![zero(); nv];
    let mut r2 = vec![zero(); nv];
    for q in r1.iter_mut().take(k1) {
        *q = one();
    }
    for q in r2.iter_mut().skip(k1) {
        *q = one();
    }
    lp.constrain(r1, Relation::Eq, one());
    lp.constrain(r2, Relation::Eq, one());
    for c in 0..dim {
        let mut row = vec![zero(); nv];
        for (j, p) in s1.iter().enumerate() {
            row[j] = p.0[c].clone();
        }
        for (j, p) in s2.iter().enumerate() {
            row[k1 + j] = -&p.0[c];
        }
        lp.constrain(row, Relation::Eq, zero());
    }
    match lp.solve() {
        LpSolution::Optimal { value, .. } => value.is_positive(),
        LpSolution::Infeasible => false,
        LpSolution::Unbounded => unreachable!("weights are bounded"),
    }
}
