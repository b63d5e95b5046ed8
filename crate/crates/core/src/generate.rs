//! Deterministic triangulation generators, hemisphere chains and seeded
//! random labellings.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{
    boundary_complex, check_antipodal_symmetry, combinatorial_boundary, ComplexError, Simplex,
    Triangulation, TriangulationBuilder,
};
use crate::geometry::{sign_vectors, Point, PolytopeDescriptor, PolytopeKind};
use crate::labels::{Label, LabelFunction, LabelSetDescriptor};
use crate::rational::{int, one, rat, zero};
use crate::report::{ValidationReport, Violation, ViolationKind};
use crate::theorems::{Checker, TheoremError, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("cannot parse generator spec {0:?}")]
    Parse(String),
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error("hemisphere chains need a cross-polytope domain")]
    NotCross,
    #[error("hemisphere chain conditions fail")]
    Chain(ValidationReport),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    CrossStandard { n: usize },
    FreudenthalCube { n: usize, k: usize },
    GridSimplex { n: usize, k: usize },
    Barycentric { inner: Box<GeneratorSpec>, rounds: usize },
}

impl GeneratorSpec {
    pub fn dim(&self) -> usize {
        match self {
            GeneratorSpec::CrossStandard { n }
            | GeneratorSpec::FreudenthalCube { n, .. }
            | GeneratorSpec::GridSimplex { n, .. } => *n,
            GeneratorSpec::Barycentric { inner, .. } => inner.dim(),
        }
    }

    pub fn domain_kind(&self) -> PolytopeKind {
        match self {
            GeneratorSpec::CrossStandard { .. } => PolytopeKind::Cross,
            GeneratorSpec::FreudenthalCube { .. } => PolytopeKind::Cube,
            GeneratorSpec::GridSimplex { .. } => PolytopeKind::Simplex,
            GeneratorSpec::Barycentric { inner, .. } => inner.domain_kind(),
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        let bad = |m: &str| Err(GenerateError::Parameter(m.to_string()));
        match self {
            GeneratorSpec::CrossStandard { n } if *n == 0 => bad("n must be at least 1"),
            GeneratorSpec::FreudenthalCube { n, k } | GeneratorSpec::GridSimplex { n, k } => {
                if *n == 0 {
                    bad("n must be at least 1")
                } else if *k == 0 {
                    bad("k must be at least 1")
                } else {
                    Ok(())
                }
            }
            GeneratorSpec::Barycentric { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::CrossStandard { n } => write!(f, "cross:{n}"),
            GeneratorSpec::FreudenthalCube { n, k } => write!(f, "cube:{n}:k={k}"),
            GeneratorSpec::GridSimplex { n, k } => write!(f, "simplex:{n}:k={k}"),
            GeneratorSpec::Barycentric { inner, rounds } => write!(f, "bary({inner},rounds={rounds})"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GenerateError;

    /// `cross:N`, `cube:N[:k=K]`, `simplex:N[:k=K]`, `bary(SPEC[,rounds=R])`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GenerateError::Parse(s.to_string());
        let t = s.trim();
        let spec = if let Some(body) = t.strip_prefix("bary(").and_then(|b| b.strip_suffix(')')) {
            let (inner, rounds) = match body.rsplit_once(',') {
                Some((i, r)) if r.trim().starts_with("rounds=") => {
                    let r = r.trim()["rounds=".len()..].parse().map_err(|_| err())?;
                    (i, r)
                }
                _ => (body, 1),
            };
            GeneratorSpec::Barycentric {
                inner: Box::new(inner.parse()?),
                rounds,
            }
        } else {
            let parts: Vec<&str> = t.split(':').map(str::trim).collect();
            let n: usize = parts.get(1).ok_or_else(err)?.parse().map_err(|_| err())?;
            let k = match parts.get(2) {
                Some(p) => p.strip_prefix("k=").ok_or_else(err)?.parse().map_err(|_| err())?,
                None => 1,
            };
            if parts.len() > 3 {
                return Err(err());
            }
            match parts[0] {
                "cross" if parts.len() == 2 => GeneratorSpec::CrossStandard { n },
                "cube" => GeneratorSpec::FreudenthalCube { n, k },
                "simplex" => GeneratorSpec::GridSimplex { n, k },
                _ => return Err(err()),
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Triangulation, GenerateError> {
    spec.validate()?;
    Ok(match spec {
        GeneratorSpec::CrossStandard { n } => cross_standard(*n),
        GeneratorSpec::FreudenthalCube { n, k } => freudenthal_cube(*n, *k),
        GeneratorSpec::GridSimplex { n, k } => grid_simplex(*n, *k),
        GeneratorSpec::Barycentric { inner, rounds } => {
            let mut t = generate(inner)?;
            for _ in 0..*rounds {
                t = barycentric_subdivide(&t);
            }
            t
        }
    })
}

/// One simplex `conv{0, s_1 e_1, …, s_n e_n}` per orthant.
pub fn cross_standard(n: usize) -> Triangulation {
    let mut b = TriangulationBuilder::new();
    b.vertex(Point::origin(n));
    for i in 0..n {
        b.vertex(Point::axis(n, i, one()));
        b.vertex(Point::axis(n, i, -one()));
    }
    for signs in sign_vectors(n) {
        let mut pts = vec![Point::origin(n)];
        pts.extend(signs.iter().enumerate().map(|(i, &s)| Point::axis(n, i, int(s as i64))));
        b.simplex(pts).expect("distinct vertices");
    }
    b.build(Some(PolytopeDescriptor::cross(n))).expect("valid construction")
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Integer grid cells `{0..k-1}^n` in lexicographic order.
fn grid_cells(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    loop {
        out.push(a.clone());
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            a[p] += 1;
            if a[p] < k {
                break;
            }
            a[p] = 0;
        }
    }
}

/// Staircase simplices of the unit cell at integer corner `a`, as integer
/// grid points.
fn staircase(a: &[usize]) -> Vec<Vec<Vec<usize>>> {
    permutations(a.len())
        .into_iter()
        .map(|perm| {
            let mut cur = a.to_vec();
            let mut verts = vec![cur.clone()];
            for &axis in &perm {
                cur[axis] += 1;
                verts.push(cur.clone());
            }
            verts
        })
        .collect()
}

/// Kuhn/Freudenthal triangulation of `[-1, 1]^n` on a grid of `k` steps per
/// axis: `n!` simplices per cell.
pub fn freudenthal_cube(n: usize, k: usize) -> Triangulation {
    let coord = |j: usize| rat(2 * j as i64 - k as i64, k as i64);
    let mut b = TriangulationBuilder::new();
    for a in grid_cells(n, k) {
        for verts in staircase(&a) {
            b.simplex(verts.iter().map(|g| Point(g.iter().map(|&j| coord(j)).collect())))
                .expect("distinct vertices");
        }
    }
    b.build(Some(PolytopeDescriptor::cube(n))).expect("valid construction")
}

/// Edgewise subdivision of the standard simplex `Δ^n ⊂ R^{n+1}` into `k^n`
/// simplices: the Freudenthal simplices of the order region
/// `1 ≥ y_1 ≥ … ≥ y_n ≥ 0`, mapped by `x_1 = 1 - y_1`, `x_j = y_{j-1} - y_j`,
/// `x_{n+1} = y_n`.
pub fn grid_simplex(n: usize, k: usize) -> Triangulation {
    let kk = k as i64;
    let map = |g: &[usize]| -> Point {
        let y: Vec<i64> = g.iter().map(|&j| j as i64).collect();
        let mut x = Vec::with_capacity(n + 1);
        x.push(rat(kk - y[0], kk));
        for j in 1..n {
            x.push(rat(y[j - 1] - y[j], kk));
        }
        x.push(rat(y[n - 1], kk));
        Point(x)
    };
    let mut b = TriangulationBuilder::new();
    for a in grid_cells(n, k) {
        for verts in staircase(&a) {
            // barycenter ordering, scaled by n+1 to stay integral
            let sums: Vec<usize> = (0..n).map(|c| verts.iter().map(|v| v[c]).sum()).collect();
            if sums.windows(2).all(|w| w[0] >= w[1]) {
                b.simplex(verts.iter().map(|g| map(g))).expect("distinct vertices");
            }
        }
    }
    b.build(Some(PolytopeDescriptor::simplex(n))).expect("valid construction")
}

/// Replaces every maximal `d`-simplex by the `(d+1)!` simplices spanned by
/// barycenters of its complete face flags. Vertex ids of `t` are preserved.
pub fn barycentric_subdivide(t: &Triangulation) -> Triangulation {
    let mut b = TriangulationBuilder::extending(t);
    for s in t.maximal_simplices() {
        let pts = t.simplex_points(s);
        for perm in permutations(pts.len()) {
            let chain: Vec<Point> = (1..=perm.len())
                .map(|len| Point::barycenter(perm[..len].iter().map(|&i| &pts[i])))
                .collect();
            let ids = chain.into_iter().map(|p| b.vertex(p)).collect();
            b.add(Simplex::new(ids).expect("distinct barycenters"));
        }
    }
    let mut out = b.build(t.domain().cloned()).expect("valid construction");
    if t.is_boundary_complex() {
        out = out.with_simplices(out.simplices().clone(), true);
    }
    out
}

/// `levels[i] = T^i` for `i = 0..=n`; all levels share the vertex table of `T`.
#[derive(Clone, Debug)]
pub struct HemisphereChain {
    levels: Vec<Triangulation>,
}

impl HemisphereChain {
    pub fn n(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Triangulation {
        &self.levels[i]
    }

    pub fn top(&self) -> &Triangulation {
        &self.levels[self.n()]
    }

    /// Number of simplices of each level, for `i = 0..=n`.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.simplices().len()).collect()
    }

    /// Boundary of `T^i`: geometric at the top level, combinatorial below.
    pub fn boundary(&self, i: usize) -> BTreeSet<Simplex> {
        combinatorial_boundary(self.levels[i].simplices())
    }

    /// Re-checks both chain equalities and per-level antipodal symmetry of the
    /// boundary.
    pub fn verify(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let reflect = |t: &Triangulation, set: &BTreeSet<Simplex>| -> Option<BTreeSet<Simplex>> {
            set.iter().map(|s| t.reflect(s)).collect()
        };
        let top = self.top();
        for i in 1..=self.n() {
            let upper = self.levels[i - 1].simplices();
            let Some(lower) = reflect(top, upper) else {
                report.push(Violation::new(
                    ViolationKind::Chain,
                    format!("level {} has a vertex without antipode", i - 1),
                ));
                continue;
            };
            let union: BTreeSet<Simplex> = upper.union(&lower).cloned().collect();
            let inter: BTreeSet<Simplex> = upper.intersection(&lower).cloned().collect();
            if union != self.boundary(i) {
                report.push(Violation::new(
                    ViolationKind::Chain,
                    format!("T^{0} and its reflection do not cover the boundary of T^{i}", i - 1),
                ));
            }
            if inter != self.boundary(i - 1) {
                report.push(Violation::new(
                    ViolationKind::Chain,
                    format!("T^{0} meets its reflection outside its boundary", i - 1),
                ));
            }
            let bd = self.boundary(i);
            if let Some(rb) = reflect(top, &bd) {
                if rb != bd {
                    report.push(Violation::new(
                        ViolationKind::Antipodal,
                        format!("boundary of T^{i} is not antipodally symmetric"),
                    ));
                }
            }
        }
        report
    }
}

/// Upper-hemisphere chain of a triangulated cross-polytope: `T^{i-1}` is the
/// set of simplices of `∂T^i` whose vertices all have `x_i ≥ 0`.
pub fn hemisphere_chain(t: &Triangulation) -> Result<HemisphereChain, GenerateError> {
    let domain = t.domain().ok_or(GenerateError::NotCross)?;
    if domain.kind != PolytopeKind::Cross {
        return Err(GenerateError::NotCross);
    }
    let n = domain.dim;
    let geometric = boundary_complex(t)?;
    let mut levels = vec![t.clone()];
    let mut boundary: BTreeSet<Simplex> = geometric.simplices().clone();
    for i in (1..=n).rev() {
        let upper: BTreeSet<Simplex> = boundary
            .iter()
            .filter(|s| s.vertices().iter().all(|&v| t.point(v).0[i - 1] >= zero()))
            .cloned()
            .collect();
        let level = t.with_simplices(upper, false);
        boundary = combinatorial_boundary(level.simplices());
        levels.push(level);
    }
    levels.reverse();
    let chain = HemisphereChain { levels };
    let report = chain.verify();
    if !report.ok() {
        return Err(GenerateError::Chain(report));
    }
    if !check_antipodal_symmetry(&geometric).ok() {
        return Err(GenerateError::Chain(check_antipodal_symmetry(&geometric)));
    }
    Ok(chain)
}

/// Uniform sample among label functions satisfying the theorem's hypotheses.
/// Antipodal boundary pairs are labelled through their smaller-id member.
pub fn random_labelling(
    id: TheoremId,
    t: &Triangulation,
    m: usize,
    seed: u64,
) -> Result<LabelFunction, TheoremError> {
    let codomain = LabelSetDescriptor::new(id.codomain_kind(), m).map_err(TheoremError::Label)?;
    let checker = Checker::for_sampling(id, t, codomain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(checker.sample(&mut rng))
}

/// Picks uniformly from a nonempty slice.
pub(crate) fn pick<'a, R: rand::Rng>(rng: &mut R, options: &'a [Label]) -> &'a Label {
    options.choose(rng).expect("nonempty label list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate_triangulation;

    #[test]
    fn parse_and_display() {
        for s in ["cross:3", "cube:2:k=2", "simplex:2:k=3", "bary(cross:2,rounds=1)", "bary(bary(cube:2:k=1,rounds=1),rounds=2)"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("cube:2".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::FreudenthalCube { n: 2, k: 1 });
        assert!("cross:0".parse::<GeneratorSpec>().is_err());
        assert!("cube:2:k=0".parse::<GeneratorSpec>().is_err());
        assert!("torus:2".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn generator_counts() {
        let c = cross_standard(2);
        assert_eq!((c.vertex_count(), c.maximal_simplices().len()), (5, 4));
        assert_eq!(freudenthal_cube(2, 1).maximal_simplices().len(), 2);
        assert_eq!(freudenthal_cube(3, 2).maximal_simplices().len(), 48);
        assert_eq!(grid_simplex(2, 2).maximal_simplices().len(), 4);
        assert_eq!(grid_simplex(3, 2).maximal_simplices().len(), 8);
        for t in [c, freudenthal_cube(2, 3), grid_simplex(2, 3), grid_simplex(3, 2), cross_standard(3)] {
            let r = validate_triangulation(&t);
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn grid_simplex_k1_is_the_standard_triangle() {
        let t = grid_simplex(2, 1);
        let pts: BTreeSet<Point> = t.points().iter().cloned().collect();
        let expected: BTreeSet<Point> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| Point::from_ints(v))
            .collect();
        assert_eq!(pts, expected);
        let b = boundary_complex(&t).unwrap();
        assert_eq!(b.simplices_of_dim(1).count(), 3);
    }

    #[test]
    fn cube_boundary_k1() {
        let b = boundary_complex(&freudenthal_cube(2, 1)).unwrap();
        assert_eq!(b.simplices_of_dim(0).count(), 4);
        assert_eq!(b.simplices_of_dim(1).count(), 4);
    }

    #[test]
    fn barycentric_counts() {
        let tri = grid_simplex(2, 1);
        assert_eq!(barycentric_subdivide(&tri).maximal_simplices().len(), 6);
        let c = barycentric_subdivide(&cross_standard(2));
        assert_eq!(c.maximal_simplices().len(), 24);
        assert!(validate_triangulation(&c).ok());
        let seg = grid_simplex(1, 1);
        let twice = barycentric_subdivide(&barycentric_subdivide(&seg));
        assert_eq!(twice.maximal_simplices().len(), 4);
        // original ids survive
        let t = cross_standard(3);
        let s = barycentric_subdivide(&t);
        for v in t.vertex_ids() {
            assert_eq!(t.point(v), s.point(v));
        }
        assert!(check_antipodal_symmetry(&boundary_complex(&s).unwrap()).ok());
    }

    #[test]
    fn hemisphere_chain_cross2() {
        let t = cross_standard(2);
        let chain = hemisphere_chain(&t).unwrap();
        assert_eq!(chain.n(), 2);
        let e1 = t.vertex_at(&Point::from_ints(&[1, 0])).unwrap();
        assert_eq!(
            chain.level(0).simplices().iter().cloned().collect::<Vec<_>>(),
            vec![Simplex::vertex(e1)]
        );
        assert_eq!(chain.level(1).simplices_of_dim(1).count(), 2);
        assert!(chain
            .level(1)
            .simplices()
            .iter()
            .all(|s| s.vertices().iter().all(|&v| t.point(v).0[1] >= zero())));
    }

    #[test]
    fn hemisphere_chain_cross1_and_refined() {
        let chain = hemisphere_chain(&cross_standard(1)).unwrap();
        assert_eq!(chain.level(1).maximal_simplices().len(), 2);
        assert_eq!(chain.level(0).simplices().len(), 1);
        for spec in ["bary(cross:2,rounds=1)", "bary(cross:3,rounds=1)", "bary(cross:2,rounds=2)"] {
            let t = generate(&spec.parse().unwrap()).unwrap();
            let chain = hemisphere_chain(&t).unwrap();
            assert!(chain.verify().ok());
        }
        assert!(matches!(hemisphere_chain(&freudenthal_cube(2, 1)), Err(GenerateError::NotCross)));
    }
}
