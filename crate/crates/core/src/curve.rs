//! Newton–Okounkov bodies of semistable curves over a DVR, computed from the
//! dual graph, the specialized divisor and the flag data.
//!
//! Each body is computed twice: by a parametric LP over the linear system,
//! and by Fourier–Motzkin projection of a lifted polyhedron onto the plane.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Divisor, Graph};
use crate::linsys::{
    build_system, enriched_system, laplacian_rows, minimal_element, EnrichedSystemSpec, LinearSystemSpec,
};
use crate::poly::{
    enumerate_v_rep, parametric_value_function, project_onto, Constraint, ParametricFamily,
    PiecewiseLinearFunction, Sense, Shape, Upper, VPolyhedron, VRepOutcome,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalFlag<T> {
    /// Specialization `Λ₁` of the horizontal divisor `Y₁`.
    pub y1: Divisor<T>,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArakelovFlag {
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveFlag<T> {
    Tropical(TropicalFlag<T>),
    Arakelov(ArakelovFlag),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveBodyJob<T> {
    pub graph: Graph,
    pub lambda: Divisor<T>,
    pub flag: CurveFlag<T>,
}

impl<T: Scalar> CurveBodyJob<T> {
    pub fn new(graph: Graph, lambda: Divisor<T>, flag: CurveFlag<T>) -> Result<Self> {
        lambda.check_len(&graph)?;
        let vertex = match &flag {
            CurveFlag::Tropical(f) => {
                f.y1.check_len(&graph)?;
                f.vertex
            }
            CurveFlag::Arakelov(f) => f.vertex,
        };
        if vertex >= graph.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{vertex}")));
        }
        Ok(CurveBodyJob { graph, lambda, flag })
    }

    pub fn body(&self) -> Result<NOBody2D<T>> {
        match &self.flag {
            CurveFlag::Tropical(f) => tropical_body(&self.graph, &self.lambda, f),
            CurveFlag::Arakelov(f) => arakelov_body(&self.graph, &self.lambda, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyKind {
    /// `{(t, y) : t ∈ dom a, y ≥ a(t)}`.
    Overgraph,
    /// `{(t, y) : t ∈ dom b, 0 ≤ y ≤ b(t)}`.
    Band,
}

/// A planar Newton–Okounkov body given by its boundary functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NOBody2D<T> {
    pub kind: BodyKind,
    /// `a` for an overgraph, the zero function for a band.
    pub lower: PiecewiseLinearFunction<T>,
    /// `b` for a band.
    pub upper: Option<PiecewiseLinearFunction<T>>,
    /// Lattice direction along which the body is closed under translation.
    pub recession: [T; 2],
    pub warnings: Vec<String>,
}

impl<T: Scalar> NOBody2D<T> {
    fn overgraph(a: PiecewiseLinearFunction<T>, warnings: Vec<String>) -> Self {
        NOBody2D {
            kind: BodyKind::Overgraph,
            lower: a,
            upper: None,
            recession: [T::zero(), T::one()],
            warnings,
        }
    }

    fn band(b: PiecewiseLinearFunction<T>, warnings: Vec<String>) -> Self {
        let zero = PiecewiseLinearFunction::constant(b.start().clone(), b.end().clone(), T::zero());
        NOBody2D {
            kind: BodyKind::Band,
            lower: zero,
            upper: Some(b),
            recession: [T::one(), T::zero()],
            warnings,
        }
    }

    /// The function describing the body: `a` or `b`.
    pub fn boundary(&self) -> &PiecewiseLinearFunction<T> {
        self.upper.as_ref().unwrap_or(&self.lower)
    }

    pub fn contains(&self, p: &[T; 2]) -> bool {
        let [t, y] = p;
        let Some(lo) = self.lower.eval(t) else {
            return false;
        };
        match &self.upper {
            None => *y >= lo,
            Some(b) => *y >= lo && b.eval(t).is_some_and(|hi| *y <= hi),
        }
    }

    /// Image of the body under the projection killing the recession direction:
    /// the `t`-range of an overgraph, the `y`-range of a band.
    pub fn projection_along_recession(&self) -> (T, Upper<T>) {
        match self.kind {
            BodyKind::Overgraph => (self.lower.start().clone(), self.lower.end().clone()),
            BodyKind::Band => {
                let b = self.boundary();
                match b.sup() {
                    Some(s) => (T::zero(), Upper::Finite(s)),
                    None => (T::zero(), Upper::Infinity),
                }
            }
        }
    }

    /// For a band, `(t*, b(t*))` where `b` becomes constant.
    pub fn stabilization(&self) -> Option<(T, T)> {
        let b = self.upper.as_ref()?;
        if b.tail_slope().is_some_and(|s| s.is_zero()) {
            b.breakpoints().last().cloned()
        } else {
            None
        }
    }

    /// Exact vertex/ray representation of the body.
    pub fn to_v_polyhedron(&self) -> VPolyhedron<T> {
        let f = self.boundary();
        let mut vertices: Vec<Vec<T>> = f.breakpoints().iter().map(|(t, y)| vec![t.clone(), y.clone()]).collect();
        let mut rays = vec![self.recession.to_vec()];
        if self.kind == BodyKind::Band {
            vertices.push(vec![f.start().clone(), T::zero()]);
        }
        if let Some(s) = f.tail_slope() {
            rays.push(vec![T::one(), s.clone()]);
        }
        VPolyhedron::new(2, vertices, rays).expect("planar body")
    }

    /// Random rational point of the body, `y` kept within `spread` of the boundary.
    pub fn sample_point<R: Rng + ?Sized>(&self, spread: i64, rng: &mut R) -> [T; 2] {
        let f = self.boundary();
        let start = f.start().clone();
        let width = match f.end() {
            Upper::Finite(e) => e.clone() - &start,
            Upper::Infinity => {
                let last = &f.breakpoints().last().unwrap().0;
                last.clone() - &start + T::from_i64(2)
            }
        };
        let t = start + width * T::ratio(rng.gen_range(0..=64), 64);
        let at = f.eval(&t).expect("t in domain");
        let frac = T::ratio(rng.gen_range(0..=64), 64);
        let y = match self.kind {
            BodyKind::Overgraph => at + frac * T::from_i64(spread),
            BodyKind::Band => at * frac,
        };
        [t, y]
    }
}

/// `{φ : Δφ + Λ − tΛ₁ ≥ 0, φ ≥ 0}` as a family in `t`.
fn tropical_family<T: Scalar>(g: &Graph, lambda: &Divisor<T>, y1: &Divisor<T>) -> ParametricFamily<T> {
    let n = g.vertex_count();
    let mut rows = laplacian_rows::<T>(g);
    let mut base: Vec<T> = lambda.values().iter().map(|l| -l.clone()).collect();
    let mut dir: Vec<T> = y1.values().to_vec();
    for v in 0..n {
        let mut e = vec![T::zero(); n];
        e[v] = T::one();
        rows.push(e);
        base.push(T::zero());
        dir.push(T::zero());
    }
    ParametricFamily::new(n, rows, base, dir).expect("sized by the graph")
}

/// `{φ ∈ L⁺(Λ) : φ(v) = t}` as a family in `t`.
fn arakelov_family<T: Scalar>(g: &Graph, lambda: &Divisor<T>, v: usize) -> ParametricFamily<T> {
    let n = g.vertex_count();
    let mut rows = laplacian_rows::<T>(g);
    let mut base: Vec<T> = lambda.values().iter().map(|l| -l.clone()).collect();
    let mut dir = vec![T::zero(); n];
    for w in 0..n {
        let mut e = vec![T::zero(); n];
        e[w] = T::one();
        rows.push(e);
        base.push(T::zero());
        dir.push(T::zero());
    }
    let mut e = vec![T::zero(); n];
    e[v] = T::one();
    rows.push(e.clone());
    base.push(T::zero());
    dir.push(T::one());
    rows.push(e.into_iter().map(|x| -x).collect());
    base.push(T::zero());
    dir.push(-T::one());
    ParametricFamily::new(n, rows, base, dir).expect("sized by the graph")
}

fn check_tropical<T: Scalar>(g: &Graph, lambda: &Divisor<T>, flag: &TropicalFlag<T>) -> Result<T> {
    lambda.check_len(g)?;
    flag.y1.check_len(g)?;
    let deg = lambda.degree();
    if !deg.is_positive() {
        return Err(Error::NonPositiveDegree(deg.to_string()));
    }
    if !flag.y1.is_effective() {
        return Err(Error::NonEffectiveFlag);
    }
    let deg1 = flag.y1.degree();
    if !deg1.is_positive() {
        return Err(Error::NonPositiveDegree(deg1.to_string()));
    }
    if flag.vertex >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", flag.vertex)));
    }
    Ok(deg / deg1)
}

/// Overgraph of `a(t) = ϖ_{L_t}(v)`, `L_t = L⁺(Λ − tΛ₁)`, for `t ∈ [0, deg Λ / deg Λ₁]`,
/// by parametric LP.
pub fn tropical_body<T: Scalar>(g: &Graph, lambda: &Divisor<T>, flag: &TropicalFlag<T>) -> Result<NOBody2D<T>> {
    let end = check_tropical(g, lambda, flag)?;
    let family = tropical_family(g, lambda, &flag.y1);
    let mut objective = vec![T::zero(); g.vertex_count()];
    objective[flag.vertex] = T::one();
    let res = parametric_value_function(&family, &objective, Sense::Minimize, &T::zero(), &Upper::Finite(end.clone()))
        .map_err(|e| match e {
            Error::InfeasibleEverywhere => Error::EmptyAtZero,
            other => other,
        })?;
    if !res.feasible.0.is_zero() {
        return Err(Error::EmptyAtZero);
    }
    let mut warnings = Vec::new();
    if res.feasible.1 != Upper::Finite(end.clone()) {
        let reached = res.feasible.1.finite().cloned().unwrap_or_else(T::zero);
        warnings.push(format!(
            "linear system L_t is empty for t > {reached}; body truncated before deg Λ / deg Λ₁ = {end}"
        ));
    }
    Ok(NOBody2D::overgraph(res.value, warnings))
}

/// Band under `b(t) = Λ(v) + max { Δφ(v) : φ ∈ L⁺(Λ), φ(v) = t }` for `t ≥ ϖ(v)`,
/// by parametric LP.
pub fn arakelov_body<T: Scalar>(g: &Graph, lambda: &Divisor<T>, flag: &ArakelovFlag) -> Result<NOBody2D<T>> {
    lambda.check_len(g)?;
    let v = flag.vertex;
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let spec = LinearSystemSpec::new(g.clone(), lambda.clone(), true)?;
    let pi = minimal_element(&spec)?.found().ok_or(Error::EmptySystem)?;
    let start = pi[v].clone();
    let family = arakelov_family(g, lambda, v);
    let objective = laplacian_rows::<T>(g).swap_remove(v);
    let res = parametric_value_function(&family, &objective, Sense::Maximize, &start, &Upper::Infinity)?;
    let b = res.value.shifted(&lambda[v]);
    let mut warnings = Vec::new();
    if start.is_positive() {
        warnings.push(format!(
            "minimal element is positive at the flag vertex; body starts at t = {start} instead of 0"
        ));
    }
    if !b.has_shape(Shape::Concave) || b.slopes().iter().any(|s| s.is_negative()) {
        warnings.push("b is not concave and nondecreasing".into());
    }
    Ok(NOBody2D::band(b, warnings))
}

/// Boundary function read off the vertices of a planar region: for each
/// abscissa, the lowest (`lower = true`) or highest ordinate.
fn boundary_from_vertices<T: Scalar>(
    v: &VPolyhedron<T>,
    lower: bool,
    end: Upper<T>,
    tail: Option<T>,
    shape: Shape,
) -> Result<PiecewiseLinearFunction<T>> {
    let mut pts: Vec<(T, T)> = Vec::new();
    for p in v.vertices() {
        let (t, y) = (p[0].clone(), p[1].clone());
        match pts.iter_mut().find(|q| q.0 == t) {
            Some(q) => {
                if (lower && y < q.1) || (!lower && y > q.1) {
                    q.1 = y;
                }
            }
            None => pts.push((t, y)),
        }
    }
    pts.sort();
    PiecewiseLinearFunction::new(pts, end, tail, shape)
}

/// `a` recomputed by projecting `{(φ, t, y) : φ ∈ L_t, 0 ≤ t ≤ T, y ≥ φ(v)}` onto `(t, y)`.
pub fn tropical_boundary_fm<T: Scalar>(
    g: &Graph,
    lambda: &Divisor<T>,
    flag: &TropicalFlag<T>,
) -> Result<PiecewiseLinearFunction<T>> {
    let end = check_tropical(g, lambda, flag)?;
    let n = g.vertex_count();
    let family = tropical_family(g, lambda, &flag.y1);
    let mut p = family.joint().lift(1);
    let mut t_lo = vec![T::zero(); n + 2];
    t_lo[n] = T::one();
    p.push(Constraint::new(t_lo.clone(), T::zero()))?;
    p.push(Constraint::new(t_lo.iter().map(|x| -x.clone()).collect(), -end))?;
    let mut y = vec![T::zero(); n + 2];
    y[n + 1] = T::one();
    y[flag.vertex] = -T::one();
    p.push(Constraint::new(y, T::zero()))?;
    let plane = project_onto(&p, &[n, n + 1])?;
    let v = match enumerate_v_rep(&plane)? {
        VRepOutcome::Polyhedron(v) => v,
        VRepOutcome::Empty { .. } => return Err(Error::EmptyAtZero),
    };
    let t_max = v.vertices().iter().map(|p| p[0].clone()).max().expect("nonempty");
    boundary_from_vertices(&v, true, Upper::Finite(t_max), None, Shape::Convex)
}

/// `b` recomputed by projecting the enriched system onto `(φ(v), u)`.
pub fn arakelov_boundary_fm<T: Scalar>(
    g: &Graph,
    lambda: &Divisor<T>,
    flag: &ArakelovFlag,
) -> Result<PiecewiseLinearFunction<T>> {
    let spec = EnrichedSystemSpec {
        base: LinearSystemSpec::new(g.clone(), lambda.clone(), true)?,
        vertex: flag.vertex,
    };
    let n = g.vertex_count();
    let plane = project_onto(&enriched_system(&spec), &[flag.vertex, n])?;
    let v = match enumerate_v_rep(&plane)? {
        VRepOutcome::Polyhedron(v) => v,
        VRepOutcome::Empty { .. } => return Err(Error::EmptySystem),
    };
    boundary_from_vertices(&v, false, Upper::Infinity, Some(T::zero()), Shape::Concave)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport<T> {
    pub agree: bool,
    pub parametric: PiecewiseLinearFunction<T>,
    pub projection: PiecewiseLinearFunction<T>,
    /// Smallest abscissa at which the two functions differ or one is undefined.
    pub first_disagreement: Option<T>,
}

/// Runs both algorithms and compares their boundary functions exactly.
pub fn cross_verify<T: Scalar>(job: &CurveBodyJob<T>) -> Result<VerificationReport<T>> {
    let parametric = job.body()?.boundary().clone();
    let projection = match &job.flag {
        CurveFlag::Tropical(f) => tropical_boundary_fm(&job.graph, &job.lambda, f)?,
        CurveFlag::Arakelov(f) => arakelov_boundary_fm(&job.graph, &job.lambda, f)?,
    };
    let mut ts: Vec<T> = parametric
        .breakpoints()
        .iter()
        .chain(projection.breakpoints())
        .map(|p| p.0.clone())
        .collect();
    for f in [&parametric, &projection] {
        if let Some(last) = f.breakpoints().last() {
            ts.push(last.0.clone() + T::one());
        }
    }
    ts.sort();
    ts.dedup();
    let first_disagreement = ts.into_iter().find(|t| parametric.eval(t) != projection.eval(t));
    let agree = parametric == projection;
    Ok(VerificationReport {
        agree,
        parametric,
        projection,
        first_disagreement: if agree { None } else { first_disagreement.or_else(|| Some(T::zero())) },
    })
}

/// Random connected multigraph on `2..=max_vertices` vertices: a random
/// spanning tree plus up to `max_vertices` extra edges (loops included).
pub fn random_graph<R: Rng + ?Sized>(max_vertices: usize, rng: &mut R) -> Graph {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..rng.gen_range(0..=max_vertices) {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    Graph::anonymous(n, edges).expect("spanning tree keeps it connected")
}

/// Random tropical or Arakelov job with integer coefficients in `[−max_coeff, max_coeff]`
/// whose effective linear system is nonempty (and of positive degree for tropical jobs).
pub fn random_job<T: Scalar, R: Rng + ?Sized>(max_vertices: usize, max_coeff: i64, rng: &mut R) -> CurveBodyJob<T> {
    loop {
        let g = random_graph(max_vertices, rng);
        let n = g.vertex_count();
        let lambda = Divisor::new((0..n).map(|_| T::from_i64(rng.gen_range(-max_coeff..=max_coeff))).collect());
        let vertex = rng.gen_range(0..n);
        let flag = if rng.gen_bool(0.5) {
            let y1: Vec<T> = (0..n).map(|_| T::from_i64(rng.gen_range(0..=max_coeff))).collect();
            CurveFlag::Tropical(TropicalFlag {
                y1: Divisor::new(y1),
                vertex,
            })
        } else {
            CurveFlag::Arakelov(ArakelovFlag { vertex })
        };
        if let CurveFlag::Tropical(f) = &flag {
            if !lambda.degree().is_positive() || !f.y1.degree().is_positive() {
                continue;
            }
        }
        let spec = LinearSystemSpec::new(g.clone(), lambda.clone(), true).expect("sized");
        if build_system(&spec).is_empty() {
            continue;
        }
        return CurveBodyJob { graph: g, lambda, flag };
    }
}

/// The plane-quartic jobs of the worked example: `Λ = 2P + Q1 + Q2`, flag at `P`.
pub fn quartic_jobs<T: Scalar>() -> (CurveBodyJob<T>, CurveBodyJob<T>) {
    let g = crate::graph::quartic_graph();
    let lambda = Divisor::from_ints(&[2, 1, 1, 0]);
    let tropical = CurveBodyJob {
        graph: g.clone(),
        lambda: lambda.clone(),
        flag: CurveFlag::Tropical(TropicalFlag {
            y1: Divisor::from_ints(&[1, 0, 0, 0]),
            vertex: 0,
        }),
    };
    let arakelov = CurveBodyJob {
        graph: g,
        lambda,
        flag: CurveFlag::Arakelov(ArakelovFlag { vertex: 0 }),
    };
    (tropical, arakelov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn pt(x: (i64, i64), y: (i64, i64)) -> (Q, Q) {
        (Q::ratio(x.0, x.1), Q::ratio(y.0, y.1))
    }

    #[test]
    fn quartic_tropical() {
        let (job, _) = quartic_jobs::<Q>();
        let body = job.body().unwrap();
        assert_eq!(body.kind, BodyKind::Overgraph);
        assert_eq!(
            body.lower.breakpoints(),
            &[pt((0, 1), (0, 1)), pt((2, 1), (0, 1)), pt((4, 1), (1, 2))]
        );
        assert_eq!(body.recession, [Q::from_i64(0), Q::from_i64(1)]);
        assert!(body.warnings.is_empty());
        assert!(cross_verify(&job).unwrap().agree);
    }

    #[test]
    fn quartic_arakelov() {
        let (_, job) = quartic_jobs::<Q>();
        let body = job.body().unwrap();
        assert_eq!(body.kind, BodyKind::Band);
        let b = body.upper.as_ref().unwrap();
        assert_eq!(b.breakpoints(), &[pt((0, 1), (2, 1)), pt((1, 2), (4, 1))]);
        assert_eq!(b.tail_slope(), Some(&Q::from_i64(0)));
        assert_eq!(body.stabilization(), Some(pt((1, 2), (4, 1))));
        assert_eq!(body.recession, [Q::from_i64(1), Q::from_i64(0)]);
        assert!(cross_verify(&job).unwrap().agree);
    }

    #[test]
    fn path_examples() {
        let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
        let lambda = Divisor::<Q>::from_ints(&[2, 0]);
        let trop = TropicalFlag {
            y1: Divisor::from_ints(&[0, 1]),
            vertex: 1,
        };
        let body = tropical_body(&g, &lambda, &trop).unwrap();
        assert_eq!(body.lower.breakpoints(), &[pt((0, 1), (0, 1)), pt((2, 1), (2, 1))]);
        let band = arakelov_body(&g, &lambda, &ArakelovFlag { vertex: 0 }).unwrap();
        let b = band.upper.unwrap();
        assert_eq!(b.breakpoints(), &[pt((0, 1), (2, 1))]);
        assert_eq!(b.tail_slope(), Some(&Q::from_i64(0)));
    }

    #[test]
    fn errors() {
        let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
        let y1 = Divisor::<Q>::from_ints(&[1, 0]);
        let flag = TropicalFlag { y1, vertex: 0 };
        assert!(matches!(
            tropical_body(&g, &Divisor::from_ints(&[0, 0]), &flag),
            Err(Error::NonPositiveDegree(_))
        ));
        let neg = TropicalFlag {
            y1: Divisor::<Q>::from_ints(&[2, -1]),
            vertex: 0,
        };
        assert_eq!(tropical_body(&g, &Divisor::from_ints(&[1, 0]), &neg).unwrap_err(), Error::NonEffectiveFlag);
        assert_eq!(
            arakelov_body(&g, &Divisor::<Q>::from_ints(&[-1, 0]), &ArakelovFlag { vertex: 0 }).unwrap_err(),
            Error::EmptySystem
        );
    }

    #[test]
    fn shifted_arakelov_start_warns() {
        let g = Graph::new(&["a", "b"], &[("a", "b")]).unwrap();
        let body = arakelov_body(&g, &Divisor::<Q>::from_ints(&[2, -1]), &ArakelovFlag { vertex: 1 }).unwrap();
        assert_eq!(body.boundary().start(), &Q::from_i64(1));
        assert_eq!(body.warnings.len(), 1);
    }

    #[test]
    fn random_jobs_cross_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..8 {
            let job = random_job::<Q, _>(4, 3, &mut rng);
            let report = cross_verify(&job).unwrap();
            assert!(report.agree, "{job:?}\n{report:?}");
        }
    }

    #[test]
    fn v_representation_matches_body() {
        let (trop, arak) = quartic_jobs::<Q>();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for job in [trop, arak] {
            let body = job.body().unwrap();
            let v = body.to_v_polyhedron();
            for _ in 0..20 {
                let p = body.sample_point(3, &mut rng);
                assert!(body.contains(&p));
                assert!(v.contains(&p));
            }
        }
    }
}
