//! Linear systems `L(Λ)`, `L⁺(Λ)` and the enriched system `L⁺_p(Λ)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{laplacian, Divisor, Graph, GraphFunction};
use crate::poly::{solve_lp, Constraint, HPolyhedron, LpOutcome, Sense};
use crate::scalar::Scalar;

/// `L(Λ)` when `effective` is false, `L⁺(Λ)` when it is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemSpec<T> {
    pub graph: Graph,
    pub lambda: Divisor<T>,
    pub effective: bool,
}

impl<T: Scalar> LinearSystemSpec<T> {
    pub fn new(graph: Graph, lambda: Divisor<T>, effective: bool) -> Result<Self> {
        lambda.check_len(&graph)?;
        Ok(LinearSystemSpec {
            graph,
            lambda,
            effective,
        })
    }

    /// The same divisor with `effective = true`.
    pub fn effective_part(&self) -> Self {
        LinearSystemSpec {
            effective: true,
            ..self.clone()
        }
    }
}

/// `L⁺_p(Λ)` for a point on the component of `vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedSystemSpec<T> {
    pub base: LinearSystemSpec<T>,
    pub vertex: usize,
}

impl<T: Scalar> EnrichedSystemSpec<T> {
    /// Forces `base.effective`; `vertex` is a vertex name.
    pub fn new(base: LinearSystemSpec<T>, vertex: &str) -> Result<Self> {
        let vertex = base.graph.vertex_index(vertex)?;
        Ok(EnrichedSystemSpec {
            base: base.effective_part(),
            vertex,
        })
    }
}

/// Row `v` is the linear form `φ ↦ Δ(φ)(v)`.
pub fn laplacian_rows<T: Scalar>(g: &Graph) -> Vec<Vec<T>> {
    g.laplacian_matrix()
        .iter()
        .map(|row| row.iter().map(|&x| T::from_i64(x)).collect())
        .collect()
}

/// One row `Δ(φ)(v) + Λ(v) ≥ 0` per vertex, then `φ(v) ≥ 0` per vertex when effective.
pub fn build_system<T: Scalar>(spec: &LinearSystemSpec<T>) -> HPolyhedron<T> {
    let n = spec.graph.vertex_count();
    let mut cs: Vec<Constraint<T>> = laplacian_rows(&spec.graph)
        .into_iter()
        .zip(spec.lambda.values())
        .map(|(row, l)| Constraint::new(row, -l.clone()))
        .collect();
    if spec.effective {
        for v in 0..n {
            let mut e = vec![T::zero(); n];
            e[v] = T::one();
            cs.push(Constraint::new(e, T::zero()));
        }
    }
    HPolyhedron::new(n, cs).expect("rows sized by the graph")
}

pub fn member<T: Scalar>(spec: &LinearSystemSpec<T>, phi: &GraphFunction<T>) -> Result<bool> {
    let d = laplacian(&spec.graph, phi)?;
    let effective = (&d + &spec.lambda).is_effective();
    Ok(effective && (!spec.effective || phi.is_nonnegative()))
}

pub fn pointwise_min<T: Scalar>(phi1: &GraphFunction<T>, phi2: &GraphFunction<T>) -> Result<GraphFunction<T>> {
    phi1.pointwise_min(phi2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalElement<T> {
    Found(GraphFunction<T>),
    EmptySystem,
}

impl<T> MinimalElement<T> {
    pub fn found(self) -> Option<GraphFunction<T>> {
        match self {
            MinimalElement::Found(f) => Some(f),
            MinimalElement::EmptySystem => None,
        }
    }
}

/// `ϖ(v) = min { φ(v) : φ ∈ L⁺(Λ) }`, one LP per vertex. The `effective`
/// flag of `spec` is ignored; the minimum is always taken over `L⁺(Λ)`.
pub fn minimal_element<T: Scalar>(spec: &LinearSystemSpec<T>) -> Result<MinimalElement<T>> {
    let p = build_system(&spec.effective_part());
    let n = p.dimension();
    let mut values = Vec::with_capacity(n);
    for v in 0..n {
        let mut c = vec![T::zero(); n];
        c[v] = T::one();
        match solve_lp(&p, &c, Sense::Minimize)? {
            LpOutcome::Optimal { value, .. } => values.push(value),
            LpOutcome::Infeasible { .. } => return Ok(MinimalElement::EmptySystem),
            LpOutcome::Unbounded { .. } => unreachable!("φ ≥ 0 bounds every coordinate"),
        }
    }
    let pi = GraphFunction::new(values);
    debug_assert!(member(&spec.effective_part(), &pi).unwrap_or(false));
    Ok(MinimalElement::Found(pi))
}

/// Returns `(Λ′, ϖ)` with `Λ′ = Λ + Δ(ϖ)`, so that `φ ↦ φ + ϖ` maps
/// `L⁺(Λ′)` onto `L⁺(Λ)` and `L⁺(Λ′)` has minimal element 0.
pub fn zariski_shift<T: Scalar>(spec: &LinearSystemSpec<T>) -> Result<(Divisor<T>, GraphFunction<T>)> {
    let pi = minimal_element(spec)?.found().ok_or(Error::EmptySystem)?;
    let shifted = &spec.lambda + &laplacian(&spec.graph, &pi)?;
    Ok((shifted, pi))
}

/// `L⁺(Λ)` in coordinates `(φ, u)` with `u ≥ 0` and `Δ(φ)(v) + Λ(v) − u ≥ 0`.
pub fn enriched_system<T: Scalar>(spec: &EnrichedSystemSpec<T>) -> HPolyhedron<T> {
    let n = spec.base.graph.vertex_count();
    let mut p = build_system(&spec.base.effective_part()).lift(1);
    let mut u = vec![T::zero(); n + 1];
    u[n] = T::one();
    p.push(Constraint::new(u, T::zero())).expect("sized");
    let mut row = laplacian_rows::<T>(&spec.base.graph).swap_remove(spec.vertex);
    row.push(-T::one());
    p.push(Constraint::new(row, -spec.base.lambda[spec.vertex].clone()))
        .expect("sized");
    p
}

/// Random rational point of `p ∩ [−bound, bound]ⁿ`, or `None` when that set
/// is empty.
///
/// A convex combination of a few LP vertices for random objectives, then a
/// short random walk with rational steps, rejecting steps that leave the set.
pub fn sample_point<T: Scalar, R: Rng + ?Sized>(p: &HPolyhedron<T>, bound: i64, rng: &mut R) -> Result<Option<Vec<T>>> {
    let n = p.dimension();
    let lo = vec![T::from_i64(-bound); n];
    let hi = vec![T::from_i64(bound); n];
    let boxed = p.intersect(&HPolyhedron::cube(&lo, &hi))?;
    let mut anchors: Vec<Vec<T>> = Vec::new();
    for _ in 0..3 {
        let c: Vec<T> = (0..n).map(|_| T::from_i64(rng.gen_range(-3..=3))).collect();
        match solve_lp(&boxed, &c, Sense::Minimize)? {
            LpOutcome::Optimal { witness, .. } => anchors.push(witness),
            LpOutcome::Infeasible { .. } => return Ok(None),
            LpOutcome::Unbounded { .. } => unreachable!("box bounds every coordinate"),
        }
    }
    let weights: Vec<i64> = anchors.iter().map(|_| rng.gen_range(0..=4)).collect();
    let total: i64 = weights.iter().sum();
    let mut x = anchors[0].clone();
    if total > 0 {
        x = vec![T::zero(); n];
        for (a, &w) in anchors.iter().zip(&weights) {
            for (xi, ai) in x.iter_mut().zip(a) {
                *xi += ai.clone() * T::ratio(w, total);
            }
        }
    }
    for _ in 0..4 {
        let step: Vec<T> = (0..n).map(|_| T::ratio(rng.gen_range(-4..=4), 8)).collect();
        let cand: Vec<T> = x.iter().zip(&step).map(|(a, b)| a.clone() + b).collect();
        if boxed.contains(&cand) {
            x = cand;
        }
    }
    Ok(Some(x))
}

/// Random member of the system, bounded by `bound` in every coordinate.
pub fn sample_member<T: Scalar, R: Rng + ?Sized>(
    spec: &LinearSystemSpec<T>,
    bound: i64,
    rng: &mut R,
) -> Result<Option<GraphFunction<T>>> {
    Ok(sample_point(&build_system(spec), bound, rng)?.map(GraphFunction::new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::quartic_graph;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn path() -> Graph {
        Graph::new(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn spec(g: Graph, lambda: &[i64], effective: bool) -> LinearSystemSpec<Q> {
        LinearSystemSpec::new(g, Divisor::from_ints(lambda), effective).unwrap()
    }

    fn func(v: &[i64]) -> GraphFunction<Q> {
        GraphFunction::from_ints(v)
    }

    #[test]
    fn path_system_rows() {
        let p = build_system(&spec(path(), &[2, -1], true));
        let want = HPolyhedron::new(
            2,
            vec![
                Constraint::from_ints(&[1, -1], -2),
                Constraint::from_ints(&[-1, 1], 1),
                Constraint::from_ints(&[1, 0], 0),
                Constraint::from_ints(&[0, 1], 0),
            ],
        )
        .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn quartic_rows_match_expansion() {
        let p = build_system(&spec(quartic_graph(), &[2, 1, 1, 0], false));
        let rows: Vec<(Vec<Q>, Q)> = p.constraints().iter().map(|c| (c.coeffs.clone(), c.bound.clone())).collect();
        let want = [
            (vec![4, -2, -2, 0], -2),
            (vec![-2, 3, 0, -1], -1),
            (vec![-2, 0, 3, -1], -1),
            (vec![0, -1, -1, 2], 0),
        ];
        for ((c, b), (wc, wb)) in rows.iter().zip(want) {
            assert_eq!(c, &wc.iter().map(|&x| Q::from_i64(x)).collect::<Vec<_>>());
            assert_eq!(b, &Q::from_i64(wb));
        }
    }

    #[test]
    fn membership_examples() {
        let s = spec(path(), &[2, -1], true);
        assert!(member(&s, &func(&[0, 1])).unwrap());
        assert!(!member(&s, &func(&[0, 0])).unwrap());
        assert!(member(&spec(quartic_graph(), &[2, 1, 1, 0], true), &func(&[0, 0, 0, 0])).unwrap());
        assert!(member(&s, &func(&[0])).is_err());
    }

    #[test]
    fn pointwise_min_examples() {
        assert_eq!(pointwise_min(&func(&[0, 3]), &func(&[2, 1])).unwrap(), func(&[0, 1]));
        let phi = func(&[5, -2]);
        assert_eq!(pointwise_min(&phi, &phi).unwrap(), phi);
    }

    #[test]
    fn minimal_elements() {
        let s = spec(path(), &[2, -1], true);
        assert_eq!(minimal_element(&s).unwrap(), MinimalElement::Found(func(&[0, 1])));
        assert_eq!(minimal_element(&spec(path(), &[-1, 0], true)).unwrap(), MinimalElement::EmptySystem);
        assert_eq!(
            minimal_element(&spec(quartic_graph(), &[2, 1, 1, 0], true)).unwrap(),
            MinimalElement::Found(func(&[0, 0, 0, 0]))
        );
    }

    #[test]
    fn zariski_shift_path() {
        let s = spec(path(), &[2, -1], true);
        let (shifted, pi) = zariski_shift(&s).unwrap();
        assert_eq!(pi, func(&[0, 1]));
        assert_eq!(shifted, Divisor::from_ints(&[1, 0]));
        let t = spec(path(), &[1, 0], true);
        assert_eq!(minimal_element(&t).unwrap(), MinimalElement::Found(func(&[0, 0])));
        assert_eq!(zariski_shift(&spec(path(), &[-1, 0], true)).unwrap_err(), Error::EmptySystem);
        let (q, qpi) = zariski_shift(&spec(quartic_graph(), &[2, 1, 1, 0], true)).unwrap();
        assert_eq!(q, Divisor::from_ints(&[2, 1, 1, 0]));
        assert_eq!(qpi, func(&[0, 0, 0, 0]));
    }

    #[test]
    fn enriched_rows() {
        let base = spec(path(), &[2, 0], true);
        let e = EnrichedSystemSpec::new(base.clone(), "a").unwrap();
        let p = enriched_system(&e);
        assert_eq!(p.dimension(), 3);
        let extra = &p.constraints()[4..];
        assert_eq!(extra[0], Constraint::from_ints(&[0, 0, 1], 0));
        assert_eq!(extra[1], Constraint::from_ints(&[1, -1, -1], -2));
        let q = EnrichedSystemSpec::new(spec(quartic_graph(), &[2, 1, 1, 0], true), "P").unwrap();
        let pq = enriched_system(&q);
        let pt = |u: i64| [0, 0, 0, 0, u].map(Q::from_i64);
        assert!(pq.contains(&pt(2)));
        assert!(!pq.contains(&pt(3)));
        assert!(EnrichedSystemSpec::new(base, "z").is_err());
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = spec(quartic_graph(), &[2, 1, 1, 0], true);
        for _ in 0..10 {
            let phi = sample_member(&s, 8, &mut rng).unwrap().unwrap();
            assert!(member(&s, &phi).unwrap());
        }
        assert!(sample_member(&spec(path(), &[-1, 0], true), 8, &mut rng).unwrap().is_none());
    }
}
