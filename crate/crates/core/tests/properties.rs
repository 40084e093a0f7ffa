use nobodies::curve::{self, CurveFlag};
use nobodies::graph::{laplacian, Divisor, Graph, GraphFunction};
use nobodies::linsys::{self, member, minimal_element, zariski_shift, LinearSystemSpec};
use nobodies::poly::{
    enumerate_v_rep, fm_eliminate, parametric_value_function, solve_lp, Constraint, HPolyhedron, LpOutcome,
    ParametricFamily, PiecewiseLinearFunction, Sense, Shape, Upper, VRepOutcome,
};
use nobodies::rank::{
    has_nonnegative_rank_at, phi_search_bound, rank_by_class_enumeration, rank_by_phi_search,
};
use nobodies::toric::{self, ToricFlag, ToricModel};
use nobodies::{Rational, Scalar};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = Rational;

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Q::ratio(n, d))
}

prop_compose! {
    /// Connected multigraph: random spanning tree plus extra edges, loops allowed.
    fn graph(max_n: usize)(n in 1..=max_n)
        (parents in proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
         extra in proptest::collection::vec((0..n, 0..n), 0..=n),
         n in Just(n)) -> Graph {
        let mut edges: Vec<(usize, usize)> =
            parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
        edges.extend(extra);
        Graph::anonymous(n, edges).unwrap()
    }
}

fn values(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(lo..=hi, n).prop_map(|v| v.into_iter().map(q).collect())
}

fn rational_values(n: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(rational(), n)
}

fn graph_and_function(max_n: usize) -> impl Strategy<Value = (Graph, Vec<Q>, Vec<Q>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), rational_values(n), rational_values(n))
    })
}

/// Box `[−3, 3]^d` cut by a few random half-spaces.
fn polytope(max_dim: usize) -> impl Strategy<Value = HPolyhedron<Q>> {
    (1..=max_dim).prop_flat_map(|d| {
        proptest::collection::vec((proptest::collection::vec(-3i64..=3, d), -4i64..=2), 0..=4).prop_map(move |cuts| {
            let mut p = HPolyhedron::cube(&vec![q(-3); d], &vec![q(3); d]);
            for (a, b) in cuts {
                p.push(Constraint::from_ints(&a, b)).unwrap();
            }
            p
        })
    })
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x * y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_has_degree_zero_and_is_linear((g, a, b) in graph_and_function(7), c in rational()) {
        let phi = GraphFunction::new(a);
        let psi = GraphFunction::new(b);
        let d_phi = laplacian(&g, &phi).unwrap();
        prop_assert!(d_phi.degree().is_zero());
        let lhs = laplacian(&g, &(&phi + &psi.scale(&c))).unwrap();
        let rhs = &d_phi + &laplacian(&g, &psi).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(laplacian(&g, &phi.add_constant(&c)).unwrap(), d_phi);
    }

    #[test]
    fn loops_do_not_change_the_laplacian((g, a, _) in graph_and_function(6), v in any::<prop::sample::Index>()) {
        let v = v.index(g.vertex_count());
        let phi = GraphFunction::new(a);
        prop_assert_eq!(laplacian(&g, &phi).unwrap(), laplacian(&g.with_edge(v, v), &phi).unwrap());
    }

    #[test]
    fn laplacian_kernel_is_the_constants((g, a, _) in graph_and_function(6)) {
        let phi = GraphFunction::new(a);
        let is_constant = phi.max_value() == phi.min_value();
        prop_assert_eq!(laplacian(&g, &phi).unwrap().values().iter().all(Zero::is_zero), is_constant);
    }

    #[test]
    fn oscillation_is_bounded_by_diameter((g, a, _) in graph_and_function(7)) {
        let phi = GraphFunction::new(a);
        let m = laplacian(&g, &phi).unwrap().m_statistic();
        let osc = phi.max_value() - phi.min_value();
        prop_assert!(osc <= m * q(g.diameter() as i64));
    }

    #[test]
    fn m_statistic_matches_subset_enumeration(f in proptest::collection::vec(rational(), 1..=12)) {
        let d = Divisor::new(f.clone());
        let mut best = Q::zero();
        for mask in 0u32..(1 << f.len()) {
            let s = f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(Q::zero(), |s, (_, x)| s + x);
            best = best.max(s.abs());
        }
        prop_assert_eq!(d.m_statistic(), best);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_optimum_is_attained_at_a_vertex(p in polytope(4), c in proptest::collection::vec(-3i64..=3, 4)) {
        let c: Vec<Q> = c[..p.dimension()].iter().map(|&x| q(x)).collect();
        let lp = solve_lp(&p, &c, Sense::Minimize).unwrap();
        prop_assert!(lp.verify(&p, &c, Sense::Minimize));
        match enumerate_v_rep(&p).unwrap() {
            VRepOutcome::Empty { .. } => {
                let infeasible = matches!(lp, LpOutcome::Infeasible { .. });
                prop_assert!(infeasible);
            }
            VRepOutcome::Polyhedron(v) => {
                let best = v.vertices().iter().map(|x| dot(x, &c)).min().unwrap();
                prop_assert_eq!(lp.value(), Some(&best));
            }
        }
    }

    #[test]
    fn vertex_enumeration_round_trips(p in polytope(4)) {
        if let VRepOutcome::Polyhedron(v) = enumerate_v_rep(&p).unwrap() {
            prop_assert!(v.equals_h(&p).unwrap());
            for x in v.vertices() {
                prop_assert!(p.contains(x));
            }
        }
    }

    #[test]
    fn fourier_motzkin_projection_is_exact(p in polytope(3), pts in proptest::collection::vec(proptest::collection::vec(-14i64..=14, 3), 20)) {
        let d = p.dimension();
        let proj = fm_eliminate(&p, d - 1).unwrap();
        for raw in pts {
            let x: Vec<Q> = raw[..d - 1].iter().map(|&v| Q::ratio(v, 4)).collect();
            let mut fibre = p.clone();
            for (i, xi) in x.iter().enumerate() {
                let mut e = vec![Q::zero(); d];
                e[i] = q(1);
                fibre.push_equality(e, xi.clone()).unwrap();
            }
            prop_assert_eq!(proj.contains(&x), !fibre.is_empty());
        }
    }

    #[test]
    fn parametric_value_matches_pointwise_lp(
        p in polytope(3),
        dir in proptest::collection::vec(-2i64..=2, 12),
        c in proptest::collection::vec(-3i64..=3, 3),
        maximize in any::<bool>(),
    ) {
        let d = p.dimension();
        let rows: Vec<Vec<Q>> = p.constraints().iter().map(|k| k.coeffs.clone()).collect();
        let base: Vec<Q> = p.constraints().iter().map(|k| k.bound.clone()).collect();
        let direction: Vec<Q> = (0..rows.len()).map(|i| Q::ratio(dir[i % dir.len()], 2)).collect();
        let family = ParametricFamily::new(d, rows, base, direction).unwrap();
        let c: Vec<Q> = c[..d].iter().map(|&x| q(x)).collect();
        let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
        let Ok(res) = parametric_value_function(&family, &c, sense, &q(0), &Upper::Finite(q(4))) else {
            return Ok(());
        };
        let (lo, hi) = (res.feasible.0.clone(), res.feasible.1.finite().unwrap().clone());
        for k in 0..=20 {
            let t = lo.clone() + (hi.clone() - &lo) * Q::ratio(k, 20);
            let direct = solve_lp(&family.at(&t), &c, sense).unwrap();
            let value = res.value.eval(&t);
            prop_assert_eq!(value.as_ref(), direct.value());
        }
        let shape = if maximize { Shape::Concave } else { Shape::Convex };
        prop_assert!(res.value.has_shape(shape));
    }

    #[test]
    fn convex_pwl_interpolates(start in rational(), steps in proptest::collection::vec((1i64..=4, -6i64..=6), 1..6)) {
        let mut slopes: Vec<i64> = steps.iter().map(|s| s.1).collect();
        slopes.sort();
        let mut pts = vec![(start.clone(), q(0))];
        for ((dx, _), s) in steps.iter().zip(&slopes) {
            let (x, y) = pts.last().unwrap().clone();
            pts.push((x + q(*dx), y + q(*dx * s)));
        }
        let end = pts.last().unwrap().0.clone();
        let f = PiecewiseLinearFunction::new(pts.clone(), Upper::Finite(end), None, Shape::Convex).unwrap();
        for w in pts.windows(2) {
            prop_assert_eq!(f.eval(&w[0].0), Some(w[0].1.clone()));
            let mid = (w[0].0.clone() + &w[1].0) / q(2);
            prop_assert_eq!(f.eval(&mid), Some((w[0].1.clone() + &w[1].1) / q(2)));
        }
        prop_assert!(f.breakpoints().len() <= pts.len());
        let concave = pts.len() > 2 && slopes.first() != slopes.last();
        prop_assert_eq!(
            PiecewiseLinearFunction::new(pts, Upper::Finite(f.end().finite().unwrap().clone()), None, Shape::Concave).is_ok(),
            !concave
        );
    }
}

fn integer_divisor(max_n: usize) -> impl Strategy<Value = (Graph, Divisor<Q>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), values(n, -2, 3).prop_map(Divisor::new))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reduction_is_base_independent((g, d) in integer_divisor(6)) {
        let at0 = has_nonnegative_rank_at(&g, &d, 0).unwrap();
        for v in 1..g.vertex_count() {
            prop_assert_eq!(has_nonnegative_rank_at(&g, &d, v).unwrap(), at0);
        }
        prop_assert_eq!(rank_by_class_enumeration(&g, &d).unwrap(), at0);
    }

    #[test]
    fn reduction_agrees_with_phi_search((g, d) in integer_divisor(4)) {
        let bound = phi_search_bound(&g, &d).unwrap();
        prop_assert_eq!(rank_by_phi_search(&g, &d, bound).unwrap(), has_nonnegative_rank_at(&g, &d, 0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn minimal_element_is_a_least_member((g, d) in integer_divisor(5), seed in any::<u64>()) {
        let spec = LinearSystemSpec::new(g.clone(), d, true).unwrap();
        let Some(pi) = minimal_element(&spec).unwrap().found() else {
            return Ok(());
        };
        prop_assert!(member(&spec, &pi).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            if let Some(phi) = linsys::sample_member(&spec, 6, &mut rng).unwrap() {
                prop_assert!(member(&spec, &phi).unwrap());
                prop_assert!(phi.values().iter().zip(pi.values()).all(|(a, b)| a >= b));
            }
        }
        let (shifted, _) = zariski_shift(&spec).unwrap();
        prop_assert!(shifted.is_effective());
        let again = LinearSystemSpec::new(g, shifted, true).unwrap();
        let zero = minimal_element(&again).unwrap().found().unwrap();
        prop_assert!(zero.values().iter().all(Zero::is_zero));
    }

    #[test]
    fn curve_body_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let job = curve::random_job::<Q, _>(4, 3, &mut rng);
        let deg = job.lambda.degree();
        let body = match job.body() {
            Ok(b) => b,
            Err(_) => return Ok(()),
        };
        match &job.flag {
            CurveFlag::Tropical(f) => {
                let a = &body.lower;
                prop_assert!(a.start().is_zero());
                let end = a.end().finite().unwrap().clone();
                prop_assert!(end <= deg.clone() / f.y1.degree());
                prop_assert!(a.has_shape(Shape::Convex));
                prop_assert!(a.breakpoints().iter().all(|(_, y)| !y.is_negative()));
            }
            CurveFlag::Arakelov(f) => {
                let v = f.vertex;
                let b = body.upper.as_ref().unwrap();
                let spec = LinearSystemSpec::new(job.graph.clone(), job.lambda.clone(), true).unwrap();
                let (shifted, pi) = zariski_shift(&spec).unwrap();
                prop_assert_eq!(b.start(), &pi[v]);
                prop_assert!(b.eval(&pi[v]).unwrap() >= shifted[v]);
                prop_assert!(b.sup().unwrap() <= deg);
                prop_assert!(b.slopes().iter().all(|s| !s.is_negative()));
            }
        }
    }
}

prop_compose! {
    /// The square model with random support numbers, and its standard flag.
    fn square_model()(a in proptest::collection::vec(0i64..=2, 4), v in proptest::collection::vec(0i64..=1, 3))
        -> (ToricModel, ToricFlag) {
        let model = ToricModel::new(
            2,
            vec![(vec![1, 0], a[0]), (vec![-1, 0], a[1]), (vec![0, 1], a[2]), (vec![0, -1], a[3])],
            vec![(vec![0, 0], v[0]), (vec![1, 0], v[1]), (vec![0, 1], v[2])],
        )
        .unwrap();
        let flag = ToricFlag {
            rays: vec![(vec![1, 0, 0], a[0]), (vec![0, 1, 0], a[2]), (vec![0, 0, 1], v[0])],
        };
        (model, flag)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn toric_body_is_homogeneous((model, flag) in square_model()) {
        let body = toric::toric_body::<Q>(&model, &flag).unwrap();
        for k in [2i64, 3] {
            let flag_k = ToricFlag { rays: flag.rays.iter().map(|(w, a)| (w.clone(), a * k)).collect() };
            let body_k = toric::toric_body::<Q>(&model.scaled(k), &flag_k).unwrap();
            prop_assert!(body_k.set_eq(&body.scaled(&q(k))));
        }
    }
}
