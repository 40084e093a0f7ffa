//! Toric schemes over a DVR: the generic polytope `P_D`, the model
//! polyhedron `P_𝒟` (overgraph of `ψ`), and the body `φ_ℝ(P_𝒟)`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poly::linalg::determinant;
use crate::poly::{
    affine_image, enumerate_v_rep, project_onto, solve_lp, Constraint, HPolyhedron, LpOutcome, Sense, VPolyhedron,
    VRepOutcome,
};
use crate::scalar::{self, Scalar};

/// A lattice vector together with its divisor coefficient.
pub type RayDatum = (Vec<i64>, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricModel {
    dim: usize,
    generic_rays: Vec<RayDatum>,
    vertical_vertices: Vec<RayDatum>,
}

impl ToricModel {
    /// Checks that every `u_σ` is primitive, that there is a vertical vertex,
    /// and that the generic rays positively span `ℝ^d`.
    pub fn new(dim: usize, generic_rays: Vec<RayDatum>, vertical_vertices: Vec<RayDatum>) -> Result<Self> {
        for (u, _) in generic_rays.iter().chain(&vertical_vertices) {
            if u.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.len(),
                });
            }
        }
        for (u, _) in &generic_rays {
            let g = u.iter().fold(0i64, |acc, x| acc.gcd(x));
            if g != 1 {
                return Err(Error::InvalidModel(format!("generic ray {u:?} is not primitive")));
            }
        }
        if vertical_vertices.is_empty() {
            return Err(Error::InvalidModel("no vertical vertices".into()));
        }
        let model = ToricModel {
            dim,
            generic_rays,
            vertical_vertices,
        };
        if !model.rays_span() {
            return Err(Error::UnboundedGenericPolytope);
        }
        Ok(model)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn generic_rays(&self) -> &[RayDatum] {
        &self.generic_rays
    }

    pub fn vertical_vertices(&self) -> &[RayDatum] {
        &self.vertical_vertices
    }

    /// The model of `k·𝒟`.
    pub fn scaled(&self, k: i64) -> Self {
        let scale = |v: &[RayDatum]| v.iter().map(|(u, a)| (u.clone(), a * k)).collect();
        ToricModel {
            dim: self.dim,
            generic_rays: scale(&self.generic_rays),
            vertical_vertices: scale(&self.vertical_vertices),
        }
    }

    /// Each `±e_i` is a non-negative combination of the generic rays.
    fn rays_span(&self) -> bool {
        let r = self.generic_rays.len();
        (0..self.dim).all(|i| {
            [1i64, -1].iter().all(|&s| {
                let mut p = HPolyhedron::<num_rational::Rational64>::universe(r);
                for j in 0..r {
                    let mut e = vec![0; r];
                    e[j] = 1;
                    p.push(Constraint::from_ints(&e, 0)).expect("sized");
                }
                for k in 0..self.dim {
                    let row = self.generic_rays.iter().map(|(u, _)| scalar::Scalar::from_i64(u[k])).collect();
                    let target = if k == i { s } else { 0 };
                    p.push_equality(row, scalar::Scalar::from_i64(target)).expect("sized");
                }
                !p.is_empty()
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricFlag {
    /// `(w_i, a_{w_i})` with `w_i ∈ ℤ^{d+1}`.
    pub rays: Vec<RayDatum>,
}

/// Checks the flag against the model: `d + 1` rays forming a lattice basis,
/// each literally one of the model rays with the same coefficient.
pub fn validate_flag(model: &ToricModel, flag: &ToricFlag) -> Result<()> {
    let d = model.dim;
    if flag.rays.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: flag.rays.len(),
        });
    }
    for (w, _) in &flag.rays {
        if w.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                found: w.len(),
            });
        }
    }
    let m: Vec<Vec<num_rational::BigRational>> = flag
        .rays
        .iter()
        .map(|(w, _)| w.iter().map(|&x| Scalar::from_i64(x)).collect())
        .collect();
    let det = determinant(&m);
    if num_traits::Signed::abs(&det) != num_rational::BigRational::from_i64(1) {
        return Err(Error::NotABasis(det.to_string()));
    }
    for (i, (w, a)) in flag.rays.iter().enumerate() {
        let (head, last) = (&w[..d], w[d]);
        let pool = match last {
            0 => &model.generic_rays,
            1 => &model.vertical_vertices,
            _ => return Err(Error::FlagRayUnknown(i)),
        };
        if !pool.iter().any(|(u, b)| u.as_slice() == head && b == a) {
            return Err(Error::FlagRayUnknown(i));
        }
    }
    Ok(())
}

fn ints<T: Scalar>(v: &[i64]) -> Vec<T> {
    v.iter().map(|&x| T::from_i64(x)).collect()
}

fn generic_rows<T: Scalar>(model: &ToricModel) -> HPolyhedron<T> {
    let cs = model
        .generic_rays
        .iter()
        .map(|(u, a)| Constraint::new(ints(u), T::from_i64(-a)))
        .collect();
    HPolyhedron::new(model.dim, cs).expect("rays sized by the model")
}

/// `P_𝒟` without the boundedness and emptiness checks.
fn model_rows<T: Scalar>(model: &ToricModel) -> HPolyhedron<T> {
    let d = model.dim;
    let mut p = generic_rows::<T>(model).lift(1);
    for (v, a) in &model.vertical_vertices {
        let mut row: Vec<T> = ints(v);
        row.push(T::one());
        p.push(Constraint::new(row, T::from_i64(-a))).expect("sized");
    }
    let mut h = vec![T::zero(); d + 1];
    h[d] = T::one();
    p.push(Constraint::new(h, T::zero())).expect("sized");
    p
}

/// `P_D = {m : ⟨m, u_σ⟩ ≥ −a_σ}`.
pub fn build_generic_polytope<T: Scalar>(model: &ToricModel) -> Result<HPolyhedron<T>> {
    let p = generic_rows::<T>(model);
    for i in 0..model.dim {
        let mut e = vec![T::zero(); model.dim];
        e[i] = T::one();
        for sense in [Sense::Minimize, Sense::Maximize] {
            if let LpOutcome::Unbounded { .. } = solve_lp(&p, &e, sense)? {
                return Err(Error::UnboundedGenericPolytope);
            }
        }
    }
    if p.is_empty() {
        return Err(Error::InvalidModel("generic polytope is empty".into()));
    }
    Ok(p)
}

/// Whether `P_D` has an interior point, the checkable part of bigness.
pub fn is_full_dimensional<T: Scalar>(model: &ToricModel) -> Result<bool> {
    // max s subject to ⟨m, u⟩ − s ≥ −a, s ≤ 1.
    let d = model.dim;
    let mut cs: Vec<Constraint<T>> = model
        .generic_rays
        .iter()
        .map(|(u, a)| {
            let mut row = ints(u);
            row.push(-T::one());
            Constraint::new(row, T::from_i64(-a))
        })
        .collect();
    let mut cap = vec![T::zero(); d + 1];
    cap[d] = -T::one();
    cs.push(Constraint::new(cap.clone(), -T::one()));
    let p = HPolyhedron::new(d + 1, cs)?;
    let obj: Vec<T> = cap.into_iter().map(|x| -x).collect();
    Ok(matches!(solve_lp(&p, &obj, Sense::Maximize)?, LpOutcome::Optimal { value, .. } if value.is_positive()))
}

/// `P_𝒟` in coordinates `(m, h)`: the generic rows, `⟨m, v⟩ + h ≥ −a_v`, and `h ≥ 0`.
pub fn build_model_polyhedron<T: Scalar>(model: &ToricModel) -> Result<HPolyhedron<T>> {
    build_generic_polytope::<T>(model)?;
    Ok(model_rows(model))
}

/// `ψ(m) = max_v (−a_v − ⟨m, v⟩)` for `m ∈ P_D`.
pub fn psi_value<T: Scalar>(model: &ToricModel, m: &[T]) -> Result<T> {
    if m.len() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            found: m.len(),
        });
    }
    if !generic_rows::<T>(model).contains(m) {
        return Err(Error::OutsideGenericPolytope);
    }
    Ok(model
        .vertical_vertices
        .iter()
        .map(|(v, a)| T::from_i64(-a) - scalar::dot_int(m, v))
        .max()
        .expect("at least one vertical vertex"))
}

fn flag_map<T: Scalar>(flag: &ToricFlag) -> (Vec<Vec<T>>, Vec<T>) {
    let linear = flag.rays.iter().map(|(w, _)| ints(w)).collect();
    let offset = flag.rays.iter().map(|(_, a)| T::from_i64(*a)).collect();
    (linear, offset)
}

/// `φ_ℝ(P_𝒟)` with `φ_ℝ(m, h) = (⟨(m, h), w_i⟩ + a_{w_i})_i`, from the
/// vertices and rays of `P_𝒟`.
pub fn toric_body<T: Scalar>(model: &ToricModel, flag: &ToricFlag) -> Result<VPolyhedron<T>> {
    validate_flag(model, flag)?;
    let p = build_model_polyhedron::<T>(model)?;
    let v = match enumerate_v_rep(&p)? {
        VRepOutcome::Polyhedron(v) => v,
        VRepOutcome::Empty { .. } => return Err(Error::InvalidModel("model polyhedron is empty".into())),
    };
    let (linear, offset) = flag_map(flag);
    affine_image(&v, &linear, &offset)
}

/// The same body as an H-polyhedron, by Fourier–Motzkin elimination of
/// `(m, h)` from `{(m, h, y) : (m, h) ∈ P_𝒟, y = φ_ℝ(m, h)}`.
pub fn toric_body_fm<T: Scalar>(model: &ToricModel, flag: &ToricFlag) -> Result<HPolyhedron<T>> {
    validate_flag(model, flag)?;
    let k = model.dim + 1;
    let mut p = build_model_polyhedron::<T>(model)?.lift(k);
    for (i, (w, a)) in flag.rays.iter().enumerate() {
        let mut row: Vec<T> = ints(w);
        row.extend((0..k).map(|j| if j == i { -T::one() } else { T::zero() }));
        p.push_equality(row, T::from_i64(-a))?;
    }
    let keep: Vec<usize> = (k..2 * k).collect();
    project_onto(&p, &keep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialValuation {
    Valuation(Vec<i64>),
    NotASection,
}

/// Valuation vector of the monomial section `(m, h)`, or `NotASection` when
/// `(m, h) ∉ P_𝒟`.
pub fn monomial_valuation(model: &ToricModel, flag: &ToricFlag, m: &[i64], h: i64) -> Result<MonomialValuation> {
    validate_flag(model, flag)?;
    if m.len() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            found: m.len(),
        });
    }
    let mut x = m.to_vec();
    x.push(h);
    if !model_rows::<num_rational::BigRational>(model).contains(&ints(&x)) {
        return Ok(MonomialValuation::NotASection);
    }
    Ok(MonomialValuation::Valuation(
        flag.rays
            .iter()
            .map(|(w, a)| w.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() + a)
            .collect(),
    ))
}

/// Integer bounding box of `P_D`.
fn bounding_box(model: &ToricModel) -> Result<Vec<(i64, i64)>> {
    type Q = num_rational::BigRational;
    let p = build_generic_polytope::<Q>(model)?;
    (0..model.dim)
        .map(|i| {
            let mut e = vec![Q::from_i64(0); model.dim];
            e[i] = Q::from_i64(1);
            let lo = solve_lp(&p, &e, Sense::Minimize)?.value().expect("bounded").ceil();
            let hi = solve_lp(&p, &e, Sense::Maximize)?.value().expect("bounded").floor();
            Ok((lo.as_integer_i64().unwrap_or(i64::MIN), hi.as_integer_i64().unwrap_or(i64::MAX)))
        })
        .collect()
}

fn box_points(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `|P_D ∩ ℤ^d|`, for `d ≤ 3`.
pub fn lattice_point_count(model: &ToricModel) -> Result<usize> {
    if model.dim > 3 {
        return Err(Error::DimensionTooLarge(model.dim));
    }
    let p = build_generic_polytope::<num_rational::BigRational>(model)?;
    Ok(box_points(&bounding_box(model)?)
        .iter()
        .filter(|m| p.contains(&ints(m)))
        .count())
}

/// Lattice points `(m, h)` of `P_𝒟` with `h ≤ h_max`.
pub fn model_lattice_points(model: &ToricModel, h_max: i64) -> Result<Vec<(Vec<i64>, i64)>> {
    let p = build_model_polyhedron::<num_rational::BigRational>(model)?;
    let mut out = Vec::new();
    for m in box_points(&bounding_box(model)?) {
        for h in 0..=h_max {
            let mut x = m.clone();
            x.push(h);
            if p.contains(&ints(&x)) {
                out.push((m.clone(), h));
            }
        }
    }
    Ok(out)
}

/// When exactly one flag ray is vertical, its index and the image of `P_D`
/// under the generic-fiber flag map `m ↦ (⟨m, u_i⟩ + a_i)` over the other rays.
/// This is the projection of the body along the image of the `h` direction.
pub fn generic_fiber_image<T: Scalar>(model: &ToricModel, flag: &ToricFlag) -> Result<Option<(usize, VPolyhedron<T>)>> {
    validate_flag(model, flag)?;
    let d = model.dim;
    let vertical: Vec<usize> = (0..=d).filter(|&i| flag.rays[i].0[d] != 0).collect();
    let [k] = vertical[..] else {
        return Ok(None);
    };
    let pd = match enumerate_v_rep(&build_generic_polytope::<T>(model)?)? {
        VRepOutcome::Polyhedron(v) => v,
        VRepOutcome::Empty { .. } => return Err(Error::InvalidModel("generic polytope is empty".into())),
    };
    let rest: Vec<&RayDatum> = (0..=d).filter(|&i| i != k).map(|i| &flag.rays[i]).collect();
    let linear: Vec<Vec<T>> = rest.iter().map(|(w, _)| ints(&w[..d])).collect();
    let offset: Vec<T> = rest.iter().map(|(_, a)| T::from_i64(*a)).collect();
    Ok(Some((k, affine_image(&pd, &linear, &offset)?)))
}

/// Drops coordinate `k` of every vertex and ray.
pub fn drop_coordinate<T: Scalar>(v: &VPolyhedron<T>, k: usize) -> Result<VPolyhedron<T>> {
    let cut = |p: &Vec<T>| -> Vec<T> { p.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, x)| x.clone()).collect() };
    VPolyhedron::new(
        v.dimension() - 1,
        v.vertices().iter().map(cut).collect(),
        v.rays().iter().map(cut).collect(),
    )
}

/// The `d = 1` model: `P_D = [0, 1]`, vertical vertices `0` and `1` with
/// `a_v = 0`, and the flag `w₁ = (1, 0)`, `w₂ = (1, 1)`.
pub fn example_d1() -> (ToricModel, ToricFlag) {
    let model = ToricModel::new(1, vec![(vec![1], 0), (vec![-1], 1)], vec![(vec![0], 0), (vec![1], 0)])
        .expect("valid model");
    let flag = ToricFlag {
        rays: vec![(vec![1, 0], 0), (vec![1, 1], 0)],
    };
    (model, flag)
}

/// The `d = 2` model: square `[−1, 1]²`, vertical vertices `(0,0)`, `(1,0)`,
/// `(0,1)` with `a_v = 0`, and two flags.
pub fn example_d2() -> (ToricModel, Vec<ToricFlag>) {
    let model = ToricModel::new(
        2,
        vec![(vec![1, 0], 1), (vec![-1, 0], 1), (vec![0, 1], 1), (vec![0, -1], 1)],
        vec![(vec![0, 0], 0), (vec![1, 0], 0), (vec![0, 1], 0)],
    )
    .expect("valid model");
    let flags = vec![
        ToricFlag {
            rays: vec![(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 0)],
        },
        ToricFlag {
            rays: vec![(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![1, 0, 1], 0)],
        },
    ];
    (model, flags)
}
