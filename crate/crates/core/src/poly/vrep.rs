//! Vertex/ray representations and brute-force basis enumeration.

use std::collections::BTreeSet;

use super::fm::remove_redundant;
use super::linalg::{kernel, normalize_direction, rank, solve};
use super::{Constraint, HPolyhedron};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Largest dimension accepted by [`enumerate_v_rep`].
pub const MAX_ENUMERATION_DIMENSION: usize = 10;

/// `conv(vertices) + cone(rays)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolyhedron<T> {
    dimension: usize,
    vertices: Vec<Vec<T>>,
    rays: Vec<Vec<T>>,
}

impl<T: Scalar> VPolyhedron<T> {
    /// Rays are normalised and both lists are sorted and deduplicated.
    pub fn new(dimension: usize, vertices: Vec<Vec<T>>, rays: Vec<Vec<T>>) -> Result<Self> {
        for v in vertices.iter().chain(&rays) {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: v.len(),
                });
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidInterval("a V-polyhedron needs at least one vertex".into()));
        }
        let vertices: BTreeSet<Vec<T>> = vertices.into_iter().collect();
        let rays: BTreeSet<Vec<T>> = rays
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| normalize_direction(r))
            .collect();
        Ok(VPolyhedron {
            dimension,
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<T>] {
        &self.rays
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Membership of `x` in `conv(vertices) + cone(rays)`, decided by LP.
    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dimension && self.combination_exists(x, true)
    }

    /// Whether `d` lies in the recession cone `cone(rays)`.
    pub fn recedes_along(&self, d: &[T]) -> bool {
        d.len() == self.dimension && (d.iter().all(|x| x.is_zero()) || self.combination_exists(d, false))
    }

    fn combination_exists(&self, x: &[T], with_vertices: bool) -> bool {
        let nv = if with_vertices { self.vertices.len() } else { 0 };
        let nr = self.rays.len();
        let vars = nv + nr;
        let mut p = HPolyhedron::universe(vars);
        for i in 0..vars {
            let mut e = vec![T::zero(); vars];
            e[i] = T::one();
            p.push(Constraint::new(e, T::zero())).expect("sized");
        }
        if with_vertices {
            let mut ones = vec![T::zero(); vars];
            for o in ones.iter_mut().take(nv) {
                *o = T::one();
            }
            p.push_equality(ones, T::one()).expect("sized");
        }
        for k in 0..self.dimension {
            let row: Vec<T> = self.vertices[..nv]
                .iter()
                .chain(&self.rays)
                .map(|g| g[k].clone())
                .collect();
            p.push_equality(row, x[k].clone()).expect("sized");
        }
        !p.is_empty()
    }

    /// Exact set inclusion into an H-polyhedron.
    pub fn is_subset_of_h(&self, h: &HPolyhedron<T>) -> bool {
        self.vertices.iter().all(|v| h.contains(v)) && self.rays.iter().all(|r| h.recedes_along(r))
    }

    /// Exact set equality with an H-polyhedron.
    pub fn equals_h(&self, h: &HPolyhedron<T>) -> Result<bool> {
        if !self.is_subset_of_h(h) {
            return Ok(false);
        }
        Ok(match enumerate_v_rep(h)? {
            VRepOutcome::Empty { .. } => false,
            VRepOutcome::Polyhedron(other) => {
                other.vertices.iter().all(|v| self.contains(v)) && other.rays.iter().all(|r| self.recedes_along(r))
            }
        })
    }

    /// Exact set equality between two V-polyhedra.
    pub fn set_eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.vertices.iter().all(|v| other.contains(v))
            && self.rays.iter().all(|r| other.recedes_along(r))
            && other.vertices.iter().all(|v| self.contains(v))
            && other.rays.iter().all(|r| self.recedes_along(r))
    }

    pub fn scaled(&self, k: &T) -> Self {
        VPolyhedron {
            dimension: self.dimension,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x.clone() * k).collect())
                .collect(),
            rays: self.rays.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VRepOutcome<T> {
    Empty { dimension: usize },
    Polyhedron(VPolyhedron<T>),
}

impl<T: Scalar> VRepOutcome<T> {
    pub fn polyhedron(&self) -> Option<&VPolyhedron<T>> {
        match self {
            VRepOutcome::Polyhedron(v) => Some(v),
            VRepOutcome::Empty { .. } => None,
        }
    }

    pub fn into_polyhedron(self) -> Option<VPolyhedron<T>> {
        match self {
            VRepOutcome::Polyhedron(v) => Some(v),
            VRepOutcome::Empty { .. } => None,
        }
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices and extreme rays of `p`, by enumerating every basis of
/// `dimension` constraint rows (and every `dimension − 1` rows for rays).
///
/// A lineality space is split off first and reported as `±` ray pairs.
pub fn enumerate_v_rep<T: Scalar>(p: &HPolyhedron<T>) -> Result<VRepOutcome<T>> {
    let d = p.dimension();
    if d > MAX_ENUMERATION_DIMENSION {
        return Err(Error::DimensionTooLarge(d));
    }
    let cleaned = remove_redundant(p);
    if cleaned.is_empty() {
        return Ok(VRepOutcome::Empty { dimension: d });
    }
    let mut rows: Vec<Constraint<T>> = cleaned.constraints().to_vec();
    let coeff_rows: Vec<Vec<T>> = rows.iter().map(|c| c.coeffs.clone()).collect();
    let lineality = kernel(&coeff_rows, d);
    let mut rays: Vec<Vec<T>> = Vec::new();
    for l in &lineality {
        rays.push(l.clone());
        rays.push(l.iter().map(|x| -x.clone()).collect());
        let neg: Vec<T> = l.iter().map(|x| -x.clone()).collect();
        rows.push(Constraint::new(l.clone(), T::zero()));
        rows.push(Constraint::new(neg, T::zero()));
    }
    let pointed = HPolyhedron::new(d, rows.clone())?;

    let mut vertices: BTreeSet<Vec<T>> = BTreeSet::new();
    if d == 0 {
        vertices.insert(Vec::new());
    }
    let m = rows.len();
    for_each_subset(m, d, |sub| {
        let a: Vec<Vec<T>> = sub.iter().map(|&i| rows[i].coeffs.clone()).collect();
        let b: Vec<T> = sub.iter().map(|&i| rows[i].bound.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if pointed.contains(&x) {
                vertices.insert(x);
            }
        }
    });

    let mut extreme: BTreeSet<Vec<T>> = BTreeSet::new();
    if d >= 1 {
        for_each_subset(m, d - 1, |sub| {
            let a: Vec<Vec<T>> = sub.iter().map(|&i| rows[i].coeffs.clone()).collect();
            if rank(&a, d) != d - 1 {
                return;
            }
            let k = kernel(&a, d);
            debug_assert_eq!(k.len(), 1);
            let r = &k[0];
            let neg: Vec<T> = r.iter().map(|x| -x.clone()).collect();
            for cand in [r.clone(), neg] {
                if rows.iter().all(|c| !scalar::dot(&c.coeffs, &cand).is_negative()) {
                    extreme.insert(normalize_direction(&cand));
                }
            }
        });
    }
    rays.extend(extreme);
    Ok(VRepOutcome::Polyhedron(VPolyhedron::new(
        d,
        vertices.into_iter().collect(),
        rays,
    )?))
}

/// Image of `v` under `x ↦ linear · x + offset`; rays map without the offset.
pub fn affine_image<T: Scalar>(v: &VPolyhedron<T>, linear: &[Vec<T>], offset: &[T]) -> Result<VPolyhedron<T>> {
    let out_dim = linear.len();
    if offset.len() != out_dim {
        return Err(Error::DimensionMismatch {
            expected: out_dim,
            found: offset.len(),
        });
    }
    if let Some(bad) = linear.iter().find(|r| r.len() != v.dimension()) {
        return Err(Error::DimensionMismatch {
            expected: v.dimension(),
            found: bad.len(),
        });
    }
    let apply = |x: &[T]| -> Vec<T> { linear.iter().map(|row| scalar::dot(row, x)).collect() };
    let vertices = v
        .vertices()
        .iter()
        .map(|x| apply(x).into_iter().zip(offset).map(|(a, o)| a + o).collect())
        .collect();
    let rays = v.rays().iter().map(|r| apply(r)).collect();
    VPolyhedron::new(out_dim, vertices, rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect()
    }

    fn poly(dim: usize, rows: &[(&[i64], i64)]) -> HPolyhedron<Q> {
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| Constraint::from_ints(a, *b)).collect()).unwrap()
    }

    #[test]
    fn unit_square_vertices() {
        let sq = HPolyhedron::<Q>::cube(&[q(0), q(0)], &[q(1), q(1)]);
        let v = enumerate_v_rep(&sq).unwrap().into_polyhedron().unwrap();
        assert_eq!(v.vertices(), pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).as_slice());
        assert!(v.rays().is_empty());
    }

    #[test]
    fn strip_with_ray() {
        let p = poly(2, &[(&[1, 0], 0), (&[-1, 0], -1), (&[0, 1], 0)]);
        let v = enumerate_v_rep(&p).unwrap().into_polyhedron().unwrap();
        assert_eq!(v.vertices(), pts(&[&[0, 0], &[1, 0]]).as_slice());
        assert_eq!(v.rays(), pts(&[&[0, 1]]).as_slice());
    }

    #[test]
    fn empty_and_lineality() {
        let e = poly(2, &[(&[1, 0], 1), (&[-1, 0], 0)]);
        assert_eq!(enumerate_v_rep(&e).unwrap(), VRepOutcome::Empty { dimension: 2 });
        let slab = poly(2, &[(&[1, 0], 0), (&[-1, 0], -1)]);
        let v = enumerate_v_rep(&slab).unwrap().into_polyhedron().unwrap();
        assert_eq!(v.vertices(), pts(&[&[0, 0], &[1, 0]]).as_slice());
        assert_eq!(v.rays(), pts(&[&[0, -1], &[0, 1]]).as_slice());
        assert!(v.equals_h(&slab).unwrap());
        let too_big = HPolyhedron::<Q>::universe(11);
        assert_eq!(enumerate_v_rep(&too_big).unwrap_err(), Error::DimensionTooLarge(11));
    }

    #[test]
    fn affine_images() {
        let sq = HPolyhedron::<Q>::cube(&[q(0), q(0)], &[q(1), q(1)]);
        let v = enumerate_v_rep(&sq).unwrap().into_polyhedron().unwrap();
        let id = affine_image(&v, &pts(&[&[1, 0], &[0, 1]]), &[q(0), q(0)]).unwrap();
        assert_eq!(id, v);
        let shear = affine_image(&v, &pts(&[&[1, 0], &[1, 1]]), &[q(0), q(0)]).unwrap();
        assert_eq!(shear.vertices(), pts(&[&[0, 0], &[0, 1], &[1, 1], &[1, 2]]).as_slice());
        let ray = VPolyhedron::new(2, pts(&[&[0, 0]]), pts(&[&[0, 1]])).unwrap();
        let img = affine_image(&ray, &pts(&[&[1, 0], &[1, 1]]), &[q(5), q(5)]).unwrap();
        assert_eq!(img.rays(), pts(&[&[0, 1]]).as_slice());
        assert_eq!(img.vertices(), pts(&[&[5, 5]]).as_slice());
        assert!(affine_image(&v, &pts(&[&[1, 0, 0]]), &[q(0)]).is_err());
    }

    #[test]
    fn membership_by_lp() {
        let tri = VPolyhedron::new(2, pts(&[&[0, 0], &[2, 0], &[0, 2]]), vec![]).unwrap();
        assert!(tri.contains(&[q(1), q(1)]));
        assert!(!tri.contains(&[q(1), Q::ratio(3, 2)]));
        let cone = VPolyhedron::new(2, pts(&[&[0, 0]]), pts(&[&[1, 0], &[1, 1]])).unwrap();
        assert!(cone.contains(&[q(5), q(2)]));
        assert!(!cone.contains(&[q(1), q(2)]));
        assert!(cone.recedes_along(&[q(3), q(1)]));
    }
}
