//! Exact convex-polyhedron kernel.
//!
//! Polyhedra are kept in inequality form `a·x ≥ b` ([`HPolyhedron`]) or as
//! `conv(vertices) + cone(rays)` ([`VPolyhedron`]). Emptiness is an
//! ordinary outcome everywhere, never an error.

mod fm;
pub mod linalg;
mod lp;
mod parametric;
mod pwl;
mod simplex;
mod vrep;

pub use fm::{fm_eliminate, project_onto, remove_redundant};
pub use lp::{solve_lp, LpOutcome, LpStatus, Sense};
pub use parametric::{parametric_value_function, ParametricFamily, ParametricResult, Upper};
pub use pwl::{PiecewiseLinearFunction, Shape};
pub use vrep::{affine_image, enumerate_v_rep, VPolyhedron, VRepOutcome, MAX_ENUMERATION_DIMENSION};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// One inequality `coeffs · x ≥ bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub bound: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn new(coeffs: Vec<T>, bound: T) -> Self {
        Constraint { coeffs, bound }
    }

    pub fn from_ints(coeffs: &[i64], bound: i64) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|&c| T::from_i64(c)).collect(),
            bound: T::from_i64(bound),
        }
    }

    /// `coeffs · x − bound`; nonnegative exactly when `x` satisfies the row.
    pub fn slack(&self, x: &[T]) -> T {
        scalar::dot(&self.coeffs, x) - &self.bound
    }

    pub fn holds(&self, x: &[T]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Divides by the absolute value of the first nonzero coefficient (or of
    /// the bound for a trivial row), giving a canonical representative.
    pub fn normalized(&self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .or_else(|| (!self.bound.is_zero()).then(|| self.bound.abs()));
        match lead {
            Some(s) => Constraint {
                coeffs: self.coeffs.iter().map(|c| c.clone() / &s).collect(),
                bound: self.bound.clone() / &s,
            },
            None => self.clone(),
        }
    }
}

/// `{x ∈ ℝ^dimension : coeffs·x ≥ bound for every constraint}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron<T> {
    dimension: usize,
    constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> HPolyhedron<T> {
    pub fn new(dimension: usize, constraints: Vec<Constraint<T>>) -> Result<Self> {
        for c in &constraints {
            if c.coeffs.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(HPolyhedron { dimension, constraints })
    }

    /// The whole space.
    pub fn universe(dimension: usize) -> Self {
        HPolyhedron {
            dimension,
            constraints: Vec::new(),
        }
    }

    /// A canonical empty polyhedron, `0 ≥ 1`.
    pub fn empty(dimension: usize) -> Self {
        HPolyhedron {
            dimension,
            constraints: vec![Constraint::new(vec![T::zero(); dimension], T::one())],
        }
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn cube(lo: &[T], hi: &[T]) -> Self {
        let d = lo.len();
        let mut cs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![T::zero(); d];
            e[i] = T::one();
            cs.push(Constraint::new(e.clone(), lo[i].clone()));
            e[i] = -T::one();
            cs.push(Constraint::new(e, -hi[i].clone()));
        }
        HPolyhedron {
            dimension: d,
            constraints: cs,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint<T>) -> Result<()> {
        if c.coeffs.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: c.coeffs.len(),
            });
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds `coeffs·x = value` as two inequalities.
    pub fn push_equality(&mut self, coeffs: Vec<T>, value: T) -> Result<()> {
        let neg: Vec<T> = coeffs.iter().map(|c| -c.clone()).collect();
        self.push(Constraint::new(coeffs, value.clone()))?;
        self.push(Constraint::new(neg, -value))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        let mut out = self.clone();
        out.constraints.extend(other.constraints.iter().cloned());
        Ok(out)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dimension && self.constraints.iter().all(|c| c.holds(x))
    }

    /// Whether `d` lies in the recession cone `{d : A d ≥ 0}`.
    pub fn recedes_along(&self, d: &[T]) -> bool {
        d.len() == self.dimension
            && self
                .constraints
                .iter()
                .all(|c| !scalar::dot(&c.coeffs, d).is_negative())
    }

    pub fn is_empty(&self) -> bool {
        let zero = vec![T::zero(); self.dimension];
        matches!(solve_lp(self, &zero, Sense::Minimize), Ok(LpOutcome::Infeasible { .. }))
    }

    /// Some point of the polyhedron, if it is nonempty.
    pub fn feasible_point(&self) -> Option<Vec<T>> {
        let zero = vec![T::zero(); self.dimension];
        match solve_lp(self, &zero, Sense::Minimize) {
            Ok(LpOutcome::Optimal { witness, .. }) => Some(witness),
            _ => None,
        }
    }

    /// Image under the coordinate permutation `x ↦ (x[order[0]], x[order[1]], ...)`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: order.len(),
            });
        }
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint::new(order.iter().map(|&i| c.coeffs[i].clone()).collect(), c.bound.clone()))
            .collect();
        Ok(HPolyhedron {
            dimension: self.dimension,
            constraints,
        })
    }

    /// Cylinder over `self` with `extra` free coordinates appended.
    pub fn lift(&self, extra: usize) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = c.coeffs.clone();
                coeffs.extend(std::iter::repeat_n(T::zero(), extra));
                Constraint::new(coeffs, c.bound.clone())
            })
            .collect();
        HPolyhedron {
            dimension: self.dimension + extra,
            constraints,
        }
    }

    /// Scales the polyhedron by a positive factor.
    pub fn scaled(&self, k: &T) -> Self {
        HPolyhedron {
            dimension: self.dimension,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint::new(c.coeffs.clone(), c.bound.clone() * k))
                .collect(),
        }
    }

    /// Exact set inclusion `self ⊆ other`, decided by one LP per row of `other`.
    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        for c in &other.constraints {
            match solve_lp(self, &c.coeffs, Sense::Minimize)? {
                LpOutcome::Infeasible { .. } => return Ok(true),
                LpOutcome::Unbounded { .. } => return Ok(false),
                LpOutcome::Optimal { value, .. } => {
                    if value < c.bound {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn set_eq(&self, other: &Self) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}
