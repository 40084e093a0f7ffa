//! Value functions of right-hand-side parametric LPs.
//!
//! For `val(t) = min { c·x : A x ≥ b0 + t·b1 }` every optimal dual vertex
//! `y` gives a line `t ↦ y·b0 + t·(y·b1)` lying below `val` and touching it
//! at the solve point, so `val` is the upper envelope of finitely many such
//! lines. Breakpoints are found exactly by intersecting supporting lines and
//! re-solving at the intersection until every piece is certified.

use super::{solve_lp, Constraint, HPolyhedron, LpOutcome, PiecewiseLinearFunction, Sense, Shape};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Upper end of an interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Upper<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> Upper<T> {
    pub fn admits(&self, t: &T) -> bool {
        match self {
            Upper::Finite(e) => t <= e,
            Upper::Infinity => true,
        }
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Upper::Finite(e) => Some(e),
            Upper::Infinity => None,
        }
    }
}

/// The polyhedra `{x : rows · x ≥ base + t·direction}` for real `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricFamily<T> {
    dimension: usize,
    pub rows: Vec<Vec<T>>,
    pub base: Vec<T>,
    pub direction: Vec<T>,
}

impl<T: Scalar> ParametricFamily<T> {
    pub fn new(dimension: usize, rows: Vec<Vec<T>>, base: Vec<T>, direction: Vec<T>) -> Result<Self> {
        let m = rows.len();
        for v in [&base, &direction] {
            if v.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: v.len() });
            }
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: bad.len(),
            });
        }
        Ok(ParametricFamily {
            dimension,
            rows,
            base,
            direction,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The member polyhedron at parameter `t`.
    pub fn at(&self, t: &T) -> HPolyhedron<T> {
        let n = self.dimension();
        let cs = self
            .rows
            .iter()
            .zip(self.base.iter().zip(&self.direction))
            .map(|(r, (b0, b1))| Constraint::new(r.clone(), b0.clone() + t.clone() * b1))
            .collect();
        HPolyhedron::new(n, cs).expect("rows have equal length")
    }

    /// The joint polyhedron in `(x, t)` coordinates, `t` last.
    pub fn joint(&self) -> HPolyhedron<T> {
        let n = self.dimension();
        let cs = self
            .rows
            .iter()
            .zip(self.base.iter().zip(&self.direction))
            .map(|(r, (b0, b1))| {
                let mut coeffs = r.clone();
                coeffs.push(-b1.clone());
                Constraint::new(coeffs, b0.clone())
            })
            .collect();
        HPolyhedron::new(n + 1, cs).expect("rows have equal length")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricResult<T> {
    /// Largest closed subinterval of the requested one on which the LP is feasible.
    pub feasible: (T, Upper<T>),
    pub value: PiecewiseLinearFunction<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Line<T> {
    intercept: T,
    slope: T,
}

impl<T: Scalar> Line<T> {
    fn at(&self, t: &T) -> T {
        self.intercept.clone() + self.slope.clone() * t
    }

    fn meet(&self, other: &Self) -> T {
        (other.intercept.clone() - &self.intercept) / (self.slope.clone() - &other.slope)
    }
}

struct Envelope<'a, T> {
    family: &'a ParametricFamily<T>,
    /// Objective of the minimisation form (`±c`).
    cost: Vec<T>,
    points: Vec<(T, T)>,
}

impl<T: Scalar> Envelope<'_, T> {
    fn solve_at(&self, t: &T) -> Result<(T, Line<T>)> {
        match solve_lp(&self.family.at(t), &self.cost, Sense::Minimize)? {
            LpOutcome::Optimal { value, dual, .. } => {
                let line = Line {
                    intercept: scalar::dot(&dual, &self.family.base),
                    slope: scalar::dot(&dual, &self.family.direction),
                };
                debug_assert_eq!(line.at(t), value);
                Ok((value, line))
            }
            LpOutcome::Unbounded { .. } => Err(Error::UnboundedValue),
            LpOutcome::Infeasible { .. } => Err(Error::InfeasibleEverywhere),
        }
    }

    /// Collects every breakpoint strictly inside `(lo, hi)`, given lines
    /// supporting the value function at both ends.
    fn refine(&mut self, lo: &T, left: &Line<T>, hi: &T, right: &Line<T>) -> Result<()> {
        if left.slope == right.slope {
            return Ok(());
        }
        let x = left.meet(right);
        if x <= *lo || x >= *hi {
            return Ok(());
        }
        let (fx, line) = self.solve_at(&x)?;
        self.points.push((x.clone(), fx.clone()));
        if fx == left.at(&x) {
            return Ok(());
        }
        self.refine(lo, left, &x, &line)?;
        self.refine(&x, &line, hi, right)
    }

    /// Breakpoints in `(lo, ∞)` given the eventual line `last`.
    fn refine_tail(&mut self, lo: &T, left: &Line<T>, last: &Line<T>) -> Result<()> {
        let mut lo = lo.clone();
        let mut left = left.clone();
        while left.slope != last.slope {
            let x = left.meet(last);
            if x <= lo {
                return Ok(());
            }
            let (fx, line) = self.solve_at(&x)?;
            self.points.push((x.clone(), fx.clone()));
            if fx == last.at(&x) {
                return self.refine(&lo, &left, &x, last);
            }
            self.refine(&lo, &left, &x, &line)?;
            lo = x;
            left = line;
        }
        Ok(())
    }

    /// The supporting line that is active for all large `t`: maximal slope,
    /// then maximal intercept, over the dual polyhedron `{y ≥ 0, yᵀA = cost}`.
    fn eventual_line(&self) -> Result<Line<T>> {
        let m = self.family.rows.len();
        let n = self.cost.len();
        let mut dual = HPolyhedron::universe(m);
        for i in 0..m {
            let mut e = vec![T::zero(); m];
            e[i] = T::one();
            dual.push(Constraint::new(e, T::zero()))?;
        }
        for j in 0..n {
            let col: Vec<T> = self.family.rows.iter().map(|r| r[j].clone()).collect();
            dual.push_equality(col, self.cost[j].clone())?;
        }
        let slope = match solve_lp(&dual, &self.family.direction, Sense::Maximize)? {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded { .. } => return Err(Error::InfeasibleEverywhere),
            LpOutcome::Infeasible { .. } => return Err(Error::UnboundedValue),
        };
        dual.push_equality(self.family.direction.clone(), slope.clone())?;
        let intercept = match solve_lp(&dual, &self.family.base, Sense::Maximize)? {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded { .. } => return Err(Error::InfeasibleEverywhere),
            LpOutcome::Infeasible { .. } => return Err(Error::UnboundedValue),
        };
        Ok(Line { intercept, slope })
    }
}

/// Exact value function of `objective · x` over `{x : A x ≥ b0 + t·b1}` for
/// `t ∈ [lower, upper]`, restricted to the feasible part of that interval.
///
/// The result is convex for minimisation and concave for maximisation.
pub fn parametric_value_function<T: Scalar>(
    family: &ParametricFamily<T>,
    objective: &[T],
    sense: Sense,
    lower: &T,
    upper: &Upper<T>,
) -> Result<ParametricResult<T>> {
    let n = family.dimension();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    if let Upper::Finite(u) = upper {
        if u < lower {
            return Err(Error::InvalidInterval(format!("[{lower}, {u}] is empty")));
        }
    }

    // Feasible parameter range: project the joint polyhedron onto t.
    let mut joint = family.joint();
    let mut t_axis = vec![T::zero(); n + 1];
    t_axis[n] = T::one();
    joint.push(Constraint::new(t_axis.clone(), lower.clone()))?;
    if let Upper::Finite(u) = upper {
        joint.push(Constraint::new(t_axis.iter().map(|x| -x.clone()).collect(), -u.clone()))?;
    }
    let start = match solve_lp(&joint, &t_axis, Sense::Minimize)? {
        LpOutcome::Optimal { value, .. } => value,
        _ => return Err(Error::InfeasibleEverywhere),
    };
    let end = match solve_lp(&joint, &t_axis, Sense::Maximize)? {
        LpOutcome::Optimal { value, .. } => Upper::Finite(value),
        LpOutcome::Unbounded { .. } => Upper::Infinity,
        LpOutcome::Infeasible { .. } => return Err(Error::InfeasibleEverywhere),
    };

    let sign = match sense {
        Sense::Minimize => T::one(),
        Sense::Maximize => -T::one(),
    };
    let mut env = Envelope {
        family,
        cost: objective.iter().map(|c| sign.clone() * c).collect(),
        points: Vec::new(),
    };
    let (f0, left) = env.solve_at(&start)?;
    env.points.push((start.clone(), f0));
    let tail = match &end {
        Upper::Finite(e) => {
            if *e > start {
                let (f1, right) = env.solve_at(e)?;
                env.points.push((e.clone(), f1));
                env.refine(&start, &left, e, &right)?;
            }
            None
        }
        Upper::Infinity => {
            let last = env.eventual_line()?;
            env.refine_tail(&start, &left, &last)?;
            Some(sign.clone() * &last.slope)
        }
    };

    let mut points = env.points;
    points.sort_by(|a, b| a.0.cmp(&b.0));
    points.dedup_by(|a, b| a.0 == b.0);
    let points = points.into_iter().map(|(t, f)| (t, sign.clone() * f)).collect();
    let shape = match sense {
        Sense::Minimize => Shape::Convex,
        Sense::Maximize => Shape::Concave,
    };
    let value = PiecewiseLinearFunction::new(points, end.clone(), tail, shape)?;
    Ok(ParametricResult {
        feasible: (start, end),
        value,
    })
}
