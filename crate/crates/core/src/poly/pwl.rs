use super::parametric::Upper;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Convex,
    Concave,
    None,
}

/// A continuous piecewise-linear function on `[start, end]` or `[start, ∞)`.
///
/// Stored in canonical form: the first breakpoint is the domain start, the
/// last is the domain end (finite case) or the last slope change (infinite
/// case, continued with `tail_slope`), and no interior breakpoint is
/// collinear with its neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearFunction<T> {
    points: Vec<(T, T)>,
    end: Upper<T>,
    tail_slope: Option<T>,
    shape: Shape,
}

impl<T: Scalar> PiecewiseLinearFunction<T> {
    /// Canonicalises `points` and checks the declared shape against the slopes.
    pub fn new(points: Vec<(T, T)>, end: Upper<T>, tail_slope: Option<T>, shape: Shape) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInterval("piecewise-linear function needs a point".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInterval("abscissae must be strictly increasing".into()));
        }
        match (&end, &tail_slope) {
            (Upper::Finite(e), None) => {
                if points.last().map(|p| &p.0) != Some(e) {
                    return Err(Error::InvalidInterval("last abscissa must equal the domain end".into()));
                }
            }
            (Upper::Infinity, Some(_)) => {}
            (Upper::Finite(_), Some(_)) => {
                return Err(Error::InvalidInterval("tail slope given for a bounded domain".into()));
            }
            (Upper::Infinity, None) => {
                return Err(Error::InvalidInterval("unbounded domain needs a tail slope".into()));
            }
        }
        let mut f = PiecewiseLinearFunction {
            points,
            end,
            tail_slope,
            shape,
        };
        f.canonicalize();
        if !f.has_shape(shape) {
            return Err(Error::InvalidInterval(format!("slopes are not {shape:?}")));
        }
        Ok(f)
    }

    /// The constant `value` on `[start, end]`.
    pub fn constant(start: T, end: Upper<T>, value: T) -> Self {
        let (points, tail) = match &end {
            Upper::Finite(e) if *e > start => (vec![(start, value.clone()), (e.clone(), value)], None),
            Upper::Finite(_) => (vec![(start, value)], None),
            Upper::Infinity => (vec![(start, value)], Some(T::zero())),
        };
        Self::new(points, end, tail, Shape::None).expect("constant function is valid")
    }

    /// `t ↦ self(t) + c`.
    pub fn shifted(&self, c: &T) -> Self {
        PiecewiseLinearFunction {
            points: self.points.iter().map(|(t, y)| (t.clone(), y.clone() + c)).collect(),
            ..self.clone()
        }
    }

    /// Slope sequence including the tail slope.
    pub fn slopes(&self) -> Vec<T> {
        let mut s: Vec<T> = self
            .points
            .windows(2)
            .map(|w| (w[1].1.clone() - &w[0].1) / (w[1].0.clone() - &w[0].0))
            .collect();
        if let Some(t) = &self.tail_slope {
            s.push(t.clone());
        }
        s
    }

    fn canonicalize(&mut self) {
        let slopes = self.slopes();
        let n = self.points.len();
        let mut keep = vec![true; n];
        for i in 1..n {
            // Point i sits between slope i-1 and slope i (the tail slope for the last point).
            if i < slopes.len() && slopes[i - 1] == slopes[i] {
                let is_last_finite = i == n - 1 && self.tail_slope.is_none();
                if !is_last_finite {
                    keep[i] = false;
                }
            }
        }
        let mut it = keep.iter();
        self.points.retain(|_| *it.next().unwrap());
    }

    /// Whether the slopes are monotone in the direction `shape` requires.
    pub fn has_shape(&self, shape: Shape) -> bool {
        let s = self.slopes();
        match shape {
            Shape::Convex => s.windows(2).all(|w| w[0] <= w[1]),
            Shape::Concave => s.windows(2).all(|w| w[0] >= w[1]),
            Shape::None => true,
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn breakpoints(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn start(&self) -> &T {
        &self.points[0].0
    }

    pub fn end(&self) -> &Upper<T> {
        &self.end
    }

    pub fn tail_slope(&self) -> Option<&T> {
        self.tail_slope.as_ref()
    }

    pub fn in_domain(&self, t: &T) -> bool {
        t >= self.start() && self.end.admits(t)
    }

    /// Value at `t`, or `None` outside the domain.
    pub fn eval(&self, t: &T) -> Option<T> {
        if !self.in_domain(t) {
            return None;
        }
        let last = self.points.last().unwrap();
        if *t >= last.0 {
            let slope = self.tail_slope.clone().unwrap_or_else(T::zero);
            return Some(last.1.clone() + slope * (t.clone() - &last.0));
        }
        let i = self.points.partition_point(|p| p.0 <= *t);
        let (x0, y0) = &self.points[i - 1];
        let (x1, y1) = &self.points[i];
        Some(y0.clone() + (y1.clone() - y0) * (t.clone() - x0) / (x1.clone() - x0))
    }

    /// Maximum over the domain, when finite.
    pub fn sup(&self) -> Option<T> {
        if let Some(s) = &self.tail_slope {
            if s.is_positive() {
                return None;
            }
        }
        self.points.iter().map(|p| p.1.clone()).max()
    }

    /// Minimum over the domain, when finite.
    pub fn inf(&self) -> Option<T> {
        if let Some(s) = &self.tail_slope {
            if s.is_negative() {
                return None;
            }
        }
        self.points.iter().map(|p| p.1.clone()).min()
    }
}
