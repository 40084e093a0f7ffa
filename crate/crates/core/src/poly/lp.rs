use super::simplex::{solve_standard, StandardOutcome};
use super::HPolyhedron;
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Sense::Minimize => T::one(),
            Sense::Maximize => -T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of an exact LP solve together with a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    /// `dual` holds multipliers `y ≥ 0`, one per constraint, with
    /// `yᵀA = s·c` and `y·b = s·value`, where `s = +1` for minimisation and
    /// `−1` for maximisation.
    Optimal { value: T, witness: Vec<T>, dual: Vec<T> },
    /// Farkas vector `y ≥ 0` with `yᵀA = 0` and `y·b > 0`.
    Infeasible { farkas: Vec<T> },
    /// A feasible point and a recession direction improving the objective.
    Unbounded { point: Vec<T>, ray: Vec<T> },
}

impl<T: Scalar> LpOutcome<T> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Checks the attached certificate by direct substitution.
    pub fn verify(&self, p: &HPolyhedron<T>, objective: &[T], sense: Sense) -> bool {
        let s: T = sense.sign();
        let cs = p.constraints();
        match self {
            LpOutcome::Optimal { value, witness, dual } => {
                if !p.contains(witness) || scalar::dot(objective, witness) != *value {
                    return false;
                }
                if dual.len() != cs.len() || dual.iter().any(|y| y.is_negative()) {
                    return false;
                }
                let yb = dual.iter().zip(cs).fold(T::zero(), |acc, (y, c)| acc + y.clone() * &c.bound);
                if yb != s.clone() * value {
                    return false;
                }
                (0..p.dimension()).all(|j| {
                    let ya = dual
                        .iter()
                        .zip(cs)
                        .fold(T::zero(), |acc, (y, c)| acc + y.clone() * &c.coeffs[j]);
                    ya == s.clone() * &objective[j]
                })
            }
            LpOutcome::Infeasible { farkas } => {
                if farkas.len() != cs.len() || farkas.iter().any(|y| y.is_negative()) {
                    return false;
                }
                let yb = farkas.iter().zip(cs).fold(T::zero(), |acc, (y, c)| acc + y.clone() * &c.bound);
                yb.is_positive()
                    && (0..p.dimension()).all(|j| {
                        farkas
                            .iter()
                            .zip(cs)
                            .fold(T::zero(), |acc, (y, c)| acc + y.clone() * &c.coeffs[j])
                            .is_zero()
                    })
            }
            LpOutcome::Unbounded { point, ray } => {
                p.contains(point)
                    && p.recedes_along(ray)
                    && (s * scalar::dot(objective, ray)).is_negative()
            }
        }
    }
}

/// Optimises `objective · x` over `p` exactly (Bland's rule, two phases).
pub fn solve_lp<T: Scalar>(p: &HPolyhedron<T>, objective: &[T], sense: Sense) -> Result<LpOutcome<T>> {
    let n = p.dimension();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    let s: T = sense.sign();
    let cs = p.constraints();
    let m = cs.len();

    // Columns: x⁺ (n), x⁻ (n), surplus (m); rows: A x⁺ − A x⁻ − s = b.
    let width = 2 * n + m;
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (i, c) in cs.iter().enumerate() {
        let mut row = vec![T::zero(); width];
        for j in 0..n {
            row[j] = c.coeffs[j].clone();
            row[n + j] = -c.coeffs[j].clone();
        }
        row[2 * n + i] = -T::one();
        a.push(row);
        b.push(c.bound.clone());
    }
    let mut cost = vec![T::zero(); width];
    for j in 0..n {
        cost[j] = s.clone() * &objective[j];
        cost[n + j] = -cost[j].clone();
    }

    let split = |y: &[T]| -> Vec<T> { (0..n).map(|j| y[j].clone() - &y[n + j]).collect() };

    Ok(match solve_standard(&a, &b, &cost) {
        StandardOutcome::Optimal { primal, multipliers } => {
            let witness = split(&primal);
            let value = scalar::dot(objective, &witness);
            LpOutcome::Optimal {
                value,
                witness,
                dual: multipliers,
            }
        }
        StandardOutcome::Infeasible { multipliers } => LpOutcome::Infeasible { farkas: multipliers },
        StandardOutcome::Unbounded { primal, direction } => LpOutcome::Unbounded {
            point: split(&primal),
            ray: split(&direction),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Constraint;
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(dim: usize, rows: &[(&[i64], i64)]) -> HPolyhedron<Q> {
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| Constraint::from_ints(a, *b)).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn single_bound() {
        let p = HPolyhedron::new(1, vec![Constraint::new(vec![Q::from_i64(1)], Q::ratio(1, 3))]).unwrap();
        let out = solve_lp(&p, &ints(&[1]), Sense::Minimize).unwrap();
        assert_eq!(out.value(), Some(&Q::ratio(1, 3)));
        assert!(out.verify(&p, &ints(&[1]), Sense::Minimize));
    }

    #[test]
    fn infeasible_with_farkas() {
        let p = poly(1, &[(&[1], 1), (&[-1], 0)]);
        let out = solve_lp(&p, &ints(&[1]), Sense::Minimize).unwrap();
        assert_eq!(out.status(), LpStatus::Infeasible);
        assert!(out.verify(&p, &ints(&[1]), Sense::Minimize));
    }

    #[test]
    fn two_dimensional_optimum() {
        let p = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 2)]);
        let out = solve_lp(&p, &ints(&[1, 1]), Sense::Minimize).unwrap();
        assert_eq!(out.value(), Some(&Q::from_i64(2)));
        assert!(out.verify(&p, &ints(&[1, 1]), Sense::Minimize));
        let up = solve_lp(&p, &ints(&[1, 1]), Sense::Maximize).unwrap();
        assert_eq!(up.status(), LpStatus::Unbounded);
        assert!(up.verify(&p, &ints(&[1, 1]), Sense::Maximize));
    }

    #[test]
    fn maximisation_certificate() {
        let p = poly(2, &[(&[-1, 0], -3), (&[0, -1], -2), (&[1, 1], 1), (&[-1, -1], -4)]);
        let c = ints(&[2, 1]);
        let out = solve_lp(&p, &c, Sense::Maximize).unwrap();
        assert_eq!(out.value(), Some(&Q::from_i64(7)));
        assert!(out.verify(&p, &c, Sense::Maximize));
    }

    #[test]
    fn degenerate_cases() {
        let free = HPolyhedron::<Q>::universe(2);
        let zero = solve_lp(&free, &ints(&[0, 0]), Sense::Minimize).unwrap();
        assert_eq!(zero.value(), Some(&Q::from_i64(0)));
        let unb = solve_lp(&free, &ints(&[1, 0]), Sense::Minimize).unwrap();
        assert!(unb.verify(&free, &ints(&[1, 0]), Sense::Minimize));
        let point = HPolyhedron::<Q>::new(0, vec![Constraint::new(vec![], Q::from_i64(-1))]).unwrap();
        assert_eq!(solve_lp(&point, &[], Sense::Minimize).unwrap().status(), LpStatus::Optimal);
        let none = HPolyhedron::<Q>::empty(0);
        let out = solve_lp(&none, &[], Sense::Minimize).unwrap();
        assert!(out.verify(&none, &[], Sense::Minimize));
        assert!(matches!(
            solve_lp(&free, &ints(&[1]), Sense::Minimize),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
