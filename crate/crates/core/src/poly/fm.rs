//! Fourier–Motzkin projection with LP-based redundancy removal.

use super::{solve_lp, Constraint, HPolyhedron, LpOutcome, Sense};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Drops implied rows. Empty input comes back as the canonical `0 ≥ 1`.
///
/// Rows are normalised first, so the output is canonical up to the order
/// of surviving rows, which follows the input order.
pub fn remove_redundant<T: Scalar>(p: &HPolyhedron<T>) -> HPolyhedron<T> {
    let dim = p.dimension();
    let mut rows: Vec<Constraint<T>> = Vec::new();
    for c in p.constraints() {
        let c = c.normalized();
        if c.is_trivial() {
            if c.bound.is_positive() {
                return HPolyhedron::empty(dim);
            }
            continue;
        }
        match rows.iter_mut().find(|r| r.coeffs == c.coeffs) {
            Some(r) => {
                if c.bound > r.bound {
                    r.bound = c.bound;
                }
            }
            None => rows.push(c),
        }
    }
    let candidate = HPolyhedron::new(dim, rows.clone()).expect("dimension preserved");
    if candidate.is_empty() {
        return HPolyhedron::empty(dim);
    }
    let mut alive = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<Constraint<T>> = rows
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && alive[j])
            .map(|(_, c)| c.clone())
            .collect();
        let rest = HPolyhedron::new(dim, others).expect("dimension preserved");
        if let Ok(LpOutcome::Optimal { value, .. }) = solve_lp(&rest, &rows[i].coeffs, Sense::Minimize) {
            if value >= rows[i].bound {
                alive[i] = false;
            }
        }
    }
    let kept = rows
        .into_iter()
        .zip(alive)
        .filter_map(|(c, a)| a.then_some(c))
        .collect();
    HPolyhedron::new(dim, kept).expect("dimension preserved")
}

/// Projects out coordinate `var_index`, returning a polyhedron in one
/// dimension fewer whose points are exactly the projections of `p`.
pub fn fm_eliminate<T: Scalar>(p: &HPolyhedron<T>, var_index: usize) -> Result<HPolyhedron<T>> {
    let dim = p.dimension();
    if var_index >= dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: var_index,
        });
    }
    let drop_var = |c: &Constraint<T>| -> Vec<T> {
        c.coeffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != var_index)
            .map(|(_, x)| x.clone())
            .collect()
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for c in p.constraints() {
        let a = &c.coeffs[var_index];
        if a.is_positive() {
            pos.push(c);
        } else if a.is_negative() {
            neg.push(c);
        } else {
            out.push(Constraint::new(drop_var(c), c.bound.clone()));
        }
    }
    for up in &pos {
        let su = up.coeffs[var_index].clone();
        for dn in &neg {
            let sd = -dn.coeffs[var_index].clone();
            // (up / su) + (dn / sd) cancels the eliminated coordinate.
            let coeffs = drop_var(up)
                .into_iter()
                .zip(drop_var(dn))
                .map(|(x, y)| x / &su + y / &sd)
                .collect();
            let bound = up.bound.clone() / &su + dn.bound.clone() / &sd;
            out.push(Constraint::new(coeffs, bound));
        }
    }
    let projected = HPolyhedron::new(dim - 1, out)?;
    Ok(remove_redundant(&projected))
}

/// Projects onto the coordinates listed in `keep`, in that order.
///
/// Remaining coordinates are eliminated greedily, always picking the one
/// producing the fewest new rows.
pub fn project_onto<T: Scalar>(p: &HPolyhedron<T>, keep: &[usize]) -> Result<HPolyhedron<T>> {
    let dim = p.dimension();
    if let Some(&bad) = keep.iter().find(|&&k| k >= dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad,
        });
    }
    // `labels[i]` is the original index of current coordinate i.
    let mut labels: Vec<usize> = (0..dim).collect();
    let mut cur = remove_redundant(p);
    loop {
        let candidates: Vec<usize> = (0..labels.len()).filter(|&i| !keep.contains(&labels[i])).collect();
        let Some(&pick) = candidates.iter().min_by_key(|&&i| {
            let (mut np, mut nn) = (0usize, 0usize);
            for c in cur.constraints() {
                if c.coeffs[i].is_positive() {
                    np += 1;
                } else if c.coeffs[i].is_negative() {
                    nn += 1;
                }
            }
            (np * nn) as isize - (np + nn) as isize
        }) else {
            break;
        };
        cur = fm_eliminate(&cur, pick)?;
        labels.remove(pick);
    }
    let order: Vec<usize> = keep
        .iter()
        .map(|k| labels.iter().position(|l| l == k).expect("kept coordinate survives"))
        .collect();
    cur.permute(&order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn poly(dim: usize, rows: &[(&[i64], i64)]) -> HPolyhedron<Q> {
        HPolyhedron::new(dim, rows.iter().map(|(a, b)| Constraint::from_ints(a, *b)).collect()).unwrap()
    }

    #[test]
    fn eliminate_y_from_wedge() {
        let p = poly(2, &[(&[1, 1], 0), (&[0, -1], -1)]);
        let q = fm_eliminate(&p, 1).unwrap();
        assert_eq!(q, poly(1, &[(&[1], -1)]));
    }

    #[test]
    fn unit_square_projects_to_unit_interval() {
        let sq = HPolyhedron::<Q>::cube(&[Q::from_i64(0), Q::from_i64(0)], &[Q::from_i64(1), Q::from_i64(1)]);
        let q = fm_eliminate(&sq, 1).unwrap();
        assert_eq!(q, poly(1, &[(&[1], 0), (&[-1], -1)]));
    }

    #[test]
    fn cylinder_projects_to_base() {
        let base = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], -3)]);
        let mut cyl = base.lift(1);
        cyl.push(Constraint::from_ints(&[0, 0, 1], 0)).unwrap();
        cyl.push(Constraint::from_ints(&[0, 0, -1], -1)).unwrap();
        let q = fm_eliminate(&cyl, 2).unwrap();
        assert!(q.set_eq(&base).unwrap());
        assert_eq!(q.constraints().len(), 3);
    }

    #[test]
    fn empty_projection_is_canonical() {
        let p = poly(2, &[(&[1, 0], 1), (&[-1, 0], 0)]);
        assert_eq!(fm_eliminate(&p, 1).unwrap(), HPolyhedron::empty(1));
    }

    #[test]
    fn redundant_rows_dropped() {
        let p = poly(1, &[(&[2], 2), (&[1], 0), (&[1], 1), (&[0], -3)]);
        assert_eq!(remove_redundant(&p), poly(1, &[(&[1], 1)]));
    }

    #[test]
    fn project_onto_reorders() {
        // {(x, y, z): x = z, 0 ≤ y ≤ 1, 0 ≤ z ≤ 2}; onto (z, x) is the diagonal segment.
        let p = poly(
            3,
            &[(&[1, 0, -1], 0), (&[-1, 0, 1], 0), (&[0, 1, 0], 0), (&[0, -1, 0], -1), (&[0, 0, 1], 0), (&[0, 0, -1], -2)],
        );
        let q = project_onto(&p, &[2, 0]).unwrap();
        assert!(q.contains(&[Q::from_i64(2), Q::from_i64(2)]));
        assert!(!q.contains(&[Q::from_i64(2), Q::from_i64(1)]));
        assert!(!q.contains(&[Q::from_i64(3), Q::from_i64(3)]));
        assert!(matches!(fm_eliminate(&p, 3), Err(Error::DimensionMismatch { .. })));
    }
}
