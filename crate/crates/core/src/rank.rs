//! Non-negative rank of integer divisors.
//!
//! `Λ` has non-negative rank when some integer `φ ≥ 0` makes `Δ(φ) + Λ`
//! effective. Shifting `φ` by a constant does not change `Δ(φ)`, so this is
//! the same as `Λ` being linearly equivalent to an effective divisor.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Divisor, Graph};
use crate::scalar::Scalar;

fn integer_coefficients<T: Scalar>(g: &Graph, lambda: &Divisor<T>) -> Result<Vec<i64>> {
    lambda.check_len(g)?;
    lambda
        .values()
        .iter()
        .enumerate()
        .map(|(i, c)| c.as_integer_i64().ok_or_else(|| Error::NonIntegerDivisor(g.vertex_name(i).to_string())))
        .collect()
}

/// Non-loop edge multiplicities.
fn multiplicities(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0i64; n]; n];
    for &(a, b) in g.edges() {
        if a != b {
            m[a][b] += 1;
            m[b][a] += 1;
        }
    }
    m
}

/// Edges from `v` to vertices outside `set`.
fn out_degree(mult: &[Vec<i64>], set: &[bool], v: usize) -> i64 {
    (0..set.len()).filter(|&w| !set[w]).map(|w| mult[v][w]).sum()
}

/// `d ← d + k·Δ(1_S)`.
fn fire(d: &mut [i64], mult: &[Vec<i64>], set: &[bool], k: i64) {
    for v in 0..d.len() {
        for w in 0..d.len() {
            if set[v] && !set[w] {
                d[v] += k * mult[v][w];
                d[w] -= k * mult[v][w];
            }
        }
    }
}

/// The `q`-reduced divisor equivalent to `d`.
pub fn reduce(g: &Graph, d: &[i64], q: usize) -> Vec<i64> {
    let n = g.vertex_count();
    let mult = multiplicities(g);
    let dist = g.distances_from(q);
    let far = dist.iter().copied().max().unwrap_or(0);
    let mut d = d.to_vec();

    // Push debt towards q one distance level at a time. Adding Δ(1_{dist ≥ k})
    // raises every vertex at distance k and only lowers vertices at distance k − 1.
    for k in (1..=far).rev() {
        let set: Vec<bool> = dist.iter().map(|&x| x >= k).collect();
        let times = (0..n)
            .filter(|&v| dist[v] == k && d[v] < 0)
            .map(|v| {
                let gain = out_degree(&mult, &set, v);
                (-d[v] + gain - 1) / gain
            })
            .max()
            .unwrap_or(0);
        if times > 0 {
            fire(&mut d, &mult, &set, times);
        }
    }

    // Dhar's burning algorithm: fire the unburnt set until the fire spreads everywhere.
    loop {
        let mut burnt = vec![false; n];
        burnt[q] = true;
        loop {
            let catches = (0..n).find(|&v| {
                !burnt[v] && (0..n).filter(|&w| burnt[w]).map(|w| mult[v][w]).sum::<i64>() > d[v]
            });
            match catches {
                Some(v) => burnt[v] = true,
                None => break,
            }
        }
        if burnt.iter().all(|&b| b) {
            return d;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        let times = (0..n)
            .filter(|&v| unburnt[v])
            .filter_map(|v| {
                let out = out_degree(&mult, &unburnt, v);
                (out > 0).then(|| d[v] / out)
            })
            .min()
            .unwrap_or(1)
            .max(1);
        fire(&mut d, &mult, &unburnt, -times);
    }
}

/// Decides non-negative rank via the reduced divisor at vertex 0.
pub fn has_nonnegative_rank<T: Scalar>(g: &Graph, lambda: &Divisor<T>) -> Result<bool> {
    has_nonnegative_rank_at(g, lambda, 0)
}

/// As [`has_nonnegative_rank`], reducing with respect to base vertex `q`.
pub fn has_nonnegative_rank_at<T: Scalar>(g: &Graph, lambda: &Divisor<T>, q: usize) -> Result<bool> {
    let d = integer_coefficients(g, lambda)?;
    if q >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{q}")));
    }
    if d.iter().sum::<i64>() < 0 {
        return Ok(false);
    }
    Ok(reduce(g, &d, q)[q] >= 0)
}

/// Brute-force search for an integer `φ` with `0 ≤ φ ≤ bound` and `Δ(φ) + Λ ≥ 0`.
pub fn rank_by_phi_search<T: Scalar>(g: &Graph, lambda: &Divisor<T>, bound: i64) -> Result<bool> {
    let d = integer_coefficients(g, lambda)?;
    let n = g.vertex_count();
    let lap = g.laplacian_matrix();
    let mut phi = vec![0i64; n];
    loop {
        // Some vertex attains min φ = 0 in a minimal witness; skip the rest.
        if phi.contains(&0) {
            let ok = (0..n).all(|v| d[v] + (0..n).map(|w| lap[v][w] * phi[w]).sum::<i64>() >= 0);
            if ok {
                return Ok(true);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            if phi[i] < bound {
                phi[i] += 1;
                break;
            }
            phi[i] = 0;
            i += 1;
        }
    }
}

/// The box bound for [`rank_by_phi_search`]: a minimal witness with `min φ = 0`
/// has `max φ ≤ M(E − Λ)·diam ≤ (Σ Λ⁺)·diam`.
pub fn phi_search_bound<T: Scalar>(g: &Graph, lambda: &Divisor<T>) -> Result<i64> {
    let d = integer_coefficients(g, lambda)?;
    let pos: i64 = d.iter().filter(|&&c| c > 0).sum();
    Ok(pos * g.diameter() as i64)
}

/// Integer linear algebra of the reduced Laplacian (row and column 0 removed).
///
/// Two divisors of equal degree are linearly equivalent iff
/// `adj(L̃)·(D − E)̃ ≡ 0 (mod det L̃)`, so that residue vector is a complete
/// class invariant within a degree.
pub struct PicardClasses {
    adjugate: Vec<Vec<i64>>,
    det: i64,
}

impl PicardClasses {
    pub fn new(g: &Graph) -> Self {
        let lap = g.laplacian_matrix();
        let n = lap.len();
        let reduced: Vec<Vec<i64>> = (1..n).map(|i| (1..n).map(|j| lap[i][j]).collect()).collect();
        let det = int_det(&reduced);
        let m = reduced.len();
        let adjugate = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = (0..m)
                            .filter(|&r| r != j)
                            .map(|r| (0..m).filter(|&c| c != i).map(|c| reduced[r][c]).collect())
                            .collect();
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sign * int_det(&minor)
                    })
                    .collect()
            })
            .collect();
        PicardClasses { adjugate, det }
    }

    /// Number of spanning trees, i.e. the order of the degree-zero class group.
    pub fn order(&self) -> i64 {
        self.det
    }

    pub fn class_of(&self, d: &[i64]) -> Vec<i64> {
        self.adjugate
            .iter()
            .map(|row| {
                let s: i64 = row.iter().zip(&d[1..]).map(|(a, x)| a * x).sum();
                s.rem_euclid(self.det)
            })
            .collect()
    }
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Calls `f` on every effective divisor of degree `deg` on `n` vertices.
fn for_each_effective(n: usize, deg: i64, f: &mut impl FnMut(&[i64])) {
    fn go(cur: &mut Vec<i64>, n: usize, left: i64, f: &mut impl FnMut(&[i64])) {
        if cur.len() + 1 == n {
            cur.push(left);
            f(cur);
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            go(cur, n, left - c, f);
            cur.pop();
        }
    }
    go(&mut Vec::with_capacity(n), n, deg, f);
}

/// Classes of all effective divisors of degree `deg`.
pub fn effective_classes(g: &Graph, classes: &PicardClasses, deg: i64) -> HashSet<Vec<i64>> {
    let mut out = HashSet::new();
    if deg >= 0 {
        for_each_effective(g.vertex_count(), deg, &mut |e| {
            out.insert(classes.class_of(e));
        });
    }
    out
}

/// Oracle: `Λ` has non-negative rank iff its class contains an effective divisor.
pub fn rank_by_class_enumeration<T: Scalar>(g: &Graph, lambda: &Divisor<T>) -> Result<bool> {
    let d = integer_coefficients(g, lambda)?;
    let deg: i64 = d.iter().sum();
    if deg < 0 {
        return Ok(false);
    }
    let classes = PicardClasses::new(g);
    Ok(effective_classes(g, &classes, deg).contains(&classes.class_of(&d)))
}
