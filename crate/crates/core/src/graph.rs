//! Dual graphs, divisors and functions on their vertices.
//!
//! Vertices are identified by strings; the declaration order fixes the
//! coordinate order of every vector and polyhedron built from a graph.

use std::collections::{HashMap, VecDeque};
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A finite connected multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from vertex names and edges given by name.
    ///
    /// Fails on duplicate or unknown names and on disconnected input.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        let mut names = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            let v = v.as_ref().to_string();
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
            names.push(v);
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownVertex(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownVertex(b.as_ref().to_string()))?;
            idx_edges.push((ia, ib));
        }
        Self::from_indexed(names, idx_edges)
    }

    /// Builds a graph from names and index pairs.
    pub fn from_indexed(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, v) in names.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        for &(a, b) in &edges {
            for x in [a, b] {
                if x >= names.len() {
                    return Err(Error::UnknownVertex(format!("#{x}")));
                }
            }
        }
        let g = Graph { names, index, edges };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Vertices named `v0, v1, ...`.
    pub fn anonymous(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_indexed((0..n).map(|i| format!("v{i}")).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.names.len()
    }

    /// Neighbour lists with multiplicity; loops are skipped.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for &(a, b) in &self.edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    fn bfs_distances(&self, adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        self.bfs_distances(&adj, 0).iter().all(Option::is_some)
    }

    /// Shortest-path distances (edge counts) from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let adj = self.adjacency();
        self.bfs_distances(&adj, source)
            .into_iter()
            .map(|d| d.expect("graph is connected"))
            .collect()
    }

    /// Maximum over vertex pairs of the shortest-path edge count.
    pub fn diameter(&self) -> usize {
        let adj = self.adjacency();
        (0..self.names.len())
            .map(|s| {
                self.bfs_distances(&adj, s)
                    .into_iter()
                    .map(|d| d.expect("graph is connected"))
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Integer Laplacian matrix `L` with `Δ(φ) = L φ`.
    ///
    /// Diagonal entries count non-loop edge ends; off-diagonal entries are
    /// minus the edge multiplicity.
    pub fn laplacian_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.names.len();
        let mut m = vec![vec![0i64; n]; n];
        for &(a, b) in &self.edges {
            if a != b {
                m[a][a] += 1;
                m[b][b] += 1;
                m[a][b] -= 1;
                m[b][a] -= 1;
            }
        }
        m
    }

    /// Returns a copy with one more edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Self {
        let mut g = self.clone();
        g.edges.push((a, b));
        g
    }
}

macro_rules! vertex_vector {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name<T>(Vec<T>);

        impl<T: Scalar> $name<T> {
            pub fn new(values: Vec<T>) -> Self {
                Self(values)
            }

            pub fn zero(n: usize) -> Self {
                Self(vec![T::zero(); n])
            }

            pub fn from_ints(values: &[i64]) -> Self {
                Self(values.iter().map(|&v| T::from_i64(v)).collect())
            }

            pub fn values(&self) -> &[T] {
                &self.0
            }

            pub fn into_values(self) -> Vec<T> {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn scale(&self, k: &T) -> Self {
                Self(self.0.iter().map(|x| x.clone() * k).collect())
            }

            pub fn check_len(&self, g: &Graph) -> Result<()> {
                if self.0.len() == g.vertex_count() {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: g.vertex_count(),
                        found: self.0.len(),
                    })
                }
            }

            /// Pairs `(vertex name, value)` in canonical order.
            pub fn named<'g>(&'g self, g: &'g Graph) -> impl Iterator<Item = (&'g str, &'g T)> {
                g.vertices().iter().map(String::as_str).zip(self.0.iter())
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl<T: Scalar> Add for &$name<T> {
            type Output = $name<T>;
            fn add(self, rhs: Self) -> $name<T> {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b).collect())
            }
        }

        impl<T: Scalar> Sub for &$name<T> {
            type Output = $name<T>;
            fn sub(self, rhs: Self) -> $name<T> {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b).collect())
            }
        }

        impl<T: Scalar> Neg for &$name<T> {
            type Output = $name<T>;
            fn neg(self) -> $name<T> {
                $name(self.0.iter().map(|a| -a.clone()).collect())
            }
        }
    };
}

vertex_vector!(Divisor);
vertex_vector!(GraphFunction);

impl<T: Scalar> Divisor<T> {
    /// Builds a divisor from `(name, coefficient)` pairs; omitted vertices get 0.
    pub fn from_named<S: AsRef<str>>(g: &Graph, coeffs: impl IntoIterator<Item = (S, T)>) -> Result<Self> {
        let mut values = vec![T::zero(); g.vertex_count()];
        for (name, c) in coeffs {
            let i = g.vertex_index(name.as_ref())?;
            values[i] += c;
        }
        Ok(Self(values))
    }

    /// Sum of all coefficients.
    pub fn degree(&self) -> T {
        scalar::sum(&self.0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// `max_S |Σ_{v∈S} f(v)|`, via the positive/negative-part closed form.
    pub fn m_statistic(&self) -> T {
        let (pos, neg) = self.0.iter().fold((T::zero(), T::zero()), |(p, n), c| {
            if c.is_positive() {
                (p + c, n)
            } else {
                (p, n - c)
            }
        });
        pos.max(neg)
    }

    /// Sum of the positive coefficients.
    pub fn positive_mass(&self) -> T {
        self.0
            .iter()
            .filter(|c| c.is_positive())
            .fold(T::zero(), |acc, c| acc + c)
    }

    /// Index of the first non-integer coefficient, if any.
    pub fn first_non_integer(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_integer())
    }
}

impl<T: Scalar> GraphFunction<T> {
    /// Builds a function from `(name, value)` pairs; every vertex must be given.
    pub fn from_named<S: AsRef<str>>(g: &Graph, values: impl IntoIterator<Item = (S, T)>) -> Result<Self> {
        let mut slots: Vec<Option<T>> = vec![None; g.vertex_count()];
        for (name, v) in values {
            let i = g.vertex_index(name.as_ref())?;
            slots[i] = Some(v);
        }
        let mut out = Vec::with_capacity(slots.len());
        for (i, s) in slots.into_iter().enumerate() {
            out.push(s.ok_or_else(|| Error::UnknownVertex(g.vertex_name(i).to_string()))?);
        }
        Ok(Self(out))
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self(vec![c; n])
    }

    pub fn add_constant(&self, c: &T) -> Self {
        Self(self.0.iter().map(|x| x.clone() + c).collect())
    }

    pub fn max_value(&self) -> T {
        self.0.iter().max().cloned().unwrap_or_else(T::zero)
    }

    pub fn min_value(&self) -> T {
        self.0.iter().min().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Vertexwise minimum.
    pub fn pointwise_min(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone().min(b.clone()))
                .collect(),
        ))
    }
}

/// `Δ(φ)(v) = Σ_{edges vw} (φ(v) − φ(w))`, evaluated edge by edge.
pub fn laplacian<T: Scalar>(g: &Graph, phi: &GraphFunction<T>) -> Result<Divisor<T>> {
    phi.check_len(g)?;
    let mut out = vec![T::zero(); g.vertex_count()];
    for &(a, b) in g.edges() {
        if a == b {
            continue;
        }
        let diff = phi[a].clone() - &phi[b];
        out[b] -= diff.clone();
        out[a] += diff;
    }
    Ok(Divisor(out))
}

/// Specialization of the vertical divisor `Σ φ(v) C_v`, i.e. `−Δ(φ)`.
pub fn specialize_vertical<T: Scalar>(g: &Graph, phi: &GraphFunction<T>) -> Result<Divisor<T>> {
    Ok(-&laplacian(g, phi)?)
}

/// The plane-quartic dual graph: a conic `P`, two lines `Q1`, `Q2` and the
/// exceptional curve `P'`.
pub fn quartic_graph() -> Graph {
    Graph::new(
        &["P", "Q1", "Q2", "P'"],
        &[
            ("P", "Q1"),
            ("P", "Q1"),
            ("P", "Q2"),
            ("P", "Q2"),
            ("Q1", "P'"),
            ("Q2", "P'"),
        ],
    )
    .expect("quartic graph is valid")
}
