//! Undirected simple graphs stored as a sorted edge list plus CSR adjacency.

use serde::{Deserialize, Serialize};

use crate::error::{GraphonError, Result};
use crate::scalar::Scalar;

/// Sparse undirected simple graph on vertices `0..n`.
///
/// Edges are stored once as `(i, j)` with `i < j`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphonError;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges }
    }
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)` and dropping
    /// duplicates. Self-loops and out-of-range ids are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphonError::SelfLoop(a));
            }
            for id in [a, b] {
                if id >= n {
                    return Err(GraphonError::VertexOutOfRange { id, n });
                }
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_unchecked(n, list))
    }

    fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![0usize; 2 * edges.len()];
        for &(i, j) in &edges {
            adjacency[fill[i]] = j;
            fill[i] += 1;
            adjacency[fill[j]] = i;
            fill[j] += 1;
        }
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_sorted_unchecked(n, edges)
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|j| (0, j)).collect();
        Self::from_sorted_unchecked(leaves + 1, edges)
    }

    /// A clique on the first `floor(n^((1 + alpha) / 2))` vertices, all other
    /// vertices isolated. The sparse "network celebrity" sequence.
    pub fn celebrity(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GraphonError::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        let core = celebrity_core_size(n, alpha);
        let mut g = Self::complete(core);
        g.n = n;
        g.offsets.resize(n + 1, *g.offsets.last().unwrap());
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `|E| / n^2`.
    pub fn edge_density(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.edges.len() as f64 / (self.n as f64 * self.n as f64)
    }

    /// Fraction of unordered vertex pairs joined by an edge,
    /// `2|E| / (n (n - 1))`.
    pub fn pair_density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / (self.n as f64 * (self.n as f64 - 1.0))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn isolated_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&v| self.degree(v) == 0)
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    ///
    /// Panics if a vertex is repeated or out of range.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.n];
        for (new, &old) in vertices.iter().enumerate() {
            assert!(position[old] == usize::MAX, "vertex {old} repeated");
            position[old] = new;
        }
        let mut edges = Vec::new();
        for (new_a, &old_a) in vertices.iter().enumerate() {
            for &old_b in self.neighbors(old_a) {
                let new_b = position[old_b];
                if new_b != usize::MAX && new_a < new_b {
                    edges.push((new_a, new_b));
                }
            }
        }
        edges.sort_unstable();
        Self::from_sorted_unchecked(vertices.len(), edges)
    }

    /// Drops isolated vertices, renumbering the rest consecutively.
    /// Returns the new graph and, for each new vertex, its old id.
    pub fn without_isolated(&self) -> (Graph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        (self.induced_subgraph(&kept), kept)
    }

    /// Relabels vertices: old vertex `v` becomes `order.iter().position(v)`.
    pub fn permuted(&self, order: &[usize]) -> Graph {
        assert_eq!(order.len(), self.n);
        self.induced_subgraph(order)
    }

    /// `y = A x`.
    pub fn adjacency_matvec<T: Scalar>(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (v, out) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for &u in self.neighbors(v) {
                acc += x[u];
            }
            *out = acc;
        }
    }
}

/// `floor(n^((1 + alpha) / 2))`, snapping to the nearest integer when the
/// floating point power lands within rounding distance of it.
pub fn celebrity_core_size(n: usize, alpha: f64) -> usize {
    let x = (n as f64).powf((1.0 + alpha) / 2.0);
    let r = x.round();
    let k = if (r - x).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.floor()
    };
    (k as usize).min(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_and_normalizes() {
        let g = Graph::new(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphonError::SelfLoop(1)));
        assert_eq!(
            Graph::new(2, [(0, 2)]),
            Err(GraphonError::VertexOutOfRange { id: 2, n: 2 })
        );
    }

    #[test]
    fn celebrity_core() {
        assert_eq!(celebrity_core_size(10_000, 0.5), 1000);
        assert_eq!(celebrity_core_size(25_600, 0.5), 2023);
        let g = Graph::celebrity(400, 0.5).unwrap();
        assert_eq!(g.n(), 400);
        assert_eq!(g.edge_count(), 89 * 88 / 2);
        assert_eq!(g.isolated_vertices().count(), 400 - 89);
    }

    #[test]
    fn induced_and_isolated() {
        let g = Graph::path(5);
        let h = g.induced_subgraph(&[4, 0, 3]);
        assert_eq!(h.edges(), &[(0, 2)]);
        let (k, kept) = h.without_isolated();
        assert_eq!(kept, vec![0, 2]);
        assert_eq!(k.edge_count(), 1);
    }

    #[test]
    fn matvec_star() {
        let g = Graph::star(3);
        let mut y = vec![0.0; 4];
        g.adjacency_matvec(&[1.0, 1.0, 2.0, 3.0], &mut y);
        assert_eq!(y, vec![6.0, 1.0, 1.0, 1.0]);
    }
}
