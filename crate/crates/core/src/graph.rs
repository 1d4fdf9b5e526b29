//! Simple undirected graphs over dense point identifiers.
//!
//! A [`Graph`] is the digital space the rest of the crate works on. Points
//! are `0..n`; every derived graph (rim, ball, induced subgraph, join) is
//! relabeled densely in ascending order of the source identifiers.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n_points}")]
    EndpointOutOfRange { u: usize, v: usize, n_points: usize },
    #[error("unknown point {point} (graph has {n_points} points)")]
    UnknownPoint { point: usize, n_points: usize },
    #[error("operation requires a nonempty graph")]
    Empty,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n_points` points. Repeated, reversed and loop
    /// pairs are accepted: duplicates collapse and loops are dropped.
    pub fn from_edges(n_points: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n_points];
        for &(u, v) in edges {
            if u >= n_points || v >= n_points {
                return Err(GraphError::EndpointOutOfRange { u, v, n_points });
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    /// `n` points and no edges.
    pub fn isolated(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// The complete graph on `n` points.
    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|p| (0..n).filter(|&q| q != p).collect())
            .collect();
        Self { adjacency }
    }

    pub fn n_points(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n_points()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n_points() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n_points()
    }

    fn check_point(&self, v: usize) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownPoint {
                point: v,
                n_points: self.n_points(),
            })
        }
    }

    /// Induced subgraph on `points`, relabeled `0..points.len()` in the
    /// order given. `points` must be distinct members of the graph.
    pub fn induced(&self, points: &[usize]) -> Result<Graph, GraphError> {
        let mut label = vec![usize::MAX; self.n_points()];
        for (new, &old) in points.iter().enumerate() {
            self.check_point(old)?;
            label[old] = new;
        }
        let adjacency = points
            .iter()
            .map(|&old| {
                let mut list: Vec<usize> = self.adjacency[old]
                    .iter()
                    .filter_map(|&q| (label[q] != usize::MAX).then_some(label[q]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Ok(Graph { adjacency })
    }

    /// The rim (neighborhood) of `v`: the subgraph induced on the points
    /// adjacent to `v`, without `v` itself.
    pub fn rim(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_point(v)?;
        self.induced(&self.adjacency[v])
    }

    /// The ball of `v`: `v` together with its rim. `v` keeps its rank among
    /// the ball's points in ascending identifier order.
    pub fn ball(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_point(v)?;
        let mut pts = self.adjacency[v].clone();
        let at = pts.partition_point(|&q| q < v);
        pts.insert(at, v);
        self.induced(&pts)
    }

    /// `G - v`, with the remaining points keeping their relative order.
    pub fn remove_point(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_point(v)?;
        let pts: Vec<usize> = self.points().filter(|&q| q != v).collect();
        self.induced(&pts)
    }

    /// The join: disjoint copies of `self` (points `0..|self|`) and `other`
    /// (shifted by `|self|`) plus every edge between the two copies.
    pub fn join(&self, other: &Graph) -> Graph {
        let shift = self.n_points();
        let total = shift + other.n_points();
        let mut adjacency = Vec::with_capacity(total);
        for list in &self.adjacency {
            let mut l = list.clone();
            l.extend(shift..total);
            adjacency.push(l);
        }
        for list in &other.adjacency {
            let mut l: Vec<usize> = (0..shift).collect();
            l.extend(list.iter().map(|&q| q + shift));
            adjacency.push(l);
        }
        Graph { adjacency }
    }

    /// Number of complete subgraphs of each size: entry `k - 1` counts the
    /// `k`-cliques. Cliques are grown in ascending identifier order, so each
    /// one is visited exactly once.
    pub fn clique_counts(&self) -> Vec<u64> {
        let mut counts = Vec::new();
        let mut candidates = Vec::new();
        for v in self.points() {
            candidates.clear();
            candidates.extend(self.adjacency[v].iter().copied().filter(|&q| q > v));
            self.extend_cliques(1, &candidates, &mut counts);
        }
        counts
    }

    fn extend_cliques(&self, size: usize, candidates: &[usize], counts: &mut Vec<u64>) {
        if counts.len() < size {
            counts.resize(size, 0);
        }
        counts[size - 1] += 1;
        for (i, &w) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&q| self.has_edge(w, q))
                .collect();
            self.extend_cliques(size + 1, &next, counts);
        }
    }

    /// Alternating clique count `sum_k (-1)^(k+1) #k-cliques`.
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.clique_counts())
    }

    /// Whether the graph has exactly one connected component.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = vec![false; self.n_points()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        Ok(reached == self.n_points())
    }

    /// Complement graph on the same points.
    pub fn complement(&self) -> Graph {
        let n = self.n_points();
        let adjacency = (0..n)
            .map(|p| (0..n).filter(|&q| q != p && !self.has_edge(p, q)).collect())
            .collect();
        Graph { adjacency }
    }

    /// Serializes to the text format: `points N`, then one `u v` line per
    /// edge with `u < v`, sorted.
    pub fn to_text(&self) -> String {
        let mut out = format!("points {}\n", self.n_points());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the text format. Anything after `#` on a line is ignored, as
    /// are blank lines.
    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut n_points = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: line_no,
                    message: format!("expected a nonnegative integer, found `{s}`"),
                })
            };
            match (n_points, fields.as_slice()) {
                (None, ["points", n]) => n_points = Some(parse(n)?),
                (None, _) => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: "first line must be `points N`".into(),
                    })
                }
                (Some(_), [u, v]) => edges.push((parse(u)?, parse(v)?)),
                (Some(_), _) => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        message: format!("expected `u v`, found `{line}`"),
                    })
                }
            }
        }
        let n = n_points.ok_or(GraphError::Parse {
            line: 0,
            message: "missing `points N` header".into(),
        })?;
        Graph::from_edges(n, &edges)
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_text(s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("points", &self.n_points())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

pub(crate) fn alternating_sum(counts: &[u64]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// A real value per point of some graph.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointFunction(Vec<f64>);

impl PointFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// All zeros except the listed `(point, value)` entries. Later entries
    /// for the same point win.
    pub fn from_sparse(n: usize, entries: &[(usize, f64)]) -> Result<Self, GraphError> {
        let mut values = vec![0.0; n];
        for &(p, x) in entries {
            if p >= n {
                return Err(GraphError::UnknownPoint {
                    point: p,
                    n_points: n,
                });
            }
            values[p] = x;
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// Sum in ascending point order.
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_aligned_with(&self, g: &Graph) -> bool {
        self.len() == g.n_points()
    }
}

impl Index<usize> for PointFunction {
    type Output = f64;

    fn index(&self, p: usize) -> &f64 {
        &self.0[p]
    }
}

impl From<Vec<f64>> for PointFunction {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}
