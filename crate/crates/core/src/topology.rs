//! Contractibility, simple points, digital spheres and manifolds.
//!
//! Every graph reached while deciding these properties (rims, point-deleted
//! subgraphs, rims of those) is an induced subgraph of the input. The
//! recognizers therefore work on point masks over the input graph and
//! memoize on the mask, which keeps the exact contractibility search
//! tractable on the small spaces this crate deals with.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{alternating_sum, Graph, GraphError};

/// Largest graph the mask representation handles.
pub const MAX_POINTS: usize = 128;

/// Default cap on the number of points for the exhaustive contractibility
/// search.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("exact contractibility search needs {points} points, limit is {limit}")]
    SizeLimit { points: usize, limit: usize },
    #[error("manifold dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("graph is not a digital 2-manifold")]
    NotSurface,
    #[error("edge ({u}, {v}) lies on {count} triangles, expected 2")]
    EdgeValence { u: usize, v: usize, count: usize },
}

type Mask = u128;

fn bit(v: usize) -> Mask {
    1 << v
}

fn points_of(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Recognizer state bound to one input graph.
struct Space {
    adj: Vec<Mask>,
    exact_limit: usize,
    contractible: HashMap<Mask, bool>,
    sphere: HashMap<(Mask, usize), bool>,
}

impl Space {
    fn new(g: &Graph, exact_limit: usize) -> Result<Self, TopologyError> {
        if g.n_points() > MAX_POINTS {
            return Err(TopologyError::SizeLimit {
                points: g.n_points(),
                limit: MAX_POINTS,
            });
        }
        let adj = g
            .points()
            .map(|v| g.neighbors(v).iter().fold(0, |m, &q| m | bit(q)))
            .collect();
        Ok(Self {
            adj,
            exact_limit,
            contractible: HashMap::new(),
            sphere: HashMap::new(),
        })
    }

    fn full(&self) -> Mask {
        if self.adj.len() == 128 {
            Mask::MAX
        } else {
            (1 << self.adj.len()) - 1
        }
    }

    fn rim(&self, v: usize, within: Mask) -> Mask {
        self.adj[v] & within
    }

    fn connected(&self, m: Mask) -> bool {
        if m == 0 {
            return false;
        }
        let mut reached = m & m.wrapping_neg();
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0;
            for v in points_of(frontier) {
                next |= self.adj[v];
            }
            frontier = next & m & !reached;
            reached |= frontier;
        }
        reached == m
    }

    fn euler(&self, m: Mask) -> i64 {
        let mut counts = Vec::new();
        for v in points_of(m) {
            let higher = self.adj[v] & m & !((bit(v) << 1).wrapping_sub(1));
            self.count_cliques(1, higher, &mut counts);
        }
        alternating_sum(&counts)
    }

    fn count_cliques(&self, size: usize, candidates: Mask, counts: &mut Vec<u64>) {
        if counts.len() < size {
            counts.resize(size, 0);
        }
        counts[size - 1] += 1;
        let mut rest = candidates;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.count_cliques(size + 1, rest & self.adj[w], counts);
        }
    }

    fn is_simple(&mut self, v: usize, within: Mask) -> Result<bool, TopologyError> {
        self.is_contractible(self.rim(v, within))
    }

    /// Deletes the lowest simple point until none is left. Returns the
    /// residual mask and the deletion order.
    fn reduce(&mut self, mut m: Mask) -> Result<(Mask, Vec<usize>), TopologyError> {
        let mut order = Vec::new();
        'outer: while m.count_ones() > 1 {
            for v in points_of(m) {
                if self.is_simple(v, m)? {
                    m &= !bit(v);
                    order.push(v);
                    continue 'outer;
                }
            }
            break;
        }
        Ok((m, order))
    }

    fn is_contractible(&mut self, m: Mask) -> Result<bool, TopologyError> {
        match m.count_ones() {
            0 => return Ok(false),
            1 => return Ok(true),
            _ => {}
        }
        if let Some(&known) = self.contractible.get(&m) {
            return Ok(known);
        }
        let result = self.decide_contractible(m)?;
        self.contractible.insert(m, result);
        Ok(result)
    }

    fn decide_contractible(&mut self, m: Mask) -> Result<bool, TopologyError> {
        // Deleting a point with contractible rim leaves the alternating
        // clique count unchanged, so every contractible graph has count 1.
        if !self.connected(m) || self.euler(m) != 1 {
            return Ok(false);
        }
        let (residual, _) = self.reduce(m)?;
        if residual.count_ones() == 1 {
            return Ok(true);
        }
        let points = m.count_ones() as usize;
        if points > self.exact_limit {
            return Err(TopologyError::SizeLimit {
                points,
                limit: self.exact_limit,
            });
        }
        for v in points_of(m) {
            if self.is_simple(v, m)? && self.is_contractible(m & !bit(v))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_sphere(&mut self, m: Mask, n: usize) -> Result<bool, TopologyError> {
        if n == 0 {
            let pts: Vec<usize> = points_of(m).collect();
            return Ok(pts.len() == 2 && self.adj[pts[0]] & bit(pts[1]) == 0);
        }
        if let Some(&known) = self.sphere.get(&(m, n)) {
            return Ok(known);
        }
        let result = self.decide_sphere(m, n)?;
        self.sphere.insert((m, n), result);
        Ok(result)
    }

    fn decide_sphere(&mut self, m: Mask, n: usize) -> Result<bool, TopologyError> {
        // A sphere of dimension n has at least 2(n + 1) points.
        if (m.count_ones() as usize) < 2 * (n + 1) || !self.connected(m) {
            return Ok(false);
        }
        for v in points_of(m) {
            if !self.is_sphere(self.rim(v, m), n - 1)? {
                return Ok(false);
            }
        }
        for v in points_of(m) {
            if !self.is_contractible(m & !bit(v))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_manifold(&mut self, m: Mask, n: usize) -> Result<bool, TopologyError> {
        if !self.connected(m) {
            return Ok(false);
        }
        for v in points_of(m) {
            if !self.is_sphere(self.rim(v, m), n - 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Topology recognizers with a configurable cap on the exhaustive search.
#[derive(Clone, Copy, Debug)]
pub struct Recognizer {
    pub exact_limit: usize,
}

impl Default for Recognizer {
    fn default() -> Self {
        Self {
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Outcome of [`Recognizer::simple_point_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// The residual graph, relabeled densely.
    pub residual: Graph,
    /// Input identifiers of the residual points, ascending.
    pub kept: Vec<usize>,
    /// Input identifiers in deletion order.
    pub deleted: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Contractible,
    Sphere(usize),
    Manifold(usize),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Simple points deleted, in order, down to a single point.
    Deletions(Vec<usize>),
    /// The rim of this point is not a sphere of the required dimension.
    BadRim { point: usize },
    /// Removing this point leaves a non-contractible graph.
    NonContractibleComplement { point: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyVerdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
}

impl Recognizer {
    pub fn with_exact_limit(exact_limit: usize) -> Self {
        Self { exact_limit }
    }

    fn space(&self, g: &Graph) -> Result<Space, TopologyError> {
        Space::new(g, self.exact_limit)
    }

    /// One point is contractible; a larger connected graph is contractible
    /// when some point has a contractible rim and a contractible complement.
    pub fn is_contractible(&self, g: &Graph) -> Result<bool, TopologyError> {
        if g.is_empty() {
            return Err(GraphError::Empty.into());
        }
        let mut space = self.space(g)?;
        let full = space.full();
        space.is_contractible(full)
    }

    /// Whether the rim of `v` is contractible.
    pub fn is_simple(&self, g: &Graph, v: usize) -> Result<bool, TopologyError> {
        if !g.contains(v) {
            return Err(GraphError::UnknownPoint {
                point: v,
                n_points: g.n_points(),
            }
            .into());
        }
        let mut space = self.space(g)?;
        let full = space.full();
        space.is_simple(v, full)
    }

    /// Deletes simple points, lowest identifier first, until none remains.
    pub fn simple_point_reduction(&self, g: &Graph) -> Result<Reduction, TopologyError> {
        if g.is_empty() {
            return Err(GraphError::Empty.into());
        }
        let mut space = self.space(g)?;
        let full = space.full();
        let (residual, deleted) = space.reduce(full)?;
        let kept: Vec<usize> = points_of(residual).collect();
        Ok(Reduction {
            residual: g.induced(&kept)?,
            kept,
            deleted,
        })
    }

    /// `n = 0`: exactly two non-adjacent points. `n > 0`: connected, every
    /// rim an `(n-1)`-sphere, and every point-deleted subgraph contractible.
    pub fn is_n_sphere(&self, g: &Graph, n: usize) -> Result<bool, TopologyError> {
        let mut space = self.space(g)?;
        let full = space.full();
        space.is_sphere(full, n)
    }

    /// Connected with every rim an `(n-1)`-sphere; `n >= 2`.
    pub fn is_n_manifold(&self, g: &Graph, n: usize) -> Result<bool, TopologyError> {
        if n < 2 {
            return Err(TopologyError::InvalidDimension(n));
        }
        let mut space = self.space(g)?;
        let full = space.full();
        space.is_manifold(full, n)
    }

    /// Classifies `g` as contractible, a sphere, a manifold or none of
    /// these. Spheres and manifolds are tried at the dimension suggested by
    /// the largest clique.
    pub fn classify(&self, g: &Graph) -> Result<TopologyVerdict, TopologyError> {
        if g.is_empty() {
            return Err(GraphError::Empty.into());
        }
        let mut space = self.space(g)?;
        let full = space.full();
        if space.is_contractible(full)? {
            let (_, order) = space.reduce(full)?;
            let witness = (order.len() + 1 == g.n_points()).then_some(Witness::Deletions(order));
            return Ok(TopologyVerdict {
                kind: VerdictKind::Contractible,
                witness,
            });
        }
        let n = g.clique_counts().len().saturating_sub(1);
        if space.is_sphere(full, n)? {
            return Ok(TopologyVerdict {
                kind: VerdictKind::Sphere(n),
                witness: None,
            });
        }
        if n >= 1 {
            if let Some(point) = points_of(full).find(|&v| {
                let rim = space.rim(v, full);
                !matches!(space.is_sphere(rim, n - 1), Ok(true))
            }) {
                return Ok(TopologyVerdict {
                    kind: VerdictKind::None,
                    witness: Some(Witness::BadRim { point }),
                });
            }
            if n >= 2 && space.connected(full) {
                return Ok(TopologyVerdict {
                    kind: VerdictKind::Manifold(n),
                    witness: points_of(full)
                        .find(|&v| !matches!(space.is_contractible(full & !bit(v)), Ok(true)))
                        .map(|point| Witness::NonContractibleComplement { point }),
                });
            }
        }
        Ok(TopologyVerdict {
            kind: VerdictKind::None,
            witness: None,
        })
    }
}

pub fn is_contractible(g: &Graph) -> Result<bool, TopologyError> {
    Recognizer::default().is_contractible(g)
}

pub fn is_simple(g: &Graph, v: usize) -> Result<bool, TopologyError> {
    Recognizer::default().is_simple(g, v)
}

/// Residual graph after deleting simple points, lowest identifier first.
pub fn simple_point_reduction(g: &Graph) -> Result<Graph, TopologyError> {
    Ok(Recognizer::default().simple_point_reduction(g)?.residual)
}

pub fn is_n_sphere(g: &Graph, n: usize) -> Result<bool, TopologyError> {
    Recognizer::default().is_n_sphere(g, n)
}

pub fn is_n_manifold(g: &Graph, n: usize) -> Result<bool, TopologyError> {
    Recognizer::default().is_n_manifold(g, n)
}

/// Join of `n + 1` copies of the two-point sphere. Copy `i` holds points
/// `2i` and `2i + 1`, which are antipodal.
pub fn minimal_sphere(n: usize) -> Graph {
    let s0 = Graph::isolated(2);
    (0..n).fold(s0.clone(), |acc, _| acc.join(&s0))
}

/// Orientability of a digital 2-manifold, decided by propagating a cyclic
/// orientation across triangles that share an edge.
pub fn is_orientable(g: &Graph) -> Result<bool, TopologyError> {
    if !is_n_manifold(g, 2)? {
        return Err(TopologyError::NotSurface);
    }
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    for (u, v) in g.edges() {
        for &w in g.neighbors(v) {
            if w > v && g.has_edge(u, w) {
                triangles.push([u, v, w]);
            }
        }
    }
    let mut on_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])] {
            on_edge.entry((a, b)).or_default().push(t);
        }
    }
    let mut edges: Vec<_> = on_edge.iter().collect();
    edges.sort();
    if let Some((&(u, v), ts)) = edges.into_iter().find(|(_, ts)| ts.len() != 2) {
        return Err(TopologyError::EdgeValence {
            u,
            v,
            count: ts.len(),
        });
    }

    // `oriented[t]` is the vertex cycle chosen for triangle t.
    let mut oriented: Vec<Option<[usize; 3]>> = vec![None; triangles.len()];
    for start in 0..triangles.len() {
        if oriented[start].is_some() {
            continue;
        }
        oriented[start] = Some(triangles[start]);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let cyc = oriented[t].expect("queued triangles are oriented");
            for i in 0..3 {
                let (a, b) = (cyc[i], cyc[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let other = on_edge[&key].iter().copied().find(|&s| s != t).unwrap();
                // The neighbor must run along the shared edge as b -> a.
                let [x, y, z] = triangles[other];
                let want = if traverses([x, y, z], b, a) {
                    [x, y, z]
                } else {
                    [x, z, y]
                };
                match oriented[other] {
                    Some(have) if !traverses(have, b, a) => return Ok(false),
                    Some(_) => {}
                    None => {
                        oriented[other] = Some(want);
                        stack.push(other);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn traverses(cyc: [usize; 3], from: usize, to: usize) -> bool {
    (0..3).any(|i| cyc[i] == from && cyc[(i + 1) % 3] == to)
}
