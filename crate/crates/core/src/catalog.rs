//! Named digital spaces with verified properties.
//!
//! Labeling conventions:
//!
//! * `string_disk(k)`: path `0 - 1 - ... - (k-1)`.
//! * `cycle(m)`: cycle `0 - 1 - ... - (m-1) - 0`.
//! * `torus16`, `klein16`: point `(i, j)` with `i, j` in `0..4` has id
//!   `i + 4j`. Both use the neighbors `(i±1, j)`, `(i, j±1)`, `(i+1, j+1)`,
//!   `(i-1, j-1)`; the Klein bottle glues row 3 to row 0 with `i -> -i`.
//! * `sphere2_min`, `sphere3_min`, `sphere4_min`: see
//!   [`minimal_sphere`](crate::topology::minimal_sphere); `2i` and `2i+1`
//!   are antipodes.
//! * `projective11`: fixed 11-point flag triangulation, see
//!   [`PROJECTIVE11_EDGES`].
//! * `two_point`: a single edge.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;
use crate::topology::{self, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("{name}: parameter {value} out of range (minimum {min})")]
    ParameterOutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("{name}: declared property failed verification: {property}")]
    Verification { name: String, property: String },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Identifier of a catalog space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogName {
    StringDisk(usize),
    Cycle(usize),
    Sphere2Min,
    Torus16,
    Klein16,
    Projective11,
    Sphere3Min,
    Sphere4Min,
    TwoPoint,
}

impl CatalogName {
    /// Representative names, one per family.
    pub fn representatives() -> Vec<CatalogName> {
        use CatalogName::*;
        vec![
            TwoPoint,
            StringDisk(10),
            Cycle(4),
            Sphere2Min,
            Sphere3Min,
            Sphere4Min,
            Torus16,
            Klein16,
            Projective11,
        ]
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::StringDisk(k) => write!(f, "string_disk({k})"),
            CatalogName::Cycle(m) => write!(f, "cycle({m})"),
            CatalogName::Sphere2Min => f.write_str("sphere2_min"),
            CatalogName::Torus16 => f.write_str("torus16"),
            CatalogName::Klein16 => f.write_str("klein16"),
            CatalogName::Projective11 => f.write_str("projective11"),
            CatalogName::Sphere3Min => f.write_str("sphere3_min"),
            CatalogName::Sphere4Min => f.write_str("sphere4_min"),
            CatalogName::TwoPoint => f.write_str("two_point"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || CatalogError::UnknownName(s.to_string());
        if let Some((family, rest)) = s.split_once('(') {
            let arg = rest
                .strip_suffix(')')
                .and_then(|a| a.trim().parse::<usize>().ok())
                .ok_or_else(unknown)?;
            return match family.trim() {
                "string_disk" => Ok(CatalogName::StringDisk(arg)),
                "cycle" => Ok(CatalogName::Cycle(arg)),
                _ => Err(unknown()),
            };
        }
        match s {
            "sphere2_min" => Ok(CatalogName::Sphere2Min),
            "torus16" => Ok(CatalogName::Torus16),
            "klein16" => Ok(CatalogName::Klein16),
            "projective11" => Ok(CatalogName::Projective11),
            "sphere3_min" => Ok(CatalogName::Sphere3Min),
            "sphere4_min" => Ok(CatalogName::Sphere4Min),
            "two_point" => Ok(CatalogName::TwoPoint),
            _ => Err(unknown()),
        }
    }
}

/// What a catalog space is declared to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Contractible,
    Sphere(usize),
    /// A manifold of this dimension that is not a sphere.
    Surface,
    /// No recognizer claim beyond connectivity (the two-point graph).
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub shape: Shape,
    pub points: usize,
    pub edges: usize,
    pub triangles: Option<u64>,
    pub euler: i64,
    pub orientable: Option<bool>,
    /// Number of points on every rim, for homogeneous spaces.
    pub rim_points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub graph: Graph,
    pub expected: Expected,
}

/// Edge table of the 11-point projective plane: a flag triangulation with
/// 20 triangles whose point-deleted subgraphs reduce to cycles.
#[rustfmt::skip]
pub const PROJECTIVE11_EDGES: [(usize, usize); 30] = [
    (0, 1), (0, 2), (0, 4), (0, 5), (0, 10),
    (1, 4), (1, 5), (1, 6), (1, 8), (1, 9),
    (2, 3), (2, 4), (2, 6), (2, 8), (2, 10),
    (3, 4), (3, 5), (3, 6), (3, 7), (3, 9),
    (4, 9), (5, 6), (5, 7), (5, 10), (6, 8),
    (7, 9), (7, 10), (8, 9), (8, 10), (9, 10),
];

fn path(k: usize) -> Graph {
    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    Graph::from_edges(k, &edges).expect("path endpoints in range")
}

fn cycle(m: usize) -> Graph {
    let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    Graph::from_edges(m, &edges).expect("cycle endpoints in range")
}

/// 4x4 triangulated grid; `twisted` reverses `i` across the row 3 / row 0
/// seam.
fn grid16(twisted: bool) -> Graph {
    let id = |i: usize, j: usize| (i % 4) + 4 * j;
    let seam = |i: usize| if twisted { (4 - i % 4) % 4 } else { i % 4 };
    let mut edges = Vec::with_capacity(48);
    for j in 0..4 {
        for i in 0..4 {
            edges.push((id(i, j), id(i + 1, j)));
            if j < 3 {
                edges.push((id(i, j), id(i, j + 1)));
                edges.push((id(i, j), id(i + 1, j + 1)));
            } else {
                edges.push((id(i, 3), id(seam(i), 0)));
                edges.push((id(i, 3), id(seam(i + 1), 0)));
            }
        }
    }
    Graph::from_edges(16, &edges).expect("grid endpoints in range")
}

fn build(name: CatalogName) -> Result<(Graph, Expected), CatalogError> {
    use CatalogName::*;
    let e = |shape, points, edges, euler| Expected {
        shape,
        points,
        edges,
        triangles: None,
        euler,
        orientable: None,
        rim_points: None,
    };
    Ok(match name {
        StringDisk(k) => {
            if k < 2 {
                return Err(CatalogError::ParameterOutOfRange {
                    name: "string_disk",
                    value: k,
                    min: 2,
                });
            }
            (path(k), e(Shape::Contractible, k, k - 1, 1))
        }
        Cycle(m) => {
            if m < 4 {
                return Err(CatalogError::ParameterOutOfRange {
                    name: "cycle",
                    value: m,
                    min: 4,
                });
            }
            (cycle(m), e(Shape::Sphere(1), m, m, 0))
        }
        TwoPoint => (path(2), e(Shape::Plain, 2, 1, 1)),
        Sphere2Min => (
            topology::minimal_sphere(2),
            Expected {
                orientable: Some(true),
                rim_points: Some(4),
                ..e(Shape::Sphere(2), 6, 12, 2)
            },
        ),
        Sphere3Min => (
            topology::minimal_sphere(3),
            Expected {
                rim_points: Some(6),
                ..e(Shape::Sphere(3), 8, 24, 0)
            },
        ),
        Sphere4Min => (
            topology::minimal_sphere(4),
            Expected {
                rim_points: Some(8),
                ..e(Shape::Sphere(4), 10, 40, 2)
            },
        ),
        Torus16 => (
            grid16(false),
            Expected {
                triangles: Some(32),
                orientable: Some(true),
                rim_points: Some(6),
                ..e(Shape::Surface, 16, 48, 0)
            },
        ),
        Klein16 => (
            grid16(true),
            Expected {
                triangles: Some(32),
                orientable: Some(false),
                rim_points: Some(6),
                ..e(Shape::Surface, 16, 48, 0)
            },
        ),
        Projective11 => (
            Graph::from_edges(11, &PROJECTIVE11_EDGES).expect("table endpoints in range"),
            Expected {
                triangles: Some(20),
                orientable: Some(false),
                ..e(Shape::Surface, 11, 30, 1)
            },
        ),
    })
}

/// Checks every declared property of an entry with the recognizers.
pub fn verify(entry: &CatalogEntry) -> Result<(), CatalogError> {
    let g = &entry.graph;
    let x = &entry.expected;
    let fail = |property: String| {
        Err(CatalogError::Verification {
            name: entry.name.to_string(),
            property,
        })
    };
    if g.n_points() != x.points {
        return fail(format!("points = {}", x.points));
    }
    if g.n_edges() != x.edges {
        return fail(format!("edges = {}", x.edges));
    }
    let counts = g.clique_counts();
    if let Some(t) = x.triangles {
        if counts.get(2).copied().unwrap_or(0) != t {
            return fail(format!("triangles = {t}"));
        }
    }
    if g.euler_characteristic() != x.euler {
        return fail(format!("euler = {}", x.euler));
    }
    if let Some(r) = x.rim_points {
        if g.points().any(|v| g.degree(v) != r) {
            return fail(format!("every rim has {r} points"));
        }
    }
    let ok = match x.shape {
        Shape::Contractible => topology::is_contractible(g)?,
        Shape::Sphere(n) => topology::is_n_sphere(g, n)?,
        Shape::Surface => topology::is_n_manifold(g, 2)? && !topology::is_n_sphere(g, 2)?,
        Shape::Plain => g.is_connected().map_err(TopologyError::from)?,
    };
    if !ok {
        return fail(format!("{:?}", x.shape));
    }
    if let Some(o) = x.orientable {
        if topology::is_orientable(g)? != o {
            return fail(format!("orientable = {o}"));
        }
    }
    Ok(())
}

/// Builds the named space and verifies its declared properties.
pub fn catalog(name: CatalogName) -> Result<CatalogEntry, CatalogError> {
    let (graph, expected) = build(name)?;
    let entry = CatalogEntry {
        name,
        graph,
        expected,
    };
    verify(&entry)?;
    Ok(entry)
}

/// Parses `name` and returns the catalog graph.
pub fn catalog_graph(name: &str) -> Result<Graph, CatalogError> {
    Ok(catalog(name.parse()?)?.graph)
}

/// Names accepted by [`CatalogName::from_str`], with parameter placeholders.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "two_point",
        "string_disk(k)",
        "cycle(m)",
        "sphere2_min",
        "sphere3_min",
        "sphere4_min",
        "torus16",
        "klein16",
        "projective11",
    ]
}
