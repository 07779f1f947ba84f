//! Decorated bipartite dual graphs of admissible-cover boundary divisors.
//!
//! A graph has `L`- and `R`-vertices carrying a genus and a degree, and
//! edges `L -- R` carrying a local degree. Validity means the degree data is
//! consistent, each side has total degree `d`, and the arithmetic genus is
//! `g`. The statistics used by the inequality engine (ramification index,
//! excess, branch counts) live here, as does the canonical labelling that
//! keys every boundary coefficient.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symkernel::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub side: Side,
    pub genus: i64,
    pub degree: i64,
}

/// An edge from the `L`-vertex `l` to the `R`-vertex `r`. When read from
/// untrusted input the endpoints may sit on the wrong sides; `validate`
/// reports that.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub l: usize,
    pub r: usize,
    pub local_degree: i64,
}

/// One failed validity condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownVertex {
        edge: usize,
        id: usize,
    },
    NotBipartite {
        edge: usize,
    },
    NonPositiveDegree {
        vertex: usize,
    },
    NegativeGenus {
        vertex: usize,
    },
    NonPositiveLocalDegree {
        edge: usize,
    },
    VertexDegree {
        vertex: usize,
        degree: i64,
        edge_sum: i64,
    },
    SideDegree {
        side: Side,
        sum: i64,
        d: i64,
    },
    Genus {
        expected: i64,
        actual: i64,
    },
    Disconnected,
    DuplicateId {
        id: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { edge, id } => {
                write!(f, "edge {edge} refers to unknown vertex {id}")
            }
            Violation::NotBipartite { edge } => {
                write!(f, "edge {edge} does not join an L-vertex to an R-vertex")
            }
            Violation::NonPositiveDegree { vertex } => {
                write!(f, "vertex {vertex} has non-positive degree")
            }
            Violation::NegativeGenus { vertex } => write!(f, "vertex {vertex} has negative genus"),
            Violation::NonPositiveLocalDegree { edge } => {
                write!(f, "edge {edge} has non-positive local degree")
            }
            Violation::VertexDegree {
                vertex,
                degree,
                edge_sum,
            } => {
                write!(
                    f,
                    "vertex {vertex} has degree {degree} but its edges sum to {edge_sum}"
                )
            }
            Violation::SideDegree { side, sum, d } => {
                write!(f, "side {side} has total degree {sum}, expected {d}")
            }
            Violation::Genus { expected, actual } => {
                write!(f, "arithmetic genus {actual}, expected {expected}")
            }
            Violation::Disconnected => f.write_str("graph is disconnected"),
            Violation::DuplicateId { id } => write!(f, "vertex id {id} is used twice"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).join("; "))]
    InvalidGraph(Vec<Violation>),
    #[error("empty ramification profile")]
    EmptyProfile,
    #[error("invalid profile {0:?} for degree {1}")]
    InvalidProfile(Vec<i64>, i64),
    #[error("no such construction: {0}")]
    Construction(String),
    #[error("cannot parse graph: {0}")]
    Parse(String),
}

/// Which kind of boundary point a graph describes, by the number of branch
/// points on each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorType {
    /// Both sides carry at least three branch points.
    Higher,
    /// One side carries exactly two branch points (`Δ_irr`, `T`, `D`, ...).
    Relevant,
    /// One side carries fewer than two branch points; the cover is not a
    /// boundary divisor at all.
    NotDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl DualGraph {
    /// Build a graph from per-side `(genus, degree)` lists and edges given
    /// by per-side indices. Vertex ids are `0..|L|` then `|L|..`.
    pub fn from_sides(
        left: &[(i64, i64)],
        right: &[(i64, i64)],
        edges: &[(usize, usize, i64)],
    ) -> DualGraph {
        let nl = left.len();
        let mut vertices = Vec::with_capacity(nl + right.len());
        for (i, &(genus, degree)) in left.iter().enumerate() {
            vertices.push(Vertex {
                id: i,
                side: Side::L,
                genus,
                degree,
            });
        }
        for (i, &(genus, degree)) in right.iter().enumerate() {
            vertices.push(Vertex {
                id: nl + i,
                side: Side::R,
                genus,
                degree,
            });
        }
        let edges = edges
            .iter()
            .map(|&(l, r, ld)| Edge {
                l,
                r: nl + r,
                local_degree: ld,
            })
            .collect();
        DualGraph { vertices, edges }
    }

    fn vertex(&self, id: usize) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn index_of(&self, id: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn side_vertices(&self, side: Side) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(move |v| v.side == side)
    }

    /// Edges at vertex `id`.
    pub fn incident(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.l == id || e.r == id)
    }

    /// The structured list of failed conditions; empty iff valid.
    pub fn violations(&self, d: i64, g: i64) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id) {
                out.push(Violation::DuplicateId { id: v.id });
            }
            if v.degree < 1 {
                out.push(Violation::NonPositiveDegree { vertex: v.id });
            }
            if v.genus < 0 {
                out.push(Violation::NegativeGenus { vertex: v.id });
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.local_degree < 1 {
                out.push(Violation::NonPositiveLocalDegree { edge: i });
            }
            match (self.vertex(e.l), self.vertex(e.r)) {
                (Some(a), Some(b)) => {
                    if a.side != Side::L || b.side != Side::R {
                        out.push(Violation::NotBipartite { edge: i });
                    }
                }
                (None, _) => out.push(Violation::UnknownVertex { edge: i, id: e.l }),
                (_, None) => out.push(Violation::UnknownVertex { edge: i, id: e.r }),
            }
        }
        for v in &self.vertices {
            let edge_sum: i64 = self.incident(v.id).map(|e| e.local_degree).sum();
            if edge_sum != v.degree {
                out.push(Violation::VertexDegree {
                    vertex: v.id,
                    degree: v.degree,
                    edge_sum,
                });
            }
        }
        for side in [Side::L, Side::R] {
            let sum: i64 = self.side_vertices(side).map(|v| v.degree).sum();
            if sum != d {
                out.push(Violation::SideDegree { side, sum, d });
            }
        }
        if !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        let actual = self.arithmetic_genus();
        if actual != g {
            out.push(Violation::Genus {
                expected: g,
                actual,
            });
        }
        out
    }

    pub fn validate(&self, d: i64, g: i64) -> bool {
        self.violations(d, g).is_empty()
    }

    pub fn check(&self, d: i64, g: i64) -> Result<(), GraphError> {
        let v = self.violations(d, g);
        if v.is_empty() {
            Ok(())
        } else {
            Err(GraphError::InvalidGraph(v))
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            let id = self.vertices[i].id;
            for e in self.incident(id) {
                let other = if e.l == id { e.r } else { e.l };
                if let Some(j) = self.index_of(other) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `Σ g_v + #edges - #vertices + 1`.
    pub fn arithmetic_genus(&self) -> i64 {
        let gs: i64 = self.vertices.iter().map(|v| v.genus).sum();
        gs + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// The cover degree read off the `L` side.
    pub fn degree(&self) -> i64 {
        self.side_vertices(Side::L).map(|v| v.degree).sum()
    }

    /// `r(Δ) = Σ (d_e - 1)`.
    pub fn ramification_index(&self) -> i64 {
        self.edges.iter().map(|e| e.local_degree - 1).sum()
    }

    pub fn side_genus(&self, side: Side) -> i64 {
        self.side_vertices(side).map(|v| v.genus).sum()
    }

    /// `min(r + Σ_L g_v, r + Σ_R g_v)`.
    pub fn excess(&self) -> i64 {
        let r = self.ramification_index();
        (r + self.side_genus(Side::L)).min(r + self.side_genus(Side::R))
    }

    /// Branch points of the side's cover away from the node, by
    /// Riemann–Hurwitz per vertex.
    pub fn branch_count(&self, side: Side) -> i64 {
        self.side_vertices(side)
            .map(|v| {
                let ram: i64 = self.incident(v.id).map(|e| e.local_degree - 1).sum();
                2 * v.genus - 2 + 2 * v.degree - ram
            })
            .sum()
    }

    pub fn classify(&self) -> DivisorType {
        let m = self.branch_count(Side::L).min(self.branch_count(Side::R));
        match m {
            m if m >= 3 => DivisorType::Higher,
            2 => DivisorType::Relevant,
            _ => DivisorType::NotDivisor,
        }
    }

    /// Exchange the two sides.
    pub fn swap(&self) -> DualGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                side: v.side.other(),
                ..v.clone()
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                l: e.r,
                r: e.l,
                local_degree: e.local_degree,
            })
            .collect();
        DualGraph { vertices, edges }
    }

    /// Rename vertices by an arbitrary injective map, keeping structure.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> DualGraph {
        DualGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: map(v.id),
                    ..v.clone()
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    l: map(e.l),
                    r: map(e.r),
                    local_degree: e.local_degree,
                })
                .collect(),
        }
    }

    /// The canonical representative: vertices sorted by `(side, genus,
    /// degree)`, ties broken by the lexicographically least edge list over
    /// all tie permutations, and the smaller of the two side orientations.
    pub fn canonical(&self) -> DualGraph {
        let a = self.canonical_oriented();
        let b = self.swap().canonical_oriented();
        if compact_key(&b) < compact_key(&a) {
            b
        } else {
            a
        }
    }

    fn canonical_oriented(&self) -> DualGraph {
        let mut best: Option<(CompactGraph, DualGraph)> = None;
        let left = sorted_groups(self, Side::L);
        let right = sorted_groups(self, Side::R);
        for lo in group_orders(&left) {
            for ro in group_orders(&right) {
                let order: Vec<usize> = lo.iter().chain(ro.iter()).copied().collect();
                let g = self.renumbered(&order);
                let key = compact_key(&g);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, g));
                }
            }
        }
        best.map(|(_, g)| g).unwrap_or_else(|| self.clone())
    }

    /// Renumber so that `order[i]` gets id `i`; edges sorted.
    fn renumbered(&self, order: &[usize]) -> DualGraph {
        let pos = |id: usize| {
            order
                .iter()
                .position(|&o| o == id)
                .expect("vertex in order")
        };
        let vertices = order
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                let v = self.vertex(id).expect("known vertex");
                Vertex { id: i, ..v.clone() }
            })
            .collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                l: pos(e.l),
                r: pos(e.r),
                local_degree: e.local_degree,
            })
            .collect();
        edges.sort_by_key(|e| (e.l, e.r, e.local_degree));
        DualGraph { vertices, edges }
    }

    /// One-line label of the canonical form, e.g.
    /// `L[d3g1] R[d3g2] E[0-0:1 0-0:1 0-0:1]`.
    pub fn label(&self) -> String {
        self.canonical().raw_label()
    }

    fn raw_label(&self) -> String {
        let c = self.to_compact();
        let side = |vs: &[CompactVertex]| {
            vs.iter()
                .map(|v| format!("d{}g{}", v.degree, v.genus))
                .join(" ")
        };
        let edges = c
            .edges
            .iter()
            .map(|[l, r, k]| format!("{l}-{r}:{k}"))
            .join(" ");
        format!("L[{}] R[{}] E[{}]", side(&c.left), side(&c.right), edges)
    }

    /// `{L: [...], R: [...], edges: [[l, r, localDegree], ...]}` with
    /// per-side indices, in the current vertex order.
    pub fn to_compact(&self) -> CompactGraph {
        let left: Vec<&Vertex> = self.side_vertices(Side::L).collect();
        let right: Vec<&Vertex> = self.side_vertices(Side::R).collect();
        let li = |id: usize| left.iter().position(|v| v.id == id).unwrap_or(usize::MAX) as i64;
        let ri = |id: usize| right.iter().position(|v| v.id == id).unwrap_or(usize::MAX) as i64;
        let mut edges: Vec<[i64; 3]> = self
            .edges
            .iter()
            .map(|e| [li(e.l), ri(e.r), e.local_degree])
            .collect();
        edges.sort();
        CompactGraph {
            left: left
                .iter()
                .map(|v| CompactVertex {
                    genus: v.genus,
                    degree: v.degree,
                })
                .collect(),
            right: right
                .iter()
                .map(|v| CompactVertex {
                    genus: v.genus,
                    degree: v.degree,
                })
                .collect(),
            edges,
        }
    }

    pub fn from_compact(c: &CompactGraph) -> Result<DualGraph, GraphError> {
        let nl = c.left.len() as i64;
        let nr = c.right.len() as i64;
        let mut edges = Vec::new();
        for [l, r, k] in &c.edges {
            if *l < 0 || *l >= nl || *r < 0 || *r >= nr {
                return Err(GraphError::Parse(format!(
                    "edge [{l}, {r}, {k}] is out of range"
                )));
            }
            edges.push((*l as usize, *r as usize, *k));
        }
        let left: Vec<(i64, i64)> = c.left.iter().map(|v| (v.genus, v.degree)).collect();
        let right: Vec<(i64, i64)> = c.right.iter().map(|v| (v.genus, v.degree)).collect();
        Ok(DualGraph::from_sides(&left, &right, &edges))
    }

    /// The local degrees of the edges at vertex `id`, largest first.
    pub fn profile_at(&self, id: usize) -> Vec<i64> {
        let mut p: Vec<i64> = self.incident(id).map(|e| e.local_degree).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    /// For a graph with one vertex per side, `(profile, g_L, g_R)`.
    pub fn as_two_vertex(&self) -> Option<(Vec<i64>, i64, i64)> {
        let l: Vec<&Vertex> = self.side_vertices(Side::L).collect();
        let r: Vec<&Vertex> = self.side_vertices(Side::R).collect();
        if l.len() != 1 || r.len() != 1 {
            return None;
        }
        Some((self.profile_at(l[0].id), l[0].genus, r[0].genus))
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for DualGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_compact().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c = CompactGraph::deserialize(d)?;
        DualGraph::from_compact(&c).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompactVertex {
    pub genus: i64,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompactGraph {
    #[serde(rename = "L")]
    pub left: Vec<CompactVertex>,
    #[serde(rename = "R")]
    pub right: Vec<CompactVertex>,
    pub edges: Vec<[i64; 3]>,
}

fn compact_key(g: &DualGraph) -> CompactGraph {
    g.to_compact()
}

/// Vertex ids of one side, sorted by `(genus, degree)` and grouped by ties.
fn sorted_groups(g: &DualGraph, side: Side) -> Vec<Vec<usize>> {
    let vs: Vec<&Vertex> = g
        .side_vertices(side)
        .sorted_by_key(|v| (v.genus, v.degree, v.id))
        .collect();
    vs.into_iter()
        .group_by(|v| (v.genus, v.degree))
        .into_iter()
        .map(|(_, grp)| grp.map(|v| v.id).collect())
        .collect()
}

/// All orders obtained by permuting inside each tie group.
fn group_orders(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for grp in groups {
        let perms: Vec<Vec<usize>> = grp.iter().copied().permutations(grp.len()).collect();
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(p);
                    v
                })
            })
            .collect();
    }
    acc
}

/// `nodeDegree / lcm(profile)`.
pub fn boundary_multiplicity(profile: &[i64], node_degree: i64) -> Result<Q, GraphError> {
    if profile.is_empty() {
        return Err(GraphError::EmptyProfile);
    }
    if profile.iter().any(|&p| p < 1) {
        return Err(GraphError::InvalidProfile(
            profile.to_vec(),
            profile.iter().sum(),
        ));
    }
    let l = profile.iter().fold(1i64, |acc, &p| acc.lcm(&p));
    Ok(Q::new(node_degree, l))
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

fn check_profile(profile: &[i64], d: i64) -> Result<(), GraphError> {
    if profile.is_empty() || profile.iter().any(|&p| p < 1) || profile.iter().sum::<i64>() != d {
        return Err(GraphError::InvalidProfile(profile.to_vec(), d));
    }
    Ok(())
}

/// One vertex per side, joined by edges with the given local degrees.
pub fn two_vertex(profile: &[i64], g_l: i64, g_r: i64) -> Result<DualGraph, GraphError> {
    let d: i64 = profile.iter().sum();
    check_profile(profile, d)?;
    if g_l < 0 || g_r < 0 {
        return Err(GraphError::Construction(format!(
            "negative genus ({g_l}, {g_r})"
        )));
    }
    let edges: Vec<(usize, usize, i64)> = profile.iter().map(|&p| (0, 0, p)).collect();
    Ok(DualGraph::from_sides(&[(g_l, d)], &[(g_r, d)], &edges))
}

/// A fixed left vertex `(d, g_l)` over a right side of rational vertices,
/// each given by the local degrees of its edges to the left vertex.
pub fn fan(g_l: i64, right: &[Vec<i64>]) -> Result<DualGraph, GraphError> {
    let d: i64 = right.iter().flatten().sum();
    let mut edges = Vec::new();
    let mut rv = Vec::new();
    for (j, prof) in right.iter().enumerate() {
        if prof.is_empty() {
            return Err(GraphError::Construction(
                "right vertex without edges".into(),
            ));
        }
        rv.push((0, prof.iter().sum()));
        for &p in prof {
            edges.push((0usize, j, p));
        }
    }
    let g = DualGraph::from_sides(&[(g_l, d)], &rv, &edges);
    if g.violations(d, g.arithmetic_genus()).is_empty() {
        Ok(g)
    } else {
        Err(GraphError::Construction("inconsistent fan".into()))
    }
}

/// `Γ_{Δ_irr}`: left `(d, g-1)`; right one degree-2 rational vertex on two
/// unramified edges and `d-2` degree-1 vertices.
pub fn delta_irr(d: i64, g: i64) -> Result<DualGraph, GraphError> {
    if d < 2 || g < 1 {
        return Err(GraphError::Construction(format!(
            "Δ_irr needs d >= 2, g >= 1 (got {d}, {g})"
        )));
    }
    let mut right = vec![vec![1, 1]];
    right.extend((0..d - 2).map(|_| vec![1]));
    fan(g - 1, &right)
}

/// `Γ_T`: left `(d, g)`; right one vertex on a local-degree-3 edge and
/// `d-3` degree-1 vertices.
pub fn t_graph(d: i64, g: i64) -> Result<DualGraph, GraphError> {
    if d < 3 || g < 0 {
        return Err(GraphError::Construction(format!(
            "T needs d >= 3 (got {d})"
        )));
    }
    let mut right = vec![vec![3]];
    right.extend((0..d - 3).map(|_| vec![1]));
    fan(g, &right)
}

/// `Γ_D`: left `(d, g)`; right two vertices each on a local-degree-2 edge
/// and `d-4` degree-1 vertices.
pub fn d_graph(d: i64, g: i64) -> Result<DualGraph, GraphError> {
    if d < 4 || g < 0 {
        return Err(GraphError::Construction(format!(
            "D needs d >= 4 (got {d})"
        )));
    }
    let mut right = vec![vec![2], vec![2]];
    right.extend((0..d - 4).map(|_| vec![1]));
    fan(g, &right)
}

/// Trigonal `v_L` of genus `g_L` glued twice to a hyperelliptic `v_R` of
/// genus `g_R` and once to a rational degree-1 vertex. Genus `g_L + g_R + 1`.
pub fn s3(g_l: i64, g_r: i64) -> DualGraph {
    DualGraph::from_sides(
        &[(g_l, 3)],
        &[(g_r, 2), (0, 1)],
        &[(0, 0, 1), (0, 0, 1), (0, 1, 1)],
    )
}

/// As [`s3`] but `v_R` meets `v_L` in a single local-degree-2 edge.
/// Genus `g_L + g_R`.
pub fn s3_ramified(g_l: i64, g_r: i64) -> DualGraph {
    DualGraph::from_sides(&[(g_l, 3)], &[(g_r, 2), (0, 1)], &[(0, 0, 2), (0, 1, 1)])
}

/// Two hyperelliptic vertices joined once, each with a rational tail on
/// the opposite side. Genus `g_L + g_R`.
pub fn s4(g_l: i64, g_r: i64) -> DualGraph {
    DualGraph::from_sides(
        &[(g_l, 2), (0, 1)],
        &[(g_r, 2), (0, 1)],
        &[(0, 0, 1), (0, 1, 1), (1, 0, 1)],
    )
}

/// Split graph with a formally negative right genus `gamma`: the right side
/// breaks into `1 - gamma` rational components, one of degree `d + gamma`
/// and `-gamma` of degree one, all unramified.
pub fn degenerate_split(d: i64, g_l: i64, gamma: i64) -> Result<DualGraph, GraphError> {
    if gamma >= 0 || d + gamma < 1 {
        return Err(GraphError::Construction(format!(
            "no degenerate split for d = {d}, γ = {gamma}"
        )));
    }
    let mut right = vec![vec![1; (d + gamma) as usize]];
    right.extend((0..-gamma).map(|_| vec![1]));
    fan(g_l, &right)
}

/// Lower the largest local degree `p` at the rational vertex `id` by one:
/// the vertex splits into a degree-1 vertex on an unramified edge and a
/// degree `m-1` vertex carrying the edge `p-1` and the remaining edges.
pub fn rational_ram_reduce(g: &DualGraph, id: usize) -> Result<DualGraph, GraphError> {
    let v = g
        .vertices
        .iter()
        .find(|v| v.id == id)
        .ok_or_else(|| GraphError::Construction(format!("no vertex {id}")))?;
    if v.genus != 0 {
        return Err(GraphError::Construction(
            "ramification reduction needs a rational vertex".into(),
        ));
    }
    let (big_idx, big) = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.l == id || e.r == id)
        .max_by_key(|(i, e)| (e.local_degree, std::cmp::Reverse(*i)))
        .ok_or_else(|| GraphError::Construction("vertex without edges".into()))?;
    if big.local_degree < 2 {
        return Err(GraphError::Construction("vertex is unramified".into()));
    }
    let side = v.side;
    let neighbour = if big.l == id { big.r } else { big.l };
    let new_id = g.vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1;
    let mut out = g.clone();
    for w in out.vertices.iter_mut() {
        if w.id == id {
            w.degree -= 1;
        }
    }
    out.vertices.push(Vertex {
        id: new_id,
        side,
        genus: 0,
        degree: 1,
    });
    out.edges[big_idx].local_degree -= 1;
    let (l, r) = if side == Side::L {
        (new_id, neighbour)
    } else {
        (neighbour, new_id)
    };
    out.edges.push(Edge {
        l,
        r,
        local_degree: 1,
    });
    Ok(out)
}

/// Partitions of `n` into parts, largest first.
pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn go(n: i64, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Every 2-vertex graph of degree `d` and genus `g` with `g_L >= g_R`,
/// i.e. one representative per `L <-> R` orbit.
pub fn enumerate_two_vertex(d: i64, g: i64) -> Vec<DualGraph> {
    let mut out = Vec::new();
    for p in partitions(d) {
        let total = g - p.len() as i64 + 1;
        for g_r in 0..=total / 2 {
            if total < 0 {
                break;
            }
            if let Ok(gr) = two_vertex(&p, total - g_r, g_r) {
                out.push(gr);
            }
        }
    }
    out
}

/// Every 2-vertex graph of degree `d` and genus `g`, with both orientations.
pub fn enumerate_two_vertex_ordered(d: i64, g: i64) -> Vec<DualGraph> {
    let mut out = Vec::new();
    for p in partitions(d) {
        let total = g - p.len() as i64 + 1;
        for g_r in 0..=total.max(-1) {
            if let Ok(gr) = two_vertex(&p, total - g_r, g_r) {
                out.push(gr);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_validate() {
        for d in 2..=6 {
            for g in 1..=6 {
                let irr = delta_irr(d, g).unwrap();
                assert!(irr.validate(d, g), "{:?}", irr.violations(d, g));
                assert_eq!(irr.ramification_index(), 0);
                assert_eq!(irr.excess(), 0);
                assert_eq!(irr.classify(), DivisorType::Relevant);
            }
        }
        for d in 3..=6 {
            let t = t_graph(d, 5).unwrap();
            assert!(t.validate(d, 5));
            assert_eq!(t.ramification_index(), 2);
            assert_eq!(t.vertices.len() as i64, 1 + 1 + (d - 3));
        }
        for d in 4..=6 {
            for g in 0..=5 {
                let dg = d_graph(d, g).unwrap();
                assert!(dg.validate(d, g));
                assert_eq!(dg.ramification_index(), 2);
                assert_eq!(dg.excess(), 2);
            }
        }
    }

    #[test]
    fn not_bipartite() {
        let mut g = two_vertex(&[1, 1, 1], 1, 1).unwrap();
        g.vertices[1].side = Side::L;
        let v = g.violations(3, 3);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::NotBipartite { .. })));
    }

    #[test]
    fn multiplicity() {
        assert_eq!(boundary_multiplicity(&[2, 1, 1], 2).unwrap(), Q::one());
        assert_eq!(boundary_multiplicity(&[1, 1, 1, 1], 4).unwrap(), Q::int(4));
        assert_eq!(boundary_multiplicity(&[3, 2], 6).unwrap(), Q::one());
        assert!(boundary_multiplicity(&[], 1).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let gs = enumerate_two_vertex(3, 6);
        let unram: Vec<_> = gs.iter().filter(|g| g.ramification_index() == 0).collect();
        assert_eq!(unram.len(), 3);
        let ordered = enumerate_two_vertex_ordered(3, 6);
        assert_eq!(
            ordered
                .iter()
                .filter(|g| g.ramification_index() == 0)
                .count(),
            5
        );
        for g in &gs {
            let (p, gl, gr) = g.as_two_vertex().unwrap();
            assert_eq!(gl + gr, 6 - p.len() as i64 + 1);
        }
        let five = enumerate_two_vertex(5, 10);
        for g in five
            .iter()
            .filter(|g| g.as_two_vertex().unwrap().0 == vec![2, 1, 1, 1])
        {
            let (_, gl, gr) = g.as_two_vertex().unwrap();
            assert_eq!(gl + gr, 10 - 3);
        }
    }

    #[test]
    fn canonical_label_is_relabel_invariant() {
        let g = s4(2, 3);
        let h = g.swap().relabel(|i| 10 + 3 * i);
        assert_eq!(g.label(), h.label());
        let a = s3(1, 2);
        assert!(a.validate(3, 4));
        assert!(s3_ramified(1, 2).validate(3, 3));
        assert!(s4(1, 2).validate(3, 3));
        assert_ne!(a.label(), s3(2, 1).label());
    }

    #[test]
    fn compact_round_trip() {
        let g = s4(1, 4).canonical();
        let js = serde_json::to_string(&g).unwrap();
        let back: DualGraph = serde_json::from_str(&js).unwrap();
        assert_eq!(back.label(), g.label());
        assert!(js.contains("\"L\""));
    }

    #[test]
    fn reductions() {
        let g = two_vertex(&[2, 1], 5, 0).unwrap();
        let r = rational_ram_reduce(&g, 1).unwrap();
        assert!(r.validate(3, 6));
        assert_eq!(r.label(), delta_irr(3, 6).unwrap().label());
        let s = degenerate_split(4, 7, -1).unwrap();
        assert!(s.validate(4, 9));
        assert_eq!(
            degenerate_split(3, 5, -1).unwrap().label(),
            delta_irr(3, 6).unwrap().label()
        );
        assert_eq!(
            degenerate_split(5, 12, -4).unwrap().classify(),
            DivisorType::NotDivisor
        );
    }
}
