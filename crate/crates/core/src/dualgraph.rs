//! Weighted trees of rational curves with blow-up and contraction rewriting.
//!
//! A [`DualGraph`] records the boundary curves of a surface: one vertex per
//! irreducible curve, weighted by self-intersection, one edge per transversal
//! intersection point.  All values are immutable; rewriting operations return
//! new graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Symbolic identifier of a curve vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveId(pub String);

impl CurveId {
    pub fn new(s: impl Into<String>) -> Self {
        CurveId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CurveId {
    fn from(s: &str) -> Self {
        CurveId(s.to_owned())
    }
}

/// How a curve entered the graph: present from the start, or created by the
/// k-th blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    StrictBoundary,
    Exceptional { birth: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVertex {
    pub id: CurveId,
    pub self_int: i64,
    pub kind: CurveKind,
}

/// A blow-up center: a free point of a curve, or the intersection point of
/// two adjacent curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Center {
    Interior { curve: CurveId, point: String },
    Node { a: CurveId, b: CurveId },
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Interior { curve, point } => write!(f, "interior({curve}, {point})"),
            Center::Node { a, b } => write!(f, "node({a}, {b})"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(CurveId),
    #[error("curves `{0}` and `{1}` do not intersect")]
    MissingNode(CurveId, CurveId),
    #[error("point label `{1}` already used on curve `{0}`")]
    ReusedPointLabel(CurveId, String),
    #[error("curve `{0}` has self-intersection != -1")]
    NotMinusOne(CurveId),
    #[error("curve `{0}` has more than two neighbors")]
    TooManyNeighbors(CurveId),
    #[error("graph is not a tree")]
    NotATree,
    #[error("duplicate curve id `{0}`")]
    DuplicateCurve(CurveId),
}

fn edge_key(a: &CurveId, b: &CurveId) -> (CurveId, CurveId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Immutable weighted simple graph of curves.
#[derive(Debug, Clone, Default)]
pub struct DualGraph {
    vertices: BTreeMap<CurveId, CurveVertex>,
    edges: BTreeSet<(CurveId, CurveId)>,
    // interior point labels consumed by blow-ups, per curve
    used_labels: BTreeMap<CurveId, BTreeSet<String>>,
}

// label bookkeeping is replay state, not geometry: equality compares the
// weighted graph only
impl PartialEq for DualGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DualGraph {}

impl DualGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_vertex(
        &mut self,
        id: CurveId,
        self_int: i64,
        kind: CurveKind,
    ) -> Result<(), GraphError> {
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateCurve(id));
        }
        self.vertices.insert(id.clone(), CurveVertex { id, self_int, kind });
        Ok(())
    }

    pub fn add_edge(&mut self, a: &CurveId, b: &CurveId) -> Result<(), GraphError> {
        for v in [a, b] {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownCurve(v.clone()));
            }
        }
        assert_ne!(a, b, "no loops in an SNC graph");
        self.edges.insert(edge_key(a, b));
        Ok(())
    }

    pub fn contains(&self, id: &CurveId) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn vertex(&self, id: &CurveId) -> Result<&CurveVertex, GraphError> {
        self.vertices.get(id).ok_or_else(|| GraphError::UnknownCurve(id.clone()))
    }

    pub fn self_int(&self, id: &CurveId) -> Result<i64, GraphError> {
        Ok(self.vertex(id)?.self_int)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &CurveVertex> {
        self.vertices.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(CurveId, CurveId)> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: &CurveId, b: &CurveId) -> bool {
        self.edges.contains(&edge_key(a, b))
    }

    pub fn neighbors(&self, id: &CurveId) -> Vec<CurveId> {
        self.edges
            .iter()
            .filter_map(|(x, y)| {
                if x == id {
                    Some(y.clone())
                } else if y == id {
                    Some(x.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, id: &CurveId) -> usize {
        self.neighbors(id).len()
    }

    pub fn max_birth(&self) -> u32 {
        self.vertices
            .values()
            .filter_map(|v| match v.kind {
                CurveKind::Exceptional { birth } => Some(birth),
                CurveKind::StrictBoundary => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn birth(&self, id: &CurveId) -> Option<u32> {
        match self.vertex(id).ok()?.kind {
            CurveKind::Exceptional { birth } => Some(birth),
            CurveKind::StrictBoundary => None,
        }
    }

    /// Blows up a center, producing the new graph and the id of the
    /// exceptional curve.  The new curve has self-intersection −1 and the
    /// next birth index.
    pub fn blow_up(&self, center: &Center, new_id: CurveId) -> Result<(DualGraph, CurveId), GraphError> {
        if self.vertices.contains_key(&new_id) {
            return Err(GraphError::DuplicateCurve(new_id));
        }
        let mut g = self.clone();
        let birth = self.max_birth() + 1;
        match center {
            Center::Interior { curve, point } => {
                if !g.vertices.contains_key(curve) {
                    return Err(GraphError::UnknownCurve(curve.clone()));
                }
                let used = g.used_labels.entry(curve.clone()).or_default();
                if !used.insert(point.clone()) {
                    return Err(GraphError::ReusedPointLabel(curve.clone(), point.clone()));
                }
                g.vertices.get_mut(curve).unwrap().self_int -= 1;
                g.vertices.insert(
                    new_id.clone(),
                    CurveVertex { id: new_id.clone(), self_int: -1, kind: CurveKind::Exceptional { birth } },
                );
                g.edges.insert(edge_key(curve, &new_id));
            }
            Center::Node { a, b } => {
                for v in [a, b] {
                    if !g.vertices.contains_key(v) {
                        return Err(GraphError::UnknownCurve(v.clone()));
                    }
                }
                if !g.edges.remove(&edge_key(a, b)) {
                    return Err(GraphError::MissingNode(a.clone(), b.clone()));
                }
                g.vertices.get_mut(a).unwrap().self_int -= 1;
                g.vertices.get_mut(b).unwrap().self_int -= 1;
                g.vertices.insert(
                    new_id.clone(),
                    CurveVertex { id: new_id.clone(), self_int: -1, kind: CurveKind::Exceptional { birth } },
                );
                g.edges.insert(edge_key(a, &new_id));
                g.edges.insert(edge_key(b, &new_id));
            }
        }
        Ok((g, new_id))
    }

    /// Castelnuovo contraction of a −1 curve with at most two neighbors.
    pub fn contract(&self, v: &CurveId) -> Result<DualGraph, GraphError> {
        let vert = self.vertex(v)?;
        if vert.self_int != -1 {
            return Err(GraphError::NotMinusOne(v.clone()));
        }
        let nbs = self.neighbors(v);
        if nbs.len() > 2 {
            return Err(GraphError::TooManyNeighbors(v.clone()));
        }
        let mut g = self.clone();
        g.vertices.remove(v);
        g.used_labels.remove(v);
        g.edges.retain(|(a, b)| a != v && b != v);
        for n in &nbs {
            g.vertices.get_mut(n).unwrap().self_int += 1;
        }
        if let [a, b] = nbs.as_slice() {
            g.edges.insert(edge_key(a, b));
        }
        Ok(g)
    }

    /// The unique simple path between two vertices of a tree.
    pub fn tree_path(&self, u: &CurveId, v: &CurveId) -> Result<Vec<CurveId>, GraphError> {
        self.vertex(u)?;
        self.vertex(v)?;
        if !self.validate_snc_tree().is_valid() {
            return Err(GraphError::NotATree);
        }
        let mut prev: BTreeMap<CurveId, CurveId> = BTreeMap::new();
        let mut queue = VecDeque::from([u.clone()]);
        let mut seen = BTreeSet::from([u.clone()]);
        while let Some(cur) = queue.pop_front() {
            if &cur == v {
                break;
            }
            for n in self.neighbors(&cur) {
                if seen.insert(n.clone()) {
                    prev.insert(n.clone(), cur.clone());
                    queue.push_back(n);
                }
            }
        }
        let mut path = vec![v.clone()];
        while path.last().unwrap() != u {
            let p = prev
                .get(path.last().unwrap())
                .ok_or(GraphError::NotATree)?
                .clone();
            path.push(p);
        }
        path.reverse();
        Ok(path)
    }

    /// Checks connectivity and acyclicity; returns the list of violations.
    pub fn validate_snc_tree(&self) -> TreeReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push("graph is empty".to_owned());
            return TreeReport { violations };
        }
        let start = self.vertices.keys().next().unwrap().clone();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for n in self.neighbors(&cur) {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            violations.push(format!(
                "graph is disconnected ({} of {} vertices reachable)",
                seen.len(),
                self.vertices.len()
            ));
        }
        if self.edges.len() + 1 != seen.len() && seen.len() == self.vertices.len() {
            violations.push(format!(
                "graph has a cycle ({} edges on {} vertices)",
                self.edges.len(),
                self.vertices.len()
            ));
        } else if seen.len() != self.vertices.len() && self.edges.len() + 1 >= self.vertices.len() {
            violations.push("graph has a cycle".to_owned());
        }
        TreeReport { violations }
    }

    /// Sum of all self-intersections; used by rewrite-invariant checks.
    pub fn self_int_sum(&self) -> i64 {
        self.vertices.values().map(|v| v.self_int).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub violations: Vec<String>,
}

impl TreeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}
