//! Admissible compactifications as partitioned resolution graphs.
//!
//! A [`SurfacePair`] is a surface with reduced boundary, stored through its
//! minimal resolution: a dual graph whose vertices are split into strict
//! boundary curves and Hirzebruch-Jung singularity chains.  [`collapse`]
//! produces such a pair from a bigger resolution by contracting everything
//! outside a chosen keep-set.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::dualgraph::{CurveId, DualGraph, GraphError};
use crate::hj::{self, HJChain, HJType};
use crate::linalg;
use crate::rational::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("keep-set does not define an admissible surface: {0}")]
    NonContractibleResidue(String),
    #[error("pair has more than one singularity")]
    MultipleSingularities,
    #[error("pair has a reducible boundary")]
    ReducibleBoundary,
    #[error("blow-up history inconsistent with pair: {0}")]
    InconsistentHistory(String),
}

/// One singularity chain: `curves[0]` meets `attached_to`, each curve meets
/// the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub curves: Vec<CurveId>,
    pub attached_to: CurveId,
}

impl Chain {
    pub fn weights(&self, g: &DualGraph) -> Vec<i64> {
        self.curves.iter().map(|c| -g.self_int(c).unwrap()).collect()
    }

    pub fn hj_chain(&self, g: &DualGraph) -> Result<HJChain, hj::HjError> {
        HJChain::new(self.weights(g))
    }

    pub fn hj_type(&self, g: &DualGraph) -> Result<HJType, hj::HjError> {
        Ok(hj::chain_to_type(&self.hj_chain(g)?))
    }
}

/// An admissible compactification, stored via its minimal resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePair {
    pub resolution: DualGraph,
    pub strict_boundary: BTreeSet<CurveId>,
    pub chains: Vec<Chain>,
    /// Picard rank of the underlying smooth model before any script.
    pub base_rank: i64,
    /// Vertices contracted to smooth points when this pair was collapsed
    /// out of a larger resolution; zero for hand-built pairs.
    pub removed_smooth: usize,
}

impl SurfacePair {
    /// Builds a pair directly from its minimal resolution data.
    pub fn from_parts(
        resolution: DualGraph,
        strict_boundary: BTreeSet<CurveId>,
        chains: Vec<Chain>,
        base_rank: i64,
    ) -> Self {
        SurfacePair { resolution, strict_boundary, chains, base_rank, removed_smooth: 0 }
    }

    pub fn chains_on(&self, id: &CurveId) -> Vec<&Chain> {
        self.chains.iter().filter(|c| &c.attached_to == id).collect()
    }

    /// Neighbors of a boundary curve inside the strict boundary.
    pub fn boundary_neighbor_count(&self, id: &CurveId) -> usize {
        self.resolution
            .neighbors(id)
            .iter()
            .filter(|n| self.strict_boundary.contains(n))
            .count()
    }

    pub fn chain_curve_count(&self) -> usize {
        self.chains.iter().map(|c| c.curves.len()).sum()
    }

    pub fn singularity_types(&self) -> Vec<HJType> {
        self.chains
            .iter()
            .map(|c| c.hj_type(&self.resolution).expect("valid chain"))
            .collect()
    }

    /// For irreducible boundaries: (boundary self-intersection, sorted chain
    /// weight lists).  Two such pairs are isomorphic iff signatures agree.
    pub fn irreducible_signature(&self) -> Option<(i64, Vec<Vec<i64>>)> {
        if self.strict_boundary.len() != 1 {
            return None;
        }
        let b = self.strict_boundary.iter().next().unwrap();
        let mut weights: Vec<Vec<i64>> =
            self.chains.iter().map(|c| c.weights(&self.resolution)).collect();
        weights.sort();
        Some((self.resolution.self_int(b).unwrap(), weights))
    }
}

/// Contracts every vertex outside `keep`, in descending birth order among
/// eligible `-1` curves, and packages the leftover `<= -2` chains as
/// singularities of the resulting pair.
pub fn collapse(
    graph: &DualGraph,
    keep: &BTreeSet<CurveId>,
    base_rank: i64,
) -> Result<SurfacePair, PairError> {
    collapse_with_order(graph, keep, base_rank, &mut |eligible: &[CurveId], g: &DualGraph| {
        // descending birth; strict boundary curves count as birth 0
        (0..eligible.len())
            .max_by_key(|&i| (g.birth(&eligible[i]).unwrap_or(0), std::cmp::Reverse(eligible[i].clone())))
            .unwrap()
    })
}

/// Same as [`collapse`] but with an explicit choice function over the
/// currently eligible contractions; used to test order independence.
pub fn collapse_with_order(
    graph: &DualGraph,
    keep: &BTreeSet<CurveId>,
    base_rank: i64,
    pick: &mut dyn FnMut(&[CurveId], &DualGraph) -> usize,
) -> Result<SurfacePair, PairError> {
    for k in keep {
        graph.vertex(k)?;
    }
    let mut g = graph.clone();
    loop {
        let eligible: Vec<CurveId> = g
            .vertices()
            .filter(|v| {
                !keep.contains(&v.id) && v.self_int == -1 && g.degree(&v.id) <= 2
            })
            .map(|v| v.id.clone())
            .collect();
        if eligible.is_empty() {
            break;
        }
        let i = pick(&eligible, &g);
        g = g.contract(&eligible[i])?;
    }

    let removed: BTreeSet<CurveId> = g
        .vertices()
        .map(|v| v.id.clone())
        .filter(|id| !keep.contains(id))
        .collect();
    for id in &removed {
        if g.self_int(id)? >= -1 {
            return Err(PairError::NonContractibleResidue(format!(
                "residual curve `{id}` has self-intersection {}",
                g.self_int(id)?
            )));
        }
    }

    let mut chains = Vec::new();
    let mut seen: BTreeSet<CurveId> = BTreeSet::new();
    for id in &removed {
        if seen.contains(id) {
            continue;
        }
        // walk the connected component of removed curves containing id
        let mut component = vec![id.clone()];
        let mut frontier = vec![id.clone()];
        while let Some(cur) = frontier.pop() {
            for n in g.neighbors(&cur) {
                if removed.contains(&n) && !component.contains(&n) {
                    component.push(n.clone());
                    frontier.push(n);
                }
            }
        }
        seen.extend(component.iter().cloned());
        // the component must be a path with exactly one kept neighbor,
        // attached at an end
        let mut kept_links: Vec<(CurveId, CurveId)> = Vec::new();
        for c in &component {
            if g.neighbors(c).iter().filter(|n| removed.contains(n)).count() > 2 {
                return Err(PairError::NonContractibleResidue(format!(
                    "residual curve `{c}` branches"
                )));
            }
            for n in g.neighbors(c) {
                if keep.contains(&n) {
                    kept_links.push((c.clone(), n));
                }
            }
        }
        let (first, attached_to) = match kept_links.as_slice() {
            [one] => one.clone(),
            [] => {
                return Err(PairError::NonContractibleResidue(format!(
                    "residual chain at `{id}` meets no kept curve"
                )))
            }
            _ => {
                return Err(PairError::NonContractibleResidue(format!(
                    "residual chain at `{id}` meets the kept boundary more than once"
                )))
            }
        };
        let mut ordered = vec![first.clone()];
        loop {
            let last = ordered.last().unwrap();
            let next = g
                .neighbors(last)
                .into_iter()
                .find(|n| removed.contains(n) && !ordered.contains(n));
            match next {
                Some(n) => ordered.push(n),
                None => break,
            }
        }
        if ordered.len() != component.len() {
            return Err(PairError::NonContractibleResidue(format!(
                "residual component at `{id}` is not an end-attached chain"
            )));
        }
        chains.push(Chain { curves: ordered, attached_to });
    }
    chains.sort_by(|a, b| (&a.attached_to, &a.curves).cmp(&(&b.attached_to, &b.curves)));

    let removed_smooth = graph.vertex_count() - g.vertex_count();
    Ok(SurfacePair {
        resolution: g,
        strict_boundary: keep.clone(),
        chains,
        base_rank,
        removed_smooth,
    })
}

/// Self-intersection of the boundary curve on the singular surface:
/// `C.pi*C` where `pi*C = Cbar + sum beta_j E_j` is the unique lift
/// orthogonal to every chain curve.
pub fn pair_self_intersection(p: &SurfacePair, id: &CurveId) -> Result<Rat, PairError> {
    if !p.strict_boundary.contains(id) {
        return Err(PairError::Graph(GraphError::UnknownCurve(id.clone())));
    }
    let mut total = rat(p.resolution.self_int(id)?);
    for chain in p.chains_on(id) {
        let s = chain.curves.len();
        let mut m = vec![vec![Rat::zero(); s]; s];
        let mut rhs = vec![Rat::zero(); s];
        for k in 0..s {
            m[k][k] = rat(p.resolution.self_int(&chain.curves[k])?);
            if k > 0 {
                m[k][k - 1] = Rat::one();
            }
            if k + 1 < s {
                m[k][k + 1] = Rat::one();
            }
        }
        rhs[0] = -Rat::one();
        let beta = linalg::solve(&m, &rhs)
            .map_err(|_| PairError::NonContractibleResidue("degenerate chain".into()))?;
        total += beta[0].clone();
    }
    Ok(total)
}

/// `(K+B).C = -2 + n + sum over chains on C of (1 - a_1)`.
pub fn kplusb_degree(p: &SurfacePair, id: &CurveId) -> Result<Rat, PairError> {
    if !p.strict_boundary.contains(id) {
        return Err(PairError::Graph(GraphError::UnknownCurve(id.clone())));
    }
    let n = p.boundary_neighbor_count(id) as i64;
    let mut total = rat(-2 + n);
    for chain in p.chains_on(id) {
        let hj_chain = chain
            .hj_chain(&p.resolution)
            .map_err(|_| PairError::NonContractibleResidue("invalid chain weights".into()))?;
        let a = hj::chain_log_discrepancies(&hj_chain)
            .map_err(|_| PairError::NonContractibleResidue("degenerate chain".into()))?;
        total += Rat::one() - &a[0];
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalVerdict {
    pub kplusb_value: Rat,
    pub pair_self_int: Rat,
    pub neighbor_count: usize,
    pub singularity_count: usize,
    pub is_contractible: bool,
}

/// The sufficient contractibility criterion used by the factorization:
/// `(K+B).C < 0`, `C^2 < 0`, at most one boundary neighbor, at most one
/// singularity on C.
pub fn is_extremal_contractible(p: &SurfacePair, id: &CurveId) -> Result<ExtremalVerdict, PairError> {
    let kplusb_value = kplusb_degree(p, id)?;
    let pair_self_int = pair_self_intersection(p, id)?;
    let neighbor_count = p.boundary_neighbor_count(id);
    let singularity_count = p.chains_on(id).len();
    let is_contractible = kplusb_value.is_negative()
        && pair_self_int.is_negative()
        && neighbor_count <= 1
        && singularity_count <= 1;
    Ok(ExtremalVerdict {
        kplusb_value,
        pair_self_int,
        neighbor_count,
        singularity_count,
        is_contractible,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every pair invariant and enumerates violations.
pub fn admissibility_check(p: &SurfacePair) -> AdmissibilityReport {
    let mut violations = Vec::new();
    let warnings = Vec::new();

    let tree = p.resolution.validate_snc_tree();
    for v in tree.violations {
        violations.push(format!("resolution: {v}"));
    }

    let mut chain_curves: BTreeSet<&CurveId> = BTreeSet::new();
    for chain in &p.chains {
        for c in &chain.curves {
            if !chain_curves.insert(c) {
                violations.push(format!("curve `{c}` appears in two chains"));
            }
            if p.strict_boundary.contains(c) {
                violations.push(format!("curve `{c}` is both boundary and chain curve"));
            }
            match p.resolution.self_int(c) {
                Ok(s) if s <= -2 => {}
                Ok(s) => violations.push(format!(
                    "chain curve `{c}` has self-intersection {s}, expected <= -2"
                )),
                Err(e) => violations.push(e.to_string()),
            }
        }
        if !p.strict_boundary.contains(&chain.attached_to) {
            violations.push(format!(
                "chain attached to `{}` which is not a boundary curve",
                chain.attached_to
            ));
        }
        if !p.resolution.has_edge(&chain.curves[0], &chain.attached_to) {
            violations.push(format!(
                "chain first curve `{}` does not meet `{}`",
                chain.curves[0], chain.attached_to
            ));
        }
        for w in chain.curves.windows(2) {
            if !p.resolution.has_edge(&w[0], &w[1]) {
                violations.push(format!("chain curves `{}` and `{}` not adjacent", w[0], w[1]));
            }
        }
        // only the first curve may meet the strict boundary
        for (i, c) in chain.curves.iter().enumerate() {
            let boundary_meets = p
                .resolution
                .neighbors(c)
                .into_iter()
                .filter(|n| p.strict_boundary.contains(n))
                .count();
            let expected = usize::from(i == 0);
            if boundary_meets != expected {
                violations.push(format!(
                    "chain curve `{c}` meets the strict boundary {boundary_meets} times"
                ));
            }
        }
        match chain.hj_chain(&p.resolution) {
            Ok(hc) => match hj::chain_log_discrepancies(&hc) {
                Ok(a) => {
                    if a.iter().any(|x| !x.is_positive() || x >= &Rat::one()) {
                        violations.push(format!(
                            "chain at `{}` has a log discrepancy outside (0,1)",
                            chain.attached_to
                        ));
                    }
                }
                Err(e) => violations.push(e.to_string()),
            },
            Err(_) => {} // weight violation already reported above
        }
    }

    for v in p.resolution.vertices() {
        if !p.strict_boundary.contains(&v.id) && !chain_curves.contains(&v.id) {
            violations.push(format!("curve `{}` is neither boundary nor chain curve", v.id));
        }
    }
    for b in &p.strict_boundary {
        if !p.resolution.contains(b) {
            violations.push(format!("boundary curve `{b}` missing from resolution"));
        }
    }

    if p.strict_boundary.len() == 1 && p.chains.len() > 2 {
        violations.push(format!(
            "irreducible boundary carries {} singularities, at most 2 allowed",
            p.chains.len()
        ));
    }

    AdmissibilityReport { violations, warnings }
}

/// Index of a pair with irreducible boundary: 1 when smooth, otherwise the
/// first weight of its unique chain.
pub fn pair_index(p: &SurfacePair) -> Result<i64, PairError> {
    if p.strict_boundary.len() != 1 {
        return Err(PairError::ReducibleBoundary);
    }
    match p.chains.as_slice() {
        [] => Ok(1),
        [chain] => Ok(-p.resolution.self_int(&chain.curves[0])?),
        _ => Err(PairError::MultipleSingularities),
    }
}

/// Picard rank, given the number of blow-ups performed over the base model:
/// `base_rank + blowup_count - contracted-to-smooth-points - chain curves`.
pub fn picard_rank(p: &SurfacePair, blowup_count: usize) -> Result<i64, PairError> {
    let rank = p.base_rank + blowup_count as i64
        - p.removed_smooth as i64
        - p.chain_curve_count() as i64;
    if rank < p.strict_boundary.len() as i64 {
        return Err(PairError::InconsistentHistory(format!(
            "rank {rank} below the number of boundary curves"
        )));
    }
    Ok(rank)
}

/// Intersection matrix of a vertex subset, in the given order.
pub fn intersection_matrix(g: &DualGraph, ids: &[CurveId]) -> Result<Vec<Vec<Rat>>, GraphError> {
    let index: BTreeMap<&CurveId, usize> = ids.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = vec![vec![Rat::zero(); ids.len()]; ids.len()];
    for (i, c) in ids.iter().enumerate() {
        m[i][i] = rat(g.self_int(c)?);
        for n in g.neighbors(c) {
            if let Some(&j) = index.get(&n) {
                m[i][j] = Rat::one();
            }
        }
    }
    Ok(m)
}
