//! Factorization of a marked resolution into elementary links, plus the
//! link-sequence analysis: index sequences, triangular segments, maximal
//! extraction, degree sequences, and concatenation in general position.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use thiserror::Error;

use crate::discrepancy::{
    self, CoefficientLedger, DiscrepancyError, ScriptStep,
};
use crate::dualgraph::{Center, CurveId, DualGraph, GraphError};
use crate::linalg;
use crate::pair::{
    self, collapse, ExtremalVerdict, PairError, SurfacePair,
};
use crate::rational::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Discrepancy(#[from] DiscrepancyError),
    #[error("resolution is invalid: {}", .0.join("; "))]
    InvalidResolution(Vec<String>),
    #[error("link contraction fails the extremality criterion: {0}")]
    ExtremalityFailure(String),
    #[error("pairs do not match for concatenation: {0}")]
    PairMismatch(String),
    #[error("resolutions are in special position: {0}")]
    SpecialPosition(String),
}

/// A resolution of a birational map: the origin pair, the replayed graph,
/// and the two marked `(-1)`-curves `e0` (strict transform of the origin
/// boundary) and `en` (strict transform of the target boundary).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedResolution {
    pub graph: DualGraph,
    pub e0: CurveId,
    pub en: CurveId,
    pub ledger: CoefficientLedger,
    pub origin: SurfacePair,
    /// The replayed script, with every created curve's name made explicit.
    pub script: Vec<ScriptStep>,
    /// Symbolic label of the point on the target boundary where the curves
    /// contracted by the map land.
    pub landing_label: Option<String>,
}

impl MarkedResolution {
    /// Replays a script on the origin pair.  The origin boundary must be
    /// irreducible; the last created curve becomes `en`.
    pub fn resolve(
        origin: SurfacePair,
        script: Vec<ScriptStep>,
        landing_label: Option<String>,
    ) -> Result<Self, FactorError> {
        if origin.strict_boundary.len() != 1 {
            return Err(PairError::ReducibleBoundary.into());
        }
        let e0 = origin.strict_boundary.iter().next().unwrap().clone();
        let run = discrepancy::run_script(&origin, &script)?;
        let en = run.created.last().unwrap().clone();
        let script = script
            .into_iter()
            .zip(&run.created)
            .map(|(s, id)| ScriptStep { name: Some(id.as_str().to_owned()), ..s })
            .collect();
        Ok(MarkedResolution {
            graph: run.graph,
            e0,
            en,
            ledger: run.ledger,
            origin,
            script,
            landing_label,
        })
    }

    /// Number of blow-ups over the origin's minimal resolution.
    pub fn blowup_count(&self) -> usize {
        self.ledger.rows.len()
    }

    /// Symbolic label of the first blow-up center, used by the
    /// general-position check.
    pub fn first_center_label(&self) -> Option<String> {
        self.script.first().map(|s| match &s.center {
            Center::Interior { point, .. } => point.clone(),
            Center::Node { a, b } => format!("node({a},{b})"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ResolutionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks tree-ness, the two-(-1)-curves condition, the nonnegative
/// self-intersection of `e0` on the origin, and that `en` was created last.
pub fn validate_resolution(r: &MarkedResolution) -> ResolutionReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();

    let tree = r.graph.validate_snc_tree();
    for v in tree.violations {
        violations.push(format!("graph: {v}"));
    }

    let minus_ones: Vec<CurveId> = r
        .graph
        .vertices()
        .filter(|v| v.self_int == -1)
        .map(|v| v.id.clone())
        .collect();
    let expected: BTreeSet<CurveId> = BTreeSet::from([r.e0.clone(), r.en.clone()]);
    let actual: BTreeSet<CurveId> = minus_ones.iter().cloned().collect();
    if r.e0 == r.en {
        violations.push("e0 and en coincide".to_owned());
    }
    if actual != expected || minus_ones.len() != 2 {
        violations.push(format!(
            "(-1)-curves are {{{}}}, expected exactly {{{}, {}}}",
            minus_ones.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "),
            r.e0,
            r.en
        ));
    }

    match r.origin.resolution.self_int(&r.e0) {
        Ok(s) if s > 0 => {}
        Ok(0) => warnings.push("origin boundary has self-intersection 0".to_owned()),
        Ok(s) => violations.push(format!(
            "origin boundary has self-intersection {s}, expected >= 0"
        )),
        Err(e) => violations.push(e.to_string()),
    }

    match r.graph.birth(&r.en) {
        Some(b) if b == r.graph.max_birth() => {}
        Some(b) => violations.push(format!(
            "en has birth index {b}, expected the last ({})",
            r.graph.max_birth()
        )),
        None => violations.push("en is not an exceptional curve".to_owned()),
    }

    ResolutionReport { violations, warnings }
}

/// One elementary link `left <- z -> right`.  The morphism to `left`
/// contracts `contracted_left`; the one to `right` contracts
/// `contracted_right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub z: SurfacePair,
    pub left: SurfacePair,
    pub right: SurfacePair,
    pub contracted_left: CurveId,
    pub contracted_right: CurveId,
    pub verdict_left: ExtremalVerdict,
    pub verdict_right: ExtremalVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSequence {
    /// Pairs `S_0..S_n`.
    pub pairs: Vec<SurfacePair>,
    /// Links `Z_1..Z_n`.
    pub links: Vec<Link>,
    /// The sub-chain `E_0..E_n` from `e0` to `en`.
    pub chain_ids: Vec<CurveId>,
}

impl LinkSequence {
    pub fn link_count(&self) -> usize {
        self.links.len()
    }
}

/// Decomposes the map into elementary links along the unique path from
/// `e0` to `en`, collapsing everything else at each stage.
pub fn factorize(r: &MarkedResolution) -> Result<LinkSequence, FactorError> {
    let report = validate_resolution(r);
    if !report.is_valid() {
        return Err(FactorError::InvalidResolution(report.violations));
    }
    let path = r.graph.tree_path(&r.e0, &r.en)?;
    let base = r.origin.base_rank;

    let mut pairs = Vec::new();
    for id in &path {
        pairs.push(collapse(&r.graph, &BTreeSet::from([id.clone()]), base)?);
    }
    if pairs[0].irreducible_signature() != r.origin.irreducible_signature() {
        return Err(FactorError::InvalidResolution(vec![
            "collapsing onto e0 does not reproduce the origin pair".to_owned(),
        ]));
    }

    let mut links = Vec::new();
    for i in 1..path.len() {
        let keep = BTreeSet::from([path[i - 1].clone(), path[i].clone()]);
        let z = collapse(&r.graph, &keep, base)?;
        for id in [&path[i - 1], &path[i]] {
            if z.chains_on(id).len() > 1 {
                return Err(FactorError::ExtremalityFailure(format!(
                    "component `{id}` of Z_{i} carries more than one singularity"
                )));
            }
        }
        // contracting E_i yields S_{i-1}; contracting E_{i-1} yields S_i
        let verdict_left = pair::is_extremal_contractible(&z, &path[i])?;
        let verdict_right = pair::is_extremal_contractible(&z, &path[i - 1])?;
        if !verdict_left.is_contractible || !verdict_right.is_contractible {
            return Err(FactorError::ExtremalityFailure(format!(
                "a contraction of Z_{i} is not extremal"
            )));
        }
        links.push(Link {
            z,
            left: pairs[i - 1].clone(),
            right: pairs[i].clone(),
            contracted_left: path[i].clone(),
            contracted_right: path[i - 1].clone(),
            verdict_left,
            verdict_right,
        });
    }

    Ok(LinkSequence { pairs, links, chain_ids: path })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    /// Whether the unit-step and descent clauses apply (smooth endpoints
    /// with positive boundary self-intersection on the origin).
    pub applicable: bool,
    pub unit_steps: bool,
    pub monotone_descent: bool,
    pub notes: Vec<String>,
}

/// Index of each pair, with the unit-step and monotone-descent checks.
pub fn index_sequence(seq: &LinkSequence) -> Result<(Vec<i64>, IndexReport), PairError> {
    let mut indices = Vec::new();
    for p in &seq.pairs {
        indices.push(pair::pair_index(p)?);
    }
    let mut notes = Vec::new();
    let first = &seq.pairs[0];
    let last = seq.pairs.last().unwrap();
    let boundary_sq = first
        .strict_boundary
        .iter()
        .next()
        .map(|b| first.resolution.self_int(b).unwrap())
        .unwrap_or(0);
    let applicable =
        first.chains.is_empty() && last.chains.is_empty() && boundary_sq > 0;
    if !applicable {
        notes.push("endpoints not smooth with positive boundary; step checks skipped".to_owned());
    }
    let unit_steps = !applicable
        || indices.windows(2).all(|w| (w[0] - w[1]).abs() == 1);
    let mut monotone_descent = true;
    if applicable {
        for i in 1..indices.len().saturating_sub(1) {
            if indices[i] >= 2 && indices[i - 1] == indices[i] + 1 && indices[i + 1] != indices[i] - 1 {
                monotone_descent = false;
                notes.push(format!("descent broken at position {i}"));
            }
        }
    }
    Ok((indices, IndexReport { applicable, unit_steps, monotone_descent, notes }))
}

/// A maximal run of the index sequence between smooth surfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Positions into the pair list, inclusive.
    pub start: usize,
    pub end: usize,
    /// Degree of the segment: its maximum index.
    pub degree: i64,
    pub link_count: usize,
    /// Whether link_count = 2 * degree - 2.
    pub length_matches: bool,
}

/// Splits the index sequence at interior index-1 surfaces.
pub fn triangular_segments(indices: &[i64]) -> Vec<Segment> {
    if indices.len() < 2 {
        return Vec::new();
    }
    let mut cuts = vec![0usize];
    for (i, &ind) in indices.iter().enumerate().skip(1) {
        if i + 1 < indices.len() && ind == 1 {
            cuts.push(i);
        }
    }
    cuts.push(indices.len() - 1);
    cuts.windows(2)
        .map(|w| {
            let (s, e) = (w[0], w[1]);
            let degree = *indices[s..=e].iter().max().unwrap();
            let link_count = e - s;
            Segment {
                start: s,
                end: e,
                degree,
                link_count,
                length_matches: link_count == (2 * degree - 2) as usize,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionReport {
    pub e1: CurveId,
    pub lambda_star: Rat,
    pub argmax: Vec<CurveId>,
    pub attained: bool,
    /// True when every multiplicity is zero, making the check vacuous.
    pub vacuous: bool,
}

/// Checks that the first extracted divisor `E_1` attains the maximal
/// multiplicity among divisors contracted over `S_0`.
pub fn maximal_extraction_check(
    seq: &LinkSequence,
    ledger: &CoefficientLedger,
) -> Result<ExtractionReport, FactorError> {
    let e1 = seq.chain_ids[1].clone();
    let (lambda_star, argmax) = discrepancy::maximal_multiplicity(ledger)?;
    let attained = argmax.contains(&e1);
    let vacuous = lambda_star.is_zero();
    Ok(ExtractionReport { e1, lambda_star, argmax, attained, vacuous })
}

/// Restriction of the resolution to the tail map `S_i -> target`:
/// contracts every boundary curve outside `E_i..E_n` that becomes
/// Castelnuovo-contractible.  Factorizing the result yields the tail of the
/// original link sequence.  The returned resolution carries no ledger or
/// script (its origin is an intermediate pair, not a scripted one).
pub fn tail_resolution(r: &MarkedResolution, i: usize) -> Result<MarkedResolution, FactorError> {
    let path = r.graph.tree_path(&r.e0, &r.en)?;
    assert!(i < path.len());
    let keep: BTreeSet<CurveId> = path[i..].iter().cloned().collect();
    let mut g = r.graph.clone();
    loop {
        let eligible: Vec<CurveId> = g
            .vertices()
            .filter(|v| !keep.contains(&v.id) && v.self_int == -1 && g.degree(&v.id) <= 2)
            .map(|v| v.id.clone())
            .collect();
        match eligible.iter().max_by_key(|c| g.birth(c).unwrap_or(0)) {
            Some(c) => g = g.contract(c)?,
            None => break,
        }
    }
    let origin = collapse(&r.graph, &BTreeSet::from([path[i].clone()]), r.origin.base_rank)?;
    Ok(MarkedResolution {
        graph: g,
        e0: path[i].clone(),
        en: r.en.clone(),
        ledger: CoefficientLedger::default(),
        origin,
        script: Vec::new(),
        landing_label: r.landing_label.clone(),
    })
}

/// Glues two resolutions along the shared pair (target of `r1`, origin of
/// `r2`) under the general-position assumption: the landing point of `r1`
/// differs from every base point `r2` places on the shared boundary.
pub fn concat_general_position(
    r1: &MarkedResolution,
    r2: &MarkedResolution,
) -> Result<MarkedResolution, FactorError> {
    if r2.script.is_empty() {
        check_pair_match(r1, &r2.origin)?;
        return Ok(r1.clone());
    }
    if r1.script.is_empty() {
        check_pair_match(r2, &r1.origin)?;
        return Ok(r2.clone());
    }

    let target = collapse(&r1.graph, &BTreeSet::from([r1.en.clone()]), r1.origin.base_rank)?;
    let sig1 = target.irreducible_signature();
    let sig2 = r2.origin.irreducible_signature();
    if sig1 != sig2 || sig1.is_none() {
        return Err(FactorError::PairMismatch(format!(
            "target of the first map {sig1:?} differs from origin of the second {sig2:?}"
        )));
    }
    let landing = r1.landing_label.clone().ok_or_else(|| {
        FactorError::PairMismatch("first map carries no landing label".to_owned())
    })?;

    // translation of the second map's origin curves into the first graph
    let b2 = r2.origin.strict_boundary.iter().next().unwrap().clone();
    let mut translate: BTreeMap<CurveId, CurveId> = BTreeMap::from([(b2.clone(), r1.en.clone())]);
    let mut chains1 = target.chains.clone();
    let mut chains2 = r2.origin.chains.clone();
    chains1.sort_by_key(|c| c.weights(&target.resolution));
    chains2.sort_by_key(|c| c.weights(&r2.origin.resolution));
    for (c1, c2) in chains1.iter().zip(&chains2) {
        for (id1, id2) in c1.curves.iter().zip(&c2.curves) {
            translate.insert(id2.clone(), id1.clone());
        }
    }

    // general position: no base point of r2 on the shared boundary may be
    // the landing point of r1
    for step in &r2.script {
        if let Center::Interior { curve, point } = &step.center {
            if curve == &b2 && point == &landing {
                return Err(FactorError::SpecialPosition(format!(
                    "base point `{point}` coincides with the landing point"
                )));
            }
        }
    }

    // fresh names for the second map's created curves
    let taken: BTreeSet<String> = r1
        .graph
        .vertices()
        .map(|v| v.id.as_str().to_owned())
        .collect();
    let mut fresh = taken;
    for step in &r2.script {
        let name = step.name.clone().expect("resolved script has explicit names");
        let mut candidate = name.clone();
        while fresh.contains(&candidate) {
            candidate.push('\'');
        }
        fresh.insert(candidate.clone());
        translate.insert(CurveId::new(name), CurveId::new(candidate));
    }

    let tr = |id: &CurveId| translate.get(id).cloned().unwrap_or_else(|| id.clone());
    let mut combined = r1.script.clone();
    for step in &r2.script {
        let center = match &step.center {
            Center::Interior { curve, point } => {
                Center::Interior { curve: tr(curve), point: point.clone() }
            }
            Center::Node { a, b } => Center::Node { a: tr(a), b: tr(b) },
        };
        let name = tr(&CurveId::new(step.name.clone().unwrap()));
        combined.push(ScriptStep::named(center, step.h_mult, name.as_str()));
    }

    MarkedResolution::resolve(r1.origin.clone(), combined, r2.landing_label.clone())
}

fn check_pair_match(r: &MarkedResolution, other: &SurfacePair) -> Result<(), FactorError> {
    let target = collapse(&r.graph, &BTreeSet::from([r.en.clone()]), r.origin.base_rank)?;
    if target.irreducible_signature() != other.irreducible_signature() {
        return Err(FactorError::PairMismatch(
            "identity factor does not match the neighboring pair".to_owned(),
        ));
    }
    Ok(())
}

/// Intersection number of two boundary curves on the resolution: the
/// self-intersection when equal, the edge indicator otherwise.
fn inters(g: &DualGraph, a: &CurveId, b: &CurveId) -> Rat {
    if a == b {
        rat(g.self_int(a).unwrap())
    } else {
        rat(i64::from(g.has_edge(a, b)))
    }
}

/// Sarkisov degrees `mu_i = H.E_i / -(K+B).E_i` along the factorization.
///
/// The marker divisor H on the origin is normalized to avoid the landing
/// point of the map (so its transform meets `e0` trivially); its degree on
/// the origin boundary is then forced by the recorded multiplicities.
pub fn sarkisov_degree_sequence(
    r: &MarkedResolution,
    seq: &LinkSequence,
) -> Result<Vec<Rat>, FactorError> {
    let g = &r.graph;
    let path = &seq.chain_ids;
    let multiplicities: Vec<(CurveId, i64)> =
        r.ledger.rows.iter().map(|row| (row.id.clone(), row.m)).collect();

    let h_boundary: Rat = multiplicities
        .iter()
        .map(|(id, m)| rat(*m) * inters(g, id, &r.e0))
        .sum();
    let mut hx: BTreeMap<CurveId, Rat> = BTreeMap::new();
    for v in g.vertices() {
        let pullback = if v.id == r.e0 { h_boundary.clone() } else { Rat::zero() };
        let correction: Rat = multiplicities
            .iter()
            .map(|(id, m)| rat(*m) * inters(g, id, &v.id))
            .sum();
        hx.insert(v.id.clone(), pullback - correction);
    }

    let mut degrees = Vec::new();
    for (i, e) in path.iter().enumerate() {
        let removed: Vec<CurveId> = g
            .vertices()
            .map(|v| v.id.clone())
            .filter(|id| id != e)
            .collect();
        // orthogonal lift pi*E_i = E_i + sum beta_v v
        let m = pair::intersection_matrix(g, &removed)?;
        if !linalg::is_negative_definite(&m) {
            return Err(DiscrepancyError::NotNegativeDefinite.into());
        }
        let rhs: Vec<Rat> = removed.iter().map(|u| -inters(g, e, u)).collect();
        let beta = linalg::solve(&m, &rhs).expect("negative definite implies invertible");
        let h_deg: Rat = hx[e].clone()
            + removed
                .iter()
                .zip(&beta)
                .map(|(v, b)| b * &hx[v])
                .sum::<Rat>();
        let kpb = pair::kplusb_degree(&seq.pairs[i], e)?;
        degrees.push(discrepancy::sarkisov_degree(&kpb, &h_deg)?);
    }
    Ok(degrees)
}
