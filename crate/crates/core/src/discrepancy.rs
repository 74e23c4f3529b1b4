//! Blow-up scripts with ramification bookkeeping.
//!
//! Replaying a script on a pair's minimal resolution tracks, per created
//! divisor, the canonical coefficient `c`, the total-transform boundary
//! coefficient `t` (so `b = t - 1`), and the multiplicity `m` of the marker
//! divisor H.  The log discrepancy is `a = c - b`; the multiplicity ratio
//! is `lambda = m / a` when `a > 0`.  An independent linear-system solve
//! over the final graph recovers the same `a` column.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use thiserror::Error;

use crate::dualgraph::{Center, CurveId, DualGraph, GraphError};
use crate::linalg;
use crate::pair::{intersection_matrix, SurfacePair};
use crate::rational::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscrepancyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("script is empty")]
    EmptyScript,
    #[error("no ledger row has a positive log discrepancy")]
    NoPositiveDiscrepancy,
    #[error("contracted curves do not have a negative definite intersection matrix")]
    NotNegativeDefinite,
    #[error("degree requires (K+B).C < 0, got {0}")]
    NonNegativeKplusB(String),
}

/// One blow-up with the multiplicity of the strict transform of H at its
/// center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStep {
    pub center: Center,
    pub h_mult: u64,
    /// Name for the created curve; defaults to `E{birth}`.
    pub name: Option<String>,
}

impl ScriptStep {
    pub fn new(center: Center, h_mult: u64) -> Self {
        ScriptStep { center, h_mult, name: None }
    }

    pub fn named(center: Center, h_mult: u64, name: impl Into<String>) -> Self {
        ScriptStep { center, h_mult, name: Some(name.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerRow {
    pub id: CurveId,
    pub c: i64,
    pub t: i64,
    pub m: i64,
}

impl LedgerRow {
    pub fn b(&self) -> i64 {
        self.t - 1
    }

    pub fn a(&self) -> i64 {
        self.c - self.t + 1
    }

    /// `m / a`, defined only when `a > 0`.
    pub fn lambda(&self) -> Option<Rat> {
        (self.a() > 0).then(|| Rat::new(self.m.into(), self.a().into()))
    }
}

/// Rows in birth order, one per script-created divisor.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoefficientLedger {
    pub rows: Vec<LedgerRow>,
}

impl CoefficientLedger {
    pub fn row(&self, id: &CurveId) -> Option<&LedgerRow> {
        self.rows.iter().find(|r| &r.id == id)
    }
}

/// Result of replaying a script on a pair's resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptRun {
    pub graph: DualGraph,
    pub ledger: CoefficientLedger,
    /// Created curves, in birth order.
    pub created: Vec<CurveId>,
}

/// Replays a script on the minimal resolution of `start`.  Every curve of
/// the start resolution (strict boundary and chain curves alike) carries
/// `t = 1`, `c = 0`, `m = 0`; created curves accumulate coefficients from
/// the curves through their center.
pub fn run_script(start: &SurfacePair, script: &[ScriptStep]) -> Result<ScriptRun, DiscrepancyError> {
    if script.is_empty() {
        return Err(DiscrepancyError::EmptyScript);
    }
    let mut g = start.resolution.clone();
    let mut coeff: BTreeMap<CurveId, (i64, i64, i64)> = g
        .vertices()
        .map(|v| (v.id.clone(), (0, 1, 0)))
        .collect();
    let mut ledger = CoefficientLedger::default();
    let mut created = Vec::new();
    for (i, step) in script.iter().enumerate() {
        let name = step
            .name
            .clone()
            .unwrap_or_else(|| format!("E{}", g.max_birth() + 1));
        let new_id = CurveId::new(name);
        let through: Vec<&CurveId> = match &step.center {
            Center::Interior { curve, .. } => vec![curve],
            Center::Node { a, b } => vec![a, b],
        };
        let mut c_new = 1;
        let mut t_new = 0;
        let mut m_new = step.h_mult as i64;
        for id in through {
            let &(c, t, m) = coeff
                .get(id)
                .ok_or_else(|| GraphError::UnknownCurve(id.clone()))?;
            c_new += c;
            t_new += t;
            m_new += m;
        }
        let (g2, id) = g.blow_up(&step.center, new_id)?;
        g = g2;
        coeff.insert(id.clone(), (c_new, t_new, m_new));
        let row = LedgerRow { id: id.clone(), c: c_new, t: t_new, m: m_new };
        debug_assert!(row.a() == row.c - row.b(), "step {i}: a = c - b broken");
        ledger.rows.push(row);
        created.push(id);
    }
    Ok(ScriptRun { graph: g, ledger, created })
}

/// Maximum of `lambda` over rows with `a > 0`, with every divisor attaining
/// it.
pub fn maximal_multiplicity(
    ledger: &CoefficientLedger,
) -> Result<(Rat, Vec<CurveId>), DiscrepancyError> {
    let candidates: Vec<(&LedgerRow, Rat)> = ledger
        .rows
        .iter()
        .filter_map(|r| r.lambda().map(|l| (r, l)))
        .collect();
    let best = candidates
        .iter()
        .map(|(_, l)| l.clone())
        .max()
        .ok_or(DiscrepancyError::NoPositiveDiscrepancy)?;
    let argmax = candidates
        .into_iter()
        .filter(|(_, l)| *l == best)
        .map(|(r, _)| r.id.clone())
        .collect();
    Ok((best, argmax))
}

/// Independent oracle for the ledger's `a` column: solves
/// `sum_i a_i (C_i.C_j) = -2 + deg(C_j)` over the contracted curves, with
/// degrees taken in the full boundary graph.
pub fn log_discrepancies_linear(
    graph: &DualGraph,
    contracted: &BTreeSet<CurveId>,
) -> Result<BTreeMap<CurveId, Rat>, DiscrepancyError> {
    if contracted.is_empty() {
        return Ok(BTreeMap::new());
    }
    let ids: Vec<CurveId> = contracted.iter().cloned().collect();
    for id in &ids {
        graph.vertex(id)?;
    }
    let m = intersection_matrix(graph, &ids)?;
    if !linalg::is_negative_definite(&m) {
        return Err(DiscrepancyError::NotNegativeDefinite);
    }
    let rhs: Vec<Rat> = ids
        .iter()
        .map(|id| rat(-2 + graph.degree(id) as i64))
        .collect();
    let sol = linalg::solve(&m, &rhs).expect("negative definite implies invertible");
    Ok(ids.into_iter().zip(sol).collect())
}

/// Sarkisov degree `mu = h_deg / -(K+B).C`, defined only for `(K+B).C < 0`.
pub fn sarkisov_degree(kplusb_deg: &Rat, h_deg: &Rat) -> Result<Rat, DiscrepancyError> {
    if !kplusb_deg.is_negative() {
        return Err(DiscrepancyError::NonNegativeKplusB(
            crate::rational::fmt_rat(kplusb_deg),
        ));
    }
    if h_deg.is_zero() {
        return Ok(Rat::zero());
    }
    Ok(h_deg / -kplusb_deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::CurveKind;
    use crate::rational::ratio;
    use std::collections::BTreeSet;

    fn id(s: &str) -> CurveId {
        CurveId::new(s)
    }

    fn smooth_pair(name: &str, self_int: i64, base_rank: i64) -> SurfacePair {
        let mut g = DualGraph::new();
        g.insert_vertex(id(name), self_int, CurveKind::StrictBoundary).unwrap();
        SurfacePair::from_parts(g, BTreeSet::from([id(name)]), vec![], base_rank)
    }

    fn interior(curve: &str, point: &str) -> Center {
        Center::Interior { curve: id(curve), point: point.into() }
    }

    fn node(a: &str, b: &str) -> Center {
        Center::Node { a: id(a), b: id(b) }
    }

    #[test]
    fn single_step_row() {
        let start = smooth_pair("B", 0, 1);
        let run = run_script(&start, &[ScriptStep::new(interior("B", "p"), 0)]).unwrap();
        let row = &run.ledger.rows[0];
        assert_eq!((row.c, row.t, row.b(), row.m, row.a()), (1, 1, 0, 0, 1));
        assert_eq!(row.lambda(), Some(rat(0)));
    }

    #[test]
    fn empty_script_rejected() {
        let start = smooth_pair("B", 0, 1);
        assert_eq!(run_script(&start, &[]).unwrap_err(), DiscrepancyError::EmptyScript);
    }

    #[test]
    fn quadric_ledger_and_tree() {
        let start = smooth_pair("D", 2, 2);
        let script = vec![
            ScriptStep::named(interior("D", "p"), 1, "C1"),
            ScriptStep::named(node("C1", "D"), 1, "C2"),
            ScriptStep::named(node("C2", "D"), 1, "C3"),
            ScriptStep::named(interior("C3", "q"), 1, "C4"),
        ];
        let run = run_script(&start, &script).unwrap();
        let expect = [
            ("C1", 1, 0, 1, rat(1)),
            ("C2", 2, 1, 2, rat(2)),
            ("C3", 3, 2, 3, rat(3)),
            ("C4", 4, 2, 4, rat(2)),
        ];
        for (row, (name, c, b, m, lambda)) in run.ledger.rows.iter().zip(expect) {
            assert_eq!(row.id, id(name));
            assert_eq!((row.c, row.b(), row.m), (c, b, m));
            assert_eq!(row.lambda(), Some(lambda));
        }
        // final boundary tree: C1(-2)-C2(-2)-C3(-2), C3-D(-1), C3-C4(-1)
        let g = &run.graph;
        for (n, s) in [("C1", -2), ("C2", -2), ("C3", -2), ("D", -1), ("C4", -1)] {
            assert_eq!(g.self_int(&id(n)).unwrap(), s, "{n}");
        }
        for (a, b) in [("C1", "C2"), ("C2", "C3"), ("C3", "D"), ("C3", "C4")] {
            assert!(g.has_edge(&id(a), &id(b)));
        }
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.tree_path(&id("D"), &id("C4")).unwrap(), vec![id("D"), id("C3"), id("C4")]);
    }

    #[test]
    fn quadric_maximal_multiplicity() {
        let start = smooth_pair("D", 2, 2);
        let script = vec![
            ScriptStep::named(interior("D", "p"), 1, "C1"),
            ScriptStep::named(node("C1", "D"), 1, "C2"),
            ScriptStep::named(node("C2", "D"), 1, "C3"),
            ScriptStep::named(interior("C3", "q"), 1, "C4"),
        ];
        let run = run_script(&start, &script).unwrap();
        let (lambda, argmax) = maximal_multiplicity(&run.ledger).unwrap();
        assert_eq!(lambda, rat(3));
        assert_eq!(argmax, vec![id("C3")]);
    }

    #[test]
    fn zero_h_ties() {
        let start = smooth_pair("B", 0, 1);
        let script = vec![
            ScriptStep::named(interior("B", "p"), 0, "C1"),
            ScriptStep::named(interior("B", "q"), 0, "C2"),
        ];
        let run = run_script(&start, &script).unwrap();
        let (lambda, argmax) = maximal_multiplicity(&run.ledger).unwrap();
        assert_eq!(lambda, rat(0));
        assert_eq!(argmax, vec![id("C1"), id("C2")]);
    }

    #[test]
    fn linear_oracle_matches_quadric() {
        let start = smooth_pair("D", 2, 2);
        let script = vec![
            ScriptStep::named(interior("D", "p"), 1, "C1"),
            ScriptStep::named(node("C1", "D"), 1, "C2"),
            ScriptStep::named(node("C2", "D"), 1, "C3"),
            ScriptStep::named(interior("C3", "q"), 1, "C4"),
        ];
        let run = run_script(&start, &script).unwrap();
        let contracted: BTreeSet<CurveId> = run.created.iter().cloned().collect();
        let solved = log_discrepancies_linear(&run.graph, &contracted).unwrap();
        assert_eq!(solved[&id("C1")], rat(1));
        assert_eq!(solved[&id("C2")], rat(1));
        assert_eq!(solved[&id("C3")], rat(1));
        assert_eq!(solved[&id("C4")], rat(2));
        for row in &run.ledger.rows {
            assert_eq!(solved[&row.id], rat(row.a()));
        }
        assert!(log_discrepancies_linear(&run.graph, &BTreeSet::new()).unwrap().is_empty());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(sarkisov_degree(&rat(-2), &rat(1)).unwrap(), ratio(1, 2));
        assert_eq!(sarkisov_degree(&rat(-1), &rat(3)).unwrap(), rat(3));
        assert!(matches!(
            sarkisov_degree(&rat(0), &rat(1)),
            Err(DiscrepancyError::NonNegativeKplusB(_))
        ));
    }
}
