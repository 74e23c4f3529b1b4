//! Shared helpers for the integration test suites: random generators and
//! reusable invariant checks.
//!
//! Not every suite uses every helper.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;

use sarkisov::discrepancy::{self, ScriptStep};
use sarkisov::dualgraph::{Center, CurveId, CurveKind, DualGraph};
use sarkisov::hj;
use sarkisov::pair::{self, Chain, SurfacePair};
use sarkisov::rational::{rat, ratio};

pub fn id(s: &str) -> CurveId {
    CurveId::new(s)
}

/// Random tree on `n` vertices: vertex i > 0 attaches to a random earlier
/// vertex; self-intersections drawn from a small range.
pub fn random_tree(rng: &mut StdRng, n: usize) -> DualGraph {
    let mut g = DualGraph::new();
    for i in 0..n {
        g.insert_vertex(id(&format!("V{i}")), rng.gen_range(-4..4), CurveKind::StrictBoundary)
            .unwrap();
        if i > 0 {
            let j = rng.gen_range(0..i);
            g.add_edge(&id(&format!("V{i}")), &id(&format!("V{j}"))).unwrap();
        }
    }
    g
}

pub fn random_center(rng: &mut StdRng, g: &DualGraph, label: &str) -> Center {
    let edges: Vec<_> = g.edges().cloned().collect();
    if !edges.is_empty() && rng.gen_bool(0.5) {
        let (a, b) = edges[rng.gen_range(0..edges.len())].clone();
        Center::Node { a, b }
    } else {
        let vs: Vec<_> = g.vertices().map(|v| v.id.clone()).collect();
        Center::Interior { curve: vs[rng.gen_range(0..vs.len())].clone(), point: label.into() }
    }
}

pub fn smooth_start(self_int: i64) -> SurfacePair {
    let mut g = DualGraph::new();
    g.insert_vertex(id("B"), self_int, CurveKind::StrictBoundary).unwrap();
    SurfacePair::from_parts(g, BTreeSet::from([id("B")]), vec![], 1)
}

/// Random start pair (boundary curve, possibly with one chain) and a valid
/// random script over it, with h multiplicities in {0, 1}.
pub fn random_problem(rng: &mut StdRng, max_steps: usize) -> (SurfacePair, Vec<ScriptStep>) {
    let mut g = DualGraph::new();
    g.insert_vertex(id("B"), rng.gen_range(0..4), CurveKind::StrictBoundary).unwrap();
    let mut chains = Vec::new();
    if rng.gen_bool(0.4) {
        let len = rng.gen_range(1..=3);
        let mut prev = id("B");
        let mut curves = Vec::new();
        for j in 0..len {
            let c = id(&format!("S{j}"));
            g.insert_vertex(c.clone(), -rng.gen_range(2..=4), CurveKind::Exceptional {
                birth: (j + 1) as u32,
            })
            .unwrap();
            g.add_edge(&prev, &c).unwrap();
            curves.push(c.clone());
            prev = c;
        }
        chains.push(Chain { curves, attached_to: id("B") });
    }
    let start = SurfacePair::from_parts(g, BTreeSet::from([id("B")]), chains, 1);

    let mut current = start.resolution.clone();
    let mut script = Vec::new();
    let steps = rng.gen_range(1..=max_steps);
    for k in 0..steps {
        let center = random_center(rng, &current, &format!("q{k}"));
        let step = ScriptStep::named(center, rng.gen_range(0..=1), format!("R{k}"));
        let (next, _) = current.blow_up(&step.center, id(&format!("R{k}"))).unwrap();
        current = next;
        script.push(step);
    }
    (start, script)
}

/// Ledger column `a` must equal the independent linear-system solve.
pub fn check_oracle(start: &SurfacePair, script: &[ScriptStep]) {
    let run = discrepancy::run_script(start, script).unwrap();
    let contracted: BTreeSet<CurveId> = run.created.iter().cloned().collect();
    let solved = discrepancy::log_discrepancies_linear(&run.graph, &contracted).unwrap();
    for row in &run.ledger.rows {
        assert_eq!(
            solved[&row.id],
            rat(row.a()),
            "oracle disagrees on {} (c={}, t={})",
            row.id,
            row.c,
            row.t
        );
    }
}

/// Collapse must not depend on the order eligible curves are contracted in.
pub fn check_confluence(
    graph: &DualGraph,
    keep: &BTreeSet<CurveId>,
    rng: &mut StdRng,
    orders: usize,
) {
    let reference = pair::collapse(graph, keep, 1);
    for _ in 0..orders {
        let shuffled = pair::collapse_with_order(graph, keep, 1, &mut |eligible, _| {
            rng.gen_range(0..eligible.len())
        });
        match (&reference, &shuffled) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.resolution, b.resolution);
                assert_eq!(a.chains, b.chains);
            }
            (Err(_), Err(_)) => {}
            (a, b) => panic!("order-dependent outcome: {a:?} vs {b:?}"),
        }
    }
}

/// Random pair: a small boundary tree with random chains attached.
pub fn random_admissible_pair(rng: &mut StdRng) -> SurfacePair {
    let n = rng.gen_range(1..=3);
    let mut g = DualGraph::new();
    let mut boundary = BTreeSet::new();
    for i in 0..n {
        let b = id(&format!("B{i}"));
        g.insert_vertex(b.clone(), rng.gen_range(-3..4), CurveKind::StrictBoundary).unwrap();
        if i > 0 {
            let j = rng.gen_range(0..i);
            g.add_edge(&b, &id(&format!("B{j}"))).unwrap();
        }
        boundary.insert(b);
    }
    let mut chains = Vec::new();
    let mut birth = 0u32;
    for i in 0..n {
        for c in 0..rng.gen_range(0..=2) {
            let len = rng.gen_range(1..=6);
            let mut prev = id(&format!("B{i}"));
            let mut curves = Vec::new();
            for j in 0..len {
                let v = id(&format!("B{i}c{c}x{j}"));
                birth += 1;
                g.insert_vertex(v.clone(), -rng.gen_range(2..=7), CurveKind::Exceptional { birth })
                    .unwrap();
                g.add_edge(&prev, &v).unwrap();
                curves.push(v.clone());
                prev = v;
            }
            chains.push(Chain { curves, attached_to: id(&format!("B{i}")) });
        }
    }
    SurfacePair::from_parts(g, boundary, chains, 1)
}

/// The contraction lemma and neighbor-count inequalities, checked on every
/// boundary curve of the pair.
pub fn check_lemma_remark(p: &SurfacePair) {
    for b in &p.strict_boundary {
        let n = p.boundary_neighbor_count(b) as i64;
        let r = p.chains_on(b).len() as i64;
        let kpb = pair::kplusb_degree(p, b).unwrap();

        // strict upper bound (an equality when r = 0) and the halved lower
        // bound
        if r == 0 {
            assert_eq!(kpb, rat(n - 2));
        } else {
            assert!(rat(n - 2 + r) > kpb, "upper bound fails on {b}");
        }
        assert!(kpb >= rat(n - 2) + ratio(r, 2), "lower bound fails on {b}");

        if n == 1 && r <= 1 {
            if r == 0 {
                assert_eq!(kpb, rat(-1));
            } else {
                let chain = p.chains_on(b)[0];
                let a = hj::chain_log_discrepancies(&chain.hj_chain(&p.resolution).unwrap())
                    .unwrap();
                assert_eq!(kpb, -a[0].clone(), "n=1, r=1 case fails on {b}");
            }
        }

        for chain in p.chains_on(b) {
            let a = hj::chain_log_discrepancies(&chain.hj_chain(&p.resolution).unwrap()).unwrap();
            assert!(a[0] <= ratio(1, 2), "boundary discrepancy > 1/2 on {b}");
        }

        let bar_sq = p.resolution.self_int(b).unwrap();
        if r == 1 && bar_sq < 0 {
            let sq = pair::pair_self_intersection(p, b).unwrap();
            assert!(sq < rat(bar_sq + 1), "self-intersection gain >= 1 on {b}");
        }
    }
}
