//! Acceptance suite: one test per criterion, each printing a PASS line.
//! All comparisons are exact rational equality.

mod common;

use std::collections::BTreeSet;
use std::process::Command;

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sarkisov::dualgraph::CurveId;
use sarkisov::factor::{self, LinkSequence, MarkedResolution};
use sarkisov::fixtures;
use sarkisov::hj::{self, HJType};
use sarkisov::pair;
use sarkisov::problem::Problem;
use sarkisov::rational::{rat, Rat};

fn resolved(p: &Problem) -> MarkedResolution {
    p.resolution().expect("fixture resolves")
}

fn factorized(p: &Problem) -> (MarkedResolution, LinkSequence) {
    let r = resolved(p);
    let seq = factor::factorize(&r).expect("fixture factorizes");
    (r, seq)
}

fn signature(p: &pair::SurfacePair) -> (i64, Vec<Vec<i64>>) {
    p.irreducible_signature().expect("irreducible boundary")
}

#[test]
fn criterion_01_fig1_table() {
    let r = resolved(&fixtures::quadric());
    let expect = [
        ("C1", 1, 0, 1, rat(1)),
        ("C2", 2, 1, 2, rat(2)),
        ("C3", 3, 2, 3, rat(3)),
        ("C4", 4, 2, 4, rat(2)),
    ];
    assert_eq!(r.ledger.rows.len(), 4);
    for (row, (name, c, b, m, lambda)) in r.ledger.rows.iter().zip(expect) {
        assert_eq!(row.id, id(name));
        assert_eq!((row.c, row.b(), row.m), (c, b, m), "{name}");
        assert_eq!(row.lambda(), Some(lambda), "{name}");
    }

    // the same table through the command-line interface
    let out = Command::new(env!("CARGO_BIN_EXE_sarkisov"))
        .args(["--fixture", "quadric", "--command", "ledger"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in [
        "C1       1  0  1  1",
        "C2       2  1  2  2",
        "C3       3  2  3  3",
        "C4       4  2  4  2",
        "lambda* = 3 at {C3}",
    ] {
        assert!(text.contains(line), "missing `{line}` in:\n{text}");
    }
    println!("PASS: criterion 1 (ledger table reproduced exactly)");
}

#[test]
fn criterion_02_quadric_factorization() {
    let (r, seq) = factorized(&fixtures::quadric());
    assert_eq!(seq.link_count(), 2);
    let s1 = &seq.pairs[1];
    assert_eq!(s1.singularity_types(), vec![HJType::new(3, 2).unwrap()]);
    assert_eq!(pair::picard_rank(s1, r.blowup_count()).unwrap(), 2);
    let (indices, report) = factor::index_sequence(&seq).unwrap();
    assert_eq!(indices, vec![1, 2, 1]);
    assert!(report.applicable && report.unit_steps && report.monotone_descent);
    println!("PASS: criterion 2 (quadric: 2 links, A_{{3,2}}, rank 2, [1,2,1])");
}

#[test]
fn criterion_03_maximal_extraction() {
    let (r, seq) = factorized(&fixtures::quadric());
    let report = factor::maximal_extraction_check(&seq, &r.ledger).unwrap();
    assert_eq!(report.e1, id("C3"));
    assert_eq!(report.lambda_star, rat(3));
    assert_eq!(report.argmax, vec![id("C3")]);
    assert!(report.attained && !report.vacuous);
    println!("PASS: criterion 3 (E_1 = C3 attains lambda* = 3)");
}

#[test]
fn criterion_04_chain_reversion() {
    let (_, seq) = factorized(&fixtures::reversion_sigma());
    assert_eq!(seq.link_count(), 2);
    let middle: BTreeSet<HJType> = seq.pairs[1].singularity_types().into_iter().collect();
    assert_eq!(
        middle,
        BTreeSet::from([HJType::new(3, 2).unwrap(), HJType::new(2, 1).unwrap()])
    );
    let last = seq.pairs.last().unwrap();
    assert_eq!(last.singularity_types(), vec![HJType::new(3, 1).unwrap()]);
    println!("PASS: criterion 4 (reversion: 2 links, A_{{3,2}}+A_{{2,1}} middle, unique A_{{3,1}})");
}

#[test]
fn criterion_05_concatenation() {
    let (_, seq) = factorized(&fixtures::reversion_h0());
    assert_eq!(seq.link_count(), 6);

    // the glued sequence equals the concatenation of the three factors
    let parts = [
        fixtures::reversion_sigma(),
        fixtures::reversion_h2(),
        fixtures::reversion_sigma_inv(),
    ];
    let mut expected: Vec<(i64, Vec<Vec<i64>>)> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let (_, s) = factorized(part);
        assert_eq!(s.link_count(), 2);
        let skip = usize::from(i > 0);
        expected.extend(s.pairs.iter().skip(skip).map(signature));
    }
    let actual: Vec<(i64, Vec<Vec<i64>>)> = seq.pairs.iter().map(signature).collect();
    assert_eq!(actual, expected);
    println!("PASS: criterion 5 (h_0 = 6 links, equal to the concatenation)");
}

#[test]
fn criterion_06_jung_towers() {
    for d in 2..=6 {
        let (_, seq) = factorized(&fixtures::jung(d));
        assert_eq!(seq.link_count(), (2 * d - 2) as usize, "d={d}");
        let (indices, report) = factor::index_sequence(&seq).unwrap();
        let mut expect: Vec<i64> = (1..=d).collect();
        expect.extend((1..d).rev());
        assert_eq!(indices, expect, "d={d}");
        assert!(report.applicable && report.unit_steps && report.monotone_descent);
        for p in &seq.pairs[1..seq.pairs.len() - 1] {
            assert_eq!(p.chains.len(), 1, "d={d}");
            let weights = p.chains[0].weights(&p.resolution);
            assert_eq!(weights.len(), 1, "d={d}: intermediate chain not of type A_{{d',1}}");
            assert!(2 <= weights[0] && weights[0] <= d, "d={d}");
        }
        let segments = factor::triangular_segments(&indices);
        assert_eq!(segments.len(), 1);
        assert_eq!(segments[0].degree, d);
        assert!(segments[0].length_matches);
    }
    println!("PASS: criterion 6 (Jung towers d=2..6: 2d-2 links, palindromic indices)");
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(20260826);
    for _ in 0..200 {
        let (start, script) = random_problem(&mut rng, 12);
        check_oracle(&start, &script);
    }
    println!("PASS: criterion 7 (ledger a-column matches the linear oracle, 200 scripts)");
}

#[test]
fn criterion_08_lemma_remark_suite() {
    let mut rng = StdRng::seed_from_u64(118);
    for _ in 0..300 {
        let p = random_admissible_pair(&mut rng);
        check_lemma_remark(&p);
    }

    // a curve carrying three A_{3,1} singularities has (K+B).C = 0 exactly
    let mut g = sarkisov::dualgraph::DualGraph::new();
    g.insert_vertex(id("B"), 3, sarkisov::dualgraph::CurveKind::StrictBoundary).unwrap();
    let mut chains = Vec::new();
    for i in 1..=3u32 {
        let c = id(&format!("T{i}"));
        g.insert_vertex(c.clone(), -3, sarkisov::dualgraph::CurveKind::Exceptional { birth: i })
            .unwrap();
        g.add_edge(&id("B"), &c).unwrap();
        chains.push(pair::Chain { curves: vec![c], attached_to: id("B") });
    }
    let p = pair::SurfacePair::from_parts(g, BTreeSet::from([id("B")]), chains, 1);
    assert_eq!(pair::kplusb_degree(&p, &id("B")).unwrap(), rat(0));
    println!("PASS: criterion 8 (contraction lemma and remark bounds, 300 pairs)");
}

#[test]
fn criterion_09_hj_roundtrip() {
    let mut count = 0;
    for n in 2i64..=50 {
        for q in 1..n {
            let t = match HJType::new(n, q) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let chain = hj::type_to_chain(&t);
            assert_eq!(hj::chain_to_type(&chain), t);
            let sign = if chain.len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(hj::chain_determinant(&chain), rat(sign * n));
            count += 1;
        }
    }
    assert!(count > 700, "coprime pair count sanity");
    println!("PASS: criterion 9 (HJ roundtrip and determinant for all coprime n <= 50)");
}

#[test]
fn criterion_10_degree_decrease() {
    for d in 2..=6 {
        let (r, seq) = factorized(&fixtures::jung(d));
        let mu = factor::sarkisov_degree_sequence(&r, &seq).unwrap();
        assert_eq!(mu.len(), seq.pairs.len());
        for w in mu.windows(2) {
            assert!(w[0] > w[1], "degree not strictly decreasing for d={d}: {w:?}");
        }
        assert_eq!(mu[0], rat(1), "line through the first center has degree 1, d={d}");
    }
    println!("PASS: criterion 10 (Sarkisov degree strictly decreases on plane fixtures)");
}

#[test]
fn criterion_11_collapse_confluence() {
    let mut rng = StdRng::seed_from_u64(42);
    for (name, p) in fixtures::all() {
        let r = resolved(&p);
        let ids: Vec<CurveId> = r.graph.vertices().map(|v| v.id.clone()).collect();
        if ids.len() <= 8 {
            // every nonempty keep-set
            for mask in 1u32..(1 << ids.len()) {
                let keep: BTreeSet<CurveId> = ids
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, c)| c.clone())
                    .collect();
                check_confluence(&r.graph, &keep, &mut rng, 3);
            }
        } else {
            // large glued graph: random sample of keep-sets
            for _ in 0..200 {
                let keep: BTreeSet<CurveId> =
                    ids.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
                if keep.is_empty() {
                    continue;
                }
                check_confluence(&r.graph, &keep, &mut rng, 3);
            }
        }
        let _ = name;
    }
    println!("PASS: criterion 11 (collapse confluent on all fixture keep-sets)");
}

#[test]
fn extra_double_quadric_segments() {
    // gluing the quadric map with itself in general position gives two
    // triangular segments of degree 2
    let q1 = resolved(&fixtures::quadric());
    let glued = factor::concat_general_position(&q1, &q1).unwrap();
    let seq = factor::factorize(&glued).unwrap();
    assert_eq!(seq.link_count(), 4);
    let (indices, _) = factor::index_sequence(&seq).unwrap();
    assert_eq!(indices, vec![1, 2, 1, 2, 1]);
    let segments = factor::triangular_segments(&indices);
    assert_eq!(segments.len(), 2);
    assert!(segments.iter().all(|s| s.degree == 2 && s.length_matches));
}

#[test]
fn extra_ledger_lambda_consistency() {
    // lambda = m / (c - b) row by row on every fixture with multiplicities
    let r = resolved(&fixtures::quadric());
    for row in &r.ledger.rows {
        if row.a() > 0 {
            assert_eq!(row.lambda().unwrap(), Rat::new(row.m.into(), (row.c - row.b()).into()));
        }
    }
    // sigma ledger from the three-step script: c = (1,2,4), t = (1,2,3)
    let r = resolved(&fixtures::reversion_sigma());
    let cs: Vec<i64> = r.ledger.rows.iter().map(|x| x.c).collect();
    let ts: Vec<i64> = r.ledger.rows.iter().map(|x| x.t).collect();
    let asq: Vec<i64> = r.ledger.rows.iter().map(|x| x.a()).collect();
    assert_eq!(cs, vec![1, 2, 4]);
    assert_eq!(ts, vec![1, 2, 3]);
    assert_eq!(asq, vec![1, 1, 2]);
}
