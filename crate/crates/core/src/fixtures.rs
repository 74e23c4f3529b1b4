//! Built-in example problems: the quadric resolution, the chain reversion
//! and its relatives, and the degree-d plane towers.

use crate::problem::{
    BoundarySpec, CenterSpec, PairSpec, Problem, ProblemFile, SingSpec, StepSpec,
};

fn interior(curve: &str, point: &str, h_mult: u64, name: &str) -> StepSpec {
    StepSpec {
        center: CenterSpec::Interior { interior: curve.into(), point: point.into() },
        h_mult,
        name: Some(name.into()),
    }
}

fn node(a: &str, b: &str, h_mult: u64, name: &str) -> StepSpec {
    StepSpec {
        center: CenterSpec::Node { node: [a.into(), b.into()] },
        h_mult,
        name: Some(name.into()),
    }
}

fn boundary(name: &str, self_int: i64, sings: Vec<SingSpec>) -> BoundarySpec {
    BoundarySpec { name: name.into(), self_int, sings }
}

fn chain(weights: &[i64], names: &[&str]) -> SingSpec {
    SingSpec::Chain {
        chain: weights.to_vec(),
        names: Some(names.iter().map(|s| (*s).to_string()).collect()),
    }
}

fn problem(
    base_rank: i64,
    boundary: Vec<BoundarySpec>,
    script: Vec<StepSpec>,
    landing: &str,
) -> ProblemFile {
    ProblemFile {
        pair: Some(PairSpec { base_rank, boundary, edges: vec![] }),
        script,
        landing_label: Some(landing.into()),
        concat: vec![],
    }
}

/// Resolution of the map between two quadrics: four blow-ups over the
/// diagonal, marker divisor through every center.
pub fn quadric() -> Problem {
    let file = problem(
        2,
        vec![boundary("D", 2, vec![])],
        vec![
            interior("D", "p", 1, "C1"),
            node("C1", "D", 1, "C2"),
            node("C2", "D", 1, "C3"),
            interior("C3", "q", 1, "C4"),
        ],
        "r",
    );
    Problem::from_file(file).expect("fixture is valid")
}

/// Chain reversion: origin boundary of self-intersection 1 carrying an
/// A_{5,2} singularity; three blow-ups reverse the chain.
pub fn reversion_sigma() -> Problem {
    let file = sigma_file();
    Problem::from_file(file).expect("fixture is valid")
}

fn sigma_file() -> ProblemFile {
    problem(
        6,
        vec![boundary("B", 1, vec![chain(&[3, 2], &["C1", "C2"])])],
        vec![
            interior("B", "p", 0, "Aux"),
            node("Aux", "B", 0, "E1"),
            node("Aux", "E1", 0, "E2"),
        ],
        "q1",
    )
}

/// Four blow-ups, the first one on the A_{3,1} singularity of the origin.
pub fn reversion_h2() -> Problem {
    Problem::from_file(h2_file()).expect("fixture is valid")
}

fn h2_file() -> ProblemFile {
    problem(
        5,
        vec![boundary("B", 2, vec![chain(&[3], &["C"])])],
        vec![
            node("B", "C", 0, "F1"),
            node("B", "F1", 0, "F2"),
            node("B", "F2", 0, "F3"),
            interior("F3", "q", 0, "F4"),
        ],
        "q2",
    )
}

/// The inverse reversion, from the A_{3,1} side back to A_{5,2}.
pub fn reversion_sigma_inv() -> Problem {
    Problem::from_file(sigma_inv_file()).expect("fixture is valid")
}

fn sigma_inv_file() -> ProblemFile {
    problem(
        5,
        vec![boundary("B2", 2, vec![chain(&[3], &["Xc"])])],
        vec![
            interior("B2", "p3", 0, "K1"),
            node("B2", "K1", 0, "K2"),
            node("B2", "K2", 0, "K3"),
            node("K3", "K2", 0, "K4"),
        ],
        "q3",
    )
}

/// The conjugate map: sigma, then h2, then the inverse reversion, glued in
/// general position.
pub fn reversion_h0() -> Problem {
    let file = ProblemFile {
        pair: None,
        script: vec![],
        landing_label: None,
        concat: vec![sigma_file(), h2_file(), sigma_inv_file()],
    };
    Problem::from_file(file).expect("fixture is valid")
}

/// Plane fixture of degree d: the tower through the weighted planes, with
/// the marker divisor a line through every center.  Yields `2d - 2` links.
pub fn jung(d: i64) -> Problem {
    assert!(d >= 2, "degree must be at least 2");
    let mut script = vec![interior("B", "p", 1, "G1")];
    let name = |j: i64| format!("G{j}");
    for j in 2..=d {
        let prev = if j == 2 { "B".to_string() } else { name(j - 1) };
        script.push(node(&prev, "G1", 1, &name(j)));
    }
    for j in d + 1..=2 * d - 1 {
        script.push(interior(&name(j - 1), &format!("x{j}"), 1, &name(j)));
    }
    let file = problem(1, vec![boundary("B", 1, vec![])], script, "r");
    Problem::from_file(file).expect("fixture is valid")
}

/// All named fixtures with stable keys, as accepted by the CLI.
pub fn by_name(name: &str) -> Option<Problem> {
    if let Some(d) = name.strip_prefix("jung-d=") {
        return d.parse().ok().filter(|&d| d >= 2).map(jung);
    }
    match name {
        "quadric" => Some(quadric()),
        "reversion-sigma" => Some(reversion_sigma()),
        "reversion-h2" => Some(reversion_h2()),
        "reversion-sigma-inv" => Some(reversion_sigma_inv()),
        "reversion-h0" => Some(reversion_h0()),
        _ => None,
    }
}

/// The fixed-name fixtures (excluding the degree-parametrized family).
pub fn all() -> Vec<(&'static str, Problem)> {
    vec![
        ("quadric", quadric()),
        ("reversion-sigma", reversion_sigma()),
        ("reversion-h2", reversion_h2()),
        ("reversion-sigma-inv", reversion_sigma_inv()),
        ("reversion-h0", reversion_h0()),
        ("jung-d=3", jung(3)),
    ]
}
