//! Problem files: JSON descriptions of a pair plus a blow-up script (or a
//! concatenation of such), with full validation and a canonical renderer.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrepancy::ScriptStep;
use crate::dualgraph::{Center, CurveId, CurveKind, DualGraph};
use crate::factor::{self, FactorError, MarkedResolution};
use crate::hj::{self, HJType};
use crate::pair::{Chain, SurfacePair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("schema error in field `{0}`: {1}")]
    SchemaError(String, String),
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub script: Vec<StepSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub landing_label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub concat: Vec<ProblemFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub base_rank: i64,
    pub boundary: Vec<BoundarySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub name: String,
    pub self_int: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sings: Vec<SingSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SingSpec {
    Chain {
        chain: Vec<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Type {
        #[serde(rename = "type")]
        nq: [i64; 2],
        #[serde(skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub center: CenterSpec,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub h_mult: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CenterSpec {
    Interior { interior: String, point: String },
    Node { node: [String; 2] },
}

/// A validated problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    file: ProblemFile,
}

pub fn load_problem(text: &str) -> Result<Problem, ProblemError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(classify_json_error)?;
    Problem::from_file(file)
}

fn classify_json_error(e: serde_json::Error) -> ProblemError {
    let message = e.to_string();
    if let Some(rest) = message.strip_prefix("missing field `") {
        if let Some(field) = rest.split('`').next() {
            return ProblemError::SchemaError(field.to_owned(), "missing".to_owned());
        }
    }
    ProblemError::ParseError { line: e.line(), column: e.column(), message }
}

impl Problem {
    pub fn from_file(file: ProblemFile) -> Result<Self, ProblemError> {
        validate_file(&file)?;
        Ok(Problem { file })
    }

    pub fn file(&self) -> &ProblemFile {
        &self.file
    }

    /// Canonical JSON rendering; `load_problem(render(p)) == p`.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("problem files always serialize")
    }

    pub fn is_concat(&self) -> bool {
        !self.file.concat.is_empty()
    }

    pub fn concat_parts(&self) -> Result<Vec<Problem>, ProblemError> {
        self.file.concat.iter().cloned().map(Problem::from_file).collect()
    }

    pub fn landing_label(&self) -> Option<String> {
        self.file.landing_label.clone()
    }

    /// Builds the origin pair from the `pair` section.
    pub fn pair(&self) -> Result<SurfacePair, ProblemError> {
        let spec = self
            .file
            .pair
            .as_ref()
            .ok_or_else(|| ProblemError::SchemaError("pair".into(), "missing".into()))?;
        let mut g = DualGraph::new();
        let mut boundary = BTreeSet::new();
        let mut chains = Vec::new();
        let mut birth = 0u32;
        for b in &spec.boundary {
            g.insert_vertex(CurveId::new(&b.name), b.self_int, CurveKind::StrictBoundary)
                .map_err(|e| ProblemError::SchemaError("boundary".into(), e.to_string()))?;
            boundary.insert(CurveId::new(&b.name));
        }
        for b in &spec.boundary {
            for (si, sing) in b.sings.iter().enumerate() {
                let (weights, names) = sing_weights(sing)?;
                let mut curves = Vec::new();
                let mut prev = CurveId::new(&b.name);
                for (j, &w) in weights.iter().enumerate() {
                    let name = names
                        .as_ref()
                        .map(|ns| ns[j].clone())
                        .unwrap_or_else(|| format!("{}.s{}.{}", b.name, si + 1, j + 1));
                    let c = CurveId::new(name);
                    birth += 1;
                    g.insert_vertex(c.clone(), -w, CurveKind::Exceptional { birth })
                        .map_err(|e| ProblemError::SchemaError("sings".into(), e.to_string()))?;
                    g.add_edge(&prev, &c).expect("both endpoints inserted");
                    curves.push(c.clone());
                    prev = c;
                }
                chains.push(Chain { curves, attached_to: CurveId::new(&b.name) });
            }
        }
        for [a, b] in &spec.edges {
            for name in [a, b] {
                if !boundary.contains(&CurveId::new(name)) {
                    return Err(ProblemError::UnknownReference(name.clone()));
                }
            }
            g.add_edge(&CurveId::new(a), &CurveId::new(b)).expect("checked above");
        }
        Ok(SurfacePair::from_parts(g, boundary, chains, spec.base_rank))
    }

    pub fn script(&self) -> Vec<ScriptStep> {
        self.file
            .script
            .iter()
            .map(|s| ScriptStep {
                center: match &s.center {
                    CenterSpec::Interior { interior, point } => Center::Interior {
                        curve: CurveId::new(interior),
                        point: point.clone(),
                    },
                    CenterSpec::Node { node } => Center::Node {
                        a: CurveId::new(&node[0]),
                        b: CurveId::new(&node[1]),
                    },
                },
                h_mult: s.h_mult,
                name: s.name.clone(),
            })
            .collect()
    }

    /// Resolves the problem into a marked resolution; concatenations are
    /// folded left to right.
    pub fn resolution(&self) -> Result<MarkedResolution, ResolveError> {
        if self.is_concat() {
            let parts = self.concat_parts()?;
            let mut resolved = Vec::new();
            for p in &parts {
                resolved.push(p.resolution()?);
            }
            let mut iter = resolved.into_iter();
            let mut acc = iter.next().expect("concat validated nonempty");
            for next in iter {
                acc = factor::concat_general_position(&acc, &next)?;
            }
            Ok(acc)
        } else {
            let pair = self.pair()?;
            Ok(MarkedResolution::resolve(pair, self.script(), self.landing_label())?)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

fn sing_weights(sing: &SingSpec) -> Result<(Vec<i64>, Option<Vec<String>>), ProblemError> {
    let (weights, names) = match sing {
        SingSpec::Chain { chain, names } => (chain.clone(), names.clone()),
        SingSpec::Type { nq, names } => {
            let t = HJType::new(nq[0], nq[1])
                .map_err(|e| ProblemError::SchemaError("type".into(), e.to_string()))?;
            (hj::type_to_chain(&t).weights().to_vec(), names.clone())
        }
    };
    if weights.is_empty() || weights.iter().any(|&w| w < 2) {
        return Err(ProblemError::SchemaError(
            "chain".into(),
            "weights must be >= 2 and nonempty".into(),
        ));
    }
    if let Some(ns) = &names {
        if ns.len() != weights.len() {
            return Err(ProblemError::SchemaError(
                "names".into(),
                "one name per chain curve required".into(),
            ));
        }
    }
    Ok((weights, names))
}

fn validate_file(file: &ProblemFile) -> Result<(), ProblemError> {
    match (&file.pair, file.concat.is_empty()) {
        (Some(_), true) => {}
        (None, false) => {
            for part in &file.concat {
                if part.pair.is_none() || part.script.is_empty() {
                    return Err(ProblemError::SchemaError(
                        "concat".into(),
                        "every part needs a pair and a script".into(),
                    ));
                }
                validate_file(part)?;
            }
            return Ok(());
        }
        _ => {
            return Err(ProblemError::SchemaError(
                "pair".into(),
                "exactly one of `pair` or `concat` required".into(),
            ))
        }
    }

    let spec = file.pair.as_ref().unwrap();
    if spec.boundary.is_empty() {
        return Err(ProblemError::SchemaError("boundary".into(), "empty".into()));
    }
    let mut known: BTreeSet<String> = BTreeSet::new();
    for b in &spec.boundary {
        if !known.insert(b.name.clone()) {
            return Err(ProblemError::SchemaError(
                "name".into(),
                format!("duplicate curve name `{}`", b.name),
            ));
        }
    }
    for b in &spec.boundary {
        for (si, sing) in b.sings.iter().enumerate() {
            let (weights, names) = sing_weights(sing)?;
            for (j, _) in weights.iter().enumerate() {
                let name = names
                    .as_ref()
                    .map(|ns| ns[j].clone())
                    .unwrap_or_else(|| format!("{}.s{}.{}", b.name, si + 1, j + 1));
                if !known.insert(name.clone()) {
                    return Err(ProblemError::SchemaError(
                        "names".into(),
                        format!("duplicate curve name `{name}`"),
                    ));
                }
            }
        }
    }
    for [a, b] in &spec.edges {
        for name in [a, b] {
            if !known.contains(name) {
                return Err(ProblemError::UnknownReference(name.clone()));
            }
        }
    }
    for (k, step) in file.script.iter().enumerate() {
        let referenced: Vec<&String> = match &step.center {
            CenterSpec::Interior { interior, .. } => vec![interior],
            CenterSpec::Node { node } => vec![&node[0], &node[1]],
        };
        for name in referenced {
            if !known.contains(name) {
                return Err(ProblemError::UnknownReference(name.clone()));
            }
        }
        let created = step.name.clone().unwrap_or_else(|| format!("E{}", k + 1));
        if !known.insert(created.clone()) {
            return Err(ProblemError::SchemaError(
                "name".into(),
                format!("duplicate curve name `{created}`"),
            ));
        }
    }
    Ok(())
}
