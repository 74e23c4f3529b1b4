//! Hirzebruch-Jung singularity arithmetic.
//!
//! A cyclic quotient singularity of type `A_{n,q}` resolves into a chain of
//! rational curves with self-intersections `-a_1, ..., -a_s`, where
//! `n/q = a_1 - 1/(a_2 - 1/(...))`.  Weights are always listed starting from
//! the curve that meets the strict transform of the boundary.

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::linalg;
use crate::rational::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HjError {
    #[error("chain weights must all be >= 2 and nonempty")]
    InvalidChain,
    #[error("type requires n >= 2, 0 < q < n, gcd(n,q) = 1")]
    InvalidType,
    #[error("discrepancy system is singular")]
    SingularSystem,
}

/// Resolution chain `[a_1..a_s]`, each `a_j >= 2`; `a_1` meets the boundary.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HJChain {
    weights: Vec<i64>,
}

impl HJChain {
    pub fn new(weights: Vec<i64>) -> Result<Self, HjError> {
        if weights.is_empty() || weights.iter().any(|&a| a < 2) {
            return Err(HjError::InvalidChain);
        }
        Ok(HJChain { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Singularity type `A_{n,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HJType {
    pub n: i64,
    pub q: i64,
}

impl HJType {
    pub fn new(n: i64, q: i64) -> Result<Self, HjError> {
        if n < 2 || q <= 0 || q >= n || gcd(n, q) != 1 {
            return Err(HjError::InvalidType);
        }
        Ok(HJType { n, q })
    }
}

impl std::fmt::Display for HJType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "A_{{{},{}}}", self.n, self.q)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Evaluates the continued fraction `a_1 - 1/(a_2 - ...)` from the
/// boundary-adjacent end and returns `(n, q)`.
pub fn chain_to_type(chain: &HJChain) -> HJType {
    let mut x = Rat::zero();
    for &a in chain.weights().iter().rev() {
        if x.is_zero() {
            x = rat(a);
        } else {
            x = rat(a) - x.recip();
        }
    }
    let n = big_to_i64(x.numer());
    let q = big_to_i64(x.denom());
    HJType { n, q }
}

fn big_to_i64(b: &BigInt) -> i64 {
    use num::ToPrimitive;
    b.to_i64().expect("HJ type out of i64 range")
}

/// Expands `n/q` into the unique continued-fraction weight list with every
/// entry at least 2.
pub fn type_to_chain(t: &HJType) -> HJChain {
    let (mut n, mut q) = (t.n, t.q);
    let mut weights = Vec::new();
    while q > 0 {
        let a = n.div_euclid(q) + i64::from(n.rem_euclid(q) != 0);
        weights.push(a);
        let next_q = a * q - n;
        n = q;
        q = next_q;
    }
    HJChain { weights }
}

/// Log discrepancies `a_1..a_s` of the chain, regarded as attached at its
/// `a_1`-end to one boundary curve.  Unique solution of the tridiagonal
/// system `sum_j a_j (C_j.C_k) = -2 + deg(C_k)` where the degree counts the
/// boundary curve.
pub fn chain_log_discrepancies(chain: &HJChain) -> Result<Vec<Rat>, HjError> {
    let s = chain.len();
    let mut m = vec![vec![Rat::zero(); s]; s];
    let mut rhs = vec![Rat::zero(); s];
    for k in 0..s {
        m[k][k] = rat(-chain.weights()[k]);
        if k > 0 {
            m[k][k - 1] = Rat::one();
        }
        if k + 1 < s {
            m[k][k + 1] = Rat::one();
        }
        // degree in the full boundary graph: the boundary curve at the
        // a_1-end plus chain neighbors, always 1 + [has right neighbor]
        let deg = 1 + i64::from(k + 1 < s);
        rhs[k] = rat(-2 + deg);
    }
    linalg::solve(&m, &rhs).map_err(|_| HjError::SingularSystem)
}

/// Determinant of the chain's intersection matrix; equals `(-1)^s n`.
pub fn chain_determinant(chain: &HJChain) -> Rat {
    let s = chain.len();
    let mut m = vec![vec![Rat::zero(); s]; s];
    for k in 0..s {
        m[k][k] = rat(-chain.weights()[k]);
        if k > 0 {
            m[k][k - 1] = Rat::one();
        }
        if k + 1 < s {
            m[k][k + 1] = Rat::one();
        }
    }
    linalg::determinant(&m)
}
