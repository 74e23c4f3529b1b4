//! Exact linear algebra over the rationals: Gaussian elimination,
//! determinants, and negative-definiteness of symmetric matrices.

use num::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("linear system is singular")]
    SingularSystem,
    #[error("matrix is not negative definite")]
    NotNegativeDefinite,
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve(m: &[Vec<Rat>], rhs: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n) && rhs.len() == n);
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] = &a[r][c] - delta;
            }
            let delta = &f * &b[col];
            b[r] = &b[r] - delta;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc = acc - &a[row][c] * &x[c];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Determinant by fraction-free-ish elimination over `Rat`.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::from_integer(1.into());
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = det * &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] = &a[r][c] - delta;
            }
        }
    }
    det
}

/// A symmetric matrix is negative definite iff the k-th leading principal
/// minor has sign `(-1)^k` for every k.
pub fn is_negative_definite(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    for k in 1..=n {
        let sub: Vec<Vec<Rat>> = (0..k).map(|r| m[r][..k].to_vec()).collect();
        let d = determinant(&sub);
        let ok = if k % 2 == 0 { d.is_positive() } else { d.is_negative() };
        if !ok {
            return false;
        }
    }
    true
}
