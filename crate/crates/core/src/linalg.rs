//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and then reduced with Bareiss'
//! fraction-free elimination, so every intermediate entry is an integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense rational matrix, row-major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

/// Scales each row to integers; returns the integer rows and the product of
/// the row multipliers.
fn integer_rows(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            total *= &l;
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    (rows, total)
}

/// Runs Bareiss elimination in place. Returns the rank and, for square
/// full-rank input, the determinant of the integer matrix.
fn bareiss(a: &mut [Vec<BigInt>]) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rank == rows && rows == cols { sign * prev } else { BigInt::zero() };
    (rank, det)
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    let (mut rows, _) = integer_rows(m);
    bareiss(&mut rows).0
}

pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    assert!(m.iter().all(|r| r.len() == m.len()), "determinant of a non-square matrix");
    if m.is_empty() {
        return BigRational::one();
    }
    let (mut rows, scale) = integer_rows(m);
    let (_, det) = bareiss(&mut rows);
    BigRational::new(det, scale)
}

pub fn transpose(m: &[Vec<BigRational>]) -> RationalMatrix {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Cofactor-expansion determinant; exponential, meant as a test oracle only.
pub fn determinant_by_expansion(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigRational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: RationalMatrix = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * determinant_by_expansion(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
