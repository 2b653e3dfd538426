//! Lower-triangular column Hermite normal form over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{EtaError, Result};

/// `H = A·U` for a unimodular `U`, with `H` lower triangular, a positive
/// diagonal and `0 ≤ H[i][j] < H[i][i]` for `j < i`. The columns of `H`
/// generate the same lattice as those of `A`. `A` (row-major) must be square
/// and nonsingular.
pub fn hermite_lower(a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(EtaError::InvalidInput("matrix is not square".into()));
    }
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            if h[i][j].is_zero() {
                continue;
            }
            let (a_ii, a_ij) = (h[i][i].clone(), h[i][j].clone());
            let e = a_ii.extended_gcd(&a_ij);
            let (p, q) = (&a_ii / &e.gcd, &a_ij / &e.gcd);
            for row in h.iter_mut().skip(i) {
                let (ci, cj) = (row[i].clone(), row[j].clone());
                row[i] = &e.x * &ci + &e.y * &cj;
                row[j] = &p * &cj - &q * &ci;
            }
        }
        if h[i][i].is_zero() {
            return Err(EtaError::InvalidInput("matrix is singular".into()));
        }
        if h[i][i].is_negative() {
            for row in h.iter_mut().skip(i) {
                row[i] = -row[i].clone();
            }
        }
    }
    for r in 1..n {
        for j in 0..r {
            let q = h[r][j].div_floor(&h[r][r]);
            if !q.is_zero() {
                for rr in r..n {
                    let delta = &q * &h[rr][r];
                    h[rr][j] -= delta;
                }
            }
        }
    }
    Ok(h)
}

/// Solves `H z = x` by forward substitution; `None` if `x ∉ Hℤⁿ`.
pub fn lattice_coordinates(h: &[Vec<BigInt>], x: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut z: Vec<BigInt> = Vec::with_capacity(x.len());
    for (i, xi) in x.iter().enumerate() {
        let c: BigInt = (0..i).map(|j| &h[i][j] * &z[j]).sum();
        let (q, r) = (xi - c).div_rem(&h[i][i]);
        if !r.is_zero() {
            return None;
        }
        z.push(q);
    }
    Some(z)
}
