//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use etaq::arithmetic::{DivisorLattice, Rational};
use etaq::ordermatrix::{DivisorVector, ExponentVector};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

/// Gauss–Jordan inverse of a dense n×n rational matrix (row-major).
pub fn gauss_inverse(a: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].clone().recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().flat_map(|row| row[n..].to_vec()).collect())
}

/// 24·ord at 1/t for every t, from Ligozat's formula
/// `N·gcd(d,t)² / (d·gcd(t², N))` per η_d, with its own gcd.
pub fn direct_orders24(x: &[i64], n: u64) -> Vec<Rational> {
    fn g(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { g(b, a % b) }
    }
    let divs: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divs.iter()
        .map(|&t| {
            divs.iter().zip(x).fold(Rational::zero(), |acc, (&d, &e)| {
                let c = g(d, t);
                acc + Rational::new(BigInt::from(n * c * c) * e, BigInt::from(d * g(t * t, n)))
            })
        })
        .collect()
}

/// Every integer X with σ(X) = k, ‖X‖ ≤ bound and all cusp orders ≥ 0, by
/// plain scanning. Only practical for tiny d(N).
pub fn naive_holomorphic(n: u64, k: i64, bound: i64) -> Vec<Vec<i64>> {
    let dim = DivisorLattice::new(n).unwrap().len();
    let mut out = Vec::new();
    let mut x = vec![-bound; dim - 1];
    loop {
        let last = k - x.iter().sum::<i64>();
        let mut full = x.clone();
        full.push(last);
        if full.iter().map(|v| v.abs()).sum::<i64>() <= bound
            && direct_orders24(&full, n).iter().all(|o| *o >= Rational::zero())
        {
            out.push(full);
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                out.sort();
                return out;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
            i += 1;
        }
    }
}

pub fn random_vector<R: Rng>(n: u64, bound: i64, rng: &mut R) -> ExponentVector {
    let lattice = DivisorLattice::shared(n).unwrap();
    let values = (0..lattice.len()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    DivisorVector::new(lattice, values).unwrap()
}

pub fn exponent_ints(x: &ExponentVector) -> Vec<i64> {
    x.values().iter().map(|v| i64::try_from(v).unwrap()).collect()
}
