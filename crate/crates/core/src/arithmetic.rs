//! Exact integers and rationals, the divisor lattice of a level, and the
//! multiplicative functions everything else is built on.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{EtaError, Result};

/// Exact rational number. `Display` prints `p/q`, or `n` when `q = 1`.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Serializes a rational as the string `"p/q"` (or `"n"`).
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Serializes a big integer as a JSON number when it fits in `i64`, else as a
/// decimal string.
pub fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

/// Wrapper that gives a rational the string serialization used in all JSON
/// output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rational);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational(&self.0, s)
    }
}

/// Wrapper for big integers in JSON output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntJson(pub BigInt);

impl Serialize for IntJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bigint(&self.0, s)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// The first `m` primes.
pub fn first_primes(m: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(m);
    let mut c = 2u64;
    while primes.len() < m {
        if primes.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// d1 ⊙ d2 = d1·d2 / gcd(d1, d2)².
pub fn odot(d1: u64, d2: u64) -> u64 {
    let g = gcd(d1, d2);
    (d1 / g) * (d2 / g)
}

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Dedekind's psi function N·∏(1 + 1/p).
pub fn psi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

/// (φ(N), ψ(N)).
pub fn multiplicative_functions(n: u64) -> (u64, u64) {
    (phi(n), psi(n))
}

/// Number of divisors.
pub fn num_divisors(n: u64) -> usize {
    factorize(n).iter().map(|&(_, e)| e as usize + 1).product()
}

/// The divisors of a level `N` together with the exact divisors and the
/// table t ↦ gcd(t, N/t).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorLattice {
    n: u64,
    factorization: Vec<(u64, u32)>,
    divisors: Vec<u64>,
    exact_divisors: Vec<u64>,
    t_prime: Vec<u64>,
}

impl DivisorLattice {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(EtaError::InvalidInput("level must be a positive integer, got 0".into()));
        }
        let factorization = factorize(n);
        let mut divisors = vec![1u64];
        for &(p, e) in &factorization {
            let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
            for &d in &divisors {
                let mut pk = 1;
                for _ in 0..=e {
                    next.push(d * pk);
                    pk *= p;
                }
            }
            divisors = next;
        }
        divisors.sort_unstable();
        let exact_divisors = divisors.iter().copied().filter(|&d| gcd(d, n / d) == 1).collect();
        let t_prime = divisors.iter().map(|&t| gcd(t, n / t)).collect();
        Ok(DivisorLattice { n, factorization, divisors, exact_divisors, t_prime })
    }

    pub fn shared(n: u64) -> Result<Arc<Self>> {
        Self::new(n).map(Arc::new)
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factorization.iter().map(|&(p, _)| p)
    }

    /// Divisors in ascending order.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn exact_divisors(&self) -> &[u64] {
        &self.exact_divisors
    }

    pub fn is_exact_divisor(&self, d: u64) -> bool {
        d != 0 && self.n.is_multiple_of(d) && gcd(d, self.n / d) == 1
    }

    pub fn divides(&self, d: u64) -> bool {
        d != 0 && self.n.is_multiple_of(d)
    }

    /// gcd(t, N/t) for the divisor at `index`.
    pub fn t_prime_at(&self, index: usize) -> u64 {
        self.t_prime[index]
    }

    pub fn t_prime(&self, t: u64) -> Option<u64> {
        self.index_of(t).map(|i| self.t_prime[i])
    }

    pub fn t_primes(&self) -> &[u64] {
        &self.t_prime
    }

    pub fn index_of(&self, d: u64) -> Option<usize> {
        self.divisors.binary_search(&d).ok()
    }

    /// Q_N = { d : d² | N }.
    pub fn square_divisors(&self) -> Vec<u64> {
        self.divisors.iter().copied().filter(|&d| self.n.is_multiple_of(d * d)).collect()
    }

    /// Exponent of `p` in `d`.
    pub fn valuation(d: u64, p: u64) -> u32 {
        let mut d = d;
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        e
    }

    /// Divisors in Kronecker mixed-radix order: ascending primes, with the
    /// exponent of the last prime varying fastest.
    pub fn kronecker_order(&self) -> Vec<u64> {
        let mut order = vec![1u64];
        for &(p, e) in &self.factorization {
            let mut next = Vec::with_capacity(order.len() * (e as usize + 1));
            for &d in &order {
                let mut pk = 1;
                for _ in 0..=e {
                    next.push(d * pk);
                    pk *= p;
                }
            }
            order = next;
        }
        order
    }

    /// `perm[i]` is the canonical (ascending) index of the i-th divisor in
    /// Kronecker order.
    pub fn kronecker_permutation(&self) -> Vec<usize> {
        self.kronecker_order()
            .into_iter()
            .map(|d| self.index_of(d).expect("kronecker order lists divisors of N"))
            .collect()
    }
}

impl fmt::Display for DivisorLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{} = {:?}", self.n, self.divisors)
    }
}

pub fn abs_rat(r: &Rational) -> Rational {
    r.abs()
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn pow_u64(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn rat_pow(r: &Rational, exp: usize) -> Rational {
    num_traits::pow(r.clone(), exp)
}

pub fn max_rat<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Option<Rational> {
    it.into_iter().max().cloned()
}

pub fn sum_rat<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, r| acc + r)
}
