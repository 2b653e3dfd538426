//! Eta quotients `η^X = ∏ η_d^{X_d}` on Γ0(N): cusp orders, holomorphy,
//! primitivity, rescaling, Atkin–Lehner involutions and the valence formula.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arithmetic::{gcd, lcm, odot, phi, psi, rat_int, DivisorLattice, Rational};
use crate::error::{EtaError, Result};
use crate::ordermatrix::{level_matrices, order24_of_eta_d, DivisorVector, ExponentVector};

/// An eta quotient with a fixed ambient level N (its level divides N).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    exponents: ExponentVector,
}

impl EtaQuotient {
    pub fn new(exponents: ExponentVector) -> Self {
        EtaQuotient { exponents }
    }

    /// Builds `∏ η_d^{e}` on Γ0(ambient) from `(d, e)` pairs. Repeated
    /// divisors accumulate.
    pub fn from_pairs(ambient: u64, pairs: &[(u64, i64)]) -> Result<Self> {
        let lattice = DivisorLattice::shared(ambient)?;
        let mut values = vec![BigInt::zero(); lattice.len()];
        for &(d, e) in pairs {
            let i = lattice.index_of(d).ok_or(EtaError::NotDivisor { d, n: ambient })?;
            values[i] += e;
        }
        Ok(EtaQuotient { exponents: DivisorVector::new(lattice, values)? })
    }

    pub fn one(ambient: u64) -> Result<Self> {
        Self::from_pairs(ambient, &[])
    }

    /// Parses `"d:e,d:e"` against an ambient level.
    pub fn parse(spec: &str, ambient: u64) -> Result<Self> {
        let pairs = parse_exponent_map(spec)?;
        Self::from_pairs(ambient, &pairs)
    }

    pub fn exponents(&self) -> &ExponentVector {
        &self.exponents
    }

    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        self.exponents.lattice()
    }

    pub fn ambient_level(&self) -> u64 {
        self.lattice().level()
    }

    pub fn exponent(&self, d: u64) -> BigInt {
        self.exponents.get(d).cloned().unwrap_or_default()
    }

    /// Nonzero exponents in ascending divisor order.
    pub fn support(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.exponents.iter().filter(|(_, e)| !e.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.is_zero()
    }

    /// lcm of the support, 1 for the constant quotient.
    pub fn level(&self) -> u64 {
        self.support().fold(1, |acc, (d, _)| lcm(acc, d))
    }

    /// `k = σ(X)`; the weight is `k/2`.
    pub fn weight2(&self) -> BigInt {
        self.exponents.sigma()
    }

    /// The same quotient viewed on Γ0(m) for a multiple m of its level.
    pub fn on_level(&self, m: u64) -> Result<Self> {
        let level = self.level();
        if m == 0 || !m.is_multiple_of(level) {
            return Err(EtaError::InvalidInput(format!("{m} is not a multiple of the level {level}")));
        }
        let pairs: Vec<(u64, i64)> = self.support().map(|(d, e)| (d, to_i64(e))).collect();
        Self::from_pairs(m, &pairs)
    }

    /// Canonical form: the quotient at its own level.
    pub fn canonical(&self) -> Self {
        self.on_level(self.level()).expect("level divides itself")
    }

    /// `(d, e)` pairs of the support.
    pub fn sparse(&self) -> Vec<(u64, BigInt)> {
        self.support().map(|(d, e)| (d, e.clone())).collect()
    }

    pub fn exponent_map(&self) -> BTreeMap<u64, BigInt> {
        self.support().map(|(d, e)| (d, e.clone())).collect()
    }

    /// `f·g` on a common ambient level.
    pub fn mul(&self, other: &EtaQuotient) -> Result<EtaQuotient> {
        self.combine(other, 1)
    }

    /// `f/g` on a common ambient level.
    pub fn div(&self, other: &EtaQuotient) -> Result<EtaQuotient> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &EtaQuotient, sign: i64) -> Result<EtaQuotient> {
        if self.ambient_level() != other.ambient_level() {
            return Err(EtaError::InvalidInput("ambient levels differ".into()));
        }
        let values = self
            .exponents
            .values()
            .iter()
            .zip(other.exponents.values())
            .map(|(a, b)| a + b * sign)
            .collect();
        Ok(EtaQuotient::new(DivisorVector::new(self.lattice().clone(), values)?))
    }

    /// Renders as `"d:e,d:e"` (empty string for 1).
    pub fn to_spec_string(&self) -> String {
        self.support().map(|(d, e)| format!("{d}:{e}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (d, e) in self.support() {
            let base = if d == 1 { "η".to_string() } else { format!("η_{d}") };
            let mag = e.abs();
            let term = if mag == BigInt::from(1) { base } else { format!("{base}^{mag}") };
            if e.is_positive() {
                num.push(term);
            } else {
                den.push(term);
            }
        }
        let num = if num.is_empty() { "1".to_string() } else { num.join("·") };
        if den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{}", den.join("·"))
        }
    }
}

fn to_i64(e: &BigInt) -> i64 {
    e.to_i64().expect("exponent fits in i64")
}

/// Parses `"d:e,d:e"` into pairs.
pub fn parse_exponent_map(spec: &str) -> Result<Vec<(u64, i64)>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (d, e) = tok.split_once(':').ok_or_else(|| EtaError::Parse(tok.to_string()))?;
            let d = u64::from_str(d.trim()).map_err(|_| EtaError::Parse(tok.to_string()))?;
            let e = i64::from_str(e.trim()).map_err(|_| EtaError::Parse(tok.to_string()))?;
            if d == 0 {
                return Err(EtaError::Parse(tok.to_string()));
            }
            Ok((d, e))
        })
        .collect()
}

/// A cusp `a/b` of Γ0(N), `b = 0` meaning ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub a: i64,
    pub b: u64,
}

impl Cusp {
    pub fn new(a: i64, b: u64) -> Result<Self> {
        if gcd(a.unsigned_abs(), b) != 1 {
            return Err(EtaError::InvalidInput(format!("cusp {a}/{b} is not in lowest terms")));
        }
        Ok(Cusp { a, b })
    }

    pub fn infinity() -> Self {
        Cusp { a: 1, b: 0 }
    }

    /// The representative divisor t = gcd(N, b); ∞ maps to t = N.
    pub fn representative_t(&self, n: u64) -> u64 {
        gcd(n, self.b)
    }
}

/// 24 times the orders at the cusps 1/t, t | N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrders {
    pub orders24: DivisorVector<BigInt>,
}

impl CuspOrders {
    pub fn at(&self, t: u64) -> Option<&BigInt> {
        self.orders24.get(t)
    }

    pub fn order(&self, t: u64) -> Option<Rational> {
        self.at(t).map(|o| Rational::new(o.clone(), BigInt::from(24)))
    }
}

/// `ord_s(f; Γ0(N))` in units of 1.
pub fn order_at_cusp(f: &EtaQuotient, s: Cusp) -> Result<Rational> {
    let n = f.ambient_level();
    let t = s.representative_t(n);
    let m = level_matrices(n)?;
    let i = m.lattice.index_of(t).expect("gcd(N, b) divides N");
    let sum = m
        .order
        .row(i)
        .iter()
        .zip(f.exponents.values())
        .fold(Rational::zero(), |acc, (a, x)| acc + a * Rational::from_integer(x.clone()));
    Ok(sum / rat_int(24))
}

/// Order at `1/t` straight from the cusp-order formula, without matrices.
pub fn order_at_cusp_direct(f: &EtaQuotient, t: u64) -> Rational {
    let n = f.ambient_level();
    f.support()
        .fold(Rational::zero(), |acc, (d, e)| acc + order24_of_eta_d(n, t, d) * Rational::from_integer(e.clone()))
        / rat_int(24)
}

/// `A_N X`, integral by construction.
pub fn order_vector(f: &EtaQuotient) -> Result<CuspOrders> {
    let m = level_matrices(f.ambient_level())?;
    let values = m.order.apply_int(f.exponents.values());
    if let Some(bad) = values.iter().find(|v| !v.is_integer()) {
        return Err(EtaError::Internal(format!("non-integral order {bad} for {f}")));
    }
    let orders = values.into_iter().map(|v| v.to_integer()).collect();
    Ok(CuspOrders { orders24: DivisorVector::new(m.lattice.clone(), orders)? })
}

/// `Â_N X`.
pub fn sym_orders(f: &EtaQuotient) -> Result<DivisorVector<BigInt>> {
    let m = level_matrices(f.ambient_level())?;
    DivisorVector::new(m.lattice.clone(), m.sym_apply(f.exponents.values()))
}

pub fn is_holomorphic(f: &EtaQuotient) -> Result<bool> {
    Ok(sym_orders(f)?.is_nonnegative())
}

/// True iff gcd of the support is 1. Rejects the constant quotient.
pub fn is_primitive(f: &EtaQuotient) -> Result<bool> {
    if f.is_constant() {
        return Err(EtaError::Precondition("primitivity is undefined for the constant quotient".into()));
    }
    Ok(f.support().fold(0, |acc, (d, _)| gcd(acc, d)) == 1)
}

/// `f(νz)`: exponent at ν·d equals X_d, on ambient level ν·N.
pub fn rescale(f: &EtaQuotient, nu: u64) -> Result<EtaQuotient> {
    if nu == 0 {
        return Err(EtaError::InvalidInput("rescaling factor must be positive".into()));
    }
    let pairs: Vec<(u64, i64)> = f.support().map(|(d, e)| (nu * d, to_i64(e))).collect();
    EtaQuotient::from_pairs(nu * f.ambient_level(), &pairs)
}

/// `al_{n,N}`: exponent at n⊙d equals X_d.
pub fn atkin_lehner(f: &EtaQuotient, n: u64) -> Result<EtaQuotient> {
    let lattice = f.lattice().clone();
    if !lattice.is_exact_divisor(n) {
        return Err(EtaError::NotExactDivisor { d: n, n: lattice.level() });
    }
    let mut values = vec![BigInt::zero(); lattice.len()];
    for (d, e) in f.exponents.iter() {
        let target = lattice.index_of(odot(n, d)).expect("E_N acts on D_N");
        values[target] = e.clone();
    }
    Ok(EtaQuotient::new(DivisorVector::new(lattice, values)?))
}

/// The Fricke involution `al_{N,N}`.
pub fn fricke(f: &EtaQuotient) -> EtaQuotient {
    atkin_lehner(f, f.ambient_level()).expect("N exactly divides N")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub ok: bool,
}

/// `∑_t φ(gcd(t, N/t))·ord_{1/t}(f) = k·ψ(N)/24`.
pub fn valence_check(f: &EtaQuotient) -> Result<ValenceCheck> {
    let orders = order_vector(f)?;
    let lattice = f.lattice();
    let lhs = orders
        .orders24
        .values()
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (i, o)| acc + o * phi(lattice.t_prime_at(i)));
    let lhs = Rational::new(lhs, BigInt::from(24));
    let rhs = Rational::new(f.weight2() * psi(f.ambient_level()), BigInt::from(24));
    let ok = lhs == rhs;
    Ok(ValenceCheck { lhs, rhs, ok })
}

/// For each t | N the number φ(gcd(t, N/t)) of inequivalent cusps a/t.
pub fn cusp_representatives(n: u64) -> Result<Vec<(u64, u64)>> {
    let lattice = DivisorLattice::new(n)?;
    Ok(lattice.divisors().iter().zip(lattice.t_primes()).map(|(&t, &tp)| (t, phi(tp))).collect())
}

/// Lowest-terms cusp a/t for every class, a reduced modulo gcd(t, N/t).
pub fn enumerate_cusps(n: u64) -> Result<Vec<Cusp>> {
    let lattice = DivisorLattice::new(n)?;
    let mut out = Vec::new();
    for (&t, &tp) in lattice.divisors().iter().zip(lattice.t_primes()) {
        if t == n {
            out.push(Cusp::infinity());
            continue;
        }
        // classes a mod t' with gcd(a, t) = 1; lift each class to some a coprime to t
        for r in 0..tp {
            if gcd(r, tp) != 1 && tp != 1 {
                continue;
            }
            let a = (0..)
                .map(|k: u64| r + k * tp)
                .find(|&a| a > 0 && gcd(a, t) == 1)
                .expect("Dirichlet: a class coprime to t' contains a unit mod t");
            out.push(Cusp::new(a as i64, t)?);
        }
    }
    Ok(out)
}

impl PartialOrd for EtaQuotient {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EtaQuotient {
    /// Ambient level first, then lexicographic by exponent vector.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ambient_level()
            .cmp(&other.ambient_level())
            .then_with(|| self.exponents.values().cmp(other.exponents.values()))
    }
}

/// The common divisor of the support, or 0 for the constant quotient.
pub fn support_gcd(f: &EtaQuotient) -> u64 {
    f.support().fold(0u64, |acc, (d, _)| acc.gcd(&d))
}
