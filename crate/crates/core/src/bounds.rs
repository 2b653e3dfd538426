//! Quantitative bounds on eta-quotient exponents: the constants `F(N)` and
//! `G(N)`, the hat vectors, the L¹ bound and every intermediate step of its
//! derivation, the `g` function with `C_k`, level admissibility and the
//! column-gap inequalities.
//!
//! Two versions of `G` are carried. [`GVariant::Paper`] is the published
//! constant `(1/ψ(N) + 1/φ(N))·∏_{p²|N}(1 + 1/p)`. [`GVariant::Proof`] is
//! `(∏_{p²|N}(p+1)/(p−1) + ∏_{p²|N}(1 + 1/p))/φ(N)`, the constant the
//! derivation steps actually deliver. The published constant is violated by
//! `η/η_2` on Γ0(2).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::arithmetic::{
    factorize, first_primes, phi, psi, rat_int, serialize_rational, DivisorLattice, Rational,
};
use crate::error::{EtaError, Result};
use crate::ordermatrix::{
    column_analysis, level_matrices, project, reshape, DivisorVector, ExponentVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GVariant {
    Paper,
    Proof,
}

impl fmt::Display for GVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GVariant::Paper => "paper",
            GVariant::Proof => "proof",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub n: u64,
    pub f: Rational,
    pub g_paper: Rational,
    pub g_proof: Rational,
    /// Q_N = { d : d² | N }.
    pub q_n: Vec<u64>,
}

impl BoundParams {
    pub fn g(&self, variant: GVariant) -> &Rational {
        match variant {
            GVariant::Paper => &self.g_paper,
            GVariant::Proof => &self.g_proof,
        }
    }
}

/// (∏_{p²|N}(p+1)/(p−1), ∏_{p²|N}(1+1/p)).
fn square_prime_products(n: u64) -> (Rational, Rational) {
    factorize(n).iter().filter(|&&(_, e)| e >= 2).fold(
        (Rational::one(), Rational::one()),
        |(a, b), &(p, _)| {
            let p = p as i64;
            (a * Rational::new(BigInt::from(p + 1), BigInt::from(p - 1)), b * Rational::new(BigInt::from(p + 1), BigInt::from(p)))
        },
    )
}

pub fn f_of(n: u64) -> Rational {
    let (sq, _) = square_prime_products(n);
    Rational::new(BigInt::from(psi(n)), BigInt::from(phi(n))) * sq
}

pub fn g_of(n: u64, variant: GVariant) -> Rational {
    let (sq_pm, sq_p) = square_prime_products(n);
    let ph = rat_int(phi(n));
    match variant {
        GVariant::Paper => (rat_int(psi(n)).recip() + ph.recip()) * sq_p,
        GVariant::Proof => (sq_pm + sq_p) / ph,
    }
}

pub fn bound_params(n: u64) -> Result<BoundParams> {
    let lattice = DivisorLattice::new(n)?;
    Ok(BoundParams {
        n,
        f: f_of(n),
        g_paper: g_of(n, GVariant::Paper),
        g_proof: g_of(n, GVariant::Proof),
        q_n: lattice.square_divisors(),
    })
}

/// `F_m = F(p_1² ⋯ p_m²)` over the first m primes.
pub fn f_m(m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(EtaError::InvalidInput("m must be positive".into()));
    }
    // F(p²) = ((p+1)/(p−1))² and F is multiplicative
    Ok(first_primes(m).iter().fold(Rational::one(), |acc, &p| {
        let r = Rational::new(BigInt::from(p + 1), BigInt::from(p - 1));
        acc * &r * r
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatVectors {
    pub phi_hat: DivisorVector<Rational>,
    pub beta_hat: DivisorVector<Rational>,
}

/// φ̂(t) = φ(t′)/(t′ψ(N)), β̂(t) = ψ(t′)/(t′φ(N)) with t′ = gcd(t, N/t).
pub fn hat_vectors_closed(n: u64) -> Result<HatVectors> {
    let lattice = DivisorLattice::shared(n)?;
    let (ph, ps) = (phi(n), psi(n));
    let phi_hat = lattice.t_primes().iter().map(|&tp| Rational::new(BigInt::from(phi(tp)), BigInt::from(tp * ps))).collect();
    let beta_hat = lattice.t_primes().iter().map(|&tp| Rational::new(BigInt::from(psi(tp)), BigInt::from(tp * ph))).collect();
    Ok(HatVectors {
        phi_hat: DivisorVector::new(lattice.clone(), phi_hat)?,
        beta_hat: DivisorVector::new(lattice, beta_hat)?,
    })
}

/// (Â_N⁻¹)ᵀ𝟙 and |Â_N⁻¹|ᵀ𝟙 from the assembled inverse.
pub fn hat_vectors_from_matrix(n: u64) -> Result<HatVectors> {
    let m = level_matrices(n)?;
    Ok(HatVectors {
        phi_hat: DivisorVector::new(m.lattice.clone(), m.sym_inv.column_sums())?,
        beta_hat: DivisorVector::new(m.lattice.clone(), m.sym_inv.abs().column_sums())?,
    })
}

/// Closed form, checked against the matrix-derived sums.
pub fn hat_vectors(n: u64) -> Result<HatVectors> {
    let closed = hat_vectors_closed(n)?;
    let derived = hat_vectors_from_matrix(n)?;
    if closed.phi_hat.values() != derived.phi_hat.values() || closed.beta_hat.values() != derived.beta_hat.values() {
        return Err(EtaError::Internal(format!("hat vector closed form disagrees with Â_{n}⁻¹")));
    }
    Ok(closed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

/// One evaluated inequality (or identity) `lhs REL rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub relation: Relation,
    pub holds: bool,
    pub witness: String,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational, witness: impl Into<String>) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        };
        InequalityReport { name: name.into(), lhs, rhs, relation, holds, witness: witness.into() }
    }
}

pub fn witness_of(x: &ExponentVector) -> String {
    let body = x
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(d, e)| format!("{d}:{e}"))
        .collect::<Vec<_>>()
        .join(",");
    format!("N={} X={{{body}}}", x.lattice().level())
}

fn ri(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// `‖X‖ ≤ σ(X)·F(N) + G(N)·‖Â_N X‖₋`.
pub fn lemma1_check(x: &ExponentVector, variant: GVariant) -> Result<InequalityReport> {
    let n = x.lattice().level();
    let m = level_matrices(n)?;
    let y = DivisorVector::new(m.lattice.clone(), m.sym_apply(x.values()))?;
    let rhs = ri(&x.sigma()) * f_of(n) + g_of(n, variant) * ri(&y.neg_norm());
    Ok(InequalityReport::new(format!("lemma1_{variant}"), ri(&x.l1_norm()), Relation::Le, rhs, witness_of(x)))
}

fn l1_rat(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, r| acc + r.abs())
}

fn sum_rat(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, r| acc + r)
}

/// Every intermediate step of the L¹-bound derivation, each evaluated
/// exactly on `x`.
pub fn lemma1_proof_chain_check(x: &ExponentVector) -> Result<Vec<InequalityReport>> {
    let lattice = x.lattice().clone();
    let n = lattice.level();
    let m = level_matrices(n)?;
    let (phn, psn) = (rat_int(phi(n)), rat_int(psi(n)));
    let w = witness_of(x);
    let k = ri(&x.sigma());

    let y = DivisorVector::new(lattice.clone(), m.sym_apply(x.values()))?;
    let y_pos: Vec<Rational> = y.pos_part().values().iter().map(ri).collect();
    let y_neg: Vec<Rational> = y.neg_part().values().iter().map(ri).collect();
    let y_all: Vec<Rational> = y.values().iter().map(ri).collect();
    let inv = &m.sym_inv;
    let inv_abs = inv.abs();

    // y_d for d ∈ Q_N groups |Y_t| over negative Y_t with gcd(t, N/t) = d
    let q_n = lattice.square_divisors();
    let mut y_d: BTreeMap<u64, Rational> = q_n.iter().map(|&d| (d, Rational::zero())).collect();
    for (i, v) in y.values().iter().enumerate() {
        if v.is_negative() {
            *y_d.get_mut(&lattice.t_prime_at(i)).expect("t′ ∈ Q_N") += ri(&-v);
        }
    }
    let phi_over = |d: u64| Rational::new(BigInt::from(phi(d)), BigInt::from(d));
    let psi_over = |d: u64| Rational::new(BigInt::from(psi(d)), BigInt::from(d));
    let sum_phi_term = y_d.iter().fold(Rational::zero(), |acc, (&d, yd)| acc + yd * phi_over(d) / &psn);
    let sum_psi_term = y_d.iter().fold(Rational::zero(), |acc, (&d, yd)| acc + yd * psi_over(d) / &phn);
    let min_phi = q_n.iter().map(|&d| phi_over(d)).min().expect("1 ∈ Q_N");
    let max_psi = q_n.iter().map(|&d| psi_over(d)).max().expect("1 ∈ Q_N");
    let max_ratio = q_n
        .iter()
        .map(|&d| Rational::new(BigInt::from(psi(d)), BigInt::from(phi(d))))
        .max()
        .expect("1 ∈ Q_N");

    let inv_y_pos = inv.apply(&y_pos);
    let inv_y_neg = inv.apply(&y_neg);
    let abs_y_neg: Vec<Rational> = y_neg.iter().map(|v| v.abs()).collect();
    let one_abs_inv_yneg = sum_rat(&inv_abs.apply(&abs_y_neg));
    let one_abs_inv_ypos = sum_rat(&inv_abs.apply(&y_pos));
    let one_y_pos = sum_rat(&y_pos);
    let one_inv_y_pos = sum_rat(&inv_y_pos);
    let k_plus = &k + &sum_phi_term;

    let da4_rhs = rat_int(psi(n)) / &phn * &max_ratio * &k_plus;
    let assembled = y_d.iter().fold(&k * f_of(n), |acc, (&d, yd)| {
        acc + yd * (psi_over(d) / &phn + &max_ratio * phi_over(d) / &phn)
    });

    let mut out = vec![
        InequalityReport::new("y_grouping", sum_rat(&y_d.values().cloned().collect::<Vec<_>>()), Relation::Eq, ri(&y.neg_norm()), &w),
        InequalityReport::new("da1", ri(&x.l1_norm()), Relation::Le, l1_rat(&inv_y_pos) + l1_rat(&inv_y_neg), &w),
        InequalityReport::new("da2_identity", sum_rat(&inv_y_neg), Relation::Eq, -sum_phi_term.clone(), &w),
        InequalityReport::new("da2_bound", l1_rat(&inv_y_neg), Relation::Le, one_abs_inv_yneg.clone(), &w),
        InequalityReport::new("da2_closed", one_abs_inv_yneg, Relation::Eq, sum_psi_term.clone(), &w),
        InequalityReport::new("phi_hat_identity", sum_rat(&inv.apply(&y_all)), Relation::Eq, k.clone(), &w),
        InequalityReport::new("da3_lower", &min_phi / &psn * &one_y_pos, Relation::Le, one_inv_y_pos.clone(), &w),
        InequalityReport::new("da3_identity", one_inv_y_pos, Relation::Eq, k_plus.clone(), &w),
        InequalityReport::new("da3_yplus", one_y_pos.clone(), Relation::Le, &psn / &min_phi * &k_plus, &w),
        InequalityReport::new("da4_abs", l1_rat(&inv_y_pos), Relation::Le, one_abs_inv_ypos.clone(), &w),
        InequalityReport::new("da4_beta", one_abs_inv_ypos, Relation::Le, &max_psi / &phn * &one_y_pos, &w),
        InequalityReport::new("da4_chain", &max_psi / &phn * &one_y_pos, Relation::Le, da4_rhs.clone(), &w),
        InequalityReport::new("da4_combined", l1_rat(&inv_y_pos), Relation::Le, da4_rhs, &w),
        InequalityReport::new("assembled", ri(&x.l1_norm()), Relation::Le, assembled.clone(), &w),
    ];
    let proof_rhs = &k * f_of(n) + g_of(n, GVariant::Proof) * ri(&y.neg_norm());
    out.push(InequalityReport::new("assembled_vs_g_proof", assembled, Relation::Le, proof_rhs, &w));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorollaryKind {
    /// `‖X‖ ≤ k·F(N)` for holomorphic `η^X`.
    Holomorphic,
    /// `‖Â_N X‖₋ ≥ ε/G(N)` when `‖X‖ ≥ k·F(N) + ε`.
    Epsilon(Rational),
    /// `‖Â_N X‖₋ ≥ 2/G(N)` (k = 0) or `|k|(F(N)+1)/G(N)` (k < 0).
    Nonpositive,
}

pub fn corollary_check(x: &ExponentVector, kind: &CorollaryKind, variant: GVariant) -> Result<InequalityReport> {
    let n = x.lattice().level();
    let m = level_matrices(n)?;
    let y = DivisorVector::new(m.lattice.clone(), m.sym_apply(x.values()))?;
    let k = ri(&x.sigma());
    let norm = ri(&x.l1_norm());
    let f = f_of(n);
    let g = g_of(n, variant);
    let w = witness_of(x);
    match kind {
        CorollaryKind::Holomorphic => {
            if !y.is_nonnegative() {
                return Err(EtaError::Precondition(format!("{w} is not holomorphic")));
            }
            Ok(InequalityReport::new("corollary_holomorphic", norm, Relation::Le, k * f, w))
        }
        CorollaryKind::Epsilon(eps) => {
            if !eps.is_positive() || norm < &k * &f + eps {
                return Err(EtaError::Precondition(format!("{w} does not satisfy ‖X‖ ≥ kF(N) + ε with ε = {eps} > 0")));
            }
            Ok(InequalityReport::new(format!("corollary_epsilon_{variant}"), ri(&y.neg_norm()), Relation::Ge, eps / g, w))
        }
        CorollaryKind::Nonpositive => {
            if k.is_positive() || x.is_zero() {
                return Err(EtaError::Precondition(format!("{w} needs σ(X) ≤ 0 and X ≠ 0")));
            }
            let bound = if k.is_zero() { rat_int(2) / &g } else { k.abs() * (f + Rational::one()) / &g };
            Ok(InequalityReport::new(format!("corollary_nonpositive_{variant}"), ri(&y.neg_norm()), Relation::Ge, bound, w))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    /// The displayed inequality must hold for every prime power p^r ‖ M.
    Every,
    /// It suffices that it holds for one prime power p^r ‖ M.
    Some,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GStatus {
    /// Closed form, exact.
    Value,
    /// The scan for the greatest admissible M stopped at the cap; the stored
    /// value is the minimum over the scanned range only (an upper bound for
    /// the uncapped value).
    CapLimited,
    /// No value could be produced (for instance M_n was not found under the
    /// cap, or an earlier entry was missing).
    Untestable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GEntry {
    pub n: i64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub g: Option<Rational>,
    pub status: GStatus,
    pub m_n: Option<u64>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub c_n: Option<Rational>,
    /// Greatest M ≤ cap satisfying the scan inequality.
    pub m_prime_n: Option<u64>,
    pub n_n: Option<u64>,
    /// Comparisons too close to decide in floating point and too large to
    /// settle exactly; counted as satisfied.
    pub undecided: u64,
}

fn serialize_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GConfig {
    pub variant: GVariant,
    pub cap: u64,
    pub quantifier: Quantifier,
}

impl GConfig {
    pub fn new(variant: GVariant, cap: u64) -> Self {
        GConfig { variant, cap, quantifier: Quantifier::Every }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTable {
    pub config: GConfig,
    pub entries: BTreeMap<i64, GEntry>,
}

impl GTable {
    pub fn get(&self, n: i64) -> Option<&GEntry> {
        self.entries.get(&n)
    }

    /// The value at n if it is exact, otherwise `None`.
    pub fn exact(&self, n: i64) -> Option<&Rational> {
        self.entries.get(&n).filter(|e| e.status == GStatus::Value).and_then(|e| e.g.as_ref())
    }
}

fn closed_g(n: i64) -> GEntry {
    let g = if n < 0 { rat_int(2 * n.unsigned_abs()) } else { rat_int(2) };
    GEntry { n, g: Some(g), status: GStatus::Value, m_n: None, c_n: None, m_prime_n: None, n_n: None, undecided: 0 }
}

/// Smallest-prime-factor sieve for the M scan.
struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    fn factor(&self, mut m: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

/// F and G in floating point from a factorization (scan screening only).
fn f_g_float(m: u64, fac: &[(u64, u32)], variant: GVariant) -> (f64, f64, f64) {
    let mut ph = m as f64;
    let mut ps = m as f64;
    let mut sq_pm = 1.0;
    let mut sq_p = 1.0;
    for &(p, e) in fac {
        let pf = p as f64;
        ph *= 1.0 - 1.0 / pf;
        ps *= 1.0 + 1.0 / pf;
        if e >= 2 {
            sq_pm *= (pf + 1.0) / (pf - 1.0);
            sq_p *= 1.0 + 1.0 / pf;
        }
    }
    let f = ps / ph * sq_pm;
    let g = match variant {
        GVariant::Paper => (1.0 / ps + 1.0 / ph) * sq_p,
        GVariant::Proof => (sq_pm + sq_p) / ph,
    };
    (f, g, ph)
}

/// Decides `K / p^(r/(nF + c − 1)) ≥ R` for one prime power p^r ‖ M.
/// Returns `None` when undecidable at reasonable cost.
fn scan_inequality_holds(m: u64, p: u64, r: u32, n: i64, c_n: &Rational, c_f: f64, rhs: &Rational, rhs_f: f64, variant: GVariant) -> Option<bool> {
    let fac = factorize(m);
    let (f, g, ph) = f_g_float(m, &fac, variant);
    let mf = m as f64;
    let k = mf * mf * g / (2.0 * ph) * (n as f64 * (f + 1.0) + c_f);
    let denom = n as f64 * f + c_f - 1.0;
    let e = r as f64 / denom;
    let diff = (k / rhs_f).ln() - e * (p as f64).ln();
    if diff.abs() > 1e-9 * (1.0 + diff.abs().max((k / rhs_f).ln().abs())) {
        return Some(diff >= 0.0);
    }
    // exact: (K/R)^u ≥ p^(r·v) where nF + c − 1 = u/v
    let fr = f_of(m);
    let gr = g_of(m, variant);
    let mm = rat_int(m);
    let kr = &mm * &mm * gr / (rat_int(2) * rat_int(phi(m))) * (rat_int(n) * (&fr + Rational::one()) + c_n);
    let expo = rat_int(n) * fr + c_n - Rational::one();
    let (u, v) = (expo.numer().to_u64()?, expo.denom().to_u64()?);
    let rv = (r as u64).checked_mul(v)?;
    if u > 512 || rv > 4096 {
        return None;
    }
    let lhs = num_traits::pow(kr / rhs, u as usize);
    Some(lhs >= rat_int(num_traits::pow(BigInt::from(p), rv as usize)))
}

/// Builds g(n) for all n up to `max_n` (entries n < 0 only as requested by
/// `min_n`).
pub fn g_table(min_n: i64, max_n: i64, config: GConfig) -> GTable {
    let mut entries = BTreeMap::new();
    for n in min_n.min(0)..=max_n.min(0) {
        entries.insert(n, closed_g(n));
    }
    if max_n >= 1 {
        let sieve = Sieve::new(config.cap.max(2));
        let mut prev = entries.get(&0).cloned().unwrap_or_else(|| closed_g(0));
        for n in 1..=max_n {
            let entry = g_step(n, &prev, &sieve, config);
            prev = entry.clone();
            entries.insert(n, entry);
        }
    }
    entries.retain(|&n, _| n >= min_n);
    GTable { config, entries }
}

fn g_step(n: i64, prev: &GEntry, sieve: &Sieve, config: GConfig) -> GEntry {
    let untestable = GEntry { n, g: None, status: GStatus::Untestable, m_n: None, c_n: None, m_prime_n: None, n_n: None, undecided: 0 };
    let Some(g_prev) = prev.g.clone() else {
        return untestable;
    };
    let variant = config.variant;
    // M_n: least M with G(M) < g(n−1)
    let Some(m_n) = (1..=config.cap).find(|&m| g_of(m, variant) < g_prev) else {
        return untestable;
    };
    let c_n = g_of(m_n, variant);
    let rhs = &g_prev - &c_n;
    let rhs_f = rhs.to_f64().expect("finite");
    let c_f = c_n.to_f64().expect("finite");
    let mut m_prime = None;
    let mut undecided = 0;
    for m in 1..=config.cap {
        let fac = sieve.factor(m);
        let mut decisions = fac.iter().map(|&(p, r)| scan_inequality_holds(m, p, r, n, &c_n, c_f, &rhs, rhs_f, variant));
        let holds = match config.quantifier {
            Quantifier::Every => decisions.all(|d| {
                if d.is_none() {
                    undecided += 1;
                }
                d.unwrap_or(true)
            }),
            Quantifier::Some => fac.is_empty() || decisions.any(|d| {
                if d.is_none() {
                    undecided += 1;
                }
                d.unwrap_or(true)
            }),
        };
        if holds {
            m_prime = Some(m);
        }
    }
    let n_n = m_prime.map_or(m_n, |mp| mp.max(m_n));
    // min over [M_n, N_n] of G, screened in floating point
    let mut best: Option<Rational> = None;
    let mut best_f = f64::INFINITY;
    for m in m_n..=n_n {
        let (_, gf, _) = f_g_float(m, &sieve.factor(m), variant);
        if gf <= best_f * (1.0 + 1e-9) {
            let exact = g_of(m, variant);
            if best.as_ref().is_none_or(|b| &exact < b) {
                best_f = exact.to_f64().expect("finite");
                best = Some(exact);
            }
        }
    }
    // no effective bound on the greatest admissible M is known, so any finite
    // scan is cap-limited
    GEntry {
        n,
        g: best,
        status: GStatus::CapLimited,
        m_n: Some(m_n),
        c_n: Some(c_n),
        m_prime_n: m_prime,
        n_n: Some(n_n),
        undecided,
    }
}

/// Single g(n) entry.
pub fn g_function(n: i64, config: GConfig) -> GEntry {
    g_table(n, n, config).entries.remove(&n).expect("entry computed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CkValue {
    pub k: u64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub value: Option<Rational>,
    pub status: GStatus,
}

/// `C_k = k/(2·g(k−1))`.
pub fn c_k(k: u64, config: GConfig) -> Result<CkValue> {
    if k == 0 {
        return Err(EtaError::InvalidInput("k must be positive".into()));
    }
    let entry = g_function(k as i64 - 1, config);
    let value = entry.g.as_ref().map(|g| rat_int(k) / (rat_int(2) * g));
    Ok(CkValue { k, value, status: entry.status })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeAdmissibility {
    pub p: u64,
    pub r: u32,
    /// δ values passing both conditions.
    pub deltas: Vec<u32>,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub k: u64,
    pub n: u64,
    /// `None` when the verdict depends on a cap-limited `C_k`.
    pub admissible: Option<bool>,
    pub status: GStatus,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub c_k: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub f: Rational,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub prime_power_bound: Option<Rational>,
    pub primes: Vec<PrimeAdmissibility>,
}

/// Whether a simple holomorphic eta quotient of weight k/2 and level N is
/// not ruled out: every P^r ‖ N needs a δ ∈ {1..r} with
/// `P^δ ≤ C_k·F(N)(F(N)+1)²` and `r/δ + 1 ≤ k·F(N)`.
pub fn level_admissible(k: u64, n: u64, config: GConfig) -> Result<Admissibility> {
    let lattice = DivisorLattice::new(n)?;
    let ck = c_k(k, config)?;
    let f = f_of(n);
    let kf = rat_int(k) * &f;
    let Some(c) = ck.value.clone() else {
        return Ok(Admissibility { k, n, admissible: None, status: GStatus::Untestable, c_k: None, f, prime_power_bound: None, primes: vec![] });
    };
    let bound = &c * &f * (&f + Rational::one()) * (&f + Rational::one());
    let primes: Vec<PrimeAdmissibility> = lattice
        .factorization()
        .iter()
        .map(|&(p, r)| {
            let deltas: Vec<u32> = (1..=r)
                .filter(|&delta| {
                    rat_int(num_traits::pow(BigInt::from(p), delta as usize)) <= bound
                        && Rational::new(BigInt::from(r), BigInt::from(delta)) + Rational::one() <= kf
                })
                .collect();
            PrimeAdmissibility { p, r, passes: !deltas.is_empty(), deltas }
        })
        .collect();
    let all = primes.iter().all(|p| p.passes);
    // a smaller C_k only shrinks the admissible set, so `true` survives a cap
    let admissible = match (ck.status, all) {
        (GStatus::Value, v) => Some(v),
        (_, true) => Some(true),
        (_, false) => None,
    };
    Ok(Admissibility { k, n, admissible, status: ck.status, c_k: Some(c), f, prime_power_bound: Some(bound), primes })
}

/// Checks
/// `‖Â_N X‖₋ ≥ p^{r−a}·‖Â_{N′} π_{N,N′}(X)‖₋ − N²/(p^{b−a}φ(N))·‖X‖₊`
/// with `N′ = p^a·N/p^r`.
pub fn lemma3_check(x: &ExponentVector, p: u64, a: u32, b: u32) -> Result<InequalityReport> {
    let lattice = x.lattice();
    let n = lattice.level();
    let r = lattice
        .factorization()
        .iter()
        .find(|&&(q, _)| q == p)
        .map(|&(_, r)| r)
        .ok_or_else(|| EtaError::Precondition(format!("{p} does not divide {n}")))?;
    if a >= b || b > r {
        return Err(EtaError::Precondition(format!("need 0 ≤ a < b ≤ r, got a={a}, b={b}, r={r}")));
    }
    let pr = p.pow(r);
    let cols = column_analysis(&reshape(x, pr)?);
    if let Some(j) = ((a + 1)..b).find(|&j| cols.nonzero_columns[j as usize]) {
        return Err(EtaError::Precondition(format!("column {j} strictly between a={a} and b={b} is nonzero")));
    }
    let n_prime = p.pow(a) * (n / pr);
    let m = level_matrices(n)?;
    let lhs = ri(&DivisorVector::new(lattice.clone(), m.sym_apply(x.values()))?.neg_norm());
    let pi = project(x, n_prime)?;
    let mp = level_matrices(n_prime)?;
    let proj_neg = ri(&DivisorVector::new(mp.lattice.clone(), mp.sym_apply(pi.values()))?.neg_norm());
    let nn = rat_int(n);
    let rhs = rat_int(p.pow(r - a)) * proj_neg
        - &nn * &nn / (rat_int(p.pow(b - a)) * rat_int(phi(n))) * ri(&x.pos_norm());
    Ok(InequalityReport::new(
        "lemma3",
        lhs,
        Relation::Ge,
        rhs,
        format!("{} p={p} a={a} b={b}", witness_of(x)),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lemma4Outcome {
    Checked(InequalityReport),
    /// g(σ(X)) is not exactly known.
    Untestable(String),
}

/// `‖Â_N X‖₋ ≥ g(σ(X))/G(N)` for non-holomorphic X.
pub fn lemma4_check(x: &ExponentVector, table: &GTable) -> Result<Lemma4Outcome> {
    let n = x.lattice().level();
    let m = level_matrices(n)?;
    let y = DivisorVector::new(m.lattice.clone(), m.sym_apply(x.values()))?;
    if y.is_nonnegative() {
        return Err(EtaError::Precondition(format!("{} is holomorphic", witness_of(x))));
    }
    let sigma = x.sigma().to_i64().ok_or_else(|| EtaError::InvalidInput("σ(X) out of range".into()))?;
    let Some(g) = table.exact(sigma) else {
        return Ok(Lemma4Outcome::Untestable(format!("untestable at this σ(X) = {sigma}: g({sigma}) has no exact value")));
    };
    let variant = table.config.variant;
    Ok(Lemma4Outcome::Checked(InequalityReport::new(
        format!("lemma4_{variant}"),
        ri(&y.neg_norm()),
        Relation::Ge,
        g / g_of(n, variant),
        witness_of(x),
    )))
}

/// `N²G(N)/φ(N) ≤ F(N)(F(N)+1)` for both G variants, then the maximal column
/// sum of `Â_N` against `N²/φ(N)` (false for N = 8, 9, 16, …) and against
/// `Nψ(N)/φ(N)`.
pub fn aux_inequalities(n: u64) -> Result<Vec<InequalityReport>> {
    let f = f_of(n);
    let ff = &f * (&f + Rational::one());
    let nn = rat_int(n) * rat_int(n);
    let ph = rat_int(phi(n));
    let w = format!("N={n}");
    let mut out: Vec<InequalityReport> = [GVariant::Paper, GVariant::Proof]
        .into_iter()
        .map(|v| InequalityReport::new(format!("aux_g_{v}"), &nn * g_of(n, v) / &ph, Relation::Le, ff.clone(), &w))
        .collect();
    let max_col = column_sums_direct(n)?.into_iter().max().expect("nonempty");
    out.push(InequalityReport::new("aux_row_sum", rat_int(max_col.clone()), Relation::Le, nn / &ph, &w));
    out.push(InequalityReport::new(
        "aux_row_sum_corrected",
        rat_int(max_col),
        Relation::Le,
        rat_int(n) * rat_int(psi(n)) / ph,
        w,
    ));
    Ok(out)
}

/// Column sums of `Â_N` straight from the cusp-order formula.
fn column_sums_direct(n: u64) -> Result<Vec<BigInt>> {
    let lattice = DivisorLattice::new(n)?;
    let divs = lattice.divisors();
    Ok(divs
        .iter()
        .map(|&d| {
            divs.iter()
                .enumerate()
                .map(|(i, &t)| {
                    let g = crate::arithmetic::gcd(d, t) as u128;
                    let t2 = (t as u128 * t as u128) % (n as u128);
                    let gt = num_integer::Integer::gcd(&(if t2 == 0 { n as u128 } else { t2 }), &(n as u128));
                    BigInt::from(lattice.t_prime_at(i) as u128 * n as u128 * g * g / (d as u128 * gt))
                })
                .sum()
        })
        .collect())
}

/// Uniform random exponents in `[-bound, bound]`.
pub fn random_exponents<R: Rng>(n: u64, bound: i64, rng: &mut R) -> Result<ExponentVector> {
    let lattice = DivisorLattice::shared(n)?;
    let values = (0..lattice.len()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    DivisorVector::new(lattice, values)
}

/// Random `(X, p, a, b)` satisfying the column-gap preconditions of
/// [`lemma3_check`]: the `p`-columns strictly between `a` and `b` vanish.
pub fn random_lemma3_config<R: Rng>(n: u64, bound: i64, rng: &mut R) -> Result<Option<(ExponentVector, u64, u32, u32)>> {
    let lattice = DivisorLattice::shared(n)?;
    let primes = lattice.factorization();
    if primes.is_empty() {
        return Ok(None);
    }
    let (p, r) = primes[rng.gen_range(0..primes.len())];
    let a = rng.gen_range(0..r);
    let b = rng.gen_range(a + 1..=r);
    let values = lattice
        .divisors()
        .iter()
        .map(|&d| {
            let v = DivisorLattice::valuation(d, p);
            if v > a && v < b {
                BigInt::zero()
            } else {
                BigInt::from(rng.gen_range(-bound..=bound))
            }
        })
        .collect();
    Ok(Some((DivisorVector::new(lattice, values)?, p, a, b)))
}
