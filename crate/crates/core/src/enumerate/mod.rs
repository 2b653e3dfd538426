//! Exhaustive enumeration of holomorphic eta quotients of weight k/2 on
//! Γ0(N), factorization search, and the primitive / quasi-irreducible /
//! simple classification.
//!
//! Two independent strategies are provided. The order strategy walks the
//! nonnegative solutions `x` of `∑_t φ(gcd(t, N/t))·x_t = k·ψ(N)` restricted
//! to the lattice `A_N ℤⁿ` (coordinates fixed one at a time against the
//! Hermite normal form of `A_N`) and inverts each through `Â_N⁻¹·D`. The box
//! strategy walks integer `X` with `σ(X) = k` and `‖X‖ ≤ ⌊kF(N)⌋`, bounding
//! each coordinate by exact Fourier–Motzkin projections of `Â_N X ≥ 0`, and
//! tests `Â_N X ≥ 0` at every leaf. It never touches `Â_N⁻¹`.

pub mod fm;
pub mod hnf;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::arithmetic::{phi, psi, rat_int, serialize_bigint, DivisorLattice, IntJson, Rational};
use crate::bounds::f_of;
use crate::error::{EtaError, Result};
use crate::etaquotient::{is_primitive, order_vector, EtaQuotient};
use crate::ordermatrix::{level_matrices, DivisorVector, LevelMatrices};

use fm::{coordinate_range, project_prefixes, to_fast, FastRow, Row};
use hnf::hermite_lower;

/// Default hard cap on emitted solutions.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Order,
    Box,
    Both,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    /// Nonnegative solutions of the weighted order equation, before the
    /// lattice filter (order strategy only).
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub knapsack_solutions: Option<BigInt>,
    /// Leaves reached by the search.
    pub candidates: u64,
    /// Leaves failing the final integrality or holomorphy test.
    pub rejected: u64,
    /// Interior search nodes.
    pub nodes: u64,
}

fn serialize_opt_bigint<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_bigint(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub level: u64,
    pub weight2: i64,
    pub strategy: Strategy,
    /// Sorted lexicographically by exponent vector.
    pub quotients: Vec<EtaQuotient>,
    pub truncated: bool,
    pub stats: EnumerationStats,
}

fn overflow() -> EtaError {
    EtaError::Internal("enumeration arithmetic exceeded i128".into())
}

fn to_i128(x: &BigInt) -> Result<i128> {
    i128::try_from(x).map_err(|_| overflow())
}

/// Number of nonnegative integer solutions of `∑ w_i x_i = target`.
pub fn count_knapsack(weights: &[u64], target: i64) -> BigInt {
    if target < 0 {
        return BigInt::zero();
    }
    let target = target as usize;
    let mut count = vec![BigInt::zero(); target + 1];
    count[0] = BigInt::from(1);
    for &w in weights {
        let w = w as usize;
        for s in w..=target {
            let add = count[s - w].clone();
            count[s] += add;
        }
    }
    count.swap_remove(target)
}

/// Depth-first walk over `x ≥ 0` (optionally `x ≤ upper`) with
/// `∑ w_i x_i = target` and `x ∈ Hℤⁿ`.
struct LatticeWalk {
    w: Vec<i128>,
    h: Vec<Vec<i128>>,
    upper: Option<Vec<i128>>,
    suffix_gcd: Vec<i128>,
    suffix_cap: Option<Vec<i128>>,
    x: Vec<i128>,
    z: Vec<i128>,
    nodes: u64,
}

impl LatticeWalk {
    fn new(weights: &[u64], order: &LevelMatrices, upper: Option<Vec<i128>>) -> Result<Self> {
        let n = weights.len();
        let a: Vec<Vec<BigInt>> = order
            .order
            .rows()
            .map(|row| {
                row.iter()
                    .map(|v| if v.is_integer() { Ok(v.to_integer()) } else { Err(EtaError::Internal("A_N is not integral".into())) })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let h = hermite_lower(&a)?
            .iter()
            .map(|row| row.iter().map(to_i128).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let w: Vec<i128> = weights.iter().map(|&v| v as i128).collect();
        let mut suffix_gcd = vec![0i128; n + 1];
        for i in (0..n).rev() {
            suffix_gcd[i] = suffix_gcd[i + 1].gcd(&w[i]);
        }
        let suffix_cap = match &upper {
            Some(u) => {
                let mut cap = vec![0i128; n + 1];
                for i in (0..n).rev() {
                    cap[i] = w[i].checked_mul(u[i]).and_then(|v| v.checked_add(cap[i + 1])).ok_or_else(overflow)?;
                }
                Some(cap)
            }
            None => None,
        };
        Ok(LatticeWalk { w, h, upper, suffix_gcd, suffix_cap, x: vec![0; n], z: vec![0; n], nodes: 0 })
    }

    fn congruence(&self, i: usize) -> Result<i128> {
        let mut c: i128 = 0;
        for j in 0..i {
            c = self.h[i][j].checked_mul(self.z[j]).and_then(|v| v.checked_add(c)).ok_or_else(overflow)?;
        }
        Ok(c)
    }

    fn walk(&mut self, i: usize, remaining: i128, emit: &mut dyn FnMut(&[i128]) -> Result<ControlFlow<()>>) -> Result<ControlFlow<()>> {
        let n = self.w.len();
        let c = self.congruence(i)?;
        let hi_ = self.h[i][i];
        if i + 1 == n {
            if remaining % self.w[i] != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            let xi = remaining / self.w[i];
            if self.upper.as_ref().is_some_and(|u| xi > u[i]) || (xi - c).rem_euclid(hi_) != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            self.x[i] = xi;
            self.z[i] = (xi - c) / hi_;
            return emit(&self.x);
        }
        self.nodes += 1;
        let mut max_x = remaining / self.w[i];
        if let Some(u) = &self.upper {
            max_x = max_x.min(u[i]);
        }
        let mut min_x = 0;
        if let Some(cap) = &self.suffix_cap {
            // the rest can absorb at most cap[i+1]
            let need = remaining - cap[i + 1];
            if need > 0 {
                min_x = (need + self.w[i] - 1) / self.w[i];
            }
        }
        if min_x > max_x {
            return Ok(ControlFlow::Continue(()));
        }
        let start = min_x + (c - min_x).rem_euclid(hi_);
        let mut xi = start;
        while xi <= max_x {
            let rest = remaining - self.w[i] * xi;
            if rest % self.suffix_gcd[i + 1] == 0 {
                self.x[i] = xi;
                self.z[i] = (xi - c) / hi_;
                if self.walk(i + 1, rest, emit)?.is_break() {
                    return Ok(ControlFlow::Break(()));
                }
            }
            xi += hi_;
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn cusp_weights(lattice: &DivisorLattice) -> Vec<u64> {
    lattice.t_primes().iter().map(|&tp| phi(tp)).collect()
}

/// `X = Â_N⁻¹·D·x`, `None` when not integral.
fn invert_orders(m: &LevelMatrices, x: &[i128]) -> Option<Vec<BigInt>> {
    let dx: Vec<Rational> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| rat_int(BigInt::from(v) * m.lattice.t_prime_at(i)))
        .collect();
    m.sym_inv
        .apply(&dx)
        .into_iter()
        .map(|r| if r.is_integer() { Some(r.to_integer()) } else { None })
        .collect()
}

/// All holomorphic eta quotients of weight k/2 on Γ0(N) via order vectors.
pub fn enumerate_order_vectors(n: u64, k: i64, cap: usize) -> Result<Enumeration> {
    let m = level_matrices(n)?;
    let lattice = m.lattice.clone();
    let weights = cusp_weights(&lattice);
    let target = k.checked_mul(psi(n) as i64).ok_or_else(overflow)?;
    let mut stats = EnumerationStats { knapsack_solutions: Some(count_knapsack(&weights, target)), ..Default::default() };
    let mut found: Vec<EtaQuotient> = Vec::new();
    let mut truncated = false;
    if target >= 0 {
        let mut walk = LatticeWalk::new(&weights, &m, None)?;
        let mut emit = |x: &[i128]| -> Result<ControlFlow<()>> {
            stats.candidates += 1;
            match invert_orders(&m, x) {
                Some(xs) => {
                    if found.len() >= cap {
                        truncated = true;
                        return Ok(ControlFlow::Break(()));
                    }
                    found.push(EtaQuotient::new(DivisorVector::new(lattice.clone(), xs)?));
                }
                None => stats.rejected += 1,
            }
            Ok(ControlFlow::Continue(()))
        };
        let _ = walk.walk(0, target as i128, &mut emit)?;
        stats.nodes = walk.nodes;
    }
    found.sort();
    Ok(Enumeration { level: n, weight2: k, strategy: Strategy::Order, quotients: found, truncated, stats })
}

/// All integer X with σ(X) = k, ‖X‖ ≤ ⌊kF(N)⌋ and Â_N X ≥ 0.
pub fn enumerate_exponent_box(n: u64, k: i64, cap: usize) -> Result<Enumeration> {
    let m = level_matrices(n)?;
    let lattice = m.lattice.clone();
    let dim = lattice.len();
    let mut stats = EnumerationStats::default();
    let mut found: Vec<EtaQuotient> = Vec::new();
    let mut truncated = false;
    let bound = (rat_int(k) * f_of(n)).floor().to_integer();
    let done = |found: Vec<EtaQuotient>, truncated, stats| {
        Ok(Enumeration { level: n, weight2: k, strategy: Strategy::Box, quotients: found, truncated, stats })
    };
    if bound.is_negative() {
        return done(found, truncated, stats);
    }
    let b = to_i128(&bound)?;
    let sym: Vec<Vec<BigInt>> = m.sym.rows().map(|row| row.iter().map(|v| v.to_integer()).collect()).collect();
    let sym_fast: Vec<Vec<i128>> = sym.iter().map(|row| row.iter().map(to_i128).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let kk = BigInt::from(k);

    let check_leaf = |xs: &[i128]| -> bool {
        sym_fast.iter().all(|row| row.iter().zip(xs).map(|(a, x)| a * x).sum::<i128>() >= 0)
    };
    if dim == 1 {
        let xs = [k as i128];
        stats.candidates = 1;
        if (k as i128).abs() <= b && check_leaf(&xs) {
            found.push(EtaQuotient::new(DivisorVector::new(lattice, vec![kk])?));
        } else {
            stats.rejected = 1;
        }
        return done(found, truncated, stats);
    }

    // free variables v_0..v_{dim-2}; X_{dim-1} = k − ∑ v
    let nv = dim - 1;
    let last = dim - 1;
    let mut rows: Vec<Row> = Vec::new();
    for row in &sym {
        let a = (0..nv).map(|j| &row[j] - &row[last]).collect();
        rows.push(Row::new(a, &row[last] * &kk, rows.len()));
    }
    for j in 0..nv {
        let mut a = vec![BigInt::zero(); nv];
        a[j] = BigInt::from(1);
        rows.push(Row::new(a.clone(), bound.clone(), rows.len()));
        a[j] = BigInt::from(-1);
        rows.push(Row::new(a, bound.clone(), rows.len()));
    }
    rows.push(Row::new(vec![BigInt::from(-1); nv], &kk + &bound, rows.len()));
    rows.push(Row::new(vec![BigInt::from(1); nv], &bound - &kk, rows.len()));
    let proj = project_prefixes(rows, nv);
    if proj.infeasible {
        return done(found, truncated, stats);
    }
    let levels = to_fast(&proj.levels)?;

    struct BoxWalk<'a> {
        levels: &'a [Vec<FastRow>],
        b: i128,
        k: i128,
        v: Vec<i128>,
    }
    fn walk(
        s: &mut BoxWalk<'_>,
        j: usize,
        l1: i128,
        stats: &mut EnumerationStats,
        leaf: &mut dyn FnMut(&[i128], &mut EnumerationStats) -> Result<ControlFlow<()>>,
    ) -> Result<ControlFlow<()>> {
        let nv = s.levels.len();
        if j == nv {
            let tail = s.k - s.v.iter().sum::<i128>();
            if l1 + tail.abs() > s.b {
                return Ok(ControlFlow::Continue(()));
            }
            let mut xs = s.v.clone();
            xs.push(tail);
            return leaf(&xs, stats);
        }
        stats.nodes += 1;
        let (lo, hi) = coordinate_range(&s.levels[j], &s.v[..j]).ok_or_else(overflow)?;
        let slack = s.b - l1;
        let (lo, hi) = (lo.max(-slack), hi.min(slack));
        for vj in lo..=hi {
            s.v.push(vj);
            let flow = walk(s, j + 1, l1 + vj.abs(), stats, leaf)?;
            s.v.pop();
            if flow.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    let mut state = BoxWalk { levels: &levels, b, k: k as i128, v: Vec::with_capacity(nv) };
    let mut leaf = |xs: &[i128], stats: &mut EnumerationStats| -> Result<ControlFlow<()>> {
        stats.candidates += 1;
        if !check_leaf(xs) {
            stats.rejected += 1;
            return Ok(ControlFlow::Continue(()));
        }
        if found.len() >= cap {
            truncated = true;
            return Ok(ControlFlow::Break(()));
        }
        found.push(EtaQuotient::new(DivisorVector::new(lattice.clone(), xs.iter().map(|&v| BigInt::from(v)).collect())?));
        Ok(ControlFlow::Continue(()))
    };
    let _ = walk(&mut state, 0, 0, &mut stats, &mut leaf)?;
    found.sort();
    done(found, truncated, stats)
}

/// Runs one strategy, or both with a set-equality check.
pub fn enumerate(n: u64, k: i64, strategy: Strategy, cap: usize) -> Result<Enumeration> {
    match strategy {
        Strategy::Order => enumerate_order_vectors(n, k, cap),
        Strategy::Box => enumerate_exponent_box(n, k, cap),
        Strategy::Both => {
            let a = enumerate_order_vectors(n, k, cap)?;
            let b = enumerate_exponent_box(n, k, cap)?;
            if !a.truncated && !b.truncated && a.quotients != b.quotients {
                return Err(EtaError::Internal(format!(
                    "strategies disagree on N={n}, k={k}: {} vs {} quotients",
                    a.quotients.len(),
                    b.quotients.len()
                )));
            }
            Ok(Enumeration {
                strategy: Strategy::Both,
                truncated: a.truncated || b.truncated,
                stats: EnumerationStats {
                    knapsack_solutions: a.stats.knapsack_solutions.clone(),
                    candidates: a.stats.candidates + b.stats.candidates,
                    rejected: a.stats.rejected + b.stats.rejected,
                    nodes: a.stats.nodes + b.stats.nodes,
                },
                ..a
            })
        }
    }
}

/// `(2kF(N))^{d(N)}`.
pub fn count_bound(n: u64, k: i64) -> Result<Rational> {
    let lattice = DivisorLattice::new(n)?;
    Ok(num_traits::pow(rat_int(2 * k) * f_of(n), lattice.len()))
}

/// Search over holomorphic divisors g of f on Γ0(M).
fn factor_search(f: &EtaQuotient, m: u64, first_only: bool) -> Result<Vec<(EtaQuotient, EtaQuotient)>> {
    let level = f.level();
    if m == 0 || !m.is_multiple_of(level) {
        return Err(EtaError::NotDivisor { d: level, n: m });
    }
    let fm = f.on_level(m)?;
    let orders = order_vector(&fm)?.orders24;
    if orders.values().iter().any(|v| v.is_negative()) {
        return Err(EtaError::Precondition(format!("{f} is not holomorphic on Γ0({m})")));
    }
    let k = fm.weight2().to_i64().ok_or_else(overflow)?;
    let mats = level_matrices(m)?;
    let lattice = mats.lattice.clone();
    let weights = cusp_weights(&lattice);
    let upper: Vec<i128> = orders.values().iter().map(to_i128).collect::<Result<_>>()?;
    let mut pairs: BTreeSet<(EtaQuotient, EtaQuotient)> = BTreeSet::new();
    for j in 1..k {
        let mut walk = LatticeWalk::new(&weights, &mats, Some(upper.clone()))?;
        let target = (j as i128) * psi(m) as i128;
        let mut emit = |y: &[i128]| -> Result<ControlFlow<()>> {
            let Some(xs) = invert_orders(&mats, y) else {
                return Ok(ControlFlow::Continue(()));
            };
            let g = EtaQuotient::new(DivisorVector::new(lattice.clone(), xs)?);
            let h = fm.div(&g)?;
            let pair = if g <= h { (g, h) } else { (h, g) };
            pairs.insert(pair);
            Ok(if first_only { ControlFlow::Break(()) } else { ControlFlow::Continue(()) })
        };
        if walk.walk(0, target, &mut emit)?.is_break() && first_only {
            break;
        }
    }
    Ok(pairs.into_iter().collect())
}

/// All unordered pairs (g, h) of nonconstant holomorphic eta quotients on
/// Γ0(M) with g·h = f, each pair listed once with g ≤ h.
pub fn factorizations_on(f: &EtaQuotient, m: u64) -> Result<Vec<(EtaQuotient, EtaQuotient)>> {
    factor_search(f, m, false)
}

/// Some factorization of f on Γ0(M), if any.
pub fn first_factorization(f: &EtaQuotient, m: u64) -> Result<Option<(EtaQuotient, EtaQuotient)>> {
    Ok(factor_search(f, m, true)?.into_iter().next())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub quotient: EtaQuotient,
    pub orders24: DivisorVector<BigInt>,
    pub level: u64,
    pub primitive: bool,
    pub quasi_irreducible: bool,
    pub simple: bool,
    /// A factorization (g, h) at the quotient's own level.
    pub witness: Option<(EtaQuotient, EtaQuotient)>,
}

impl CatalogEntry {
    pub fn new(quotient: EtaQuotient) -> Result<Self> {
        let orders24 = order_vector(&quotient)?.orders24;
        let level = quotient.level();
        if quotient.is_constant() {
            return Ok(CatalogEntry { quotient, orders24, level, primitive: false, quasi_irreducible: false, simple: false, witness: None });
        }
        let primitive = is_primitive(&quotient)?;
        let witness = first_factorization(&quotient.canonical(), level)?;
        let quasi_irreducible = witness.is_none();
        Ok(CatalogEntry { quotient, orders24, level, primitive, quasi_irreducible, simple: primitive && quasi_irreducible, witness })
    }

    /// The deduplication key: the exponent vector at the quotient's own level.
    pub fn key(&self) -> EtaQuotient {
        self.quotient.canonical()
    }
}

/// Ordered `{"d": e}` map of nonzero exponents.
struct ExponentMap<'a>(&'a EtaQuotient);

impl Serialize for ExponentMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let support: Vec<(u64, &BigInt)> = self.0.support().collect();
        let mut map = s.serialize_map(Some(support.len()))?;
        for (d, e) in support {
            map.serialize_entry(&d.to_string(), &IntJson(e.clone()))?;
        }
        map.end()
    }
}

/// Ordered `{"t": value}` map over all divisors.
struct DivisorMap<'a>(&'a DivisorVector<BigInt>);

impl Serialize for DivisorMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (t, v) in self.0.iter() {
            map.serialize_entry(&t.to_string(), &IntJson(v.clone()))?;
        }
        map.end()
    }
}

pub fn exponent_map_json(f: &EtaQuotient) -> serde_json::Result<String> {
    serde_json::to_string(&ExponentMap(f))
}

struct Witness<'a>(&'a (EtaQuotient, EtaQuotient));

impl Serialize for Witness<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 2)?;
        st.serialize_field("g", &ExponentMap(&self.0 .0))?;
        st.serialize_field("h", &ExponentMap(&self.0 .1))?;
        st.end()
    }
}

impl Serialize for CatalogEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = if self.witness.is_some() { 9 } else { 8 };
        let mut st = s.serialize_struct("CatalogEntry", fields)?;
        st.serialize_field("N", &self.quotient.ambient_level())?;
        st.serialize_field("weight2", &IntJson(self.quotient.weight2()))?;
        st.serialize_field("exponents", &ExponentMap(&self.quotient))?;
        st.serialize_field("orders24", &DivisorMap(&self.orders24))?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("primitive", &self.primitive)?;
        st.serialize_field("quasi_irreducible", &self.quasi_irreducible)?;
        st.serialize_field("simple", &self.simple)?;
        if let Some(w) = &self.witness {
            st.serialize_field("witness", &Witness(w))?;
        }
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub level: u64,
    pub weight2: i64,
    pub entries: Vec<CatalogEntry>,
    pub truncated: bool,
    pub stats: EnumerationStats,
}

impl Catalog {
    pub fn simple(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.simple)
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self, simple_only: bool) -> serde_json::Result<String> {
        let mut out = String::new();
        for e in self.entries.iter().filter(|e| !simple_only || e.simple) {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }
}

/// Enumerates and annotates every quotient, in lexicographic order.
pub fn classify(n: u64, k: i64, strategy: Strategy, cap: usize) -> Result<Catalog> {
    let e = enumerate(n, k, strategy, cap)?;
    let entries = e.quotients.into_iter().map(CatalogEntry::new).collect::<Result<Vec<_>>>()?;
    Ok(Catalog { level: n, weight2: k, entries, truncated: e.truncated, stats: e.stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(n: u64, pairs: &[(u64, i64)]) -> EtaQuotient {
        EtaQuotient::from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn level_two_weight_one() {
        let want = vec![eq(2, &[(1, -1), (2, 2)]), eq(2, &[(2, 1)]), eq(2, &[(1, 1)]), eq(2, &[(1, 2), (2, -1)])];
        for s in [Strategy::Order, Strategy::Box, Strategy::Both] {
            let e = enumerate(2, 1, s, DEFAULT_CAP).unwrap();
            assert_eq!(e.quotients, want, "{s:?}");
            assert!(!e.truncated);
        }
        let e = enumerate_order_vectors(2, 1, DEFAULT_CAP).unwrap();
        assert_eq!(e.stats.knapsack_solutions, Some(BigInt::from(4)));
        assert_eq!(e.stats.rejected, 0);
    }

    #[test]
    fn level_three_weight_one() {
        let e = enumerate_order_vectors(3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(e.quotients, vec![eq(3, &[(3, 1)]), eq(3, &[(1, 1)])]);
        assert_eq!(e.stats.knapsack_solutions, Some(BigInt::from(5)));
        assert_eq!(enumerate_exponent_box(3, 1, DEFAULT_CAP).unwrap().quotients, e.quotients);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(enumerate_order_vectors(1, 0, 10).unwrap().quotients, vec![eq(1, &[])]);
        assert_eq!(enumerate_exponent_box(1, 0, 10).unwrap().quotients, vec![eq(1, &[])]);
        assert_eq!(enumerate_exponent_box(1, 2, 10).unwrap().quotients, vec![eq(1, &[(1, 2)])]);
        assert!(enumerate_order_vectors(6, -1, 10).unwrap().quotients.is_empty());
        assert!(enumerate_exponent_box(6, -1, 10).unwrap().quotients.is_empty());
        assert_eq!(enumerate_exponent_box(5, 0, 10).unwrap().quotients, vec![eq(5, &[])]);
    }

    #[test]
    fn level_four_contains_theta_like() {
        let e = enumerate_exponent_box(4, 1, DEFAULT_CAP).unwrap();
        assert!(e.quotients.contains(&eq(4, &[(1, 1), (2, -1), (4, 1)])));
    }

    #[test]
    fn cap_truncates() {
        let e = enumerate_order_vectors(2, 1, 2).unwrap();
        assert!(e.truncated);
        assert_eq!(e.quotients.len(), 2);
        let e = enumerate_exponent_box(2, 1, 2).unwrap();
        assert!(e.truncated);
    }

    #[test]
    fn knapsack_counts() {
        assert_eq!(count_knapsack(&[1, 1], 3), BigInt::from(4));
        assert_eq!(count_knapsack(&[1, 2, 1], 4), BigInt::from(9));
        assert_eq!(count_knapsack(&[1], -1), BigInt::zero());
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factorizations_on(&eq(1, &[(1, 2)]), 1).unwrap(), vec![(eq(1, &[(1, 1)]), eq(1, &[(1, 1)]))]);
        let f = eq(2, &[(1, 1), (2, 1)]);
        let pairs = factorizations_on(&f, 2).unwrap();
        assert!(pairs.contains(&(eq(2, &[(2, 1)]), eq(2, &[(1, 1)]))));
        assert!(pairs.contains(&(eq(2, &[(1, -1), (2, 2)]), eq(2, &[(1, 2), (2, -1)]))));
        assert_eq!(pairs.len(), 2);
        assert!(factorizations_on(&eq(2, &[(1, 2), (2, -1)]), 2).unwrap().is_empty());
        assert!(matches!(factorizations_on(&eq(2, &[(2, 1)]), 3), Err(EtaError::NotDivisor { .. })));
        assert!(matches!(factorizations_on(&eq(2, &[(1, 1), (2, -1)]), 2), Err(EtaError::Precondition(_))));
    }

    #[test]
    fn classification_examples() {
        let c = classify(2, 1, Strategy::Order, DEFAULT_CAP).unwrap();
        let simple: Vec<EtaQuotient> = c.simple().map(|e| e.quotient.clone()).collect();
        assert_eq!(simple, vec![eq(2, &[(1, -1), (2, 2)]), eq(2, &[(1, 1)]), eq(2, &[(1, 2), (2, -1)])]);
        let eta2 = c.entries.iter().find(|e| e.quotient == eq(2, &[(2, 1)])).unwrap();
        assert!(!eta2.primitive && eta2.quasi_irreducible);

        let c = classify(2, 2, Strategy::Order, DEFAULT_CAP).unwrap();
        let e = c.entries.iter().find(|e| e.quotient == eq(2, &[(1, 1), (2, 1)])).unwrap();
        assert!(!e.quasi_irreducible && !e.simple);
        let (g, h) = e.witness.clone().unwrap();
        assert_eq!(g.mul(&h).unwrap(), e.quotient);

        let c = classify(1, 1, Strategy::Both, DEFAULT_CAP).unwrap();
        assert_eq!(c.entries.len(), 1);
        assert!(c.entries[0].simple);

        let c = classify(3, 0, Strategy::Order, DEFAULT_CAP).unwrap();
        let e = &c.entries[0];
        assert!(!e.primitive && !e.quasi_irreducible && !e.simple);
    }

    #[test]
    fn catalog_line_format() {
        let c = classify(2, 1, Strategy::Order, DEFAULT_CAP).unwrap();
        let e = c.entries.iter().find(|e| e.quotient == eq(2, &[(1, 2), (2, -1)])).unwrap();
        assert_eq!(
            serde_json::to_string(e).unwrap(),
            r#"{"N":2,"weight2":1,"exponents":{"1":2,"2":-1},"orders24":{"1":3,"2":0},"level":2,"primitive":true,"quasi_irreducible":true,"simple":true}"#
        );
        assert_eq!(c.to_jsonl(true).unwrap().lines().count(), 3);
    }

    #[test]
    fn count_bound_level_two() {
        assert_eq!(count_bound(2, 1).unwrap(), rat_int(36));
    }
}
