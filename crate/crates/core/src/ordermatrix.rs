//! Order matrices indexed by the divisors of a level.
//!
//! `Â_N(t, d) = gcd(t, N/t) · A_N(t, d)` where `A_N(t, d)` is 24 times the
//! order of `η_d` at the cusp `1/t` of Γ0(N). `Â_N` is the Kronecker product
//! of the prime-power blocks `Â_{p^n}(p^i, p^j) = p^(n-|i-j|)`, each with a
//! closed-form tridiagonal inverse, so `Â_N⁻¹` is assembled from blocks and
//! never by elimination.
//!
//! All matrices and vectors are indexed by divisors in ascending order. The
//! Kronecker assembly happens in mixed-radix order and is permuted back.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arithmetic::{gcd, is_prime, rat_int, DivisorLattice, Rational};
use crate::error::{EtaError, Result};

/// A square matrix indexed (row t, column d) by the divisors of N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorMatrix {
    lattice: Arc<DivisorLattice>,
    entries: Vec<Rational>,
    integral: Option<Vec<BigInt>>,
}

impl DivisorMatrix {
    pub fn from_entries(lattice: Arc<DivisorLattice>, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), lattice.len() * lattice.len());
        let integral = entries
            .iter()
            .all(|e| e.is_integer())
            .then(|| entries.iter().map(|e| e.to_integer()).collect());
        DivisorMatrix { lattice, entries, integral }
    }

    pub fn identity(lattice: Arc<DivisorLattice>) -> Self {
        let n = lattice.len();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { Rational::one() } else { Rational::zero() })
            .collect();
        Self::from_entries(lattice, entries)
    }

    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.len()
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim() + j]
    }

    /// Entry at row divisor `t`, column divisor `d`.
    pub fn get(&self, t: u64, d: u64) -> Option<&Rational> {
        let i = self.lattice.index_of(t)?;
        let j = self.lattice.index_of(d)?;
        Some(self.at(i, j))
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.dim().max(1))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_integral(&self) -> bool {
        self.integral.is_some()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let entries = (0..n * n).map(|k| self.at(k % n, k / n).clone()).collect();
        Self::from_entries(self.lattice.clone(), entries)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// Entry-wise absolute value.
    pub fn abs(&self) -> Self {
        Self::from_entries(self.lattice.clone(), self.entries.iter().map(|e| e.abs()).collect())
    }

    pub fn mul(&self, other: &DivisorMatrix) -> Result<DivisorMatrix> {
        if self.lattice.level() != other.lattice.level() {
            return Err(EtaError::InvalidInput(format!(
                "matrix levels differ: {} vs {}",
                self.lattice.level(),
                other.lattice.level()
            )));
        }
        let n = self.dim();
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(Self::from_entries(self.lattice.clone(), entries))
    }

    /// Matrix times a rational vector.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim());
        self.rows()
            .map(|row| row.iter().zip(x).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Matrix times an integer vector, as rationals.
    pub fn apply_int(&self, x: &[BigInt]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim());
        if let Some(ints) = &self.integral {
            return integer_apply(ints, self.dim(), x).into_iter().map(Rational::from_integer).collect();
        }
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * Rational::from_integer(b.clone()))
            })
            .collect()
    }

    /// Matrix times an integer vector for an integral matrix.
    pub fn apply_integral(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        match &self.integral {
            Some(ints) => Ok(integer_apply(ints, self.dim(), x)),
            None => Err(EtaError::Internal("apply_integral on a non-integral matrix".into())),
        }
    }

    /// `𝟙ᵀ M`, i.e. the column sums.
    pub fn column_sums(&self) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).fold(Rational::zero(), |acc, i| acc + self.at(i, j)))
            .collect()
    }

    /// Square sub-block indexed by the given canonical indices (used for
    /// permutations).
    fn permuted(lattice: Arc<DivisorLattice>, kron: &[Rational], perm: &[usize]) -> Self {
        let n = perm.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (a, &i) in perm.iter().enumerate() {
            for (b, &j) in perm.iter().enumerate() {
                entries[i * n + j] = kron[a * n + b].clone();
            }
        }
        Self::from_entries(lattice, entries)
    }
}

fn integer_apply(ints: &[BigInt], n: usize, x: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(x.len(), n);
    (0..n)
        .map(|i| {
            ints[i * n..(i + 1) * n]
                .iter()
                .zip(x)
                .filter(|(_, b)| !b.is_zero())
                .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

impl fmt::Display for DivisorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.lattice.divisors().iter().map(|d| d.to_string()).collect();
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = labels.iter().chain(cells.iter()).map(|s| s.len()).max().unwrap_or(1);
        write!(f, "{:>width$} |", "")?;
        for l in &labels {
            write!(f, " {l:>width$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat((width + 1) * (labels.len() + 1) + 1))?;
        let n = self.dim();
        for (i, l) in labels.iter().enumerate() {
            write!(f, "{l:>width$} |")?;
            for c in &cells[i * n..(i + 1) * n] {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A vector indexed by the divisors of N.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorVector<T> {
    lattice: Arc<DivisorLattice>,
    values: Vec<T>,
}

/// Integer exponents `X` of `η^X`.
pub type ExponentVector = DivisorVector<BigInt>;

impl<T> DivisorVector<T> {
    pub fn new(lattice: Arc<DivisorLattice>, values: Vec<T>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(EtaError::InvalidInput(format!(
                "vector has {} entries but N={} has {} divisors",
                values.len(),
                lattice.level(),
                lattice.len()
            )));
        }
        Ok(DivisorVector { lattice, values })
    }

    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, d: u64) -> Option<&T> {
        self.lattice.index_of(d).map(|i| &self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &T)> {
        self.lattice.divisors().iter().copied().zip(self.values.iter())
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> DivisorVector<U> {
        DivisorVector { lattice: self.lattice.clone(), values: self.values.iter().map(f).collect() }
    }
}

impl<T: Clone + Zero> DivisorVector<T> {
    pub fn zeros(lattice: Arc<DivisorLattice>) -> Self {
        let values = vec![T::zero(); lattice.len()];
        DivisorVector { lattice, values }
    }

    /// Indicator-style constructor from sparse `(divisor, value)` pairs.
    pub fn from_pairs(lattice: Arc<DivisorLattice>, pairs: &[(u64, T)]) -> Result<Self> {
        let mut v = Self::zeros(lattice);
        for (d, x) in pairs {
            let i = v.lattice.index_of(*d).ok_or(EtaError::NotDivisor { d: *d, n: v.lattice.level() })?;
            v.values[i] = x.clone();
        }
        Ok(v)
    }
}

impl<T: Clone + Signed + Ord> DivisorVector<T> {
    /// σ(X): the sum of the entries.
    pub fn sigma(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// ‖X‖, the L¹ norm.
    pub fn l1_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.abs())
    }

    /// X₊ = (X + |X|)/2.
    pub fn pos_part(&self) -> Self {
        self.map(|v| if v.is_positive() { v.clone() } else { T::zero() })
    }

    /// X₋ = (X − |X|)/2 (nonpositive entries).
    pub fn neg_part(&self) -> Self {
        self.map(|v| if v.is_negative() { v.clone() } else { T::zero() })
    }

    /// ‖X‖₊.
    pub fn pos_norm(&self) -> T {
        self.values.iter().filter(|v| v.is_positive()).fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// ‖X‖₋, the absolute value of the sum of the negative entries.
    pub fn neg_norm(&self) -> T {
        self.values.iter().filter(|v| v.is_negative()).fold(T::zero(), |acc, v| acc - v.clone())
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

impl ExponentVector {
    pub fn to_rational(&self) -> DivisorVector<Rational> {
        self.map(|v| Rational::from_integer(v.clone()))
    }
}

/// `Â_{p^n}` with entries `p^(n-|i-j|)`.
pub fn prime_power_block(p: u64, n: u32) -> Result<DivisorMatrix> {
    if !is_prime(p) {
        return Err(EtaError::NotPrime(p));
    }
    let lattice = DivisorLattice::shared(p.pow(n))?;
    Ok(DivisorMatrix::from_entries(lattice, block_entries(p, n)))
}

fn block_entries(p: u64, n: u32) -> Vec<Rational> {
    let size = n as usize + 1;
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let e = n as usize - i.abs_diff(j);
            entries.push(rat_int(num_traits::pow(BigInt::from(p), e)));
        }
    }
    entries
}

/// Tridiagonal inverse of `Â_{p^n}`:
/// `(1/(p^n(1 − 1/p²)))·tri(−1/p; 1, 1 + 1/p², …, 1 + 1/p², 1; −1/p)`.
pub fn prime_power_block_inverse(p: u64, n: u32) -> Result<DivisorMatrix> {
    if !is_prime(p) {
        return Err(EtaError::NotPrime(p));
    }
    let lattice = DivisorLattice::shared(p.pow(n))?;
    Ok(DivisorMatrix::from_entries(lattice, block_inverse_entries(p, n)))
}

fn block_inverse_entries(p: u64, n: u32) -> Vec<Rational> {
    let size = n as usize + 1;
    if n == 0 {
        return vec![Rational::one()];
    }
    let pr = rat_int(p);
    let inv_p = pr.recip();
    let inv_p2 = &inv_p * &inv_p;
    let scale = (rat_int(num_traits::pow(BigInt::from(p), n as usize)) * (Rational::one() - &inv_p2)).recip();
    let mut entries = vec![Rational::zero(); size * size];
    for i in 0..size {
        let diag = if i == 0 || i == size - 1 { Rational::one() } else { Rational::one() + &inv_p2 };
        entries[i * size + i] = &scale * diag;
        if i + 1 < size {
            let off = -(&scale * &inv_p);
            entries[i * size + i + 1] = off.clone();
            entries[(i + 1) * size + i] = off;
        }
    }
    entries
}

/// Kronecker product of square row-major matrices.
pub fn kronecker(a: &[Rational], na: usize, b: &[Rational], nb: usize) -> Vec<Rational> {
    let n = na * nb;
    let mut out = vec![Rational::zero(); n * n];
    for i in 0..na {
        for j in 0..na {
            let aij = &a[i * na + j];
            if aij.is_zero() {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k) * n + j * nb + l] = aij * &b[k * nb + l];
                }
            }
        }
    }
    out
}

fn kronecker_assemble(n: u64, block: fn(u64, u32) -> Vec<Rational>) -> Result<DivisorMatrix> {
    let lattice = DivisorLattice::shared(n)?;
    let mut acc = vec![Rational::one()];
    let mut size = 1;
    for &(p, e) in lattice.factorization() {
        let b = block(p, e);
        let bs = e as usize + 1;
        acc = kronecker(&acc, size, &b, bs);
        size *= bs;
    }
    let perm = lattice.kronecker_permutation();
    Ok(DivisorMatrix::permuted(lattice, &acc, &perm))
}

/// `Â_N` assembled as the Kronecker product of prime-power blocks.
pub fn sym_order_matrix(n: u64) -> Result<DivisorMatrix> {
    kronecker_assemble(n, block_entries)
}

/// `Â_N` assembled entry by entry from the cusp-order formula
/// `Â_N(t, d) = gcd(t, N/t) · N·gcd(d, t)² / (d·gcd(t², N))`.
pub fn sym_order_matrix_direct(n: u64) -> Result<DivisorMatrix> {
    let lattice = DivisorLattice::shared(n)?;
    let divs = lattice.divisors();
    let mut entries = Vec::with_capacity(divs.len() * divs.len());
    for (i, &t) in divs.iter().enumerate() {
        for &d in divs {
            entries.push(rat_int(lattice.t_prime_at(i)) * order24_of_eta_d(n, t, d));
        }
    }
    Ok(DivisorMatrix::from_entries(lattice, entries))
}

/// `24 · ord_{1/t}(η_d; Γ0(N)) = N·gcd(d, t)² / (d·gcd(t², N))`.
pub fn order24_of_eta_d(n: u64, t: u64, d: u64) -> Rational {
    let g = gcd(d, t);
    let num = BigInt::from(n) * BigInt::from(g) * BigInt::from(g);
    let den = BigInt::from(d) * BigInt::from(gcd_big(t, n));
    Rational::new(num, den)
}

fn gcd_big(t: u64, n: u64) -> u64 {
    // gcd(t², N) without overflowing t².
    let g = gcd(t, n);
    g * gcd(t / g * t, n / g)
}

/// `Â_N⁻¹` as the Kronecker product of the tridiagonal block inverses.
pub fn sym_order_matrix_inverse(n: u64) -> Result<DivisorMatrix> {
    kronecker_assemble(n, block_inverse_entries)
}

/// `A_N`: row t of `Â_N` divided by gcd(t, N/t).
pub fn order_matrix(n: u64) -> Result<DivisorMatrix> {
    let sym = sym_order_matrix(n)?;
    Ok(order_from_sym(&sym))
}

fn order_from_sym(sym: &DivisorMatrix) -> DivisorMatrix {
    let lattice = sym.lattice().clone();
    let k = lattice.len();
    let entries = (0..k * k)
        .map(|idx| sym.entries()[idx].clone() / rat_int(lattice.t_prime_at(idx / k)))
        .collect();
    DivisorMatrix::from_entries(lattice, entries)
}

/// Matrices of one level, computed once and shared.
#[derive(Debug)]
pub struct LevelMatrices {
    pub lattice: Arc<DivisorLattice>,
    pub sym: DivisorMatrix,
    pub sym_inv: DivisorMatrix,
    pub order: DivisorMatrix,
}

impl LevelMatrices {
    fn build(n: u64) -> Result<Self> {
        let sym = sym_order_matrix(n)?;
        let lattice = sym.lattice().clone();
        let sym_inv = DivisorMatrix::from_entries(lattice.clone(), sym_order_matrix_inverse(n)?.entries().to_vec());
        let order = order_from_sym(&sym);
        Ok(LevelMatrices { lattice, sym, sym_inv, order })
    }

    /// `Â_N X` for integer `X`.
    pub fn sym_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.sym.apply_integral(x).expect("Â_N is integral")
    }

    /// `A_N X` for integer `X`.
    pub fn order_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.order.apply_integral(x).expect("A_N is integral")
    }
}

/// Process-wide memo of [`LevelMatrices`], guarded by a mutex.
pub fn level_matrices(n: u64) -> Result<Arc<LevelMatrices>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<LevelMatrices>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().expect("level cache poisoned").get(&n) {
        return Ok(m.clone());
    }
    let built = Arc::new(LevelMatrices::build(n)?);
    let mut guard = cache.lock().expect("level cache poisoned");
    Ok(guard.entry(n).or_insert(built).clone())
}

/// `X^[d]`: entry (ν, e) = X(ν·e) for ν | N/d, e | d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReshapedExponents<T> {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub entries: Vec<Vec<T>>,
}

impl<T: Clone> ReshapedExponents<T> {
    pub fn entry(&self, nu: u64, e: u64) -> Option<&T> {
        let i = self.rows.iter().position(|&r| r == nu)?;
        let j = self.cols.iter().position(|&c| c == e)?;
        Some(&self.entries[i][j])
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// Inverse of [`reshape`].
    pub fn flatten(&self, lattice: Arc<DivisorLattice>) -> Result<DivisorVector<T>>
    where
        T: Zero,
    {
        let mut v = DivisorVector::zeros(lattice);
        for (i, &nu) in self.rows.iter().enumerate() {
            for (j, &e) in self.cols.iter().enumerate() {
                let idx = v
                    .lattice
                    .index_of(nu * e)
                    .ok_or(EtaError::NotDivisor { d: nu * e, n: v.lattice.level() })?;
                v.values[idx] = self.entries[i][j].clone();
            }
        }
        Ok(v)
    }
}

impl ReshapedExponents<Rational> {
    fn left_mul(&self, m: &DivisorMatrix) -> Self {
        let k = self.rows.len();
        let entries = (0..k)
            .map(|i| {
                (0..self.cols.len())
                    .map(|j| (0..k).fold(Rational::zero(), |acc, l| acc + m.at(i, l) * &self.entries[l][j]))
                    .collect()
            })
            .collect();
        ReshapedExponents { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    fn right_mul(&self, m: &DivisorMatrix) -> Self {
        let c = self.cols.len();
        let entries = self
            .entries
            .iter()
            .map(|row| (0..c).map(|j| (0..c).fold(Rational::zero(), |acc, l| acc + &row[l] * m.at(l, j))).collect())
            .collect();
        ReshapedExponents { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }
}

/// Reshapes a divisor vector on N into a (divisors of N/d) × (divisors of d)
/// matrix for an exact divisor d ‖ N.
pub fn reshape<T: Clone>(x: &DivisorVector<T>, d: u64) -> Result<ReshapedExponents<T>> {
    let lattice = x.lattice();
    let n = lattice.level();
    if !lattice.is_exact_divisor(d) {
        return Err(EtaError::NotExactDivisor { d, n });
    }
    let rows = DivisorLattice::new(n / d)?.divisors().to_vec();
    let cols = DivisorLattice::new(d)?.divisors().to_vec();
    let entries = rows
        .iter()
        .map(|&nu| {
            cols.iter()
                .map(|&e| x.values()[lattice.index_of(nu * e).expect("ν·e divides N")].clone())
                .collect()
        })
        .collect();
    Ok(ReshapedExponents { rows, cols, entries })
}

/// Both sides of `(Â_N X)^[d] = Â_{N/d} X^[d] Â_d`.
pub fn block_identity_sides(
    x: &ExponentVector,
    d: u64,
) -> Result<(ReshapedExponents<Rational>, ReshapedExponents<Rational>)> {
    let n = x.lattice().level();
    let m = level_matrices(n)?;
    let y = DivisorVector::new(x.lattice().clone(), m.sym.apply_int(x.values()))?;
    let lhs = reshape(&y, d)?;
    let xr = reshape(&x.to_rational(), d)?;
    let rhs = xr.left_mul(&level_matrices(n / d)?.sym).right_mul(&level_matrices(d)?.sym);
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnAnalysis {
    /// One flag per column: true when the column has a nonzero entry.
    pub nonzero_columns: Vec<bool>,
    /// 1 + the longest run of consecutive all-zero columns.
    pub delta: usize,
    pub first_column_zero: bool,
    pub last_column_zero: bool,
}

impl ColumnAnalysis {
    pub fn nonzero_count(&self) -> usize {
        self.nonzero_columns.iter().filter(|&&b| b).count()
    }
}

pub fn column_analysis<T: Zero + Clone>(r: &ReshapedExponents<T>) -> ColumnAnalysis {
    let nonzero_columns: Vec<bool> =
        (0..r.cols.len()).map(|j| r.entries.iter().any(|row| !row[j].is_zero())).collect();
    column_analysis_from_flags(nonzero_columns)
}

pub fn column_analysis_from_flags(nonzero_columns: Vec<bool>) -> ColumnAnalysis {
    let mut best = 0;
    let mut run = 0;
    for &nz in &nonzero_columns {
        if nz {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
    }
    ColumnAnalysis {
        delta: best + 1,
        first_column_zero: nonzero_columns.first().is_some_and(|&b| !b),
        last_column_zero: nonzero_columns.last().is_some_and(|&b| !b),
        nonzero_columns,
    }
}

/// Projection π_{N,M}, section s_{M,N} and s̃ = s∘π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSection<T> {
    pub pi: DivisorVector<T>,
    pub s: DivisorVector<T>,
    pub stilde: DivisorVector<T>,
}

pub fn project<T: Clone>(x: &DivisorVector<T>, m: u64) -> Result<DivisorVector<T>> {
    let n = x.lattice().level();
    if m == 0 || !n.is_multiple_of(m) {
        return Err(EtaError::NotDivisor { d: m, n });
    }
    let lm = DivisorLattice::shared(m)?;
    let values = lm.divisors().iter().map(|&d| x.get(d).expect("d | M | N").clone()).collect();
    DivisorVector::new(lm, values)
}

pub fn section<T: Clone + Zero>(z: &DivisorVector<T>, n_lattice: Arc<DivisorLattice>) -> Result<DivisorVector<T>> {
    let m = z.lattice().level();
    if !n_lattice.level().is_multiple_of(m) {
        return Err(EtaError::NotDivisor { d: m, n: n_lattice.level() });
    }
    let values = n_lattice
        .divisors()
        .iter()
        .map(|&d| if m.is_multiple_of(d) { z.get(d).expect("d | M").clone() } else { T::zero() })
        .collect();
    DivisorVector::new(n_lattice, values)
}

pub fn project_section<T: Clone + Zero>(x: &DivisorVector<T>, m: u64) -> Result<ProjectionSection<T>> {
    let pi = project(x, m)?;
    let s = section(&pi, x.lattice().clone())?;
    let stilde = s.clone();
    Ok(ProjectionSection { pi, s, stilde })
}

/// s̃_{M,N}(X) = s_{M,N}(π_{N,M}(X)).
pub fn stilde<T: Clone + Zero>(x: &DivisorVector<T>, m: u64) -> Result<DivisorVector<T>> {
    section(&project(x, m)?, x.lattice().clone())
}
