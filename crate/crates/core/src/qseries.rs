//! Truncated q-expansions at ∞, used as an oracle independent of the order
//! matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arithmetic::IntJson;
use crate::error::{EtaError, Result};
use crate::etaquotient::EtaQuotient;

/// Default number of retained coefficients.
pub const DEFAULT_TERMS: usize = 200;

/// `q^{lead24/24} · ∑_{j < truncation} c_j q^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub lead24: i64,
    pub coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn new(lead24: i64, coeffs: Vec<BigInt>) -> Self {
        QSeries { lead24, coeffs }
    }

    pub fn one(terms: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); terms];
        if terms > 0 {
            coeffs[0] = BigInt::one();
        }
        QSeries { lead24: 0, coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Shifts leading zero coefficients into `lead24`; the truncation shrinks
    /// by the same amount.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) | None => self.clone(),
            Some(k) => QSeries { lead24: self.lead24 + 24 * k as i64, coeffs: self.coeffs[k..].to_vec() },
        }
    }

    /// Product; truncation is the smaller operand truncation.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let terms = self.truncation().min(other.truncation());
        let mut coeffs = vec![BigInt::zero(); terms];
        for (i, a) in self.coeffs.iter().take(terms).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(terms - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries { lead24: self.lead24 + other.lead24, coeffs }
    }

    /// Integer power (negative allowed) of a series whose leading coefficient
    /// is 1, by the recurrence `n·g_n = ∑_{k=1}^{n} ((e+1)k − n)·f_k·g_{n−k}`.
    pub fn pow(&self, e: i64) -> Result<QSeries> {
        if self.coeffs.first().map(|c| c.is_one()) != Some(true) {
            return Err(EtaError::InvalidInput("power requires leading coefficient 1".into()));
        }
        let terms = self.truncation();
        let nonzero: Vec<(usize, &BigInt)> =
            self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut g = vec![BigInt::zero(); terms];
        g[0] = BigInt::one();
        let e1 = BigInt::from(e) + 1;
        for n in 1..terms {
            let mut acc = BigInt::zero();
            for &(k, fk) in &nonzero {
                if k > n {
                    break;
                }
                let w: BigInt = &e1 * k - n;
                if !w.is_zero() {
                    acc += w * fk * &g[n - k];
                }
            }
            let (q, r) = (&acc / n, &acc % n);
            debug_assert!(r.is_zero(), "power recurrence must divide exactly");
            if !r.is_zero() {
                return Err(EtaError::Internal("non-integral coefficient in series power".into()));
            }
            g[n] = q;
        }
        Ok(QSeries { lead24: self.lead24 * e, coeffs: g })
    }

    /// Substitutes q → q^d.
    pub fn rescale(&self, d: usize, terms: usize) -> QSeries {
        let mut coeffs = vec![BigInt::zero(); terms];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j * d >= terms {
                break;
            }
            coeffs[j * d] = c.clone();
        }
        QSeries { lead24: self.lead24 * d as i64, coeffs }
    }
}

#[derive(Serialize)]
struct QSeriesJson {
    lead24: i64,
    coeffs: Vec<IntJson>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson { lead24: self.lead24, coeffs: self.coeffs.iter().cloned().map(IntJson).collect() }.serialize(s)
    }
}

/// Coefficients of `∏_{n≥1}(1 − q^n)` to `terms` terms via the pentagonal
/// number theorem: `(−1)^m` at `q^{m(3m∓1)/2}`.
pub fn euler_product(terms: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); terms];
    if terms == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for m in 1.. {
        let sign = if m % 2 == 1 { -1 } else { 1 };
        let a = m * (3 * m - 1) / 2;
        let b = m * (3 * m + 1) / 2;
        if a >= terms {
            break;
        }
        c[a] = BigInt::from(sign);
        if b < terms {
            c[b] = BigInt::from(sign);
        }
    }
    c
}

/// `η = q^{1/24}∏(1 − q^n)`.
pub fn eta_expansion(terms: usize) -> Result<QSeries> {
    if terms == 0 {
        return Err(EtaError::InvalidInput("truncation must be positive".into()));
    }
    Ok(QSeries { lead24: 1, coeffs: euler_product(terms) })
}

/// Expansion of `∏ η_d^{X_d}` at ∞.
pub fn eta_quotient_expansion(f: &EtaQuotient, terms: usize) -> Result<QSeries> {
    let eta = eta_expansion(terms)?;
    let mut acc = QSeries::one(terms);
    for (d, e) in f.support() {
        let e = e.to_i64().ok_or_else(|| EtaError::InvalidInput("exponent too large".into()))?;
        let factor = eta.rescale(d as usize, terms).pow(e)?;
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// `lead24 + 24·(index of the first nonzero coefficient)`.
pub fn leading_order24(s: &QSeries) -> Result<i64> {
    match s.coeffs.iter().position(|c| !c.is_zero()) {
        Some(k) => Ok(s.lead24 + 24 * k as i64),
        None => Err(EtaError::Undetermined(s.truncation())),
    }
}

/// Whether two expansions differ within their common truncation, comparing
/// exponents on the common 1/24 grid.
pub fn series_differ(a: &QSeries, b: &QSeries) -> bool {
    let start = a.lead24.min(b.lead24);
    let end_a = a.lead24 + 24 * a.truncation() as i64;
    let end_b = b.lead24 + 24 * b.truncation() as i64;
    let end = end_a.min(end_b);
    let coeff = |s: &QSeries, e: i64| -> BigInt {
        let off = e - s.lead24;
        if off < 0 || off % 24 != 0 {
            return BigInt::zero();
        }
        s.coeffs.get((off / 24) as usize).cloned().unwrap_or_default()
    };
    let mut e = start;
    while e < end {
        if coeff(a, e) != coeff(b, e) {
            return true;
        }
        e += 1;
    }
    false
}

/// Sum of absolute values of coefficients; handy for sanity output.
pub fn coefficient_l1(s: &QSeries) -> BigInt {
    s.coeffs.iter().map(|c| c.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn eta_coefficients() {
        let s = eta_expansion(8).unwrap();
        assert_eq!(s.lead24, 1);
        assert_eq!(ints(&s.coeffs), vec![1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(ints(&eta_expansion(1).unwrap().coeffs), vec![1]);
    }

    #[test]
    fn pentagonal_matches_naive_product() {
        let terms = 60;
        let mut naive = vec![0i64; terms];
        naive[0] = 1;
        for n in 1..terms {
            for j in (n..terms).rev() {
                naive[j] -= naive[j - n];
            }
        }
        assert_eq!(ints(&euler_product(terms)), naive);
    }

    #[test]
    fn theta_type_quotient() {
        let f = EtaQuotient::from_pairs(2, &[(1, 2), (2, -1)]).unwrap();
        let s = eta_quotient_expansion(&f, 10).unwrap();
        assert_eq!(s.lead24, 0);
        assert_eq!(ints(&s.coeffs), vec![1, -2, 0, 0, 2, 0, 0, 0, 0, -2]);
        assert_eq!(leading_order24(&s).unwrap(), 0);
    }

    #[test]
    fn leading_orders() {
        let eta2 = EtaQuotient::from_pairs(2, &[(2, 1)]).unwrap();
        let s = eta_quotient_expansion(&eta2, 5).unwrap();
        assert_eq!(s.lead24, 2);
        assert_eq!(leading_order24(&s).unwrap(), 2);
        let eta = EtaQuotient::from_pairs(1, &[(1, 1)]).unwrap();
        assert_eq!(leading_order24(&eta_quotient_expansion(&eta, 3).unwrap()).unwrap(), 1);
        let f = EtaQuotient::from_pairs(4, &[(1, 1), (2, -1), (4, 1)]).unwrap();
        assert_eq!(eta_quotient_expansion(&f, 4).unwrap().lead24, 3);
    }

    #[test]
    fn zero_series_is_undetermined() {
        let z = QSeries::new(0, vec![BigInt::zero(); 4]);
        assert_eq!(leading_order24(&z), Err(EtaError::Undetermined(4)));
        assert_eq!(leading_order24(&z.normalized()), Err(EtaError::Undetermined(4)));
    }

    #[test]
    fn normalization_moves_zeros_into_lead() {
        let s = QSeries::new(-3, vec![BigInt::zero(), BigInt::zero(), BigInt::from(5), BigInt::one()]);
        let n = s.normalized();
        assert_eq!(n.lead24, 45);
        assert_eq!(n.truncation(), 2);
        assert_eq!(leading_order24(&n).unwrap(), leading_order24(&s).unwrap());
    }

    #[test]
    fn negative_powers_invert() {
        let eta = eta_expansion(40).unwrap();
        let inv = eta.pow(-1).unwrap();
        assert_eq!(inv.lead24, -1);
        // 1/∏(1-q^n) is the partition generating function
        assert_eq!(ints(&inv.coeffs[..10]), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(eta.mul(&inv), QSeries::one(40));
    }

    #[test]
    fn power_matches_repeated_product() {
        let eta = eta_expansion(50).unwrap();
        let cube = eta.pow(3).unwrap();
        assert_eq!(cube, eta.mul(&eta).mul(&eta));
    }
}
