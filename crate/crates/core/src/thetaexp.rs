//! The exponent/theta layer: product exponents c(n) of f = q^h prod
//! (1-q^n)^{c(n)}, the weight-2 form f_theta = theta(f)/f - (k/12) E2, and
//! its constant terms at the cusps.
//!
//! Sign convention: the logarithmic derivative of the product expansion is
//!
//!   theta(f)/f = h - sum_{m>=1} ( sum_{d|m} d c(d) ) q^m,
//!
//! anchored by Delta (c == 24 gives exactly theta(Delta)/Delta = E2). The
//! recursion below and everything downstream use this sign; see the identity
//! module for the audit of the opposite convention.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{divisors, gcd};
use crate::modforms::{e2_series, Form};
use crate::qseries::{QSeries, Rat};
use crate::{Error, Result};

/// theta(f)/f. The constant term equals the leading exponent of f.
pub fn log_derivative(f: &QSeries) -> Result<QSeries> {
    if f.is_zero() {
        return Err(Error::NonInvertible);
    }
    Ok(f.theta().mul(&f.inv()?))
}

/// Product exponents c(1) .. c(P-1) of a series with unit leading
/// coefficient, together with its leading exponent and the weight it was
/// extracted at.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentVector {
    /// Leading exponent h of f.
    pub h: i64,
    pub weight: i64,
    /// c[i] is c(i + 1).
    pub c: Vec<Rat>,
}

impl ExponentVector {
    pub fn exponent(&self, n: u64) -> Result<Rat> {
        if n == 0 {
            return Err(Error::NonPositiveIndex);
        }
        self.c
            .get(n as usize - 1)
            .cloned()
            .ok_or(Error::InsufficientPrecision {
                wanted: n as i64,
                known_end: self.c.len() as i64 + 1,
            })
    }

    /// sum_{d|m} d c(d), the convolution entering the closed identity.
    pub fn weighted_divisor_sum(&self, m: u64) -> Result<Rat> {
        let mut acc = Rat::zero();
        for d in divisors(m) {
            acc.add_prod(&self.exponent(d)?, &Rat::from_int(d as i64));
        }
        Ok(acc)
    }
}

/// Recover c(m) from the q-expansion: with s(m) = -[q^m] theta(f)/f,
/// c(m) = (s(m) - sum_{d|m, d<m} d c(d)) / m. Exact rationals throughout.
pub fn extract_exponents(f: &QSeries, weight: i64) -> Result<ExponentVector> {
    if f.is_zero() {
        return Err(Error::NonInvertible);
    }
    let lead = f.coeff(f.leading_exponent())?;
    if !lead.is_one() {
        return Err(Error::NonUnitLeading(lead.to_string()));
    }
    let ld = log_derivative(f)?;
    let count = (ld.known_end() - 1).max(0) as usize;
    let mut c: Vec<Rat> = Vec::with_capacity(count);
    for m in 1..=count as u64 {
        let mut s = -ld.coeff(m as i64)?;
        for d in divisors(m) {
            if d < m {
                let t = &c[d as usize - 1] * &Rat::from_int(d as i64);
                s -= &t;
            }
        }
        c.push(&s / &Rat::from_int(m as i64));
    }
    Ok(ExponentVector {
        h: f.leading_exponent(),
        weight,
        c,
    })
}

/// Rebuild q^h prod_{n} (1-q^n)^{c(n)} from an exponent vector; rational
/// exponents go through the generalized binomial series. Inverse of
/// [`extract_exponents`] and the reconstruction oracle in tests.
pub fn product_from_exponents(ev: &ExponentVector, prec: usize) -> QSeries {
    let mut acc = QSeries::one(prec);
    for (i, cn) in ev.c.iter().enumerate() {
        let n = i as i64 + 1;
        if n >= prec as i64 {
            break;
        }
        if !cn.is_zero() {
            acc = acc.mul(&one_minus_qn_pow(n, cn, prec));
        }
    }
    acc.shift(ev.h)
}

/// (1 - q^n)^c for rational c: sum_k binom(c, k) (-1)^k q^{nk}.
fn one_minus_qn_pow(n: i64, c: &Rat, prec: usize) -> QSeries {
    let mut coeffs = vec![Rat::zero(); prec];
    let mut term = Rat::one();
    let mut k = 0i64;
    loop {
        let idx = n * k;
        if idx >= prec as i64 {
            break;
        }
        coeffs[idx as usize] = term.clone();
        // binom(c, k+1) (-1)^{k+1} = binom(c, k) (-1)^k * (k - c) / (k + 1)
        let factor = &(&Rat::from_int(k) - c) / &Rat::from_int(k + 1);
        term *= &factor;
        k += 1;
    }
    QSeries::new(0, coeffs)
}

/// f_theta together with its constant terms at the cusps 1/d.
#[derive(Clone, Debug, Serialize)]
pub struct FThetaData {
    pub series: QSeries,
    /// d -> order_d / width_d - k/12.
    pub cusp_constants: BTreeMap<u64, Rat>,
}

/// f_theta = theta(f)/f - (k/12) E2 from a raw q-expansion and weight; no
/// cusp data.
pub fn f_theta_series(f: &QSeries, weight: i64) -> Result<QSeries> {
    let ld = log_derivative(f)?;
    let prec = ld.known_end().max(1) as usize;
    Ok(ld.sub(&e2_series(prec).scale(&Rat::new(weight, 12))))
}

/// f_theta for a concrete form on Gamma_0(N): the series plus the constant
/// term at each cusp 1/d, namely ord_d(f)/alpha_d - k/12.
pub fn f_theta(form: &Form, prec: usize) -> Result<FThetaData> {
    let k = form.weight()?;
    let series = f_theta_series(&form.series(prec)?, k)?;
    let level = form.level();
    let mut cusp_constants = BTreeMap::new();
    for d in divisors(level) {
        let width = level / gcd(d * d, level);
        let ord = form.order_at_cusp(d)?;
        let c = &(&ord / &Rat::from_int(width as i64)) - &Rat::new(k, 12);
        cusp_constants.insert(d, c);
    }
    Ok(FThetaData {
        series,
        cusp_constants,
    })
}
