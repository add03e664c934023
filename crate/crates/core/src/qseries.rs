//! Truncated Laurent series in q with exact rational coefficients.
//!
//! A [`QSeries`] stores a leading exponent `v` and a dense coefficient block
//! for the exponents `v .. v+P-1`. The representation carries a precise
//! knowledge contract: every coefficient below `v` is exactly zero, every
//! coefficient in the block is known exactly, and nothing is known from
//! `v+P` on. Arithmetic propagates the provable knowledge range and never
//! pads with unproven zeros.
//!
//! The zero series is the empty block; its `v` marks the end of the known
//! range (everything below it is known to vanish).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::ops::{NegAssign, Pow};
use rug::{Integer, Rational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact rational number; always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Rational);

impl Rat {
    pub fn zero() -> Self {
        Rat(Rational::new())
    }

    pub fn one() -> Self {
        Rat(Rational::from(1))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(Rational::from(n))
    }

    /// num/den in lowest terms. Panics if den == 0.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(Rational::from((num, den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(Rational::from(self.0.abs_ref()))
    }

    /// Reciprocal. Panics on zero.
    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(Rational::from(self.0.recip_ref()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Largest integer <= self.
    pub fn floor_i64(&self) -> i64 {
        let q = Rational::from(self.0.floor_ref());
        q.numer().to_i64().expect("floor out of i64 range")
    }

    /// Smallest integer >= self.
    pub fn ceil_i64(&self) -> i64 {
        let q = Rational::from(self.0.ceil_ref());
        q.numer().to_i64().expect("ceil out of i64 range")
    }

    pub fn numer_i64(&self) -> Option<i64> {
        self.0.numer().to_i64()
    }

    /// self += a * b, the inner-loop primitive of series multiplication.
    pub(crate) fn add_prod(&mut self, a: &Rat, b: &Rat) {
        self.0 += Rational::from(&a.0 * &b.0);
    }

    pub(crate) fn as_rug(&self) -> &Rational {
        &self.0
    }

    pub(crate) fn from_rug_int(n: Integer) -> Self {
        Rat(Rational::from(n))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts "p/q" and plain integers; also tolerates decimal literals
    /// such as "0.125", which are exact binary-free fractions.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(r) = Rational::from_str(s) {
            return Ok(Rat(r));
        }
        // decimal literal: sign, digits, '.', digits
        if let Some(dot) = s.find('.') {
            let (int_part, frac_part) = (&s[..dot], &s[dot + 1..]);
            if !frac_part.is_empty() && frac_part.chars().all(|c| c.is_ascii_digit()) {
                let negative = int_part.starts_with('-');
                let int_digits = int_part.trim_start_matches(['-', '+']);
                if int_digits.chars().all(|c| c.is_ascii_digit()) {
                    let whole = if int_digits.is_empty() {
                        Integer::new()
                    } else {
                        Integer::from_str(int_digits).map_err(|_| bad_rat(s))?
                    };
                    let frac = Integer::from_str(frac_part).map_err(|_| bad_rat(s))?;
                    let den = Integer::from(Integer::from(10u32).pow(frac_part.len() as u32));
                    let mut num = whole * &den + frac;
                    if negative {
                        num.neg_assign();
                    }
                    return Ok(Rat(Rational::from((num, den))));
                }
            }
        }
        Err(bad_rat(s))
    }
}

fn bad_rat(s: &str) -> Error {
    Error::InvalidInput(format!("cannot parse rational {s:?}"))
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rat::from_str(&s).map_err(D::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(Rational::from(&self.0 $op &rhs.0))
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(Rational::from(&self.0 / &rhs.0))
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(mut self) -> Rat {
        self.0.neg_assign();
        self
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(Rational::from(-&self.0))
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<(i64, i64)> for Rat {
    fn from((n, d): (i64, i64)) -> Self {
        Rat::new(n, d)
    }
}

/// Truncated Laurent series sum_{n >= v} a_n q^n with a_v .. a_{v+P-1} known.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    v: i64,
    coeffs: Vec<Rat>,
}

impl QSeries {
    /// Build from a leading exponent and coefficient block; strips leading
    /// zeros so that `coeffs[0] != 0` for a nonzero series. Stripping keeps
    /// the knowledge range: exponents below the new `v` are exactly zero.
    pub fn new(v: i64, coeffs: Vec<Rat>) -> Self {
        let mut s = QSeries { v, coeffs };
        s.normalize();
        s
    }

    /// The zero series, known to vanish for all exponents below `known_end`.
    pub fn zero(known_end: i64) -> Self {
        QSeries {
            v: known_end,
            coeffs: Vec::new(),
        }
    }

    /// The constant 1, known through exponent prec-1.
    pub fn one(prec: usize) -> Self {
        Self::monomial(0, Rat::one(), prec)
    }

    /// c * q^n with prec known coefficients from n on.
    pub fn monomial(n: i64, c: Rat, prec: usize) -> Self {
        assert!(prec > 0);
        let mut coeffs = vec![Rat::zero(); prec];
        coeffs[0] = c;
        QSeries::new(n, coeffs)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.v += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading exponent. For the zero series this is the end of the known
    /// range (morally +infinity, clipped to what is provable).
    pub fn leading_exponent(&self) -> i64 {
        self.v
    }

    /// Number of known coefficients from the leading exponent on.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// First exponent beyond the known range.
    pub fn known_end(&self) -> i64 {
        self.v + self.coeffs.len() as i64
    }

    /// Exact coefficient of q^n. Exponents below the leading one are exactly
    /// zero; beyond the known range is an error.
    pub fn coeff(&self, n: i64) -> Result<Rat> {
        if n < self.v {
            Ok(Rat::zero())
        } else if n < self.known_end() {
            Ok(self.coeffs[(n - self.v) as usize].clone())
        } else {
            Err(Error::InsufficientPrecision {
                wanted: n,
                known_end: self.known_end(),
            })
        }
    }

    /// Iterate over (exponent, coefficient) for the stored block.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rat)> {
        let v = self.v;
        self.coeffs.iter().enumerate().map(move |(i, c)| (v + i as i64, c))
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let end = self.known_end().min(other.known_end());
        let v = self.v.min(other.v).min(end);
        let len = (end - v) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (n, c) in self.iter() {
            if n < end {
                coeffs[(n - v) as usize] += c;
            }
        }
        for (n, c) in other.iter() {
            if n < end {
                coeffs[(n - v) as usize] += c;
            }
        }
        QSeries::new(v, coeffs)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            v: self.v,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        if c.is_zero() {
            // Exact zero times anything vanishes wherever the input is known.
            return QSeries::zero(self.known_end());
        }
        QSeries {
            v: self.v,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> QSeries {
        QSeries {
            v: self.v + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Cauchy product. Leading exponent v_f + v_g; precision min(P_f, P_g).
    pub fn mul(&self, other: &QSeries) -> QSeries {
        // Unknown tails start at v_f + end_g and v_g + end_f.
        let end = (self.v + other.known_end()).min(other.v + self.known_end());
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(end);
        }
        let v = self.v + other.v;
        let len = (end - v) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let top = len.saturating_sub(i);
            for (j, b) in other.coeffs.iter().enumerate().take(top) {
                if !b.is_zero() {
                    coeffs[i + j].add_prod(a, b);
                }
            }
        }
        QSeries::new(v, coeffs)
    }

    /// Multiplicative inverse to the same precision. Leading exponent -v.
    pub fn inv(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        let p = self.coeffs.len();
        let a0inv = self.coeffs[0].recip();
        let mut b = vec![Rat::zero(); p];
        b[0] = a0inv.clone();
        for n in 1..p {
            let mut acc = Rat::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc.add_prod(&self.coeffs[i], &b[n - i]);
                }
            }
            if !acc.is_zero() {
                b[n] = -(acc) * a0inv.clone();
            }
        }
        Ok(QSeries::new(-self.v, b))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<QSeries> {
        if e == 0 {
            let end = if self.is_zero() {
                self.known_end()
            } else {
                self.precision() as i64
            };
            return Ok(QSeries::one(end.max(1) as usize));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut result: Option<QSeries> = None;
        let mut power = base;
        loop {
            if exp & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.mul(&power),
                    None => power.clone(),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            power = power.mul(&power);
        }
        Ok(result.unwrap())
    }

    /// The Ramanujan theta-operator q d/dq: scales the coefficient of q^n by n.
    pub fn theta(&self) -> QSeries {
        let coeffs = self
            .iter()
            .map(|(n, c)| c * &Rat::from_int(n))
            .collect();
        QSeries::new(self.v, coeffs)
    }

    /// Restrict the known range to exponents below `end`.
    pub fn truncate(&self, end: i64) -> QSeries {
        if end >= self.known_end() {
            return self.clone();
        }
        if end <= self.v {
            return QSeries::zero(end);
        }
        QSeries::new(self.v, self.coeffs[..(end - self.v) as usize].to_vec())
    }

    /// Series equality in the only provable sense: agreement of every
    /// coefficient on the overlap of the known ranges.
    pub fn agrees(&self, other: &QSeries) -> bool {
        let end = self.known_end().min(other.known_end());
        let lo = self.v.min(other.v);
        (lo..end).all(|n| {
            let a = self.coeff(n).unwrap_or_else(|_| unreachable!());
            let b = other.coeff(n).unwrap_or_else(|_| unreachable!());
            a == b
        })
    }

    /// Evaluate at q = e^{2 pi i z} in f64 complex arithmetic; used by the
    /// floating-point oracles. Returns (re, im).
    pub fn eval_f64(&self, z_re: f64, z_im: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (n, c) in self.iter() {
            let nf = n as f64;
            let modulus = (-2.0 * std::f64::consts::PI * nf * z_im).exp();
            let phase = 2.0 * std::f64::consts::PI * nf * z_re;
            let cf = c.to_f64();
            re += cf * modulus * phase.cos();
            im += cf * modulus * phase.sin();
        }
        (re, im)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^{})", self.known_end());
        }
        let mut first = true;
        for (n, c) in self.iter().take(8) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})q^{n}")?;
        }
        write!(f, " + O(q^{})", self.known_end())
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    v: i64,
    #[serde(rename = "P")]
    p: usize,
    coeffs: Vec<Rat>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesRepr {
            v: self.v,
            p: self.coeffs.len(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QSeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.p {
            return Err(D::Error::custom("coefficient count does not match P"));
        }
        Ok(QSeries::new(repr.v, repr.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn series(v: i64, coeffs: &[i64]) -> QSeries {
        QSeries::new(v, coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn additive_identity() {
        let f = series(0, &[1, -24]);
        let z = QSeries::zero(2);
        assert_eq!(f.add(&z), f);
    }

    #[test]
    fn add_cancellation() {
        // E2 head plus 24q * head of sum-of-divisors tail
        let e2 = series(0, &[1, -24, -72]);
        let g = series(1, &[24, 0]);
        let sum = e2.add(&g);
        assert_eq!(sum, series(0, &[1, 0, -72]));
        assert_eq!(sum.coeff(1).unwrap(), Rat::zero());
    }

    #[test]
    fn add_e2_minus_two_e2_of_2z_heads() {
        // heads of E2(z) and -2 E2(2z): constants 1 and -2, q^2 terms -72 and 48
        let e2 = series(0, &[1, -24, -72]);
        let e2_2 = series(0, &[-2, 0, 48]);
        assert_eq!(e2.add(&e2_2), series(0, &[-1, -24, -24]));
    }

    #[test]
    fn mul_monomials_and_geometric() {
        let q = QSeries::monomial(1, Rat::one(), 5);
        let qinv = QSeries::monomial(-1, Rat::one(), 5);
        let prod = q.mul(&qinv);
        assert_eq!(prod.coeff(0).unwrap(), Rat::one());
        assert_eq!(prod.leading_exponent(), 0);

        let one_minus_q = series(0, &[1, -1, 0, 0, 0, 0]);
        let geo = series(0, &[1, 1, 1, 1, 1, 1]);
        assert!(one_minus_q.mul(&geo).agrees(&QSeries::one(6)));
    }

    #[test]
    fn delta_head_by_brute_force_product() {
        // q * prod_{n<=3} (1-q^n)^24 expanded to order 3
        let mut f = QSeries::monomial(1, Rat::one(), 4);
        for n in 1..=3i64 {
            let factor = QSeries::new(
                0,
                (0..4)
                    .map(|i| {
                        if i == 0 {
                            Rat::one()
                        } else if i == n {
                            Rat::from_int(-1)
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect(),
            );
            f = f.mul(&factor.pow(24).unwrap());
        }
        assert_eq!(f.coeff(1).unwrap(), Rat::one());
        assert_eq!(f.coeff(2).unwrap(), Rat::from_int(-24));
        assert_eq!(f.coeff(3).unwrap(), Rat::from_int(252));
    }

    #[test]
    fn inv_examples() {
        let one_minus_q = series(0, &[1, -1, 0, 0, 0]);
        let inv = one_minus_q.inv().unwrap();
        for n in 0..5 {
            assert_eq!(inv.coeff(n).unwrap(), Rat::one());
        }

        let q2 = QSeries::monomial(2, Rat::one(), 4);
        let inv = q2.inv().unwrap();
        assert_eq!(inv.leading_exponent(), -2);
        assert_eq!(inv.coeff(-2).unwrap(), Rat::one());

        assert!(matches!(
            QSeries::zero(10).inv(),
            Err(Error::NonInvertible)
        ));
    }

    #[test]
    fn theta_examples() {
        let c = QSeries::monomial(0, rat(5, 1), 3);
        assert!(c.theta().is_zero());

        let f = QSeries::new(
            -1,
            vec![Rat::one(), rat(5, 1), Rat::zero(), rat(3, 1)],
        );
        let th = f.theta();
        assert_eq!(th.coeff(-1).unwrap(), rat(-1, 1));
        assert_eq!(th.coeff(0).unwrap(), Rat::zero());
        assert_eq!(th.coeff(2).unwrap(), rat(6, 1));
    }

    #[test]
    fn coeff_range_contract() {
        let f = QSeries::monomial(3, Rat::one(), 4); // q^3, known through q^6
        assert_eq!(f.coeff(5).unwrap(), Rat::zero());
        assert_eq!(f.coeff(0).unwrap(), Rat::zero());
        assert!(matches!(
            f.coeff(7),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn serde_round_trip() {
        let f = QSeries::new(-2, vec![rat(1, 3), Rat::zero(), rat(-7, 2)]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"v":-2,"P":3,"coeffs":["1/3","0","-7/2"]}"#);
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        (
            -4i64..4,
            proptest::collection::vec(arb_rat(), 8..12),
        )
            .prop_map(|(v, coeffs)| QSeries::new(v, coeffs))
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_series(), g in arb_series(), h in arb_series()) {
            prop_assert!(f.add(&g).agrees(&g.add(&f)));
            prop_assert!(f.mul(&g).agrees(&g.mul(&f)));
            prop_assert!(f.add(&g).add(&h).agrees(&f.add(&g.add(&h))));
            prop_assert!(f.mul(&g).mul(&h).agrees(&f.mul(&g.mul(&h))));
            prop_assert!(f.mul(&g.add(&h)).agrees(&f.mul(&g).add(&f.mul(&h))));
        }

        #[test]
        fn theta_is_a_derivation(f in arb_series(), g in arb_series()) {
            let lhs = f.mul(&g).theta();
            let rhs = f.theta().mul(&g).add(&f.mul(&g.theta()));
            prop_assert!(lhs.agrees(&rhs));
        }

        #[test]
        fn inv_is_two_sided(f in arb_series()) {
            prop_assume!(!f.is_zero());
            let inv = f.inv().unwrap();
            prop_assert!(f.mul(&inv).agrees(&QSeries::one(4)));
            prop_assert!(inv.mul(&f).agrees(&QSeries::one(4)));
        }
    }

    #[test]
    fn rat_parsing() {
        assert_eq!("4/6".parse::<Rat>().unwrap(), rat(2, 3));
        assert_eq!("-0.125".parse::<Rat>().unwrap(), rat(-1, 8));
        assert_eq!("7".parse::<Rat>().unwrap(), rat(7, 1));
        assert!("x".parse::<Rat>().is_err());
    }
}
