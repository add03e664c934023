//! Concrete modular forms: the quasi-modular E2 and its rescalings, eta
//! quotients with their cusp data on square-free Gamma_0(N), and the lifted
//! level-1 forms (Delta, E4, E6) used as built-in examples.
//!
//! Orders at cusps are measured in the local uniformizer of X_0(N), so the
//! order at the infinite cusp equals the q-exponent h_inf. Cusp classes are
//! represented by 1/d for the divisors d of N; the class of 1/N is i-infinity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, is_squarefree, psi_index, sigma1_sieve, sigma_k};
use crate::qseries::{QSeries, Rat};
use crate::{Error, Result};

/// E2(z) = 1 - 24 sum sigma_1(n) q^n, known through q^{prec-1}.
pub fn e2_series(prec: usize) -> QSeries {
    assert!(prec > 0);
    let sieve = sigma1_sieve(prec);
    let mut coeffs = vec![Rat::zero(); prec];
    coeffs[0] = Rat::one();
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = Rat::from_int(-24 * sieve[n] as i64);
    }
    QSeries::new(0, coeffs)
}

/// E2(d z) as a q-series: constant 1, coefficient -24 sigma_1(n) at q^{dn}.
pub fn e2_scaled(d: u64, prec: usize) -> Result<QSeries> {
    if d == 0 {
        return Err(Error::InvalidInput("e2_scaled requires d > 0".into()));
    }
    assert!(prec > 0);
    let sieve = sigma1_sieve(prec);
    let mut coeffs = vec![Rat::zero(); prec];
    coeffs[0] = Rat::one();
    let step = d as usize;
    let mut n = 1usize;
    while n * step < prec {
        coeffs[n * step] = Rat::from_int(-24 * sieve[n] as i64);
        n += 1;
    }
    Ok(QSeries::new(0, coeffs))
}

/// Level N plus an exponent r_delta for each divisor delta of N:
/// f = prod_{delta | N} eta(delta z)^{r_delta}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

/// Outcome of validating an eta quotient: weight and order at infinity when
/// they are integral, with diagnostics for each failed condition.
#[derive(Clone, Debug, Serialize)]
pub struct EtaValidation {
    pub valid: bool,
    pub weight: Option<i64>,
    pub order_infinity: Option<i64>,
    pub issues: Vec<String>,
}

impl EtaQuotient {
    /// Keys must divide the level; zero exponents are dropped.
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidEtaQuotient("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || level % delta != 0 {
                return Err(Error::NotDivisor { d: delta, level });
            }
            if r != 0 {
                *map.entry(delta).or_insert(0) += r;
            }
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient {
            level,
            exponents: map,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    /// Twice the weight: sum of the exponents.
    pub fn weight_x2(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// 24 h_inf = sum delta r_delta.
    pub fn order_infinity_x24(&self) -> i64 {
        self.exponents
            .iter()
            .map(|(&delta, &r)| delta as i64 * r)
            .sum()
    }

    /// Pointwise product: exponent maps add.
    pub fn product(&self, other: &EtaQuotient) -> Result<EtaQuotient> {
        if self.level != other.level {
            return Err(Error::InvalidEtaQuotient(format!(
                "levels differ: {} vs {}",
                self.level, other.level
            )));
        }
        let mut map = self.exponents.clone();
        for (&delta, &r) in &other.exponents {
            *map.entry(delta).or_insert(0) += r;
        }
        EtaQuotient::new(self.level, map)
    }

    /// Product exponent c(n) = sum_{delta | gcd(n, N)} r_delta of the
    /// unfolding prod (1-q^n)^{c(n)}.
    pub fn product_exponent(&self, n: u64) -> i64 {
        self.exponents
            .iter()
            .filter(|(&delta, _)| n % delta == 0)
            .map(|(_, &r)| r)
            .sum()
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", self.level)?;
        let mut first = true;
        for (delta, r) in &self.exponents {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{delta}:{r}")?;
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Text format "N; delta1:r1, delta2:r2, ...", e.g. "2; 1:8, 2:8".
    fn from_str(s: &str) -> Result<Self> {
        let (level_part, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::BadFormSpec(s.to_string()))?;
        let level: u64 = level_part
            .trim()
            .parse()
            .map_err(|_| Error::BadFormSpec(s.to_string()))?;
        let exps = parse_exponent_list(rest).ok_or_else(|| Error::BadFormSpec(s.to_string()))?;
        EtaQuotient::new(level, exps)
    }
}

/// Parse "d1:r1, d2:r2, ..." as used by `--eta`.
pub fn parse_exponent_list(s: &str) -> Option<Vec<(u64, i64)>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (d, r) = item.split_once(':')?;
        out.push((d.trim().parse().ok()?, r.trim().parse().ok()?));
    }
    Some(out)
}

/// k even, h_inf integral. Cusp orders are rational by construction; their
/// sum is checked against the valence identity as a diagnostic.
pub fn validate(f: &EtaQuotient) -> EtaValidation {
    let mut issues = Vec::new();
    let wx2 = f.weight_x2();
    let weight = if wx2 % 4 == 0 {
        Some(wx2 / 2)
    } else {
        issues.push(format!(
            "weight {}/2 is not an even integer (sum of exponents {wx2} must be 0 mod 4)",
            wx2
        ));
        None
    };
    let hx24 = f.order_infinity_x24();
    let order_infinity = if hx24 % 24 == 0 {
        Some(hx24 / 24)
    } else {
        issues.push(format!(
            "order at infinity {hx24}/24 is not an integer"
        ));
        None
    };
    EtaValidation {
        valid: issues.is_empty(),
        weight,
        order_infinity,
        issues,
    }
}

/// Order of vanishing of an eta quotient at the cusp 1/d, measured in the
/// local uniformizer of X_0(N):
///
///   (N / (24 gcd(d^2, N))) * sum_{delta | N} r_delta gcd(d, delta)^2 / delta
///
/// At d = N this reduces to h_inf.
pub fn eta_order_at_cusp(f: &EtaQuotient, d: u64) -> Result<Rat> {
    let n = f.level();
    if d == 0 || n % d != 0 {
        return Err(Error::NotDivisor { d, level: n });
    }
    let mut sum = Rat::zero();
    for (&delta, &r) in f.exponents() {
        let g = gcd(d, delta);
        sum += &Rat::new((g * g) as i64 * r, delta as i64);
    }
    let width_factor = Rat::new(n as i64, 24 * gcd(d * d, n) as i64);
    Ok(&sum * &width_factor)
}

/// q-expansion of an eta quotient: leading exponent h_inf, unit leading
/// coefficient, known through q^{h_inf + prec - 1}.
pub fn eta_quotient_series(f: &EtaQuotient, prec: usize) -> Result<QSeries> {
    let val = validate(f);
    if !val.valid {
        return Err(Error::InvalidEtaQuotient(val.issues.join("; ")));
    }
    assert!(prec > 0);
    let h = val.order_infinity.unwrap();
    let mut series = QSeries::one(prec);
    for (&delta, &r) in f.exponents() {
        series = series.mul(&euler_product(delta as i64, prec).pow(r)?);
    }
    Ok(series.shift(h))
}

/// prod_{n>=1} (1 - q^{delta n}) via the pentagonal number expansion.
fn euler_product(delta: i64, prec: usize) -> QSeries {
    let mut coeffs = vec![Rat::zero(); prec];
    coeffs[0] = Rat::one();
    let mut k = 1i64;
    loop {
        let mut placed = false;
        for e in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            let idx = e * delta;
            if idx < prec as i64 {
                coeffs[idx as usize] = if k % 2 == 0 {
                    Rat::one()
                } else {
                    Rat::from_int(-1)
                };
                placed = true;
            }
        }
        if !placed {
            break;
        }
        k += 1;
    }
    QSeries::new(0, coeffs)
}

/// Per-cusp data for square-free N. One row per divisor d of N, cusp class
/// 1/d, width N/d; the row for d = N is the class of i-infinity.
#[derive(Clone, Debug, Serialize)]
pub struct CuspTable {
    pub level: u64,
    /// [SL2(Z) : Gamma_0(N)]; equals the sum of the widths.
    pub index: u64,
    pub rows: Vec<CuspRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspRow {
    pub d: u64,
    pub representative: String,
    pub width: u64,
    /// Order of vanishing of the attached form in the local uniformizer;
    /// absent when the table carries no form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Rat>,
    /// Constant term of f_theta at this cusp (order/width - k/12).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ftheta_const: Option<Rat>,
}

/// Geometry-only cusp table for square-free N > 1.
pub fn cusp_table(level: u64) -> Result<CuspTable> {
    if level <= 1 || !is_squarefree(level) {
        return Err(Error::SquareFreeRequired(level));
    }
    let rows = divisors(level)
        .into_iter()
        .map(|d| CuspRow {
            d,
            representative: format!("1/{d}"),
            width: level / gcd(d * d, level),
            order: None,
            ftheta_const: None,
        })
        .collect();
    Ok(CuspTable {
        level,
        index: psi_index(level),
        rows,
    })
}

impl CuspTable {
    /// Fill per-cusp orders and f_theta constants for a form.
    pub fn with_form(mut self, form: &Form) -> Result<CuspTable> {
        let k = form.weight()?;
        for row in &mut self.rows {
            let ord = form.order_at_cusp(row.d)?;
            let c = &(&ord / &Rat::from_int(row.width as i64)) - &Rat::new(k, 12);
            row.order = Some(ord);
            row.ftheta_const = Some(c);
        }
        Ok(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,representative,width,order,ftheta_const\n");
        for r in &self.rows {
            let ord = r.order.as_ref().map(|x| x.to_string()).unwrap_or_default();
            let c = r
                .ftheta_const
                .as_ref()
                .map(|x| x.to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.d, r.representative, r.width, ord, c
            ));
        }
        out
    }
}

/// Built-in level-1 forms, usable lifted to any Gamma_0(N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    Delta,
    E4,
    E6,
}

impl Builtin {
    pub fn weight(self) -> i64 {
        match self {
            Builtin::Delta => 12,
            Builtin::E4 => 4,
            Builtin::E6 => 6,
        }
    }

    /// Order of vanishing at i-infinity as a level-1 form.
    pub fn order_infinity(self) -> i64 {
        match self {
            Builtin::Delta => 1,
            Builtin::E4 | Builtin::E6 => 0,
        }
    }

    pub fn series(self, prec: usize) -> QSeries {
        match self {
            Builtin::Delta => {
                let eta24 = EtaQuotient::new(1, [(1, 24)]).unwrap();
                eta_quotient_series(&eta24, prec).unwrap()
            }
            Builtin::E4 => eisenstein_level1(prec, 3, 240),
            Builtin::E6 => eisenstein_level1(prec, 5, -504),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Delta => "Delta",
            Builtin::E4 => "E4",
            Builtin::E6 => "E6",
        }
    }
}

fn eisenstein_level1(prec: usize, k: u32, scale: i64) -> QSeries {
    let mut coeffs = vec![Rat::zero(); prec];
    coeffs[0] = Rat::one();
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = Rat::from_int(scale * sigma_k(n as u64, k) as i64);
    }
    QSeries::new(0, coeffs)
}

/// A concrete modular form on Gamma_0(N): an eta quotient at its own level,
/// or a level-1 built-in lifted to level N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    Eta(EtaQuotient),
    Lifted { builtin: Builtin, level: u64 },
}

impl Form {
    pub fn lifted(builtin: Builtin, level: u64) -> Self {
        Form::Lifted { builtin, level }
    }

    pub fn level(&self) -> u64 {
        match self {
            Form::Eta(f) => f.level(),
            Form::Lifted { level, .. } => *level,
        }
    }

    pub fn weight(&self) -> Result<i64> {
        match self {
            Form::Eta(f) => {
                let val = validate(f);
                val.weight
                    .ok_or_else(|| Error::InvalidEtaQuotient(val.issues.join("; ")))
            }
            Form::Lifted { builtin, .. } => Ok(builtin.weight()),
        }
    }

    pub fn series(&self, prec: usize) -> Result<QSeries> {
        match self {
            Form::Eta(f) => eta_quotient_series(f, prec),
            Form::Lifted { builtin, .. } => Ok(builtin.series(prec)),
        }
    }

    /// Order at the cusp 1/d in the local uniformizer of X_0(N). A lifted
    /// level-1 form has invariant order h at every cusp, hence order
    /// width * h in the uniformizer.
    pub fn order_at_cusp(&self, d: u64) -> Result<Rat> {
        match self {
            Form::Eta(f) => eta_order_at_cusp(f, d),
            Form::Lifted { builtin, level } => {
                if d == 0 || level % d != 0 {
                    return Err(Error::NotDivisor { d, level: *level });
                }
                let width = level / gcd(d * d, *level);
                Ok(Rat::from_int(width as i64 * builtin.order_infinity()))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Form::Eta(f) => format!("eta quotient {f}"),
            Form::Lifted { builtin, level } => {
                format!("builtin:{} lifted to level {level}", builtin.name())
            }
        }
    }

    /// Parse "builtin:E4" (level supplied separately) or a full eta spec
    /// "N; d1:r1, ...".
    pub fn parse(spec: &str, level: u64) -> Result<Form> {
        let spec = spec.trim();
        if let Some(name) = spec.strip_prefix("builtin:") {
            let builtin = match name.trim() {
                "Delta" | "delta" => Builtin::Delta,
                "E4" | "e4" => Builtin::E4,
                "E6" | "e6" => Builtin::E6,
                _ => return Err(Error::BadFormSpec(spec.to_string())),
            };
            return Ok(Form::lifted(builtin, level));
        }
        if spec.contains(';') {
            let eta: EtaQuotient = spec.parse()?;
            if eta.level() != level {
                return Err(Error::InvalidInput(format!(
                    "eta spec level {} conflicts with --level {level}",
                    eta.level()
                )));
            }
            return Ok(Form::Eta(eta));
        }
        // bare exponent list, level from the flag
        let exps = parse_exponent_list(spec).ok_or_else(|| Error::BadFormSpec(spec.to_string()))?;
        Ok(Form::Eta(EtaQuotient::new(level, exps)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sigma1;

    #[test]
    fn e2_coefficients() {
        let e2 = e2_series(16);
        assert_eq!(e2.coeff(0).unwrap(), Rat::one());
        assert_eq!(e2.coeff(1).unwrap(), Rat::from_int(-24));
        assert_eq!(e2.coeff(4).unwrap(), Rat::from_int(-168));
        assert_eq!(e2.coeff(12).unwrap(), Rat::from_int(-672));
        assert_eq!(e2.coeff(6).unwrap(), Rat::from_int(-24 * 12));
    }

    #[test]
    fn e2_scaled_placement() {
        assert_eq!(e2_scaled(1, 40).unwrap(), e2_series(40));
        let d2 = e2_scaled(2, 10).unwrap();
        assert_eq!(d2.coeff(2).unwrap(), Rat::from_int(-24));
        assert_eq!(d2.coeff(1).unwrap(), Rat::zero());
        let d3 = e2_scaled(3, 10).unwrap();
        assert_eq!(d3.coeff(2).unwrap(), Rat::zero());
        assert!(e2_scaled(0, 10).is_err());
    }

    #[test]
    fn delta_head() {
        let delta = EtaQuotient::new(1, [(1, 24)]).unwrap();
        let f = eta_quotient_series(&delta, 5).unwrap();
        assert_eq!(f.leading_exponent(), 1);
        assert_eq!(f.coeff(1).unwrap(), Rat::one());
        assert_eq!(f.coeff(2).unwrap(), Rat::from_int(-24));
        assert_eq!(f.coeff(3).unwrap(), Rat::from_int(252));
        assert_eq!(f.coeff(4).unwrap(), Rat::from_int(-1472));
    }

    #[test]
    fn level2_weight8_series() {
        let f = EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap();
        let s = eta_quotient_series(&f, 6).unwrap();
        assert_eq!(s.leading_exponent(), 1);
        assert_eq!(s.coeff(1).unwrap(), Rat::one());
        // reduces to Delta when the level-2 exponent vanishes
        let g = EtaQuotient::new(2, [(1, 24), (2, 0)]).unwrap();
        let delta = EtaQuotient::new(1, [(1, 24)]).unwrap();
        assert_eq!(
            eta_quotient_series(&g, 8).unwrap(),
            eta_quotient_series(&delta, 8).unwrap()
        );
    }

    #[test]
    fn validation_cases() {
        let good = EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap();
        let v = validate(&good);
        assert!(v.valid);
        assert_eq!(v.weight, Some(8));
        assert_eq!(v.order_infinity, Some(1));

        let bad = EtaQuotient::new(2, [(1, 16), (2, 8)]).unwrap();
        let v = validate(&bad);
        assert!(!v.valid);
        assert!(v.issues.iter().any(|m| m.contains("not an integer")));

        let delta = EtaQuotient::new(1, [(1, 24)]).unwrap();
        let v = validate(&delta);
        assert!(v.valid);
        assert_eq!(v.weight, Some(12));
    }

    #[test]
    fn cusp_orders_level2() {
        let f = EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap();
        assert_eq!(eta_order_at_cusp(&f, 2).unwrap(), Rat::one());
        assert_eq!(eta_order_at_cusp(&f, 1).unwrap(), Rat::one());
        assert!(eta_order_at_cusp(&f, 3).is_err());

        let delta = EtaQuotient::new(1, [(1, 24)]).unwrap();
        assert_eq!(eta_order_at_cusp(&delta, 1).unwrap(), Rat::one());
    }

    #[test]
    fn cusp_table_geometry() {
        let t = cusp_table(2).unwrap();
        assert_eq!(t.index, 3);
        assert_eq!(
            t.rows.iter().map(|r| (r.d, r.width)).collect::<Vec<_>>(),
            vec![(1, 2), (2, 1)]
        );

        let t6 = cusp_table(6).unwrap();
        assert_eq!(t6.index, 12);
        assert_eq!(
            t6.rows.iter().map(|r| r.width).collect::<Vec<_>>(),
            vec![6, 3, 2, 1]
        );
        assert_eq!(t6.rows.iter().map(|r| r.width).sum::<u64>(), t6.index);

        assert!(matches!(
            cusp_table(12),
            Err(Error::SquareFreeRequired(12))
        ));
        assert!(matches!(cusp_table(1), Err(Error::SquareFreeRequired(1))));
    }

    #[test]
    fn valence_invariant_random_quotients() {
        // sum of cusp orders = (k/12) psi(N) for eta quotients
        let mut checked = 0;
        for n in [2u64, 3, 5, 6, 10, 15] {
            let divs = divisors(n);
            for seed in 0..1500u64 {
                let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(n);
                let exps: Vec<(u64, i64)> = divs
                    .iter()
                    .map(|&d| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        (d, ((state >> 33) % 25) as i64 - 12)
                    })
                    .collect();
                let f = EtaQuotient::new(n, exps).unwrap();
                let val = validate(&f);
                if !val.valid || f.exponents().is_empty() {
                    continue;
                }
                checked += 1;
                let k = val.weight.unwrap();
                let total: Rat = divisors(n)
                    .iter()
                    .fold(Rat::zero(), |acc, &d| &acc + &eta_order_at_cusp(&f, d).unwrap());
                assert_eq!(total, Rat::new(k * psi_index(n) as i64, 12), "form {f}");
            }
        }
        assert!(checked >= 100, "only {checked} valid quotients sampled");
    }

    #[test]
    fn series_multiplicativity() {
        let f = EtaQuotient::new(6, [(1, 2), (2, 2), (3, 2), (6, 2)]).unwrap();
        let g = EtaQuotient::new(6, [(1, -2), (2, 4), (3, 6), (6, 0)]).unwrap();
        if validate(&g).valid {
            let fg = f.product(&g).unwrap();
            let lhs = eta_quotient_series(&f, 12)
                .unwrap()
                .mul(&eta_quotient_series(&g, 12).unwrap());
            let rhs = eta_quotient_series(&fg, 12).unwrap();
            assert!(lhs.agrees(&rhs));
        }
        // always-valid pair: square of f
        let ff = f.product(&f).unwrap();
        let lhs = eta_quotient_series(&f, 12)
            .unwrap()
            .pow(2)
            .unwrap();
        assert!(lhs.agrees(&eta_quotient_series(&ff, 12).unwrap()));
    }

    #[test]
    fn product_exponents_unfold() {
        let f = EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap();
        assert_eq!(f.product_exponent(1), 8);
        assert_eq!(f.product_exponent(2), 16);
        assert_eq!(f.product_exponent(3), 8);
        assert_eq!(f.product_exponent(4), 16);
    }

    #[test]
    fn builtin_series_heads() {
        let e4 = Builtin::E4.series(4);
        assert_eq!(e4.coeff(1).unwrap(), Rat::from_int(240));
        assert_eq!(e4.coeff(2).unwrap(), Rat::from_int(2160));
        let e6 = Builtin::E6.series(3);
        assert_eq!(e6.coeff(1).unwrap(), Rat::from_int(-504));
        let delta = Builtin::Delta.series(3);
        assert_eq!(delta.coeff(2).unwrap(), Rat::from_int(-24));
    }

    #[test]
    fn lifted_cusp_orders() {
        let e4 = Form::lifted(Builtin::E4, 2);
        assert_eq!(e4.order_at_cusp(1).unwrap(), Rat::zero());
        assert_eq!(e4.order_at_cusp(2).unwrap(), Rat::zero());
        let delta = Form::lifted(Builtin::Delta, 6);
        assert_eq!(delta.order_at_cusp(1).unwrap(), Rat::from_int(6));
        assert_eq!(delta.order_at_cusp(6).unwrap(), Rat::one());
    }

    #[test]
    fn form_parsing() {
        let f = Form::parse("builtin:E4", 2).unwrap();
        assert_eq!(f, Form::lifted(Builtin::E4, 2));
        let g = Form::parse("2; 1:8, 2:8", 2).unwrap();
        let h = Form::parse("1:8, 2:8", 2).unwrap();
        assert_eq!(g, h);
        assert!(Form::parse("builtin:E8", 2).is_err());
        assert!(Form::parse("3; 1:8", 2).is_err());
    }

    #[test]
    fn sigma_one_consistency() {
        for n in 1..=50 {
            assert_eq!(sigma1(n), divisors(n).iter().sum::<u64>());
        }
    }
}
