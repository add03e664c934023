//! The weight-2 Eisenstein space on square-free Gamma_0(N).
//!
//! The space is spanned by E2(z) - d E2(dz) for the divisors d != 1 of N.
//! Matching prescribed constant terms at the cusps 1/d_i (d_i != N, the
//! classes away from i-infinity) is a square linear system whose matrix has
//! entries 1 - gcd(d_i, d_j)^2/d_j. Coefficients are produced twice, as
//! Cramer determinant ratios and by direct elimination, and cross-checked.
//!
//! Indexing: rows run over divisors d_i != N, columns over divisors d_j != 1.
//! The column d_j = 1 would be identically zero (its basis form vanishes), so
//! it is excluded along with the infinite-cusp row; this is the unique
//! indexing under which the system is the stated matrix equation and the
//! matrix is generically nonsingular.

use std::collections::BTreeMap;

use rug::Integer;
use serde::Serialize;

use crate::arith::{divisors, gcd, is_squarefree, sigma1_sieve};
use crate::modforms::e2_scaled;
use crate::qseries::{QSeries, Rat};
use crate::{Error, Result};

/// The cusp-constant matrix of the basis forms: entry (i, j) is
/// 1 - gcd(d_i, d_j)^2 / d_j.
#[derive(Clone, Debug, Serialize)]
pub struct GcdMatrix {
    pub level: u64,
    /// Row labels: divisors d_i of N with d_i != N.
    pub rows: Vec<u64>,
    /// Column labels: divisors d_j of N with d_j != 1.
    pub cols: Vec<u64>,
    pub entries: Vec<Vec<Rat>>,
}

/// Build the matrix for square-free N > 1.
pub fn gcd_matrix(level: u64) -> Result<GcdMatrix> {
    if level <= 1 || !is_squarefree(level) {
        return Err(Error::SquareFreeRequired(level));
    }
    let divs = divisors(level);
    let rows: Vec<u64> = divs.iter().copied().filter(|&d| d != level).collect();
    let cols: Vec<u64> = divs.iter().copied().filter(|&d| d != 1).collect();
    let entries = rows
        .iter()
        .map(|&di| {
            cols.iter()
                .map(|&dj| basis_constant(dj, di))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(GcdMatrix {
        level,
        rows,
        cols,
        entries,
    })
}

fn basis_constant(dj: u64, di: u64) -> Rat {
    let g = gcd(dj, di);
    &Rat::one() - &Rat::new((g * g) as i64, dj as i64)
}

/// Constant term of (E2(z) - d_j E2(d_j z)) |_2 (1 0; d_i 1), the basis form
/// slashed to the cusp 1/d_i: equals 1 - gcd(d_j, d_i)^2 / d_j.
pub fn basis_constant_at_cusp(level: u64, dj: u64, di: u64) -> Result<Rat> {
    for d in [dj, di] {
        if d == 0 || level % d != 0 {
            return Err(Error::NotDivisor { d, level });
        }
    }
    Ok(basis_constant(dj, di))
}

/// Exact determinant of a square rational matrix. Rows are scaled to
/// integers, the integer matrix goes through fraction-free Bareiss
/// elimination, and the scaling is divided back out.
pub fn det_exact(matrix: &[Vec<Rat>]) -> Result<Rat> {
    let n = matrix.len();
    if n == 0 {
        return Ok(Rat::one());
    }
    for row in matrix {
        if row.len() != n {
            return Err(Error::NonSquareMatrix {
                rows: n,
                cols: row.len(),
            });
        }
    }
    let mut scale = Rat::one();
    let mut m: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for row in matrix {
        let mut lcm = Integer::from(1);
        for x in row {
            lcm.lcm_mut(x.as_rug().denom());
        }
        scale *= &Rat::from_rug_int(lcm.clone());
        m.push(
            row.iter()
                .map(|x| {
                    let r = x.as_rug();
                    Integer::from(r.numer() * &lcm) / r.denom()
                })
                .collect(),
        );
    }
    let det_int = bareiss(&mut m);
    Ok(&Rat::from_rug_int(det_int) / &scale)
}

/// Fraction-free Bareiss elimination; every intermediate division is exact.
fn bareiss(m: &mut [Vec<Integer>]) -> Integer {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k].cmp0() == std::cmp::Ordering::Equal {
            let Some(pivot) = (k + 1..n).find(|&r| m[r][k].cmp0() != std::cmp::Ordering::Equal)
            else {
                return Integer::new();
            };
            m.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = Integer::from(&m[i][j] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det = -det;
    }
    det
}

/// Exact solve of a square rational system by Gaussian elimination; the
/// independent route against the Cramer ratios.
pub fn solve_exact(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Result<Vec<Rat>> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(Error::NonSquareMatrix {
                rows: n,
                cols: row.len(),
            });
        }
    }
    assert_eq!(rhs.len(), n);
    let mut a: Vec<Vec<Rat>> = matrix.to_vec();
    let mut b: Vec<Rat> = rhs.to_vec();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Err(Error::SingularMatrix(format!(
                "no pivot in column {k} during elimination"
            )));
        };
        a.swap(k, pivot);
        b.swap(k, pivot);
        let inv = a[k][k].recip();
        for j in k..n {
            let val = &a[k][j] * &inv;
            a[k][j] = val;
        }
        let bk = &b[k] * &inv;
        b[k] = bk;
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let factor = a[i][k].clone();
                for j in k..n {
                    let t = &a[k][j] * &factor;
                    a[i][j] -= &t;
                }
                let t = &b[k] * &factor;
                b[i] -= &t;
            }
        }
    }
    Ok(b)
}

/// The assembled Eisenstein correction: Cramer coefficients a_j per basis
/// divisor d_j, the series of sum a_j (E2(z) - d_j E2(d_j z)), and the
/// constant of proportionality governing coefficients coprime to N.
#[derive(Clone, Debug, Serialize)]
pub struct EisSolution {
    pub level: u64,
    /// d_j -> a_j = det(A_{f,j}) / det(A_N).
    pub coeffs: BTreeMap<u64, Rat>,
    pub det_a: Rat,
    pub series: QSeries,
    /// b(m) = sigma_constant * sigma_1(m) for every m coprime to N.
    pub sigma_constant: Rat,
}

impl EisSolution {
    /// Sum of the determinant ratios, the quantity entering the closed form.
    pub fn ratio_sum(&self) -> Rat {
        self.coeffs
            .values()
            .fold(Rat::zero(), |acc, a| &acc + a)
    }
}

/// Solve for the Eisenstein correction matching the given constant terms at
/// the cusps 1/d_i, d_i != N. Both the Cramer ratios and a direct
/// elimination are computed; disagreement is a bug and panics.
pub fn eis_coefficients(
    level: u64,
    cusp_constants: &BTreeMap<u64, Rat>,
    prec: usize,
) -> Result<EisSolution> {
    let matrix = gcd_matrix(level)?;
    let rhs: Vec<Rat> = matrix
        .rows
        .iter()
        .map(|d| {
            cusp_constants.get(d).cloned().ok_or_else(|| {
                Error::InvalidInput(format!("missing cusp constant for divisor {d}"))
            })
        })
        .collect::<Result<_>>()?;

    let det_a = det_exact(&matrix.entries)?;
    if det_a.is_zero() {
        return Err(Error::SingularMatrix(format!(
            "gcd matrix for level {level} is singular"
        )));
    }

    let mut coeffs = BTreeMap::new();
    for (j, &dj) in matrix.cols.iter().enumerate() {
        let mut replaced = matrix.entries.clone();
        for (i, row) in replaced.iter_mut().enumerate() {
            row[j] = rhs[i].clone();
        }
        let det_j = det_exact(&replaced)?;
        coeffs.insert(dj, &det_j / &det_a);
    }

    let solved = solve_exact(&matrix.entries, &rhs)?;
    for (j, &dj) in matrix.cols.iter().enumerate() {
        assert_eq!(
            coeffs[&dj], solved[j],
            "Cramer ratio and direct solve disagree at column {dj}"
        );
    }

    let series = assemble_series(&coeffs, prec)?;
    // b(1) = -24 sum a_j; gcd(1, N) = 1 always
    let sigma_constant = series.coeff(1).unwrap_or_else(|_| Rat::zero());
    Ok(EisSolution {
        level,
        coeffs,
        det_a,
        series,
        sigma_constant,
    })
}

fn assemble_series(coeffs: &BTreeMap<u64, Rat>, prec: usize) -> Result<QSeries> {
    let e2 = crate::modforms::e2_series(prec);
    let mut total = QSeries::zero(prec as i64);
    for (&dj, aj) in coeffs {
        let basis = e2.sub(&e2_scaled(dj, prec)?.scale(&Rat::from_int(dj as i64)));
        total = total.add(&basis.scale(aj));
    }
    Ok(total)
}

/// Outcome of checking b(m) = c sigma_1(m) over m <= bound coprime to N.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaProportionality {
    pub constant: Rat,
    pub checked: usize,
    pub first_violation: Option<u64>,
}

pub fn check_sigma_proportionality(
    sol: &EisSolution,
    bound: u64,
) -> Result<SigmaProportionality> {
    if sol.series.known_end() <= bound as i64 {
        return Err(Error::InsufficientPrecision {
            wanted: bound as i64,
            known_end: sol.series.known_end(),
        });
    }
    let sieve = sigma1_sieve(bound as usize + 1);
    let mut checked = 0;
    let mut first_violation = None;
    for m in 1..=bound {
        if gcd(m, sol.level) != 1 {
            continue;
        }
        checked += 1;
        let expected = &sol.sigma_constant * &Rat::from_int(sieve[m as usize] as i64);
        if sol.series.coeff(m as i64)? != expected {
            first_violation = Some(m);
            break;
        }
    }
    Ok(SigmaProportionality {
        constant: sol.sigma_constant.clone(),
        checked,
        first_violation,
    })
}
