//! Numerical probe of the Hecke-orbit statistic
//!
//!   (1/sigma_1(m)) ( J_{N,1}(T_m . D_f) - sum nu e(-z~) over the Im > 1 tail ).
//!
//! The J-term is exact (read off the identity series); the tail is the
//! exponential sum over the reduced orbit points above the threshold. Both
//! grow like e^{2 pi Im_max}, so the subtraction runs at a working precision
//! sized to the largest orbit point before anything is rounded to f64.
//!
//! The limit value itself involves the regularized integral of J_{N,1} over
//! the modular curve and is not independently computable here; the report
//! asserts convergence and stability of the sequence, with the spectral
//! exponent 7/64 fixing the expected decay envelope.

use rug::Float;
use serde::Serialize;

use crate::arith::{gcd, psi_index, sigma1};
use crate::hecke::{divisor_tail, exp_sum, HDivisor, HPoint};
use crate::identity::{identity_series, j_value_on_divisor, IdentitySeries};
use crate::modforms::{Builtin, Form};
use crate::qseries::Rat;
use crate::{Error, Result};

/// Kim-Sarnak bound for the spectral parameter, carried only as the decay
/// envelope exponent -1/2 + 7/64.
pub const SPECTRAL_THETA_NUM: u64 = 7;
pub const SPECTRAL_THETA_DEN: u64 = 64;

/// The envelope exponent -1/2 + 7/64 = -0.390625.
pub fn decay_exponent() -> f64 {
    -0.5 + SPECTRAL_THETA_NUM as f64 / SPECTRAL_THETA_DEN as f64
}

/// 3/(pi psi(N)), the normalized Haar density prefactor, with pi symbolic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HaarNormalizer {
    pub numerator: u64,
    pub psi: u64,
}

pub fn haar_normalizer(level: u64) -> HaarNormalizer {
    HaarNormalizer {
        numerator: 3,
        psi: psi_index(level),
    }
}

impl HaarNormalizer {
    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / (std::f64::consts::PI * self.psi as f64)
    }
}

#[derive(Clone, Debug)]
pub struct EquidistConfig {
    pub level: u64,
    pub form: Form,
    pub m_max: u64,
    /// Tail threshold r >= 1; the theorems use r = 1.
    pub tail_threshold: Rat,
    /// Working precision in bits; sized automatically from the orbit when
    /// absent.
    pub float_bits: Option<u32>,
}

impl EquidistConfig {
    pub fn new(level: u64, form: Form, m_max: u64) -> Self {
        EquidistConfig {
            level,
            form,
            m_max,
            tail_threshold: Rat::one(),
            float_bits: None,
        }
    }
}

/// The upper-half-plane divisor attached to a form, for the presets this
/// crate knows how to place exactly.
///
/// Eta quotients and Delta have no zeros or poles away from the cusps, so
/// their divisor is empty. E4 lifted to level 2 vanishes exactly at the
/// class of rho = e^{2 pi i / 3}, reduced representative 1/2 + (sqrt3/2) i,
/// with total order 1 by valence bookkeeping.
pub fn preset_divisor(form: &Form) -> Result<HDivisor> {
    match form {
        Form::Eta(_) => Ok(HDivisor::empty(form.level())),
        Form::Lifted { builtin, level } => match builtin {
            Builtin::Delta => Ok(HDivisor::empty(*level)),
            Builtin::E4 if *level == 2 => {
                let rho = HPoint::new(Rat::new(1, 2), Rat::new(1, 2), 3)?;
                HDivisor::new(2, vec![(rho, Rat::one())])
            }
            _ => Err(Error::NoDivisorPreset {
                form: format!("builtin:{}", builtin.name()),
                level: *level,
            }),
        },
    }
}

/// Precomputed state shared by all m: the identity series at full precision,
/// the divisor, and the working float precision.
pub struct EquidistSession {
    pub config: EquidistConfig,
    pub divisor: HDivisor,
    pub ident: IdentitySeries,
    pub bits: u32,
}

/// One evaluated m.
#[derive(Clone, Debug, Serialize)]
pub struct StatisticRow {
    pub m: u64,
    pub sigma1: u64,
    /// Exact J_{N,1}(T_m . D_f).
    pub j_term: Rat,
    /// Tail exponential sum, 17-significant-digit scientific notation.
    pub tail_re: String,
    pub tail_im: String,
    pub statistic_re: f64,
    pub statistic_im: f64,
    /// Number of orbit points that survived the Im > r cut.
    pub tail_points: usize,
}

impl EquidistSession {
    pub fn new(config: EquidistConfig) -> Result<Self> {
        if config.form.level() != config.level {
            return Err(Error::InvalidInput(format!(
                "form level {} conflicts with configured level {}",
                config.form.level(),
                config.level
            )));
        }
        if config.tail_threshold < Rat::one() {
            return Err(Error::TailThreshold(config.tail_threshold.to_string()));
        }
        let divisor = preset_divisor(&config.form)?;
        let ident = identity_series(&config.form, config.m_max as usize + 2)?;
        let bits = config
            .float_bits
            .unwrap_or_else(|| auto_bits(&divisor, config.m_max));
        Ok(EquidistSession {
            config,
            divisor,
            ident,
            bits,
        })
    }

    /// The normalized statistic at one m coprime to N.
    pub fn statistic(&self, m: u64) -> Result<StatisticRow> {
        if m == 0 {
            return Err(Error::NonPositiveIndex);
        }
        if gcd(m, self.config.level) != 1 {
            return Err(Error::NotCoprime {
                m,
                level: self.config.level,
            });
        }
        let j_term = j_value_on_divisor(&self.ident, m)?;
        let orbit = self.divisor.hecke_orbit(m)?;
        let tail = divisor_tail(&orbit, &self.config.tail_threshold)?;
        let (tail_re, tail_im) = exp_sum(&tail, self.bits);

        let sigma = sigma1(m);
        let sigma_f = Float::with_val(self.bits, sigma);
        let j_float = Float::with_val(self.bits, j_term.as_rug());
        let stat_re = Float::with_val(self.bits, &j_float - &tail_re) / &sigma_f;
        let stat_im = Float::with_val(self.bits, -tail_im.clone()) / &sigma_f;

        Ok(StatisticRow {
            m,
            sigma1: sigma,
            j_term,
            tail_re: sci17(&tail_re),
            tail_im: sci17(&tail_im),
            statistic_re: stat_re.to_f64(),
            statistic_im: stat_im.to_f64(),
            tail_points: tail.points.len(),
        })
    }
}

/// Bits needed so that e^{2 pi Im} of the highest possible orbit point still
/// leaves room below the unit scale, plus slack.
fn auto_bits(divisor: &HDivisor, m_max: u64) -> u32 {
    let im_max = divisor
        .points
        .iter()
        .map(|(z, _)| z.im_f64())
        .fold(0.0f64, f64::max)
        * m_max as f64;
    let needed = 2.0 * std::f64::consts::PI * im_max * std::f64::consts::LOG2_E;
    256 + needed.ceil() as u32
}

fn sci17(x: &Float) -> String {
    let v = x.to_f64();
    format!("{v:.16e}")
}

/// Summary statistics of the sequence.
#[derive(Clone, Debug, Serialize)]
pub struct EquidistReport {
    pub level: u64,
    pub form: String,
    pub m_max: u64,
    pub admissible_count: usize,
    pub float_bits: u32,
    /// Mean of the last quartile, the empirical limit.
    pub limit_re: f64,
    pub limit_im: f64,
    /// Largest |s(m_{i+1}) - s(m_i)| over the last quartile.
    pub max_successive_diff_last_quartile: f64,
    /// Envelope C with the exponent pinned at -1/2 + 7/64, least squares on
    /// the log of |s(m) - limit| over the upper half of the range.
    pub envelope_c: f64,
    pub envelope_exponent: f64,
    /// Free two-parameter log-log fit exponent, for comparison.
    pub fitted_exponent: f64,
    /// |limit(full) - limit(half range)|.
    pub doubling_shift: f64,
    pub rows: Vec<StatisticRow>,
}

/// Run the statistic over every admissible m <= m_max and summarize
/// convergence. Requires at least 10 admissible m.
pub fn convergence_report(config: EquidistConfig) -> Result<EquidistReport> {
    let session = EquidistSession::new(config)?;
    let ms: Vec<u64> = (1..=session.config.m_max)
        .filter(|&m| gcd(m, session.config.level) == 1)
        .collect();
    if ms.len() < 10 {
        return Err(Error::NotEnoughData(format!(
            "{} admissible m in range, need at least 10",
            ms.len()
        )));
    }

    use rayon::prelude::*;
    let rows: Vec<StatisticRow> = ms
        .par_iter()
        .map(|&m| session.statistic(m))
        .collect::<Result<_>>()?;

    let stats: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.statistic_re, r.statistic_im))
        .collect();

    let (limit_re, limit_im) = tail_mean(&stats, stats.len() - stats.len() / 4);
    let (half_re, half_im) = {
        let half: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.m <= session.config.m_max / 2)
            .map(|r| (r.statistic_re, r.statistic_im))
            .collect();
        tail_mean(&half, half.len() - half.len() / 4)
    };
    let doubling_shift = ((limit_re - half_re).powi(2) + (limit_im - half_im).powi(2)).sqrt();

    // successive differences over the last quartile
    let q_start = stats.len() - stats.len() / 4;
    let mut max_diff = 0.0f64;
    for i in q_start.max(1)..stats.len() {
        let d = ((stats[i].0 - stats[i - 1].0).powi(2)
            + (stats[i].1 - stats[i - 1].1).powi(2))
        .sqrt();
        max_diff = max_diff.max(d);
    }

    // envelope fit over the upper half: log |s - limit| = log C + beta log m
    let beta = decay_exponent();
    let mut log_c_samples = Vec::new();
    let mut free_xs = Vec::new();
    let mut free_ys = Vec::new();
    for (row, &(re, im)) in rows.iter().zip(&stats) {
        if row.m * 2 < session.config.m_max {
            continue;
        }
        let resid = ((re - limit_re).powi(2) + (im - limit_im).powi(2)).sqrt();
        if resid > 0.0 {
            let lm = (row.m as f64).ln();
            log_c_samples.push(resid.ln() - beta * lm);
            free_xs.push(lm);
            free_ys.push(resid.ln());
        }
    }
    let envelope_c = if log_c_samples.is_empty() {
        0.0
    } else {
        (log_c_samples.iter().sum::<f64>() / log_c_samples.len() as f64).exp()
    };
    let fitted_exponent = least_squares_slope(&free_xs, &free_ys).unwrap_or(beta);

    Ok(EquidistReport {
        level: session.config.level,
        form: session.config.form.describe(),
        m_max: session.config.m_max,
        admissible_count: rows.len(),
        float_bits: session.bits,
        limit_re,
        limit_im,
        max_successive_diff_last_quartile: max_diff,
        envelope_c,
        envelope_exponent: beta,
        fitted_exponent,
        doubling_shift,
        rows,
    })
}

fn tail_mean(stats: &[(f64, f64)], start: usize) -> (f64, f64) {
    let tail = &stats[start.min(stats.len().saturating_sub(1))..];
    if tail.is_empty() {
        return (0.0, 0.0);
    }
    let n = tail.len() as f64;
    (
        tail.iter().map(|s| s.0).sum::<f64>() / n,
        tail.iter().map(|s| s.1).sum::<f64>() / n,
    )
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::EtaQuotient;

    #[test]
    fn haar_values() {
        let h2 = haar_normalizer(2);
        assert_eq!((h2.numerator, h2.psi), (3, 3));
        assert!((h2.to_f64() - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        let h6 = haar_normalizer(6);
        assert_eq!(h6.psi, 12);
        assert!((h6.to_f64() - 0.25 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(psi_index(6), psi_index(2) * psi_index(3));
    }

    #[test]
    fn empty_divisor_statistic_vanishes() {
        let form = Form::Eta(EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap());
        let cfg = EquidistConfig::new(2, form, 40);
        let session = EquidistSession::new(cfg).unwrap();
        for m in [1u64, 3, 5, 7, 21] {
            let row = session.statistic(m).unwrap();
            assert_eq!(row.statistic_re, 0.0);
            assert_eq!(row.statistic_im, 0.0);
            assert!(row.j_term.is_zero());
            assert_eq!(row.tail_points, 0);
        }
        assert!(session.statistic(2).is_err());
    }

    #[test]
    fn e4_preset_and_small_statistics() {
        let form = Form::lifted(Builtin::E4, 2);
        let div = preset_divisor(&form).unwrap();
        assert_eq!(div.points.len(), 1);
        let (rho, nu) = &div.points[0];
        assert_eq!(nu, &Rat::one());
        assert_eq!(rho.disc(), 3);
        assert!((rho.im_f64() - 0.8660254).abs() < 1e-6);

        let cfg = EquidistConfig::new(2, form, 30);
        let session = EquidistSession::new(cfg).unwrap();
        // m=1: the single point has Im <= 1, so the tail is empty and the
        // statistic equals the J-value.
        let row = session.statistic(1).unwrap();
        assert_eq!(row.tail_points, 0);
        assert_eq!(row.j_term, Rat::from_int(-232));
        assert!((row.statistic_re + 232.0).abs() < 1e-9);

        // m=3: the orbit point 3 rho has Im > 1; the huge tail cancels
        // against the J-term down to something of modest size.
        let row3 = session.statistic(3).unwrap();
        assert!(row3.tail_points > 0);
        assert!(row3.statistic_re.abs() < 1.0e3);
        assert!(row3.statistic_im.abs() < 1.0e3);
    }

    #[test]
    fn statistic_invariant_under_divisor_translation() {
        // replacing the divisor point by a Gamma_0(2)-translate leaves the
        // statistic unchanged (reduction canonicalizes)
        let form = Form::lifted(Builtin::E4, 2);
        let cfg = EquidistConfig::new(2, form, 16);
        let session = EquidistSession::new(cfg).unwrap();

        let translated = {
            let rho = HPoint::new(Rat::new(1, 2), Rat::new(1, 2), 3).unwrap();
            // gamma = (1 0; 2 1) composed with a translation
            let moved = rho.apply([1, 0, 2, 1]).apply([1, 3, 0, 1]);
            HDivisor::new(2, vec![(moved, Rat::one())]).unwrap()
        };
        let mut moved_session = session;
        moved_session.divisor = translated;
        for m in [1u64, 3, 5, 9, 15] {
            let a = moved_session.statistic(m).unwrap();
            let b = {
                let form = Form::lifted(Builtin::E4, 2);
                let cfg = EquidistConfig::new(2, form, 16);
                EquidistSession::new(cfg).unwrap().statistic(m).unwrap()
            };
            assert!(
                (a.statistic_re - b.statistic_re).abs() < 1e-8
                    && (a.statistic_im - b.statistic_im).abs() < 1e-8,
                "m = {m}"
            );
        }
    }

    #[test]
    fn no_preset_for_e6() {
        assert!(matches!(
            preset_divisor(&Form::lifted(Builtin::E6, 2)),
            Err(Error::NoDivisorPreset { .. })
        ));
        assert!(matches!(
            preset_divisor(&Form::lifted(Builtin::E4, 6)),
            Err(Error::NoDivisorPreset { .. })
        ));
    }

    #[test]
    fn report_rejects_thin_ranges() {
        let form = Form::Eta(EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap());
        let cfg = EquidistConfig::new(2, form, 12);
        assert!(matches!(
            convergence_report(cfg),
            Err(Error::NotEnoughData(_))
        ));
    }

    #[test]
    fn empty_divisor_report() {
        let form = Form::Eta(EtaQuotient::new(2, [(1, 8), (2, 8)]).unwrap());
        let cfg = EquidistConfig::new(2, form, 60);
        let report = convergence_report(cfg).unwrap();
        assert_eq!(report.limit_re, 0.0);
        assert_eq!(report.max_successive_diff_last_quartile, 0.0);
        assert_eq!(report.envelope_c, 0.0);
    }
}
