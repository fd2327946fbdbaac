//! Statistical fits over graph time series and degree sequences.
//!
//! - Power-law degree exponents, `f(x) = C x^-α` for `x ≥ x_min` with
//!   `C = (α-1) x_min^(α-1)`.
//! - Edge-vs-node power model `|E| = a |V|^b`, fitted by least squares in
//!   log-log space and scored with adjusted R².
//! - Relative growth rate between two months.
//! - Pearson correlation, including alignment of a monthly metric with a
//!   monthly price series.

use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::ingest::{MonthIndex, YearMonth};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("fewer than 2 observations at or above x_min = {x_min}")]
    EmptyTail { x_min: u64 },
    #[error("every tail observation equals x_min = {x_min}; the exponent is not identifiable")]
    DegenerateTail { x_min: u64 },
    #[error("x_min must be positive")]
    InvalidXMin,
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("input has zero variance")]
    ZeroVariance,
    #[error("values must be positive")]
    NonPositive,
    #[error("interval end must come after its start")]
    InvalidInterval,
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("r2 must lie in [0, 1], got {0}")]
    InvalidR2(f64),
    #[error("adjusted R² needs n > p + 1 (n = {n}, p = {p})")]
    TooFewObservations { n: usize, p: usize },
    #[error("metric and price series share no months")]
    NoOverlap,
    #[error("price file: {0}")]
    PriceFile(String),
}

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q+k)^-s` for `s > 1`, `q > 0`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    // B_2j / (2j)!
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
        -3617.0 / 10_670_622_842_880_000.0,
    ];
    const DIRECT: usize = 9;
    let mut sum: f64 = (0..DIRECT).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + DIRECT as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut factor = s * a.powf(-s - 1.0);
    for (j, c) in COEFFS.iter().enumerate() {
        sum += c * factor;
        let k = 2.0 * (j as f64 + 1.0);
        factor *= (s + k - 1.0) * (s + k) / (a * a);
    }
    sum
}

/// Estimator used for the power-law exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLawMethod {
    /// Closed form `α = 1 + n [Σ ln(x_i / (x_min - ½))]^-1`. Accurate once
    /// x_min is moderately large; biased low near x_min = 1.
    Approximate,
    /// Exact maximum likelihood for the discrete law `P(x) = x^-α / ζ(α, x_min)`.
    DiscreteMle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: u64,
    pub n_tail: u64,
    /// Log-likelihood of the tail under `f(x) = (α-1) x_min^(α-1) x^-α`.
    pub log_likelihood: f64,
    pub method: PowerLawMethod,
    /// Kolmogorov–Smirnov distance between the tail and the fitted law.
    pub ks_distance: f64,
}

impl PowerLawFit {
    /// The normalization constant `C = (α-1) x_min^(α-1)`.
    pub fn normalization(&self) -> f64 {
        (self.alpha - 1.0) * (self.x_min as f64).powf(self.alpha - 1.0)
    }
}

struct Tail {
    values: Vec<u64>,
    sum_ln: f64,
}

fn tail_of(degrees: &[u64], x_min: u64) -> Result<Tail, FitError> {
    if x_min == 0 {
        return Err(FitError::InvalidXMin);
    }
    let mut values: Vec<u64> = degrees.iter().copied().filter(|&d| d >= x_min).collect();
    if values.len() < 2 {
        return Err(FitError::EmptyTail { x_min });
    }
    if values.iter().all(|&v| v == x_min) {
        return Err(FitError::DegenerateTail { x_min });
    }
    values.sort_unstable();
    let sum_ln = values.iter().map(|&v| (v as f64).ln()).sum();
    Ok(Tail { values, sum_ln })
}

fn continuous_log_likelihood(alpha: f64, x_min: u64, tail: &Tail) -> f64 {
    let n = tail.values.len() as f64;
    n * (alpha - 1.0).ln() + n * (alpha - 1.0) * (x_min as f64).ln() - alpha * tail.sum_ln
}

const ALPHA_LOWER: f64 = 1.0 + 1e-9;
const ALPHA_UPPER: f64 = 50.0;

fn discrete_mle(x_min: u64, tail: &Tail) -> Result<f64, FitError> {
    let n = tail.values.len() as f64;
    let q = x_min as f64;
    let log_lik = |alpha: f64| -alpha * tail.sum_ln - n * hurwitz_zeta(alpha, q).ln();
    // The log-likelihood is concave in α, so golden-section search finds the
    // unique maximum.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (ALPHA_LOWER, ALPHA_UPPER);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (log_lik(c), log_lik(d));
    while hi - lo > 1e-11 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = log_lik(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = log_lik(d);
        }
    }
    let alpha = 0.5 * (lo + hi);
    if alpha > ALPHA_UPPER - 1e-6 {
        return Err(FitError::DegenerateTail { x_min });
    }
    Ok(alpha)
}

/// Model CDF `P(X ≤ x)` for integer `x ≥ x_min`.
fn model_cdf(method: PowerLawMethod, alpha: f64, x_min: u64, x: u64) -> f64 {
    match method {
        PowerLawMethod::Approximate => {
            1.0 - ((x as f64 + 0.5) / (x_min as f64 - 0.5)).powf(1.0 - alpha)
        }
        PowerLawMethod::DiscreteMle => {
            1.0 - hurwitz_zeta(alpha, x as f64 + 1.0) / hurwitz_zeta(alpha, x_min as f64)
        }
    }
}

fn ks_distance(method: PowerLawMethod, alpha: f64, x_min: u64, tail: &Tail) -> f64 {
    let n = tail.values.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    let mut below_prev = 0.0;
    while i < tail.values.len() {
        let x = tail.values[i];
        let mut j = i;
        while j < tail.values.len() && tail.values[j] == x {
            j += 1;
        }
        // Just before x the empirical CDF still sits at its previous level,
        // while the model has risen through x - 1.
        if x > x_min {
            worst = worst.max((below_prev - model_cdf(method, alpha, x_min, x - 1)).abs());
        }
        let at = j as f64 / n;
        worst = worst.max((at - model_cdf(method, alpha, x_min, x)).abs());
        below_prev = at;
        i = j;
    }
    worst
}

/// Fits the power-law exponent to the observations `≥ x_min`. Zero degrees
/// should be removed beforehand; they fall below any valid `x_min` anyway.
pub fn fit_power_law(degrees: &[u64], x_min: u64, method: PowerLawMethod) -> Result<PowerLawFit, FitError> {
    let tail = tail_of(degrees, x_min)?;
    let n = tail.values.len() as f64;
    let alpha = match method {
        PowerLawMethod::Approximate => {
            let shifted = (x_min as f64 - 0.5).ln();
            1.0 + n / (tail.sum_ln - n * shifted)
        }
        PowerLawMethod::DiscreteMle => discrete_mle(x_min, &tail)?,
    };
    Ok(PowerLawFit {
        alpha,
        x_min,
        n_tail: tail.values.len() as u64,
        log_likelihood: continuous_log_likelihood(alpha, x_min, &tail),
        method,
        ks_distance: ks_distance(method, alpha, x_min, &tail),
    })
}

/// Chooses `x_min` by minimizing the KS distance over the smallest
/// `max_candidates` distinct observed values that leave a tail of at least
/// `min_tail` observations. Ties go to the smaller `x_min`.
pub fn scan_x_min(
    degrees: &[u64],
    method: PowerLawMethod,
    max_candidates: usize,
    min_tail: usize,
) -> Result<PowerLawFit, FitError> {
    let mut sorted: Vec<u64> = degrees.iter().copied().filter(|&d| d > 0).collect();
    sorted.sort_unstable();
    let mut best: Option<PowerLawFit> = None;
    let mut last_err = FitError::EmptyTail { x_min: 1 };
    let mut tried = 0;
    let mut i = 0;
    while i < sorted.len() && tried < max_candidates {
        let x = sorted[i];
        if sorted.len() - i < min_tail.max(2) {
            break;
        }
        tried += 1;
        match fit_power_law(&sorted[i..], x, method) {
            Ok(fit) => {
                if best.is_none_or(|b| fit.ks_distance < b.ks_distance) {
                    best = Some(fit);
                }
            }
            Err(e) => last_err = e,
        }
        while i < sorted.len() && sorted[i] == x {
            i += 1;
        }
    }
    best.ok_or(last_err)
}

/// `|E| = a |V|^b` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerModelFit {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    pub n_points: usize,
}

impl PowerModelFit {
    pub fn predict(&self, nodes: f64) -> f64 {
        self.a * nodes.powf(self.b)
    }
}

/// `1 - (1 - r2)(n - 1)/(n - p - 1)`.
pub fn adjusted_r2(r2: f64, n: usize, p: usize) -> Result<f64, FitError> {
    if n <= p + 1 {
        return Err(FitError::TooFewObservations { n, p });
    }
    if !(0.0..=1.0).contains(&r2) {
        return Err(FitError::InvalidR2(r2));
    }
    Ok(1.0 - (1.0 - r2) * (n as f64 - 1.0) / (n as f64 - p as f64 - 1.0))
}

/// Ordinary least squares of `ln E` on `ln V` over `(nodes, edges)` points.
pub fn fit_power_model(points: &[(f64, f64)]) -> Result<PowerModelFit, FitError> {
    if points.len() < 3 {
        return Err(FitError::InsufficientPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|&(v, e)| !(v > 0.0 && e > 0.0)) {
        return Err(FitError::NonPositive);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError::ZeroVariance);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let b = sxy / sxx;
    let intercept = mean_y - b * mean_x;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - b * x).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(PowerModelFit {
        a: intercept.exp(),
        b,
        r2,
        adjusted_r2: adjusted_r2(r2, points.len(), 1)?,
        n_points: points.len(),
    })
}

/// Relative growth rate over `[t1, t2]`, per month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRate {
    pub rgr: f64,
    pub t1: MonthIndex,
    pub t2: MonthIndex,
    pub s1: f64,
    pub s2: f64,
}

/// `(ln s2 - ln s1) / (t2 - t1)`.
pub fn rgr(s1: f64, t1: MonthIndex, s2: f64, t2: MonthIndex) -> Result<GrowthRate, FitError> {
    if !(s1 > 0.0 && s2 > 0.0) {
        return Err(FitError::NonPositive);
    }
    if t2 <= t1 {
        return Err(FitError::InvalidInterval);
    }
    Ok(GrowthRate {
        rgr: (s2.ln() - s1.ln()) / f64::from(t2.0 - t1.0),
        t1,
        t2,
        s1,
        s2,
    })
}

/// Pearson correlation of two equally long series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, FitError> {
    if x.len() != y.len() {
        return Err(FitError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(FitError::InsufficientPoints { needed: 3, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(FitError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// One price per calendar month.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PriceSeries {
    prices: BTreeMap<YearMonth, f64>,
}

impl PriceSeries {
    pub fn new(prices: BTreeMap<YearMonth, f64>) -> Result<Self, FitError> {
        if prices.values().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(FitError::NonPositive);
        }
        Ok(PriceSeries { prices })
    }

    /// Reads a `month,price` CSV with `YYYY-MM` months.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, FitError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| FitError::PriceFile(e.to_string()))?;
        if !headers.iter().eq(["month", "price"]) {
            return Err(FitError::PriceFile("expected header month,price".into()));
        }
        let mut prices = BTreeMap::new();
        for row in rdr.records() {
            let row = row.map_err(|e| FitError::PriceFile(e.to_string()))?;
            let line = row.position().map_or(0, |p| p.line());
            let month: YearMonth = row[0]
                .parse()
                .map_err(|e| FitError::PriceFile(format!("line {line}: {e}")))?;
            let price: f64 = row[1]
                .trim()
                .parse()
                .map_err(|_| FitError::PriceFile(format!("line {line}: bad price {:?}", &row[1])))?;
            if !(price > 0.0 && price.is_finite()) {
                return Err(FitError::PriceFile(format!("line {line}: price must be positive")));
            }
            if prices.insert(month, price).is_some() {
                return Err(FitError::PriceFile(format!("line {line}: duplicate month {month}")));
            }
        }
        Ok(PriceSeries { prices })
    }

    pub fn get(&self, month: YearMonth) -> Option<f64> {
        self.prices.get(&month).copied()
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (YearMonth, f64)> + '_ {
        self.prices.iter().map(|(&m, &p)| (m, p))
    }
}

/// A metric series and the price series joined on month.
#[derive(Debug, Clone, PartialEq)]
pub struct Aligned {
    pub months: Vec<YearMonth>,
    pub metric: Vec<f64>,
    pub price: Vec<f64>,
    /// Months present on only one side.
    pub dropped: usize,
}

impl Aligned {
    pub fn correlation(&self) -> Result<f64, FitError> {
        pearson(&self.metric, &self.price)
    }
}

pub fn align_with_price(metric: &BTreeMap<YearMonth, f64>, price: &PriceSeries) -> Result<Aligned, FitError> {
    let mut aligned = Aligned {
        months: Vec::new(),
        metric: Vec::new(),
        price: Vec::new(),
        dropped: 0,
    };
    for (&month, &value) in metric {
        match price.get(month) {
            Some(p) => {
                aligned.months.push(month);
                aligned.metric.push(value);
                aligned.price.push(p);
            }
            None => aligned.dropped += 1,
        }
    }
    aligned.dropped += price.len() - aligned.months.len();
    if aligned.months.is_empty() {
        return Err(FitError::NoOverlap);
    }
    Ok(aligned)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_zeta_reference_values() {
        // ζ(2) = π²/6, ζ(4) = π⁴/90; the rest from an arbitrary-precision library.
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((hurwitz_zeta(2.5, 1.0) - 1.341_487_257_250_917).abs() < 1e-13);
        assert!((hurwitz_zeta(1.5, 0.5) - 4.776_537_947_554_833).abs() < 1e-12);
        assert!((hurwitz_zeta(3.0, 7.0) - 0.011_765_236_492_927_619).abs() < 1e-15);
        assert!((hurwitz_zeta(1.01, 1.0) - 100.577_943_338_496_78).abs() < 1e-9);
    }

    #[test]
    fn hurwitz_recurrence() {
        for &(s, q) in &[(2.2, 1.0), (3.7, 4.5), (1.3, 1000.0)] {
            let lhs = hurwitz_zeta(s, q) - hurwitz_zeta(s, q + 1.0);
            assert!((lhs - q.powf(-s)).abs() < 1e-13 * q.powf(-s).max(1.0), "{s} {q}");
        }
    }

    #[test]
    fn closed_form_example() {
        let fit = fit_power_law(&[1, 1, 1, 1, 2], 1, PowerLawMethod::Approximate).unwrap();
        // 1 + 5 / (6 ln 2)
        assert!((fit.alpha - (1.0 + 5.0 / (6.0 * 2f64.ln()))).abs() < 1e-12);
        assert!((fit.alpha - 2.2022).abs() < 1e-3);
        assert_eq!(fit.n_tail, 5);
        assert!((fit.normalization() - (fit.alpha - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_empty_tails() {
        for method in [PowerLawMethod::Approximate, PowerLawMethod::DiscreteMle] {
            assert_eq!(
                fit_power_law(&[1, 1, 1], 1, method),
                Err(FitError::DegenerateTail { x_min: 1 })
            );
            assert_eq!(fit_power_law(&[1, 2, 3], 3, method), Err(FitError::EmptyTail { x_min: 3 }));
            assert_eq!(fit_power_law(&[], 1, method), Err(FitError::EmptyTail { x_min: 1 }));
            assert_eq!(fit_power_law(&[1, 2], 0, method), Err(FitError::InvalidXMin));
        }
    }

    #[test]
    fn discrete_mle_stationary_point() {
        // At the optimum, the mean of ln x equals -ζ'(α)/ζ(α); check by finite differences.
        let data = [1u64, 1, 1, 2, 2, 3, 5, 8, 13, 40];
        let fit = fit_power_law(&data, 1, PowerLawMethod::DiscreteMle).unwrap();
        let mean_ln = data.iter().map(|&x| (x as f64).ln()).sum::<f64>() / data.len() as f64;
        let h = 1e-6;
        let dlog = (hurwitz_zeta(fit.alpha + h, 1.0).ln() - hurwitz_zeta(fit.alpha - h, 1.0).ln()) / (2.0 * h);
        assert!((mean_ln + dlog).abs() < 1e-6, "{}", mean_ln + dlog);
    }

    #[test]
    fn power_model_exact_data() {
        let fit = fit_power_model(&[(10.0, 20.0), (100.0, 200.0), (1000.0, 2000.0)]).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-9);
        assert!((fit.b - 1.0).abs() < 1e-9);
        assert!((fit.adjusted_r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn power_model_errors() {
        assert_eq!(
            fit_power_model(&[(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)]),
            Err(FitError::ZeroVariance)
        );
        assert_eq!(
            fit_power_model(&[(10.0, 1.0), (20.0, 2.0)]),
            Err(FitError::InsufficientPoints { needed: 3, got: 2 })
        );
        assert_eq!(
            fit_power_model(&[(10.0, 0.0), (20.0, 2.0), (30.0, 3.0)]),
            Err(FitError::NonPositive)
        );
    }

    #[test]
    fn adjusted_r2_examples() {
        assert_eq!(adjusted_r2(1.0, 10, 3).unwrap(), 1.0);
        assert!((adjusted_r2(0.99, 50, 1).unwrap() - 0.989_791_666_666_666_7).abs() < 1e-12);
        assert_eq!(adjusted_r2(0.5, 2, 1), Err(FitError::TooFewObservations { n: 2, p: 1 }));
        assert!(adjusted_r2(1.5, 10, 1).is_err());
    }

    #[test]
    fn rgr_examples() {
        let e = std::f64::consts::E;
        assert!((rgr(100.0, MonthIndex(0), 100.0 * e, MonthIndex(1)).unwrap().rgr - 1.0).abs() < 1e-12);
        assert_eq!(rgr(7.0, MonthIndex(0), 7.0, MonthIndex(5)).unwrap().rgr, 0.0);
        let g = rgr(50.0, MonthIndex(2), 400.0, MonthIndex(6)).unwrap();
        assert!((g.rgr - 8f64.ln() / 4.0).abs() < 1e-12);
        assert!((g.rgr - 0.519_86).abs() < 1e-5);
        assert_eq!(rgr(0.0, MonthIndex(0), 1.0, MonthIndex(1)), Err(FitError::NonPositive));
        assert_eq!(rgr(1.0, MonthIndex(3), 1.0, MonthIndex(3)), Err(FitError::InvalidInterval));
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 4.0, 8.0, 3.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let affine: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&x, &affine).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[1.0; 5]), Err(FitError::ZeroVariance));
        assert!(matches!(pearson(&x[..2], &x[..2]), Err(FitError::InsufficientPoints { .. })));
        assert_eq!(pearson(&x, &x[..3]), Err(FitError::LengthMismatch(5, 3)));
    }

    fn months(start: &str, n: u32) -> Vec<YearMonth> {
        let s: YearMonth = start.parse().unwrap();
        (0..n).map(|i| s.offset(MonthIndex(i))).collect()
    }

    #[test]
    fn alignment_examples() {
        let metric: BTreeMap<_, _> = months("2017-01", 12).into_iter().map(|m| (m, 1.0)).collect();
        let full = PriceSeries::new(months("2017-01", 12).into_iter().map(|m| (m, 5.0)).collect()).unwrap();
        let a = align_with_price(&metric, &full).unwrap();
        assert_eq!((a.months.len(), a.dropped), (12, 0));

        let half = PriceSeries::new(months("2017-07", 6).into_iter().map(|m| (m, 5.0)).collect()).unwrap();
        let a = align_with_price(&metric, &half).unwrap();
        assert_eq!((a.months.len(), a.dropped), (6, 6));

        let none = PriceSeries::new(months("2019-01", 3).into_iter().map(|m| (m, 5.0)).collect()).unwrap();
        assert_eq!(align_with_price(&metric, &none), Err(FitError::NoOverlap));
    }

    #[test]
    fn price_csv() {
        let p = PriceSeries::from_csv("month,price\n2017-01,998.5\n2017-02,1100\n".as_bytes()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.get("2017-02".parse().unwrap()), Some(1100.0));
        assert!(PriceSeries::from_csv("month,price\n2017-01,0\n".as_bytes()).is_err());
        assert!(PriceSeries::from_csv("month,price\n2017-01,1\n2017-01,2\n".as_bytes()).is_err());
        assert!(PriceSeries::from_csv("m,p\n2017-01,1\n".as_bytes()).is_err());
    }
}
