//! Pearson correlation in its three temporal framings: overall, cumulative,
//! and sliding-window, with two-tailed significance thresholds.

use chrono::NaiveDate;
use thiserror::Error;

use crate::corpus::DailyNewsSeries;
use crate::stats::student_t_critical;
use crate::timeseries::{align, AlignedSeries, NewsMetric, RateMode, RateSeries, SeriesError};

#[derive(Debug, Error)]
pub enum CorrelationError {
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("one of the vectors is constant, correlation undefined")]
    ZeroVariance,
    #[error("alpha must lie in (0,1), got {0}")]
    InvalidAlpha(f64),
    #[error("degrees of freedom must be at least 1, got {0}")]
    InvalidDf(usize),
    #[error("series of length {n} is shorter than the window length {window_len}")]
    SeriesTooShort { n: usize, window_len: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A Pearson correlation with its significance verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub df: usize,
    pub critical_r: f64,
    pub significant: bool,
}

/// One sliding window's correlation, labeled by the window's end date.
/// `r` is None when the window has zero variance on either side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowPoint {
    /// Index of the window's first observation into `aligned_dates`.
    pub start_idx: usize,
    pub end_date: NaiveDate,
    pub r: Option<f64>,
    pub significant: bool,
}

/// Sliding-window correlations over an aligned series. Carries the aligned
/// date axis so each window's covered dates can be recovered downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowCorrelationSeries {
    pub window_len: usize,
    pub alpha: f64,
    pub critical_r: f64,
    pub aligned_dates: Vec<NaiveDate>,
    pub points: Vec<WindowPoint>,
}

impl WindowCorrelationSeries {
    /// The aligned dates a window covers.
    pub fn window_dates(&self, point: &WindowPoint) -> &[NaiveDate] {
        &self.aligned_dates[point.start_idx..point.start_idx + self.window_len]
    }
}

/// Pearson correlation coefficient, clamped to [-1, 1] against rounding.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, CorrelationError> {
    if x.len() != y.len() {
        return Err(CorrelationError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(CorrelationError::TooShort(n));
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(CorrelationError::ZeroVariance);
    }
    Ok((cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0))
}

/// Two-tailed critical Pearson r at level `alpha` with `df` degrees of
/// freedom: r* = t*/sqrt(t*^2 + df).
pub fn critical_r(df: usize, alpha: f64) -> Result<f64, CorrelationError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CorrelationError::InvalidAlpha(alpha));
    }
    if df < 1 {
        return Err(CorrelationError::InvalidDf(df));
    }
    let t = student_t_critical(alpha, df);
    Ok(t / (t * t + df as f64).sqrt())
}

/// Pearson r together with its two-tailed significance at `alpha`.
pub fn pearson_test(x: &[f64], y: &[f64], alpha: f64) -> Result<CorrelationResult, CorrelationError> {
    let n = x.len();
    if n < 3 {
        return Err(CorrelationError::TooShort(n));
    }
    let r = pearson(x, y)?;
    let df = n - 2;
    let critical = critical_r(df, alpha)?;
    Ok(CorrelationResult {
        r,
        n,
        df,
        critical_r: critical,
        significant: r.abs() >= critical,
    })
}

/// One cell of the overall-correlation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverallCell {
    pub rate_mode: RateMode,
    pub news_metric: NewsMetric,
    pub r: f64,
    pub n: usize,
}

/// The 3x2 overall-correlation table: {level, %change, abs %change} against
/// {mentions, articles}, each over the full aligned period.
pub fn overall_correlation(
    news: &DailyNewsSeries,
    rate: &RateSeries,
) -> Result<Vec<OverallCell>, CorrelationError> {
    let mut cells = Vec::with_capacity(6);
    for rate_mode in [RateMode::Level, RateMode::PctChange, RateMode::AbsPctChange] {
        for news_metric in [NewsMetric::Mentions, NewsMetric::Articles] {
            let aligned = align(news, rate, news_metric, rate_mode)?;
            let r = pearson(&aligned.news_values, &aligned.rate_values)?;
            cells.push(OverallCell {
                rate_mode,
                news_metric,
                r,
                n: aligned.len(),
            });
        }
    }
    Ok(cells)
}

/// Correlation over every prefix of length 2..=n. Prefixes where either side
/// is still constant yield None; the final entry equals the overall r.
pub fn cumulative_correlation(
    aligned: &AlignedSeries,
) -> Result<Vec<(NaiveDate, Option<f64>)>, CorrelationError> {
    let n = aligned.len();
    if n < 3 {
        return Err(CorrelationError::TooShort(n));
    }
    let mut out = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let r = match pearson(&aligned.news_values[..k], &aligned.rate_values[..k]) {
            Ok(r) => Some(r),
            Err(CorrelationError::ZeroVariance) => None,
            Err(e) => return Err(e),
        };
        out.push((aligned.dates[k - 1], r));
    }
    Ok(out)
}

/// Sliding-window correlation: windows of exactly `window_len` consecutive
/// aligned observations, stepped by `step`, labeled by window end date.
/// A window is significant iff |r| >= critical_r(window_len - 2, alpha);
/// zero-variance windows carry no r and are never significant.
pub fn window_correlation(
    aligned: &AlignedSeries,
    window_len: usize,
    step: usize,
    alpha: f64,
) -> Result<WindowCorrelationSeries, CorrelationError> {
    if window_len < 3 {
        return Err(CorrelationError::TooShort(window_len));
    }
    let n = aligned.len();
    if n < window_len {
        return Err(CorrelationError::SeriesTooShort { n, window_len });
    }
    let step = step.max(1);
    let critical = critical_r(window_len - 2, alpha)?;
    let mut points = Vec::new();
    let mut start = 0;
    while start + window_len <= n {
        let end = start + window_len;
        let r = match pearson(
            &aligned.news_values[start..end],
            &aligned.rate_values[start..end],
        ) {
            Ok(r) => Some(r),
            Err(CorrelationError::ZeroVariance) => None,
            Err(e) => return Err(e),
        };
        points.push(WindowPoint {
            start_idx: start,
            end_date: aligned.dates[end - 1],
            r,
            significant: r.map(|r| r.abs() >= critical).unwrap_or(false),
        });
        start += step;
    }
    Ok(WindowCorrelationSeries {
        window_len,
        alpha,
        critical_r: critical,
        aligned_dates: aligned.dates.clone(),
        points,
    })
}
