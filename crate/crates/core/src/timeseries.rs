//! Daily exchange-rate series: loading, weekend exclusion, returns,
//! cross-rate derivation, and alignment with the news series.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use thiserror::Error;

use crate::calendar::is_weekend;
use crate::corpus::DailyNewsSeries;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("rate csv is missing column: {0}")]
    MissingColumn(String),
    #[error("rate csv row {row}: {message}")]
    UnparseableRow { row: usize, message: String },
    #[error("series has no usable points")]
    EmptySeries,
    #[error("series {0} and {1} share no dates")]
    NoOverlap(Pair, Pair),
    #[error("aligned series needs at least 2 common dates, got {0}")]
    InsufficientOverlap(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// A currency pair, base/quote: the level is quote units per base unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub base: String,
    pub quote: String,
}

impl Pair {
    pub fn new(base: &str, quote: &str) -> Self {
        Self {
            base: base.to_uppercase(),
            quote: quote.to_uppercase(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            base: self.quote.clone(),
            quote: self.base.clone(),
        }
    }

    /// Name without the slash, for file names: "GBPEUR".
    pub fn slug(&self) -> String {
        format!("{}{}", self.base, self.quote)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.base, self.quote)
    }
}

impl FromStr for Pair {
    type Err = String;

    /// Accepts "GBP/EUR" or "GBPEUR".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((base, quote)) = s.split_once('/') {
            if base.is_empty() || quote.is_empty() {
                return Err(format!("bad pair: {s:?}"));
            }
            return Ok(Pair::new(base, quote));
        }
        if s.len() == 6 && s.chars().all(|c| c.is_ascii_alphabetic()) {
            return Ok(Pair::new(&s[..3], &s[3..]));
        }
        Err(format!("bad pair: {s:?}"))
    }
}

/// Daily levels for one pair, ordered by date, all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    pub pair: Pair,
    pub points: BTreeMap<NaiveDate, f64>,
}

/// Daily simple returns for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub pair: Pair,
    pub points: BTreeMap<NaiveDate, f64>,
}

/// News and rate observations restricted to their common dates, in date order.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSeries {
    pub dates: Vec<NaiveDate>,
    pub news_values: Vec<f64>,
    pub rate_values: Vec<f64>,
}

impl AlignedSeries {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

/// Which news column feeds the alignment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NewsMetric {
    #[default]
    Mentions,
    Articles,
}

impl NewsMetric {
    pub fn label(&self) -> &'static str {
        match self {
            NewsMetric::Mentions => "mentions",
            NewsMetric::Articles => "articles",
        }
    }
}

/// Which transform of the rate feeds the alignment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RateMode {
    #[default]
    Level,
    PctChange,
    AbsPctChange,
}

impl RateMode {
    pub fn label(&self) -> &'static str {
        match self {
            RateMode::Level => "level",
            RateMode::PctChange => "pct_change",
            RateMode::AbsPctChange => "abs_pct_change",
        }
    }
}

impl RateSeries {
    pub fn new(pair: Pair) -> Self {
        Self {
            pair,
            points: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.points.keys().copied()
    }

    /// Drop Saturday/Sunday observations. Applied to every series (crypto
    /// included) before alignment and event studies so all pairs share the
    /// weekday grid.
    pub fn exclude_weekends(&self) -> Self {
        Self {
            pair: self.pair.clone(),
            points: self
                .points
                .iter()
                .filter(|(d, _)| !is_weekend(**d))
                .map(|(d, v)| (*d, *v))
                .collect(),
        }
    }

    /// Flip the quote direction: level' = 1/level, pair' = quote/base.
    pub fn invert(&self) -> Self {
        Self {
            pair: self.pair.inverse(),
            points: self.points.iter().map(|(d, v)| (*d, 1.0 / v)).collect(),
        }
    }
}

/// Load a rate CSV with a Date column and the named value column.
///
/// Dates may be DD/MM/YYYY or YYYY-MM-DD (auto-detected per row). Rows whose
/// value cell is empty (or a vendor missing marker: NA, N/A) are skipped.
pub fn load_rate_csv(path: &Path, pair: Pair, value_column: &str) -> Result<RateSeries, SeriesError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let headers = reader.headers()?.clone();
    let date_col = headers
        .iter()
        .position(|h| h.trim() == "Date")
        .ok_or_else(|| SeriesError::MissingColumn("Date".to_string()))?;
    let value_col = headers
        .iter()
        .position(|h| h.trim() == value_column)
        .ok_or_else(|| SeriesError::MissingColumn(value_column.to_string()))?;

    let mut points = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record?;
        let date_str = record.get(date_col).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d")
            .or_else(|_| NaiveDate::parse_from_str(date_str, "%d/%m/%Y"))
            .map_err(|_| SeriesError::UnparseableRow {
                row,
                message: format!("bad date {date_str:?}"),
            })?;
        let cell = record.get(value_col).unwrap_or("").trim();
        if cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("n/a") {
            continue;
        }
        let value: f64 = cell.parse().map_err(|_| SeriesError::UnparseableRow {
            row,
            message: format!("bad value {cell:?}"),
        })?;
        if !value.is_finite() || value <= 0.0 {
            return Err(SeriesError::UnparseableRow {
                row,
                message: format!("non-positive level {value}"),
            });
        }
        points.insert(date, value);
    }
    if points.is_empty() {
        return Err(SeriesError::EmptySeries);
    }
    Ok(RateSeries { pair, points })
}

/// Simple returns between consecutive retained dates; the first date drops out.
pub fn pct_change(series: &RateSeries) -> Result<ReturnSeries, SeriesError> {
    if series.len() < 2 {
        return Err(SeriesError::EmptySeries);
    }
    let mut points = BTreeMap::new();
    let mut prev: Option<f64> = None;
    for (date, level) in &series.points {
        if let Some(p) = prev {
            points.insert(*date, (level - p) / p);
        }
        prev = Some(*level);
    }
    Ok(ReturnSeries {
        pair: series.pair.clone(),
        points,
    })
}

/// Elementwise absolute value of `pct_change`.
pub fn abs_pct_change(series: &RateSeries) -> Result<ReturnSeries, SeriesError> {
    let mut returns = pct_change(series)?;
    for v in returns.points.values_mut() {
        *v = v.abs();
    }
    Ok(returns)
}

/// Derive the cross rate base(eur_gbp.quote)/quote(eur_usd.quote) from two
/// series sharing the same base currency: GBPUSD = EURUSD / EURGBP on every
/// common date.
pub fn derive_cross_rate(eur_usd: &RateSeries, eur_gbp: &RateSeries) -> Result<RateSeries, SeriesError> {
    let pair = Pair::new(&eur_gbp.pair.quote, &eur_usd.pair.quote);
    let points: BTreeMap<NaiveDate, f64> = eur_usd
        .points
        .iter()
        .filter_map(|(date, usd)| eur_gbp.points.get(date).map(|gbp| (*date, usd / gbp)))
        .collect();
    if points.is_empty() {
        return Err(SeriesError::NoOverlap(eur_usd.pair.clone(), eur_gbp.pair.clone()));
    }
    Ok(RateSeries { pair, points })
}

/// Restrict news and rate observations to their common dates.
///
/// Weekend exclusion must already have been applied to both sides. The rate
/// side is transformed per `rate_mode` before intersecting, so in the change
/// modes the first rate date has already dropped out.
pub fn align(
    news: &DailyNewsSeries,
    rate: &RateSeries,
    news_metric: NewsMetric,
    rate_mode: RateMode,
) -> Result<AlignedSeries, SeriesError> {
    let rate_points: BTreeMap<NaiveDate, f64> = match rate_mode {
        RateMode::Level => rate.points.clone(),
        RateMode::PctChange => pct_change(rate)?.points,
        RateMode::AbsPctChange => abs_pct_change(rate)?.points,
    };
    let mut dates = Vec::new();
    let mut news_values = Vec::new();
    let mut rate_values = Vec::new();
    for (date, counts) in &news.entries {
        if let Some(value) = rate_points.get(date) {
            dates.push(*date);
            news_values.push(match news_metric {
                NewsMetric::Mentions => counts.mentions as f64,
                NewsMetric::Articles => counts.articles as f64,
            });
            rate_values.push(*value);
        }
    }
    if dates.len() < 2 {
        return Err(SeriesError::InsufficientOverlap(dates.len()));
    }
    Ok(AlignedSeries {
        dates,
        news_values,
        rate_values,
    })
}
