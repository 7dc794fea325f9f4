//! Candidate major-event dates from two detectors: dates inside significant
//! correlation windows (filtered to above-average article days and collapsed
//! per window span), and dates in the top article-count quantile.

use chrono::NaiveDate;

use crate::calendar::weekdays_between;
use crate::correlation::WindowCorrelationSeries;
use crate::corpus::DailyNewsSeries;

/// Which detector produced an event date.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMethod {
    WindowCorrelation,
    TopQuantile,
}

impl DetectionMethod {
    pub fn label(&self) -> &'static str {
        match self {
            DetectionMethod::WindowCorrelation => "window_correlation",
            DetectionMethod::TopQuantile => "top_quantile",
        }
    }
}

/// A candidate major-event date with the evidence that selected it.
#[derive(Debug, Clone, PartialEq)]
pub struct EventDate {
    pub date: NaiveDate,
    pub method: DetectionMethod,
    /// Strongest |r| among the significant windows containing the date;
    /// None for the top-quantile method.
    pub window_r: Option<f64>,
    pub article_count: u32,
    pub mention_count: u32,
}

/// Window-correlation detector.
///
/// Collects every date covered by a significant window, keeps only dates whose
/// article count strictly exceeds the mean daily count over the full study
/// range, then collapses dates within one window length of each other to a
/// single representative.
pub fn detect_window_events(wc: &WindowCorrelationSeries, news: &DailyNewsSeries) -> Vec<EventDate> {
    let window_len = wc.window_len;
    // Strongest significant-window r covering each date.
    let mut covered: std::collections::BTreeMap<NaiveDate, f64> = std::collections::BTreeMap::new();
    for point in &wc.points {
        if !point.significant {
            continue;
        }
        let r = match point.r {
            Some(r) => r,
            None => continue,
        };
        for date in wc.window_dates(point) {
            covered
                .entry(*date)
                .and_modify(|best| {
                    if r.abs() > best.abs() {
                        *best = r;
                    }
                })
                .or_insert(r);
        }
    }

    let mean = news.mean_article_count();
    let surviving: Vec<(NaiveDate, f64)> = covered
        .into_iter()
        .filter(|(date, _)| {
            news.entries
                .get(date)
                .map(|c| (c.articles as f64) > mean)
                .unwrap_or(false)
        })
        .collect();

    let dates: Vec<NaiveDate> = surviving.iter().map(|(d, _)| *d).collect();
    let counts: Vec<u32> = dates
        .iter()
        .map(|d| news.entries.get(d).map(|c| c.articles).unwrap_or(0))
        .collect();
    let representatives = cluster_collapse(&dates, &counts, window_len as i64);

    let r_by_date: std::collections::BTreeMap<NaiveDate, f64> = surviving.into_iter().collect();
    representatives
        .into_iter()
        .map(|date| {
            let counts = news.entries.get(&date).copied().unwrap_or_default();
            EventDate {
                date,
                method: DetectionMethod::WindowCorrelation,
                window_r: r_by_date.get(&date).copied(),
                article_count: counts.articles,
                mention_count: counts.mentions,
            }
        })
        .collect()
}

/// Top-quantile detector: the days whose article count reaches the count of
/// the ceil(q*N)-th busiest day, ties at the threshold included.
pub fn detect_top_quantile_events(news: &DailyNewsSeries, q: f64) -> Vec<EventDate> {
    assert!(q > 0.0 && q < 1.0, "quantile q must lie in (0,1)");
    let n = news.len();
    if n == 0 {
        return Vec::new();
    }
    let mut counts: Vec<u32> = news.entries.values().map(|c| c.articles).collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let take = ((q * n as f64).ceil() as usize).clamp(1, n);
    let threshold = counts[take - 1];
    news.entries
        .iter()
        .filter(|(_, c)| c.articles >= threshold)
        .map(|(date, c)| EventDate {
            date: *date,
            method: DetectionMethod::TopQuantile,
            window_r: None,
            article_count: c.articles,
            mention_count: c.mentions,
        })
        .collect()
}

/// Greedy left-to-right clustering of sorted dates: a date within `span`
/// weekdays of the previous date joins its cluster. Each cluster is replaced
/// by its member with the highest article count, earliest date on ties.
pub fn cluster_collapse(dates: &[NaiveDate], article_counts: &[u32], span: i64) -> Vec<NaiveDate> {
    assert_eq!(dates.len(), article_counts.len());
    assert!(span > 0, "span must be positive");
    debug_assert!(dates.windows(2).all(|w| w[0] <= w[1]), "dates must be sorted");

    let mut out = Vec::new();
    let mut best: Option<(NaiveDate, u32)> = None;
    let mut prev: Option<NaiveDate> = None;
    for (date, count) in dates.iter().zip(article_counts) {
        let starts_new_cluster = match prev {
            Some(p) => weekdays_between(p, *date) > span,
            None => true,
        };
        if starts_new_cluster {
            if let Some((rep, _)) = best.take() {
                out.push(rep);
            }
            best = Some((*date, *count));
        } else if let Some((_, best_count)) = best {
            // Strictly greater keeps the earliest date on ties.
            if *count > best_count {
                best = Some((*date, *count));
            }
        }
        prev = Some(*date);
    }
    if let Some((rep, _)) = best {
        out.push(rep);
    }
    out
}
