//! Mean-adjusted abnormal-return event studies with t-tests, cross-pair
//! panels, and numeraire attribution.
//!
//! For each event the expected return is the mean simple return over an
//! estimation window of trading days ending just before the event window.
//! AR_t = R_t - mean, tested with t = AR_t / s_AR where s_AR^2 pools the
//! squared estimation-window ARs.

use chrono::{Duration, NaiveDate};
use thiserror::Error;

use crate::stats::student_t_critical;
use crate::timeseries::{Pair, RateSeries};

#[derive(Debug, Error)]
pub enum EventStudyError {
    #[error("{pair}: need {needed} trading days before the event window, have {available}")]
    InsufficientHistory {
        pair: Pair,
        needed: usize,
        available: usize,
    },
    #[error("{pair}: no trading day at or shortly after {date}")]
    EventDateNotTraded { pair: Pair, date: NaiveDate },
    #[error("{pair}: estimation-window abnormal returns have zero variance, t undefined")]
    DegenerateVariance { pair: Pair },
    #[error("panel row is missing pair {0}")]
    MissingPair(String),
}

/// Which window feeds s_AR^2. Estimation is the standard reading; Event is
/// kept for comparison against the alternative reading of the variance sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum VarianceWindow {
    #[default]
    Estimation,
    Event,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventStudyConfig {
    /// Trading days in the estimation window, ending the day before
    /// relative day -event_half_width.
    pub estimation_len: usize,
    /// Half-width h of the [-h, +h] event window in trading days.
    pub event_half_width: usize,
    /// Two-tailed significance level for per-day t-tests.
    pub alpha: f64,
    pub variance_window: VarianceWindow,
    /// Calendar-day bound for shifting an event date that falls on a
    /// non-trading day forward to the next traded date.
    pub max_shift_days: i64,
}

impl Default for EventStudyConfig {
    fn default() -> Self {
        Self {
            estimation_len: 150,
            event_half_width: 5,
            alpha: 0.10,
            variance_window: VarianceWindow::Estimation,
            max_shift_days: 7,
        }
    }
}

impl EventStudyConfig {
    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }
}

/// One observed event-window day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventDayObservation {
    pub date: NaiveDate,
    pub level: f64,
    pub ret: f64,
    pub ar: f64,
    pub t_stat: f64,
    pub significant: bool,
}

/// One event-window row; `obs` is None where the series has no data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventStudyRow {
    pub relative_day: i32,
    pub obs: Option<EventDayObservation>,
}

/// Full per-event, per-pair event-study table.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStudyReport {
    pub pair: Pair,
    /// The date asked for, before any holiday shift.
    pub requested_date: NaiveDate,
    /// The trading day actually studied (relative day 0).
    pub event_date: NaiveDate,
    pub estimation_mean: f64,
    pub s_ar: f64,
    pub df: usize,
    pub critical_t: f64,
    pub rows: Vec<EventStudyRow>,
}

impl EventStudyReport {
    pub fn row(&self, relative_day: i32) -> Option<&EventStudyRow> {
        self.rows.iter().find(|r| r.relative_day == relative_day)
    }
}

/// Resolve an event date onto the series' trading calendar: the date itself
/// if traded, otherwise the next traded date within `max_shift_days`.
pub fn shift_to_traded(
    series: &RateSeries,
    date: NaiveDate,
    max_shift_days: i64,
) -> Option<NaiveDate> {
    let limit = date + Duration::days(max_shift_days);
    series
        .points
        .range(date..=limit)
        .next()
        .map(|(traded, _)| *traded)
}

/// Run the mean-adjusted event study for one pair and one event date.
pub fn run_event_study(
    series: &RateSeries,
    event_date: NaiveDate,
    cfg: &EventStudyConfig,
) -> Result<EventStudyReport, EventStudyError> {
    let pair = series.pair.clone();
    let dates: Vec<NaiveDate> = series.points.keys().copied().collect();
    let levels: Vec<f64> = series.points.values().copied().collect();

    let studied = shift_to_traded(series, event_date, cfg.max_shift_days)
        .ok_or_else(|| EventStudyError::EventDateNotTraded {
            pair: pair.clone(),
            date: event_date,
        })?;
    let idx = dates.binary_search(&studied).expect("shifted date is in the series");

    let h = cfg.event_half_width;
    // Estimation indices end immediately before relative day -h; every
    // estimation return needs the prior day's level, hence the +1.
    let needed = cfg.estimation_len + h + 1;
    if idx < needed {
        return Err(EventStudyError::InsufficientHistory {
            pair,
            needed,
            available: idx.saturating_sub(h),
        });
    }
    let window_anchor = idx - h;
    let est_start = window_anchor - cfg.estimation_len;

    let ret_at = |i: usize| (levels[i] - levels[i - 1]) / levels[i - 1];

    let estimation_returns: Vec<f64> = (est_start..window_anchor).map(ret_at).collect();
    let estimation_mean =
        estimation_returns.iter().sum::<f64>() / cfg.estimation_len as f64;

    let event_obs: Vec<(i32, Option<usize>)> = (-(h as i32)..=h as i32)
        .map(|rel| {
            let i = idx as i64 + rel as i64;
            if i >= 0 && (i as usize) < dates.len() {
                (rel, Some(i as usize))
            } else {
                (rel, None)
            }
        })
        .collect();

    let (s_ar, df) = match cfg.variance_window {
        VarianceWindow::Estimation => {
            let ss: f64 = estimation_returns
                .iter()
                .map(|r| (r - estimation_mean).powi(2))
                .sum();
            ((ss / (cfg.estimation_len - 2) as f64).sqrt(), cfg.estimation_len - 2)
        }
        VarianceWindow::Event => {
            let ars: Vec<f64> = event_obs
                .iter()
                .filter_map(|(_, i)| i.map(|i| ret_at(i) - estimation_mean))
                .collect();
            if ars.len() < 3 {
                return Err(EventStudyError::InsufficientHistory {
                    pair,
                    needed: 3,
                    available: ars.len(),
                });
            }
            let ss: f64 = ars.iter().map(|a| a * a).sum();
            ((ss / (ars.len() - 2) as f64).sqrt(), ars.len() - 2)
        }
    };
    // Returns recomputed from f64 levels carry ~1e-14 of rounding noise, so a
    // truly constant-return window lands near but not exactly at zero. Any
    // real daily-return dispersion is orders of magnitude above this bound.
    if s_ar < 1e-12 {
        return Err(EventStudyError::DegenerateVariance { pair });
    }
    let critical_t = student_t_critical(cfg.alpha, df);

    let rows = event_obs
        .into_iter()
        .map(|(relative_day, i)| EventStudyRow {
            relative_day,
            obs: i.map(|i| {
                let ret = ret_at(i);
                let ar = ret - estimation_mean;
                let t_stat = ar / s_ar;
                EventDayObservation {
                    date: dates[i],
                    level: levels[i],
                    ret,
                    ar,
                    t_stat,
                    significant: t_stat.abs() >= critical_t,
                }
            }),
        })
        .collect();

    Ok(EventStudyReport {
        pair,
        requested_date: event_date,
        event_date: studied,
        estimation_mean,
        s_ar,
        df,
        critical_t,
        rows,
    })
}

/// Event-day (relative day 0) result for one (event, pair) panel cell.
#[derive(Debug, Clone, PartialEq)]
pub enum PanelCell {
    Available {
        ar: f64,
        t_stat: f64,
        significant: bool,
    },
    /// Data missing or study failed for this cell; carries the reason.
    NotAvailable(String),
}

impl PanelCell {
    pub fn is_available(&self) -> bool {
        matches!(self, PanelCell::Available { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub event_date: NaiveDate,
    pub cells: Vec<PanelCell>,
}

/// Event-day abnormal returns for every (event date, pair) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStudyPanel {
    pub pairs: Vec<Pair>,
    pub rows: Vec<PanelRow>,
}

impl EventStudyPanel {
    pub fn cell(&self, event_date: NaiveDate, pair: &Pair) -> Option<&PanelCell> {
        let col = self.pairs.iter().position(|p| p == pair)?;
        self.rows
            .iter()
            .find(|r| r.event_date == event_date)
            .map(|r| &r.cells[col])
    }
}

/// Run the event study across pairs and events, collecting per-cell failures
/// as NotAvailable instead of aborting the panel.
pub fn run_event_study_panel(
    series_list: &[RateSeries],
    event_dates: &[NaiveDate],
    cfg: &EventStudyConfig,
) -> EventStudyPanel {
    let pairs: Vec<Pair> = series_list.iter().map(|s| s.pair.clone()).collect();
    let rows = event_dates
        .iter()
        .map(|date| PanelRow {
            event_date: *date,
            cells: series_list
                .iter()
                .map(|series| match run_event_study(series, *date, cfg) {
                    Ok(report) => match report.row(0).and_then(|r| r.obs) {
                        Some(obs) => PanelCell::Available {
                            ar: obs.ar,
                            t_stat: obs.t_stat,
                            significant: obs.significant,
                        },
                        None => PanelCell::NotAvailable("event day not observed".to_string()),
                    },
                    Err(e) => PanelCell::NotAvailable(e.to_string()),
                })
                .collect(),
        })
        .collect();
    EventStudyPanel { pairs, rows }
}

/// Who moved: the verdict attributing a bilateral move to one currency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GbpDriven,
    EurDriven,
    Mixed,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::GbpDriven => "gbp_driven",
            Verdict::EurDriven => "eur_driven",
            Verdict::Mixed => "mixed",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Event-day evidence for one pair inside a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEvidence {
    pub pair: Pair,
    pub ar: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumeraireVerdict {
    pub event_date: NaiveDate,
    pub verdict: Verdict,
    /// Evidence in the order GBP/EUR, GBP/USD, EUR/USD.
    pub evidence: [PairEvidence; 3],
}

/// Apply the fixed attribution rule to one panel row holding the three FX
/// pairs GBP/EUR, GBP/USD, EUR/USD:
/// - gbp_driven: GBP/EUR and GBP/USD significant with the same sign, EUR/USD not.
/// - eur_driven: GBP/EUR and EUR/USD significant, GBP/USD not.
/// - mixed: all three significant.
/// - inconclusive: anything else.
pub fn numeraire_verdict(
    panel: &EventStudyPanel,
    row: &PanelRow,
) -> Result<NumeraireVerdict, EventStudyError> {
    let evidence_for = |base: &str, quote: &str| -> Result<PairEvidence, EventStudyError> {
        let pair = Pair::new(base, quote);
        let col = panel
            .pairs
            .iter()
            .position(|p| *p == pair)
            .ok_or_else(|| EventStudyError::MissingPair(pair.to_string()))?;
        match &row.cells[col] {
            PanelCell::Available { ar, significant, .. } => Ok(PairEvidence {
                pair,
                ar: *ar,
                significant: *significant,
            }),
            PanelCell::NotAvailable(_) => Err(EventStudyError::MissingPair(pair.to_string())),
        }
    };
    let gbp_eur = evidence_for("GBP", "EUR")?;
    let gbp_usd = evidence_for("GBP", "USD")?;
    let eur_usd = evidence_for("EUR", "USD")?;

    let same_sign = gbp_eur.ar * gbp_usd.ar > 0.0;
    let verdict = if gbp_eur.significant && gbp_usd.significant && eur_usd.significant {
        Verdict::Mixed
    } else if gbp_eur.significant && gbp_usd.significant && same_sign && !eur_usd.significant {
        Verdict::GbpDriven
    } else if gbp_eur.significant && eur_usd.significant && !gbp_usd.significant {
        Verdict::EurDriven
    } else {
        Verdict::Inconclusive
    };
    Ok(NumeraireVerdict {
        event_date: row.event_date,
        verdict,
        evidence: [gbp_eur, gbp_usd, eur_usd],
    })
}
