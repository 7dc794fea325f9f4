//! Calendar helpers shared across the pipeline: inclusive date ranges,
//! weekend tests, and weekday distances.

use chrono::{Datelike, Duration, NaiveDate, Weekday};

/// Inclusive calendar date interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        Self { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        date >= self.start && date <= self.end
    }

    /// Iterate every calendar day in the range, weekends included.
    pub fn days(&self) -> impl Iterator<Item = NaiveDate> {
        let start = self.start;
        let n = if self.is_empty() {
            0
        } else {
            (self.end - self.start).num_days() + 1
        };
        (0..n).map(move |i| start + Duration::days(i))
    }
}

pub fn is_weekend(date: NaiveDate) -> bool {
    matches!(date.weekday(), Weekday::Sat | Weekday::Sun)
}

/// Number of weekdays in the half-open interval `(a, b]`.
///
/// Consecutive weekdays are distance 1 apart; a Friday and the following
/// Monday are also distance 1 apart. Returns 0 when `b <= a`.
pub fn weekdays_between(a: NaiveDate, b: NaiveDate) -> i64 {
    if b <= a {
        return 0;
    }
    let mut count = 0;
    let mut d = a + Duration::days(1);
    while d <= b {
        if !is_weekend(d) {
            count += 1;
        }
        d = d + Duration::days(1);
    }
    count
}
