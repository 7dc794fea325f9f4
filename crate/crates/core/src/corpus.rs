//! News-article ingestion and text normalization.
//!
//! Articles pass through a fixed pipeline: boilerplate trimming, lowercasing,
//! stripping non-ASCII and punctuation, whitespace tokenization, stopword
//! removal, and digit-token removal. Cleaned corpora aggregate into daily
//! article/mention counts.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

use crate::calendar::{is_weekend, DateRange};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no valid YYYYMMDD path segment in url: {0}")]
    MalformedUrl(String),
    #[error("date range is empty")]
    EmptyRange,
    #[error("news csv is missing column: {0}")]
    MissingColumn(String),
    #[error("news csv row {row}: {message}")]
    UnparseableRow { row: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// One news item after preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub date: NaiveDate,
    pub raw_text: String,
    pub tokens: Vec<String>,
    pub source: String,
}

/// Per-day counts on the day's articles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DailyCounts {
    pub articles: u32,
    pub mentions: u32,
}

/// Per-calendar-day article and term-mention counts, one entry per day.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DailyNewsSeries {
    pub entries: BTreeMap<NaiveDate, DailyCounts>,
}

impl DailyNewsSeries {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Drop Saturday/Sunday entries.
    pub fn exclude_weekends(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(d, _)| !is_weekend(**d))
                .map(|(d, c)| (*d, *c))
                .collect(),
        }
    }

    /// Arithmetic mean of the daily article count over all entries,
    /// zero-article days included.
    pub fn mean_article_count(&self) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let total: u64 = self.entries.values().map(|c| c.articles as u64).sum();
        total as f64 / self.entries.len() as f64
    }
}

/// How the daily mention count is taken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MentionMode {
    /// Exact equality against cleaned tokens; "brexiteer" is not a "brexit" mention.
    #[default]
    TokenExact,
    /// Non-overlapping substring occurrences in the lowercased raw text,
    /// for sensitivity analysis against the token-based count.
    RawSubstring,
}

/// Parse the date out of a URL whose path carries a `/YYYYMMDD/` segment.
pub fn extract_date_from_url(url: &str) -> Result<NaiveDate, CorpusError> {
    for segment in url.split('/') {
        if segment.len() == 8 && segment.bytes().all(|b| b.is_ascii_digit()) {
            let year: i32 = segment[0..4].parse().unwrap();
            let month: u32 = segment[4..6].parse().unwrap();
            let day: u32 = segment[6..8].parse().unwrap();
            return NaiveDate::from_ymd_opt(year, month, day)
                .ok_or_else(|| CorpusError::MalformedUrl(url.to_string()));
        }
    }
    Err(CorpusError::MalformedUrl(url.to_string()))
}

/// Cut boilerplate: everything from the first occurrence of any marker to the
/// end of the text is dropped. No marker present leaves the text untouched.
pub fn trim_article(raw: &str, boilerplate_markers: &[String]) -> String {
    let cut = boilerplate_markers
        .iter()
        .filter(|m| !m.is_empty())
        .filter_map(|m| raw.find(m.as_str()))
        .min();
    match cut {
        Some(pos) => raw[..pos].to_string(),
        None => raw.to_string(),
    }
}

/// Lowercase, strip non-ASCII characters and ASCII punctuation, then split on
/// whitespace. Punctuation is deleted, not replaced: "pro-brexit" becomes
/// "probrexit".
pub fn clean_string(raw: &str) -> Vec<String> {
    let cleaned: String = raw
        .to_lowercase()
        .chars()
        .filter(|c| c.is_ascii() && !c.is_ascii_punctuation())
        .collect();
    cleaned.split_whitespace().map(str::to_string).collect()
}

/// Order-preserving stopword filter; exact matches on lowercased tokens.
pub fn remove_stopwords(tokens: Vec<String>, stopwords: &HashSet<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !stopwords.contains(t)).collect()
}

/// Drop tokens that consist entirely of digits; mixed tokens like "eu27" stay.
pub fn remove_numbers(tokens: Vec<String>) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| !t.bytes().all(|b| b.is_ascii_digit()))
        .collect()
}

/// The full five-step pipeline: trim, clean, tokenize, stopwords, numbers.
pub fn preprocess(raw: &str, stopwords: &HashSet<String>, markers: &[String]) -> Vec<String> {
    let trimmed = trim_article(raw, markers);
    remove_numbers(remove_stopwords(clean_string(&trimmed), stopwords))
}

/// Count `term` occurrences in one article under the given mode.
fn count_mentions(article: &Article, term: &str, mode: MentionMode) -> u32 {
    match mode {
        MentionMode::TokenExact => article.tokens.iter().filter(|t| t.as_str() == term).count() as u32,
        MentionMode::RawSubstring => {
            let hay = article.raw_text.to_lowercase();
            if term.is_empty() {
                return 0;
            }
            let mut count = 0;
            let mut from = 0;
            while let Some(pos) = hay[from..].find(term) {
                count += 1;
                from += pos + term.len();
            }
            count
        }
    }
}

/// Aggregate a corpus to per-day article and mention counts over `range`.
///
/// Every calendar day in the range gets an entry (weekends included at this
/// stage); days without articles carry (0, 0).
pub fn aggregate_daily(
    corpus: &[Article],
    term: &str,
    range: DateRange,
    mode: MentionMode,
) -> Result<DailyNewsSeries, CorpusError> {
    if range.is_empty() {
        return Err(CorpusError::EmptyRange);
    }
    let mut entries: BTreeMap<NaiveDate, DailyCounts> =
        range.days().map(|d| (d, DailyCounts::default())).collect();
    for article in corpus {
        if let Some(counts) = entries.get_mut(&article.date) {
            counts.articles += 1;
            counts.mentions += count_mentions(article, term, mode);
        }
    }
    Ok(DailyNewsSeries { entries })
}

/// Load a newline-delimited stopword file. Blank lines are skipped and
/// entries are lowercased.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let file = File::open(path)?;
    let mut set = HashSet::new();
    for line in BufReader::new(file).lines() {
        let word = line?.trim().to_lowercase();
        if !word.is_empty() {
            set.insert(word);
        }
    }
    Ok(set)
}

/// Load the merged news CSV: columns Date (DD/MM/YYYY), Article, Tokens, Source.
///
/// A row whose Tokens cell is empty is re-preprocessed from its Article text;
/// otherwise the provided space-separated tokens are taken as-is. Rows dated
/// outside `study_range` are dropped.
pub fn load_news_csv(
    path: &Path,
    stopwords: &HashSet<String>,
    markers: &[String],
    study_range: DateRange,
) -> Result<Vec<Article>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, CorpusError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CorpusError::MissingColumn(name.to_string()))
    };
    let date_col = col("Date")?;
    let article_col = col("Article")?;
    let tokens_col = col("Tokens")?;
    let source_col = col("Source")?;

    let mut articles = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header
        let record = record?;
        let date_str = record.get(date_col).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(date_str, "%d/%m/%Y")
            .or_else(|_| NaiveDate::parse_from_str(date_str, "%Y-%m-%d"))
            .map_err(|_| CorpusError::UnparseableRow {
                row,
                message: format!("bad date {date_str:?}"),
            })?;
        if !study_range.contains(date) {
            continue;
        }
        let raw_text = record.get(article_col).unwrap_or("").to_string();
        let tokens_cell = record.get(tokens_col).unwrap_or("").trim();
        let tokens = if tokens_cell.is_empty() {
            preprocess(&raw_text, stopwords, markers)
        } else {
            tokens_cell.split_whitespace().map(str::to_string).collect()
        };
        articles.push(Article {
            date,
            raw_text,
            tokens,
            source: record.get(source_col).unwrap_or("").to_string(),
        });
    }
    Ok(articles)
}
