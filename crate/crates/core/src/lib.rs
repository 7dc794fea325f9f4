//! Core library for news-driven FX event analysis.
//!
//! The pipeline goes: ingest news articles and daily exchange rates, aggregate
//! article/mention counts per day, correlate news volume with rates (overall,
//! cumulative, and sliding-window), detect candidate major-event dates from the
//! correlation windows and from article-count spikes, quantify each event with a
//! mean-adjusted abnormal-return event study (with numeraire attribution across
//! currency pairs), and summarise each event window with LDA topics.

pub mod calendar;
pub mod corpus;
pub mod correlation;
pub mod events;
pub mod eventstudy;
pub mod stats;
pub mod timeseries;
pub mod topics;

pub use calendar::DateRange;
pub use corpus::{Article, DailyNewsSeries};
pub use correlation::{CorrelationResult, WindowCorrelationSeries};
pub use events::{DetectionMethod, EventDate};
pub use eventstudy::{EventStudyConfig, EventStudyReport, NumeraireVerdict};
pub use timeseries::{AlignedSeries, Pair, RateSeries, ReturnSeries};
pub use topics::TopicModel;
