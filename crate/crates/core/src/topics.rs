//! LDA topic extraction over event-window document sets, via collapsed Gibbs
//! sampling with symmetric Dirichlet priors, plus the tracked-word timeline.

use std::collections::BTreeSet;

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::Article;

#[derive(Debug, Error)]
pub enum TopicsError {
    #[error("corpus has no tokens to model")]
    EmptyCorpus,
    #[error("k = {k} exceeds the total token count {tokens}")]
    KTooLarge { k: usize, tokens: usize },
    #[error("topic index {topic} out of range for k = {k}")]
    BadTopicIndex { topic: usize, k: usize },
    #[error("no documents dated within the event window around {0}")]
    NoDocumentsInWindow(NaiveDate),
}

/// Hyperparameters and sampling controls for one LDA fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaParams {
    pub k: usize,
    /// Symmetric document-topic prior.
    pub alpha: f64,
    /// Symmetric topic-word prior.
    pub eta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Words reported per topic.
    pub top_n: usize,
}

impl Default for LdaParams {
    fn default() -> Self {
        let k = 5;
        Self {
            k,
            alpha: 50.0 / k as f64,
            eta: 0.01,
            iterations: 1000,
            seed: 42,
            top_n: 20,
        }
    }
}

/// Fitted LDA state.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub k: usize,
    /// Lexicographically ordered vocabulary.
    pub vocab: Vec<String>,
    /// k x |vocab| topic-word probabilities; rows sum to 1.
    pub beta: Vec<Vec<f64>>,
    /// docs x k document-topic proportions; rows sum to 1.
    pub theta: Vec<Vec<f64>>,
    /// Final topic label per token, per document.
    pub assignments: Vec<Vec<usize>>,
    pub seed: u64,
    pub iterations: usize,
}

/// Collapsed Gibbs LDA fit. Deterministic for a given seed: the chain visits
/// tokens in document order and draws from a seeded ChaCha stream.
pub fn fit_lda(docs: &[Vec<String>], params: &LdaParams) -> Result<TopicModel, TopicsError> {
    assert!(params.k >= 1, "k must be at least 1");
    let vocab: Vec<String> = docs
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<String>>()
        .into_iter()
        .collect();
    if docs.is_empty() || vocab.is_empty() {
        return Err(TopicsError::EmptyCorpus);
    }
    let word_index = |w: &str| vocab.binary_search_by(|v| v.as_str().cmp(w)).unwrap();
    let docs_idx: Vec<Vec<usize>> = docs
        .iter()
        .map(|doc| doc.iter().map(|w| word_index(w)).collect())
        .collect();
    let total_tokens: usize = docs_idx.iter().map(Vec::len).sum();
    let k = params.k;
    if k > total_tokens {
        return Err(TopicsError::KTooLarge { k, tokens: total_tokens });
    }

    let v = vocab.len();
    let n_docs = docs_idx.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut doc_topic = vec![vec![0usize; k]; n_docs];
    let mut topic_word = vec![vec![0usize; v]; k];
    let mut topic_total = vec![0usize; k];
    let mut assignments: Vec<Vec<usize>> = docs_idx
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            doc.iter()
                .map(|&w| {
                    let t = rng.gen_range(0..k);
                    doc_topic[d][t] += 1;
                    topic_word[t][w] += 1;
                    topic_total[t] += 1;
                    t
                })
                .collect()
        })
        .collect();

    let eta_v = params.eta * v as f64;
    let mut weights = vec![0.0f64; k];
    for _ in 0..params.iterations {
        for (d, doc) in docs_idx.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let old = assignments[d][i];
                doc_topic[d][old] -= 1;
                topic_word[old][w] -= 1;
                topic_total[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let weight = (doc_topic[d][t] as f64 + params.alpha)
                        * (topic_word[t][w] as f64 + params.eta)
                        / (topic_total[t] as f64 + eta_v);
                    weights[t] = weight;
                    total += weight;
                }
                let mut u = rng.gen::<f64>() * total;
                let mut new = k - 1;
                for (t, weight) in weights.iter().enumerate() {
                    u -= weight;
                    if u <= 0.0 {
                        new = t;
                        break;
                    }
                }

                doc_topic[d][new] += 1;
                topic_word[new][w] += 1;
                topic_total[new] += 1;
                assignments[d][i] = new;
            }
        }
    }

    let beta = (0..k)
        .map(|t| {
            let denom = topic_total[t] as f64 + eta_v;
            (0..v)
                .map(|w| (topic_word[t][w] as f64 + params.eta) / denom)
                .collect()
        })
        .collect();
    let theta = (0..n_docs)
        .map(|doc| {
            let len: usize = doc_topic[doc].iter().sum();
            let denom = len as f64 + params.alpha * k as f64;
            (0..k)
                .map(|t| (doc_topic[doc][t] as f64 + params.alpha) / denom)
                .collect()
        })
        .collect();

    Ok(TopicModel {
        k,
        vocab,
        beta,
        theta,
        assignments,
        seed: params.seed,
        iterations: params.iterations,
    })
}

/// The `n` highest-probability words of one topic, descending by beta, ties
/// broken lexicographically. Asking for more words than the vocabulary holds
/// returns the whole vocabulary.
pub fn top_words(model: &TopicModel, topic: usize, n: usize) -> Result<Vec<String>, TopicsError> {
    if topic >= model.k {
        return Err(TopicsError::BadTopicIndex { topic, k: model.k });
    }
    let row = &model.beta[topic];
    let mut order: Vec<usize> = (0..model.vocab.len()).collect();
    order.sort_by(|&a, &b| {
        row[b]
            .partial_cmp(&row[a])
            .unwrap()
            .then_with(|| model.vocab[a].cmp(&model.vocab[b]))
    });
    Ok(order
        .into_iter()
        .take(n)
        .map(|i| model.vocab[i].clone())
        .collect())
}

/// Fit LDA on the articles dated within `half_width` CALENDAR days of the
/// event date (weekend articles carry topic signal even though the financial
/// windows are trading days) and return the union of per-topic top words.
///
/// k is clamped to the number of in-window documents so tiny windows never
/// ask for more topics than documents.
pub fn event_window_topics(
    corpus: &[Article],
    event_date: NaiveDate,
    half_width: usize,
    params: &LdaParams,
) -> Result<(TopicModel, BTreeSet<String>), TopicsError> {
    let start = event_date - Duration::days(half_width as i64);
    let end = event_date + Duration::days(half_width as i64);
    let docs: Vec<Vec<String>> = corpus
        .iter()
        .filter(|a| a.date >= start && a.date <= end)
        .map(|a| a.tokens.clone())
        .collect();
    if docs.is_empty() {
        return Err(TopicsError::NoDocumentsInWindow(event_date));
    }
    let clamped = LdaParams {
        k: params.k.min(docs.len()).max(1),
        ..*params
    };
    let model = fit_lda(&docs, &clamped)?;
    let mut union = BTreeSet::new();
    for topic in 0..model.k {
        union.extend(top_words(&model, topic, params.top_n)?);
    }
    Ok((model, union))
}

/// Presence grid of tracked words across event dates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedWordTimeline {
    pub words: Vec<String>,
    pub rows: Vec<TimelineRow>,
}

/// One event date's row: `present[i]` says whether `words[i]` appeared in the
/// union of top words for that window. A failed fit leaves the row all-false
/// and carries the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineRow {
    pub event_date: NaiveDate,
    pub present: Vec<bool>,
    pub error: Option<String>,
}

/// Per-event seed so every event window has its own reproducible chain.
fn seed_for_event(base: u64, date: NaiveDate) -> u64 {
    use chrono::Datelike;
    base ^ (date.num_days_from_ce() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Run `event_window_topics` for every event date and mark each tracked word
/// present or absent. Per-event failures are collected, not fatal.
pub fn tracked_word_timeline(
    corpus: &[Article],
    event_dates: &[NaiveDate],
    tracked: &[String],
    half_width: usize,
    params: &LdaParams,
) -> TrackedWordTimeline {
    let rows = event_dates
        .iter()
        .map(|date| {
            let event_params = LdaParams {
                seed: seed_for_event(params.seed, *date),
                ..*params
            };
            match event_window_topics(corpus, *date, half_width, &event_params) {
                Ok((_, union)) => TimelineRow {
                    event_date: *date,
                    present: tracked.iter().map(|w| union.contains(w)).collect(),
                    error: None,
                },
                Err(e) => TimelineRow {
                    event_date: *date,
                    present: vec![false; tracked.len()],
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    TrackedWordTimeline {
        words: tracked.to_vec(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn doc(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn params(k: usize, seed: u64) -> LdaParams {
        LdaParams {
            k,
            alpha: 50.0 / k as f64,
            eta: 0.01,
            iterations: 200,
            seed,
            top_n: 20,
        }
    }

    #[test]
    fn single_word_single_topic_is_forced() {
        let model = fit_lda(&[doc(&["deal"])], &params(1, 7)).unwrap();
        assert_eq!(model.vocab, vec!["deal"]);
        assert!((model.beta[0][0] - 1.0).abs() < 1e-12);
        assert_eq!(top_words(&model, 0, 1).unwrap(), vec!["deal"]);
    }

    #[test]
    fn errors_for_bad_inputs() {
        assert!(matches!(fit_lda(&[], &params(1, 7)), Err(TopicsError::EmptyCorpus)));
        assert!(matches!(
            fit_lda(&[vec![]], &params(1, 7)),
            Err(TopicsError::EmptyCorpus)
        ));
        assert!(matches!(
            fit_lda(&[doc(&["a", "b"])], &params(3, 7)),
            Err(TopicsError::KTooLarge { k: 3, tokens: 2 })
        ));
        let model = fit_lda(&[doc(&["a", "b"])], &params(1, 7)).unwrap();
        assert!(matches!(
            top_words(&model, 5, 3),
            Err(TopicsError::BadTopicIndex { topic: 5, k: 1 })
        ));
    }

    #[test]
    fn rows_normalise_after_fit() {
        let docs = vec![
            doc(&["vote", "deal", "vote", "may"]),
            doc(&["market", "rate", "drop"]),
            doc(&["vote", "rate"]),
        ];
        let model = fit_lda(&docs, &params(2, 11)).unwrap();
        for row in &model.beta {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
        for row in &model.theta {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
        for (di, doc) in model.assignments.iter().enumerate() {
            assert_eq!(doc.len(), docs[di].len());
            assert!(doc.iter().all(|t| *t < 2));
        }
    }

    #[test]
    fn gibbs_counts_conserve_corpus_frequencies() {
        let docs = vec![
            doc(&["vote", "deal", "vote"]),
            doc(&["deal", "deal", "rate"]),
        ];
        let model = fit_lda(&docs, &params(2, 3)).unwrap();
        // Recount per word from the assignments and the raw docs.
        let mut from_docs = std::collections::HashMap::new();
        for dd in &docs {
            for w in dd {
                *from_docs.entry(w.clone()).or_insert(0usize) += 1;
            }
        }
        let mut from_model = std::collections::HashMap::new();
        for (di, assigns) in model.assignments.iter().enumerate() {
            for (token, _) in assigns.iter().enumerate() {
                *from_model.entry(docs[di][token].clone()).or_insert(0usize) += 1;
            }
        }
        assert_eq!(from_docs, from_model);
    }

    #[test]
    fn determinism_same_seed_same_model() {
        let docs = vec![
            doc(&["vote", "deal", "brexit", "may"]),
            doc(&["market", "rate", "drop", "brexit"]),
            doc(&["delay", "vote", "rate", "deal"]),
        ];
        let a = fit_lda(&docs, &params(2, 99)).unwrap();
        let b = fit_lda(&docs, &params(2, 99)).unwrap();
        assert_eq!(a.beta, b.beta);
        assert_eq!(a.theta, b.theta);
        assert_eq!(a.assignments, b.assignments);
    }

    /// Two disjoint planted vocabularies of 20 words each; topics should
    /// separate them, making a pure topic's top-20 exactly one pool.
    fn planted_docs() -> (Vec<Vec<String>>, Vec<String>, Vec<String>) {
        let pool_a: Vec<String> = (0..20).map(|i| format!("econ{i:02}")).collect();
        let pool_b: Vec<String> = (0..20).map(|i| format!("sport{i:02}")).collect();
        let mut docs = Vec::new();
        for di in 0..10 {
            let da: Vec<String> = (0..50).map(|i| pool_a[(di * 7 + i * 3) % 20].clone()).collect();
            docs.push(da);
        }
        for di in 0..10 {
            let db: Vec<String> = (0..50).map(|i| pool_b[(di * 5 + i * 11) % 20].clone()).collect();
            docs.push(db);
        }
        (docs, pool_a, pool_b)
    }

    /// A concentrated doc-topic prior suits the tiny planted corpus better
    /// than the 50/k default, which is tuned for corpora of thousands.
    fn planted_params(seed: u64) -> LdaParams {
        LdaParams {
            k: 2,
            alpha: 1.0,
            eta: 0.01,
            iterations: 500,
            seed,
            top_n: 20,
        }
    }

    fn purity(top: &[String], a: &[String], b: &[String]) -> f64 {
        let in_a = top.iter().filter(|w| a.contains(w)).count();
        let in_b = top.iter().filter(|w| b.contains(w)).count();
        in_a.max(in_b) as f64 / top.len() as f64
    }

    #[test]
    fn planted_vocabularies_separate() {
        let (docs, pool_a, pool_b) = planted_docs();
        let model = fit_lda(&docs, &planted_params(1234)).unwrap();
        for topic in 0..2 {
            let top = top_words(&model, topic, 20).unwrap();
            assert!(
                purity(&top, &pool_a, &pool_b) >= 0.9,
                "topic {topic} purity too low: {:?}",
                top
            );
        }
    }

    #[test]
    fn document_permutation_permutes_topics_only() {
        let (docs, _, _) = planted_docs();
        let mut reversed = docs.clone();
        reversed.reverse();
        let a = fit_lda(&docs, &planted_params(77)).unwrap();
        let b = fit_lda(&reversed, &planted_params(77)).unwrap();
        let tops = |m: &TopicModel| -> BTreeSet<Vec<String>> {
            (0..m.k)
                .map(|t| {
                    let mut ws = top_words(m, t, 20).unwrap();
                    ws.sort();
                    ws
                })
                .collect()
        };
        assert_eq!(tops(&a), tops(&b));
    }

    #[test]
    fn top_words_tie_break_is_lexicographic() {
        let model = fit_lda(&[doc(&["b", "a"])], &params(1, 5)).unwrap();
        assert_eq!(top_words(&model, 0, 2).unwrap(), vec!["a", "b"]);
        // n beyond vocab truncates to the vocabulary.
        assert_eq!(top_words(&model, 0, 10).unwrap().len(), 2);
    }

    fn article(date: NaiveDate, words: &[&str]) -> Article {
        Article {
            date,
            raw_text: words.join(" "),
            tokens: doc(words),
            source: "test".into(),
        }
    }

    #[test]
    fn event_window_selects_calendar_days() {
        let corpus = vec![
            article(d(2016, 6, 18), &["too", "early"]), // outside [-5, +5]
            article(d(2016, 6, 19), &["referendum", "vote"]), // Sunday, inside
            article(d(2016, 6, 24), &["referendum", "result"]),
            article(d(2016, 6, 29), &["referendum", "fallout"]),
            article(d(2016, 6, 30), &["too", "late"]), // outside
        ];
        let (model, union) =
            event_window_topics(&corpus, d(2016, 6, 24), 5, &params(5, 9)).unwrap();
        // k clamps to the 3 in-window documents.
        assert_eq!(model.k, 3);
        assert!(union.contains("referendum"));
        assert!(!union.contains("early"));
        assert!(!union.contains("late"));
    }

    #[test]
    fn empty_window_is_an_error() {
        let corpus = vec![article(d(2016, 1, 1), &["far", "away"])];
        assert!(matches!(
            event_window_topics(&corpus, d(2016, 6, 24), 5, &params(2, 9)),
            Err(TopicsError::NoDocumentsInWindow(_))
        ));
    }

    #[test]
    fn single_article_window_clamps_k() {
        let corpus = vec![article(d(2016, 6, 24), &["referendum", "result", "vote"])];
        let (model, union) =
            event_window_topics(&corpus, d(2016, 6, 24), 5, &params(5, 9)).unwrap();
        assert_eq!(model.k, 1);
        assert_eq!(
            union,
            ["referendum", "result", "vote"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn timeline_marks_presence_and_absence() {
        let corpus = vec![
            article(d(2016, 6, 24), &["referendum", "vote", "result"]),
            article(d(2016, 6, 23), &["referendum", "campaign"]),
            article(d(2019, 3, 20), &["delay", "deal", "vote"]),
        ];
        let events = vec![d(2016, 6, 24), d(2019, 3, 20)];
        let tracked: Vec<String> = ["referendum", "delay", "unicorn"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let tl = tracked_word_timeline(&corpus, &events, &tracked, 5, &params(2, 9));
        assert_eq!(tl.rows.len(), 2);
        let june = &tl.rows[0];
        assert_eq!(june.present, vec![true, false, false]);
        let march = &tl.rows[1];
        assert_eq!(march.present, vec![false, true, false]);
        // Absent-everywhere word gives an all-false column.
        assert!(tl.rows.iter().all(|r| !r.present[2]));
    }

    #[test]
    fn timeline_collects_errors_per_event() {
        let corpus = vec![article(d(2016, 6, 24), &["referendum"])];
        let events = vec![d(2016, 6, 24), d(2018, 1, 1)];
        let tracked = vec!["referendum".to_string()];
        let tl = tracked_word_timeline(&corpus, &events, &tracked, 5, &params(1, 9));
        assert_eq!(tl.rows[0].present, vec![true]);
        assert!(tl.rows[0].error.is_none());
        assert_eq!(tl.rows[1].present, vec![false]);
        assert!(tl.rows[1].error.is_some());
    }

    #[test]
    fn single_event_tracking_union_is_all_true() {
        let corpus = vec![
            article(d(2016, 6, 24), &["referendum", "vote"]),
            article(d(2016, 6, 23), &["result", "count"]),
        ];
        let p = params(2, 9);
        let seeded = LdaParams {
            seed: seed_for_event(p.seed, d(2016, 6, 24)),
            ..p
        };
        let (_, union) = event_window_topics(&corpus, d(2016, 6, 24), 5, &seeded).unwrap();
        let tracked: Vec<String> = union.iter().cloned().collect();
        let tl = tracked_word_timeline(&corpus, &[d(2016, 6, 24)], &tracked, 5, &p);
        assert!(tl.rows[0].present.iter().all(|p| *p));
    }
}
