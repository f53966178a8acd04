//! Monthly readability summaries.
//!
//! Two aggregation modes: averaging per-post scores (the default) and
//! pooling each month's text into one large document scored once. Captions
//! like "Daily Average of Linsear Write Score" imply the former; scoring
//! text "first aggregated by time and region" implies the latter. Both are
//! supported behind a flag.

use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};

use super::ops::RegionFilter;
use crate::readability::{readability_report, ReadabilityReport};
use crate::wordlist::WordList;

/// How monthly readability rows are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadabilityAggMode {
    /// Mean of per-post scores within the month.
    #[default]
    PerPost,
    /// Concatenate the month's posts and score the pooled text once.
    Pooled,
}

impl std::str::FromStr for ReadabilityAggMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "per_post" | "per-post" => Ok(ReadabilityAggMode::PerPost),
            "pooled" => Ok(ReadabilityAggMode::Pooled),
            other => Err(format!("unknown readability mode {other:?} (expected per_post or pooled)")),
        }
    }
}

/// One month's mean scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyRow {
    pub year: i32,
    pub month: u32,
    pub scores: ReadabilityReport,
    pub sample_count: u64,
}

fn month_key(date: NaiveDate) -> (i32, u32) {
    (date.year(), date.month())
}

/// Unweighted mean of each score over all posts in each calendar month.
/// Months with no posts are absent.
pub fn monthly_summary(
    reports: &[(NaiveDate, String, ReadabilityReport)],
    filter: &RegionFilter,
) -> Vec<MonthlyRow> {
    let mut groups: BTreeMap<(i32, u32), (Vec<f64>, u64)> = BTreeMap::new();
    for (date, region, report) in reports {
        if !filter.accepts(region) {
            continue;
        }
        let entry = groups
            .entry(month_key(*date))
            .or_insert(([0.0; 9].to_vec(), 0));
        for (acc, score) in entry.0.iter_mut().zip(report.as_row()) {
            *acc += score;
        }
        entry.1 += 1;
    }
    groups
        .into_iter()
        .map(|((year, month), (sums, n))| {
            let mut row = [0.0; 9];
            for (slot, sum) in row.iter_mut().zip(sums) {
                *slot = sum / n as f64;
            }
            MonthlyRow {
                year,
                month,
                scores: ReadabilityReport::from_row(row),
                sample_count: n,
            }
        })
        .collect()
}

/// Pool each month's text (input order) and score it once. Months whose
/// pooled text has no words are absent.
pub fn monthly_summary_pooled(
    posts: &[(NaiveDate, String, String)],
    filter: &RegionFilter,
    dale_list: &WordList,
    spache_list: &WordList,
) -> Vec<MonthlyRow> {
    let mut pooled: BTreeMap<(i32, u32), (String, u64)> = BTreeMap::new();
    for (date, region, text) in posts {
        if !filter.accepts(region) {
            continue;
        }
        let entry = pooled.entry(month_key(*date)).or_default();
        if !entry.0.is_empty() {
            entry.0.push('\n');
        }
        entry.0.push_str(text);
        entry.1 += 1;
    }
    pooled
        .into_iter()
        .filter_map(|((year, month), (text, n))| {
            readability_report(&text, dale_list, spache_list)
                .ok()
                .map(|scores| MonthlyRow {
                    year,
                    month,
                    scores,
                    sample_count: n,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date(m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, m, d).unwrap()
    }

    fn report(linsear: f64) -> ReadabilityReport {
        ReadabilityReport {
            fres: 100.0,
            fk_grade: 1.0,
            coleman_liau: 1.0,
            ari: 1.0,
            smog: 3.1291,
            gunning_fog: 2.0,
            dale_chall: 0.3,
            spache: 1.0,
            linsear_write: linsear,
        }
    }

    #[test]
    fn one_post_per_month_echoes_reports() {
        let reports = vec![
            (date(1, 15), "NY".to_string(), report(2.0)),
            (date(2, 10), "NY".to_string(), report(4.0)),
        ];
        let rows = monthly_summary(&reports, &RegionFilter::all());
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].scores, report(2.0));
        assert_eq!(rows[1].scores, report(4.0));
        assert_eq!(rows[0].sample_count, 1);
    }

    #[test]
    fn two_posts_average() {
        let reports = vec![
            (date(3, 1), "NY".to_string(), report(2.0)),
            (date(3, 20), "NY".to_string(), report(4.0)),
        ];
        let rows = monthly_summary(&reports, &RegionFilter::all());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].scores.linsear_write, 3.0);
        assert_eq!(rows[0].sample_count, 2);
    }

    #[test]
    fn empty_months_absent_and_filter_applies() {
        let reports = vec![
            (date(1, 1), "NY".to_string(), report(2.0)),
            (date(5, 1), "CA".to_string(), report(4.0)),
        ];
        let rows = monthly_summary(&reports, &RegionFilter::only(["NY"]));
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].month, 1);
    }

    #[test]
    fn identical_posts_leave_means_fixed() {
        let reports_per_month: Vec<_> = (1..=3)
            .flat_map(|m| vec![(date(m, 1), "NY".to_string(), report(5.0)); 4])
            .collect();
        let rows = monthly_summary(&reports_per_month, &RegionFilter::all());
        for row in rows {
            assert_eq!(row.scores, report(5.0));
        }
    }

    #[test]
    fn pooled_mode_scores_concatenation() {
        let dale = WordList::from_words(["the", "cat", "sat", "on", "mat"]);
        let posts = vec![
            (date(4, 1), "NY".to_string(), "The cat sat on the mat.".to_string()),
            (date(4, 2), "NY".to_string(), "The cat sat on the mat.".to_string()),
        ];
        let rows = monthly_summary_pooled(&posts, &RegionFilter::all(), &dale, &dale);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].sample_count, 2);
        // Two identical sentences: ratio scores equal the single-post text.
        let single = readability_report("The cat sat on the mat.", &dale, &dale).unwrap();
        assert!((rows[0].scores.fres - single.fres).abs() < 1e-9);
    }
}
