//! `aggregate`: per-region daily trajectories for the configured metrics,
//! optional smoothing, event half-windows, and change-point flags.

use std::collections::BTreeMap;
use std::path::Path;

use chattermine::aggregate::{
    daily_count, daily_mean, detect_change_points, event_window, normalize_by_region_total,
    rolling_mean, MeasuredPost, Trajectory,
};
use chattermine::exec;
use chattermine::readability::{readability_report, ReadabilityReport};
use chattermine::rtn::{tag_collection, TagCategory};
use chrono::NaiveDate;

use crate::outfmt::{f9, CsvOut};
use crate::pipeline::Context;
use crate::CliError;

const ENTITY_METRICS: [(&str, TagCategory); 4] = [
    ("symptom_entities", TagCategory::Symptom),
    ("covid_report_entities", TagCategory::CovidReport),
    ("impact_body_entities", TagCategory::ImpactBody),
    ("impact_activity_entities", TagCategory::ImpactActivity),
];

const PROBABILITY_METRICS: [&str; 4] = [
    "neutral_probability",
    "hate_probability",
    "counterhate_probability",
    "other_probability",
];

fn is_known_metric(name: &str) -> bool {
    name == "post_count"
        || ENTITY_METRICS.iter().any(|(m, _)| *m == name)
        || PROBABILITY_METRICS.contains(&name)
        || ReadabilityReport::COLUMN_NAMES.contains(&name)
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let agg = ctx
        .config
        .aggregate
        .as_ref()
        .ok_or_else(|| CliError::config("aggregate: missing [aggregate] section"))?;
    if agg.metrics.is_empty() {
        return Err(CliError::config("aggregate.metrics: must name at least one metric"));
    }
    for metric in &agg.metrics {
        if !is_known_metric(metric) {
            return Err(CliError::config(format!(
                "aggregate.metrics: unknown metric {metric:?}"
            )));
        }
    }

    let measured = measure_posts(ctx, &agg.metrics)?;
    let mut trajectories: Vec<Trajectory> = Vec::new();
    for metric in &agg.metrics {
        if metric == "post_count" {
            let counts = daily_count(&measured, &ctx.region_filter, agg.zero_fill, None);
            for t in &counts {
                match normalize_by_region_total(t) {
                    Ok(norm) => trajectories.push(norm),
                    Err(e) => log::warn!("{e}"),
                }
            }
            trajectories.extend(counts);
        } else {
            trajectories.extend(
                daily_mean(&measured, metric, &ctx.region_filter)
                    .map_err(|e| CliError::runtime(e.to_string()))?,
            );
        }
    }
    if let Some(window) = agg.rolling_window {
        let smoothed: Vec<Trajectory> = trajectories
            .iter()
            .map(|t| {
                rolling_mean(t, window).map(|mut s| {
                    s.metric = format!("{}_rolling{window}", s.metric);
                    s
                })
            })
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::config(format!("aggregate.rolling_window: {e}")))?;
        trajectories.extend(smoothed);
    }
    trajectories.sort_by(|a, b| (&a.metric, &a.region).cmp(&(&b.metric, &b.region)));

    write_trajectories(&ctx.out_dir.join("trajectories.csv"), &trajectories)?;
    write_event_windows(ctx, &trajectories, agg.half_window)?;
    write_change_points(
        &ctx.out_dir.join("change_points.csv"),
        &trajectories,
        agg.change_window,
        agg.change_threshold,
    )
}

/// Reduce each post to its date, region, and requested metric values.
fn measure_posts(ctx: &Context, metrics: &[String]) -> Result<Vec<MeasuredPost>, CliError> {
    let want_entities = metrics.iter().any(|m| ENTITY_METRICS.iter().any(|(n, _)| n == m));
    let want_probabilities = metrics.iter().any(|m| PROBABILITY_METRICS.contains(&m.as_str()));
    let want_readability = metrics
        .iter()
        .any(|m| ReadabilityReport::COLUMN_NAMES.contains(&m.as_str()));

    let mut measured: Vec<MeasuredPost> = ctx
        .posts
        .iter()
        .map(|p| MeasuredPost {
            region: p.region.clone(),
            date: p.date(),
            metrics: BTreeMap::new(),
        })
        .collect();

    if want_entities {
        let grammar = ctx.grammar()?;
        for (post, tagged) in measured.iter_mut().zip(tag_collection(&grammar, &ctx.posts)) {
            for (name, category) in ENTITY_METRICS {
                let count = tagged.spans.iter().filter(|s| s.category == category).count();
                post.metrics.insert(name.to_string(), count as f64);
            }
        }
    }

    if want_probabilities {
        let distributions = ctx.label_distributions()?;
        for (post, dist) in measured.iter_mut().zip(distributions) {
            let Some(dist) = dist else { continue };
            post.metrics.insert("neutral_probability".into(), dist.p_neutral);
            post.metrics.insert("hate_probability".into(), dist.p_hate);
            post.metrics
                .insert("counterhate_probability".into(), dist.p_counterhate);
            if let Some(p) = dist.p_other {
                post.metrics.insert("other_probability".into(), p);
            }
        }
    }

    if want_readability {
        let (dale, spache, _) = ctx.wordlists()?;
        let reports: Vec<Option<ReadabilityReport>> = exec::map_ordered(&ctx.posts.posts, |p| {
            readability_report(&p.text, &dale, &spache).ok()
        });
        for (post, report) in measured.iter_mut().zip(reports) {
            let Some(report) = report else { continue };
            for (name, value) in ReadabilityReport::COLUMN_NAMES.iter().zip(report.as_row()) {
                post.metrics.insert(name.to_string(), value);
            }
        }
    }

    Ok(measured)
}

fn write_trajectories(path: &Path, trajectories: &[Trajectory]) -> Result<(), CliError> {
    let mut csv = CsvOut::create(path, &["region", "metric", "date", "value", "sample_count"])?;
    for t in trajectories {
        for p in &t.points {
            csv.write([
                t.region.clone(),
                t.metric.clone(),
                p.date.to_string(),
                f9(p.value),
                p.sample_count.to_string(),
            ])?;
        }
    }
    csv.finish()
}

fn write_event_windows(
    ctx: &Context,
    trajectories: &[Trajectory],
    half_window: u32,
) -> Result<(), CliError> {
    let Some(events_config) = &ctx.config.events else {
        return Ok(());
    };
    crate::config::PipelineConfig::require_file("events.path", &events_config.path)?;
    let events = load_events(&events_config.path)?;

    let mut csv = CsvOut::create(
        &ctx.out_dir.join("event_windows.csv"),
        &["event", "region", "metric", "offset", "date", "value", "sample_count"],
    )?;
    for (name, date) in &events {
        for t in trajectories {
            let window = event_window(t, name, *date, half_window);
            for p in &window.series.points {
                csv.write([
                    name.clone(),
                    t.region.clone(),
                    t.metric.clone(),
                    window.offset(p).to_string(),
                    p.date.to_string(),
                    f9(p.value),
                    p.sample_count.to_string(),
                ])?;
            }
        }
    }
    csv.finish()
}

fn load_events(path: &Path) -> Result<Vec<(String, NaiveDate)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        if record.len() < 2 {
            return Err(CliError::runtime(format!(
                "{}: event rows need name,date",
                path.display()
            )));
        }
        let date: NaiveDate = record[1]
            .trim()
            .parse()
            .map_err(|e| CliError::runtime(format!("{}: bad event date: {e}", path.display())))?;
        events.push((record[0].trim().to_string(), date));
    }
    Ok(events)
}

fn write_change_points(
    path: &Path,
    trajectories: &[Trajectory],
    window: usize,
    threshold: f64,
) -> Result<(), CliError> {
    let mut csv = CsvOut::create(path, &["region", "metric", "date"])?;
    for t in trajectories {
        if t.points.len() < 2 * window {
            continue;
        }
        let flags =
            detect_change_points(t, window, threshold).map_err(|e| CliError::runtime(e.to_string()))?;
        for date in flags {
            csv.write([t.region.clone(), t.metric.clone(), date.to_string()])?;
        }
    }
    csv.finish()
}
