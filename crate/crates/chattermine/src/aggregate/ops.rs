//! Group-by aggregation over per-post measurements.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::{AggregateError, Trajectory, TrajectoryPoint};

/// A post reduced to its aggregation keys and measured metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredPost {
    pub region: String,
    pub date: NaiveDate,
    pub metrics: BTreeMap<String, f64>,
}

/// Region selection; `None` keeps every region.
#[derive(Debug, Clone, Default)]
pub struct RegionFilter(pub Option<BTreeSet<String>>);

impl RegionFilter {
    pub fn all() -> Self {
        RegionFilter(None)
    }

    pub fn only<I: IntoIterator<Item = S>, S: Into<String>>(regions: I) -> Self {
        RegionFilter(Some(regions.into_iter().map(Into::into).collect()))
    }

    pub fn accepts(&self, region: &str) -> bool {
        self.0.as_ref().is_none_or(|set| set.contains(region))
    }
}

/// Daily arithmetic mean of one metric, grouped by region.
///
/// Returns one trajectory per region (regions sorted, dates ascending).
/// Posts missing the metric are excluded from that day's mean; a metric no
/// post carries is an error.
pub fn daily_mean(
    posts: &[MeasuredPost],
    metric: &str,
    filter: &RegionFilter,
) -> Result<Vec<Trajectory>, AggregateError> {
    if !posts.iter().any(|p| p.metrics.contains_key(metric)) {
        return Err(AggregateError::UnknownMetric(metric.to_string()));
    }
    let mut groups: BTreeMap<(&str, NaiveDate), (f64, u64)> = BTreeMap::new();
    for post in posts {
        if !filter.accepts(&post.region) {
            continue;
        }
        if let Some(&value) = post.metrics.get(metric) {
            let entry = groups.entry((post.region.as_str(), post.date)).or_insert((0.0, 0));
            entry.0 += value;
            entry.1 += 1;
        }
    }
    Ok(to_trajectories(metric, groups, |(sum, n)| (sum / n as f64, n)))
}

/// Daily post counts per region; `zero_fill` emits explicit zero points for
/// absent days over `range` (or each region's observed span).
pub fn daily_count(
    posts: &[MeasuredPost],
    filter: &RegionFilter,
    zero_fill: bool,
    range: Option<(NaiveDate, NaiveDate)>,
) -> Vec<Trajectory> {
    let mut groups: BTreeMap<(&str, NaiveDate), u64> = BTreeMap::new();
    for post in posts {
        if !filter.accepts(&post.region) {
            continue;
        }
        *groups.entry((post.region.as_str(), post.date)).or_insert(0) += 1;
    }
    let mut trajectories = to_trajectories("post_count", groups, |n| (n as f64, n));
    if zero_fill {
        for trajectory in &mut trajectories {
            fill_zero_days(trajectory, range);
        }
    }
    trajectories
}

fn fill_zero_days(trajectory: &mut Trajectory, range: Option<(NaiveDate, NaiveDate)>) {
    let (from, to) = match range {
        Some(r) => r,
        None => match (trajectory.points.first(), trajectory.points.last()) {
            (Some(first), Some(last)) => (first.date, last.date),
            _ => return,
        },
    };
    let by_date: BTreeMap<NaiveDate, TrajectoryPoint> =
        trajectory.points.iter().map(|p| (p.date, *p)).collect();
    let mut filled = Vec::new();
    let mut day = from;
    while day <= to {
        filled.push(by_date.get(&day).copied().unwrap_or(TrajectoryPoint {
            date: day,
            value: 0.0,
            sample_count: 0,
        }));
        day = day.succ_opt().expect("date overflow");
    }
    trajectory.points = filled;
}

fn to_trajectories<V: Copy>(
    metric: &str,
    groups: BTreeMap<(&str, NaiveDate), V>,
    finish: impl Fn(V) -> (f64, u64),
) -> Vec<Trajectory> {
    let mut per_region: BTreeMap<&str, Vec<TrajectoryPoint>> = BTreeMap::new();
    for ((region, date), v) in groups {
        let (value, sample_count) = finish(v);
        per_region.entry(region).or_default().push(TrajectoryPoint {
            date,
            value,
            sample_count,
        });
    }
    per_region
        .into_iter()
        .map(|(region, points)| Trajectory {
            region: region.to_string(),
            metric: metric.to_string(),
            points,
        })
        .collect()
}

/// Divide every value by the trajectory's total (the region's post count
/// for count trajectories), making regions of different volumes
/// comparable. Preserves within-region day-to-day ratios.
pub fn normalize_by_region_total(trajectory: &Trajectory) -> Result<Trajectory, AggregateError> {
    let total: f64 = trajectory.points.iter().map(|p| p.value).sum();
    if total <= 0.0 {
        return Err(AggregateError::ZeroTotal {
            region: trajectory.region.clone(),
        });
    }
    Ok(Trajectory {
        region: trajectory.region.clone(),
        metric: format!("{}_normalized", trajectory.metric),
        points: trajectory
            .points
            .iter()
            .map(|p| TrajectoryPoint {
                date: p.date,
                value: p.value / total,
                sample_count: p.sample_count,
            })
            .collect(),
    })
}

/// Centered moving average with radius `(window − 1) / 2` days, shrinking
/// at the edges. Window 1 is the identity.
pub fn rolling_mean(trajectory: &Trajectory, window: usize) -> Result<Trajectory, AggregateError> {
    if window == 0 {
        return Err(AggregateError::BadRollingWindow);
    }
    let radius = ((window - 1) / 2) as i64;
    let points = &trajectory.points;
    let smoothed = points
        .iter()
        .map(|center| {
            let (mut sum, mut n) = (0.0, 0u64);
            for p in points {
                if (p.date - center.date).num_days().abs() <= radius {
                    sum += p.value;
                    n += 1;
                }
            }
            TrajectoryPoint {
                date: center.date,
                value: sum / n as f64,
                sample_count: center.sample_count,
            }
        })
        .collect();
    Ok(Trajectory {
        region: trajectory.region.clone(),
        metric: trajectory.metric.clone(),
        points: smoothed,
    })
}

/// A trajectory slice centered on a dated news event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventWindow {
    pub event_name: String,
    pub event_date: NaiveDate,
    pub half_window: u32,
    pub series: Trajectory,
}

impl EventWindow {
    /// Day offset of a point from the event date (−half..=+half).
    pub fn offset(&self, point: &TrajectoryPoint) -> i64 {
        (point.date - self.event_date).num_days()
    }
}

/// Inclusive slice of `trajectory` within `half_window` days of the event.
///
/// An event outside the trajectory's range yields an empty series (logged
/// as a warning).
pub fn event_window(
    trajectory: &Trajectory,
    event_name: &str,
    event_date: NaiveDate,
    half_window: u32,
) -> EventWindow {
    let points: Vec<TrajectoryPoint> = trajectory
        .points
        .iter()
        .filter(|p| (p.date - event_date).num_days().abs() <= i64::from(half_window))
        .copied()
        .collect();
    if points.is_empty() {
        log::warn!(
            "event {event_name:?} ({event_date}) is outside the {}/{} trajectory range",
            trajectory.region,
            trajectory.metric
        );
    }
    EventWindow {
        event_name: event_name.to_string(),
        event_date,
        half_window,
        series: Trajectory {
            region: trajectory.region.clone(),
            metric: trajectory.metric.clone(),
            points,
        },
    }
}
