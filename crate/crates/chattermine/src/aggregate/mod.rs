//! Spatio-temporal aggregation: per-region daily trajectories, region
//! normalization, rolling means, event windows, monthly summaries, and a
//! two-window change-point flagger.

mod change_point;
mod monthly;
mod ops;

pub use change_point::detect_change_points;
pub use monthly::{monthly_summary, monthly_summary_pooled, MonthlyRow, ReadabilityAggMode};
pub use ops::{
    daily_count, daily_mean, event_window, normalize_by_region_total, rolling_mean, EventWindow,
    MeasuredPost, RegionFilter,
};

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("no post carries metric {0:?}")]
    UnknownMetric(String),
    #[error("region {region:?} has zero total over the range; cannot normalize")]
    ZeroTotal { region: String },
    #[error("rolling window must be at least 1")]
    BadRollingWindow,
    #[error("change-point window must be at least 2, got {0}")]
    BadChangeWindow(usize),
    #[error("trajectory has {points} points but the change-point test needs at least {needed}")]
    TooShort { points: usize, needed: usize },
}

/// One aggregated observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub date: NaiveDate,
    pub value: f64,
    /// Posts behind the value; 0 only on explicitly zero-filled days.
    pub sample_count: u64,
}

/// An ordered `(region, day) → value` series for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub region: String,
    pub metric: String,
    /// Points with strictly increasing dates.
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
