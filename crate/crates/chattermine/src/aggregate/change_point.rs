//! Two-window mean-shift change-point flagging.

use chrono::NaiveDate;

use super::{AggregateError, Trajectory};

/// Floor for the pooled standard deviation, so a clean step over constant
/// windows still triggers.
const POOLED_STD_FLOOR: f64 = 1e-12;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_var(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Flag dates where adjacent `window`-point means differ by more than
/// `threshold` pooled standard deviations.
///
/// A flag at date `d` compares `[d − window, d)` against `[d, d + window)`.
/// Flags closer together than `window` days merge, keeping the date with
/// the largest mean gap (earliest on ties).
pub fn detect_change_points(
    trajectory: &Trajectory,
    window: usize,
    threshold: f64,
) -> Result<Vec<NaiveDate>, AggregateError> {
    if window < 2 {
        return Err(AggregateError::BadChangeWindow(window));
    }
    let values = trajectory.values();
    let needed = 2 * window;
    if values.len() < needed {
        return Err(AggregateError::TooShort {
            points: values.len(),
            needed,
        });
    }

    let mut flags: Vec<(NaiveDate, f64)> = Vec::new();
    for d in window..=values.len() - window {
        let left = &values[d - window..d];
        let right = &values[d..d + window];
        let gap = (mean(right) - mean(left)).abs();
        let pooled = ((sample_var(left) + sample_var(right)) / 2.0).sqrt();
        if gap > threshold * pooled.max(POOLED_STD_FLOOR) {
            flags.push((trajectory.points[d].date, gap));
        }
    }

    // Merge nearby flags into one representative per cluster.
    let mut merged = Vec::new();
    let mut cluster: Vec<(NaiveDate, f64)> = Vec::new();
    let window_days = window as i64;
    for flag in flags {
        if let Some(&(last_date, _)) = cluster.last() {
            if (flag.0 - last_date).num_days() < window_days {
                cluster.push(flag);
                continue;
            }
            merged.push(best_of(&cluster));
            cluster.clear();
        }
        cluster.push(flag);
    }
    if !cluster.is_empty() {
        merged.push(best_of(&cluster));
    }
    Ok(merged)
}

fn best_of(cluster: &[(NaiveDate, f64)]) -> NaiveDate {
    let mut best = cluster[0];
    for &(date, gap) in &cluster[1..] {
        if gap > best.1 {
            best = (date, gap);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::TrajectoryPoint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(values: &[f64]) -> Trajectory {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        Trajectory {
            region: "NY".to_string(),
            metric: "m".to_string(),
            points: values
                .iter()
                .enumerate()
                .map(|(i, &v)| TrajectoryPoint {
                    date: start + chrono::Days::new(i as u64),
                    value: v,
                    sample_count: 1,
                })
                .collect(),
        }
    }

    #[test]
    fn constant_series_has_no_flags() {
        let t = series(&[1.0; 100]);
        assert!(detect_change_points(&t, 10, 2.0).unwrap().is_empty());
    }

    #[test]
    fn clean_step_flags_exactly_the_step_day() {
        let mut values = vec![0.0; 50];
        values.extend(vec![1.0; 50]);
        let t = series(&values);
        let flags = detect_change_points(&t, 10, 2.0).unwrap();
        assert_eq!(flags, vec![t.points[50].date]);
    }

    #[test]
    fn seeded_noise_below_a_high_threshold_is_quiet() {
        let mut rng = ChaCha8Rng::seed_from_u64(2020);
        let values: Vec<f64> = (0..120).map(|_| rng.random::<f64>()).collect();
        let t = series(&values);
        assert!(detect_change_points(&t, 10, 10.0).unwrap().is_empty());
    }

    #[test]
    fn input_validation() {
        let t = series(&[0.0; 10]);
        assert!(matches!(
            detect_change_points(&t, 1, 2.0),
            Err(AggregateError::BadChangeWindow(1))
        ));
        assert!(matches!(
            detect_change_points(&t, 6, 2.0),
            Err(AggregateError::TooShort { .. })
        ));
    }
}
