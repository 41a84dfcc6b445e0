use serde::{Deserialize, Serialize};

use crate::fairness::EPM_WINDOW_SECONDS;
use crate::replay::{ReplayError, ReplayLog, Side};

/// Per-side rates and camera statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideMetrics {
    pub apm: f64,
    pub epm: f64,
    pub co: f64,
    pub ao: f64,
    pub ncr: f64,
    pub nc_epm: f64,
}

impl SideMetrics {
    /// Builds the record from table-style columns; nc_epm follows from epm and ncr.
    pub fn from_columns(apm: f64, epm: f64, co: f64, ao: f64, ncr: f64) -> Self {
        Self {
            apm,
            epm,
            co,
            ao,
            ncr,
            nc_epm: epm * ncr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub label: String,
    pub agent: Option<SideMetrics>,
    pub player: Option<SideMetrics>,
}

impl MetricsReport {
    pub fn side(&self, side: Side) -> Option<&SideMetrics> {
        match side {
            Side::Agent => self.agent.as_ref(),
            Side::Player => self.player.as_ref(),
        }
    }
}

fn counted(log: &ReplayLog, side: Side) -> impl Iterator<Item = &crate::replay::ActionRecord> {
    log.side_records(side).filter(|r| !r.was_rejected)
}

fn minutes(log: &ReplayLog) -> Result<f64, ReplayError> {
    if log.duration_steps <= 0 {
        return Err(ReplayError::DegenerateLog("zero duration".into()));
    }
    Ok(log.duration_seconds() / 60.0)
}

/// Non-rejected actions per minute of game time.
pub fn compute_apm(log: &ReplayLog, side: Side) -> Result<f64, ReplayError> {
    let m = minutes(log)?;
    Ok(counted(log, side).count() as f64 / m)
}

/// Effective, non-rejected actions per minute of game time.
pub fn compute_epm(log: &ReplayLog, side: Side) -> Result<f64, ReplayError> {
    let m = minutes(log)?;
    Ok(counted(log, side).filter(|r| r.is_effective).count() as f64 / m)
}

/// (camera ops, all ops, non-camera rate) over effective, non-rejected records.
pub fn camera_stats(log: &ReplayLog, side: Side) -> Result<(u64, u64, f64), ReplayError> {
    let (mut co, mut ao) = (0u64, 0u64);
    for r in counted(log, side).filter(|r| r.is_effective) {
        ao += 1;
        if r.is_camera {
            co += 1;
        }
    }
    if ao == 0 {
        return Err(ReplayError::DegenerateLog(format!("no effective {} actions", side.name())));
    }
    Ok((co, ao, 1.0 - co as f64 / ao as f64))
}

pub fn ncr_from_counts(co: f64, ao: f64) -> f64 {
    1.0 - co / ao
}

pub fn non_camera_epm(m: &SideMetrics) -> f64 {
    m.epm * m.ncr
}

pub fn side_metrics(log: &ReplayLog, side: Side) -> Result<SideMetrics, ReplayError> {
    let (co, ao, ncr) = camera_stats(log, side)?;
    Ok(SideMetrics::from_columns(
        compute_apm(log, side)?,
        compute_epm(log, side)?,
        co as f64,
        ao as f64,
        ncr,
    ))
}

/// Report for every side declared in the header.
pub fn analyze_log(log: &ReplayLog, label: &str) -> Result<MetricsReport, ReplayError> {
    let mut report = MetricsReport {
        label: label.to_string(),
        agent: None,
        player: None,
    };
    for side in &log.header.sides {
        let m = side_metrics(log, *side)?;
        match side {
            Side::Agent => report.agent = Some(m),
            Side::Player => report.player = Some(m),
        }
    }
    Ok(report)
}

/// Instantaneous (apm, epm) over trailing 5 s windows, sampled each game-second from 5 s on.
/// Returns (window end in seconds, apm, epm).
pub fn instant_series(log: &ReplayLog, side: Side) -> Vec<(f64, f64, f64)> {
    let sps = i64::from(log.header.steps_per_second);
    let window = EPM_WINDOW_SECONDS * sps;
    let scale = 60.0 / EPM_WINDOW_SECONDS as f64;
    let recs: Vec<_> = counted(log, side).collect();
    let mut out = Vec::new();
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut end = window;
    while end <= log.duration_steps {
        while hi < recs.len() && recs[hi].step < end {
            hi += 1;
        }
        while lo < hi && recs[lo].step < end - window {
            lo += 1;
        }
        let slice = &recs[lo..hi];
        let eff = slice.iter().filter(|r| r.is_effective).count();
        out.push((end as f64 / sps as f64, slice.len() as f64 * scale, eff as f64 * scale));
        end += sps;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: MetricsReport,
    pub used: usize,
    pub excluded: usize,
}

fn mean_side(items: &[SideMetrics]) -> Option<SideMetrics> {
    if items.is_empty() {
        return None;
    }
    let n = items.len() as f64;
    let avg = |f: fn(&SideMetrics) -> f64| items.iter().map(f).sum::<f64>() / n;
    Some(SideMetrics::from_columns(
        avg(|m| m.apm),
        avg(|m| m.epm),
        avg(|m| m.co),
        avg(|m| m.ao),
        avg(|m| m.ncr),
    ))
}

/// Per-replay arithmetic means. `None` entries are incomplete rows: excluded and counted.
pub fn aggregate(reports: &[Option<MetricsReport>]) -> Result<Aggregate, ReplayError> {
    let complete: Vec<&MetricsReport> = reports.iter().flatten().collect();
    if complete.is_empty() {
        return Err(ReplayError::DegenerateInput("no complete reports".into()));
    }
    let collect = |side: Side| -> Vec<SideMetrics> { complete.iter().filter_map(|r| r.side(side).copied()).collect() };
    Ok(Aggregate {
        mean: MetricsReport {
            label: "mean".into(),
            agent: mean_side(&collect(Side::Agent)),
            player: mean_side(&collect(Side::Player)),
        },
        used: complete.len(),
        excluded: reports.len() - complete.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimates {
    /// mean(apm) / mean(epm)
    pub ratio_of_means: f64,
    /// mean(apm / epm)
    pub mean_of_ratios: f64,
}

pub fn apm_epm_ratio(reports: &[Option<MetricsReport>], side: Side) -> Result<RatioEstimates, ReplayError> {
    let ms: Vec<SideMetrics> = reports.iter().flatten().filter_map(|r| r.side(side).copied()).collect();
    if ms.is_empty() {
        return Err(ReplayError::DegenerateInput("no complete reports".into()));
    }
    let n = ms.len() as f64;
    let apm = ms.iter().map(|m| m.apm).sum::<f64>() / n;
    let epm = ms.iter().map(|m| m.epm).sum::<f64>() / n;
    Ok(RatioEstimates {
        ratio_of_means: apm / epm,
        mean_of_ratios: ms.iter().map(|m| m.apm / m.epm).sum::<f64>() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{InterfaceKind, ProblemSpec};
    use crate::replay::ActionRecord;

    fn log_with(n_actions: usize, n_effective: usize, seconds: i64) -> ReplayLog {
        let mut log = ReplayLog::new(&ProblemSpec::unconstrained(InterfaceKind::Raw), 0, "", vec![Side::Agent], 16);
        for i in 0..n_actions {
            log.records.push(ActionRecord::new(i as i64, Side::Agent, "ProduceProbe", i < n_effective, false));
        }
        log.duration_steps = seconds * 16;
        log
    }

    #[test]
    fn rates_by_definition() {
        let log = log_with(200, 100, 60);
        assert_eq!(compute_apm(&log, Side::Agent).unwrap(), 200.0);
        assert_eq!(compute_epm(&log, Side::Agent).unwrap(), 100.0);
        let all = log_with(50, 50, 30);
        assert_eq!(compute_apm(&all, Side::Agent).unwrap(), compute_epm(&all, Side::Agent).unwrap());
    }

    #[test]
    fn rejected_count_toward_neither() {
        let mut log = log_with(10, 10, 60);
        log.records.push(ActionRecord::new(20, Side::Agent, "ProduceProbe", false, true));
        log.records.push(ActionRecord::new(21, Side::Agent, "MoveCamera", true, true));
        assert_eq!(compute_apm(&log, Side::Agent).unwrap(), 10.0);
        assert_eq!(camera_stats(&log, Side::Agent).unwrap(), (0, 10, 1.0));
    }

    #[test]
    fn zero_duration() {
        let log = log_with(0, 0, 0);
        assert!(matches!(compute_apm(&log, Side::Agent), Err(ReplayError::DegenerateLog(_))));
    }

    #[test]
    fn ncr_cases() {
        assert!((ncr_from_counts(311.0, 925.0) - 0.664).abs() < 5e-4);
        assert_eq!(ncr_from_counts(0.0, 10.0), 1.0);
        assert_eq!(ncr_from_counts(10.0, 10.0), 0.0);
        let m = SideMetrics::from_columns(1.0, 100.0, 5.0, 5.0, 0.0);
        assert_eq!(non_camera_epm(&m), 0.0);
    }

    #[test]
    fn aggregate_of_copies() {
        let r = MetricsReport {
            label: "x".into(),
            agent: Some(SideMetrics::from_columns(200.0, 180.0, 300.0, 900.0, 0.6)),
            player: None,
        };
        let agg = aggregate(&[Some(r.clone()), None, Some(r.clone()), Some(r.clone())]).unwrap();
        assert_eq!(agg.mean.agent, r.agent);
        assert_eq!((agg.used, agg.excluded), (3, 1));
        assert!(matches!(aggregate(&[None]), Err(ReplayError::DegenerateInput(_))));
    }

    #[test]
    fn instant_window() {
        let log = log_with(40, 20, 10);
        let s = instant_series(&log, Side::Agent);
        assert_eq!(s.len(), 6);
        // All 40 actions fall in the first 80 steps.
        assert_eq!(s[0], (5.0, 40.0 * 12.0, 20.0 * 12.0));
        assert_eq!(s[5].1, 0.0);
    }

    #[test]
    fn equal_rates_give_unit_ratio() {
        let r = MetricsReport {
            label: "x".into(),
            agent: Some(SideMetrics::from_columns(150.0, 150.0, 1.0, 2.0, 0.5)),
            player: None,
        };
        let e = apm_epm_ratio(&[Some(r.clone()), Some(r)], Side::Agent).unwrap();
        assert_eq!((e.ratio_of_means, e.mean_of_ratios), (1.0, 1.0));
    }
}
