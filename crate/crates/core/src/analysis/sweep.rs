use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KnockoutError, Result};
use crate::model::{expected_steps_game, win_distributions_up_to, MatrixMode, ShotParams};

/// Two win probabilities closer than this are reported as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Inclusive arithmetic grid `start, start + step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(KnockoutError::InvalidConfig(format!(
                "bad grid {start}:{stop}:{step} (step must be positive)"
            )));
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            step: 1.0,
        }
    }

    /// Grid points, snapped to 12 decimals so `0.1 + 0.2` prints as `0.3`.
    pub fn values(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Clone, Copy)]
pub enum Exclusion {
    /// Skip one `(p, q)` pair, compared within 1e-9.
    Point {
        p: f64,
        q: f64,
    },
    Predicate(fn(usize, f64, f64) -> bool),
}

impl Exclusion {
    fn matches(&self, n: usize, p: f64, q: f64) -> bool {
        match *self {
            Exclusion::Point { p: ep, q: eq } => (p - ep).abs() < 1e-9 && (q - eq).abs() < 1e-9,
            Exclusion::Predicate(f) => f(n, p, q),
        }
    }
}

impl fmt::Debug for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::Point { p, q } => write!(f, "Point(p={p}, q={q})"),
            Exclusion::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n_values: Vec<usize>,
    pub p_grid: Grid,
    pub q_grid: Grid,
    pub mode: MatrixMode,
    pub exclusions: Vec<Exclusion>,
}

impl SweepSpec {
    /// The one non-terminating grid point: `p = 0, q = 1`.
    pub fn default_exclusions() -> Vec<Exclusion> {
        vec![Exclusion::Point { p: 0.0, q: 1.0 }]
    }

    /// n ∈ 2..=12, p ∈ {0, 0.05, …, 0.95}, q ∈ {0.05, …, 1}.
    pub fn desk_scale(mode: MatrixMode) -> Self {
        Self {
            n_values: (2..=12).collect(),
            p_grid: Grid::new(0.0, 0.95, 0.05).expect("static grid"),
            q_grid: Grid::new(0.05, 1.0, 0.05).expect("static grid"),
            mode,
            exclusions: Self::default_exclusions(),
        }
    }

    /// n ∈ 2..=59, p ∈ {0, 0.01, …, 0.99}, q ∈ {0.01, …, 1}. Hours of work.
    pub fn full_scale(mode: MatrixMode) -> Self {
        Self {
            n_values: (2..=59).collect(),
            p_grid: Grid::new(0.0, 0.99, 0.01).expect("static grid"),
            q_grid: Grid::new(0.01, 1.0, 0.01).expect("static grid"),
            mode,
            exclusions: Self::default_exclusions(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(KnockoutError::InvalidPlayerCount { n, min: 2 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub mode: MatrixMode,
    pub win_probs: Vec<f64>,
    /// Earliest position attaining the minimum.
    pub argmin_position: usize,
    /// Earliest position attaining the maximum.
    pub argmax_position: usize,
    /// Another position is within [`TIE_TOLERANCE`] of the minimum.
    pub min_tied: bool,
    pub max_tied: bool,
    pub spread: f64,
    pub expected_steps_game: f64,
}

impl SweepRecord {
    pub fn from_win_probs(
        n: usize,
        params: ShotParams,
        mode: MatrixMode,
        win_probs: Vec<f64>,
    ) -> Result<Self> {
        let (mut lo, mut hi) = (0, 0);
        for (i, &w) in win_probs.iter().enumerate() {
            if w < win_probs[lo] {
                lo = i;
            }
            if w > win_probs[hi] {
                hi = i;
            }
        }
        let near = |target: usize| {
            win_probs
                .iter()
                .enumerate()
                .any(|(i, &w)| i != target && (w - win_probs[target]).abs() <= TIE_TOLERANCE)
        };
        Ok(Self {
            n,
            p: params.p(),
            q: params.q(),
            mode,
            argmin_position: lo + 1,
            argmax_position: hi + 1,
            min_tied: near(lo),
            max_tied: near(hi),
            spread: win_probs[hi] - win_probs[lo],
            expected_steps_game: expected_steps_game(n, params)?,
            win_probs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SweepRow {
    Record(SweepRecord),
    Excluded {
        n: usize,
        p: f64,
        q: f64,
        reason: String,
    },
}

impl SweepRow {
    pub fn record(&self) -> Option<&SweepRecord> {
        match self {
            SweepRow::Record(r) => Some(r),
            SweepRow::Excluded { .. } => None,
        }
    }
}

fn evaluate_point(spec: &SweepSpec, p: f64, q: f64) -> Vec<SweepRow> {
    let n_max = spec.n_values.iter().copied().max().unwrap_or(0);
    let excluded = |n: usize, reason: String| SweepRow::Excluded { n, p, q, reason };

    let params = match ShotParams::new(p, q) {
        Ok(sp) => sp,
        Err(e) => {
            return spec
                .n_values
                .iter()
                .map(|&n| excluded(n, e.to_string()))
                .collect()
        }
    };
    let wins = win_distributions_up_to(n_max, params, spec.mode);
    spec.n_values
        .iter()
        .map(|&n| {
            if spec.exclusions.iter().any(|x| x.matches(n, p, q)) {
                return excluded(n, "excluded grid point".into());
            }
            match &wins {
                Ok(all) => {
                    match SweepRecord::from_win_probs(
                        n,
                        params,
                        spec.mode,
                        all[n - 1].probs.clone(),
                    ) {
                        Ok(r) => SweepRow::Record(r),
                        Err(e) => excluded(n, e.to_string()),
                    }
                }
                Err(e) => excluded(n, e.to_string()),
            }
        })
        .collect()
}

/// Evaluates every grid point. Rows come back n-major, then by `p`, then
/// by `q`, regardless of `jobs`. Failing points become excluded rows.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let ps = spec.p_grid.values();
    let qs = spec.q_grid.values();
    if spec.n_values.is_empty() || ps.is_empty() || qs.is_empty() {
        return Ok(Vec::new());
    }
    let points: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().map(move |&q| (p, q)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| KnockoutError::InvalidConfig(e.to_string()))?;
    // per_point[i][j]: point i, j-th entry of n_values
    let per_point: Vec<Vec<SweepRow>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(p, q)| evaluate_point(spec, p, q))
            .collect()
    });

    let mut order: Vec<usize> = (0..spec.n_values.len()).collect();
    order.sort_by_key(|&j| spec.n_values[j]);
    let mut rows = Vec::with_capacity(points.len() * order.len());
    for j in order {
        rows.extend(per_point.iter().map(|row| row[j].clone()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_are_snapped() {
        let g = Grid::new(0.0, 0.3, 0.1).unwrap();
        assert_eq!(g.values(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(Grid::new(0.05, 1.0, 0.05).unwrap().values().len(), 20);
        assert_eq!(Grid::new(0.0, 0.99, 0.01).unwrap().values().len(), 100);
        assert!(Grid::new(0.5, 0.1, 0.1).unwrap().values().is_empty());
        assert_eq!(Grid::single(0.4).values(), vec![0.4]);
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn ties_and_extrema() {
        let sp = ShotParams::new(0.4, 0.9).unwrap();
        let r = SweepRecord::from_win_probs(3, sp, MatrixMode::Corrected, vec![0.25, 0.5, 0.25])
            .unwrap();
        assert_eq!(r.argmin_position, 1);
        assert!(r.min_tied);
        assert_eq!(r.argmax_position, 2);
        assert!(!r.max_tied);
        assert_eq!(r.spread, 0.25);
    }

    #[test]
    fn invalid_points_become_excluded_rows() {
        let spec = SweepSpec {
            n_values: vec![3],
            p_grid: Grid::single(0.0),
            q_grid: Grid::new(0.0, 1.0, 0.5).unwrap(),
            mode: MatrixMode::Corrected,
            exclusions: SweepSpec::default_exclusions(),
        };
        let rows = run_sweep(&spec, 1).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(matches!(rows[0], SweepRow::Excluded { .. }));
        assert!(rows[1].record().is_some());
        assert!(matches!(rows[2], SweepRow::Excluded { .. }));
    }

    #[test]
    fn custom_predicate_exclusion() {
        fn odd(n: usize, _: f64, _: f64) -> bool {
            n % 2 == 1
        }
        let spec = SweepSpec {
            n_values: vec![2, 3, 4],
            p_grid: Grid::single(0.4),
            q_grid: Grid::single(0.9),
            mode: MatrixMode::Corrected,
            exclusions: vec![Exclusion::Predicate(odd)],
        };
        let rows = run_sweep(&spec, 1).unwrap();
        let kept: Vec<usize> = rows
            .iter()
            .filter_map(|r| r.record())
            .map(|r| r.n)
            .collect();
        assert_eq!(kept, vec![2, 4]);
    }

    #[test]
    fn row_order_is_n_major() {
        let spec = SweepSpec {
            n_values: vec![4, 2],
            p_grid: Grid::new(0.2, 0.4, 0.2).unwrap(),
            q_grid: Grid::new(0.5, 1.0, 0.5).unwrap(),
            mode: MatrixMode::Corrected,
            exclusions: vec![],
        };
        let rows = run_sweep(&spec, 3).unwrap();
        let keys: Vec<(usize, f64, f64)> = rows
            .iter()
            .filter_map(|r| r.record())
            .map(|r| (r.n, r.p, r.q))
            .collect();
        assert_eq!(
            keys,
            vec![
                (2, 0.2, 0.5),
                (2, 0.2, 1.0),
                (2, 0.4, 0.5),
                (2, 0.4, 1.0),
                (4, 0.2, 0.5),
                (4, 0.2, 1.0),
                (4, 0.4, 0.5),
                (4, 0.4, 1.0)
            ]
        );
        assert_eq!(run_sweep(&spec, 1).unwrap(), rows);
    }

    #[test]
    fn empty_grid_gives_no_rows() {
        let spec = SweepSpec {
            n_values: vec![],
            ..SweepSpec::desk_scale(MatrixMode::Corrected)
        };
        assert!(run_sweep(&spec, 1).unwrap().is_empty());
        let bad = SweepSpec {
            n_values: vec![1],
            ..SweepSpec::desk_scale(MatrixMode::Corrected)
        };
        assert!(run_sweep(&bad, 1).is_err());
    }
}
