use std::collections::BTreeMap;

use serde::Serialize;

use super::sweep::SweepRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LastBestException {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub argmax: usize,
}

/// The long-shot probability giving the largest spread for one `(n, q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadPeak {
    pub n: usize,
    pub q: f64,
    pub p: f64,
    pub spread: f64,
}

/// Mean even-position bump over all records with `n` players.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BumpProfile {
    pub n: usize,
    /// Entry `i` is position `i + 2`.
    pub mean_bump: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendSummary {
    pub record_count: usize,
    /// Records where position 1 is not the unique minimum.
    pub first_worst_violations: Vec<GridPoint>,
    pub last_best_count: usize,
    pub last_best_fraction: f64,
    pub last_best_exceptions: Vec<LastBestException>,
    pub spread_argmax_p: Vec<SpreadPeak>,
    pub even_bump_profile: Vec<BumpProfile>,
}

/// Local excess `w(k) − (w(k−1) + w(k+1)) / 2` at each interior position
/// `k = 2..n−1`; entry `i` is position `i + 2`. Empty for fewer than three
/// positions.
pub fn even_bump(win_probs: &[f64]) -> Vec<f64> {
    win_probs
        .windows(3)
        .map(|w| w[1] - (w[0] + w[2]) / 2.0)
        .collect()
}

pub fn detect_trends(records: &[SweepRecord]) -> TrendSummary {
    let first_worst_violations = records
        .iter()
        .filter(|r| r.argmin_position != 1 || r.min_tied)
        .map(|r| GridPoint {
            n: r.n,
            p: r.p,
            q: r.q,
        })
        .collect();

    let last_best_exceptions: Vec<LastBestException> = records
        .iter()
        .filter(|r| r.argmax_position != r.n)
        .map(|r| LastBestException {
            n: r.n,
            p: r.p,
            q: r.q,
            argmax: r.argmax_position,
        })
        .collect();
    let last_best_count = records.len() - last_best_exceptions.len();
    let last_best_fraction = if records.is_empty() {
        0.0
    } else {
        last_best_count as f64 / records.len() as f64
    };

    // Keyed by (n, q bits); BTreeMap keeps the output order stable. q is
    // positive so its bit pattern orders like the value.
    let mut peaks: BTreeMap<(usize, u64), SpreadPeak> = BTreeMap::new();
    for r in records {
        let entry = peaks.entry((r.n, r.q.to_bits())).or_insert(SpreadPeak {
            n: r.n,
            q: r.q,
            p: r.p,
            spread: r.spread,
        });
        if r.spread > entry.spread {
            entry.p = r.p;
            entry.spread = r.spread;
        }
    }

    let mut bumps: BTreeMap<usize, (Vec<f64>, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.n >= 3) {
        let (sum, count) = bumps.entry(r.n).or_insert((vec![0.0; r.n - 2], 0));
        for (s, b) in sum.iter_mut().zip(even_bump(&r.win_probs)) {
            *s += b;
        }
        *count += 1;
    }

    TrendSummary {
        record_count: records.len(),
        first_worst_violations,
        last_best_count,
        last_best_fraction,
        last_best_exceptions,
        spread_argmax_p: peaks.into_values().collect(),
        even_bump_profile: bumps
            .into_iter()
            .map(|(n, (sum, count))| BumpProfile {
                n,
                mean_bump: sum.into_iter().map(|s| s / count as f64).collect(),
            })
            .collect(),
    }
}
