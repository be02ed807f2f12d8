use std::collections::VecDeque;

use serde::Serialize;

use super::lu::LuFactorization;
use super::{DenseMatrix, MarkovError};

/// Row sums of `[Q | R]` must equal one within this tolerance.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// An absorbing Markov chain in canonical form: transient states first,
/// then absorbing states.
///
/// `transient` is the t×t block of transient-to-transient moves and
/// `absorbing` the t×r block of transient-to-absorbing moves. State
/// indices are zero-based.
#[derive(Debug, Clone)]
pub struct AbsorbingChain {
    transient: DenseMatrix,
    absorbing: DenseMatrix,
    labels: Vec<String>,
}

/// Probability of ending in each absorbing state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionResult {
    pub probabilities: Vec<f64>,
}

impl AbsorptionResult {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Structural problems found by [`validate_chain`]. Empty means healthy.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ChainDiagnostics {
    pub shape_error: Option<String>,
    /// `(row, sum)` for every row of `[Q | R]` whose sum is off by more than 1e-12.
    pub row_sum_defects: Vec<(usize, f64)>,
    /// `(row, column, value)` for entries outside `[0, 1]`; columns index `[Q | R]`.
    pub out_of_range: Vec<(usize, usize, f64)>,
    /// Transient states with no path to any absorbing state.
    pub trapped_states: Vec<usize>,
}

impl ChainDiagnostics {
    pub fn is_empty(&self) -> bool {
        self.shape_error.is_none()
            && self.row_sum_defects.is_empty()
            && self.out_of_range.is_empty()
            && self.trapped_states.is_empty()
    }

    fn is_structurally_sound(&self) -> bool {
        self.shape_error.is_none()
            && self.row_sum_defects.is_empty()
            && self.out_of_range.is_empty()
    }
}

/// Checks a `(Q, R)` pair for row-sum defects, out-of-range entries and
/// transient states that can never be absorbed. Never fails.
pub fn validate_chain(transient: &DenseMatrix, absorbing: &DenseMatrix) -> ChainDiagnostics {
    let mut diag = ChainDiagnostics::default();
    let t = transient.rows();
    if !transient.is_square() || absorbing.rows() != t {
        diag.shape_error = Some(format!(
            "Q is {}x{}, R is {}x{}",
            transient.rows(),
            transient.cols(),
            absorbing.rows(),
            absorbing.cols()
        ));
        return diag;
    }

    for i in 0..t {
        let row = transient.row(i).iter().chain(absorbing.row(i));
        let mut sum = 0.0;
        for (j, &v) in row.enumerate() {
            if !(0.0..=1.0).contains(&v) {
                diag.out_of_range.push((i, j, v));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            diag.row_sum_defects.push((i, sum));
        }
    }

    // Backward search from states with a direct absorbing edge.
    let mut can_absorb = vec![false; t];
    let mut queue = VecDeque::new();
    for (i, flag) in can_absorb.iter_mut().enumerate() {
        if absorbing.row(i).iter().any(|&v| v != 0.0) {
            *flag = true;
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for i in 0..t {
            if !can_absorb[i] && transient[(i, j)] != 0.0 {
                can_absorb[i] = true;
                queue.push_back(i);
            }
        }
    }
    diag.trapped_states = (0..t).filter(|&i| !can_absorb[i]).collect();
    diag
}

impl AbsorbingChain {
    /// Builds a chain, rejecting shape mismatches, entries outside `[0, 1]`
    /// and rows that do not sum to one. Trapped states are allowed here and
    /// surface later as [`MarkovError::NonAbsorbingChain`] from the solver.
    pub fn new(
        transient: DenseMatrix,
        absorbing: DenseMatrix,
        labels: Vec<String>,
    ) -> Result<Self, MarkovError> {
        let diag = validate_chain(&transient, &absorbing);
        if !diag.is_structurally_sound() {
            return Err(MarkovError::InvalidChain(Box::new(diag)));
        }
        let expected = transient.rows() + absorbing.cols();
        if labels.len() != expected {
            return Err(MarkovError::Shape(format!(
                "expected {expected} state labels, got {}",
                labels.len()
            )));
        }
        Ok(Self {
            transient,
            absorbing,
            labels,
        })
    }

    pub fn transient_count(&self) -> usize {
        self.transient.rows()
    }

    pub fn absorbing_count(&self) -> usize {
        self.absorbing.cols()
    }

    pub fn state_count(&self) -> usize {
        self.transient_count() + self.absorbing_count()
    }

    /// The Q block.
    pub fn transient_block(&self) -> &DenseMatrix {
        &self.transient
    }

    /// The R block.
    pub fn absorbing_block(&self) -> &DenseMatrix {
        &self.absorbing
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn validate(&self) -> ChainDiagnostics {
        validate_chain(&self.transient, &self.absorbing)
    }

    /// Full `(t + r)`-square transition matrix in canonical form.
    pub fn transition_matrix(&self) -> DenseMatrix {
        let (t, r) = (self.transient_count(), self.absorbing_count());
        let mut m = DenseMatrix::zeros(t + r, t + r);
        m.set_block(0, 0, &self.transient);
        m.set_block(0, t, &self.absorbing);
        m.set_block(t, t, &DenseMatrix::identity(r));
        m
    }

    /// Number of states (transient and absorbing) reachable from `start`,
    /// including `start` itself.
    pub fn reachable_count(&self, start: usize) -> usize {
        let t = self.transient_count();
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            if i >= t {
                continue;
            }
            let succ = self.transient.row(i).iter().chain(self.absorbing.row(i));
            for (j, &v) in succ.enumerate() {
                if v != 0.0 && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// Factors `(I - Q)ᵀ` once so several starts can be queried cheaply.
    pub fn solver(&self) -> Result<ChainSolver<'_>, MarkovError> {
        let t = self.transient_count();
        let mut a = DenseMatrix::identity(t);
        for i in 0..t {
            for j in 0..t {
                a[(j, i)] -= self.transient[(i, j)];
            }
        }
        let lu = LuFactorization::factor(&a).map_err(|e| match e {
            MarkovError::SingularMatrix { column, pivot } => {
                MarkovError::NonAbsorbingChain { column, pivot }
            }
            other => other,
        })?;
        Ok(ChainSolver { chain: self, lu })
    }

    fn check_start(&self, start: usize) -> Result<(), MarkovError> {
        if start >= self.transient_count() {
            return Err(MarkovError::StartOutOfRange {
                start,
                transient: self.transient_count(),
            });
        }
        Ok(())
    }
}

/// A chain with its `(I - Q)ᵀ` factorization.
#[derive(Debug, Clone)]
pub struct ChainSolver<'a> {
    chain: &'a AbsorbingChain,
    lu: LuFactorization,
}

impl ChainSolver<'_> {
    /// Row `start` of the fundamental matrix: expected visits to each
    /// transient state before absorption.
    pub fn expected_visits(&self, start: usize) -> Result<Vec<f64>, MarkovError> {
        self.chain.check_start(start)?;
        let mut e = vec![0.0; self.lu.dim()];
        e[start] = 1.0;
        self.lu.solve(&e)
    }

    pub fn absorption_probabilities(&self, start: usize) -> Result<AbsorptionResult, MarkovError> {
        let visits = self.expected_visits(start)?;
        Ok(AbsorptionResult {
            probabilities: self.chain.absorbing.left_mul_vec(&visits),
        })
    }

    pub fn expected_steps(&self, start: usize) -> Result<f64, MarkovError> {
        Ok(self.expected_visits(start)?.iter().sum())
    }
}

/// Probability of eventual absorption into each absorbing state from `start`.
pub fn absorption_probabilities(
    chain: &AbsorbingChain,
    start: usize,
) -> Result<AbsorptionResult, MarkovError> {
    chain.check_start(start)?;
    chain.solver()?.absorption_probabilities(start)
}

/// Expected number of transitions before absorption from `start`.
pub fn expected_steps(chain: &AbsorbingChain, start: usize) -> Result<f64, MarkovError> {
    chain.check_start(start)?;
    chain.solver()?.expected_steps(start)
}

/// Truncated series `e_startᵀ (I + Q + … + Q^K) R`.
///
/// Independent of the LU path; every entry is non-decreasing in `terms`.
pub fn absorption_by_power_series(
    chain: &AbsorbingChain,
    start: usize,
    terms: usize,
) -> Result<AbsorptionResult, MarkovError> {
    chain.check_start(start)?;
    let mut row = vec![0.0; chain.transient_count()];
    row[start] = 1.0;
    let mut acc = vec![0.0; chain.absorbing_count()];
    for k in 0..=terms {
        for (a, v) in acc.iter_mut().zip(chain.absorbing.left_mul_vec(&row)) {
            *a += v;
        }
        if k < terms {
            row = chain.transient.left_mul_vec(&row);
        }
    }
    Ok(AbsorptionResult { probabilities: acc })
}

/// Smallest power of two `K` with `‖Q^K‖∞ ≤ tolerance`, found by repeated
/// squaring. `None` if no `K ≤ 2^20` qualifies.
pub fn power_series_truncation(chain: &AbsorbingChain, tolerance: f64) -> Option<usize> {
    let mut power = chain.transient.clone();
    let mut k = 1usize;
    for _ in 0..=20 {
        if power.max_abs_row_sum() <= tolerance {
            return Some(k);
        }
        power = power.matmul(&power);
        k *= 2;
    }
    None
}
