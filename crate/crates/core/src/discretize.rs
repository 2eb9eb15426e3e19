//! Discretization of the relaxed solution.
//!
//! Alternately minimizes `||X - Z R Λ||_F` over a one-hot cluster indicator
//! `X`, an orthogonal `R` and a positive diagonal `Λ`. The final `X` is the
//! unconstrained discrete solution; clamping and row-normalizing `Z R Λ`
//! yields soft cluster memberships.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Lower bound on every scaling entry; keeps `Λ` invertible.
pub const LAMBDA_FLOOR: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Relative residual improvement below which the loop stops.
pub const STALL_TOLERANCE: f64 = 1e-6;

/// Default termination threshold: `1e-6 * sqrt(n)`.
pub fn default_epsilon(n: usize) -> f64 {
    1e-6 * (n as f64).sqrt()
}

/// One-hot row indicator stored as a cluster label per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicator {
    labels: Vec<usize>,
    k: usize,
}

impl Indicator {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::Shape(format!("label {bad} out of range for {k} clusters")));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn empty_clusters(&self) -> Vec<usize> {
        self.cluster_sizes()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.labels.len(), self.k);
        for (i, &l) in self.labels.iter().enumerate() {
            x[(i, l)] = 1.0;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Residual fell to epsilon or below.
    Converged,
    /// Relative improvement fell below [`STALL_TOLERANCE`].
    Stalled,
    MaxIterations,
    /// An iteration increased the residual and was discarded.
    Rejected,
}

#[derive(Debug, Clone)]
pub struct DiscretizationState {
    pub indicator: Indicator,
    pub rotation: DMatrix<f64>,
    pub scaling: DVector<f64>,
    pub residual: f64,
    /// Iterations executed, including a rejected final one.
    pub iterations: usize,
    /// Residual of the initial state followed by every accepted iteration.
    pub history: Vec<f64>,
    pub termination: Termination,
    /// Columns whose scaling hit the floor because `Z R` had a zero column.
    pub degenerate_columns: Vec<usize>,
}

impl DiscretizationState {
    /// The continuous aligned matrix `Z R Λ`.
    pub fn aligned(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        aligned(z, &self.rotation, &self.scaling)
    }
}

/// Soft memberships: nonnegative rows summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticSolution {
    pub p: DMatrix<f64>,
    /// Rows with no positive entry, replaced by the uniform distribution.
    pub uniform_rows: Vec<usize>,
}

fn aligned(z: &DMatrix<f64>, r: &DMatrix<f64>, lambda: &DVector<f64>) -> DMatrix<f64> {
    let mut m = z * r;
    for (j, mut col) in m.column_iter_mut().enumerate() {
        col *= lambda[j];
    }
    m
}

pub fn residual(x: &Indicator, z: &DMatrix<f64>, r: &DMatrix<f64>, lambda: &DVector<f64>) -> f64 {
    (x.to_matrix() - aligned(z, r, lambda)).norm()
}

/// Initial rotation from mutually far-apart row directions of `Z`.
///
/// Rows are normalized to unit length. Starting from a seed row, pivots are
/// added greedily, each one minimizing the accumulated cosine to the pivots
/// already chosen, so opposite directions count as far apart. The rotation
/// for a pivot set is the orthogonal matrix closest to it (its polar
/// factor); antipodal pivots thereby become the two bisectors of a 90 degree
/// pair instead of collapsing. Every row is tried as the seed and the
/// rotation with the smallest starting residual wins, ties to the lowest
/// seed row. Falls back to the identity when `Z` has no nonzero row.
pub fn init_rotation(z: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, k) = z.shape();
    if k <= 1 || n < k {
        return DMatrix::identity(k, k);
    }
    let mut unit = z.clone();
    let mut live = Vec::with_capacity(n);
    for (i, mut row) in unit.row_iter_mut().enumerate() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
            live.push(i);
        }
    }
    if live.is_empty() {
        return DMatrix::identity(k, k);
    }
    let cosines = &unit * unit.transpose();

    let mut best: Option<(f64, DMatrix<f64>)> = None;
    for &seed in &live {
        let mut pivots = DMatrix::zeros(k, k);
        pivots.set_column(0, &unit.row(seed).transpose());
        let mut cost = cosines.row(seed).into_owned();
        for col in 1..k {
            let next = live
                .iter()
                .copied()
                .reduce(|a, b| if cost[b] < cost[a] { b } else { a })
                .expect("non-empty");
            pivots.set_column(col, &unit.row(next).transpose());
            cost += cosines.row(next);
        }
        let Some(r) = polar_factor(pivots) else { continue };
        let score = starting_residual(z, &r);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, r));
        }
    }
    best.map_or_else(|| DMatrix::identity(k, k), |(_, r)| r)
}

fn polar_factor(m: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let svd = m.svd(true, true);
    Some(svd.u? * svd.v_t?)
}

fn starting_residual(z: &DMatrix<f64>, r: &DMatrix<f64>) -> f64 {
    let x = update_indicator(&(z * r));
    match update_scaling(&x, z, r) {
        Ok(s) => residual(&x, z, r, &s.lambda),
        Err(_) => f64::INFINITY,
    }
}

fn argmax_first(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Row-wise argmax, ties to the lowest column. This is the exact minimizer
/// of `||X - M||_F` over one-hot indicators.
pub fn update_indicator(m: &DMatrix<f64>) -> Indicator {
    let labels = m.row_iter().map(|row| argmax_first(row.iter().copied())).collect();
    Indicator { labels, k: m.ncols() }
}

/// Orthogonal Procrustes step: `R = U V'` where `U S V' = Z' X Λ`.
pub fn update_rotation(
    x: &Indicator,
    z: &DMatrix<f64>,
    lambda: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    check_shapes(x, z, lambda.len())?;
    let mut target = x.to_matrix();
    for (j, mut col) in target.column_iter_mut().enumerate() {
        col *= lambda[j];
    }
    let cross = z.transpose() * target;
    if cross.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("rotation update"));
    }
    let svd = cross.svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => Ok(u * v_t),
        _ => Err(Error::Internal("SVD did not return singular vectors".into())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingUpdate {
    pub lambda: DVector<f64>,
    /// Columns where `Z R` vanished.
    pub degenerate_columns: Vec<usize>,
}

/// Column-wise least squares for `Λ`, clamped below at [`LAMBDA_FLOOR`].
pub fn update_scaling(x: &Indicator, z: &DMatrix<f64>, r: &DMatrix<f64>) -> Result<ScalingUpdate> {
    check_shapes(x, z, r.nrows())?;
    let zr = z * r;
    let k = zr.ncols();
    let mut num = vec![0.0; k];
    for (i, &l) in x.labels().iter().enumerate() {
        num[l] += zr[(i, l)];
    }
    let mut degenerate_columns = Vec::new();
    let lambda = DVector::from_fn(k, |j, _| {
        let den = zr.column(j).norm_squared();
        if den == 0.0 {
            degenerate_columns.push(j);
            return LAMBDA_FLOOR;
        }
        (num[j] / den).max(LAMBDA_FLOOR)
    });
    Ok(ScalingUpdate {
        lambda,
        degenerate_columns,
    })
}

fn check_shapes(x: &Indicator, z: &DMatrix<f64>, k: usize) -> Result<()> {
    if x.len() != z.nrows() || x.k() != z.ncols() || k != z.ncols() {
        return Err(Error::Shape(format!(
            "indicator {}x{}, Z {}x{}, K {}",
            x.len(),
            x.k(),
            z.nrows(),
            z.ncols(),
            k
        )));
    }
    Ok(())
}

/// Runs the X, R, Λ updates until the residual drops to `epsilon`, stops
/// improving, or `max_iter` iterations have run.
///
/// At least one iteration always runs. An iteration that increases the
/// residual is discarded and the previous state returned.
pub fn alternate_minimize(
    z: &DMatrix<f64>,
    epsilon: f64,
    max_iter: usize,
) -> Result<DiscretizationState> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("relaxed solution"));
    }

    let k = z.ncols();
    let rotation = init_rotation(z);
    let scaling = DVector::from_element(k, 1.0);
    let indicator = update_indicator(&aligned(z, &rotation, &scaling));
    let start = residual(&indicator, z, &rotation, &scaling);
    let mut state = DiscretizationState {
        indicator,
        rotation,
        scaling,
        residual: start,
        iterations: 0,
        history: vec![start],
        termination: Termination::MaxIterations,
        degenerate_columns: Vec::new(),
    };

    for iteration in 1..=max_iter {
        state.iterations = iteration;
        let x = update_indicator(&state.aligned(z));
        let r = update_rotation(&x, z, &state.scaling)?;
        let scaled = update_scaling(&x, z, &r)?;
        let res = residual(&x, z, &r, &scaled.lambda);

        if res > state.residual {
            state.termination = Termination::Rejected;
            return Ok(state);
        }
        let improvement = state.residual - res;
        state.indicator = x;
        state.rotation = r;
        state.scaling = scaled.lambda;
        state.degenerate_columns = scaled.degenerate_columns;
        state.residual = res;
        state.history.push(res);

        if res <= epsilon {
            state.termination = Termination::Converged;
            return Ok(state);
        }
        if improvement < STALL_TOLERANCE * (res + improvement) {
            state.termination = Termination::Stalled;
            return Ok(state);
        }
    }
    state.termination = Termination::MaxIterations;
    Ok(state)
}

/// Clamps negative entries to zero and normalizes each row to sum to one.
/// Rows with nothing left become uniform.
pub fn probabilistic_solution(aligned: &DMatrix<f64>) -> ProbabilisticSolution {
    let (n, k) = aligned.shape();
    let mut p = aligned.map(|v| v.max(0.0));
    let mut uniform_rows = Vec::new();
    for i in 0..n {
        let sum: f64 = p.row(i).sum();
        if sum > 0.0 {
            p.row_mut(i).scale_mut(sum.recip());
        } else {
            uniform_rows.push(i);
            p.row_mut(i).fill(1.0 / k as f64);
        }
    }
    ProbabilisticSolution { p, uniform_rows }
}
