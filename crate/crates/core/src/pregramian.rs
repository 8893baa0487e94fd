//! Truncated pre-Gramians `(g(lambda + x - k))` and their extremal singular values.
//!
//! Rows are the shifted nodes `lambda + x` that fall in `[-T, T]`; columns are
//! the integers `k` with `|k| <= T + K`, where `K` is the decay radius of the
//! window at the requested tolerance. The smallest singular value is taken on
//! the columns `|k| <= T - margin`: columns near the window edge only see
//! rows on one side and would report spurious near-null directions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::linalg;
use crate::pointset::PointSet;

/// Relative floor below which a lower bound counts as zero.
pub const DEFAULT_SAMPLING_FLOOR: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct PreGramianWindow {
    /// Row positions `lambda + x`.
    pub rows: Vec<f64>,
    /// Integer label of column 0.
    pub col_start: i64,
    pub values: DMatrix<f64>,
    /// Bound on the omitted part of every row.
    pub tail_bound: f64,
    pub interior_margin: usize,
    pub shift: f64,
    pub half_width: f64,
}

impl PreGramianWindow {
    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    /// Integer labels of the columns.
    pub fn col_labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.ncols() as i64).map(move |j| self.col_start + j)
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.interior_margin = margin;
        self
    }

    /// Column range kept for the lower bound: labels `k` with
    /// `|k| <= T - margin`.
    pub fn interior_range(&self) -> std::ops::Range<usize> {
        let reach = (self.half_width - self.interior_margin as f64).floor() as i64;
        if reach < 0 {
            return 0..0;
        }
        let first = (-reach - self.col_start).clamp(0, self.ncols() as i64) as usize;
        let last = (reach - self.col_start + 1).clamp(0, self.ncols() as i64) as usize;
        first..last
    }

    pub fn interior(&self) -> DMatrix<f64> {
        let r = self.interior_range();
        self.values.columns(r.start, r.len()).into_owned()
    }
}

/// Default interior margin `ceil(5 / separation)`.
pub fn default_margin(points: &PointSet) -> usize {
    match points.separation() {
        Ok(s) if s > 0.0 => (5.0 / s).ceil() as usize,
        _ => 0,
    }
}

pub fn build(gen: &Generator, points: &PointSet, x: f64, t: f64, tol: f64) -> Result<PreGramianWindow> {
    if !gen.is_real() {
        return Err(Error::UnsupportedKind("pre-Gramian"));
    }
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("T must exceed 1, got {t}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let rows: Vec<f64> = points.points().iter().map(|p| p + x).filter(|r| r.abs() <= t).collect();
    if rows.is_empty() {
        return Err(Error::EmptyWindow { t });
    }
    let radius = gen.decay_radius(tol)?;
    let tail_bound = gen.tail_bound(radius)?.unwrap_or(tol);
    let reach = radius.ceil() as i64;
    let col_start = (-t).floor() as i64 - reach;
    let col_end = t.ceil() as i64 + reach;
    let ncols = (col_end - col_start + 1) as usize;
    let mut values = DMatrix::zeros(rows.len(), ncols);
    let entry_tol = tol / (2.0 * radius + 2.0);
    for (i, &r) in rows.iter().enumerate() {
        let lo = ((r - radius).floor() as i64).max(col_start);
        let hi = ((r + radius).ceil() as i64).min(col_end);
        for k in lo..=hi {
            values[(i, (k - col_start) as usize)] = gen.eval(r - k as f64, entry_tol)?;
        }
    }
    if values.iter().all(|v| v.abs() < tol) {
        return Err(Error::DegenerateMatrix);
    }
    Ok(PreGramianWindow {
        rows,
        col_start,
        values,
        tail_bound,
        interior_margin: default_margin(points),
        shift: x,
        half_width: t,
    })
}

/// `(sigma_min, sigma_max)`: the lower bound on interior columns and the norm
/// of the full window.
pub fn sigma_extremes(pg: &PreGramianWindow) -> Result<(f64, f64)> {
    if pg.nrows() == 0 || pg.ncols() == 0 {
        return Err(Error::DegenerateMatrix);
    }
    let (_, smax) = linalg::extremes(&pg.values);
    if smax == 0.0 {
        return Err(Error::DegenerateMatrix);
    }
    let (smin, _) = linalg::extremes(&pg.interior());
    Ok((smin, smax))
}

/// `n_Lambda * ||g||_W`, an upper bound for every truncation's norm.
pub fn schur_upper(gen: &Generator, points: &PointSet) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point set".into()));
    }
    Ok(points.rel_separation() as f64 * gen.wiener_norm_bound()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingVerdict {
    Sampling,
    NotSampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingBounds {
    #[serde(rename = "A_est")]
    pub a_est: f64,
    #[serde(rename = "B_est")]
    pub b_est: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub margin: usize,
    pub x: f64,
    pub floor: f64,
    pub verdict: SamplingVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingOptions {
    pub t: f64,
    pub margin: Option<usize>,
    pub x: f64,
    pub tol: f64,
    /// Verdict floor relative to `B_est`.
    pub floor_rel: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            t: 40.0,
            margin: None,
            x: 0.0,
            tol: 1e-12,
            floor_rel: DEFAULT_SAMPLING_FLOOR,
        }
    }
}

/// `A_est = sigma_min^2`, `B_est = sigma_max^2` on one truncation.
pub fn sampling_bounds(gen: &Generator, points: &PointSet, opts: &SamplingOptions) -> Result<SamplingBounds> {
    let mut pg = build(gen, points, opts.x, opts.t, opts.tol)?;
    if let Some(m) = opts.margin {
        pg = pg.with_margin(m);
    }
    let (smin, smax) = sigma_extremes(&pg)?;
    let (a, b) = (smin * smin, smax * smax);
    let floor = opts.floor_rel * b;
    Ok(SamplingBounds {
        a_est: a,
        b_est: b,
        t: opts.t,
        margin: pg.interior_margin,
        x: opts.x,
        floor,
        verdict: if a > floor {
            SamplingVerdict::Sampling
        } else {
            SamplingVerdict::NotSampling
        },
    })
}

/// Bounds over a sequence of growing windows, with a convergence flag: the
/// last two lower bounds must agree to `rel_change`.
pub fn sampling_bounds_over_windows(
    gen: &Generator,
    points: &PointSet,
    ts: &[f64],
    opts: &SamplingOptions,
    rel_change: f64,
) -> Result<(Vec<SamplingBounds>, bool)> {
    let runs = ts
        .iter()
        .map(|&t| sampling_bounds(gen, points, &SamplingOptions { t, ..*opts }))
        .collect::<Result<Vec<_>>>()?;
    let converged = match runs.as_slice() {
        [.., a, b] => (a.a_est - b.a_est).abs() <= rel_change * a.a_est.max(b.a_est),
        _ => true,
    };
    Ok((runs, converged))
}
