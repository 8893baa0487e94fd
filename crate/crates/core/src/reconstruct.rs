//! Synthesis `f = sum_k c_k g(. - k)`, least-squares recovery of `c` from
//! nonuniform samples, and minimum-norm interpolation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use crate::coeffs::CoeffSeq;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::linalg::{self, BandedRows};
use crate::pointset::PointSet;
use crate::pregramian::{build, DEFAULT_SAMPLING_FLOOR};

/// Problems with fewer unknowns than this are solved densely.
pub const DENSE_LIMIT: usize = 500;
const SOLVER_REL_TOL: f64 = 1e-12;
const INTERPOLATION_TOL: f64 = 1e-10;

/// `sum_k c_k g(x - k)` for a real window.
pub fn synthesize(gen: &Generator, c: &CoeffSeq, x: f64, tol: f64) -> Result<f64> {
    let n = c.len().max(1) as f64;
    let scale = c.norm_inf().max(1.0);
    c.iter()
        .map(|(k, ck)| Ok(ck * gen.eval(x - k as f64, tol / (n * scale))?))
        .sum()
}

/// Repeated synthesis that skips terms beyond the decay radius.
#[derive(Clone, Debug)]
pub struct Synthesizer {
    gen: Generator,
    coeffs: CoeffSeq,
    radius: f64,
    tol: f64,
}

impl Synthesizer {
    pub fn new(gen: &Generator, coeffs: &CoeffSeq, tol: f64) -> Result<Self> {
        let scale = coeffs.norm_inf().max(1.0);
        let radius = gen.decay_radius(tol / (2.0 * scale))?;
        Ok(Self {
            gen: gen.clone(),
            coeffs: coeffs.clone(),
            radius,
            tol,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let lo = ((x - self.radius).floor() as i64).max(self.coeffs.offset);
        let hi = ((x + self.radius).ceil() as i64).min(self.coeffs.last_index());
        let n = (hi - lo + 1).max(1) as f64;
        (lo..=hi)
            .map(|k| Ok(self.coeffs.get(k) * self.gen.eval(x - k as f64, self.tol / (2.0 * n))?))
            .sum()
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub solver: Solver,
    /// Floor on `sigma_min^2` relative to `sigma_max^2`.
    pub floor_rel: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            solver: Solver::Auto,
            floor_rel: DEFAULT_SAMPLING_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub coeffs: CoeffSeq,
    pub residual_l2: f64,
    /// `(sigma_max / sigma_min)^2`.
    pub condition_estimate: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub solver: Solver,
    pub iterations: usize,
}

impl ReconstructionResult {
    /// `||c|| / ||a||` for interpolation results.
    pub fn gain(&self, data_norm: f64) -> f64 {
        if data_norm == 0.0 {
            0.0
        } else {
            self.coeffs.norm2() / data_norm
        }
    }
}

fn pick(solver: Solver, unknowns: usize) -> Solver {
    match solver {
        Solver::Auto if unknowns < DENSE_LIMIT => Solver::Dense,
        Solver::Auto => Solver::Iterative,
        s => s,
    }
}

/// Window nodes that `recover` and `interpolate` expect data for.
pub fn window_nodes(points: &PointSet, t: f64) -> Vec<f64> {
    points.window(-t, t).to_vec()
}

/// Least-squares coefficients on the interior columns of the pre-Gramian
/// over `Lambda ∩ [-T, T]`; `samples[i]` belongs to the i-th window node.
pub fn recover(
    gen: &Generator,
    points: &PointSet,
    samples: &[f64],
    t: f64,
    margin: usize,
    opts: &SolveOptions,
) -> Result<ReconstructionResult> {
    let pg = build(gen, points, 0.0, t, opts.tol)?.with_margin(margin);
    if samples.len() != pg.nrows() {
        return Err(Error::SampleCountMismatch {
            got: samples.len(),
            expected: pg.nrows(),
        });
    }
    let interior = pg.interior();
    let (_, smax) = linalg::extremes(&pg.values);
    let (smin, _) = linalg::extremes(&interior);
    let floor = opts.floor_rel * smax * smax;
    if smin * smin <= floor {
        return Err(Error::IllConditioned { a: smin * smin, floor });
    }
    let offset = pg.col_start + pg.interior_range().start as i64;
    let solver = pick(opts.solver, interior.ncols());
    let (values, iterations) = match solver {
        Solver::Dense => (linalg::dense_pinv_solve(&interior, samples), 0),
        _ => {
            let banded = BandedRows::from_dense(&interior);
            linalg::cgls(&banded, samples, SOLVER_REL_TOL, 20 * interior.ncols() + 100)?
        }
    };
    let residual_l2 = residual(&interior, &values, samples);
    Ok(ReconstructionResult {
        coeffs: CoeffSeq::new(offset, values),
        residual_l2,
        condition_estimate: (smax / smin).powi(2),
        sigma_min: smin,
        sigma_max: smax,
        solver,
        iterations,
    })
}

/// Minimum-norm coefficients with `sum_k c_k g(lambda - k) = a_lambda` on
/// `Lambda ∩ [-T, T]`.
pub fn interpolate(
    gen: &Generator,
    points: &PointSet,
    data: &[f64],
    t: f64,
    opts: &SolveOptions,
) -> Result<ReconstructionResult> {
    let pg = build(gen, points, 0.0, t, opts.tol)?;
    if data.len() != pg.nrows() {
        return Err(Error::SampleCountMismatch {
            got: data.len(),
            expected: pg.nrows(),
        });
    }
    let p = &pg.values;
    let s = linalg::singular_values(p);
    let smax = s.first().copied().unwrap_or(0.0);
    // lower bound of the synthesis map P' on the data space
    let smin = if p.nrows() > p.ncols() {
        0.0
    } else {
        s.last().copied().unwrap_or(0.0)
    };
    let solver = pick(opts.solver, p.ncols());
    let (values, iterations) = match solver {
        Solver::Dense => (linalg::dense_pinv_solve(p, data), 0),
        _ => {
            let banded = BandedRows::from_dense(p);
            match linalg::craig(&banded, data, SOLVER_REL_TOL, 20 * p.nrows() + 100) {
                Ok(r) => r,
                // rank-deficient rows: fall back to the least-squares solution
                Err(Error::NonConvergent { .. }) => (linalg::dense_pinv_solve(p, data), 0),
                Err(e) => return Err(e),
            }
        }
    };
    let residual_l2 = residual(p, &values, data);
    let scale = linalg::norm2(data);
    if scale > 0.0 && residual_l2 > INTERPOLATION_TOL * scale {
        return Err(Error::Infeasible {
            residual: residual_l2 / scale,
        });
    }
    Ok(ReconstructionResult {
        coeffs: CoeffSeq::new(pg.col_start, values),
        residual_l2,
        condition_estimate: if smin > 0.0 {
            (smax / smin).powi(2)
        } else {
            f64::INFINITY
        },
        sigma_min: smin,
        sigma_max: smax,
        solver,
        iterations,
    })
}

fn residual(m: &DMatrix<f64>, x: &[f64], b: &[f64]) -> f64 {
    let mx = m * nalgebra::DVector::from_column_slice(x);
    mx.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}
