//! Frame bounds of semi-regular Gabor systems `G(g, Lambda x beta Z)`.
//!
//! The system is first dilated to `G(g_beta, beta Lambda x Z)` with
//! the unitary dilation `g_beta(x) = beta^{-1/2} g(x / beta)`; its optimal frame bounds are the extremes over
//! `x ∈ [0, 1)` of the sampling bounds of the pre-Gramians `P_{beta Lambda + x}(g_beta)`.
//! The `x` range is discretised on a uniform grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorSpec, DEFAULT_TOL};
use crate::pointset::PointSet;
use crate::pregramian::{sampling_bounds, SamplingOptions};

/// Verdict floor relative to `B_est`.
pub const DEFAULT_FRAME_FLOOR: f64 = 1e-6;

/// `g(x / beta) = norm * spec(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledWindow {
    pub spec: GeneratorSpec,
    pub norm: f64,
}

pub fn scale_window(spec: &GeneratorSpec, beta: f64) -> Result<ScaledWindow> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    spec.validate()?;
    let scaled = match spec {
        GeneratorSpec::GaussianType { deltas, c } => ScaledWindow {
            spec: GeneratorSpec::GaussianType {
                deltas: deltas.iter().map(|d| d * beta).collect(),
                c: c * beta * beta,
            },
            norm: beta,
        },
        GeneratorSpec::OneSidedExp { delta } => ScaledWindow {
            spec: GeneratorSpec::OneSidedExp { delta: delta * beta },
            norm: beta,
        },
        GeneratorSpec::Sech { nu } => ScaledWindow {
            spec: GeneratorSpec::Sech { nu: nu / beta },
            norm: 1.0,
        },
        GeneratorSpec::Modulated { .. } => return Err(Error::UnsupportedKind("scale_window")),
    };
    Ok(scaled)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameParams {
    #[serde(rename = "T")]
    pub t: f64,
    pub margin: usize,
    pub x_resolution: usize,
    pub tol: f64,
    pub floor_rel: f64,
    /// Radius for the density estimate of the unscaled set; `None` picks a
    /// quarter of its extent.
    pub density_radius: Option<f64>,
    /// The lower bound is recomputed on `[-rT, rT]`; a drop of more than
    /// `max_window_drop` from there to `T` marks non-convergence.
    pub window_ratio: f64,
    pub max_window_drop: f64,
    /// Relative jump between neighbouring shifts that makes the sweep inconclusive.
    pub max_neighbour_jump: f64,
}

impl Default for FrameParams {
    fn default() -> Self {
        Self {
            t: 40.0,
            margin: 12,
            x_resolution: 64,
            tol: 1e-12,
            floor_rel: DEFAULT_FRAME_FLOOR,
            density_radius: None,
            window_ratio: 0.75,
            max_window_drop: 0.1,
            max_neighbour_jump: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameVerdict {
    Frame,
    NotFrame,
    Inconclusive,
}

impl FrameVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Frame => "frame",
            Self::NotFrame => "not_frame",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftBounds {
    pub x: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    #[serde(rename = "A_est")]
    pub a_est: f64,
    #[serde(rename = "B_est")]
    pub b_est: f64,
    pub x_profile: Vec<ShiftBounds>,
    pub beta: f64,
    /// `D^-(Lambda) / beta`.
    pub density: f64,
    pub verdict: FrameVerdict,
    pub floor: f64,
    /// Lower bound at the minimising shift on the smaller window.
    pub a_smaller_window: f64,
    pub converged: bool,
    pub max_neighbour_jump: f64,
    pub params: FrameParams,
    pub note: Option<String>,
}

impl FrameReport {
    /// Shift at which the lower bound is attained.
    pub fn argmin_x(&self) -> f64 {
        argmin(&self.x_profile)
    }
}

fn argmin(profile: &[ShiftBounds]) -> f64 {
    profile
        .iter()
        .fold(
            (f64::INFINITY, 0.0),
            |(a, x), s| if s.a < a { (s.a, s.x) } else { (a, x) },
        )
        .1
}

/// Frame bounds of `G(spec, Lambda x beta Z)`.
pub fn frame_bounds(spec: &GeneratorSpec, points: &PointSet, beta: f64, params: &FrameParams) -> Result<FrameReport> {
    if params.x_resolution == 0 {
        return Err(Error::InvalidParameter("x resolution must be positive".into()));
    }
    let sep = points.separation()?;
    if sep <= 0.0 {
        return Err(Error::InvalidParameter("point set must be separated".into()));
    }
    let scaled = scale_window(spec, beta)?;
    let gen = Generator::new(&scaled.spec)?;
    let nodes = points.scaled(beta);
    let t = params.t;
    match (nodes.min(), nodes.max()) {
        (Some(lo), Some(hi)) if lo <= -t && hi >= t => {}
        _ => return Err(Error::InsufficientCoverage { t }),
    }
    let base = SamplingOptions {
        t,
        margin: Some(params.margin),
        x: 0.0,
        tol: params.tol.max(DEFAULT_TOL * 1e-2),
        floor_rel: params.floor_rel,
    };
    // unitary dilation carries beta^{-1/2} g(x / beta) = beta^{-1/2} norm * spec
    let unit = scaled.norm * scaled.norm / beta;
    let n = params.x_resolution;
    let x_profile = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / n as f64;
            let b = sampling_bounds(&gen, &nodes, &SamplingOptions { x, ..base })?;
            Ok(ShiftBounds {
                x,
                a: unit * b.a_est,
                b: unit * b.b_est,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let a_est = x_profile.iter().map(|s| s.a).fold(f64::INFINITY, f64::min);
    let b_est = x_profile.iter().map(|s| s.b).fold(0.0, f64::max);
    let floor = params.floor_rel * b_est;

    let density_radius = params.density_radius.unwrap_or_else(|| {
        let (lo, hi) = (points.min().unwrap_or(0.0), points.max().unwrap_or(0.0));
        0.25 * (hi - lo)
    });
    let density = points.beurling(density_radius)?.lower / beta;

    let x_min = argmin(&x_profile);
    let a_smaller_window = sampling_bounds(
        &gen,
        &nodes,
        &SamplingOptions {
            x: x_min,
            t: t * params.window_ratio,
            ..base
        },
    )?
    .a_est
        * unit;
    let converged = a_est >= (1.0 - params.max_window_drop) * a_smaller_window;
    let jump = x_profile
        .windows(2)
        .map(|w| (w[1].a - w[0].a).abs() / w[0].a.max(w[1].a).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);

    let verdict = if a_est < floor || !converged {
        FrameVerdict::NotFrame
    } else if jump > params.max_neighbour_jump {
        FrameVerdict::Inconclusive
    } else {
        FrameVerdict::Frame
    };
    let note = match verdict {
        FrameVerdict::NotFrame if density > 1.0 => Some(format!(
            "lower bound vanishes although D^-(Lambda)/beta = {density:.6} > 1; refine T or the shift grid"
        )),
        FrameVerdict::Frame if density <= 1.0 => {
            Some(format!("lower bound positive at D^-(Lambda)/beta = {density:.6} <= 1"))
        }
        _ if !converged => Some("lower bound still decreasing with the window size".into()),
        _ => None,
    };
    Ok(FrameReport {
        a_est,
        b_est,
        x_profile,
        beta,
        density,
        verdict,
        floor,
        a_smaller_window,
        converged,
        max_neighbour_jump: jump,
        params: *params,
        note,
    })
}

/// One report per `beta` for the lattice `alpha Z`.
pub fn lattice_sweep(
    spec: &GeneratorSpec,
    alpha: f64,
    betas: &[f64],
    params: &FrameParams,
) -> Result<Vec<FrameReport>> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    betas
        .iter()
        .map(|&beta| {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
            }
            let lattice = PointSet::lattice_covering(alpha, params.t / beta + 1.0)?;
            frame_bounds(spec, &lattice, beta, params)
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "beta,alpha_beta,density,A_est,B_est,verdict";

/// `beta, alpha_beta, density, A_est, B_est, verdict` with 17 significant digits.
pub fn sweep_csv_row(report: &FrameReport, alpha: f64) -> String {
    format!(
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
        report.beta,
        alpha * report.beta,
        report.density,
        report.a_est,
        report.b_est,
        report.verdict.as_str()
    )
}
