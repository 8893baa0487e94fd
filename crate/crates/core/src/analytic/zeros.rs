use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffSeq;
use crate::error::{Error, Result};
use crate::generator::{golden_min, reduce, Generator, GeneratorSpec};
use crate::reconstruct::Synthesizer;

const SYNTH_TOL: f64 = 1e-12;

/// Sign changes of `f` on `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub interval: (f64, f64),
    pub count: usize,
    pub locations: Vec<f64>,
    /// Local minima of `|f|` below the refinement tolerance without a sign
    /// change; reported but not counted.
    pub tangential: Vec<f64>,
    pub grid_step: f64,
}

fn validate_interval(interval: (f64, f64), grid_step: f64) -> Result<usize> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    if grid_step.is_nan() || grid_step <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    Ok(((b - a) / grid_step).ceil().max(1.0) as usize)
}

/// Zeros of `sum_k c_k g(x - k)` on `interval` by sign changes on a uniform
/// grid, each refined by bisection to `refine_tol`.
pub fn zero_count(
    spec: &GeneratorSpec,
    c: &CoeffSeq,
    interval: (f64, f64),
    grid_step: f64,
    refine_tol: f64,
) -> Result<ZeroReport> {
    let n = validate_interval(interval, grid_step)?;
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "refine_tol must be positive, got {refine_tol}"
        )));
    }
    let gen = Generator::new(spec)?;
    if !gen.is_real() {
        return Err(Error::ComplexValued);
    }
    let synth = Synthesizer::new(&gen, c, SYNTH_TOL)?;
    let (a, b) = interval;
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + i as f64 * h }).collect();
    let fs = xs.iter().map(|&x| synth.eval(x)).collect::<Result<Vec<f64>>>()?;
    let f = |x: f64| synth.eval(x);

    // exact zeros (e.g. beyond the support of c) are bridged: a zero is
    // reported between consecutive nonzero samples of opposite sign
    let mut locations = Vec::new();
    let mut tangential = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..=n {
        if fs[i] == 0.0 {
            continue;
        }
        if let Some(j) = last {
            if fs[j] * fs[i] < 0.0 {
                locations.push(bisect(&f, xs[j], xs[i], fs[j], refine_tol)?);
            }
        }
        last = Some(i);
    }
    for i in 1..n {
        let v = fs[i].abs();
        let signs_agree = fs[i - 1] * fs[i] > 0.0 && fs[i] * fs[i + 1] > 0.0;
        if signs_agree && v <= fs[i - 1].abs() && v <= fs[i + 1].abs() {
            let abs_f = |x: f64| f(x).map(f64::abs).unwrap_or(f64::INFINITY);
            let x = golden_min(abs_f, xs[i - 1], xs[i + 1], refine_tol);
            if abs_f(x) < refine_tol {
                tangential.push(x);
            }
        }
    }
    tangential.sort_by(f64::total_cmp);
    Ok(ZeroReport {
        interval,
        count: locations.len(),
        locations,
        tangential,
        grid_step,
    })
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if f_lo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(I + delta_j d/dx) sum_k c_k g(. - k)` as a function in the space of the
/// reduced window: the coefficients do not change.
pub fn apply_factor(spec: &GeneratorSpec, c: &CoeffSeq, j: usize) -> Result<(GeneratorSpec, CoeffSeq)> {
    Ok((reduce(spec, j)?, c.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RolleAudit {
    pub before: ZeroReport,
    pub after: ZeroReport,
    pub ok: bool,
}

/// Zero counts before and after applying the `j`-th factor; on a window at
/// most one zero may be lost.
pub fn rolle_audit(
    spec: &GeneratorSpec,
    c: &CoeffSeq,
    j: usize,
    interval: (f64, f64),
    grid_step: f64,
) -> Result<RolleAudit> {
    let refine_tol = 1e-12;
    let before = zero_count(spec, c, interval, grid_step, refine_tol)?;
    let (reduced, c) = apply_factor(spec, c, j)?;
    let after = zero_count(&reduced, &c, interval, grid_step, refine_tol)?;
    let ok = after.count + 1 >= before.count;
    Ok(RolleAudit { before, after, ok })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RolleTrialConfig {
    pub trials: usize,
    pub interval: (f64, f64),
    pub grid_step: f64,
    pub seed: u64,
    /// Coefficients are drawn on `floor(a) - pad ..= ceil(b) + pad`.
    pub pad: i64,
}

impl Default for RolleTrialConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            interval: (-15.0, 15.0),
            grid_step: 0.005,
            seed: 0,
            pad: 3,
        }
    }
}

/// Randomised audits with coefficients uniform in `[-1, 1]`; trial `i` uses
/// stream `i` of the seeded generator and removes factor `1 + i mod n`.
pub fn rolle_trials(spec: &GeneratorSpec, cfg: &RolleTrialConfig) -> Result<Vec<RolleAudit>> {
    let n = match spec {
        GeneratorSpec::GaussianType { deltas, .. } if !deltas.is_empty() => deltas.len(),
        GeneratorSpec::GaussianType { .. } => {
            return Err(Error::InvalidParameter("window has no factor to remove".into()))
        }
        _ => return Err(Error::UnsupportedKind("rolle_trials")),
    };
    validate_interval(cfg.interval, cfg.grid_step)?;
    let lo = cfg.interval.0.floor() as i64 - cfg.pad;
    let hi = cfg.interval.1.ceil() as i64 + cfg.pad;
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let values = (lo..=hi).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let c = CoeffSeq::new(lo, values);
            rolle_audit(spec, &c, 1 + i % n, cfg.interval, cfg.grid_step)
        })
        .collect()
}
