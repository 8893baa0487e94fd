//! Discrete measures `mu = sum_j a_j delta_{t_j}`, their Gaussian STFT
//! `V mu(x, xi) = sum_j a_j e^{-pi (t_j - x)^2} e^{-2 pi i xi t_j}` and the
//! Bargmann transform
//!
//! `F(z) = sum_j a_j exp(-pi t_j^2 + 2 pi t_j z - pi z^2 / 2)`,
//!
//! which satisfies `F(z) e^{-pi |z|^2 / 2} = V mu(x, -xi) e^{-pi i x xi}` for
//! `z = x + i xi`. The weighted form never overflows and has the same phase as
//! `F`, so winding numbers are computed from it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of initial samples on each circle.
pub const DEFAULT_CIRCLE_SAMPLES: usize = 256;
/// Slack in the Jensen inequality check.
pub const JENSEN_TOL: f64 = 1e-6;

const MAX_SUBDIVISION: u32 = 24;
const RADIUS_RETRIES: usize = 3;

/// Atoms `(t_j, a_j)` with distinct real positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, Complex64)>,
}

/// `{"atoms": [[t, re, im], ...]}`
#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<(f64, f64, f64)>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(
            raw.atoms
                .into_iter()
                .map(|(t, re, im)| (t, Complex64::new(re, im)))
                .collect(),
        )
    }
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure {
            atoms: m.atoms.into_iter().map(|(t, a)| (t, a.re, a.im)).collect(),
        }
    }
}

impl DiscreteMeasure {
    pub fn new(mut atoms: Vec<(f64, Complex64)>) -> Result<Self> {
        if atoms
            .iter()
            .any(|(t, a)| !t.is_finite() || !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidParameter("atoms must be finite".into()));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicatePoint(w[0].0));
        }
        Ok(Self { atoms })
    }

    pub fn single(t: f64, a: Complex64) -> Self {
        Self { atoms: vec![(t, a)] }
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }

    /// Total variation `sum |a_j|`, a bound for `|F(z)| e^{-pi |z|^2 / 2}`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|(_, a)| a.norm()).sum()
    }
}

pub fn stft_measure(mu: &DiscreteMeasure, x: f64, xi: f64) -> Complex64 {
    mu.atoms
        .iter()
        .map(|&(t, a)| a * (-PI * (t - x) * (t - x)).exp() * Complex64::from_polar(1.0, -2.0 * PI * xi * t))
        .sum()
}

pub fn bargmann(mu: &DiscreteMeasure, z: Complex64) -> Complex64 {
    mu.atoms
        .iter()
        .map(|&(t, a)| a * (-PI * t * t + 2.0 * PI * t * z - 0.5 * PI * z * z).exp())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FockSample {
    pub z: Complex64,
    /// `F(z) e^{-pi |z|^2 / 2}`.
    pub f_weighted: Complex64,
}

fn weighted(mu: &DiscreteMeasure, z: Complex64) -> Complex64 {
    let (x, xi) = (z.re, z.im);
    mu.atoms
        .iter()
        .map(|&(t, a)| a * Complex64::from_polar((-PI * (t - x) * (t - x)).exp(), 2.0 * PI * t * xi - PI * x * xi))
        .sum()
}

pub fn fock_weighted(mu: &DiscreteMeasure, z: Complex64) -> FockSample {
    FockSample {
        z,
        f_weighted: weighted(mu, z),
    }
}

/// Largest `|F(z)| e^{-pi |z|^2 / 2}` over grid nodes with spacing `step`
/// inside `|z| <= radius`.
pub fn fock_sup(mu: &DiscreteMeasure, radius: f64, step: f64) -> f64 {
    let n = (radius / step).ceil() as i64;
    let mut sup = 0.0f64;
    for i in -n..=n {
        for j in -n..=n {
            let z = Complex64::new(i as f64 * step, j as f64 * step);
            if z.norm() <= radius {
                sup = sup.max(weighted(mu, z).norm());
            }
        }
    }
    sup
}

fn circle_point(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

/// `F(z) e^{-pi |z|^2 / 2}` times a positive factor chosen so that the
/// largest term has modulus `|a_j|`, together with the sum of the term moduli.
fn rescaled(mu: &DiscreteMeasure, z: Complex64) -> (Complex64, f64) {
    let (x, xi) = (z.re, z.im);
    let shift = mu
        .atoms
        .iter()
        .map(|&(t, _)| PI * (t - x) * (t - x))
        .fold(f64::INFINITY, f64::min);
    mu.atoms
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(sum, mass), &(t, a)| {
            let m = (shift - PI * (t - x) * (t - x)).exp();
            (
                sum + a * Complex64::from_polar(m, 2.0 * PI * t * xi - PI * x * xi),
                mass + a.norm() * m,
            )
        })
}

/// Winding number of `F` around `|z| = r`, or `None` if cancellation on the
/// circle leaves no reliable phase (a zero on or very near the contour).
fn winding(mu: &DiscreteMeasure, r: f64, samples: usize) -> Option<i64> {
    let value = |theta: f64| {
        let (w, mass) = rescaled(mu, circle_point(r, theta));
        (w.norm() > 1e-12 * mass).then_some(w)
    };
    let step = 2.0 * PI / samples as f64;
    let mut total = 0.0;
    let mut prev = value(0.0)?;
    for i in 1..=samples {
        let theta = if i == samples { 2.0 * PI } else { i as f64 * step };
        let next = value(theta)?;
        total += segment_phase(&value, theta - step, theta, prev, next, 0)?;
        prev = next;
    }
    Some((total / (2.0 * PI)).round() as i64)
}

fn segment_phase(
    value: &impl Fn(f64) -> Option<Complex64>,
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    depth: u32,
) -> Option<f64> {
    let d = (fb / fa).arg();
    if d.abs() <= 0.5 * PI {
        return Some(d);
    }
    if depth >= MAX_SUBDIVISION {
        return None;
    }
    let m = 0.5 * (a + b);
    let fm = value(m)?;
    Some(segment_phase(value, a, m, fa, fm, depth + 1)? + segment_phase(value, m, b, fm, fb, depth + 1)?)
}

/// Number of zeros of `F` in the open disk of radius `r`, by the argument
/// principle. A zero on the contour moves the radius outward by `1e-6 r` up
/// to three times.
pub fn disk_zero_count(mu: &DiscreteMeasure, r: f64, samples_per_circle: usize) -> Result<usize> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if samples_per_circle < 8 {
        return Err(Error::InvalidParameter("need at least 8 samples per circle".into()));
    }
    if mu.atoms.is_empty() {
        return Err(Error::InvalidParameter("empty measure".into()));
    }
    for attempt in 0..=RADIUS_RETRIES {
        let radius = r * (1.0 + 1e-6 * attempt as f64);
        if let Some(w) = winding(mu, radius, samples_per_circle) {
            return Ok(w.max(0) as usize);
        }
    }
    Err(Error::ZeroOnContour { radius: r })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenRow {
    pub r: f64,
    /// `int_0^r N(t) / t dt`.
    pub lhs: f64,
    /// `(pi / 2) r^2 - log |F(0)|` after normalisation.
    pub rhs: f64,
    pub margin: f64,
    pub zeros: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenAudit {
    pub rows: Vec<JensenRow>,
    /// Supremum estimate of `|F| e^{-pi |z|^2 / 2}` that `F` was divided by.
    pub norm: f64,
    /// Moduli of the zeros found inside the largest disk, with multiplicity.
    pub zero_radii: Vec<f64>,
}

/// Radii where `N(t)` jumps on `(lo, hi]`, with jump size.
fn jumps(
    mu: &DiscreteMeasure,
    lo: f64,
    hi: f64,
    n_lo: usize,
    n_hi: usize,
    samples: usize,
    out: &mut Vec<(f64, usize)>,
) {
    if n_hi <= n_lo {
        return;
    }
    if hi - lo < 1e-10 {
        out.push((0.5 * (lo + hi), n_hi - n_lo));
        return;
    }
    let mid = 0.5 * (lo + hi);
    match winding(mu, mid, samples) {
        Some(w) => {
            let n_mid = (w.max(0) as usize).clamp(n_lo, n_hi);
            jumps(mu, lo, mid, n_lo, n_mid, samples, out);
            jumps(mu, mid, hi, n_mid, n_hi, samples, out);
        }
        // the contour passes through a zero: this is its modulus
        None => out.push((mid, n_hi - n_lo)),
    }
}

/// Jensen's inequality `int_0^r N(t)/t dt <= (pi/2) r^2 - log |F(0)|` for `F`
/// normalised so that `sup |F(z)| e^{-pi |z|^2 / 2} = 1`; the supremum is
/// estimated on a grid over `|z| <= max(radii) + 2` and on every circle used.
pub fn jensen_audit(mu: &DiscreteMeasure, radii: &[f64]) -> Result<JensenAudit> {
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    if mu.atoms.is_empty() {
        return Err(Error::InvalidParameter("empty measure".into()));
    }
    let f0 = weighted(mu, Complex64::new(0.0, 0.0)).norm();
    if f0 <= 1e-300 {
        return Err(Error::InvalidParameter("F(0) = 0; shift the measure".into()));
    }
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    let samples = DEFAULT_CIRCLE_SAMPLES;

    let mut norm = fock_sup(mu, r_max + 2.0, 0.02).max(f0);
    for &r in radii {
        for i in 0..4 * samples {
            let theta = 2.0 * PI * i as f64 / (4 * samples) as f64;
            norm = norm.max(weighted(mu, circle_point(r, theta)).norm());
        }
    }

    // N(t) on a coarse radial grid, then bisection at every jump
    let mut zero_radii = Vec::new();
    if r_max > 0.0 {
        let m = ((r_max / 0.05).ceil() as usize).max(1);
        let grid: Vec<f64> = (0..=m).map(|i| r_max * i as f64 / m as f64).collect();
        let mut counts = vec![0usize];
        for &t in &grid[1..] {
            counts.push(disk_zero_count(mu, t, samples)?);
        }
        let mut found = Vec::new();
        for i in 0..m {
            let hi_count = counts[i + 1].max(counts[i]);
            jumps(mu, grid[i], grid[i + 1], counts[i], hi_count, samples, &mut found);
            counts[i + 1] = hi_count;
        }
        for (rho, mult) in found {
            zero_radii.extend(std::iter::repeat_n(rho, mult));
        }
    }

    let log_f0 = (f0 / norm).ln();
    let rows = radii
        .iter()
        .map(|&r| {
            let inside: Vec<f64> = zero_radii.iter().copied().filter(|&rho| rho < r).collect();
            let lhs: f64 = inside.iter().map(|rho| (r / rho).ln()).sum();
            let rhs = 0.5 * PI * r * r - log_f0;
            JensenRow {
                r,
                lhs,
                rhs,
                margin: rhs - lhs,
                zeros: inside.len(),
                ok: lhs <= rhs + JENSEN_TOL,
            }
        })
        .collect();
    Ok(JensenAudit { rows, norm, zero_radii })
}
