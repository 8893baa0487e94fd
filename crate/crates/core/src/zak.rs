//! Zak transform `Zg(x, xi) = sum_k g(x + k) e^{2 pi i k xi}`.
//!
//! `Zg(x, xi + 1) = Zg(x, xi)` and `Zg(x + 1, xi) = e^{-2 pi i xi} Zg(x, xi)`, so
//! `|Zg|` is 1-periodic in both variables and everything here works on the
//! fundamental domain `[0, 1)^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffSeq;
use crate::error::{Error, Result};
use crate::generator::{golden_min, Generator, GeneratorSpec};

/// Truncated Zak sums with a certified tail.
#[derive(Clone, Debug)]
pub struct ZakEvaluator {
    gen: Generator,
    radius: f64,
    tol: f64,
}

impl ZakEvaluator {
    pub fn new(gen: &Generator, tol: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
        }
        // half of the budget for the tail, half for the retained terms
        let radius = gen.decay_radius(tol / 2.0)?;
        Ok(Self {
            gen: gen.clone(),
            radius,
            tol,
        })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `(k, g(x + k))` for every retained index.
    fn samples(&self, x: f64) -> Result<Vec<(i64, Complex64)>> {
        let lo = (-self.radius - x).ceil() as i64;
        let hi = (self.radius - x).floor() as i64;
        let n = (hi - lo + 1).max(1) as f64;
        (lo..=hi)
            .map(|k| Ok((k, self.gen.eval_complex(x + k as f64, self.tol / (2.0 * n))?)))
            .collect()
    }

    pub fn eval(&self, x: f64, xi: f64) -> Result<Complex64> {
        Ok(sum_phases(&self.samples(x)?, xi))
    }
}

fn sum_phases(samples: &[(i64, Complex64)], xi: f64) -> Complex64 {
    samples
        .iter()
        .map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * (*k as f64) * xi))
        .sum()
}

pub fn zak_eval(spec: &GeneratorSpec, x: f64, xi: f64, tol: f64) -> Result<Complex64> {
    ZakEvaluator::new(&Generator::new(spec)?, tol)?.eval(x, xi)
}

/// `Zg` on uniform nodes `i / nx`, `j / nxi`; values are row-major in `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZakGrid {
    pub x_nodes: Vec<f64>,
    pub xi_nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    pub trunc_tol: f64,
}

impl ZakGrid {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.xi_nodes.len() + j]
    }

    /// CSV rows `x, xi, re, im, abs` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,xi,re,im,abs\n");
        for (i, x) in self.x_nodes.iter().enumerate() {
            for (j, xi) in self.xi_nodes.iter().enumerate() {
                let z = self.at(i, j);
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    x,
                    xi,
                    z.re,
                    z.im,
                    z.norm()
                ));
            }
        }
        out
    }
}

pub fn zak_grid(gen: &Generator, nx: usize, nxi: usize, tol: f64) -> Result<ZakGrid> {
    if nx == 0 || nxi == 0 {
        return Err(Error::InvalidParameter("grid sizes must be positive".into()));
    }
    let z = ZakEvaluator::new(gen, tol)?;
    let x_nodes: Vec<f64> = (0..nx).map(|i| i as f64 / nx as f64).collect();
    let xi_nodes: Vec<f64> = (0..nxi).map(|j| j as f64 / nxi as f64).collect();
    let rows = x_nodes
        .par_iter()
        .map(|&x| {
            let s = z.samples(x)?;
            Ok(xi_nodes.iter().map(|&xi| sum_phases(&s, xi)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZakGrid {
        x_nodes,
        xi_nodes,
        values: rows.into_iter().flatten().collect(),
        trunc_tol: tol,
    })
}

/// `max |Zg(x+1, xi) - e^{-2 pi i xi} Zg(x, xi)|` over the grid nodes.
pub fn quasi_periodicity_residual(gen: &Generator, n: usize, tol: f64) -> Result<f64> {
    let z = ZakEvaluator::new(gen, tol)?;
    let worst = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 / n as f64;
            let here = z.samples(x)?;
            let next = z.samples(x + 1.0)?;
            Ok((0..n).fold(0.0f64, |m, j| {
                let xi = j as f64 / n as f64;
                let lhs = sum_phases(&next, xi);
                let rhs = Complex64::from_polar(1.0, -2.0 * PI * xi) * sum_phases(&here, xi);
                m.max((lhs - rhs).norm())
            }))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZakPoint {
    pub x: f64,
    pub xi: f64,
    pub abs: f64,
}

fn wrap(v: f64) -> f64 {
    let w = v.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

fn periodic_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Grid local minima of `|Zg|`, refined by coordinate-wise golden-section
/// descent on `|Zg|^2`, sorted by modulus.
pub fn zak_minima(gen: &Generator, resolution: usize, tol: f64) -> Result<Vec<ZakPoint>> {
    if resolution < 32 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least 32, got {resolution}"
        )));
    }
    let grid = zak_grid(gen, resolution, resolution, tol)?;
    let n = resolution;
    let modulus = |i: usize, j: usize| grid.at(i % n, j % n).norm();
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = modulus(i, j);
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    (di == 0 && dj == 0)
                        || v <= modulus(
                            (i as i64 + di).rem_euclid(n as i64) as usize,
                            (j as i64 + dj).rem_euclid(n as i64) as usize,
                        )
                })
            });
            if is_min {
                seeds.push((grid.x_nodes[i], grid.xi_nodes[j]));
            }
        }
    }
    let z = ZakEvaluator::new(gen, tol)?;
    let h = 1.0 / n as f64;
    let refined = seeds
        .par_iter()
        .map(|&(x0, xi0)| refine(&z, x0, xi0, h))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<ZakPoint> = Vec::new();
    for p in refined {
        let dup = out
            .iter()
            .any(|q| periodic_distance(p.x, q.x) < 1e-6 && periodic_distance(p.xi, q.xi) < 1e-6);
        if !dup {
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.abs.total_cmp(&b.abs));
    Ok(out)
}

fn refine(z: &ZakEvaluator, mut x: f64, mut xi: f64, h: f64) -> Result<ZakPoint> {
    let sq = |x: f64, xi: f64| z.eval(x, xi).map(|v| v.norm_sqr()).unwrap_or(f64::INFINITY);
    let mut width = h;
    let mut best = sq(x, xi);
    for _ in 0..200 {
        let nx = golden_min(|t| sq(t, xi), x - width, x + width, width * 1e-4);
        let nxi = golden_min(|t| sq(nx, t), xi - width, xi + width, width * 1e-4);
        let value = sq(nx, nxi);
        if value > best {
            // no progress at this scale
            width *= 0.5;
        } else {
            let step = (nx - x).abs().max((nxi - xi).abs());
            x = nx;
            xi = nxi;
            best = value;
            width = (4.0 * step).clamp(1e-15, h);
        }
        if width <= 1e-14 || best == 0.0 {
            break;
        }
    }
    let abs = z.eval(x, xi)?.norm();
    Ok(ZakPoint {
        x: wrap(x),
        xi: wrap(xi),
        abs,
    })
}

/// Refined points with `|Zg| < refine_tol`.
pub fn zak_zero_search(gen: &Generator, resolution: usize, refine_tol: f64) -> Result<Vec<ZakPoint>> {
    let tol = (refine_tol * 1e-3).max(1e-15);
    Ok(zak_minima(gen, resolution, tol)?
        .into_iter()
        .filter(|p| p.abs < refine_tol)
        .collect())
}

/// `Z gamma(x, xi) = c^(xi) d^(x) Zg(x, xi)` for
/// `gamma = sum_{k,l} c_k d_l T_k M_l g`, with `c^(xi) = sum_k c_k e^{2 pi i k xi}`.
pub fn modulated_zak(
    base: &Generator,
    c_seq: &CoeffSeq,
    d_seq: &CoeffSeq,
    x: f64,
    xi: f64,
    tol: f64,
) -> Result<Complex64> {
    let scale = (c_seq.norm1() * d_seq.norm1()).max(1.0);
    let zg = ZakEvaluator::new(base, tol / scale)?.eval(x, xi)?;
    Ok(c_seq.fourier(xi) * d_seq.fourier(x) * zg)
}
