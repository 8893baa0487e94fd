//! Independent reference computations. Nothing here calls into the library's
//! numerics; each oracle starts again from the defining formula.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Closed-form symbol `prod_j (1 + 2 pi i delta_j xi)^{-1} e^{-c xi^2}`.
pub fn symbol(deltas: &[f64], c: f64, xi: f64) -> Complex64 {
    deltas.iter().fold(Complex64::new((-c * xi * xi).exp(), 0.0), |acc, d| {
        acc / Complex64::new(1.0, 2.0 * PI * d * xi)
    })
}

/// `g(x) = 2 int_0^inf Re(g^(xi) e^{2 pi i x xi}) dxi` by composite Simpson.
pub fn inverse_ft(deltas: &[f64], c: f64, x: f64) -> f64 {
    let upper = (40.0 / c).sqrt();
    let n = 40_000usize;
    let h = upper / n as f64;
    let f = |xi: f64| (symbol(deltas, c, xi) * Complex64::from_polar(1.0, 2.0 * PI * x * xi)).re;
    let mut acc = f(0.0) + f(upper);
    for i in 1..n {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * acc * h / 3.0
}

/// `sqrt(pi / c) e^{-pi^2 x^2 / c}`.
pub fn gaussian(c: f64, x: f64) -> f64 {
    (PI / c).sqrt() * (-PI * PI * x * x / c).exp()
}

pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `sum_k max_{[k, k+1]} |g|` from a dense grid on `|k| <= reach`.
pub fn wiener_dense(g: impl Fn(f64) -> f64, reach: i64, per_unit: usize) -> f64 {
    (-reach..reach)
        .map(|k| {
            (0..=per_unit)
                .map(|i| g(k as f64 + i as f64 / per_unit as f64).abs())
                .fold(0.0, f64::max)
        })
        .sum()
}

/// Worst and best counts of `points` in `[x - r, x + r]` over a fine anchor grid.
pub fn brute_window_counts(points: &[f64], r: f64, lo: f64, hi: f64, steps: usize) -> (usize, usize) {
    let mut min = usize::MAX;
    let mut max = 0;
    for i in 0..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let n = points.iter().filter(|&&p| p >= x - r && p <= x + r).count();
        min = min.min(n);
        max = max.max(n);
    }
    (min, max)
}

/// Smallest singular value of `(g(lambda - k))` with every point of `points`
/// as a row and the integers in `cols` as columns.
pub fn sigma_min_direct(g: impl Fn(f64) -> f64, points: &[f64], cols: std::ops::RangeInclusive<i64>) -> f64 {
    let cols: Vec<i64> = cols.collect();
    let m = DMatrix::from_fn(points.len(), cols.len(), |i, j| g(points[i] - cols[j] as f64));
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `gamma(x) = sum_{k,l} c_k d_l e^{2 pi i l (x - k)} g(x - k)`.
pub fn modulated(g: &impl Fn(f64) -> f64, c: &[(i64, f64)], d: &[(i64, f64)], x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(k, ck) in c {
        for &(l, dl) in d {
            let y = x - k as f64;
            acc += ck * dl * g(y) * Complex64::from_polar(1.0, 2.0 * PI * l as f64 * y);
        }
    }
    acc
}

/// `sum_{|m| <= reach} f(x + m) e^{2 pi i m xi}`.
pub fn zak_direct(f: impl Fn(f64) -> Complex64, x: f64, xi: f64, reach: i64) -> Complex64 {
    (-reach..=reach)
        .map(|m| f(x + m as f64) * Complex64::from_polar(1.0, 2.0 * PI * m as f64 * xi))
        .sum()
}

/// Frame bounds of `{e^{2 pi i n b t} g(t - m a)}` for `g = e^{-pi t^2}`,
/// `a = alpha`, `b = beta`, discretised on a periodic grid of step `h`
/// and period `period`: extreme eigenvalues of `S = h sum_atoms |atom><atom|`.
pub fn discrete_gabor_bounds(alpha: f64, beta: f64, h: f64, period: f64) -> (f64, f64) {
    let l = (period / h).round() as usize;
    let a = (alpha / h).round() as usize;
    let b = (beta * period).round() as usize;
    assert!(
        l.is_multiple_of(a) && l.is_multiple_of(b),
        "lattice must divide the period"
    );
    let window: Vec<f64> = (0..l)
        .map(|j| {
            let t = j as f64 * h;
            [-period, 0.0, period]
                .iter()
                .map(|p| (-PI * (t + p) * (t + p)).exp())
                .sum()
        })
        .collect();
    let mut s = DMatrix::<Complex64>::zeros(l, l);
    for m in 0..l / a {
        for n in 0..l / b {
            let atom: Vec<Complex64> = (0..l)
                .map(|j| {
                    let w = window[(j + l - m * a) % l];
                    Complex64::from_polar(w, 2.0 * PI * (n * b * j) as f64 / l as f64)
                })
                .collect();
            for i in 0..l {
                if atom[i].norm() < 1e-300 {
                    continue;
                }
                for j in 0..l {
                    s[(i, j)] += atom[i] * atom[j].conj();
                }
            }
        }
    }
    let s = s * Complex64::new(h, 0.0);
    let eig = s.symmetric_eigenvalues();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Zeros of an entire function by Newton's method from a grid of seeds in
/// `|z| < r`, deduplicated at `1e-8`.
pub fn newton_zeros(
    f: impl Fn(Complex64) -> Complex64,
    df: impl Fn(Complex64) -> Complex64,
    r: f64,
    seeds_per_axis: usize,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for i in 0..seeds_per_axis {
        for j in 0..seeds_per_axis {
            let mut z = Complex64::new(
                -r + 2.0 * r * (i as f64 + 0.5) / seeds_per_axis as f64,
                -r + 2.0 * r * (j as f64 + 0.5) / seeds_per_axis as f64,
            );
            let mut converged = false;
            for _ in 0..100 {
                let d = df(z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = f(z) / d;
                z -= step;
                if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 3.0 * r {
                    break;
                }
                if step.norm() < 1e-14 * (1.0 + z.norm()) {
                    converged = true;
                    break;
                }
            }
            if converged && z.norm() < r && !out.iter().any(|w| (w - z).norm() < 1e-8) {
                out.push(z);
            }
        }
    }
    out
}

/// `int phi(s - x) e^{-2 pi i xi s} eta(s - t) ds` for a normalised Gaussian
/// bump `eta` of width `eps`, by Simpson's rule over `t ± 12 eps`.
pub fn mollified_atom_stft(t: f64, eps: f64, x: f64, xi: f64) -> Complex64 {
    let n = 4000usize;
    let (lo, hi) = (t - 12.0 * eps, t + 12.0 * eps);
    let h = (hi - lo) / n as f64;
    let f = |s: f64| {
        let bump = (-(s - t) * (s - t) / (2.0 * eps * eps)).exp() / (eps * (2.0 * PI).sqrt());
        Complex64::from_polar((-PI * (s - x) * (s - x)).exp() * bump, -2.0 * PI * xi * s)
    };
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        acc += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}
