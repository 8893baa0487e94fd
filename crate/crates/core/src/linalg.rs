//! Dense singular values and banded Krylov solvers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value and the lower bound `inf ||Mc|| / ||c||`
/// (zero for wide matrices).
pub(crate) fn extremes(m: &DMatrix<f64>) -> (f64, f64) {
    let s = singular_values(m);
    let max = s.first().copied().unwrap_or(0.0);
    let min = if m.nrows() < m.ncols() {
        0.0
    } else {
        s.last().copied().unwrap_or(0.0)
    };
    (min, max)
}

/// Row-compressed matrix storing each row from its first to last nonzero.
#[derive(Clone, Debug)]
pub(crate) struct BandedRows {
    rows: Vec<(usize, Vec<f64>)>,
    ncols: usize,
}

impl BandedRows {
    pub(crate) fn from_dense(m: &DMatrix<f64>) -> Self {
        let rows = (0..m.nrows())
            .map(|i| {
                let row = m.row(i);
                let first = (0..m.ncols()).find(|&j| row[j] != 0.0);
                match first {
                    None => (0, Vec::new()),
                    Some(a) => {
                        let b = (0..m.ncols()).rev().find(|&j| row[j] != 0.0).unwrap();
                        (a, (a..=b).map(|j| row[j]).collect())
                    }
                }
            })
            .collect();
        Self { rows, ncols: m.ncols() }
    }

    pub(crate) fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(a, vals)| vals.iter().zip(&x[*a..]).map(|(v, xi)| v * xi).sum())
            .collect()
    }

    pub(crate) fn mul_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ncols];
        for ((a, vals), yi) in self.rows.iter().zip(y) {
            for (o, v) in out[*a..].iter_mut().zip(vals) {
                *o += v * yi;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Conjugate gradients on the normal equations `A'A x = A'b`.
/// Stops when `||A'r|| <= rel_tol ||A'b||`.
pub(crate) fn cgls(a: &BandedRows, b: &[f64], rel_tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    let mut x = vec![0.0; a.ncols];
    let mut r = b.to_vec();
    let mut s = a.mul_t(&r);
    let mut p = s.clone();
    let norm0 = dot(&s, &s).sqrt();
    if norm0 == 0.0 {
        return Ok((x, 0));
    }
    let mut gamma = dot(&s, &s);
    for it in 1..=max_iter {
        let q = a.mul(&p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        s = a.mul_t(&r);
        let gamma_new = dot(&s, &s);
        if gamma_new.sqrt() <= rel_tol * norm0 {
            return Ok((x, it));
        }
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    Err(Error::NonConvergent {
        what: "CGLS",
        tol: rel_tol,
    })
}

/// Minimum-norm solution of `A x = b` by conjugate gradients on
/// `A A' y = b`, `x = A' y` (Craig's method).
pub(crate) fn craig(a: &BandedRows, b: &[f64], rel_tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    let m = b.len();
    let mut y = vec![0.0; m];
    let mut r = b.to_vec();
    let norm0 = dot(b, b).sqrt();
    if norm0 == 0.0 {
        return Ok((vec![0.0; a.ncols], 0));
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 1..=max_iter {
        let atp = a.mul_t(&p);
        let denom = dot(&atp, &atp);
        if denom == 0.0 {
            break;
        }
        let alpha = rr / denom;
        axpy(alpha, &p, &mut y);
        let q = a.mul(&atp);
        axpy(-alpha, &q, &mut r);
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= rel_tol * norm0 {
            return Ok((a.mul_t(&y), it));
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Err(Error::NonConvergent {
        what: "Craig iteration",
        tol: rel_tol,
    })
}

/// Minimum-norm least-squares solution through the SVD.
pub(crate) fn dense_pinv_solve(m: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![0.0; m.ncols()];
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = smax * f64::EPSILON * m.nrows().max(m.ncols()) as f64;
    let rhs = DVector::from_column_slice(b);
    svd.solve(&rhs, cutoff)
        .map(|x| x.iter().copied().collect())
        .unwrap_or_else(|_| vec![0.0; m.ncols()])
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}
