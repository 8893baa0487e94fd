//! Finitely supported coefficient sequences on the integers.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A sequence `c_k`, nonzero only for `offset <= k < offset + values.len()`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoeffSeq {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl CoeffSeq {
    pub fn new(offset: i64, values: Vec<f64>) -> Self {
        Self { offset, values }
    }

    /// Unit impulse at `k`.
    pub fn impulse(k: i64) -> Self {
        Self::new(k, vec![1.0])
    }

    pub fn zeros(offset: i64, len: usize) -> Self {
        Self::new(offset, vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last stored coefficient (inclusive).
    pub fn last_index(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> f64 {
        let i = k - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as i64, v))
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|k|` over the stored range.
    pub fn max_abs_index(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            self.offset.abs().max(self.last_index().abs())
        }
    }

    /// Fourier series `sum_k c_k e^{2 pi i k xi}`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        self.iter()
            .map(|(k, v)| v * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * xi))
            .sum()
    }

    /// Pointwise sum over the union of both supports.
    pub fn add(&self, other: &CoeffSeq) -> CoeffSeq {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = self.last_index().max(other.last_index());
        let values = (lo..=hi).map(|k| self.get(k) + other.get(k)).collect();
        CoeffSeq::new(lo, values)
    }

    /// Restriction to indices `lo..=hi`.
    pub fn restrict(&self, lo: i64, hi: i64) -> CoeffSeq {
        if hi < lo {
            return CoeffSeq::new(lo, Vec::new());
        }
        CoeffSeq::new(lo, (lo..=hi).map(|k| self.get(k)).collect())
    }
}
