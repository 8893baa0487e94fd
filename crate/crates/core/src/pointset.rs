//! Sampling sets on the line: separation, relative separation and finite-window
//! Beurling density estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    /// `{k alpha : |k| <= span}`.
    Lattice {
        alpha: f64,
        span: u32,
    },
    JitteredLattice {
        alpha: f64,
        jitter: f64,
        seed: u64,
        span: u32,
    },
    /// `{k, k + 2^{-|k|} : |k| <= span}`: separation decays geometrically while the
    /// density stays 2.
    DyadicPairs {
        span: u32,
    },
}

/// Sorted, duplicate-free, finite sampling nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<f64>,
    provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub lower: f64,
    pub upper: f64,
    pub radius: f64,
    /// Exact values (lattices only).
    pub certified: bool,
}

impl PointSet {
    /// Sorts the input; rejects non-finite and repeated points.
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite point {p}")));
        }
        points.sort_by(|a, b| a.total_cmp(b));
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0]));
        }
        Ok(Self {
            points,
            provenance: Provenance::Explicit,
        })
    }

    /// Parses one decimal real per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = line
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("line {}: {e}", no + 1)))?;
            points.push(v);
        }
        Self::from_points(points)
    }

    pub fn lattice(alpha: f64, span: u32) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let s = span as i64;
        Ok(Self {
            points: (-s..=s).map(|k| k as f64 * alpha).collect(),
            provenance: Provenance::Lattice { alpha, span },
        })
    }

    /// Smallest symmetric lattice window containing `[-reach, reach]`.
    pub fn lattice_covering(alpha: f64, reach: f64) -> Result<Self> {
        Self::lattice(alpha, (reach / alpha).ceil() as u32 + 1)
    }

    pub fn dyadic_pairs(span: u32) -> Self {
        let s = span as i64;
        let mut points: Vec<f64> = (-s..=s)
            .flat_map(|k| [k as f64, k as f64 + 0.5f64.powi(k.abs() as i32)])
            .collect();
        points.sort_by(|a, b| a.total_cmp(b));
        // k = 0 contributes 1, which is also the lattice point k = 1
        points.dedup();
        Self {
            points,
            provenance: Provenance::DyadicPairs { span },
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.points.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.points.last().copied()
    }

    /// Points inside the closed interval `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> &[f64] {
        let a = self.points.partition_point(|&p| p < lo);
        let b = self.points.partition_point(|&p| p <= hi);
        &self.points[a..b.max(a)]
    }

    /// `#(Lambda ∩ [lo, hi])`.
    pub fn count(&self, lo: f64, hi: f64) -> usize {
        self.window(lo, hi).len()
    }

    /// Minimum gap between consecutive points.
    pub fn separation(&self) -> Result<f64> {
        if self.points.len() < 2 {
            return Err(Error::TooFewPoints);
        }
        Ok(self
            .points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min))
    }

    /// `max_x #(Lambda ∩ [x, x+1])` with closed windows; the maximum over the
    /// finite data is attained at windows anchored at points.
    pub fn rel_separation(&self) -> usize {
        self.points
            .iter()
            .enumerate()
            .map(|(i, &p)| self.points.partition_point(|&q| q <= p + 1.0) - i)
            .max()
            .unwrap_or(0)
    }

    /// Inf and sup of `#(Lambda ∩ [x-R, x+R]) / 2R` over interior anchors
    /// `x ∈ [min + R, max - R]`.
    pub fn beurling(&self, radius: f64) -> Result<DensityEstimate> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let (Some(lo), Some(hi)) = (self.min(), self.max()) else {
            return Err(Error::WindowTooLarge { radius });
        };
        let (a, b) = (lo + radius, hi - radius);
        if a > b {
            return Err(Error::WindowTooLarge { radius });
        }
        if let Provenance::Lattice { alpha, .. } = self.provenance {
            return Ok(DensityEstimate {
                lower: 1.0 / alpha,
                upper: 1.0 / alpha,
                radius,
                certified: true,
            });
        }
        // the count is piecewise constant with jumps at lambda ± R; closed windows
        // make it upper semicontinuous, so sup sits on a jump and inf between jumps
        let mut anchors: Vec<f64> = self
            .points
            .iter()
            .flat_map(|&p| [p - radius, p + radius])
            .filter(|&x| x >= a && x <= b)
            .chain([a, b])
            .collect();
        anchors.sort_by(|x, y| x.total_cmp(y));
        anchors.dedup();
        let mids: Vec<f64> = anchors.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let (mut min_count, mut max_count) = (usize::MAX, 0usize);
        for &x in anchors.iter().chain(&mids) {
            let n = self.count(x - radius, x + radius);
            min_count = min_count.min(n);
            max_count = max_count.max(n);
        }
        let width = 2.0 * radius;
        Ok(DensityEstimate {
            lower: min_count as f64 / width,
            upper: max_count as f64 / width,
            radius,
            certified: false,
        })
    }

    pub fn translated(&self, shift: f64) -> PointSet {
        PointSet {
            points: self.points.iter().map(|p| p + shift).collect(),
            provenance: Provenance::Explicit,
        }
    }

    /// `beta * Lambda`; lattices stay lattices.
    pub fn scaled(&self, beta: f64) -> PointSet {
        let provenance = match self.provenance {
            Provenance::Lattice { alpha, span } => Provenance::Lattice {
                alpha: alpha * beta,
                span,
            },
            _ => Provenance::Explicit,
        };
        PointSet {
            points: self.points.iter().map(|p| p * beta).collect(),
            provenance,
        }
    }
}

/// `{k alpha + eta_k : |k| <= span}` with `eta_k` uniform in `[-jitter, jitter]`,
/// deterministic in `seed`.
pub fn make_jittered(alpha: f64, jitter: f64, seed: u64, span: u32) -> Result<PointSet> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(jitter >= 0.0 && jitter < alpha / 2.0) {
        return Err(Error::JitterTooLarge {
            jitter,
            half: alpha / 2.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = span as i64;
    let points = (-s..=s)
        .map(|k| {
            let eta = if jitter > 0.0 {
                rng.gen_range(-jitter..=jitter)
            } else {
                0.0
            };
            k as f64 * alpha + eta
        })
        .collect();
    Ok(PointSet {
        points,
        provenance: Provenance::JitteredLattice {
            alpha,
            jitter,
            seed,
            span,
        },
    })
}
