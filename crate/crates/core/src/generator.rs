//! Totally positive windows of Gaussian type and related windows.
//!
//! Fourier convention: `f^(xi) = int f(x) e^{-2 pi i x xi} dx`. A window of
//! Gaussian type with parameters `deltas`, `c` has
//!
//! ```text
//! g^(xi) = prod_j (1 + 2 pi i delta_j xi)^{-1} e^{-c xi^2},
//! ```
//!
//! so `g^(0) = 1` and `g` is a probability density: the law of a centred
//! normal variable with variance `c / (2 pi^2)` plus independent signed
//! exponential variables with means `delta_j`. All real kinds handled here
//! are log-concave, which is what the decay certificates rely on.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffSeq;
use crate::error::{Error, Result};
use crate::special::erfcx;

/// Default absolute accuracy for window evaluations.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Partial-fraction weights larger than this route to quadrature.
const MAX_PARTIAL_FRACTION_WEIGHT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    GaussianType {
        #[serde(default)]
        deltas: Vec<f64>,
        c: f64,
    },
    /// `g(x) = |delta|^{-1} e^{-x/delta}` on the half line `x / delta >= 0`.
    OneSidedExp { delta: f64 },
    /// `g(x) = sech(nu x)`.
    Sech { nu: f64 },
    /// `sum_{k,l} c_k d_l T_k M_l base`.
    Modulated {
        base: Box<GeneratorSpec>,
        c_seq: CoeffSeq,
        d_seq: CoeffSeq,
    },
}

impl GeneratorSpec {
    pub fn gaussian(c: f64) -> Self {
        Self::GaussianType { deltas: Vec::new(), c }
    }

    /// `e^{-pi x^2}`.
    pub fn standard_gaussian() -> Self {
        Self::gaussian(PI)
    }

    pub fn gaussian_type(deltas: Vec<f64>, c: f64) -> Self {
        Self::GaussianType { deltas, c }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::GaussianType { .. } => "gaussian_type",
            Self::OneSidedExp { .. } => "one_sided_exp",
            Self::Sech { .. } => "sech",
            Self::Modulated { .. } => "modulated",
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Self::Modulated { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            Self::GaussianType { deltas, c } => {
                if !(c.is_finite() && *c > 0.0) {
                    return bad(format!("c must be positive, got {c}"));
                }
                if let Some(d) = deltas.iter().find(|d| !d.is_finite() || **d == 0.0) {
                    return bad(format!("deltas must be finite and nonzero, got {d}"));
                }
            }
            Self::OneSidedExp { delta } => {
                if !delta.is_finite() || *delta == 0.0 {
                    return bad(format!("delta must be finite and nonzero, got {delta}"));
                }
            }
            Self::Sech { nu } => {
                if !(nu.is_finite() && *nu > 0.0) {
                    return bad(format!("nu must be positive, got {nu}"));
                }
            }
            Self::Modulated { base, c_seq, d_seq } => {
                if !base.is_real() {
                    return bad("modulated base must be a real window".into());
                }
                base.validate()?;
                if c_seq.is_empty() || d_seq.is_empty() {
                    return bad("modulation sequences must be nonempty".into());
                }
                if c_seq.values.iter().chain(&d_seq.values).any(|v| !v.is_finite()) {
                    return bad("modulation sequences must be finite".into());
                }
            }
        }
        Ok(())
    }
}

/// Accuracy attached to an evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCert {
    pub abs_tol: f64,
    /// Beyond this radius the unit-spaced tail sums of `|g|` are below `abs_tol`.
    pub truncation_radius: f64,
}

#[derive(Clone, Debug)]
enum Repr {
    Gaussian {
        amp: f64,
        rate: f64,
    },
    /// Distinct deltas: `sum_j w_j (phi * h_{delta_j})`.
    PartialFractions {
        sigma: f64,
        terms: Vec<(f64, f64)>,
    },
    /// Repeated (or nearly repeated) deltas.
    Confluent {
        deltas: Vec<f64>,
        c: f64,
    },
    OneSided {
        delta: f64,
    },
    Sech {
        nu: f64,
    },
    Modulated {
        base: Box<Generator>,
        c_seq: CoeffSeq,
        d_seq: CoeffSeq,
    },
}

/// A validated window with precomputed evaluation data.
#[derive(Clone, Debug)]
pub struct Generator {
    spec: GeneratorSpec,
    repr: Repr,
}

impl Generator {
    pub fn new(spec: &GeneratorSpec) -> Result<Self> {
        spec.validate()?;
        let repr = match spec {
            GeneratorSpec::GaussianType { deltas, c } if deltas.is_empty() => Repr::Gaussian {
                amp: (PI / c).sqrt(),
                rate: PI * PI / c,
            },
            GeneratorSpec::GaussianType { deltas, c } => match partial_fractions(deltas) {
                Some(terms) => Repr::PartialFractions {
                    sigma: c.sqrt() / (PI * 2f64.sqrt()),
                    terms,
                },
                None => Repr::Confluent {
                    deltas: deltas.clone(),
                    c: *c,
                },
            },
            GeneratorSpec::OneSidedExp { delta } => Repr::OneSided { delta: *delta },
            GeneratorSpec::Sech { nu } => Repr::Sech { nu: *nu },
            GeneratorSpec::Modulated { base, c_seq, d_seq } => Repr::Modulated {
                base: Box::new(Generator::new(base)?),
                c_seq: c_seq.clone(),
                d_seq: d_seq.clone(),
            },
        };
        Ok(Self {
            spec: spec.clone(),
            repr,
        })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn is_real(&self) -> bool {
        self.spec.is_real()
    }

    /// `g^(xi)` from the closed formula.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        if let Repr::Modulated { base, c_seq, d_seq } = &self.repr {
            let inner: Complex64 = d_seq.iter().map(|(l, d)| d * base.fourier(xi - l as f64)).sum();
            return c_seq.fourier(-xi) * inner;
        }
        match &self.spec {
            GeneratorSpec::GaussianType { deltas, c } => {
                let gauss = Complex64::new((-c * xi * xi).exp(), 0.0);
                deltas
                    .iter()
                    .fold(gauss, |acc, d| acc / Complex64::new(1.0, 2.0 * PI * d * xi))
            }
            GeneratorSpec::OneSidedExp { delta } => {
                Complex64::new(1.0, 0.0) / Complex64::new(1.0, 2.0 * PI * delta * xi)
            }
            GeneratorSpec::Sech { nu } => Complex64::new(PI / nu / (PI * PI * xi / nu).cosh(), 0.0),
            GeneratorSpec::Modulated { .. } => unreachable!(),
        }
    }

    /// `g(x)` to absolute accuracy `tol`, for real-valued windows.
    pub fn eval(&self, x: f64, tol: f64) -> Result<f64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
        }
        match &self.repr {
            Repr::Gaussian { amp, rate } => Ok(amp * (-rate * x * x).exp()),
            Repr::PartialFractions { sigma, terms, .. } => {
                let (sum, mass) = terms.iter().fold((0.0, 0.0), |(s, m), (w, d)| {
                    let t = w * emg(x, *sigma, *d);
                    (s + t, m + t.abs())
                });
                // rounding in the closed form is a few ulps of the largest term
                if 16.0 * f64::EPSILON * mass > tol {
                    let GeneratorSpec::GaussianType { deltas, c } = &self.spec else {
                        unreachable!()
                    };
                    return inverse_transform(deltas, *c, x, tol);
                }
                Ok(sum)
            }
            Repr::Confluent { deltas, c } => inverse_transform(deltas, *c, x, tol),
            Repr::OneSided { delta } => {
                if x / delta >= 0.0 {
                    Ok((-x / delta).exp() / delta.abs())
                } else {
                    Ok(0.0)
                }
            }
            Repr::Sech { nu } => Ok(1.0 / (nu * x).cosh()),
            Repr::Modulated { .. } => Err(Error::ComplexValued),
        }
    }

    /// Evaluation for every kind; real windows return a zero imaginary part.
    pub fn eval_complex(&self, x: f64, tol: f64) -> Result<Complex64> {
        match &self.repr {
            Repr::Modulated { base, c_seq, d_seq } => {
                let scale = (c_seq.norm1() * d_seq.norm1()).max(1.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, ck) in c_seq.iter() {
                    let gk = base.eval(x - k as f64, tol / scale)?;
                    for (l, dl) in d_seq.iter() {
                        // T_k M_l g evaluated at x
                        let phase = 2.0 * PI * (l as f64) * (x - k as f64);
                        acc += ck * dl * gk * Complex64::from_polar(1.0, phase);
                    }
                }
                Ok(acc)
            }
            _ => self.eval(x, tol).map(|v| Complex64::new(v, 0.0)),
        }
    }

    /// Certified bound on `sum_{m>=0} (|g(r+m)| + |g(-r-m)|)`, or `None` when
    /// `r` does not yet lie beyond the mode on both sides.
    pub fn tail_bound(&self, r: f64) -> Result<Option<f64>> {
        if let Repr::Modulated { base, c_seq, d_seq } = &self.repr {
            let reach = c_seq.max_abs_index() as f64;
            if r <= reach {
                return Ok(None);
            }
            return Ok(base.tail_bound(r - reach)?.map(|t| t * c_seq.norm1() * d_seq.norm1()));
        }
        let tol = DEFAULT_TOL * 0.1;
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let g0 = self.eval(sign * (r - 1.0), tol)?.abs();
            let g1 = self.eval(sign * r, tol)?.abs();
            let g2 = self.eval(sign * (r + 1.0), tol)?.abs();
            if g1 == 0.0 && g2 == 0.0 {
                continue;
            }
            if !(g1 < g0 && g2 < g1) {
                return Ok(None);
            }
            // log-concavity: the ratio g(y+1)/g(y) is nonincreasing past the mode
            total += g1 / (1.0 - g2 / g1);
        }
        Ok(Some(total))
    }

    /// Smallest integer radius whose tail bound is below `tol`.
    pub fn decay_radius(&self, tol: f64) -> Result<f64> {
        const MAX_RADIUS: u32 = 1 << 16;
        let mut r = 1u32;
        while r <= MAX_RADIUS {
            if let Some(t) = self.tail_bound(r as f64)? {
                if t <= tol {
                    return Ok(r as f64);
                }
            }
            r += if r < 64 { 1 } else { r / 16 };
        }
        Err(Error::NonConvergent {
            what: "decay certificate",
            tol,
        })
    }

    pub fn certificate(&self, tol: f64) -> Result<AccuracyCert> {
        Ok(AccuracyCert {
            abs_tol: tol,
            truncation_radius: self.decay_radius(tol)?,
        })
    }

    /// Location of the maximum of a real window.
    pub fn mode(&self) -> Result<f64> {
        match &self.repr {
            Repr::Gaussian { .. } | Repr::OneSided { .. } | Repr::Sech { .. } => Ok(0.0),
            Repr::Modulated { .. } => Err(Error::UnsupportedKind("mode")),
            _ => {
                let r = self.decay_radius(1e-3)?;
                let f = |x: f64| -self.eval(x, DEFAULT_TOL).unwrap_or(f64::NAN);
                Ok(golden_min(f, -r, r, 1e-12))
            }
        }
    }

    /// `sup |g|` (an upper bound for modulated windows).
    pub fn max_abs(&self) -> Result<f64> {
        match &self.repr {
            Repr::OneSided { delta } => Ok(1.0 / delta.abs()),
            Repr::Modulated { base, c_seq, d_seq } => Ok(base.max_abs()? * c_seq.norm1() * d_seq.norm1()),
            _ => Ok(self.eval(self.mode()?, DEFAULT_TOL)? + DEFAULT_TOL),
        }
    }

    /// Upper bound on `sum_k max_{[k,k+1]} |g|`.
    pub fn wiener_norm_bound(&self) -> Result<f64> {
        if let Repr::Modulated { base, c_seq, d_seq } = &self.repr {
            // integer translates and unimodular modulations preserve the norm
            return Ok(base.wiener_norm_bound()? * c_seq.norm1() * d_seq.norm1());
        }
        let tol = 1e-13;
        let r = self.decay_radius(tol)?;
        let tail = self.tail_bound(r)?.unwrap_or(tol);
        let mode = self.mode()?;
        let peak = self.max_abs()?;
        let r = r as i64;
        let mut sum = 0.0;
        for k in -r..r {
            let (a, b) = (k as f64, (k + 1) as f64);
            // unimodal: the maximum sits at an endpoint unless the mode is inside
            let m = if mode >= a && mode <= b {
                peak
            } else {
                self.eval(a, tol)?.max(self.eval(b, tol)?)
            };
            sum += m + tol;
        }
        Ok(sum + tail)
    }
}

/// Partial-fraction weights of `prod_j (1 + delta_j s)^{-1}`, or `None` for
/// repeated or nearly repeated deltas.
fn partial_fractions(deltas: &[f64]) -> Option<Vec<(f64, f64)>> {
    let mut terms = Vec::with_capacity(deltas.len());
    for (j, &dj) in deltas.iter().enumerate() {
        let mut w = 1.0;
        for (m, &dm) in deltas.iter().enumerate() {
            if m != j {
                if dj == dm {
                    return None;
                }
                w *= dj / (dj - dm);
            }
        }
        if !w.is_finite() || w.abs() > MAX_PARTIAL_FRACTION_WEIGHT {
            return None;
        }
        terms.push((w, dj));
    }
    Some(terms)
}

/// Normal density with standard deviation `sigma` convolved with the
/// one-sided exponential density of mean `delta` (signed).
fn emg(x: f64, sigma: f64, delta: f64) -> f64 {
    let (x, lam) = if delta > 0.0 {
        (x, 1.0 / delta)
    } else {
        (-x, -1.0 / delta)
    };
    let gauss = (-x * x / (2.0 * sigma * sigma)).exp();
    let u = (lam * sigma * sigma - x) / (2f64.sqrt() * sigma);
    if u >= 0.0 {
        0.5 * lam * gauss * erfcx(u)
    } else {
        0.5 * lam * (2.0 * (lam * (0.5 * lam * sigma * sigma - x)).exp() - gauss * erfcx(-u))
    }
}

/// Inverse Fourier transform of a Gaussian-type symbol by the trapezoidal
/// rule on the line; the step is halved until successive values agree.
fn inverse_transform(deltas: &[f64], c: f64, x: f64, tol: f64) -> Result<f64> {
    let symbol = |xi: f64| {
        let gauss = Complex64::new((-c * xi * xi).exp(), 0.0);
        deltas
            .iter()
            .fold(gauss, |acc, d| acc / Complex64::new(1.0, 2.0 * PI * d * xi))
    };
    // frequency cutoff: int_X^inf e^{-c xi^2} <= e^{-c X^2} / (2 c X)
    let mut cutoff = 1.0f64;
    while (-c * cutoff * cutoff).exp() / (c * cutoff) > tol / 20.0 {
        cutoff *= 1.25;
    }
    let spread: f64 = (c / (2.0 * PI * PI)).sqrt() * 12.0 + deltas.iter().map(|d| d.abs()).sum::<f64>() * 40.0;
    let mut h = 1.0 / (2.0 * (x.abs() + spread + 1.0));
    let trapezoid = |h: f64| {
        let n = ((cutoff + h) / h).ceil() as usize;
        let mut acc = 0.0;
        for i in 1..=n {
            let xi = i as f64 * h;
            acc += (symbol(xi) * Complex64::from_polar(1.0, 2.0 * PI * x * xi)).re;
        }
        h * (1.0 + 2.0 * acc)
    };
    let mut prev = trapezoid(h);
    for _ in 0..14 {
        h *= 0.5;
        let next = trapezoid(h);
        if (next - prev).abs() < tol / 4.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent {
        what: "inverse Fourier quadrature",
        tol,
    })
}

/// Golden-section minimisation on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

pub fn fourier_eval(spec: &GeneratorSpec, xi: f64) -> Result<Complex64> {
    Ok(Generator::new(spec)?.fourier(xi))
}

pub fn eval(spec: &GeneratorSpec, x: f64, tol: f64) -> Result<f64> {
    Generator::new(spec)?.eval(x, tol)
}

/// Removes `delta_j` (1-based), i.e. applies `I + delta_j d/dx`.
pub fn reduce(spec: &GeneratorSpec, j: usize) -> Result<GeneratorSpec> {
    match spec {
        GeneratorSpec::GaussianType { deltas, c } => {
            if j == 0 || j > deltas.len() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: deltas.len(),
                });
            }
            let mut deltas = deltas.clone();
            deltas.remove(j - 1);
            Ok(GeneratorSpec::GaussianType { deltas, c: *c })
        }
        _ => Err(Error::UnsupportedKind("reduce")),
    }
}

pub fn wiener_norm_bound(spec: &GeneratorSpec) -> Result<f64> {
    Generator::new(spec)?.wiener_norm_bound()
}
