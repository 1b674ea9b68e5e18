//! Extremal entropy curves and their envelopes.
//!
//! For a probability vector `mu` of length `d` put `tau = 2 (1 - sum mu_i^2)`
//! and `lambda = sqrt(tau)`. The four curves bound the Shannon entropy
//! `H(mu)` at fixed purity:
//!
//! | curve | extremum | spectrum family |
//! |-------|----------|-----------------|
//! | [`f_upper`] / [`r_upper`] | max over `tau` / `lambda` | `{t, (1-t)/(d-1), ...}` |
//! | [`f_lower`] / [`r_lower`] | min over `tau` / `lambda` | `{t, ..., t, 1-kt, 0, ...}` |
//!
//! [`co_r_lower`] is the convex hull of `r_lower` (one arc, then chords
//! between the knots `(sqrt(2(k-1)/k), log2 k)`), and [`ca_f_upper`] is the
//! concave envelope of `f_upper` (the curve up to a tangency point, then the
//! tangent line through `(2(d-1)/d, log2 d)`).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::state::ProbabilityVector;

/// Inputs this close outside a domain are clamped rather than rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Policy for arguments outside a curve's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EvalMode {
    /// Reject out-of-domain arguments.
    Strict,
    /// Project arguments onto the domain.
    #[default]
    Clamped,
    /// Evaluate the closed forms past the domain edge: the segment index
    /// `k = floor(2/(2 - x))` is not capped at `d - 1` and negative
    /// square-root arguments are taken as zero.
    PaperCompat,
}

/// `2(d-1)/d`, the largest admissible `tau`.
#[inline]
pub fn tau_max(d: usize) -> f64 {
    2.0 * (d as f64 - 1.0) / d as f64
}

/// `sqrt(2(d-1)/d)`, the largest admissible `lambda`.
#[inline]
pub fn lambda_max(d: usize) -> f64 {
    math::sqrt(tau_max(d))
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadDimension {
            d,
            reason: "curves need d >= 2",
        });
    }
    Ok(())
}

fn out_of_domain(quantity: &'static str, value: f64, hi: f64) -> Error {
    Error::OutOfDomain {
        quantity,
        value,
        lo: 0.0,
        hi,
    }
}

/// Brings `x` into `[0, hi]` according to `mode`. PaperCompat only clamps below.
fn resolve(quantity: &'static str, x: f64, hi: f64, mode: EvalMode) -> Result<f64> {
    if x.is_nan() {
        return Err(out_of_domain(quantity, x, hi));
    }
    match mode {
        EvalMode::Strict => {
            if x < -DOMAIN_SLACK || x > hi + DOMAIN_SLACK {
                Err(out_of_domain(quantity, x, hi))
            } else {
                Ok(x.clamp(0.0, hi))
            }
        }
        EvalMode::Clamped => Ok(x.clamp(0.0, hi)),
        EvalMode::PaperCompat => {
            if x < -DOMAIN_SLACK {
                return Err(out_of_domain(quantity, x, hi));
            }
            Ok(x.max(0.0))
        }
    }
}

/// `floor(2 / (2 - x))` where `x` is a (squared) linear entropy.
fn segment_index(x: f64, d: usize, capped: bool) -> usize {
    let k = math::floor(2.0 / (2.0 - x)).max(1.0) as usize;
    if capped {
        k.min(d - 1)
    } else {
        k
    }
}

/// Binary entropy `H2(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(Error::OutOfDomain {
            quantity: "binary entropy argument",
            value: x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(h2(x))
}

#[inline]
fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    math::neg_xlog2x(x) + math::neg_xlog2x(1.0 - x)
}

/// Minimum entropy on the segment `k`, as a function of the squared argument.
fn min_branch(k: usize, squared: f64) -> f64 {
    let kf = k as f64;
    let alpha = (1.0 + math::sqrt_clamped(1.0 - (kf + 1.0) * squared / (2.0 * kf))) / (kf + 1.0);
    let ka = kf * alpha;
    h2(ka) + ka * math::log2(kf)
}

/// Maximum entropy, as a function of the squared argument.
fn max_branch(d: usize, squared: f64) -> f64 {
    let df = d as f64;
    let gamma =
        (1.0 + math::sqrt_clamped((df - 1.0) * (df - 1.0) - df * (df - 1.0) * squared / 2.0)) / df;
    let tail = if d > 2 {
        (1.0 - gamma) * math::log2(df - 1.0)
    } else {
        0.0
    };
    h2(gamma) + tail
}

/// Squared argument for the PaperCompat k-extension; the closed forms are undefined at `x >= 2`.
fn paper_compat_squared(quantity: &'static str, squared: f64, hi: f64) -> Result<f64> {
    if squared >= 2.0 {
        return Err(out_of_domain(quantity, squared, hi));
    }
    Ok(squared)
}

/// Least entropy at fixed `lambda`.
pub fn r_lower(d: usize, lambda: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let lam = resolve("lambda", lambda, lambda_max(d), mode)?;
    if mode == EvalMode::PaperCompat {
        let sq = paper_compat_squared("lambda", lam * lam, lambda_max(d))?;
        return Ok(min_branch(segment_index(sq, d, false), sq));
    }
    let sq = lam * lam;
    Ok(min_branch(segment_index(sq, d, true), sq))
}

/// Greatest entropy at fixed `lambda`.
pub fn r_upper(d: usize, lambda: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let lam = resolve("lambda", lambda, lambda_max(d), mode)?;
    Ok(max_branch(d, lam * lam))
}

/// Greatest entropy at fixed `tau`.
pub fn f_upper(d: usize, tau: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let t = resolve("tau", tau, tau_max(d), mode)?;
    Ok(max_branch(d, t))
}

/// Least entropy at fixed `tau`.
pub fn f_lower(d: usize, tau: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let t = resolve("tau", tau, tau_max(d), mode)?;
    if mode == EvalMode::PaperCompat {
        let t = paper_compat_squared("tau", t, tau_max(d))?;
        return Ok(min_branch(segment_index(t, d, false), t));
    }
    Ok(min_branch(segment_index(t, d, true), t))
}

/// Knot `sqrt(2(k-1)/k)` of the lower curve in `lambda`.
#[inline]
pub fn co_knot(k: usize) -> f64 {
    let kf = k as f64;
    math::sqrt(2.0 * (kf - 1.0) / kf)
}

fn chord_slope(k: usize) -> f64 {
    let kf = k as f64;
    (math::log2(kf + 1.0) - math::log2(kf)) / (co_knot(k + 1) - co_knot(k))
}

/// Convex hull of [`r_lower`].
pub fn co_r_lower(d: usize, lambda: f64) -> Result<f64> {
    check_d(d)?;
    let lam = resolve("lambda", lambda, lambda_max(d), EvalMode::Strict)?;
    Ok(co_r_lower_unchecked(d, lam))
}

fn co_r_lower_unchecked(d: usize, lam: f64) -> f64 {
    if lam <= 1.0 {
        return h2((1.0 + math::sqrt_clamped(1.0 - lam * lam)) / 2.0);
    }
    let k = segment_index(lam * lam, d, true).max(2);
    chord_slope(k) * (lam - co_knot(k)) + math::log2(k as f64)
}

/// [`co_r_lower`] under an evaluation policy. PaperCompat clamps like Clamped:
/// the hull has no closed-form continuation past its domain.
pub fn co_r_lower_mode(d: usize, lambda: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let mode = if mode == EvalMode::PaperCompat {
        EvalMode::Clamped
    } else {
        mode
    };
    let lam = resolve("lambda", lambda, lambda_max(d), mode)?;
    Ok(co_r_lower_unchecked(d, lam))
}

/// Tangency point `tau*` and slope `a` of the line closing the concave envelope of `F_U`.
///
/// `tau* = (4d - 6) / (d (d - 1))`, `a = (d - 1) / (2d - 4) * log2(d - 1)`.
pub fn ca_tangent(d: usize) -> Result<(f64, f64)> {
    if d < 3 {
        return Err(Error::BadDimension {
            d,
            reason: "F_U is already concave for d = 2",
        });
    }
    let df = d as f64;
    let tau_star = (4.0 * df - 6.0) / (df * (df - 1.0));
    let slope = (df - 1.0) / (2.0 * df - 4.0) * math::log2(df - 1.0);
    Ok((tau_star, slope))
}

/// Tangent line `a (tau - 2(d-1)/d) + log2 d`.
pub fn tangent_line(d: usize, tau: f64) -> Result<f64> {
    let (_, slope) = ca_tangent(d)?;
    Ok(slope * (tau - tau_max(d)) + math::log2(d as f64))
}

/// Concave envelope of [`f_upper`].
pub fn ca_f_upper(d: usize, tau: f64) -> Result<f64> {
    check_d(d)?;
    let t = resolve("tau", tau, tau_max(d), EvalMode::Strict)?;
    Ok(ca_f_upper_unchecked(d, t))
}

fn ca_f_upper_unchecked(d: usize, t: f64) -> f64 {
    if d == 2 {
        return max_branch(2, t);
    }
    let df = d as f64;
    let tau_star = (4.0 * df - 6.0) / (df * (df - 1.0));
    if t <= tau_star {
        max_branch(d, t)
    } else {
        let slope = (df - 1.0) / (2.0 * df - 4.0) * math::log2(df - 1.0);
        slope * (t - tau_max(d)) + math::log2(df)
    }
}

/// [`ca_f_upper`] under an evaluation policy; PaperCompat clamps like Clamped.
pub fn ca_f_upper_mode(d: usize, tau: f64, mode: EvalMode) -> Result<f64> {
    check_d(d)?;
    let mode = if mode == EvalMode::PaperCompat {
        EvalMode::Clamped
    } else {
        mode
    };
    let t = resolve("tau", tau, tau_max(d), mode)?;
    Ok(ca_f_upper_unchecked(d, t))
}

/// `Delta(y) = ln((d-1) y) - (1 - 1/d) y - (1 - 2/d) + 1/(d y)`.
///
/// Its root right of `y = 2/d` marks the inflection of `F_U` under
/// `y = gamma / (1 - gamma)`.
pub fn delta_curve(d: usize, y: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::BadDimension {
            d,
            reason: "inflection analysis needs d >= 3",
        });
    }
    let df = d as f64;
    let y_min = 1.0 / (df - 1.0);
    if !(y >= y_min) || !y.is_finite() {
        return Err(Error::OutOfDomain {
            quantity: "y",
            value: y,
            lo: y_min,
            hi: f64::INFINITY,
        });
    }
    Ok(math::ln((df - 1.0) * y) - (1.0 - 1.0 / df) * y - (1.0 - 2.0 / df) + 1.0 / (df * y))
}

/// Root `y0` of [`delta_curve`] and the matching `tau0` where `F_U'' = 0`.
///
/// Bisection on `[2/d, Y]`, doubling `Y` until `Delta(Y) < 0`; `Delta(2/d) > 0`
/// for every `d >= 3`.
pub fn find_inflection(d: usize) -> Result<(f64, f64)> {
    let df = d as f64;
    let mut lo = 2.0 / df;
    if delta_curve(d, lo)? <= 0.0 {
        return Err(Error::NoBracket { y_hi: lo });
    }
    let mut hi = 2.0 * lo;
    let mut doublings = 0;
    while delta_curve(d, hi)? >= 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::NoBracket { y_hi: hi });
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if delta_curve(d, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y0 = 0.5 * (lo + hi);
    Ok((y0, tau_from_gamma(d, y0 / (1.0 + y0))))
}

/// Inverse of `gamma(tau) = [1 + sqrt((d-1)^2 - d(d-1) tau / 2)] / d`.
pub fn tau_from_gamma(d: usize, gamma: f64) -> f64 {
    let df = d as f64;
    let s = df * gamma - 1.0;
    2.0 * ((df - 1.0) * (df - 1.0) - s * s) / (df * (df - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CurveKind {
    /// Convex hull of the lower curve in `lambda`.
    CoRL,
    /// Concave envelope of the upper curve in `tau`.
    CaFU,
}

/// Closed form used on one piece of an envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SegmentShape {
    /// `H2((1 + sqrt(1 - lambda^2)) / 2)`
    Arc,
    /// Chord from `(sqrt(2(k-1)/k), log2 k)` to `(sqrt(2k/(k+1)), log2(k+1))`.
    Chord { k: usize, slope: f64 },
    /// `F_U` itself.
    UpperArc,
    /// `a (tau - 2(d-1)/d) + log2 d`, tangent to `F_U` at `tau_star`.
    Tangent { tau_star: f64, slope: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub shape: SegmentShape,
}

/// Piecewise description of [`co_r_lower`] or [`ca_f_upper`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentedCurve {
    pub d: usize,
    pub kind: CurveKind,
    pub knots: Vec<f64>,
    pub segments: Vec<Segment>,
}

impl SegmentedCurve {
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    /// Value of one segment's closed form (not restricted to its interval).
    pub fn eval_segment(&self, seg: &Segment, x: f64) -> f64 {
        match seg.shape {
            SegmentShape::Arc => h2((1.0 + math::sqrt_clamped(1.0 - x * x)) / 2.0),
            SegmentShape::Chord { k, slope } => slope * (x - co_knot(k)) + math::log2(k as f64),
            SegmentShape::UpperArc => max_branch(self.d, x),
            SegmentShape::Tangent { slope, .. } => {
                slope * (x - tau_max(self.d)) + math::log2(self.d as f64)
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if x < lo - DOMAIN_SLACK || x > hi + DOMAIN_SLACK {
            return Err(Error::OutOfDomain {
                quantity: "curve argument",
                value: x,
                lo,
                hi,
            });
        }
        let x = x.clamp(lo, hi);
        let seg = self
            .segments
            .iter()
            .find(|s| x <= s.end)
            .unwrap_or_else(|| self.segments.last().unwrap());
        Ok(self.eval_segment(seg, x))
    }
}

/// Segments of the convex hull of `r_lower`: `d - 1` pieces over `d` knots.
pub fn co_curve(d: usize) -> Result<SegmentedCurve> {
    check_d(d)?;
    let knots: Vec<f64> = (1..=d).map(co_knot).collect();
    let mut segments = vec![Segment {
        start: knots[0],
        end: knots[1],
        shape: SegmentShape::Arc,
    }];
    for k in 2..d {
        segments.push(Segment {
            start: knots[k - 1],
            end: knots[k],
            shape: SegmentShape::Chord {
                k,
                slope: chord_slope(k),
            },
        });
    }
    Ok(SegmentedCurve {
        d,
        kind: CurveKind::CoRL,
        knots,
        segments,
    })
}

/// Segments of the concave envelope of `f_upper`.
pub fn ca_curve(d: usize) -> Result<SegmentedCurve> {
    check_d(d)?;
    if d == 2 {
        return Ok(SegmentedCurve {
            d,
            kind: CurveKind::CaFU,
            knots: vec![0.0, tau_max(2)],
            segments: vec![Segment {
                start: 0.0,
                end: tau_max(2),
                shape: SegmentShape::UpperArc,
            }],
        });
    }
    let (tau_star, slope) = ca_tangent(d)?;
    Ok(SegmentedCurve {
        d,
        kind: CurveKind::CaFU,
        knots: vec![0.0, tau_star, tau_max(d)],
        segments: vec![
            Segment {
                start: 0.0,
                end: tau_star,
                shape: SegmentShape::UpperArc,
            },
            Segment {
                start: tau_star,
                end: tau_max(d),
                shape: SegmentShape::Tangent { tau_star, slope },
            },
        ],
    })
}

/// Purity constraint on a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Lambda(f64),
    Tau(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpectrumForm {
    /// `{t, ..., t, 1 - k t, 0, ..., 0}`, attains the minimum entropy.
    MinForm,
    /// `{t, (1-t)/(d-1), ..., (1-t)/(d-1)}`, attains the maximum entropy.
    MaxForm,
}

/// A spectrum on which one of the extremal curves is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSpectrum {
    pub d: usize,
    pub form: SpectrumForm,
    pub t: f64,
    pub mu: ProbabilityVector,
}

pub fn extremal_spectrum(
    d: usize,
    constraint: Constraint,
    form: SpectrumForm,
) -> Result<ExtremalSpectrum> {
    check_d(d)?;
    let tau = match constraint {
        Constraint::Lambda(l) => {
            let l = resolve("lambda", l, lambda_max(d), EvalMode::Strict)?;
            l * l
        }
        Constraint::Tau(t) => resolve("tau", t, tau_max(d), EvalMode::Strict)?,
    };
    let df = d as f64;
    let (t, entries) = match form {
        SpectrumForm::MaxForm => {
            let t = 1.0 / df
                + math::sqrt_clamped(
                    ((df - 1.0) / df) * ((df - 1.0) / df) - (df - 1.0) * tau / (2.0 * df),
                );
            let rest = ((1.0 - t) / (df - 1.0)).max(0.0);
            let mut v = vec![rest; d];
            v[0] = t;
            (t, v)
        }
        SpectrumForm::MinForm => {
            let k = segment_index(tau, d, true);
            let kf = k as f64;
            let t = (1.0 + math::sqrt_clamped(1.0 - (kf + 1.0) * tau / (2.0 * kf))) / (kf + 1.0);
            let mut v = vec![0.0; d];
            for x in v.iter_mut().take(k) {
                *x = t;
            }
            v[k] = (1.0 - kf * t).max(0.0);
            (t, v)
        }
    };
    Ok(ExtremalSpectrum {
        d,
        form,
        t,
        mu: ProbabilityVector::new(entries)?,
    })
}
