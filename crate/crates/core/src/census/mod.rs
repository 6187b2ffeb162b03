//! Argument-principle machinery: winding counts on rectangles, zero
//! localization, N(T) / N2(T) counting, the displacement sum S2(T), and
//! continuous argument tracking along horizontal segments.

mod args;
mod locate;
mod winding;

pub use args::{arg_continuous, ArgTrace};
pub use locate::{locate_zeros, Zero};
pub use winding::winding_count;

pub(crate) use args::arg_trace_landing;

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use crate::complex::point_label;
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::cabs;
use crate::zeta::zeta_derivs_c;

/// Functions the census machinery can track.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusTarget {
    /// ζ(s)
    Zeta,
    /// ζ''(s)
    ZetaSecond,
    /// G2(s) = 2^s ζ''(s) / (log 2)^2
    G2,
    /// G2(s) / ζ(s)
    G2OverZeta,
}

impl CensusTarget {
    pub(crate) fn eval(&self, ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
        let wp = ctx.work_prec();
        match self {
            CensusTarget::Zeta => Ok(zeta_derivs_c(ctx, s, 0)?[0].clone()),
            CensusTarget::ZetaSecond => Ok(zeta_derivs_c(ctx, s, 2)?[2].clone()),
            CensusTarget::G2 => {
                let z2 = zeta_derivs_c(ctx, s, 2)?[2].clone();
                Ok(crate::funceq::g2_from_zeta2(ctx, s, &z2, wp))
            }
            CensusTarget::G2OverZeta => {
                let d = zeta_derivs_c(ctx, s, 2)?;
                if cabs(&d[0]) < ctx.newton_tol() {
                    return Err(EvalError::DenominatorZero { at: point_label(s) });
                }
                let g = crate::funceq::g2_from_zeta2(ctx, s, &d[2], wp);
                Ok(g / &d[0])
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CensusTarget::Zeta => "zeta",
            CensusTarget::ZetaSecond => "zeta2",
            CensusTarget::G2 => "g2",
            CensusTarget::G2OverZeta => "g2_over_zeta",
        }
    }
}

/// Axis-aligned rectangle in the s-plane.
///
/// General rectangles are allowed (winding of the ζ pole at s = 1 is a valid
/// request); the census entry points additionally require `t_min >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rect {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if !(sigma_min < sigma_max && t_min < t_max) {
            return Err(EvalError::Domain(format!(
                "degenerate rectangle [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]"
            )));
        }
        if ![sigma_min, sigma_max, t_min, t_max].iter().all(|v| v.is_finite()) {
            return Err(EvalError::Domain("non-finite rectangle corner".into()));
        }
        Ok(Rect {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        })
    }

    pub(crate) fn to_frect(self, ctx: &PrecisionContext) -> FRect {
        let p = ctx.mantissa_bits();
        FRect {
            s0: Float::with_val(p, self.sigma_min),
            s1: Float::with_val(p, self.sigma_max),
            t0: Float::with_val(p, self.t_min),
            t1: Float::with_val(p, self.t_max),
        }
    }
}

/// Rectangle with exact multiprecision corners; the perturbation schedule
/// shifts edges by amounts far below f64 resolution at census heights.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FRect {
    pub s0: Float,
    pub s1: Float,
    pub t0: Float,
    pub t1: Float,
}

impl FRect {
    pub(crate) fn corner(&self, wp: u32, which: usize) -> Complex {
        match which {
            0 => Complex::with_val(wp, (&self.s0, &self.t0)),
            1 => Complex::with_val(wp, (&self.s1, &self.t0)),
            2 => Complex::with_val(wp, (&self.s1, &self.t1)),
            _ => Complex::with_val(wp, (&self.s0, &self.t1)),
        }
    }

    pub(crate) fn center(&self, wp: u32) -> Complex {
        let re = ((&self.s0 + &self.s1).complete(self.s0.prec())) / 2u32;
        let im = ((&self.t0 + &self.t1).complete(self.t0.prec())) / 2u32;
        Complex::with_val(wp, (re, im))
    }

    pub(crate) fn sigma_span(&self) -> Float {
        (&self.s1 - &self.s0).complete(self.s0.prec())
    }

    pub(crate) fn t_span(&self) -> Float {
        (&self.t1 - &self.t0).complete(self.t0.prec())
    }

    pub(crate) fn diameter_f64(&self) -> f64 {
        let ds = self.sigma_span().to_f64();
        let dt = self.t_span().to_f64();
        ds.hypot(dt)
    }

    pub(crate) fn contains(&self, z: &Complex) -> bool {
        *z.real() >= self.s0
            && *z.real() <= self.s1
            && *z.imag() >= self.t0
            && *z.imag() <= self.t1
    }
}

/// Outcome of a winding count, carrying the contour actually used.
#[derive(Debug, Clone)]
pub struct WindingOutcome {
    /// Zeros minus poles inside, weighted by multiplicity.
    pub winding: i64,
    /// Whether the perturbation schedule moved any edge.
    pub perturbed: bool,
    /// The top edge ordinate of the contour that was finally used.
    pub effective_t_max: Float,
    /// The bottom edge ordinate of the contour that was finally used.
    pub effective_t_min: Float,
}

/// Outcome of a zero count up to height T.
#[derive(Debug, Clone)]
pub struct CountOutcome {
    pub count: i64,
    /// The top ordinate of the contour after any automatic perturbation.
    pub effective_t: Float,
    pub perturbed: bool,
}

/// Census rectangle sigma ranges: [-1, 2] for ζ, [-2, 6] for ζ''.
/// The ζ'' range rests on the zero-free half-plane Re(s) >= 5 plus margin,
/// and is wide enough to the left to capture the single known pair with
/// negative real part.
pub(crate) fn census_sigma_range(k: u32) -> (f64, f64) {
    if k == 0 {
        (-1.0, 2.0)
    } else {
        (-2.0, 6.0)
    }
}

/// N(T) (k = 0) or N2(T) (k = 2): multiplicity-weighted count of zeros with
/// 0 < Im s <= T, by a single winding count over the census rectangle.
/// The strip 0 < t <= 2 contributes nothing for either target (verified
/// empirically by a modulus scan; see the census tests).
pub fn count_nk(ctx: &PrecisionContext, k: u32, t: f64) -> Result<CountOutcome> {
    if k != 0 && k != 2 {
        return Err(EvalError::Domain(format!(
            "count is defined for derivative orders 0 and 2, got {k}"
        )));
    }
    if !(t >= 2.0) {
        return Err(EvalError::Domain(format!("count requires T >= 2, got {t}")));
    }
    if t == 2.0 {
        return Ok(CountOutcome {
            count: 0,
            effective_t: ctx.float(2.0),
            perturbed: false,
        });
    }
    let (smin, smax) = census_sigma_range(k);
    let target = if k == 0 {
        CensusTarget::Zeta
    } else {
        CensusTarget::ZetaSecond
    };
    let rect = Rect::new(smin, smax, 2.0, t)?;
    let out = winding_count(ctx, target, &rect)?;
    Ok(CountOutcome {
        count: out.winding,
        effective_t: out.effective_t_max,
        perturbed: out.perturbed,
    })
}

/// All non-real zeros of ζ'' with 0 < Im s <= T (standard census rectangle).
pub fn locate_zeta2_upto(ctx: &PrecisionContext, t: f64) -> Result<Vec<Zero>> {
    let (smin, smax) = census_sigma_range(2);
    let rect = Rect::new(smin, smax, 2.0, t)?;
    locate_zeros(ctx, CensusTarget::ZetaSecond, &rect)
}

/// S2(T) = Σ (β'' − 1/2) over zeros of ζ'' with 0 < γ'' <= T, counted with
/// multiplicity.
pub fn sum_s2(ctx: &PrecisionContext, t: f64) -> Result<Float> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if !(t > two_pi) {
        return Err(EvalError::Domain(format!(
            "the displacement sum requires T > 2π, got {t}"
        )));
    }
    let zeros = locate_zeta2_upto(ctx, t)?;
    Ok(sum_s2_from_zeros(ctx, &zeros))
}

/// The displacement sum over an already-localized zero list.
pub fn sum_s2_from_zeros(ctx: &PrecisionContext, zeros: &[Zero]) -> Float {
    let wp = ctx.work_prec();
    let mut acc = Float::with_val(wp, 0);
    let half = Float::with_val(wp, 0.5);
    for z in zeros {
        let d = (z.position.re() - &half).complete(wp);
        acc += d * Float::with_val(wp, z.multiplicity);
    }
    Float::with_val(ctx.mantissa_bits(), acc)
}

/// Displacement sum, multiplicity-weighted count, and left-half-plane flag
/// restricted to zeros with Im <= t_max.
pub fn sum_partial(ctx: &PrecisionContext, zeros: &[Zero], t_max: &Float) -> (Float, i64, bool) {
    let wp = ctx.work_prec();
    let mut acc = Float::with_val(wp, 0);
    let half = Float::with_val(wp, 0.5);
    let mut count = 0i64;
    let mut left_pair = false;
    for z in zeros {
        if z.position.im() > t_max {
            continue;
        }
        let d = (z.position.re() - &half).complete(wp);
        acc += d * Float::with_val(wp, z.multiplicity);
        count += z.multiplicity as i64;
        if z.position.re().is_sign_negative() {
            left_pair = true;
        }
    }
    (Float::with_val(ctx.mantissa_bits(), acc), count, left_pair)
}

/// Cumulative count outcome for one grid ordinate of a banded census.
#[derive(Debug, Clone)]
pub struct BandCount {
    /// Multiplicity-weighted count of zeros with 0 < Im s <= effective_t.
    pub count: i64,
    pub effective_t: Float,
    pub perturbed: bool,
}

/// Counts at every grid ordinate by stacking band windings: the bottom edge
/// of each band is the previous band's effective top edge, so the cumulative
/// sums are exactly the winding counts of the full rectangles.
pub fn count_nk_banded(
    ctx: &PrecisionContext,
    k: u32,
    t_grid: &[f64],
) -> Result<Vec<BandCount>> {
    if k != 0 && k != 2 {
        return Err(EvalError::Domain(format!(
            "count is defined for derivative orders 0 and 2, got {k}"
        )));
    }
    let (smin, smax) = census_sigma_range(k);
    let target = if k == 0 {
        CensusTarget::Zeta
    } else {
        CensusTarget::ZetaSecond
    };
    let p = ctx.mantissa_bits();
    let mut out = Vec::with_capacity(t_grid.len());
    let mut cum = 0i64;
    let mut bottom = Float::with_val(p, 2);
    for &t in t_grid {
        if !(t > bottom.to_f64()) {
            return Err(EvalError::Domain(format!(
                "band top {t} does not exceed band bottom {}",
                bottom.to_f64()
            )));
        }
        let fr = FRect {
            s0: Float::with_val(p, smin),
            s1: Float::with_val(p, smax),
            t0: bottom.clone(),
            t1: Float::with_val(p, t),
        };
        let w = winding::winding_count_frect(ctx, target, &fr)?;
        cum += w.winding;
        out.push(BandCount {
            count: cum,
            effective_t: w.effective_t_max.clone(),
            perturbed: w.perturbed,
        });
        bottom = w.effective_t_max;
    }
    Ok(out)
}

/// Continuous argument of the target at `sigma_stop + i t`, continued from
/// the far right along the horizontal path.
pub fn arg_continuous_at(
    ctx: &PrecisionContext,
    target: CensusTarget,
    t: &Float,
    sigma_stop: f64,
) -> Result<Float> {
    let tr = args::arg_trace_landing(ctx, target, t, sigma_stop, &[])?;
    Ok(tr.arg_at_stop())
}
