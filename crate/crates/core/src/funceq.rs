//! The functional-equation factor F(s) = 2^s π^(s−1) sin(πs/2) Γ(1−s), its
//! logarithmic derivatives, the normalized second derivative
//! G2(s) = 2^s ζ''(s)/(log 2)^2, and the remainder term that measures how
//! far ζ''/ζ is from F''/F across the functional equation.

use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float};

use crate::complex::{point_label, ComplexValue};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::special::{digamma_c, gamma_c, trigamma_c};
use crate::util::cabs;
use crate::zeta::{ratios_at, zeta_derivs_c};

/// F(s), F'/F, F''/F and F''/F' evaluated together at one point.
#[derive(Debug, Clone)]
pub struct FuncEqTerm {
    pub f: ComplexValue,
    pub flogd: ComplexValue,
    pub f2_over_f: ComplexValue,
    pub f2_over_f1: ComplexValue,
}

/// Distance from `x` to the nearest integer of the given parity test.
fn near_positive_integer(ctx: &PrecisionContext, s: &Complex) -> Option<i64> {
    let tol = ctx.newton_tol();
    if s.imag().clone().abs() > tol {
        return None;
    }
    let re = s.real();
    let k = re.to_f64().round();
    if k < 0.5 || !k.is_finite() {
        return None;
    }
    let dist = (re.clone() - Float::with_val(re.prec(), k)).abs();
    if dist < tol {
        Some(k as i64)
    } else {
        None
    }
}

/// F(s) = 2^s π^(s-1) sin(πs/2) Γ(1-s).
///
/// Γ(1−s) has poles at every positive integer s; the sine zeros cancel the
/// even ones, where the finite limit (−1)^m 2^(2m−1) π^(2m) / (2m−1)! is
/// returned. Odd positive integers are genuine poles.
pub fn f_factor(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = f_factor_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn f_factor_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    if let Some(k) = near_positive_integer(ctx, s) {
        if k % 2 == 1 {
            return Err(EvalError::Pole { at: point_label(s) });
        }
        // s = 2m: F(2m) = (-1)^m 2^(2m-1) π^(2m) / (2m-1)!
        let m = k / 2;
        let pi = Float::with_val(wp, rug::float::Constant::Pi);
        let mut v = pi.pow(k as u32);
        v *= Float::with_val(wp, 2).pow((k - 1) as u32);
        let mut fact = Float::with_val(wp, 1);
        for i in 1..k {
            fact *= Float::with_val(wp, i);
        }
        v /= fact;
        if m % 2 == 1 {
            v = -v;
        }
        return Ok(Complex::with_val(wp, (&v, Float::with_val(wp, 0))));
    }

    let s = Complex::with_val(wp, s);
    let pi = Float::with_val(wp, rug::float::Constant::Pi);
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);
    let ln_pi = pi.clone().ln();

    let one_minus_s = (1u32 - &s).complete((wp, wp));
    let g = gamma_c(ctx, &one_minus_s)?;
    let two_pow = ((&s * &ln2).complete((wp, wp))).exp();
    let pi_pow = (((&s - 1u32).complete((wp, wp))) * &ln_pi).exp();
    let sin_term = ((&s * &pi).complete((wp, wp)) / 2u32).sin();

    let mut out = two_pow;
    out *= &pi_pow;
    out *= &sin_term;
    out *= &g;
    Ok(out)
}

/// F'/F(s) = log 2π + (π/2) cot(πs/2) − ψ(1−s).
pub fn f_log_deriv(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = f_log_deriv_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn f_log_deriv_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let s = Complex::with_val(wp, s);
    let pi = Float::with_val(wp, rug::float::Constant::Pi);

    let half_pi_s = ((&s * &pi).complete((wp, wp))) / 2u32;
    let sin = half_pi_s.clone().sin();
    if cabs(&sin) < ctx.newton_tol() {
        return Err(EvalError::Pole { at: point_label(&s) });
    }
    let cos = half_pi_s.cos();
    let cot = (&cos / &sin).complete((wp, wp));

    let one_minus_s = (1u32 - &s).complete((wp, wp));
    let psi = digamma_c(ctx, &one_minus_s)?;

    let mut out = Complex::with_val(wp, (&pi * 2u32).complete(wp).ln());
    out += (cot * &pi) / 2u32;
    out -= psi;
    Ok(out)
}

/// F''/F(s) = (F'/F)'(s) + (F'/F)^2(s), with the derivative in closed form:
/// (F'/F)'(s) = −(π²/4)csc²(πs/2) + ψ'(1−s).
pub fn f2_over_f(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = f2_over_f_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn f2_over_f_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let w = f_log_deriv_c(ctx, s)?;
    let d = f_log_deriv_prime_c(ctx, s)?;
    Ok(d + w.square())
}

/// Closed-form (F'/F)'.
pub(crate) fn f_log_deriv_prime_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let s = Complex::with_val(wp, s);
    let pi = Float::with_val(wp, rug::float::Constant::Pi);

    let half_pi_s = ((&s * &pi).complete((wp, wp))) / 2u32;
    let sin = half_pi_s.sin();
    if cabs(&sin) < ctx.newton_tol() {
        return Err(EvalError::Pole { at: point_label(&s) });
    }
    let csc2 = sin.square().recip();
    let one_minus_s = (1u32 - &s).complete((wp, wp));
    let psi1 = trigamma_c(ctx, &one_minus_s)?;

    let quarter_pi2 = (pi.clone().square()) / 4u32;
    let mut out = -(csc2 * &quarter_pi2);
    out += psi1;
    Ok(out)
}

/// F''/F'(s) = (F''/F)/(F'/F).
pub fn f2_over_f1(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = f2_over_f1_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn f2_over_f1_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let num = f2_over_f_c(ctx, s)?;
    let den = f_log_deriv_c(ctx, s)?;
    if cabs(&den) < ctx.newton_tol() * cabs(&num).max(&Float::with_val(wp, 1)) {
        return Err(EvalError::DenominatorZero { at: point_label(s) });
    }
    Ok(num / den)
}

/// All four functional-equation quantities at one point.
pub fn func_eq_term(ctx: &PrecisionContext, s: &ComplexValue) -> Result<FuncEqTerm> {
    let sc = s.as_complex();
    let wp = ctx.work_prec();
    let f = f_factor_c(ctx, sc)?;
    let flogd = f_log_deriv_c(ctx, sc)?;
    let d = f_log_deriv_prime_c(ctx, sc)?;
    let f2f = d + flogd.clone().square();
    if cabs(&flogd) < ctx.newton_tol() * cabs(&f2f).max(&Float::with_val(wp, 1)) {
        return Err(EvalError::DenominatorZero { at: point_label(sc) });
    }
    let f2f1 = (&f2f / &flogd).complete((wp, wp));
    Ok(FuncEqTerm {
        f: ComplexValue::from_raw(ctx, f)?,
        flogd: ComplexValue::from_raw(ctx, flogd)?,
        f2_over_f: ComplexValue::from_raw(ctx, f2f)?,
        f2_over_f1: ComplexValue::from_raw(ctx, f2f1)?,
    })
}

/// G2(s) = 2^s ζ''(s) / (log 2)^2: the second derivative normalized by its
/// leading Dirichlet term, tending to 1 as Re(s) → ∞.
pub fn g2(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = g2_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn g2_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let z2 = zeta_derivs_c(ctx, s, 2)?[2].clone();
    Ok(g2_from_zeta2(ctx, s, &z2, wp))
}

pub(crate) fn g2_from_zeta2(
    ctx: &PrecisionContext,
    s: &Complex,
    zeta2: &Complex,
    wp: u32,
) -> Complex {
    let _ = ctx;
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);
    let two_pow = ((Complex::with_val(wp, s)) * &ln2).exp();
    let mut out = (zeta2 * &two_pow).complete((wp, wp));
    out /= ln2.square();
    out
}

/// The condition-2 remainder: 2 (F''/F')^{-1} (ζ'/ζ)(1−s) − (F''/F)^{-1} (ζ''/ζ)(1−s).
///
/// By the functional equation this equals 1 − (F''/F)^{-1}(ζ''/ζ)(s).
pub fn remainder_term(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = remainder_term_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn remainder_term_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let s = Complex::with_val(wp, s);
    let one_minus_s = (1u32 - &s).complete((wp, wp));
    let (zp_z, zpp_z) = ratios_at(ctx, &one_minus_s)?;
    let f2f = f2_over_f_c(ctx, &s)?;
    let f2f1 = f2_over_f1_c(ctx, &s)?;
    if cabs(&f2f) < ctx.newton_tol() || cabs(&f2f1) < ctx.newton_tol() {
        return Err(EvalError::DenominatorZero { at: point_label(&s) });
    }
    let mut out = (&zp_z / &f2f1).complete((wp, wp)) * 2u32;
    out -= (&zpp_z / &f2f).complete((wp, wp));
    Ok(out)
}

/// |(1 − remainder_term(s)) − (ζ''/ζ)(s)/(F''/F)(s)|: the residual of the
/// rearranged functional-equation identity, exposed for diagnostics.
pub fn remainder_identity_residual(ctx: &PrecisionContext, s: &ComplexValue) -> Result<Float> {
    let wp = ctx.work_prec();
    let sc = Complex::with_val(wp, s.as_complex());
    let rem = remainder_term_c(ctx, &sc)?;
    let (_, zpp_z) = ratios_at(ctx, &sc)?;
    let f2f = f2_over_f_c(ctx, &sc)?;
    let lhs = Complex::with_val(wp, 1) - rem;
    let rhs = zpp_z / f2f;
    Ok(cabs(&(lhs - rhs)))
}
