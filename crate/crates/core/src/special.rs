//! Complex gamma, digamma, trigamma and the principal logarithm.
//!
//! All three gamma-family functions use the same scheme: shift the argument
//! rightward by the recurrence until the Stirling series with its remainder
//! envelope converges below the tolerance target, evaluate the asymptotic
//! series there, then substitute back through the recurrence.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use crate::bernoulli::bernoulli_float;
use crate::complex::{point_label, ComplexValue};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::pow2;

/// Minimum real part before the asymptotic series is applied.
fn shift_threshold(ctx: &PrecisionContext) -> u32 {
    (ctx.mantissa_bits() / 8).max(10)
}

/// If `s` is within `newton_tol` of a non-positive integer, return it.
fn near_nonpositive_integer(ctx: &PrecisionContext, s: &Complex) -> Option<i64> {
    let tol = ctx.newton_tol();
    if s.imag().clone().abs() > tol {
        return None;
    }
    let re = s.real();
    let k = re.to_f64().round();
    if k > 0.5 || !k.is_finite() {
        return None;
    }
    let dist = (re.clone() - Float::with_val(re.prec(), k)).abs();
    if dist < tol {
        Some(k as i64)
    } else {
        None
    }
}

/// sec(arg(z)/2)^2, the per-term growth of the Stirling remainder envelope.
fn sec_half_arg_sq(wp: u32, z: &Complex) -> Float {
    let theta = z.clone().arg().into_real_imag().0;
    let c = (theta / 2u32).cos();
    Float::with_val(wp, 1) / c.square()
}

/// Adaptive Stirling-type correction sum Σ_j coeff(j) · z^(−e0 − 2(j−1)) with
/// the remainder envelope folded into the stopping test. `None` when the
/// terms stop decreasing before the target is reached (caller shifts further).
fn stirling_correction<F>(
    wp: u32,
    z: &Complex,
    first_exponent: u32,
    coeff: F,
    target_abs: &Float,
) -> Option<Complex>
where
    F: Fn(usize, u32) -> Float,
{
    let zinv = z.clone().recip();
    let mut zpow = Complex::with_val(wp, 1);
    for _ in 0..first_exponent {
        zpow *= &zinv;
    }
    let zinv2 = zinv.square();
    let secsq = sec_half_arg_sq(wp, z);
    let mut envelope = secsq.clone();

    let mut sum = Complex::with_val(wp, 0);
    let mut prev_mag = Float::with_val(wp, f64::INFINITY);
    for j in 1..=512usize {
        let c = coeff(j, wp);
        let term = (&zpow * &c).complete((wp, wp));
        let mag = term.clone().abs().into_real_imag().0;
        let bounded = (&mag * &envelope).complete(wp);
        if bounded < *target_abs {
            sum += term;
            return Some(sum);
        }
        if mag >= prev_mag {
            return None;
        }
        sum += term;
        prev_mag = mag;
        zpow *= &zinv2;
        envelope *= &secsq;
    }
    None
}

/// log Γ(z) for Re(z) past the shift threshold; `None` if the series cannot
/// reach `target_abs` absolute accuracy at this argument.
fn ln_gamma_stirling(wp: u32, z: &Complex, target_abs: &Float) -> Option<Complex> {
    let series = stirling_correction(
        wp,
        z,
        1,
        |j, p| {
            let tj = 2 * j as u32;
            let denom = Float::with_val(p, tj) * (tj - 1);
            bernoulli_float(2 * j, p) / denom
        },
        target_abs,
    )?;
    let lnz = z.clone().ln();
    let half = Float::with_val(wp, 0.5);
    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let mut out = (z - &half).complete((wp, wp)) * lnz;
    out -= z;
    out += two_pi.ln() / 2u32;
    out += series;
    Some(out)
}

/// ψ(z) by the asymptotic series, same contract as `ln_gamma_stirling`.
fn digamma_stirling(wp: u32, z: &Complex, target_abs: &Float) -> Option<Complex> {
    let series = stirling_correction(
        wp,
        z,
        2,
        |j, p| {
            let tj = 2 * j as u32;
            -bernoulli_float(2 * j, p) / Float::with_val(p, tj)
        },
        target_abs,
    )?;
    let mut out = z.clone().ln();
    out -= (z.clone() * 2u32).recip();
    out += series;
    Some(out)
}

/// ψ'(z) by the differentiated asymptotic series.
fn trigamma_stirling(wp: u32, z: &Complex, target_abs: &Float) -> Option<Complex> {
    let series = stirling_correction(wp, z, 3, |j, p| bernoulli_float(2 * j, p), target_abs)?;
    let mut out = z.clone().recip();
    out += (z.clone().square() * 2u32).recip();
    out += series;
    Some(out)
}

fn pole_error(s: &Complex) -> EvalError {
    EvalError::Pole { at: point_label(s) }
}

enum Kind {
    LnGamma,
    Digamma,
    Trigamma,
}

/// Shift-and-retry driver shared by the three evaluators. Returns the series
/// value at the shifted point together with the recurrence factors s, s+1, …
fn shifted_eval(
    ctx: &PrecisionContext,
    s: &Complex,
    kind: Kind,
) -> Result<(Complex, Vec<Complex>)> {
    // Extra pad absorbs the magnitude of log-gamma-sized values.
    let wp = ctx.work_prec() + 24;
    let s = Complex::with_val(wp, s);
    let target = pow2(wp, -(ctx.mantissa_bits() as i32 + 8));

    let mut extra: u32 = 0;
    loop {
        let threshold = shift_threshold(ctx) + extra;
        let need = Float::with_val(wp, threshold) - s.real();
        let shift = need.to_f64().ceil().max(0.0) as usize;
        let mut factors = Vec::with_capacity(shift);
        let mut w = s.clone();
        for i in 0..shift {
            factors.push((&s + Float::with_val(wp, i as u32)).complete((wp, wp)));
            w += 1u32;
        }
        let value = match kind {
            Kind::LnGamma => ln_gamma_stirling(wp, &w, &target),
            Kind::Digamma => digamma_stirling(wp, &w, &target),
            Kind::Trigamma => trigamma_stirling(wp, &w, &target),
        };
        if let Some(v) = value {
            return Ok((v, factors));
        }
        extra += 8;
        if extra > 4 * ctx.mantissa_bits() {
            return Err(EvalError::Precision(format!(
                "Stirling series did not converge for argument {}",
                point_label(&s)
            )));
        }
    }
}

/// Γ(s) for complex s away from the non-positive integers.
pub fn gamma(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = gamma_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn gamma_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    if near_nonpositive_integer(ctx, s).is_some() {
        return Err(pole_error(s));
    }
    let (lg, factors) = shifted_eval(ctx, s, Kind::LnGamma)?;
    let mut out = lg.exp();
    for f in &factors {
        out /= f;
    }
    Ok(out)
}

/// log Γ(s) on the standard branch (real on the positive real axis,
/// continuous on the right half-plane).
pub fn ln_gamma(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = ln_gamma_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn ln_gamma_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    if near_nonpositive_integer(ctx, s).is_some() {
        return Err(pole_error(s));
    }
    let (lg, factors) = shifted_eval(ctx, s, Kind::LnGamma)?;
    let mut out = lg;
    for f in &factors {
        out -= f.clone().ln();
    }
    Ok(out)
}

/// ψ(s) = Γ'/Γ(s).
pub fn digamma(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = digamma_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn digamma_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    if near_nonpositive_integer(ctx, s).is_some() {
        return Err(pole_error(s));
    }
    let (psi, factors) = shifted_eval(ctx, s, Kind::Digamma)?;
    let mut out = psi;
    for f in &factors {
        out -= f.clone().recip();
    }
    Ok(out)
}

/// ψ'(s), the derivative of digamma.
pub fn trigamma(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = trigamma_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn trigamma_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    if near_nonpositive_integer(ctx, s).is_some() {
        return Err(pole_error(s));
    }
    let (psi1, factors) = shifted_eval(ctx, s, Kind::Trigamma)?;
    let mut out = psi1;
    for f in &factors {
        out += f.clone().square().recip();
    }
    Ok(out)
}

/// Principal-branch logarithm, Im ∈ (−π, π].
pub fn log_principal(ctx: &PrecisionContext, s: &ComplexValue) -> Result<ComplexValue> {
    let v = log_principal_c(ctx, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn log_principal_c(ctx: &PrecisionContext, s: &Complex) -> Result<Complex> {
    let mag = s.clone().abs().into_real_imag().0;
    if mag < ctx.newton_tol() {
        return Err(EvalError::ZeroArgument);
    }
    Ok(Complex::with_val(ctx.work_prec(), s).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn gamma_one_is_one() {
        let c = ctx();
        let s = ComplexValue::new(&c, 1.0, 0.0).unwrap();
        let g = gamma(&c, &s).unwrap();
        let err = (g.re().clone() - Float::with_val(192, 1)).abs();
        assert!(err < c.tol(), "gamma(1) error {err}");
        assert!(g.im().clone().abs() < c.tol());
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let c = ctx();
        let s = ComplexValue::new(&c, 0.5, 0.0).unwrap();
        let g = gamma(&c, &s).unwrap();
        let sqrt_pi = Float::with_val(192, rug::float::Constant::Pi).sqrt();
        let err = (g.re() - &sqrt_pi).complete(192).abs() / sqrt_pi;
        assert!(err < c.tol(), "gamma(1/2) error {err}");
    }

    #[test]
    fn gamma_pole_detected() {
        let c = ctx();
        for k in [0.0, -1.0, -7.0] {
            let s = ComplexValue::new(&c, k, 0.0).unwrap();
            assert!(matches!(gamma(&c, &s), Err(EvalError::Pole { .. })));
        }
    }

    #[test]
    fn digamma_one_is_minus_euler() {
        let c = ctx();
        let s = ComplexValue::new(&c, 1.0, 0.0).unwrap();
        let d = digamma(&c, &s).unwrap();
        let euler = Float::with_val(192, rug::float::Constant::Euler);
        let err = (d.re() + &euler).complete(192).abs();
        assert!(err < c.tol(), "digamma(1) error {err}");
    }

    #[test]
    fn digamma_half_identity() {
        // ψ(1/2) = −γ − 2 log 2
        let c = ctx();
        let s = ComplexValue::new(&c, 0.5, 0.0).unwrap();
        let d = digamma(&c, &s).unwrap();
        let expect = -Float::with_val(192, rug::float::Constant::Euler)
            - Float::with_val(192, rug::float::Constant::Log2) * 2u32;
        let err = (d.re() - &expect).complete(192).abs();
        assert!(err < c.tol(), "digamma(1/2) error {err}");
    }

    #[test]
    fn trigamma_one_is_pi_sq_over_six() {
        let c = ctx();
        let s = ComplexValue::new(&c, 1.0, 0.0).unwrap();
        let t = trigamma(&c, &s).unwrap();
        let expect = Float::with_val(192, rug::float::Constant::Pi).square() / 6u32;
        let err = (t.re() - &expect).complete(192).abs() / expect;
        assert!(err < c.tol(), "trigamma(1) error {err}");
    }

    #[test]
    fn log_principal_branch() {
        let c = ctx();
        let one = ComplexValue::new(&c, 1.0, 0.0).unwrap();
        assert!(log_principal(&c, &one).unwrap().abs() < c.tol());

        let minus_one = ComplexValue::new(&c, -1.0, 0.0).unwrap();
        let l = log_principal(&c, &minus_one).unwrap();
        let pi = Float::with_val(192, rug::float::Constant::Pi);
        assert!((l.im() - &pi).complete(192).abs() < c.tol());

        let zero = ComplexValue::new(&c, 0.0, 0.0).unwrap();
        assert!(matches!(
            log_principal(&c, &zero),
            Err(EvalError::ZeroArgument)
        ));
    }

    #[test]
    fn log_of_two_minus_two_i() {
        // log(1 − (−1 + 2i)) = log(2 − 2i) = (3/2) log 2 − iπ/4
        let c = ctx();
        let s = ComplexValue::new(&c, 2.0, -2.0).unwrap();
        let l = log_principal(&c, &s).unwrap();
        let re_expect = Float::with_val(192, rug::float::Constant::Log2) * 3u32 / 2u32;
        let im_expect = -Float::with_val(192, rug::float::Constant::Pi) / 4u32;
        assert!((l.re() - &re_expect).complete(192).abs() < c.tol());
        assert!((l.im() - &im_expect).complete(192).abs() < c.tol());
    }
}
