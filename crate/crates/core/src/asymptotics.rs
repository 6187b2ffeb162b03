//! Closed-form main terms and right-hand sides of the counting and
//! distribution formulas, the logarithmic integral, and assembly of census
//! rows comparing them against the argument-principle measurements.

use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::Float;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::census::{
    arg_continuous_at, count_nk_banded, locate_zeta2_upto, sum_partial, CensusTarget,
};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;

/// One census grid row: counts, sums, main terms, residuals, arguments.
#[derive(Debug, Clone)]
pub struct CensusRow {
    pub t: f64,
    pub n2_count: i64,
    pub n2_main: Float,
    pub n2_residual: Float,
    pub s2_sum: Float,
    pub s2_rhs: Float,
    pub s2_residual: Float,
    pub arg_zeta_half: Float,
    pub arg_g2_half: Float,
    /// Semicolon-separated diagnostic tokens (empty when clean):
    /// `t_perturbed`, `left_pair`, `count_mismatch`.
    pub flags: String,
}

// ---------------------------------------------------------------------------
// Gauss-Legendre machinery for Li
// ---------------------------------------------------------------------------

const GL_POINTS: usize = 48;

/// Nodes and weights of one quadrature rule.
type GlRule = Arc<(Vec<Float>, Vec<Float>)>;

fn gl_cache() -> &'static Mutex<HashMap<(usize, u32), GlRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), GlRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_n and P_n' at x, by the three-term recurrence.
fn legendre_pair(n: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        // k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
        let mut p2 = (x * &p1).complete(prec) * Float::with_val(prec, (2 * k - 1) as u32);
        p2 -= p0.clone() * Float::with_val(prec, (k - 1) as u32);
        p2 /= Float::with_val(prec, k as u32);
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = ((x * &p1).complete(prec) - &p0) * Float::with_val(prec, n as u32);
    let den = (x.clone().square()) - Float::with_val(prec, 1);
    (p1, num / den)
}

/// Nodes and weights of n-point Gauss-Legendre on [-1, 1] at precision prec.
fn gl_rule(n: usize, prec: u32) -> GlRule {
    if let Some(r) = gl_cache().lock().unwrap().get(&(n, prec)) {
        return Arc::clone(r);
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        // Tricomi-style initial guess, then Newton to full precision.
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(prec, guess);
        for _ in 0..64 {
            let (p, dp) = legendre_pair(n, &x, prec);
            let dx = p / dp;
            x -= &dx;
            if dx.abs() < crate::util::pow2(prec, -(prec as i32) + 8) {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, &x, prec);
        // w = 2 / ((1 - x^2) P_n'(x)^2)
        let w = Float::with_val(prec, 2)
            / ((Float::with_val(prec, 1) - x.clone().square()) * dp.square());
        nodes.push(x);
        weights.push(w);
    }
    let arc = Arc::new((nodes, weights));
    gl_cache()
        .lock()
        .unwrap()
        .insert((n, prec), Arc::clone(&arc));
    arc
}

/// ∫_a^b dt / log t by composite Gauss-Legendre with the given panel count.
fn li_panels(a: &Float, b: &Float, panels: usize, prec: u32) -> Float {
    let rule = gl_rule(GL_POINTS, prec);
    let (nodes, weights) = (&rule.0, &rule.1);
    let width = ((b - a).complete(prec)) / Float::with_val(prec, panels as u32);
    let mut acc = Float::with_val(prec, 0);
    for p in 0..panels {
        let lo = a.clone() + width.clone() * Float::with_val(prec, p as u32);
        let half = width.clone() / 2u32;
        let mid = (&lo + &half).complete(prec);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let t = mid.clone() + (&half * x).complete(prec);
            let val = t.ln().recip();
            acc += val * w * &half;
        }
    }
    acc
}

/// Li(x) = ∫_2^x dt / log t; exactly 0 at x = 2. Relative error target 2^-64,
/// achieved by panel doubling until two refinements agree.
pub fn li_from2(ctx: &PrecisionContext, x: f64) -> Result<Float> {
    if x < 2.0 {
        return Err(EvalError::Domain(format!("Li is defined for x >= 2, got {x}")));
    }
    let prec = ctx.work_prec().max(160);
    let a = Float::with_val(prec, 2);
    let b = Float::with_val(prec, x);
    if x == 2.0 {
        return Ok(Float::with_val(ctx.mantissa_bits(), 0));
    }
    let mut panels = ((x.ln() - 2f64.ln()).ceil() as usize).max(1);
    let mut prev = li_panels(&a, &b, panels, prec);
    let target = crate::util::pow2(prec, -70);
    for _ in 0..24 {
        panels *= 2;
        let cur = li_panels(&a, &b, panels, prec);
        let diff = ((&cur - &prev).complete(prec)).abs();
        let scale = cur.clone().abs().max(&Float::with_val(prec, 1e-30));
        if diff < (&scale * &target).complete(prec) {
            return Ok(Float::with_val(ctx.mantissa_bits(), cur));
        }
        prev = cur;
    }
    Err(EvalError::Precision(
        "logarithmic integral refinement did not stabilize".into(),
    ))
}

// ---------------------------------------------------------------------------
// Main terms and right-hand sides
// ---------------------------------------------------------------------------

/// (T/2π) log(T/4π) − T/2π: the shared main term of the zero-counting
/// formulas for every derivative order k >= 1.
pub fn main_term_nk(ctx: &PrecisionContext, t: f64) -> Result<Float> {
    if !(t > 0.0) {
        return Err(EvalError::Domain(format!("main term requires T > 0, got {t}")));
    }
    let wp = ctx.work_prec();
    let tt = Float::with_val(wp, t);
    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let over = (&tt / &two_pi).complete(wp);
    let log_part = ((&tt / &two_pi).complete(wp) / 2u32).ln();
    let out = (&over * &log_part).complete(wp) - &over;
    Ok(Float::with_val(ctx.mantissa_bits(), out))
}

/// Right-hand side of the displacement-sum formula for the k-th derivative:
/// (kT/2π) loglog(T/2π) + (1/2π)(log2/2 − k loglog2) T − k Li(T/2π).
///
/// Defined for T >= 4π: below that the Li term's argument drops under the
/// integral's lower limit 2 and the expression is surfaced as a domain error
/// rather than extrapolated.
pub fn distribution_rhs(ctx: &PrecisionContext, k: u32, t: f64) -> Result<Float> {
    if k == 0 {
        return Err(EvalError::Domain("the distribution sum starts at k = 1".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    if !(t > two_pi) {
        return Err(EvalError::Domain(format!(
            "distribution right-hand side requires T > 2π, got {t}"
        )));
    }
    if t / two_pi < 2.0 {
        return Err(EvalError::Domain(format!(
            "Li(T/2π) undefined: T/2π = {} < 2",
            t / two_pi
        )));
    }
    let wp = ctx.work_prec();
    let tt = Float::with_val(wp, t);
    let two_pi_f = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let x = (&tt / &two_pi_f).complete(wp);
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);
    let loglog2 = ln2.clone().ln(); // negative
    let kk = Float::with_val(wp, k);

    let mut out = (&x * &kk).complete(wp) * x.clone().ln().ln();
    out += ((ln2 / 2u32) - (&kk * &loglog2).complete(wp)) * &tt / &two_pi_f;
    let li = li_from2(ctx, x.to_f64())?;
    out -= (&kk * &li).complete(wp);
    Ok(Float::with_val(ctx.mantissa_bits(), out))
}

/// Main terms of the short-window displacement sum over (T, T+U]:
/// (2U/2π) loglog(T/2π) + (1/2π)(log2/2 − 2 loglog2) U.
pub fn window_rhs(ctx: &PrecisionContext, t: f64, u: f64) -> Result<Float> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if !(u > 0.0 && u < t) {
        return Err(EvalError::Domain(format!(
            "window requires 0 < U < T, got U = {u}, T = {t}"
        )));
    }
    if !(t > two_pi) {
        return Err(EvalError::Domain(format!("window requires T > 2π, got {t}")));
    }
    let wp = ctx.work_prec();
    let tt = Float::with_val(wp, t);
    let uu = Float::with_val(wp, u);
    let two_pi_f = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);
    let loglog2 = ln2.clone().ln();

    let loglog = ((&tt / &two_pi_f).complete(wp)).ln().ln();
    let mut out = ((&uu * 2u32).complete(wp) / &two_pi_f) * loglog;
    out += ((ln2 / 2u32) - loglog2 * 2u32) * &uu / &two_pi_f;
    Ok(Float::with_val(ctx.mantissa_bits(), out))
}

/// Error-term shapes of the short-window formula, reported separately from
/// the main terms: ((loglog T)^2, U^2/(T log T)).
pub fn window_error_shapes(ctx: &PrecisionContext, t: f64, u: f64) -> (Float, Float) {
    let p = ctx.mantissa_bits();
    let lnln = Float::with_val(p, t).ln().ln();
    let shape1 = lnln.square();
    let shape2 = Float::with_val(p, u).square() / (Float::with_val(p, t) * Float::with_val(p, t).ln());
    (shape1, shape2)
}

// ---------------------------------------------------------------------------
// Census assembly
// ---------------------------------------------------------------------------

/// One row per grid ordinate: winding-based counts, localized displacement
/// sums, closed-form main terms, and the two continuous arguments at 1/2.
///
/// Counts come from band windings stacked cumulatively; zeros come from an
/// independent localization pass. The two routes are compared and any
/// mismatch is flagged on the row rather than silently reconciled.
pub fn build_census(ctx: &PrecisionContext, t_grid: &[f64]) -> Result<Vec<CensusRow>> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    for w in t_grid.windows(2) {
        if w[0] >= w[1] {
            return Err(EvalError::Domain("census grid must be ascending".into()));
        }
    }
    if t_grid[0] <= two_pi {
        return Err(EvalError::Domain(format!(
            "census grid must start above 2π, got {}",
            t_grid[0]
        )));
    }

    // Counts by cumulative band windings (sequential because each band's
    // bottom edge is the previous band's effective top edge).
    let bands = count_nk_banded(ctx, 2, t_grid)?;

    // Zero table up to the last effective ordinate, localized independently.
    let t_top = bands.last().unwrap().effective_t.to_f64();
    let zeros = locate_zeta2_upto(ctx, t_top)?;

    let rows: Vec<Result<CensusRow>> = t_grid
        .par_iter()
        .zip(bands.par_iter())
        .map(|(&t, band)| {
            let teff = band.effective_t.clone();
            let n2_count = band.count;
            let n2_main = main_term_nk(ctx, t)?;
            let (s2_sum, located_count, has_left_pair) = sum_partial(ctx, &zeros, &teff);
            let s2_rhs = distribution_rhs(ctx, 2, t)?;

            let arg_zeta_half = arg_continuous_at(ctx, CensusTarget::Zeta, &teff, 0.5)?;
            let arg_g2_half = arg_continuous_at(ctx, CensusTarget::G2, &teff, 0.5)?;

            let p = ctx.mantissa_bits();
            let n2_residual = Float::with_val(p, n2_count) - &n2_main;
            let s2_residual = (&s2_sum - &s2_rhs).complete(p);

            let mut flags: Vec<&str> = Vec::new();
            if band.perturbed {
                flags.push("t_perturbed");
            }
            if has_left_pair {
                flags.push("left_pair");
            }
            if located_count != n2_count {
                flags.push("count_mismatch");
            }

            Ok(CensusRow {
                t,
                n2_count,
                n2_main,
                n2_residual,
                s2_sum,
                s2_rhs,
                s2_residual,
                arg_zeta_half,
                arg_g2_half,
                flags: flags.join(";"),
            })
        })
        .collect();

    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn li_at_two_is_zero() {
        assert_eq!(li_from2(&ctx(), 2.0).unwrap(), 0);
    }

    #[test]
    fn li_monotone() {
        let c = ctx();
        let l10 = li_from2(&c, 10.0).unwrap();
        let l100 = li_from2(&c, 100.0).unwrap();
        assert!(l100 > l10);
        assert!(l10 > 0);
    }

    #[test]
    fn li_domain_error() {
        assert!(matches!(
            li_from2(&ctx(), 1.5),
            Err(EvalError::Domain(_))
        ));
    }

    #[test]
    fn main_term_zero_at_4pi_e() {
        // T = 4πe makes log(T/4π) = 1, so the expression vanishes.
        let c = ctx();
        let t = 4.0 * std::f64::consts::PI * std::f64::consts::E;
        let m = main_term_nk(&c, t).unwrap();
        assert!(m.to_f64().abs() < 1e-12, "main term at 4πe: {}", m.to_f64());
    }

    #[test]
    fn main_term_increasing_past_4pi() {
        let c = ctx();
        let mut prev = main_term_nk(&c, 4.0 * std::f64::consts::PI + 0.5).unwrap();
        for i in 1..40 {
            let t = 4.0 * std::f64::consts::PI + 0.5 + i as f64;
            let cur = main_term_nk(&c, t).unwrap();
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn distribution_rhs_matches_f64_recomputation() {
        let c = ctx();
        for (k, t) in [(1u32, 300.0), (2, 700.0), (3, 1000.0)] {
            let v = distribution_rhs(&c, k, t).unwrap().to_f64();
            let two_pi = 2.0 * std::f64::consts::PI;
            let x = t / two_pi;
            let li = li_from2(&c, x).unwrap().to_f64();
            let expect = k as f64 * x * x.ln().ln()
                + (0.5 * 2f64.ln() - k as f64 * 2f64.ln().ln()) * t / two_pi
                - k as f64 * li;
            assert!(
                (v - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                "k={k} T={t}: {v} vs {expect}"
            );
        }
    }

    #[test]
    fn distribution_rhs_domain_gap() {
        // Between 2π and 4π the Li term is undefined under its own
        // definition; the gap is surfaced, not extrapolated.
        let c = ctx();
        assert!(distribution_rhs(&c, 2, 10.0).is_err());
        assert!(distribution_rhs(&c, 2, 4.0 * std::f64::consts::PI + 0.001).is_ok());
    }

    #[test]
    fn rhs_is_affine_in_k() {
        // rhs(k+1) - rhs(k) is independent of k.
        let c = ctx();
        let t = 500.0;
        let r1 = distribution_rhs(&c, 1, t).unwrap();
        let r2 = distribution_rhs(&c, 2, t).unwrap();
        let r3 = distribution_rhs(&c, 3, t).unwrap();
        let d21 = (r2.clone() - &r1).to_f64();
        let d32 = (r3 - &r2).to_f64();
        assert!((d21 - d32).abs() < 1e-20, "{d21} vs {d32}");
    }

    #[test]
    fn window_rhs_linear_in_u() {
        let c = ctx();
        let t = 1000.0;
        let w1 = window_rhs(&c, t, 1.0).unwrap().to_f64();
        let w2 = window_rhs(&c, t, 2.0).unwrap().to_f64();
        let w4 = window_rhs(&c, t, 4.0).unwrap().to_f64();
        assert!((w2 - 2.0 * w1).abs() < 1e-12);
        assert!((w4 - 4.0 * w1).abs() < 1e-12);
    }

    #[test]
    fn window_rhs_matches_f64_recomputation() {
        let c = ctx();
        let (t, u) = (1000.0, 500.0);
        let v = window_rhs(&c, t, u).unwrap().to_f64();
        let two_pi = 2.0 * std::f64::consts::PI;
        let expect = 2.0 * u / two_pi * (t / two_pi).ln().ln()
            + (0.5 * 2f64.ln() - 2.0 * 2f64.ln().ln()) * u / two_pi;
        assert!((v - expect).abs() < 1e-9 * expect.abs());
    }
}
