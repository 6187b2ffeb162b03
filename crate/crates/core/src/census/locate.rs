//! Zero localization: winding-guided subdivision with Newton polishing.

use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::winding::{winding_count_frect, winding_once, WindError};
use super::{CensusTarget, FRect, Rect};
use crate::complex::{point_label, ComplexValue};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::{cabs, pow2};
use crate::zeta::zeta_derivs_c;

/// A localized zero.
#[derive(Debug, Clone)]
pub struct Zero {
    pub position: ComplexValue,
    pub multiplicity: u32,
    /// |f| at the reported position.
    pub residual: Float,
    pub target: CensusTarget,
}

/// Height of the horizontal slices a tall census rectangle is cut into
/// before subdivision starts; slices are processed in parallel.
const WINDOW_HEIGHT: f64 = 4.0;
/// Largest box handed to Newton directly: a winding-1 box holds exactly one
/// zero, so the iteration may launch from any box size; the inside-the-box
/// acceptance test keeps escapes from miscounting.
const NEWTON_DIAMETER: f64 = 10.0;
const NEWTON_MAX_ITER: usize = 64;

/// All zeros of the target inside the rectangle, each polished by Newton,
/// sorted by increasing Im, ties by increasing Re. Boxes that stall at
/// winding m > 1 at the diameter floor are reported with multiplicity m.
pub fn locate_zeros(
    ctx: &PrecisionContext,
    target: CensusTarget,
    rect: &Rect,
) -> Result<Vec<Zero>> {
    let fr = rect.to_frect(ctx);
    let t_span = fr.t_span().to_f64();
    let windows = if t_span > WINDOW_HEIGHT * 1.5 {
        slice_windows(ctx, target, &fr)?
    } else {
        vec![fr]
    };

    let results: Vec<Result<Vec<Zero>>> = windows
        .par_iter()
        .map(|w| locate_in_window(ctx, target, w))
        .collect();

    let mut zeros = Vec::new();
    for r in results {
        zeros.extend(r?);
    }
    sort_zeros(&mut zeros);
    Ok(zeros)
}

pub(crate) fn sort_zeros(zeros: &mut [Zero]) {
    zeros.sort_by(|a, b| {
        let im = a.position.im().partial_cmp(b.position.im()).unwrap();
        im.then_with(|| a.position.re().partial_cmp(b.position.re()).unwrap())
    });
}

/// Cut a tall rectangle into horizontal windows along shared ordinates,
/// nudging any cut that lands on a zero of the target.
fn slice_windows(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
) -> Result<Vec<FRect>> {
    let prec = fr.t0.prec();
    let wp = ctx.work_prec();
    let span = fr.t_span().to_f64();
    let count = (span / WINDOW_HEIGHT).ceil().max(1.0) as usize;
    let step = fr.t_span() / Float::with_val(prec, count as u32);

    let mut cuts: Vec<Float> = Vec::with_capacity(count + 1);
    cuts.push(fr.t0.clone());
    for i in 1..count {
        let raw = fr.t0.clone() + &step * Float::with_val(prec, i as u32);
        cuts.push(clean_cut(ctx, target, fr, raw, wp)?);
    }
    cuts.push(fr.t1.clone());

    Ok(cuts
        .windows(2)
        .map(|w| FRect {
            s0: fr.s0.clone(),
            s1: fr.s1.clone(),
            t0: w[0].clone(),
            t1: w[1].clone(),
        })
        .collect())
}

/// Scan a horizontal cut coarsely; shift it by the deterministic schedule
/// while any sample modulus is below the boundary epsilon.
fn clean_cut(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
    raw: Float,
    wp: u32,
) -> Result<Float> {
    let eps_boundary = ctx.boundary_eps();
    let eps = ctx.perturb_eps();
    let samples = (fr.sigma_span().to_f64() / 0.5).ceil().max(2.0) as usize;
    'attempts: for attempt in 0..=8u32 {
        let t = if attempt == 0 {
            raw.clone()
        } else {
            let k = attempt.div_ceil(2);
            let sign: i32 = if attempt % 2 == 1 { 1 } else { -1 };
            raw.clone() + eps.clone() * Float::with_val(eps.prec(), k) * sign
        };
        for i in 0..=samples {
            let frac = Float::with_val(wp, i as u32) / Float::with_val(wp, samples as u32);
            let sigma = fr.s0.clone() + fr.sigma_span() * frac;
            let s = Complex::with_val(wp, (&sigma, &t));
            let f = target.eval(ctx, &s)?;
            if cabs(&f) < eps_boundary {
                continue 'attempts;
            }
        }
        return Ok(t);
    }
    Err(EvalError::BoundaryZero {
        at: format!("window cut near t = {}", raw.to_f64()),
    })
}

fn locate_in_window(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
) -> Result<Vec<Zero>> {
    let outcome = winding_count_frect(ctx, target, fr)?;
    let mut fr_used = fr.clone();
    fr_used.t0 = outcome.effective_t_min.clone();
    fr_used.t1 = outcome.effective_t_max.clone();
    if outcome.winding < 0 {
        return Err(EvalError::Domain(format!(
            "window [{}, {}] contains poles; zero localization undefined",
            fr.t0.to_f64(),
            fr.t1.to_f64()
        )));
    }
    let mut out = Vec::new();
    subdivide(ctx, target, &fr_used, outcome.winding as u32, 0, &mut out)?;
    // Cross-check the full window winding against the localized total; this
    // is the net that catches any inferred-sibling walk error.
    let found: u32 = out.iter().map(|z| z.multiplicity).sum();
    if found as i64 != outcome.winding {
        return Err(EvalError::NonConvergence(format!(
            "window [{}, {}]: located {} zeros but winding is {}",
            fr.t0.to_f64(),
            fr.t1.to_f64(),
            found,
            outcome.winding
        )));
    }
    Ok(out)
}

/// Recursive winding-guided subdivision. `w` is the known winding of `fr`.
fn subdivide(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
    w: u32,
    depth: usize,
    out: &mut Vec<Zero>,
) -> Result<()> {
    if w == 0 {
        return Ok(());
    }
    if depth > 160 {
        return Err(EvalError::NonConvergence(format!(
            "subdivision depth exhausted near {}",
            point_label(&fr.center(ctx.work_prec()))
        )));
    }
    let diam = fr.diameter_f64();
    if w == 1 && diam <= NEWTON_DIAMETER {
        if let Some(zero) = newton_polish(ctx, target, fr)? {
            out.push(zero);
            return Ok(());
        }
    }
    let floor = 2f64.powi(-((ctx.mantissa_bits() / 8) as i32));
    if diam < floor {
        // Stalled at the diameter floor: report the cluster with its winding
        // as the multiplicity, never split heuristically.
        let wp = ctx.work_prec();
        let center = fr.center(wp);
        let f = target.eval(ctx, &center)?;
        out.push(Zero {
            position: ComplexValue::from_raw(ctx, center)?,
            multiplicity: w,
            residual: Float::with_val(ctx.mantissa_bits(), cabs(&f)),
            target,
        });
        return Ok(());
    }

    let (a, b) = split(ctx, target, fr, w)?;
    let (fra, wa) = a;
    let (frb, wb) = b;
    subdivide(ctx, target, &fra, wa, depth + 1, out)?;
    subdivide(ctx, target, &frb, wb, depth + 1, out)?;
    Ok(())
}

/// Split the longer side of the rectangle, with the deterministic schedule
/// nudging the split line off any zero, and verify winding additivity.
#[allow(clippy::type_complexity)]
fn split(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
    w: u32,
) -> Result<((FRect, u32), (FRect, u32))> {
    let prec = fr.s0.prec();
    let split_t = fr.t_span() >= fr.sigma_span();
    let span = if split_t { fr.t_span() } else { fr.sigma_span() };
    let eps = ctx.perturb_eps();

    for attempt in 0..=8u32 {
        let frac = if attempt == 0 {
            Float::with_val(prec, 0.5)
        } else {
            let k = attempt.div_ceil(2);
            let sign: i32 = if attempt % 2 == 1 { 1 } else { -1 };
            Float::with_val(prec, 0.5) + eps.clone() * Float::with_val(prec, k) * sign
        };
        let offset = (&span * &frac).complete(prec);
        let (fra, frb) = if split_t {
            let cut = (&fr.t0 + &offset).complete(prec);
            (
                FRect { s0: fr.s0.clone(), s1: fr.s1.clone(), t0: fr.t0.clone(), t1: cut.clone() },
                FRect { s0: fr.s0.clone(), s1: fr.s1.clone(), t0: cut, t1: fr.t1.clone() },
            )
        } else {
            let cut = (&fr.s0 + &offset).complete(prec);
            (
                FRect { s0: fr.s0.clone(), s1: cut.clone(), t0: fr.t0.clone(), t1: fr.t1.clone() },
                FRect { s0: cut, s1: fr.s1.clone(), t0: fr.t0.clone(), t1: fr.t1.clone() },
            )
        };

        // Walk only the first child; the sibling's winding follows by
        // additivity. The window-level sum check catches any walk error.
        let wa = match winding_once(ctx, target, &fra) {
            Ok(v) => v,
            Err(WindError::Boundary(..)) => continue,
            Err(WindError::Fail(e)) => return Err(e),
        };
        if wa < 0 || wa as u32 > w {
            return Err(EvalError::NonConvergence(format!(
                "child winding {} outside [0, {}] at {}",
                wa,
                w,
                point_label(&fr.center(ctx.work_prec())),
            )));
        }
        let wb = w - wa as u32;
        return Ok(((fra, wa as u32), (frb, wb)));
    }
    Err(EvalError::BoundaryZero {
        at: format!("split line of {}", point_label(&fr.center(ctx.work_prec()))),
    })
}

/// f and f' for the Newton step. For ζ the derivative rides along in the
/// same Euler–Maclaurin pass; for ζ'' it is a 5-point finite-difference
/// stencil of ζ'' at step 2^-(mantissa_bits/3), accurate far beyond what the
/// quadratically convergent iteration needs.
fn newton_f_fp(
    ctx: &PrecisionContext,
    target: CensusTarget,
    z: &Complex,
    reuse_fp: Option<&Complex>,
) -> Result<(Complex, Complex)> {
    let wp = ctx.work_prec();
    match target {
        CensusTarget::Zeta => {
            let d = zeta_derivs_c(ctx, z, 1)?;
            Ok((d[0].clone(), d[1].clone()))
        }
        CensusTarget::ZetaSecond => {
            let f = zeta_derivs_c(ctx, z, 2)?[2].clone();
            if let Some(fp) = reuse_fp {
                return Ok((f, fp.clone()));
            }
            let h = pow2(wp, -((ctx.mantissa_bits() / 3) as i32));
            let at = |k: i32| -> Result<Complex> {
                let dz = Complex::with_val(wp, (h.clone() * k, Float::with_val(wp, 0)));
                let s = (z + &dz).complete((wp, wp));
                Ok(zeta_derivs_c(ctx, &s, 2)?[2].clone())
            };
            let fm2 = at(-2)?;
            let fm1 = at(-1)?;
            let fp1 = at(1)?;
            let fp2 = at(2)?;
            // (f(-2h) - 8 f(-h) + 8 f(h) - f(2h)) / (12 h)
            let mut num = (&fm2 - &fp2).complete((wp, wp));
            num += ((&fp1 - &fm1).complete((wp, wp))) * 8u32;
            let den = h.clone() * 12u32;
            Ok((f, num / den))
        }
        _ => Err(EvalError::Domain(
            "zero localization is defined for zeta and zeta'' only".into(),
        )),
    }
}

/// Newton iteration from the box center; `None` means stall (caller keeps
/// subdividing).
fn newton_polish(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
) -> Result<Option<Zero>> {
    let wp = ctx.work_prec();
    let tol = ctx.newton_tol();
    let mut z = fr.center(wp);
    // The sought zero lies inside the box, at most half a diameter from the
    // start; anything drifting further is heading for a neighbor.
    let escape = fr.diameter_f64() * 0.75 + 0.5;
    let center = fr.center(wp);

    let mut fp_cache: Option<Complex> = None;
    let mut converged = false;
    for iter in 0..NEWTON_MAX_ITER {
        // The finite-difference derivative is frozen between refreshes: the
        // iteration stays superlinear while paying one stencil per refresh.
        if iter % 6 == 0 {
            fp_cache = None;
        }
        let (f, fp) = match newton_f_fp(ctx, target, &z, fp_cache.as_ref()) {
            Ok(v) => v,
            Err(EvalError::Pole { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if cabs(&fp) < pow2(wp, -((ctx.mantissa_bits() / 2) as i32)) {
            return Ok(None); // derivative collapse: likely a cluster
        }
        fp_cache = Some(fp.clone());
        let mut dz = (&f / &fp).complete((wp, wp));
        // Damping: a start near a saddle (between close zero pairs) takes a
        // wild first step; clamping keeps the iterate in the right basin.
        let cap = Float::with_val(wp, fr.diameter_f64() * 0.35 + 0.05);
        let raw_step = cabs(&dz);
        if raw_step > cap {
            let scale = (&cap / &raw_step).complete(wp);
            dz *= &scale;
        }
        let step = cabs(&dz);
        z -= &dz;
        let drift = cabs(&(&z - &center).complete((wp, wp))).to_f64();
        if drift > escape {
            return Ok(None);
        }
        let scale = cabs(&z).max(&Float::with_val(wp, 1));
        if step < (&tol * &scale).complete(wp) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(None);
    }
    if !fr.contains(&z) {
        return Ok(None); // converged into a neighbor box; that box reports it
    }
    // Zero-quality gate: |f| < newton_tol * max(1, |f'|).
    let (f, fp) = newton_f_fp(ctx, target, &z, fp_cache.as_ref())?;
    let quality = (ctx.newton_tol() * cabs(&fp).max(&Float::with_val(wp, 1))).min(&Float::with_val(wp, 1));
    let residual = cabs(&f);
    if residual > quality {
        return Ok(None);
    }
    Ok(Some(Zero {
        position: ComplexValue::from_raw(ctx, z)?,
        multiplicity: 1,
        residual: Float::with_val(ctx.mantissa_bits(), residual),
        target,
    }))
}
