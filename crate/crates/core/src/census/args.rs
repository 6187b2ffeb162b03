//! Continuous argument along horizontal segments, seeded where the target
//! is close to 1 so the branch is pinned by the Dirichlet tail.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::CensusTarget;
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::{cabs, carg, wrap_angle};

/// A continuous-argument trace along σ at fixed height.
#[derive(Debug, Clone)]
pub struct ArgTrace {
    /// (σ, continuous arg) samples, ordered by decreasing σ.
    pub samples: Vec<(Float, Float)>,
    /// Σ |Δ arg| over the accepted steps.
    pub total_variation: Float,
    /// True when every accepted step had |Δ arg| < π/2.
    pub branch_consistent: bool,
    /// Height actually traced (after any automatic perturbation of T).
    pub effective_t: Float,
}

impl ArgTrace {
    /// Continuous argument at the final (smallest σ) sample.
    pub fn arg_at_stop(&self) -> Float {
        self.samples.last().map(|(_, a)| a.clone()).unwrap()
    }

    /// Continuous argument at the first landing at or below the given σ.
    pub fn arg_at_sigma(&self, sigma: f64) -> Option<Float> {
        self.samples
            .iter()
            .find(|(s, _)| (s.to_f64() - sigma).abs() < 1e-12)
            .map(|(_, a)| a.clone())
    }
}

const MAX_TRACE_SAMPLES: usize = 200_000;

/// Continuous argument of the target along the horizontal segment from
/// σ_start = max(40, sigma_stop + 10) down to `sigma_stop` at height T,
/// seeded with the principal argument at σ_start (within 0.01 of 0 there).
pub fn arg_continuous(
    ctx: &PrecisionContext,
    target: CensusTarget,
    t: f64,
    sigma_stop: f64,
) -> Result<ArgTrace> {
    if !(t >= 2.0) {
        return Err(EvalError::Domain(format!(
            "argument tracking requires T >= 2, got {t}"
        )));
    }
    arg_trace_landing(ctx, target, &ctx.float(t), sigma_stop, &[])
}

/// As `arg_continuous`, but guaranteeing samples exactly at the requested
/// landing abscissas (used by the audits and the census assembly).
pub(crate) fn arg_trace_landing(
    ctx: &PrecisionContext,
    target: CensusTarget,
    t: &Float,
    sigma_stop: f64,
    landings: &[f64],
) -> Result<ArgTrace> {
    let eps = ctx.perturb_eps();
    let mut last_at: Option<String> = None;
    for attempt in 0..=8u32 {
        let teff = if attempt == 0 {
            t.clone()
        } else {
            let k = attempt.div_ceil(2);
            let sign: i32 = if attempt % 2 == 1 { 1 } else { -1 };
            t.clone() + eps.clone() * Float::with_val(eps.prec(), k) * sign
        };
        match trace_once(ctx, target, &teff, sigma_stop, landings) {
            Ok(tr) => return Ok(tr),
            Err(TraceError::Boundary(at)) => last_at = Some(at),
            Err(TraceError::Fail(e)) => return Err(e),
        }
    }
    Err(EvalError::BoundaryZero {
        at: format!(
            "horizontal segment at t = {} after 8 perturbations{}",
            t.to_f64(),
            last_at.map_or(String::new(), |a| format!(" (pinch near {a})"))
        ),
    })
}

enum TraceError {
    Boundary(String),
    Fail(EvalError),
}

impl From<EvalError> for TraceError {
    fn from(e: EvalError) -> Self {
        TraceError::Fail(e)
    }
}

fn trace_once(
    ctx: &PrecisionContext,
    target: CensusTarget,
    t: &Float,
    sigma_stop: f64,
    landings: &[f64],
) -> std::result::Result<ArgTrace, TraceError> {
    let wp = ctx.work_prec();
    let eps_boundary = ctx.boundary_eps();
    let sigma_start = (sigma_stop + 10.0).max(40.0);

    // Descending landing list: requested abscissas plus the stop.
    let mut marks: Vec<f64> = landings
        .iter()
        .copied()
        .filter(|x| *x > sigma_stop && *x < sigma_start)
        .collect();
    marks.push(sigma_stop);
    marks.sort_by(|a, b| b.partial_cmp(a).unwrap());
    marks.dedup();

    let eval = |sigma: &Float| -> std::result::Result<(Float, Float), TraceError> {
        let s = Complex::with_val(wp, (sigma, t));
        let f = target.eval(ctx, &s)?;
        let m = cabs(&f);
        if m < eps_boundary {
            return Err(TraceError::Boundary(crate::complex::point_label(&s)));
        }
        Ok((m, carg(&f)))
    };

    let half_pi = Float::with_val(wp, rug::float::Constant::Pi) / 2u32;
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);

    let mut sigma = Float::with_val(wp, sigma_start);
    let (mut prev_mag, seed) = eval(&sigma)?;
    if seed.clone().abs().to_f64() >= 0.01 {
        return Err(TraceError::Fail(EvalError::Precision(format!(
            "seed argument {} at sigma = {sigma_start} is not near 0",
            seed.to_f64()
        ))));
    }

    let mut samples: Vec<(Float, Float)> = Vec::new();
    let mut cum = seed.clone();
    let mut prev_arg = seed;
    samples.push((sigma.clone(), cum.clone()));

    let mut total_variation = Float::with_val(wp, 0);
    let branch_consistent = true;
    let mut count = 0usize;
    let min_step = 2f64.powi(-((ctx.mantissa_bits() / 3) as i32));

    for mark in marks {
        let mark_f = Float::with_val(wp, mark);
        let mut h = 0.5f64;
        while sigma > mark_f {
            let mut step = h.min((sigma.to_f64() - mark).max(0.0));
            if step <= 0.0 {
                break;
            }
            loop {
                count += 1;
                if count > MAX_TRACE_SAMPLES {
                    return Err(TraceError::Fail(EvalError::NonConvergence(
                        "argument trace sample budget exhausted".into(),
                    )));
                }
                let next = sigma.clone() - Float::with_val(wp, step);
                let next = if next < mark_f { mark_f.clone() } else { next };
                let (m, arg) = eval(&next)?;
                let delta = wrap_angle((&arg - &prev_arg).complete(wp));
                let ratio_ok = (&m / &prev_mag).complete(wp).ln().abs() < ln2;
                if delta.clone().abs() < half_pi && ratio_ok {
                    cum += &delta;
                    total_variation += delta.abs();
                    sigma = next;
                    prev_arg = arg;
                    prev_mag = m;
                    h = (step * 1.5).min(0.5);
                    break;
                }
                step /= 2.0;
                if step < min_step {
                    return Err(TraceError::Boundary(format!(
                        "stalled near sigma = {}",
                        sigma.to_f64()
                    )));
                }
            }
        }
        samples.push((sigma.clone(), cum.clone()));
    }

    Ok(ArgTrace {
        samples,
        total_variation,
        branch_consistent,
        effective_t: t.clone(),
    })
}
