//! Winding numbers of rectangles by adaptive boundary sampling.
//!
//! The boundary is walked counterclockwise; between consecutive samples the
//! argument change must stay below π/2 and the modulus ratio inside [1/2, 2],
//! otherwise the segment is bisected. A sample whose modulus falls below the
//! context's boundary epsilon marks a zero pinching the contour; the
//! deterministic schedule then shifts the offending edge by ±kε and retries,
//! up to eight times.

use rayon::prelude::*;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::{CensusTarget, FRect, Rect, WindingOutcome};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::{cabs, carg, wrap_angle};

/// Hard cap on boundary samples for one edge chunk.
const CHUNK_SAMPLE_BUDGET: usize = 40_000;
/// Initial spacing of samples along an edge, in s-plane units.
const INITIAL_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

#[derive(Debug)]
pub(crate) enum WindError {
    Boundary(Edge, String),
    Fail(EvalError),
}

impl From<EvalError> for WindError {
    fn from(e: EvalError) -> Self {
        WindError::Fail(e)
    }
}

/// (1/2π) Δ_∂rect arg f: zeros minus poles inside, with multiplicity.
pub fn winding_count(
    ctx: &PrecisionContext,
    target: CensusTarget,
    rect: &Rect,
) -> Result<WindingOutcome> {
    let base = rect.to_frect(ctx);
    winding_count_frect(ctx, target, &base)
}

pub(crate) fn winding_count_frect(
    ctx: &PrecisionContext,
    target: CensusTarget,
    base: &FRect,
) -> Result<WindingOutcome> {
    let eps = ctx.perturb_eps();
    let mut fr = base.clone();
    let mut last_edge: Option<Edge> = None;
    let mut last_at = String::new();
    for attempt in 0..=8u32 {
        if attempt > 0 {
            // ±ε, ∓2ε, ... applied to the edge that pinched last.
            let k = attempt.div_ceil(2);
            let sign: i32 = if attempt % 2 == 1 { 1 } else { -1 };
            let delta = eps.clone() * Float::with_val(eps.prec(), k) * sign;
            fr = base.clone();
            match last_edge.unwrap_or(Edge::Top) {
                Edge::Bottom => fr.t0 = (&base.t0 + &delta).complete(base.t0.prec()),
                Edge::Top => fr.t1 = (&base.t1 + &delta).complete(base.t1.prec()),
                Edge::Left => fr.s0 = (&base.s0 + &delta).complete(base.s0.prec()),
                Edge::Right => fr.s1 = (&base.s1 + &delta).complete(base.s1.prec()),
            }
        }
        match winding_once(ctx, target, &fr) {
            Ok(w) => {
                return Ok(WindingOutcome {
                    winding: w,
                    perturbed: attempt > 0,
                    effective_t_max: fr.t1.clone(),
                    effective_t_min: fr.t0.clone(),
                });
            }
            Err(WindError::Boundary(edge, at)) => {
                last_edge = Some(edge);
                last_at = at;
            }
            Err(WindError::Fail(e)) => return Err(e),
        }
    }
    Err(EvalError::BoundaryZero {
        at: format!(
            "rectangle [{}, {}] x [{}, {}] after 8 perturbations (pinch near {last_at})",
            base.s0.to_f64(),
            base.s1.to_f64(),
            base.t0.to_f64(),
            base.t1.to_f64()
        ),
    })
}

pub(crate) fn winding_once(
    ctx: &PrecisionContext,
    target: CensusTarget,
    fr: &FRect,
) -> std::result::Result<i64, WindError> {
    let wp = ctx.work_prec();
    let corners = [
        fr.corner(wp, 0),
        fr.corner(wp, 1),
        fr.corner(wp, 2),
        fr.corner(wp, 3),
    ];
    let edges = [
        (Edge::Bottom, &corners[0], &corners[1]),
        (Edge::Right, &corners[1], &corners[2]),
        (Edge::Top, &corners[2], &corners[3]),
        (Edge::Left, &corners[3], &corners[0]),
    ];

    // Pre-split every edge into unit-sized chunks so the adaptive walks can
    // run in parallel; deltas are summed in traversal order afterwards.
    let mut chunks: Vec<(Edge, Complex, Complex)> = Vec::new();
    for (edge, a, b) in edges {
        let diff = (b - a).complete((wp, wp));
        let len = cabs(&diff).to_f64();
        let pieces = len.ceil().max(1.0) as usize;
        let step = diff / Float::with_val(wp, pieces as u32);
        let mut cur = a.clone();
        for i in 0..pieces {
            let next = if i + 1 == pieces {
                b.clone()
            } else {
                (&cur + &step).complete((wp, wp))
            };
            chunks.push((edge, cur.clone(), next.clone()));
            cur = next;
        }
    }

    let deltas: Vec<std::result::Result<Float, WindError>> = chunks
        .par_iter()
        .map(|(edge, a, b)| edge_delta(ctx, target, *edge, a, b))
        .collect();

    let mut total = Float::with_val(wp, 0);
    for d in deltas {
        total += d?;
    }

    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let turns = (&total / &two_pi).complete(wp).to_f64();
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-3 {
        return Err(WindError::Fail(EvalError::NonConvergence(format!(
            "winding total {turns} is not near an integer"
        ))));
    }
    Ok(rounded as i64)
}

/// Accumulated argument change along one edge chunk.
fn edge_delta(
    ctx: &PrecisionContext,
    target: CensusTarget,
    edge: Edge,
    a: &Complex,
    b: &Complex,
) -> std::result::Result<Float, WindError> {
    let wp = ctx.work_prec();
    let eps_boundary = ctx.boundary_eps();
    // A segment shorter than this pinches a zero: refine no further.
    let min_seg = crate::util::pow2(wp, -((ctx.mantissa_bits() / 3) as i32));

    let eval = |s: &Complex| -> std::result::Result<(Float, Float), WindError> {
        let f = target.eval(ctx, s)?;
        let m = cabs(&f);
        if m < eps_boundary {
            return Err(WindError::Boundary(edge, crate::complex::point_label(s)));
        }
        let arg = carg(&f);
        Ok((m, arg))
    };

    let diff = (b - a).complete((wp, wp));
    let len = cabs(&diff).to_f64();
    // Vertical edges rotate at roughly log(t/2π) per unit height through the
    // gamma factor of the functional equation; the initial spacing must keep
    // the true argument change per step under π or full turns could alias.
    let step0 = if a.real() == b.real() {
        let tmax = a.imag().to_f64().abs().max(b.imag().to_f64().abs());
        let rate = (2.0 + tmax / (2.0 * std::f64::consts::PI)).ln() + 0.7;
        (2.2 / rate).min(INITIAL_STEP)
    } else {
        INITIAL_STEP
    };
    let n0 = (len / step0).ceil().max(1.0) as usize;

    // Initial samples at uniform spacing.
    let mut nodes: Vec<(Complex, Float, Float)> = Vec::with_capacity(n0 + 1);
    let step = diff / Float::with_val(wp, n0 as u32);
    let mut budget = CHUNK_SAMPLE_BUDGET as i64;
    for i in 0..=n0 {
        let s = if i == n0 {
            b.clone()
        } else {
            let offset = (&step * Float::with_val(wp, i as u32)).complete((wp, wp));
            (a + &offset).complete((wp, wp))
        };
        let (m, arg) = eval(&s)?;
        nodes.push((s, m, arg));
        budget -= 1;
    }

    let half_pi = Float::with_val(wp, rug::float::Constant::Pi) / 2u32;
    let ln2 = Float::with_val(wp, rug::float::Constant::Log2);

    let mut total = Float::with_val(wp, 0);
    // Stack of adjacent sample pairs, refined until both step criteria hold.
    for w in nodes.windows(2) {
        let (sa, ma, aa) = &w[0];
        let (sb, mb, ab) = &w[1];
        let mut stack: Vec<(Complex, Float, Float, Complex, Float, Float)> = vec![(
            sa.clone(),
            ma.clone(),
            aa.clone(),
            sb.clone(),
            mb.clone(),
            ab.clone(),
        )];
        while let Some((sa, ma, aa, sb, mb, ab)) = stack.pop() {
            let delta = wrap_angle((&ab - &aa).complete(wp));
            let ratio_ok = (&mb / &ma).complete(wp).ln().abs() < ln2;
            if delta.clone().abs() < half_pi && ratio_ok {
                total += delta;
                continue;
            }
            let seg = cabs(&(&sb - &sa).complete((wp, wp)));
            if seg < min_seg {
                return Err(WindError::Boundary(edge, crate::complex::point_label(&sa)));
            }
            budget -= 1;
            if budget <= 0 {
                return Err(WindError::Fail(EvalError::NonConvergence(format!(
                    "edge sample budget exhausted near {}",
                    crate::complex::point_label(&sa)
                ))));
            }
            let mid = ((&sa + &sb).complete((wp, wp))) / 2u32;
            let (mm, am) = eval(&mid)?;
            // Right half pushed first so the left half is processed first.
            stack.push((mid.clone(), mm.clone(), am.clone(), sb, mb, ab));
            stack.push((sa, ma, aa, mid, mm, am));
        }
    }
    Ok(total)
}
