//! Independent oracles used by the integration tests. Everything here is
//! deliberately built from first principles (products, partial sums, finite
//! differences, bisection, grid scans) so it shares no code path with the
//! implementation it checks.

#![allow(dead_code)]

use rug::ops::CompleteRound;
use rug::{Complex, Float};
use zeta2::precision::PrecisionContext;
use zeta2::zeta::{zeta_deriv, DerivOrder};
use zeta2::ComplexValue;

pub fn cval(ctx: &PrecisionContext, re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(ctx, re, im).unwrap()
}

pub fn cabs(z: &Complex) -> Float {
    z.clone().abs().into_real_imag().0
}

/// Relative distance |a − b| / max(1, |b|).
pub fn rel_err(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0;
    let diff = cabs(&(a - b).complete((prec, prec)));
    let scale = cabs(b).max(&Float::with_val(prec, 1));
    (diff / scale).to_f64()
}

// ---------------------------------------------------------------------------
// Gamma product oracle
// ---------------------------------------------------------------------------

/// Euler's product Γ(s) = lim n! n^s / (s(s+1)...(s+n)), truncated at a
/// given n. Error is Θ(1/n); callers extrapolate.
fn gamma_product_raw(prec: u32, s: &Complex, n: u64) -> Complex {
    let mut log_fact = Float::with_val(prec, 0);
    for k in 2..=n {
        log_fact += Float::with_val(prec, k).ln();
    }
    let n_f = Float::with_val(prec, n);
    let num = (s * &n_f.ln()).complete((prec, prec)) + &log_fact;
    let mut denom_log = Complex::with_val(prec, 0);
    for k in 0..=n {
        denom_log += (s + Float::with_val(prec, k)).complete((prec, prec)).ln();
    }
    (num - denom_log).exp()
}

/// Γ(s) by the product with two Richardson levels: the 1/n and 1/n² error
/// terms are cancelled, leaving roughly 1/n³.
pub fn gamma_product_oracle(prec: u32, s: &Complex, n: u64) -> (Complex, f64) {
    let p1 = gamma_product_raw(prec, s, n);
    let p2 = gamma_product_raw(prec, s, 2 * n);
    let p4 = gamma_product_raw(prec, s, 4 * n);
    let r1 = (p2.clone() * 2u32) - &p1; // kills 1/n
    let r2 = (p4.clone() * 2u32) - &p2;
    let extrap = ((r2.clone() * 4u32) - &r1) / 3u32; // kills 1/n^2
    // Error estimate: the difference of the last two Richardson levels.
    let est = rel_err(&r2, &extrap).max(1.0 / (n as f64).powi(3));
    (extrap, est * 8.0)
}

// ---------------------------------------------------------------------------
// Euler-Mascheroni partial-sum oracle
// ---------------------------------------------------------------------------

/// γ from H_n − log n with two Richardson levels in n.
pub fn euler_gamma_oracle(prec: u32, n: u64) -> (Float, f64) {
    let h = |m: u64| -> Float {
        let mut acc = Float::with_val(prec, 0);
        for k in 1..=m {
            acc += Float::with_val(prec, k).recip();
        }
        acc - Float::with_val(prec, m).ln()
    };
    let p1 = h(n);
    let p2 = h(2 * n);
    let p4 = h(4 * n);
    // H_n − log n = γ + 1/(2n) − 1/(12n²) + …
    let r1 = (p2.clone() * 2u32) - &p1;
    let r2 = (p4.clone() * 2u32) - &p2;
    let extrap = ((r2.clone() * 4u32) - &r1) / 3u32;
    let est = ((r2 - &extrap).abs().to_f64()).max(1.0 / (n as f64).powi(3));
    (extrap, est * 8.0)
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central difference (f(s+h) − f(s−h)) / 2h.
pub fn central_diff(
    prec: u32,
    f: impl Fn(&Complex) -> Complex,
    s: &Complex,
    h: f64,
) -> Complex {
    let hh = Float::with_val(prec, h);
    let sp = (s + &hh).complete((prec, prec));
    let sm = (s - &hh).complete((prec, prec));
    let num = f(&sp) - f(&sm);
    num / (hh * 2u32)
}

/// Five-point first-derivative stencil with step h.
pub fn five_point_diff(
    prec: u32,
    f: impl Fn(&Complex) -> Complex,
    s: &Complex,
    h: f64,
) -> Complex {
    let hh = Float::with_val(prec, h);
    let at = |k: i32| -> Complex {
        let d = hh.clone() * k;
        f(&(s + &d).complete((prec, prec)))
    };
    let mut num = at(-2) - at(2);
    num += (at(1) - at(-1)) * 8u32;
    num / (hh * 12u32)
}

// ---------------------------------------------------------------------------
// Hardy-style real rotation of zeta on the critical line
// ---------------------------------------------------------------------------

/// ξ(1/2 + it) as a real number: (1/2) s(s−1) π^{−s/2} Γ(s/2) ζ(s) is real
/// on the critical line, entire, and shares its zeros with ζ there.
pub fn xi_real(ctx: &PrecisionContext, t: f64) -> Float {
    let p = ctx.mantissa_bits();
    let s = ComplexValue::new(ctx, 0.5, t).unwrap();
    let z = zeta_deriv(ctx, DerivOrder::ZETA, &s).unwrap();
    let half_s = ComplexValue::new(ctx, 0.25, t / 2.0).unwrap();
    let g = zeta2::special::gamma(ctx, &half_s).unwrap();
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let sc = s.as_complex();
    let mut acc = (sc * &(sc - &Complex::with_val(p, 1)).complete((p, p))).complete((p, p));
    acc /= 2u32;
    let exp_term = (-(sc * &pi.ln()).complete((p, p)) / 2u32).exp();
    acc *= &exp_term;
    acc *= g.as_complex();
    acc *= z.as_complex();
    acc.into_real_imag().0
}

/// Ordinates of the zeros of ζ on the critical line inside [lo, hi], by sign
/// changes of ξ(1/2+it) on a scan grid followed by bisection.
pub fn bisection_ordinates(ctx: &PrecisionContext, lo: f64, hi: f64, scan_step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = lo;
    let mut prev = xi_real(ctx, t);
    while t < hi {
        let t_next = (t + scan_step).min(hi);
        let cur = xi_real(ctx, t_next);
        if prev.is_sign_negative() != cur.is_sign_negative() {
            let mut a = t;
            let mut b = t_next;
            let mut fa = prev.clone();
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = xi_real(ctx, m);
                if fa.is_sign_negative() != fm.is_sign_negative() {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
                if b - a < 1e-12 {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = cur;
        t = t_next;
    }
    out
}

/// Riemann-Siegel theta: Im log Γ(1/4 + it/2) − (t/2) log π, on the standard
/// continuous branch.
pub fn rs_theta(ctx: &PrecisionContext, t: f64) -> Float {
    let p = ctx.mantissa_bits();
    let s = ComplexValue::new(ctx, 0.25, t / 2.0).unwrap();
    let lg = zeta2::special::ln_gamma(ctx, &s).unwrap();
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    lg.im().clone() - Float::with_val(p, t / 2.0) * pi.ln()
}

// ---------------------------------------------------------------------------
// Grid-scan zero oracle for zeta''
// ---------------------------------------------------------------------------

/// Zeros of ζ'' in a rectangle by dense minimum-modulus scanning plus an
/// independent Newton with finite-difference derivatives (144-bit context:
/// the nearest valid precision to a plain 128-bit mantissa under the guard
/// policy).
pub fn grid_scan_zeta2_zeros(
    lo_sigma: f64,
    hi_sigma: f64,
    lo_t: f64,
    hi_t: f64,
    step: f64,
) -> Vec<(f64, f64)> {
    let ctx = PrecisionContext::with_bits(144).unwrap();
    let p = ctx.mantissa_bits();
    let f = |s: &Complex| -> Complex {
        let v = ComplexValue::from_raw(&ctx, s.clone()).unwrap();
        zeta_deriv(&ctx, DerivOrder::SECOND, &v).unwrap().into_complex()
    };

    // Scan for local minima of |f| below a loose threshold.
    let ns = ((hi_sigma - lo_sigma) / step).round() as usize;
    let nt = ((hi_t - lo_t) / step).round() as usize;
    let mut mags = vec![vec![0f64; nt + 1]; ns + 1];
    for (i, row) in mags.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let s = Complex::with_val(p, (lo_sigma + i as f64 * step, lo_t + j as f64 * step));
            *cell = cabs(&f(&s)).to_f64();
        }
    }
    let mut seeds = Vec::new();
    for i in 1..ns {
        for j in 1..nt {
            let m = mags[i][j];
            if m < mags[i - 1][j]
                && m < mags[i + 1][j]
                && m < mags[i][j - 1]
                && m < mags[i][j + 1]
                && m < 6.0 * step
            {
                seeds.push((lo_sigma + i as f64 * step, lo_t + j as f64 * step));
            }
        }
    }

    // Newton refinement with a plain central-difference derivative.
    let mut zeros: Vec<(f64, f64)> = Vec::new();
    for (sx, sy) in seeds {
        let mut z = Complex::with_val(p, (sx, sy));
        let mut ok = false;
        for _ in 0..60 {
            let fv = f(&z);
            let fp = central_diff(p, f, &z, 1e-12);
            if cabs(&fp).to_f64() < 1e-20 {
                break;
            }
            let dz = fv / fp;
            let step_len = cabs(&dz).to_f64();
            z -= &dz;
            if step_len < 1e-18 {
                ok = true;
                break;
            }
            if step_len > 2.0 {
                break;
            }
        }
        if !ok {
            continue;
        }
        let (re, im) = (z.real().to_f64(), z.imag().to_f64());
        if re < lo_sigma || re > hi_sigma || im < lo_t || im > hi_t {
            continue;
        }
        if zeros
            .iter()
            .all(|&(a, b)| (a - re).abs() + (b - im).abs() > 1e-6)
        {
            zeros.push((re, im));
        }
    }
    zeros.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.partial_cmp(&b.0).unwrap()));
    zeros
}

// ---------------------------------------------------------------------------
// Composite Simpson quadrature for the logarithmic integral
// ---------------------------------------------------------------------------

/// ∫_2^x dt/log t by composite Simpson with the given panel count.
pub fn simpson_li(prec: u32, x: f64, panels: usize) -> Float {
    let a = Float::with_val(prec, 2);
    let b = Float::with_val(prec, x);
    let h = (&b - &a).complete(prec) / Float::with_val(prec, panels as u32);
    let g = |t: &Float| -> Float { t.clone().ln().recip() };
    let mut acc = g(&a) + g(&b);
    for i in 1..panels {
        let t = a.clone() + h.clone() * Float::with_val(prec, i as u32);
        let w = if i % 2 == 1 { 4u32 } else { 2u32 };
        acc += g(&t) * w;
    }
    acc * h / 3u32
}

// ---------------------------------------------------------------------------
// Independent von Mangoldt via trial division
// ---------------------------------------------------------------------------

pub fn lambda_f64(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 0u64;
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            p = d;
            while m.is_multiple_of(d) {
                m /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some(n); // n prime
    }
    if m == 1 {
        Some(p)
    } else {
        None
    }
}
