//! ζ(s), ζ'(s), ζ''(s) anywhere off s = 1 via Euler–Maclaurin summation,
//! the direct Dirichlet series for Re(s) > 1.5, the von Mangoldt function,
//! and the logarithmic-derivative ratios ζ'/ζ, ζ''/ζ', ζ''/ζ.
//!
//! The Euler–Maclaurin evaluator differentiates every structural term
//! analytically, so one pass yields ζ up to ζ'' from a shared table of
//! powers n^(−s). Powers are built multiplicatively: an exponential is paid
//! only at primes, composites are one complex multiplication.

use rug::ops::{CompleteRound, Pow};
use rug::{Assign, Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::bernoulli::bernoulli_float;
use crate::complex::{point_label, ComplexValue};
use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;
use crate::util::{cabs, pow2};

/// Derivative order. Orders 0..=2 are valid anywhere off s = 1; higher
/// orders are accepted only in the half-plane of absolute convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivOrder(u32);

impl DerivOrder {
    pub const ZETA: DerivOrder = DerivOrder(0);
    pub const FIRST: DerivOrder = DerivOrder(1);
    pub const SECOND: DerivOrder = DerivOrder(2);

    pub fn new(k: u32) -> Self {
        DerivOrder(k)
    }

    pub fn k(&self) -> u32 {
        self.0
    }
}

/// Which logarithmic-derivative ratio to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// ζ'/ζ
    ZpOverZ,
    /// ζ''/ζ'
    ZppOverZp,
    /// ζ''/ζ
    ZppOverZ,
}

// ---------------------------------------------------------------------------
// Shared tables: smallest prime factor sieve and natural logs.
// ---------------------------------------------------------------------------

fn spf_store() -> &'static RwLock<Arc<Vec<u32>>> {
    static STORE: OnceLock<RwLock<Arc<Vec<u32>>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(Arc::new(build_spf(1 << 16))))
}

fn build_spf(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Smallest-prime-factor table covering at least `n`.
fn spf_table(n: usize) -> Arc<Vec<u32>> {
    {
        let guard = spf_store().read().unwrap();
        if guard.len() > n {
            return Arc::clone(&guard);
        }
    }
    let mut guard = spf_store().write().unwrap();
    if guard.len() <= n {
        let size = n.next_power_of_two().max(1 << 16);
        *guard = Arc::new(build_spf(size));
    }
    Arc::clone(&guard)
}

fn ln_store() -> &'static RwLock<HashMap<u32, Arc<Vec<Float>>>> {
    static STORE: OnceLock<RwLock<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Table of ln 0 (placeholder), ln 1, …, ln n at precision `prec`.
fn ln_table(prec: u32, n: usize) -> Arc<Vec<Float>> {
    {
        let guard = ln_store().read().unwrap();
        if let Some(t) = guard.get(&prec) {
            if t.len() > n {
                return Arc::clone(t);
            }
        }
    }
    let mut guard = ln_store().write().unwrap();
    let existing = guard.get(&prec).cloned();
    let have = existing.as_ref().map_or(0, |t| t.len());
    if have > n {
        return Arc::clone(existing.as_ref().unwrap());
    }
    let target = (n + 1).next_power_of_two().max(1 << 10);
    let mut v = Vec::with_capacity(target);
    if let Some(old) = existing {
        v.extend(old.iter().cloned());
    } else {
        v.push(Float::with_val(prec, 0));
        v.push(Float::with_val(prec, 0));
    }
    for m in v.len()..target {
        v.push(Float::with_val(prec, m as u64).ln());
    }
    let arc = Arc::new(v);
    guard.insert(prec, Arc::clone(&arc));
    arc
}

// ---------------------------------------------------------------------------
// Power table n^{-s}
// ---------------------------------------------------------------------------

/// n^{-s} for n = 0..=nmax (index 0 unused). Multiplicative build: primes pay
/// one complex exp, composites one complex multiplication.
fn pow_table(wp: u32, s: &Complex, nmax: usize, lns: &[Float]) -> Vec<Complex> {
    let spf = spf_table(nmax);
    let mut table = Vec::with_capacity(nmax + 1);
    table.push(Complex::with_val(wp, 1));
    if nmax >= 1 {
        table.push(Complex::with_val(wp, 1));
    }
    for n in 2..=nmax {
        let p = spf[n] as usize;
        if p == n {
            let e = (-(s * &lns[n]).complete((wp, wp))).exp();
            table.push(e);
        } else {
            let v = (&table[p] * &table[n / p]).complete((wp, wp));
            table.push(v);
        }
    }
    table
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin evaluation of zeta and its first two derivatives
// ---------------------------------------------------------------------------

const EM_N_MAX: usize = 1 << 22;
const EM_TABLE_MAX: usize = 1 << 17;
const EM_J_MAX: usize = 512;

/// Number of Euler-Maclaurin evaluations since process start (diagnostics).
pub fn em_eval_count() -> u64 {
    EM_EVALS.load(std::sync::atomic::Ordering::Relaxed)
}
static EM_EVALS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// ζ, ζ', ζ'' at s in one pass (orders above `kmax` are left at zero).
pub(crate) fn zeta_derivs_c(
    ctx: &PrecisionContext,
    s: &Complex,
    kmax: usize,
) -> Result<[Complex; 3]> {
    debug_assert!(kmax <= 2);
    let one = Complex::with_val(s.prec(), 1);
    let dist = cabs(&(s - &one).complete(s.prec()));
    if dist < ctx.newton_tol() {
        return Err(EvalError::Pole { at: point_label(s) });
    }

    EM_EVALS.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let mut wp = ctx.work_prec();
    for _round in 0..4 {
        match em_attempt(ctx, s, kmax, wp)? {
            EmOutcome::Done(v) => return Ok(v),
            EmOutcome::NeedPrecision(deficit) => {
                wp += deficit.max(32);
            }
        }
    }
    Err(EvalError::Precision(format!(
        "Euler-Maclaurin rounding floor not met at {}",
        point_label(s)
    )))
}

enum EmOutcome {
    Done([Complex; 3]),
    NeedPrecision(u32),
}

fn em_attempt(
    ctx: &PrecisionContext,
    s0: &Complex,
    kmax: usize,
    wp: u32,
) -> Result<EmOutcome> {
    let s = Complex::with_val(wp, s0);
    let sigma = s.real().to_f64();
    let abs_im = s.imag().to_f64().abs();

    let bits = ctx.mantissa_bits();
    // Truncation point: the Bernoulli terms decay like (|s+2j|/2πN)^2 per
    // term, so N = |t|/2 + bits/4 keeps ~3.3 bits/term of decay while the
    // partial sum stays half the length of the classical |t|-sized cut.
    let mut n = ((0.5 * abs_im).ceil() as usize + (bits as usize) / 4).max(20);

    'n_loop: loop {
        if n > EM_N_MAX {
            return Err(EvalError::Precision(format!(
                "Euler-Maclaurin truncation point exceeded {EM_N_MAX} at {}",
                point_label(&s)
            )));
        }

        let lns = ln_table(wp, n + 1);
        let mut acc = [
            Complex::with_val(wp, 0),
            Complex::with_val(wp, 0),
            Complex::with_val(wp, 0),
        ];
        // Track the largest magnitude ever added per order: the rounding
        // floor of the final sum is this scale times 2^-wp per operation.
        let mut peak = [Float::with_val(wp, 0), Float::with_val(wp, 0), Float::with_val(wp, 0)];

        // Partial sum over n < N.
        if n - 1 <= EM_TABLE_MAX {
            let table = pow_table(wp, &s, n - 1, &lns);
            let mut tmp = Complex::with_val(wp, 0);
            for m in 1..n {
                acc[0] += &table[m];
                if kmax >= 1 {
                    tmp.assign(&table[m]);
                    tmp *= &lns[m];
                    acc[1] -= &tmp;
                    if kmax >= 2 {
                        tmp *= &lns[m];
                        acc[2] += &tmp;
                    }
                }
            }
            // Peak magnitude of partial-sum terms: n^{-sigma} is monotone.
            let extreme = if sigma >= 0.0 { 1usize } else { n - 1 };
            let base = cabs(&table[extreme]);
            let lnn = lns[n - 1].to_f64().max(1.0);
            for (k, slot) in peak.iter_mut().enumerate().take(kmax + 1) {
                *slot = base.clone() * Float::with_val(wp, lnn.powi(k as i32));
            }
        } else {
            // Streaming fallback for enormous truncation points.
            let mut tmp = Complex::with_val(wp, 0);
            for m in 1..n {
                let lnm = Float::with_val(wp, m as u64).ln();
                let pw = (-(&s * &lnm).complete((wp, wp))).exp();
                acc[0] += &pw;
                if kmax >= 1 {
                    tmp.assign(&pw);
                    tmp *= &lnm;
                    acc[1] -= &tmp;
                    if kmax >= 2 {
                        tmp *= &lnm;
                        acc[2] += &tmp;
                    }
                }
            }
            let base = Float::with_val(wp, (n - 1) as u64)
                .pow(Float::with_val(wp, -sigma))
                .max(&Float::with_val(wp, 1));
            let lnn = ((n - 1) as f64).ln().max(1.0);
            for (k, slot) in peak.iter_mut().enumerate().take(kmax + 1) {
                *slot = base.clone() * Float::with_val(wp, lnn.powi(k as i32));
            }
        }

        let ln_n = lns[n].clone();
        let npow = (-(&s * &ln_n).complete((wp, wp))).exp(); // N^{-s}
        let n1pow = (&npow * Float::with_val(wp, n as u64)).complete((wp, wp)); // N^{1-s}
        let sm1 = (&s - &Complex::with_val(wp, 1)).complete((wp, wp));
        let sm1_inv = sm1.recip();

        // Integral tail N^{1-s}/(s-1) and its derivatives.
        let u0 = (&n1pow * &sm1_inv).complete((wp, wp));
        let v1 = (&u0 * &sm1_inv).complete((wp, wp)); // N^{1-s}/(s-1)^2
        let v2 = (&v1 * &sm1_inv).complete((wp, wp)); // N^{1-s}/(s-1)^3
        acc[0] += &u0;
        if kmax >= 1 {
            let u1 = -((&u0 * &ln_n).complete((wp, wp))) - &v1;
            acc[1] += &u1;
            note_peak(&mut peak[1], &u1);
            if kmax >= 2 {
                let mut u2 = (&u0 * &ln_n).complete((wp, wp));
                u2 *= &ln_n;
                u2 += (&v1 * &ln_n).complete((wp, wp)) * 2u32;
                u2 += v2.clone() * 2u32;
                acc[2] += &u2;
                note_peak(&mut peak[2], &u2);
            }
        }
        note_peak(&mut peak[0], &u0);

        // Half term N^{-s}/2 and derivatives.
        let h0 = (&npow / 2u32).complete((wp, wp));
        acc[0] += &h0;
        if kmax >= 1 {
            let h1 = -((&h0 * &ln_n).complete((wp, wp)));
            acc[1] += &h1;
            if kmax >= 2 {
                let h2 = -((&h1 * &ln_n).complete((wp, wp)));
                acc[2] += &h2;
            }
        }

        // Bernoulli corrections.
        let conv_target = pow2(wp, -((bits + ctx.guard_bits()) as i32));
        let floor_target = pow2(wp, -(wp as i32) + 4);
        let ninv2 = Float::with_val(wp, n as u64).square().recip();
        let mut q = (&npow / Float::with_val(wp, n as u64)).complete((wp, wp)); // N^{-s-1}
        let mut p = s.clone(); // Pochhammer product s(s+1)...(s+2j-2)
        let mut p1 = Complex::with_val(wp, 1);
        let mut p2 = Complex::with_val(wp, 0);
        let mut fact = Float::with_val(wp, 2); // (2j)!
        let mut prev_mag = Float::with_val(wp, f64::INFINITY);

        let mut j = 1usize;
        loop {
            if j > EM_J_MAX {
                n *= 2;
                continue 'n_loop;
            }
            let b = bernoulli_float(2 * j, wp);
            let c = (&b / &fact).complete(wp);

            let t0 = (&p * &q).complete((wp, wp)) * &c;
            let mut worst = cabs(&t0);
            acc[0] += &t0;
            note_peak(&mut peak[0], &t0);
            if kmax >= 1 {
                let d1 = -((&p * &ln_n).complete((wp, wp))) + &p1;
                let t1 = (&d1 * &q).complete((wp, wp)) * &c;
                worst = worst.max(&cabs(&t1));
                acc[1] += &t1;
                note_peak(&mut peak[1], &t1);
                if kmax >= 2 {
                    let mut d2 = (&p * &ln_n).complete((wp, wp));
                    d2 *= &ln_n;
                    d2 -= (&p1 * &ln_n).complete((wp, wp)) * 2u32;
                    d2 += &p2;
                    let t2 = (&d2 * &q).complete((wp, wp)) * &c;
                    worst = worst.max(&cabs(&t2));
                    acc[2] += &t2;
                    note_peak(&mut peak[2], &t2);
                }
            }

            // Validity factor |s+2j+1| / (sigma+2j+1) for the a-priori bound.
            let vf = {
                let num = cabs(&(&s + Float::with_val(wp, (2 * j + 1) as u32)).complete((wp, wp)));
                let den = (sigma + 2.0 * j as f64 + 1.0).max(1.0);
                num / Float::with_val(wp, den)
            };
            let bounded = (&worst * &vf).complete(wp) * 4u32;

            let mut converged = true;
            for k in 0..=kmax {
                let scale = cabs(&acc[k]).max(&Float::with_val(wp, 1e-300));
                let rel_ok = bounded.clone() <= (&scale * &conv_target).complete(wp);
                let floor_ok = bounded.clone() <= (&peak[k] * &floor_target).complete(wp);
                if !(rel_ok || floor_ok) {
                    converged = false;
                    break;
                }
            }
            if converged && sigma + 2.0 * j as f64 + 1.0 > 1.0 {
                break;
            }
            if worst > prev_mag && !converged {
                n *= 2;
                continue 'n_loop;
            }
            prev_mag = worst;

            // Advance to j+1.
            let a1 = (&s + Float::with_val(wp, (2 * j - 1) as u32)).complete((wp, wp));
            let a2 = (&s + Float::with_val(wp, (2 * j) as u32)).complete((wp, wp));
            for a in [a1, a2] {
                let new_p2 = (&p2 * &a).complete((wp, wp)) + p1.clone() * 2u32;
                let new_p1 = (&p1 * &a).complete((wp, wp)) + &p;
                p = (&p * &a).complete((wp, wp));
                p1 = new_p1;
                p2 = new_p2;
            }
            fact *= Float::with_val(wp, ((2 * j + 1) * (2 * j + 2)) as u64);
            q *= &ninv2;
            j += 1;
        }

        // Rounding-floor check: the summation loses at most ~count ops of
        // 2^-wp relative to the peak magnitude; require that to sit below
        // the tolerance relative to the final value.
        let ops = Float::with_val(wp, (n + 64) as u64);
        let tol = pow2(wp, -((bits + ctx.guard_bits() / 2) as i32));
        for k in 0..=kmax {
            let floor = (&peak[k] * &ops).complete(wp) * pow2(wp, -(wp as i32));
            let need = cabs(&acc[k]) * &tol;
            if floor > need && need.is_finite() {
                let deficit = ((floor / need).log2().to_f64().ceil() as i64).max(32) as u32;
                return Ok(EmOutcome::NeedPrecision(deficit));
            }
        }

        for v in acc.iter() {
            if !v.real().is_finite() || !v.imag().is_finite() {
                return Err(EvalError::Domain(format!(
                    "non-finite zeta evaluation at {}",
                    point_label(&s)
                )));
            }
        }
        return Ok(EmOutcome::Done(acc));
    }
}

fn note_peak(peak: &mut Float, term: &Complex) {
    let m = cabs(term);
    if m > *peak {
        *peak = m;
    }
}

/// ζ^(k)(s). Orders 0..=2 are evaluated by Euler–Maclaurin anywhere off
/// s = 1; higher orders only for Re(s) > 1.5 by the Dirichlet series.
pub fn zeta_deriv(
    ctx: &PrecisionContext,
    order: DerivOrder,
    s: &ComplexValue,
) -> Result<ComplexValue> {
    let k = order.k();
    if k <= 2 {
        let v = zeta_derivs_c(ctx, s.as_complex(), k as usize)?;
        ComplexValue::from_raw(ctx, v[k as usize].clone())
    } else {
        if s.re().to_f64() <= 1.5 {
            return Err(EvalError::Domain(format!(
                "derivative order {k} supported only for Re(s) > 1.5"
            )));
        }
        let v = zeta_series_c(ctx, k as usize, s.as_complex())?;
        ComplexValue::from_raw(ctx, v)
    }
}

/// Direct Dirichlet summation of ζ^(k)(s) = Σ (−log n)^k n^{−s}, Re(s) > 1.5.
pub(crate) fn zeta_series_c(ctx: &PrecisionContext, k: usize, s: &Complex) -> Result<Complex> {
    let wp = ctx.work_prec();
    let sigma = s.real().to_f64();
    if sigma <= 1.5 {
        return Err(EvalError::Domain(format!(
            "Dirichlet series requires Re(s) > 1.5, got {sigma}"
        )));
    }
    let s = Complex::with_val(wp, s);
    let tol = pow2(wp, -((ctx.mantissa_bits() + ctx.guard_bits()) as i32));

    let mut n: usize = 64;
    loop {
        if n > EM_TABLE_MAX {
            return Err(EvalError::Precision(format!(
                "Dirichlet tail bound not met within N = {EM_TABLE_MAX} at {}",
                point_label(&s)
            )));
        }
        // Tail bound: integral of (log x)^k x^{-sigma} from N, valid once
        // (sigma-1) log N >= 2k. Compare in log2 to dodge f64 underflow.
        let ln_n = (n as f64).ln();
        if (sigma - 1.0) * ln_n >= (2 * k.max(1)) as f64 {
            let bound_log2 = (2.0 * ln_n.powi(k as i32) / (sigma - 1.0)).log2()
                + (1.0 - sigma) * (n as f64).log2();
            let tol_log2 = tol.get_exp().unwrap_or(i32::MIN) as f64;
            if bound_log2 < tol_log2 - 2.0 {
                let lns = ln_table(wp, n + 1);
                let table = pow_table(wp, &s, n, &lns);
                let mut acc = Complex::with_val(wp, 0);
                let mut tmp = Complex::with_val(wp, 0);
                for m in 1..=n {
                    tmp.assign(&table[m]);
                    for _ in 0..k {
                        tmp *= &lns[m];
                    }
                    if k % 2 == 1 {
                        acc -= &tmp;
                    } else {
                        acc += &tmp;
                    }
                }
                return Ok(acc);
            }
        }
        n *= 2;
    }
}

// ---------------------------------------------------------------------------
// von Mangoldt and the Lambda-series ratios
// ---------------------------------------------------------------------------

/// Base prime when n = p^m, else None.
pub(crate) fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let spf = spf_table(n as usize);
    let p = spf[n as usize] as u64;
    let mut m = n;
    while m > 1 {
        if !m.is_multiple_of(p) {
            return None;
        }
        m /= p;
    }
    Some(p)
}

/// Λ(n): log p when n = p^m, else 0. The log is taken at the context's
/// mantissa precision.
pub fn von_mangoldt(ctx: &PrecisionContext, n: u64) -> Float {
    match prime_power_base(n) {
        Some(p) => Float::with_val(ctx.mantissa_bits(), p).ln(),
        None => Float::with_val(ctx.mantissa_bits(), 0),
    }
}

const LAMBDA_N_MAX: usize = 1 << 19;

/// ζ'/ζ and ζ''/ζ at `s` in one pass: the Λ-series when it can meet the
/// tolerance in the half-plane of absolute convergence, otherwise the
/// quotient of Euler–Maclaurin evaluations.
pub(crate) fn ratios_at(ctx: &PrecisionContext, s: &Complex) -> Result<(Complex, Complex)> {
    let wp = ctx.work_prec();
    let sigma = s.real().to_f64();
    if sigma > 1.5 {
        if let Some(n) = lambda_series_cutoff(ctx, sigma) {
            return lambda_series(ctx, s, n);
        }
    }
    // Quotient route.
    let d = zeta_derivs_c(ctx, s, 2)?;
    let scale = cabs(&d[1]).max(&cabs(&d[2])).max(&Float::with_val(wp, 1));
    if cabs(&d[0]) < ctx.newton_tol() * scale {
        return Err(EvalError::DenominatorZero { at: point_label(s) });
    }
    let zinv = d[0].clone().recip();
    let zp_z = (&d[1] * &zinv).complete((wp, wp));
    let zpp_z = (&d[2] * &zinv).complete((wp, wp));
    Ok((zp_z, zpp_z))
}

/// Smallest power-of-two N for which the Λ-series tail bound meets the
/// context tolerance, if any within the cap.
fn lambda_series_cutoff(ctx: &PrecisionContext, sigma: f64) -> Option<usize> {
    // Tail of |Σ_{n>N} Λ(n) (log n)^a n^{-s}| <= 2 (log N)^{a+1} N^{1-sigma}/(sigma-1)
    // for a <= 2, compared against the tolerance relative to the leading term
    // log2 * 2^-sigma. All in log2 arithmetic (the raw values underflow f64).
    let tol_log2 = -((ctx.mantissa_bits() + ctx.guard_bits()) as f64);
    let lead_log2 = std::f64::consts::LN_2.log2() - sigma;
    let mut n = 1024usize;
    while n <= LAMBDA_N_MAX {
        let ln_n = (n as f64).ln();
        let bound_log2 =
            (2.0 * ln_n.powi(3) / (sigma - 1.0)).log2() + (1.0 - sigma) * (n as f64).log2();
        if bound_log2 < tol_log2 + lead_log2 {
            return Some(n);
        }
        n *= 2;
    }
    None
}

/// Σ Λ(n) n^{-s} and Σ Λ(n) log n · n^{-s} over prime powers n <= N,
/// assembled into (ζ'/ζ, ζ''/ζ).
fn lambda_series(ctx: &PrecisionContext, s: &Complex, nmax: usize) -> Result<(Complex, Complex)> {
    let wp = ctx.work_prec();
    let s = Complex::with_val(wp, s);
    let lns = ln_table(wp, nmax + 1);
    let spf = spf_table(nmax);
    let mut s1 = Complex::with_val(wp, 0); // Σ Λ(n) n^{-s}
    let mut s2 = Complex::with_val(wp, 0); // Σ Λ(n) log n n^{-s}
    let mut tmp = Complex::with_val(wp, 0);
    for n in 2..=nmax {
        let p = spf[n] as usize;
        // prime power iff n = p^m: strip factors of p
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m != 1 {
            continue;
        }
        let e = (-(&s * &lns[n]).complete((wp, wp))).exp();
        tmp.assign(&e);
        tmp *= &lns[p];
        s1 += &tmp;
        tmp *= &lns[n];
        s2 += &tmp;
    }
    // ζ'/ζ = -S1; ζ''/ζ = S2 + S1^2
    let zp_z = -s1.clone();
    let zpp_z = s1.square() + &s2;
    Ok((zp_z, zpp_z))
}

/// Logarithmic-derivative ratio of the requested kind at `s`.
pub fn log_deriv_ratio(
    ctx: &PrecisionContext,
    kind: RatioKind,
    s: &ComplexValue,
) -> Result<ComplexValue> {
    let v = log_deriv_ratio_c(ctx, kind, s.as_complex())?;
    ComplexValue::from_raw(ctx, v)
}

pub(crate) fn log_deriv_ratio_c(
    ctx: &PrecisionContext,
    kind: RatioKind,
    s: &Complex,
) -> Result<Complex> {
    let wp = ctx.work_prec();
    match kind {
        RatioKind::ZpOverZ => Ok(ratios_at(ctx, s)?.0),
        RatioKind::ZppOverZ => Ok(ratios_at(ctx, s)?.1),
        RatioKind::ZppOverZp => {
            let (zp_z, zpp_z) = ratios_at(ctx, s)?;
            if cabs(&zp_z) < ctx.newton_tol() * cabs(&zpp_z).max(&Float::with_val(wp, 1)) {
                return Err(EvalError::DenominatorZero { at: point_label(s) });
            }
            Ok((&zpp_z / &zp_z).complete((wp, wp)))
        }
    }
}
