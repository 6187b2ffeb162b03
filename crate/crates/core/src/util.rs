//! Small numeric helpers shared across modules.

use rug::{ops::Pow, Complex, Float};

/// 2^e as a `Float` at precision `prec`.
pub(crate) fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 2).pow(e)
}

/// |z| as a real.
pub(crate) fn cabs(z: &Complex) -> Float {
    z.clone().abs().into_real_imag().0
}

/// Principal argument of z, in (−π, π].
pub(crate) fn carg(z: &Complex) -> Float {
    z.clone().arg().into_real_imag().0
}

/// Wrap an angle difference into (−π, π].
pub(crate) fn wrap_angle(delta: Float) -> Float {
    let prec = delta.prec();
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let two_pi = pi.clone() * 2u32;
    let mut d = delta;
    while d > pi {
        d -= &two_pi;
    }
    let neg_pi = -pi;
    while d <= neg_pi {
        d += &two_pi;
    }
    d
}
