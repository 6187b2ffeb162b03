//! Working-precision and tolerance policy.

use rug::{ops::Pow, Complex, Float};

use crate::error::{EvalError, Result};

/// Global working precision and the tolerances derived from it.
///
/// Every evaluation takes a context; all tolerance thresholds are powers of
/// two derived deterministically from `mantissa_bits` and `guard_bits`:
///
/// * `tol          = 2^-(mantissa_bits - guard_bits)` — accuracy target of a
///   single operation,
/// * `cmp_tol      = 2^-(mantissa_bits - 2*guard_bits)` — agreement target
///   when two independent routes are compared,
/// * `newton_tol   = 2^-(mantissa_bits - 4*guard_bits)` — zero-localization
///   and pole-detection tolerance,
/// * `boundary_eps = 2^-(mantissa_bits/2)` — minimum |f| tolerated on a
///   census contour,
/// * `perturb_eps  = 2^-(mantissa_bits/4)` — step of the deterministic
///   contour-perturbation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    mantissa_bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    /// Build a context, enforcing `mantissa_bits >= 64`, `guard_bits >= 16`
    /// and `mantissa_bits > 8 * guard_bits`.
    pub fn new(mantissa_bits: u32, guard_bits: u32) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(EvalError::Domain(format!(
                "mantissa_bits = {mantissa_bits} < 64"
            )));
        }
        if guard_bits < 16 {
            return Err(EvalError::Domain(format!("guard_bits = {guard_bits} < 16")));
        }
        if mantissa_bits <= 8 * guard_bits {
            return Err(EvalError::Domain(format!(
                "mantissa_bits = {mantissa_bits} must exceed 8 * guard_bits = {}",
                8 * guard_bits
            )));
        }
        Ok(Self {
            mantissa_bits,
            guard_bits,
        })
    }

    /// Context with the given mantissa size and the default 16 guard bits.
    pub fn with_bits(mantissa_bits: u32) -> Result<Self> {
        Self::new(mantissa_bits, 16)
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Working precision for internal arithmetic: guard bits plus slack for
    /// accumulated rounding in long sums are carried on top of the mantissa.
    pub(crate) fn work_prec(&self) -> u32 {
        self.mantissa_bits + self.guard_bits + 32
    }

    /// `2^-(mantissa_bits - guard_bits)`.
    pub fn tol(&self) -> Float {
        self.pow2(-(self.mantissa_bits as i32 - self.guard_bits as i32))
    }

    /// `2^-(mantissa_bits - 2*guard_bits)`.
    pub fn cmp_tol(&self) -> Float {
        self.pow2(-(self.mantissa_bits as i32 - 2 * self.guard_bits as i32))
    }

    /// `2^-(mantissa_bits - 4*guard_bits)`; strictly positive by the type
    /// invariants.
    pub fn newton_tol(&self) -> Float {
        self.pow2(-(self.mantissa_bits as i32 - 4 * self.guard_bits as i32))
    }

    /// `2^-(mantissa_bits/2)`.
    pub fn boundary_eps(&self) -> Float {
        self.pow2(-((self.mantissa_bits / 2) as i32))
    }

    /// `2^-(mantissa_bits/4)`.
    pub fn perturb_eps(&self) -> Float {
        self.pow2(-((self.mantissa_bits / 4) as i32))
    }

    fn pow2(&self, e: i32) -> Float {
        Float::with_val(self.mantissa_bits, 2).pow(e)
    }

    /// A real number at the context's mantissa precision.
    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.mantissa_bits, value)
    }

    /// A complex number at the context's mantissa precision.
    pub fn complex<T>(&self, value: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.mantissa_bits, value)
    }

}

impl Default for PrecisionContext {
    /// 192-bit mantissa with 16 guard bits: the precision the whole desk-scale
    /// verification suite is tuned for.
    fn default() -> Self {
        Self {
            mantissa_bits: 192,
            guard_bits: 16,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        assert!(PrecisionContext::new(63, 16).is_err());
        assert!(PrecisionContext::new(128, 15).is_err());
        // 8 * 16 = 128: must be strictly greater.
        assert!(PrecisionContext::new(128, 16).is_err());
        assert!(PrecisionContext::new(192, 16).is_ok());
    }

    #[test]
    fn newton_tol_is_deterministic() {
        let ctx = PrecisionContext::new(192, 16).unwrap();
        let expect = Float::with_val(192, 2).pow(-(192i32 - 64));
        assert_eq!(ctx.newton_tol(), expect);
        assert!(ctx.newton_tol() > 0);
    }
}
