//! Validated arbitrary-precision complex values.

use rug::{Complex, Float};
use std::fmt;

use crate::error::{EvalError, Result};
use crate::precision::PrecisionContext;

/// An arbitrary-precision complex number with precision provenance.
///
/// Both parts are guaranteed finite (no NaN or infinity escapes an
/// operation; such cases become [`EvalError::Domain`]), and `bits()` records
/// the mantissa precision in force when the value was created.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexValue {
    value: Complex,
}

impl ComplexValue {
    /// Wrap a raw value computed at working precision, rounding it to the
    /// context's mantissa and rejecting non-finite parts.
    pub fn from_raw(ctx: &PrecisionContext, value: Complex) -> Result<Self> {
        if !value.real().is_finite() || !value.imag().is_finite() {
            return Err(EvalError::Domain(format!(
                "non-finite intermediate result {value}"
            )));
        }
        Ok(Self {
            value: Complex::with_val(ctx.mantissa_bits(), &value),
        })
    }

    /// Build from real and imaginary parts expressible as `f64`.
    pub fn new(ctx: &PrecisionContext, re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(EvalError::Domain(format!("non-finite parts ({re}, {im})")));
        }
        Ok(Self {
            value: Complex::with_val(ctx.mantissa_bits(), (re, im)),
        })
    }

    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    /// Precision the value was computed at.
    pub fn bits(&self) -> u32 {
        self.value.prec().0
    }

    pub fn as_complex(&self) -> &Complex {
        &self.value
    }

    pub fn into_complex(self) -> Complex {
        self.value
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.clone().conj(),
        }
    }

    pub fn abs(&self) -> Float {
        self.value.clone().abs().into_real_imag().0
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl From<ComplexValue> for Complex {
    fn from(v: ComplexValue) -> Complex {
        v.value
    }
}

/// Short human-readable rendering of a point, for error messages.
pub(crate) fn point_label(s: &Complex) -> String {
    format!(
        "{:.6e} + {:.6e}i",
        s.real().to_f64(),
        s.imag().to_f64()
    )
}
