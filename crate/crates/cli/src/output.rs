//! Deterministic serialization: one fixed decimal rendering shared by the
//! CSV and JSON writers so both formats carry identical numeric content.

use rug::Float;

/// Render a real number as a decimal with up to 25 significant digits,
/// trailing zeros trimmed. The same string feeds both output formats.
pub fn fmt_real(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    // rug renders "d.dddde±xx"-style strings with the requested digit count.
    let raw = x.to_string_radix(10, Some(25));
    normalize(&raw)
}

fn normalize(raw: &str) -> String {
    let (mant, exp) = match raw.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (raw.to_string(), 0),
    };
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = mant.find('.').map_or(mant.len(), |p| p) - usize::from(neg);
    // Value = 0.digits * 10^(point + exp) in rug's convention the mantissa
    // has one digit before the point: value = digits * 10^(exp - (len-point)).
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        return "0".to_string();
    }
    let sci_exp = exp + point as i64 - 1; // exponent with one leading digit
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-4..=20).contains(&sci_exp) {
        // Plain notation.
        if sci_exp >= 0 {
            let ip = sci_exp as usize + 1;
            if digits.len() <= ip {
                out.push_str(digits);
                out.push_str(&"0".repeat(ip - digits.len()));
            } else {
                out.push_str(&digits[..ip]);
                out.push('.');
                out.push_str(&digits[ip..]);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-sci_exp - 1) as usize));
            out.push_str(digits);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&sci_exp.to_string());
    }
    out
}

/// A table of rows with a fixed header, rendered as CSV or JSON.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row.iter())
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }
}
