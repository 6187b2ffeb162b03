//! Bernoulli numbers, cached as exact rationals.

use rug::{Integer, Rational};
use std::sync::{Mutex, OnceLock};

/// Cache of B_0, B_1, B_2, ... (all indices; odd ones > 1 are zero).
/// Extended on demand under the lock; readers receive clones of the exact
/// rationals, so the cache stays consistent under concurrent use.
fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Exact Bernoulli number B_n (B_1 = -1/2 convention).
///
/// Uses the defining recurrence B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k.
pub fn bernoulli(n: usize) -> Rational {
    let mut cache = cache().lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        if m % 2 == 1 && m > 1 {
            cache.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (k, b) in cache.iter().enumerate() {
            if b.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let binom = Integer::from(m as u32 + 1).binomial(k as u32);
            acc += b.clone() * binom;
        }
        acc /= -Rational::from(m as u32 + 1);
        cache.push(acc);
    }
    cache[n].clone()
}

/// B_{2j} as a `Float` at the given precision, cached per (index, precision).
pub fn bernoulli_float(two_j: usize, prec: u32) -> rug::Float {
    use std::collections::HashMap;
    static FCACHE: OnceLock<Mutex<HashMap<(usize, u32), rug::Float>>> = OnceLock::new();
    let cache = FCACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(two_j, prec)) {
        return f.clone();
    }
    let b = bernoulli(two_j);
    let f = rug::Float::with_val(prec, &b);
    cache.lock().unwrap().insert((two_j, prec), f.clone());
    f
}
