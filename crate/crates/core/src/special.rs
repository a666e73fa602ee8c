//! Half-integer Gamma values, factorials, and the Riemann zeta function at
//! integer arguments.
//!
//! Everything here reduces to finite products or geometrically convergent
//! series; no general special-function approximations are used.

use crate::error::{Error, Result};

/// Largest `r` for which factorial-based closed forms are evaluated.
pub const MAX_R: usize = 20;

/// n! as an f64 product.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Γ(n + 1/2) = √π · ∏_{k=1}^{n} (2k−1)/2 for integer n ≥ 0.
pub fn gamma_half_integer(n: usize) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    (1..=n).fold(sqrt_pi, |acc, k| acc * (2 * k - 1) as f64 / 2.0)
}

/// Binomial coefficient as f64.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Riemann zeta at integer s ≥ 3 by direct summation.
///
/// The tail after K terms is below K^{1−s}/(s−1); K is chosen so the tail is
/// under 1e-15. Results are cached per argument since K grows large for
/// small s (about 2·10^7 terms at s = 3).
pub fn zeta_int(s: usize) -> Result<f64> {
    if s < 3 {
        return Err(Error::InvalidParameter(format!(
            "zeta requires integer argument >= 3, got {s}"
        )));
    }
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: Mutex<Option<HashMap<usize, f64>>> = Mutex::new(None);

    let mut guard = CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(&v) = cache.get(&s) {
        return Ok(v);
    }
    // Solve K^{1-s}/(s-1) < 1e-15 for K.
    let k_max = (1e15 / (s as f64 - 1.0)).powf(1.0 / (s as f64 - 1.0)).ceil() as usize + 1;
    let mut sum = 0.0;
    // Sum smallest terms first.
    for k in (1..=k_max).rev() {
        sum += (k as f64).powi(-(s as i32));
    }
    cache.insert(s, sum);
    Ok(sum)
}
