//! The localizing function ψ and its Fourier transform.
//!
//! ψ is built from a univariate polynomial bump φ with support `[−h/2, h/2]`
//! whose autocorrelation g = φ∗φ is represented exactly as a piecewise
//! polynomial. In d dimensions,
//!
//! ```text
//! ψ = ((2πb)^p − (−1)^r Σ_s ∂^p/∂x_s^p) ⊗_l g,     p = 2r,
//! ```
//!
//! so ψ is supported on `[−h, h]^d` while ψ̂ is nonnegative on the ℓ^p ball
//! of radius b and nonpositive outside. The closed forms at zero, the ratio
//! ψ(0)/ψ̂(0) and its lower bounds, and the Poisson-summation identity
//! behind the Ingham-type singular value bound all live here.

mod convolve;
mod piecewise;

pub use piecewise::PiecewisePoly;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{binomial, factorial, gamma_half_integer, MAX_R};
use crate::torus_nodes::wrap_distance;
use crate::vandermonde::{centered_gram_matrix, VandermondeSpec};

const PI: f64 = std::f64::consts::PI;
const E: f64 = std::f64::consts::E;

/// Parameters (d, r, b, h) of the localizing function; p = 2r is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiParams {
    pub dim: usize,
    pub r: usize,
    /// Frequency radius: ψ̂ changes sign on the ℓ^p sphere of radius b.
    pub b: f64,
    /// Support half-width: supp(ψ) = [−h, h]^d.
    pub h: f64,
}

impl PsiParams {
    pub fn new(dim: usize, r: usize, b: f64, h: f64) -> Result<Self> {
        if dim == 0 || r == 0 {
            return Err(Error::InvalidParameter("dim and r must be positive".into()));
        }
        if r > MAX_R {
            return Err(Error::InvalidParameter(format!(
                "r = {r} exceeds the factorial overflow guard {MAX_R}"
            )));
        }
        if !(b > 0.0) || !(h > 0.0) {
            return Err(Error::InvalidParameter("b and h must be positive".into()));
        }
        Ok(PsiParams { dim, r, b, h })
    }

    /// p = 2r.
    pub fn p(&self) -> usize {
        2 * self.r
    }

    /// C_p = (2p+3)/(eπ).
    pub fn c_p(&self) -> f64 {
        (2.0 * self.p() as f64 + 3.0) / (E * PI)
    }

    /// ψ(0) > 0 is guaranteed when h exceeds `C_p d^{1/p} / b`.
    pub fn positivity_threshold(&self) -> f64 {
        self.c_p() * (self.dim as f64).powf(1.0 / self.p() as f64) / self.b
    }

    pub fn satisfies_positivity(&self) -> bool {
        self.h > self.positivity_threshold()
    }
}

/// The h choice `(2p+3)/(eπ) · d^{1/p} / b` used by the sharpened ratio
/// bounds.
pub fn h_rule_of_p(dim: usize, r: usize, b: f64) -> f64 {
    let p = 2.0 * r as f64;
    (2.0 * p + 3.0) / (E * PI) * (dim as f64).powf(1.0 / p) / b
}

/// The bump `φ(x) = (1 − (2x/h)²)^r` for `|x| < h/2`, else 0.
pub fn phi(x: f64, r: usize, h: f64) -> f64 {
    if x.abs() < h / 2.0 {
        let u = 2.0 * x / h;
        (1.0 - u * u).powi(r as i32)
    } else {
        0.0
    }
}

/// φ∗φ as an exact piecewise polynomial on `[−h, h]`.
///
/// Coefficients are computed with rational arithmetic at h = 1 and rescaled:
/// `g_h(x) = h · g_1(x/h)`.
pub fn phi_autocorrelation(r: usize, h: f64) -> PiecewisePoly {
    let c1 = convolve::autocorrelation_coeffs(r);
    let pos: Vec<f64> = c1
        .iter()
        .enumerate()
        .map(|(k, &c)| c * h.powi(1 - k as i32))
        .collect();
    // even function: mirror with alternating signs
    let neg: Vec<f64> = pos
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c } else { -c })
        .collect();
    PiecewisePoly::new(vec![-h, 0.0, h], vec![neg, pos])
}

/// ψ with its autocorrelation and p-th derivative cached for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct Psi {
    params: PsiParams,
    g: PiecewisePoly,
    g_p: PiecewisePoly,
}

impl Psi {
    pub fn new(params: PsiParams) -> Self {
        let g = phi_autocorrelation(params.r, params.h);
        let g_p = g.derivative_n(params.p());
        Psi { params, g, g_p }
    }

    pub fn params(&self) -> &PsiParams {
        &self.params
    }

    pub fn autocorrelation(&self) -> &PiecewisePoly {
        &self.g
    }

    /// Evaluate ψ at a point of `R^d`. Exactly 0 when any `|x_s| ≥ h`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let p = &self.params;
        if x.len() != p.dim {
            return Err(Error::DimensionMismatch {
                expected: p.dim,
                got: x.len(),
            });
        }
        if x.iter().any(|&xs| xs.abs() >= p.h) {
            return Ok(0.0);
        }
        let g_vals: Vec<f64> = x.iter().map(|&xs| self.g.eval(xs)).collect();
        let prod_all: f64 = g_vals.iter().product();
        let mut deriv_sum = 0.0;
        for (s, &xs) in x.iter().enumerate() {
            let mut prod_others = 1.0;
            for (l, &gv) in g_vals.iter().enumerate() {
                if l != s {
                    prod_others *= gv;
                }
            }
            deriv_sum += self.g_p.eval(xs) * prod_others;
        }
        let sign = if p.r % 2 == 0 { 1.0 } else { -1.0 };
        Ok((2.0 * PI * p.b).powi(p.p() as i32) * prod_all - sign * deriv_sum)
    }
}

/// One-shot ψ evaluation; builds the piecewise representation internally.
pub fn psi_eval(x: &[f64], params: &PsiParams) -> Result<f64> {
    Psi::new(*params).eval(x)
}

/// Fourier transform of the bump, `φ̂(v) = ∫ φ(x) e^{−2πivx} dx` (real by
/// evenness).
///
/// The binomial expansion reduces this to even moments
/// `∫_{−h/2}^{h/2} x^{2k} cos(2πvx) dx`, evaluated by a closed recursion in
/// `1/v` for `|v|h ≥ 1` and by a Taylor series in `v` below (where the
/// recursion cancels catastrophically).
pub fn phi_hat(v: f64, r: usize, h: f64) -> f64 {
    let a = h / 2.0;
    let omega = 2.0 * PI * v;
    let use_taylor = (v * h).abs() < 1.0;

    // moments J_{2k} for k = 0..r
    let mut moments = vec![0.0f64; r + 1];
    if use_taylor {
        for (k, m) in moments.iter_mut().enumerate() {
            *m = cosine_moment_taylor(2 * k, omega, a);
        }
    } else {
        // J_n = 2aⁿ sin(ωa)/ω + 2n aⁿ⁻¹ cos(ωa)/ω² − n(n−1)/ω² · J_{n−2};
        // odd moments vanish on the symmetric interval, so the recursion
        // steps through even n only.
        let (s, c) = (omega * a).sin_cos();
        let mut prev = 2.0 * s / omega; // J_0
        moments[0] = prev;
        for k in 1..=r {
            let n = (2 * k) as f64;
            let j = 2.0 * a.powf(n) * s / omega
                + 2.0 * n * a.powf(n - 1.0) * c / (omega * omega)
                - n * (n - 1.0) / (omega * omega) * prev;
            moments[k] = j;
            prev = j;
        }
    }

    let scale = 2.0 / h;
    let mut acc = 0.0;
    for k in 0..=r {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(r, k) * scale.powi(2 * k as i32) * moments[k];
    }
    acc
}

/// `∫_{−a}^{a} x^n cos(ωx) dx` for even n by Taylor expansion in ω,
/// truncated when the absolute tail falls below 1e-16.
fn cosine_moment_taylor(n: usize, omega: f64, a: f64) -> f64 {
    let mut sum = 0.0;
    let mut term_base = 1.0; // ω^{2m} / (2m)!
    let mut m = 0usize;
    loop {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * term_base * 2.0 * a.powi((n + 2 * m + 1) as i32)
            / (n + 2 * m + 1) as f64;
        sum += term;
        if term.abs() < 1e-16 && m > 0 {
            return sum;
        }
        m += 1;
        term_base *= omega * omega / ((2 * m - 1) as f64 * (2 * m) as f64);
        if m > 200 {
            return sum;
        }
    }
}

/// ψ̂ via the product formula
/// `((2πb)^p − Σ_s (2πv_s)^p) ∏_l φ̂(v_l)²`.
pub fn psi_hat(v: &[f64], params: &PsiParams) -> Result<f64> {
    if v.len() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            got: v.len(),
        });
    }
    let p = params.p() as i32;
    let head = (2.0 * PI * params.b).powi(p)
        - v.iter().map(|&vs| (2.0 * PI * vs).powi(p)).sum::<f64>();
    let tail: f64 = v
        .iter()
        .map(|&vs| phi_hat(vs, params.r, params.h).powi(2))
        .product();
    Ok(head * tail)
}

/// ψ(0) by the closed form with exact half-integer Gamma values.
pub fn psi_at_zero(params: &PsiParams) -> f64 {
    let (d, r, b, h) = (params.dim as f64, params.r, params.b, params.h);
    let c = h * PI.sqrt() * factorial(2 * r) / (2.0 * gamma_half_integer(2 * r + 1));
    c.powf(d) * (2.0 * PI * b).powi(2 * r as i32)
        - c.powf(d - 1.0) * d * 16f64.powi(r as i32) * factorial(r).powi(2)
            / ((2 * r + 1) as f64 * h.powi(2 * r as i32 - 1))
}

/// ψ̂(0) = (2πb)^p (h√π r!/(2Γ(r+3/2)))^{2d}.
pub fn psi_hat_zero(params: &PsiParams) -> f64 {
    let (d, r, b, h) = (params.dim as f64, params.r, params.b, params.h);
    let factor = h * PI.sqrt() * factorial(r) / (2.0 * gamma_half_integer(r + 1));
    (2.0 * PI * b).powi(2 * r as i32) * factor.powf(2.0 * d)
}

/// The exact ratio ψ(0)/ψ̂(0),
/// `(2(2r)!Γ²(r+3/2)/(Γ(2r+3/2)h√π(r!)²))^d ·
///  (1 − d·2^{2r+1}Γ(2r+3/2)(r!)²/((2r)!h^{2r}√π(2r+1)π^{2r}b^{2r}))`.
///
/// May be nonpositive when the positivity threshold on h is violated; the
/// value is returned as-is.
pub fn ratio_closed_form(params: &PsiParams) -> f64 {
    let (d, r, h) = (params.dim as f64, params.r, params.h);
    let g_r32 = gamma_half_integer(r + 1); // Γ(r+3/2)
    let g_2r32 = gamma_half_integer(2 * r + 1); // Γ(2r+3/2)
    let first = 2.0 * factorial(2 * r) * g_r32 * g_r32
        / (g_2r32 * h * PI.sqrt() * factorial(r).powi(2));
    first.powf(d) * ratio_bracket_factor(params)
}

/// Parameter regime for [`ratio_lower_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioRegime {
    /// The fully general lower bound, valid for any (r, b, h).
    General,
    /// Requires `h = (2p+3)/(eπ) d^{1/p} / b`.
    HOfP,
    /// Additionally requires `r = max(1, ⌈log d⌉)` (natural log).
    LogD,
}

/// The exact bracketed factor of [`ratio_closed_form`],
/// `1 − d·2^{2r+1}Γ(2r+3/2)(r!)²/((2r)! h^{2r} √π (2r+1) π^{2r} b^{2r})`.
///
/// Under the h-of-p rule this stays at least 1/2 for every r and d. The
/// Stirling-simplified form used in the general lower bound
/// ([`simplified_bracket_factor`]) is weaker and drops below 1/2 at r = 1.
pub fn ratio_bracket_factor(params: &PsiParams) -> f64 {
    let (d, r, b, h) = (params.dim as f64, params.r, params.b, params.h);
    let g_2r32 = gamma_half_integer(2 * r + 1); // Γ(2r+3/2)
    1.0 - d * 2f64.powi(2 * r as i32 + 1) * g_2r32 * factorial(r).powi(2)
        / (factorial(2 * r)
            * h.powi(2 * r as i32)
            * PI.sqrt()
            * (2 * r + 1) as f64
            * PI.powi(2 * r as i32)
            * b.powi(2 * r as i32))
}

/// Stirling-simplified bracket `1 − d (2e²/√π) √r (2r/(πe·bh))^{2r}`; never
/// larger than [`ratio_bracket_factor`].
pub fn simplified_bracket_factor(params: &PsiParams) -> f64 {
    let (d, r, b, h) = (params.dim as f64, params.r as f64, params.b, params.h);
    1.0 - d * (2.0 * E * E / PI.sqrt()) * r.sqrt() * (2.0 * r / (PI * E * b * h)).powf(2.0 * r)
}

/// Lower bounds on ψ(0)/ψ̂(0) in the three proved regimes.
pub fn ratio_lower_bounds(params: &PsiParams, regime: RatioRegime) -> Result<f64> {
    let (d, r, b, h) = (params.dim as f64, params.r as f64, params.b, params.h);
    let p = 2.0 * r;
    match regime {
        RatioRegime::General => {
            Ok(((2.0 / PI).sqrt() * r.sqrt() / h).powf(d) * simplified_bracket_factor(params))
        }
        RatioRegime::HOfP => {
            let rule = h_rule_of_p(params.dim, params.r, b);
            if (h - rule).abs() > 1e-12 * rule {
                return Err(Error::InvalidParameter(format!(
                    "h = {h} does not match the p-rule value {rule}"
                )));
            }
            Ok(0.5 * (4.0 / 3.0 * b / (p.sqrt() * d.powf(1.0 / p))).powf(d))
        }
        RatioRegime::LogD => {
            let rule = h_rule_of_p(params.dim, params.r, b);
            if (h - rule).abs() > 1e-12 * rule {
                return Err(Error::InvalidParameter(format!(
                    "h = {h} does not match the p-rule value {rule}"
                )));
            }
            let r_rule = d.ln().ceil().max(1.0) as usize;
            if params.r != r_rule {
                return Err(Error::InvalidParameter(format!(
                    "log-d regime requires r = {r_rule}, got {}",
                    params.r
                )));
            }
            Ok(0.5 * (4.0 / (3.0 * 2f64.sqrt() * E * E) * b / (d.ln() + 1.0).sqrt()).powf(d))
        }
    }
}

/// Outcome of the Poisson-summation identity check.
#[derive(Debug, Clone, Serialize)]
pub struct PoissonDiagnostic {
    /// Truncated frequency-side sum `Σ_{‖ν‖∞≤T} ψ̂(ν)|Σ_j u_j e^{2πiν·t_j}|²`.
    pub lhs: f64,
    /// Space-side double sum `Σ_{j,ℓ} u_j ū_ℓ Σ_{r∈{−1,0,1}^d} ψ(t_j−t_ℓ+r)`.
    pub mid: f64,
    /// `ψ(0)‖u‖²`.
    pub rhs: f64,
    /// `ψ̂(0)·‖Ã*u‖²` with Ã the centered Vandermonde matrix.
    pub sandwich: f64,
    pub truncation: usize,
}

/// Verify the Poisson-summation chain behind the Ingham-type bound on a
/// concrete instance.
///
/// Requires `h ≤ 1/2` (so only shifts in `{−1,0,1}^d` can contribute) and a
/// node set that is h-separated.
pub fn poisson_check(
    spec: &VandermondeSpec,
    params: &PsiParams,
    u: &[Complex64],
    truncation: usize,
) -> Result<PoissonDiagnostic> {
    let ns = spec.node_set();
    let d = ns.dim();
    let m = ns.len();
    if params.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: params.dim,
        });
    }
    if u.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: u.len(),
        });
    }
    if params.h > 0.5 + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "h = {} exceeds 1/2; more shifts than {{−1,0,1}}^d would contribute",
            params.h
        )));
    }
    if m >= 2 {
        let q = ns.separation()?;
        if q < params.h {
            return Err(Error::SeparationBelowSupport { q, h: params.h });
        }
    }

    let psi = Psi::new(*params);
    let norm_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let rhs = psi.eval(&vec![0.0; d])? * norm_sq;

    // space side: nodes and integer shifts
    let mut mid = Complex64::new(0.0, 0.0);
    let mut shift = vec![0i64; d];
    for j in 0..m {
        for l in 0..m {
            let tj = ns.node(j);
            let tl = ns.node(l);
            let mut psi_sum = 0.0;
            shift.iter_mut().for_each(|s| *s = -1);
            'shifts: loop {
                let x: Vec<f64> = (0..d)
                    .map(|s| tj[s] - tl[s] + shift[s] as f64)
                    .collect();
                psi_sum += psi.eval(&x)?;
                let mut k = d;
                loop {
                    if k == 0 {
                        break 'shifts;
                    }
                    k -= 1;
                    shift[k] += 1;
                    if shift[k] <= 1 {
                        break;
                    }
                    shift[k] = -1;
                }
            }
            mid += u[j] * u[l].conj() * psi_sum;
        }
    }

    // frequency side: truncated lattice sum
    let t = truncation as i64;
    let mut lhs = 0.0;
    let mut nu = vec![-t; d];
    'lattice: loop {
        let nu_f: Vec<f64> = nu.iter().map(|&x| x as f64).collect();
        let weight = psi_hat(&nu_f, params)?;
        if weight != 0.0 {
            let mut trig = Complex64::new(0.0, 0.0);
            for (j, uj) in u.iter().enumerate() {
                let phase: f64 = nu_f
                    .iter()
                    .zip(ns.node(j))
                    .map(|(&v, &x)| v * x)
                    .sum();
                trig += uj * Complex64::from_polar(1.0, 2.0 * PI * phase);
            }
            lhs += weight * trig.norm_sqr();
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'lattice;
            }
            k -= 1;
            nu[k] += 1;
            if nu[k] <= t {
                break;
            }
            nu[k] = -t;
        }
    }

    // sandwich: ψ̂(0) u* ÃÃ* u
    let gc = centered_gram_matrix(spec);
    let mut quad = Complex64::new(0.0, 0.0);
    for j in 0..m {
        for l in 0..m {
            quad += u[j].conj() * gc[(j, l)] * u[l];
        }
    }
    let sandwich = psi_hat_zero(params) * quad.re;

    Ok(PoissonDiagnostic {
        lhs,
        mid: mid.re,
        rhs,
        sandwich,
        truncation,
    })
}

/// Heuristic default truncation for [`poisson_check`]: the smallest T at
/// which the first-omitted-shell estimate falls below `1e-8 · ψ̂(0)`.
pub fn default_truncation(params: &PsiParams) -> usize {
    let target = 1e-8 * psi_hat_zero(params).abs();
    let phi0 = phi_hat(0.0, params.r, params.h);
    let p = params.p() as i32;
    let d = params.dim as f64;
    let mut t = (params.b.ceil() as usize).max(2);
    loop {
        // envelope of |φ̂| over [T, T+1], sampled
        let mut env: f64 = 0.0;
        for k in 0..=32 {
            let v = t as f64 + k as f64 / 32.0;
            env = env.max(phi_hat(v, params.r, params.h).abs());
        }
        let head = (2.0 * PI * params.b).powi(p) + d * (2.0 * PI * t as f64).powi(p);
        let shell_count = 2.0 * d * (2.0 * t as f64 + 1.0).powf(d - 1.0);
        let estimate = head * env * env * phi0.powf(2.0 * (d - 1.0)) * shell_count;
        if estimate < target || t > 4096 {
            return t;
        }
        t += 1;
    }
}

/// Space-side separation guard used by the Poisson check, re-exported for
/// the verification harness.
pub fn h_separated(spec: &VandermondeSpec, h: f64) -> Result<bool> {
    let ns = spec.node_set();
    if ns.len() < 2 {
        return Ok(true);
    }
    // all-pairs scan via the torus metric
    for i in 0..ns.len() {
        for j in (i + 1)..ns.len() {
            if wrap_distance(ns.node(i), ns.node(j))? < h {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
