//! Exact polynomial autocorrelation of the bump φ with rational
//! coefficient arithmetic.
//!
//! Everything is computed for the normalized half-width `h = 1` where all
//! coefficients are rational; the caller rescales. For `x ∈ [0, 1]`,
//!
//! ```text
//! (φ∗φ)(x) = ∫_{x−1/2}^{1/2} φ(y) φ(x−y) dy,   φ(y) = (1 − 4y²)^r,
//! ```
//!
//! which is a single polynomial of degree `4r+1` in `x`; the `[−1, 0]`
//! branch follows by evenness.

use num::{BigInt, BigRational, One, Zero};

type Q = BigRational;
/// Univariate polynomial, ascending powers, rational coefficients.
type Poly = Vec<Q>;

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add_assign(a: &mut Poly, b: &Poly) {
    if b.len() > a.len() {
        a.resize(b.len(), Q::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        a[i] += bi;
    }
}

fn poly_scale(a: &Poly, s: &Q) -> Poly {
    a.iter().map(|c| c * s).collect()
}

/// `(1 − 4y²)^r` as a rational polynomial in y.
fn bump_poly(r: usize) -> Poly {
    let base = vec![q_int(1), q_int(0), q_int(-4)];
    let mut acc = vec![q_int(1)];
    for _ in 0..r {
        acc = poly_mul(&acc, &base);
    }
    acc
}

fn binom_q(n: usize, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * q_int((n - i) as i64) / q_int((i + 1) as i64);
    }
    acc
}

/// Coefficients (ascending in x) of the `[0, 1]` branch of φ∗φ at `h = 1`,
/// converted to f64 after exact evaluation.
pub fn autocorrelation_coeffs(r: usize) -> Vec<f64> {
    let a = bump_poly(r); // q(y)
    let deg = a.len() - 1;

    // q(x − y) as a polynomial in y whose coefficients are polynomials in x:
    // coeff of y^j is Σ_{k≥j} a_k C(k,j) (−1)^j x^{k−j}.
    let mut shifted: Vec<Poly> = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        let mut cj = vec![Q::zero(); deg - j + 1];
        for k in j..=deg {
            cj[k - j] = &a[k] * binom_q(k, j) * &sign;
        }
        shifted.push(cj);
    }

    // product q(y)·q(x−y): coefficient of y^m is Σ_{i+j=m} a_i · shifted[j].
    let mut prod: Vec<Poly> = vec![vec![Q::zero()]; 2 * deg + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, sj) in shifted.iter().enumerate() {
            let term = poly_scale(sj, ai);
            poly_add_assign(&mut prod[i + j], &term);
        }
    }

    // antiderivative in y
    let mut anti: Vec<Poly> = vec![vec![Q::zero()]];
    for (m, pm) in prod.iter().enumerate() {
        anti.push(poly_scale(pm, &(Q::one() / q_int((m + 1) as i64))));
    }

    // evaluate at y = 1/2 and y = x − 1/2
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut upper: Poly = vec![Q::zero()];
    let mut half_pow = Q::one();
    for am in &anti {
        poly_add_assign(&mut upper, &poly_scale(am, &half_pow));
        half_pow *= &half;
    }

    let x_minus_half: Poly = vec![-half.clone(), Q::one()];
    let mut lower: Poly = vec![Q::zero()];
    let mut pw: Poly = vec![Q::one()];
    for am in &anti {
        poly_add_assign(&mut lower, &poly_mul(am, &pw));
        pw = poly_mul(&pw, &x_minus_half);
    }

    let mut g: Poly = upper;
    let neg = poly_scale(&lower, &-Q::one());
    poly_add_assign(&mut g, &neg);

    use num::ToPrimitive;
    g.iter()
        .map(|c| c.to_f64().expect("rational fits in f64"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn value_at_zero_matches_beta_integral() {
        // (φ∗φ)(0) = (1/2)∫_{−1}^{1}(1−u²)^{2r} du = √π (2r)! / (2 Γ(2r+3/2))
        use crate::special::{factorial, gamma_half_integer};
        for r in 1..=4usize {
            let c = autocorrelation_coeffs(r);
            let got = c[0];
            let expect = std::f64::consts::PI.sqrt() * factorial(2 * r)
                / (2.0 * gamma_half_integer(2 * r + 1));
            assert_relative_eq!(got, expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn r1_known_polynomial_values() {
        // r=1: g(0) = 8/15, g(1) = 0
        let c = autocorrelation_coeffs(1);
        assert_relative_eq!(c[0], 8.0 / 15.0, max_relative = 1e-15);
        let at_one: f64 = c.iter().rev().fold(0.0, |acc, &k| acc + k); // sum of coeffs
        assert!(at_one.abs() < 1e-14);
        assert_eq!(c.len(), 6); // degree 4r+1 = 5
    }

    #[test]
    fn matches_gauss_legendre_quadrature() {
        // oracle: ∫ φ(y)φ(x−y) dy over the overlap by 8-point Gauss–Legendre
        // (exact for degree ≤ 15 ≥ 4r for r ≤ 3)
        let gl8_nodes = [
            -0.9602898564975363,
            -0.7966664774136267,
            -0.525532409916329,
            -0.1834346424956498,
            0.1834346424956498,
            0.525532409916329,
            0.7966664774136267,
            0.9602898564975363,
        ];
        let gl8_weights = [
            0.10122853629037626,
            0.22238103445337448,
            0.31370664587788727,
            0.362683783378362,
            0.362683783378362,
            0.31370664587788727,
            0.22238103445337448,
            0.10122853629037626,
        ];
        let phi = |y: f64, r: i32| {
            if y.abs() < 0.5 {
                (1.0 - 4.0 * y * y).powi(r)
            } else {
                0.0
            }
        };
        for r in 1..=3usize {
            let c = autocorrelation_coeffs(r);
            for &x in &[0.0, 1.0 / 3.0, 0.5, 0.8] {
                let (lo, hi) = (x - 0.5, 0.5);
                let mid = 0.5 * (lo + hi);
                let scale = 0.5 * (hi - lo);
                let mut integral = 0.0;
                for (n, w) in gl8_nodes.iter().zip(&gl8_weights) {
                    let y = mid + scale * n;
                    integral += w * phi(y, r as i32) * phi(x - y, r as i32);
                }
                integral *= scale;
                let val: f64 = c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
                assert_relative_eq!(val, integral, max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }
}
