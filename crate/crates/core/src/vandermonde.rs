//! The multivariate rectangular Vandermonde matrix, its Gram matrix, and
//! extremal singular values.
//!
//! The matrix has entries `exp(2πi ν·t_j)` over multi-indices
//! `ν ∈ {0,…,N−1}^d` (lexicographic order, last coordinate fastest). The
//! `M × M` Gram matrix `AA*` factors entrywise into products of univariate
//! Dirichlet kernels, which keeps the spectrum computable even when `N^d`
//! column counts explode.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus_nodes::NodeSet;

/// Default cap on `M · N^d` entries for the explicit matrix path.
pub const DEFAULT_EXPLICIT_CAP: usize = 10_000_000;

/// Guard band around integers inside which the Dirichlet closed form is
/// replaced by direct summation.
const DIRICHLET_GUARD: f64 = 1e-9;

/// A node set plus the degree parameter N defining the Vandermonde matrix.
#[derive(Debug, Clone)]
pub struct VandermondeSpec {
    node_set: NodeSet,
    degree: usize,
}

impl VandermondeSpec {
    pub fn new(node_set: NodeSet, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParameter("degree must be positive".into()));
        }
        // N^d must not overflow the platform integer.
        degree
            .checked_pow(node_set.dim() as u32)
            .ok_or_else(|| Error::InvalidParameter("N^d overflows platform integer".into()))?;
        Ok(VandermondeSpec { node_set, degree })
    }

    pub fn node_set(&self) -> &NodeSet {
        &self.node_set
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_rows(&self) -> usize {
        self.node_set.len()
    }

    /// N^d.
    pub fn num_cols(&self) -> usize {
        self.degree.pow(self.node_set.dim() as u32)
    }
}

/// Iterate multi-indices `{0,…,n−1}^d` lexicographically, last coordinate
/// fastest, invoking `f` with (column index, multi-index).
fn for_each_multi_index(n: usize, d: usize, mut f: impl FnMut(usize, &[usize])) {
    let mut idx = vec![0usize; d];
    let mut col = 0usize;
    loop {
        f(col, &idx);
        col += 1;
        let mut s = d;
        loop {
            if s == 0 {
                return;
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < n {
                break;
            }
            idx[s] = 0;
        }
    }
}

/// Build the explicit `M × N^d` matrix with entries `exp(2πi ν·t_j)`.
pub fn build_matrix(spec: &VandermondeSpec) -> Result<DMatrix<Complex64>> {
    build_matrix_capped(spec, DEFAULT_EXPLICIT_CAP)
}

pub fn build_matrix_capped(spec: &VandermondeSpec, cap: usize) -> Result<DMatrix<Complex64>> {
    let m = spec.num_rows();
    let cols = spec.num_cols();
    let entries = m
        .checked_mul(cols)
        .ok_or(Error::ExplicitCap { entries: usize::MAX, cap })?;
    if entries > cap {
        return Err(Error::ExplicitCap { entries, cap });
    }
    let d = spec.node_set.dim();
    let n = spec.degree;
    let mut a = DMatrix::<Complex64>::zeros(m, cols);
    for j in 0..m {
        let t = spec.node_set.node(j);
        for_each_multi_index(n, d, |col, nu| {
            let phase: f64 = nu
                .iter()
                .zip(t)
                .map(|(&v, &x)| v as f64 * x)
                .sum::<f64>();
            a[(j, col)] = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        });
    }
    Ok(a)
}

/// Dirichlet kernel `D_N(τ) = Σ_{ν=0}^{N−1} exp(2πiντ)`.
///
/// Evaluated by the closed form `exp(πi(N−1)τ) sin(πNτ)/sin(πτ)` away from
/// integers; exactly `N` at integers; direct summation inside the guard band
/// where the denominator cancels.
pub fn dirichlet(n: usize, tau: f64) -> Complex64 {
    let nearest = tau.round();
    let frac = tau - nearest;
    if frac == 0.0 {
        return Complex64::new(n as f64, 0.0);
    }
    if frac.abs() < DIRICHLET_GUARD {
        return dirichlet_direct(n, tau);
    }
    let pi = std::f64::consts::PI;
    let modulus = (pi * n as f64 * tau).sin() / (pi * tau).sin();
    Complex64::from_polar(1.0, pi * (n as f64 - 1.0) * tau) * modulus
}

/// Direct N-term summation of the Dirichlet kernel.
pub fn dirichlet_direct(n: usize, tau: f64) -> Complex64 {
    (0..n)
        .map(|nu| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * nu as f64 * tau))
        .sum()
}

/// Gram matrix `AA*` with entry `(j,ℓ) = ∏_s D_N((t_j − t_ℓ)_s)`.
///
/// The upper triangle is computed and mirrored conjugate; diagonal entries
/// are exactly `N^d`.
pub fn gram_matrix(spec: &VandermondeSpec) -> DMatrix<Complex64> {
    gram_with_kernel(spec, |n, tau| dirichlet(n, tau))
}

/// Gram matrix of the centered matrix `Ã` whose multi-indices run over
/// `{−⌈(N−1)/2⌉, …, ⌊(N−1)/2⌋}^d`.
///
/// `Ã` differs from `A` by a unimodular diagonal factor, so the spectra of
/// `AA*` and `ÃÃ*` coincide; the centered Gram is what the Poisson-summation
/// sandwich compares against.
pub fn centered_gram_matrix(spec: &VandermondeSpec) -> DMatrix<Complex64> {
    let shift = (spec.degree() - 1).div_ceil(2) as f64;
    gram_with_kernel(spec, move |n, tau| {
        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * shift * tau) * dirichlet(n, tau)
    })
}

fn gram_with_kernel(
    spec: &VandermondeSpec,
    kernel: impl Fn(usize, f64) -> Complex64 + Sync,
) -> DMatrix<Complex64> {
    let m = spec.num_rows();
    let d = spec.node_set.dim();
    let n = spec.degree;
    let nd = (n as f64).powi(d as i32);

    // upper-triangle entries, computed in parallel
    let upper: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let tj = spec.node_set.node(j);
            ((j + 1)..m)
                .map(|l| {
                    let tl = spec.node_set.node(l);
                    let mut e = Complex64::new(1.0, 0.0);
                    for s in 0..d {
                        e *= kernel(n, tj[s] - tl[s]);
                    }
                    e
                })
                .collect()
        })
        .collect();

    let mut g = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        g[(j, j)] = Complex64::new(nd, 0.0);
        for (k, &e) in upper[j].iter().enumerate() {
            let l = j + 1 + k;
            g[(j, l)] = e;
            g[(l, j)] = e.conj();
        }
    }
    g
}

/// Which computation route produced a [`SpectralResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralPath {
    Explicit,
    Gram,
}

/// Extremal singular values and condition number of a Vandermonde matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralResult {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `sigma_max / sigma_min`; infinite when `sigma_min` vanishes.
    pub cond: f64,
    pub path: SpectralPath,
    /// Cross-check discrepancy (explicit vs Gram path) when requested,
    /// otherwise 0.
    pub residual: f64,
    /// Set when a slightly negative smallest Gram eigenvalue (rounding
    /// artifact of a near-singular Gram) was clamped to zero.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clamped: bool,
}

impl SpectralResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("SpectralResult serialization cannot fail")
    }
}

/// Options for [`spectrum_with`].
#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    /// Also run the explicit-path SVD (when under `explicit_cap`) and record
    /// the worst relative discrepancy in `residual`.
    pub cross_check: bool,
    pub explicit_cap: usize,
    pub max_eigen_iterations: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            cross_check: false,
            explicit_cap: DEFAULT_EXPLICIT_CAP,
            max_eigen_iterations: 20_000,
        }
    }
}

/// σ_min, σ_max, and the condition number via the Gram path.
pub fn spectrum(spec: &VandermondeSpec) -> Result<SpectralResult> {
    spectrum_with(spec, &SpectrumOptions::default())
}

pub fn spectrum_with(spec: &VandermondeSpec, opts: &SpectrumOptions) -> Result<SpectralResult> {
    let g = gram_matrix(spec);
    let eig = nalgebra::SymmetricEigen::try_new(g, f64::EPSILON, opts.max_eigen_iterations)
        .ok_or(Error::EigensolverFailed {
            max_iterations: opts.max_eigen_iterations,
        })?;
    let mut lambda_min = f64::INFINITY;
    let mut lambda_max = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lambda_min = lambda_min.min(l);
        lambda_max = lambda_max.max(l);
    }

    let mut clamped = false;
    if lambda_min < 0.0 {
        // near-singular Gram: tolerate rounding-level negativity only
        if lambda_min >= -1e-10 * lambda_max {
            clamped = true;
        }
        lambda_min = 0.0;
    }
    let sigma_min = lambda_min.sqrt();
    let sigma_max = lambda_max.sqrt();
    let cond = if sigma_min > 0.0 {
        sigma_max / sigma_min
    } else {
        f64::INFINITY
    };

    let mut residual = 0.0;
    if opts.cross_check {
        let a = build_matrix_capped(spec, opts.explicit_cap)?;
        let svd = a.svd(false, false);
        let mut s_min = f64::INFINITY;
        let mut s_max: f64 = 0.0;
        for &s in svd.singular_values.iter() {
            s_min = s_min.min(s);
            s_max = s_max.max(s);
        }
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
        residual = rel(sigma_max, s_max).max(rel(sigma_min, s_min));
    }

    Ok(SpectralResult {
        sigma_min,
        sigma_max,
        cond,
        path: SpectralPath::Gram,
        residual,
        clamped,
    })
}

/// σ_min, σ_max via SVD of the explicit matrix. Subject to the entry cap.
pub fn spectrum_explicit(spec: &VandermondeSpec, cap: usize) -> Result<SpectralResult> {
    let a = build_matrix_capped(spec, cap)?;
    let svd = a.svd(false, false);
    let mut s_min = f64::INFINITY;
    let mut s_max: f64 = 0.0;
    for &s in svd.singular_values.iter() {
        s_min = s_min.min(s);
        s_max = s_max.max(s);
    }
    let cond = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
    Ok(SpectralResult {
        sigma_min: s_min,
        sigma_max: s_max,
        cond,
        path: SpectralPath::Explicit,
        residual: 0.0,
        clamped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_nodes::{self, NodeSet};
    use approx::assert_relative_eq;

    fn spec(ns: NodeSet, n: usize) -> VandermondeSpec {
        VandermondeSpec::new(ns, n).unwrap()
    }

    #[test]
    fn matrix_single_node_at_zero() {
        let s = spec(NodeSet::new(1, vec![vec![0.0]]).unwrap(), 3);
        let a = build_matrix(&s).unwrap();
        assert_eq!(a.nrows(), 1);
        assert_eq!(a.ncols(), 3);
        for c in 0..3 {
            assert_relative_eq!(a[(0, c)].re, 1.0, epsilon = 1e-15);
            assert_relative_eq!(a[(0, c)].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn matrix_single_node_quarter() {
        let s = spec(NodeSet::new(1, vec![vec![0.25]]).unwrap(), 2);
        let a = build_matrix(&s).unwrap();
        assert_relative_eq!(a[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(a[(0, 1)].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(a[(0, 1)].im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn matrix_matches_scalar_loop_oracle() {
        let ns = torus_nodes::gen_random_separated(2, 2, 0.1, 11).unwrap();
        let s = spec(ns, 2);
        let a = build_matrix(&s).unwrap();
        // independent scalar-loop oracle: columns enumerated the same way,
        // entry recomputed from scratch
        let d = 2;
        let n = 2usize;
        for j in 0..s.num_rows() {
            let mut col = 0;
            let mut nu = vec![0usize; d];
            'outer: loop {
                let mut z = Complex64::new(1.0, 0.0);
                for sdim in 0..d {
                    z *= Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI
                            * nu[sdim] as f64
                            * s.node_set().node(j)[sdim],
                    );
                }
                assert!((a[(j, col)] - z).norm() < 1e-12);
                col += 1;
                let mut k = d;
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    k -= 1;
                    nu[k] += 1;
                    if nu[k] < n {
                        break;
                    }
                    nu[k] = 0;
                }
            }
        }
    }

    #[test]
    fn matrix_cap() {
        let ns = torus_nodes::gen_random_separated(4, 1, 0.1, 0).unwrap();
        let s = spec(ns, 100);
        assert!(matches!(
            build_matrix_capped(&s, 100),
            Err(Error::ExplicitCap { .. })
        ));
    }

    #[test]
    fn dirichlet_at_integers() {
        assert_eq!(dirichlet(5, 0.0), Complex64::new(5.0, 0.0));
        assert_eq!(dirichlet(3, 2.0), Complex64::new(3.0, 0.0));
        assert_eq!(dirichlet(3, -1.0), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn dirichlet_full_period_cancellation() {
        let v = dirichlet(4, 0.25);
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn dirichlet_matches_direct_sum() {
        for &(n, tau) in &[(3usize, 0.1), (7, 0.37), (12, -0.83), (5, 1.0 + 1e-10), (9, 0.5)] {
            let closed = dirichlet(n, tau);
            let direct = dirichlet_direct(n, tau);
            assert!(
                (closed - direct).norm() <= 1e-12 * n as f64,
                "n={n} tau={tau}: {closed} vs {direct}"
            );
        }
    }

    #[test]
    fn gram_diagonal_is_n_to_d() {
        let ns = torus_nodes::gen_random_separated(3, 2, 0.1, 5).unwrap();
        let s = spec(ns, 4);
        let g = gram_matrix(&s);
        for j in 0..3 {
            assert_eq!(g[(j, j)], Complex64::new(16.0, 0.0));
        }
    }

    #[test]
    fn gram_quasi_grid_is_scaled_identity() {
        let s = spec(torus_nodes::gen_quasi_grid(4, 2, 1).unwrap(), 4);
        let g = gram_matrix(&s);
        for j in 0..4 {
            for l in 0..4 {
                if j == l {
                    assert_eq!(g[(j, l)], Complex64::new(16.0, 0.0));
                } else {
                    assert!(g[(j, l)].norm() < 1e-10, "off-diagonal {}", g[(j, l)]);
                }
            }
        }
    }

    #[test]
    fn gram_off_diagonal_zero_for_lattice_gap() {
        // two nodes differing by (1/3, 0.111) with N=3: first factor is
        // D_3(1/3) = 0
        let ns = NodeSet::new(2, vec![vec![0.0, 0.2], vec![1.0 / 3.0, 0.311]]).unwrap();
        let s = spec(ns, 3);
        let g = gram_matrix(&s);
        assert!(g[(0, 1)].norm() < 1e-10);
    }

    #[test]
    fn gram_matches_explicit_product() {
        let ns = torus_nodes::gen_random_separated(3, 2, 0.1, 17).unwrap();
        let s = spec(ns, 4);
        let g = gram_matrix(&s);
        let a = build_matrix(&s).unwrap();
        let gp = &a * a.adjoint();
        for j in 0..3 {
            for l in 0..3 {
                let denom = g[(j, l)].norm().max(1.0);
                assert!(
                    (g[(j, l)] - gp[(j, l)]).norm() / denom < 1e-9,
                    "({j},{l}): {} vs {}",
                    g[(j, l)],
                    gp[(j, l)]
                );
            }
        }
    }

    #[test]
    fn spectrum_single_node() {
        let s = spec(NodeSet::new(2, vec![vec![0.3, 0.7]]).unwrap(), 5);
        let r = spectrum(&s).unwrap();
        assert_relative_eq!(r.sigma_min, 5.0, max_relative = 1e-12);
        assert_relative_eq!(r.sigma_max, 5.0, max_relative = 1e-12);
        assert_relative_eq!(r.cond, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn spectrum_equispaced_closed_form() {
        // M=2, N=5, d=1: q=1/2, Nq=2.5 -> sigma_min=2, sigma_max=sqrt(6)
        let s = spec(torus_nodes::gen_equispaced(2, 1).unwrap(), 5);
        let r = spectrum(&s).unwrap();
        assert_relative_eq!(r.sigma_min, 2.0, max_relative = 1e-10);
        assert_relative_eq!(r.sigma_max, 6.0f64.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn spectrum_matches_explicit_svd() {
        let ns = torus_nodes::gen_random_separated(5, 2, 0.1, 23).unwrap();
        let s = spec(ns, 6);
        let gram = spectrum(&s).unwrap();
        let explicit = spectrum_explicit(&s, DEFAULT_EXPLICIT_CAP).unwrap();
        assert_relative_eq!(gram.sigma_min, explicit.sigma_min, max_relative = 1e-8);
        assert_relative_eq!(gram.sigma_max, explicit.sigma_max, max_relative = 1e-8);
    }

    #[test]
    fn spectrum_cross_check_residual() {
        let ns = torus_nodes::gen_random_separated(4, 1, 0.1, 2).unwrap();
        let s = spec(ns, 8);
        let opts = SpectrumOptions {
            cross_check: true,
            ..Default::default()
        };
        let r = spectrum_with(&s, &opts).unwrap();
        assert!(r.residual <= 1e-8, "residual {}", r.residual);
    }

    #[test]
    fn spectral_result_json_fields() {
        let s = spec(NodeSet::new(1, vec![vec![0.0]]).unwrap(), 2);
        let r = spectrum(&s).unwrap();
        let json = r.to_json();
        for key in ["sigma_min", "sigma_max", "cond", "path", "residual"] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
        assert!(json.contains("\"gram\""));
    }

    #[test]
    fn centered_gram_same_spectrum() {
        let ns = torus_nodes::gen_random_separated(4, 2, 0.1, 31).unwrap();
        let s = spec(ns, 5);
        let g = gram_matrix(&s);
        let gc = centered_gram_matrix(&s);
        let e1 = nalgebra::SymmetricEigen::new(g).eigenvalues;
        let e2 = nalgebra::SymmetricEigen::new(gc).eigenvalues;
        let mut v1: Vec<f64> = e1.iter().copied().collect();
        let mut v2: Vec<f64> = e2.iter().copied().collect();
        v1.sort_by(f64::total_cmp);
        v2.sort_by(f64::total_cmp);
        for (a, b) in v1.iter().zip(&v2) {
            assert_relative_eq!(a, b, max_relative = 1e-8, epsilon = 1e-8);
        }
    }
}
