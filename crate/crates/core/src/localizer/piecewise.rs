//! Piecewise polynomials in the monomial basis.
//!
//! Used for the exact representation of the bump autocorrelation φ∗φ and
//! its derivatives. Evaluation is zero outside the support bounds;
//! derivatives are exact coefficient operations per piece.

#[derive(Debug, Clone)]
pub struct PiecewisePoly {
    /// Ascending breakpoints; piece `i` covers `[breakpoints[i], breakpoints[i+1]]`.
    breakpoints: Vec<f64>,
    /// Per-piece coefficients, ascending power order.
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Self {
        assert_eq!(breakpoints.len(), pieces.len() + 1);
        assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        PiecewisePoly { breakpoints, pieces }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Evaluate at `x`; exactly 0 outside the support bounds.
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        let i = self.piece_index(x);
        horner(&self.pieces[i], x)
    }

    fn piece_index(&self, x: f64) -> usize {
        // rightmost piece whose left endpoint is <= x
        let mut i = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        if i >= self.pieces.len() {
            i = self.pieces.len() - 1;
        }
        i
    }

    /// Exact derivative (coefficient operation per piece).
    pub fn derivative(&self) -> PiecewisePoly {
        let pieces = self
            .pieces
            .iter()
            .map(|c| {
                if c.len() <= 1 {
                    vec![0.0]
                } else {
                    c.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, &a)| k as f64 * a)
                        .collect()
                }
            })
            .collect();
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// n-th derivative.
    pub fn derivative_n(&self, n: usize) -> PiecewisePoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// Largest jump across interior breakpoints (continuity measure).
    pub fn max_interior_jump(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..self.pieces.len() {
            let x = self.breakpoints[i];
            let left = horner(&self.pieces[i - 1], x);
            let right = horner(&self.pieces[i], x);
            worst = worst.max((left - right).abs());
        }
        worst
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_and_support() {
        // f(x) = x^2 on [-1, 0], f(x) = x^2 on [0, 1]
        let p = PiecewisePoly::new(
            vec![-1.0, 0.0, 1.0],
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]],
        );
        assert_relative_eq!(p.eval(0.5), 0.25);
        assert_relative_eq!(p.eval(-0.5), 0.25);
        assert_eq!(p.eval(1.5), 0.0);
        assert_eq!(p.eval(-1.5), 0.0);
        assert_relative_eq!(p.eval(1.0), 1.0);
    }

    #[test]
    fn derivative_coefficients() {
        let p = PiecewisePoly::new(vec![0.0, 1.0], vec![vec![1.0, 2.0, 3.0]]);
        let d = p.derivative();
        assert_relative_eq!(d.eval(0.5), 2.0 + 6.0 * 0.5);
        let d2 = p.derivative_n(2);
        assert_relative_eq!(d2.eval(0.5), 6.0);
        let d3 = p.derivative_n(3);
        assert_eq!(d3.eval(0.5), 0.0);
    }

    #[test]
    fn interior_jump() {
        let p = PiecewisePoly::new(vec![-1.0, 0.0, 1.0], vec![vec![0.0], vec![1.0]]);
        assert_relative_eq!(p.max_interior_jump(), 1.0);
    }
}
