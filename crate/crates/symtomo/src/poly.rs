//! Dense real-coefficient univariate polynomials with companion-matrix root
//! finding, for the characteristic-polynomial and common-root machinery.

use nalgebra::{Complex, DMatrix};

/// Polynomial stored by ascending-degree real coefficients. Trailing
/// near-zero coefficients are trimmed at a relative 1e−12 threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// Monic-up-to-sign product `Π (λ − rᵢ)` scaled by `lead`.
    pub fn from_roots(roots: &[f64], lead: f64) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, 1.0]));
        }
        p
    }

    fn trim(&mut self) {
        let scale = self.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
        let cut = 1e-12 * scale;
        while let Some(&last) = self.coeffs.last() {
            if last.abs() <= cut {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap_or(&0.0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn add_scaled(&self, other: &Polynomial, s: f64) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += s * c;
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// All complex roots via the eigenvalues of the companion matrix,
    /// followed by a few Newton polish steps. Degrees here stay ≤ 16, where
    /// this is robust and dependency-light.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return vec![];
        }
        let lead = self.leading();
        if d == 1 {
            return vec![Complex::new(-self.coeffs[0] / lead, 0.0)];
        }
        let mut companion = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let mut roots: Vec<Complex<f64>> = companion
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect();
        let dp = self.derivative();
        for z in roots.iter_mut() {
            for _ in 0..8 {
                let f = self.eval_complex(*z);
                let df = dp.eval_complex(*z);
                if df.norm() < 1e-300 {
                    break;
                }
                let step = f / df;
                *z -= step;
                if step.norm() < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
        }
        roots.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_and_derivative() {
        // p = 1 − 2λ + 3λ²
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_relative_eq!(p.eval(2.0), 9.0, epsilon = 1e-15);
        let dp = p.derivative();
        assert_eq!(dp.coeffs(), &[-2.0, 6.0]);
    }

    #[test]
    fn roots_of_constructed_polynomial() {
        let p = Polynomial::from_roots(&[1.0, -2.0, 3.5], 2.0);
        let roots = p.roots();
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(re[0], -2.0, epsilon = 1e-10);
        assert_relative_eq!(re[1], 1.0, epsilon = 1e-10);
        assert_relative_eq!(re[2], 3.5, epsilon = 1e-10);
        for z in roots {
            assert!(z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn repeated_roots_cluster() {
        // (λ − 2)² (λ − 5): double roots come back within ~1e−7 of 2.
        let p = Polynomial::from_roots(&[2.0, 2.0, 5.0], 1.0);
        let roots = p.roots();
        let near2 = roots.iter().filter(|z| (*z - Complex::new(2.0, 0.0)).norm() < 1e-5).count();
        assert_eq!(near2, 2);
    }

    #[test]
    fn trim_drops_tiny_leading_terms() {
        let p = Polynomial::new(vec![1.0, 1.0, 1e-15]);
        assert_eq!(p.degree(), 1);
    }
}
