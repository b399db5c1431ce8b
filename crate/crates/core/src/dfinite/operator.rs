use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;

/// Coefficient degree bounds `d_j` for `j = 0..=N`; `None` marks a coefficient fixed at zero.
pub type Degrees = Vec<Option<usize>>;

/// Number of unknown coefficients `Σ_j (d_j + 1)` over present coefficients.
pub fn unknowns(degs: &[Option<usize>]) -> usize {
    degs.iter().flatten().map(|d| d + 1).sum()
}

/// Degree bounds raised by `p·N` to leave room for the jump factor `∏ (x - ξ)^N`.
pub fn augment_degrees(degs: &[Option<usize>], p: usize) -> Degrees {
    let n = degs.len().saturating_sub(1);
    degs.iter().map(|d| d.map(|d| d + p * n)).collect()
}

/// `D = Σ_{j=0}^{N} p_j(x) d^j/dx^j`, normalised to unit Euclidean coefficient norm.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialOperator {
    degrees: Degrees,
    coeffs: Vec<Polynomial<f64>>,
}

impl DifferentialOperator {
    /// Builds the operator from polynomial coefficients `p_0..p_N`; each present `p_j` must
    /// fit its degree bound.
    pub fn new(degrees: Degrees, coeffs: Vec<Polynomial<f64>>) -> Result<Self> {
        if degrees.len() < 2 {
            return Err(Error::InvalidOperator("order must be at least one"));
        }
        if degrees.len() != coeffs.len() {
            return Err(Error::LengthMismatch {
                needed: degrees.len(),
                found: coeffs.len(),
            });
        }
        for (d, p) in degrees.iter().zip(&coeffs) {
            match (d, p.degree()) {
                (None, Some(_)) => return Err(Error::InvalidOperator("absent coefficient is nonzero")),
                (Some(d), Some(q)) if q > *d => {
                    return Err(Error::InvalidOperator("coefficient exceeds its degree bound"))
                }
                _ => {}
            }
        }
        if coeffs.iter().any(|p| p.coeffs().iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite);
        }
        let norm = libm::sqrt(
            coeffs
                .iter()
                .flat_map(|p| p.coeffs())
                .map(|c| c * c)
                .sum::<f64>(),
        );
        if norm == 0.0 {
            return Err(Error::InvalidOperator("all coefficients vanish"));
        }
        if coeffs[coeffs.len() - 1].max_abs() <= 1e-12 * norm {
            return Err(Error::InvalidOperator("leading coefficient vanishes"));
        }
        let coeffs = coeffs.iter().map(|p| p.scale(1.0 / norm)).collect();
        Ok(DifferentialOperator { degrees, coeffs })
    }

    /// Operator from the stacked vector `(a_{0,0}, a_{1,0}, …, a_{d_N,N})`.
    pub fn from_vector(degrees: Degrees, v: &[f64]) -> Result<Self> {
        if v.len() != unknowns(&degrees) {
            return Err(Error::LengthMismatch {
                needed: unknowns(&degrees),
                found: v.len(),
            });
        }
        let mut offset = 0;
        let coeffs = degrees
            .iter()
            .map(|d| match d {
                Some(d) => {
                    let p = Polynomial::new(v[offset..offset + d + 1].to_vec());
                    offset += d + 1;
                    p
                }
                None => Polynomial::zero(),
            })
            .collect();
        Self::new(degrees, coeffs)
    }

    /// Operator with every present coefficient bound equal to the actual degree.
    pub fn from_coeffs(coeffs: Vec<Polynomial<f64>>) -> Result<Self> {
        let degrees = coeffs
            .iter()
            .map(|p| if p.is_zero() { None } else { p.degree() })
            .collect();
        Self::new(degrees, coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degrees(&self) -> &[Option<usize>] {
        &self.degrees
    }

    pub fn coeffs(&self) -> &[Polynomial<f64>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Polynomial<f64> {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &Polynomial<f64> {
        &self.coeffs[self.order()]
    }

    /// Stacked coefficient vector matching [`DifferentialOperator::from_vector`].
    pub fn to_vector(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(unknowns(&self.degrees));
        for (d, p) in self.degrees.iter().zip(&self.coeffs) {
            if let Some(d) = d {
                out.extend((0..=*d).map(|i| p.coeffs().get(i).copied().unwrap_or(0.0)));
            }
        }
        out
    }

    /// `Σ_j p_j(x) u_j` for derivative values `u_j = u^{(j)}(x)`.
    pub fn apply(&self, x: f64, derivs: &[f64]) -> f64 {
        self.coeffs.iter().zip(derivs).map(|(p, u)| p.eval(x) * u).sum()
    }

    /// `∏ (x - ξ)^N · D`, with degree bounds raised accordingly.
    pub fn augmented(&self, jumps: &[f64]) -> Result<Self> {
        let n = self.order();
        let mut factor = Polynomial::constant(1.0);
        for &xi in jumps {
            for _ in 0..n {
                factor = &factor * &Polynomial::new(vec![-xi, 1.0]);
            }
        }
        let coeffs = self.coeffs.iter().map(|p| &factor * p).collect();
        Self::new(augment_degrees(&self.degrees, jumps.len()), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip_and_normalisation() {
        let degs = vec![Some(1), None, Some(0)];
        let op = DifferentialOperator::from_vector(degs.clone(), &[3.0, 0.0, 4.0]).unwrap();
        assert_eq!(op.order(), 2);
        for (a, b) in op.to_vector().iter().zip([0.6, 0.0, 0.8]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(op.coeff(1).is_zero());
        assert_eq!(unknowns(&degs), 3);
        assert!(matches!(
            DifferentialOperator::from_vector(vec![Some(0), Some(0)], &[1.0, 0.0]),
            Err(Error::InvalidOperator(_))
        ));
    }

    #[test]
    fn augmentation_multiplies_every_coefficient() {
        let op = DifferentialOperator::from_coeffs(vec![Polynomial::zero(), Polynomial::constant(1.0)]).unwrap();
        let aug = op.augmented(&[0.5]).unwrap();
        assert_eq!(aug.degrees(), &[None, Some(1)]);
        let lead = aug.leading().coeffs();
        assert!((lead[0] / lead[1] + 0.5).abs() < 1e-15);
        assert_eq!(augment_degrees(&[Some(0), Some(0)], 1), vec![Some(1), Some(1)]);
        assert_eq!(augment_degrees(&[Some(0), None, Some(0)], 2), vec![Some(4), None, Some(4)]);
    }
}
