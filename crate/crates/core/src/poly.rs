//! Integer polynomials and exact characteristic polynomials.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::{int_vec_serde, Int, IntMatrix, MatrixError};

/// Polynomial over the integers, coefficients stored lowest degree first.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "int_vec_serde")]
    coefficients: Vec<Int>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<Int>) -> Self {
        while coefficients.len() > 1 && coefficients.last().map_or(false, Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Int::zero());
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        IntPolynomial::new(coefficients.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial::new(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0].is_zero()
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> &Int {
        self.coefficients.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Largest `k` with `x^k` dividing the polynomial (0 for the zero polynomial).
    pub fn x_power(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coefficients
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// The polynomial with all factors of `x` removed.
    pub fn strip_x_factors(&self) -> IntPolynomial {
        IntPolynomial::new(self.coefficients[self.x_power()..].to_vec())
    }

    /// Whether `self` and `other` differ only by a power of `x`.
    pub fn agrees_up_to_x_power(&self, other: &IntPolynomial) -> bool {
        self.strip_x_factors() == other.strip_x_factors()
    }

    /// Evaluate at a square matrix by Horner's rule (used by the
    /// Cayley-Hamilton checks).
    pub fn eval_matrix(&self, m: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if !m.is_square() {
            return Err(MatrixError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.size();
        let mut acc = IntMatrix::zero(n, n);
        for c in self.coefficients.iter().rev() {
            acc = acc.checked_mul(m)?;
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier
/// recursion. Every division is exact over the integers, so no fractions
/// appear at any point. The result is monic of degree `|A|`.
pub fn char_poly(a: &IntMatrix) -> Result<IntPolynomial, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.size();
    let mut coeffs = vec![Int::zero(); n + 1];
    coeffs[n] = Int::one();
    let mut m = IntMatrix::identity(n);
    for k in 1..=n {
        if k > 1 {
            // M <- A*M + c_{n-k+1} * I
            m = a.checked_mul(&m)?;
            let c = coeffs[n - k + 1].clone();
            for i in 0..n {
                let v = m.get(i, i) + &c;
                m.set(i, i, v);
            }
        }
        let am = a.checked_mul(&m)?;
        let trace: Int = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs[n - k] = -trace / Int::from(k as i64);
    }
    Ok(IntPolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    #[test]
    fn one_by_one() {
        let p = char_poly(&IntMatrix::scalar(2)).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[-2, 1]));
        assert_eq!(p.to_string(), "x - 2");
    }

    #[test]
    fn rank_one_family_member() {
        // x^2 (x - 4), by cofactor expansion done by hand
        let a1 = IntMatrix::from_rows(&[&[2, 0, 4], &[1, 2, 0], &[1, 2, 0]]);
        let p = char_poly(&a1).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[0, 0, -4, 1]));
        assert_eq!(p.x_power(), 2);
    }

    #[test]
    fn strip_and_compare() {
        let p = IntPolynomial::from_i64(&[0, 0, -4, 1]);
        let q = IntPolynomial::from_i64(&[-4, 1]);
        assert!(p.agrees_up_to_x_power(&q));
        assert!(!p.agrees_up_to_x_power(&IntPolynomial::from_i64(&[-3, 1])));
    }

    #[test]
    fn cayley_hamilton_smoke() {
        let m = IntMatrix::from_rows(&[&[1, 2, 0], &[3, 0, 1], &[0, 1, 4]]);
        let p = char_poly(&m).unwrap();
        assert!(p.is_monic());
        assert_eq!(p.eval_matrix(&m).unwrap(), IntMatrix::zero(3, 3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(IntPolynomial::from_i64(&[1, 0, -2]).to_string(), "-2*x^2 + 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
