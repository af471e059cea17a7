//! Truncated bivariate power series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::factorial;
use crate::{Error, Integer, Result};

/// Largest total degree accepted by [`egf_series`].
pub const MAX_EGF_DEGREE: usize = 24;

/// `Σ c[i][j] x^i y^j` over `i + j <= max_degree`; everything of higher
/// total degree is discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    max_degree: usize,
    coeffs: Vec<Vec<BigRational>>,
}

impl BivariateSeries {
    pub fn zero(max_degree: usize) -> Self {
        let coeffs = (0..=max_degree)
            .map(|i| vec![BigRational::zero(); max_degree - i + 1])
            .collect();
        BivariateSeries { max_degree, coeffs }
    }

    pub fn constant(max_degree: usize, c: BigRational) -> Self {
        let mut s = Self::zero(max_degree);
        s.coeffs[0][0] = c;
        s
    }

    pub fn one(max_degree: usize) -> Self {
        Self::constant(max_degree, BigRational::one())
    }

    /// The monomial `x`.
    pub fn x(max_degree: usize) -> Self {
        let mut s = Self::zero(max_degree);
        if max_degree >= 1 {
            s.coeffs[1][0] = BigRational::one();
        }
        s
    }

    /// The monomial `y`.
    pub fn y(max_degree: usize) -> Self {
        let mut s = Self::zero(max_degree);
        if max_degree >= 1 {
            s.coeffs[0][1] = BigRational::one();
        }
        s
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Coefficient of `x^i y^j`; zero beyond the truncation.
    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.iter_mut().flatten() {
            *v *= c;
        }
        out
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.max_degree, other.max_degree, "series truncated at different degrees");
    }

    /// `exp(self)`; the constant term must vanish. Computed as the
    /// truncated composition `Σ_m self^m / m!`, which is exact because
    /// `self^m` starts in total degree `m`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0][0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp needs a series without constant term".into(),
            ));
        }
        let mut total = Self::one(self.max_degree);
        let mut power = Self::one(self.max_degree);
        for m in 1..=self.max_degree {
            power = &power * self;
            let inv = BigRational::new(BigInt::one(), factorial(m as u64));
            total = &total + &power.scale(&inv);
        }
        Ok(total)
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: Self) -> BivariateSeries {
        self.check_same(rhs);
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().flatten().zip(rhs.coeffs.iter().flatten()) {
            *a += b;
        }
        out
    }
}

impl Neg for &BivariateSeries {
    type Output = BivariateSeries;
    fn neg(self) -> BivariateSeries {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;
    fn sub(self, rhs: Self) -> BivariateSeries {
        self + &(-rhs)
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: Self) -> BivariateSeries {
        self.check_same(rhs);
        let d = self.max_degree;
        let mut out = BivariateSeries::zero(d);
        for (i1, row1) in self.coeffs.iter().enumerate() {
            for (j1, a) in row1.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=d - i1 - j1 {
                    for j2 in 0..=d - i1 - j1 - i2 {
                        let b = &rhs.coeffs[i2][j2];
                        if !b.is_zero() {
                            out.coeffs[i1 + i2][j1 + j2] += a * b;
                        }
                    }
                }
            }
        }
        out
    }
}

/// `e^(x + y - x e^(-y))` truncated at total degree `max_degree`.
pub fn egf_series(max_degree: usize) -> Result<BivariateSeries> {
    if max_degree > MAX_EGF_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "EGF degree {max_degree} exceeds the limit of {MAX_EGF_DEGREE}"
        )));
    }
    let x = BivariateSeries::x(max_degree);
    let y = BivariateSeries::y(max_degree);
    let exp_neg_y = (-&y).exp()?;
    let exponent = &(&x + &y) - &(&x * &exp_neg_y);
    exponent.exp()
}

/// Reads `χ_(k, n-1) = k! n! [x^k y^n]` off an exponential generating
/// series. Fails if the result is not an integer.
pub fn egf_euler(series: &BivariateSeries, k: usize, n: usize) -> Result<Integer> {
    let scaled = series.coeff(k, n) * BigRational::from_integer(factorial(k as u64) * factorial(n as u64));
    if !scaled.is_integer() {
        return Err(Error::Arithmetic(format!(
            "coefficient of x^{k} y^{n} does not give an integer: {scaled}"
        )));
    }
    Ok(scaled.to_integer())
}
