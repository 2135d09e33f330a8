//! Dense univariate polynomials over a finite field.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{ElementJson, Field, FieldElement, FieldJson};
use super::AlgebraError;

/// Polynomial with coefficients low degree first and no trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("{c:?}*x"),
                _ => format!("{c:?}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Polynomial {
    /// Builds a polynomial and trims trailing zeros.
    pub fn new(field: &Field, coeffs: Vec<FieldElement>) -> Result<Self, AlgebraError> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(Self::from_vec(field, coeffs))
    }

    fn from_vec(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Prime-field coefficients given as signed integers, low degree first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        let v = coeffs
            .iter()
            .map(|&c| FieldElement::from_i64(field, c))
            .collect();
        Self::from_vec(field, v)
    }

    pub fn zero(field: &Field) -> Self {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(&FieldElement::one(field))
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::from_vec(c.field(), vec![c.clone()])
    }

    /// `x^n`.
    pub fn monomial(field: &Field, n: usize) -> Self {
        let mut v = vec![FieldElement::zero(field); n + 1];
        v[n] = FieldElement::one(field);
        Self::from_vec(field, v)
    }

    /// `x - a`.
    pub fn linear(a: &FieldElement) -> Self {
        let f = a.field();
        Self::from_vec(f, vec![a.neg(), FieldElement::one(f)])
    }

    /// Monic product of `x - a` over the given roots.
    pub fn from_roots(field: &Field, roots: &[FieldElement]) -> Self {
        roots
            .iter()
            .fold(Self::one(field), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn try_gcd(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.gcd(other))
    }

    /// Panics on a field mismatch; see [`Self::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Self::from_vec(&self.field, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other).expect("field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Self::from_vec(&self.field, v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).expect("field mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut v = vec![FieldElement::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Self::from_vec(&self.field, v)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let v = self.coeffs.iter().map(|a| a * c).collect();
        Self::from_vec(&self.field, v)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check(d)?;
        let dd = d.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inverse()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut q = vec![FieldElement::zero(&self.field); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = &r[top] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = &r[idx] - &(&c * di);
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::from_vec(&self.field, q), Self::from_vec(&self.field, r)))
    }

    pub fn make_monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        assert!(x.field() == &self.field, "field mismatch");
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::zero(&self.field), |acc, c| &(&acc * x) + c)
    }

    pub fn try_eval(&self, x: &FieldElement) -> Result<FieldElement, AlgebraError> {
        if x.field() != &self.field {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(self.eval(x))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &FieldElement::from_u64(&self.field, i as u64))
            .collect();
        Self::from_vec(&self.field, v)
    }

    /// `gcd(f, f') = 1`; a vanishing derivative counts as not squarefree.
    pub fn is_squarefree(&self) -> Result<bool, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let d = self.derivative();
        if d.is_zero() {
            // Nonzero constants are squarefree; p-th powers are not.
            return Ok(self.degree() == Some(0));
        }
        Ok(self.gcd(&d).is_one())
    }
}

/// JSON form: `{"field": {...}, "coeffs": [[int]]}`, each coefficient as its
/// power-basis coordinates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolynomialJson {
    pub field: FieldJson,
    pub coeffs: Vec<Vec<u64>>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(f: &Polynomial) -> Self {
        PolynomialJson {
            field: FieldJson::from(&f.field),
            coeffs: f
                .coeffs
                .iter()
                .map(|c| ElementJson::from(c).coeffs)
                .collect(),
        }
    }
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Result<Polynomial, AlgebraError> {
        let field = self.field.to_field()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.iter().any(|&x| x >= field.p() as u64) {
                    return Err(AlgebraError::BadCoefficients);
                }
                FieldElement::from_coeffs(&field, c)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polynomial::new(&field, coeffs)
    }
}
