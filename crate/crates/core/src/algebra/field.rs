//! Prime and extension finite fields in a power basis.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Description of `F_{p^k}`: characteristic, degree and (for `k > 1`) the
/// monic irreducible modulus, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u32,
    k: u32,
    modulus: Option<Vec<u32>>,
}

impl FieldDesc {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Monic modulus of length `k + 1`, or `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// Field size `p^k`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k)
    }
}

/// Shared handle to a field description. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "F_{}", self.0.p),
            Some(m) => write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.k, m),
        }
    }
}

impl std::ops::Deref for Field {
    type Target = FieldDesc;
    fn deref(&self) -> &FieldDesc {
        &self.0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Canonical `F_{p^k}`: power basis modulo the lexicographically least monic
/// irreducible of degree `k`, coefficients compared low degree first.
pub fn make_field(p: u32, k: u32) -> Result<Field, AlgebraError> {
    if !is_prime(p as u64) {
        return Err(AlgebraError::NotPrime(p as u64));
    }
    if k < 1 {
        return Err(AlgebraError::BadDegree(k));
    }
    if k == 1 {
        return Ok(Field(Arc::new(FieldDesc { p, k, modulus: None })));
    }
    let modulus = first_monic(p, k, |m| fp_poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree");
    Ok(Field(Arc::new(FieldDesc {
        p,
        k,
        modulus: Some(modulus),
    })))
}

/// `F_{p^k}` built on the lexicographically least monic irreducible for which
/// `x` generates the multiplicative group.
pub fn make_primitive_field(p: u32, k: u32) -> Result<Field, AlgebraError> {
    if !is_prime(p as u64) {
        return Err(AlgebraError::NotPrime(p as u64));
    }
    if k < 1 {
        return Err(AlgebraError::BadDegree(k));
    }
    let order = (p as u64)
        .checked_pow(k)
        .ok_or(AlgebraError::TooLarge)?;
    let factors = prime_factors(order - 1);
    let is_primitive = |x: &FieldElement| {
        !x.is_zero() && factors.iter().all(|r| !x.pow((order - 1) / r).is_one())
    };
    if k == 1 {
        // Modulus x - g, so the class of x is the generator g.
        let field = Field(Arc::new(FieldDesc { p, k, modulus: None }));
        let g = (1..p as u64)
            .map(|c| FieldElement::from_u64(&field, c))
            .find(|g| is_primitive(g))
            .expect("F_p* is cyclic");
        let m = vec![(p - g.coeffs()[0]) % p, 1];
        return Ok(Field(Arc::new(FieldDesc {
            p,
            k,
            modulus: Some(m),
        })));
    }
    // The norm (-1)^k m_0 of a generator generates F_p^*; checking it first
    // skips most candidates without a field exponentiation.
    let prime_field = Field(Arc::new(FieldDesc { p, k: 1, modulus: None }));
    let p_factors = prime_factors(p as u64 - 1);
    let norm_ok = |m0: u32| {
        let norm = if k % 2 == 0 { m0 } else { (p - m0) % p };
        let n = FieldElement::from_u64(&prime_field, norm as u64);
        !n.is_zero() && p_factors.iter().all(|r| !n.pow((p as u64 - 1) / r).is_one())
    };
    let modulus = first_monic(p, k, |m| {
        if !norm_ok(m[0]) || !fp_poly::is_irreducible(m, p) {
            return false;
        }
        let field = Field(Arc::new(FieldDesc {
            p,
            k,
            modulus: Some(m.to_vec()),
        }));
        is_primitive(&FieldElement::generator(&field))
    })
    .expect("primitive polynomials exist in every degree");
    Ok(Field(Arc::new(FieldDesc {
        p,
        k,
        modulus: Some(modulus),
    })))
}

/// Field with an explicit monic irreducible modulus of degree `k >= 1`.
pub fn field_with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field, AlgebraError> {
    if !is_prime(p as u64) {
        return Err(AlgebraError::NotPrime(p as u64));
    }
    let m = fp_poly::trim(modulus.into_iter().map(|c| c % p).collect());
    if m.len() < 2 || *m.last().unwrap() != 1 || !fp_poly::is_irreducible(&m, p) {
        return Err(AlgebraError::BadModulus);
    }
    let k = (m.len() - 1) as u32;
    Ok(Field(Arc::new(FieldDesc {
        p,
        k,
        modulus: Some(m),
    })))
}

fn first_monic(p: u32, k: u32, mut accept: impl FnMut(&[u32]) -> bool) -> Option<Vec<u32>> {
    // Low-degree-first lex order: c_0 is the most significant digit.
    let k = k as usize;
    let mut digits = vec![0u32; k];
    loop {
        let mut m = digits.clone();
        m.push(1);
        if accept(&m) {
            return Some(m);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Element of a finite field: coordinates in the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        FieldElement {
            field: field.clone(),
            coeffs: vec![0; field.k as usize],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_u64(field, 1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_u64(field: &Field, n: u64) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = (n % field.p as u64) as u32;
        e
    }

    pub fn from_i64(field: &Field, n: i64) -> Self {
        let p = field.p as i64;
        Self::from_u64(field, n.rem_euclid(p) as u64)
    }

    /// The class of `x` in the power basis (`x` itself for `k > 1`).
    pub fn generator(field: &Field) -> Self {
        match &field.modulus {
            None => Self::one(field),
            Some(m) if field.k == 1 => Self::from_u64(field, ((field.p - m[0]) % field.p) as u64),
            Some(_) => {
                let mut e = Self::zero(field);
                e.coeffs[1] = 1;
                e
            }
        }
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Result<Self, AlgebraError> {
        let k = field.k as usize;
        if coeffs.len() > k {
            return Err(AlgebraError::BadCoefficients);
        }
        let mut e = Self::zero(field);
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = (c % field.p as u64) as u32;
        }
        Ok(e)
    }

    /// Inverse of [`Self::index`].
    pub fn from_index(field: &Field, mut idx: u64) -> Self {
        let mut e = Self::zero(field);
        for c in e.coeffs.iter_mut() {
            *c = (idx % field.p as u64) as u32;
            idx /= field.p as u64;
        }
        e
    }

    /// Integer code `sum c_i p^i`; a bijection onto `0..q`.
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.p as u64 + c as u64)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Whether the element lies in the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
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
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let inv = other.inverse()?;
        Ok(self.mul_unchecked(&inv))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + p - b })
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p as u64;
        match &self.field.modulus {
            None => FieldElement {
                field: self.field.clone(),
                coeffs: vec![((self.coeffs[0] as u64 * other.coeffs[0] as u64) % p) as u32],
            },
            Some(m) => {
                let k = self.field.k as usize;
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &a) in self.coeffs.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &b) in other.coeffs.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
                    }
                }
                // Reduce by the monic modulus from the top down.
                for top in (k..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    prod[top] = 0;
                    for (i, &mi) in m[..k].iter().enumerate() {
                        let idx = top - k + i;
                        prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
                    }
                }
                FieldElement {
                    field: self.field.clone(),
                    coeffs: prod[..k].iter().map(|&c| c as u32).collect(),
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.field).sub_unchecked(self)
    }

    /// Square-and-multiply with a machine-word exponent.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Arbitrary-precision exponent; reduced mod `q - 1` on nonzero elements.
    pub fn pow_big(&self, n: &BigUint) -> Self {
        if n.is_zero() {
            return Self::one(&self.field);
        }
        if self.is_zero() {
            return self.clone();
        }
        match self.field.order() {
            Some(q) => {
                let r = (n % BigUint::from(q - 1)).to_u64().expect("reduced exponent fits");
                self.pow(r)
            }
            None => {
                let mut acc = Self::one(&self.field);
                for bit in (0..n.bits()).rev() {
                    acc = acc.mul_unchecked(&acc);
                    if n.bit(bit) {
                        acc = acc.mul_unchecked(self);
                    }
                }
                acc
            }
        }
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let q = self.field.order().ok_or(AlgebraError::TooLarge)?;
        Ok(self.pow(q - 2))
    }

    /// `a^(p^i)`. Frobenius has order `k`, so only `i mod k` applications run.
    pub fn frobenius(&self, i: u64) -> Self {
        let steps = i % self.field.k as u64;
        let mut out = self.clone();
        for _ in 0..steps {
            out = out.pow(self.field.p as u64);
        }
        out
    }

    /// Inverse Frobenius: the unique `b` with `b^p = a`.
    pub fn frobenius_inverse(&self) -> Self {
        let k = self.field.k as u64;
        self.frobenius(k - 1)
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

/// Number of `y` in `F_q` with `y^l = c`.
pub fn lth_power_count(c: &FieldElement, l: u64) -> u64 {
    if c.is_zero() {
        return 1;
    }
    let q = c.field().order().expect("enumerable field");
    let d = gcd(l, q - 1);
    if c.pow((q - 1) / d).is_one() {
        d
    } else {
        0
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// JSON form of a field description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub p: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl From<&Field> for FieldJson {
    fn from(f: &Field) -> Self {
        FieldJson {
            p: f.p,
            k: f.k,
            modulus: f.modulus.clone(),
        }
    }
}

impl FieldJson {
    /// Rebuilds the field; without an explicit modulus the canonical one is used.
    pub fn to_field(&self) -> Result<Field, AlgebraError> {
        match &self.modulus {
            Some(m) if self.k > 1 => {
                let f = field_with_modulus(self.p, m.clone())?;
                if f.k != self.k {
                    return Err(AlgebraError::BadModulus);
                }
                Ok(f)
            }
            _ => make_field(self.p, self.k),
        }
    }
}

/// JSON form of an element: `{"p", "k", "coeffs"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementJson {
    pub p: u32,
    pub k: u32,
    pub coeffs: Vec<u64>,
}

impl From<&FieldElement> for ElementJson {
    fn from(e: &FieldElement) -> Self {
        ElementJson {
            p: e.field.p,
            k: e.field.k,
            coeffs: e.coeffs.iter().map(|&c| c as u64).collect(),
        }
    }
}

impl ElementJson {
    pub fn to_element(&self, field: &Field) -> Result<FieldElement, AlgebraError> {
        if self.p != field.p || self.k != field.k {
            return Err(AlgebraError::FieldMismatch);
        }
        if self.coeffs.iter().any(|&c| c >= field.p as u64) {
            return Err(AlgebraError::BadCoefficients);
        }
        FieldElement::from_coeffs(field, &self.coeffs)
    }
}

/// Dense polynomials over `F_p` as plain residue vectors; only what the
/// irreducibility test needs.
pub(crate) mod fp_poly {
    pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn inv(a: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        rem(&prod.into_iter().map(|c| c as u32).collect::<Vec<_>>(), m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(p^e) mod m`.
    fn x_pow_p_pow(m: &[u32], p: u32, e: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..e {
            // cur^p by square-and-multiply
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut n = p;
            while n > 0 {
                if n & 1 == 1 {
                    acc = mulmod(&acc, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                n >>= 1;
            }
            cur = acc;
        }
        cur
    }

    fn sub_x(mut v: Vec<u32>, p: u32) -> Vec<u32> {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + p - 1) % p;
        trim(v)
    }

    /// Rabin's test for a monic `m` of degree `k >= 1`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = (m.len() - 1) as u32;
        if k == 1 {
            return true;
        }
        if m[0] == 0 {
            return false;
        }
        if !sub_x(x_pow_p_pow(m, p, k), p).is_empty() {
            return false;
        }
        super::prime_factors(k as u64).into_iter().all(|r| {
            let t = sub_x(x_pow_p_pow(m, p, k / r as u32), p);
            gcd(&t, m, p).len() == 1
        })
    }
}
