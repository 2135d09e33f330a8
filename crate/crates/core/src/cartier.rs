//! Cartier operator of a trielliptic curve `y^3 = p1(x) p2(x)^2` and its
//! p-rank as the rank of the Frobenius-twisted iterate.
//!
//! Regular differentials split into the eigenspaces
//! `L1 = <x^(j-1) dx/y : 1 <= j <= r>` and `L2 = <x^(j-1) p2(x) dx/y^2 : 1 <= j <= s>`.
//! The operator maps `L_i` into `L_σ(i)` with `σ = (1 2)` for `p ≡ 2 mod 3` and
//! `σ = id` for `p ≡ 1 mod 3`. Writing `h = Σ_t f_t(x)^p x^t`, the image of the
//! `j`-th basis vector of `L_i` is `x^⌊(j-1)/p⌋ f_{(-j mod p)}(x)` times the first
//! basis vector of `L_σ(i)`, where `h` is the polynomial attached to the target
//! eigenspace: `h_σ(i)` in the notation of [`h_polynomials`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, FieldElement, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("characteristic 3 is not supported")]
    CharacteristicThree,
    #[error("{0} is not monic")]
    NotMonic(&'static str),
    #[error("{0} is not squarefree")]
    NotSquarefree(&'static str),
    #[error("p1 and p2 are not coprime")]
    NotCoprime,
    #[error("d1 + 2 d2 = {0} is not divisible by 3")]
    DegreeCondition(usize),
    #[error("genus must be at least 1 (d1 + d2 = {0})")]
    GenusTooSmall(usize),
    #[error("p1 and p2 must live in the same field")]
    FieldMismatch,
    #[error("image of a basis differential has degree {degree} but the target eigenspace has dimension {target}")]
    DegreeFit { degree: usize, target: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Smooth trielliptic curve `y^3 = p1(x) p2(x)^2`, unbranched at infinity.
#[derive(Clone, PartialEq, Eq)]
pub struct TriellipticCurve {
    field: Field,
    p1: Polynomial,
    p2: Polynomial,
    d1: usize,
    d2: usize,
}

impl fmt::Debug for TriellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^3 = ({:?})({:?})^2 over {:?}", self.p1, self.p2, self.field)
    }
}

impl TriellipticCurve {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn p1(&self) -> &Polynomial {
        &self.p1
    }
    pub fn p2(&self) -> &Polynomial {
        &self.p2
    }
    pub fn d1(&self) -> usize {
        self.d1
    }
    pub fn d2(&self) -> usize {
        self.d2
    }
    pub fn genus(&self) -> usize {
        self.d1 + self.d2 - 2
    }
    /// `dim L1 = (d1 + 2 d2)/3 - 1`.
    pub fn r(&self) -> usize {
        (self.d1 + 2 * self.d2) / 3 - 1
    }
    /// `dim L2 = (2 d1 + d2)/3 - 1`.
    pub fn s(&self) -> usize {
        (2 * self.d1 + self.d2) / 3 - 1
    }

    /// The same curve with the roles of `p1` and `p2` exchanged
    /// (the other choice of generator of the automorphism group).
    pub fn swapped(&self) -> TriellipticCurve {
        TriellipticCurve {
            field: self.field.clone(),
            p1: self.p2.clone(),
            p2: self.p1.clone(),
            d1: self.d2,
            d2: self.d1,
        }
    }
}

pub fn validate_curve(
    field: &Field,
    p1: &Polynomial,
    p2: &Polynomial,
) -> Result<TriellipticCurve, CurveError> {
    if p1.field() != field || p2.field() != field {
        return Err(CurveError::FieldMismatch);
    }
    if field.p() == 3 {
        return Err(CurveError::CharacteristicThree);
    }
    if !p1.is_monic() {
        return Err(CurveError::NotMonic("p1"));
    }
    if !p2.is_monic() {
        return Err(CurveError::NotMonic("p2"));
    }
    if !p1.is_squarefree()? {
        return Err(CurveError::NotSquarefree("p1"));
    }
    if !p2.is_squarefree()? {
        return Err(CurveError::NotSquarefree("p2"));
    }
    if !p1.gcd(p2).is_one() {
        return Err(CurveError::NotCoprime);
    }
    let d1 = p1.degree().unwrap_or(0);
    let d2 = p2.degree().unwrap_or(0);
    if (d1 + 2 * d2) % 3 != 0 {
        return Err(CurveError::DegreeCondition(d1 + 2 * d2));
    }
    if d1 + d2 < 3 {
        return Err(CurveError::GenusTooSmall(d1 + d2));
    }
    Ok(TriellipticCurve {
        field: field.clone(),
        p1: p1.clone(),
        p2: p2.clone(),
        d1,
        d2,
    })
}

/// `(h1, h2)`: for `p ≡ 2 mod 3`,
/// `h1 = p1^((p-2)/3) p2^((2p-1)/3)` and `h2 = p1^((2p-1)/3) p2^((p-2)/3)`;
/// for `p ≡ 1 mod 3`,
/// `h1 = p1^((p-1)/3) p2^((2p-2)/3)` and `h2 = p1^((2p-2)/3) p2^((p-1)/3)`.
pub fn h_polynomials(curve: &TriellipticCurve) -> (Polynomial, Polynomial) {
    let p = curve.p() as u64;
    let (small, large) = if p % 3 == 2 {
        ((p - 2) / 3, (2 * p - 1) / 3)
    } else {
        ((p - 1) / 3, (2 * p - 2) / 3)
    };
    let h1 = curve.p1.pow(small).mul(&curve.p2.pow(large));
    let h2 = curve.p1.pow(large).mul(&curve.p2.pow(small));
    (h1, h2)
}

/// The unique `f_0, ..., f_{p-1}` with `h = Σ_t f_t(x)^p x^t`.
pub fn f_decomposition(h: &Polynomial) -> Vec<Polynomial> {
    let field = h.field();
    let p = field.p() as usize;
    let mut parts: Vec<Vec<FieldElement>> = vec![Vec::new(); p];
    for (deg, c) in h.coeffs().iter().enumerate() {
        let t = deg % p;
        let m = deg / p;
        let slot = &mut parts[t];
        if slot.len() <= m {
            slot.resize(m + 1, FieldElement::zero(field));
        }
        slot[m] = c.frobenius_inverse();
    }
    parts
        .into_iter()
        .map(|v| Polynomial::new(field, v).expect("coefficients share the field"))
        .collect()
}

/// Dense square matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    n: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            writeln!(f, "{:?}", &self.entries[i * self.n..(i + 1) * self.n])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: &Field, n: usize) -> Self {
        Matrix {
            field: field.clone(),
            n,
            entries: vec![FieldElement::zero(field); n * n],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.set(i, i, FieldElement::one(field));
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            field: field.clone(),
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: FieldElement) {
        self.entries[row * self.n + col] = v;
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zero(&self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = &out.entries[i * n + j] + &(a * b);
                        out.entries[i * n + j] = cur;
                    }
                }
            }
        }
        out
    }

    /// Entrywise `a ↦ a^(p^i)`.
    pub fn frobenius_twist(&self, i: u64) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.frobenius(i)).collect(),
        }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
                continue;
            };
            for j in 0..n {
                a.swap(pivot * n + j, rank * n + j);
            }
            let inv = a[rank * n + col].inverse().expect("nonzero pivot");
            for r in 0..n {
                if r == rank || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] * &inv;
                for j in col..n {
                    let v = &a[r * n + j] - &(&factor * &a[rank * n + j]);
                    a[r * n + j] = v;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Matrix of the Cartier operator on `L1 ⊕ L2`: column `c` holds the image
/// of basis vector `c`, with the `L1` block (size `r`) first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierMatrix {
    pub matrix: Matrix,
    pub r: usize,
    pub s: usize,
}

impl CartierMatrix {
    pub fn genus(&self) -> usize {
        self.r + self.s
    }

    /// Block anti-diagonal (`p ≡ 2 mod 3`) or block diagonal (`p ≡ 1 mod 3`).
    pub fn respects_blocks(&self, p: u32) -> bool {
        let r = self.r;
        let n = self.genus();
        let swaps = p % 3 == 2;
        (0..n).all(|row| {
            (0..n).all(|col| {
                let same = (row < r) == (col < r);
                self.matrix.get(row, col).is_zero() || same != swaps
            })
        })
    }
}

pub fn cartier_matrix(curve: &TriellipticCurve) -> Result<CartierMatrix, CurveError> {
    let p = curve.p() as usize;
    let (r, s) = (curve.r(), curve.s());
    let g = r + s;
    let field = curve.field();
    let (h1, h2) = h_polynomials(curve);
    let swaps = p % 3 == 2;
    // Target block of L1 and L2 under σ, with the h attached to that target.
    let targets = if swaps {
        [(2usize, &h2), (1usize, &h1)]
    } else {
        [(1usize, &h1), (2usize, &h2)]
    };
    let decomps = [f_decomposition(targets[0].1), f_decomposition(targets[1].1)];
    let offset = |block: usize| if block == 1 { 0 } else { r };
    let dim = |block: usize| if block == 1 { r } else { s };

    let mut m = Matrix::zero(field, g);
    for (src, &src_dim) in [r, s].iter().enumerate() {
        let (target, _) = targets[src];
        for j in 1..=src_dim {
            let t = (p - j % p) % p;
            let shift = (j - 1) / p;
            let f = &decomps[src][t];
            let Some(deg) = f.degree() else { continue };
            if deg + shift >= dim(target) {
                return Err(CurveError::DegreeFit {
                    degree: deg + shift,
                    target: dim(target),
                });
            }
            let col = offset(src + 1) + j - 1;
            for (e, c) in f.coeffs().iter().enumerate() {
                m.set(offset(target) + e + shift, col, c.clone());
            }
        }
    }
    Ok(CartierMatrix { matrix: m, r, s })
}

/// `C^(p^(n-1)) ··· C^(p) C`.
pub fn twisted_product(m: &Matrix, factors: usize) -> Matrix {
    let mut acc = m.clone();
    for i in 1..factors {
        acc = m.frobenius_twist(i as u64).mul(&acc);
    }
    acc
}

/// p-rank as the rank of the `g`-fold twisted product.
pub fn prank_cartier(m: &CartierMatrix) -> usize {
    let g = m.genus();
    if g == 0 {
        return 0;
    }
    twisted_product(&m.matrix, g).rank()
}

pub fn is_superspecial(m: &CartierMatrix) -> bool {
    m.matrix.is_zero()
}

/// Coefficient in JSON: a bare residue for prime fields, coordinates otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(u64),
    Coords(Vec<u64>),
}

impl CoeffJson {
    pub fn from_element(e: &FieldElement) -> Self {
        if e.field().k() == 1 {
            CoeffJson::Int(e.coeffs()[0] as u64)
        } else {
            CoeffJson::Coords(e.coeffs().iter().map(|&c| c as u64).collect())
        }
    }

    pub fn to_element(&self, field: &Field) -> Result<FieldElement, AlgebraError> {
        let coords: Vec<u64> = match self {
            CoeffJson::Int(c) => vec![*c],
            CoeffJson::Coords(v) => v.clone(),
        };
        if coords.iter().any(|&c| c >= field.p() as u64) {
            return Err(AlgebraError::BadCoefficients);
        }
        FieldElement::from_coeffs(field, &coords)
    }
}

pub fn poly_to_json(f: &Polynomial) -> Vec<CoeffJson> {
    f.coeffs().iter().map(CoeffJson::from_element).collect()
}

pub fn poly_from_json(field: &Field, coeffs: &[CoeffJson]) -> Result<Polynomial, AlgebraError> {
    let v = coeffs
        .iter()
        .map(|c| c.to_element(field))
        .collect::<Result<Vec<_>, _>>()?;
    Polynomial::new(field, v)
}

/// Curve input/output format `{"p", "k", "p1", "p2"}`, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub p: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub p1: Vec<CoeffJson>,
    pub p2: Vec<CoeffJson>,
}

impl CurveJson {
    pub fn from_curve(c: &TriellipticCurve) -> Self {
        CurveJson {
            p: c.field.p(),
            k: c.field.k(),
            modulus: c.field.modulus().filter(|_| c.field.k() > 1).map(|m| m.to_vec()),
            p1: poly_to_json(&c.p1),
            p2: poly_to_json(&c.p2),
        }
    }

    pub fn field(&self) -> Result<Field, AlgebraError> {
        crate::algebra::FieldJson {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
        .to_field()
    }

    pub fn to_curve(&self) -> Result<TriellipticCurve, CurveError> {
        let field = self.field()?;
        let p1 = poly_from_json(&field, &self.p1)?;
        let p2 = poly_from_json(&field, &self.p2)?;
        validate_curve(&field, &p1, &p2)
    }
}

/// Output of the Cartier route for one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierReport {
    pub g: usize,
    pub r: usize,
    pub s: usize,
    pub prank: usize,
    pub superspecial: bool,
    pub matrix: Vec<Vec<CoeffJson>>,
    /// Set when `r >= p` or `s >= p`, where the `x^⌊(j-1)/p⌋` factor is active.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub large_block: bool,
}

pub fn cartier_report(curve: &TriellipticCurve) -> Result<CartierReport, CurveError> {
    let m = cartier_matrix(curve)?;
    let p = curve.p() as usize;
    Ok(CartierReport {
        g: curve.genus(),
        r: m.r,
        s: m.s,
        prank: prank_cartier(&m),
        superspecial: is_superspecial(&m),
        matrix: m
            .matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(CoeffJson::from_element).collect())
            .collect(),
        large_block: m.r >= p || m.s >= p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use proptest::prelude::*;

    fn curve(p: u32, p1: &[i64], p2: &[i64]) -> Result<TriellipticCurve, CurveError> {
        let f = make_field(p, 1).unwrap();
        validate_curve(&f, &Polynomial::from_ints(&f, p1), &Polynomial::from_ints(&f, p2))
    }

    fn superspecial_curve(p: u32) -> TriellipticCurve {
        curve(p, &[-1, 0, 1], &[1, 0, 1]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let c = superspecial_curve(5);
        assert_eq!((c.genus(), c.r(), c.s()), (2, 1, 1));
        assert_eq!(curve(5, &[1, -2, 1], &[0, 1]), Err(CurveError::NotSquarefree("p1")));
        assert_eq!(curve(5, &[0, 1], &[1]), Err(CurveError::DegreeCondition(1)));
        assert_eq!(curve(3, &[-1, 0, 1], &[1, 0, 1]), Err(CurveError::CharacteristicThree));
        assert_eq!(curve(5, &[-1, 0, 2], &[1, 0, 1]), Err(CurveError::NotMonic("p1")));
        assert_eq!(curve(5, &[-1, 0, 1], &[-1, 1]), Err(CurveError::NotCoprime));
        assert_eq!(curve(5, &[0, 1], &[1, 1]), Err(CurveError::GenusTooSmall(2)));
    }

    #[test]
    fn h_polynomials_exponents() {
        let f5 = make_field(5, 1).unwrap();
        let c = superspecial_curve(5);
        let (h1, h2) = h_polynomials(&c);
        let a = Polynomial::from_ints(&f5, &[-1, 0, 1]);
        let b = Polynomial::from_ints(&f5, &[1, 0, 1]);
        assert_eq!(h1, a.mul(&b.pow(3)));
        assert_eq!(h2, a.pow(3).mul(&b));

        let f7 = make_field(7, 1).unwrap();
        let p2 = Polynomial::from_roots(
            &f7,
            &[2, 3, 4, 5].map(|v| FieldElement::from_u64(&f7, v)),
        );
        let c7 = validate_curve(&f7, &Polynomial::from_ints(&f7, &[-1, 1]), &p2).unwrap();
        let (h1, _) = h_polynomials(&c7);
        assert_eq!(h1, Polynomial::from_ints(&f7, &[-1, 1]).pow(2).mul(&p2.pow(4)));
    }

    /// The genus-2 curve over F_16 with `p1 = x^2+x+1`, `p2 = (x-1)(x-a)`.
    /// Smooth exactly when `a` is not 1 and not a root of `p1`.
    fn char2_curve(a_idx: u64) -> Option<TriellipticCurve> {
        let f16 = make_field(2, 4).unwrap();
        let a = FieldElement::from_index(&f16, a_idx);
        let one = FieldElement::one(&f16);
        let p1 = Polynomial::new(&f16, vec![one.clone(), one.clone(), one.clone()]).unwrap();
        let p2 = Polynomial::from_roots(&f16, &[one, a]);
        validate_curve(&f16, &p1, &p2).ok()
    }

    #[test]
    fn char2_h_polynomials_swaps() {
        let f8 = make_field(2, 3).unwrap();
        let one = FieldElement::one(&f8);
        let a = FieldElement::generator(&f8);
        let p1 = Polynomial::new(&f8, vec![one.clone(), one.clone(), one.clone()]).unwrap();
        let p2 = Polynomial::from_roots(&f8, &[one, a.clone()]);
        let c = validate_curve(&f8, &p1, &p2).unwrap();
        let (h1, h2) = h_polynomials(&c);
        assert_eq!(h1, p2);
        assert_eq!(h2, p1);
        let m = cartier_matrix(&c).unwrap();
        // Anti-diagonal: L1 -> L2 through h2 = p1 (entry 1), L2 -> L1 through
        // h1 = p2 (entry the square root of a + 1).
        assert!(m.matrix.get(0, 0).is_zero() && m.matrix.get(1, 1).is_zero());
        assert!(m.matrix.get(1, 0).is_one());
        let a1 = &a + &FieldElement::one(&f8);
        assert_eq!(m.matrix.get(0, 1).frobenius(1), a1);
        assert_eq!(prank_cartier(&m), 2);
    }

    #[test]
    fn f_decomposition_examples() {
        let f5 = make_field(5, 1).unwrap();
        let parts = f_decomposition(&Polynomial::monomial(&f5, 5));
        assert_eq!(parts[0], Polynomial::from_ints(&f5, &[0, 1]));
        assert!(parts[1..].iter().all(|p| p.is_zero()));

        let f2 = make_field(2, 1).unwrap();
        let parts = f_decomposition(&Polynomial::from_ints(&f2, &[1, 1, 1]));
        assert_eq!(parts[0], Polynomial::from_ints(&f2, &[1, 1]));
        assert_eq!(parts[1], Polynomial::from_ints(&f2, &[1]));
    }

    fn recompose(parts: &[Polynomial]) -> Polynomial {
        let field = parts[0].field().clone();
        let p = field.p() as u64;
        parts.iter().enumerate().fold(Polynomial::zero(&field), |acc, (t, f)| {
            // f(x)^p = f^(p)(x^p): raise coefficients and spread exponents.
            let mut v = vec![FieldElement::zero(&field); f.coeffs().len() * p as usize + 1];
            for (m, c) in f.coeffs().iter().enumerate() {
                v[m * p as usize] = c.frobenius(1);
            }
            let fp = Polynomial::new(&field, v).unwrap();
            acc.add(&fp.mul(&Polynomial::monomial(&field, t)))
        })
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs(coeffs in proptest::collection::vec(0i64..35, 0..40), p_sel in 0usize..2) {
            let p = [5u32, 7][p_sel];
            let f = make_field(p, 1).unwrap();
            let h = Polynomial::from_ints(&f, &coeffs);
            prop_assume!(!h.is_zero());
            prop_assert_eq!(recompose(&f_decomposition(&h)), h);
        }

        #[test]
        fn decomposition_reconstructs_over_extension(idx in proptest::collection::vec(0u64..25, 1..30)) {
            let f = make_field(5, 2).unwrap();
            let h = Polynomial::new(&f, idx.iter().map(|&i| FieldElement::from_index(&f, i)).collect()).unwrap();
            prop_assume!(!h.is_zero());
            prop_assert_eq!(recompose(&f_decomposition(&h)), h);
        }
    }

    #[test]
    fn fixed_curve_is_superspecial() {
        for p in [5u32, 11, 17, 23, 29] {
            let m = cartier_matrix(&superspecial_curve(p)).unwrap();
            assert!(is_superspecial(&m), "p = {p}");
            assert_eq!(prank_cartier(&m), 0);
        }
    }

    #[test]
    fn genus_one_curve() {
        let c = curve(5, &[0, -1, 0, 1], &[1]).unwrap();
        assert_eq!((c.r(), c.s()), (0, 1));
        let m = cartier_matrix(&c).unwrap();
        assert_eq!(m.matrix.size(), 1);
        assert!(m.matrix.is_zero());
        let c7 = curve(7, &[0, -1, 0, 1], &[1]).unwrap();
        assert_eq!(prank_cartier(&cartier_matrix(&c7).unwrap()), 1);
    }

    #[test]
    fn rank_examples() {
        let f = make_field(7, 1).unwrap();
        let id = CartierMatrix { matrix: Matrix::identity(&f, 3), r: 1, s: 2 };
        assert_eq!(prank_cartier(&id), 3);
        let z = CartierMatrix { matrix: Matrix::zero(&f, 3), r: 1, s: 2 };
        assert_eq!(prank_cartier(&z), 0);
    }

    #[test]
    fn char2_example_over_f16() {
        // a = 0 plus the 12 elements outside F_4.
        let smooth: Vec<_> = (0..16).filter_map(char2_curve).collect();
        assert_eq!(smooth.len(), 13);
        for c in smooth {
            let m = cartier_matrix(&c).unwrap();
            assert!(m.respects_blocks(2));
            assert_eq!(prank_cartier(&m), 2);
        }
    }

    /// Every genus-2 curve with split p1, p2 over F_q.
    fn genus2_curves(p: u32, k: u32) -> Vec<TriellipticCurve> {
        let f = make_field(p, k).unwrap();
        let q = f.order().unwrap();
        let el = |i| FieldElement::from_index(&f, i);
        let mut out = Vec::new();
        for a in 0..q {
            for b in a + 1..q {
                for c in 0..q {
                    for d in c + 1..q {
                        if [c, d].iter().any(|x| *x == a || *x == b) {
                            continue;
                        }
                        let p1 = Polynomial::from_roots(&f, &[el(a), el(b)]);
                        let p2 = Polynomial::from_roots(&f, &[el(c), el(d)]);
                        out.push(validate_curve(&f, &p1, &p2).unwrap());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn degree_fit_and_blocks_exhaustive_genus2() {
        for (p, k) in [(2u32, 2u32), (2, 3), (5, 1)] {
            for c in genus2_curves(p, k) {
                let m = cartier_matrix(&c).expect("degree fit");
                assert!(m.respects_blocks(p));
                let f = prank_cartier(&m);
                assert!(f <= 2);
                assert_eq!(f, prank_cartier(&cartier_matrix(&c.swapped()).unwrap()));
                // One more twisted factor leaves the rank unchanged.
                assert_eq!(twisted_product(&m.matrix, 3).rank(), f);
            }
        }
    }

    #[test]
    fn degree_fit_higher_genus() {
        let f = make_field(7, 1).unwrap();
        let el = |i| FieldElement::from_u64(&f, i);
        for (d1, d2) in [(1usize, 4usize), (4, 1), (3, 3), (5, 2), (6, 0)] {
            let roots: Vec<_> = (0..(d1 + d2) as u64).map(el).collect();
            let p1 = Polynomial::from_roots(&f, &roots[..d1]);
            let p2 = Polynomial::from_roots(&f, &roots[d1..]);
            let c = validate_curve(&f, &p1, &p2).unwrap();
            let m = cartier_matrix(&c).unwrap();
            assert!(m.respects_blocks(7));
        }
    }

    #[test]
    fn curve_json_round_trip() {
        let c = (2..16).find_map(char2_curve).unwrap();
        let j = CurveJson::from_curve(&c);
        let text = serde_json::to_string(&j).unwrap();
        let back: CurveJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_curve().unwrap(), c);
        let j5: CurveJson =
            serde_json::from_str(r#"{"p":5,"k":1,"p1":[4,0,1],"p2":[1,0,1]}"#).unwrap();
        assert_eq!(j5.to_curve().unwrap(), superspecial_curve(5));
    }
}
