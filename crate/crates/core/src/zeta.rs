//! Point-counting p-rank oracle for cyclic covers `y^ℓ = Π (x - α_j)^{a_j}`.
//!
//! Counts `N_i` over `F_{q^i}` by enumeration, assembles the L-polynomial with
//! Newton's identities and reads the p-rank as the degree of `P(T) mod p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    gcd, is_prime, lth_power_count, make_field, make_primitive_field, AlgebraError, Embedding,
    Field, FieldElement, Polynomial,
};
use crate::cartier::{CoeffJson, TriellipticCurve};

/// Largest extension field enumerated by default.
pub const DEFAULT_COUNT_LIMIT: u64 = 1 << 24;

/// Largest field searched for roots when splitting `p1 p2`.
const SPLITTING_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("invalid cover: {0}")]
    BadCover(String),
    #[error("field of size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: u128, limit: u64 },
    #[error("inconsistent point counts: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `Z/ℓ`-cover of the projective line, unbranched at infinity, with branch
/// points `α_j` and canonical inertia generators `a_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCover {
    l: u64,
    field: Field,
    branches: Vec<(FieldElement, u64)>,
}

impl CyclicCover {
    pub fn new(l: u64, field: &Field, branches: Vec<(FieldElement, u64)>) -> Result<Self, ZetaError> {
        if l < 3 || !is_prime(l) || l > 255 {
            return Err(ZetaError::BadCover(format!("ℓ = {l} must be an odd prime below 256")));
        }
        if field.p() as u64 == l {
            return Err(ZetaError::BadCover("characteristic equals ℓ".into()));
        }
        if branches.len() < 3 {
            return Err(ZetaError::BadCover("need at least 3 branch points".into()));
        }
        for (i, (alpha, a)) in branches.iter().enumerate() {
            if alpha.field() != field {
                return Err(ZetaError::BadCover("branch point outside the field".into()));
            }
            if *a == 0 || *a >= l {
                return Err(ZetaError::BadCover(format!("inertia label {a} not in 1..ℓ-1")));
            }
            if branches[..i].iter().any(|(b, _)| b == alpha) {
                return Err(ZetaError::BadCover("branch points must be distinct".into()));
            }
        }
        let total: u64 = branches.iter().map(|(_, a)| a).sum();
        if total % l != 0 {
            return Err(ZetaError::BadCover(format!("Σ a_j = {total} is not divisible by ℓ")));
        }
        Ok(CyclicCover {
            l,
            field: field.clone(),
            branches,
        })
    }

    /// Roots of `p1` get label 1, roots of `p2` label 2. When `p1 p2` does not
    /// split over the base field the cover is defined over the smallest
    /// extension where it does; the p-rank is unchanged by extending scalars.
    pub fn from_trielliptic(curve: &TriellipticCurve) -> Result<Self, ZetaError> {
        let base = curve.field();
        let (p, k) = (base.p(), base.k());
        let mut m = 1;
        loop {
            let big = if m == 1 { base.clone() } else { make_field(p, k * m)? };
            let size = big.order().filter(|&q| q <= SPLITTING_LIMIT).ok_or_else(|| {
                ZetaError::BadCover("p1 p2 does not split over any enumerable extension".into())
            })?;
            let emb = Embedding::find(base, &big)?;
            let lift = |f: &Polynomial| {
                Polynomial::new(&big, f.coeffs().iter().map(|c| emb.map(c)).collect())
                    .expect("same field")
            };
            let (f1, f2) = (lift(curve.p1()), lift(curve.p2()));
            let mut branches = Vec::with_capacity(curve.d1() + curve.d2());
            for idx in 0..size {
                let x = FieldElement::from_index(&big, idx);
                if f1.eval(&x).is_zero() {
                    branches.push((x, 1));
                } else if f2.eval(&x).is_zero() {
                    branches.push((x, 2));
                }
            }
            if branches.len() == curve.d1() + curve.d2() {
                return CyclicCover::new(3, &big, branches);
            }
            m += 1;
        }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn branches(&self) -> &[(FieldElement, u64)] {
        &self.branches
    }

    pub fn genus(&self) -> usize {
        (self.branches.len() - 2) * (self.l as usize - 1) / 2
    }

    pub fn q(&self) -> u64 {
        self.field.order().expect("enumerable base field")
    }

    /// The cover after `x ↦ u x + v` on every branch point.
    pub fn affine_image(&self, u: &FieldElement, v: &FieldElement) -> Result<Self, ZetaError> {
        if u.is_zero() {
            return Err(ZetaError::BadCover("u must be nonzero".into()));
        }
        let branches = self
            .branches
            .iter()
            .map(|(a, h)| (&(u * a) + v, *h))
            .collect();
        CyclicCover::new(self.l, &self.field, branches)
    }
}

/// `log(z) mod d` for every nonzero `z`, indexed by the element code, over
/// a field whose modulus has `x` as a primitive root.
struct CharTable {
    field: Field,
    chi: Vec<u8>,
}

fn char_table(p: u32, k: u32, d: u64) -> Result<Arc<CharTable>, ZetaError> {
    type Cache = Mutex<HashMap<(u32, u32, u64), Arc<CharTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&(p, k, d)) {
        return Ok(t.clone());
    }
    let field = make_primitive_field(p, k)?;
    let q = field.order().ok_or(AlgebraError::TooLarge)?;
    let m: Vec<u64> = field.modulus().expect("primitive modulus").iter().map(|&c| c as u64).collect();
    let (p64, k) = (p as u64, k as usize);
    let mut chi = vec![0u8; q as usize];
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    for e in 0..q - 1 {
        let idx = cur.iter().rev().fold(0u64, |acc, &c| acc * p64 + c);
        chi[idx as usize] = (e % d) as u8;
        // cur *= x modulo the monic modulus.
        let top = cur[k - 1];
        for t in (1..k).rev() {
            cur[t] = cur[t - 1];
        }
        cur[0] = 0;
        for t in 0..k {
            cur[t] = (cur[t] + (p64 - m[t]) * top) % p64;
        }
    }
    let table = Arc::new(CharTable { field, chi });
    cache.lock().expect("cache lock").insert((p, k as u32, d), table.clone());
    Ok(table)
}

fn extension_size(q: u64, i: u32, limit: u64) -> Result<u64, ZetaError> {
    let size = (q as u128).pow(i);
    if size > limit as u128 {
        return Err(ZetaError::TooLarge { size, limit });
    }
    Ok(size as u64)
}

/// `N_i`: points of the smooth projective model over `F_{q^i}`.
///
/// Affine fibres have one point over each branch point and
/// `#{y : y^ℓ = Π (x - α_j)^{a_j}}` points elsewhere. The branch product is
/// monic of degree divisible by ℓ, so infinity is unramified and its fibre
/// has `gcd(ℓ, q^i - 1)` rational points.
pub fn count_points(c: &CyclicCover, i: u32) -> Result<u64, ZetaError> {
    count_points_with_limit(c, i, DEFAULT_COUNT_LIMIT)
}

pub fn count_points_with_limit(c: &CyclicCover, i: u32, limit: u64) -> Result<u64, ZetaError> {
    if i == 0 {
        return Err(ZetaError::BadCover("extension degree must be positive".into()));
    }
    let size = extension_size(c.q(), i, limit)?;
    let d = gcd(c.l, size - 1);
    if d == 1 {
        // y ↦ y^ℓ is a bijection: one point over every x and at infinity.
        return Ok(size + 1);
    }
    let p = c.field.p();
    let k_big = c.field.k() * i;
    let table = char_table(p, k_big, d)?;
    let emb = Embedding::find(&c.field, &table.field)?;
    let k_big = k_big as usize;
    let p64 = p as u64;

    // idx(x - β) = lo(x_lo - β_lo) + hi(x_hi - β_hi), digitwise mod p.
    let lo_len = k_big / 2;
    let hi_len = k_big - lo_len;
    let lo_size = p64.pow(lo_len as u32);
    let hi_size = p64.pow(hi_len as u32);
    let shifted = |digits: &[u32], len: usize, size: u64, scale: u64| -> Vec<u32> {
        (0..size)
            .map(|x| {
                let mut rest = x;
                let mut out = 0u64;
                let mut place = 1u64;
                for &b in digits.iter().take(len) {
                    let xd = rest % p64;
                    rest /= p64;
                    out += ((xd + p64 - b as u64) % p64) * place;
                    place *= p64;
                }
                (out * scale) as u32
            })
            .collect()
    };
    let mut lo_tables = Vec::new();
    let mut hi_tables = Vec::new();
    let mut labels = Vec::new();
    for (alpha, a) in &c.branches {
        let beta = emb.map(alpha);
        let digits = beta.coeffs();
        lo_tables.push(shifted(&digits[..lo_len], lo_len, lo_size, 1));
        hi_tables.push(shifted(&digits[lo_len..], hi_len, hi_size, lo_size));
        labels.push(*a as u32);
    }
    let chi = &table.chi;
    let d32 = d as u32;
    let affine: u64 = (0..hi_size as usize)
        .into_par_iter()
        .map(|xh| {
            let his: Vec<u32> = hi_tables.iter().map(|t| t[xh]).collect();
            let mut total = 0u64;
            for xl in 0..lo_size as usize {
                let mut s = 0u32;
                let mut branch = false;
                for j in 0..labels.len() {
                    let idx = lo_tables[j][xl] + his[j];
                    if idx == 0 {
                        branch = true;
                        break;
                    }
                    s += labels[j] * chi[idx as usize] as u32;
                }
                total += if branch {
                    1
                } else if s % d32 == 0 {
                    d
                } else {
                    0
                };
            }
            total
        })
        .sum();
    Ok(affine + d)
}

/// Reference count straight from the fibre description, with generic field
/// arithmetic. Slow; used to cross-check [`count_points`].
pub fn count_points_naive(c: &CyclicCover, i: u32) -> Result<u64, ZetaError> {
    let size = extension_size(c.q(), i, 1 << 20)?;
    let big = make_field(c.field.p(), c.field.k() * i)?;
    let emb = Embedding::find(&c.field, &big)?;
    let betas: Vec<(FieldElement, u64)> = c.branches.iter().map(|(a, h)| (emb.map(a), *h)).collect();
    let mut total = gcd(c.l, size - 1);
    for idx in 0..size {
        let x = FieldElement::from_index(&big, idx);
        if betas.iter().any(|(b, _)| *b == x) {
            total += 1;
            continue;
        }
        let value = betas
            .iter()
            .fold(FieldElement::one(&big), |acc, (b, h)| &acc * &(&x - b).pow(*h));
        total += lth_power_count(&value, c.l);
    }
    Ok(total)
}

/// Numerator `P(T) = Σ c_i T^i` of the zeta function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub q: u64,
    pub g: usize,
    pub coeffs: Vec<i128>,
}

impl LPolynomial {
    /// Newton's identities on `S_i = q^i + 1 - N_i`, completed by the
    /// functional equation `c_{2g-i} = q^(g-i) c_i`.
    pub fn from_counts(q: u64, g: usize, counts: &[u64]) -> Result<Self, ZetaError> {
        if counts.len() < g {
            return Err(ZetaError::Inconsistent(format!("need {g} counts, got {}", counts.len())));
        }
        let q = q as i128;
        let s: Vec<i128> = (1..=g)
            .map(|i| q.pow(i as u32) + 1 - counts[i - 1] as i128)
            .collect();
        for (i, &si) in s.iter().enumerate() {
            let i = i as u32 + 1;
            if si * si > 4 * (g * g) as i128 * q.pow(i) {
                return Err(ZetaError::Inconsistent(format!("N_{i} violates the Weil bound")));
            }
        }
        let mut c = vec![0i128; 2 * g + 1];
        c[0] = 1;
        for i in 1..=g {
            let acc: i128 = (1..=i).map(|j| s[j - 1] * c[i - j]).sum();
            if acc % i as i128 != 0 {
                return Err(ZetaError::Inconsistent(format!("c_{i} is not an integer")));
            }
            c[i] = -acc / i as i128;
        }
        for i in 0..g {
            c[2 * g - i] = q.pow((g - i) as u32) * c[i];
        }
        let lp = LPolynomial {
            q: q as u64,
            g,
            coeffs: c,
        };
        if lp.eval(1) <= 0 {
            return Err(ZetaError::Inconsistent("P(1) <= 0".into()));
        }
        if g > 0 && lp.coeffs[1] * lp.coeffs[1] > 4 * (g * g) as i128 * q {
            return Err(ZetaError::Inconsistent("|c_1| > 2g sqrt(q)".into()));
        }
        Ok(lp)
    }

    pub fn eval(&self, t: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `Σ α^i` over inverse roots, for `1 <= i <= 2g`, by Newton's identities.
    pub fn power_sums(&self, upto: usize) -> Vec<i128> {
        let c = &self.coeffs;
        let coeff = |i: usize| c.get(i).copied().unwrap_or(0);
        let mut s: Vec<i128> = Vec::with_capacity(upto);
        for k in 1..=upto {
            let acc: i128 = (1..k).map(|j| s[j - 1] * coeff(k - j)).sum();
            s.push(-(k as i128) * coeff(k) - acc);
        }
        s
    }

    /// `N_i` implied by the polynomial.
    pub fn predicted_count(&self, i: usize) -> i128 {
        let s = self.power_sums(i);
        (self.q as i128).pow(i as u32) + 1 - s[i - 1]
    }

    /// Largest `i` with `p ∤ c_i`: the p-rank.
    pub fn degree_mod(&self, p: u64) -> usize {
        let p = p as i128;
        self.coeffs
            .iter()
            .rposition(|&c| c.rem_euclid(p) != 0)
            .unwrap_or(0)
    }

    /// `c_{2g-i} - q^(g-i) c_i`, summed in absolute value over `0 <= i <= g`.
    pub fn functional_equation_residual(&self) -> i128 {
        let g = self.g;
        let q = self.q as i128;
        (0..=g)
            .map(|i| (self.coeffs[2 * g - i] - q.pow((g - i) as u32) * self.coeffs[i]).abs())
            .sum()
    }
}

pub fn l_polynomial(c: &CyclicCover) -> Result<LPolynomial, ZetaError> {
    let g = c.genus();
    let counts = (1..=g as u32)
        .map(|i| count_points(c, i))
        .collect::<Result<Vec<_>, _>>()?;
    LPolynomial::from_counts(c.q(), g, &counts)
}

pub fn prank_zeta(c: &CyclicCover) -> Result<usize, ZetaError> {
    Ok(l_polynomial(c)?.degree_mod(c.field.p() as u64))
}

/// Independent check of an assembled L-polynomial against one more count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvercountCheck {
    pub degree: usize,
    pub predicted: i128,
    pub counted: u64,
    /// `c_{g+1}` from Newton's identities on the counted `N_{g+1}`, minus
    /// `q c_{g-1}` as the functional equation demands.
    pub fe_residual: i128,
}

impl OvercountCheck {
    pub fn passed(&self) -> bool {
        self.predicted == self.counted as i128 && self.fe_residual == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub g: usize,
    pub q: u64,
    pub counts: Vec<u64>,
    #[serde(rename = "L")]
    pub l_poly: Vec<i128>,
    pub prank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<OvercountCheck>,
}

/// Counts, L-polynomial and p-rank; when `q^(g+1) <= check_limit` also
/// counts `N_{g+1}` directly and compares with the prediction.
pub fn zeta_report(c: &CyclicCover, count_limit: u64, check_limit: u64) -> Result<ZetaReport, ZetaError> {
    let g = c.genus();
    let counts = (1..=g as u32)
        .map(|i| count_points_with_limit(c, i, count_limit))
        .collect::<Result<Vec<_>, _>>()?;
    let lp = LPolynomial::from_counts(c.q(), g, &counts)?;
    let next = g as u32 + 1;
    let check = match extension_size(c.q(), next, check_limit.min(count_limit)) {
        Ok(_) => {
            let counted = count_points_with_limit(c, next, count_limit)?;
            let predicted = lp.predicted_count(g + 1);
            let q = c.q() as i128;
            let mut s: Vec<i128> = (1..=g)
                .map(|i| q.pow(i as u32) + 1 - counts[i - 1] as i128)
                .collect();
            s.push(q.pow(next) + 1 - counted as i128);
            let acc: i128 = (1..=g + 1).map(|j| s[j - 1] * lp.coeffs[g + 1 - j]).sum();
            let fe_residual = if acc % (g as i128 + 1) == 0 {
                -acc / (g as i128 + 1) - q * lp.coeffs[g - 1]
            } else {
                // Non-integral c_{g+1}: report the scaled residual instead.
                -acc - (g as i128 + 1) * q * lp.coeffs[g - 1]
            };
            Some(OvercountCheck {
                degree: g + 1,
                predicted,
                counted,
                fe_residual,
            })
        }
        Err(_) => None,
    };
    Ok(ZetaReport {
        g,
        q: c.q(),
        counts,
        prank: lp.degree_mod(c.field.p() as u64),
        l_poly: lp.coeffs,
        check,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub alpha: CoeffJson,
    pub a: u64,
}

/// Cover input format `{"l", "p", "k", "branches": [{"alpha", "a"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub l: u64,
    pub p: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub branches: Vec<BranchJson>,
}

impl CoverJson {
    pub fn to_cover(&self) -> Result<CyclicCover, ZetaError> {
        let field = crate::algebra::FieldJson {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
        .to_field()?;
        let branches = self
            .branches
            .iter()
            .map(|b| Ok((b.alpha.to_element(&field)?, b.a)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        CyclicCover::new(self.l, &field, branches)
    }

    pub fn from_cover(c: &CyclicCover) -> Self {
        CoverJson {
            l: c.l,
            p: c.field.p(),
            k: c.field.k(),
            modulus: c.field.modulus().filter(|_| c.field.k() > 1).map(|m| m.to_vec()),
            branches: c
                .branches
                .iter()
                .map(|(alpha, a)| BranchJson {
                    alpha: CoeffJson::from_element(alpha),
                    a: *a,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartier::validate_curve;
    use proptest::prelude::*;

    fn cover(l: u64, p: u32, k: u32, branches: &[(u64, u64)]) -> CyclicCover {
        let f = make_field(p, k).unwrap();
        let b = branches
            .iter()
            .map(|&(i, a)| (FieldElement::from_index(&f, i), a))
            .collect();
        CyclicCover::new(l, &f, b).unwrap()
    }

    fn elliptic(p: u32) -> CyclicCover {
        cover(3, p, 1, &[(0, 1), (1, 1), (p as u64 - 1, 1)])
    }

    #[test]
    fn genus_one_counts() {
        let c = elliptic(5);
        assert_eq!(count_points(&c, 1).unwrap(), 6);
        assert_eq!(count_points(&c, 2).unwrap(), 36);
        assert_eq!(count_points_naive(&c, 1).unwrap(), 6);
        assert_eq!(count_points_naive(&c, 2).unwrap(), 36);
    }

    #[test]
    fn points_at_infinity_from_brute_force_on_projective_closure() {
        // y^3 = x^3 - x over F_7: the projective closure Y^3 = X^3 - X Z^2 is
        // smooth, so count its points directly.
        let f = make_field(7, 1).unwrap();
        let el = |v: u64| FieldElement::from_u64(&f, v);
        let mut projective = 0;
        for z in 0..2u64 {
            for x in 0..7u64 {
                for y in 0..7u64 {
                    let (xx, yy, zz) = (el(x), el(y), el(z));
                    let lhs = yy.pow(3);
                    let rhs = &xx.pow(3) - &(&xx * &zz.pow(2));
                    if lhs != rhs {
                        continue;
                    }
                    // Normalise: Z = 1 affine points, or Z = 0 with X = 1.
                    if z == 1 || (x == 1) {
                        projective += 1;
                    }
                }
            }
        }
        assert_eq!(count_points(&elliptic(7), 1).unwrap(), projective);
    }

    #[test]
    fn genus_one_l_polynomial() {
        let lp = l_polynomial(&elliptic(5)).unwrap();
        assert_eq!(lp.coeffs, vec![1, 0, 5]);
        assert_eq!(prank_zeta(&elliptic(5)).unwrap(), 0);
        assert_eq!(prank_zeta(&elliptic(7)).unwrap(), 1);
        assert_eq!(prank_zeta(&elliptic(11)).unwrap(), 0);
        assert_eq!(prank_zeta(&elliptic(13)).unwrap(), 1);
    }

    #[test]
    fn nonzero_values_contribute_zero_or_three_over_f7() {
        let c = cover(3, 7, 1, &[(0, 1), (2, 1), (5, 1)]);
        let n1 = count_points(&c, 1).unwrap();
        // 3 branch points plus 3 at infinity; other fibres have 0 or 3 points.
        assert_eq!((n1 - 6) % 3, 0);
        assert_eq!(n1, count_points_naive(&c, 1).unwrap());
    }

    #[test]
    fn fixed_curve_is_supersingular() {
        let f = make_field(5, 1).unwrap();
        let c = validate_curve(
            &f,
            &Polynomial::from_ints(&f, &[-1, 0, 1]),
            &Polynomial::from_ints(&f, &[1, 0, 1]),
        )
        .unwrap();
        let cov = CyclicCover::from_trielliptic(&c).unwrap();
        assert_eq!(cov.field().k(), 1);
        let lp = l_polynomial(&cov).unwrap();
        assert_eq!(lp.coeffs[0], 1);
        assert!(lp.coeffs[1..].iter().all(|c| c % 5 == 0));
        assert_eq!(lp.degree_mod(5), 0);
    }

    #[test]
    fn non_split_curve_moves_to_splitting_field() {
        // p1 = x^2 + x + 1 is irreducible over F_2.
        let f2 = make_field(2, 1).unwrap();
        let c = validate_curve(
            &f2,
            &Polynomial::from_ints(&f2, &[1, 1, 1]),
            &Polynomial::from_ints(&f2, &[0, 1]).mul(&Polynomial::from_ints(&f2, &[1, 1])),
        )
        .unwrap();
        let cov = CyclicCover::from_trielliptic(&c).unwrap();
        assert_eq!(cov.field().k(), 2);
        assert_eq!(cov.branches().len(), 4);
    }

    #[test]
    fn fast_and_naive_counts_agree() {
        let cases = [
            cover(3, 7, 1, &[(0, 1), (1, 1), (3, 2), (4, 2)]),
            cover(3, 2, 2, &[(0, 1), (1, 1), (2, 2), (3, 2)]),
            cover(3, 2, 3, &[(0, 1), (3, 1), (5, 1), (6, 2), (7, 2), (1, 2)]),
            cover(5, 11, 1, &[(0, 1), (1, 1), (2, 1), (3, 2)]),
            cover(5, 2, 4, &[(1, 1), (2, 1), (3, 4), (7, 4)]),
            cover(7, 2, 3, &[(0, 1), (1, 2), (2, 4)]),
            cover(3, 5, 2, &[(0, 1), (7, 2), (13, 1), (24, 2)]),
        ];
        for c in &cases {
            for i in 1..=3 {
                if c.q().pow(i) > 1 << 14 {
                    continue;
                }
                assert_eq!(
                    count_points(c, i).unwrap(),
                    count_points_naive(c, i).unwrap(),
                    "{c:?} i={i}"
                );
            }
        }
    }

    #[test]
    fn overcount_check_passes() {
        let c = cover(3, 7, 1, &[(0, 1), (1, 1), (3, 2), (4, 2)]);
        let r = zeta_report(&c, DEFAULT_COUNT_LIMIT, 1 << 22).unwrap();
        let chk = r.check.unwrap();
        assert!(chk.passed(), "{chk:?}");
        let lp = LPolynomial { q: r.q, g: r.g, coeffs: r.l_poly.clone() };
        assert_eq!(lp.functional_equation_residual(), 0);
        for (i, &n) in r.counts.iter().enumerate() {
            assert_eq!(lp.predicted_count(i + 1), n as i128);
        }
    }

    #[test]
    fn from_counts_rejects_garbage() {
        // N_1 far beyond the Weil bound.
        assert!(matches!(
            LPolynomial::from_counts(5, 1, &[40]),
            Err(ZetaError::Inconsistent(_))
        ));
        // Non-integral c_2.
        assert!(LPolynomial::from_counts(5, 2, &[6, 27]).is_err());
    }

    #[test]
    fn too_large_is_rejected() {
        let c = elliptic(5);
        assert!(matches!(
            count_points_with_limit(&c, 9, 1 << 20),
            Err(ZetaError::TooLarge { .. })
        ));
    }

    #[test]
    fn invalid_covers_rejected() {
        let f = make_field(7, 1).unwrap();
        let el = |v| FieldElement::from_u64(&f, v);
        assert!(CyclicCover::new(3, &f, vec![(el(0), 1), (el(1), 1), (el(2), 2)]).is_err());
        assert!(CyclicCover::new(3, &f, vec![(el(0), 1), (el(0), 1), (el(2), 1)]).is_err());
        assert!(CyclicCover::new(7, &f, vec![(el(0), 1), (el(1), 2), (el(2), 4)]).is_err());
        assert!(CyclicCover::new(4, &f, vec![(el(0), 1), (el(1), 1), (el(2), 2)]).is_err());
    }

    #[test]
    fn general_ell_prank_bounds() {
        use crate::moduli::{prank_profile, InertiaType};
        // ℓ = 5 covers over F_11 (e = 1) and F_2^4 (e = 4).
        for c in [
            cover(5, 11, 1, &[(0, 1), (1, 1), (2, 1), (3, 2)]),
            cover(5, 11, 1, &[(0, 1), (4, 4), (5, 2), (9, 3)]),
            cover(5, 2, 4, &[(1, 1), (2, 1), (3, 4), (7, 4)]),
        ] {
            let f = prank_zeta(&c).unwrap();
            let labels: Vec<u64> = c.branches().iter().map(|(_, a)| *a).collect();
            let t = InertiaType::from_labels(5, &labels).unwrap();
            let prof = prank_profile(c.field().p() as u64, &t).unwrap();
            assert!(f as u64 <= prof.bound);
            assert_eq!(f as u64 % prof.e, 0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn affine_substitution_preserves_prank(
            roots in proptest::sample::subsequence((0u64..13).collect::<Vec<_>>(), 4),
            u in 1u64..13, v in 0u64..13,
        ) {
            let f = make_field(13, 1).unwrap();
            let el = |i| FieldElement::from_u64(&f, i);
            let c = CyclicCover::new(
                3,
                &f,
                vec![(el(roots[0]), 1), (el(roots[1]), 1), (el(roots[2]), 2), (el(roots[3]), 2)],
            ).unwrap();
            let image = c.affine_image(&el(u), &el(v)).unwrap();
            prop_assert_eq!(prank_zeta(&c).unwrap(), prank_zeta(&image).unwrap());
            prop_assert_eq!(l_polynomial(&c).unwrap(), l_polynomial(&image).unwrap());
        }
    }

    #[test]
    fn cover_json_round_trip() {
        let c = cover(3, 2, 2, &[(0, 1), (1, 1), (2, 2), (3, 2)]);
        let j = CoverJson::from_cover(&c);
        let back: CoverJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_cover().unwrap(), c);
    }
}
