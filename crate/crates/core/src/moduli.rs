//! Inertia types, signature types, the Bouw bound and p-rank bookkeeping
//! for cyclic degree-ℓ covers of the projective line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error("ℓ = {0} must be an odd prime")]
    BadEll(u64),
    #[error("p = {0} must be a prime")]
    BadPrime(u64),
    #[error("p must differ from ℓ = {0}")]
    PEqualsEll(u64),
    #[error("inertia labels must lie in 1..ℓ-1")]
    BadLabel,
    #[error("Σ h·counts(h) = {0} is not divisible by ℓ")]
    SumNotZero(u64),
    #[error("need at least 3 branch points, got {0}")]
    TooFewBranchPoints(u64),
    #[error("({0}, {1}) is not a trielliptic signature")]
    BadSignature(u64, u64),
    #[error("p-rank {f} is not admissible: {reason}")]
    Inadmissible { f: u64, reason: String },
    #[error("index {0} out of range")]
    IndexOutOfRange(u64),
}

/// Multiset of canonical inertia generators in `(Z/ℓ)^*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InertiaType {
    l: u64,
    /// `counts[h - 1]` is the multiplicity of label `h`.
    counts: Vec<u64>,
}

impl InertiaType {
    /// `counts[h - 1]` is the multiplicity of the label `h`, for `1 <= h < ℓ`.
    pub fn new(l: u64, counts: Vec<u64>) -> Result<Self, ModuliError> {
        if l < 3 || !is_prime(l) {
            return Err(ModuliError::BadEll(l));
        }
        if counts.len() as u64 != l - 1 {
            return Err(ModuliError::BadLabel);
        }
        let weighted: u64 = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum();
        if weighted % l != 0 {
            return Err(ModuliError::SumNotZero(weighted));
        }
        let n: u64 = counts.iter().sum();
        if n < 3 {
            return Err(ModuliError::TooFewBranchPoints(n));
        }
        Ok(InertiaType { l, counts })
    }

    /// Builds the type from a label list with repetition.
    pub fn from_labels(l: u64, labels: &[u64]) -> Result<Self, ModuliError> {
        if l < 3 || !is_prime(l) {
            return Err(ModuliError::BadEll(l));
        }
        let mut counts = vec![0; (l - 1) as usize];
        for &a in labels {
            if a == 0 || a >= l {
                return Err(ModuliError::BadLabel);
            }
            counts[(a - 1) as usize] += 1;
        }
        Self::new(l, counts)
    }

    /// Trielliptic type `{1 ↦ d1, 2 ↦ d2}`.
    pub fn trielliptic(d1: u64, d2: u64) -> Result<Self, ModuliError> {
        Self::new(3, vec![d1, d2])
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, h: u64) -> u64 {
        self.counts.get((h as usize).wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Number of branch points.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Labels listed with multiplicity, ascending.
    pub fn labels(&self) -> Vec<u64> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat(i as u64 + 1).take(c as usize))
            .collect()
    }

    pub fn genus(&self) -> u64 {
        genus_from_inertia(self)
    }
}

/// JSON form `{"l": int, "counts": {"1": int, ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InertiaTypeJson {
    pub l: u64,
    pub counts: BTreeMap<String, u64>,
}

impl From<&InertiaType> for InertiaTypeJson {
    fn from(t: &InertiaType) -> Self {
        InertiaTypeJson {
            l: t.l,
            counts: t
                .counts
                .iter()
                .enumerate()
                .map(|(i, &c)| ((i + 1).to_string(), c))
                .collect(),
        }
    }
}

impl InertiaTypeJson {
    pub fn to_type(&self) -> Result<InertiaType, ModuliError> {
        if self.l < 3 || !is_prime(self.l) {
            return Err(ModuliError::BadEll(self.l));
        }
        let mut counts = vec![0; (self.l - 1) as usize];
        for (key, &c) in &self.counts {
            let h: u64 = key.parse().map_err(|_| ModuliError::BadLabel)?;
            if h == 0 || h >= self.l {
                return Err(ModuliError::BadLabel);
            }
            counts[(h - 1) as usize] = c;
        }
        InertiaType::new(self.l, counts)
    }
}

/// Eigenspace dimensions `(s_1, ..., s_{ℓ-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureType {
    pub l: u64,
    pub dims: Vec<u64>,
}

impl SignatureType {
    pub fn genus(&self) -> u64 {
        self.dims.iter().sum()
    }
}

/// Order of `p` mod ℓ, the indicator `p ≡ 1 mod ℓ`, and the Bouw bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRankProfile {
    pub p: u64,
    pub l: u64,
    pub e: u64,
    pub epsilon: u64,
    /// Orbits of `i ↦ p^{-1} i` on `1..ℓ-1`, each listed from its least element.
    pub orbits: Vec<Vec<u64>>,
    pub bound: u64,
    pub g: u64,
}

pub fn genus_from_inertia(t: &InertiaType) -> u64 {
    (t.n() - 2) * (t.l - 1) / 2
}

/// All inertia types of genus `g`, lexicographic in the counts vector.
pub fn enumerate_inertia_types(l: u64, g: u64) -> Result<Vec<InertiaType>, ModuliError> {
    if l < 3 || !is_prime(l) {
        return Err(ModuliError::BadEll(l));
    }
    if (2 * g) % (l - 1) != 0 {
        return Ok(Vec::new());
    }
    let n = 2 * g / (l - 1) + 2;
    let slots = (l - 1) as usize;
    let mut out = Vec::new();
    let mut counts = vec![0u64; slots];
    compositions(n, 0, &mut counts, &mut |c| {
        let weighted: u64 = c.iter().enumerate().map(|(i, &x)| (i as u64 + 1) * x).sum();
        if weighted % l == 0 {
            out.push(InertiaType {
                l,
                counts: c.to_vec(),
            });
        }
    });
    Ok(out)
}

/// Visits every way to write `remaining` as an ordered sum over
/// `counts[pos..]`, in lexicographic order.
fn compositions(remaining: u64, pos: usize, counts: &mut [u64], visit: &mut impl FnMut(&[u64])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        compositions(remaining - c, pos + 1, counts, visit);
    }
}

/// `s_i = -1 + Σ_j ⟨i·a_j/ℓ⟩` over the branch labels `a_j`.
pub fn signature_from_inertia(t: &InertiaType) -> SignatureType {
    let l = t.l;
    let dims = (1..l)
        .map(|i| {
            // Σ_j (i·a_j mod ℓ) / ℓ is an integer by the sum condition.
            let total: u64 = t
                .counts
                .iter()
                .enumerate()
                .map(|(h, &c)| c * ((i * (h as u64 + 1)) % l))
                .sum();
            debug_assert_eq!(total % l, 0);
            total / l - 1
        })
        .collect();
    SignatureType { l, dims }
}

pub fn is_trielliptic_signature(r: u64, s: u64) -> bool {
    r.max(s) <= 2 * r.min(s) + 1
}

/// Pairs `(r, s)` with `r + s = g` and `max(r,s) <= 2 min(r,s) + 1`, ascending in `r`.
pub fn trielliptic_signatures(g: u64) -> Vec<(u64, u64)> {
    (0..=g)
        .map(|r| (r, g - r))
        .filter(|&(r, s)| is_trielliptic_signature(r, s))
        .collect()
}

/// `d1 = 2s - r + 1`, `d2 = 2r - s + 1`.
pub fn inertia_from_signature(r: u64, s: u64) -> Result<InertiaType, ModuliError> {
    if r + s == 0 || !is_trielliptic_signature(r, s) {
        return Err(ModuliError::BadSignature(r, s));
    }
    let d1 = 2 * s + 1 - r;
    let d2 = 2 * r + 1 - s;
    InertiaType::trielliptic(d1, d2)
}

/// Multiplicative order of `p` mod `l`.
pub fn multiplicative_order(p: u64, l: u64) -> u64 {
    let base = p % l;
    let mut acc = base;
    let mut e = 1;
    while acc != 1 {
        acc = acc * base % l;
        e += 1;
    }
    e
}

fn mod_inverse(a: u64, l: u64) -> u64 {
    (1..l).find(|&x| a % l * x % l == 1).expect("unit mod ℓ")
}

pub fn prank_profile(p: u64, t: &InertiaType) -> Result<PRankProfile, ModuliError> {
    let l = t.l;
    if !is_prime(p) {
        return Err(ModuliError::BadPrime(p));
    }
    if p == l {
        return Err(ModuliError::PEqualsEll(l));
    }
    let e = multiplicative_order(p, l);
    let p_inv = mod_inverse(p, l);
    let sig = signature_from_inertia(t);
    let mut seen = vec![false; l as usize];
    let mut orbits = Vec::new();
    for start in 1..l {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i as usize] {
            seen[i as usize] = true;
            orbit.push(i);
            i = i * p_inv % l;
        }
        orbits.push(orbit);
    }
    let bound = orbits
        .iter()
        .map(|o| {
            debug_assert_eq!(o.len() as u64, e);
            e * o.iter().map(|&i| sig.dims[(i - 1) as usize]).min().unwrap_or(0)
        })
        .sum();
    Ok(PRankProfile {
        p,
        l,
        e,
        epsilon: u64::from(p % l == 1),
        orbits,
        bound,
        g: genus_from_inertia(t),
    })
}

/// Outcome of [`prank_admissible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

/// Whether `f` can be the p-rank of a cover of type `t`: `0 <= f <= B`,
/// `e | f`, and `f != g - 1` unless `ℓ = 3` with `p ≡ 2 mod 3`.
pub fn prank_admissible(p: u64, t: &InertiaType, f: u64) -> Result<Admissibility, ModuliError> {
    let prof = prank_profile(p, t)?;
    Ok(admissibility(&prof, f))
}

pub fn admissibility(prof: &PRankProfile, f: u64) -> Admissibility {
    let reject = |reason: String| Admissibility {
        admissible: false,
        reason,
    };
    if f > prof.bound {
        return reject(format!("f = {f} exceeds the Bouw bound B = {}", prof.bound));
    }
    if f % prof.e != 0 {
        return reject(format!("e = {} does not divide f = {f}", prof.e));
    }
    let excludes_g_minus_1 = prof.l > 3 || prof.p % 3 == 1;
    if excludes_g_minus_1 && prof.g >= 1 && f == prof.g - 1 {
        return reject(format!("f = g - 1 = {f} is impossible for ℓ = {}, p = {}", prof.l, prof.p));
    }
    Admissibility {
        admissible: true,
        reason: "ok".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClutchKind {
    Compact,
    Noncompact,
}

/// p-rank of a clutched curve from the p-ranks of its two components.
pub fn clutch_prank(f1: u64, f2: u64, kind: ClutchKind, l: u64) -> u64 {
    match kind {
        ClutchKind::Compact => f1 + f2,
        ClutchKind::Noncompact => f1 + f2 + (l - 1),
    }
}

/// Boundary family: compact type `Δ_i` or non-compact `Ξ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "xi")]
    Xi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataPairs {
    pub pairs: Vec<(u64, u64)>,
    /// Set when the request falls outside the regime where the pair
    /// conditions describe the boundary stratum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// p-rank pairs `(f1, f2)` of the two components of a boundary curve in
/// `Δ_i` or `Ξ_i` with total p-rank `f`, keeping only pairs divisible by `e`.
pub fn strata_pairs(
    i: u64,
    g: u64,
    f: u64,
    l: u64,
    p: u64,
    kind: BoundaryKind,
) -> Result<StrataPairs, ModuliError> {
    if l < 3 || !is_prime(l) {
        return Err(ModuliError::BadEll(l));
    }
    if !is_prime(p) {
        return Err(ModuliError::BadPrime(p));
    }
    if p == l {
        return Err(ModuliError::PEqualsEll(l));
    }
    let e = multiplicative_order(p, l);
    let (cap1, cap2, total, note) = match kind {
        BoundaryKind::Delta => {
            if i < 1 || i + 1 > g {
                return Err(ModuliError::IndexOutOfRange(i));
            }
            (i, g - i, Some(f), None)
        }
        BoundaryKind::Xi => {
            if i + (l - 1) > g {
                return Err(ModuliError::IndexOutOfRange(i));
            }
            let note = if f < 2 {
                Some(format!("f = {f} < 2: non-compact strata are only described for f >= 2"))
            } else if f < l - 1 {
                Some(format!("f = {f} < ℓ - 1 = {}: no pairs can occur", l - 1))
            } else {
                None
            };
            (i, g - (l - 1) - i, f.checked_sub(l - 1), note)
        }
    };
    let pairs = match total {
        None => Vec::new(),
        Some(total) => (0..=cap1.min(total))
            .map(|f1| (f1, total - f1))
            .filter(|&(f1, f2)| f2 <= cap2 && f1 % e == 0 && f2 % e == 0)
            .collect(),
    };
    Ok(StrataPairs { pairs, note })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimBounds {
    /// Lower bound on the dimension of every component of the p-rank `f` stratum.
    pub lower: i64,
    /// Dimension `n - 3` of the space of covers of this inertia type.
    pub ambient: i64,
    /// Dimension `n - 4` of every boundary component.
    pub boundary: i64,
}

/// `lower = (n - 3) - (B - f)/e + ε`. The `ε` correction counts the missing
/// value `g - 1` between `f` and `B`, so it is applied only when `f < B`.
pub fn stratum_dim_bounds(p: u64, t: &InertiaType, f: u64) -> Result<DimBounds, ModuliError> {
    let prof = prank_profile(p, t)?;
    let adm = admissibility(&prof, f);
    if !adm.admissible {
        return Err(ModuliError::Inadmissible {
            f,
            reason: adm.reason,
        });
    }
    let ambient = t.n() as i64 - 3;
    let eps = if f < prof.bound { prof.epsilon as i64 } else { 0 };
    let lower = ambient - ((prof.bound - f) / prof.e) as i64 + eps;
    Ok(DimBounds {
        lower,
        ambient,
        boundary: ambient - 1,
    })
}

/// Trielliptic specialisation of the stratum lower bound:
/// `max(r,s) - 1 + f/2` for `p ≡ 2 mod 3`, `f` for `p ≡ 1 mod 3` and `f < g`.
pub fn trielliptic_dim_lower(p: u64, r: u64, s: u64, f: u64) -> Option<i64> {
    match p % 3 {
        2 => Some(r.max(s) as i64 - 1 + (f / 2) as i64),
        1 if f < r + s => Some(f as i64),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(d1: u64, d2: u64) -> InertiaType {
        InertiaType::trielliptic(d1, d2).unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(tri(2, 2).genus(), 2);
        assert_eq!(tri(3, 0).genus(), 1);
        assert_eq!(InertiaType::new(5, vec![3, 1, 0, 0]).unwrap().genus(), 4);
    }

    #[test]
    fn invalid_types_rejected() {
        assert_eq!(InertiaType::new(3, vec![1, 1]), Err(ModuliError::TooFewBranchPoints(2)));
        assert_eq!(InertiaType::new(3, vec![2, 0]), Err(ModuliError::SumNotZero(2)));
        assert_eq!(InertiaType::new(4, vec![1, 1, 1]), Err(ModuliError::BadEll(4)));
        assert_eq!(InertiaType::from_labels(3, &[1, 3]), Err(ModuliError::BadLabel));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_inertia_types(3, 2).unwrap(), vec![tri(2, 2)]);
        assert_eq!(enumerate_inertia_types(3, 1).unwrap(), vec![tri(0, 3), tri(3, 0)]);
        assert!(enumerate_inertia_types(5, 1).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_for_trielliptic() {
        for g in 1..=12u64 {
            let brute: Vec<InertiaType> = (0..=g + 2)
                .map(|d1| (d1, g + 2 - d1))
                .filter(|&(d1, d2)| (d1 + 2 * d2) % 3 == 0)
                .map(|(d1, d2)| tri(d1, d2))
                .collect();
            assert_eq!(enumerate_inertia_types(3, g).unwrap(), brute);
        }
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_from_inertia(&tri(2, 2)).dims, vec![1, 1]);
        assert_eq!(signature_from_inertia(&tri(3, 0)).dims, vec![0, 1]);
        let t = InertiaType::new(5, vec![3, 1, 0, 0]).unwrap();
        assert_eq!(signature_from_inertia(&t).dims, vec![0, 1, 1, 2]);
    }

    #[test]
    fn signature_sums_to_genus() {
        for l in [3u64, 5, 7] {
            for g in 1..=12 {
                for t in enumerate_inertia_types(l, g).unwrap() {
                    assert_eq!(signature_from_inertia(&t).genus(), g, "{t:?}");
                }
            }
        }
    }

    #[test]
    fn swapping_labels_swaps_signature() {
        for g in 1..=15 {
            for t in enumerate_inertia_types(3, g).unwrap() {
                let sw = tri(t.count(2), t.count(1));
                let a = signature_from_inertia(&t).dims;
                let b = signature_from_inertia(&sw).dims;
                assert_eq!((a[0], a[1]), (b[1], b[0]));
            }
        }
    }

    #[test]
    fn trielliptic_signature_lists() {
        assert_eq!(trielliptic_signatures(2), vec![(1, 1)]);
        assert_eq!(trielliptic_signatures(1), vec![(0, 1), (1, 0)]);
        assert_eq!(trielliptic_signatures(3), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn inertia_from_signature_examples() {
        assert_eq!(inertia_from_signature(1, 1).unwrap(), tri(2, 2));
        assert_eq!(inertia_from_signature(0, 1).unwrap(), tri(3, 0));
        let t = inertia_from_signature(2, 1).unwrap();
        assert_eq!(t, tri(1, 4));
        assert_eq!(signature_from_inertia(&t).dims, vec![2, 1]);
        assert_eq!(inertia_from_signature(0, 3), Err(ModuliError::BadSignature(0, 3)));
    }

    #[test]
    fn profile_examples() {
        let p5 = prank_profile(5, &tri(2, 2)).unwrap();
        assert_eq!((p5.e, p5.bound, p5.orbits.len()), (2, 2, 1));
        let p7 = prank_profile(7, &tri(2, 2)).unwrap();
        assert_eq!((p7.e, p7.bound, p7.orbits.len(), p7.epsilon), (1, 2, 2, 1));
        let t = InertiaType::new(5, vec![3, 1, 0, 0]).unwrap();
        let q = prank_profile(7, &t).unwrap();
        assert_eq!((q.e, q.bound, q.orbits.len()), (4, 0, 1));
        assert_eq!(prank_profile(3, &tri(2, 2)), Err(ModuliError::PEqualsEll(3)));
    }

    #[test]
    fn bound_properties_and_closed_forms() {
        for l in [3u64, 5, 7] {
            for g in 1..=12 {
                for t in enumerate_inertia_types(l, g).unwrap() {
                    for p in [2u64, 5, 7, 11, 13, 29, 31] {
                        if p == l {
                            continue;
                        }
                        let prof = prank_profile(p, &t).unwrap();
                        assert_eq!((l - 1) % prof.e, 0);
                        assert_eq!(prof.bound % prof.e, 0);
                        assert!(prof.bound <= g);
                        if l == 3 {
                            let sig = signature_from_inertia(&t).dims;
                            let expected = if p % 3 == 1 { g } else { 2 * sig[0].min(sig[1]) };
                            assert_eq!(prof.bound, expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        let t = tri(2, 2);
        let a = prank_admissible(5, &t, 1).unwrap();
        assert!(!a.admissible && a.reason.contains("divide"));
        let b = prank_admissible(7, &t, 1).unwrap();
        assert!(!b.admissible && b.reason.contains("g - 1"));
        assert!(prank_admissible(5, &t, 2).unwrap().admissible);
        assert!(!prank_admissible(5, &t, 4).unwrap().admissible);
        // ℓ = 3, p ≡ 2 mod 3 does not exclude g - 1 when e | g - 1.
        assert!(prank_admissible(5, &tri(1, 4), 2).unwrap().admissible);
    }

    #[test]
    fn clutching_arithmetic() {
        assert_eq!(clutch_prank(0, 0, ClutchKind::Compact, 3), 0);
        assert_eq!(clutch_prank(0, 0, ClutchKind::Noncompact, 3), 2);
        assert_eq!(clutch_prank(2, 4, ClutchKind::Noncompact, 5), 10);
    }

    #[test]
    fn strata_pair_examples() {
        let d = strata_pairs(1, 3, 2, 3, 5, BoundaryKind::Delta).unwrap();
        assert_eq!(d.pairs, vec![(0, 2)]);
        let x = strata_pairs(0, 3, 2, 3, 5, BoundaryKind::Xi).unwrap();
        assert_eq!(x.pairs, vec![(0, 0)]);
        assert_eq!(x.note, None);
        for p in [2u64, 5, 7] {
            let z = strata_pairs(1, 2, 0, 3, p, BoundaryKind::Delta).unwrap();
            assert_eq!(z.pairs, vec![(0, 0)]);
        }
        assert_eq!(
            strata_pairs(0, 3, 0, 3, 5, BoundaryKind::Delta),
            Err(ModuliError::IndexOutOfRange(0))
        );
        assert_eq!(
            strata_pairs(2, 3, 2, 3, 5, BoundaryKind::Xi),
            Err(ModuliError::IndexOutOfRange(2))
        );
        let low = strata_pairs(0, 6, 1, 3, 7, BoundaryKind::Xi).unwrap();
        assert!(low.pairs.is_empty() && low.note.is_some());
        let mid = strata_pairs(0, 6, 3, 5, 11, BoundaryKind::Xi).unwrap();
        assert!(mid.pairs.is_empty() && mid.note.is_some());
    }

    #[test]
    fn clutched_pairs_reassemble_total() {
        for g in 2..=8u64 {
            for f in 0..=g {
                for i in 1..g {
                    for (f1, f2) in strata_pairs(i, g, f, 3, 7, BoundaryKind::Delta).unwrap().pairs {
                        assert_eq!(clutch_prank(f1, f2, ClutchKind::Compact, 3), f);
                    }
                }
                for i in 0..=g.saturating_sub(2) {
                    for (f1, f2) in strata_pairs(i, g, f, 3, 7, BoundaryKind::Xi).unwrap().pairs {
                        assert_eq!(clutch_prank(f1, f2, ClutchKind::Noncompact, 3), f);
                    }
                }
            }
        }
    }

    #[test]
    fn dim_bound_examples() {
        let b = stratum_dim_bounds(5, &inertia_from_signature(1, 1).unwrap(), 0).unwrap();
        assert_eq!((b.lower, b.ambient), (0, 1));
        let b = stratum_dim_bounds(5, &inertia_from_signature(2, 2).unwrap(), 2).unwrap();
        assert_eq!((b.lower, b.ambient), (2, 3));
        assert_eq!(trielliptic_dim_lower(5, 2, 2, 2), Some(2));
        let b = stratum_dim_bounds(7, &inertia_from_signature(1, 1).unwrap(), 0).unwrap();
        assert_eq!((b.lower, b.ambient), (0, 1));
        assert!(matches!(
            stratum_dim_bounds(5, &tri(2, 2), 1),
            Err(ModuliError::Inadmissible { .. })
        ));
    }

    #[test]
    fn dim_bounds_agree_with_trielliptic_form() {
        for g in 1..=20 {
            for (r, s) in trielliptic_signatures(g) {
                let t = inertia_from_signature(r, s).unwrap();
                for p in [5u64, 7] {
                    for f in 0..=g {
                        let Ok(b) = stratum_dim_bounds(p, &t, f) else { continue };
                        match trielliptic_dim_lower(p, r, s, f) {
                            Some(lower) => assert_eq!(b.lower, lower, "p={p} r={r} s={s} f={f}"),
                            None => assert_eq!(b.lower, b.ambient),
                        }
                        assert!(b.lower <= b.ambient);
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = InertiaType::new(5, vec![3, 1, 0, 0]).unwrap();
        let j = serde_json::to_string(&InertiaTypeJson::from(&t)).unwrap();
        assert_eq!(j, r#"{"l":5,"counts":{"1":3,"2":1,"3":0,"4":0}}"#);
        let back: InertiaTypeJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_type().unwrap(), t);
    }
}
