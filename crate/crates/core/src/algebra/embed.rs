//! Embeddings `F_{p^k} -> F_{p^K}` for `k | K`.

use super::field::{prime_factors, Field, FieldElement};
use super::AlgebraError;

/// Field homomorphism determined by the image of the power-basis generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Field,
    to: Field,
    /// Images of `1, x, ..., x^(k-1)`.
    basis_images: Vec<FieldElement>,
}

impl Embedding {
    /// Finds some embedding. Any choice gives Galois-conjugate images, so
    /// quantities invariant under conjugation do not depend on it.
    pub fn find(from: &Field, to: &Field) -> Result<Self, AlgebraError> {
        if from.p() != to.p() || to.k() % from.k() != 0 {
            return Err(AlgebraError::FieldMismatch);
        }
        let root = match from.modulus() {
            None => FieldElement::one(to),
            Some(m) if from.k() == 1 => FieldElement::from_u64(to, ((from.p() - m[0]) % from.p()) as u64),
            Some(m) => {
                let q_big = to.order().ok_or(AlgebraError::TooLarge)?;
                let q_small = from.order().ok_or(AlgebraError::TooLarge)?;
                let gamma = primitive_element(to)?;
                // Nonzero elements of the subfield F_{p^k} are the powers of h.
                let h = gamma.pow((q_big - 1) / (q_small - 1));
                let mut z = FieldElement::one(to);
                let mut found = None;
                for _ in 0..q_small - 1 {
                    let value = m
                        .iter()
                        .rev()
                        .fold(FieldElement::zero(to), |acc, &c| {
                            &(&acc * &z) + &FieldElement::from_u64(to, c as u64)
                        });
                    if value.is_zero() {
                        found = Some(z.clone());
                        break;
                    }
                    z = &z * &h;
                }
                found.expect("the modulus splits in every extension of its degree")
            }
        };
        let mut basis_images = Vec::with_capacity(from.k() as usize);
        let mut acc = FieldElement::one(to);
        for _ in 0..from.k() {
            basis_images.push(acc.clone());
            acc = &acc * &root;
        }
        Ok(Embedding {
            from: from.clone(),
            to: to.clone(),
            basis_images,
        })
    }

    pub fn from(&self) -> &Field {
        &self.from
    }

    pub fn to(&self) -> &Field {
        &self.to
    }

    pub fn map(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field() == &self.from, "field mismatch");
        a.coeffs()
            .iter()
            .zip(&self.basis_images)
            .fold(FieldElement::zero(&self.to), |acc, (&c, b)| {
                &acc + &(b * &FieldElement::from_u64(&self.to, c as u64))
            })
    }
}

/// A generator of the multiplicative group, trying elements in index order.
pub fn primitive_element(field: &Field) -> Result<FieldElement, AlgebraError> {
    let q = field.order().ok_or(AlgebraError::TooLarge)?;
    let factors = prime_factors(q - 1);
    let gen = FieldElement::generator(field);
    std::iter::once(gen)
        .chain((1..q).map(|i| FieldElement::from_index(field, i)))
        .find(|z| !z.is_zero() && factors.iter().all(|r| !z.pow((q - 1) / r).is_one()))
        .ok_or(AlgebraError::TooLarge)
}
