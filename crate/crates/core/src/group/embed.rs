//! Injective homomorphisms out of abelian groups, described by generator
//! images and validated at construction.
//!
//! A torsion generator of order d must map to a target element of order
//! exactly d; a free generator must map to an element of infinite order.
//! Injectivity is then certified directly: the torsion subgroup is mapped
//! exhaustively and checked for collisions, and free generator images must
//! have linearly independent free parts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{AbelianElement, Element, FGAbelianSpec, Group, Order};

/// A validated injective homomorphism from an abelian domain into a target
/// group.
#[derive(Debug, Clone)]
pub struct Embedding {
    domain: FGAbelianSpec,
    target: Group,
    /// Images of the torsion generators, then of the free generators.
    images: Vec<Element>,
}

impl Embedding {
    /// Validates generator images: one per torsion factor followed by one
    /// per free generator.
    pub fn new(domain: FGAbelianSpec, target: Group, images: Vec<Element>) -> Result<Embedding> {
        let want = domain.torsion().len() + domain.free_rank();
        if images.len() != want {
            return Err(Error::NotAHomomorphism(format!(
                "expected {want} generator images, got {}",
                images.len()
            )));
        }
        for (j, &d) in domain.torsion().iter().enumerate() {
            match target.element_order(&images[j])? {
                Order::Finite(o) if o == d as u128 => {}
                o => {
                    return Err(Error::NotAHomomorphism(format!(
                        "torsion generator {j} has order {d}, its image has order {}",
                        display_order(o)
                    )))
                }
            }
        }
        for r in 0..domain.free_rank() {
            let img = &images[domain.torsion().len() + r];
            if target.element_order(img)?.is_finite() {
                return Err(Error::NotAHomomorphism(format!(
                    "free generator {r} must map to an element of infinite order"
                )));
            }
        }

        let emb = Embedding { domain, target, images };
        emb.check_injective()?;
        Ok(emb)
    }

    fn check_injective(&self) -> Result<()> {
        // torsion subgroup: map exhaustively and look for collisions
        let torsion_only =
            FGAbelianSpec::finite(self.domain.torsion().to_vec()).expect("valid factors");
        let mut seen = BTreeSet::new();
        for e in torsion_only.elements()? {
            let padded = AbelianElement {
                torsion: e.torsion,
                free: vec![BigInt::zero(); self.domain.free_rank()],
            };
            if !seen.insert(self.apply_inner(&padded)?) {
                return Err(Error::NotInjective(
                    "two torsion elements share an image".into(),
                ));
            }
        }
        // free part: images of free generators need linearly independent
        // free coordinates (their torsion components cannot rescue
        // injectivity, and elements of finite order have zero free part)
        if self.domain.free_rank() > 0 {
            let Group::Abelian(target_spec) = &self.target else {
                unreachable!("infinite-order images only exist in abelian targets")
            };
            let rows: Vec<Vec<BigInt>> = self
                .images
                .iter()
                .skip(self.domain.torsion().len())
                .map(|img| match img {
                    Element::Abelian(x) => x.free.clone(),
                    _ => unreachable!("abelian target"),
                })
                .collect();
            let rank = integer_rank(rows, target_spec.free_rank());
            if rank < self.domain.free_rank() {
                return Err(Error::NotInjective(format!(
                    "free generator images span rank {rank} < {}",
                    self.domain.free_rank()
                )));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &FGAbelianSpec {
        &self.domain
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    /// Image of a domain element.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        let Element::Abelian(x) = e else {
            return Err(Error::CarrierMismatch(format!(
                "{e:?} is not an element of the abelian domain"
            )));
        };
        if !self.domain.contains(x) {
            return Err(Error::CarrierMismatch(format!(
                "{e:?} in {}",
                Group::Abelian(self.domain.clone()).describe()
            )));
        }
        self.apply_inner(x)
    }

    fn apply_inner(&self, x: &AbelianElement) -> Result<Element> {
        let mut acc = self.target.identity();
        for (j, &c) in x.torsion.iter().enumerate() {
            let term = self.target.pow(&self.images[j], &BigInt::from(c))?;
            acc = self.target.compose(&acc, &term)?;
        }
        for (r, f) in x.free.iter().enumerate() {
            let term = self.target.pow(&self.images[self.domain.torsion().len() + r], f)?;
            acc = self.target.compose(&acc, &term)?;
        }
        Ok(acc)
    }
}

fn display_order(o: Order) -> String {
    o.to_string()
}

/// Rank of an integer matrix given as a list of rows, by fraction-free
/// Gaussian elimination.
fn integer_rank(mut rows: Vec<Vec<BigInt>>, width: usize) -> usize {
    let mut rank = 0;
    let mut col = 0;
    while col < width && rank < rows.len() {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        for row in tail {
            if !row[col].is_zero() {
                let (a, b) = (p[col].clone(), row[col].clone());
                for c in col..width {
                    row[c] = &row[c] * &a - &p[c] * &b;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(torsion: &[u64]) -> FGAbelianSpec {
        FGAbelianSpec::finite(torsion.to_vec()).unwrap()
    }

    #[test]
    fn c9_into_c18() {
        // x -> y^2
        let h = spec(&[9]);
        let g = Group::cyclic(18).unwrap();
        let emb = Embedding::new(h, g, vec![Element::abelian(vec![2], vec![])]).unwrap();
        let x3 = Element::abelian(vec![3], vec![]);
        assert_eq!(emb.apply(&x3).unwrap(), Element::abelian(vec![6], vec![]));
    }

    #[test]
    fn z_into_z_x_c5() {
        let h = FGAbelianSpec::free(1);
        let g = Group::Abelian(FGAbelianSpec::new(1, vec![5]).unwrap());
        let emb = Embedding::new(h, g, vec![Element::abelian(vec![0], vec![1])]).unwrap();
        let eight = Element::abelian(vec![], vec![8]);
        assert_eq!(emb.apply(&eight).unwrap(), Element::abelian(vec![0], vec![8]));
    }

    #[test]
    fn c3sq_into_c6_x_c12() {
        let h = spec(&[3, 3]);
        let g = Group::Abelian(spec(&[6, 12]));
        let emb = Embedding::new(
            h.clone(),
            g,
            vec![
                Element::abelian(vec![2, 0], vec![]),
                Element::abelian(vec![0, 4], vec![]),
            ],
        )
        .unwrap();
        // injectivity: all nine images distinct
        let mut seen = BTreeSet::new();
        for e in h.elements().unwrap() {
            assert!(seen.insert(emb.apply(&Element::Abelian(e)).unwrap()));
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn wrong_order_image_is_rejected() {
        // sending the generator of C9 to y^3 (order 6) is not order-preserving
        let h = spec(&[9]);
        let g = Group::cyclic(18).unwrap();
        let err =
            Embedding::new(h, g, vec![Element::abelian(vec![3], vec![])]).unwrap_err();
        assert!(matches!(err, Error::NotAHomomorphism(_)));
    }

    #[test]
    fn collision_is_rejected() {
        // C2 x C2 -> C2 sending both generators to the same involution
        let h = spec(&[2, 2]);
        let g = Group::cyclic(2).unwrap();
        let x = Element::abelian(vec![1], vec![]);
        let err = Embedding::new(h, g, vec![x.clone(), x]).unwrap_err();
        assert!(matches!(err, Error::NotInjective(_)));
    }

    #[test]
    fn dependent_free_images_are_rejected() {
        // Z^2 -> Z with both generators mapping to 1
        let h = FGAbelianSpec::free(2);
        let g = Group::Abelian(FGAbelianSpec::free(1));
        let one = Element::abelian(vec![], vec![1]);
        let err = Embedding::new(h, g, vec![one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::NotInjective(_)));
    }

    #[test]
    fn multiplicative_on_samples() {
        let h = spec(&[4, 3]);
        let g = Group::Abelian(spec(&[8, 9]));
        let emb = Embedding::new(
            h.clone(),
            g.clone(),
            vec![
                Element::abelian(vec![2, 0], vec![]),
                Element::abelian(vec![0, 3], vec![]),
            ],
        )
        .unwrap();
        let hg = Group::Abelian(h.clone());
        for e1 in h.elements().unwrap() {
            for e2 in h.elements().unwrap() {
                let lhs = emb
                    .apply(&hg.compose(&Element::Abelian(e1.clone()), &Element::Abelian(e2.clone())).unwrap())
                    .unwrap();
                let rhs = g
                    .compose(
                        &emb.apply(&Element::Abelian(e1.clone())).unwrap(),
                        &emb.apply(&Element::Abelian(e2)).unwrap(),
                    )
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
