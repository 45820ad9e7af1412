use std::fmt;

use super::GroupRef;
use crate::bits::Bits;
use crate::error::{validation, Result};

/// A group homomorphism given by the image of every source element.
#[derive(Clone)]
pub struct GroupHom {
    source: GroupRef,
    target: GroupRef,
    images: Vec<u32>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {:?}", self.source.name(), self.target.name(), self.images)
    }
}

impl GroupHom {
    pub fn new(source: GroupRef, target: GroupRef, images: Vec<u32>) -> Result<GroupHom> {
        if images.len() != source.order() || images.iter().any(|&x| x as usize >= target.order()) {
            return validation("image list does not match source and target orders");
        }
        let h = GroupHom::new_unchecked(source, target, images);
        if !h.is_homomorphism() {
            return validation("map is not a homomorphism");
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: GroupRef, target: GroupRef, images: Vec<u32>) -> GroupHom {
        GroupHom { source, target, images }
    }

    pub fn identity(g: &GroupRef) -> GroupHom {
        GroupHom::new_unchecked(g.clone(), g.clone(), (0..g.order() as u32).collect())
    }

    /// The map sending everything to the identity.
    pub fn trivial(source: &GroupRef, target: &GroupRef) -> GroupHom {
        GroupHom::new_unchecked(source.clone(), target.clone(), vec![0; source.order()])
    }

    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_homomorphism(&self) -> bool {
        let g = &self.source;
        if self.images.first() != Some(&0) {
            return false;
        }
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| self.apply(g.mul(a, b)) == self.target.mul(self.apply(a), self.apply(b)))
        })
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().count() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set(&Bits::from_iter(self.source.order(), 0..self.source.order())).count() == self.target.order()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    pub fn kernel(&self) -> Bits {
        Bits::from_iter(self.source.order(), (0..self.source.order()).filter(|&x| self.images[x] == 0))
    }

    pub fn image_set(&self, set: &Bits) -> Bits {
        Bits::from_iter(self.target.order(), set.iter().map(|x| self.apply(x)))
    }

    pub fn preimage_set(&self, set: &Bits) -> Bits {
        Bits::from_iter(
            self.source.order(),
            (0..self.source.order()).filter(|&x| set.contains(self.apply(x))),
        )
    }

    /// `self ∘ first` (apply `first`, then `self`).
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        debug_assert_eq!(first.target.order(), self.source.order());
        GroupHom::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            first.images.iter().map(|&x| self.images[x as usize]).collect(),
        )
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_bijective() {
            return validation("homomorphism is not bijective");
        }
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(GroupHom::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    /// Replaces the source by an equal-table copy (used to re-anchor homs on
    /// cached group instances).
    pub fn with_groups(&self, source: GroupRef, target: GroupRef) -> GroupHom {
        debug_assert!(*source == *self.source && *target == *self.target);
        GroupHom::new_unchecked(source, target, self.images.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{direct_product, parse_group_spec};

    #[test]
    fn projection_properties() {
        let c2 = parse_group_spec("C2").unwrap();
        let c3 = parse_group_spec("C3").unwrap();
        let p = direct_product(&c2, &c3).unwrap();
        assert!(p.proj1.is_surjective() && !p.proj1.is_injective());
        assert_eq!(p.proj1.kernel().count(), 3);
        assert!(p.inj2.is_injective());
        let id = p.proj1.after(&p.inj1);
        assert_eq!(id.images(), GroupHom::identity(&c2).images());
    }

    #[test]
    fn rejects_non_homomorphism() {
        let c3 = parse_group_spec("C3").unwrap();
        assert!(GroupHom::new(c3.clone(), c3.clone(), vec![0, 1, 1]).is_err());
        assert!(GroupHom::new(c3.clone(), c3.clone(), vec![0, 2, 1]).is_ok());
    }
}
